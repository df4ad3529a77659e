#![no_main]

use libfuzzer_sys::fuzz_target;
use netcorr::data::parse_csv;

fuzz_target!(|data: &[u8]| {
    let Some((&flag, body)) = data.split_first() else {
        return;
    };
    if let Ok(m) = parse_csv(body, flag & 1 == 1) {
        assert_eq!(m.column_names().len(), m.p());
        assert!(m.values().iter().all(|v| v.is_finite()));
    }
});
