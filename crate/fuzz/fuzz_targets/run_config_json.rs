#![no_main]

use libfuzzer_sys::fuzz_target;
use netcorr_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = RunConfig::from_json(text) {
        let _ = cfg.pipeline().detect.validate();
        let _ = cfg.bench().validate();
        let again = serde_json::to_string(&cfg).unwrap();
        RunConfig::from_json(&again).unwrap();
    }
});
