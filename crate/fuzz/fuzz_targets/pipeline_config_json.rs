#![no_main]

use libfuzzer_sys::fuzz_target;
use netcorr::pipeline::PipelineConfig;

fuzz_target!(|data: &[u8]| {
    if let Ok(cfg) = serde_json::from_slice::<PipelineConfig>(data) {
        let _ = cfg.detect.validate();
        let _ = cfg.detect.grid_for(50);
    }
});
