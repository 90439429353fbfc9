#![no_main]

use libfuzzer_sys::fuzz_target;

use wmbench::bench::ConfigOverlay;

fuzz_target!(|data: &str| {
    if let Ok(overlay) = ConfigOverlay::parse(data) {
        // Assembling a full config applies defaults and validation and
        // must never panic, whatever the file said.
        let _ = overlay.into_config();
    }
});
