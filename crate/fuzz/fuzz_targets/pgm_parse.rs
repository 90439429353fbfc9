#![no_main]

use libfuzzer_sys::fuzz_target;

use wmbench::pixelio::{load_pgm, save_pgm};

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = load_pgm(data) {
        // Anything that parses must canonicalize and re-parse to the
        // identical image.
        let canonical = save_pgm(&img);
        let back = load_pgm(&canonical).expect("canonical streams parse");
        assert_eq!(back, img);
        assert_eq!(save_pgm(&back), canonical);
    }
});
