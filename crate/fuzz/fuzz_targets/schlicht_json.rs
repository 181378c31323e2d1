#![no_main]

use gft_core::{Complex64, SchlichtSeries};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = SchlichtSeries::from_json(text) {
        assert_eq!(f.coeff(0), Complex64::new(0.0, 0.0));
        assert_eq!(f.coeff(1), Complex64::new(1.0, 0.0));
    }
});
