#![no_main]

use gft_core::TruncatedSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = TruncatedSeries::from_json(text) {
        assert_eq!(s.coeffs().len(), s.order() + 1);
        let back = TruncatedSeries::from_json(&s.to_json()).expect("own output parses");
        assert_eq!(back, s);
    }
});
