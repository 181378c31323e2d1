#![no_main]

use gft_core::parse::{parse_int_list, parse_real_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_real_list(text) {
        assert!(!values.is_empty());
        assert!(values.iter().all(|v| v.is_finite()));
    }
    if let Ok(values) = parse_int_list(text) {
        assert_eq!(values.len(), text.split(',').count());
    }
});
