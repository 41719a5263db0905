#![no_main]

use conelab::cones::parse_heights;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&size, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(heights) = parse_heights(text, size as usize) {
        assert_eq!(heights.len(), size as usize);
        assert!(heights.iter().all(|&k| k >= 1));
    }
});
