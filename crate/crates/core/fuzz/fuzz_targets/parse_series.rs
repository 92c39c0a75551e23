#![no_main]

use libfuzzer_sys::fuzz_target;
use walkfilter::numerics::format::{parse_series, write_series};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = parse_series(data) {
        assert_eq!(parse_series(write_series(&s).as_bytes()).unwrap(), s);
    }
});
