#![no_main]

use libfuzzer_sys::fuzz_target;
use walkfilter::filter_pipeline::{parse_pseudo, write_pseudo};

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = parse_pseudo(data) {
        assert_eq!(parse_pseudo(write_pseudo(&p).as_bytes()).unwrap(), p);
    }
});
