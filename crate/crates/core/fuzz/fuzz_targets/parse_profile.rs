#![no_main]

use libfuzzer_sys::fuzz_target;
use walkfilter::schedule::{parse_profile, validate_profile, DEFAULT_MARGIN_BITS};

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = parse_profile(data) {
        assert_eq!(parse_profile(p.to_text().as_bytes()).unwrap(), p);
        let _ = validate_profile(&p, DEFAULT_MARGIN_BITS);
        let _ = p.desk_params();
    }
});
