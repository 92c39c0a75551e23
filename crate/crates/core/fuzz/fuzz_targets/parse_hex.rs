#![no_main]

use libfuzzer_sys::fuzz_target;
use walkfilter::numerics::PrecisionReal;

// first byte picks the precision, the rest is the literal
fuzz_target!(|data: &[u8]| {
    let Some((&p, rest)) = data.split_first() else {
        return;
    };
    let prec = 16 + u32::from(p) * 4;
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(x) = PrecisionReal::parse_hex(text, prec) {
        assert_eq!(PrecisionReal::parse_hex(&x.to_hex(), prec).unwrap(), x);
    }
});
