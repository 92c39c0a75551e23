#![no_main]

use libfuzzer_sys::fuzz_target;
use walkfilter::graph::parse_graph;

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = parse_graph(data) {
        assert_eq!(parse_graph(g.to_text().as_bytes()).unwrap(), g);
    }
});
