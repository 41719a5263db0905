#![no_main]

use conelab::graph::{parse_graph, serialize_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    if let Ok(g) = parse_graph(text) {
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }
});
