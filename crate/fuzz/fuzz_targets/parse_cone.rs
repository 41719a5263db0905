#![no_main]

use conelab::cones::{parse_graph_or_cone, serialize_cone, LoadedGraph};
use conelab::graph::serialize_graph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|text: &str| {
    match parse_graph_or_cone(text) {
        Ok(LoadedGraph::Cone(c)) => {
            assert_eq!(
                parse_graph_or_cone(&serialize_cone(&c)).unwrap(),
                LoadedGraph::Cone(c)
            );
        }
        Ok(LoadedGraph::Plain(g)) => {
            assert_eq!(
                parse_graph_or_cone(&serialize_graph(&g)).unwrap(),
                LoadedGraph::Plain(g)
            );
        }
        Err(_) => {}
    }
});
