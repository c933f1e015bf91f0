//! JSON interchange and function export: the same formats the `divgraph`
//! binary consumes and produces.
//!
//! Graphs are `{"vertices": [...], "edges": [{"id", "u", "v", "length"}]}`;
//! divisors are `{"points": [{"vertex", "mass"} | {"edge", "offset",
//! "mass"}]}`. Piecewise-linear functions can be exported as CSV samples or
//! a standalone SVG plot.
//!
//! Run with: `cargo run --example json_io`

use divgraph::io::{
    divisor_from_json, divisor_to_json, function_to_csv, graph_from_json, graph_to_json,
    load_divisor, load_graph,
};
use divgraph::{associated_function, RDivisor, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Parse a graph from its JSON description.
    let graph_doc = serde_json::from_str(
        r#"{
            "vertices": ["v0", "v1"],
            "edges": [
                {"id": "e0", "u": "v0", "v": "v1", "length": 0.5},
                {"id": "e1", "u": "v0", "v": "v1", "length": 0.5}
            ]
        }"#,
    )?;
    let g = graph_from_json(&graph_doc, Tolerances::default())?;
    println!("parsed circle graph: {} vertices, {} edges, total length {}",
        g.vertex_count(), g.edge_count(), g.total_length());

    // Divisors mix vertex points and interior points.
    let divisor_doc = serde_json::from_str(
        r#"{"points": [{"vertex": "v0", "mass": 0.5}, {"edge": "e0", "offset": 0.25, "mass": 1.5}]}"#,
    )?;
    let d = divisor_from_json(&g, &divisor_doc)?;
    println!("parsed divisor of degree {}", d.degree());

    // Round trip: divisor -> JSON -> divisor gives back the same object.
    let json = serde_json::to_string(&divisor_to_json(&g, &d))?;
    println!("serialized divisor: {json}");
    let d2 = divisor_from_json(&g, &serde_json::from_str(&json)?)?;
    println!("round trip preserves the divisor: {}", divgraph::divisors_close(&g, &d, &d2)?);

    // Graph serialization is stable too (note: emitted in the internal
    // post-normalization form, where any self-loop appears split in half).
    println!("serialized graph: {}", serde_json::to_string(&graph_to_json(&g))?);

    // The file-based loaders mirror the CLI's inputs.
    let dir = std::env::temp_dir().join("divgraph_json_io_example");
    std::fs::create_dir_all(&dir)?;
    let gpath = dir.join("graph.json");
    let dpath = dir.join("divisor.json");
    std::fs::write(&gpath, serde_json::to_string(&graph_to_json(&g))?)?;
    std::fs::write(&dpath, json)?;
    let g_loaded = load_graph(&gpath, Tolerances::default())?;
    let d_loaded = load_divisor(&dpath, &g_loaded)?;
    println!("loaded from files: degree {} on {} edges", d_loaded.degree(), g_loaded.edge_count());

    // Export the potential between two divisors as CSV samples.
    let e = RDivisor::at_vertex(&g, "v1")?.scale(&g, d.degree())?;
    let f = associated_function(&g, &d, &e)?;
    let csv = function_to_csv(&g, &f, 5)?;
    println!("\nassociated function sampled to CSV:\n{csv}");
    Ok(())
}
