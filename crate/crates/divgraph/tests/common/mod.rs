//! Shared fixtures and sampling helpers for the acceptance suites.
//!
//! Random graphs are built as a spanning tree plus a few extra edges, so
//! they are always connected, stay at desk scale (≤ 6 vertices, ≤ 9 edges),
//! and exercise parallel edges and high-genus shapes. All randomness flows
//! through seeded ChaCha8 streams: every suite is reproducible bit for bit.

#![allow(dead_code)] // each integration test uses its own slice of this module

use divgraph::{EdgeSpec, MetricGraph, PointOnGraph, RDivisor, Tolerances};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn g_path() -> MetricGraph {
    MetricGraph::new(&["v0", "v1"], &[("e", "v0", "v1", 1.0)]).unwrap()
}

pub fn g_circle() -> MetricGraph {
    MetricGraph::new(&["v0", "v1"], &[("e0", "v0", "v1", 0.5), ("e1", "v0", "v1", 0.5)]).unwrap()
}

/// Connected random graph: spanning tree over 2..=6 vertices plus up to 3
/// extra (possibly parallel) edges, lengths in [0.3, 2.0].
pub fn random_graph(rng: &mut ChaCha8Rng) -> MetricGraph {
    let nv: usize = rng.gen_range(2..=6);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    for i in 1..nv {
        let j = rng.gen_range(0..i);
        edges.push(EdgeSpec::new(
            &format!("e{}", edges.len()),
            &vertices[j],
            &vertices[i],
            rng.gen_range(0.3..2.0),
        ));
    }
    let extra = rng.gen_range(0..=3usize);
    for _ in 0..extra {
        if edges.len() >= 9 {
            break;
        }
        let a = rng.gen_range(0..nv);
        let b = rng.gen_range(0..nv);
        if a == b {
            continue; // keep sampled coordinates on their original edge ids
        }
        edges.push(EdgeSpec::new(
            &format!("e{}", edges.len()),
            &vertices[a],
            &vertices[b],
            rng.gen_range(0.3..2.0),
        ));
    }
    let vertex_refs: Vec<String> = vertices;
    MetricGraph::build(vertex_refs, edges, Tolerances::default()).unwrap()
}

pub fn random_point(rng: &mut ChaCha8Rng, g: &MetricGraph) -> PointOnGraph {
    let edges: Vec<(String, f64)> =
        g.edge_specs().map(|(id, _, _, len)| (id.to_owned(), len)).collect();
    let (id, len) = &edges[rng.gen_range(0..edges.len())];
    g.locate(id, rng.gen_range(0.0..=1.0) * len).unwrap()
}

/// Effective divisor with 1..=max_points support points and masses in
/// [0.25, 1.5].
pub fn random_divisor(rng: &mut ChaCha8Rng, g: &MetricGraph, max_points: usize) -> RDivisor {
    let n = rng.gen_range(1..=max_points);
    let entries =
        (0..n).map(|_| (random_point(rng, g), rng.gen_range(0.25..1.5))).collect();
    RDivisor::new(g, entries).unwrap()
}

/// Random divisor rescaled to the exact degree `degree`.
pub fn random_divisor_of_degree(
    rng: &mut ChaCha8Rng,
    g: &MetricGraph,
    degree: f64,
) -> RDivisor {
    let d = random_divisor(rng, g, 3);
    d.scale(g, degree / d.degree()).unwrap()
}
