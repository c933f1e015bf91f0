//! Electrical potentials on a metric graph: effective resistance and the
//! j-function, checked against the classic closed forms on a path and a
//! circle.
//!
//! Run with: `cargo run --example potentials`

use divgraph::{effective_resistance, j_function, MetricGraph};

fn main() -> divgraph::Result<()> {
    // One edge of length 1: resistance between two points is their distance.
    let path = MetricGraph::new(&["v0", "v1"], &[("e", "v0", "v1", 1.0)])?;
    println!("path graph, one edge of length 1");
    for (a, b) in [(0.0, 1.0), (0.2, 0.7), (0.25, 0.5)] {
        let p = path.locate("e", a)?;
        let q = path.locate("e", b)?;
        let r = effective_resistance(&path, &p, &q)?;
        println!("  r(e@{a:.2}, e@{b:.2}) = {r:.6}   distance = {:.6}", b - a);
    }

    // Circle of circumference 1 (two arcs of length 1/2 in parallel):
    // two points at arc distance d have resistance d(1 - d).
    let circle =
        MetricGraph::new(&["v0", "v1"], &[("e0", "v0", "v1", 0.5), ("e1", "v0", "v1", 0.5)])?;
    println!("\ncircle graph of circumference 1");
    let v0 = circle.vertex_point("v0")?;
    for d in [0.1, 0.25, 0.4, 0.5] {
        let q = circle.locate("e0", d)?;
        let r = effective_resistance(&circle, &v0, &q)?;
        println!("  arc distance {d:.2}: r = {r:.6}   d(1-d) = {:.6}", d * (1.0 - d));
    }

    // The j-function j_q(p, .) is the potential of a unit current injected
    // at p and extracted at q: zero at q, harmonic elsewhere, and its value
    // at p is exactly the effective resistance r(p, q).
    let p = circle.locate("e0", 0.25)?;
    let j = j_function(&circle, &v0, &p)?;
    println!("\nj-function on the circle with q = v0, p = e0@0.25");
    println!("  j(q) = {:.6}", j.eval(&circle, &v0)?);
    println!("  j(p) = {:.6}   (= r(p, q))", j.eval(&circle, &p)?);
    println!("  value range [{:.6}, {:.6}]", j.min_value(), j.max_value());
    println!("  integral over the graph = {:.6}", j.integral());
    Ok(())
}
