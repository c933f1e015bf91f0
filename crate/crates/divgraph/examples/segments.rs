//! Tropical segments: the t-path between two divisors packaged as a geodesic
//! segment that can be sampled, tested for membership, and intersected.
//!
//! A segment of length `L = rho(d1, d2)` is an isometric copy of `[0, L]`
//! inside divisor space: `rho(P(s), P(t)) = |s - t| * L`.
//!
//! Run with: `cargo run --example segments`

use divgraph::{rho, segment_contains, segment_intersection, MetricGraph, RDivisor, TSegment};

fn main() -> divgraph::Result<()> {
    // Theta graph again: enough branching for interesting geodesics.
    let g = MetricGraph::new(
        &["v0", "v1"],
        &[("a", "v0", "v1", 1.0), ("b", "v0", "v1", 1.5), ("c", "v0", "v1", 2.0)],
    )?;
    let d1 = RDivisor::new(&g, vec![(g.locate("a", 0.25)?, 1.5)])?;
    let d2 = RDivisor::new(&g, vec![(g.locate("b", 1.2)?, 1.0), (g.vertex_point("v1")?, 0.5)])?;

    let seg = TSegment::new(&g, d1.clone(), d2.clone())?;
    println!("segment between two degree-1.5 divisors");
    println!("  length = rho(d1, d2) = {:.6}", seg.length());

    // Isometry: distances along the segment are proportional to parameter
    // differences.
    println!("\nisometric parameterization");
    for (s, t) in [(0.0, 1.0), (0.2, 0.7), (0.4, 0.9)] {
        let ps = seg.eval(&g, s)?;
        let pt = seg.eval(&g, t)?;
        let d = rho(&g, &ps, &pt)?;
        println!(
            "  rho(P({s:.1}), P({t:.1})) = {:.6}   |s-t| * L = {:.6}",
            d,
            (t - s).abs() * seg.length()
        );
    }

    // Membership: sampled points lie on the segment, the far endpoint of a
    // different strand does not.
    let mid = seg.eval(&g, 0.5)?;
    let stranger = RDivisor::new(&g, vec![(g.locate("c", 1.9)?, 1.5)])?;
    println!("\nmembership");
    println!("  midpoint on segment:  {}", segment_contains(&g, &seg, &mid)?);
    println!("  unrelated divisor:    {}", segment_contains(&g, &seg, &stranger)?);

    // Intersection: a sub-segment of the original overlaps it in itself.
    let sub = TSegment::new(&g, seg.eval(&g, 0.25)?, seg.eval(&g, 0.75)?)?;
    match segment_intersection(&g, &seg, &sub)? {
        Some(common) => {
            println!("\nintersection with the [0.25, 0.75] sub-segment");
            println!("  common part has length {:.6} (sub-segment: {:.6})",
                common.length(), sub.length());
        }
        None => println!("\nno intersection found (unexpected here)"),
    }

    // Two segments that genuinely cross in one point.
    let e1 = TSegment::new(&g, RDivisor::at_vertex(&g, "v0")?, RDivisor::at_vertex(&g, "v1")?)?;
    let cross = e1.eval(&g, 0.5)?;
    let e2 = TSegment::new(&g, cross.clone(), RDivisor::new(&g, vec![(g.locate("c", 1.0)?, 1.0)])?)?;
    match segment_intersection(&g, &e1, &e2)? {
        Some(common) => println!(
            "\ncrossing segments: intersection length {:.2e} (a single point), containing P(1/2): {}",
            common.length(),
            segment_contains(&g, &common, &cross)?
        ),
        None => println!("\ncrossing segments: no intersection found (unexpected here)"),
    }
    Ok(())
}
