//! Tropical convex hulls: membership by the covering criterion and the
//! extremal-generator computation.
//!
//! A divisor `e` belongs to the hull of generators `D1..Dn` exactly when the
//! min-sets of the associated functions from `e` toward the generators cover
//! the whole graph. Extremal generators are those not contained in the hull
//! of the others; pruning to extremals preserves the hull.
//!
//! Run with: `cargo run --example hulls_extremals`

use divgraph::{
    extremals, hull_contains, reduced_on_hull, rho, MetricGraph, RDivisor, TConvexHull, TSegment,
};

fn main() -> divgraph::Result<()> {
    let g = MetricGraph::new(
        &["v0", "v1"],
        &[("a", "v0", "v1", 1.0), ("b", "v0", "v1", 1.5), ("c", "v0", "v1", 2.0)],
    )?;

    // Three independent generators of degree 1.
    let g1 = RDivisor::at_vertex(&g, "v0")?;
    let g2 = RDivisor::new(&g, vec![(g.locate("b", 0.9)?, 1.0)])?;
    let g3 = RDivisor::new(&g, vec![(g.locate("c", 1.5)?, 1.0)])?;
    let hull = TConvexHull::new(&g, vec![g1.clone(), g2.clone(), g3.clone()])?;

    println!("hull with three generators");
    println!("  generators themselves are members:");
    for (i, gen) in hull.generators().iter().enumerate() {
        println!("    g{} in hull: {}", i + 1, hull_contains(&g, &hull, gen)?);
    }

    // Points of generator-to-generator segments are members; a mass far out
    // on strand c is not.
    let seg = TSegment::new(&g, g1.clone(), g2.clone())?;
    let mid = seg.eval(&g, 0.4)?;
    let outsider = RDivisor::new(&g, vec![(g.locate("a", 0.5)?, 1.0)])?;
    println!("  segment point P(0.4) between g1 and g2 in hull: {}", hull_contains(&g, &hull, &mid)?);
    println!("  unrelated point on strand a in hull: {}", hull_contains(&g, &hull, &outsider)?);

    // How far away is the outsider? Project it onto the hull.
    let proj = reduced_on_hull(&g, &hull, &outsider)?;
    println!(
        "  distance from the outsider to the hull: rho = {:.6}, Phi = {:.6}",
        rho(&g, &outsider, &proj.divisor)?,
        proj.objective
    );

    // Plant a redundant generator: a point of the hull itself. Extremal
    // pruning removes exactly that one.
    let redundant = TSegment::new(&g, g2.clone(), g3.clone())?.eval(&g, 0.35)?;
    let padded = TConvexHull::new(&g, vec![g1, g2, g3, redundant])?;
    let pruned = extremals(&g, &padded)?;
    println!("\nextremal pruning");
    println!("  padded hull has {} generators, pruned hull has {}", padded.len(), pruned.len());

    // The pruned hull still contains everything the padded hull generated.
    let all_kept = padded
        .generators()
        .iter()
        .map(|d| hull_contains(&g, &pruned, d))
        .collect::<divgraph::Result<Vec<_>>>()?;
    println!("  all original generators remain members: {}", all_kept.iter().all(|&b| b));
    Ok(())
}
