//! Canonical projection onto a segment or hull, and the homotopies built
//! from it: the strong deformation retraction of a neighborhood onto the
//! target, and the contraction of a hull onto one of its members.
//!
//! Run with: `cargo run --example projection_homotopy`

use divgraph::{
    canonical_project, contraction_sample, retraction_sample, rho, target_distance,
    MetricGraph, ProjectionTarget, RDivisor, TConvexHull, TSegment,
};

fn main() -> divgraph::Result<()> {
    let g = MetricGraph::new(
        &["v0", "v1"],
        &[("a", "v0", "v1", 1.0), ("b", "v0", "v1", 1.5), ("c", "v0", "v1", 2.0)],
    )?;

    // Target: segment between masses on strands a and b.
    let d1 = RDivisor::new(&g, vec![(g.locate("a", 0.4)?, 1.0)])?;
    let d2 = RDivisor::new(&g, vec![(g.locate("b", 1.0)?, 1.0)])?;
    let target = ProjectionTarget::Segment(TSegment::new(&g, d1.clone(), d2.clone())?);

    // A divisor away from the target.
    let x = RDivisor::new(&g, vec![(g.locate("c", 1.2)?, 1.0)])?;
    let dist = target_distance(&g, &target, &x)?;
    println!("projection onto a segment");
    println!("  rho distance from x to the target: {dist:.6}");

    let px = canonical_project(&g, &target, &x)?.divisor;
    println!("  projection of x:");
    for &(p, m) in px.entries() {
        println!("    {}  mass {:.6}", g.describe_point(&p), m);
    }

    // Idempotence: projecting the projection moves nothing.
    let ppx = canonical_project(&g, &target, &px)?.divisor;
    println!("  idempotence drift: rho(P(x), P(P(x))) = {:.2e}", rho(&g, &px, &ppx)?);

    // Retraction h(t, .): at t = 0 the identity on the kappa-ball, at t = 1
    // the projection; in between, x slides along its own projection segment.
    let kappa = dist + 0.5;
    println!("\nretraction with kappa = {kappa:.3}");
    for t in [0.0, 0.5, 1.0] {
        let h = retraction_sample(&g, &target, &x, t, kappa)?;
        println!(
            "  t = {t:.1}: distance to target {:.6}, moved from x by {:.6}",
            target_distance(&g, &target, &h)?,
            rho(&g, &x, &h)?
        );
    }

    // Contraction of a hull onto a base member: every member slides toward
    // the base; at t = 1 everything sits on it.
    let hull = TConvexHull::new(&g, vec![d1.clone(), d2.clone()])?;
    let member = TSegment::new(&g, d1.clone(), d2.clone())?.eval(&g, 0.7)?;
    let kc = rho(&g, &d1, &member)? + 1e-9;
    println!("\ncontraction of the hull onto d1 (member at parameter 0.7)");
    for t in [0.0, 0.5, 1.0] {
        let c = contraction_sample(&g, &hull, &d1, &member, t, kc)?;
        println!("  t = {t:.1}: rho to base = {:.6}, rho to member = {:.6}",
            rho(&g, &c, &d1)?, rho(&g, &c, &member)?);
    }
    Ok(())
}
