//! Tropical paths: the canonical unit-speed path `P(t)` from one divisor to
//! another, obtained by clipping the associated function at level
//! `t * rho(d1, d2)` and shifting `d1` by the Laplacian of the clipped
//! function.
//!
//! The path starts at `d1` (t = 0), ends at `d2` (t = 1), and the mass moves
//! continuously: it can split at branch points and travel along several
//! strands at fractional rates.
//!
//! Run with: `cargo run --example tropical_paths`

use divgraph::{divisors_close, rho, t_path_eval, MetricGraph, RDivisor};

fn print_divisor(g: &MetricGraph, label: &str, d: &RDivisor) {
    println!("  {label}:");
    for &(p, m) in d.entries() {
        println!("    {}  mass {:.6}", g.describe_point(&p), m);
    }
}

fn main() -> divgraph::Result<()> {
    // A circle of circumference 1. A unit of mass at v0 must reach the
    // antipodal vertex v1; by symmetry it travels both arcs at half rate.
    let g = MetricGraph::new(&["v0", "v1"], &[("e0", "v0", "v1", 0.5), ("e1", "v0", "v1", 0.5)])?;
    let d1 = RDivisor::at_vertex(&g, "v0")?;
    let d2 = RDivisor::at_vertex(&g, "v1")?;

    println!("unit mass moving between antipodes of a circle");
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let p = t_path_eval(&g, &d1, &d2, t)?;
        print_divisor(&g, &format!("P({t:.2})"), &p);
    }
    println!("  note the half masses on both arcs at intermediate times.");

    // Endpoints are exact.
    let start = t_path_eval(&g, &d1, &d2, 0.0)?;
    let end = t_path_eval(&g, &d1, &d2, 1.0)?;
    println!("\nendpoints recovered: P(0) == d1 is {}, P(1) == d2 is {}",
        divisors_close(&g, &start, &d1)?,
        divisors_close(&g, &end, &d2)?);

    // The path is parameterized at unit speed with respect to rho.
    let len = rho(&g, &d1, &d2)?;
    let p_one_third = t_path_eval(&g, &d1, &d2, 1.0 / 3.0)?;
    let traveled = rho(&g, &d1, &p_one_third)?;
    println!("\nunit speed: rho(d1, P(1/3)) = {:.6}, expected len/3 = {:.6}", traveled, len / 3.0);
    Ok(())
}
