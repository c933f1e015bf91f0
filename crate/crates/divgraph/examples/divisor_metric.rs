//! The divisor metric `rho` and the deviation integral `Phi` on effective
//! divisors of a common degree.
//!
//! `associated_function(g, d1, d2)` is the potential generated by moving the
//! mass of `d1` onto `d2`, normalized to minimum zero. Its maximum is the
//! metric `rho(d1, d2)`; its integral is the one-sided deviation
//! `Phi(d2 - d1) = s_func(g, d1, d2)`. The two sides of a pair are linked by
//! the exact identity
//!
//!   Phi(d1 - d2) + Phi(d2 - d1) = rho(d1, d2) * total_length.
//!
//! Run with: `cargo run --example divisor_metric`

use divgraph::{associated_function, rho, s_func, MetricGraph, RDivisor};

fn main() -> divgraph::Result<()> {
    // A theta graph: two vertices joined by three strands of different
    // lengths. Total length 4.5.
    let g = MetricGraph::new(
        &["v0", "v1"],
        &[("a", "v0", "v1", 1.0), ("b", "v0", "v1", 1.5), ("c", "v0", "v1", 2.0)],
    )?;

    // Three divisors of degree 2, with fractional masses allowed.
    let d1 = RDivisor::new(&g, vec![(g.locate("a", 0.3)?, 1.25), (g.locate("b", 0.2)?, 0.75)])?;
    let d2 = RDivisor::new(&g, vec![(g.locate("c", 1.1)?, 2.0)])?;
    let d3 = RDivisor::new(&g, vec![(g.vertex_point("v0")?, 1.0), (g.vertex_point("v1")?, 1.0)])?;

    let r12 = rho(&g, &d1, &d2)?;
    let r13 = rho(&g, &d1, &d3)?;
    let r23 = rho(&g, &d2, &d3)?;
    println!("pairwise distances on the theta graph");
    println!("  rho(d1, d2) = {r12:.6}");
    println!("  rho(d1, d3) = {r13:.6}");
    println!("  rho(d2, d3) = {r23:.6}");

    println!("\nmetric axioms, numerically");
    println!("  symmetry:   |rho(d1,d2) - rho(d2,d1)| = {:.2e}", (r12 - rho(&g, &d2, &d1)?).abs());
    println!("  identity:   rho(d1, d1) = {:.2e}", rho(&g, &d1, &d1)?);
    println!(
        "  triangle:   rho(d1,d3) <= rho(d1,d2) + rho(d2,d3)  ({:.6} <= {:.6})",
        r13,
        r12 + r23
    );

    // The associated function realizes the metric as a value range.
    let f = associated_function(&g, &d1, &d2)?;
    println!("\nassociated function of (d1 -> d2)");
    println!("  min = {:.6} (normalized), max = {:.6} = rho(d1, d2)", f.min_value(), f.max_value());

    // Deviations and the exact identity tying them to rho.
    let phi_12 = s_func(&g, &d1, &d2)?; // Phi(d2 - d1)
    let phi_21 = s_func(&g, &d2, &d1)?; // Phi(d1 - d2)
    let lhs = phi_12 + phi_21;
    let rhs = r12 * g.total_length();
    println!("\ndeviation identity");
    println!("  Phi(d2-d1) = {phi_12:.6}, Phi(d1-d2) = {phi_21:.6}");
    println!("  sum = {lhs:.6}, rho * total_length = {rhs:.6}, residual = {:.2e}", lhs - rhs);
    Ok(())
}
