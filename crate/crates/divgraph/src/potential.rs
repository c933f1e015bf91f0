//! Potential theory on a metric graph: the Laplacian solver behind the
//! j-function, effective resistance, and the function associated with a pair
//! of divisors.
//!
//! For divisors `D1`, `D2` of equal degree, the associated function `f`
//! solves the Poisson problem `Δf = δ_{D2} - δ_{D1}`: it is harmonic (affine)
//! away from the supports, and at every point its incoming kink equals the
//! local mass difference. Concretely, the graph is refined by inserting the
//! interior support points as temporary vertices, the vertex Laplacian with
//! conductances `1/length` is assembled on the refinement, one vertex is
//! grounded, and the reduced symmetric positive-definite system is solved by
//! a dense Cholesky factorization. Between refinement nodes the solution is
//! interpolated linearly, which is exact because `f` is edgewise affine
//! there. The result is normalized to minimum zero; it is unique up to the
//! additive constant on a connected graph.
//!
//! Sizes here are small (supports, not meshes), so a dense solve is the
//! right tool: assembling and factoring an n-node system is microseconds for
//! the n in the tens this crate deals with.

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::{Loc, MetricGraph, PointOnGraph};
use crate::pwl::PwlFunction;

/// Grounded Laplacian of a refinement of the graph.
///
/// Nodes `0..vertex_count` are the original vertices (node 0, the
/// lowest-index vertex, is the ground); the remaining nodes are the interior
/// refinement points in canonical order.
pub struct LaplacianSystem {
    node_count: usize,
    /// Interior refinement points per edge, sorted by offset: `(node, offset)`.
    interior: Vec<Vec<(usize, f64)>>,
    /// Lower Cholesky factor of the Laplacian with row/column 0 deleted,
    /// row-major, dimension `node_count - 1`.
    chol: Vec<f64>,
    /// The full Laplacian is kept for diagnostics (row sums, quadratic forms).
    laplacian: Vec<f64>,
}

impl LaplacianSystem {
    /// Refine the graph at the given points and assemble + factor the system.
    /// Vertex points are already nodes; interior points within the length
    /// tolerance of each other collapse to one node.
    pub fn assemble(g: &MetricGraph, points: &[PointOnGraph]) -> Result<Self> {
        let nv = g.vertex_count();
        let tol = g.len_tol();
        let mut per_edge: Vec<Vec<f64>> = vec![Vec::new(); g.edge_count()];
        for p in points {
            g.check_point(p)?;
            if let Loc::Interior { edge, offset } = p.loc {
                per_edge[edge].push(offset);
            }
        }
        let mut node_count = nv;
        let mut interior: Vec<Vec<(usize, f64)>> = Vec::with_capacity(g.edge_count());
        for offs in &mut per_edge {
            offs.sort_by(f64::total_cmp);
            let mut nodes = Vec::with_capacity(offs.len());
            for &off in offs.iter() {
                match nodes.last() {
                    Some(&(_, prev)) if off - prev <= tol => {}
                    _ => {
                        nodes.push((node_count, off));
                        node_count += 1;
                    }
                }
            }
            interior.push(nodes);
        }

        let n = node_count;
        let mut lap = vec![0.0; n * n];
        let mut add_seg = |a: usize, b: usize, len: f64| {
            let c = 1.0 / len;
            lap[a * n + a] += c;
            lap[b * n + b] += c;
            lap[a * n + b] -= c;
            lap[b * n + a] -= c;
        };
        for e in 0..g.edge_count() {
            let edge = g.edge(e);
            let mut prev = (edge.u, 0.0);
            for &(node, off) in &interior[e] {
                add_seg(prev.0, node, off - prev.1);
                prev = (node, off);
            }
            add_seg(prev.0, edge.v, edge.length - prev.1);
        }

        let chol = cholesky_lower(&lap, n)?;
        Ok(LaplacianSystem { node_count: n, interior, chol, laplacian: lap })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Row sums of the assembled Laplacian; all zero up to round-off.
    pub fn row_sums(&self) -> Vec<f64> {
        let n = self.node_count;
        (0..n).map(|i| self.laplacian[i * n..(i + 1) * n].iter().sum()).collect()
    }

    /// Node index of a point, if the point is a node of the refinement.
    pub(crate) fn node_of(&self, g: &MetricGraph, p: &PointOnGraph) -> Option<usize> {
        match p.loc {
            Loc::Vertex(v) => Some(v),
            Loc::Interior { edge, offset } => {
                let tol = g.len_tol();
                self.interior[edge]
                    .iter()
                    .find(|&&(_, off)| (off - offset).abs() <= tol)
                    .map(|&(node, _)| node)
            }
        }
    }

    /// Solve `L x = rhs` with the ground fixed to zero. `rhs` must sum to
    /// zero (up to round-off) for the solution to be meaningful.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.node_count;
        let m = n - 1;
        debug_assert_eq!(rhs.len(), n);
        // Forward substitution on the reduced system (indices shifted by 1).
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut s = rhs[i + 1];
            for k in 0..i {
                s -= self.chol[i * m + k] * y[k];
            }
            y[i] = s / self.chol[i * m + i];
        }
        // Back substitution.
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let mut s = y[i];
            for k in i + 1..m {
                s -= self.chol[k * m + i] * x[k];
            }
            x[i] = s / self.chol[i * m + i];
        }
        let mut full = vec![0.0; n];
        full[1..].copy_from_slice(&x);
        full
    }

    /// Turn node values into the edgewise-affine function they interpolate.
    fn to_pwl(&self, g: &MetricGraph, x: &[f64]) -> PwlFunction {
        let interior = self
            .interior
            .iter()
            .map(|nodes| nodes.iter().map(|&(node, off)| (off, x[node])).collect())
            .collect();
        let mut f = PwlFunction::from_vertex_and_interior(g, &x[..g.vertex_count()], interior);
        // Refinement nodes where the function is affine are not breakpoints;
        // drop them so the representation is minimal.
        let scale = f.max_abs();
        f.simplify(0.1 * g.val_tol(scale));
        f
    }
}

/// Dense lower Cholesky of the Laplacian with row/column 0 removed. The
/// reduced matrix of a connected graph is positive definite, so a
/// non-positive pivot can only mean the input was not a valid system.
fn cholesky_lower(lap: &[f64], n: usize) -> Result<Vec<f64>> {
    let m = n - 1;
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s = lap[(i + 1) * n + (j + 1)];
            for k in 0..j {
                s -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::DisconnectedGraph);
                }
                l[i * m + i] = s.sqrt();
            } else {
                l[i * m + j] = s / (l[j * m + j]);
            }
        }
    }
    Ok(l)
}

fn check_degrees(d1: &RDivisor, d2: &RDivisor) -> Result<()> {
    let tol = 1e-9 * d1.degree().abs().max(1.0);
    if (d1.degree() - d2.degree()).abs() > tol {
        return Err(Error::DegreeMismatch { left: d1.degree(), right: d2.degree() });
    }
    Ok(())
}

/// The function `f` with `Δf = δ_{D2} - δ_{D1}`, normalized to minimum zero.
pub fn associated_function(g: &MetricGraph, d1: &RDivisor, d2: &RDivisor) -> Result<PwlFunction> {
    d1.check_graph(g)?;
    d2.check_graph(g)?;
    check_degrees(d1, d2)?;
    let support: Vec<PointOnGraph> =
        d1.entries().iter().chain(d2.entries()).map(|&(p, _)| p).collect();
    let sys = LaplacianSystem::assemble(g, &support)?;
    let mut rhs = vec![0.0; sys.node_count()];
    for &(p, m) in d2.entries() {
        rhs[sys.node_of(g, &p).expect("support point is a node")] += m;
    }
    for &(p, m) in d1.entries() {
        rhs[sys.node_of(g, &p).expect("support point is a node")] -= m;
    }
    let x = sys.solve(&rhs);
    Ok(sys.to_pwl(g, &x).normalize())
}

/// The potential `j_q(., p)`: zero at `q`, with `Δ j = δ_p - δ_q`.
pub fn j_function(g: &MetricGraph, q: &PointOnGraph, p: &PointOnGraph) -> Result<PwlFunction> {
    g.check_point(q)?;
    g.check_point(p)?;
    if q.loc == p.loc {
        return Ok(PwlFunction::constant(g, 0.0));
    }
    let dq = RDivisor::at_point(g, q, 1.0)?;
    let dp = RDivisor::at_point(g, p, 1.0)?;
    let f = associated_function(g, &dq, &dp)?;
    // Normalization already puts the minimum at zero, and the minimum is
    // attained at q; pin the value at q exactly.
    let at_q = f.eval(g, q)?;
    Ok(f.shift(-at_q))
}

/// Effective resistance `r(p, q) = j_q(p, p)`.
pub fn effective_resistance(g: &MetricGraph, p: &PointOnGraph, q: &PointOnGraph) -> Result<f64> {
    let j = j_function(g, q, p)?;
    j.eval(g, p)
}
