//! Closed subsets of a metric graph, stored as per-edge interval unions.
//!
//! Every operation canonicalizes: intervals are clamped to their edge,
//! merged when they touch within the length tolerance, and membership of a
//! vertex is propagated to a degenerate interval on *every* incident edge
//! (a vertex is a single point of the graph, however many edges meet it).
//! Canonical form makes equality, emptiness and coverage checks cheap and
//! keeps results independent of the order operands were combined in.

use crate::error::{Error, Result};
use crate::graph::{Loc, MetricGraph, PointOnGraph};

/// A closed subset of the geometric realization of one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedSubset {
    fp: u64,
    /// Sorted, pairwise disjoint closed intervals per edge; degenerate
    /// intervals (`a == b`) are isolated points.
    per_edge: Vec<Vec<(f64, f64)>>,
}

impl ClosedSubset {
    pub fn empty(g: &MetricGraph) -> Self {
        ClosedSubset { fp: g.fingerprint(), per_edge: vec![Vec::new(); g.edge_count()] }
    }

    pub fn whole(g: &MetricGraph) -> Self {
        let per_edge =
            (0..g.edge_count()).map(|e| vec![(0.0, g.edge(e).length)]).collect();
        ClosedSubset { fp: g.fingerprint(), per_edge }
    }

    /// Build from raw `(edge index, lo, hi)` triples; canonicalizes.
    pub(crate) fn from_intervals(g: &MetricGraph, items: &[(usize, f64, f64)]) -> Self {
        let mut per_edge = vec![Vec::new(); g.edge_count()];
        for &(e, a, b) in items {
            let len = g.edge(e).length;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let lo = lo.clamp(0.0, len);
            let hi = hi.clamp(0.0, len);
            per_edge[e].push((lo, hi));
        }
        let mut s = ClosedSubset { fp: g.fingerprint(), per_edge };
        s.canonicalize(g);
        s
    }

    pub fn singleton(g: &MetricGraph, p: &PointOnGraph) -> Result<Self> {
        g.check_point(p)?;
        let items = match p.loc {
            Loc::Vertex(v) => {
                // Any incident edge will do; canonicalization spreads it.
                let e = g.incident_edges(v)[0];
                let edge = g.edge(e);
                let off = if edge.u == v { 0.0 } else { edge.length };
                vec![(e, off, off)]
            }
            Loc::Interior { edge, offset } => vec![(edge, offset, offset)],
        };
        Ok(Self::from_intervals(g, &items))
    }

    fn canonicalize(&mut self, g: &MetricGraph) {
        let tol = g.len_tol();
        for iv in &mut self.per_edge {
            merge_sorted(iv, tol);
        }
        // Vertex propagation: if any incident edge reaches a vertex, every
        // incident edge must contain that endpoint.
        let mut member = vec![false; g.vertex_count()];
        for (e, iv) in self.per_edge.iter().enumerate() {
            if iv.is_empty() {
                continue;
            }
            let edge = g.edge(e);
            if iv[0].0 <= tol {
                member[edge.u] = true;
            }
            if iv.last().unwrap().1 >= edge.length - tol {
                member[edge.v] = true;
            }
        }
        let mut changed = false;
        for (v, &m) in member.iter().enumerate() {
            if !m {
                continue;
            }
            for &e in g.incident_edges(v) {
                let edge = g.edge(e);
                if edge.u == v && !covers_offset(&self.per_edge[e], 0.0) {
                    self.per_edge[e].push((0.0, 0.0));
                    changed = true;
                }
                if edge.v == v && !covers_offset(&self.per_edge[e], edge.length) {
                    self.per_edge[e].push((edge.length, edge.length));
                    changed = true;
                }
            }
        }
        if changed {
            for iv in &mut self.per_edge {
                merge_sorted(iv, tol);
            }
        }
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if self.fp != other.fp {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.per_edge.iter().all(|iv| iv.is_empty())
    }

    /// Sum of interval lengths (isolated points contribute nothing).
    pub fn measure(&self) -> f64 {
        self.per_edge.iter().flatten().map(|&(a, b)| b - a).sum()
    }

    pub fn union(&self, other: &Self, g: &MetricGraph) -> Result<Self> {
        self.check_pair(other)?;
        let mut per_edge = self.per_edge.clone();
        for (e, iv) in other.per_edge.iter().enumerate() {
            per_edge[e].extend_from_slice(iv);
        }
        let mut s = ClosedSubset { fp: self.fp, per_edge };
        s.canonicalize(g);
        Ok(s)
    }

    pub fn intersect(&self, other: &Self, g: &MetricGraph) -> Result<Self> {
        self.check_pair(other)?;
        let tol = g.len_tol();
        let mut per_edge = Vec::with_capacity(self.per_edge.len());
        for (a_iv, b_iv) in self.per_edge.iter().zip(&other.per_edge) {
            let mut out = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < a_iv.len() && j < b_iv.len() {
                let (a0, a1) = a_iv[i];
                let (b0, b1) = b_iv[j];
                let lo = a0.max(b0);
                let hi = a1.min(b1);
                if hi + tol >= lo {
                    out.push((lo, hi.max(lo)));
                }
                if a1 < b1 {
                    i += 1;
                } else {
                    j += 1;
                }
            }
            per_edge.push(out);
        }
        let mut s = ClosedSubset { fp: self.fp, per_edge };
        s.canonicalize(g);
        Ok(s)
    }

    pub fn meets(&self, other: &Self, g: &MetricGraph) -> Result<bool> {
        Ok(!self.intersect(other, g)?.is_empty())
    }

    /// Like [`meets`](Self::meets) but with both operands inflated by `slack`
    /// first, so sets that touch only up to a coarser tolerance still count.
    pub fn meets_within(&self, other: &Self, g: &MetricGraph, slack: f64) -> Result<bool> {
        self.inflate(g, slack).meets(&other.inflate(g, slack), g)
    }

    /// Does the subset cover the whole graph? Gaps up to the length
    /// tolerance are forgiven.
    pub fn covers_gamma(&self, g: &MetricGraph) -> bool {
        self.covers_gamma_within(g, g.len_tol())
    }

    pub fn covers_gamma_within(&self, g: &MetricGraph, slack: f64) -> bool {
        self.inflate(g, slack).per_edge.iter().enumerate().all(|(e, iv)| {
            iv.len() == 1 && iv[0].0 <= slack && iv[0].1 >= g.edge(e).length - slack
        })
    }

    /// Grow every interval by `delta` on both sides (clamped to the edge).
    pub fn inflate(&self, g: &MetricGraph, delta: f64) -> Self {
        let items: Vec<_> = self
            .per_edge
            .iter()
            .enumerate()
            .flat_map(|(e, iv)| iv.iter().map(move |&(a, b)| (e, a - delta, b + delta)))
            .collect();
        Self::from_intervals(g, &items)
    }

    /// Is `self` contained in `other`, up to `slack`? Interval bodies must
    /// sit inside the inflated `other`; isolated points must be within
    /// `slack` of it.
    pub fn covered_by(&self, other: &Self, g: &MetricGraph, slack: f64) -> Result<bool> {
        self.check_pair(other)?;
        let fat = other.inflate(g, slack);
        for (e, iv) in self.per_edge.iter().enumerate() {
            for &(a, b) in iv {
                // Representative stretch of the interval, shrunk by slack so
                // boundary fuzz does not produce false negatives.
                let (lo, hi) =
                    if b - a <= 2.0 * slack { ((a + b) / 2.0, (a + b) / 2.0) } else { (a + slack, b - slack) };
                let host = &fat.per_edge[e];
                if !host.iter().any(|&(c, d)| c <= lo && hi <= d) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Two-sided containment up to `slack`.
    pub fn approx_eq(&self, other: &Self, g: &MetricGraph, slack: f64) -> Result<bool> {
        Ok(self.covered_by(other, g, slack)? && other.covered_by(self, g, slack)?)
    }

    pub fn contains_point(&self, g: &MetricGraph, p: &PointOnGraph, slack: f64) -> Result<bool> {
        Self::singleton(g, p)?.covered_by(self, g, slack)
    }

    /// Intervals of one edge, for inspection and plotting.
    pub fn edge_intervals(&self, edge: usize) -> &[(f64, f64)] {
        &self.per_edge[edge]
    }
}

fn covers_offset(iv: &[(f64, f64)], x: f64) -> bool {
    iv.iter().any(|&(a, b)| a <= x && x <= b)
}

fn merge_sorted(iv: &mut Vec<(f64, f64)>, tol: f64) {
    if iv.is_empty() {
        return;
    }
    iv.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for &(a, b) in iv.iter() {
        match out.last_mut() {
            Some(last) if a <= last.1 + tol => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    *iv = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_path() -> MetricGraph {
        MetricGraph::new(&["v0", "v1"], &[("e", "v0", "v1", 1.0)]).unwrap()
    }

    fn g_circle() -> MetricGraph {
        MetricGraph::new(&["v0", "v1"], &[("e0", "v0", "v1", 0.5), ("e1", "v0", "v1", 0.5)])
            .unwrap()
    }

    #[test]
    fn union_covers_path() {
        let g = g_path();
        let a = ClosedSubset::from_intervals(&g, &[(0, 0.0, 0.5)]);
        let b = ClosedSubset::from_intervals(&g, &[(0, 0.5, 1.0)]);
        let u = a.union(&b, &g).unwrap();
        assert!(u.covers_gamma(&g));
        assert!(a.meets(&b, &g).unwrap());
        let i = a.intersect(&b, &g).unwrap();
        assert!(!i.is_empty());
        assert!(i.measure() < 1e-12);
    }

    #[test]
    fn vertex_endpoints_do_not_cover_circle() {
        let g = g_circle();
        let v0 = ClosedSubset::singleton(&g, &g.vertex_point("v0").unwrap()).unwrap();
        let v1 = ClosedSubset::singleton(&g, &g.vertex_point("v1").unwrap()).unwrap();
        assert!(!v0.meets(&v1, &g).unwrap());
        assert!(!v0.union(&v1, &g).unwrap().covers_gamma(&g));
        // A vertex singleton shows up on every incident edge.
        assert_eq!(v0.edge_intervals(0), &[(0.0, 0.0)]);
        assert_eq!(v0.edge_intervals(1), &[(0.0, 0.0)]);
    }

    #[test]
    fn vertex_propagation_bridges_edges() {
        let g = g_circle();
        // Reaching v1 along e0 puts v1 on e1 as well.
        let s = ClosedSubset::from_intervals(&g, &[(0, 0.3, 0.5)]);
        let tip = ClosedSubset::from_intervals(&g, &[(1, 0.5, 0.5)]);
        assert!(tip.covered_by(&s, &g, 1e-12).unwrap());
        let t = ClosedSubset::from_intervals(&g, &[(1, 0.45, 0.5)]);
        assert!(s.meets(&t, &g).unwrap());
    }

    #[test]
    fn whole_and_empty() {
        let g = g_circle();
        assert!(ClosedSubset::whole(&g).covers_gamma(&g));
        assert!(ClosedSubset::empty(&g).is_empty());
        assert!((ClosedSubset::whole(&g).measure() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn approx_eq_tolerates_fuzz() {
        let g = g_path();
        let a = ClosedSubset::from_intervals(&g, &[(0, 0.2, 0.5)]);
        let b = ClosedSubset::from_intervals(&g, &[(0, 0.2 + 3e-8, 0.5 - 2e-8)]);
        assert!(a.approx_eq(&b, &g, 1e-6).unwrap());
        assert!(!a.approx_eq(&b, &g, 1e-9).unwrap());
        let c = ClosedSubset::from_intervals(&g, &[(0, 0.2, 0.5), (0, 0.9, 0.9)]);
        assert!(!a.approx_eq(&c, &g, 1e-6).unwrap());
        assert!(c.approx_eq(&c.clone(), &g, 1e-12).unwrap());
    }

    #[test]
    fn mismatched_graphs_error() {
        let g1 = g_path();
        let g2 = g_path();
        let a = ClosedSubset::whole(&g1);
        let b = ClosedSubset::whole(&g2);
        // Same shape, same fingerprint: compatible.
        assert!(a.union(&b, &g1).is_ok());
        let g3 = MetricGraph::new(&["v0", "v1"], &[("e", "v0", "v1", 2.0)]).unwrap();
        let c = ClosedSubset::whole(&g3);
        assert!(matches!(a.union(&c, &g1), Err(Error::GraphMismatch)));
    }
}
