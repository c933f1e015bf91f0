//! Effective divisors with real masses.
//!
//! An `RDivisor` is a finite set of points with strictly positive masses; its
//! degree is the total mass. Construction canonicalizes: support points are
//! sorted, points within the length tolerance merge (masses add), and masses
//! at or below the coefficient tolerance are dropped. Degree zero is allowed
//! and encodes the single empty divisor of its degree class.

use crate::error::{Error, Result};
use crate::graph::{MetricGraph, PointOnGraph};
use crate::pwl::{canonical_entries, SignedDivisor, KINK_MERGE_REL};

#[derive(Clone, Debug)]
pub struct RDivisor {
    fp: u64,
    entries: Vec<(PointOnGraph, f64)>,
    degree: f64,
}

impl RDivisor {
    pub fn new(g: &MetricGraph, entries: Vec<(PointOnGraph, f64)>) -> Result<Self> {
        for (p, _) in &entries {
            g.check_point(p)?;
        }
        let total: f64 = entries.iter().map(|&(_, m)| m.abs()).sum();
        let coeff_tol = g.val_tol(total);
        let folded = canonical_entries(g, entries, coeff_tol, 0.0);
        if let Some(&(_, m)) = folded.iter().find(|&&(_, m)| m < 0.0) {
            return Err(Error::NonEffectiveDivisor { mass: m });
        }
        let degree = folded.iter().map(|&(_, m)| m).sum();
        Ok(RDivisor { fp: g.fingerprint(), entries: folded, degree })
    }

    /// Single point mass.
    pub fn at_point(g: &MetricGraph, p: &PointOnGraph, mass: f64) -> Result<Self> {
        Self::new(g, vec![(*p, mass)])
    }

    /// Unit mass at a named vertex.
    pub fn at_vertex(g: &MetricGraph, vertex: &str) -> Result<Self> {
        Self::at_point(g, &g.vertex_point(vertex)?, 1.0)
    }

    pub fn empty(g: &MetricGraph) -> Self {
        RDivisor { fp: g.fingerprint(), entries: Vec::new(), degree: 0.0 }
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(PointOnGraph, f64)] {
        &self.entries
    }

    pub(crate) fn check_graph(&self, g: &MetricGraph) -> Result<()> {
        if self.fp != g.fingerprint() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    /// Multiply every mass by `factor >= 0`.
    pub fn scale(&self, g: &MetricGraph, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::ParameterOutOfRange { name: "factor", value: factor });
        }
        Self::new(g, self.entries.iter().map(|&(p, m)| (p, m * factor)).collect())
    }

    pub fn add(&self, other: &Self, g: &MetricGraph) -> Result<Self> {
        self.check_graph(g)?;
        other.check_graph(g)?;
        Self::new(g, self.entries.iter().chain(&other.entries).copied().collect())
    }

    /// Formal difference as a signed divisor.
    pub fn sub(&self, other: &Self, g: &MetricGraph) -> Result<SignedDivisor> {
        self.check_graph(g)?;
        other.check_graph(g)?;
        let entries = self
            .entries
            .iter()
            .copied()
            .chain(other.entries.iter().map(|&(p, m)| (p, -m)))
            .collect();
        Ok(SignedDivisor::from_entries(g, entries, 0.0))
    }

    /// Largest mass discrepancy after aligning supports.
    pub fn mass_distance(&self, other: &Self, g: &MetricGraph) -> Result<f64> {
        let diff = self.sub(other, g)?;
        Ok(diff.entries().iter().map(|&(_, m)| m.abs()).fold(0.0, f64::max))
    }

    /// Build `base + delta`, forgiving round-off: masses in
    /// `(-numeric_slack, coeff_tol]` are dropped, anything more negative is
    /// an error, and the result is rescaled to `target_degree` exactly.
    pub(crate) fn from_shift(
        g: &MetricGraph,
        base: &RDivisor,
        delta: &SignedDivisor,
        target_degree: f64,
    ) -> Result<Self> {
        base.check_graph(g)?;
        if delta.fingerprint() != g.fingerprint() {
            return Err(Error::GraphMismatch);
        }
        let merged: Vec<_> =
            base.entries.iter().copied().chain(delta.entries().iter().copied()).collect();
        let total: f64 = merged.iter().map(|&(_, m)| m.abs()).sum();
        let coeff_tol = g.val_tol(total);
        // Kink masses inherit slope noise from the potential solves; at a
        // pass-through vertex two edges' terminal slopes can disagree by a
        // few 1e-6 on ill-conditioned graphs, leaving a phantom mass of that
        // size. Structural violations show up orders of magnitude larger.
        let numeric_slack = 1e-5 * total.max(1.0);
        // Shifted supports come from solver output whose kink positions drift
        // beyond len_tol; fold with the same edge-relative tolerance used when
        // the kinks were extracted, so base masses cancel against them.
        let mut folded = canonical_entries(g, merged, coeff_tol, KINK_MERGE_REL);
        if let Some(&(_, m)) = folded.iter().find(|&&(_, m)| m <= -numeric_slack) {
            return Err(Error::NonEffectiveDivisor { mass: m });
        }
        folded.retain(|&(_, m)| m > 0.0);
        let sum: f64 = folded.iter().map(|&(_, m)| m).sum();
        if sum <= 0.0 {
            return if target_degree.abs() <= coeff_tol {
                Ok(RDivisor::empty(g))
            } else {
                Err(Error::ZeroDegreeInput)
            };
        }
        let factor = target_degree / sum;
        RDivisor::new(g, folded.into_iter().map(|(p, m)| (p, m * factor)).collect())
    }
}
