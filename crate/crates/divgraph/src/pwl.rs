//! Continuous piecewise-linear functions on a metric graph, and the signed
//! divisors they cut out.
//!
//! A function is stored as breakpoints `(offset, value)` per edge, sorted,
//! with the first breakpoint at offset 0 and the last at the edge length.
//! Values at a shared vertex are identical across its incident edges, so the
//! function is globally continuous by construction.
//!
//! The divisor of a function records, at every point, minus the sum of
//! outgoing slopes: a unit of incoming kink is a unit of positive mass.
//! Interior breakpoints contribute `slope_in - slope_out`; a vertex collects
//! the negated outgoing slopes of all incident edge ends. Affine stretches
//! contribute nothing, so the divisor is finitely supported, and its total
//! mass is zero on a compact graph.

use crate::error::{Error, Result};
use crate::graph::{Loc, MetricGraph, PointOnGraph};
use crate::subset::ClosedSubset;

/// Breakpoints within this fraction of their edge's length merge into one
/// kink during divisor extraction; see [`PwlFunction::divisor`].
pub(crate) const KINK_MERGE_REL: f64 = 1e-7;

/// Combination mode for [`PwlFunction::combine`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Combine {
    Add,
    Sub,
}

/// Clip mode for [`PwlFunction::clip`]: keep the pointwise min or max with a
/// constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Clip {
    Min,
    Max,
}

/// A continuous piecewise-linear function on a fixed graph.
#[derive(Clone, Debug, PartialEq)]
pub struct PwlFunction {
    fp: u64,
    /// Breakpoints per edge: strictly increasing offsets, first 0, last the
    /// edge length.
    per_edge: Vec<Vec<(f64, f64)>>,
}

/// Extremal data of a function: values and the closed sets attaining them
/// (up to the value tolerance).
#[derive(Clone, Debug)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
    pub gmin: ClosedSubset,
    pub gmax: ClosedSubset,
}

impl PwlFunction {
    pub fn constant(g: &MetricGraph, value: f64) -> Self {
        let per_edge = (0..g.edge_count())
            .map(|e| vec![(0.0, value), (g.edge(e).length, value)])
            .collect();
        PwlFunction { fp: g.fingerprint(), per_edge }
    }

    /// Build from per-edge breakpoints (offsets from the u-endpoint).
    ///
    /// Offsets are deduplicated within the length tolerance; the first and
    /// last breakpoints must sit at the edge ends (within tolerance), and
    /// values meeting at a vertex must agree within the value tolerance —
    /// they are snapped to a common value so the result is exactly
    /// continuous.
    pub fn from_breakpoints(g: &MetricGraph, mut per_edge: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        if per_edge.len() != g.edge_count() {
            return Err(Error::Parse("breakpoint lists do not match the edge count".into()));
        }
        let tol = g.len_tol();
        for (e, bps) in per_edge.iter_mut().enumerate() {
            let len = g.edge(e).length;
            if bps.len() < 2 {
                return Err(Error::Parse(format!(
                    "edge {} needs breakpoints at both ends",
                    g.edge(e).id
                )));
            }
            *bps = canonical_bps(len, std::mem::take(bps), tol);
            if bps[0].0 > tol || bps.last().unwrap().0 < len - tol {
                return Err(Error::Parse(format!(
                    "edge {} breakpoints must span [0, {}]",
                    g.edge(e).id,
                    len
                )));
            }
            bps[0].0 = 0.0;
            bps.last_mut().unwrap().0 = len;
        }
        let mut f = PwlFunction { fp: g.fingerprint(), per_edge };
        f.snap_vertex_values(g)?;
        Ok(f)
    }

    /// Solver-facing constructor: per-vertex values plus interior breakpoints
    /// `(offset, value)` per edge, already consistent.
    pub(crate) fn from_vertex_and_interior(
        g: &MetricGraph,
        vertex_values: &[f64],
        interior: Vec<Vec<(f64, f64)>>,
    ) -> Self {
        let tol = g.len_tol();
        let per_edge = interior
            .into_iter()
            .enumerate()
            .map(|(e, mut bps)| {
                let edge = g.edge(e);
                bps.push((0.0, vertex_values[edge.u]));
                bps.push((edge.length, vertex_values[edge.v]));
                canonical_bps(edge.length, bps, tol)
            })
            .collect();
        PwlFunction { fp: g.fingerprint(), per_edge }
    }

    fn snap_vertex_values(&mut self, g: &MetricGraph) -> Result<()> {
        let scale = self.max_abs();
        let val_tol = g.val_tol(scale);
        for v in 0..g.vertex_count() {
            let ends = vertex_ends(g, v);
            let mean = ends
                .iter()
                .map(|&(e, last)| {
                    let bps = &self.per_edge[e];
                    if last { bps.last().unwrap().1 } else { bps[0].1 }
                })
                .sum::<f64>()
                / ends.len() as f64;
            for &(e, last) in &ends {
                let bps = &mut self.per_edge[e];
                let slot = if last { bps.last_mut().unwrap() } else { &mut bps[0] };
                if (slot.1 - mean).abs() > val_tol {
                    return Err(Error::Parse(format!(
                        "values at vertex {} disagree across incident edges",
                        g.vertex_id(v)
                    )));
                }
                slot.1 = mean;
            }
        }
        Ok(())
    }

    pub(crate) fn check_graph(&self, g: &MetricGraph) -> Result<()> {
        if self.fp != g.fingerprint() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    pub fn eval(&self, g: &MetricGraph, p: &PointOnGraph) -> Result<f64> {
        self.check_graph(g)?;
        g.check_point(p)?;
        Ok(match p.loc {
            Loc::Vertex(v) => {
                let &e = g.incident_edges(v).first().expect("vertex has an incident edge");
                let bps = &self.per_edge[e];
                if g.edge(e).u == v {
                    bps[0].1
                } else {
                    bps.last().unwrap().1
                }
            }
            Loc::Interior { edge, offset } => eval_on_edge(&self.per_edge[edge], offset),
        })
    }

    pub fn combine(&self, other: &Self, g: &MetricGraph, mode: Combine) -> Result<Self> {
        self.check_graph(g)?;
        other.check_graph(g)?;
        let tol = g.len_tol();
        let per_edge = self
            .per_edge
            .iter()
            .zip(&other.per_edge)
            .enumerate()
            .map(|(e, (a, b))| {
                let len = g.edge(e).length;
                let offsets = merge_offsets(a, b, len, tol);
                offsets
                    .into_iter()
                    .map(|x| {
                        let ya = eval_on_edge(a, x);
                        let yb = eval_on_edge(b, x);
                        (x, match mode {
                            Combine::Add => ya + yb,
                            Combine::Sub => ya - yb,
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(PwlFunction { fp: self.fp, per_edge })
    }

    pub fn add(&self, other: &Self, g: &MetricGraph) -> Result<Self> {
        self.combine(other, g, Combine::Add)
    }

    pub fn sub(&self, other: &Self, g: &MetricGraph) -> Result<Self> {
        self.combine(other, g, Combine::Sub)
    }

    /// Pointwise min/max with a constant; crossing points become breakpoints.
    pub fn clip(&self, level: f64, mode: Clip) -> Self {
        let per_edge = self
            .per_edge
            .iter()
            .map(|bps| {
                let mut out: Vec<(f64, f64)> = Vec::with_capacity(bps.len());
                for (i, &(x1, y1)) in bps.iter().enumerate() {
                    if i > 0 {
                        let (x0, y0) = bps[i - 1];
                        // Strict sign change: the segment crosses the level.
                        if (y0 - level) * (y1 - level) < 0.0 {
                            let t = (level - y0) / (y1 - y0);
                            let xc = x0 + t * (x1 - x0);
                            if xc > x0 && xc < x1 {
                                out.push((xc, level));
                            }
                        }
                    }
                    let y = match mode {
                        Clip::Min => y1.min(level),
                        Clip::Max => y1.max(level),
                    };
                    out.push((x1, y));
                }
                out
            })
            .collect();
        PwlFunction { fp: self.fp, per_edge }
    }

    pub fn shift(&self, c: f64) -> Self {
        let per_edge = self
            .per_edge
            .iter()
            .map(|bps| bps.iter().map(|&(x, y)| (x, y + c)).collect())
            .collect();
        PwlFunction { fp: self.fp, per_edge }
    }

    pub fn neg(&self) -> Self {
        let per_edge = self
            .per_edge
            .iter()
            .map(|bps| bps.iter().map(|&(x, y)| (x, -y)).collect())
            .collect();
        PwlFunction { fp: self.fp, per_edge }
    }

    /// Extremes are attained at breakpoints, so min/max are exact.
    pub fn value_range(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for bps in &self.per_edge {
            for &(_, y) in bps {
                min = min.min(y);
                max = max.max(y);
            }
        }
        (min, max)
    }

    pub fn min_value(&self) -> f64 {
        self.value_range().0
    }

    pub fn max_value(&self) -> f64 {
        self.value_range().1
    }

    pub fn max_abs(&self) -> f64 {
        let (min, max) = self.value_range();
        min.abs().max(max.abs())
    }

    /// Min/max values together with the closed sets attaining them, the
    /// attainment band being the value tolerance at this function's scale.
    pub fn extrema(&self, g: &MetricGraph) -> Result<Extrema> {
        self.check_graph(g)?;
        let (min, max) = self.value_range();
        let band = g.val_tol(self.max_abs());
        let gmin = self.level_set(g, min, min + band)?;
        let gmax = self.level_set(g, max - band, max)?;
        Ok(Extrema { min, max, gmin, gmax })
    }

    /// The set where the function attains its minimum.
    pub fn gmin(&self, g: &MetricGraph) -> Result<ClosedSubset> {
        let (min, _) = self.value_range();
        let band = g.val_tol(self.max_abs());
        self.level_set(g, min, min + band)
    }

    /// Subtract the minimum, so the result has minimum exactly zero.
    pub fn normalize(&self) -> Self {
        self.shift(-self.min_value())
    }

    /// Preimage of the closed value band `[lo, hi]`.
    pub fn level_set(&self, g: &MetricGraph, lo: f64, hi: f64) -> Result<ClosedSubset> {
        self.check_graph(g)?;
        if lo > hi {
            return Err(Error::InvalidRange);
        }
        let mut items = Vec::new();
        for (e, bps) in self.per_edge.iter().enumerate() {
            for w in bps.windows(2) {
                let (x0, y0) = w[0];
                let (x1, y1) = w[1];
                if y0 == y1 {
                    if y0 >= lo && y0 <= hi {
                        items.push((e, x0, x1));
                    }
                    continue;
                }
                let t_at = |v: f64| x0 + (v - y0) / (y1 - y0) * (x1 - x0);
                let (a, b) = (t_at(lo), t_at(hi));
                let (a, b) = (a.min(b), a.max(b));
                let lo_x = a.max(x0);
                let hi_x = b.min(x1);
                if lo_x <= hi_x {
                    items.push((e, lo_x, hi_x));
                }
            }
        }
        Ok(ClosedSubset::from_intervals(g, &items))
    }

    /// Integral over the whole graph (trapezoids per affine piece).
    pub fn integral(&self) -> f64 {
        self.per_edge
            .iter()
            .flat_map(|bps| bps.windows(2))
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum()
    }

    /// The divisor cut out by the function; coefficients at or below the
    /// value tolerance (at this function's scale) are dropped.
    ///
    /// Breakpoints closer than a merge tolerance are treated as one kink.
    /// Differencing slopes across a near-zero interval amplifies value noise
    /// into spurious masses (clipping can drop a crossing arbitrarily close
    /// to an existing breakpoint), so every slope entering a kink must span
    /// a substantial interval. A merged kink lands on the group member with
    /// the largest local slope change.
    pub fn divisor(&self, g: &MetricGraph) -> Result<SignedDivisor> {
        self.check_graph(g)?;
        let coeff_tol = g.val_tol(self.max_abs());
        let mut entries: Vec<(PointOnGraph, f64)> = Vec::new();
        let mut vertex_mass = vec![0.0; g.vertex_count()];
        for (e, bps) in self.per_edge.iter().enumerate() {
            let edge = g.edge(e);
            let merge_tol = KINK_MERGE_REL * edge.length;
            // Inclusive index ranges of near-coincident breakpoint runs.
            let mut groups: Vec<(usize, usize)> = Vec::new();
            let mut start = 0;
            for i in 1..bps.len() {
                if bps[i].0 - bps[i - 1].0 > merge_tol {
                    groups.push((start, i - 1));
                    start = i;
                }
            }
            groups.push((start, bps.len() - 1));
            if groups.len() == 1 {
                let s = (bps[bps.len() - 1].1 - bps[0].1) / edge.length;
                vertex_mass[edge.u] -= s;
                vertex_mass[edge.v] += s;
                continue;
            }
            // Slope between consecutive groups; the gap exceeds `merge_tol`.
            let slope = |i: usize| {
                let a = groups[i].1;
                let b = groups[i + 1].0;
                (bps[b].1 - bps[a].1) / (bps[b].0 - bps[a].0)
            };
            vertex_mass[edge.u] -= slope(0);
            vertex_mass[edge.v] += slope(groups.len() - 2);
            for gi in 1..groups.len() - 1 {
                let sigma = slope(gi - 1) - slope(gi);
                if sigma.abs() <= coeff_tol {
                    continue;
                }
                let (lo, hi) = groups[gi];
                let rep = (lo..=hi)
                    .max_by(|&a, &b| local_kink(bps, a).total_cmp(&local_kink(bps, b)))
                    .unwrap();
                entries.push((g.point_at(e, bps[rep].0)?, sigma));
            }
        }
        for (v, &m) in vertex_mass.iter().enumerate() {
            if m.abs() > coeff_tol {
                entries.push((PointOnGraph { fp: self.fp, loc: Loc::Vertex(v) }, m));
            }
        }
        Ok(SignedDivisor::from_entries(g, entries, coeff_tol))
    }

    /// Diagnostic: are all slopes integers (within `tol`)? Functions whose
    /// divisor moves between integral divisors have this property.
    pub fn slopes_integral(&self, tol: f64) -> bool {
        self.per_edge.iter().flat_map(|bps| bps.windows(2)).all(|w| {
            let s = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            (s - s.round()).abs() <= tol
        })
    }

    /// Breakpoints of one edge, for inspection, sampling, and plotting.
    pub fn edge_breakpoints(&self, edge: usize) -> &[(f64, f64)] {
        &self.per_edge[edge]
    }

    /// Drop interior breakpoints that are collinear with their neighbours
    /// within `tol`; keeps the representation minimal after a solve.
    pub(crate) fn simplify(&mut self, tol: f64) {
        for bps in &mut self.per_edge {
            let mut kept: Vec<(f64, f64)> = Vec::with_capacity(bps.len());
            for &(x, y) in bps.iter() {
                while kept.len() >= 2 {
                    let (x0, y0) = kept[kept.len() - 2];
                    let (x1, y1) = kept[kept.len() - 1];
                    let lerp = y0 + (y - y0) / (x - x0) * (x1 - x0);
                    if (lerp - y1).abs() <= tol {
                        kept.pop();
                    } else {
                        break;
                    }
                }
                kept.push((x, y));
            }
            *bps = kept;
        }
    }
}

/// |slope change| at interior breakpoint `i` from the raw neighbouring
/// intervals; only used to pick a representative inside a merge group, where
/// its noise cannot affect masses.
fn local_kink(bps: &[(f64, f64)], i: usize) -> f64 {
    let sl = (bps[i].1 - bps[i - 1].1) / (bps[i].0 - bps[i - 1].0);
    let sr = (bps[i + 1].1 - bps[i].1) / (bps[i + 1].0 - bps[i].0);
    (sl - sr).abs()
}

fn vertex_ends(g: &MetricGraph, v: usize) -> Vec<(usize, bool)> {
    g.incident_edges(v)
        .iter()
        .flat_map(|&e| {
            let edge = g.edge(e);
            let mut ends = Vec::new();
            if edge.u == v {
                ends.push((e, false));
            }
            if edge.v == v {
                ends.push((e, true));
            }
            ends
        })
        .collect()
}

fn eval_on_edge(bps: &[(f64, f64)], x: f64) -> f64 {
    match bps.binary_search_by(|probe| probe.0.total_cmp(&x)) {
        Ok(i) => bps[i].1,
        Err(i) => {
            if i == 0 {
                bps[0].1
            } else if i == bps.len() {
                bps[bps.len() - 1].1
            } else {
                let (x0, y0) = bps[i - 1];
                let (x1, y1) = bps[i];
                y0 + (x - x0) / (x1 - x0) * (y1 - y0)
            }
        }
    }
}

/// Sort and deduplicate breakpoints; groups within `tol` collapse to their
/// mean value, with the edge endpoints pinned to offsets 0 and `len`.
fn canonical_bps(len: f64, mut bps: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    bps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(bps.len());
    let mut group: Vec<(f64, f64)> = Vec::new();
    let flush = |group: &mut Vec<(f64, f64)>, out: &mut Vec<(f64, f64)>| {
        if group.is_empty() {
            return;
        }
        let x = group[0].0;
        let y = group.iter().map(|&(_, y)| y).sum::<f64>() / group.len() as f64;
        out.push((x, y));
        group.clear();
    };
    for (x, y) in bps {
        let x = x.clamp(0.0, len);
        if let Some(&(gx, _)) = group.first() {
            if x - gx > tol {
                flush(&mut group, &mut out);
            }
        }
        group.push((x, y));
    }
    flush(&mut group, &mut out);
    if out.len() == 1 {
        let y = out[0].1;
        out = vec![(0.0, y), (len, y)];
    }
    out[0].0 = 0.0;
    out.last_mut().unwrap().0 = len;
    out
}

/// Union of two offset lists, deduplicated within `tol`, endpoints pinned.
fn merge_offsets(a: &[(f64, f64)], b: &[(f64, f64)], len: f64, tol: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = a.iter().map(|&(x, _)| x).chain(b.iter().map(|&(x, _)| x)).collect();
    xs.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(xs.len());
    for x in xs {
        match out.last() {
            Some(&last) if x - last <= tol => {}
            _ => out.push(x),
        }
    }
    out[0] = 0.0;
    *out.last_mut().unwrap() = len;
    out
}

/// A finitely supported real divisor with no sign constraint, e.g. the
/// divisor of a function. Canonical form: support points sorted, points
/// within the length tolerance merged, negligible coefficients dropped.
#[derive(Clone, Debug)]
pub struct SignedDivisor {
    fp: u64,
    entries: Vec<(PointOnGraph, f64)>,
}

impl SignedDivisor {
    pub(crate) fn from_entries(
        g: &MetricGraph,
        entries: Vec<(PointOnGraph, f64)>,
        coeff_tol: f64,
    ) -> Self {
        SignedDivisor { fp: g.fingerprint(), entries: canonical_entries(g, entries, coeff_tol, 0.0) }
    }

    pub fn empty(g: &MetricGraph) -> Self {
        SignedDivisor { fp: g.fingerprint(), entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(PointOnGraph, f64)] {
        &self.entries
    }

    pub fn degree(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.fp
    }

    /// Largest coefficient difference after aligning supports; the distance
    /// is infinite in no case — unmatched points count with their full mass.
    pub fn coefficient_distance(&self, other: &Self, g: &MetricGraph) -> Result<f64> {
        if self.fp != other.fp {
            return Err(Error::GraphMismatch);
        }
        let mut merged: Vec<(PointOnGraph, f64)> = self.entries.clone();
        merged.extend(other.entries.iter().map(|&(p, m)| (p, -m)));
        let folded = canonical_entries(g, merged, 0.0, KINK_MERGE_REL);
        Ok(folded.iter().map(|&(_, m)| m.abs()).fold(0.0, f64::max))
    }
}

/// Shared canonicalization for divisor-like entry lists.
pub(crate) fn canonical_entries(
    g: &MetricGraph,
    mut entries: Vec<(PointOnGraph, f64)>,
    coeff_tol: f64,
    pos_tol_rel: f64,
) -> Vec<(PointOnGraph, f64)> {
    // Positions produced by numerical solvers drift by more than the exact
    // length tolerance, so callers merging solver output pass an edge-relative
    // positional tolerance; exact constructions pass 0.0 and fold at len_tol.
    let pos_tol = |edge: usize| g.len_tol().max(pos_tol_rel * g.edge(edge).length);
    if pos_tol_rel > 0.0 {
        for (p, _) in entries.iter_mut() {
            if let Loc::Interior { edge, offset } = p.loc {
                let e = g.edge(edge);
                let tol_e = pos_tol(edge);
                if offset <= tol_e {
                    p.loc = Loc::Vertex(e.u);
                } else if offset >= e.length - tol_e {
                    p.loc = Loc::Vertex(e.v);
                }
            }
        }
    }
    entries.sort_by(|a, b| a.0.loc.cmp_key(&b.0.loc));
    let mut out: Vec<(PointOnGraph, f64)> = Vec::with_capacity(entries.len());
    for (p, m) in entries {
        let tol = match p.loc {
            Loc::Interior { edge, .. } => pos_tol(edge),
            Loc::Vertex(_) => g.len_tol(),
        };
        match out.last_mut() {
            Some((q, acc)) if same_point(&q.loc, &p.loc, tol) => *acc += m,
            _ => out.push((p, m)),
        }
    }
    out.retain(|&(_, m)| m.abs() > coeff_tol);
    out
}

fn same_point(a: &Loc, b: &Loc, tol: f64) -> bool {
    match (a, b) {
        (Loc::Vertex(x), Loc::Vertex(y)) => x == y,
        (Loc::Interior { edge: e1, offset: x }, Loc::Interior { edge: e2, offset: y }) => {
            e1 == e2 && (x - y).abs() <= tol
        }
        _ => false,
    }
}
