//! Reduced divisors on tropical segments and hulls.
//!
//! The divisor of a hull `T` reduced with respect to a base divisor `E` is
//! the point of `T` minimizing the deviation `Φ(. - E)`. Along a t-path the
//! objective `t -> Φ(P(t) - E)` is strictly decreasing and then strictly
//! increasing, so a one-dimensional search (coarse grid to bracket, then
//! golden-section) converges to the unique minimizer. The grid stage is kept
//! even though unimodality is expected, so a hypothetical multi-valley
//! objective would still be bracketed near its global minimum rather than
//! silently mis-optimized.
//!
//! Everything inside the search loop is breakpoint calculus, no linear
//! solves: with `f12 = normalize(f_{D2-D1})` and `f1E = f_{D1-E}`, the
//! function from a path point toward `E` is
//! `f_{P(t)-E} = min(t * rho, f12) + f1E`, so `Φ` and `ρ` along the path
//! come from clipping, adding, and integrating piecewise-linear data. Hulls
//! with more than two generators are searched recursively: every hull point
//! lies on a segment from a point of the sub-hull to the last generator, so
//! outer parameters get an adaptive grid and the innermost segment is solved
//! exactly.
//!
//! A computed reduced divisor ships with a certificate: the min-set of
//! `f_{D0-E}` must meet the min-set of `f_{D-D0}` for every generator, and
//! the min-sets of the generators toward `E` must union to the min-set of
//! `D0` toward `E`. These conditions hold at a true reduced divisor; they
//! are necessary-side evidence and are reported as a status rather than
//! asserted, with `ReducedResult::require_certified` upgrading a failed
//! check into an error for callers that want to be strict.

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::potential::associated_function;
use crate::pwl::{Clip, PwlFunction};
use crate::space::{check_degree_match, membership_slack, rho_tol, TSegment};
use crate::subset::ClosedSubset;

/// Search parameter resolution for the one-dimensional stages.
const PARAM_TOL: f64 = 1e-10;
/// Objective values closer than this are considered tied.
const OBJ_TOL: f64 = 1e-12;
/// Coarse grid size bracketing the golden-section stage.
const GRID: usize = 33;
/// Outer-level grid size in the hull recursion.
const HULL_GRID: usize = 17;
/// Refinement rounds / shrink factor of the outer hull grids.
const HULL_ROUNDS: usize = 3;
const HULL_SHRINK: f64 = 4.0;
/// Certificate set comparisons forgive this much position error (relative to
/// the total length): optimizer parameter error is amplified by shallow
/// slopes, so the raw length tolerance would be far too strict.
const CERT_SLACK_REL: f64 = 1e-6;

/// A tropical convex hull, described by its generators (equal degree).
#[derive(Clone, Debug)]
pub struct TConvexHull {
    generators: Vec<RDivisor>,
    degree: f64,
}

impl TConvexHull {
    pub fn new(g: &MetricGraph, generators: Vec<RDivisor>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyHull)?;
        first.check_graph(g)?;
        let degree = first.degree();
        for gen in &generators[1..] {
            gen.check_graph(g)?;
            check_degree_match(degree, gen.degree())?;
        }
        Ok(TConvexHull { generators, degree })
    }

    pub fn generators(&self) -> &[RDivisor] {
        &self.generators
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Did the optimality certificate hold?
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedStatus {
    Certified,
    BestEffort,
}

/// Certificate attached to an optimizer result.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    /// Per generator `D`: does `Gmin(f_{D-D0})` meet `Gmin(f_{D0-E})`?
    pub generator_meets: Vec<bool>,
    /// Does the union of the generators' min-sets toward `E` reproduce the
    /// min-set of `D0` toward `E`?
    pub gmin_union_matches: bool,
}

impl CertificateReport {
    fn all_pass(&self) -> bool {
        self.gmin_union_matches && self.generator_meets.iter().all(|&b| b)
    }
}

/// A reduced divisor together with its objective value and certificate.
#[derive(Clone, Debug)]
pub struct ReducedResult {
    pub divisor: RDivisor,
    /// `Φ(D0 - E)` at the minimizer.
    pub objective: f64,
    pub certificate: CertificateReport,
    pub status: ReducedStatus,
}

impl ReducedResult {
    /// Error out unless the certificate held.
    pub fn require_certified(self) -> Result<Self> {
        if self.status == ReducedStatus::Certified {
            Ok(self)
        } else {
            Err(Error::CertificateFailed)
        }
    }
}

/// Detailed certificate for an arbitrary (hull, candidate, base) triple:
/// per-generator booleans and residuals rather than a single verdict.
#[derive(Clone, Debug)]
pub struct CertificateDetail {
    /// Min-set meeting condition per generator.
    pub meets: Vec<bool>,
    /// Per generator: `Gmin(f_{D-E}) = Gmin(f_{D-D0}) ∩ Gmin(f_{D0-E})`.
    pub min_set_splits: Vec<bool>,
    /// Per generator: `|Φ(D-E) - Φ(D-D0) - Φ(D0-E)|`.
    pub deviation_residuals: Vec<f64>,
    /// Union identity of the min-sets toward `E`.
    pub union_matches: bool,
}

impl CertificateDetail {
    pub fn certified(&self, residual_tol: f64) -> bool {
        self.union_matches
            && self.meets.iter().all(|&b| b)
            && self.min_set_splits.iter().all(|&b| b)
            && self.deviation_residuals.iter().all(|&r| r <= residual_tol)
    }
}

/// Φ and ρ along a t-path against a fixed base divisor, as pure breakpoint
/// calculus on two precomputed functions.
pub(crate) struct SegmentObjective {
    f_seg: PwlFunction,
    len: f64,
    f_base: PwlFunction,
    ltot: f64,
}

impl SegmentObjective {
    fn new(g: &MetricGraph, seg: &TSegment, e: &RDivisor) -> Result<Self> {
        let f_base = associated_function(g, e, seg.endpoints().0)?;
        Ok(SegmentObjective {
            f_seg: seg.function().clone(),
            len: seg.length(),
            f_base,
            ltot: g.total_length(),
        })
    }

    /// From precomputed parts: `f_seg` normalized with max `len`, `f_base`
    /// the function from the path's start toward the base divisor.
    fn from_parts(g: &MetricGraph, f_seg: PwlFunction, len: f64, f_base: PwlFunction) -> Self {
        SegmentObjective { f_seg, len, f_base, ltot: g.total_length() }
    }

    /// `f_{P(t) - E}` up to an additive constant.
    fn f_at(&self, g: &MetricGraph, t: f64) -> Result<PwlFunction> {
        self.f_seg.clip(t * self.len, Clip::Min).add(&self.f_base, g)
    }

    fn phi(&self, g: &MetricGraph, t: f64) -> Result<f64> {
        let f = self.f_at(g, t)?;
        Ok(f.integral() - f.min_value() * self.ltot)
    }

    fn rho_at(&self, g: &MetricGraph, t: f64) -> Result<f64> {
        let (min, max) = self.f_at(g, t)?.value_range();
        Ok(max - min)
    }
}

/// Coarse grid to bracket the minimum of a (presumed unimodal) objective,
/// then golden-section inside the bracket. Returns the best parameter and
/// value seen anywhere, endpoints included.
fn minimize_unimodal(mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = (0.0, f64::INFINITY);
    // Ties (within OBJ_TOL) keep the incumbent, so the reported minimizer is
    // deterministic on flat valleys.
    let track = |t: f64, v: f64, best: &mut (f64, f64)| {
        if v + OBJ_TOL < best.1 {
            *best = (t, v);
        }
    };
    let step = 1.0 / (GRID - 1) as f64;
    let mut vals = [0.0; GRID];
    for (i, v) in vals.iter_mut().enumerate() {
        let t = i as f64 * step;
        *v = f(t)?;
        track(t, *v, &mut best);
    }
    let i_min = (0..GRID).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let mut a = i_min.saturating_sub(1) as f64 * step;
    let mut b = ((i_min + 1).min(GRID - 1)) as f64 * step;

    let gr = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    track(c, fc, &mut best);
    track(d, fd, &mut best);
    while b - a > PARAM_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c)?;
            track(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d)?;
            track(d, fd, &mut best);
        }
    }
    Ok(best)
}

/// The divisor of a segment reduced with respect to `e`, with certificate.
pub fn reduced_on_segment(g: &MetricGraph, seg: &TSegment, e: &RDivisor) -> Result<ReducedResult> {
    e.check_graph(g)?;
    check_degree_match(seg.degree(), e.degree())?;
    let obj = SegmentObjective::new(g, seg, e)?;
    let (t_star, objective) = if seg.is_degenerate() {
        (0.0, obj.phi(g, 0.0)?)
    } else {
        minimize_unimodal(|t| obj.phi(g, t))?
    };
    let divisor = seg.eval(g, t_star)?;
    let f0 = obj.f_at(g, t_star)?;
    let ends = [obj.f_at(g, 0.0)?, obj.f_at(g, 1.0)?];
    let certificate = certify(g, &f0, &ends)?;
    let status =
        if certificate.all_pass() { ReducedStatus::Certified } else { ReducedStatus::BestEffort };
    Ok(ReducedResult { divisor, objective, certificate, status })
}

/// Certificate from `f_{D0-E}` and the per-generator functions `f_{D-E}`
/// (all up to additive constants).
fn certify(g: &MetricGraph, f0: &PwlFunction, toward_e: &[PwlFunction]) -> Result<CertificateReport> {
    let slack = CERT_SLACK_REL * g.total_length();
    let gm0 = f0.gmin(g)?;
    let mut generator_meets = Vec::with_capacity(toward_e.len());
    let mut union: Option<ClosedSubset> = None;
    for fe in toward_e {
        let toward_d0 = fe.sub(f0, g)?;
        generator_meets.push(toward_d0.gmin(g)?.meets_within(&gm0, g, slack)?);
        let gmi = fe.gmin(g)?;
        union = Some(match union {
            None => gmi,
            Some(u) => u.union(&gmi, g)?,
        });
    }
    let gmin_union_matches = union.expect("hull has generators").approx_eq(&gm0, g, slack)?;
    Ok(CertificateReport { generator_meets, gmin_union_matches })
}

/// ρ-distance from `e` to a segment: the distance to the reduced divisor,
/// which is the closest point of the segment.
pub(crate) fn rho_distance_to_segment(
    g: &MetricGraph,
    seg: &TSegment,
    e: &RDivisor,
) -> Result<f64> {
    e.check_graph(g)?;
    check_degree_match(seg.degree(), e.degree())?;
    let obj = SegmentObjective::new(g, seg, e)?;
    if seg.is_degenerate() {
        return obj.rho_at(g, 0.0);
    }
    let (t_star, _) = minimize_unimodal(|t| obj.phi(g, t))?;
    obj.rho_at(g, t_star)
}

/// Value band for membership min-sets, relative to the function scale. Wider
/// than the exact-arithmetic band so that divisors whose support positions
/// were quantized during shift evaluation (at 1e-7 of an edge) still register
/// as members of hulls they lie on; still orders of magnitude below any
/// certification gap.
const MEMBER_BAND_REL: f64 = 1e-6;

/// Hull membership: the min-sets of the functions from each generator
/// toward `e` must cover the whole graph.
pub fn hull_contains(g: &MetricGraph, hull: &TConvexHull, e: &RDivisor) -> Result<bool> {
    e.check_graph(g)?;
    check_degree_match(hull.degree(), e.degree())?;
    let mut union = ClosedSubset::empty(g);
    for gen in hull.generators() {
        let f = associated_function(g, e, gen)?;
        let band = g.val_tol(f.max_abs()).max(MEMBER_BAND_REL * f.max_abs().max(1.0));
        let min = f.min_value();
        union = union.union(&f.level_set(g, min, min + band)?, g)?;
    }
    Ok(union.covers_gamma_within(g, membership_slack(g)))
}

/// The divisor of a hull reduced with respect to `e`.
///
/// One generator (or a hull degenerate to one point) short-circuits; two
/// generators are a segment; more run the recursive search described in the
/// module docs. Certificates are attached in every case.
pub fn reduced_on_hull(g: &MetricGraph, hull: &TConvexHull, e: &RDivisor) -> Result<ReducedResult> {
    e.check_graph(g)?;
    check_degree_match(hull.degree(), e.degree())?;
    let gens = hull.generators();
    let toward_e: Vec<PwlFunction> =
        gens.iter().map(|d| associated_function(g, e, d)).collect::<Result<_>>()?;

    // Degenerate hull: every generator within ρ-tolerance of the first.
    let degenerate = toward_e[1..]
        .iter()
        .all(|f| f.sub(&toward_e[0], g).map(|d| d.max_abs() <= rho_tol(hull.degree())).unwrap_or(false));

    if gens.len() == 1 || degenerate {
        let f0 = &toward_e[0];
        let certificate = certify(g, f0, &toward_e)?;
        let status = if certificate.all_pass() {
            ReducedStatus::Certified
        } else {
            ReducedStatus::BestEffort
        };
        return Ok(ReducedResult {
            divisor: gens[0].clone(),
            objective: f0.integral() - f0.min_value() * g.total_length(),
            certificate,
            status,
        });
    }

    // Recursive best-completion search from the partial blend `f_left`.
    let search = HullSearch { g, toward_e: &toward_e, degree: hull.degree() };
    let (_, f_best) = search.best_completion(1, toward_e[0].clone())?;

    let delta = f_best.divisor(g)?;
    let divisor = RDivisor::from_shift(g, e, &delta, hull.degree())?;
    let objective = f_best.integral() - f_best.min_value() * g.total_length();
    let certificate = certify(g, &f_best, &toward_e)?;
    let status =
        if certificate.all_pass() { ReducedStatus::Certified } else { ReducedStatus::BestEffort };
    Ok(ReducedResult { divisor, objective, certificate, status })
}

struct HullSearch<'a> {
    g: &'a MetricGraph,
    /// `normalize(f_{D-E})` per generator.
    toward_e: &'a [PwlFunction],
    degree: f64,
}

impl HullSearch<'_> {
    /// Given `f_left = f_{D'-E}` for a point `D'` of the hull of generators
    /// `0..k`, find the best completion using generators `k..n`. Returns the
    /// objective and the function `f_{D0-E}` at the optimum.
    fn best_completion(&self, k: usize, f_left: PwlFunction) -> Result<(f64, PwlFunction)> {
        let g = self.g;
        let n = self.toward_e.len();
        let gap = self.toward_e[k].sub(&f_left, g)?;
        let gap_min = gap.min_value();
        let f_seg = gap.shift(-gap_min);
        let len = f_seg.max_value();
        let obj = SegmentObjective::from_parts(g, f_seg, len, f_left);

        if k == n - 1 {
            // Innermost segment: exact one-dimensional minimization.
            let (t_star, phi) = if len <= rho_tol(self.degree) {
                (0.0, obj.phi(g, 0.0)?)
            } else {
                minimize_unimodal(|t| obj.phi(g, t))?
            };
            return Ok((phi, obj.f_at(g, t_star)?));
        }

        // Outer level: adaptive grid over this blend parameter, recursing
        // for the value of each grid point.
        let mut best: Option<(f64, f64, PwlFunction)> = None; // (phi, t, f)
        let mut center: f64 = 0.5;
        let mut width: f64 = 1.0;
        for _ in 0..=HULL_ROUNDS {
            let lo = (center - width / 2.0).max(0.0);
            let hi = (center + width / 2.0).min(1.0);
            let step = (hi - lo) / (HULL_GRID - 1) as f64;
            for i in 0..HULL_GRID {
                let t = lo + step * i as f64;
                let f_next = obj.f_at(g, t)?;
                let (phi, f_done) = self.best_completion(k + 1, f_next)?;
                if best.as_ref().map_or(true, |b| phi + OBJ_TOL < b.0) {
                    best = Some((phi, t, f_done));
                }
            }
            center = best.as_ref().expect("grid evaluated").1;
            width /= HULL_SHRINK;
        }
        let (phi, _, f) = best.expect("grid evaluated");
        Ok((phi, f))
    }
}

/// Minimal generating subset: repeatedly drop a generator contained in the
/// hull of the others. One-at-a-time removal keeps duplicate pairs honest
/// (dropping both copies of a duplicated generator would change the hull).
pub fn extremals(g: &MetricGraph, hull: &TConvexHull) -> Result<TConvexHull> {
    let mut gens: Vec<RDivisor> = hull.generators().to_vec();
    'scan: loop {
        if gens.len() == 1 {
            break;
        }
        for i in 0..gens.len() {
            let rest: Vec<RDivisor> =
                gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, d)| d.clone()).collect();
            let sub = TConvexHull::new(g, rest)?;
            if hull_contains(g, &sub, &gens[i])? {
                gens.remove(i);
                continue 'scan;
            }
        }
        break;
    }
    TConvexHull::new(g, gens)
}

/// Detailed reducedness certificate for a candidate `d0` of a hull `T`
/// relative to `e`: min-set meeting and product conditions and the
/// deviation-additivity residual, per generator.
pub fn reduced_certificate(
    g: &MetricGraph,
    hull: &TConvexHull,
    d0: &RDivisor,
    e: &RDivisor,
) -> Result<CertificateDetail> {
    d0.check_graph(g)?;
    e.check_graph(g)?;
    check_degree_match(hull.degree(), d0.degree())?;
    check_degree_match(hull.degree(), e.degree())?;
    let slack = CERT_SLACK_REL * g.total_length();
    let f0 = associated_function(g, e, d0)?;
    let gm0 = f0.gmin(g)?;
    let phi0 = f0.integral();

    let mut meets = Vec::new();
    let mut min_set_splits = Vec::new();
    let mut deviation_residuals = Vec::new();
    let mut union: Option<ClosedSubset> = None;
    for gen in hull.generators() {
        let fe = associated_function(g, e, gen)?;
        let fd = fe.sub(&f0, g)?; // f_{D-D0} up to a constant
        let gm_d = fd.gmin(g)?;
        let gm_e = fe.gmin(g)?;
        meets.push(gm_d.meets_within(&gm0, g, slack)?);
        min_set_splits.push(gm_e.approx_eq(&gm_d.intersect(&gm0, g)?, g, slack)?);
        let phi_de = fe.integral();
        let phi_dd0 = fd.integral() - fd.min_value() * g.total_length();
        deviation_residuals.push((phi_de - phi_dd0 - phi0).abs());
        union = Some(match union {
            None => gm_e,
            Some(u) => u.union(&gm_e, g)?,
        });
    }
    let union_matches = union.ok_or(Error::EmptyHull)?.approx_eq(&gm0, g, slack)?;
    Ok(CertificateDetail { meets, min_set_splits, deviation_residuals, union_matches })
}
