//! The space of effective divisors of a fixed degree, its metric, and the
//! tropical paths that make it geodesic.
//!
//! For equal-degree divisors `D1`, `D2` with associated function
//! `f = normalize(f_{D2-D1})` (see [`crate::potential`]):
//!
//! - `rho(D1, D2) = max f` is a metric on divisors of that degree;
//! - `s_func(D1, D2) = ∫ f` measures the total deviation `Φ(D2 - D1)`; the
//!   two directions of a pair satisfy
//!   `Φ(D1-D2) + Φ(D2-D1) = rho * total_length`;
//! - the t-path `P(t) = div(min(t * rho, f)) + D1` slides `D1` to `D2` and
//!   is an isometry: `rho(P(s), P(t)) = |s - t| * rho`.
//!
//! The image of a t-path is the segment `tconv(D1, D2)`. Membership of `D`
//! in a segment is decided by a covering criterion: `D` lies on the segment
//! exactly when the minimum sets of `f_{D1-D}` and `f_{D2-D}` jointly cover
//! the graph. Segment intersection reduces to minimizing the distance from
//! one segment to the other along the path parameter; that distance is
//! quasiconvex in the parameter (sublevel sets of the distance to a segment
//! are themselves tropically convex), so a shrinking-bracket grid search
//! followed by bisection of the boundary parameters is exact to tolerance.
//! The probe sequence matters: intersections can be a single divisor interior
//! to both segments, which no finite set of fixed probe points would find.

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::{MetricGraph, PointOnGraph};
use crate::potential::associated_function;
use crate::pwl::{Clip, PwlFunction};
use crate::reduced;

/// Distance between two equal-degree divisors (the sup of the normalized
/// associated function). Zero exactly when the divisors coincide.
pub fn rho(g: &MetricGraph, d1: &RDivisor, d2: &RDivisor) -> Result<f64> {
    let f = associated_function(g, d1, d2)?;
    Ok(f.max_value())
}

/// Total deviation `Φ(D2 - D1)`: the integral of the normalized associated
/// function. Asymmetric; the two directions sum to `rho * total_length`.
pub fn s_func(g: &MetricGraph, d1: &RDivisor, d2: &RDivisor) -> Result<f64> {
    let f = associated_function(g, d1, d2)?;
    Ok(f.integral())
}

/// `b_q(D) = Φ(D - deg(D) * (q))`: the deviation of `D` from the divisor
/// concentrating its whole degree at `q`.
pub fn b_function(g: &MetricGraph, d: &RDivisor, q: &PointOnGraph) -> Result<f64> {
    let base = RDivisor::at_point(g, q, d.degree())?;
    s_func(g, &base, d)
}

/// ρ-based equality of divisors at the standard tolerance
/// `1e-9 * max(1, degree)`.
pub fn divisors_close(g: &MetricGraph, a: &RDivisor, b: &RDivisor) -> Result<bool> {
    Ok(rho(g, a, b)? <= rho_tol(a.degree()))
}

pub(crate) fn rho_tol(degree: f64) -> f64 {
    1e-9 * degree.abs().max(1.0)
}

pub(crate) fn check_degree_match(left: f64, right: f64) -> Result<()> {
    if (left - right).abs() > 1e-9 * left.abs().max(1.0) {
        return Err(Error::DegreeMismatch { left, right });
    }
    Ok(())
}

/// The tropical segment `tconv(D1, D2)`: the image of the t-path from `D1`
/// to `D2`, carrying its associated function so points along it are cheap to
/// produce.
#[derive(Clone, Debug)]
pub struct TSegment {
    d1: RDivisor,
    d2: RDivisor,
    /// `normalize(f_{D2 - D1})`.
    f: PwlFunction,
    /// `rho(D1, D2)`, the geodesic length of the segment.
    length: f64,
}

impl TSegment {
    pub fn new(g: &MetricGraph, d1: RDivisor, d2: RDivisor) -> Result<Self> {
        let f = associated_function(g, &d1, &d2)?;
        let length = f.max_value();
        Ok(TSegment { d1, d2, f, length })
    }

    pub fn endpoints(&self) -> (&RDivisor, &RDivisor) {
        (&self.d1, &self.d2)
    }

    /// Geodesic length, i.e. `rho` between the endpoints.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn degree(&self) -> f64 {
        self.d1.degree()
    }

    /// The normalized function associated with the endpoint pair.
    pub fn function(&self) -> &PwlFunction {
        &self.f
    }

    pub(crate) fn is_degenerate(&self) -> bool {
        self.length <= rho_tol(self.degree())
    }

    /// The divisor at parameter `t` of the t-path: endpoint contracts are
    /// exact, interior points are `div(min(t * length, f)) + D1` with
    /// round-off pruned and the degree renormalized to `D1`'s.
    pub fn eval(&self, g: &MetricGraph, t: f64) -> Result<RDivisor> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange { name: "t", value: t });
        }
        if t == 0.0 || self.is_degenerate() {
            return Ok(self.d1.clone());
        }
        if t == 1.0 {
            return Ok(self.d2.clone());
        }
        let clipped = self.f.clip(t * self.length, Clip::Min);
        let delta = clipped.divisor(g)?;
        RDivisor::from_shift(g, &self.d1, &delta, self.d1.degree())
    }
}

/// One-shot t-path evaluation; build a [`TSegment`] instead when sampling
/// the same pair repeatedly.
pub fn t_path_eval(
    g: &MetricGraph,
    d1: &RDivisor,
    d2: &RDivisor,
    t: f64,
) -> Result<RDivisor> {
    TSegment::new(g, d1.clone(), d2.clone())?.eval(g, t)
}

/// Segment membership via the covering criterion: `d` lies on the segment
/// exactly when the min-sets of the functions from the two endpoints toward
/// `d` cover the whole graph.
pub fn segment_contains(g: &MetricGraph, seg: &TSegment, d: &RDivisor) -> Result<bool> {
    d.check_graph(g)?;
    check_degree_match(seg.degree(), d.degree())?;
    // f_{D1 - d}; the second leg reuses f_{D2 - D1} = seg.f (constants are
    // irrelevant to min-sets).
    let f1 = associated_function(g, d, &seg.d1)?;
    let f2 = f1.add(&seg.f, g)?;
    let gm1 = f1.gmin(g)?;
    let gm2 = f2.gmin(g)?;
    let union = gm1.union(&gm2, g)?;
    Ok(union.covers_gamma_within(g, membership_slack(g)))
}

/// Coverage slack for membership decisions: optimizer outputs and value-band
/// min-sets carry position error well above the raw length tolerance.
pub(crate) fn membership_slack(g: &MetricGraph) -> f64 {
    g.len_tol().max(1e-9 * g.total_length())
}

/// Intersection of two segments. The result is always a (possibly
/// degenerate) sub-segment of `s1`, or `None` when the segments miss each
/// other beyond tolerance.
pub fn segment_intersection(
    g: &MetricGraph,
    s1: &TSegment,
    s2: &TSegment,
) -> Result<Option<TSegment>> {
    check_degree_match(s1.degree(), s2.degree())?;
    let tau = 1e-8 * s1.degree().abs().max(1.0);

    // Distance from a point of s1 to all of s2; quasiconvex in t.
    let dist_at = |t: f64| -> Result<f64> {
        let e = s1.eval(g, t)?;
        reduced::rho_distance_to_segment(g, s2, &e)
    };

    if s1.is_degenerate() {
        return Ok(if dist_at(0.0)? <= tau {
            Some(TSegment::new(g, s1.d1.clone(), s1.d1.clone())?)
        } else {
            None
        });
    }
    if s2.is_degenerate() {
        let d = &s2.d1;
        return Ok(if reduced::rho_distance_to_segment(g, s1, d)? <= tau {
            Some(TSegment::new(g, d.clone(), d.clone())?)
        } else {
            None
        });
    }

    // Find any parameter inside the intersection (or prove there is none).
    let seed = match minimize_quasiconvex(&dist_at, tau / 2.0)? {
        (t, v) if v <= tau => t,
        _ => return Ok(None),
    };

    // The sublevel set {t : dist(t) <= tau} is an interval; bisect its ends.
    let t_lo = if dist_at(0.0)? <= tau {
        0.0
    } else {
        bisect_boundary(&dist_at, 0.0, seed, tau)?
    };
    let t_hi = if dist_at(1.0)? <= tau {
        1.0
    } else {
        1.0 - bisect_boundary(&|t| dist_at(1.0 - t), 0.0, 1.0 - seed, tau)?
    };
    let lo = s1.eval(g, t_lo)?;
    let hi = s1.eval(g, t_hi)?;
    Ok(Some(TSegment::new(g, lo, hi)?))
}

/// Shrinking-bracket grid minimization of a quasiconvex function on [0, 1].
/// Ties at the discrete minimum are treated as one plateau block, so the
/// bracket always contains the true minimizer. Stops early once the value
/// drops below `good_enough`.
fn minimize_quasiconvex(
    f: &dyn Fn(f64) -> Result<f64>,
    good_enough: f64,
) -> Result<(f64, f64)> {
    const POINTS: usize = 17;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut best = (0.0, f64::INFINITY);
    for _ in 0..60 {
        let step = (hi - lo) / (POINTS - 1) as f64;
        let mut vals = [0.0; POINTS];
        for (i, v) in vals.iter_mut().enumerate() {
            let t = lo + step * i as f64;
            *v = f(t)?;
            if *v < best.1 {
                best = (t, *v);
            }
        }
        if best.1 <= good_enough || hi - lo < 1e-10 {
            return Ok(best);
        }
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let tie = 1e-12 + 1e-9 * min.abs();
        let i_lo = vals.iter().position(|&v| v <= min + tie).unwrap();
        let i_hi = vals.iter().rposition(|&v| v <= min + tie).unwrap();
        let new_lo = lo + step * i_lo.saturating_sub(1) as f64;
        let new_hi = lo + step * (i_hi + 1).min(POINTS - 1) as f64;
        if new_hi - new_lo >= 0.9 * (hi - lo) {
            // The plateau spans the bracket; no further refinement helps.
            return Ok(best);
        }
        lo = new_lo;
        hi = new_hi;
    }
    Ok(best)
}

/// Standard bisection for the boundary of `{t : f(t) <= tau}` given an
/// outside point `f(out) > tau` and an inside point `f(inside) <= tau`.
fn bisect_boundary(
    f: &dyn Fn(f64) -> Result<f64>,
    mut out: f64,
    mut inside: f64,
    tau: f64,
) -> Result<f64> {
    while (inside - out).abs() > 1e-10 {
        let mid = (out + inside) / 2.0;
        if f(mid)? <= tau {
            inside = mid;
        } else {
            out = mid;
        }
    }
    Ok(inside)
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

    fn unit(g: &MetricGraph, v: &str) -> RDivisor {
        RDivisor::at_vertex(g, v).unwrap()
    }

    #[test]
    fn rho_matches_resistance_for_points() {
        let g = g_path();
        assert!((rho(&g, &unit(&g, "v0"), &unit(&g, "v1")).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(rho(&g, &unit(&g, "v0"), &unit(&g, "v0")).unwrap(), 0.0);
        let c = g_circle();
        assert!((rho(&c, &unit(&c, "v0"), &unit(&c, "v1")).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn deviation_and_its_identity() {
        let g = g_path();
        let (a, b) = (unit(&g, "v0"), unit(&g, "v1"));
        let fwd = s_func(&g, &a, &b).unwrap();
        let bwd = s_func(&g, &b, &a).unwrap();
        assert!((fwd - 0.5).abs() < 1e-12);
        let r = rho(&g, &a, &b).unwrap();
        assert!((fwd + bwd - r * g.total_length()).abs() < 1e-10);

        let c = g_circle();
        let (a, b) = (unit(&c, "v0"), unit(&c, "v1"));
        assert!((s_func(&c, &a, &b).unwrap() - 0.125).abs() < 1e-12);
        assert!(
            (s_func(&c, &a, &b).unwrap() + s_func(&c, &b, &a).unwrap()
                - rho(&c, &a, &b).unwrap() * c.total_length())
            .abs()
                < 1e-10
        );
    }

    #[test]
    fn b_function_is_deviation_from_a_point() {
        let g = g_path();
        let d = RDivisor::new(
            &g,
            vec![(g.locate("e", 0.25).unwrap(), 1.0), (g.locate("e", 0.75).unwrap(), 1.0)],
        )
        .unwrap();
        let q = g.vertex_point("v0").unwrap();
        let base = RDivisor::at_point(&g, &q, 2.0).unwrap();
        assert!(
            (b_function(&g, &d, &q).unwrap() - s_func(&g, &base, &d).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn rescaling_is_a_homothety() {
        let g = g_circle();
        let a = RDivisor::new(
            &g,
            vec![(g.locate("e0", 0.2).unwrap(), 1.0), (g.vertex_point("v1").unwrap(), 1.0)],
        )
        .unwrap();
        let b = RDivisor::new(&g, vec![(g.locate("e1", 0.3).unwrap(), 2.0)]).unwrap();
        let r = rho(&g, &a, &b).unwrap();
        let r3 = rho(&g, &a.scale(&g, 3.0).unwrap(), &b.scale(&g, 3.0).unwrap()).unwrap();
        assert!((r3 - 3.0 * r).abs() < 1e-10);
    }

    #[test]
    fn t_path_on_the_path_graph() {
        let g = g_path();
        let seg = TSegment::new(&g, unit(&g, "v0"), unit(&g, "v1")).unwrap();
        assert!((seg.length() - 1.0).abs() < 1e-12);
        let p = seg.eval(&g, 0.3).unwrap();
        assert_eq!(p.entries().len(), 1);
        let (pt, m) = p.entries()[0];
        assert_eq!(pt, g.locate("e", 0.3).unwrap());
        assert!((m - 1.0).abs() < 1e-12);
        // Endpoint contracts are exact.
        assert_eq!(seg.eval(&g, 0.0).unwrap().entries(), seg.endpoints().0.entries());
        assert_eq!(seg.eval(&g, 1.0).unwrap().entries(), seg.endpoints().1.entries());
        assert!(seg.eval(&g, 1.2).is_err());
    }

    #[test]
    fn t_path_splits_mass_on_the_circle() {
        let c = g_circle();
        let seg = TSegment::new(&c, unit(&c, "v0"), unit(&c, "v1")).unwrap();
        let mid = seg.eval(&c, 0.5).unwrap();
        assert_eq!(mid.entries().len(), 2);
        for &(p, m) in mid.entries() {
            assert!((m - 0.5).abs() < 1e-9);
            let d0 = c.dist(&p, &c.vertex_point("v0").unwrap()).unwrap();
            assert!((d0 - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn t_path_is_an_isometry() {
        let c = g_circle();
        let a = RDivisor::new(
            &c,
            vec![(c.locate("e0", 0.1).unwrap(), 1.5), (c.vertex_point("v1").unwrap(), 0.5)],
        )
        .unwrap();
        let b = RDivisor::new(
            &c,
            vec![(c.locate("e1", 0.35).unwrap(), 1.0), (c.locate("e0", 0.4).unwrap(), 1.0)],
        )
        .unwrap();
        let seg = TSegment::new(&c, a, b).unwrap();
        for (s, t) in [(0.0, 1.0), (0.2, 0.7), (0.5, 0.6), (0.0, 0.35)] {
            let ps = seg.eval(&c, s).unwrap();
            let pt = seg.eval(&c, t).unwrap();
            let d = rho(&c, &ps, &pt).unwrap();
            assert!(
                (d - (t - s).abs() * seg.length()).abs() < 1e-8,
                "isometry broke at ({s}, {t}): {d} vs {}",
                (t - s).abs() * seg.length()
            );
        }
    }

    #[test]
    fn sub_paths_glue_to_the_whole() {
        let c = g_circle();
        let seg = TSegment::new(&c, unit(&c, "v0"), unit(&c, "v1")).unwrap();
        let (t1, t2) = (0.3, 0.8);
        let front = TSegment::new(&c, unit(&c, "v0"), seg.eval(&c, t2).unwrap()).unwrap();
        let back = TSegment::new(&c, seg.eval(&c, t1).unwrap(), unit(&c, "v1")).unwrap();
        for u in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let on_front = front.eval(&c, u).unwrap();
            let direct = seg.eval(&c, u * t2).unwrap();
            assert!(rho(&c, &on_front, &direct).unwrap() < 1e-9);
            let on_back = back.eval(&c, u).unwrap();
            let direct = seg.eval(&c, t1 + u * (1.0 - t1)).unwrap();
            assert!(rho(&c, &on_back, &direct).unwrap() < 1e-9);
        }
    }

    #[test]
    fn segment_membership() {
        let g = g_path();
        let seg = TSegment::new(&g, unit(&g, "v0"), unit(&g, "v1")).unwrap();
        assert!(segment_contains(&g, &seg, &unit(&g, "v0")).unwrap());
        let mid = RDivisor::new(&g, vec![(g.locate("e", 0.5).unwrap(), 1.0)]).unwrap();
        assert!(segment_contains(&g, &seg, &mid).unwrap());

        let c = g_circle();
        let cseg = TSegment::new(&c, unit(&c, "v0"), unit(&c, "v1")).unwrap();
        let off = RDivisor::new(&c, vec![(c.locate("e0", 0.25).unwrap(), 1.0)]).unwrap();
        assert!(!segment_contains(&c, &cseg, &off).unwrap());
        let split = cseg.eval(&c, 0.5).unwrap();
        assert!(segment_contains(&c, &cseg, &split).unwrap());

        let wrong = unit(&c, "v0").scale(&c, 2.0).unwrap();
        assert!(matches!(
            segment_contains(&c, &cseg, &wrong),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn deviation_triangle_with_equality_condition() {
        let c = g_circle();
        let d1 = unit(&c, "v0");
        let d3 = unit(&c, "v1");
        // Generic middle point: strict inequality.
        let d2 = RDivisor::new(&c, vec![(c.locate("e0", 0.25).unwrap(), 1.0)]).unwrap();
        let lhs = s_func(&c, &d1, &d3).unwrap();
        let rhs = s_func(&c, &d2, &d3).unwrap() + s_func(&c, &d1, &d2).unwrap();
        assert!(lhs <= rhs + 1e-10);
        assert!(rhs - lhs > 1e-4);
        // Middle point on the segment: equality.
        let seg = TSegment::new(&c, d1.clone(), d3.clone()).unwrap();
        let on = seg.eval(&c, 0.4).unwrap();
        let rhs_on = s_func(&c, &on, &d3).unwrap() + s_func(&c, &d1, &on).unwrap();
        assert!((lhs - rhs_on).abs() < 1e-8);
    }

    #[test]
    fn intersection_of_identical_segments() {
        let g = g_path();
        let seg = TSegment::new(&g, unit(&g, "v0"), unit(&g, "v1")).unwrap();
        let i = segment_intersection(&g, &seg, &seg).unwrap().unwrap();
        assert!(rho(&g, i.endpoints().0, seg.endpoints().0).unwrap() < 1e-6);
        assert!(rho(&g, i.endpoints().1, seg.endpoints().1).unwrap() < 1e-6);
    }

    #[test]
    fn intersection_of_overlapping_subsegments() {
        let g = g_path();
        let p = |x: f64| RDivisor::new(&g, vec![(g.locate("e", x).unwrap(), 1.0)]).unwrap();
        let s1 = TSegment::new(&g, unit(&g, "v0"), p(0.6)).unwrap();
        let s2 = TSegment::new(&g, p(0.4), unit(&g, "v1")).unwrap();
        let i = segment_intersection(&g, &s1, &s2).unwrap().unwrap();
        assert!(rho(&g, i.endpoints().0, &p(0.4)).unwrap() < 1e-6);
        assert!(rho(&g, i.endpoints().1, &p(0.6)).unwrap() < 1e-6);
    }

    #[test]
    fn intersection_at_a_shared_endpoint() {
        let c = g_circle();
        let quarter0 = RDivisor::new(&c, vec![(c.locate("e0", 0.25).unwrap(), 1.0)]).unwrap();
        let quarter1 = RDivisor::new(&c, vec![(c.locate("e1", 0.25).unwrap(), 1.0)]).unwrap();
        let s1 = TSegment::new(&c, unit(&c, "v0"), quarter0).unwrap();
        let s2 = TSegment::new(&c, unit(&c, "v0"), quarter1).unwrap();
        let i = segment_intersection(&c, &s1, &s2).unwrap().unwrap();
        assert!(i.length() < 1e-6);
        assert!(rho(&c, i.endpoints().0, &unit(&c, "v0")).unwrap() < 1e-6);
    }

    #[test]
    fn interior_crossing_is_found() {
        // Star with four legs; two paths cross only at the center, interior
        // to both segments. Endpoint or midpoint probing cannot see this.
        let g = MetricGraph::new(
            &["a", "b", "c", "d", "m"],
            &[
                ("ea", "a", "m", 0.5),
                ("eb", "b", "m", 0.5),
                ("ec", "c", "m", 0.5),
                ("ed", "d", "m", 0.5),
            ],
        )
        .unwrap();
        let s1 = TSegment::new(&g, unit(&g, "a"), unit(&g, "b")).unwrap();
        let s2 = TSegment::new(&g, unit(&g, "c"), unit(&g, "d")).unwrap();
        let center = unit(&g, "m");
        let i = segment_intersection(&g, &s1, &s2).unwrap().unwrap();
        assert!(i.length() < 1e-6);
        assert!(rho(&g, i.endpoints().0, &center).unwrap() < 1e-6);
        assert!(rho(&g, i.endpoints().1, &center).unwrap() < 1e-6);
    }

    #[test]
    fn disjoint_segments_return_none() {
        let c = g_circle();
        let p0 = |x: f64| RDivisor::new(&c, vec![(c.locate("e0", x).unwrap(), 1.0)]).unwrap();
        let p1 = |x: f64| RDivisor::new(&c, vec![(c.locate("e1", x).unwrap(), 1.0)]).unwrap();
        let s1 = TSegment::new(&c, p0(0.1), p0(0.2)).unwrap();
        let s2 = TSegment::new(&c, p1(0.3), p1(0.4)).unwrap();
        assert!(segment_intersection(&c, &s1, &s2).unwrap().is_none());
    }
}
