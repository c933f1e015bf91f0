//! Canonical projection onto tropical targets and the induced homotopies.
//!
//! Projecting a divisor onto a segment or hull means rescaling it to the
//! target's degree and then reducing the target with respect to it; the
//! result is the member of the target closest in the divisor metric. On top
//! of the projection sit two parametrized deformations:
//!
//! * a *retraction* pulls an arbitrary divisor toward its projection, moving
//!   along the connecting segment so that at time `t` the distance left to
//!   the target is `kappa * (1 - t)` (points already closer stay put);
//! * a *contraction* slides every member of a hull toward a chosen base
//!   member at the same `kappa`-controlled rate, ending at the base.
//!
//! Both accept only rate constants `kappa` at least as large as the distance
//! they must absorb, so that time `0` is the identity.

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::reduced::{
    hull_contains, reduced_on_hull, reduced_on_segment, ReducedResult, TConvexHull,
};
use crate::space::{check_degree_match, rho, rho_tol, segment_contains, TSegment};

/// A set a divisor can be projected onto: a tropical segment or hull.
#[derive(Clone, Debug)]
pub enum ProjectionTarget {
    Segment(TSegment),
    Hull(TConvexHull),
}

impl ProjectionTarget {
    pub fn degree(&self) -> f64 {
        match self {
            ProjectionTarget::Segment(s) => s.degree(),
            ProjectionTarget::Hull(h) => h.degree(),
        }
    }

    /// Membership test for divisors of matching degree.
    pub fn contains(&self, g: &MetricGraph, d: &RDivisor) -> Result<bool> {
        match self {
            ProjectionTarget::Segment(s) => segment_contains(g, s, d),
            ProjectionTarget::Hull(h) => hull_contains(g, h, d),
        }
    }

    fn reduce(&self, g: &MetricGraph, e: &RDivisor) -> Result<ReducedResult> {
        match self {
            ProjectionTarget::Segment(s) => reduced_on_segment(g, s, e),
            ProjectionTarget::Hull(h) => reduced_on_hull(g, h, e),
        }
    }
}

/// Project `d` onto the target: rescale to the target's degree, then reduce.
/// The result carries the projected divisor plus its certificate.
pub fn canonical_project(
    g: &MetricGraph,
    target: &ProjectionTarget,
    d: &RDivisor,
) -> Result<ReducedResult> {
    d.check_graph(g)?;
    if d.degree() <= g.tolerances().val_rel {
        return Err(Error::ZeroDegreeInput);
    }
    let scaled = d.scale(g, target.degree() / d.degree())?;
    target.reduce(g, &scaled)
}

/// Distance from `d` (same degree as the target) to the target, i.e. to the
/// closest member, which is the reduced divisor.
pub fn target_distance(g: &MetricGraph, target: &ProjectionTarget, d: &RDivisor) -> Result<f64> {
    d.check_graph(g)?;
    check_degree_match(target.degree(), d.degree())?;
    let r = target.reduce(g, d)?;
    rho(g, d, &r.divisor)
}

/// Retraction sample `h(t, d)`: the point at distance `min(kappa * (1 - t),
/// dist(d, target))` from the target on the segment joining the projection
/// of `d` to `d`. Time `0` is the identity on the `kappa`-ball around the
/// target, time `1` is the projection.
pub fn retraction_sample(
    g: &MetricGraph,
    target: &ProjectionTarget,
    d: &RDivisor,
    t: f64,
    kappa: f64,
) -> Result<RDivisor> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    d.check_graph(g)?;
    check_degree_match(target.degree(), d.degree())?;
    let base = target.reduce(g, d)?.divisor;
    let dist = rho(g, d, &base)?;
    let slack = rho_tol(d.degree());
    if dist <= slack {
        // Already on the target: fixed for all times.
        return Ok(base);
    }
    if kappa < dist - slack {
        return Err(Error::KappaTooSmall { kappa, required: dist });
    }
    let remaining = kappa * (1.0 - t);
    if dist <= remaining {
        return Ok(d.clone());
    }
    let seg = TSegment::new(g, base, d.clone())?;
    seg.eval(g, (remaining / dist).clamp(0.0, 1.0))
}

/// Contraction sample `H(t, d)` of a hull onto one of its members `base`:
/// `d` moves along the segment from `base` to `d`, keeping distance
/// `min(kappa * (1 - t), rho(base, d))` from `base`. Time `0` is the
/// identity (for `kappa >= rho(base, d)`), time `1` sits at `base`.
pub fn contraction_sample(
    g: &MetricGraph,
    hull: &TConvexHull,
    base: &RDivisor,
    d: &RDivisor,
    t: f64,
    kappa: f64,
) -> Result<RDivisor> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange { name: "t", value: t });
    }
    base.check_graph(g)?;
    d.check_graph(g)?;
    check_degree_match(hull.degree(), base.degree())?;
    check_degree_match(hull.degree(), d.degree())?;
    if !hull_contains(g, hull, base)? || !hull_contains(g, hull, d)? {
        return Err(Error::NotInHull);
    }
    let dist = rho(g, base, d)?;
    let slack = rho_tol(d.degree());
    if dist <= slack {
        return Ok(base.clone());
    }
    if kappa < dist - slack {
        return Err(Error::KappaTooSmall { kappa, required: dist });
    }
    let remaining = kappa * (1.0 - t);
    if dist <= remaining {
        return Ok(d.clone());
    }
    let seg = TSegment::new(g, base.clone(), d.clone())?;
    seg.eval(g, (remaining / dist).clamp(0.0, 1.0))
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

    fn pt(g: &MetricGraph, e: &str, x: f64) -> RDivisor {
        RDivisor::new(g, vec![(g.locate(e, x).unwrap(), 1.0)]).unwrap()
    }

    fn seg_target(g: &MetricGraph, a: RDivisor, b: RDivisor) -> ProjectionTarget {
        ProjectionTarget::Segment(TSegment::new(g, a, b).unwrap())
    }

    #[test]
    fn members_project_to_themselves() {
        let g = g_path();
        let target = seg_target(&g, unit(&g, "v0"), unit(&g, "v1"));
        let d = pt(&g, "e", 0.35);
        let proj = canonical_project(&g, &target, &d).unwrap();
        assert!(rho(&g, &proj.divisor, &d).unwrap() < 1e-6);
    }

    #[test]
    fn projection_rescales_degree() {
        let g = g_path();
        let target = seg_target(&g, unit(&g, "v0"), pt(&g, "e", 0.4));
        let two = unit(&g, "v1").scale(&g, 2.0).unwrap();
        let proj = canonical_project(&g, &target, &two).unwrap();
        assert!((proj.divisor.degree() - 1.0).abs() < 1e-9);
        assert!(rho(&g, &proj.divisor, &pt(&g, "e", 0.4)).unwrap() < 1e-6);
    }

    #[test]
    fn zero_degree_rejected() {
        let g = g_path();
        let target = seg_target(&g, unit(&g, "v0"), unit(&g, "v1"));
        let empty = RDivisor::empty(&g);
        assert!(matches!(
            canonical_project(&g, &target, &empty),
            Err(Error::ZeroDegreeInput)
        ));
    }

    #[test]
    fn distance_to_target() {
        let g = g_path();
        let target = seg_target(&g, unit(&g, "v0"), pt(&g, "e", 0.4));
        let d = unit(&g, "v1");
        let dist = target_distance(&g, &target, &d).unwrap();
        assert!((dist - 0.6).abs() < 1e-6);
        // Members are at distance zero.
        let on = pt(&g, "e", 0.2);
        assert!(target_distance(&g, &target, &on).unwrap() < 1e-6);
    }

    #[test]
    fn retraction_interpolates() {
        let g = g_path();
        let target = ProjectionTarget::Hull(
            TConvexHull::new(&g, vec![pt(&g, "e", 0.4)]).unwrap(),
        );
        let d = unit(&g, "v1");
        // Distance to the one-point target is 0.6; kappa = 0.6 at t = 0.5
        // leaves 0.3 to the target: the point at 0.7 along the edge.
        let h = retraction_sample(&g, &target, &d, 0.5, 0.6).unwrap();
        assert!(rho(&g, &h, &pt(&g, "e", 0.7)).unwrap() < 1e-6);
        // Endpoints of the deformation.
        let h0 = retraction_sample(&g, &target, &d, 0.0, 0.6).unwrap();
        assert!(rho(&g, &h0, &d).unwrap() < 1e-6);
        let h1 = retraction_sample(&g, &target, &d, 1.0, 0.6).unwrap();
        assert!(rho(&g, &h1, &pt(&g, "e", 0.4)).unwrap() < 1e-6);
        // Points on the target never move.
        let on = pt(&g, "e", 0.4);
        let fixed = retraction_sample(&g, &target, &on, 0.3, 0.6).unwrap();
        assert!(rho(&g, &fixed, &on).unwrap() < 1e-9);
    }

    #[test]
    fn retraction_needs_a_large_enough_rate() {
        let g = g_path();
        let target = ProjectionTarget::Hull(
            TConvexHull::new(&g, vec![pt(&g, "e", 0.4)]).unwrap(),
        );
        let d = unit(&g, "v1");
        assert!(matches!(
            retraction_sample(&g, &target, &d, 0.5, 0.5),
            Err(Error::KappaTooSmall { .. })
        ));
        assert!(matches!(
            retraction_sample(&g, &target, &d, 1.5, 0.6),
            Err(Error::ParameterOutOfRange { name: "t", .. })
        ));
    }

    #[test]
    fn contraction_slides_toward_base() {
        let g = g_path();
        let hull = TConvexHull::new(&g, vec![unit(&g, "v0"), unit(&g, "v1")]).unwrap();
        let base = unit(&g, "v0");
        let d = unit(&g, "v1");
        let h = contraction_sample(&g, &hull, &base, &d, 0.25, 1.0).unwrap();
        assert!(rho(&g, &h, &pt(&g, "e", 0.75)).unwrap() < 1e-6);
        let h0 = contraction_sample(&g, &hull, &base, &d, 0.0, 1.0).unwrap();
        assert!(rho(&g, &h0, &d).unwrap() < 1e-9);
        let h1 = contraction_sample(&g, &hull, &base, &d, 1.0, 1.0).unwrap();
        assert!(rho(&g, &h1, &base).unwrap() < 1e-9);
    }

    #[test]
    fn contraction_validates_membership_and_rate() {
        let g = g_circle();
        let hull = TConvexHull::new(&g, vec![unit(&g, "v0"), unit(&g, "v1")]).unwrap();
        let base = unit(&g, "v0");
        let outside = pt(&g, "e0", 0.25);
        assert!(matches!(
            contraction_sample(&g, &hull, &base, &outside, 0.5, 1.0),
            Err(Error::NotInHull)
        ));
        let d = unit(&g, "v1");
        assert!(matches!(
            contraction_sample(&g, &hull, &base, &d, 0.5, 0.1),
            Err(Error::KappaTooSmall { .. })
        ));
    }
}
