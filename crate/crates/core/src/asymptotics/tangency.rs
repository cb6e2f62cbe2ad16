//! Points where the freezing portions of the arctic curve touch the bottom
//! edge.

use super::moment::MomentFn;
use super::{AsymError, AsymParams};
use crate::boundary_profiles::{classify, BoundaryProfile, FeatureKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangencyPoint {
    pub kind: FeatureKind,
    /// Parameter value (`tau` in the `qq = 1` mode).
    pub t: f64,
    /// Abscissa of the contact point.
    pub x: f64,
    /// Set when `gamma = 0` pushes the contact point to the end of a
    /// slope-one run.
    pub degenerate: bool,
}

/// Bisection for a root of `f` on the open interval `(lo, hi)`, carried to
/// full double precision. `f` must change sign and may fail at the ends.
fn bisect(f: impl Fn(f64) -> Result<f64, AsymError>, lo: f64, hi: f64) -> Option<f64> {
    let nudge = 1e-14 * lo.abs().max(hi.abs()).max(1e-300);
    let (mut a, mut b) = (lo + nudge, hi - nudge);
    let fa = f(a).ok()?;
    let fb = f(b).ok()?;
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return Some(m);
        }
        let fm = f(m).ok()?;
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
}

/// One contact point per gap (where `x(t) = 1`) and per slope-one run
/// (where `x(t) = -1/gamma`), in order of the profile.
pub fn tangency_points(profile: &BoundaryProfile, p: &AsymParams) -> Vec<TangencyPoint> {
    let moment = MomentFn::new(profile, p);
    let mut out = Vec::new();
    for class in classify(profile, &p.mode).classes {
        let iv = class.t_interval;
        let target = match class.kind {
            FeatureKind::Gap => 1.0,
            FeatureKind::MinimalSlope if p.gamma == 0.0 => {
                let t = p.t_of_alpha(crate::exact_weights::to_f64(&class.alpha_lo));
                out.push(TangencyPoint {
                    kind: class.kind,
                    t,
                    x: p.coordinate_of_t(t),
                    degenerate: true,
                });
                continue;
            }
            FeatureKind::MinimalSlope => -1.0 / p.gamma,
            FeatureKind::Generic => continue,
        };
        if let Some(t) = bisect(|t| Ok(moment.value(t)? - target), iv.lo, iv.hi) {
            out.push(TangencyPoint {
                kind: class.kind,
                t,
                x: p.coordinate_of_t(t),
                degenerate: false,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn aztec_diamond_contact() {
        for qq in [0.5f64, 2.0, 1.3] {
            let p = AsymParams::new(1.0, qq).unwrap();
            let pts = tangency_points(&fixtures::aztec_diamond(), &p);
            assert_eq!(pts.len(), 1);
            let q2 = qq * qq;
            assert!((pts[0].t - 2.0 * q2 / (1.0 + q2)).abs() < 1e-12);
        }
        for gamma in [0.25, 1.0, 4.0] {
            let pts = tangency_points(&fixtures::aztec_diamond(), &AsymParams::unit(gamma));
            assert!((pts[0].x - gamma / (1.0 + gamma)).abs() < 1e-12);
        }
    }

    #[test]
    fn gap_contact_is_gamma_independent() {
        for gamma in [0.0, 0.3, 1.0, 7.0] {
            let pts = tangency_points(&fixtures::gap(), &AsymParams::unit(gamma));
            assert_eq!(pts.len(), 1);
            assert_eq!(pts[0].kind, FeatureKind::Gap);
            assert!((pts[0].t - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn fully_frozen_middle_contact() {
        let pts = tangency_points(&fixtures::fully_frozen(), &AsymParams::unit(1.0));
        assert_eq!(pts.len(), 3);
        assert!((pts[1].t - 0.75).abs() < 1e-12);
    }

    #[test]
    fn gamma_zero_runs_are_degenerate() {
        let pts = tangency_points(&fixtures::two_min_slope(), &AsymParams::unit(0.0));
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.degenerate));
        assert_eq!(pts[0].x, 0.0);
        assert!((pts[1].x - 0.8).abs() < 1e-15);
        let small = tangency_points(&fixtures::two_min_slope(), &AsymParams::unit(1e-6));
        assert_eq!(small.len(), 2);
        assert!(small[0].x.abs() < 1e-4 && (small[1].x - 0.8).abs() < 1e-4);
    }

    #[test]
    fn generic_profile_has_none() {
        assert!(tangency_points(&fixtures::semicircle(), &AsymParams::new(1.0, 2.0).unwrap()).is_empty());
    }
}
