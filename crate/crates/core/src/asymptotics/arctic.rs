//! Parametric arctic curve as the envelope of the tangent family.

use std::f64::consts::FRAC_PI_2;

use super::moment::MomentFn;
use super::tangent::TangentCurve;
use super::{AsymError, AsymParams};
use crate::boundary_profiles::{classify, BoundaryProfile, Classification, TInterval};
use crate::exact_weights::to_f64;

/// Default cap on the tangent substitution `t = end +- tan(theta)`.
pub const DEFAULT_THETA_CAP: f64 = FRAC_PI_2 - 1e-3;

/// One point of the arctic curve; `t` is `tau` in the `qq = 1` mode and is
/// infinite for the far-field point where the portions meet the top edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub interval_tag: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcticCurve {
    pub samples: Vec<CurveSample>,
    /// Grid points dropped because the formulas were singular there.
    pub singular: usize,
}

impl ArcticCurve {
    pub fn tags(&self) -> Vec<usize> {
        let mut tags: Vec<usize> = self.samples.iter().map(|s| s.interval_tag).collect();
        tags.dedup();
        tags
    }
}

fn singular(t: f64, reason: &str) -> AsymError {
    AsymError::Singular {
        t,
        reason: reason.to_string(),
    }
}

/// `(X, Y)` from `x(t)`, `x'(t)`: the positive root of the envelope quadratic
/// `a X^2 + B X - c = 0`, then `Y` from the family equation.
pub fn arctic_big_xy(t: f64, x: f64, dx: f64, gamma: f64) -> Result<(f64, f64), AsymError> {
    let g = gamma;
    let one_m = 1.0 - x;
    let one_gx = 1.0 + g * x;
    let a = g * one_m * one_m * dx;
    let c = t * t * one_gx * one_gx * dx;
    let b = (1.0 + g) * x * one_m * one_gx + t * dx * (one_gx * one_gx - g * one_m * one_m);
    let cross = t * one_gx * one_m * dx;
    let omega_sq = b * b + 4.0 * g * cross * cross;
    debug_assert!(omega_sq >= 0.0);
    let omega = omega_sq.sqrt();
    // Product of roots is -c/a, so exactly one root is positive; pick the
    // sign in front of omega accordingly.
    let s = if a != 0.0 { a.signum() } else { b.signum() };
    let big_x = if s * b >= 0.0 {
        2.0 * c / (b + s * omega)
    } else {
        (s * omega - b) / (2.0 * a)
    };
    let num = t * one_gx - one_m * big_x;
    let den = x * (t * one_gx + g * one_m * big_x);
    if den == 0.0 {
        return Err(singular(t, "vanishing denominator in Y(t)"));
    }
    let big_y = num / den;
    if !(big_x.is_finite() && big_y.is_finite()) {
        return Err(singular(t, "non-finite point"));
    }
    if big_x <= 0.0 || big_y <= 0.0 {
        return Err(singular(t, "point outside the positive quadrant"));
    }
    Ok((big_x, big_y))
}

/// `(X, Y)` evaluated term by term as displayed in the closed form with the
/// sign `epsilon(qq)`; needs `gamma > 0`. Used to cross-check
/// [`arctic_big_xy`].
pub fn arctic_big_xy_displayed(t: f64, x: f64, dx: f64, gamma: f64, epsilon: f64) -> (f64, f64) {
    let g = gamma;
    let one_m = 1.0 - x;
    let one_gx = 1.0 + g * x;
    let omega = ((( 1.0 + g) * x * one_m * one_gx + t * dx * (one_gx * one_gx - g * one_m * one_m)).powi(2)
        + 4.0 * g * (t * one_gx * one_m * dx).powi(2))
    .sqrt();
    let big_x = t
        - ((1.0 + g) * (x * one_m * one_gx + t * dx * (1.0 + g * x * x)) - epsilon * omega)
            / (2.0 * g * one_m * one_m * dx);
    let big_y = (epsilon * omega - (1.0 - g) * x * one_m * one_gx - (1.0 + g) * t * dx * (1.0 - g * x * x))
        / (2.0 * g * x * x * (one_m * one_gx + (1.0 + g) * t * dx));
    (big_x, big_y)
}

/// Rescaled `(x, y)` in the `qq = 1` mode.
pub fn arctic_unit_xy(tau: f64, x: f64, dx: f64, gamma: f64) -> Result<(f64, f64), AsymError> {
    let g = gamma;
    let den = (1.0 + g * x * x) * dx;
    if den == 0.0 {
        return Err(singular(tau, "vanishing denominator"));
    }
    let px = tau - x * (1.0 - x) * (1.0 + g * x) / den;
    let py = ((1.0 - x) * (1.0 + g * x)).powi(2) / ((1.0 + g) * den);
    if !(px.is_finite() && py.is_finite()) {
        return Err(singular(tau, "non-finite point"));
    }
    Ok((px, py))
}

/// Limit point of the curve as `t -> +-infinity`, where it touches the top
/// edge `y = 1` horizontally.
pub fn far_field_point(profile: &BoundaryProfile, p: &AsymParams) -> (f64, f64) {
    if p.is_unit() {
        // x(tau) = 1 - 1/tau + (1/2 - m1)/tau^2 + ..., with m1 the mean of alpha.
        let m1: f64 = profile
            .segments
            .iter()
            .map(|s| 0.5 * to_f64(&(&s.alpha_lo + s.alpha_hi())) * to_f64(&s.width()))
            .sum();
        let g = p.gamma;
        return (m1 + (1.0 - g) / (2.0 * (1.0 + g)), 1.0);
    }
    // x'(t) ~ b qq^{-2} / t^2 with b = sum (A_hi - A_lo)/c.
    let b: f64 = profile
        .segments
        .iter()
        .map(|s| (p.t_of_alpha(to_f64(&s.alpha_hi())) - p.t_of_alpha(to_f64(&s.alpha_lo))) / to_f64(&s.slope))
        .sum();
    let q2 = p.qq() * p.qq();
    let big_x = b * (p.gamma + q2) / ((q2 - 1.0) * (1.0 + p.gamma));
    (big_x.ln() / p.mode.log_q2(), 1.0)
}

/// Evaluator bound to one profile and parameter set.
#[derive(Debug, Clone)]
pub struct ArcticSolver {
    moment: MomentFn,
    params: AsymParams,
    classification: Classification,
}

impl ArcticSolver {
    pub fn new(profile: &BoundaryProfile, p: &AsymParams) -> Self {
        Self {
            moment: MomentFn::new(profile, p),
            params: *p,
            classification: classify(profile, &p.mode),
        }
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn moment(&self) -> &MomentFn {
        &self.moment
    }

    /// Rescaled `(x, y)` at a finite parameter.
    pub fn point_xy(&self, t: f64) -> Result<(f64, f64), AsymError> {
        let (x, dx) = self.moment.value_and_deriv(t)?;
        let p = &self.params;
        if p.is_unit() {
            return arctic_unit_xy(t, x, dx, p.gamma);
        }
        let (big_x, big_y) = arctic_big_xy(t, x, dx, p.gamma)?;
        let lq2 = p.mode.log_q2();
        Ok((big_x.ln() / lq2, big_y.ln() / lq2))
    }

    pub fn point(&self, t: f64) -> Result<CurveSample, AsymError> {
        let tag = self
            .classification
            .domain
            .iter()
            .find(|d| d.interval.contains(t))
            .map(|d| d.tag)
            .ok_or(AsymError::Undefined(t))?;
        let (x, y) = self.point_xy(t)?;
        Ok(CurveSample {
            t,
            x,
            y,
            interval_tag: tag,
        })
    }
}

pub fn arctic_point(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> Result<CurveSample, AsymError> {
    ArcticSolver::new(profile, p).point(t)
}

/// Relative residuals `|F_t|` and `|d/dt F_t|` at the arctic point of
/// parameter `t`. The derivative is a central difference with step
/// `1e-6 |t|`; each residual is divided by the sum of the absolute values of
/// the monomials it is made of.
pub fn envelope_residuals(solver: &ArcticSolver, t: f64) -> Result<(f64, f64), AsymError> {
    let p = solver.params;
    let (x, dx) = solver.moment.value_and_deriv(t)?;
    let (u, v) = if p.is_unit() {
        arctic_unit_xy(t, x, dx, p.gamma)?
    } else {
        arctic_big_xy(t, x, dx, p.gamma)?
    };
    let curve = TangentCurve::from_moment(t, x, &p);
    let scale: f64 = curve.terms(u, v).iter().map(|m| m.abs()).sum();
    let h = 1e-6 * t.abs().max(1e-3);
    let at = |s: f64| -> Result<f64, AsymError> {
        Ok(TangentCurve::from_moment(s, solver.moment.value(s)?, &p).eval(u, v))
    };
    let fd = (at(t + h)? - at(t - h)?) / (2.0 * h);
    let dscale = TangentCurve::derivative_scale(t, x, dx, &p, u, v);
    let rel = |val: f64, sc: f64| if sc == 0.0 { val.abs() } else { val.abs() / sc };
    Ok((rel(curve.eval(u, v), scale), rel(fd, dscale)))
}

/// Grid over one sub-interval: Chebyshev nodes for a bounded interval,
/// tangent substitution for a half-line. Endpoints are never included.
fn grid(iv: TInterval, n: usize, theta_cap: f64) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let mut pts: Vec<f64> = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => {
            let mid = 0.5 * (iv.lo + iv.hi);
            let half = 0.5 * (iv.hi - iv.lo);
            (0..n)
                .map(|k| mid - half * (std::f64::consts::PI * (k as f64 + 0.5) / nf).cos())
                .collect()
        }
        (true, false) => (1..=n).map(|k| iv.lo + (theta_cap * k as f64 / nf).tan()).collect(),
        (false, true) => (1..=n).map(|k| iv.hi - (theta_cap * k as f64 / nf).tan()).collect(),
        (false, false) => (0..n)
            .map(|k| (theta_cap * (2.0 * (k as f64 + 0.5) / nf - 1.0)).tan())
            .collect(),
    };
    pts.retain(|t| iv.lo < *t && *t < iv.hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Samples every admissible portion of the arctic curve. Each connected
/// piece of the parameter domain is split at the points where `x(t)`
/// vanishes or diverges, and each part gets `samples_per_interval` points.
/// Pieces reaching `t = +-infinity` also get the exact far-field point.
pub fn arctic_curve(profile: &BoundaryProfile, p: &AsymParams, samples_per_interval: usize) -> ArcticCurve {
    arctic_curve_with_cap(profile, p, samples_per_interval, DEFAULT_THETA_CAP)
}

pub fn arctic_curve_with_cap(
    profile: &BoundaryProfile,
    p: &AsymParams,
    samples_per_interval: usize,
    theta_cap: f64,
) -> ArcticCurve {
    let solver = ArcticSolver::new(profile, p);
    let far = far_field_point(profile, p);
    let mut curve = ArcticCurve::default();
    let nodes = solver.moment.singular_points();
    for piece in &solver.classification.domain {
        let iv = piece.interval;
        let mut cuts: Vec<f64> = nodes
            .iter()
            .copied()
            .filter(|t| iv.lo < *t && *t < iv.hi)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut bounds = vec![iv.lo];
        bounds.extend(cuts);
        bounds.push(iv.hi);
        let mut ts: Vec<f64> = bounds
            .windows(2)
            .flat_map(|w| grid(TInterval { lo: w[0], hi: w[1] }, samples_per_interval, theta_cap))
            .collect();
        ts.sort_by(f64::total_cmp);
        let mut samples = Vec::with_capacity(ts.len() + 2);
        if iv.lo == f64::NEG_INFINITY {
            samples.push(CurveSample {
                t: f64::NEG_INFINITY,
                x: far.0,
                y: far.1,
                interval_tag: piece.tag,
            });
        }
        for t in ts {
            match solver.point_xy(t) {
                Ok((x, y)) => samples.push(CurveSample {
                    t,
                    x,
                    y,
                    interval_tag: piece.tag,
                }),
                Err(_) => curve.singular += 1,
            }
        }
        if iv.hi == f64::INFINITY {
            samples.push(CurveSample {
                t: f64::INFINITY,
                x: far.0,
                y: far.1,
                interval_tag: piece.tag,
            });
        }
        curve.samples.extend(samples);
    }
    curve
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn aztec_circle_point() {
        let p = AsymParams::unit(1.0);
        let s = arctic_point(&fixtures::aztec_diamond(), 1.0, &p);
        // x(1) = 0 makes the tangent pass through the corner: still finite.
        let s = s.unwrap();
        assert!((s.x - 1.0).abs() < 1e-14 && (s.y - 0.5).abs() < 1e-14);
    }

    #[test]
    fn unit_mode_circle_and_semicircle() {
        let p = AsymParams::unit(1.0);
        let c = arctic_curve(&fixtures::aztec_diamond(), &p, 64);
        assert!(c.samples.len() > 150);
        for s in &c.samples {
            let r = (s.x - 0.5).powi(2) + (s.y - 0.5).powi(2) - 0.25;
            assert!(r.abs() < 1e-9, "{s:?}");
        }
        let c = arctic_curve(&fixtures::semicircle(), &p, 64);
        assert_eq!(c.tags(), vec![0, 1]);
        for s in &c.samples {
            assert!((s.x * s.x + s.y * s.y - 2.0 * s.x).abs() < 1e-9, "{s:?}");
        }
    }

    #[test]
    fn stable_root_matches_displayed_form() {
        for (qq, gamma) in [(1.7, 1.0), (0.6, 0.3), (2.5, 4.0), (0.9, 1.5)] {
            let p = AsymParams::new(gamma, qq).unwrap();
            for prof in [fixtures::semicircle(), fixtures::min_slope(), fixtures::gap()] {
                let solver = ArcticSolver::new(&prof, &p);
                for s in arctic_curve(&prof, &p, 20).samples.iter().filter(|s| s.t.is_finite()) {
                    let (x, dx) = solver.moment().value_and_deriv(s.t).unwrap();
                    let (bx, by) = arctic_big_xy(s.t, x, dx, gamma).unwrap();
                    let (dxd, dyd) = arctic_big_xy_displayed(s.t, x, dx, gamma, p.epsilon());
                    assert!((bx - dxd).abs() < 1e-7 * (1.0 + bx.abs()), "qq={qq} t={}: {bx} vs {dxd}", s.t);
                    assert!((by - dyd).abs() < 1e-7 * (1.0 + by.abs()), "qq={qq} t={}: {by} vs {dyd}", s.t);
                }
            }
        }
    }

    #[test]
    fn gamma_zero_limit() {
        for qq in [0.5, 1.8] {
            let p = AsymParams::new(0.0, qq).unwrap();
            let prof = fixtures::min_slope();
            let f = MomentFn::new(&prof, &p);
            for s in arctic_curve(&prof, &p, 15).samples.iter().filter(|s| s.t.is_finite()) {
                let t = s.t;
                let (x, dx) = f.value_and_deriv(t).unwrap();
                let den = x * (1.0 - x) + t * dx;
                let ex = t * t * dx / den;
                let ey = ((1.0 - x) + t * dx) / den;
                let (bx, by) = arctic_big_xy(t, x, dx, 0.0).unwrap();
                assert!((bx - ex).abs() < 1e-10 * ex.abs(), "t={t}");
                assert!((by - ey).abs() < 1e-10 * ey.abs(), "t={t}");
            }
        }
    }

    #[test]
    fn far_field_limit() {
        for qq in [0.5, 1.0, 2.0] {
            for gamma in [0.5, 1.0, 3.0] {
                let p = AsymParams::new(gamma, qq).unwrap();
                for prof in [fixtures::semicircle(), fixtures::gap()] {
                    let solver = ArcticSolver::new(&prof, &p);
                    let (fx, fy) = far_field_point(&prof, &p);
                    assert_eq!(fy, 1.0);
                    // The unit-mode approach is only O(1/tau), and larger tau
                    // loses digits to cancellation in 1 - x.
                    let (far, tol) = if p.is_unit() { (1e5, 1e-4) } else { (1e7, 1e-5) };
                    for t in [far, -far] {
                        let (x, y) = solver.point_xy(t).unwrap();
                        assert!((x - fx).abs() < tol, "qq={qq} g={gamma} t={t}: {x} vs {fx}");
                        assert!((y - 1.0).abs() < tol);
                    }
                }
            }
        }
        let (x, _) = far_field_point(&fixtures::semicircle(), &AsymParams::unit(0.5));
        assert!((x - 3.5 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn envelope_property_on_fixtures() {
        for p in [AsymParams::new(1.0, 1.7).unwrap(), AsymParams::new(0.4, 0.6).unwrap(), AsymParams::unit(2.0)] {
            for prof in [fixtures::semicircle(), fixtures::min_slope(), fixtures::gap(), fixtures::aztec_diamond()] {
                let solver = ArcticSolver::new(&prof, &p);
                for s in arctic_curve(&prof, &p, 12).samples.iter().filter(|s| s.t.is_finite()) {
                    let (r0, r1) = envelope_residuals(&solver, s.t).unwrap();
                    assert!(r0 < 1e-9 && r1 < 1e-6, "{:?} t={}: {r0} {r1}", prof.name, s.t);
                }
            }
        }
    }

    #[test]
    fn tag_counts() {
        let p = AsymParams::new(1.0, 1.5).unwrap();
        assert_eq!(arctic_curve(&fixtures::semicircle(), &p, 10).tags().len(), 2);
        assert_eq!(arctic_curve(&fixtures::min_slope(), &p, 10).tags().len(), 3);
        assert_eq!(arctic_curve(&fixtures::aztec_diamond(), &p, 10).tags(), vec![0]);
        let unit = AsymParams::unit(1.0);
        assert_eq!(arctic_curve(&fixtures::min_slope(), &unit, 10).tags().len(), 3);
    }

    #[test]
    fn continuity_in_qq() {
        let prof = fixtures::semicircle();
        let unit = ArcticSolver::new(&prof, &AsymParams::unit(1.0));
        for qq in [1.0 + 1e-4, 1.0 - 1e-4] {
            let near = ArcticSolver::new(&prof, &AsymParams::new(1.0, qq).unwrap());
            for tau in [-3.0, -0.5, 2.2, 5.0] {
                let (ux, uy) = unit.point_xy(tau).unwrap();
                let (x, y) = near.point_xy(qq.powf(2.0 * tau)).unwrap();
                assert!((ux - x).abs() < 1e-2 && (uy - y).abs() < 1e-2);
            }
        }
    }
}
