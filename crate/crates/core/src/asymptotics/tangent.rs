//! The one-parameter family of tangent geodesics whose envelope is the
//! arctic curve.

use super::moment::MomentFn;
use super::{AsymError, AsymParams};
use crate::boundary_profiles::BoundaryProfile;

/// Implicit equation of one member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentCurve {
    /// `xy * X Y + y * Y + x * X + c = 0` in the exponential coordinates
    /// `X = qq^{2x}`, `Y = qq^{2y}`.
    Hyperbola { xy: f64, y: f64, x: f64, c: f64 },
    /// `a x + b y + c = 0` in rescaled coordinates (`qq = 1`).
    Line { a: f64, b: f64, c: f64 },
}

impl TangentCurve {
    /// Coefficients at parameter `t` given `x(t)`.
    pub fn from_moment(t: f64, xt: f64, p: &AsymParams) -> Self {
        let g = p.gamma;
        if p.is_unit() {
            let a = (1.0 - xt) * (1.0 + g * xt);
            TangentCurve::Line {
                a,
                b: (1.0 + g) * xt,
                c: -a * t,
            }
        } else {
            TangentCurve::Hyperbola {
                xy: xt * g * (1.0 - xt),
                y: xt * t * (1.0 + g * xt),
                x: 1.0 - xt,
                c: -t * (1.0 + g * xt),
            }
        }
    }

    /// Coefficients of `d/dt F_t`, given `x(t)` and `x'(t)`.
    pub fn derivative_from_moment(t: f64, xt: f64, dxt: f64, p: &AsymParams) -> Self {
        let g = p.gamma;
        if p.is_unit() {
            let a = (1.0 - xt) * (1.0 + g * xt);
            let da = dxt * (g - 1.0 - 2.0 * g * xt);
            TangentCurve::Line {
                a: da,
                b: (1.0 + g) * dxt,
                c: -da * t - a,
            }
        } else {
            TangentCurve::Hyperbola {
                xy: g * dxt * (1.0 - 2.0 * xt),
                y: (1.0 + g * xt) * (xt + t * dxt) + g * t * xt * dxt,
                x: -dxt,
                c: -(1.0 + g * xt) - t * g * dxt,
            }
        }
    }

    /// Sum of the absolute values of the monomials of `d/dt F_t` at `(u, v)`,
    /// with every coefficient expanded so that cancellations inside a
    /// coefficient do not shrink the scale.
    pub fn derivative_scale(t: f64, xt: f64, dxt: f64, p: &AsymParams, u: f64, v: f64) -> f64 {
        let g = p.gamma;
        let one_gx = 1.0 + g * xt;
        let parts: Vec<f64> = if p.is_unit() {
            let da = dxt * (g - 1.0 - 2.0 * g * xt);
            vec![da * u, (1.0 + g) * dxt * v, da * t, (1.0 - xt) * one_gx]
        } else {
            vec![
                g * dxt * (1.0 - 2.0 * xt) * u * v,
                one_gx * xt * v,
                one_gx * t * dxt * v,
                g * t * xt * dxt * v,
                dxt * u,
                one_gx,
                t * g * dxt,
            ]
        };
        parts.iter().map(|m| m.abs()).sum()
    }

    /// Value of the defining polynomial at a point given in the curve's
    /// native coordinates.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.terms(u, v).iter().sum()
    }

    /// Monomials of [`TangentCurve::eval`], for relative error estimates.
    pub fn terms(&self, u: f64, v: f64) -> [f64; 4] {
        match *self {
            TangentCurve::Hyperbola { xy, y, x, c } => [xy * u * v, y * v, x * u, c],
            TangentCurve::Line { a, b, c } => [a * u, b * v, c, 0.0],
        }
    }

    /// Solves for the second coordinate at a given first coordinate.
    pub fn solve_second(&self, u: f64) -> Option<f64> {
        let (num, den) = match *self {
            TangentCurve::Hyperbola { xy, y, x, c } => (-(x * u + c), xy * u + y),
            TangentCurve::Line { a, b, c } => (-(a * u + c), b),
        };
        (den != 0.0).then(|| num / den)
    }

    /// Rescaled height `y` at rescaled abscissa `x` for either kind.
    pub fn height_at(&self, x: f64, p: &AsymParams) -> Option<f64> {
        match self {
            TangentCurve::Line { .. } => self.solve_second(x),
            TangentCurve::Hyperbola { .. } => {
                let lq2 = p.mode.log_q2();
                let big_y = self.solve_second((lq2 * x).exp())?;
                (big_y > 0.0).then(|| big_y.ln() / lq2)
            }
        }
    }
}

pub fn tangent_line(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> Result<TangentCurve, AsymError> {
    let xt = MomentFn::new(profile, p).value(t)?;
    Ok(TangentCurve::from_moment(t, xt, p))
}

/// The `qq = 1` tangent line built geometrically: through `P = (tau, 0)` and
/// orthogonal to `OQ` with `Q = ((1 - x)(1 + gamma x)/(1 + gamma), x)`.
pub fn geometric_line(tau: f64, xt: f64, gamma: f64) -> TangentCurve {
    let qx = (1.0 - xt) * (1.0 + gamma * xt) / (1.0 + gamma);
    let qy = xt;
    TangentCurve::Line {
        a: qx,
        b: qy,
        c: -qx * tau,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unit_line_passes_through_p_and_matches_geometry() {
        let prof = fixtures::min_slope();
        for gamma in [0.3, 1.0, 2.0] {
            let p = AsymParams::unit(gamma);
            let f = MomentFn::new(&prof, &p);
            for tau in [-1.0, 0.8, 2.5, 9.0] {
                let line = tangent_line(&prof, tau, &p).unwrap();
                assert!(line.eval(tau, 0.0).abs() < 1e-14);
                let xt = f.value(tau).unwrap();
                let (TangentCurve::Line { a, b, .. }, TangentCurve::Line { a: ga, b: gb, .. }) =
                    (line, geometric_line(tau, xt, gamma))
                else {
                    panic!("expected lines");
                };
                // Parallel normals: the 2x2 determinant vanishes.
                assert!((a * gb - b * ga).abs() < 1e-13 * (1.0 + a.abs() + b.abs()));
                assert!(geometric_line(tau, xt, gamma).eval(tau, 0.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn family_passes_through_exit_and_endpoint() {
        // The member at t is the geodesic through the exit point (L, qq^2)
        // and the displaced endpoint (1, R qq^2).
        let prof = fixtures::semicircle();
        for (qq, gamma) in [(1.5, 1.0), (0.6, 0.4)] {
            let p = AsymParams::new(gamma, qq).unwrap();
            let f = MomentFn::new(&prof, &p);
            let edge = qq.powi(4);
            for t in [edge * if qq > 1.0 { 1.5 } else { 0.5 }, edge * if qq > 1.0 { 7.0 } else { 0.1 }] {
                let xt = f.value(t).unwrap();
                let s = super::super::saddle::saddle_from_x(t, xt, &p).unwrap();
                let curve = TangentCurve::from_moment(t, xt, &p);
                let q2 = qq * qq;
                let scale: f64 = curve.terms(s.l, q2).iter().map(|v| v.abs()).sum();
                assert!(curve.eval(s.l, q2).abs() < 1e-12 * scale);
                let scale: f64 = curve.terms(1.0, s.r * q2).iter().map(|v| v.abs()).sum();
                assert!(curve.eval(1.0, s.r * q2).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn horizontal_axis_identity() {
        // F_t(X, 1) = (X - t)(1 - x)(1 + gamma x).
        let p = AsymParams::new(0.9, 1.3).unwrap();
        let prof = fixtures::gap();
        let f = MomentFn::new(&prof, &p);
        for t in [0.5, -2.0, 40.0] {
            let xt = f.value(t).unwrap();
            let c = TangentCurve::from_moment(t, xt, &p);
            for big_x in [0.2, 1.0, 7.0] {
                let expected = (big_x - t) * (1.0 - xt) * (1.0 + 0.9 * xt);
                assert!((c.eval(big_x, 1.0) - expected).abs() < 1e-12 * (1.0 + expected.abs()));
            }
        }
    }

    #[test]
    fn derivative_coefficients_match_finite_difference() {
        let prof = fixtures::min_slope();
        for p in [AsymParams::new(0.7, 1.6).unwrap(), AsymParams::new(2.0, 0.5).unwrap(), AsymParams::unit(1.3)] {
            let f = MomentFn::new(&prof, &p);
            let ts: Vec<f64> = if p.is_unit() { vec![-2.0, 0.8, 4.0] } else { vec![-3.0, 0.4, 60.0] };
            for t in ts {
                let Ok((x, dx)) = f.value_and_deriv(t) else { continue };
                let d = TangentCurve::derivative_from_moment(t, x, dx, &p);
                let h = 1e-6 * t.abs();
                let plus = TangentCurve::from_moment(t + h, f.value(t + h).unwrap(), &p);
                let minus = TangentCurve::from_moment(t - h, f.value(t - h).unwrap(), &p);
                for (u, v) in [(0.5, 1.5), (2.0, 0.3)] {
                    let fd = (plus.eval(u, v) - minus.eval(u, v)) / (2.0 * h);
                    let exact = d.eval(u, v);
                    assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "t={t}: {fd} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn gamma_zero_family() {
        let p = AsymParams::new(0.0, 2.0).unwrap();
        let xt = 0.3;
        let t = 20.0;
        let c = TangentCurve::from_moment(t, xt, &p);
        for big_x in [1.0, 3.0] {
            let expected = (t - (1.0 - xt) * big_x) / (t * xt);
            assert!((c.solve_second(big_x).unwrap() - expected).abs() < 1e-13);
        }
    }
}
