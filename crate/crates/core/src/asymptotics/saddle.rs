//! Closed-form solution of the saddle-point system for the most likely exit
//! point of the outermost path.

use super::moment::MomentFn;
use super::{AsymError, AsymParams};
use crate::boundary_profiles::BoundaryProfile;
use crate::exact_weights::to_f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub t: f64,
    pub qq: f64,
    pub k: f64,
    pub f: f64,
    pub l: f64,
    pub r: f64,
}

impl SaddleSolution {
    fn log_base(&self, value: f64) -> f64 {
        value.ln() / (2.0 * self.qq.ln())
    }

    pub fn kappa(&self) -> f64 {
        self.log_base(self.k)
    }

    pub fn phi(&self) -> f64 {
        self.log_base(self.f)
    }

    /// Exit abscissa.
    pub fn xi(&self) -> f64 {
        self.log_base(self.l)
    }

    /// Overshoot of the displaced endpoint.
    pub fn rho(&self) -> f64 {
        self.log_base(self.r)
    }

    /// The four saddle equations, each written as `lhs - rhs`; `x` is the
    /// moment function at `t`.
    pub fn residuals(&self, gamma: f64, x: f64) -> [f64; 4] {
        let Self { t, qq, k, f, l, r } = *self;
        let q2 = qq * qq;
        [
            gamma * (l - f) * (r - f) - (f - 1.0) * (l * r - f),
            gamma * (q2 - k) * (k * l - t) - (k - 1.0) * (k * l - q2 * t),
            (k * l - q2 * t) * x - (k * l - t),
            q2 * (l * r - f) * (k * l - t) - (l - f) * (k * l - q2 * t),
        ]
    }

    /// Range constraints: for `qq > 1`, `1 <= K <= qq^2`, `1 <= F <= min(L, R)`,
    /// `1 <= L <= qq^{2 mu}`, `R >= 1`; mirrored for `qq < 1`.
    pub fn within_bounds(&self, mu: f64, slack: f64) -> bool {
        let q2 = self.qq * self.qq;
        let qmu = self.qq.powf(2.0 * mu);
        let le = |a: f64, b: f64| a <= b + slack * (1.0 + b.abs());
        if self.qq > 1.0 {
            le(1.0, self.k)
                && le(self.k, q2)
                && le(1.0, self.f)
                && le(self.f, self.l.min(self.r))
                && le(1.0, self.l)
                && le(self.l, qmu)
                && le(1.0, self.r)
        } else {
            le(q2, self.k)
                && le(self.k, 1.0)
                && le(self.l.max(self.r), self.f)
                && le(self.f, 1.0)
                && le(qmu, self.l)
                && le(self.l, 1.0)
                && le(self.r, 1.0)
        }
    }
}

/// `K, F, L, R` at parameter `t`; `R` is infinite where `x(t) = 0`.
pub fn saddle_from_x(t: f64, x: f64, p: &AsymParams) -> Result<SaddleSolution, AsymError> {
    if p.is_unit() {
        return Err(AsymError::Domain("the saddle variables need qq != 1".into()));
    }
    let g = p.gamma;
    let qq = p.qq();
    let q2 = qq * qq;
    let singular = |reason: &str| AsymError::Singular {
        t,
        reason: reason.to_string(),
    };
    if x == 1.0 {
        return Err(singular("1 - x(t) vanishes"));
    }
    let a = 1.0 + g * x;
    let b = 1.0 + g * q2 * x;
    let mix = t * a + g * (1.0 - x);
    if b == 0.0 || a == 0.0 {
        return Err(singular("1 + gamma x(t) vanishes"));
    }
    if mix == 0.0 {
        return Err(singular("t(1 + gamma x) + gamma(1 - x) vanishes"));
    }
    let k = b / a;
    let f = (1.0 + g) * t * a / (b * mix);
    let l = t * (1.0 - q2 * x) * a / ((1.0 - x) * b);
    let r = if x == 0.0 {
        f64::INFINITY
    } else {
        (t * a - (1.0 - x)) / (q2 * x * mix)
    };
    Ok(SaddleSolution { t, qq, k, f, l, r })
}

pub fn saddle_kflr(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> Result<SaddleSolution, AsymError> {
    let x = MomentFn::new(profile, p).value(t)?;
    saddle_from_x(t, x, p)
}

/// Whether `t` lies in the range where the saddle solution describes an
/// actual exit point: `t >= qq^{2 mu}` for `qq > 1`, `t <= qq^{2 mu}` for
/// `qq < 1`.
pub fn in_exit_range(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> bool {
    let edge = p.t_of_alpha(to_f64(&profile.mu()));
    match p.epsilon() {
        e if e > 0.0 => t >= edge,
        e if e < 0.0 => t <= edge,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn boundary_values_at_x_zero() {
        let prof = fixtures::semicircle();
        let p = AsymParams::new(0.7, 1.5).unwrap();
        let t = 1.5f64.powi(4);
        let s = saddle_kflr(&prof, t, &p).unwrap();
        assert!((s.k - 1.0).abs() < 1e-14);
        let g = 0.7;
        assert!((s.f - (1.0 + g) * t / (t + g)).abs() < 1e-12);
        assert!((s.l - t).abs() < 1e-12);
        assert_eq!(s.r, f64::INFINITY);
    }

    #[test]
    fn residuals_and_ratio() {
        for (qq, gamma) in [(1.6, 0.8), (0.7, 2.0), (2.5, 1.0)] {
            let p = AsymParams::new(gamma, qq).unwrap();
            for prof in [fixtures::semicircle(), fixtures::min_slope(), fixtures::gap()] {
                let mu = to_f64(&prof.mu());
                let edge = qq.powf(2.0 * mu);
                let f = MomentFn::new(&prof, &p);
                for frac in [0.01, 0.3, 1.0, 4.0, 50.0] {
                    let t = if qq > 1.0 { edge * (1.0 + frac) } else { edge / (1.0 + frac) };
                    let x = f.value(t).unwrap();
                    let s = saddle_from_x(t, x, &p).unwrap();
                    let scale = 1.0 + s.l.abs() * s.r.abs() + t * s.k * s.l;
                    for r in s.residuals(gamma, x) {
                        assert!(r.abs() < 1e-9 * scale, "qq={qq} t={t}: {r}");
                    }
                    let ratio = (s.f - 1.0) / (s.r - s.f);
                    assert!((ratio - qq * qq * gamma * x).abs() < 1e-9 * (1.0 + ratio.abs()));
                    assert!(s.within_bounds(mu, 1e-12), "qq={qq} t={t}: {s:?}");
                }
            }
        }
    }

    #[test]
    fn derived_exponents() {
        let p = AsymParams::new(1.0, 2.0).unwrap();
        let s = saddle_kflr(&fixtures::aztec_diamond(), 10.0, &p).unwrap();
        assert!((2.0f64.powf(2.0 * s.xi()) - s.l).abs() < 1e-12);
        assert!(s.kappa() >= 0.0 && s.kappa() <= 1.0);
        assert!(s.phi() >= 0.0);
        assert!(s.rho() >= 0.0);
    }

    #[test]
    fn unit_mode_is_rejected() {
        assert!(saddle_kflr(&fixtures::semicircle(), 3.0, &AsymParams::unit(1.0)).is_err());
    }
}
