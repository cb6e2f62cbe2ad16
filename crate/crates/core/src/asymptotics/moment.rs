//! The moment-generating function `x(t)` of a piecewise-linear profile.
//!
//! Each segment `(sigma_lo, sigma_hi, alpha_lo, c)` contributes
//! `qq^{-2 (sigma_hi - sigma_lo)} ((t - A_hi) / (t - A_lo))^{1/c}` with
//! `A = qq^{2 alpha}`; at `qq = 1` the factor is `((tau - alpha_hi) /
//! (tau - alpha_lo))^{1/c}`. Segment endpoints that coincide are merged so
//! that the product is evaluated as `prefactor * prod_A |t - A|^{e_A}` with
//! exact exponents.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{AsymError, AsymParams};
use crate::boundary_profiles::BoundaryProfile;
use crate::exact_weights::{to_f64, ExactScalar};

#[derive(Debug, Clone)]
struct Node {
    at: f64,
    exponent: f64,
}

#[derive(Debug, Clone)]
struct SegmentSpan {
    lo: f64,
    hi: f64,
    minimal: bool,
}

/// Precomputed evaluator for `x(t)` and `x'(t)`.
#[derive(Debug, Clone)]
pub struct MomentFn {
    prefactor: f64,
    nodes: Vec<Node>,
    spans: Vec<SegmentSpan>,
}

impl MomentFn {
    pub fn new(profile: &BoundaryProfile, p: &AsymParams) -> Self {
        let mut exponents: BTreeMap<ExactScalar, ExactScalar> = BTreeMap::new();
        let mut spans = Vec::with_capacity(profile.segments.len());
        for seg in &profile.segments {
            let inv_c = seg.slope.recip();
            *exponents.entry(seg.alpha_hi()).or_insert_with(Zero::zero) += &inv_c;
            *exponents.entry(seg.alpha_lo.clone()).or_insert_with(Zero::zero) -= &inv_c;
            let a = p.t_of_alpha(to_f64(&seg.alpha_lo));
            let b = p.t_of_alpha(to_f64(&seg.alpha_hi()));
            spans.push(SegmentSpan {
                lo: a.min(b),
                hi: a.max(b),
                minimal: seg.slope.is_one(),
            });
        }
        let nodes = exponents
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(alpha, e)| Node {
                at: p.t_of_alpha(to_f64(&alpha)),
                exponent: to_f64(&e),
            })
            .collect();
        let total_width: f64 = profile.segments.iter().map(|s| to_f64(&s.width())).sum();
        Self {
            prefactor: p.qq().powf(-2.0 * total_width),
            nodes,
            spans,
        }
    }

    /// Sign of `x(t)`, or `Undefined` when a segment with slope above one has
    /// a negative ratio (a fractional power of a negative number).
    fn sign(&self, t: f64) -> Result<f64, AsymError> {
        let mut sign = 1.0;
        for s in &self.spans {
            if s.lo < t && t < s.hi {
                if !s.minimal {
                    return Err(AsymError::Undefined(t));
                }
                sign = -sign;
            }
        }
        Ok(sign)
    }

    pub fn value(&self, t: f64) -> Result<f64, AsymError> {
        if !t.is_finite() {
            return Ok(self.prefactor);
        }
        let sign = self.sign(t)?;
        let mut log_abs = self.prefactor.ln();
        let mut zero = false;
        for node in &self.nodes {
            let d = t - node.at;
            if d == 0.0 {
                if node.exponent < 0.0 {
                    return Err(AsymError::Pole(t));
                }
                zero = true;
            } else {
                log_abs += node.exponent * d.abs().ln();
            }
        }
        if zero {
            return Ok(0.0);
        }
        Ok(sign * log_abs.exp())
    }

    /// `x'(t) = x(t) * sum_A e_A / (t - A)`.
    pub fn deriv(&self, t: f64) -> Result<f64, AsymError> {
        Ok(self.value_and_deriv(t)?.1)
    }

    pub fn value_and_deriv(&self, t: f64) -> Result<(f64, f64), AsymError> {
        let x = self.value(t)?;
        if !t.is_finite() {
            return Ok((x, 0.0));
        }
        let mut log_deriv = 0.0;
        for (i, node) in self.nodes.iter().enumerate() {
            let d = t - node.at;
            if d == 0.0 {
                // x vanishes here like |t - A|^e.
                return match node.exponent {
                    e if e > 1.0 => Ok((x, 0.0)),
                    1.0 => Ok((x, self.simple_zero_slope(t, i))),
                    _ => Err(AsymError::Pole(t)),
                };
            }
            log_deriv += node.exponent / d;
        }
        Ok((x, x * log_deriv))
    }

    /// `x'(t)` at a simple zero `t = A_i`, from the right-hand limit of
    /// `x(s)/(s - t)`.
    fn simple_zero_slope(&self, t: f64, zero: usize) -> f64 {
        let mut sign = 1.0;
        for s in &self.spans {
            if s.lo <= t && t < s.hi && s.minimal {
                sign = -sign;
            }
        }
        let log_rest: f64 = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != zero)
            .map(|(_, n)| n.exponent * (t - n.at).abs().ln())
            .sum();
        sign * self.prefactor * log_rest.exp()
    }

    /// Every finite point where a factor vanishes or diverges.
    pub fn singular_points(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.at).collect()
    }
}

pub fn moment_x(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> Result<f64, AsymError> {
    MomentFn::new(profile, p).value(t)
}

pub fn moment_x_deriv(profile: &BoundaryProfile, t: f64, p: &AsymParams) -> Result<f64, AsymError> {
    MomentFn::new(profile, p).deriv(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn semicircle_closed_form() {
        for qq in [0.6, 1.3, 2.0] {
            let p = AsymParams::new(1.0, qq).unwrap();
            let f = MomentFn::new(&fixtures::semicircle(), &p);
            let q4 = qq.powi(4);
            for t in [-5.0, -0.3, 0.2, 0.9, 1.1, q4 * 1.2 + 0.1, 30.0] {
                let expected = ((t - q4) / (t - 1.0)).sqrt() / (qq * qq);
                match f.value(t) {
                    Ok(x) => assert!(close(x, expected, 1e-13), "qq={qq} t={t}"),
                    Err(AsymError::Undefined(_)) => assert!(expected.is_nan()),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn aztec_unit_mode() {
        let p = AsymParams::unit(1.0);
        let f = MomentFn::new(&fixtures::aztec_diamond(), &p);
        for tau in [-3.0, 0.25, 0.5, 2.0, 7.5] {
            assert!(close(f.value(tau).unwrap(), 1.0 - 1.0 / tau, 1e-14));
            assert!(close(f.deriv(tau).unwrap(), 1.0 / (tau * tau), 1e-14));
        }
        assert_eq!(f.value(0.0), Err(AsymError::Pole(0.0)));
        assert_eq!(f.value(1.0), Ok(0.0));
        assert!(close(f.deriv(1.0).unwrap(), 1.0, 1e-14));
    }

    #[test]
    fn limit_at_infinity() {
        let p = AsymParams::new(1.0, 1.5).unwrap();
        for prof in fixtures::all() {
            let f = MomentFn::new(&prof, &p);
            let far = f.value(1e12).unwrap();
            assert!(close(far, 1.5f64.powi(-2), 1e-9));
            assert!(close(f.value(-1e12).unwrap(), 1.5f64.powi(-2), 1e-9));
        }
    }

    #[test]
    fn min_slope_is_negative_inside_run() {
        let p = AsymParams::unit(1.0);
        let f = MomentFn::new(&fixtures::min_slope(), &p);
        for tau in [0.7f64, 0.8, 0.95] {
            let expected = ((tau - 2.0 / 3.0) / tau).sqrt() * (tau - 1.0) / (tau - 2.0 / 3.0)
                * ((tau - 5.0 / 3.0) / (tau - 1.0)).sqrt();
            let x = f.value(tau).unwrap();
            assert!(x < 0.0);
            assert!(close(x, expected, 1e-12));
        }
        assert!(matches!(f.value(0.3), Err(AsymError::Undefined(_))));
    }

    #[test]
    fn gap_unit_mode() {
        let p = AsymParams::unit(0.7);
        let f = MomentFn::new(&fixtures::gap(), &p);
        for tau in [1.2f64, 1.5, 1.9, -2.0, 4.0] {
            let expected = ((tau - 1.0) * (tau - 3.0) / (tau * (tau - 2.0))).sqrt();
            assert!(close(f.value(tau).unwrap(), expected, 1e-13));
        }
        assert!(close(f.value(1.5).unwrap(), 1.0, 1e-14));
    }

    #[test]
    fn fully_frozen_defined_everywhere() {
        let p = AsymParams::unit(1.0);
        let f = MomentFn::new(&fixtures::fully_frozen(), &p);
        for tau in [-1.0, 0.3, 0.75, 1.2, 2.0] {
            let expected = (tau - 0.5) * (tau - 1.5) / (tau * (tau - 1.0));
            assert!(close(f.value(tau).unwrap(), expected, 1e-13));
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = AsymParams::new(0.8, 1.4).unwrap();
        let f = MomentFn::new(&fixtures::min_slope(), &p);
        for t in [-4.0, 0.5, 1.6, 1.9, 5.0, 40.0] {
            let Ok((_, d)) = f.value_and_deriv(t) else { continue };
            let h = 1e-6 * t.abs();
            let fd = (f.value(t + h).unwrap() - f.value(t - h).unwrap()) / (2.0 * h);
            assert!(close(d, fd, 1e-6), "t={t}: {d} vs {fd}");
        }
    }
}
