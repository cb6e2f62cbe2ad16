//! Exponential growth rate of the single-path partition function
//! `Z_{(un,0)->(0,vn)}` with `q = qq^{1/n}`.

use super::{AsymError, AsymParams};

/// Result of the saddle-point evaluation: `S0` and the diagonal-step
/// density `phi` that dominates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergy {
    pub s0: f64,
    pub phi: f64,
}

/// `I(z) = int_0^z log|qq^{2s} - 1| ds` for `z >= 0`.
///
/// The integrable log singularity at the origin is removed analytically:
/// `log|e^{2 l s} - 1| = log(2|l| s) + log((e^{x} - 1)/x)` with `x = 2 l s`,
/// and the smooth remainder is integrated by adaptive Simpson.
pub fn log_q_integral(z: f64, log_qq: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let scale = 2.0 * log_qq.abs();
    let singular = z * scale.ln() + z * z.ln() - z;
    let smooth = |s: f64| {
        let x = 2.0 * log_qq * s;
        if x.abs() < 1e-12 {
            x / 2.0
        } else {
            (x.exp_m1() / x).ln()
        }
    };
    singular + adaptive_simpson(&smooth, 0.0, z, 1e-13)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Saddle value `phi` in `[0, min(u, v)]`, from the quadratic in
/// `F = qq^{2 phi}`.
pub fn saddle_phi(u: f64, v: f64, p: &AsymParams) -> Result<f64, AsymError> {
    if !(u > 0.0 && v > 0.0) {
        return Err(AsymError::Domain(format!("need u, v > 0, got ({u}, {v})")));
    }
    if p.is_unit() {
        return Err(AsymError::Domain("free energy needs qq != 1".into()));
    }
    if p.gamma == 0.0 {
        return Ok(0.0);
    }
    let lq2 = p.mode.log_q2();
    let big_u = (lq2 * u).exp();
    let big_v = (lq2 * v).exp();
    let b = big_u + big_v + (big_u - 1.0) * (big_v - 1.0) / (1.0 + p.gamma);
    let disc = (b * b - 4.0 * big_u * big_v).max(0.0);
    let large = 0.5 * (b + disc.sqrt());
    let small = big_u * big_v / large;
    // For qq > 1 the admissible root lies in [1, min(U,V)]; for qq < 1 in
    // [max(U,V), 1]. Either way it is the root nearer to 1 in log scale.
    let f = if p.epsilon() > 0.0 { small } else { large };
    let phi = f.ln() / lq2;
    Ok(phi.clamp(0.0, u.min(v)))
}

pub fn free_energy_s0(u: f64, v: f64, p: &AsymParams) -> Result<FreeEnergy, AsymError> {
    let phi = saddle_phi(u, v, p)?;
    let lq = p.qq().ln();
    let i = |z: f64| log_q_integral(z, lq);
    let gamma_term = if phi == 0.0 { 0.0 } else { phi * p.gamma.ln() };
    let s0 = gamma_term + phi * phi * lq + i(u + v - phi) - i(v - phi) - i(phi) - i(u - phi);
    Ok(FreeEnergy { s0, phi })
}

/// `log Z_{(i,0)->(0,j)}` evaluated in floating point from the trinomial sum,
/// with a log-sum-exp over the diagonal count. Used as the finite-size oracle
/// for [`free_energy_s0`].
pub fn log_single_path_z(i: u64, j: u64, gamma: f64, q: f64) -> f64 {
    let n = (i + j) as usize;
    let q2 = q * q;
    let mut prefix = vec![0.0f64; n + 1];
    for s in 1..=n {
        let term = if q2 == 1.0 {
            (s as f64).ln()
        } else {
            (q2.powi(s as i32) - 1.0).abs().ln()
        };
        prefix[s] = prefix[s - 1] + term;
    }
    let kmax = if gamma == 0.0 { 0 } else { i.min(j) };
    let terms: Vec<f64> = (0..=kmax)
        .map(|k| {
            let kk = k as f64;
            let gamma_part = if k == 0 { 0.0 } else { kk * gamma.ln() };
            gamma_part + kk * kk * q.ln() + prefix[(i + j - k) as usize]
                - prefix[(j - k) as usize]
                - prefix[k as usize]
                - prefix[(i - k) as usize]
        })
        .collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_weights::{ln_exact, single_path_z, WeightPair};

    #[test]
    fn integral_against_fine_midpoint_rule() {
        for lq in [-0.7, 0.3, 1.2] {
            for z in [0.1, 0.8, 2.5] {
                let n = 400_000;
                let h = z / n as f64;
                let direct: f64 = (0..n)
                    .map(|k| {
                        let s = (k as f64 + 0.5) * h;
                        ((2.0 * lq * s).exp() - 1.0).abs().ln() * h
                    })
                    .sum();
                let got = log_q_integral(z, lq);
                assert!((got - direct).abs() < 1e-5, "lq={lq} z={z}: {got} vs {direct}");
            }
        }
    }

    #[test]
    fn phi_range_and_gamma_zero() {
        for qq in [0.4, 0.9, 1.1, 3.0] {
            for gamma in [0.0, 1e-9, 0.5, 1.0, 5.0] {
                let p = AsymParams::new(gamma, qq).unwrap();
                for (u, v) in [(1.0, 1.0), (0.3, 2.0), (2.0, 0.7)] {
                    let phi = saddle_phi(u, v, &p).unwrap();
                    assert!((0.0..=u.min(v)).contains(&phi));
                    if gamma < 1e-6 {
                        assert!(phi < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn phi_solves_saddle_equation() {
        let p = AsymParams::new(1.7, 2.5).unwrap();
        let (u, v) = (0.8, 1.3);
        let phi = saddle_phi(u, v, &p).unwrap();
        let e = |z: f64| p.qq().powf(2.0 * z);
        let lhs = p.gamma * e(phi) * (e(u - phi) - 1.0) * (e(v - phi) - 1.0)
            / ((e(phi) - 1.0) * (e(u + v - phi) - 1.0));
        assert!((lhs - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        let p = AsymParams::new(1.0, 2.0).unwrap();
        assert!(free_energy_s0(0.0, 1.0, &p).is_err());
        assert!(free_energy_s0(1.0, 1.0, &AsymParams::unit(1.0)).is_err());
    }

    #[test]
    fn float_oracle_matches_exact_value() {
        let w = WeightPair::parse("3/2", "5/4").unwrap();
        for (i, j) in [(3, 4), (6, 2), (5, 5)] {
            let exact = ln_exact(&single_path_z(i, j, &w).unwrap());
            let float = log_single_path_z(i, j, 1.5, 1.25);
            assert!((exact - float).abs() < 1e-12);
        }
    }

    #[test]
    fn converges_to_finite_size() {
        let n = 400u64;
        for qq in [0.5f64, 2.0] {
            let p = AsymParams::new(1.0, qq).unwrap();
            let s0 = free_energy_s0(1.0, 1.0, &p).unwrap().s0;
            let q = qq.powf(1.0 / n as f64);
            let finite = log_single_path_z(n, n, 1.0, q) / n as f64;
            assert!((finite - s0).abs() < 0.05, "qq={qq}: {finite} vs {s0}");
        }
    }
}
