//! Most likely shape of a single weighted path from `(u, 0)` to `(0, v)` in
//! rescaled coordinates, with `X = qq^{2x}`, `Y = qq^{2y}`, `U = qq^{2u}`,
//! `V = qq^{2v}`.

use super::{AsymError, AsymParams};

/// `delta(U, V)`; the radicand is a sum of nonnegative terms for
/// `U, V > 0` and `gamma >= 0`.
pub fn delta(u: f64, v: f64, gamma: f64) -> f64 {
    let radicand = (u * v - 1.0).powi(2)
        + 2.0 * gamma * ((u + v) * (u * v + 1.0) - 4.0 * u * v)
        + gamma * gamma * (u - v).powi(2);
    radicand.max(0.0).sqrt()
}

/// `Y(X)` on the geodesic, in the second (expanded) form.
pub fn geodesic_big_y(x: f64, u: f64, v: f64, gamma: f64, epsilon: f64) -> f64 {
    let ed = epsilon * delta(u, v, gamma);
    let num = (v - 1.0)
        * (u - x)
        * ((x - 1.0) * (v - 1.0) * (u + gamma)
            + (u - 1.0) * (x + 1.0) * (1.0 + gamma)
            + (x - 1.0) * ed);
    let den = 2.0 * (u - 1.0) * ((u - x) * (1.0 + gamma * x) + v * (u + gamma * x) * (x - 1.0));
    1.0 + num / den
}

/// `Y(X)` in the first (factored) form, kept as an independent cross-check.
pub fn geodesic_big_y_factored(x: f64, u: f64, v: f64, gamma: f64, epsilon: f64) -> f64 {
    let ed = epsilon * delta(u, v, gamma);
    let a = u * v - 1.0 - 2.0 * (v - 1.0) * x + gamma * (u - v) + ed;
    let b = u * v - 1.0 + gamma * (2.0 * u * v - u - v) + ed;
    let c = 2.0 * u - u * v - 1.0 + gamma * (u - v) + ed;
    let d = u * v - 1.0 + gamma * (u - v + 2.0 * (v - 1.0) * x) + ed;
    a * b / (c * d)
}

/// Rescaled height `y(x)` of the geodesic joining `(u, 0)` and `(0, v)`.
pub fn geodesic_y(u: f64, v: f64, x: f64, p: &AsymParams) -> Result<f64, AsymError> {
    if !(u > 0.0 && v > 0.0) {
        return Err(AsymError::Domain(format!("need u, v > 0, got ({u}, {v})")));
    }
    if !(0.0..=u).contains(&x) {
        return Err(AsymError::Domain(format!("x = {x} outside [0, {u}]")));
    }
    if p.is_unit() {
        return Ok(v * (u - x) / u);
    }
    let lq2 = p.mode.log_q2();
    let big = |z: f64| (lq2 * z).exp();
    let y = geodesic_big_y(big(x), big(u), big(v), p.gamma, p.epsilon());
    Ok(y.ln() / lq2)
}

/// The individual monomial groups of `G_gamma(X, Y; U, V)`.
fn residual_terms(x: f64, y: f64, u: f64, v: f64, g: f64) -> [f64; 4] {
    [
        (u - 1.0) * (v - 1.0) * (g * (u * v + x * x * y * y) - (v * x * x + u * y * y)),
        -x * y * ((u + 1.0) * (v + 1.0) * (1.0 + u * v + g * (u + v)) - 8.0 * (1.0 + g) * u * v),
        (v - 1.0) * (x * x + u) * y * (u * v - 1.0 + g * (v - u)),
        (u - 1.0) * (y * y + v) * x * (u * v - 1.0 + g * (u - v)),
    ]
}

/// Algebraic equation `G_gamma(X, Y; U, V) = 0` satisfied by both geodesic
/// branches.
pub fn geodesic_residual(x: f64, y: f64, u: f64, v: f64, gamma: f64) -> f64 {
    residual_terms(x, y, u, v, gamma).iter().sum()
}

/// [`geodesic_residual`] divided by the sum of absolute values of its terms.
pub fn geodesic_residual_relative(x: f64, y: f64, u: f64, v: f64, gamma: f64) -> f64 {
    let terms = residual_terms(x, y, u, v, gamma);
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    if scale == 0.0 {
        0.0
    } else {
        terms.iter().sum::<f64>().abs() / scale
    }
}
