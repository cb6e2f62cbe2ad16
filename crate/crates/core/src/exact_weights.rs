//! Exact q-combinatorics for single weighted Schröder paths.
//!
//! A Schröder path runs from `(i, 0)` towards the vertical axis with up
//! `(0,1)`, left `(-1,0)` and diagonal `(-1,1)` steps. It carries the weight
//! `gamma^k q^A`, where `k` counts diagonal steps and `A` counts the unit
//! triangles to its left. Everything here is exact rational arithmetic; the
//! enumeration oracle [`brute_force_z`] is deliberately independent of the
//! closed forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactScalar = BigRational;

/// Largest `i + j` the enumeration oracle accepts.
pub const ENUMERATION_GUARD: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("degenerate q: {0}")]
    DegenerateQ(String),
    #[error("enumeration of size {size} exceeds the guard {guard}")]
    SizeLimit { size: u64, guard: u64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid lattice path: {0}")]
    InvalidPath(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact number")]
pub struct ParseExactError {
    pub input: String,
}

/// Parses `"3"`, `"-2/3"` or a plain decimal such as `"0.25"` into an exact
/// rational.
pub fn parse_exact(input: &str) -> Result<ExactScalar, ParseExactError> {
    let err = || ParseExactError {
        input: input.to_string(),
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let all_digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&digits).map_err(|_| err())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Canonical fraction string: `"3"`, `"-2/3"`.
pub fn format_exact(value: &ExactScalar) -> String {
    value.to_string()
}

pub fn to_f64(value: &ExactScalar) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a log-scale ratio.
        let n = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = value.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Natural logarithm of a positive rational, robust to values outside the
/// f64 range.
pub fn ln_exact(value: &ExactScalar) -> f64 {
    fn ln_big(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits < 1000 {
            x.to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            let top: BigInt = x >> shift;
            top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    ln_big(value.numer()) - ln_big(value.denom())
}

/// `base^exp` for any integer exponent; `base` must be nonzero when `exp < 0`.
pub fn ipow(base: &ExactScalar, exp: i64) -> ExactScalar {
    let mut result = ExactScalar::one();
    let mut b = if exp < 0 { base.recip() } else { base.clone() };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

pub fn int(value: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(value))
}

/// Model parameters for exact finite-size computations: the diagonal-step
/// weight `gamma >= 0` and the area weight `q > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightPair {
    pub gamma: ExactScalar,
    pub q: ExactScalar,
}

impl WeightPair {
    pub fn new(gamma: ExactScalar, q: ExactScalar) -> Result<Self, ExactError> {
        if gamma.is_negative() {
            return Err(ExactError::InvalidWeights(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if !q.is_positive() {
            return Err(ExactError::InvalidWeights(format!(
                "q must be > 0, got {q}"
            )));
        }
        Ok(Self { gamma, q })
    }

    pub fn parse(gamma: &str, q: &str) -> Result<Self, ExactError> {
        let g = parse_exact(gamma).map_err(|e| ExactError::InvalidWeights(e.to_string()))?;
        let q = parse_exact(q).map_err(|e| ExactError::InvalidWeights(e.to_string()))?;
        Self::new(g, q)
    }

    pub fn from_ints(gamma: i64, q: i64) -> Self {
        Self::new(int(gamma), int(q)).expect("valid integer weights")
    }

    /// True when `q^2 = 1`, where the q²-analogs collapse to ordinary
    /// multinomials and every identity needs its combinatorial limit form.
    pub fn is_q_one(&self) -> bool {
        is_unit_square(&self.q)
    }

    pub fn q_squared(&self) -> ExactScalar {
        &self.q * &self.q
    }
}

pub(crate) fn is_unit_square(q: &ExactScalar) -> bool {
    (q * q).is_one()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    Up,
    Left,
    Diag,
}

impl Step {
    pub fn delta(self) -> (i64, i64) {
        match self {
            Step::Up => (0, 1),
            Step::Left => (-1, 0),
            Step::Diag => (-1, 1),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Left => 'L',
            Step::Diag => 'D',
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A Schröder path starting on the horizontal axis at column `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePath {
    pub start: i64,
    pub steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(start: i64, steps: Vec<Step>) -> Result<Self, ExactError> {
        let path = Self { start, steps };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<(), ExactError> {
        if self.start < 0 {
            return Err(ExactError::InvalidPath(format!(
                "start column {} is negative",
                self.start
            )));
        }
        let lefts = self.steps.iter().filter(|s| **s != Step::Up).count() as i64;
        if lefts > self.start {
            return Err(ExactError::InvalidPath(format!(
                "path from column {} takes {lefts} westward steps",
                self.start
            )));
        }
        Ok(())
    }

    pub fn vertices(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let (mut x, mut y) = (self.start, 0);
        out.push((x, y));
        for step in &self.steps {
            let (dx, dy) = step.delta();
            x += dx;
            y += dy;
            out.push((x, y));
        }
        out
    }

    pub fn end(&self) -> (i64, i64) {
        self.steps.iter().fold((self.start, 0), |(x, y), s| {
            let (dx, dy) = s.delta();
            (x + dx, y + dy)
        })
    }

    pub fn word(&self) -> String {
        self.steps.iter().map(|s| s.letter()).collect()
    }
}

/// Triangle count to the left of the path and its number of diagonal steps.
pub fn path_area_and_diag(path: &LatticePath) -> (i64, u64) {
    let verts = path.vertices();
    let area = verts
        .windows(2)
        .map(|w| (w[0].0 + w[1].0) * (w[1].1 - w[0].1))
        .sum();
    let diag = path.steps.iter().filter(|s| **s == Step::Diag).count() as u64;
    (area, diag)
}

/// Exact weight `gamma^k q^A` of a single path.
pub fn path_weight(path: &LatticePath, w: &WeightPair) -> ExactScalar {
    let (area, diag) = path_area_and_diag(path);
    ipow(&w.gamma, diag as i64) * ipow(&w.q, area)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `prod_{s=1}^{n} (q^{2s} - 1)`.
fn q2_pochhammer(q2: &ExactScalar, n: u64) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut power = ExactScalar::one();
    for _ in 0..n {
        power *= q2;
        acc *= &power - ExactScalar::one();
    }
    acc
}

/// The q²-trinomial `[a+b+c; a,b,c]_{q^2}`. At `q = ±1` it is the ordinary
/// multinomial coefficient.
pub fn q_trinomial(a: u64, b: u64, c: u64, q: &ExactScalar) -> Result<ExactScalar, ExactError> {
    if q.is_zero() {
        return Err(ExactError::DegenerateQ("q = 0".into()));
    }
    if is_unit_square(q) {
        let m = factorial(a + b + c) / (factorial(a) * factorial(b) * factorial(c));
        return Ok(ExactScalar::from_integer(m));
    }
    let q2 = q * q;
    let den = q2_pochhammer(&q2, a) * q2_pochhammer(&q2, b) * q2_pochhammer(&q2, c);
    if den.is_zero() {
        return Err(ExactError::DegenerateQ(format!(
            "q = {q} makes a trinomial denominator vanish"
        )));
    }
    Ok(q2_pochhammer(&q2, a + b + c) / den)
}

/// Partition function of weighted Schröder paths from `(i,0)` to `(0,j)`,
/// summed over the number of diagonal steps.
pub fn single_path_z(i: u64, j: u64, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    let mut total = ExactScalar::zero();
    for k in 0..=i.min(j) {
        let term = ipow(&w.gamma, k as i64)
            * ipow(&w.q, (k * k) as i64)
            * q_trinomial(j - k, k, i - k, &w.q)?;
        total += term;
    }
    Ok(total)
}

/// How a [`ZPoly`] variable relates to the starting column `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZVariable {
    /// `t = q^{2i}`; the stored value is `q^2`.
    QPower(ExactScalar),
    /// At `q = 1` the variable is the column `i` itself.
    Column,
}

/// Dense polynomial with exact coefficients, indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub coeffs: Vec<ExactScalar>,
    pub variable: ZVariable,
}

impl ZPoly {
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Horner evaluation in the raw polynomial variable.
    pub fn eval(&self, t: &ExactScalar) -> ExactScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ExactScalar::zero(), |acc, c| acc * t + c)
    }

    /// Value at starting column `i`, i.e. `z_j(q^{2i})` (or the column
    /// polynomial at `q = 1`).
    pub fn eval_column(&self, i: i64) -> ExactScalar {
        match &self.variable {
            ZVariable::QPower(q2) => self.eval(&ipow(q2, i)),
            ZVariable::Column => self.eval(&int(i)),
        }
    }
}

fn poly_mul_linear(poly: &[ExactScalar], slope: &ExactScalar, constant: &ExactScalar) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); poly.len() + 1];
    for (d, c) in poly.iter().enumerate() {
        out[d + 1] += c * slope;
        out[d] += c * constant;
    }
    out
}

/// The polynomial `z_j` with `Z_{(i,0)->(0,j)} = z_j(q^{2i})` for every
/// `i >= 0`. At `q = ±1` the combinatorial limit is returned as a polynomial in
/// the column `i`.
pub fn z_poly(j: u64, w: &WeightPair) -> Result<ZPoly, ExactError> {
    let mut coeffs = vec![ExactScalar::zero(); j as usize + 1];
    if w.is_q_one() {
        for k in 0..=j {
            // gamma^k prod_{s=1}^{j} (i + s - k) / ((j-k)! k!)
            let mut poly = vec![ExactScalar::one()];
            for s in 1..=j as i64 {
                poly = poly_mul_linear(&poly, &ExactScalar::one(), &int(s - k as i64));
            }
            let scale = ipow(&w.gamma, k as i64)
                / ExactScalar::from_integer(factorial(j - k) * factorial(k));
            for (d, c) in poly.into_iter().enumerate() {
                coeffs[d] += c * &scale;
            }
        }
        return Ok(ZPoly {
            coeffs,
            variable: ZVariable::Column,
        });
    }
    let q2 = w.q_squared();
    for k in 0..=j {
        let den = q2_pochhammer(&q2, j - k) * q2_pochhammer(&q2, k);
        if den.is_zero() {
            return Err(ExactError::DegenerateQ(format!("q = {}", w.q)));
        }
        let mut poly = vec![ExactScalar::one()];
        for s in 1..=j as i64 {
            let slope = ipow(&q2, s - k as i64);
            poly = poly_mul_linear(&poly, &slope, &-ExactScalar::one());
        }
        let scale = ipow(&w.gamma, k as i64) * ipow(&w.q, (k * k) as i64) / den;
        for (d, c) in poly.into_iter().enumerate() {
            coeffs[d] += c * &scale;
        }
    }
    Ok(ZPoly {
        coeffs,
        variable: ZVariable::QPower(q2),
    })
}

/// Depth-first enumeration oracle: sums `gamma^k q^A` over every Schröder path
/// from `(i,0)` to `(0,j)`.
pub fn brute_force_z(i: u64, j: u64, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    brute_force_between((i as i64, 0), (0, j as i64), None, w)
}

/// Enumeration oracle between arbitrary endpoints, optionally constraining the
/// first step. The area is always measured to the left of the path.
pub fn brute_force_between(
    start: (i64, i64),
    end: (i64, i64),
    first_step: Option<&[Step]>,
    w: &WeightPair,
) -> Result<ExactScalar, ExactError> {
    let size = (start.0 - end.0).max(0) + (end.1 - start.1).max(0);
    if size > ENUMERATION_GUARD as i64 {
        return Err(ExactError::SizeLimit {
            size: size as u64,
            guard: ENUMERATION_GUARD as u64,
        });
    }
    if end.0 > start.0 || end.1 < start.1 {
        return Ok(ExactScalar::zero());
    }
    // Accumulate monomials gamma^k q^A as exponent counts, then evaluate once.
    let mut counts: std::collections::BTreeMap<(u64, i64), u64> = Default::default();
    let mut stack = vec![(start.0, start.1, 0u64, 0i64, true)];
    while let Some((x, y, k, area, first)) = stack.pop() {
        if (x, y) == end {
            *counts.entry((k, area)).or_default() += 1;
            continue;
        }
        for step in [Step::Up, Step::Left, Step::Diag] {
            if first {
                if let Some(allowed) = first_step {
                    if !allowed.contains(&step) {
                        continue;
                    }
                }
            }
            let (dx, dy) = step.delta();
            let (nx, ny) = (x + dx, y + dy);
            if nx < end.0 || ny > end.1 {
                continue;
            }
            let darea = (x + nx) * dy;
            let dk = u64::from(step == Step::Diag);
            stack.push((nx, ny, k + dk, area + darea, false));
        }
    }
    Ok(counts
        .into_iter()
        .map(|((k, area), mult)| {
            int(mult as i64) * ipow(&w.gamma, k as i64) * ipow(&w.q, area)
        })
        .fold(ExactScalar::zero(), |a, b| a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExactScalar {
        parse_exact(s).unwrap()
    }

    #[test]
    fn parse_fraction_and_decimal() {
        assert_eq!(r("2/6"), r("1/3"));
        assert_eq!(r("0.25"), r("1/4"));
        assert_eq!(r("-1.5"), r("-3/2"));
        assert_eq!(r("7"), int(7));
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("abc").is_err());
        assert!(parse_exact("").is_err());
        assert_eq!(format_exact(&r("4/6")), "2/3");
    }

    #[test]
    fn trinomial_examples() {
        assert_eq!(q_trinomial(1, 0, 1, &int(2)).unwrap(), int(5));
        for q in ["1/3", "2", "7/5"] {
            assert_eq!(q_trinomial(4, 0, 0, &r(q)).unwrap(), int(1));
        }
        assert_eq!(q_trinomial(1, 1, 1, &int(1)).unwrap(), int(6));
        assert_eq!(q_trinomial(1, 1, 1, &int(-1)).unwrap(), int(6));
        assert!(q_trinomial(1, 1, 1, &int(0)).is_err());
    }

    #[test]
    fn area_and_diag_examples() {
        let diag = LatticePath::new(1, vec![Step::Diag]).unwrap();
        assert_eq!(path_area_and_diag(&diag), (1, 1));
        let lu = LatticePath::new(1, vec![Step::Left, Step::Up]).unwrap();
        assert_eq!(path_area_and_diag(&lu), (0, 0));
        let empty = LatticePath::new(3, vec![]).unwrap();
        assert_eq!(path_area_and_diag(&empty), (0, 0));
        assert!(LatticePath::new(0, vec![Step::Left]).is_err());
    }

    #[test]
    fn single_path_examples() {
        let w = WeightPair::new(r("3/2"), r("2/3")).unwrap();
        for i in 0..5 {
            assert_eq!(single_path_z(i, 0, &w).unwrap(), int(1));
        }
        let expected = int(1) + &w.gamma * &w.q + &w.q * &w.q;
        assert_eq!(single_path_z(1, 1, &w).unwrap(), expected);
        assert_eq!(single_path_z(2, 2, &WeightPair::from_ints(1, 1)).unwrap(), int(13));
    }

    #[test]
    fn z_poly_low_degree() {
        let w = WeightPair::new(r("1/2"), r("3")).unwrap();
        let z0 = z_poly(0, &w).unwrap();
        assert_eq!(z0.coeffs, vec![int(1)]);
        let z1 = z_poly(1, &w).unwrap();
        let q2 = w.q_squared();
        let t = r("5/7");
        let expected = ((&t * &q2 - int(1)) + &w.gamma * &w.q * (&t - int(1))) / (&q2 - int(1));
        assert_eq!(z1.eval(&t), expected);
        assert_eq!(z1.eval_column(1), int(1) + &w.gamma * &w.q + &q2);
    }

    #[test]
    fn z_poly_column_form_at_q_one() {
        let w = WeightPair::from_ints(2, 1);
        for j in 0..5 {
            let z = z_poly(j, &w).unwrap();
            assert_eq!(z.degree(), Some(j as usize));
            for i in 0..6 {
                assert_eq!(z.eval_column(i), single_path_z(i as u64, j, &w).unwrap());
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        let w = WeightPair::new(r("5/3"), r("1/2")).unwrap();
        assert_eq!(brute_force_z(0, 5, &w).unwrap(), int(1));
        let expected = int(1) + &w.gamma * &w.q + &w.q * &w.q;
        assert_eq!(brute_force_z(1, 1, &w).unwrap(), expected);
        assert_eq!(brute_force_z(3, 2, &WeightPair::from_ints(0, 1)).unwrap(), int(10));
        assert!(matches!(
            brute_force_z(13, 12, &w),
            Err(ExactError::SizeLimit { .. })
        ));
    }

    #[test]
    fn weights_reject_bad_inputs() {
        assert!(WeightPair::new(int(-1), int(1)).is_err());
        assert!(WeightPair::new(int(1), int(0)).is_err());
        assert!(WeightPair::parse("1", "x").is_err());
    }

    #[test]
    fn ln_exact_handles_huge_values() {
        let big = ipow(&int(10), 400);
        assert!((ln_exact(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_exact(&r("3/7")) - (3.0f64 / 7.0).ln()).abs() < 1e-15);
    }
}
