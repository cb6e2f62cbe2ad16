//! Finite-size partition functions of non-intersecting path families.
//!
//! Path `i` runs from `(a_i, 0)` to `(0, i)`. The partition function is the
//! determinant of single-path partition functions and also has a product
//! form; the one-point function and escape weight feed the tangent method.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_weights::{
    int, ipow, single_path_z, z_poly, ExactError, ExactScalar, WeightPair,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("start sequence must begin at 0, got {0}")]
    FirstNotZero(i64),
    #[error("start sequence is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("start sequence is empty")]
    Empty,
    #[error("last start {last} differs from width m = {m}")]
    WidthMismatch { last: i64, m: i64 },
    #[error("expected m - n = {expected} defects, got {got}")]
    DefectCount { expected: i64, got: usize },
    #[error("defect {0} lies outside [1, m]")]
    DefectOutOfRange(i64),
    #[error("defect list is not strictly increasing")]
    DefectsNotIncreasing,
    #[error("n = {n}, m = {m}: need 0 <= n <= m")]
    BadSize { n: i64, m: i64 },
}

/// Starting columns `0 = a_0 < a_1 < ... < a_n = m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StartConfig {
    starts: Vec<i64>,
}

impl StartConfig {
    pub fn from_starts(starts: Vec<i64>) -> Result<Self, ConfigError> {
        let first = *starts.first().ok_or(ConfigError::Empty)?;
        if first != 0 {
            return Err(ConfigError::FirstNotZero(first));
        }
        if let Some(i) = starts.windows(2).position(|w| w[1] <= w[0]) {
            return Err(ConfigError::NotIncreasing(i + 1));
        }
        Ok(Self { starts })
    }

    /// Builds the configuration whose start points are the complement of
    /// `defects` in `[0, m]`.
    pub fn from_defects(defects: &[i64], n: i64, m: i64) -> Result<Self, ConfigError> {
        if n < 0 || m < n {
            return Err(ConfigError::BadSize { n, m });
        }
        if defects.len() as i64 != m - n {
            return Err(ConfigError::DefectCount {
                expected: m - n,
                got: defects.len(),
            });
        }
        if defects.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::DefectsNotIncreasing);
        }
        if let Some(&d) = defects.iter().find(|&&d| d < 1 || d > m) {
            return Err(ConfigError::DefectOutOfRange(d));
        }
        if defects.last() == Some(&m) {
            return Err(ConfigError::WidthMismatch {
                last: (0..m).rev().find(|c| !defects.contains(c)).unwrap_or(0),
                m,
            });
        }
        let starts = (0..=m).filter(|c| defects.binary_search(c).is_err()).collect();
        Self::from_starts(starts)
    }

    /// The Aztec diamond: no defects.
    pub fn diamond(n: i64) -> Self {
        Self {
            starts: (0..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn m(&self) -> i64 {
        *self.starts.last().unwrap()
    }

    pub fn starts(&self) -> &[i64] {
        &self.starts
    }

    pub fn defects(&self) -> Vec<i64> {
        (0..=self.m())
            .filter(|c| self.starts.binary_search(c).is_err())
            .collect()
    }
}

impl fmt::Display for StartConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.starts.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Dense square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<Vec<ExactScalar>>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "matrix must be square");
        Self { rows }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            rows: vec![vec![ExactScalar::zero(); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExactScalar) {
        self.rows[i][j] = value;
    }

    pub fn rows(&self) -> &[Vec<ExactScalar>] {
        &self.rows
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let mut out = ExactMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..d {
                    let term = &self.rows[i][k] * &other.rows[k][j];
                    out.rows[i][j] += term;
                }
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(Zero::is_zero))
    }

    /// Determinant by rational Gaussian elimination, pivoting on the first
    /// nonzero entry of each column.
    pub fn det(&self) -> ExactScalar {
        let mut a = self.rows.clone();
        let d = a.len();
        let mut det = ExactScalar::one();
        for col in 0..d {
            let Some(p) = (col..d).find(|&r| !a[r][col].is_zero()) else {
                return ExactScalar::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..d {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &pivot;
                for c in col..d {
                    let sub = &factor * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
        det
    }
}

/// Interpolation node of column `a`: `q^{2a}`, or `a` itself at `q = 1` where
/// every ratio below is homogeneous of degree zero in the nodes.
fn node(a: i64, w: &WeightPair) -> ExactScalar {
    if w.is_q_one() {
        int(a)
    } else {
        ipow(&w.q_squared(), a)
    }
}

pub fn build_gv_matrix(cfg: &StartConfig, w: &WeightPair) -> Result<ExactMatrix, ExactError> {
    let d = cfg.n() + 1;
    let mut rows = Vec::with_capacity(d);
    for &a in cfg.starts() {
        let row = (0..d as u64)
            .map(|j| single_path_z(a as u64, j, w))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(rows))
}

pub fn partition_det(cfg: &StartConfig, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    Ok(build_gv_matrix(cfg, w)?.det())
}

fn vandermonde(nodes: &[ExactScalar]) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for i in 0..nodes.len() {
        for j in 0..i {
            acc *= &nodes[i] - &nodes[j];
        }
    }
    acc
}

/// Closed product form of the partition function.
pub fn partition_product(cfg: &StartConfig, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    let n = cfg.n() as i64;
    let mut value = ipow(&w.q, n * (n + 1) * (2 * n + 1) / 6);
    for s in 0..n {
        let factor = &w.gamma + ipow(&w.q, 2 * s + 1);
        value *= ipow(&factor, n - s);
    }
    let top: Vec<_> = cfg.starts().iter().map(|&a| node(a, w)).collect();
    let bottom: Vec<_> = (0..=n).map(|i| node(i, w)).collect();
    let den = vandermonde(&bottom);
    if den.is_zero() {
        return Err(ExactError::DegenerateQ(format!("q = {}", w.q)));
    }
    Ok(value * vandermonde(&top) / den)
}

/// Lower-triangular `L^{-1}` with `L^{-1} A` upper triangular.
pub fn lu_inverse_l(cfg: &StartConfig, w: &WeightPair) -> Result<ExactMatrix, ExactError> {
    let x: Vec<_> = cfg.starts().iter().map(|&a| node(a, w)).collect();
    let d = x.len();
    let mut out = ExactMatrix::zeros(d);
    for i in 0..d {
        let num = (0..i).fold(ExactScalar::one(), |acc, s| acc * (&x[i] - &x[s]));
        for j in 0..=i {
            let den = (0..=i)
                .filter(|&s| s != j)
                .fold(ExactScalar::one(), |acc, s| acc * (&x[j] - &x[s]));
            if den.is_zero() {
                return Err(ExactError::DegenerateQ(format!(
                    "repeated interpolation node at q = {}",
                    w.q
                )));
            }
            out.set(i, j, &num / den);
        }
    }
    Ok(out)
}

/// Diagonal entry `U_ii` of the upper-triangular factor, from its product
/// formula.
pub fn u_diagonal(cfg: &StartConfig, i: usize, w: &WeightPair) -> ExactScalar {
    let a = cfg.starts();
    let mut acc = ExactScalar::one();
    for s in 0..i {
        let qs = ipow(&w.q, 2 * s as i64 + 1);
        let ratio = (node(a[i], w) - node(a[s], w)) / (node(i as i64, w) - node(s as i64, w));
        acc *= &qs * (&w.gamma + &qs) * ratio;
    }
    acc
}

/// One-point function `H^{(ell)}`: the weight fraction of configurations in
/// which the outermost path is rerouted to end at `(ell, n)`, computed as a
/// finite residue sum over start points `a_k >= ell`.
pub fn one_point_h(cfg: &StartConfig, ell: i64, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    let n = cfg.n();
    let a = cfg.starts();
    let x: Vec<_> = a.iter().map(|&ak| node(ak, w)).collect();
    let zn = z_poly(n as u64, w)?;
    let numer = (0..n).fold(ExactScalar::one(), |acc, s| acc * (&x[n] - &x[s]));
    let mut total = ExactScalar::zero();
    for k in (0..=n).filter(|&k| a[k] >= ell) {
        let den = (0..=n)
            .filter(|&s| s != k)
            .fold(ExactScalar::one(), |acc, s| acc * (&x[k] - &x[s]));
        if den.is_zero() {
            return Err(ExactError::DegenerateQ(format!(
                "repeated interpolation node at q = {}",
                w.q
            )));
        }
        total += &numer / den * zn.eval_column(a[k] - ell);
    }
    let u_ell = ipow(&w.q, 2 * n as i64 * ell) * total;
    Ok(u_ell / u_diagonal(cfg, n, w))
}

/// Weight of the escape path from `(ell, n)` to `(0, n + r)` that leaves the
/// corner by an up or diagonal step, with area measured to its left.
pub fn escape_y(ell: i64, r: u64, w: &WeightPair) -> Result<ExactScalar, ExactError> {
    assert!(r >= 1, "overshoot r must be >= 1");
    if ell <= 0 {
        return Ok(ExactScalar::one());
    }
    let z = z_poly(r - 1, w)?;
    Ok(ipow(&w.q, 2 * ell) * z.eval_column(ell)
        + &w.gamma * ipow(&w.q, 2 * ell - 1) * z.eval_column(ell - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_weights::parse_exact;

    fn r(s: &str) -> ExactScalar {
        parse_exact(s).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(StartConfig::from_starts(vec![0, 2, 3]).is_ok());
        assert_eq!(
            StartConfig::from_starts(vec![1, 2]),
            Err(ConfigError::FirstNotZero(1))
        );
        assert!(StartConfig::from_starts(vec![0, 2, 2]).is_err());
        let cfg = StartConfig::from_defects(&[1, 3], 3, 5).unwrap();
        assert_eq!(cfg.starts(), &[0, 2, 4, 5]);
        assert_eq!(cfg.defects(), vec![1, 3]);
        assert!(StartConfig::from_defects(&[1], 3, 5).is_err());
        assert!(StartConfig::from_defects(&[5], 3, 4).is_err());
        assert!(StartConfig::from_defects(&[4], 3, 4).is_err());
        assert_eq!(StartConfig::from_defects(&[], 4, 4).unwrap(), StartConfig::diamond(4));
    }

    #[test]
    fn gv_matrix_small() {
        let w = WeightPair::new(r("2/3"), r("5/4")).unwrap();
        let a = build_gv_matrix(&StartConfig::diamond(0), &w).unwrap();
        assert_eq!(a.rows(), &[vec![int(1)]]);
        let a = build_gv_matrix(&StartConfig::diamond(1), &w).unwrap();
        let z11 = int(1) + &w.gamma * &w.q + &w.q * &w.q;
        assert_eq!(a.rows(), &[vec![int(1), int(1)], vec![int(1), z11]]);
    }

    #[test]
    fn diamond_count() {
        let w = WeightPair::from_ints(1, 1);
        let cfg = StartConfig::diamond(4);
        assert_eq!(partition_det(&cfg, &w).unwrap(), int(1024));
        assert_eq!(partition_product(&cfg, &w).unwrap(), int(1024));
    }

    #[test]
    fn product_examples() {
        let w = WeightPair::new(r("3"), r("1/2")).unwrap();
        let cfg = StartConfig::diamond(1);
        let expected = &w.q * (&w.gamma + &w.q);
        assert_eq!(partition_product(&cfg, &w).unwrap(), expected);
        assert_eq!(partition_det(&cfg, &w).unwrap(), expected);
        let cfg = StartConfig::from_starts(vec![0, 2, 3]).unwrap();
        let w1 = WeightPair::from_ints(1, 1);
        assert_eq!(partition_product(&cfg, &w1).unwrap(), int(24));
        assert_eq!(partition_det(&cfg, &w1).unwrap(), int(24));
    }

    #[test]
    fn l_inverse_triangularizes() {
        let cfg = StartConfig::from_starts(vec![0, 1, 3, 4, 7]).unwrap();
        for w in [
            WeightPair::new(r("1/2"), r("3/2")).unwrap(),
            WeightPair::from_ints(2, 1),
        ] {
            let linv = lu_inverse_l(&cfg, &w).unwrap();
            for i in 0..=cfg.n() {
                assert_eq!(linv.get(i, i), &int(1));
            }
            let u = linv.mul(&build_gv_matrix(&cfg, &w).unwrap());
            assert!(u.is_upper_triangular());
            for i in 0..=cfg.n() {
                assert_eq!(u.get(i, i), &u_diagonal(&cfg, i, &w));
            }
        }
    }

    #[test]
    fn one_point_trivial_values() {
        let cfg = StartConfig::from_starts(vec![0, 2, 3, 5]).unwrap();
        let w = WeightPair::new(r("1/3"), r("2")).unwrap();
        assert_eq!(one_point_h(&cfg, 0, &w).unwrap(), int(1));
        assert_eq!(one_point_h(&cfg, 6, &w).unwrap(), int(0));
        let w1 = WeightPair::from_ints(1, 1);
        assert_eq!(one_point_h(&cfg, 0, &w1).unwrap(), int(1));
    }

    #[test]
    fn escape_examples() {
        let w = WeightPair::new(r("3/2"), r("2/5")).unwrap();
        assert_eq!(escape_y(0, 3, &w).unwrap(), int(1));
        for ell in 1..4 {
            let expected = ipow(&w.q, 2 * ell) + &w.gamma * ipow(&w.q, 2 * ell - 1);
            assert_eq!(escape_y(ell, 1, &w).unwrap(), expected);
        }
        let q2 = &w.q * &w.q;
        let expected = &q2 * (int(1) + &w.gamma * &w.q + &q2) + &w.gamma * &w.q;
        assert_eq!(escape_y(1, 2, &w).unwrap(), expected);
    }
}
