//! Cross-module invariant suite behind the `verify` command.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::arctic::{arctic_curve, envelope_residuals, ArcticSolver};
use crate::asymptotics::free_energy::log_single_path_z;
use crate::asymptotics::geodesic::geodesic_residual_relative;
use crate::asymptotics::saddle::{in_exit_range, saddle_from_x};
use crate::asymptotics::{free_energy_s0, geodesic_y, AsymParams};
use crate::exact_weights::{
    brute_force_z, int, ipow, single_path_z, to_f64, z_poly, ExactScalar, WeightPair, ZPoly,
};
use crate::fixtures;
use crate::lgv_engine::{
    build_gv_matrix, lu_inverse_l, one_point_h, partition_det, partition_product, StartConfig,
};
use crate::sampler::{exact_enumerate_small, total_weight};

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Deliberate corruption used to confirm that the suite catches errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canary {
    /// Adds one to the constant coefficient of every `z_j`, `j >= 1`.
    ZPolyCoefficient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random rational in `(0, hi)` with small denominator, avoiding `avoid`.
pub fn random_rational(rng: &mut impl Rng, hi: i64, avoid: &[i64]) -> ExactScalar {
    loop {
        let den = rng.random_range(1..=7i64);
        let num = rng.random_range(1..hi * den);
        let v = ExactScalar::new(num.into(), den.into());
        if !avoid.iter().any(|a| v == int(*a)) {
            return v;
        }
    }
}

/// Random start configuration with `n <= max_n`, `m <= max_m`.
pub fn random_config(rng: &mut impl Rng, max_n: usize, max_m: i64) -> StartConfig {
    let n = rng.random_range(1..=max_n) as i64;
    let m = rng.random_range(n..=max_m.max(n));
    let mut inner: Vec<i64> = (1..m).collect();
    // Partial Fisher-Yates: keep n - 1 interior starts.
    for k in 0..(n - 1) as usize {
        let j = rng.random_range(k..inner.len());
        inner.swap(k, j);
    }
    let mut starts: Vec<i64> = inner[..(n - 1) as usize].to_vec();
    starts.push(0);
    starts.push(m);
    starts.sort_unstable();
    StartConfig::from_starts(starts).expect("valid by construction")
}

fn zpoly_for(j: u64, w: &WeightPair, canary: Option<Canary>) -> ZPoly {
    let mut p = z_poly(j, w).expect("generic q");
    if canary == Some(Canary::ZPolyCoefficient) && j >= 1 {
        p.coeffs[0] += ExactScalar::one();
    }
    p
}

struct Suite {
    level: Level,
    canary: Option<Canary>,
    rng: ChaCha8Rng,
}

impl Suite {
    fn weights(&mut self, count: usize) -> Vec<WeightPair> {
        (0..count)
            .map(|_| {
                let g = random_rational(&mut self.rng, 3, &[]);
                let q = random_rational(&mut self.rng, 2, &[1]);
                WeightPair::new(g, q).expect("valid weights")
            })
            .collect()
    }

    fn size(&self, quick: usize, full: usize) -> usize {
        match self.level {
            Level::Quick => quick,
            Level::Full => full,
        }
    }

    fn oracle_equivalence(&mut self) -> Outcome {
        let max = self.size(4, 6) as u64;
        for w in self.weights(self.size(4, 20)) {
            for i in 0..=max {
                for j in 0..=max {
                    let a = single_path_z(i, j, &w).map_err(|e| e.to_string())?;
                    let b = brute_force_z(i, j, &w).map_err(|e| e.to_string())?;
                    ensure(a == b, || format!("Z({i},{j}) differs at gamma={} q={}", w.gamma, w.q))?;
                }
            }
        }
        Ok(())
    }

    fn recursion(&mut self) -> Outcome {
        let max = self.size(5, 8) as u64;
        for w in self.weights(3) {
            let z = |i, j| single_path_z(i, j, &w).expect("generic q");
            for i in 1..=max {
                for j in 1..=max {
                    let rhs = z(i - 1, j)
                        + &w.gamma * ipow(&w.q, 2 * i as i64 - 1) * z(i - 1, j - 1)
                        + ipow(&w.q, 2 * i as i64) * z(i, j - 1);
                    ensure(z(i, j) == rhs, || format!("recursion fails at ({i},{j})"))?;
                }
            }
        }
        Ok(())
    }

    fn polynomial(&mut self) -> Outcome {
        let max = self.size(5, 8) as u64;
        for w in self.weights(3) {
            for j in 0..=max {
                let p = zpoly_for(j, &w, self.canary);
                ensure(p.degree() == Some(j as usize), || format!("z_{j} has degree {:?}", p.degree()))?;
                for i in 0..=max {
                    let z = single_path_z(i, j, &w).expect("generic q");
                    ensure(p.eval_column(i as i64) == z, || format!("z_{j}(q^{{2 {i}}}) != Z({i},{j})"))?;
                }
            }
        }
        Ok(())
    }

    fn delannoy(&mut self) -> Outcome {
        let n = self.size(8, 12);
        let mut d = vec![vec![ExactScalar::one(); n + 1]; n + 1];
        for i in 1..=n {
            for j in 1..=n {
                d[i][j] = &d[i - 1][j] + &d[i][j - 1] + &d[i - 1][j - 1];
            }
        }
        let w = WeightPair::from_ints(1, 1);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let z = single_path_z(i as u64, j as u64, &w).map_err(|e| e.to_string())?;
                ensure(z == *v, || format!("Z({i},{j}) at q = gamma = 1 is not Delannoy"))?;
            }
        }
        Ok(())
    }

    fn det_product(&mut self) -> Outcome {
        let count = self.size(10, 50);
        for k in 0..count {
            let cfg = random_config(&mut self.rng, 5, 9);
            let w = if k % 5 == 0 {
                WeightPair::new(random_rational(&mut self.rng, 3, &[]), int(1)).expect("valid")
            } else {
                self.weights(1).remove(0)
            };
            let det = partition_det(&cfg, &w).map_err(|e| e.to_string())?;
            let prod = partition_product(&cfg, &w).map_err(|e| e.to_string())?;
            ensure(det == prod, || format!("det != product for {cfg}"))?;
            ensure(det > ExactScalar::zero(), || format!("non-positive partition function for {cfg}"))?;
        }
        Ok(())
    }

    fn triangularity(&mut self) -> Outcome {
        for _ in 0..self.size(5, 30) {
            let cfg = random_config(&mut self.rng, 5, 9);
            let w = self.weights(1).remove(0);
            let a = build_gv_matrix(&cfg, &w).map_err(|e| e.to_string())?;
            let l = lu_inverse_l(&cfg, &w).map_err(|e| e.to_string())?;
            ensure(l.mul(&a).is_upper_triangular(), || format!("L^-1 A not upper triangular for {cfg}"))?;
        }
        Ok(())
    }

    fn one_point(&mut self) -> Outcome {
        for k in 0..self.size(4, 15) {
            let cfg = random_config(&mut self.rng, 4, 7);
            let w = self.weights(1).remove(0);
            let w = if k % 4 == 0 { WeightPair::new(w.gamma, int(1)).expect("valid") } else { w };
            let a = build_gv_matrix(&cfg, &w).map_err(|e| e.to_string())?;
            let det = a.det();
            let n = cfg.n();
            for ell in 0..=cfg.m() {
                let mut modified = a.clone();
                let zn = zpoly_for(n as u64, &w, self.canary);
                for (i, &ai) in cfg.starts().iter().enumerate() {
                    let entry = if ai >= ell {
                        column_weight(&w, &zn, n as i64, ai, ell)
                    } else {
                        ExactScalar::zero()
                    };
                    modified.set(i, n, entry);
                }
                let oracle = modified.det() / &det;
                let h = one_point_h(&cfg, ell, &w).map_err(|e| e.to_string())?;
                ensure(h == oracle, || format!("H^({ell}) mismatch for {cfg}"))?;
            }
        }
        Ok(())
    }

    fn enumeration(&mut self) -> Outcome {
        for _ in 0..self.size(4, 20) {
            let cfg = random_config(&mut self.rng, 3, 6);
            let w = self.weights(1).remove(0);
            let states = exact_enumerate_small(&cfg, &w).map_err(|e| e.to_string())?;
            let det = partition_det(&cfg, &w).map_err(|e| e.to_string())?;
            ensure(total_weight(&states) == det, || format!("enumeration total != det for {cfg}"))?;
        }
        Ok(())
    }

    fn circle(&mut self) -> Outcome {
        let p = AsymParams::unit(1.0);
        for s in arctic_curve(&fixtures::aztec_diamond(), &p, 100).samples {
            let r = (s.x - 0.5).powi(2) + (s.y - 0.5).powi(2) - 0.25;
            ensure(r.abs() <= 1e-9, || format!("sample {s:?} off the circle by {r}"))?;
        }
        for s in arctic_curve(&fixtures::semicircle(), &p, 100).samples {
            let r = s.x * s.x + s.y * s.y - 2.0 * s.x;
            ensure(r.abs() <= 1e-9, || format!("sample {s:?} off the semicircle by {r}"))?;
        }
        Ok(())
    }

    fn envelope(&mut self) -> Outcome {
        let count = self.size(40, 200);
        let profiles = [
            fixtures::semicircle(),
            fixtures::min_slope(),
            fixtures::gap(),
            fixtures::aztec_diamond(),
        ];
        let mut done = 0;
        while done < count {
            let prof = &profiles[done % profiles.len()];
            let p = random_params(&mut self.rng);
            let solver = ArcticSolver::new(prof, &p);
            let Some(t) = random_admissible_t(&mut self.rng, &solver) else { continue };
            let Ok((r0, r1)) = envelope_residuals(&solver, t) else { continue };
            ensure(r0 <= 1e-6 && r1 <= 1e-6, || {
                format!("{:?} at t={t}, gamma={}, qq={}: residuals {r0:e}, {r1:e}", prof.name, p.gamma, p.qq())
            })?;
            done += 1;
        }
        Ok(())
    }

    fn geodesic(&mut self) -> Outcome {
        for _ in 0..self.size(10, 50) {
            let u = self.rng.random_range(0.2..2.0);
            let v = self.rng.random_range(0.2..2.0);
            let p = random_params(&mut self.rng);
            if p.is_unit() {
                continue;
            }
            let lq2 = p.mode.log_q2();
            for k in 0..=20 {
                let x = u * k as f64 / 20.0;
                let y = geodesic_y(u, v, x, &p).map_err(|e| e.to_string())?;
                let r = geodesic_residual_relative((lq2 * x).exp(), (lq2 * y).exp(), (lq2 * u).exp(), (lq2 * v).exp(), p.gamma);
                ensure(r <= 1e-9, || format!("geodesic residual {r:e} at u={u} v={v} x={x}"))?;
            }
        }
        Ok(())
    }

    fn symmetry(&mut self) -> Outcome {
        for prof in [fixtures::min_slope(), fixtures::gap()] {
            let mu = to_f64(&prof.mu());
            let mirror = prof.reflect();
            for (gamma, qq) in [(1.0, 1.0), (0.5, 1.0), (2.0, 1.5), (0.7, 0.6)] {
                let p = AsymParams::new(gamma, qq).map_err(|e| e.to_string())?;
                let pr = p.reflected().map_err(|e| e.to_string())?;
                let right = ArcticSolver::new(&mirror, &pr);
                for s in arctic_curve(&prof, &p, self.size(10, 40)).samples {
                    if !s.t.is_finite() {
                        continue;
                    }
                    let Ok((x, y)) = right.point_xy(p.reflect_t(s.t, mu)) else {
                        return Err(format!("mirror point missing at t={}", s.t));
                    };
                    ensure((mu - x - s.x).abs() <= 1e-8 && (y - s.y).abs() <= 1e-8, || {
                        format!("{:?} t={} gamma={gamma} qq={qq}: ({}, {}) vs ({}, {y})", prof.name, s.t, s.x, s.y, mu - x)
                    })?;
                }
            }
        }
        Ok(())
    }

    fn saddle(&mut self) -> Outcome {
        for prof in [fixtures::semicircle(), fixtures::min_slope(), fixtures::gap()] {
            let mu = to_f64(&prof.mu());
            for (gamma, qq) in [(1.0, 2.0), (0.3, 0.5), (3.0, 1.2)] {
                let p = AsymParams::new(gamma, qq).map_err(|e| e.to_string())?;
                let solver = ArcticSolver::new(&prof, &p);
                for s in arctic_curve(&prof, &p, 30).samples {
                    if !s.t.is_finite() || !in_exit_range(&prof, s.t, &p) {
                        continue;
                    }
                    let x = solver.moment().value(s.t).map_err(|e| e.to_string())?;
                    let sol = saddle_from_x(s.t, x, &p).map_err(|e| e.to_string())?;
                    ensure(sol.within_bounds(mu, 1e-12), || format!("bounds fail at t={}: {sol:?}", s.t))?;
                }
            }
        }
        Ok(())
    }

    fn free_energy(&mut self) -> Outcome {
        let n = 400u64;
        for qq in [0.5f64, 2.0] {
            let p = AsymParams::new(1.0, qq).map_err(|e| e.to_string())?;
            let s0 = free_energy_s0(1.0, 1.0, &p).map_err(|e| e.to_string())?.s0;
            let finite = log_single_path_z(n, n, 1.0, qq.powf(1.0 / n as f64)) / n as f64;
            ensure((finite - s0).abs() <= 0.05, || format!("qq={qq}: finite {finite} vs S0 {s0}"))?;
        }
        Ok(())
    }
}

/// `Z_{(a,0) -> (ell, n)} = q^{2 n ell} z_n(q^{2a - 2 ell})`.
fn column_weight(w: &WeightPair, zn: &ZPoly, n: i64, a: i64, ell: i64) -> ExactScalar {
    ipow(&w.q, 2 * n * ell) * zn.eval_column(a - ell)
}

/// `gamma` in `[0.2, 3]` and `qq` in `{1}` or `[0.4, 2.5]`.
pub fn random_params(rng: &mut impl Rng) -> AsymParams {
    let gamma = rng.random_range(0.2..3.0);
    let qq = match rng.random_range(0..4) {
        0 => 1.0,
        1 => rng.random_range(0.4..0.95),
        _ => rng.random_range(1.05..2.5),
    };
    AsymParams::new(gamma, qq).expect("valid parameters")
}

/// A parameter drawn from the admissible domain, away from its singular
/// points; semi-infinite pieces are sampled through `end +- tan(theta)`.
pub fn random_admissible_t(rng: &mut impl Rng, solver: &ArcticSolver) -> Option<f64> {
    let domain = &solver.classification().domain;
    let piece = &domain[rng.random_range(0..domain.len())];
    let iv = piece.interval;
    let theta = rng.random_range(0.02..1.5f64);
    let t = match (iv.lo.is_finite(), iv.hi.is_finite()) {
        (true, true) => iv.lo + (iv.hi - iv.lo) * rng.random_range(0.01..0.99),
        (true, false) => iv.lo + theta.tan(),
        (false, true) => iv.hi - theta.tan(),
        (false, false) => theta.tan() * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
    };
    let near_node = solver
        .moment()
        .singular_points()
        .iter()
        .any(|a| (t - a).abs() < 1e-6 * (1.0 + a.abs()));
    (!near_node).then_some(t)
}

#[allow(clippy::type_complexity)]
fn checks(level: Level) -> Vec<(&'static str, fn(&mut Suite) -> Outcome)> {
    let mut list: Vec<(&'static str, fn(&mut Suite) -> Outcome)> = vec![
        ("oracle equivalence", Suite::oracle_equivalence),
        ("recursion identity", Suite::recursion),
        ("polynomial evaluation identity", Suite::polynomial),
        ("Delannoy specialization", Suite::delannoy),
        ("determinant equals product", Suite::det_product),
        ("upper triangularity of L^-1 A", Suite::triangularity),
        ("one-point residue sum", Suite::one_point),
        ("enumeration equals determinant", Suite::enumeration),
        ("arctic circle and semicircle", Suite::circle),
        ("envelope property", Suite::envelope),
        ("geodesic residual", Suite::geodesic),
        ("left-right symmetry", Suite::symmetry),
        ("saddle bounds", Suite::saddle),
    ];
    if level == Level::Full {
        list.push(("free energy convergence", Suite::free_energy));
    }
    list
}

/// Runs every check in order, stopping at nothing: each failure is recorded
/// with the message of its first violated instance.
pub fn run(level: Level, canary: Option<Canary>, seed: u64) -> Report {
    let mut suite = Suite {
        level,
        canary,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    let mut report = Report::default();
    for (name, check) in checks(level) {
        let start = Instant::now();
        let outcome = check(&mut suite);
        report.checks.push(CheckResult {
            name,
            passed: outcome.is_ok(),
            detail: outcome.err().unwrap_or_default(),
            elapsed: start.elapsed(),
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run(Level::Quick, None, 1);
        assert!(report.passed(), "{:?}", report.first_failure());
    }

    #[test]
    fn canary_is_caught_by_name() {
        let report = run(Level::Quick, Some(Canary::ZPolyCoefficient), 1);
        let first = report.first_failure().expect("canary must fail");
        assert_eq!(first.name, "polynomial evaluation identity");
    }

    #[test]
    fn random_configs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let cfg = random_config(&mut rng, 5, 9);
            assert!(cfg.n() <= 5 && cfg.m() <= 9);
        }
    }
}
