//! Metropolis sampling of non-intersecting Schröder path systems and an
//! exhaustive enumerator for small instances.
//!
//! Every path `i >= 1` owns `a_i + i` sites, one per position of its longest
//! possible step word. A step picks a site and one of three local moves
//! uniformly; positions past the current end of the word are idle. Since the
//! site count never changes, each move and its reverse are proposed with the
//! same probability and plain Metropolis acceptance gives detailed balance.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_weights::{ipow, to_f64, ExactScalar, LatticePath, Step, WeightPair};
use crate::lgv_engine::StartConfig;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("enumeration exceeds the budget of {budget} states")]
    SizeLimit { budget: u64 },
    #[error("invalid path system: {0}")]
    Invalid(String),
    #[error("q must be positive for sampling")]
    NonPositiveQ,
}

/// Largest state count [`exact_enumerate_small`] will produce.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Canonical key of a path system: the step words of paths `0..=n`.
pub type SystemKey = Vec<String>;

/// Which deterministic configuration a chain starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremal {
    MinArea,
    MaxArea,
}

/// A configuration of `n + 1` vertex-disjoint paths, path `i` running from
/// `(a_i, 0)` to `(0, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSystem {
    cfg: StartConfig,
    steps: Vec<Vec<Step>>,
    /// `verts[i][j]` is the vertex before step `j` of path `i`.
    verts: Vec<Vec<(i32, i32)>>,
    /// Owner of each lattice vertex, `path + 1`, or 0 when free.
    grid: Vec<u32>,
    width: usize,
    area: i64,
    diag: u64,
}

fn step_area(x: i32, step: Step) -> i64 {
    match step {
        Step::Up => 2 * x as i64,
        Step::Diag => 2 * x as i64 - 1,
        Step::Left => 0,
    }
}

impl PathSystem {
    pub fn from_steps(cfg: &StartConfig, steps: Vec<Vec<Step>>) -> Result<Self, SamplerError> {
        let n = cfg.n();
        if steps.len() != n + 1 {
            return Err(SamplerError::Invalid(format!("expected {} paths, got {}", n + 1, steps.len())));
        }
        let width = cfg.m() as usize + 1;
        let mut sys = PathSystem {
            cfg: cfg.clone(),
            steps: Vec::with_capacity(n + 1),
            verts: Vec::with_capacity(n + 1),
            grid: vec![0; width * (n + 1)],
            width,
            area: 0,
            diag: 0,
        };
        for (i, word) in steps.into_iter().enumerate() {
            let (mut x, mut y) = (cfg.starts()[i] as i32, 0i32);
            let mut verts = Vec::with_capacity(word.len() + 1);
            verts.push((x, y));
            for &s in &word {
                sys.area += step_area(x, s);
                sys.diag += u64::from(s == Step::Diag);
                let (dx, dy) = s.delta();
                x += dx as i32;
                y += dy as i32;
                if x < 0 || y > n as i32 {
                    return Err(SamplerError::Invalid(format!("path {i} leaves the region")));
                }
                verts.push((x, y));
            }
            if (x, y) != (0, i as i32) {
                return Err(SamplerError::Invalid(format!("path {i} ends at ({x}, {y})")));
            }
            for &v in &verts {
                let cell = sys.index(v);
                if sys.grid[cell] != 0 {
                    return Err(SamplerError::Invalid(format!("vertex {v:?} is shared")));
                }
                sys.grid[cell] = i as u32 + 1;
            }
            sys.steps.push(word);
            sys.verts.push(verts);
        }
        Ok(sys)
    }

    fn index(&self, (x, y): (i32, i32)) -> usize {
        y as usize * self.width + x as usize
    }

    fn is_free(&self, v: (i32, i32)) -> bool {
        self.grid[self.index(v)] == 0
    }

    pub fn cfg(&self) -> &StartConfig {
        &self.cfg
    }

    /// Total area `A` over all paths.
    pub fn area(&self) -> i64 {
        self.area
    }

    /// Total number of diagonal steps `k`.
    pub fn diag(&self) -> u64 {
        self.diag
    }

    pub fn steps(&self, i: usize) -> &[Step] {
        &self.steps[i]
    }

    /// Vertices of path `i`, start first.
    pub fn vertices(&self, i: usize) -> &[(i32, i32)] {
        &self.verts[i]
    }

    pub fn paths(&self) -> Vec<LatticePath> {
        self.steps
            .iter()
            .zip(self.cfg.starts())
            .map(|(s, &a)| LatticePath {
                start: a,
                steps: s.clone(),
            })
            .collect()
    }

    pub fn key(&self) -> SystemKey {
        self.steps
            .iter()
            .map(|w| w.iter().map(|s| s.letter()).collect())
            .collect()
    }

    pub fn weight(&self, w: &WeightPair) -> ExactScalar {
        ipow(&w.gamma, self.diag as i64) * ipow(&w.q, self.area)
    }

    /// Rebuilds the system from its step words and compares every cache.
    pub fn check(&self) -> Result<(), SamplerError> {
        let fresh = PathSystem::from_steps(&self.cfg, self.steps.clone())?;
        if fresh != *self {
            return Err(SamplerError::Invalid("cached data out of sync".into()));
        }
        Ok(())
    }

    /// Lowest configuration: each path, from the bottom up, takes the
    /// step word that is first in the order Left < Diag < Up among those
    /// that still reach its endpoint.
    pub fn extremal(cfg: &StartConfig, mode: Extremal) -> Self {
        let n = cfg.n();
        let words = match mode {
            Extremal::MaxArea => (0..=n)
                .map(|i| {
                    let mut w = vec![Step::Up; i];
                    w.extend(std::iter::repeat_n(Step::Left, cfg.starts()[i] as usize));
                    w
                })
                .collect(),
            Extremal::MinArea => {
                let width = cfg.m() as usize + 1;
                let mut occupied = vec![false; width * (n + 1)];
                let mut words = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let word = lowest_path(cfg.starts()[i] as i32, i as i32, width, &occupied)
                        .expect("a non-intersecting system always exists");
                    let (mut x, mut y) = (cfg.starts()[i] as i32, 0);
                    occupied[x as usize] = true;
                    for &s in &word {
                        let (dx, dy) = s.delta();
                        x += dx as i32;
                        y += dy as i32;
                        occupied[y as usize * width + x as usize] = true;
                    }
                    words.push(word);
                }
                words
            }
        };
        PathSystem::from_steps(cfg, words).expect("extremal systems are valid")
    }
}

/// Depth-first search with move order Left, Diag, Up; vertices that cannot
/// reach the target are remembered so each is expanded at most once.
fn lowest_path(start: i32, target_y: i32, width: usize, occupied: &[bool]) -> Option<Vec<Step>> {
    let idx = |x: i32, y: i32| y as usize * width + x as usize;
    if occupied[idx(start, 0)] {
        return None;
    }
    let mut dead = vec![false; occupied.len()];
    let mut word: Vec<Step> = Vec::new();
    let mut stack: Vec<((i32, i32), usize)> = vec![((start, 0), 0)];
    let order = [Step::Left, Step::Diag, Step::Up];
    while let Some(top) = stack.len().checked_sub(1) {
        let ((x, y), tried) = stack[top];
        if (x, y) == (0, target_y) {
            return Some(word);
        }
        let next = order[tried..].iter().enumerate().find_map(|(k, &s)| {
            let (dx, dy) = s.delta();
            let (nx, ny) = (x + dx as i32, y + dy as i32);
            let open = nx >= 0 && ny <= target_y && !occupied[idx(nx, ny)] && !dead[idx(nx, ny)];
            open.then_some((tried + k, s, (nx, ny)))
        });
        match next {
            Some((k, s, v)) => {
                stack[top].1 = k + 1;
                word.push(s);
                stack.push((v, 0));
            }
            None => {
                dead[idx(x, y)] = true;
                stack.pop();
                word.pop();
            }
        }
    }
    None
}

/// Log-weights used by the chain; `q` and `gamma` are converted to `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainWeights {
    pub log_gamma: f64,
    pub log_q: f64,
}

impl ChainWeights {
    pub fn new(w: &WeightPair) -> Result<Self, SamplerError> {
        let q = to_f64(&w.q);
        if q <= 0.0 {
            return Err(SamplerError::NonPositiveQ);
        }
        Ok(Self {
            log_gamma: to_f64(&w.gamma).ln(),
            log_q: q.ln(),
        })
    }

    fn log_ratio(&self, d_area: i64, d_diag: i64) -> f64 {
        let mut r = d_area as f64 * self.log_q;
        if d_diag != 0 {
            r += d_diag as f64 * self.log_gamma;
        }
        r
    }
}

/// Site table: `(path, position)` for every site of every path.
fn site_table(cfg: &StartConfig) -> Vec<(u32, u32)> {
    cfg.starts()
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| (0..(a as u32 + i as u32)).map(move |j| (i as u32, j)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edit {
    /// Swap steps `j`, `j+1`; the middle vertex moves to `mid`.
    Swap { mid: (i32, i32) },
    /// Replace a diagonal at `j` by two steps through `mid`.
    Split { first: Step, second: Step, mid: (i32, i32) },
    /// Replace steps `j`, `j+1` by a diagonal.
    Merge,
}

/// Proposal for `move_kind` in `0..3` at site `(i, j)`, with its changes in
/// area and diagonal count; `None` if the move does not apply.
fn propose(sys: &PathSystem, i: usize, j: usize, move_kind: u32) -> Option<(Edit, i64, i64)> {
    let steps = &sys.steps[i];
    let here = *steps.get(j)?;
    let next = steps.get(j + 1).copied();
    let (x, y) = sys.verts[i][j];
    use Step::*;
    match (move_kind, here, next) {
        (0, Left, Some(Up)) => Some((Edit::Swap { mid: (x, y + 1) }, 2, 0)),
        (0, Up, Some(Left)) => Some((Edit::Swap { mid: (x - 1, y) }, -2, 0)),
        (1, Diag, _) => Some((
            Edit::Split {
                first: Up,
                second: Left,
                mid: (x, y + 1),
            },
            1,
            -1,
        )),
        (1, Up, Some(Left)) => Some((Edit::Merge, -1, 1)),
        (2, Diag, _) => Some((
            Edit::Split {
                first: Left,
                second: Up,
                mid: (x - 1, y),
            },
            -1,
            -1,
        )),
        (2, Left, Some(Up)) => Some((Edit::Merge, 1, 1)),
        _ => None,
    }
}

fn apply(sys: &mut PathSystem, i: usize, j: usize, edit: Edit, d_area: i64, d_diag: i64) {
    let owner = i as u32 + 1;
    match edit {
        Edit::Swap { mid } => {
            let old = sys.verts[i][j + 1];
            let (oi, ni) = (sys.index(old), sys.index(mid));
            sys.grid[oi] = 0;
            sys.grid[ni] = owner;
            sys.verts[i][j + 1] = mid;
            sys.steps[i].swap(j, j + 1);
        }
        Edit::Split { first, second, mid } => {
            let ni = sys.index(mid);
            sys.grid[ni] = owner;
            sys.verts[i].insert(j + 1, mid);
            sys.steps[i][j] = first;
            sys.steps[i].insert(j + 1, second);
        }
        Edit::Merge => {
            let old = sys.verts[i].remove(j + 1);
            let oi = sys.index(old);
            sys.grid[oi] = 0;
            sys.steps[i][j] = Step::Diag;
            sys.steps[i].remove(j + 1);
        }
    }
    sys.area += d_area;
    sys.diag = (sys.diag as i64 + d_diag) as u64;
}

/// One Metropolis update at a uniformly chosen site with a uniformly chosen
/// move. Returns whether the state changed.
pub fn mcmc_step<R: Rng + ?Sized>(
    sys: &mut PathSystem,
    sites: &[(u32, u32)],
    weights: &ChainWeights,
    rng: &mut R,
) -> bool {
    if sites.is_empty() {
        return false;
    }
    let (i, j) = sites[rng.random_range(0..sites.len())];
    let move_kind = rng.random_range(0..3u32);
    let u: f64 = rng.random();
    let (i, j) = (i as usize, j as usize);
    let Some((edit, d_area, d_diag)) = propose(sys, i, j, move_kind) else {
        return false;
    };
    match edit {
        Edit::Swap { mid } | Edit::Split { mid, .. } if !sys.is_free(mid) => return false,
        _ => {}
    }
    let log_r = weights.log_ratio(d_area, d_diag);
    if log_r < 0.0 && u >= log_r.exp() {
        return false;
    }
    apply(sys, i, j, edit, d_area, d_diag);
    true
}

/// A single-threaded Metropolis chain owning its state and generator.
#[derive(Debug, Clone)]
pub struct Chain {
    state: PathSystem,
    sites: Vec<(u32, u32)>,
    weights: ChainWeights,
    rng: ChaCha8Rng,
    steps_done: u64,
}

impl Chain {
    pub fn new(state: PathSystem, w: &WeightPair, seed: u64) -> Result<Self, SamplerError> {
        Ok(Self {
            sites: site_table(state.cfg()),
            state,
            weights: ChainWeights::new(w)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            steps_done: 0,
        })
    }

    pub fn state(&self) -> &PathSystem {
        &self.state
    }

    /// Number of sites, i.e. steps per sweep.
    pub fn sites(&self) -> usize {
        self.sites.len()
    }

    pub fn step(&mut self) -> bool {
        let changed = mcmc_step(&mut self.state, &self.sites, &self.weights, &mut self.rng);
        self.steps_done += 1;
        if cfg!(debug_assertions) && self.steps_done % 1000 == 0 {
            self.state.check().expect("chain state consistent");
        }
        changed
    }

    pub fn sweep(&mut self) {
        for _ in 0..self.sites.len() {
            self.step();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSpec {
    /// Total sweeps, burn-in included.
    pub sweeps: u64,
    pub burn_in: u64,
    /// Sweeps between snapshots; at least 1.
    pub thin: u64,
    pub start: Extremal,
}

/// Runs a chain and hands each snapshot to `visit`. Snapshots are taken
/// after `burn_in`, `burn_in + thin`, ... sweeps, up to `sweeps`; with
/// `sweeps == burn_in` only the state after burn-in is reported. Returns the
/// number of snapshots.
pub fn run_chain(
    cfg: &StartConfig,
    w: &WeightPair,
    spec: &ChainSpec,
    seed: u64,
    mut visit: impl FnMut(&PathSystem),
) -> Result<u64, SamplerError> {
    let thin = spec.thin.max(1);
    let mut chain = Chain::new(PathSystem::extremal(cfg, spec.start), w, seed)?;
    let mut taken = 0;
    for s in 0..=spec.sweeps {
        if s > 0 {
            chain.sweep();
        }
        if s >= spec.burn_in && (s - spec.burn_in) % thin == 0 {
            visit(chain.state());
            taken += 1;
        }
    }
    Ok(taken)
}

/// Collects the snapshots of [`run_chain`]; convenient for small systems.
pub fn chain_snapshots(
    cfg: &StartConfig,
    w: &WeightPair,
    spec: &ChainSpec,
    seed: u64,
) -> Result<Vec<PathSystem>, SamplerError> {
    let mut out = Vec::new();
    run_chain(cfg, w, spec, seed, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Every non-intersecting system for `cfg` with its exact weight.
pub fn exact_enumerate_small(
    cfg: &StartConfig,
    w: &WeightPair,
) -> Result<BTreeMap<SystemKey, ExactScalar>, SamplerError> {
    let n = cfg.n();
    let width = cfg.m() as usize + 1;
    let mut occupied = vec![false; width * (n + 1)];
    occupied[cfg.starts()[0] as usize] = true;
    let mut words: Vec<Vec<Step>> = vec![Vec::new()];
    let mut out = BTreeMap::new();
    let mut count = 0u64;
    enumerate_from(cfg, 1, &mut occupied, width, &mut words, &mut |words| {
        count += 1;
        if count > ENUMERATION_BUDGET {
            return Err(SamplerError::SizeLimit {
                budget: ENUMERATION_BUDGET,
            });
        }
        let sys = PathSystem::from_steps(cfg, words.to_vec())?;
        out.insert(sys.key(), sys.weight(w));
        Ok(())
    })?;
    Ok(out)
}

type Emit<'a> = dyn FnMut(&[Vec<Step>]) -> Result<(), SamplerError> + 'a;

fn enumerate_from(
    cfg: &StartConfig,
    i: usize,
    occupied: &mut [bool],
    width: usize,
    words: &mut Vec<Vec<Step>>,
    emit: &mut Emit<'_>,
) -> Result<(), SamplerError> {
    if i > cfg.n() {
        return emit(words);
    }
    let start = (cfg.starts()[i] as i32, 0i32);
    let idx = |(x, y): (i32, i32)| y as usize * width + x as usize;
    if occupied[idx(start)] {
        return Ok(());
    }
    occupied[idx(start)] = true;
    let mut word = Vec::new();
    let result = enumerate_path(cfg, i, start, occupied, width, &mut word, words, emit);
    occupied[idx(start)] = false;
    result
}

#[allow(clippy::too_many_arguments)]
fn enumerate_path(
    cfg: &StartConfig,
    i: usize,
    at: (i32, i32),
    occupied: &mut [bool],
    width: usize,
    word: &mut Vec<Step>,
    words: &mut Vec<Vec<Step>>,
    emit: &mut Emit<'_>,
) -> Result<(), SamplerError> {
    if at == (0, i as i32) {
        words.push(word.clone());
        let r = enumerate_from(cfg, i + 1, occupied, width, words, emit);
        words.pop();
        return r;
    }
    for s in [Step::Up, Step::Left, Step::Diag] {
        let (dx, dy) = s.delta();
        let next = (at.0 + dx as i32, at.1 + dy as i32);
        if next.0 < 0 || next.1 > i as i32 {
            continue;
        }
        let cell = next.1 as usize * width + next.0 as usize;
        if occupied[cell] {
            continue;
        }
        occupied[cell] = true;
        word.push(s);
        let r = enumerate_path(cfg, i, next, occupied, width, word, words, emit);
        word.pop();
        occupied[cell] = false;
        r?;
    }
    Ok(())
}

/// Per-cell step counts accumulated over snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellCounts {
    pub up: u64,
    pub left: u64,
    pub diag: u64,
}

/// Occupation frequencies on a `bx x by` grid over `[0, mu] x [0, 1]`,
/// rescaling lattice vertices by `n`. Each vertex is credited with the step
/// leaving it; a vertex with no outgoing step counts as empty. Reported
/// frequencies are per vertex and per snapshot, so `1 - up - left - diag` is
/// the empty fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    bins: (usize, usize),
    n: usize,
    m: usize,
    /// Cell of every lattice vertex, row-major over `(m + 1) x (n + 1)`.
    cell_of: Vec<usize>,
    vertices: Vec<u64>,
    counts: Vec<CellCounts>,
    samples: u64,
}

/// One row of the heatmap output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub up: f64,
    pub left: f64,
    pub diag: f64,
    pub samples: u64,
}

impl HeatmapCell {
    pub fn empty(&self) -> f64 {
        (1.0 - self.up - self.left - self.diag).max(0.0)
    }

    /// Largest single-type frequency, empty included.
    pub fn dominant(&self) -> f64 {
        self.up.max(self.left).max(self.diag).max(self.empty())
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))
    }
}

impl Heatmap {
    pub fn new(cfg: &StartConfig, bins: (usize, usize)) -> Self {
        let (bx, by) = (bins.0.max(1), bins.1.max(1));
        let n = cfg.n().max(1);
        let m = cfg.m().max(0) as usize;
        let width = m + 1;
        let mut cell_of = Vec::with_capacity(width * (cfg.n() + 1));
        let mut vertices = vec![0u64; bx * by];
        for y in 0..=cfg.n() {
            for x in 0..width {
                let cx = if m == 0 { 0 } else { (x * bx / m).min(bx - 1) };
                let cy = if cfg.n() == 0 { 0 } else { (y * by / cfg.n()).min(by - 1) };
                let c = cy * bx + cx;
                cell_of.push(c);
                vertices[c] += 1;
            }
        }
        Self {
            bins: (bx, by),
            n,
            m,
            cell_of,
            vertices,
            counts: vec![CellCounts::default(); bx * by],
            samples: 0,
        }
    }

    pub fn accumulate(&mut self, sys: &PathSystem) {
        let width = self.m + 1;
        for i in 0..=sys.cfg().n() {
            for (&(x, y), &s) in sys.vertices(i).iter().zip(sys.steps(i)) {
                let c = &mut self.counts[self.cell_of[y as usize * width + x as usize]];
                match s {
                    Step::Up => c.up += 1,
                    Step::Left => c.left += 1,
                    Step::Diag => c.diag += 1,
                }
            }
        }
        self.samples += 1;
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Adds the counts of another heatmap over the same grid and system.
    pub fn merge(&mut self, other: &Heatmap) {
        assert!(self.bins == other.bins && self.cell_of == other.cell_of, "heatmap grids differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            a.up += b.up;
            a.left += b.left;
            a.diag += b.diag;
        }
        self.samples += other.samples;
    }

    pub fn raw_counts(&self) -> &[CellCounts] {
        &self.counts
    }

    /// Cells in row-major order from the bottom-left corner.
    pub fn cells(&self) -> Vec<HeatmapCell> {
        let (bx, by) = self.bins;
        let mu = self.m as f64 / self.n as f64;
        let mut out = Vec::with_capacity(bx * by);
        for cy in 0..by {
            for cx in 0..bx {
                let c = cy * bx + cx;
                let denom = (self.vertices[c] * self.samples) as f64;
                let freq = |v: u64| if denom > 0.0 { v as f64 / denom } else { 0.0 };
                out.push(HeatmapCell {
                    x_lo: mu * cx as f64 / bx as f64,
                    x_hi: mu * (cx + 1) as f64 / bx as f64,
                    y_lo: cy as f64 / by as f64,
                    y_hi: (cy + 1) as f64 / by as f64,
                    up: freq(self.counts[c].up),
                    left: freq(self.counts[c].left),
                    diag: freq(self.counts[c].diag),
                    samples: self.samples,
                });
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x_lo,x_hi,y_lo,y_hi,up,left,diag,samples\n");
        for c in self.cells() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                c.x_lo, c.x_hi, c.y_lo, c.y_hi, c.up, c.left, c.diag, c.samples
            );
        }
        s
    }
}

/// Sum of exact weights over an enumeration.
pub fn total_weight(states: &BTreeMap<SystemKey, ExactScalar>) -> ExactScalar {
    states.values().fold(ExactScalar::zero(), |a, b| a + b)
}

/// Exact stationary probabilities in the key order of `states`.
pub fn stationary_probabilities(states: &BTreeMap<SystemKey, ExactScalar>) -> Vec<f64> {
    let total = total_weight(states);
    if total.is_zero() {
        return vec![0.0; states.len()];
    }
    let inv = ExactScalar::one() / total;
    states.values().map(|v| to_f64(&(v * &inv))).collect()
}
