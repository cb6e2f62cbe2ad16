//! `sample`: Metropolis chains accumulated into an occupation heatmap.

use std::thread;

use aztec_core::asymptotics::ArcticCurve;
use aztec_core::sampler::{run_chain, ChainSpec, Extremal, Heatmap, HeatmapCell};
use aztec_core::{StartConfig, WeightPair};

use crate::input::{invalid, CliError};
use crate::svg::Canvas;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "AZTEC_WORKERS";

pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

pub struct SampleJob {
    pub cfg: StartConfig,
    pub weights: WeightPair,
    pub spec: ChainSpec,
    pub seed: u64,
    pub chains: usize,
    pub bins: (usize, usize),
}

impl SampleJob {
    /// Runs chain `k` with seed `seed + k`. Chains are spread over `workers`
    /// threads and merged in chain order, so the result does not depend on
    /// the worker count.
    pub fn run(&self, workers: usize) -> Result<Heatmap, CliError> {
        let chains = self.chains.max(1);
        let workers = workers.clamp(1, chains);
        let one = |k: usize| -> Result<Heatmap, CliError> {
            let mut heat = Heatmap::new(&self.cfg, self.bins);
            let seed = self.seed.wrapping_add(k as u64);
            run_chain(&self.cfg, &self.weights, &self.spec, seed, |s| heat.accumulate(s))
                .map_err(invalid)?;
            Ok(heat)
        };
        let mut results: Vec<Option<Result<Heatmap, CliError>>> = (0..chains).map(|_| None).collect();
        thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let one = &one;
                    scope.spawn(move || {
                        (w..chains)
                            .step_by(workers)
                            .map(|k| (k, one(k)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (k, r) in h.join().expect("sampler worker panicked") {
                    results[k] = Some(r);
                }
            }
        });
        let mut merged = Heatmap::new(&self.cfg, self.bins);
        for r in results {
            merged.merge(&r.expect("every chain ran")?);
        }
        Ok(merged)
    }
}

pub fn start_of(max: bool) -> Extremal {
    if max {
        Extremal::MaxArea
    } else {
        Extremal::MinArea
    }
}

/// Fill colour of the dominant occupation type: up, left, diagonal, empty.
fn fill(cell: &HeatmapCell) -> &'static str {
    let d = cell.dominant();
    if d == cell.up {
        "#1f77b4"
    } else if d == cell.left {
        "#2ca02c"
    } else if d == cell.diag {
        "#ff7f0e"
    } else {
        "#7f7f7f"
    }
}

/// Heatmap raster shaded by the dominant type, with the predicted curve on
/// top.
pub fn overlay_svg(heat: &Heatmap, mu: f64, curve: &ArcticCurve) -> String {
    let mut canvas = Canvas::new(mu, 1.0);
    for cell in heat.cells() {
        canvas.rect(cell.x_lo, cell.y_lo, cell.x_hi, cell.y_hi, fill(&cell), cell.dominant());
    }
    crate::curves::draw_curve(&mut canvas, curve, Some("#d62728"));
    canvas.finish()
}
