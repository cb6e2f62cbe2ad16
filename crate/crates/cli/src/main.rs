mod curves;
mod input;
mod sample;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use aztec_core::exact_weights::{format_exact, single_path_z, to_f64, ExactScalar};
use aztec_core::lgv_engine::{one_point_h, partition_det, partition_product};
use aztec_core::sampler::ChainSpec;
use aztec_core::verify::{self, Canary, Level};
use aztec_core::WeightPair;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::{invalid, CliError};

#[derive(Parser)]
#[command(name = "aztec", version, about = "Weighted domino tilings of Aztec rectangles with boundary defects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact rational partition and one-point functions.
    Exact {
        #[command(subcommand)]
        what: ExactCommand,
    },
    /// Arctic curve of a boundary profile.
    Curve(CurveArgs),
    /// Geodesic from (u, 0) to (0, v).
    Geodesic(GeodesicArgs),
    /// Members of the tangent family together with their envelope.
    Tangents(TangentsArgs),
    /// Occupation heatmap from Metropolis sampling.
    Sample(SampleArgs),
    /// Runs the invariant suite; exits 1 naming the first failing check.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// Weight per diagonal step (integer, fraction or decimal).
    #[arg(long, default_value = "1")]
    gamma: String,
    /// Area weight per unit (integer, fraction or decimal).
    #[arg(long, default_value = "1")]
    q: String,
}

#[derive(Args)]
struct ConfigArgs {
    /// Profile JSON file or `builtin:NAME`; discretized at size n.
    #[arg(long, conflicts_with = "defects")]
    profile: Option<String>,
    /// Comma-separated defect columns in [1, m].
    #[arg(long, allow_hyphen_values = true)]
    defects: Option<String>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
}

#[derive(Subcommand)]
enum ExactCommand {
    /// Weighted count of single paths from (i, 0) to (0, j).
    Single {
        #[arg(long)]
        i: u64,
        #[arg(long)]
        j: u64,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Partition function by determinant and by product formula.
    Partition {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// One-point function H at column ell on the top row.
    Onepoint {
        #[arg(long, allow_hyphen_values = true)]
        ell: i64,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        weights: WeightArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct AsymArgs {
    #[arg(long, default_value = "1")]
    gamma: String,
    /// Rescaled area weight; the finite-size weight is q = qq^(1/n).
    #[arg(long)]
    qq: Option<String>,
    /// Use the qq = 1 limit.
    #[arg(long)]
    q1: bool,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    profile: String,
    #[command(flatten)]
    asym: AsymArgs,
    /// Samples per parameter interval.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    #[command(flatten)]
    asym: AsymArgs,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TangentsArgs {
    #[arg(long)]
    profile: String,
    /// Number of tangent curves.
    #[arg(long, default_value_t = 12)]
    num: usize,
    #[command(flatten)]
    asym: AsymArgs,
    /// Samples per tangent curve and per arctic interval.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    profile: String,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value = "1")]
    gamma: String,
    /// Finite-size area weight.
    #[arg(long, conflicts_with = "match_scaling")]
    q: Option<String>,
    /// Rescaled weight for the overlay curve.
    #[arg(long)]
    qq: Option<String>,
    /// Sets q = qq^(1/N); requires --qq.
    #[arg(long, value_name = "N", requires = "qq")]
    match_scaling: Option<u64>,
    /// Total sweeps, burn-in included.
    #[arg(long, default_value_t = 10_000)]
    sweeps: u64,
    #[arg(long, default_value_t = 1_000)]
    burnin: u64,
    /// Sweeps between snapshots.
    #[arg(long, default_value_t = 10)]
    thin: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent chains; chain k uses seed + k.
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Worker threads; defaults to $AZTEC_WORKERS or the core count.
    #[arg(long)]
    workers: Option<usize>,
    /// Start every chain from the maximal-area configuration.
    #[arg(long)]
    max_start: bool,
    #[arg(long, default_value = "32,32")]
    bins: String,
    /// Heatmap CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG next to the CSV with the predicted arctic curve.
    #[arg(long)]
    overlay: bool,
    /// Samples per interval of the overlay curve.
    #[arg(long, default_value_t = 200)]
    curve_samples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only the sub-second subset.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, hide = true, value_enum)]
    canary: Option<CanaryArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CanaryArg {
    ZPoly,
}

fn decimal(v: &ExactScalar) -> String {
    format!("{:.15e}", to_f64(v))
}

fn cmd_exact(what: ExactCommand) -> Result<(), CliError> {
    match what {
        ExactCommand::Single { i, j, weights } => {
            let w = input::weights(&weights.gamma, &weights.q)?;
            let z = single_path_z(i, j, &w).map_err(invalid)?;
            println!("{}", format_exact(&z));
            println!("decimal {}", decimal(&z));
        }
        ExactCommand::Partition { config, weights } => {
            let (cfg, w) = exact_inputs(&config, &weights)?;
            let det = partition_det(&cfg, &w).map_err(invalid)?;
            let prod = partition_product(&cfg, &w).map_err(invalid)?;
            println!("{}", format_exact(&det));
            println!("decimal {}", decimal(&det));
            println!("product {}", format_exact(&prod));
            println!("equal {}", det == prod);
        }
        ExactCommand::Onepoint { ell, config, weights } => {
            let (cfg, w) = exact_inputs(&config, &weights)?;
            if ell < 0 || ell > cfg.m() {
                return Err(invalid(format!("--ell must lie in [0, {}]", cfg.m())));
            }
            let h = one_point_h(&cfg, ell, &w).map_err(invalid)?;
            println!("{}", format_exact(&h));
            println!("decimal {}", decimal(&h));
        }
    }
    Ok(())
}

fn exact_inputs(config: &ConfigArgs, weights: &WeightArgs) -> Result<(aztec_core::StartConfig, WeightPair), CliError> {
    let w = input::weights(&weights.gamma, &weights.q)?;
    let cfg = input::config(config.profile.as_deref(), config.defects.as_deref(), config.n, config.m)?;
    Ok((cfg, w))
}

fn params(a: &AsymArgs) -> Result<aztec_core::asymptotics::AsymParams, CliError> {
    input::asym_params(&a.gamma, a.qq.as_deref(), a.q1)
}

fn emit(output: &OutputArgs, csv: impl FnOnce() -> String, svg: impl FnOnce() -> String) -> Result<(), CliError> {
    let text = match output.format {
        Format::Csv => csv(),
        Format::Svg => svg(),
    };
    match &output.out {
        Some(path) => input::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_output(output: &OutputArgs) -> Result<(), CliError> {
    output.out.as_deref().map_or(Ok(()), input::check_out)
}

fn cmd_curve(a: CurveArgs) -> Result<(), CliError> {
    let prof = input::profile(&a.profile)?;
    let p = params(&a.asym)?;
    check_output(&a.output)?;
    let curve = curves::curve_for(&prof, &p, a.samples);
    if curve.singular > 0 {
        eprintln!("skipped {} singular samples", curve.singular);
    }
    emit(&a.output, || curves::curve_csv(&curve), || curves::curve_svg(&prof, &p, &curve))
}

fn cmd_geodesic(a: GeodesicArgs) -> Result<(), CliError> {
    let u = input::real("u", &a.u)?;
    let v = input::real("v", &a.v)?;
    let p = params(&a.asym)?;
    check_output(&a.output)?;
    let points = curves::geodesic_samples(u, v, &p, a.samples)?;
    emit(&a.output, || curves::xy_csv(&points), || curves::geodesic_svg(u, v, &points))
}

fn cmd_tangents(a: TangentsArgs) -> Result<(), CliError> {
    let prof = input::profile(&a.profile)?;
    let p = params(&a.asym)?;
    check_output(&a.output)?;
    let curve = curves::curve_for(&prof, &p, a.samples);
    if curve.singular > 0 {
        eprintln!("skipped {} singular samples", curve.singular);
    }
    let family = curves::tangent_family(&prof, &p, &curve, a.num, a.samples);
    emit(
        &a.output,
        || curves::tangents_csv(&family, &curve),
        || curves::tangents_svg(&prof, &family, &curve),
    )
}

fn cmd_sample(a: SampleArgs) -> Result<(), CliError> {
    let prof = input::profile(&a.profile)?;
    let cfg = prof.discretize(a.n).map_err(invalid)?;
    let q = match (&a.q, a.match_scaling) {
        (Some(q), _) => input::exact("q", q)?,
        (None, Some(n)) => {
            if n == 0 {
                return Err(invalid("--match-scaling needs N >= 1"));
            }
            let qq = input::real("qq", a.qq.as_deref().expect("clap enforces --qq"))?;
            if qq <= 0.0 {
                return Err(invalid("--qq must be positive"));
            }
            ExactScalar::from_float(qq.powf(1.0 / n as f64)).ok_or_else(|| invalid("q is not finite"))?
        }
        (None, None) => ExactScalar::from_integer(1.into()),
    };
    let w = WeightPair::new(input::exact("gamma", &a.gamma)?, q).map_err(invalid)?;
    let bins = input::bins(&a.bins)?;
    if a.burnin > a.sweeps {
        return Err(invalid("--burnin exceeds --sweeps"));
    }
    if a.thin == 0 || a.chains == 0 {
        return Err(invalid("--thin and --chains must be positive"));
    }
    // The overlay curve never guesses qq from q, except in the exact q = 1 case.
    let overlay = if a.overlay {
        let qq = match (&a.qq, w.is_q_one()) {
            (Some(qq), _) => Some(qq.as_str()),
            (None, true) => None,
            (None, false) => return Err(invalid("--overlay with q != 1 needs --qq")),
        };
        Some(input::asym_params(&a.gamma, qq, false)?)
    } else {
        None
    };
    input::check_out(&a.out)?;
    let svg_path = a.out.with_extension("svg");
    if overlay.is_some() && svg_path == a.out {
        return Err(invalid("--out must not end in .svg when --overlay is set"));
    }
    let job = sample::SampleJob {
        cfg,
        weights: w,
        spec: ChainSpec {
            sweeps: a.sweeps,
            burn_in: a.burnin,
            thin: a.thin,
            start: sample::start_of(a.max_start),
        },
        seed: a.seed,
        chains: a.chains,
        bins,
    };
    let heat = job.run(a.workers.unwrap_or_else(sample::default_workers))?;
    let mut files = vec![(a.out.clone(), heat.to_csv())];
    if let Some(p) = overlay {
        let curve = curves::curve_for(&prof, &p, a.curve_samples);
        let mu = to_f64(&prof.mu());
        files.push((svg_path, sample::overlay_svg(&heat, mu, &curve)));
    }
    input::write_all(&files)
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let level = if a.quick { Level::Quick } else { Level::Full };
    let canary = a.canary.map(|CanaryArg::ZPoly| Canary::ZPolyCoefficient);
    let report = verify::run(level, canary, a.seed);
    for c in &report.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        println!("{status} {} ({:.3}s)", c.name, c.elapsed.as_secs_f64());
    }
    match report.first_failure() {
        Some(c) => Err(CliError::Failed(format!("check failed: {}: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Exact { what } => cmd_exact(what),
        Command::Curve(a) => cmd_curve(a),
        Command::Geodesic(a) => cmd_geodesic(a),
        Command::Tangents(a) => cmd_tangents(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aztec: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
