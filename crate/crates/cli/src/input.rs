//! Argument decoding shared by the subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use aztec_core::asymptotics::AsymParams;
use aztec_core::boundary_profiles::BoundaryProfile;
use aztec_core::exact_weights::to_f64;
use aztec_core::{fixtures, parse_exact, ExactScalar, StartConfig, WeightPair};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or inputs; nothing has been written.
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A verification check failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io { .. } | CliError::Failed(_) => 1,
        }
    }
}

pub fn invalid(msg: impl std::fmt::Display) -> CliError {
    CliError::Invalid(msg.to_string())
}

pub fn exact(label: &str, text: &str) -> Result<ExactScalar, CliError> {
    parse_exact(text).map_err(|e| invalid(format!("--{label}: {e}")))
}

/// A real parameter written as an integer, fraction or decimal.
pub fn real(label: &str, text: &str) -> Result<f64, CliError> {
    if let Ok(v) = parse_exact(text) {
        return Ok(to_f64(&v));
    }
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| invalid(format!("--{label}: cannot parse {text:?} as a number")))
}

pub fn weights(gamma: &str, q: &str) -> Result<WeightPair, CliError> {
    WeightPair::new(exact("gamma", gamma)?, exact("q", q)?).map_err(invalid)
}

pub fn asym_params(gamma: &str, qq: Option<&str>, q1: bool) -> Result<AsymParams, CliError> {
    let g = real("gamma", gamma)?;
    let qq = match (qq, q1) {
        (Some(_), true) => return Err(invalid("--qq and --q1 are mutually exclusive")),
        (Some(text), false) => real("qq", text)?,
        (None, _) => 1.0,
    };
    AsymParams::new(g, qq).map_err(invalid)
}

/// Reads `builtin:NAME` or a JSON profile file and validates it.
pub fn profile(source: &str) -> Result<BoundaryProfile, CliError> {
    let prof = if let Some(name) = source.strip_prefix("builtin:") {
        fixtures::by_name(name).ok_or_else(|| {
            let names: Vec<String> = fixtures::all().into_iter().filter_map(|p| p.name).collect();
            invalid(format!("unknown builtin profile {name:?}; available: {}", names.join(", ")))
        })?
    } else {
        let text = fs::read_to_string(source).map_err(|e| invalid(format!("{source}: {e}")))?;
        BoundaryProfile::from_json(&text).map_err(|e| invalid(format!("{source}: {e}")))?
    };
    prof.checked().map_err(|e| invalid(format!("{source}: {e}")))
}

pub fn defect_list(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i64>()
                .map_err(|_| invalid(format!("--defects: {s:?} is not an integer")))
        })
        .collect()
}

/// Start configuration from either `--profile` with `--n`, or `--defects`
/// with `--n` and `--m`.
pub fn config(
    profile_source: Option<&str>,
    defects: Option<&str>,
    n: Option<i64>,
    m: Option<i64>,
) -> Result<StartConfig, CliError> {
    let n = n.ok_or_else(|| invalid("--n is required"))?;
    match (profile_source, defects) {
        (Some(_), Some(_)) => Err(invalid("--profile and --defects are mutually exclusive")),
        (Some(source), None) => {
            if m.is_some() {
                return Err(invalid("--m is implied by --profile"));
            }
            let n = u64::try_from(n).map_err(|_| invalid("--n must be >= 1"))?;
            profile(source)?.discretize(n).map_err(invalid)
        }
        (None, Some(text)) => {
            let m = m.ok_or_else(|| invalid("--m is required with --defects"))?;
            StartConfig::from_defects(&defect_list(text)?, n, m).map_err(invalid)
        }
        (None, None) => Err(invalid("one of --profile or --defects is required")),
    }
}

/// `BX,BY` bin counts.
pub fn bins(text: &str) -> Result<(usize, usize), CliError> {
    let parsed: Option<Vec<usize>> = text.split(',').map(|s| s.trim().parse().ok()).collect();
    match parsed.as_deref() {
        Some(&[bx, by]) if bx > 0 && by > 0 => Ok((bx, by)),
        _ => Err(invalid(format!("--bins: expected two positive integers BX,BY, got {text:?}"))),
    }
}

/// Fails early when the output directory does not exist, so that no work is
/// done for a file that cannot be written.
pub fn check_out(path: &Path) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(dir) = dir {
        if !dir.is_dir() {
            return Err(invalid(format!("{}: directory does not exist", dir.display())));
        }
    }
    if path.is_dir() {
        return Err(invalid(format!("{}: is a directory", path.display())));
    }
    Ok(())
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Output files are written only after every one of them has been rendered.
pub fn write_all(files: &[(PathBuf, String)]) -> Result<(), CliError> {
    for (path, contents) in files {
        write(path, contents)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_accept_fractions_and_decimals() {
        assert_eq!(real("g", "3/4").unwrap(), 0.75);
        assert_eq!(real("g", "1.5").unwrap(), 1.5);
        assert_eq!(real("g", "2e-1").unwrap(), 0.2);
        assert!(real("g", "abc").is_err());
    }

    #[test]
    fn defect_lists() {
        assert_eq!(defect_list("").unwrap(), Vec::<i64>::new());
        assert_eq!(defect_list("2, 5 7").unwrap(), vec![2, 5, 7]);
        assert!(defect_list("2,x").is_err());
    }

    #[test]
    fn bin_pairs() {
        assert_eq!(bins("16,8").unwrap(), (16, 8));
        assert!(bins("16").is_err());
        assert!(bins("0,4").is_err());
    }

    #[test]
    fn builtin_profiles_resolve() {
        assert!(profile("builtin:aztec").is_ok());
        assert_eq!(profile("builtin:nope").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_sources_are_exclusive() {
        let cfg = config(None, Some(""), Some(3), Some(3)).unwrap();
        assert_eq!(cfg.starts(), &[0, 1, 2, 3]);
        assert!(config(Some("builtin:aztec"), Some(""), Some(3), None).is_err());
        assert_eq!(config(Some("builtin:semicircle"), None, Some(4), None).unwrap().m(), 8);
    }
}
