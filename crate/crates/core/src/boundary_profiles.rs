//! Piecewise-linear boundary profiles `alpha(sigma)` describing where paths
//! start in the scaling limit, their discretization to finite start
//! sequences, and the classification of freezing features.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::params::QqMode;
use crate::exact_weights::{format_exact, parse_exact, to_f64, ExactScalar};
use crate::lgv_engine::{ConfigError, StartConfig};

/// Linear piece `alpha(sigma) = alpha_lo + slope * (sigma - sigma_lo)` on
/// `[sigma_lo, sigma_hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub sigma_lo: ExactScalar,
    pub sigma_hi: ExactScalar,
    pub alpha_lo: ExactScalar,
    pub slope: ExactScalar,
}

impl Segment {
    pub fn new(sigma_lo: ExactScalar, sigma_hi: ExactScalar, alpha_lo: ExactScalar, slope: ExactScalar) -> Self {
        Self {
            sigma_lo,
            sigma_hi,
            alpha_lo,
            slope,
        }
    }

    /// Convenience constructor from fraction strings; panics on bad input.
    pub fn parse(sigma_lo: &str, sigma_hi: &str, alpha_lo: &str, slope: &str) -> Self {
        let p = |s: &str| parse_exact(s).expect("valid exact literal");
        Self::new(p(sigma_lo), p(sigma_hi), p(alpha_lo), p(slope))
    }

    pub fn alpha_hi(&self) -> ExactScalar {
        &self.alpha_lo + &self.slope * (&self.sigma_hi - &self.sigma_lo)
    }

    pub fn width(&self) -> ExactScalar {
        &self.sigma_hi - &self.sigma_lo
    }

    pub fn is_minimal_slope(&self) -> bool {
        self.slope.is_one()
    }

    fn alpha_at(&self, sigma: &ExactScalar) -> ExactScalar {
        &self.alpha_lo + &self.slope * (sigma - &self.sigma_lo)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub name: Option<String>,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoSegments,
    EmptySegment(usize),
    StartNotZero,
    EndNotOne,
    NotContiguous(usize),
    SlopeBelowOne(usize),
    AlphaNotZeroAtOrigin,
    NotIncreasing(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSegments => write!(f, "profile has no segments"),
            Violation::EmptySegment(i) => write!(f, "segment {i} has sigma_hi <= sigma_lo"),
            Violation::StartNotZero => write!(f, "first segment must start at sigma = 0"),
            Violation::EndNotOne => write!(f, "last segment must end at sigma = 1"),
            Violation::NotContiguous(i) => {
                write!(f, "segment {i} does not start where segment {} ends", i - 1)
            }
            Violation::SlopeBelowOne(i) => write!(f, "segment {i}: slope < 1"),
            Violation::AlphaNotZeroAtOrigin => write!(f, "alpha(0) must be 0"),
            Violation::NotIncreasing(i) => {
                write!(f, "alpha decreases across the boundary before segment {i}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// A slope-one stretch reaching `sigma = 0` or `sigma = 1` with no generic
    /// buffer. Its freezing interval is still computed, but it merges with
    /// the adjacent outer interval.
    MinimalSlopeAtEdge { segment: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::MinimalSlopeAtEdge { segment } => write!(
                f,
                "segment {segment} has minimal slope and touches the edge of [0,1]"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Invalid(Violation),
    #[error("floor map collides at n = {n}: a_{k} = a_{} = {value}", k - 1)]
    Collision { n: u64, k: u64, value: i64 },
    #[error("n must be >= 1")]
    ZeroSize,
    #[error("profile file: {0}")]
    Format(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl BoundaryProfile {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self {
            name: None,
            segments,
        }
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// Returns the profile if it satisfies every invariant.
    pub fn checked(self) -> Result<Self, ProfileError> {
        match self.validate().violations.into_iter().next() {
            Some(v) => Err(ProfileError::Invalid(v)),
            None => Ok(self),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let segs = &self.segments;
        if segs.is_empty() {
            report.violations.push(Violation::NoSegments);
            return report;
        }
        if !segs[0].sigma_lo.is_zero() {
            report.violations.push(Violation::StartNotZero);
        }
        if !segs[segs.len() - 1].sigma_hi.is_one() {
            report.violations.push(Violation::EndNotOne);
        }
        if !segs[0].alpha_lo.is_zero() {
            report.violations.push(Violation::AlphaNotZeroAtOrigin);
        }
        for (i, s) in segs.iter().enumerate() {
            if s.sigma_hi <= s.sigma_lo {
                report.violations.push(Violation::EmptySegment(i));
            }
            if s.slope < ExactScalar::one() {
                report.violations.push(Violation::SlopeBelowOne(i));
            }
            if i > 0 {
                if s.sigma_lo != segs[i - 1].sigma_hi {
                    report.violations.push(Violation::NotContiguous(i));
                }
                if s.alpha_lo < segs[i - 1].alpha_hi() {
                    report.violations.push(Violation::NotIncreasing(i));
                }
            }
            let at_edge = s.sigma_lo.is_zero() || s.sigma_hi.is_one();
            if s.is_minimal_slope() && at_edge {
                report
                    .warnings
                    .push(Warning::MinimalSlopeAtEdge { segment: i });
            }
        }
        report
    }

    /// `mu = alpha(1)`.
    pub fn mu(&self) -> ExactScalar {
        self.segments.last().map(Segment::alpha_hi).unwrap_or_default()
    }

    /// `alpha(sigma)`; at a breakpoint the left-hand limit is taken.
    pub fn alpha(&self, sigma: &ExactScalar) -> ExactScalar {
        let seg = self
            .segments
            .iter()
            .find(|s| sigma <= &s.sigma_hi)
            .unwrap_or_else(|| self.segments.last().expect("non-empty profile"));
        seg.alpha_at(sigma)
    }

    pub fn alpha_f64(&self, sigma: f64) -> f64 {
        let seg = self
            .segments
            .iter()
            .find(|s| sigma <= to_f64(&s.sigma_hi))
            .unwrap_or_else(|| self.segments.last().expect("non-empty profile"));
        to_f64(&seg.alpha_lo) + to_f64(&seg.slope) * (sigma - to_f64(&seg.sigma_lo))
    }

    /// Finite start sequence `a_k = floor(n alpha(k/n))`.
    pub fn discretize(&self, n: u64) -> Result<StartConfig, ProfileError> {
        if n == 0 {
            return Err(ProfileError::ZeroSize);
        }
        let scale = ExactScalar::from_integer(n.into());
        let mut starts: Vec<i64> = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            let sigma = ExactScalar::new(k.into(), n.into());
            let value = (&scale * self.alpha(&sigma)).floor().to_integer();
            let value = value.to_i64().expect("start column fits in i64");
            if let Some(&prev) = starts.last() {
                if value <= prev {
                    return Err(ProfileError::Collision { n, k, value });
                }
            }
            starts.push(value);
        }
        Ok(StartConfig::from_starts(starts)?)
    }

    /// Mirror image `alpha~(sigma) = mu - alpha(1 - sigma)`.
    pub fn reflect(&self) -> BoundaryProfile {
        let mu = self.mu();
        let one = ExactScalar::one();
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| Segment {
                sigma_lo: &one - &s.sigma_hi,
                sigma_hi: &one - &s.sigma_lo,
                alpha_lo: &mu - s.alpha_hi(),
                slope: s.slope.clone(),
            })
            .collect();
        BoundaryProfile {
            name: self.name.as_ref().map(|n| format!("{n}-reflected")),
            segments,
        }
    }

    /// Freezing features as closed alpha-intervals, before merging.
    pub fn features(&self) -> Vec<Feature> {
        let mut out = Vec::new();
        let mut run: Option<(ExactScalar, ExactScalar)> = None;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                let prev_hi = self.segments[i - 1].alpha_hi();
                if s.alpha_lo > prev_hi {
                    if let Some((lo, hi)) = run.take() {
                        out.push(Feature::new(FeatureKind::MinimalSlope, lo, hi));
                    }
                    out.push(Feature::new(FeatureKind::Gap, prev_hi, s.alpha_lo.clone()));
                }
            }
            if s.is_minimal_slope() {
                run = Some(match run.take() {
                    Some((lo, _)) => (lo, s.alpha_hi()),
                    None => (s.alpha_lo.clone(), s.alpha_hi()),
                });
            } else if let Some((lo, hi)) = run.take() {
                out.push(Feature::new(FeatureKind::MinimalSlope, lo, hi));
            }
        }
        if let Some((lo, hi)) = run {
            out.push(Feature::new(FeatureKind::MinimalSlope, lo, hi));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let file = ProfileFile {
            name: self.name.clone(),
            segments: self
                .segments
                .iter()
                .map(|s| SegmentFile {
                    sigma_lo: format_exact(&s.sigma_lo),
                    sigma_hi: format_exact(&s.sigma_hi),
                    alpha_lo: format_exact(&s.alpha_lo),
                    slope: format_exact(&s.slope),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("profile serializes") + "\n"
    }

    /// Parses the profile file format. Structural validation is separate; see
    /// [`BoundaryProfile::validate`].
    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let file: ProfileFile =
            serde_json::from_str(text).map_err(|e| ProfileError::Format(e.to_string()))?;
        let p = |field: &str, s: &str| {
            parse_exact(s).map_err(|e| ProfileError::Format(format!("{field}: {e}")))
        };
        let segments = file
            .segments
            .iter()
            .map(|s| {
                Ok(Segment {
                    sigma_lo: p("sigma_lo", &s.sigma_lo)?,
                    sigma_hi: p("sigma_hi", &s.sigma_hi)?,
                    alpha_lo: p("alpha_lo", &s.alpha_lo)?,
                    slope: p("slope", &s.slope)?,
                })
            })
            .collect::<Result<Vec<_>, ProfileError>>()?;
        Ok(Self {
            name: file.name,
            segments,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    segments: Vec<SegmentFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentFile {
    sigma_lo: String,
    sigma_hi: String,
    alpha_lo: String,
    slope: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Generic,
    MinimalSlope,
    Gap,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Generic => "generic",
            FeatureKind::MinimalSlope => "minimal-slope",
            FeatureKind::Gap => "gap",
        })
    }
}

/// A freezing feature: a gap `(alpha(sigma_p-), alpha(sigma_p+))` or a
/// maximal run of slope-one segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub kind: FeatureKind,
    pub alpha_lo: ExactScalar,
    pub alpha_hi: ExactScalar,
}

impl Feature {
    fn new(kind: FeatureKind, alpha_lo: ExactScalar, alpha_hi: ExactScalar) -> Self {
        Self {
            kind,
            alpha_lo,
            alpha_hi,
        }
    }
}

/// A closed interval of the real line; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl fmt::Display for TInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = |v: f64| {
            if v == f64::INFINITY {
                "inf".to_string()
            } else if v == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{v}")
            }
        };
        write!(f, "[{}, {}]", end(self.lo), end(self.hi))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentClass {
    pub kind: FeatureKind,
    pub alpha_lo: ExactScalar,
    pub alpha_hi: ExactScalar,
    pub t_interval: TInterval,
}

/// A connected piece of the admissible parameter domain after merging
/// touching intervals. Each piece traces one portion of the arctic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainPiece {
    pub tag: usize,
    pub interval: TInterval,
    /// Features absorbed into this piece; empty for a purely generic piece.
    pub features: Vec<FeatureKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub classes: Vec<SegmentClass>,
    pub domain: Vec<DomainPiece>,
}

impl Classification {
    pub fn contains(&self, t: f64) -> bool {
        self.domain.iter().any(|p| p.interval.contains(t))
    }
}

/// Image of `alpha` in the parameter: `qq^{2 alpha}`, or `alpha` itself in the
/// `qq = 1` mode.
pub fn alpha_to_t(alpha: f64, mode: &QqMode) -> f64 {
    match mode {
        QqMode::Unit => alpha,
        QqMode::Deformed(qq) => qq.powf(2.0 * alpha),
    }
}

fn ordered(a: f64, b: f64) -> TInterval {
    TInterval {
        lo: a.min(b),
        hi: a.max(b),
    }
}

/// Admissible parameter domain: where the moment function `x(t)` is real.
pub fn classify(profile: &BoundaryProfile, mode: &QqMode) -> Classification {
    let mu = profile.mu();
    let features = profile.features();
    let classes = features
        .iter()
        .map(|f| SegmentClass {
            kind: f.kind,
            alpha_lo: f.alpha_lo.clone(),
            alpha_hi: f.alpha_hi.clone(),
            t_interval: ordered(
                alpha_to_t(to_f64(&f.alpha_lo), mode),
                alpha_to_t(to_f64(&f.alpha_hi), mode),
            ),
        })
        .collect::<Vec<_>>();

    // Merge features whose alpha-intervals touch, exactly.
    let mut merged: Vec<(ExactScalar, ExactScalar, Vec<FeatureKind>)> = Vec::new();
    for f in &features {
        match merged.last_mut() {
            Some(last) if last.1 == f.alpha_lo => {
                last.1 = f.alpha_hi.clone();
                last.2.push(f.kind);
            }
            _ => merged.push((f.alpha_lo.clone(), f.alpha_hi.clone(), vec![f.kind])),
        }
    }

    let t0 = alpha_to_t(0.0, mode);
    let tmu = alpha_to_t(to_f64(&mu), mode);
    // Outer pieces, keyed by which end of [0, mu] they attach to.
    let increasing = tmu > t0;
    let outer_at = |at_zero: bool| -> TInterval {
        let edge = if at_zero { t0 } else { tmu };
        let goes_down = at_zero == increasing;
        if goes_down {
            TInterval {
                lo: f64::NEG_INFINITY,
                hi: edge,
            }
        } else {
            TInterval {
                lo: edge,
                hi: f64::INFINITY,
            }
        }
    };
    let mut zero_piece = (outer_at(true), vec![FeatureKind::Generic]);
    let mut mu_piece = (outer_at(false), vec![FeatureKind::Generic]);
    let mut inner = Vec::new();
    for (lo, hi, kinds) in merged {
        let iv = ordered(alpha_to_t(to_f64(&lo), mode), alpha_to_t(to_f64(&hi), mode));
        let touches_zero = lo.is_zero();
        let touches_mu = hi == mu;
        match (touches_zero, touches_mu) {
            (true, true) => {
                zero_piece.0 = TInterval {
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY,
                };
                zero_piece.1.extend(kinds);
                zero_piece.1.append(&mut mu_piece.1);
            }
            (true, false) => {
                zero_piece.0 = hull(zero_piece.0, iv);
                zero_piece.1.extend(kinds);
            }
            (false, true) => {
                mu_piece.0 = hull(mu_piece.0, iv);
                mu_piece.1.extend(kinds);
            }
            (false, false) => inner.push((iv, kinds)),
        }
    }

    let mut pieces = vec![zero_piece];
    if !mu_piece.1.is_empty() {
        pieces.push(mu_piece);
    }
    pieces.extend(inner);
    pieces.sort_by(|a, b| a.0.lo.total_cmp(&b.0.lo));
    let domain = pieces
        .into_iter()
        .enumerate()
        .map(|(tag, (interval, kinds))| DomainPiece {
            tag,
            interval,
            features: kinds
                .into_iter()
                .filter(|k| *k != FeatureKind::Generic)
                .collect(),
        })
        .collect();
    Classification { classes, domain }
}

fn hull(a: TInterval, b: TInterval) -> TInterval {
    TInterval {
        lo: a.lo.min(b.lo),
        hi: a.hi.max(b.hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(s: &str) -> ExactScalar {
        parse_exact(s).unwrap()
    }

    #[test]
    fn validation_examples() {
        let aztec = fixtures::aztec_diamond();
        assert!(aztec.validate().is_valid());
        assert_eq!(aztec.mu(), r("1"));
        let semi = fixtures::semicircle();
        assert!(semi.validate().is_valid());
        assert_eq!(semi.mu(), r("2"));
        let bad = BoundaryProfile::new(vec![Segment::parse("0", "1", "0", "1/2")]);
        let report = bad.validate();
        assert_eq!(report.first_violation(), Some(&Violation::SlopeBelowOne(0)));
        assert!(report.first_violation().unwrap().to_string().contains("slope < 1"));
    }

    #[test]
    fn structural_violations() {
        assert_eq!(
            BoundaryProfile::new(vec![]).validate().violations,
            vec![Violation::NoSegments]
        );
        let hole = BoundaryProfile::new(vec![
            Segment::parse("0", "1/3", "0", "1"),
            Segment::parse("1/2", "1", "1", "1"),
        ]);
        assert!(hole.validate().violations.contains(&Violation::NotContiguous(1)));
        let down = BoundaryProfile::new(vec![
            Segment::parse("0", "1/2", "0", "2"),
            Segment::parse("1/2", "1", "1/2", "1"),
        ]);
        assert!(down.validate().violations.contains(&Violation::NotIncreasing(1)));
        let shifted = BoundaryProfile::new(vec![Segment::parse("0", "1", "1", "1")]);
        assert!(shifted
            .validate()
            .violations
            .contains(&Violation::AlphaNotZeroAtOrigin));
    }

    #[test]
    fn edge_minimal_slope_is_flagged() {
        let report = fixtures::aztec_diamond().validate();
        assert!(report.is_valid());
        assert_eq!(
            report.warnings,
            vec![Warning::MinimalSlopeAtEdge { segment: 0 }]
        );
        assert!(fixtures::min_slope().validate().warnings.is_empty());
    }

    #[test]
    fn discretize_examples() {
        let a = fixtures::aztec_diamond().discretize(5).unwrap();
        assert_eq!(a.starts(), &[0, 1, 2, 3, 4, 5]);
        let a = fixtures::semicircle().discretize(3).unwrap();
        assert_eq!(a.starts(), &[0, 2, 4, 6]);
        let a = fixtures::fully_frozen().discretize(4).unwrap();
        assert_eq!(a.starts(), &[0, 1, 2, 5, 6]);
        assert_eq!(a.m(), 6);
    }

    #[test]
    fn discretize_rejects_collisions() {
        let p = BoundaryProfile::new(vec![
            Segment::parse("0", "1/2", "0", "1"),
            Segment::parse("1/2", "1", "1/2", "1"),
        ]);
        assert!(p.discretize(1).is_ok());
        assert!(matches!(p.discretize(0), Err(ProfileError::ZeroSize)));
    }

    #[test]
    fn json_round_trip() {
        let p = fixtures::min_slope();
        let text = p.to_json();
        let back = BoundaryProfile::from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"1/3\""));
        let decimal = r#"{"segments":[{"sigma_lo":"0","sigma_hi":"1","alpha_lo":"0","slope":"2.5"}]}"#;
        let p = BoundaryProfile::from_json(decimal).unwrap();
        assert_eq!(p.segments[0].slope, r("5/2"));
        assert!(BoundaryProfile::from_json("{\"segments\": 3}").is_err());
        let bad_num = r#"{"segments":[{"sigma_lo":"0","sigma_hi":"x","alpha_lo":"0","slope":"1"}]}"#;
        assert!(BoundaryProfile::from_json(bad_num).is_err());
    }

    #[test]
    fn reflect_is_involution() {
        for p in fixtures::all() {
            let back = p.reflect().reflect();
            assert_eq!(back.segments, p.segments);
            assert!(p.reflect().validate().is_valid());
            assert_eq!(p.reflect().mu(), p.mu());
        }
    }

    #[test]
    fn classify_generic_semicircle() {
        let c = classify(&fixtures::semicircle(), &QqMode::Deformed(1.5));
        assert!(c.classes.is_empty());
        assert_eq!(c.domain.len(), 2);
        assert_eq!(c.domain[0].interval.hi, 1.0);
        assert!((c.domain[1].interval.lo - 1.5f64.powi(4)).abs() < 1e-12);
        let c = classify(&fixtures::semicircle(), &QqMode::Deformed(0.5));
        assert_eq!(c.domain.len(), 2);
        assert!((c.domain[0].interval.hi - 0.0625).abs() < 1e-15);
        assert_eq!(c.domain[1].interval.lo, 1.0);
    }

    #[test]
    fn classify_gap_at_unit_q() {
        let c = classify(&fixtures::gap(), &QqMode::Unit);
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].kind, FeatureKind::Gap);
        assert_eq!(c.classes[0].t_interval, TInterval { lo: 1.0, hi: 2.0 });
        assert_eq!(c.domain.len(), 3);
        assert_eq!(c.domain[1].interval, TInterval { lo: 1.0, hi: 2.0 });
        assert_eq!(c.domain[1].features, vec![FeatureKind::Gap]);
    }

    #[test]
    fn classify_aztec_covers_line() {
        for mode in [QqMode::Unit, QqMode::Deformed(2.0), QqMode::Deformed(0.3)] {
            let c = classify(&fixtures::aztec_diamond(), &mode);
            assert_eq!(c.domain.len(), 1);
            assert_eq!(
                c.domain[0].interval,
                TInterval {
                    lo: f64::NEG_INFINITY,
                    hi: f64::INFINITY
                }
            );
        }
        let c = classify(&fixtures::aztec_diamond(), &QqMode::Deformed(2.0));
        assert_eq!(c.classes[0].kind, FeatureKind::MinimalSlope);
        assert_eq!(c.classes[0].t_interval, TInterval { lo: 1.0, hi: 4.0 });
    }

    #[test]
    fn classify_fully_frozen_merges_features() {
        let c = classify(&fixtures::fully_frozen(), &QqMode::Unit);
        assert_eq!(c.classes.len(), 3);
        assert_eq!(c.domain.len(), 1);
    }

    #[test]
    fn classify_min_slope_adds_piece() {
        let c = classify(&fixtures::min_slope(), &QqMode::Deformed(1.2));
        assert_eq!(c.domain.len(), 3);
        assert_eq!(c.domain[1].features, vec![FeatureKind::MinimalSlope]);
    }
}
