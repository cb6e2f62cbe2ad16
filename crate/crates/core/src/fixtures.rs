//! Named boundary profiles used as regression fixtures and by the CLI's
//! `builtin:` profile prefix.

use crate::boundary_profiles::{BoundaryProfile, Segment};

/// `alpha(sigma) = sigma`: no defects at all.
pub fn aztec_diamond() -> BoundaryProfile {
    BoundaryProfile::new(vec![Segment::parse("0", "1", "0", "1")]).named("aztec")
}

/// `alpha(sigma) = 2 sigma`: a defect at every second column.
pub fn semicircle() -> BoundaryProfile {
    BoundaryProfile::new(vec![Segment::parse("0", "1", "0", "2")]).named("semicircle")
}

/// A defect-free stretch in the middle third.
pub fn min_slope() -> BoundaryProfile {
    BoundaryProfile::new(vec![
        Segment::parse("0", "1/3", "0", "2"),
        Segment::parse("1/3", "2/3", "2/3", "1"),
        Segment::parse("2/3", "1", "1", "2"),
    ])
    .named("min-slope")
}

/// A run of defects at `sigma = 1/2` lifting `alpha` from 1 to 2.
pub fn gap() -> BoundaryProfile {
    BoundaryProfile::new(vec![
        Segment::parse("0", "1/2", "0", "2"),
        Segment::parse("1/2", "1", "2", "2"),
    ])
    .named("gap")
}

/// Slope one everywhere with a single jump: the whole region freezes apart
/// from the two diamond-like lobes.
pub fn fully_frozen() -> BoundaryProfile {
    BoundaryProfile::new(vec![
        Segment::parse("0", "1/2", "0", "1"),
        Segment::parse("1/2", "1", "1", "1"),
    ])
    .named("fully-frozen")
}

/// Two separate slope-one stretches, one touching each edge.
pub fn two_min_slope() -> BoundaryProfile {
    BoundaryProfile::new(vec![
        Segment::parse("0", "2/5", "0", "1"),
        Segment::parse("2/5", "3/5", "2/5", "2"),
        Segment::parse("3/5", "1", "4/5", "1"),
    ])
    .named("two-min-slope")
}

pub fn all() -> Vec<BoundaryProfile> {
    vec![
        aztec_diamond(),
        semicircle(),
        min_slope(),
        gap(),
        fully_frozen(),
        two_min_slope(),
    ]
}

pub fn by_name(name: &str) -> Option<BoundaryProfile> {
    all()
        .into_iter()
        .find(|p| p.name.as_deref() == Some(name))
}
