//! `curve`, `geodesic` and `tangents`.

use std::fmt::Write;

use aztec_core::asymptotics::{
    arctic_curve, geodesic_y, tangency_points, tangent_line, ArcticCurve, AsymParams,
};
use aztec_core::boundary_profiles::BoundaryProfile;
use aztec_core::exact_weights::to_f64;

use crate::input::{invalid, CliError};
use crate::svg::{color, Canvas};

/// Tangent curves are reported only inside this vertical window.
const Y_WINDOW: (f64, f64) = (-0.5, 1.5);

pub fn curve_csv(curve: &ArcticCurve) -> String {
    let mut s = String::from("interval,t,x,y\n");
    for p in &curve.samples {
        let _ = writeln!(s, "{},{},{},{}", p.interval_tag, p.t, p.x, p.y);
    }
    s
}

/// Draws the arctic curve, one polyline per parameter interval.
pub fn draw_curve(canvas: &mut Canvas, curve: &ArcticCurve, stroke: Option<&str>) {
    for tag in curve.tags() {
        let pts: Vec<(f64, f64)> = curve
            .samples
            .iter()
            .filter(|s| s.interval_tag == tag)
            .map(|s| (s.x, s.y))
            .collect();
        canvas.polyline(&pts, stroke.unwrap_or(color(tag)), 2.0);
    }
}

pub fn curve_svg(profile: &BoundaryProfile, p: &AsymParams, curve: &ArcticCurve) -> String {
    let mut canvas = Canvas::new(to_f64(&profile.mu()), 1.0);
    draw_curve(&mut canvas, curve, None);
    for tp in tangency_points(profile, p) {
        canvas.mark(tp.x, 0.0, "#000");
    }
    canvas.finish()
}

/// `(x, y)` samples of the geodesic from `(u, 0)` to `(0, v)`, starting at
/// `x = 0`. The endpoints are emitted exactly.
pub fn geodesic_samples(u: f64, v: f64, p: &AsymParams, samples: usize) -> Result<Vec<(f64, f64)>, CliError> {
    if !(u > 0.0 && v > 0.0) {
        return Err(invalid(format!("need u, v > 0, got u = {u}, v = {v}")));
    }
    let count = samples.max(2);
    let mut out = Vec::with_capacity(count);
    out.push((0.0, v));
    for k in 1..count - 1 {
        let x = u * k as f64 / (count - 1) as f64;
        out.push((x, geodesic_y(u, v, x, p).map_err(invalid)?));
    }
    out.push((u, 0.0));
    Ok(out)
}

pub fn xy_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("x,y\n");
    for (x, y) in points {
        let _ = writeln!(s, "{x},{y}");
    }
    s
}

pub fn geodesic_svg(u: f64, v: f64, points: &[(f64, f64)]) -> String {
    let mut canvas = Canvas::new(u, v);
    canvas.polyline(points, color(0), 2.0);
    canvas.mark(u, 0.0, "#000");
    canvas.mark(0.0, v, "#000");
    canvas.finish()
}

/// One member of the tangent family, sampled over `x` in `[0, mu]`.
pub struct TangentSample {
    pub t: f64,
    pub points: Vec<(f64, f64)>,
}

/// `num` tangent curves at parameters spread evenly over the samples of the
/// arctic curve.
pub fn tangent_family(
    profile: &BoundaryProfile,
    p: &AsymParams,
    curve: &ArcticCurve,
    num: usize,
    samples: usize,
) -> Vec<TangentSample> {
    let ts: Vec<f64> = curve.samples.iter().map(|s| s.t).filter(|t| t.is_finite()).collect();
    if ts.is_empty() || num == 0 {
        return Vec::new();
    }
    let mu = to_f64(&profile.mu());
    let count = samples.max(2);
    let picks: Vec<f64> = (0..num)
        .map(|k| ts[((2 * k + 1) * ts.len()) / (2 * num)])
        .collect();
    picks
        .into_iter()
        .filter_map(|t| {
            let line = tangent_line(profile, t, p).ok()?;
            let points = (0..count)
                .map(|k| mu * k as f64 / (count - 1) as f64)
                .filter_map(|x| line.height_at(x, p).map(|y| (x, y)))
                .filter(|(_, y)| y.is_finite() && (Y_WINDOW.0..=Y_WINDOW.1).contains(y))
                .collect();
            Some(TangentSample { t, points })
        })
        .collect()
}

pub fn tangents_csv(family: &[TangentSample], curve: &ArcticCurve) -> String {
    let mut s = String::from("curve,t,x,y\n");
    for (k, member) in family.iter().enumerate() {
        for (x, y) in &member.points {
            let _ = writeln!(s, "{k},{},{x},{y}", member.t);
        }
    }
    for p in &curve.samples {
        let _ = writeln!(s, "arctic,{},{},{}", p.t, p.x, p.y);
    }
    s
}

pub fn tangents_svg(profile: &BoundaryProfile, family: &[TangentSample], curve: &ArcticCurve) -> String {
    let mut canvas = Canvas::new(to_f64(&profile.mu()), 1.0);
    for member in family {
        let inside: Vec<(f64, f64)> = member
            .points
            .iter()
            .copied()
            .filter(|(_, y)| (0.0..=1.0).contains(y))
            .collect();
        canvas.polyline(&inside, "#999", 1.0);
    }
    draw_curve(&mut canvas, curve, Some("#d62728"));
    canvas.finish()
}

pub fn curve_for(profile: &BoundaryProfile, p: &AsymParams, samples: usize) -> ArcticCurve {
    arctic_curve(profile, p, samples.max(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use aztec_core::fixtures;

    #[test]
    fn geodesic_endpoints_are_exact() {
        let p = AsymParams::new(0.5, 1.7).unwrap();
        let pts = geodesic_samples(0.8, 1.3, &p, 5).unwrap();
        assert_eq!(pts.first(), Some(&(0.0, 1.3)));
        assert_eq!(pts.last(), Some(&(0.8, 0.0)));
        assert_eq!(pts.len(), 5);
        assert!(geodesic_samples(0.0, 1.0, &p, 5).is_err());
    }

    #[test]
    fn unit_tangents_are_straight() {
        let prof = fixtures::semicircle();
        let p = AsymParams::unit(1.0);
        let curve = curve_for(&prof, &p, 40);
        for member in tangent_family(&prof, &p, &curve, 5, 30) {
            let pts = &member.points;
            assert!(pts.len() >= 3);
            let (x0, y0) = pts[0];
            let (x1, y1) = pts[pts.len() - 1];
            for &(x, y) in pts {
                let cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0);
                assert!(cross.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_has_fixed_header() {
        let prof = fixtures::aztec_diamond();
        let curve = curve_for(&prof, &AsymParams::unit(1.0), 8);
        assert!(curve_csv(&curve).starts_with("interval,t,x,y\n"));
    }
}
