//! Scaling-limit formulas in double precision: the moment function `x(t)`,
//! single-path free energy and geodesics, the saddle point of the exit
//! problem, the tangent family and its envelope (the arctic curve).

pub mod arctic;
pub mod free_energy;
pub mod geodesic;
pub mod moment;
pub mod params;
pub mod saddle;
pub mod tangency;
pub mod tangent;

use thiserror::Error;

pub use arctic::{arctic_curve, arctic_point, ArcticCurve, CurveSample};
pub use free_energy::free_energy_s0;
pub use geodesic::{geodesic_residual, geodesic_y};
pub use moment::{moment_x, moment_x_deriv, MomentFn};
pub use params::{AsymParams, QqMode};
pub use saddle::{saddle_kflr, SaddleSolution};
pub use tangency::{tangency_points, TangencyPoint};
pub use tangent::{tangent_line, TangentCurve};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    /// `x(t)` is not real at this parameter.
    #[error("x(t) is undefined at t = {0}")]
    Undefined(f64),
    /// `x(t)` diverges at this parameter.
    #[error("x(t) has a pole at t = {0}")]
    Pole(f64),
    #[error("singular point at t = {t}: {reason}")]
    Singular { t: f64, reason: String },
    #[error("domain error: {0}")]
    Domain(String),
}
