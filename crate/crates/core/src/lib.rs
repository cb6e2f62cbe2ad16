//! Exact and asymptotic engines for weighted domino tilings of Aztec
//! rectangles with boundary defects.
//!
//! Tilings are encoded as families of non-intersecting Schröder paths. The
//! exact side ([`exact_weights`], [`lgv_engine`]) works in arbitrary-precision
//! rationals; [`asymptotics`] evaluates the scaling-limit formulas in `f64`;
//! [`sampler`] runs a Metropolis chain over path configurations.

pub mod asymptotics;
pub mod boundary_profiles;
pub mod exact_weights;
pub mod fixtures;
pub mod lgv_engine;
pub mod sampler;
pub mod verify;

pub use exact_weights::{parse_exact, ExactError, ExactScalar, LatticePath, Step, WeightPair};
pub use lgv_engine::{ExactMatrix, StartConfig};
