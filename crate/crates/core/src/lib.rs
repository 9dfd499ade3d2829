//! Exact-arithmetic kernels and experiments for the undetermined sets of
//! Sturmian codings of circle rotations.
//!
//! The library computes, with exact big-rational arithmetic throughout:
//! continued fractions and convergents ([`cf`]), exactly represented rotation
//! numbers with validity horizons ([`alpha`]), orbits and codings of the
//! rotation with a brute-force partition oracle ([`coding`]), the closed-form
//! target machinery for the undetermined sets V_j ([`targets`]), and the
//! verification experiments ([`experiments`]).

pub mod alpha;
pub mod cf;
pub mod circle;
pub mod coding;
pub mod error;
pub mod experiments;
pub mod report;
pub mod sampling;
pub mod targets;
mod zsweep;

pub use alpha::{Alpha, AlphaSpec, DEFAULT_TAIL};
pub use cf::{cf_of_rational, convergents, ContinuedFraction, Convergent};
pub use circle::{fract, rotate, CircleArc, CirclePoint, IntervalSet};
pub use error::{Error, Result};
