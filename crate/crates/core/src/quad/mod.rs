//! Weighted numerical integration.

mod adaptive;
mod gauss;
mod weight;

pub use adaptive::{
    integrate, integrate_scalar, integrate_vector, repeated_integral, IntegrandKind, QuadOptions,
    Side,
};
pub use gauss::{gauss_rule, QuadRule};
pub use weight::{CustomWeight, WeightKind, WeightSpec};
