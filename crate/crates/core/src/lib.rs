//! Weighted integral inequalities built from finite kernel families.
//!
//! The crate assembles the pieces needed to state and check lower bounds of
//! the form
//!
//! ```text
//! ∫ ϖ(τ) xᵀ(τ) U x(τ) dτ  ≥  ϑᵀ (F ⊗ U) ϑ,   ϑ = ∫ ϖ(τ) (f(τ) ⊗ Iₙ) x(τ) dτ
//! ```
//!
//! where `f` is a family of linearly independent kernels and `F⁻¹` is their
//! weighted Gram matrix:
//!
//! * [`polyalg`]: polynomial kernel families (Legendre, Jacobi, Laguerre,
//!   Hermite, monomials), basis changes and differentiation matrices.
//! * [`quad`]: weights, Golub–Welsch Gauss rules and adaptive integration.
//! * [`gram`]: Gram assembly, independence checks, Kronecker lifts and the
//!   completion-of-squares bound.
//! * [`bound`]: moment vectors, upper and lower bounds, least-squares
//!   diagnostics, hierarchy sweeps and the repeated-integral identities.
//! * [`free_matrix`]: the slack-variable (free-matrix) lower bound.
//! * [`cli`]: declarative experiment configs and report emission.

pub mod bound;
pub mod cli;
pub mod error;
pub mod free_matrix;
pub mod gram;
pub mod polyalg;
pub mod quad;

pub use error::{Error, Result};
