//! Polynomial kernel families and the linear maps between them.

mod family;
mod maps;
mod polynomial;
pub mod special;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use family::{
    classical_family, eval_family, jacobi_family, legendre_family, monomial_family, Classical,
    ClassicalKind, PolyFamily, MAX_DEGREE,
};
pub use maps::{basis_change, diff_matrix, weight_shift_matrix};
pub use polynomial::Polynomial;

/// Integration domain `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `[a, b]` with `b > a`; build through [`Domain::finite`].
    Finite { a: f64, b: f64 },
    /// `[0, ∞)`.
    HalfLine,
    /// `(−∞, ∞)`.
    RealLine,
}

impl Domain {
    pub fn finite(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::DomainDegenerate { a, b });
        }
        Ok(Domain::Finite { a, b })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::Finite { .. })
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Finite { a, b } => Some((a, b)),
            _ => None,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        match *self {
            Domain::Finite { a, b } => t >= a && t <= b,
            Domain::HalfLine => t >= 0.0 && t.is_finite(),
            Domain::RealLine => t.is_finite(),
        }
    }

    /// Maps `u ∈ (0, 1)` monotonically onto the interior of the domain.
    pub fn sample_point(&self, u: f64) -> f64 {
        match *self {
            Domain::Finite { a, b } => a + u * (b - a),
            Domain::HalfLine => u / (1.0 - u),
            Domain::RealLine => (std::f64::consts::PI * (u - 0.5)).tan(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_domain_validation() {
        assert!(Domain::finite(0.0, 1.0).is_ok());
        assert!(matches!(
            Domain::finite(1.0, 1.0),
            Err(Error::DomainDegenerate { .. })
        ));
        assert!(Domain::finite(2.0, 1.0).is_err());
        assert!(Domain::finite(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn containment() {
        let d = Domain::finite(-1.0, 2.0).unwrap();
        assert!(d.contains(-1.0) && d.contains(2.0) && !d.contains(2.1));
        assert!(Domain::HalfLine.contains(0.0) && !Domain::HalfLine.contains(-1e-9));
        assert!(Domain::RealLine.contains(-1e300));
        for i in 1..10 {
            let u = i as f64 / 10.0;
            assert!(Domain::RealLine.contains(Domain::RealLine.sample_point(u)));
            assert!(Domain::HalfLine.contains(Domain::HalfLine.sample_point(u)));
        }
    }
}
