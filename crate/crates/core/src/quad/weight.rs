use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polyalg::Domain;

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied weight evaluator.
#[derive(Clone)]
pub struct CustomWeight {
    eval: WeightFn,
    label: String,
}

impl CustomWeight {
    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight")
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum WeightKind {
    Unit,
    /// `(b − τ)^α (τ − a)^β` on a finite interval.
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    /// `τ^α e^{−τ}` on the half line.
    Laguerre {
        alpha: f64,
    },
    /// `e^{−τ²}` on the real line.
    Hermite,
    Custom(CustomWeight),
}

/// A nonnegative weight ϖ together with the domain it lives on.
#[derive(Debug, Clone)]
pub struct WeightSpec {
    kind: WeightKind,
    domain: Domain,
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > -1.0) {
        return Err(Error::Parameter(format!("{name} must be > -1, got {v}")));
    }
    Ok(())
}

impl WeightSpec {
    pub fn unit(domain: Domain) -> Result<Self> {
        if !domain.is_finite() {
            return Err(Error::UnsupportedWeight(
                "unit weight has infinite mass on an unbounded domain".into(),
            ));
        }
        Ok(Self {
            kind: WeightKind::Unit,
            domain,
        })
    }

    pub fn jacobi(alpha: f64, beta: f64, a: f64, b: f64) -> Result<Self> {
        check_exponent("alpha", alpha)?;
        check_exponent("beta", beta)?;
        let domain = Domain::finite(a, b)?;
        Ok(Self {
            kind: WeightKind::Jacobi { alpha, beta },
            domain,
        })
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        check_exponent("alpha", alpha)?;
        Ok(Self {
            kind: WeightKind::Laguerre { alpha },
            domain: Domain::HalfLine,
        })
    }

    pub fn hermite() -> Self {
        Self {
            kind: WeightKind::Hermite,
            domain: Domain::RealLine,
        }
    }

    /// Wraps an arbitrary evaluator.
    ///
    /// `integrable` is the caller's certificate that `∫ϖ < ∞` on the domain;
    /// it must be `true`. The evaluator is sampled at a handful of interior
    /// points and rejected if any sample is negative or not finite.
    pub fn custom<F>(
        domain: Domain,
        label: impl Into<String>,
        integrable: bool,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !integrable {
            return Err(Error::UnsupportedWeight(
                "custom weight needs an integrability certificate".into(),
            ));
        }
        for i in 1..64 {
            let t = domain.sample_point(i as f64 / 64.0);
            let w = f(t);
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Parameter(format!("custom weight is {w} at τ = {t}")));
            }
        }
        Ok(Self {
            kind: WeightKind::Custom(CustomWeight {
                eval: Arc::new(f),
                label: label.into(),
            }),
            domain,
        })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            WeightKind::Unit => 1.0,
            WeightKind::Jacobi { alpha, beta } => {
                let (a, b) = self
                    .domain
                    .bounds()
                    .expect("jacobi weight on finite domain");
                pow_or_one(b - t, *alpha) * pow_or_one(t - a, *beta)
            }
            WeightKind::Laguerre { alpha } => pow_or_one(t, *alpha) * (-t).exp(),
            WeightKind::Hermite => (-t * t).exp(),
            WeightKind::Custom(c) => (c.eval)(t),
        }
    }

    /// Degree of the weight when it is itself a polynomial on its domain.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self.kind {
            WeightKind::Unit => Some(0),
            WeightKind::Jacobi { alpha, beta } => {
                let int = |v: f64| (v >= 0.0 && v.fract() == 0.0).then_some(v as usize);
                Some(int(alpha)? + int(beta)?)
            }
            _ => None,
        }
    }

    /// Structural equality; custom weights only match the same evaluator.
    pub fn same_as(&self, other: &Self) -> bool {
        if self.domain != other.domain {
            return false;
        }
        match (&self.kind, &other.kind) {
            (WeightKind::Unit, WeightKind::Unit) | (WeightKind::Hermite, WeightKind::Hermite) => {
                true
            }
            (WeightKind::Unit, WeightKind::Jacobi { alpha, beta })
            | (WeightKind::Jacobi { alpha, beta }, WeightKind::Unit) => {
                *alpha == 0.0 && *beta == 0.0
            }
            (
                WeightKind::Jacobi {
                    alpha: a1,
                    beta: b1,
                },
                WeightKind::Jacobi {
                    alpha: a2,
                    beta: b2,
                },
            ) => a1 == a2 && b1 == b2,
            (WeightKind::Laguerre { alpha: a1 }, WeightKind::Laguerre { alpha: a2 }) => a1 == a2,
            (WeightKind::Custom(c1), WeightKind::Custom(c2)) => Arc::ptr_eq(&c1.eval, &c2.eval),
            _ => false,
        }
    }

    /// Jacobi exponents `(α, β)` if the weight is of Jacobi type (unit counts as `(0, 0)`).
    pub fn jacobi_exponents(&self) -> Option<(f64, f64)> {
        match self.kind {
            WeightKind::Unit => Some((0.0, 0.0)),
            WeightKind::Jacobi { alpha, beta } => Some((alpha, beta)),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            WeightKind::Unit => "unit".into(),
            WeightKind::Jacobi { alpha, beta } => format!("jacobi(alpha={alpha}, beta={beta})"),
            WeightKind::Laguerre { alpha } => format!("laguerre(alpha={alpha})"),
            WeightKind::Hermite => "hermite".into(),
            WeightKind::Custom(c) => format!("custom({})", c.label),
        }
    }
}

fn pow_or_one(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.max(0.0).powf(exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_weight_orientation() {
        // α goes with (b − τ), β with (τ − a)
        let w = WeightSpec::jacobi(1.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(w.eval(0.25), 0.75);
        let w = WeightSpec::jacobi(0.0, 2.0, 0.0, 1.0).unwrap();
        assert_eq!(w.eval(0.5), 0.25);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(WeightSpec::jacobi(-1.0, 0.0, 0.0, 1.0).is_err());
        assert!(WeightSpec::laguerre(-2.0).is_err());
        assert!(WeightSpec::unit(Domain::HalfLine).is_err());
        assert!(WeightSpec::jacobi(0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn custom_weight_guards() {
        let d = Domain::finite(0.0, 1.0).unwrap();
        assert!(WeightSpec::custom(d, "neg", true, |t| t - 0.5).is_err());
        assert!(WeightSpec::custom(d, "ok", false, |_| 1.0).is_err());
        let w = WeightSpec::custom(d, "ramp", true, |t| t).unwrap();
        assert!(w.same_as(&w.clone()));
        assert_eq!(w.polynomial_degree(), None);
    }

    #[test]
    fn polynomial_degree_of_integer_jacobi() {
        assert_eq!(
            WeightSpec::jacobi(1.0, 2.0, 0.0, 1.0)
                .unwrap()
                .polynomial_degree(),
            Some(3)
        );
        assert_eq!(
            WeightSpec::jacobi(0.5, 0.0, 0.0, 1.0)
                .unwrap()
                .polynomial_degree(),
            None
        );
    }
}
