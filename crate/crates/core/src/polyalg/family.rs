use nalgebra::{DMatrix, DVector};

use super::polynomial::Polynomial;
use super::special::{factorial, gamma_ratio};
use super::Domain;
use crate::error::{Error, Result};
use crate::quad::WeightSpec;

/// Highest polynomial degree accepted in a family. Monomial coefficients of
/// shifted orthogonal polynomials grow combinatorially, so the representation
/// stops being trustworthy beyond this.
pub const MAX_DEGREE: usize = 12;

/// Classical orthogonal families with a known diagonal Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classical {
    /// Shifted Jacobi polynomials on `[a, b]`; Legendre is `α = β = 0`.
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    Laguerre {
        alpha: f64,
    },
    Hermite,
}

/// Selector for [`classical_family`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassicalKind {
    Laguerre { alpha: f64 },
    Hermite,
}

/// Ordered kernel family `f(τ) = [f_0(τ), …, f_{d−1}(τ)]` over a weighted domain.
#[derive(Debug, Clone)]
pub struct PolyFamily {
    polys: Vec<Polynomial>,
    weight: WeightSpec,
    classical: Option<Classical>,
}

fn check_degree(dmax: usize) -> Result<()> {
    if dmax > MAX_DEGREE {
        return Err(Error::DegreeCap {
            requested: dmax,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

impl PolyFamily {
    pub fn new(polys: Vec<Polynomial>, weight: WeightSpec) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::Shape(
                "kernel family must contain at least one function".into(),
            ));
        }
        check_degree(polys.iter().map(Polynomial::degree).max().unwrap_or(0))?;
        Ok(Self {
            polys,
            weight,
            classical: None,
        })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn weight(&self) -> &WeightSpec {
        &self.weight
    }

    pub fn domain(&self) -> Domain {
        self.weight.domain()
    }

    pub fn classical(&self) -> Option<Classical> {
        self.classical
    }

    pub fn max_degree(&self) -> usize {
        self.polys.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Same kernels against a different weight. The classical tag survives only
    /// if the new weight is the family's natural one.
    pub fn with_weight(&self, weight: WeightSpec) -> Result<Self> {
        if weight.domain() != self.domain() {
            return Err(Error::DomainMismatch(
                "new weight lives on a different domain".into(),
            ));
        }
        let classical = self.classical.filter(|_| weight.same_as(&self.weight));
        Ok(Self {
            polys: self.polys.clone(),
            weight,
            classical,
        })
    }

    /// The first `k` kernels.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::Shape(format!(
                "prefix length {k} out of range 1..={}",
                self.len()
            )));
        }
        Ok(Self {
            polys: self.polys[..k].to_vec(),
            weight: self.weight.clone(),
            classical: self.classical,
        })
    }

    /// `φ = G f`, a new family whose kernels are linear combinations of these.
    pub fn transformed(&self, g: &DMatrix<f64>) -> Result<Self> {
        if g.ncols() != self.len() {
            return Err(Error::Shape(format!(
                "transform has {} columns, family has {} kernels",
                g.ncols(),
                self.len()
            )));
        }
        let polys = g
            .row_iter()
            .map(|row| {
                let w: Vec<f64> = row.iter().copied().collect();
                Polynomial::combination(&w, &self.polys)
            })
            .collect();
        Self::new(polys, self.weight.clone())
    }

    /// Coefficient matrix, row `i` holds the monomial coefficients of `f_i`.
    pub fn coefficient_matrix(&self, ncols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), ncols, |i, j| {
            self.polys[i].coeffs().get(j).copied().unwrap_or(0.0)
        })
    }

    /// `[f_i(τ)]` without the domain check.
    pub fn eval_unchecked(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.polys.iter().map(|p| p.eval(t)))
    }

    pub fn eval(&self, t: f64) -> Result<DVector<f64>> {
        if !self.domain().contains(t) {
            return Err(Error::OutsideDomain { tau: t });
        }
        Ok(self.eval_unchecked(t))
    }

    /// Closed-form squared norms `∫ϖ f_k²` for a classical family against its
    /// natural weight, `None` otherwise.
    pub fn classical_norms(&self) -> Option<Vec<f64>> {
        let classical = self.classical?;
        (0..self.len())
            .map(|k| match classical {
                Classical::Jacobi { alpha, beta } => {
                    let (a, b) = self.domain().bounds()?;
                    Some(jacobi_norm(k, alpha, beta, b - a))
                }
                Classical::Laguerre { alpha } => {
                    Some(gamma_ratio(&[k as f64 + alpha + 1.0], &[k as f64 + 1.0]))
                }
                Classical::Hermite => {
                    Some(2f64.powi(k as i32) * factorial(k as u64) * std::f64::consts::PI.sqrt())
                }
            })
            .collect()
    }
}

/// `(b−a)^{α+β+1} Γ(k+α+1) Γ(k+β+1) / (k! (2k+α+β+1) Γ(k+α+β+1))`.
///
/// At `k = 0` the factor `(α+β+1) Γ(α+β+1)` is folded into `Γ(α+β+2)` so the
/// formula stays finite when `α + β + 1 ≤ 0`.
fn jacobi_norm(k: usize, alpha: f64, beta: f64, length: f64) -> f64 {
    let kf = k as f64;
    let scale = length.powf(alpha + beta + 1.0);
    if k == 0 {
        return scale * gamma_ratio(&[alpha + 1.0, beta + 1.0], &[alpha + beta + 2.0]);
    }
    scale
        * gamma_ratio(
            &[kf + alpha + 1.0, kf + beta + 1.0],
            &[kf + 1.0, kf + alpha + beta + 1.0],
        )
        / (2.0 * kf + alpha + beta + 1.0)
}

/// Shifted Jacobi polynomial `j_d^{α,β}` on `[a, b]` in monomial form.
///
/// Expands `Σ_k c_k ((τ−b)/(b−a))^k` with
/// `c_k = Γ(d+1+α)/Γ(k+1+α) · Γ(d+k+1+α+β)/Γ(d+1+α+β) · 1/(k!(d−k)!)`,
/// where both gamma ratios are finite rising products.
fn shifted_jacobi(d: usize, alpha: f64, beta: f64, a: f64, b: f64) -> Polynomial {
    if d == 0 {
        return Polynomial::constant(1.0);
    }
    let coeff = |k: usize| -> f64 {
        let lower: f64 = (1..=d - k)
            .map(|j| (k as f64 + j as f64 + alpha) / j as f64)
            .product();
        let upper: f64 = (1..=k)
            .map(|i| (d as f64 + i as f64 + alpha + beta) / i as f64)
            .product();
        lower * upper
    };
    let s = Polynomial::linear(-b / (b - a), 1.0 / (b - a));
    (0..=d).rev().fold(Polynomial::zero(), |acc, k| {
        acc.mul(&s).add(&Polynomial::constant(coeff(k)))
    })
}

fn laguerre_poly(k: usize, alpha: f64) -> Polynomial {
    let coeffs = (0..=k)
        .map(|i| {
            let binom: f64 = (1..=k - i)
                .map(|j| (i as f64 + alpha + j as f64) / j as f64)
                .product();
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom / factorial(i as u64)
        })
        .collect();
    Polynomial::new(coeffs)
}

fn hermite_polys(dmax: usize) -> Vec<Polynomial> {
    let two_t = Polynomial::linear(0.0, 2.0);
    let mut out = vec![Polynomial::constant(1.0)];
    if dmax >= 1 {
        out.push(two_t.clone());
    }
    for k in 1..dmax {
        let next = two_t.mul(&out[k]).add(&out[k - 1].scale(-2.0 * k as f64));
        out.push(next);
    }
    out
}

/// Legendre polynomials `ℓ_0 … ℓ_dmax` on `[a, b]` with unit weight.
pub fn legendre_family(dmax: usize, a: f64, b: f64) -> Result<PolyFamily> {
    check_degree(dmax)?;
    let weight = WeightSpec::unit(Domain::finite(a, b)?)?;
    let polys = (0..=dmax)
        .map(|d| shifted_jacobi(d, 0.0, 0.0, a, b))
        .collect();
    Ok(PolyFamily {
        polys,
        weight,
        classical: Some(Classical::Jacobi {
            alpha: 0.0,
            beta: 0.0,
        }),
    })
}

/// Shifted Jacobi polynomials on `[a, b]` with weight `(b−τ)^α (τ−a)^β`.
pub fn jacobi_family(dmax: usize, alpha: f64, beta: f64, a: f64, b: f64) -> Result<PolyFamily> {
    check_degree(dmax)?;
    let weight = WeightSpec::jacobi(alpha, beta, a, b)?;
    let polys = (0..=dmax)
        .map(|d| shifted_jacobi(d, alpha, beta, a, b))
        .collect();
    Ok(PolyFamily {
        polys,
        weight,
        classical: Some(Classical::Jacobi { alpha, beta }),
    })
}

/// Standard Laguerre (`τ^α e^{−τ}` on `[0, ∞)`) or physicists' Hermite
/// (`e^{−τ²}` on ℝ) polynomials up to degree `dmax`.
pub fn classical_family(kind: ClassicalKind, dmax: usize) -> Result<PolyFamily> {
    check_degree(dmax)?;
    match kind {
        ClassicalKind::Laguerre { alpha } => {
            let weight = WeightSpec::laguerre(alpha)?;
            let polys = (0..=dmax).map(|k| laguerre_poly(k, alpha)).collect();
            Ok(PolyFamily {
                polys,
                weight,
                classical: Some(Classical::Laguerre { alpha }),
            })
        }
        ClassicalKind::Hermite => Ok(PolyFamily {
            polys: hermite_polys(dmax),
            weight: WeightSpec::hermite(),
            classical: Some(Classical::Hermite),
        }),
    }
}

/// `[1, τ, …, τ^dmax]` against an arbitrary weight.
pub fn monomial_family(dmax: usize, weight: WeightSpec) -> Result<PolyFamily> {
    check_degree(dmax)?;
    PolyFamily::new((0..=dmax).map(Polynomial::monomial).collect(), weight)
}

/// `[f_i(τ)]`, failing if `τ` is outside the family's domain.
pub fn eval_family(family: &PolyFamily, t: f64) -> Result<DVector<f64>> {
    family.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(f: &PolyFamily, i: usize) -> Vec<f64> {
        f.polys()[i].coeffs().to_vec()
    }

    #[test]
    fn legendre_degree_zero_is_constant() {
        let f = legendre_family(0, 0.0, 1.0).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(coeffs(&f, 0), vec![1.0]);
    }

    #[test]
    fn legendre_expansion_on_unit_interval() {
        let f = legendre_family(2, 0.0, 1.0).unwrap();
        assert_eq!(coeffs(&f, 0), vec![1.0]);
        assert_eq!(coeffs(&f, 1), vec![-1.0, 2.0]);
        assert_eq!(coeffs(&f, 2), vec![1.0, -6.0, 6.0]);
    }

    #[test]
    fn legendre_rejects_degenerate_interval() {
        assert!(matches!(
            legendre_family(2, 1.0, 1.0),
            Err(Error::DomainDegenerate { .. })
        ));
        assert!(matches!(
            legendre_family(13, 0.0, 1.0),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn jacobi_with_zero_exponents_is_legendre() {
        let j = jacobi_family(1, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(coeffs(&j, 0), vec![1.0]);
        assert_eq!(coeffs(&j, 1), vec![-1.0, 2.0]);
        let j0 = jacobi_family(0, 2.5, -0.5, -1.0, 3.0).unwrap();
        assert_eq!(coeffs(&j0, 0), vec![1.0]);
    }

    #[test]
    fn jacobi_rejects_bad_exponents() {
        assert!(matches!(
            jacobi_family(2, -1.0, 0.0, 0.0, 1.0),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            jacobi_family(2, 0.0, -3.0, 0.0, 1.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn jacobi_degree_one_matches_reference() {
        // P_1^{(1,0)}(x) = (3x + 1)/2 with x = 2τ − 1  →  3τ − 1
        let j = jacobi_family(1, 1.0, 0.0, 0.0, 1.0).unwrap();
        let c = coeffs(&j, 1);
        assert!((c[0] + 1.0).abs() < 1e-15 && (c[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn hermite_and_laguerre_low_degrees() {
        let h = classical_family(ClassicalKind::Hermite, 3).unwrap();
        assert_eq!(coeffs(&h, 2), vec![-2.0, 0.0, 4.0]);
        assert_eq!(coeffs(&h, 3), vec![0.0, -12.0, 0.0, 8.0]);
        let l = classical_family(ClassicalKind::Laguerre { alpha: 0.0 }, 2).unwrap();
        assert_eq!(coeffs(&l, 1), vec![1.0, -1.0]);
        assert_eq!(coeffs(&l, 2), vec![1.0, -2.0, 0.5]);
        assert!(classical_family(ClassicalKind::Laguerre { alpha: -1.0 }, 2).is_err());
    }

    #[test]
    fn classical_norm_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let h = classical_family(ClassicalKind::Hermite, 2)
            .unwrap()
            .classical_norms()
            .unwrap();
        assert_eq!(h, vec![sqrt_pi, 2.0 * sqrt_pi, 8.0 * sqrt_pi]);
        let l = classical_family(ClassicalKind::Laguerre { alpha: 0.0 }, 1)
            .unwrap()
            .classical_norms()
            .unwrap();
        assert_eq!(l, vec![1.0, 1.0]);
        let leg = legendre_family(2, 0.0, 1.0)
            .unwrap()
            .classical_norms()
            .unwrap();
        assert_eq!(leg, vec![1.0, 1.0 / 3.0, 1.0 / 5.0]);
    }

    #[test]
    fn eval_family_values() {
        let f = legendre_family(2, 0.0, 1.0).unwrap();
        assert_eq!(eval_family(&f, 1.0).unwrap().as_slice(), &[1.0, 1.0, 1.0]);
        assert_eq!(eval_family(&f, 0.5).unwrap().as_slice(), &[1.0, 0.0, -0.5]);
        assert!(matches!(
            eval_family(&f, 1.5),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn with_weight_drops_classical_tag() {
        let f = legendre_family(2, 0.0, 1.0).unwrap();
        let w = WeightSpec::jacobi(1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(f.with_weight(w).unwrap().classical_norms().is_none());
        let same = WeightSpec::unit(Domain::finite(0.0, 1.0).unwrap()).unwrap();
        assert!(f.with_weight(same).unwrap().classical_norms().is_some());
        assert!(f.with_weight(WeightSpec::hermite()).is_err());
    }

    #[test]
    fn transform_combines_kernels() {
        let f = legendre_family(1, 0.0, 1.0).unwrap();
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 2.0, 0.0]);
        let phi = f.transformed(&g).unwrap();
        assert_eq!(phi.polys()[0].coeffs(), &[0.0, 2.0]);
        assert_eq!(phi.polys()[1].coeffs(), &[2.0]);
        assert!(phi.classical().is_none());
    }
}
