//! Moment vectors, the upper and lower bounds, least-squares diagnostics and
//! the transformation, hierarchy and repeated-integral checks built on them.
//!
//! For a polynomial signal against a weight with a Gauss rule, every integral
//! of a bound evaluation comes from one rule that is exact for all products
//! involved. The lower bound is then evaluated as the squared `U`-norm of the
//! orthogonal projection of the sampled signal onto the sampled kernels (a
//! thin QR factorization), which equals `ϑᵀ(F ⊗ U)ϑ` but does not square the
//! conditioning of the family. Black-box signals go through the adaptive
//! integrator and the Gram formula directly.

mod reduction;
mod signal;
mod sweep;

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gram::{gram_matrix, gram_matrix_quadrature, GramPair};
use crate::polyalg::PolyFamily;
use crate::quad::{
    gauss_rule, integrate_vector, IntegrandKind, QuadOptions, QuadRule, WeightKind, WeightSpec,
};

pub use reduction::{cauchy_identity_check, weighted_moment_reduction, CauchyCheck, Reduction};
pub use signal::{CostMatrix, Signal, SignalForm, VectorFn, DEFAULT_SIGNAL_TOL};
pub use sweep::{gap_ratio, hierarchy_sweep, legendre_prefixes, monotonicity_violation};

/// Outcome of one lower-bound evaluation.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub upper: f64,
    pub lower: f64,
    pub gap: f64,
    pub relative_gap: f64,
    /// Stacked moments, block `i` = `∫ϖ f_i x`.
    pub theta: DVector<f64>,
    /// `(F ⊗ Iₙ) ϑ`.
    pub lambda: DVector<f64>,
    pub residual_norm: f64,
    /// `‖∫ϖ f_i ε‖` per kernel.
    pub orthogonality_defects: DVector<f64>,
    pub warning: Option<String>,
}

impl BoundReport {
    fn assemble(
        upper: f64,
        lower: f64,
        theta: DVector<f64>,
        lambda: DVector<f64>,
        defects: DVector<f64>,
        warning: Option<String>,
    ) -> Self {
        let gap = upper - lower;
        Self {
            upper,
            lower,
            gap,
            relative_gap: gap / upper.max(1e-300),
            theta,
            lambda,
            residual_norm: gap.max(0.0).sqrt(),
            orthogonality_defects: defects,
            warning,
        }
    }
}

/// Integration strategy shared by every integral of one evaluation.
enum Plan {
    Rule(QuadRule),
    Adaptive {
        kind: IntegrandKind,
        opts: QuadOptions,
    },
}

impl Plan {
    fn new(
        weight: &WeightSpec,
        x: &Signal,
        family_degree: usize,
        family_len: usize,
    ) -> Result<Self> {
        let custom = matches!(weight.kind(), WeightKind::Custom(_));
        match x.degree() {
            Some(deg) if !custom => {
                let needed = 2 * deg.max(family_degree);
                let m = (needed / 2 + 2).max(family_len + 1);
                Ok(Plan::Rule(gauss_rule(weight, m)?))
            }
            Some(deg) => Ok(Plan::Adaptive {
                kind: IntegrandKind::Polynomial {
                    degree: 2 * deg.max(family_degree) + 2,
                },
                opts: QuadOptions {
                    tol: x.tol(),
                    ..Default::default()
                },
            }),
            None => Ok(Plan::Adaptive {
                kind: IntegrandKind::BlackBox,
                opts: QuadOptions {
                    tol: x.tol(),
                    ..Default::default()
                },
            }),
        }
    }

    fn integrate<F>(&self, weight: &WeightSpec, len: usize, f: F) -> Result<DVector<f64>>
    where
        F: Fn(f64) -> DVector<f64>,
    {
        match self {
            Plan::Rule(rule) => {
                let mut acc = DVector::zeros(len);
                for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                    acc.axpy(w, &f(t), 1.0);
                }
                Ok(acc)
            }
            Plan::Adaptive { kind, opts } => integrate_vector(f, len, weight, *kind, opts),
        }
    }
}

fn check_domain(family: &PolyFamily, x: &Signal) -> Result<()> {
    if family.domain() != x.domain() {
        return Err(Error::DomainMismatch(format!(
            "kernels live on {:?}, signal on {:?}",
            family.domain(),
            x.domain()
        )));
    }
    Ok(())
}

fn check_cost(x: &Signal, u: &CostMatrix) -> Result<()> {
    if u.n() != x.n() {
        return Err(Error::Shape(format!(
            "cost matrix is {0}×{0}, signal has dimension {1}",
            u.n(),
            x.n()
        )));
    }
    Ok(())
}

/// `(a ⊗ b)` for vectors, block `i` = `a_i b`.
fn kron_vec(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        a.len() * b.len(),
        a.iter().flat_map(|ai| b.iter().map(move |bj| ai * bj)),
    )
}

/// Stacked vector (block `i` = row `i`) to a `d × n` matrix and back.
fn unstack(v: &DVector<f64>, d: usize, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, n, |i, j| v[i * n + j])
}

fn stack(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_iterator(
        m.len(),
        m.row_iter()
            .flat_map(|r| r.iter().copied().collect::<Vec<_>>()),
    )
}

/// `tr(Mᵀ A M U)` = `vec(M)ᵀ (A ⊗ U) vec(M)` for `M` of shape `d × n`.
fn kron_form(m: &DMatrix<f64>, a: &DMatrix<f64>, u: &DMatrix<f64>) -> f64 {
    (m.transpose() * a * m).component_mul(u).sum()
}

/// `ϑ = ∫ϖ (f ⊗ Iₙ) x`.
pub fn moment_vector(family: &PolyFamily, x: &Signal) -> Result<DVector<f64>> {
    check_domain(family, x)?;
    let plan = Plan::new(family.weight(), x, family.max_degree(), family.len())?;
    moments_with(&plan, family, x)
}

fn moments_with(plan: &Plan, family: &PolyFamily, x: &Signal) -> Result<DVector<f64>> {
    plan.integrate(family.weight(), family.len() * x.n(), |t| {
        kron_vec(&family.eval_unchecked(t), &x.eval(t))
    })
}

/// `∫ϖ xᵀ U x`.
pub fn upper_bound(x: &Signal, u: &CostMatrix, weight: &WeightSpec) -> Result<f64> {
    check_cost(x, u)?;
    if weight.domain() != x.domain() {
        return Err(Error::DomainMismatch(
            "weight and signal live on different domains".into(),
        ));
    }
    let plan = Plan::new(weight, x, 0, 0)?;
    upper_with(&plan, weight, x, u)
}

fn upper_with(plan: &Plan, weight: &WeightSpec, x: &Signal, u: &CostMatrix) -> Result<f64> {
    Ok(plan.integrate(weight, 1, |t| {
        DVector::from_element(1, u.quad_form(&x.eval(t)))
    })?[0])
}

/// Lower bound `ϑᵀ(F ⊗ U)ϑ` with the full diagnostic report.
pub fn lower_bound(family: &PolyFamily, x: &Signal, u: &CostMatrix) -> Result<BoundReport> {
    let gram = gram_matrix(family)?;
    lower_bound_impl(family, x, u, Some(gram))
}

fn lower_bound_impl(
    family: &PolyFamily,
    x: &Signal,
    u: &CostMatrix,
    gram: Option<GramPair>,
) -> Result<BoundReport> {
    check_domain(family, x)?;
    check_cost(x, u)?;
    let (d, n) = (family.len(), x.n());
    let weight = family.weight();
    let plan = Plan::new(weight, x, family.max_degree(), d)?;
    let warning = gram.as_ref().and_then(|g| g.warning.clone());
    match &plan {
        Plan::Rule(rule) => {
            let m = rule.len();
            let mut a = DMatrix::zeros(m, d);
            let mut b = DMatrix::zeros(m, n);
            for (k, (&t, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
                let s = w.sqrt();
                a.row_mut(k)
                    .copy_from(&(family.eval_unchecked(t) * s).transpose());
                b.row_mut(k).copy_from(&(x.eval(t) * s).transpose());
            }
            let theta_m = a.transpose() * &b;
            let upper = (b.transpose() * &b).component_mul(u.matrix()).sum();
            let qr = a.clone().qr();
            let r = qr.r();
            let diag = r.diagonal().abs();
            if diag.min() <= 1e-14 * diag.max() {
                return Err(Error::SingularGram {
                    min_eigenvalue: diag.min().powi(2),
                });
            }
            let c = qr.q().transpose() * &b;
            let lower = (c.transpose() * &c).component_mul(u.matrix()).sum();
            let lambda_m = r.solve_upper_triangular(&c).ok_or(Error::SingularGram {
                min_eigenvalue: 0.0,
            })?;
            let residual = &b - &a * &lambda_m;
            let defects_m = a.transpose() * residual;
            let defects = DVector::from_iterator(d, defects_m.row_iter().map(|r| r.norm()));
            Ok(BoundReport::assemble(
                upper,
                lower,
                stack(&theta_m),
                stack(&lambda_m),
                defects,
                warning,
            ))
        }
        Plan::Adaptive { .. } => {
            let f_mat = match &gram {
                Some(g) => g.inverse.clone(),
                None => Cholesky::new(gram_matrix_quadrature(family)?)
                    .ok_or(Error::SingularGram {
                        min_eigenvalue: 0.0,
                    })?
                    .inverse(),
            };
            let theta = moments_with(&plan, family, x)?;
            let theta_m = unstack(&theta, d, n);
            let lower = kron_form(&theta_m, &f_mat, u.matrix());
            let lambda_m = &f_mat * &theta_m;
            let upper = upper_with(&plan, weight, x, u)?;
            let defects_v = plan.integrate(weight, d * n, |t| {
                let f = family.eval_unchecked(t);
                let eps = x.eval(t) - lambda_m.transpose() * &f;
                kron_vec(&f, &eps)
            })?;
            let defects_m = unstack(&defects_v, d, n);
            let defects = DVector::from_iterator(d, defects_m.row_iter().map(|r| r.norm()));
            Ok(BoundReport::assemble(
                upper,
                lower,
                theta,
                stack(&lambda_m),
                defects,
                warning,
            ))
        }
    }
}

/// Least-squares view of the bound: coefficients from the normal equations
/// and residual quantities integrated directly.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub lambda: DVector<f64>,
    /// Row `j` holds `κ_j`, the kernel coefficients approximating `x_j`.
    pub kappa: DMatrix<f64>,
    /// `(∫ϖ εᵀUε)^{1/2}` by quadrature.
    pub residual_norm: f64,
    /// Entry `(i, j)` = `⟨ε_j, f_i⟩_ϖ`.
    pub orthogonality_defects: DMatrix<f64>,
}

pub fn least_squares_diagnostics(
    family: &PolyFamily,
    x: &Signal,
    u: &CostMatrix,
) -> Result<LeastSquares> {
    check_domain(family, x)?;
    check_cost(x, u)?;
    let (d, n) = (family.len(), x.n());
    let gram = gram_matrix(family)?;
    let weight = family.weight();
    let plan = Plan::new(weight, x, family.max_degree(), d)?;
    let theta = moments_with(&plan, family, x)?;
    let theta_m = unstack(&theta, d, n);
    let lambda = stack(&(&gram.inverse * &theta_m));
    let chol = Cholesky::new(gram.gram.clone()).ok_or(Error::SingularGram {
        min_eigenvalue: gram.min_eigenvalue,
    })?;
    let kappa_t = chol.solve(&theta_m);
    let energy_and_defects = plan.integrate(weight, 1 + d * n, |t| {
        let f = family.eval_unchecked(t);
        let eps = x.eval(t) - kappa_t.transpose() * &f;
        let mut v = DVector::zeros(1 + d * n);
        v[0] = u.quad_form(&eps);
        v.rows_mut(1, d * n).copy_from(&kron_vec(&f, &eps));
        v
    })?;
    Ok(LeastSquares {
        lambda,
        kappa: kappa_t.transpose(),
        residual_norm: energy_and_defects[0].max(0.0).sqrt(),
        orthogonality_defects: unstack(&energy_and_defects.rows(1, d * n).into_owned(), d, n),
    })
}

/// `2ϑᵀ(I ⊗ U)ω − ωᵀ(F⁻¹ ⊗ U)ω`, maximized at `ω = λ` where it equals the lower bound.
pub fn projection_objective(
    theta: &DVector<f64>,
    gram: &DMatrix<f64>,
    u: &CostMatrix,
    omega: &DVector<f64>,
) -> Result<f64> {
    let (d, n) = (gram.nrows(), u.n());
    if theta.len() != d * n || omega.len() != d * n {
        return Err(Error::Shape(format!("ϑ and ω must have length {}", d * n)));
    }
    let t = unstack(theta, d, n);
    let w = unstack(omega, d, n);
    let cross = (t.transpose() * &w).component_mul(u.matrix()).sum();
    let cross_t = (w.transpose() * &t).component_mul(u.matrix()).sum();
    Ok(cross + cross_t - kron_form(&w, gram, u.matrix()))
}

/// Lower bounds for `f` and for `φ = G f`, each with its own Gram matrix.
#[derive(Debug, Clone, Copy)]
pub struct TransformedBound {
    pub lb_original: f64,
    pub lb_transformed: f64,
    pub condition: f64,
}

/// Largest accepted condition number of a kernel transformation.
pub const MAX_TRANSFORM_CONDITION: f64 = 1e12;

pub fn transformed_bound(
    family: &PolyFamily,
    g: &DMatrix<f64>,
    x: &Signal,
    u: &CostMatrix,
) -> Result<TransformedBound> {
    let d = family.len();
    if g.shape() != (d, d) {
        return Err(Error::Shape(format!(
            "transformation must be {d}×{d}, got {:?}",
            g.shape()
        )));
    }
    let sv = g.clone().singular_values();
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > MAX_TRANSFORM_CONDITION {
        return Err(Error::SingularTransform { condition });
    }
    let original = lower_bound(family, x, u)?;
    let phi = family.transformed(g)?;
    // Independence of φ follows from that of f and the rank of G.
    let transformed = lower_bound_impl(&phi, x, u, None)?;
    Ok(TransformedBound {
        lb_original: original.lower,
        lb_transformed: transformed.lower,
        condition,
    })
}
