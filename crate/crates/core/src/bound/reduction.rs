use nalgebra::{DMatrix, DVector};

use super::{check_cost, lower_bound, moment_vector, CostMatrix, Signal};
use crate::error::{Error, Result};
use crate::gram::kron_lift;
use crate::polyalg::{jacobi_family, legendre_family, weight_shift_matrix};
use crate::quad::{
    integrate_vector, repeated_integral, IntegrandKind, QuadOptions, Side, WeightSpec,
};

/// Both sides of the repeated-integration identity.
#[derive(Debug, Clone)]
pub struct CauchyCheck {
    /// `p!` times the `p + 1` nested integrals.
    pub nested: DVector<f64>,
    /// `∫(b−τ)^p x` (lower) or `∫(τ−a)^p x` (upper).
    pub weighted: DVector<f64>,
    pub discrepancy: f64,
}

fn finite_bounds(x: &Signal) -> Result<(f64, f64)> {
    x.domain()
        .bounds()
        .ok_or_else(|| Error::DomainMismatch("repeated integrals need a finite domain".into()))
}

pub fn cauchy_identity_check(x: &Signal, p: usize, side: Side) -> Result<CauchyCheck> {
    if p == 0 {
        return Err(Error::Parameter(
            "repeated integral order p must be ≥ 1".into(),
        ));
    }
    let (a, b) = finite_bounds(x)?;
    let opts = QuadOptions {
        tol: x.tol(),
        ..Default::default()
    };
    let nested = repeated_integral(|t| x.eval(t), x.n(), p, side, a, b, &opts)?;
    let pf = p as f64;
    let weight = match side {
        Side::Lower => WeightSpec::jacobi(pf, 0.0, a, b)?,
        Side::Upper => WeightSpec::jacobi(0.0, pf, a, b)?,
    };
    let kind = match x.degree() {
        Some(degree) => IntegrandKind::Polynomial { degree },
        None => IntegrandKind::BlackBox,
    };
    let weighted = integrate_vector(|t| x.eval(t), x.n(), &weight, kind, &opts)?;
    let discrepancy = (&nested - &weighted).amax();
    Ok(CauchyCheck {
        nested,
        weighted,
        discrepancy,
    })
}

/// The weighted Jacobi bound evaluated two ways.
#[derive(Debug, Clone, Copy)]
pub struct Reduction {
    /// Lower bound with kernels `j_0^{0,p} … j_d^{0,p}` and weight `(τ−a)^p`.
    pub lb_jacobi: f64,
    /// Same bound from unweighted Legendre moments of order `d + p`.
    pub lb_reduced: f64,
    pub discrepancy: f64,
}

/// Compares the `(τ−a)^p`-weighted Jacobi bound of degree `d` against its
/// evaluation from the unweighted Legendre moments `∫(ℓ_{d+p} ⊗ Iₙ) x`.
///
/// The Jacobi moments are recovered as `Ξ m` with `Ξ = (J L⁻¹ P) ⊗ Iₙ`, where
/// `J` and `L` hold the monomial coefficients of the Jacobi and Legendre
/// families and `P` re-expands `(τ−a)^p ℓ_k` in Legendre polynomials of
/// degree up to `d + p`. The Gram inverse is the closed-form diagonal
/// `D = ⊕ (2k+1+p)/(b−a)^{p+1}`.
pub fn weighted_moment_reduction(
    p: usize,
    d: usize,
    a: f64,
    b: f64,
    x: &Signal,
    u: &CostMatrix,
) -> Result<Reduction> {
    if p == 0 {
        return Err(Error::Parameter("weight exponent p must be ≥ 1".into()));
    }
    check_cost(x, u)?;
    let jac = jacobi_family(d, 0.0, p as f64, a, b)?;
    let lb_jacobi = lower_bound(&jac, x, u)?.lower;

    let shift = weight_shift_matrix(p, d, a, b)?;
    let j = jac.coefficient_matrix(d + 1);
    let l = legendre_family(d, a, b)?.coefficient_matrix(d + 1);
    let upsilon = l
        .transpose()
        .solve_upper_triangular(&j.transpose())
        .ok_or_else(|| Error::Rank("Legendre coefficient matrix is singular".into()))?
        .transpose();
    let xi = kron_lift(&(upsilon * shift), x.n());
    let m = moment_vector(&legendre_family(d + p, a, b)?, x)?;
    let v = xi * m;

    let n = x.n();
    let len = b - a;
    let d_diag = DVector::from_fn(d + 1, |k, _| {
        (2 * k + 1 + p) as f64 / len.powi(p as i32 + 1)
    });
    let dm = DMatrix::from_diagonal(&d_diag);
    let vm = DMatrix::from_fn(d + 1, n, |i, jj| v[i * n + jj]);
    let lb_reduced = (vm.transpose() * dm * &vm).component_mul(u.matrix()).sum();
    Ok(Reduction {
        lb_jacobi,
        lb_reduced,
        discrepancy: (lb_jacobi - lb_reduced).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Domain;
    use approx::assert_relative_eq;

    fn unit01() -> Domain {
        Domain::finite(0.0, 1.0).unwrap()
    }

    #[test]
    fn cauchy_examples() {
        let one = Signal::scalar_poly(&[1.0], unit01()).unwrap();
        let c = cauchy_identity_check(&one, 1, Side::Lower).unwrap();
        assert_relative_eq!(c.nested[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(c.weighted[0], 0.5, epsilon = 1e-14);
        let zero = Signal::scalar_poly(&[0.0], unit01()).unwrap();
        let c = cauchy_identity_check(&zero, 2, Side::Upper).unwrap();
        assert_eq!(c.discrepancy, 0.0);
        let tau = Signal::scalar_poly(&[0.0, 1.0], unit01()).unwrap();
        let c = cauchy_identity_check(&tau, 2, Side::Upper).unwrap();
        // ∫τ³ = 1/4
        assert_relative_eq!(c.weighted[0], 0.25, epsilon = 1e-14);
        assert!(c.discrepancy < 1e-8);
    }

    #[test]
    fn reduction_examples() {
        let tau = Signal::scalar_poly(&[0.0, 1.0], unit01()).unwrap();
        let r = weighted_moment_reduction(1, 0, 0.0, 1.0, &tau, &CostMatrix::identity(1).unwrap())
            .unwrap();
        assert_relative_eq!(r.lb_jacobi, 2.0 / 9.0, epsilon = 1e-15);
        assert_relative_eq!(r.lb_reduced, 2.0 / 9.0, epsilon = 1e-14);
        let zero = Signal::scalar_poly(&[0.0], unit01()).unwrap();
        let r = weighted_moment_reduction(2, 3, 0.0, 1.0, &zero, &CostMatrix::identity(1).unwrap())
            .unwrap();
        assert_eq!((r.lb_jacobi, r.lb_reduced), (0.0, 0.0));
    }

    #[test]
    fn reduction_on_shifted_interval() {
        let dom = Domain::finite(-1.0, 2.0).unwrap();
        let x = Signal::poly(
            DMatrix::from_row_slice(2, 4, &[1.0, -0.5, 0.3, 0.1, 0.0, 2.0, -1.0, 0.2]),
            dom,
        )
        .unwrap();
        let u = CostMatrix::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0])).unwrap();
        for p in 1..=2 {
            for d in 0..=3 {
                let r = weighted_moment_reduction(p, d, -1.0, 2.0, &x, &u).unwrap();
                assert!(r.discrepancy <= 1e-9 * r.lb_jacobi, "p={p} d={d} {r:?}");
            }
        }
    }
}
