//! Gram matrices, the Gramian independence test, Kronecker lifting and the
//! completion-of-squares bound.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::polyalg::PolyFamily;
use crate::quad::{gauss_rule, integrate, IntegrandKind, QuadOptions, WeightKind};

/// Default relative eigenvalue threshold of the independence test.
pub const PD_TOL: f64 = 1e-12;
/// Condition number above which a [`GramPair`] carries a warning.
pub const CONDITION_WARNING: f64 = 1e12;

/// `F⁻¹ = ∫ϖ f fᵀ` together with `F` and conditioning data.
#[derive(Debug, Clone)]
pub struct GramPair {
    pub gram: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub condition_number: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Independence {
    Independent,
    Dependent(f64),
}

/// Gram matrix of `family` against its weight, with `pd_tol = 1e−12`.
pub fn gram_matrix(family: &PolyFamily) -> Result<GramPair> {
    gram_matrix_with_tol(family, PD_TOL)
}

pub fn gram_matrix_with_tol(family: &PolyFamily, pd_tol: f64) -> Result<GramPair> {
    let gram = match family.classical_norms() {
        Some(norms) => DMatrix::from_diagonal(&nalgebra::DVector::from_vec(norms)),
        None => gram_matrix_quadrature(family)?,
    };
    finish(gram, pd_tol)
}

/// Gram matrix by quadrature only, bypassing the classical shortcut.
///
/// Unit and classical weights use one Gauss rule exact for the products
/// `f_i f_j`; custom weights go through the adaptive integrator.
pub fn gram_matrix_quadrature(family: &PolyFamily) -> Result<DMatrix<f64>> {
    let d = family.len();
    let weight = family.weight();
    let maxdeg = family.max_degree();
    let gram = if matches!(weight.kind(), WeightKind::Custom(_)) {
        let f = |t: f64| {
            let v = family.eval_unchecked(t);
            &v * v.transpose()
        };
        integrate(
            f,
            (d, d),
            weight,
            IntegrandKind::BlackBox,
            &QuadOptions {
                tol: 1e-13,
                ..Default::default()
            },
        )?
    } else {
        let wdeg = weight.polynomial_degree().unwrap_or(0);
        let m = (2 * maxdeg + wdeg + 1).div_ceil(2) + 2;
        let rule = gauss_rule(weight, m)?;
        let mut g = DMatrix::zeros(d, d);
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let v = family.eval_unchecked(t);
            g.syger(w, &v, &v, 1.0);
        }
        g.fill_upper_triangle_with_lower_triangle();
        g
    };
    Ok(symmetrize(&gram))
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn finish(gram: DMatrix<f64>, pd_tol: f64) -> Result<GramPair> {
    let eig = SymmetricEigen::new(gram.clone());
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if min <= pd_tol * max.abs() {
        return Err(Error::SingularGram {
            min_eigenvalue: min,
        });
    }
    let inverse = match Cholesky::new(gram.clone()) {
        Some(ch) => ch.inverse(),
        None => {
            let inv = eig.eigenvalues.map(|l| 1.0 / l);
            &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose()
        }
    };
    let condition_number = max / min;
    let warning = (condition_number > CONDITION_WARNING).then(|| {
        format!("Gram matrix is ill-conditioned (condition number {condition_number:.3e})")
    });
    Ok(GramPair {
        gram,
        inverse: symmetrize(&inverse),
        min_eigenvalue: min,
        condition_number,
        warning,
    })
}

/// Independence iff the smallest eigenvalue exceeds `pd_tol` times the largest.
pub fn gramian_check(gram: &DMatrix<f64>, pd_tol: f64) -> Result<Independence> {
    if !gram.is_square() {
        return Err(Error::Shape(format!(
            "Gram matrix must be square, got {:?}",
            gram.shape()
        )));
    }
    if gram.is_empty() {
        return Err(Error::Shape("Gram matrix is empty".into()));
    }
    let eig = SymmetricEigen::new(symmetrize(gram)).eigenvalues;
    let (min, max) = (eig.min(), eig.max());
    if min > pd_tol * max.abs() {
        Ok(Independence::Independent)
    } else {
        Ok(Independence::Dependent(min))
    }
}

/// `A ⊗ I_n`.
pub fn kron_lift(a: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows() * n, a.ncols() * n);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let v = a[(i, j)];
            if v != 0.0 {
                for k in 0..n {
                    out[(i * n + k, j * n + k)] = v;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct Completion {
    /// `MᵀB + BᵀM − MᵀCM`.
    pub rhs: DMatrix<f64>,
    /// `BᵀC⁻¹B − rhs`, positive semidefinite.
    pub gap: DMatrix<f64>,
}

/// Completion of squares `BᵀC⁻¹B ⪰ MᵀB + BᵀM − MᵀCM` for `C ≻ 0`.
pub fn completion_bound(
    c: &DMatrix<f64>,
    b: &DMatrix<f64>,
    m: &DMatrix<f64>,
) -> Result<Completion> {
    if !c.is_square() || b.nrows() != c.nrows() || m.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "need C square with B, M of matching shape; got C {:?}, B {:?}, M {:?}",
            c.shape(),
            b.shape(),
            m.shape()
        )));
    }
    let ch = Cholesky::new(symmetrize(c))
        .ok_or_else(|| Error::NotPositiveDefinite("C in completion bound".into()))?;
    let mt_b = m.transpose() * b;
    let rhs = &mt_b + mt_b.transpose() - m.transpose() * c * m;
    let full = b.transpose() * ch.solve(b);
    let gap = symmetrize(&(full - &rhs));
    Ok(Completion {
        rhs: symmetrize(&rhs),
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{jacobi_family, legendre_family, Domain, Polynomial};
    use crate::quad::WeightSpec;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
        DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn legendre_gram_is_diagonal() {
        let g = gram_matrix(&legendre_family(2, 0.0, 1.0).unwrap()).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 1.0 / 3.0, 1.0 / 5.0]);
        assert_relative_eq!(g.gram, expected, epsilon = 1e-15);
        assert!(g.warning.is_none());
        assert_relative_eq!(
            &g.gram * &g.inverse,
            DMatrix::identity(3, 3),
            epsilon = 1e-12
        );
    }

    #[test]
    fn jacobi_gram_matches_integration() {
        // weight (1−τ) on [0, 1]: diag = [1/2, 1/4, 1/6]
        let fam = jacobi_family(2, 1.0, 0.0, 0.0, 1.0).unwrap();
        let g = gram_matrix(&fam).unwrap();
        for (k, v) in [0.5, 0.25, 1.0 / 6.0].into_iter().enumerate() {
            assert_relative_eq!(g.gram[(k, k)], v, max_relative = 1e-14);
        }
        assert_relative_eq!(
            gram_matrix_quadrature(&fam).unwrap(),
            g.gram,
            epsilon = 1e-14
        );
    }

    #[test]
    fn duplicate_kernel_is_singular() {
        let w = WeightSpec::unit(Domain::finite(0.0, 1.0).unwrap()).unwrap();
        let fam = PolyFamily::new(vec![Polynomial::constant(1.0); 2], w).unwrap();
        assert!(matches!(gram_matrix(&fam), Err(Error::SingularGram { .. })));
    }

    #[test]
    fn custom_weight_gram() {
        let w =
            WeightSpec::custom(Domain::finite(0.0, 1.0).unwrap(), "2t", true, |t| 2.0 * t).unwrap();
        let fam =
            PolyFamily::new(vec![Polynomial::constant(1.0), Polynomial::monomial(1)], w).unwrap();
        let g = gram_matrix(&fam).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 2.0 / 3.0, 2.0 / 3.0, 0.5]);
        assert_relative_eq!(g.gram, expected, epsilon = 1e-12);
    }

    #[test]
    fn gramian_check_cases() {
        assert_eq!(
            gramian_check(&DMatrix::identity(3, 3), PD_TOL).unwrap(),
            Independence::Independent
        );
        match gramian_check(&DMatrix::from_element(2, 2, 1.0), PD_TOL).unwrap() {
            Independence::Dependent(m) => assert!(m.abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        let tiny = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 1e-16]);
        assert!(matches!(
            gramian_check(&tiny, 1e-12).unwrap(),
            Independence::Dependent(_)
        ));
        assert!(matches!(
            gramian_check(&DMatrix::zeros(2, 3), PD_TOL),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn kron_lift_laws() {
        assert_eq!(
            kron_lift(&DMatrix::from_element(1, 1, 2.0), 2),
            DMatrix::from_diagonal_element(2, 2, 2.0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (p, q, r, n) = (
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
            );
            let a = random(&mut rng, p, q);
            let b = random(&mut rng, q, r);
            assert_relative_eq!(
                kron_lift(&a, n),
                a.kronecker(&DMatrix::identity(n, n)),
                epsilon = 0.0
            );
            assert_relative_eq!(
                kron_lift(&a, n) * kron_lift(&b, n),
                kron_lift(&(&a * &b), n),
                epsilon = 1e-12
            );
            let c = random(&mut rng, n, n + 1);
            assert_relative_eq!(
                kron_lift(&a, n) * b.kronecker(&c),
                (&a * &b).kronecker(&c),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn completion_examples() {
        let s = |v: f64| DMatrix::from_element(1, 1, v);
        let r = completion_bound(&s(2.0), &s(1.0), &s(0.0)).unwrap();
        assert_eq!(r.rhs[(0, 0)], 0.0);
        assert_relative_eq!(r.gap[(0, 0)], 0.5);
        let r = completion_bound(&s(2.0), &s(1.0), &s(0.5)).unwrap();
        assert_relative_eq!(r.rhs[(0, 0)], 0.5);
        assert!(r.gap[(0, 0)].abs() < 1e-15);
        assert!(matches!(
            completion_bound(&s(-1.0), &s(1.0), &s(0.0)),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn completion_gap_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (n, k) = (rng.random_range(1..5), rng.random_range(1..4));
            let r = random(&mut rng, n, n);
            let c = &r * r.transpose() + DMatrix::identity(n, n) * 0.1;
            let b = random(&mut rng, n, k);
            let m = random(&mut rng, n, k);
            let gap = completion_bound(&c, &b, &m).unwrap().gap;
            assert!(SymmetricEigen::new(gap).eigenvalues.min() >= -1e-10);
            let opt = c.clone().cholesky().unwrap().solve(&b);
            let gap = completion_bound(&c, &b, &opt).unwrap().gap;
            assert!(gap.abs().max() < 1e-10 * (1.0 + c.norm()));
        }
    }
}
