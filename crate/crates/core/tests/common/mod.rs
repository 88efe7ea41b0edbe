//! Reference computations for integration tests.
//!
//! Quadrature here comes from the Golub–Welsch eigenvalue method on the
//! three-term recurrence, which the library does not use, and the bounds are
//! assembled directly from sampled kernels and signals.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use iikit::bound::{CostMatrix, Signal};
use iikit::gram::gram_matrix;
use iikit::polyalg::{
    classical_family, jacobi_family, legendre_family, ClassicalKind, Domain, PolyFamily, Polynomial,
};
use iikit::quad::WeightSpec;

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `Γ(x)` for `x` a positive integer or half-integer.
pub fn gamma_half(x: f64) -> f64 {
    let twice = (2.0 * x).round() as i64;
    assert!(twice >= 1 && (2.0 * x - twice as f64).abs() < 1e-12);
    if twice % 2 == 0 {
        factorial((twice / 2 - 1) as u32)
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!)
        let k = ((twice - 1) / 2) as u32;
        factorial(2 * k) * std::f64::consts::PI.sqrt() / (4f64.powi(k as i32) * factorial(k))
    }
}

#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> Rule {
    let m = diag.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss–Legendre on `[a, b]`.
pub fn legendre_rule(m: usize, a: f64, b: f64) -> Rule {
    let off: Vec<f64> = (1..m)
        .map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt())
        .collect();
    let r = golub_welsch(&vec![0.0; m], &off, 2.0);
    let (h, c) = ((b - a) / 2.0, (a + b) / 2.0);
    Rule {
        nodes: r.nodes.iter().map(|x| c + h * x).collect(),
        weights: r.weights.iter().map(|w| h * w).collect(),
    }
}

/// Gauss–Laguerre for `τ^α e^{−τ}`.
pub fn laguerre_rule(m: usize, alpha: f64) -> Rule {
    let diag: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..m)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    golub_welsch(&diag, &off, gamma_half(alpha + 1.0))
}

/// Gauss–Hermite for `e^{−τ²}`.
pub fn hermite_rule(m: usize) -> Rule {
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&vec![0.0; m], &off, std::f64::consts::PI.sqrt())
}

/// Weights that test instances are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightClass {
    Unit {
        a: f64,
        b: f64,
    },
    /// `(b−τ)^α (τ−a)^β` with integer exponents.
    Jacobi {
        alpha: u32,
        beta: u32,
        a: f64,
        b: f64,
    },
    Laguerre {
        alpha: u32,
    },
    Hermite,
}

impl WeightClass {
    pub fn spec(&self) -> WeightSpec {
        match *self {
            WeightClass::Unit { a, b } => WeightSpec::unit(Domain::finite(a, b).unwrap()).unwrap(),
            WeightClass::Jacobi { alpha, beta, a, b } => {
                WeightSpec::jacobi(alpha.into(), beta.into(), a, b).unwrap()
            }
            WeightClass::Laguerre { alpha } => WeightSpec::laguerre(alpha.into()).unwrap(),
            WeightClass::Hermite => WeightSpec::hermite(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.spec().domain()
    }

    /// Rule integrating `ϖ·q` exactly for polynomials `q` of degree `< 2m`.
    pub fn rule(&self, m: usize) -> Rule {
        match *self {
            WeightClass::Unit { a, b } => legendre_rule(m, a, b),
            WeightClass::Jacobi { alpha, beta, a, b } => {
                let r = legendre_rule(m + ((alpha + beta) as usize).div_ceil(2), a, b);
                let weights = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(t, w)| w * (b - t).powi(alpha as i32) * (t - a).powi(beta as i32))
                    .collect();
                Rule {
                    nodes: r.nodes,
                    weights,
                }
            }
            WeightClass::Laguerre { alpha } => laguerre_rule(m, alpha.into()),
            WeightClass::Hermite => hermite_rule(m),
        }
    }

    /// The classical orthogonal family for this weight, degrees `0..=dmax`.
    pub fn orthogonal_family(&self, dmax: usize) -> PolyFamily {
        match *self {
            WeightClass::Unit { a, b } => legendre_family(dmax, a, b).unwrap(),
            WeightClass::Jacobi { alpha, beta, a, b } => {
                jacobi_family(dmax, alpha.into(), beta.into(), a, b).unwrap()
            }
            WeightClass::Laguerre { alpha } => classical_family(
                ClassicalKind::Laguerre {
                    alpha: alpha.into(),
                },
                dmax,
            )
            .unwrap(),
            WeightClass::Hermite => classical_family(ClassicalKind::Hermite, dmax).unwrap(),
        }
    }
}

/// Horner with a running error term built from exact product and sum
/// residuals (Ogita–Rump–Oishi), accurate to about twice working precision.
pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for &c in coeffs.iter().rev() {
        let p = hi * t;
        let p_err = hi.mul_add(t, -p);
        let s = p + c;
        let z = s - p;
        let s_err = (p - (s - z)) + (c - z);
        hi = s;
        lo = lo * t + (p_err + s_err);
    }
    hi + lo
}

/// `(upper, lower)` of the weighted bound from kernels and signal rows in
/// monomial coefficients, sampled on `rule`.
pub fn reference_bounds(
    rule: &Rule,
    kernels: &[Vec<f64>],
    signal: &[Vec<f64>],
    u: &DMatrix<f64>,
) -> (f64, f64) {
    let (d, n) = (kernels.len(), signal.len());
    let mut gram = DMatrix::<f64>::zeros(d, d);
    let mut theta = DMatrix::<f64>::zeros(d, n);
    let mut upper = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let f = DVector::from_iterator(d, kernels.iter().map(|k| horner(k, t)));
        let x = DVector::from_iterator(n, signal.iter().map(|s| horner(s, t)));
        gram += w * &f * f.transpose();
        theta += w * &f * x.transpose();
        upper += w * (x.transpose() * u * &x)[(0, 0)];
    }
    let solved = gram
        .cholesky()
        .expect("reference Gram not positive definite")
        .solve(&theta);
    let lower = (theta.transpose() * solved).component_mul(u).sum();
    (upper, lower)
}

pub fn coeff_rows(polys: &[Polynomial]) -> Vec<Vec<f64>> {
    polys.iter().map(|p| p.coeffs().to_vec()).collect()
}

/// Random polynomial signal of the given degree written in the normalized
/// orthogonal basis of `weight`, so that `∫ϖ|x|²` stays of order `n·(deg+1)`.
pub fn random_poly_signal(
    rng: &mut ChaCha8Rng,
    weight: &WeightClass,
    n: usize,
    degree: usize,
) -> (Signal, Vec<Vec<f64>>) {
    let fam = weight.orthogonal_family(degree);
    let norms = gram_matrix(&fam).unwrap().gram.diagonal();
    let rows: Vec<Polynomial> = (0..n)
        .map(|_| {
            let c: Vec<f64> = (0..=degree)
                .map(|k| rng.random_range(-1.0..1.0) / norms[k].sqrt())
                .collect();
            Polynomial::combination(&c, fam.polys())
        })
        .collect();
    let coeffs = coeff_rows(&rows);
    let width = degree + 1;
    let m = DMatrix::from_fn(n, width, |i, j| coeffs[i].get(j).copied().unwrap_or(0.0));
    (Signal::poly(m, weight.domain()).unwrap(), coeffs)
}

/// Random symmetric positive definite cost with unit spectral scale.
pub fn random_cost(rng: &mut ChaCha8Rng, n: usize) -> CostMatrix {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let m = &a * a.transpose() + DMatrix::identity(n, n) * 0.1;
    let scale = m.symmetric_eigenvalues().max();
    CostMatrix::new(m / scale).unwrap()
}

/// Random weight class among the four kinds.
pub fn random_weight(rng: &mut ChaCha8Rng) -> WeightClass {
    let a = rng.random_range(-2.0..1.0);
    let b = a + rng.random_range(0.5..3.0);
    match rng.random_range(0..4) {
        0 => WeightClass::Unit { a, b },
        1 => WeightClass::Jacobi {
            alpha: rng.random_range(0..=3),
            beta: rng.random_range(0..=3),
            a,
            b,
        },
        2 => WeightClass::Laguerre {
            alpha: rng.random_range(0..=2),
        },
        _ => WeightClass::Hermite,
    }
}

/// Random `d × d` matrix `Q₁ diag(σ) Q₂` with condition number `cond`.
pub fn random_conditioned(rng: &mut ChaCha8Rng, d: usize, cond: f64) -> DMatrix<f64> {
    let mut orth = || {
        DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0))
            .qr()
            .q()
    };
    let (q1, q2) = (orth(), orth());
    let sigma = DVector::from_fn(d, |i, _| {
        if d == 1 {
            1.0
        } else {
            cond.powf(-(i as f64) / (d - 1) as f64)
        }
    });
    q1 * DMatrix::from_diagonal(&sigma) * q2
}
