use nalgebra::{DMatrix, SymmetricEigen};

use super::weight::{WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::polyalg::special::gamma_ratio;

/// Laguerre and Hermite recurrences overflow double range beyond this order.
const MAX_UNBOUNDED_ORDER: usize = 150;

/// Gauss quadrature rule `∫ϖ g ≈ Σ w_i g(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exact_degree: usize,
}

impl QuadRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Polynomials up to this degree are integrated exactly against the weight.
    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Three-term recurrence of the monic orthogonal polynomials of a weight:
/// `p_{k+1} = (x − a_k) p_k − b_k p_{k−1}`, with `μ₀ = ∫ϖ`.
struct Recurrence {
    a: Vec<f64>,
    b: Vec<f64>,
    mu0: f64,
}

fn jacobi_recurrence(alpha: f64, beta: f64, m: usize) -> Recurrence {
    let ab = alpha + beta;
    let a = (0..m)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    // b[0] is unused; b[k] for k ≥ 1.
    let b = (0..=m)
        .map(|k| {
            let kf = k as f64;
            match k {
                0 => 0.0,
                1 => 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab)),
                _ => {
                    let s = 2.0 * kf + ab;
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                        / (s * s * (s + 1.0) * (s - 1.0))
                }
            }
        })
        .collect();
    let mu0 = 2f64.powf(ab + 1.0) * gamma_ratio(&[alpha + 1.0, beta + 1.0], &[ab + 2.0]);
    Recurrence { a, b, mu0 }
}

fn laguerre_recurrence(alpha: f64, m: usize) -> Recurrence {
    Recurrence {
        a: (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect(),
        b: (0..=m).map(|k| k as f64 * (k as f64 + alpha)).collect(),
        mu0: gamma_ratio(&[alpha + 1.0], &[]),
    }
}

fn hermite_recurrence(m: usize) -> Recurrence {
    Recurrence {
        a: vec![0.0; m],
        b: (0..=m).map(|k| k as f64 / 2.0).collect(),
        mu0: std::f64::consts::PI.sqrt(),
    }
}

impl Recurrence {
    /// Orthonormal values `p̂_0(x) … p̂_m(x)` and the derivative of `p̂_m`.
    fn orthonormal(&self, x: f64, m: usize) -> (Vec<f64>, f64) {
        let mut p = Vec::with_capacity(m + 1);
        let mut dp_prev = 0.0;
        let mut dp = 0.0;
        p.push(1.0 / self.mu0.sqrt());
        for k in 0..m {
            let prev = if k == 0 { 0.0 } else { p[k - 1] };
            let sb = if k == 0 { 0.0 } else { self.b[k].sqrt() };
            let next_b = self.b[k + 1].sqrt();
            let next = ((x - self.a[k]) * p[k] - sb * prev) / next_b;
            let dnext = (p[k] + (x - self.a[k]) * dp - sb * dp_prev) / next_b;
            p.push(next);
            dp_prev = dp;
            dp = dnext;
        }
        (p, dp)
    }

    /// Golub–Welsch: nodes are the eigenvalues of the symmetric tridiagonal
    /// Jacobi matrix. Each node gets two Newton steps on `p̂_m`, and weights
    /// come from the Christoffel function `1 / Σ_{k<m} p̂_k(x)²`, which keeps
    /// tiny weights accurate to full relative precision.
    fn rule(&self, m: usize) -> (Vec<f64>, Vec<f64>) {
        let jm = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                self.a[i]
            } else if i + 1 == j || j + 1 == i {
                self.b[i.max(j)].sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jm);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|x, y| x.total_cmp(y));
        let spacing = |i: usize| -> f64 {
            let left = if i > 0 {
                nodes[i] - nodes[i - 1]
            } else {
                f64::INFINITY
            };
            let right = if i + 1 < m {
                nodes[i + 1] - nodes[i]
            } else {
                f64::INFINITY
            };
            left.min(right)
        };
        let spacings: Vec<f64> = (0..m).map(spacing).collect();
        let mut weights = Vec::with_capacity(m);
        for (x, gap) in nodes.iter_mut().zip(spacings) {
            for _ in 0..2 {
                let (p, dp) = self.orthonormal(*x, m);
                let step = p[m] / dp;
                if step.is_finite() && step.abs() < 0.1 * gap {
                    *x -= step;
                }
            }
            let (p, _) = self.orthonormal(*x, m);
            let christoffel: f64 = p[..m].iter().map(|v| v * v).sum();
            weights.push(1.0 / christoffel);
        }
        (nodes, weights)
    }
}

/// Reference Gauss–Jacobi rule on `[−1, 1]` for `(1−x)^α (1+x)^β`.
pub(crate) fn jacobi_reference(alpha: f64, beta: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    jacobi_recurrence(alpha, beta, m).rule(m)
}

/// `m`-point Gauss rule for a unit, Jacobi, Laguerre or Hermite weight.
///
/// Jacobi and unit rules are mapped affinely from `[−1, 1]` to the weight's
/// interval; the rule integrates polynomials of degree `≤ 2m − 1` exactly
/// against the weight.
pub fn gauss_rule(weight: &WeightSpec, m: usize) -> Result<QuadRule> {
    if m == 0 {
        return Err(Error::Parameter("quadrature order must be ≥ 1".into()));
    }
    let (nodes, weights) = match weight.kind() {
        WeightKind::Unit | WeightKind::Jacobi { .. } => {
            let (alpha, beta) = weight.jacobi_exponents().expect("jacobi-type weight");
            let (a, b) = weight.domain().bounds().expect("finite domain");
            let (x, w) = jacobi_reference(alpha, beta, m);
            let half = 0.5 * (b - a);
            let scale = half.powf(alpha + beta + 1.0);
            (
                x.iter().map(|&x| a + half * (x + 1.0)).collect(),
                w.iter().map(|&w| w * scale).collect(),
            )
        }
        WeightKind::Laguerre { alpha } => {
            check_unbounded_order(m)?;
            laguerre_recurrence(*alpha, m).rule(m)
        }
        WeightKind::Hermite => {
            check_unbounded_order(m)?;
            hermite_recurrence(m).rule(m)
        }
        WeightKind::Custom(_) => {
            return Err(Error::UnsupportedWeight(
                "no Gauss rule for a custom weight; use adaptive integration".into(),
            ))
        }
    };
    Ok(QuadRule {
        nodes,
        weights,
        exact_degree: 2 * m - 1,
    })
}

fn check_unbounded_order(m: usize) -> Result<()> {
    if m > MAX_UNBOUNDED_ORDER {
        return Err(Error::Parameter(format!(
            "Gauss rules on unbounded domains are limited to {MAX_UNBOUNDED_ORDER} nodes, got {m}"
        )));
    }
    Ok(())
}
