use nalgebra::DMatrix;

use super::family::{legendre_family, PolyFamily, MAX_DEGREE};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

const RANK_TOL: f64 = 1e-12;
const MATCH_TOL: f64 = 1e-9;

/// Solves `G · T = S` for coefficient matrices by SVD least squares and
/// rejects rank-deficient targets or inconsistent systems.
fn match_coefficients(source: &[Polynomial], target: &[Polynomial]) -> Result<DMatrix<f64>> {
    if target.is_empty() {
        if source.iter().all(Polynomial::is_zero) {
            return Ok(DMatrix::zeros(source.len(), 0));
        }
        return Err(Error::Rank(
            "nonzero polynomials cannot be expressed in an empty family".into(),
        ));
    }
    let ncols = source
        .iter()
        .chain(target)
        .map(Polynomial::degree)
        .max()
        .unwrap_or(0)
        + 1;
    let coeffs = |polys: &[Polynomial]| {
        DMatrix::from_fn(polys.len(), ncols, |i, j| {
            polys[i].coeffs().get(j).copied().unwrap_or(0.0)
        })
    };
    let s = coeffs(source);
    let t = coeffs(target);

    let tt = t.transpose();
    let svd = tt.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&x| x > RANK_TOL * smax)
        .count();
    if smax == 0.0 || rank < target.len() {
        return Err(Error::Rank(format!(
            "target family has rank {rank} but {} members",
            target.len()
        )));
    }
    let gt = svd
        .solve(&s.transpose(), RANK_TOL * smax)
        .map_err(|e| Error::Rank(e.to_string()))?;
    let residual = (&tt * &gt - s.transpose()).amax();
    let scale = 1f64.max(s.amax()).max(gt.amax() * t.amax());
    if residual > MATCH_TOL * scale {
        return Err(Error::Rank(format!(
            "source is not in the span of the target (residual {residual:e})"
        )));
    }
    Ok(gt.transpose())
}

/// The unique `G` with `source(τ) = G · target(τ)`.
pub fn basis_change(source: &PolyFamily, target: &PolyFamily) -> Result<DMatrix<f64>> {
    if source.domain() != target.domain() {
        return Err(Error::DomainMismatch(
            "basis change between different domains".into(),
        ));
    }
    match_coefficients(source.polys(), target.polys())
}

/// `P` with `(τ − a)^p ℓ_dmax(τ) = P ℓ_{dmax+p}(τ)` for Legendre vectors on `[a, b]`.
pub fn weight_shift_matrix(p: usize, dmax: usize, a: f64, b: f64) -> Result<DMatrix<f64>> {
    if p == 0 {
        return Err(Error::Parameter("weight shift order p must be ≥ 1".into()));
    }
    if dmax + p > MAX_DEGREE {
        return Err(Error::DegreeCap {
            requested: dmax + p,
            max: MAX_DEGREE,
        });
    }
    let target = legendre_family(dmax + p, a, b)?;
    let shift = Polynomial::linear(-a, 1.0).powi(p);
    let source: Vec<Polynomial> = target.polys()[..=dmax]
        .iter()
        .map(|l| shift.mul(l))
        .collect();
    match_coefficients(&source, target.polys())
}

/// Differentiation matrix of a family.
///
/// With `reduced = false` returns the square `Λ` with `ḟ = Λ f`; with
/// `reduced = true` returns `Λ` of shape `d × (d−1)` with `ḟ = Λ f_{0..d−2}`.
pub fn diff_matrix(family: &PolyFamily, reduced: bool) -> Result<DMatrix<f64>> {
    let derivs: Vec<Polynomial> = family.polys().iter().map(Polynomial::derivative).collect();
    let target = if reduced {
        &family.polys()[..family.len() - 1]
    } else {
        family.polys()
    };
    match_coefficients(&derivs, target)
}
