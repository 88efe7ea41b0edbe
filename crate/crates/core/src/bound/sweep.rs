use std::ops::RangeInclusive;

use super::{lower_bound, BoundReport, CostMatrix, Signal};
use crate::error::{Error, Result};
use crate::polyalg::{legendre_family, PolyFamily};

fn extends(prev: &PolyFamily, next: &PolyFamily) -> bool {
    next.len() > prev.len()
        && next.weight().same_as(prev.weight())
        && prev.polys().iter().zip(next.polys()).all(|(a, b)| a == b)
}

/// Lower bounds for a growing kernel family, one report per `d`.
///
/// `builder(d)` must return a family whose kernels extend the previous
/// level's; anything else is rejected with [`Error::NonNestedFamily`].
pub fn hierarchy_sweep<B>(
    builder: B,
    x: &Signal,
    u: &CostMatrix,
    d_range: RangeInclusive<usize>,
) -> Result<Vec<BoundReport>>
where
    B: Fn(usize) -> Result<PolyFamily>,
{
    let wrap = |d: usize| {
        move |e: Error| Error::SweepLevel {
            d,
            source: Box::new(e),
        }
    };
    let mut prev: Option<PolyFamily> = None;
    let mut out = Vec::new();
    for d in d_range {
        let fam = builder(d).map_err(wrap(d))?;
        if let Some(p) = &prev {
            if !extends(p, &fam) {
                return Err(Error::NonNestedFamily { d });
            }
        }
        out.push(lower_bound(&fam, x, u).map_err(wrap(d))?);
        prev = Some(fam);
    }
    Ok(out)
}

/// Builder for Legendre prefixes on `[a, b]`: level `d` holds `ℓ_0 … ℓ_{d−1}`.
pub fn legendre_prefixes(a: f64, b: f64) -> impl Fn(usize) -> Result<PolyFamily> {
    move |d| {
        if d == 0 {
            return Err(Error::Parameter(
                "a kernel family needs at least one function".into(),
            ));
        }
        legendre_family(d - 1, a, b)
    }
}

/// First level `k` with `lower[k+1] < lower[k] − tol·max(1, lower[k])`.
pub fn monotonicity_violation(reports: &[BoundReport], tol: f64) -> Option<usize> {
    reports
        .windows(2)
        .position(|w| w[1].lower < w[0].lower - tol * w[0].lower.abs().max(1.0))
}

/// `|gap_last| / |gap_first|`.
pub fn gap_ratio(reports: &[BoundReport]) -> Option<f64> {
    let (first, last) = (reports.first()?, reports.last()?);
    Some(last.gap.abs() / first.gap.abs())
}
