use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::gauss::{gauss_rule, jacobi_reference};
use super::weight::{WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::polyalg::special::factorial;
use crate::polyalg::Domain;

/// Nodes per panel in the composite rule.
const PANEL_ORDER: usize = 10;
/// Starting order for degree doubling on unbounded domains.
const START_ORDER: usize = 16;
/// Hard ceiling on live panels.
const MAX_PANELS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Absolute error target.
    pub tol: f64,
    /// Maximum number of bisections of a single panel (or order doublings).
    pub max_refinements: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_refinements: 20,
        }
    }
}

/// What the caller knows about the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrandKind {
    /// Polynomial of at most this degree: a single Gauss rule is exact.
    Polynomial {
        degree: usize,
    },
    BlackBox,
}

/// Side of the repeated integral: `lower` nests `∫_a^{τ}`, `upper` nests `∫_{τ}^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

fn legendre_panel() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| jacobi_reference(0.0, 0.0, PANEL_ORDER))
}

type Flat<'a> = dyn Fn(f64) -> Result<Vec<f64>> + 'a;

fn axpy(acc: &mut [f64], w: f64, v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += w * x;
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Rounding floor below which successive estimates cannot be told apart.
fn rounding_floor(abs_mass: f64) -> f64 {
    64.0 * f64::EPSILON * abs_mass
}

/// Weighted integral of a vector-valued integrand of length `len`.
fn integrate_flat(
    f: &Flat<'_>,
    len: usize,
    weight: &WeightSpec,
    kind: IntegrandKind,
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    if let (IntegrandKind::Polynomial { degree }, false) =
        (kind, matches!(weight.kind(), WeightKind::Custom(_)))
    {
        let rule = gauss_rule(weight, degree / 2 + 1)?;
        let mut acc = vec![0.0; len];
        for (x, w) in rule.pairs() {
            axpy(&mut acc, w, &f(x)?);
        }
        return Ok(acc);
    }
    match (weight.kind(), weight.domain()) {
        (WeightKind::Laguerre { .. } | WeightKind::Hermite, _) => {
            degree_doubling(f, len, weight, opts)
        }
        (WeightKind::Custom(_), Domain::Finite { a, b }) => {
            let g = |t: f64| -> Result<Vec<f64>> {
                let w = weight.eval(t);
                let mut v = f(t)?;
                v.iter_mut().for_each(|x| *x *= w);
                Ok(v)
            };
            composite(&g, len, a, b, (0.0, 0.0), opts)
        }
        (WeightKind::Custom(_), domain) => {
            // Map onto a bounded interval; Gauss nodes never touch the singular ends.
            let (lo, map): (f64, fn(f64) -> (f64, f64)) = match domain {
                Domain::HalfLine => (0.0, |t| (t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t)))),
                _ => (-1.0, |t| {
                    let s = 1.0 - t * t;
                    (t / s, (1.0 + t * t) / (s * s))
                }),
            };
            let g = |t: f64| -> Result<Vec<f64>> {
                let (x, dx) = map(t);
                let w = weight.eval(x) * dx;
                if w == 0.0 || !w.is_finite() {
                    return Ok(vec![0.0; len]);
                }
                let mut v = f(x)?;
                v.iter_mut().for_each(|y| *y *= w);
                Ok(v)
            };
            composite(&g, len, lo, 1.0, (0.0, 0.0), opts)
        }
        (_, Domain::Finite { a, b }) => {
            let exps = weight.jacobi_exponents().expect("jacobi-type weight");
            composite(f, len, a, b, exps, opts)
        }
        _ => Err(Error::UnsupportedWeight(weight.describe())),
    }
}

fn degree_doubling(
    f: &Flat<'_>,
    len: usize,
    weight: &WeightSpec,
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    let eval = |m: usize| -> Result<(Vec<f64>, f64)> {
        let rule = gauss_rule(weight, m)?;
        let mut acc = vec![0.0; len];
        let mut mass = 0.0;
        for (x, w) in rule.pairs() {
            if w == 0.0 {
                continue;
            }
            let v = f(x)?;
            mass += w * v.iter().map(|y| y.abs()).fold(0.0, f64::max);
            axpy(&mut acc, w, &v);
        }
        Ok((acc, mass))
    };
    let mut m = START_ORDER;
    let (mut prev, _) = eval(m)?;
    let mut estimate = f64::INFINITY;
    for _ in 0..opts.max_refinements.min(3) {
        m *= 2;
        let (next, mass) = eval(m)?;
        estimate = max_abs_diff(&prev, &next);
        if estimate <= opts.tol.max(rounding_floor(mass)) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        estimate,
        tol: opts.tol,
    })
}

struct Panel {
    l: f64,
    r: f64,
    depth: usize,
    coarse: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
    err: f64,
    mass: f64,
}

/// Globally adaptive composite Gauss rule on `[lo, hi]` for a Jacobi-type
/// weight `(hi − τ)^α (τ − lo)^β`.
///
/// Panels touching an endpoint use a Gauss–Jacobi rule that absorbs that
/// endpoint's factor; the remaining factors are smooth there and evaluated
/// directly. The panel with the largest bisection discrepancy is split until
/// the summed estimate drops below `tol`.
fn composite(
    f: &Flat<'_>,
    len: usize,
    lo: f64,
    hi: f64,
    (alpha, beta): (f64, f64),
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    let legendre = legendre_panel();
    let refs: Vec<(Vec<f64>, Vec<f64>)> = [(alpha, 0.0), (0.0, beta), (alpha, beta)]
        .iter()
        .map(|&(al, be)| {
            if al == 0.0 && be == 0.0 {
                legendre.clone()
            } else {
                jacobi_reference(al, be, PANEL_ORDER)
            }
        })
        .collect();

    let panel_rule = |l: f64, r: f64| -> Result<(Vec<f64>, f64)> {
        let touches_lo = l == lo;
        let touches_hi = r == hi;
        let idx = (touches_hi as usize) | ((touches_lo as usize) << 1);
        let (ae, be) = (
            if touches_hi { alpha } else { 0.0 },
            if touches_lo { beta } else { 0.0 },
        );
        let (xs, ws) = if idx == 0 { legendre } else { &refs[idx - 1] };
        let half = 0.5 * (r - l);
        let scale = half.powf(ae + be + 1.0);
        let mut acc = vec![0.0; len];
        let mut mass = 0.0;
        for (&x, &w) in xs.iter().zip(ws) {
            let t = l + half * (x + 1.0);
            let mut factor = w * scale;
            if !touches_lo && beta != 0.0 {
                factor *= (t - lo).powf(beta);
            }
            if !touches_hi && alpha != 0.0 {
                factor *= (hi - t).powf(alpha);
            }
            let v = f(t)?;
            mass += factor.abs() * v.iter().map(|y| y.abs()).fold(0.0, f64::max);
            axpy(&mut acc, factor, &v);
        }
        Ok((acc, mass))
    };

    let make_panel = |l: f64, r: f64, depth: usize, coarse: Vec<f64>| -> Result<Panel> {
        let mid = 0.5 * (l + r);
        let (left, ml) = panel_rule(l, mid)?;
        let (right, mr) = panel_rule(mid, r)?;
        let fine: Vec<f64> = left.iter().zip(&right).map(|(x, y)| x + y).collect();
        let err = max_abs_diff(&coarse, &fine);
        Ok(Panel {
            l,
            r,
            depth,
            coarse,
            left,
            right,
            err,
            mass: ml + mr,
        })
    };

    let (whole, _) = panel_rule(lo, hi)?;
    let mut panels = vec![make_panel(lo, hi, 0, whole)?];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let mass: f64 = panels.iter().map(|p| p.mass).sum();
        if total_err <= opts.tol.max(rounding_floor(mass)) {
            let mut acc = vec![0.0; len];
            for p in &panels {
                axpy(&mut acc, 1.0, &p.left);
                axpy(&mut acc, 1.0, &p.right);
            }
            return Ok(acc);
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        if panels[worst].depth >= opts.max_refinements || panels.len() >= MAX_PANELS {
            return Err(Error::NonConvergence {
                estimate: total_err,
                tol: opts.tol,
            });
        }
        let p = panels.swap_remove(worst);
        debug_assert!(p.coarse.len() == len);
        let mid = 0.5 * (p.l + p.r);
        panels.push(make_panel(p.l, mid, p.depth + 1, p.left)?);
        panels.push(make_panel(mid, p.r, p.depth + 1, p.right)?);
    }
}

/// Entrywise weighted integral of a matrix-valued integrand of the given shape.
pub fn integrate<F>(
    f: F,
    shape: (usize, usize),
    weight: &WeightSpec,
    kind: IntegrandKind,
    opts: &QuadOptions,
) -> Result<DMatrix<f64>>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let (rows, cols) = shape;
    let flat = |t: f64| -> Result<Vec<f64>> {
        let m = f(t);
        if m.shape() != shape {
            return Err(Error::Shape(format!(
                "integrand returned {:?}, expected {shape:?}",
                m.shape()
            )));
        }
        Ok(m.as_slice().to_vec())
    };
    let v = integrate_flat(&flat, rows * cols, weight, kind, opts)?;
    Ok(DMatrix::from_vec(rows, cols, v))
}

pub fn integrate_vector<F>(
    f: F,
    len: usize,
    weight: &WeightSpec,
    kind: IntegrandKind,
    opts: &QuadOptions,
) -> Result<DVector<f64>>
where
    F: Fn(f64) -> DVector<f64>,
{
    let flat = |t: f64| -> Result<Vec<f64>> {
        let v = f(t);
        if v.len() != len {
            return Err(Error::Shape(format!(
                "integrand returned length {}, expected {len}",
                v.len()
            )));
        }
        Ok(v.as_slice().to_vec())
    };
    Ok(DVector::from_vec(integrate_flat(
        &flat, len, weight, kind, opts,
    )?))
}

pub fn integrate_scalar<F>(
    f: F,
    weight: &WeightSpec,
    kind: IntegrandKind,
    opts: &QuadOptions,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let flat = |t: f64| -> Result<Vec<f64>> { Ok(vec![f(t)]) };
    Ok(integrate_flat(&flat, 1, weight, kind, opts)?[0])
}

/// `p! ∫_a^b ∫_a^{τ₁} ⋯ ∫_a^{τ_p} f` (lower) or `p! ∫_a^b ∫_{τ₁}^b ⋯ ∫_{τ_p}^b f`
/// (upper): `p + 1` nested integrals evaluated by direct nesting of adaptive rules.
pub fn repeated_integral<F>(
    f: F,
    len: usize,
    order: usize,
    side: Side,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<DVector<f64>>
where
    F: Fn(f64) -> DVector<f64>,
{
    if order == 0 {
        return Err(Error::Parameter(
            "repeated integral order must be ≥ 1".into(),
        ));
    }
    Domain::finite(a, b)?;
    let leaf = |t: f64| -> Result<Vec<f64>> {
        let v = f(t);
        if v.len() != len {
            return Err(Error::Shape(format!(
                "integrand returned length {}, expected {len}",
                v.len()
            )));
        }
        Ok(v.as_slice().to_vec())
    };
    let start = match side {
        Side::Lower => b,
        Side::Upper => a,
    };
    let v = nested(&leaf, len, order + 1, start, side, a, b, opts)?;
    let scale = factorial(order as u64);
    Ok(DVector::from_iterator(
        len,
        v.into_iter().map(|x| x * scale),
    ))
}

/// `H_j(s)`: `H_0 = f`, `H_j(s) = ∫_a^s H_{j−1}` (lower) or `∫_s^b H_{j−1}` (upper).
#[allow(clippy::too_many_arguments)]
fn nested(
    f: &Flat<'_>,
    len: usize,
    level: usize,
    s: f64,
    side: Side,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<Vec<f64>> {
    if level == 0 {
        return f(s);
    }
    let (lo, hi) = match side {
        Side::Lower => (a, s),
        Side::Upper => (s, b),
    };
    if hi <= lo {
        return Ok(vec![0.0; len]);
    }
    let inner = |t: f64| nested(f, len, level - 1, t, side, a, b, opts);
    composite(&inner, len, lo, hi, (0.0, 0.0), opts)
}
