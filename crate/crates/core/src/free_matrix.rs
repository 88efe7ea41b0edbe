//! Free-matrix lower bound with slack matrices `X`, `Y` and slack vector `z`:
//!
//! ```text
//! ∫ϖ xᵀUx ≥ 2ϑᵀX̂z − zᵀWz,   W = ∫ϖ (fᵀ ⊗ I_{ρn}) Y (f ⊗ I_{ρn}),
//! ```
//!
//! valid whenever `[[U, −X], [−Xᵀ, Y]] ≻ 0`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bound::{lower_bound, CostMatrix, Signal};
use crate::error::{Error, Result};
use crate::gram::gram_matrix;
use crate::polyalg::PolyFamily;

/// Relative eigenvalue threshold for the block feasibility test.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Slack variables: `d` blocks `X_i ∈ ℝ^{n×ρn}` and `Y ∈ S^{ρdn}`.
#[derive(Debug, Clone)]
pub struct FmtSlack {
    rho: usize,
    x_blocks: Vec<DMatrix<f64>>,
    y: DMatrix<f64>,
}

impl FmtSlack {
    pub fn new(rho: usize, x_blocks: Vec<DMatrix<f64>>, y: DMatrix<f64>) -> Result<Self> {
        if rho == 0 || x_blocks.is_empty() {
            return Err(Error::Shape(
                "slack needs ρ ≥ 1 and at least one X block".into(),
            ));
        }
        let n = x_blocks[0].nrows();
        if n == 0 || x_blocks.iter().any(|x| x.shape() != (n, rho * n)) {
            return Err(Error::Shape(format!(
                "every X block must be {n}×{}",
                rho * n
            )));
        }
        let size = rho * x_blocks.len() * n;
        if y.shape() != (size, size) {
            return Err(Error::Shape(format!(
                "Y must be {size}×{size}, got {:?}",
                y.shape()
            )));
        }
        if (&y - y.transpose()).abs().max() > 1e-12 * y.abs().max().max(1.0) {
            return Err(Error::Shape("Y must be symmetric".into()));
        }
        Ok(Self { rho, x_blocks, y })
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn d(&self) -> usize {
        self.x_blocks.len()
    }

    pub fn n(&self) -> usize {
        self.x_blocks[0].nrows()
    }

    pub fn x_blocks(&self) -> &[DMatrix<f64>] {
        &self.x_blocks
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    /// `X = [X_1 ⋯ X_d]`, `n × ρdn`.
    pub fn x_wide(&self) -> DMatrix<f64> {
        wide(&self.x_blocks)
    }

    /// `X̂ = col(X_1, …, X_d)`, `dn × ρn`.
    pub fn x_hat(&self) -> DMatrix<f64> {
        let (n, w) = (self.n(), self.rho * self.n());
        let mut out = DMatrix::zeros(n * self.d(), w);
        for (i, x) in self.x_blocks.iter().enumerate() {
            out.rows_mut(i * n, n).copy_from(x);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FmtBoundResult {
    pub lb: f64,
    pub w: DMatrix<f64>,
    pub z_used: DVector<f64>,
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Smallest eigenvalue of the block matrix.
    pub margin: f64,
}

/// `W = Σ_ij (F⁻¹)_ij Y_ij` over the `ρn × ρn` blocks of `Y`.
pub fn build_w(
    y: &DMatrix<f64>,
    family: &PolyFamily,
    rho: usize,
    n: usize,
) -> Result<DMatrix<f64>> {
    let gram = gram_matrix(family)?.gram;
    build_w_with_gram(y, &gram, rho, n)
}

pub fn build_w_with_gram(
    y: &DMatrix<f64>,
    gram: &DMatrix<f64>,
    rho: usize,
    n: usize,
) -> Result<DMatrix<f64>> {
    let d = gram.nrows();
    let w = rho * n;
    if y.shape() != (d * w, d * w) {
        return Err(Error::Shape(format!(
            "Y must be {0}×{0}, got {1:?}",
            d * w,
            y.shape()
        )));
    }
    let mut out = DMatrix::zeros(w, w);
    for i in 0..d {
        for j in 0..d {
            let g = gram[(i, j)];
            if g != 0.0 {
                out += y.view((i * w, j * w), (w, w)) * g;
            }
        }
    }
    Ok((&out + out.transpose()) * 0.5)
}

fn block_matrix(u: &CostMatrix, slack: &FmtSlack) -> Result<DMatrix<f64>> {
    let n = slack.n();
    if u.n() != n {
        return Err(Error::Shape(format!(
            "U is {0}×{0}, slack blocks have {n} rows",
            u.n()
        )));
    }
    let m = slack.y().nrows();
    let x = slack.x_wide();
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(u.matrix());
    out.view_mut((0, n), (n, m)).copy_from(&(-&x));
    out.view_mut((n, 0), (m, n)).copy_from(&(-x.transpose()));
    out.view_mut((n, n), (m, m)).copy_from(slack.y());
    Ok(out)
}

/// Feasible iff the smallest eigenvalue of `[[U, −X], [−Xᵀ, Y]]` exceeds
/// `1e−12 · max(1, spectral radius)`.
pub fn feasibility_check(u: &CostMatrix, slack: &FmtSlack) -> Result<Feasibility> {
    let eig = SymmetricEigen::new(block_matrix(u, slack)?).eigenvalues;
    let margin = eig.min();
    let radius = eig.amax();
    Ok(Feasibility {
        feasible: margin > FEASIBILITY_TOL * radius.max(1.0),
        margin,
    })
}

fn check_theta(theta: &DVector<f64>, x_hat: &DMatrix<f64>) -> Result<()> {
    if theta.len() != x_hat.nrows() {
        return Err(Error::Shape(format!(
            "ϑ has length {}, X̂ has {} rows",
            theta.len(),
            x_hat.nrows()
        )));
    }
    Ok(())
}

/// `2ϑᵀX̂z − zᵀWz`.
pub fn fmt_bound(
    theta: &DVector<f64>,
    slack: &FmtSlack,
    w: &DMatrix<f64>,
    z: &DVector<f64>,
    u: &CostMatrix,
) -> Result<FmtBoundResult> {
    let x_hat = slack.x_hat();
    check_theta(theta, &x_hat)?;
    let k = x_hat.ncols();
    if w.shape() != (k, k) || z.len() != k {
        return Err(Error::Shape(format!(
            "W must be {k}×{k} and z of length {k}"
        )));
    }
    let lb = 2.0 * theta.dot(&(&x_hat * z)) - z.dot(&(w * z));
    let feasible = feasibility_check(u, slack)?.feasible;
    Ok(FmtBoundResult {
        lb,
        w: w.clone(),
        z_used: z.clone(),
        feasible,
    })
}

/// `yᵀ(ΥᵀX̂ + X̂ᵀΥ − W)y`, valid when `Υy = ϑ`.
pub fn fmt_bound_affine(
    upsilon: &DMatrix<f64>,
    y: &DVector<f64>,
    slack: &FmtSlack,
    w: &DMatrix<f64>,
    theta: &DVector<f64>,
    u: &CostMatrix,
) -> Result<FmtBoundResult> {
    let x_hat = slack.x_hat();
    check_theta(theta, &x_hat)?;
    let k = x_hat.ncols();
    if upsilon.shape() != (theta.len(), y.len()) || y.len() != k || w.shape() != (k, k) {
        return Err(Error::Shape(format!(
            "need Υ {}×{k}, y of length {k}, W {k}×{k}",
            theta.len()
        )));
    }
    let residual = (upsilon * y - theta).norm();
    let tol = 1e-8 * theta.norm().max(1.0);
    if residual > tol {
        return Err(Error::Consistency { residual, tol });
    }
    let cross = upsilon.transpose() * &x_hat;
    let m = &cross + cross.transpose() - w;
    let lb = y.dot(&(m * y));
    let feasible = feasibility_check(u, slack)?.feasible;
    Ok(FmtBoundResult {
        lb,
        w: w.clone(),
        z_used: y.clone(),
        feasible,
    })
}

/// `z* = W⁻¹X̂ᵀϑ`, the maximizer of `2ϑᵀX̂z − zᵀWz`.
pub fn optimal_z(
    x_hat: &DMatrix<f64>,
    w: &DMatrix<f64>,
    theta: &DVector<f64>,
) -> Result<DVector<f64>> {
    check_theta(theta, x_hat)?;
    if w.shape() != (x_hat.ncols(), x_hat.ncols()) {
        return Err(Error::Shape(format!("W must be {0}×{0}", x_hat.ncols())));
    }
    let ch = Cholesky::new(w.clone()).ok_or_else(|| Error::NotPositiveDefinite("W".into()))?;
    Ok(ch.solve(&(x_hat.transpose() * theta)))
}

fn wide(x_blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let (n, w) = x_blocks[0].shape();
    let mut out = DMatrix::zeros(n, w * x_blocks.len());
    for (i, x) in x_blocks.iter().enumerate() {
        out.columns_mut(i * w, w).copy_from(x);
    }
    out
}

/// `Y = XᵀU⁻¹X + εI + SᵀS`, feasible by construction for `ε > 0`.
pub fn schur_slack(
    rho: usize,
    x_blocks: Vec<DMatrix<f64>>,
    s: &DMatrix<f64>,
    u: &CostMatrix,
    epsilon: f64,
) -> Result<FmtSlack> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter(format!(
            "ε must be positive, got {epsilon}"
        )));
    }
    if x_blocks.is_empty() || x_blocks[0].nrows() != u.n() {
        return Err(Error::Shape(
            "X blocks must be nonempty with as many rows as U".into(),
        ));
    }
    let x = wide(&x_blocks);
    if s.ncols() != x.ncols() {
        return Err(Error::Shape(format!("S must have {} columns", x.ncols())));
    }
    let ch =
        Cholesky::new(u.matrix().clone()).ok_or_else(|| Error::NotPositiveDefinite("U".into()))?;
    let y = x.transpose() * ch.solve(&x)
        + DMatrix::identity(x.ncols(), x.ncols()) * epsilon
        + s.transpose() * s;
    FmtSlack::new(rho, x_blocks, (&y + y.transpose()) * 0.5)
}

fn normal_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| {
        let v: f64 = StandardNormal.sample(rng);
        scale * v
    })
}

/// Random feasible slack: Gaussian `X` blocks and noise `S`, then the Schur
/// construction of `Y`.
pub fn sample_feasible_slack(
    rng: &mut ChaCha8Rng,
    d: usize,
    rho: usize,
    u: &CostMatrix,
    epsilon: f64,
) -> Result<FmtSlack> {
    let n = u.n();
    let x_blocks = (0..d)
        .map(|_| normal_matrix(rng, n, rho * n, 1.0))
        .collect();
    let s = normal_matrix(rng, rho * d * n, rho * d * n, 0.3);
    schur_slack(rho, x_blocks, &s, u, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    /// Slack width; `None` means `ρ = d`.
    pub rho: Option<usize>,
    /// Number of seeded restarts.
    pub budget: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub max_ascent_steps: usize,
    /// Ratio below which the result carries a budget warning.
    pub warn_below: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            rho: None,
            budget: 8,
            seed: 0,
            epsilon: 1e-6,
            max_ascent_steps: 200,
            warn_below: PROBE_WARNING_RATIO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProbeResult {
    pub best_fmt_lb: f64,
    pub projection_lb: f64,
    /// `best_fmt_lb / projection_lb`, 1 when both vanish.
    pub ratio: f64,
    /// Bound of every restart after ascent, in seed order.
    pub restarts: Vec<f64>,
    pub warning: Option<String>,
}

/// Default ratio below which the probe reports an exhausted budget.
pub const PROBE_WARNING_RATIO: f64 = 0.99;

struct Objective<'a> {
    theta: &'a DVector<f64>,
    gram: &'a DMatrix<f64>,
    u: &'a CostMatrix,
    s: DMatrix<f64>,
    rho: usize,
    d: usize,
    epsilon: f64,
}

impl Objective<'_> {
    fn blocks(&self, flat: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let n = self.u.n();
        let w = self.rho * n;
        (0..self.d)
            .map(|i| DMatrix::from_column_slice(n, w, &flat.as_slice()[i * n * w..(i + 1) * n * w]))
            .collect()
    }

    /// Bound at the optimal `z` for the slack generated from `flat`.
    fn eval(&self, flat: &DVector<f64>) -> Result<f64> {
        let slack = schur_slack(self.rho, self.blocks(flat), &self.s, self.u, self.epsilon)?;
        let w = build_w_with_gram(slack.y(), self.gram, self.rho, self.u.n())?;
        let x_hat = slack.x_hat();
        let z = optimal_z(&x_hat, &w, self.theta)?;
        Ok(self.theta.dot(&(&x_hat * z)))
    }
}

/// Local ascent of the free-matrix bound over `X` with central-difference
/// gradients and an adaptive step: each accepted step doubles the step
/// length, each rejected one halves it.
fn ascend(obj: &Objective<'_>, mut x: DVector<f64>, steps: usize) -> Result<f64> {
    let mut best = obj.eval(&x)?;
    let mut t = 0.1;
    for _ in 0..steps {
        let scale = x.norm().max(1.0);
        let h = 1e-6 * scale;
        let mut grad = DVector::zeros(x.len());
        for k in 0..x.len() {
            let mut xp = x.clone();
            xp[k] += h;
            let mut xm = x.clone();
            xm[k] -= h;
            grad[k] = (obj.eval(&xp)? - obj.eval(&xm)?) / (2.0 * h);
        }
        let gnorm = grad.norm();
        if !(gnorm > 0.0) || !gnorm.is_finite() {
            break;
        }
        let candidate = &x + &grad * (t * scale / gnorm);
        match obj.eval(&candidate) {
            Ok(v) if v > best => {
                x = candidate;
                best = v;
                t *= 2.0;
            }
            _ => {
                t *= 0.5;
                if t < 1e-12 {
                    break;
                }
            }
        }
    }
    Ok(best)
}

/// Searches feasible slack for the largest free-matrix bound and compares it
/// with the lower bound `ϑᵀ(F ⊗ U)ϑ` of the same instance.
pub fn equivalence_probe(
    family: &PolyFamily,
    x: &Signal,
    u: &CostMatrix,
    opts: &ProbeOptions,
) -> Result<ProbeResult> {
    let d = family.len();
    let rho = opts.rho.unwrap_or(d);
    if rho == 0 {
        return Err(Error::Parameter("ρ must be ≥ 1".into()));
    }
    let report = lower_bound(family, x, u)?;
    let gram = gram_matrix(family)?.gram;
    let n = u.n();
    let width = rho * d * n;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut restarts = Vec::with_capacity(opts.budget);
    for _ in 0..opts.budget {
        let start = normal_matrix(&mut rng, n * width, 1, 1.0)
            .column(0)
            .into_owned();
        let s = normal_matrix(&mut rng, width, width, 0.3);
        let obj = Objective {
            theta: &report.theta,
            gram: &gram,
            u,
            s,
            rho,
            d,
            epsilon: opts.epsilon,
        };
        restarts.push(ascend(&obj, start, opts.max_ascent_steps)?);
    }
    let best = restarts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let projection = report.lower;
    let ratio = if projection.abs() <= 1e-300 {
        if best.abs() <= 1e-300 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        best / projection
    };
    let warning = (ratio < opts.warn_below).then(|| {
        format!(
            "probe budget exhausted at ratio {ratio:.6} (below {})",
            opts.warn_below
        )
    });
    Ok(ProbeResult {
        best_fmt_lb: best,
        projection_lb: projection,
        ratio,
        restarts,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{upper_bound, Signal};
    use crate::polyalg::{legendre_family, Domain};
    use crate::quad::{integrate, IntegrandKind, QuadOptions};
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    fn one() -> CostMatrix {
        CostMatrix::identity(1).unwrap()
    }

    fn jensen() -> (PolyFamily, Signal) {
        let fam = legendre_family(0, 0.0, 1.0).unwrap();
        let x = Signal::scalar_poly(&[0.0, 1.0], Domain::finite(0.0, 1.0).unwrap()).unwrap();
        (fam, x)
    }

    #[test]
    fn w_examples() {
        let fam = legendre_family(2, 0.0, 1.0).unwrap();
        let (rho, n) = (2, 1);
        let size = rho * fam.len() * n;
        let w = build_w(&DMatrix::identity(size, size), &fam, rho, n).unwrap();
        let trace = 1.0 + 1.0 / 3.0 + 0.2;
        assert_relative_eq!(w, DMatrix::identity(2, 2) * trace, epsilon = 1e-14);
        assert_eq!(
            build_w(&DMatrix::zeros(size, size), &fam, rho, n).unwrap(),
            DMatrix::zeros(2, 2)
        );
        let y = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        assert_relative_eq!(
            build_w(&y, &legendre_family(0, 0.0, 1.0).unwrap(), 2, 1).unwrap(),
            y,
            epsilon = 1e-15
        );
    }

    #[test]
    fn w_matches_integral_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (d, rho, n) in [(1, 1, 1), (2, 3, 1), (3, 2, 2), (3, 3, 3)] {
            let fam = legendre_family(d - 1, 0.0, 1.0).unwrap();
            let size = rho * d * n;
            let r = normal_matrix(&mut rng, size, size, 1.0);
            let y = &r * r.transpose();
            let k = rho * n;
            let direct = integrate(
                |t| {
                    let f = fam.eval_unchecked(t);
                    let lift = f.kronecker(&DMatrix::<f64>::identity(k, k));
                    lift.transpose() * &y * lift
                },
                (k, k),
                fam.weight(),
                IntegrandKind::Polynomial {
                    degree: 2 * (d - 1),
                },
                &QuadOptions::default(),
            )
            .unwrap();
            let w = build_w(&y, &fam, rho, n).unwrap();
            assert!((w - &direct).abs().max() < 1e-10 * direct.abs().max().max(1.0));
        }
    }

    #[test]
    fn feasibility_examples() {
        let s = FmtSlack::new(1, vec![scalar(0.0)], scalar(1.0)).unwrap();
        let f = feasibility_check(&one(), &s).unwrap();
        assert!(f.feasible);
        assert_relative_eq!(f.margin, 1.0, epsilon = 1e-15);
        let s = FmtSlack::new(1, vec![scalar(1.0)], scalar(1.0)).unwrap();
        let f = feasibility_check(&one(), &s).unwrap();
        assert!(!f.feasible && f.margin.abs() < 1e-15);
        let s = FmtSlack::new(1, vec![scalar(3.0)], scalar(4.0)).unwrap();
        assert!(!feasibility_check(&one(), &s).unwrap().feasible);
    }

    #[test]
    fn bound_examples() {
        let s = FmtSlack::new(1, vec![scalar(0.5)], scalar(0.5)).unwrap();
        let theta = dvector![0.5];
        let w = scalar(0.5);
        assert_eq!(
            fmt_bound(&theta, &s, &w, &dvector![0.0], &one())
                .unwrap()
                .lb,
            0.0
        );
        let z = optimal_z(&s.x_hat(), &w, &theta).unwrap();
        assert_relative_eq!(z[0], 0.5, epsilon = 1e-15);
        let r = fmt_bound(&theta, &s, &w, &z, &one()).unwrap();
        assert_relative_eq!(r.lb, 0.125, epsilon = 1e-15);
        assert!(r.feasible);
    }

    #[test]
    fn optimal_z_beats_random_z() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = CostMatrix::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0])).unwrap();
        let fam = legendre_family(1, 0.0, 1.0).unwrap();
        let slack = sample_feasible_slack(&mut rng, 2, 2, &u, 1e-6).unwrap();
        let w = build_w(slack.y(), &fam, 2, 2).unwrap();
        let theta = normal_matrix(&mut rng, 4, 1, 1.0).column(0).into_owned();
        let z = optimal_z(&slack.x_hat(), &w, &theta).unwrap();
        let best = fmt_bound(&theta, &slack, &w, &z, &u).unwrap().lb;
        for _ in 0..100 {
            let zr = &z + normal_matrix(&mut rng, 4, 1, 0.5).column(0);
            assert!(fmt_bound(&theta, &slack, &w, &zr, &u).unwrap().lb <= best + 1e-10);
        }
        let lb = |v: &DVector<f64>| 2.0 * theta.dot(&(slack.x_hat() * v)) - v.dot(&(&w * v));
        for k in 0..4 {
            let mut zp = z.clone();
            zp[k] += 1e-5;
            let mut zm = z.clone();
            zm[k] -= 1e-5;
            assert!(((lb(&zp) - lb(&zm)) / 2e-5).abs() < 1e-9);
        }
    }

    #[test]
    fn affine_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = one();
        let slack = sample_feasible_slack(&mut rng, 2, 2, &u, 1e-6).unwrap();
        let fam = legendre_family(1, 0.0, 1.0).unwrap();
        let w = build_w(slack.y(), &fam, 2, 1).unwrap();
        let y = dvector![0.3, -0.7];
        let ident = DMatrix::identity(2, 2);
        let theta = &ident * &y;
        let a = fmt_bound_affine(&ident, &y, &slack, &w, &theta, &u).unwrap();
        let b = fmt_bound(&theta, &slack, &w, &y, &u).unwrap();
        assert_relative_eq!(a.lb, b.lb, epsilon = 1e-12);
        let zero = DVector::zeros(2);
        assert_eq!(
            fmt_bound_affine(&ident, &zero, &slack, &w, &zero, &u)
                .unwrap()
                .lb,
            0.0
        );
        let bad = fmt_bound_affine(&ident, &y, &slack, &w, &dvector![1.0, 1.0], &u);
        assert!(matches!(bad, Err(Error::Consistency { .. })));
    }

    #[test]
    fn random_slack_is_dominated() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let fam = legendre_family(2, 0.0, 1.0).unwrap();
        let dom = Domain::finite(0.0, 1.0).unwrap();
        let x = Signal::poly(
            DMatrix::from_row_slice(2, 4, &[1.0, -2.0, 0.5, 3.0, 0.0, 1.0, 1.0, -1.0]),
            dom,
        )
        .unwrap();
        let u = CostMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 0.5])).unwrap();
        let r = lower_bound(&fam, &x, &u).unwrap();
        let upper = upper_bound(&x, &u, fam.weight()).unwrap();
        for _ in 0..50 {
            let slack = sample_feasible_slack(&mut rng, 3, 2, &u, 1e-6).unwrap();
            let w = build_w(slack.y(), &fam, 2, 2).unwrap();
            let z = optimal_z(&slack.x_hat(), &w, &r.theta).unwrap();
            let res = fmt_bound(&r.theta, &slack, &w, &z, &u).unwrap();
            assert!(res.feasible);
            assert!(res.lb <= r.lower + 1e-8 && res.lb <= upper + 1e-9);
        }
    }

    #[test]
    fn jensen_probe_reaches_quarter() {
        let (fam, x) = jensen();
        let p = equivalence_probe(
            &fam,
            &x,
            &one(),
            &ProbeOptions {
                budget: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(p.projection_lb, 0.25, epsilon = 1e-15);
        assert!(p.ratio >= 1.0 - 1e-6 && p.ratio <= 1.0 + 1e-8, "{p:?}");
        assert!(p.warning.is_none());
    }

    #[test]
    fn probe_is_deterministic() {
        let fam = legendre_family(1, 0.0, 1.0).unwrap();
        let x = Signal::scalar_poly(&[0.2, 0.0, 1.0], Domain::finite(0.0, 1.0).unwrap()).unwrap();
        let opts = ProbeOptions {
            budget: 2,
            seed: 4,
            max_ascent_steps: 30,
            ..Default::default()
        };
        let a = equivalence_probe(&fam, &x, &one(), &opts).unwrap();
        let b = equivalence_probe(&fam, &x, &one(), &opts).unwrap();
        assert_eq!(a.restarts, b.restarts);
        assert!(a.ratio <= 1.0 + 1e-8);
    }
}
