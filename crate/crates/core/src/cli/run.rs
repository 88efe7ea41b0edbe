use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::config::{
    CostKind, DomainKind, Experiment, ExperimentConfig, KernelKind, SideSpec, SignalKind,
    WeightKindSpec,
};
use crate::bound::{
    cauchy_identity_check, gap_ratio, hierarchy_sweep, lower_bound, transformed_bound, upper_bound,
    weighted_moment_reduction, CostMatrix, Signal,
};
use crate::error::{Error, Result};
use crate::free_matrix::{
    build_w_with_gram, equivalence_probe, fmt_bound, optimal_z, sample_feasible_slack, ProbeOptions,
};
use crate::gram::gram_matrix;
use crate::polyalg::{
    classical_family, jacobi_family, legendre_family, monomial_family, ClassicalKind, Domain,
    PolyFamily, Polynomial,
};
use crate::quad::{Side, WeightSpec};

/// One checked quantity of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub id: String,
    pub params: String,
    pub upper: Option<f64>,
    pub lower: Option<f64>,
    pub gap: Option<f64>,
    /// Distance to the pass threshold; negative exactly when the row fails.
    pub margin: Option<f64>,
    pub metric: String,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub warning: Option<String>,
    pub wall_time: Option<f64>,
}

/// All rows of one experiment together with the resolved config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: Experiment,
    pub id: String,
    pub seed: u64,
    pub pass: bool,
    pub rows: Vec<ReportRow>,
    pub config: ExperimentConfig,
}

struct RowBuilder<'a> {
    experiment: &'a str,
    id: &'a str,
}

impl RowBuilder<'_> {
    fn base(&self, params: String, metric: &str) -> ReportRow {
        ReportRow {
            experiment: self.experiment.to_string(),
            id: self.id.to_string(),
            params,
            upper: None,
            lower: None,
            gap: None,
            margin: None,
            metric: metric.to_string(),
            value: None,
            tolerance: None,
            pass: true,
            warning: None,
            wall_time: None,
        }
    }

    /// Row passing iff `value ≤ limit`; `tolerance` is what the config supplied.
    fn at_most(
        &self,
        params: String,
        metric: &str,
        value: f64,
        limit: f64,
        tolerance: f64,
    ) -> ReportRow {
        let mut row = self.base(params, metric);
        row.value = Some(value);
        row.tolerance = Some(tolerance);
        row.margin = Some(limit - value);
        row.pass = value <= limit;
        row
    }

    fn info(&self, params: String, metric: &str, value: f64) -> ReportRow {
        let mut row = self.base(params, metric);
        row.value = Some(value);
        row
    }

    fn error(&self, params: String, e: &Error) -> ReportRow {
        let mut row = self.base(params, "error");
        row.pass = false;
        row.warning = Some(e.to_string());
        row
    }
}

fn with_bounds(mut row: ReportRow, upper: f64, lower: f64) -> ReportRow {
    row.upper = Some(upper);
    row.lower = Some(lower);
    row.gap = Some(upper - lower);
    row
}

/// Resolved engine inputs of a config.
pub struct Instance {
    pub domain: Domain,
    pub weight: WeightSpec,
    pub signal: Signal,
    pub cost: CostMatrix,
}

pub fn build_domain(c: &ExperimentConfig) -> Result<Domain> {
    match c.domain.kind {
        DomainKind::Finite => Domain::finite(
            c.domain.a.unwrap_or(f64::NAN),
            c.domain.b.unwrap_or(f64::NAN),
        ),
        DomainKind::HalfLine => Ok(Domain::HalfLine),
        DomainKind::RealLine => Ok(Domain::RealLine),
    }
}

pub fn build_weight(c: &ExperimentConfig, domain: Domain) -> Result<WeightSpec> {
    let alpha = c.weight.alpha.unwrap_or(0.0);
    let beta = c.weight.beta.unwrap_or(0.0);
    match c.weight.kind {
        WeightKindSpec::Unit => WeightSpec::unit(domain),
        WeightKindSpec::Jacobi => {
            let (a, b) = domain.bounds().ok_or_else(|| {
                Error::DomainMismatch("jacobi weight on an infinite domain".into())
            })?;
            WeightSpec::jacobi(alpha, beta, a, b)
        }
        WeightKindSpec::Laguerre => WeightSpec::laguerre(alpha),
        WeightKindSpec::Hermite => Ok(WeightSpec::hermite()),
    }
}

/// Kernel family with `count` functions against the configured weight.
pub fn build_family(
    c: &ExperimentConfig,
    count: usize,
    domain: Domain,
    weight: &WeightSpec,
) -> Result<PolyFamily> {
    if count == 0 {
        return Err(Error::Parameter(
            "a kernel family needs at least one function".into(),
        ));
    }
    let dmax = count - 1;
    let alpha = c.kernel.alpha.unwrap_or(0.0);
    let beta = c.kernel.beta.unwrap_or(0.0);
    let bounds = || {
        domain
            .bounds()
            .ok_or_else(|| Error::DomainMismatch("kernel family needs a finite domain".into()))
    };
    let base = match c.kernel.kind {
        KernelKind::Legendre => {
            let (a, b) = bounds()?;
            legendre_family(dmax, a, b)?
        }
        KernelKind::Jacobi => {
            let (a, b) = bounds()?;
            jacobi_family(dmax, alpha, beta, a, b)?
        }
        KernelKind::Laguerre => classical_family(ClassicalKind::Laguerre { alpha }, dmax)?,
        KernelKind::Hermite => classical_family(ClassicalKind::Hermite, dmax)?,
        KernelKind::Monomial => monomial_family(dmax, weight.clone())?,
        KernelKind::Poly => {
            let rows = c.kernel.coeffs.clone().unwrap_or_default();
            let polys: Vec<Polynomial> =
                rows.into_iter().take(count).map(Polynomial::new).collect();
            PolyFamily::new(polys, weight.clone())?
        }
    };
    base.with_weight(weight.clone())
}

fn kernel_count(c: &ExperimentConfig) -> usize {
    match c.kernel.kind {
        KernelKind::Poly => c.kernel.coeffs.as_ref().map_or(0, Vec::len),
        _ => c.kernel.d.unwrap_or(1),
    }
}

pub fn build_signal(c: &ExperimentConfig, domain: Domain) -> Result<Signal> {
    let s = &c.signal;
    let tol = c.tolerance("quad");
    let n = s.n.unwrap_or(1);
    let poly_rows = |rows: Vec<Polynomial>| -> Result<Signal> {
        let rows: Vec<Polynomial> = if s.derivative {
            rows.iter().map(Polynomial::derivative).collect()
        } else {
            rows
        };
        let ncols = rows.iter().map(|p| p.degree() + 1).max().unwrap_or(1);
        let m = DMatrix::from_fn(rows.len(), ncols, |i, j| {
            rows[i].coeffs().get(j).copied().unwrap_or(0.0)
        });
        Signal::poly(m, domain)
    };
    let scaled = move |v: f64| DVector::from_fn(n, |j, _| (j + 1) as f64 * v);
    let deriv = s.derivative;
    match s.kind {
        SignalKind::Poly => poly_rows(
            s.coeffs
                .clone()
                .unwrap_or_default()
                .into_iter()
                .map(Polynomial::new)
                .collect(),
        ),
        SignalKind::Monomial => {
            let k = s.degree.unwrap_or(0);
            poly_rows(
                (0..n)
                    .map(|j| Polynomial::monomial(k).scale((j + 1) as f64))
                    .collect(),
            )
        }
        SignalKind::Exp => {
            let r = s.rate.unwrap_or(1.0);
            let f = move |t: f64| {
                scaled(if deriv {
                    r * (r * t).exp()
                } else {
                    (r * t).exp()
                })
            };
            Ok(Signal::evaluator_with_certificate(n, domain, true, f)?.with_tol(tol))
        }
        SignalKind::Sin => {
            let (w, ph) = (s.freq.unwrap_or(1.0), s.phase.unwrap_or(0.0));
            let f = move |t: f64| {
                scaled(if deriv {
                    w * (w * t + ph).cos()
                } else {
                    (w * t + ph).sin()
                })
            };
            Ok(Signal::evaluator_with_certificate(n, domain, true, f)?.with_tol(tol))
        }
        SignalKind::Ramp => {
            let c0 = s.breakpoint.unwrap_or(0.0);
            let f = move |t: f64| {
                let v = if deriv {
                    f64::from(u8::from(t > c0))
                } else {
                    (t - c0).max(0.0)
                };
                scaled(v)
            };
            Ok(Signal::evaluator_with_certificate(n, domain, true, f)?.with_tol(tol))
        }
    }
}

pub fn build_cost(c: &ExperimentConfig) -> Result<CostMatrix> {
    match c.cost.kind {
        CostKind::Identity => CostMatrix::identity(c.cost.n.unwrap_or(1)),
        CostKind::Matrix => {
            let rows = c.cost.rows.clone().unwrap_or_default();
            let k = rows.len();
            CostMatrix::new(DMatrix::from_fn(k, k, |i, j| {
                rows[i].get(j).copied().unwrap_or(f64::NAN)
            }))
        }
    }
}

pub fn build_instance(c: &ExperimentConfig) -> Result<Instance> {
    let domain = build_domain(c)?;
    let weight = build_weight(c, domain)?;
    let signal = build_signal(c, domain)?;
    let cost = build_cost(c)?;
    Ok(Instance {
        domain,
        weight,
        signal,
        cost,
    })
}

/// Random `d × d` matrix with condition number `cond`: `Q₁ diag(σ) Q₂` with
/// `σ` log-spaced from 1 down to `1/cond` and random orthogonal factors.
pub fn random_transform(rng: &mut ChaCha8Rng, d: usize, cond: f64) -> DMatrix<f64> {
    let gauss = |r: &mut ChaCha8Rng| DMatrix::<f64>::from_fn(d, d, |_, _| StandardNormal.sample(r));
    let q1 = gauss(rng).qr().q();
    let q2 = gauss(rng).qr().q();
    let sigma = DVector::from_fn(d, |i, _| {
        if d == 1 {
            1.0
        } else {
            cond.powf(-(i as f64) / (d - 1) as f64)
        }
    });
    let scale: f64 = rng.random_range(0.5..2.0);
    q1 * DMatrix::from_diagonal(&sigma) * q2 * scale
}

/// Runs the experiment; engine failures become failed rows.
pub fn run(config: &ExperimentConfig, fallback_id: &str) -> Report {
    let mut config = config.clone();
    config.resolve();
    let id = config.id.clone().unwrap_or_else(|| fallback_id.to_string());
    let experiment = config.experiment;
    let rb = RowBuilder {
        experiment: experiment.name(),
        id: &id,
    };
    let start = Instant::now();
    let mut rows = match build_instance(&config) {
        Ok(inst) => match experiment {
            Experiment::Bound => run_bound(&config, &inst, &rb),
            Experiment::Sweep => run_sweep(&config, &inst, &rb, false),
            Experiment::Converge => run_sweep(&config, &inst, &rb, true),
            Experiment::Invariance => run_invariance(&config, &inst, &rb),
            Experiment::Cauchy => run_cauchy(&config, &inst, &rb),
            Experiment::FmtProbe => run_fmt_probe(&config, &inst, &rb),
            Experiment::Reduction => run_reduction(&config, &inst, &rb),
        },
        Err(e) => vec![rb.error(String::new(), &e)],
    };
    if config.output.timing {
        let elapsed = start.elapsed().as_secs_f64();
        rows.iter_mut().for_each(|r| r.wall_time = Some(elapsed));
    }
    let pass = rows.iter().all(|r| r.pass);
    Report {
        experiment,
        id,
        seed: config.seed,
        pass,
        rows,
        config,
    }
}

fn run_bound(c: &ExperimentConfig, inst: &Instance, rb: &RowBuilder<'_>) -> Vec<ReportRow> {
    let d = kernel_count(c);
    let params = format!("d={d}");
    let report = build_family(c, d, inst.domain, &inst.weight)
        .and_then(|f| lower_bound(&f, &inst.signal, &inst.cost));
    let r = match report {
        Ok(r) => r,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let tol = c.tolerance("soundness");
    let mut sound = rb.at_most(
        params.clone(),
        "soundness",
        r.lower - r.upper,
        tol * r.upper.max(1.0),
        tol,
    );
    sound.warning = r.warning.clone();
    let mut rows = vec![with_bounds(sound, r.upper, r.lower)];
    let tol = c.tolerance("orthogonality");
    let defect = r.orthogonality_defects.amax();
    rows.push(rb.at_most(params.clone(), "orthogonality", defect, tol, tol));
    let tol = c.tolerance("expected");
    if let Some(e) = c.params.expected_upper {
        rows.push(rb.at_most(
            params.clone(),
            "expected_upper",
            (r.upper - e).abs(),
            tol,
            tol,
        ));
    }
    if let Some(e) = c.params.expected_lower.as_ref().and_then(|v| v.first()) {
        rows.push(rb.at_most(params, "expected_lower", (r.lower - e).abs(), tol, tol));
    }
    rows
}

fn run_sweep(
    c: &ExperimentConfig,
    inst: &Instance,
    rb: &RowBuilder<'_>,
    converge: bool,
) -> Vec<ReportRow> {
    let d_max = c.params.d_max.unwrap_or_else(|| kernel_count(c));
    let d_min = c
        .params
        .d_min
        .unwrap_or(if converge { 2 } else { 1 })
        .min(d_max);
    let params = format!("d={d_min}..{d_max}");
    let full = match build_family(c, d_max, inst.domain, &inst.weight) {
        Ok(f) => f,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let reports = match hierarchy_sweep(|d| full.prefix(d), &inst.signal, &inst.cost, d_min..=d_max)
    {
        Ok(r) => r,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let mut rows = Vec::new();
    let tol_mono = c.tolerance("monotonicity");
    let tol_exp = c.tolerance("expected");
    let expected = c.params.expected_lower.clone().unwrap_or_default();
    for (k, r) in reports.iter().enumerate() {
        let d = d_min + k;
        let params = format!("d={d}");
        let mut row = if converge {
            rb.info(params.clone(), "gap", r.gap)
        } else {
            let prev = if k == 0 {
                r.lower
            } else {
                reports[k - 1].lower
            };
            rb.at_most(
                params.clone(),
                "monotonicity",
                prev - r.lower,
                tol_mono * prev.abs().max(1.0),
                tol_mono,
            )
        };
        row.warning = r.warning.clone();
        rows.push(with_bounds(row, r.upper, r.lower));
        if !converge {
            if let Some(e) = expected.get(k) {
                rows.push(with_bounds(
                    rb.at_most(
                        params,
                        "expected_lower",
                        (r.lower - e).abs(),
                        tol_exp,
                        tol_exp,
                    ),
                    r.upper,
                    r.lower,
                ));
            }
        }
    }
    if converge {
        let tol = c.tolerance("gap_ratio");
        let ratio = gap_ratio(&reports).unwrap_or(f64::NAN);
        let mut row = rb.at_most(format!("d={d_max}/d={d_min}"), "gap_ratio", ratio, tol, tol);
        // strict inequality: the ratio must fall below the tolerance
        row.pass = ratio < tol;
        rows.push(row);
    }
    rows
}

fn run_invariance(c: &ExperimentConfig, inst: &Instance, rb: &RowBuilder<'_>) -> Vec<ReportRow> {
    let d = kernel_count(c);
    let family = match build_family(c, d, inst.domain, &inst.weight) {
        Ok(f) => f,
        Err(e) => return vec![rb.error(format!("d={d}"), &e)],
    };
    let count = c.params.count.unwrap_or(20);
    let max_cond = c.params.max_condition.unwrap_or(1e6);
    let tol = c.tolerance("invariance");
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    (0..count)
        .map(|k| {
            let cond = (rng.random::<f64>() * max_cond.ln()).exp();
            let g = random_transform(&mut rng, d, cond);
            let params = format!("G#{k}");
            match transformed_bound(&family, &g, &inst.signal, &inst.cost) {
                Ok(t) => {
                    let diff = (t.lb_transformed - t.lb_original).abs();
                    let mut row = rb.at_most(
                        format!("{params},cond={:.3e}", t.condition),
                        "invariance",
                        diff,
                        tol * t.lb_original.abs(),
                        tol,
                    );
                    row.lower = Some(t.lb_original);
                    row
                }
                Err(e) => rb.error(params, &e),
            }
        })
        .collect()
}

fn run_cauchy(c: &ExperimentConfig, inst: &Instance, rb: &RowBuilder<'_>) -> Vec<ReportRow> {
    let p_max = c.params.p.unwrap_or(3);
    let sides: &[Side] = match c.params.side.unwrap_or(SideSpec::Both) {
        SideSpec::Lower => &[Side::Lower],
        SideSpec::Upper => &[Side::Upper],
        SideSpec::Both => &[Side::Lower, Side::Upper],
    };
    let tol = c.tolerance("cauchy");
    let mut rows = Vec::new();
    for p in 1..=p_max {
        for &side in sides {
            let params = format!(
                "p={p},side={}",
                if side == Side::Lower {
                    "lower"
                } else {
                    "upper"
                }
            );
            rows.push(match cauchy_identity_check(&inst.signal, p, side) {
                Ok(r) => rb.at_most(params, "cauchy", r.discrepancy, tol, tol),
                Err(e) => rb.error(params, &e),
            });
        }
    }
    rows
}

fn run_fmt_probe(c: &ExperimentConfig, inst: &Instance, rb: &RowBuilder<'_>) -> Vec<ReportRow> {
    let d = kernel_count(c);
    let p = &c.params;
    let opts = ProbeOptions {
        rho: p.rho,
        budget: p.budget.unwrap_or(8),
        seed: c.seed,
        epsilon: p.epsilon.unwrap_or(1e-6),
        max_ascent_steps: p.steps.unwrap_or(200),
        warn_below: p.ratio_threshold.unwrap_or(0.99),
    };
    let rho = opts.rho.unwrap_or(d);
    let params = format!("d={d},rho={rho},budget={}", opts.budget);
    let family = match build_family(c, d, inst.domain, &inst.weight) {
        Ok(f) => f,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let upper = match upper_bound(&inst.signal, &inst.cost, &inst.weight) {
        Ok(u) => u,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let probe = match equivalence_probe(&family, &inst.signal, &inst.cost, &opts) {
        Ok(r) => r,
        Err(e) => return vec![rb.error(params, &e)],
    };
    let tol_dom = c.tolerance("dominance");
    let mut row = rb.at_most(
        params.clone(),
        "dominance_ratio",
        probe.ratio,
        1.0 + tol_dom,
        tol_dom,
    );
    row.upper = Some(upper);
    row.lower = Some(probe.projection_lb);
    row.gap = Some(probe.projection_lb - probe.best_fmt_lb);
    row.warning = probe.warning.clone();
    let mut rows = vec![row];

    let draws = p.count.unwrap_or(0);
    if draws > 0 {
        let result = (|| -> Result<(f64, f64)> {
            let gram = gram_matrix(&family)?.gram;
            let report = lower_bound(&family, &inst.signal, &inst.cost)?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 0x5eed);
            let (mut worst_dom, mut worst_sound) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for _ in 0..draws {
                let slack = sample_feasible_slack(&mut rng, d, rho, &inst.cost, opts.epsilon)?;
                let w = build_w_with_gram(slack.y(), &gram, rho, inst.cost.n())?;
                let z = optimal_z(&slack.x_hat(), &w, &report.theta)?;
                let lb = fmt_bound(&report.theta, &slack, &w, &z, &inst.cost)?.lb;
                worst_dom = worst_dom.max(lb - report.lower);
                worst_sound = worst_sound.max(lb - upper);
            }
            Ok((worst_dom, worst_sound))
        })();
        let params = format!("{params},draws={draws}");
        match result {
            Ok((dom, sound)) => {
                rows.push(rb.at_most(params.clone(), "draw_dominance", dom, tol_dom, tol_dom));
                let tol = c.tolerance("soundness");
                rows.push(rb.at_most(params, "draw_soundness", sound, tol * upper.max(1.0), tol));
            }
            Err(e) => rows.push(rb.error(params, &e)),
        }
    }
    rows
}

fn run_reduction(c: &ExperimentConfig, inst: &Instance, rb: &RowBuilder<'_>) -> Vec<ReportRow> {
    let p = c.params.p.unwrap_or(1);
    let degree = kernel_count(c).saturating_sub(1);
    let params = format!("p={p},degree={degree}");
    let (a, b) = match inst.domain.bounds() {
        Some(ab) => ab,
        None => {
            return vec![rb.error(
                params,
                &Error::DomainMismatch("reduction needs a finite domain".into()),
            )]
        }
    };
    let row = match weighted_moment_reduction(p, degree, a, b, &inst.signal, &inst.cost) {
        Ok(r) => {
            let tol = c.tolerance("reduction");
            let mut row = rb.at_most(
                params,
                "reduction",
                r.discrepancy,
                tol * r.lb_jacobi.abs(),
                tol,
            );
            row.lower = Some(r.lb_jacobi);
            row
        }
        Err(e) => rb.error(params, &e),
    };
    vec![row]
}
