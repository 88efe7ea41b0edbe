//! Experiment configuration: one TOML document describes one experiment.
//!
//! ```toml
//! experiment = "bound"        # bound | sweep | converge | invariance | cauchy | fmt-probe | reduction
//! id = "jensen"               # optional, names the report file
//! seed = 0
//!
//! [kernel]                    # legendre | jacobi | laguerre | hermite | monomial | poly
//! kind = "legendre"
//! d = 1                       # number of kernel functions (degrees 0..d-1)
//!
//! [domain]                    # finite (a, b) | half_line | real_line
//! kind = "finite"
//! a = 0.0
//! b = 1.0
//!
//! [weight]                    # unit | jacobi (alpha, beta) | laguerre (alpha) | hermite
//! kind = "unit"
//!
//! [signal]                    # poly (coeffs) | monomial (degree) | exp (rate) | sin (freq, phase) | ramp (breakpoint)
//! kind = "poly"
//! coeffs = [[0.0, 1.0]]
//!
//! [cost]                      # identity (n) | matrix (rows)
//! kind = "identity"
//! n = 1
//! ```
//!
//! Optional sections: `[params]` (experiment parameters), `[tolerances]`
//! (named overrides) and `[output]` (`dir`, `format`, `timing`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Bound,
    Sweep,
    Converge,
    Invariance,
    Cauchy,
    FmtProbe,
    Reduction,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Bound => "bound",
            Experiment::Sweep => "sweep",
            Experiment::Converge => "converge",
            Experiment::Invariance => "invariance",
            Experiment::Cauchy => "cauchy",
            Experiment::FmtProbe => "fmt-probe",
            Experiment::Reduction => "reduction",
        }
    }

    /// Tolerance names understood by the experiment with their defaults.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            Experiment::Bound => &[
                ("quad", 1e-12),
                ("soundness", 1e-9),
                ("orthogonality", 1e-9),
                ("expected", 1e-12),
            ],
            Experiment::Sweep => &[
                ("quad", 1e-12),
                ("monotonicity", 1e-10),
                ("expected", 1e-12),
            ],
            Experiment::Converge => &[("quad", 1e-12), ("gap_ratio", 1e-3)],
            Experiment::Invariance => &[("quad", 1e-12), ("invariance", 1e-9)],
            Experiment::Cauchy => &[("quad", 1e-12), ("cauchy", 1e-8)],
            Experiment::FmtProbe => &[("quad", 1e-12), ("dominance", 1e-8), ("soundness", 1e-9)],
            Experiment::Reduction => &[("quad", 1e-12), ("reduction", 1e-9)],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Legendre,
    Jacobi,
    Laguerre,
    Hermite,
    Monomial,
    Poly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub kind: KernelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Rows of monomial coefficients for `kind = "poly"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Finite,
    HalfLine,
    RealLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKindSpec {
    Unit,
    Jacobi,
    Laguerre,
    Hermite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfig {
    pub kind: WeightKindSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    Poly,
    Monomial,
    Exp,
    Sin,
    Ramp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub kind: SignalKind,
    /// Rows of monomial coefficients, one row per component (`poly`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Vec<f64>>>,
    /// `τ^degree` (`monomial`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// `e^{rate·τ}` (`exp`, default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    /// `sin(freq·τ + phase)` (`sin`, defaults 1 and 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    /// `max(0, τ − breakpoint)` (`ramp`, default 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint: Option<f64>,
    /// Dimension for named signals; component `j` is `(j+1)` times the base signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Use the derivative of the described signal instead.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub derivative: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    Identity,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSpec {
    pub kind: CostKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideSpec {
    Lower,
    Upper,
    Both,
}

/// Experiment parameters; each experiment reads the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// First and last family size of a sweep (`sweep`, `converge`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<usize>,
    /// Repeated-integral order (`cauchy`: largest order, `reduction`: weight exponent).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<SideSpec>,
    /// Number of random transformations (`invariance`) or slack draws (`fmt-probe`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_condition: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_threshold: Option<f64>,
    /// Reference values checked with the `expected` tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_lower: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default)]
    pub format: Format,
    /// Record wall time per row; off by default so reports are reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub kernel: KernelSpec,
    pub domain: DomainSpec,
    pub weight: WeightConfig,
    pub signal: SignalSpec,
    pub cost: CostSpec,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Schema violations, each prefixed with the offending field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub violations: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

const REQUIRED: [&str; 6] = ["experiment", "kernel", "domain", "weight", "signal", "cost"];

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError {
        violations: vec![format!("document: {}", e.message())],
    })?;
    let missing: Vec<String> = REQUIRED
        .iter()
        .filter(|k| !table.contains_key(**k))
        .map(|k| format!("{k}: missing"))
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError {
            violations: missing,
        });
    }
    let mut violations = Vec::new();
    for (key, value) in &table {
        if let Err(e) = check_section(key, value) {
            violations.push(e);
        }
    }
    if !violations.is_empty() {
        return Err(ConfigError { violations });
    }
    let config: ExperimentConfig =
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError {
                violations: vec![format!("document: {}", e.message())],
            })?;
    validate(&config)?;
    Ok(config)
}

/// Deserializes each section on its own so errors carry the section name.
fn check_section(key: &str, value: &toml::Value) -> Result<(), String> {
    fn probe<T: serde::de::DeserializeOwned>(key: &str, value: &toml::Value) -> Result<(), String> {
        value
            .clone()
            .try_into::<T>()
            .map(|_| ())
            .map_err(|e| format!("{key}: {}", e.message()))
    }
    match key {
        "experiment" => probe::<Experiment>(key, value),
        "id" => probe::<String>(key, value),
        "seed" => probe::<u64>(key, value),
        "kernel" => probe::<KernelSpec>(key, value),
        "domain" => probe::<DomainSpec>(key, value),
        "weight" => probe::<WeightConfig>(key, value),
        "signal" => probe::<SignalSpec>(key, value),
        "cost" => probe::<CostSpec>(key, value),
        "params" => probe::<Params>(key, value),
        "tolerances" => probe::<BTreeMap<String, f64>>(key, value),
        "output" => probe::<OutputSpec>(key, value),
        other => Err(format!("{other}: unknown field")),
    }
}

fn rectangular(rows: &[Vec<f64>]) -> bool {
    !rows.is_empty() && !rows[0].is_empty() && rows.iter().all(|r| r.len() == rows[0].len())
}

/// Semantic checks that the schema alone cannot express.
pub fn validate(c: &ExperimentConfig) -> Result<(), ConfigError> {
    let mut v = Vec::new();
    let finite = |x: Option<f64>| x.is_some_and(f64::is_finite);
    if i64::try_from(c.seed).is_err() {
        v.push(format!(
            "seed: must be at most {} (got {})",
            i64::MAX,
            c.seed
        ));
    }

    match c.domain.kind {
        DomainKind::Finite => match (c.domain.a, c.domain.b) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b > a => {}
            (None, _) => v.push("domain.a: missing for a finite domain".into()),
            (_, None) => v.push("domain.b: missing for a finite domain".into()),
            (Some(a), Some(b)) => v.push(format!(
                "domain.b: must exceed domain.a (got a = {a}, b = {b})"
            )),
        },
        _ => {
            if c.domain.a.is_some() || c.domain.b.is_some() {
                v.push("domain.a: endpoints are only allowed for a finite domain".into());
            }
        }
    }

    let exponent = |name: &str, x: Option<f64>, v: &mut Vec<String>| {
        if let Some(x) = x {
            if !(x > -1.0) || !x.is_finite() {
                v.push(format!("{name}: must be > -1 (got {x})"));
            }
        }
    };
    exponent("weight.alpha", c.weight.alpha, &mut v);
    exponent("weight.beta", c.weight.beta, &mut v);
    exponent("kernel.alpha", c.kernel.alpha, &mut v);
    exponent("kernel.beta", c.kernel.beta, &mut v);

    match c.weight.kind {
        WeightKindSpec::Unit | WeightKindSpec::Jacobi if c.domain.kind != DomainKind::Finite => {
            v.push("weight.kind: unit and jacobi weights need a finite domain".into())
        }
        WeightKindSpec::Laguerre if c.domain.kind != DomainKind::HalfLine => {
            v.push("weight.kind: a laguerre weight needs domain.kind = \"half_line\"".into())
        }
        WeightKindSpec::Hermite if c.domain.kind != DomainKind::RealLine => {
            v.push("weight.kind: a hermite weight needs domain.kind = \"real_line\"".into())
        }
        WeightKindSpec::Unit | WeightKindSpec::Hermite
            if c.weight.alpha.is_some() || c.weight.beta.is_some() =>
        {
            v.push("weight.alpha: this weight takes no exponents".into())
        }
        WeightKindSpec::Laguerre if c.weight.beta.is_some() => {
            v.push("weight.beta: a laguerre weight takes only alpha".into())
        }
        _ => {}
    }

    match c.kernel.kind {
        KernelKind::Poly => match &c.kernel.coeffs {
            Some(rows) if !rows.is_empty() && rows.iter().all(|r| !r.is_empty()) => {
                if c.kernel.d.is_some_and(|d| d != rows.len()) {
                    v.push(format!(
                        "kernel.d: must equal the number of coefficient rows ({})",
                        rows.len()
                    ));
                }
            }
            _ => v.push("kernel.coeffs: a poly kernel needs nonempty coefficient rows".into()),
        },
        kind => {
            match c.kernel.d {
                None => v.push("kernel.d: missing".into()),
                Some(0) => v.push("kernel.d: must be ≥ 1".into()),
                Some(d) if d > crate::polyalg::MAX_DEGREE + 1 => v.push(format!(
                    "kernel.d: at most {} kernels are supported",
                    crate::polyalg::MAX_DEGREE + 1
                )),
                _ => {}
            }
            if c.kernel.coeffs.is_some() {
                v.push("kernel.coeffs: only allowed for kind = \"poly\"".into());
            }
            let need = match kind {
                KernelKind::Legendre | KernelKind::Jacobi => DomainKind::Finite,
                KernelKind::Laguerre => DomainKind::HalfLine,
                KernelKind::Hermite => DomainKind::RealLine,
                _ => c.domain.kind,
            };
            if need != c.domain.kind {
                v.push(format!(
                    "kernel.kind: this kernel family needs domain.kind = {need:?}"
                ));
            }
        }
    }

    let s = &c.signal;
    match s.kind {
        SignalKind::Poly => match &s.coeffs {
            Some(rows) if rectangular(rows) => {
                if rows.iter().flatten().any(|x| !x.is_finite()) {
                    v.push("signal.coeffs: entries must be finite".into());
                }
                if s.n.is_some_and(|n| n != rows.len()) {
                    v.push("signal.n: must equal the number of coefficient rows".into());
                }
            }
            _ => v.push(
                "signal.coeffs: a poly signal needs equal-length, nonempty coefficient rows".into(),
            ),
        },
        SignalKind::Monomial if s.degree.is_none() => v.push("signal.degree: missing".into()),
        SignalKind::Exp => {
            let rate = s.rate.unwrap_or(1.0);
            if c.domain.kind == DomainKind::HalfLine
                && c.weight.kind == WeightKindSpec::Laguerre
                && !(rate < 0.5)
            {
                v.push(format!(
                    "signal.rate: must be < 0.5 for integrability against e^(-τ) (got {rate})"
                ));
            }
        }
        _ => {}
    }
    if s.n == Some(0) {
        v.push("signal.n: must be ≥ 1".into());
    }
    for (name, x) in [
        ("signal.rate", s.rate),
        ("signal.freq", s.freq),
        ("signal.phase", s.phase),
        ("signal.breakpoint", s.breakpoint),
    ] {
        if x.is_some() && !finite(x) {
            v.push(format!("{name}: must be finite"));
        }
    }

    let n_signal = match s.kind {
        SignalKind::Poly => s.coeffs.as_ref().map_or(1, Vec::len),
        _ => s.n.unwrap_or(1),
    };
    match c.cost.kind {
        CostKind::Identity => match c.cost.n {
            Some(n) if n != n_signal => v.push(format!(
                "cost.n: must equal the signal dimension {n_signal}"
            )),
            None => v.push("cost.n: missing".into()),
            _ => {}
        },
        CostKind::Matrix => match &c.cost.rows {
            Some(rows) if rectangular(rows) && rows.len() == rows[0].len() => {
                if rows.len() != n_signal {
                    v.push(format!(
                        "cost.rows: must be {n_signal}×{n_signal} to match the signal"
                    ));
                } else {
                    let m = nalgebra::DMatrix::from_fn(rows.len(), rows.len(), |i, j| rows[i][j]);
                    if crate::bound::CostMatrix::new(m).is_err() {
                        v.push("cost.rows: matrix is not symmetric positive definite".into());
                    }
                }
            }
            _ => v.push("cost.rows: a matrix cost needs square rows".into()),
        },
    }

    let p = &c.params;
    if let (Some(lo), Some(hi)) = (p.d_min, p.d_max) {
        if lo == 0 || lo > hi {
            v.push(format!(
                "params.d_min: need 1 ≤ d_min ≤ d_max (got {lo}, {hi})"
            ));
        }
    }
    if p.p == Some(0) {
        v.push("params.p: must be ≥ 1".into());
    }
    if p.rho == Some(0) {
        v.push("params.rho: must be ≥ 1".into());
    }
    if p.epsilon.is_some_and(|e| !(e > 0.0)) {
        v.push("params.epsilon: must be positive".into());
    }
    if p.max_condition.is_some_and(|m| !(m >= 1.0)) {
        v.push("params.max_condition: must be ≥ 1".into());
    }
    match c.experiment {
        Experiment::Cauchy | Experiment::Reduction if c.domain.kind != DomainKind::Finite => v
            .push(format!(
                "domain.kind: experiment {} needs a finite domain",
                c.experiment
            )),
        _ => {}
    }

    let known = c.experiment.default_tolerances();
    for (k, val) in &c.tolerances {
        if !known.iter().any(|(name, _)| name == k) {
            let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
            v.push(format!(
                "tolerances.{k}: unknown for experiment {} (expected one of {})",
                c.experiment,
                names.join(", ")
            ));
        } else if !(*val > 0.0) || !val.is_finite() {
            v.push(format!("tolerances.{k}: must be a positive number"));
        }
    }

    if v.is_empty() {
        Ok(())
    } else {
        Err(ConfigError { violations: v })
    }
}

impl ExperimentConfig {
    /// Tolerance by name: the override if present, else the experiment default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            self.experiment
                .default_tolerances()
                .iter()
                .find(|(n, _)| *n == name)
                .map_or(f64::NAN, |(_, v)| *v)
        })
    }

    /// Fills every tolerance the experiment uses so the echo is self-describing.
    pub fn resolve(&mut self) {
        for (name, value) in self.experiment.default_tolerances() {
            self.tolerances.entry((*name).to_string()).or_insert(*value);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const JENSEN: &str = r#"
experiment = "bound"
[kernel]
kind = "legendre"
d = 1
[domain]
kind = "finite"
a = 0.0
b = 1.0
[weight]
kind = "unit"
[signal]
kind = "poly"
coeffs = [[0.0, 1.0]]
[cost]
kind = "identity"
n = 1
"#;

    #[test]
    fn empty_document() {
        let e = parse_config("").unwrap_err();
        assert_eq!(e.violations[0], "experiment: missing");
    }

    #[test]
    fn minimal_config_is_valid() {
        let c = parse_config(JENSEN).unwrap();
        assert_eq!(c.experiment, Experiment::Bound);
        assert_eq!(c.kernel.d, Some(1));
    }

    #[test]
    fn negative_alpha_is_rejected() {
        let text = JENSEN.replace(
            "[weight]\nkind = \"unit\"",
            "[weight]\nkind = \"jacobi\"\nalpha = -2.0\nbeta = 0.0",
        );
        let e = parse_config(&text).unwrap_err();
        assert!(
            e.violations
                .iter()
                .any(|v| v.starts_with("weight.alpha") && v.contains("> -1")),
            "{e}"
        );
    }

    #[test]
    fn unknown_experiment_and_fields() {
        let e = parse_config(&JENSEN.replace("\"bound\"", "\"nope\"")).unwrap_err();
        assert!(e.violations[0].starts_with("experiment:"), "{e}");
        let e = parse_config(&JENSEN.replace("d = 1", "d = 1\ncolor = 3")).unwrap_err();
        assert!(e.violations[0].starts_with("kernel:"), "{e}");
    }

    #[test]
    fn non_pd_cost() {
        let text = JENSEN.replace(
            "kind = \"identity\"\nn = 1",
            "kind = \"matrix\"\nrows = [[-1.0]]",
        );
        let e = parse_config(&text).unwrap_err();
        assert!(
            e.violations.iter().any(|v| v.starts_with("cost.rows")),
            "{e}"
        );
    }

    #[test]
    fn unknown_tolerance() {
        let e = parse_config(&format!("{JENSEN}\n[tolerances]\nbogus = 1.0\n")).unwrap_err();
        assert!(e.violations[0].starts_with("tolerances.bogus"), "{e}");
    }

    #[test]
    fn echo_round_trips() {
        let mut c = parse_config(JENSEN).unwrap();
        c.resolve();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(parse_config(&text).unwrap(), c);
    }
}
