use std::fmt;
use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::polyalg::{Domain, Polynomial};

pub type VectorFn = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

/// Default absolute tolerance for integrals of black-box signals.
pub const DEFAULT_SIGNAL_TOL: f64 = 1e-12;

#[derive(Clone)]
pub enum SignalForm {
    /// Row `j` holds the monomial coefficients of component `x_j`.
    Poly(DMatrix<f64>),
    Evaluator {
        f: VectorFn,
        derivative: Option<VectorFn>,
        decay_certificate: bool,
        tol: f64,
    },
}

/// Vector function `x: K → ℝⁿ`.
#[derive(Clone)]
pub struct Signal {
    n: usize,
    form: SignalForm,
    rows: Vec<Polynomial>,
    domain: Domain,
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match &self.form {
            SignalForm::Poly(c) => format!("poly {}x{}", c.nrows(), c.ncols()),
            SignalForm::Evaluator { .. } => "evaluator".to_string(),
        };
        f.debug_struct("Signal")
            .field("n", &self.n)
            .field("form", &form)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Signal {
    /// Polynomial signal from an `n × (deg+1)` coefficient matrix.
    pub fn poly(coeffs: DMatrix<f64>, domain: Domain) -> Result<Self> {
        if coeffs.nrows() == 0 || coeffs.ncols() == 0 {
            return Err(Error::Shape(
                "polynomial signal needs at least one row and one coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter(
                "signal coefficients must be finite".into(),
            ));
        }
        let rows = coeffs
            .row_iter()
            .map(|r| Polynomial::new(r.iter().copied().collect()))
            .collect();
        Ok(Self {
            n: coeffs.nrows(),
            form: SignalForm::Poly(coeffs),
            rows,
            domain,
        })
    }

    /// Scalar polynomial signal.
    pub fn scalar_poly(coeffs: &[f64], domain: Domain) -> Result<Self> {
        Self::poly(DMatrix::from_row_slice(1, coeffs.len(), coeffs), domain)
    }

    /// `x = (fᵀ ⊗ Iₙ) ω` for polynomial kernels `f` and stacked coefficients `ω`.
    pub fn from_span(
        polys: &[Polynomial],
        omega: &DVector<f64>,
        n: usize,
        domain: Domain,
    ) -> Result<Self> {
        if omega.len() != polys.len() * n {
            return Err(Error::Shape(format!(
                "ω has length {}, expected {}",
                omega.len(),
                polys.len() * n
            )));
        }
        let ncols = polys.iter().map(|p| p.degree() + 1).max().unwrap_or(1);
        let mut coeffs = DMatrix::zeros(n, ncols);
        for (i, p) in polys.iter().enumerate() {
            for (k, c) in p.coeffs().iter().enumerate() {
                for j in 0..n {
                    coeffs[(j, k)] += omega[i * n + j] * c;
                }
            }
        }
        Self::poly(coeffs, domain)
    }

    /// Black-box signal on a finite domain.
    pub fn evaluator<F>(n: usize, domain: Domain, f: F) -> Result<Self>
    where
        F: Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    {
        Self::evaluator_with_certificate(n, domain, false, f)
    }

    /// Black-box signal; on an unbounded domain the caller must certify that
    /// `ϖ xᵀx` decays fast enough to be integrable.
    pub fn evaluator_with_certificate<F>(
        n: usize,
        domain: Domain,
        decay_certificate: bool,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    {
        if n == 0 {
            return Err(Error::Shape("signal dimension must be ≥ 1".into()));
        }
        if !domain.is_finite() && !decay_certificate {
            return Err(Error::MissingCertificate);
        }
        let form = SignalForm::Evaluator {
            f: Arc::new(f),
            derivative: None,
            decay_certificate,
            tol: DEFAULT_SIGNAL_TOL,
        };
        Ok(Self {
            n,
            form,
            rows: Vec::new(),
            domain,
        })
    }

    pub fn with_derivative<F>(mut self, df: F) -> Self
    where
        F: Fn(f64) -> DVector<f64> + Send + Sync + 'static,
    {
        if let SignalForm::Evaluator { derivative, .. } = &mut self.form {
            *derivative = Some(Arc::new(df));
        }
        self
    }

    /// Integration tolerance for a black-box signal; ignored for polynomials.
    pub fn with_tol(mut self, new_tol: f64) -> Self {
        if let SignalForm::Evaluator { tol, .. } = &mut self.form {
            *tol = new_tol;
        }
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn form(&self) -> &SignalForm {
        &self.form
    }

    /// Polynomial degree, `None` for black-box signals.
    pub fn degree(&self) -> Option<usize> {
        match self.form {
            SignalForm::Poly(_) => {
                Some(self.rows.iter().map(Polynomial::degree).max().unwrap_or(0))
            }
            SignalForm::Evaluator { .. } => None,
        }
    }

    pub fn tol(&self) -> f64 {
        match self.form {
            SignalForm::Poly(_) => DEFAULT_SIGNAL_TOL,
            SignalForm::Evaluator { tol, .. } => tol,
        }
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        match &self.form {
            SignalForm::Poly(_) => {
                DVector::from_iterator(self.n, self.rows.iter().map(|p| p.eval(t)))
            }
            SignalForm::Evaluator { f, .. } => f(t),
        }
    }

    /// `ẋ(τ)`, exact for polynomials and supplied by the caller otherwise.
    pub fn derivative(&self, t: f64) -> Option<DVector<f64>> {
        match &self.form {
            SignalForm::Poly(_) => Some(DVector::from_iterator(
                self.n,
                self.rows.iter().map(|p| p.derivative().eval(t)),
            )),
            SignalForm::Evaluator { derivative, .. } => derivative.as_ref().map(|d| d(t)),
        }
    }
}

/// Symmetric positive definite cost matrix `U`.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    u: DMatrix<f64>,
}

impl CostMatrix {
    pub fn new(u: DMatrix<f64>) -> Result<Self> {
        if !u.is_square() || u.is_empty() {
            return Err(Error::Shape(format!(
                "cost matrix must be square and nonempty, got {:?}",
                u.shape()
            )));
        }
        let scale = u.abs().max().max(f64::MIN_POSITIVE);
        if (&u - u.transpose()).abs().max() > 1e-12 * scale {
            return Err(Error::NotPositiveDefinite(
                "cost matrix is not symmetric".into(),
            ));
        }
        let u = (&u + u.transpose()) * 0.5;
        if Cholesky::new(u.clone()).is_none() {
            return Err(Error::NotPositiveDefinite(
                "cost matrix fails Cholesky".into(),
            ));
        }
        Ok(Self { u })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Parameter(format!(
                "cost scale must be positive, got {c}"
            )));
        }
        Ok(Self { u: &self.u * c })
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// `vᵀ U v`.
    pub fn quad_form(&self, v: &DVector<f64>) -> f64 {
        v.dot(&(&self.u * v))
    }
}
