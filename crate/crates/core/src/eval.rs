//! Result types shared by every evaluator.

use serde::{Deserialize, Serialize};

use crate::quadrature::QuadratureResult;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Series or finite closed-form expression.
    ClosedForm,
    /// Direct quadrature of the defining integral.
    Oracle,
    /// Closed-form representation in which one piece is evaluated numerically
    /// (Mellin-Barnes contour quadrature, Euler-integral representation).
    Hybrid,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Oracle => "oracle",
            Method::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub terms_used: usize,
    /// Magnitude of the first dropped term.
    pub truncation_estimate: f64,
    /// Parameter perturbation used to lift a degeneracy, 0 if none.
    pub degenerate_shift: f64,
}

impl SeriesDiagnostics {
    pub fn new(terms_used: usize, truncation_estimate: f64) -> Self {
        Self {
            terms_used: terms_used.max(1),
            truncation_estimate: truncation_estimate.abs(),
            degenerate_shift: 0.0,
        }
    }

    /// Combine diagnostics of sub-evaluations: terms add up, the other fields take the worst case.
    pub fn merge(self, other: SeriesDiagnostics) -> Self {
        Self {
            terms_used: self.terms_used + other.terms_used,
            truncation_estimate: self.truncation_estimate.max(other.truncation_estimate),
            degenerate_shift: self.degenerate_shift.max(other.degenerate_shift),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: Method,
    pub diagnostics: SeriesDiagnostics,
    /// Free-form flags explaining fallbacks or degraded accuracy.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EvalResult {
    pub fn closed_form(value: f64, error_estimate: f64, diagnostics: SeriesDiagnostics) -> Self {
        Self {
            value,
            error_estimate: error_estimate.abs(),
            method: Method::ClosedForm,
            diagnostics,
            notes: Vec::new(),
        }
    }

    /// Exact finite expression, no truncation.
    pub fn exact(value: f64) -> Self {
        Self::closed_form(value, f64::EPSILON * value.abs(), SeriesDiagnostics::new(1, 0.0))
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Scale value and error by a constant factor.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.error_estimate *= factor.abs();
        self
    }
}

/// A closed-form value together with its independent quadrature oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualResult {
    /// Closed-form evaluation. When no closed form could be produced this
    /// mirrors the oracle value with `method = Oracle` and a note saying why.
    pub closed_form: EvalResult,
    pub oracle: QuadratureResult,
    /// |closed_form − oracle| / max(|oracle|, tiny); `None` for oracle-only results.
    pub agreement: Option<f64>,
}

impl DualResult {
    pub fn new(closed_form: EvalResult, oracle: QuadratureResult) -> Self {
        let agreement = (closed_form.method != Method::Oracle)
            .then(|| relative_discrepancy(closed_form.value, oracle.value));
        Self { closed_form, oracle, agreement }
    }

    pub fn oracle_only(oracle: QuadratureResult, note: impl Into<String>) -> Self {
        let closed_form = EvalResult {
            value: oracle.value,
            error_estimate: oracle.error_estimate,
            method: Method::Oracle,
            diagnostics: SeriesDiagnostics::new(oracle.evaluations, 0.0),
            notes: vec![note.into()],
        };
        Self { closed_form, oracle, agreement: None }
    }

    /// Best available value.
    pub fn value(&self) -> f64 {
        self.closed_form.value
    }

    pub fn method(&self) -> Method {
        self.closed_form.method
    }
}

pub fn relative_discrepancy(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}
