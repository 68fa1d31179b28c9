//! The psi time-warp family.
//!
//! A psi function is a strictly increasing, continuously differentiable
//! map of time; the solver works on powers of psi(t) - psi(a). Identity
//! and natural logarithm are built in and selectable by name; arbitrary
//! warps can be supplied as closures.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Identifies a warp for compatibility checks and display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsiKind {
    Identity,
    Logarithm,
    Custom(String),
}

impl fmt::Display for PsiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiKind::Identity => write!(f, "identity"),
            PsiKind::Logarithm => write!(f, "log"),
            PsiKind::Custom(label) => write!(f, "custom:{label}"),
        }
    }
}

/// A time warp psi together with its derivative and the lower edge of its
/// domain. Two warps compare equal when their kinds match; the built-in
/// constructors always produce identical closures for a given kind.
#[derive(Clone)]
pub struct PsiFunction {
    kind: PsiKind,
    eval: ScalarFn,
    deriv: ScalarFn,
    domain_min: f64,
}

impl PsiFunction {
    /// psi(t) = t on the whole real line.
    pub fn identity() -> Self {
        PsiFunction {
            kind: PsiKind::Identity,
            eval: Arc::new(|t| t),
            deriv: Arc::new(|_| 1.0),
            domain_min: f64::NEG_INFINITY,
        }
    }

    /// psi(t) = ln t on t > 0.
    pub fn logarithm() -> Self {
        PsiFunction {
            kind: PsiKind::Logarithm,
            eval: Arc::new(f64::ln),
            deriv: Arc::new(|t| 1.0 / t),
            domain_min: 0.0,
        }
    }

    /// A user-supplied warp. The label participates in equality: two
    /// custom warps are interchangeable only if their labels agree.
    pub fn custom(
        label: impl Into<String>,
        domain_min: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PsiFunction {
            kind: PsiKind::Custom(label.into()),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
            domain_min,
        }
    }

    /// Look up a built-in warp: "identity" or "log".
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "identity" => Some(Self::identity()),
            "log" => Some(Self::logarithm()),
            _ => None,
        }
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    /// psi(t). Domain error if `t` is below the domain edge or the warp
    /// produces a non-finite value there (e.g. ln 0).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < self.domain_min {
            return Err(Error::Domain(format!(
                "psi ({}) is not defined at t = {t}",
                self.kind
            )));
        }
        let v = (self.eval)(t);
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "psi ({}) is not finite at t = {t}",
                self.kind
            )));
        }
        Ok(v)
    }

    /// psi'(t). Also enforces the strict-monotonicity invariant: the
    /// derivative must be finite and positive wherever it is requested.
    pub fn deriv(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < self.domain_min {
            return Err(Error::Domain(format!(
                "psi ({}) is not defined at t = {t}",
                self.kind
            )));
        }
        let v = (self.deriv)(t);
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Domain(format!(
                "psi ({}) must have a positive finite derivative, got {v} at t = {t}",
                self.kind
            )));
        }
        Ok(v)
    }
}

impl PartialEq for PsiFunction {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction")
            .field("kind", &self.kind)
            .field("domain_min", &self.domain_min)
            .finish_non_exhaustive()
    }
}

/// The lattice variable psi(t) - psi(a), defined for t >= a (clamped to 0
/// against rounding in custom warps).
pub fn psi_delta(psi: &PsiFunction, a: f64, t: f64) -> Result<f64> {
    if t < a {
        return Err(Error::Domain(format!(
            "evaluation time t = {t} precedes the series origin a = {a}"
        )));
    }
    Ok(((psi.eval(t)?) - (psi.eval(a)?)).max(0.0))
}
