//! Built-in problems and the runtime registry.
//!
//! Each problem contributes its initial condition and the spatial part of
//! its residual; the deformation recurrence itself is shared. Problems
//! register as trait objects and are selected by name at runtime.

mod diffusion;
mod gasdyn;
mod kdv;

use std::fmt;

use crate::ham::{HamConfig, ResidualPart};
use crate::series::FractionalPowerSeries;
use crate::Result;

pub use diffusion::Diffusion;
pub use gasdyn::GasDynamics;
pub use kdv::Kdv;

/// What a problem's `reference` method returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    /// The exact solution in closed form.
    ClosedForm,
    /// A published low-order truncation used as the comparison curve
    /// (the problem has no known closed-form solution).
    TruncatedSeries,
}

impl fmt::Display for ReferenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceKind::ClosedForm => write!(f, "closed-form"),
            ReferenceKind::TruncatedSeries => write!(f, "truncated-series"),
        }
    }
}

/// A time-fractional evolution equation
/// `D[u] + G(u) = 0`, `u(x, a) = u0(x)`, posed for the solver.
///
/// `G` is everything in the residual except the time-derivative term; the
/// recurrence integrates `D[u_{m-1}]` analytically and adds
/// `I[G_{m-1}]` term by term, so implementations only supply `G` on the
/// series algebra.
pub trait Problem: Sync {
    /// Registry key (also the CLI name).
    fn name(&self) -> &'static str;

    /// One-line human description.
    fn description(&self) -> &'static str;

    fn reference_kind(&self) -> ReferenceKind;

    /// Initial condition u(x, a).
    fn initial_value(&self, x: f64) -> f64;

    /// Derivative tower of the initial condition: values of the 0th ..=
    /// depth-th x-derivatives at x. Implementations may return fewer
    /// entries than requested (always at least the value itself, and the
    /// same count for every x); the solver then falls back to finite
    /// differences for the orders not carried. The default provides no
    /// derivatives.
    fn initial_jet(&self, x: f64, depth: usize) -> Vec<f64> {
        let _ = depth;
        vec![self.initial_value(x)]
    }

    /// Highest spatial-derivative order one deformation step applies to
    /// the incoming terms (sizes the jet budget).
    fn derivative_order_per_step(&self) -> usize;

    /// The residual part G_{m-1} built from the computed terms
    /// `terms[0..m]` (so `terms.len() == m`). `k_cap` bounds the lattice
    /// indices kept by Cauchy products.
    fn residual_g(
        &self,
        terms: &[FractionalPowerSeries],
        m: usize,
        k_cap: usize,
    ) -> Result<ResidualPart>;

    /// Comparison value at (x, t) for the configured algebra, if the
    /// problem has one (see [`Problem::reference_kind`]).
    fn reference(&self, x: f64, t: f64, config: &HamConfig) -> Result<Option<f64>>;
}

/// Validates the shared `residual_g` calling convention.
pub(crate) fn check_residual_call(terms: &[FractionalPowerSeries], m: usize) -> Result<()> {
    if m == 0 || terms.len() != m {
        return Err(crate::Error::Domain(format!(
            "residual for step m = {m} needs exactly the terms 0..{m}, got {}",
            terms.len()
        )));
    }
    Ok(())
}

static DIFFUSION: Diffusion = Diffusion;
static GASDYN: GasDynamics = GasDynamics;
static KDV: Kdv = Kdv;

/// Every built-in problem, in registry order.
pub fn all() -> [&'static dyn Problem; 3] {
    [&DIFFUSION, &GASDYN, &KDV]
}

/// Look a problem up by its registry name.
pub fn by_name(name: &str) -> Option<&'static dyn Problem> {
    all().into_iter().find(|p| p.name() == name)
}
