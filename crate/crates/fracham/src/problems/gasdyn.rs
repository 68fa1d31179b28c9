//! Nonlinear fractional gas-dynamics equation:
//!
//! ```text
//! D[u] + u u_x - u + u^2 = 0,     u(x, a) = e^-x
//! ```
//!
//! so G(u) = u u_x - u + u^2, with the quadratic terms expanded as Cauchy
//! convolutions over the deformation terms. On this initial condition the
//! convolutions cancel exactly (u u_x = -u^2 on the e^-x family) and the
//! exact solution is e^-x * E_alpha[w^alpha].

use super::{check_residual_call, Problem, ReferenceKind};
use crate::ham::{HamConfig, ResidualPart};
use crate::series::FractionalPowerSeries;
use crate::special::{mittag_leffler, psi_delta, MlParams};
use crate::Result;

pub struct GasDynamics;

impl Problem for GasDynamics {
    fn name(&self) -> &'static str {
        "gasdyn"
    }

    fn description(&self) -> &'static str {
        "nonlinear gas dynamics u_t + u u_x - u + u^2 = 0 with u(x,a) = exp(-x)"
    }

    fn reference_kind(&self) -> ReferenceKind {
        ReferenceKind::ClosedForm
    }

    fn initial_value(&self, x: f64) -> f64 {
        (-x).exp()
    }

    fn initial_jet(&self, x: f64, depth: usize) -> Vec<f64> {
        let v = (-x).exp();
        (0..=depth)
            .map(|d| if d % 2 == 0 { v } else { -v })
            .collect()
    }

    fn derivative_order_per_step(&self) -> usize {
        1
    }

    fn residual_g(
        &self,
        terms: &[FractionalPowerSeries],
        m: usize,
        k_cap: usize,
    ) -> Result<ResidualPart> {
        check_residual_call(terms, m)?;
        let prev = &terms[m - 1];
        // G = sum_i u_i d/dx u_{m-1-i} - u_{m-1} + sum_i u_i u_{m-1-i}.
        let mut g = prev.scale(-1.0);
        for i in 0..m {
            let j = m - 1 - i;
            let advect = terms[i].product(&terms[j].spatial_derivative(1)?, k_cap)?;
            let square = terms[i].product(&terms[j], k_cap)?;
            g = g.add(&advect)?.add(&square)?;
        }
        Ok(ResidualPart(g))
    }

    fn reference(&self, x: f64, t: f64, config: &HamConfig) -> Result<Option<f64>> {
        let w = psi_delta(config.psi(), config.origin(), t)?;
        let alpha = config.alpha();
        let value = mittag_leffler(w.powf(alpha), &MlParams::new(alpha)?)?;
        Ok(Some((-x).exp() * value))
    }
}
