//! Linear fractional diffusion with a lower-order reaction term:
//!
//! ```text
//! D[u] = u_xx + u,     u(x, a) = cos(pi x)
//! ```
//!
//! so G(u) = -(u_xx + u). On this initial condition the exact solution is
//! cos(pi x) * E_alpha[(1 - pi^2) w^alpha] with w = psi(t) - psi(a).

use super::{check_residual_call, Problem, ReferenceKind};
use crate::ham::{HamConfig, ResidualPart};
use crate::series::FractionalPowerSeries;
use crate::special::{mittag_leffler, psi_delta, MlParams};
use crate::Result;

pub struct Diffusion;

const PI: f64 = std::f64::consts::PI;

impl Problem for Diffusion {
    fn name(&self) -> &'static str {
        "diffusion"
    }

    fn description(&self) -> &'static str {
        "linear diffusion-reaction u_t = u_xx + u with u(x,a) = cos(pi x)"
    }

    fn reference_kind(&self) -> ReferenceKind {
        ReferenceKind::ClosedForm
    }

    fn initial_value(&self, x: f64) -> f64 {
        (PI * x).cos()
    }

    fn initial_jet(&self, x: f64, depth: usize) -> Vec<f64> {
        // d-th derivative of cos(pi x): pi^d times the cycle
        // cos, -sin, -cos, sin.
        let (s, c) = (PI * x).sin_cos();
        (0..=depth)
            .map(|d| {
                let base = match d % 4 {
                    0 => c,
                    1 => -s,
                    2 => -c,
                    _ => s,
                };
                PI.powi(d as i32) * base
            })
            .collect()
    }

    fn derivative_order_per_step(&self) -> usize {
        2
    }

    fn residual_g(
        &self,
        terms: &[FractionalPowerSeries],
        m: usize,
        _k_cap: usize,
    ) -> Result<ResidualPart> {
        check_residual_call(terms, m)?;
        let prev = &terms[m - 1];
        let lap = prev.spatial_derivative(2)?;
        Ok(ResidualPart(lap.add(prev)?.scale(-1.0)))
    }

    fn reference(&self, x: f64, t: f64, config: &HamConfig) -> Result<Option<f64>> {
        let w = psi_delta(config.psi(), config.origin(), t)?;
        let alpha = config.alpha();
        let arg = (1.0 - PI * PI) * w.powf(alpha);
        let value = mittag_leffler(arg, &MlParams::new(alpha)?)?;
        Ok(Some((PI * x).cos() * value))
    }
}
