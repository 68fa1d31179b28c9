//! Series solver for time-fractional PDEs whose time derivative is a
//! psi-Caputo derivative of order `alpha` in (0, 1).
//!
//! The solution ansatz is a fractional power series
//!
//! ```text
//! u(x, t) = sum_k  c_k(x) * (psi(t) - psi(a))^(k * alpha)
//! ```
//!
//! on which the psi-fractional integral acts in closed form (a shift of the
//! lattice index together with a ratio of gamma functions). The homotopy
//! deformation recurrence therefore never touches a quadrature in `t`: each
//! new term is produced by exact operations on the series coefficients.
//! Spatial derivatives are taken from per-node Taylor jets when the field
//! carries them (exact, the default for the built-in problems) and from
//! fourth-order finite differences otherwise.
//!
//! Crate layout:
//!
//! * [`special`] — gamma, one-parameter Mittag-Leffler, and the psi
//!   time-warp family.
//! * [`field`] — spatial grids and sampled fields with optional jets.
//! * [`series`] — the fractional power series algebra.
//! * [`ham`] — the deformation recurrence, solver driver, and diagnostics.
//! * [`problems`] — built-in equations behind the [`problems::Problem`]
//!   trait, selectable by name from a registry.

pub mod field;
pub mod ham;
pub mod problems;
pub mod series;
pub mod special;

mod error;

pub use error::{Error, Result};
