//! Special functions and the psi time-warp family.

mod gamma;
mod mittag;
mod psi;

pub use gamma::gamma;
pub(crate) use gamma::{gamma_unchecked, ln_gamma_unchecked};
pub use mittag::{mittag_leffler, MlParams};
pub use psi::{psi_delta, PsiFunction, PsiKind};
