//! Fractional power series: the closed algebra the solver works in.
//!
//! A series is `sum_k c_k(x) * w^(k alpha)` with `w = psi(t) - psi(a)`.
//! The key closure property: the psi-fractional integral of order alpha
//! maps lattice index k to k+1 with a ratio of gamma functions,
//!
//! ```text
//! I^alpha [ c * w^(k alpha) ] = c * gamma(k alpha + 1) / gamma((k+1) alpha + 1) * w^((k+1) alpha)
//! ```
//!
//! so the solver recurrence stays inside the algebra and never needs a
//! quadrature in time. Addition, scalar multiples, Cauchy products (for
//! the nonlinear terms), and spatial derivatives are likewise exact on
//! the coefficient fields.

use crate::field::{GridSpec, SpatialField};
use crate::special::{gamma_unchecked, ln_gamma_unchecked, psi_delta, PsiFunction};
use crate::{Error, Result};

/// A truncated fractional power series on a fixed algebra
/// (order alpha, warp psi, origin a, spatial grid).
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPowerSeries {
    alpha: f64,
    psi: PsiFunction,
    a: f64,
    /// coeffs[k] multiplies w^(k alpha); never empty.
    coeffs: Vec<SpatialField>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::Config(format!(
            "fractional order must lie strictly inside (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

fn check_origin(psi: &PsiFunction, a: f64) -> Result<()> {
    psi.eval(a).map_err(|_| {
        Error::Config(format!(
            "series origin a = {a} lies outside the domain of psi ({})",
            psi.kind()
        ))
    })?;
    Ok(())
}

impl FractionalPowerSeries {
    /// A single-term series: the field sits at lattice index 0.
    pub fn from_field(
        field: SpatialField,
        alpha: f64,
        psi: PsiFunction,
        a: f64,
    ) -> Result<Self> {
        Self::from_coeffs(vec![field], alpha, psi, a)
    }

    /// Build a series from explicit lattice coefficients (index k holds
    /// the factor of w^(k alpha)). Must be non-empty and share one grid.
    pub fn from_coeffs(
        coeffs: Vec<SpatialField>,
        alpha: f64,
        psi: PsiFunction,
        a: f64,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        check_origin(&psi, a)?;
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Config("a series needs at least one coefficient".into()))?;
        let grid = *first.grid();
        if coeffs.iter().any(|c| *c.grid() != grid) {
            return Err(Error::Incompatible(
                "series coefficients must share a single grid".into(),
            ));
        }
        Ok(FractionalPowerSeries {
            alpha,
            psi,
            a,
            coeffs,
        })
    }

    /// The zero series (one all-zero coefficient).
    pub fn zero(grid: GridSpec, alpha: f64, psi: PsiFunction, a: f64) -> Result<Self> {
        Self::from_field(SpatialField::zeros(grid), alpha, psi, a)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn psi(&self) -> &PsiFunction {
        &self.psi
    }

    /// The series origin a (expansion point in time).
    pub fn origin(&self) -> f64 {
        self.a
    }

    pub fn grid(&self) -> &GridSpec {
        self.coeffs[0].grid()
    }

    pub fn coeffs(&self) -> &[SpatialField] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&SpatialField> {
        self.coeffs.get(k)
    }

    /// Highest lattice index carried (coefficients above it are zero).
    pub fn max_index(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The value of the series at t = a: the index-0 coefficient.
    pub fn constant_part(&self) -> &SpatialField {
        &self.coeffs[0]
    }

    /// The series minus its value at the origin (index-0 coefficient
    /// replaced by zero).
    pub fn without_constant_part(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = SpatialField::zeros(*self.grid());
        FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(Error::Incompatible(format!(
                "fractional orders differ: {} vs {}",
                self.alpha, other.alpha
            )));
        }
        if self.psi != other.psi {
            return Err(Error::Incompatible(format!(
                "time warps differ: {} vs {}",
                self.psi.kind(),
                other.psi.kind()
            )));
        }
        if self.a != other.a {
            return Err(Error::Incompatible(format!(
                "series origins differ: {} vs {}",
                self.a, other.a
            )));
        }
        if self.grid() != other.grid() {
            return Err(Error::Incompatible(
                "series live on different spatial grids".into(),
            ));
        }
        Ok(())
    }

    /// Term-by-term sum; the result length is the longer of the two.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let c = match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b)?,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            coeffs.push(c);
        }
        Ok(FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, k: f64) -> Self {
        FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Cauchy product on the lattice, truncated at index `k_max`. The cap
    /// must not discard structure the operands already carry, so it is a
    /// domain error for `k_max` to sit below either operand's top index.
    /// Exactly-zero coefficients are skipped, which both saves work and
    /// keeps the jet depth of the surviving products intact.
    pub fn product(&self, other: &Self, k_max: usize) -> Result<Self> {
        self.check_compatible(other)?;
        if k_max < self.max_index() || k_max < other.max_index() {
            return Err(Error::Domain(format!(
                "product cap {k_max} is below an operand's top lattice index ({}, {})",
                self.max_index(),
                other.max_index()
            )));
        }
        let grid = *self.grid();
        let out_len = (self.max_index() + other.max_index()).min(k_max) + 1;
        let mut coeffs = vec![SpatialField::zeros(grid); out_len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= out_len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs,
        })
    }

    /// Coefficient-wise spatial derivative (order 1 or 2).
    pub fn spatial_derivative(&self, order: usize) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.derivative(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs,
        })
    }

    /// The psi-fractional integral of order alpha from the origin: shifts
    /// every lattice index up by one and applies the gamma-ratio power
    /// rule. The new index-0 coefficient is zero (the integral vanishes
    /// at t = a).
    pub fn frac_integral(&self) -> Result<Self> {
        let grid = *self.grid();
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(SpatialField::zeros(grid));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(integral_factor(k, self.alpha)));
        }
        Ok(FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs,
        })
    }

    /// Truncate every coefficient's jet to `max_depth` planes.
    pub fn truncate_jets(&self, max_depth: usize) -> Self {
        FractionalPowerSeries {
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            coeffs: self.coeffs.iter().map(|c| c.truncate_jet(max_depth)).collect(),
        }
    }

    /// Evaluate at a point: cubic sampling in x, powers of the lattice
    /// variable in t. Requires t >= a and x inside the grid.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let w = psi_delta(&self.psi, self.a, t)?;
        let mut sum = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let cx = c.sample_cubic(x)?;
            // w^0 = 1 exactly, also when w = 0.
            let pw = if k == 0 { 1.0 } else { w.powf(k as f64 * self.alpha) };
            sum += cx * pw;
        }
        if !sum.is_finite() {
            return Err(Error::NonConvergence {
                last_term: sum,
                max_terms: self.coeffs.len(),
            });
        }
        Ok(sum)
    }
}

/// gamma(k alpha + 1) / gamma((k+1) alpha + 1), in log space once the
/// numerator or denominator would overflow.
fn integral_factor(k: usize, alpha: f64) -> f64 {
    let num = k as f64 * alpha + 1.0;
    let den = (k + 1) as f64 * alpha + 1.0;
    if den <= 170.0 {
        gamma_unchecked(num) / gamma_unchecked(den)
    } else {
        (ln_gamma_unchecked(num) - ln_gamma_unchecked(den)).exp()
    }
}
