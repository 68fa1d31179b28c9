//! Uniform spatial grids and sampled fields.
//!
//! A [`SpatialField`] stores node samples plus, optionally, a tower of
//! derivative planes (a per-node Taylor jet): `planes[d][i]` is the d-th
//! x-derivative at node i. When a field carries jets, differentiation is
//! an exact plane shift and products propagate jets by the Leibniz rule,
//! so repeated differentiation inside a recurrence loses no accuracy.
//! Fields without jets fall back to fourth-order finite differences.
//!
//! The jet machinery matters because the solver's recurrence nests spatial
//! derivatives: a finite-difference second derivative amplifies roundoff
//! at the grid Nyquist mode by ~4/h^2 * (16/12), which on a 2001-point
//! grid multiplies relative noise by ~1e6 per recurrence step and destroys
//! the deep terms entirely. Jets keep every term at working precision.

use crate::{Error, Result};

/// A uniform 1-D grid on [x_min, x_max] with at least 8 nodes (the
/// one-sided fourth-order stencils need 5- and 6-point windows).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::Config(format!(
                "grid interval [{x_min}, {x_max}] must be finite and non-degenerate"
            )));
        }
        if n_points < 8 {
            return Err(Error::Config(format!(
                "grid needs at least 8 points, got {n_points}"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Node coordinate; the last node is exactly `x_max`.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

// Fourth-order stencil weights (numerators; shared denominators 12 h and
// 12 h^2). Central rows apply at nodes 2 ..= n-3; the one-sided rows
// cover the two nodes at the left edge and, mirrored, the right edge.
const D1_CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const D1_EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
const D2_CENTRAL: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
const D2_EDGE0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const D2_EDGE1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];

fn dot(weights: &[f64], values: impl Iterator<Item = f64>) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

fn fd_first(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let scale = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    out[0] = dot(&D1_EDGE0, values[..5].iter().copied()) * scale;
    out[1] = dot(&D1_EDGE1, values[..5].iter().copied()) * scale;
    for i in 2..n - 2 {
        out[i] = dot(&D1_CENTRAL, values[i - 2..=i + 2].iter().copied()) * scale;
    }
    // Mirrored and negated at the right edge.
    out[n - 2] = -dot(&D1_EDGE1, values[n - 5..].iter().rev().copied()) * scale;
    out[n - 1] = -dot(&D1_EDGE0, values[n - 5..].iter().rev().copied()) * scale;
    out
}

fn fd_second(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let scale = 1.0 / (12.0 * h * h);
    let mut out = vec![0.0; n];
    out[0] = dot(&D2_EDGE0, values[..6].iter().copied()) * scale;
    out[1] = dot(&D2_EDGE1, values[..6].iter().copied()) * scale;
    for i in 2..n - 2 {
        out[i] = dot(&D2_CENTRAL, values[i - 2..=i + 2].iter().copied()) * scale;
    }
    out[n - 2] = dot(&D2_EDGE1, values[n - 6..].iter().rev().copied()) * scale;
    out[n - 1] = dot(&D2_EDGE0, values[n - 6..].iter().rev().copied()) * scale;
    out
}

/// Node samples of a scalar field, optionally with derivative planes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialField {
    grid: GridSpec,
    /// planes[d][i] = d-th derivative at node i; planes[0] are the values.
    planes: Vec<Vec<f64>>,
}

impl SpatialField {
    /// Wrap raw node samples (jet depth 0).
    pub fn from_samples(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::Config(format!(
                "sample count {} does not match grid size {}",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "field samples must all be finite".to_string(),
            ));
        }
        Ok(SpatialField {
            grid,
            planes: vec![values],
        })
    }

    /// Sample a scalar function at the nodes (jet depth 0).
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_samples(grid, grid.points().map(f).collect())
    }

    /// Sample a function together with its derivative tower: `jet(x,
    /// depth)` must return the values of the 0th..=depth-th derivatives
    /// at x.
    pub fn from_jet_fn(
        grid: GridSpec,
        depth: usize,
        jet: impl Fn(f64, usize) -> Vec<f64>,
    ) -> Result<Self> {
        let n = grid.n_points();
        let mut planes = vec![vec![0.0; n]; depth + 1];
        for (i, x) in grid.points().enumerate() {
            let tower = jet(x, depth);
            if tower.len() != depth + 1 {
                return Err(Error::Config(format!(
                    "jet at x = {x} returned {} entries, expected {}",
                    tower.len(),
                    depth + 1
                )));
            }
            for (d, v) in tower.into_iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Config(format!(
                        "jet at x = {x} has a non-finite entry at derivative order {d}"
                    )));
                }
                planes[d][i] = v;
            }
        }
        Ok(SpatialField { grid, planes })
    }

    /// The zero field (jet depth 0; addition and multiplication treat any
    /// all-zero field as an exact annihilator/identity, so depth-0 zeros
    /// never truncate the jets of the other operand).
    pub fn zeros(grid: GridSpec) -> Self {
        SpatialField {
            grid,
            planes: vec![vec![0.0; grid.n_points()]],
        }
    }

    /// A constant field (jet depth 0).
    pub fn constant(grid: GridSpec, value: f64) -> Result<Self> {
        Self::from_samples(grid, vec![value; grid.n_points()])
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Node values (derivative plane 0).
    pub fn values(&self) -> &[f64] {
        &self.planes[0]
    }

    /// Number of derivative planes beyond the values.
    pub fn jet_depth(&self) -> usize {
        self.planes.len() - 1
    }

    /// The d-th derivative plane, if carried.
    pub fn plane(&self, d: usize) -> Option<&[f64]> {
        self.planes.get(d).map(Vec::as_slice)
    }

    /// True when every carried plane is identically zero.
    pub fn is_zero(&self) -> bool {
        self.planes
            .iter()
            .all(|p| p.iter().all(|&v| v == 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.planes[0].iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Incompatible(format!(
                "fields live on different grids: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Pointwise sum. The jet depth of the result is the smaller of the
    /// operands' depths, except that an exactly-zero operand is returned
    /// unchanged-other-side so padding zeros cannot erode jets.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let depth = self.jet_depth().min(other.jet_depth());
        let planes = (0..=depth)
            .map(|d| {
                self.planes[d]
                    .iter()
                    .zip(&other.planes[d])
                    .map(|(a, b)| a + b)
                    .collect()
            })
            .collect();
        Ok(SpatialField {
            grid: self.grid,
            planes,
        })
    }

    /// Scalar multiple (jets scale plane-by-plane).
    pub fn scale(&self, k: f64) -> Self {
        SpatialField {
            grid: self.grid,
            planes: self
                .planes
                .iter()
                .map(|p| p.iter().map(|v| k * v).collect())
                .collect(),
        }
    }

    /// Pointwise product; jets combine by the Leibniz rule up to the
    /// smaller operand depth. A zero operand yields the zero field.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zeros(self.grid));
        }
        let depth = self.jet_depth().min(other.jet_depth());
        let n = self.grid.n_points();
        let mut planes = vec![vec![0.0; n]; depth + 1];
        for d in 0..=depth {
            // Binomial coefficients C(d, j) built incrementally.
            let mut binom = 1.0;
            for j in 0..=d {
                let a = &self.planes[j];
                let b = &other.planes[d - j];
                let row = &mut planes[d];
                for i in 0..n {
                    row[i] += binom * a[i] * b[i];
                }
                binom = binom * (d - j) as f64 / (j + 1) as f64;
            }
        }
        Ok(SpatialField {
            grid: self.grid,
            planes,
        })
    }

    /// First or second x-derivative: an exact jet shift when the field
    /// carries enough planes, otherwise a fourth-order finite difference
    /// of the values (result has jet depth 0 in that case).
    pub fn derivative(&self, order: usize) -> Result<Self> {
        if order == 0 || order > 2 {
            return Err(Error::Domain(format!(
                "derivative order must be 1 or 2, got {order}"
            )));
        }
        if self.is_zero() {
            return Ok(Self::zeros(self.grid));
        }
        if self.jet_depth() >= order {
            return Ok(SpatialField {
                grid: self.grid,
                planes: self.planes[order..].to_vec(),
            });
        }
        let h = self.grid.spacing();
        let values = match order {
            1 => fd_first(&self.planes[0], h),
            _ => fd_second(&self.planes[0], h),
        };
        Ok(SpatialField {
            grid: self.grid,
            planes: vec![values],
        })
    }

    /// Drop jet planes beyond `max_depth` (no-op if already shallower).
    pub fn truncate_jet(&self, max_depth: usize) -> Self {
        if self.jet_depth() <= max_depth {
            return self.clone();
        }
        SpatialField {
            grid: self.grid,
            planes: self.planes[..=max_depth].to_vec(),
        }
    }

    /// Value at an arbitrary point by 4-point Lagrange interpolation
    /// (exact at nodes, O(h^4) between them).
    pub fn sample_cubic(&self, x: f64) -> Result<f64> {
        let g = &self.grid;
        if !x.is_finite() || x < g.x_min() || x > g.x_max() {
            return Err(Error::Domain(format!(
                "sample point {x} lies outside the grid [{}, {}]",
                g.x_min(),
                g.x_max()
            )));
        }
        let h = g.spacing();
        let rel = (x - g.x_min()) / h;
        let nearest = rel.round() as usize;
        let nearest = nearest.min(g.n_points() - 1);
        if g.point(nearest) == x {
            return Ok(self.planes[0][nearest]);
        }
        // Window of 4 nodes around x, clamped to the grid.
        let j = (rel.floor() as isize - 1)
            .clamp(0, g.n_points() as isize - 4) as usize;
        let mut acc = 0.0;
        for k in j..j + 4 {
            let mut w = 1.0;
            let xk = g.point(k);
            for l in j..j + 4 {
                if l != k {
                    let xl = g.point(l);
                    w *= (x - xl) / (xk - xl);
                }
            }
            acc += w * self.planes[0][k];
        }
        Ok(acc)
    }
}
