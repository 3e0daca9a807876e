//! Centered uniform grids on `[-L/2, L/2)^d` and their dual frequency grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid shared across all axes.
///
/// Sample `j` along an axis sits at `x_j = -L/2 + j h` with `h = L / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    dim: usize,
    n: usize,
    half_width: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct GridSpec {
    dim: usize,
    n: usize,
    half_width: f64,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Self> {
        Grid::new(s.dim, s.n, s.half_width)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec { dim: g.dim, n: g.n, half_width: g.half_width }
    }
}

pub const MIN_POINTS: usize = 16;

impl Grid {
    pub fn new(dim: usize, n: usize, half_width: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two >= {MIN_POINTS}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half_width = {half_width} must be positive")));
        }
        Ok(Grid { dim, n, half_width })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Full side length `L`.
    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.n as f64
    }

    /// `h^d`, the quadrature weight of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Index of the sample at the origin.
    pub fn center_index(&self) -> usize {
        self.n / 2
    }

    /// Position of flat sample `idx` (row-major, last axis fastest).
    pub fn point(&self, idx: usize) -> Vec<f64> {
        match self.dim {
            1 => vec![self.coord(idx)],
            _ => vec![self.coord(idx / self.n), self.coord(idx % self.n)],
        }
    }

    /// Frequency grid of the discrete Fourier transform: spacing `2π/L`,
    /// spanning `[-π/h, π/h)`.
    pub fn dual(&self) -> Grid {
        Grid { dim: self.dim, n: self.n, half_width: std::f64::consts::PI / self.spacing() }
    }

    /// Largest frequency magnitude free of aliasing for the decay fits, `π/(2h)`.
    pub fn resolvable_frequency(&self) -> f64 {
        std::f64::consts::PI / (2.0 * self.spacing())
    }

    /// Radius of the central region `[-L/4, L/4]^d` inside which supports must stay.
    pub fn guard_radius(&self) -> f64 {
        self.length() / 4.0
    }

    pub(crate) fn same_as(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.n == other.n
            && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}
