//! Sampled tempered distributions and the global Fourier transform.
//!
//! The transform is the Riemann sum of `∫ u(x) e^{-i<x,ξ>} dx`, so a spike of
//! amplitude `1/h^d` at the origin transforms to the constant 1.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    Function,
    /// Contains discrete spikes with the `1/h^d` per unit mass convention.
    SingularSpike,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledDistribution {
    grid: Grid,
    samples: Vec<Complex64>,
    kind: SampleKind,
    label: String,
}

impl SampledDistribution {
    pub fn new(grid: Grid, samples: Vec<Complex64>, kind: SampleKind, label: impl Into<String>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {} points", samples.len(), grid.len())));
        }
        Ok(SampledDistribution { grid, samples, kind, label: label.into() })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(grid: Grid, kind: SampleKind, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let samples = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        SampledDistribution { grid, samples, kind, label: label.into() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn with_samples(&self, samples: Vec<Complex64>, kind: SampleKind) -> Self {
        debug_assert_eq!(samples.len(), self.samples.len());
        SampledDistribution { grid: self.grid, samples, kind, label: self.label.clone() }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Grid quadrature of `(u, v)`, conjugate linear in `v`.
    pub fn inner(&self, other: &SampledDistribution) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.cell_volume())
    }

    /// `‖u - v‖ / ‖v‖` on the grid.
    pub fn relative_l2_error(&self, reference: &SampledDistribution) -> Result<f64> {
        self.check_same_grid(reference)?;
        let num: f64 = self.samples.iter().zip(&reference.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = reference.samples.iter().map(|b| b.norm_sqr()).sum();
        Ok((num / den).sqrt())
    }

    pub(crate) fn check_same_grid(&self, other: &SampledDistribution) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)))
        }
    }

    /// Chebyshev radius `max_i |x_i|` over all nonzero samples (0 for the zero signal).
    pub fn support_extent(&self) -> f64 {
        let mut r = 0.0_f64;
        for (i, z) in self.samples.iter().enumerate() {
            if *z != Complex64::new(0.0, 0.0) {
                for c in self.grid.point(i) {
                    r = r.max(c.abs());
                }
            }
        }
        r
    }

    /// True when every nonzero sample lies inside the central region `[-L/4, L/4]^d`.
    pub fn is_compactly_supported(&self) -> bool {
        self.support_extent() <= self.grid.guard_radius() * (1.0 + 1e-12)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.with_samples(self.samples.iter().map(|z| z * c).collect(), self.kind)
    }

    /// `u(-x)`; the point `-L/2` maps to itself by periodicity.
    pub fn reflected(&self) -> Self {
        let n = self.grid.n();
        let r = |j: usize| (n - j) % n;
        let samples = match self.grid.dim() {
            1 => (0..n).map(|j| self.samples[r(j)]).collect(),
            _ => (0..n * n).map(|k| self.samples[r(k / n) * n + r(k % n)]).collect(),
        };
        self.with_samples(samples, self.kind)
    }

    /// `T_{x0} u` for an on-grid shift of `shift[i]` samples along axis `i`;
    /// samples shifted in from outside the grid are zero.
    pub fn translated(&self, shift: &[isize]) -> Result<Self> {
        if shift.len() != self.grid.dim() {
            return Err(Error::GridMismatch("shift dimension".into()));
        }
        let n = self.grid.n() as isize;
        let src = |j: usize, s: isize| -> Option<usize> {
            let k = j as isize - s;
            (0..n).contains(&k).then_some(k as usize)
        };
        let zero = Complex64::new(0.0, 0.0);
        let samples = match self.grid.dim() {
            1 => (0..n as usize).map(|j| src(j, shift[0]).map_or(zero, |k| self.samples[k])).collect(),
            _ => {
                let nu = n as usize;
                (0..nu * nu)
                    .map(|k| match (src(k / nu, shift[0]), src(k % nu, shift[1])) {
                        (Some(a), Some(b)) => self.samples[a * nu + b],
                        _ => zero,
                    })
                    .collect()
            }
        };
        Ok(self.with_samples(samples, self.kind))
    }

    /// `M_{ξ0} u = e^{i<x, ξ0>} u`.
    pub fn modulated(&self, xi0: &[f64]) -> Result<Self> {
        if xi0.len() != self.grid.dim() {
            return Err(Error::GridMismatch("modulation dimension".into()));
        }
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let x = self.grid.point(i);
                let phase: f64 = x.iter().zip(xi0).map(|(a, b)| a * b).sum();
                z * Complex64::from_polar(1.0, phase)
            })
            .collect();
        Ok(self.with_samples(samples, self.kind))
    }

    /// Global Fourier transform onto the dual grid (spacing `2π/L`).
    pub fn fourier_transform(&self) -> SampledDistribution {
        let n = self.grid.n();
        let fft = FftPlanner::new().plan_fft_forward(n);
        // (-1)^j pre- and post-twiddles center both grids (n/2 is even)
        let sign = |j: usize| if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut data: Vec<Complex64> = match self.grid.dim() {
            1 => self.samples.iter().enumerate().map(|(j, z)| z * sign(j)).collect(),
            _ => self.samples.iter().enumerate().map(|(k, z)| z * (sign(k / n) * sign(k % n))).collect(),
        };
        transform_axes(&mut data, n, self.grid.dim(), &fft);
        let w = self.grid.cell_volume();
        for (k, z) in data.iter_mut().enumerate() {
            let s = match self.grid.dim() {
                1 => sign(k),
                _ => sign(k / n) * sign(k % n),
            };
            *z *= s * w;
        }
        SampledDistribution {
            grid: self.grid.dual(),
            samples: data,
            kind: SampleKind::Function,
            label: format!("F[{}]", self.label),
        }
    }

    /// Inverse of [`fourier_transform`](Self::fourier_transform) for samples on
    /// a dual grid: `(2π)^{-d} Σ_k v(ξ_k) e^{i<x, ξ_k>} (2π/L)^d`, landing on
    /// the spatial grid whose dual is `self.grid()`.
    pub fn inverse_fourier_transform(&self) -> SampledDistribution {
        // F∘F = (2π)^d R, hence F^{-1} = (2π)^{-d} R∘F
        let scale = (2.0 * std::f64::consts::PI).powi(-(self.grid.dim() as i32));
        let mut out = self.fourier_transform().reflected().scaled(Complex64::new(scale, 0.0));
        out.label = format!("F^-1[{}]", self.label);
        out
    }

    /// Direct-sum Fourier transform evaluated at the points of `target`,
    /// `Σ_j u(x_j) e^{-i<x_j, ξ>} h^d`. Separable, so `O(n^{d+1})`.
    pub fn fourier_transform_at(&self, target: &Grid) -> Result<SampledDistribution> {
        if target.dim() != self.grid.dim() {
            return Err(Error::GridMismatch("target dimension".into()));
        }
        let xs = self.grid.coords();
        let ks = target.coords();
        let kernel: Vec<Complex64> =
            ks.iter().flat_map(|&k| xs.iter().map(move |&x| Complex64::from_polar(1.0, -x * k))).collect();
        let n = self.grid.n();
        let m = target.n();
        let w = self.grid.cell_volume();
        let samples = match self.grid.dim() {
            1 => (0..m)
                .map(|a| {
                    let row = &kernel[a * n..(a + 1) * n];
                    row.iter().zip(&self.samples).map(|(e, z)| e * z).sum::<Complex64>() * w
                })
                .collect(),
            _ => {
                // contract the second axis, then the first
                let mut half = vec![Complex64::new(0.0, 0.0); n * m];
                for i in 0..n {
                    let urow = &self.samples[i * n..(i + 1) * n];
                    for b in 0..m {
                        let row = &kernel[b * n..(b + 1) * n];
                        half[i * m + b] = row.iter().zip(urow).map(|(e, z)| e * z).sum();
                    }
                }
                let mut out = vec![Complex64::new(0.0, 0.0); m * m];
                for a in 0..m {
                    let row = &kernel[a * n..(a + 1) * n];
                    for b in 0..m {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..n {
                            acc += row[i] * half[i * m + b];
                        }
                        out[a * m + b] = acc * w;
                    }
                }
                out
            }
        };
        Ok(SampledDistribution {
            grid: *target,
            samples,
            kind: SampleKind::Function,
            label: format!("F[{}]", self.label),
        })
    }
}

/// In-place forward FFT along every axis of a row-major `n^dim` array.
pub(crate) fn transform_axes(data: &mut [Complex64], n: usize, dim: usize, fft: &Arc<dyn Fft<f64>>) {
    match dim {
        1 => fft.process(data),
        _ => {
            for row in data.chunks_exact_mut(n) {
                fft.process(row);
            }
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = data[i * n + j];
                }
                fft.process(&mut col);
                for i in 0..n {
                    data[i * n + j] = col[i];
                }
            }
        }
    }
}
