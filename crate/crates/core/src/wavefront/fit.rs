//! Log-log decay fits along rays.

use crate::error::{Error, Result};

/// Sub-samples per radial bin; the envelope over a bin's sub-samples bridges
/// isolated zeros of oscillating profiles.
pub const OVERSAMPLING: usize = 4;

/// Values below `FLOOR * peak` are treated as numerically zero.
pub const FLOOR: f64 = 1e-14;

/// Minimum number of radii in the fitted (upper) half.
pub const MIN_FIT_RADII: usize = 4;

/// Geometric radii `r_k = r_min ρ^k` (fit abscissae) and the denser radii at
/// which ray values are sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub radii: Vec<f64>,
    pub samples: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, rho: f64) -> Result<Self> {
        if !(r_min.is_finite() && r_min >= 1.0) {
            return Err(Error::InvalidSampling(format!("r_min = {r_min} must be >= 1")));
        }
        if !(rho.is_finite() && rho > 1.0) {
            return Err(Error::InvalidSampling(format!("rho = {rho} must exceed 1")));
        }
        if !(r_max.is_finite() && r_max > r_min) {
            return Err(Error::InvalidSampling(format!("r_max = {r_max} must exceed r_min = {r_min}")));
        }
        let count = ((r_max / r_min).ln() / rho.ln() + 1e-9).floor() as usize + 1;
        let radii: Vec<f64> = (0..count).map(|k| r_min * rho.powi(k as i32)).collect();
        let usable = count - count / 2;
        if usable < MIN_FIT_RADII {
            return Err(Error::DegenerateFit { usable, needed: MIN_FIT_RADII });
        }
        let mut samples: Vec<f64> = radii
            .iter()
            .flat_map(|&r| (0..OVERSAMPLING).map(move |m| r * rho.powf(m as f64 / OVERSAMPLING as f64)))
            .filter(|&r| r < r_max)
            .collect();
        samples.push(r_max);
        Ok(RadialGrid { radii, samples })
    }

    /// `M_k = max { v(s) : s >= r_k }`, the decreasing envelope of a ray profile.
    pub fn envelope(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.samples.len());
        let mut tail = vec![0.0; values.len()];
        let mut run = 0.0_f64;
        for i in (0..values.len()).rev() {
            run = run.max(values[i]);
            tail[i] = run;
        }
        self.radii
            .iter()
            .map(|&r| {
                let i = self.samples.partition_point(|&s| s < r - 1e-12);
                tail[i]
            })
            .collect()
    }

    /// Index of the first fitted radius (upper half).
    pub fn fit_start(&self) -> usize {
        self.radii.len() / 2
    }
}

/// Result of fitting `log M_k ≈ c - s log r_k` over the upper half of radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub residual: f64,
    pub floor_hit: bool,
}

pub fn fit_decay(grid: &RadialGrid, values: &[f64], peak: f64) -> DecayFit {
    let env = grid.envelope(values);
    let start = grid.fit_start();
    let xs: Vec<f64> = grid.radii[start..].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = env[start..].iter().map(|m| m.max(1e-300).ln()).collect();
    let (slope, intercept) = least_squares_line(&xs, &ys);
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - (intercept + slope * x)).powi(2)).sum::<f64>();
    let min_env = env[start..].iter().copied().fold(f64::INFINITY, f64::min);
    let floor_hit = peak.is_nan() || peak <= 0.0 || min_env < FLOOR * peak;
    DecayFit { slope: -slope, residual, floor_hit }
}

/// Ordinary least squares `y ≈ a + b x`; returns `(b, a)`.
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let b = sxy / sxx;
    (b, my - b * mx)
}
