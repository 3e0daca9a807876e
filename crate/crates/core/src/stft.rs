//! Gaussian windows and the short-time Fourier transform
//! `V_ψ u(x, ξ) = ∫ u(y) conj(ψ(y - x)) e^{-i<y, ξ>} dy`.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signal::{SampleKind, SampledDistribution};
use crate::special::smooth_cutoff;

/// `exp(-t)` is exactly zero in double precision for `t > 746`.
const EXP_UNDERFLOW: f64 = 746.0;

/// A real, separable analysis window `ψ(y) = Π_i f(y_i)`.
pub trait Taper: Sync {
    /// Width parameter `λ`.
    fn lambda(&self) -> f64;

    /// One-dimensional factor `f`.
    fn factor(&self, y: f64) -> f64;

    /// `f(y)` is exactly zero for `|y| > reach()`.
    fn reach(&self) -> f64;

    fn value(&self, y: &[f64]) -> f64 {
        y.iter().map(|&c| self.factor(c)).product()
    }

    /// The window must be resolved by the grid and fit well inside the box:
    /// `4h <= λ <= L/8`.
    fn check_resolvable(&self, grid: &Grid) -> Result<()> {
        let lambda = self.lambda();
        let min = 4.0 * grid.spacing();
        let max = grid.length() / 8.0;
        if lambda >= min && lambda <= max {
            Ok(())
        } else {
            Err(Error::WindowUnresolvable { lambda, min, max })
        }
    }
}

/// L²-normalised Gaussian window `(πλ²)^{-d/4} e^{-|y|²/(2λ²)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lambda: f64,
}

impl Window {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Window { lambda })
        } else {
            Err(Error::InvalidParams { name: "window".into(), reason: format!("lambda = {lambda}") })
        }
    }
}

impl Taper for Window {
    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn factor(&self, y: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        (std::f64::consts::PI * l2).powf(-0.25) * (-y * y / (2.0 * l2)).exp()
    }

    fn reach(&self) -> f64 {
        self.lambda * (2.0 * EXP_UNDERFLOW).sqrt()
    }
}

/// Compactly supported window for the classical wave front set: the Gaussian
/// factor times a smooth cutoff equal to 1 on `|y| <= 4λ` and 0 beyond `6λ`,
/// applied per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactWindow {
    gaussian: Window,
}

impl CompactWindow {
    pub const PLATEAU: f64 = 4.0;
    pub const EDGE: f64 = 6.0;

    pub fn new(lambda: f64) -> Result<Self> {
        Ok(CompactWindow { gaussian: Window::new(lambda)? })
    }
}

impl Taper for CompactWindow {
    fn lambda(&self) -> f64 {
        self.gaussian.lambda
    }

    fn factor(&self, y: f64) -> f64 {
        let l = self.gaussian.lambda;
        self.gaussian.factor(y) * smooth_cutoff(y.abs(), Self::PLATEAU * l, Self::EDGE * l)
    }

    fn reach(&self) -> f64 {
        Self::EDGE * self.gaussian.lambda
    }
}

/// A point `z = (x, ξ)` of phase space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if x.len() != xi.len() || x.is_empty() {
            return Err(Error::InvalidParams {
                name: "phase point".into(),
                reason: "x and xi must have the same nonzero length".into(),
            });
        }
        if !x.iter().chain(&xi).all(|c| c.is_finite()) {
            return Err(Error::InvalidParams { name: "phase point".into(), reason: "non-finite component".into() });
        }
        Ok(PhasePoint { x, xi })
    }

    /// Splits a flat `(x, ξ)` vector of length `2d`.
    pub fn from_flat(z: &[f64]) -> Result<Self> {
        let d = z.len() / 2;
        Self::new(z[..d].to_vec(), z[d..].to_vec())
    }

    /// All points of the 1-D product `x_axis × xi_axis`, `x` varying slowest.
    pub fn rectangle(x_axis: &[f64], xi_axis: &[f64]) -> Vec<PhasePoint> {
        x_axis.iter().flat_map(|&x| xi_axis.iter().map(move |&xi| PhasePoint { x: vec![x], xi: vec![xi] })).collect()
    }
}

/// Reusable evaluator of STFT values and Fourier values at arbitrary points.
///
/// Sums run over the nonzero samples only (in 2-D over their bounding box,
/// using separability), in ascending index order, so results do not depend
/// on how evaluations are scheduled.
#[derive(Debug, Clone)]
pub struct StftEvaluator {
    h: f64,
    data: Support,
}

#[derive(Debug, Clone)]
enum Support {
    One { xs: Vec<f64>, us: Vec<Complex64> },
    Two { rows: Vec<f64>, cols: Vec<f64>, block: Vec<Complex64> },
}

impl StftEvaluator {
    pub fn new(u: &SampledDistribution) -> Self {
        let g = u.grid();
        let n = g.n();
        let zero = Complex64::new(0.0, 0.0);
        let data = match g.dim() {
            1 => {
                let (xs, us) =
                    u.samples().iter().enumerate().filter(|(_, z)| **z != zero).map(|(j, z)| (g.coord(j), *z)).unzip();
                Support::One { xs, us }
            }
            _ => {
                let s = u.samples();
                let rows_idx: Vec<usize> =
                    (0..n).filter(|&i| s[i * n..(i + 1) * n].iter().any(|z| *z != zero)).collect();
                let cols_idx: Vec<usize> = (0..n).filter(|&j| (0..n).any(|i| s[i * n + j] != zero)).collect();
                let block = rows_idx.iter().flat_map(|&i| cols_idx.iter().map(move |&j| s[i * n + j])).collect();
                Support::Two {
                    rows: rows_idx.iter().map(|&i| g.coord(i)).collect(),
                    cols: cols_idx.iter().map(|&j| g.coord(j)).collect(),
                    block,
                }
            }
        };
        StftEvaluator { h: g.spacing(), data }
    }

    pub fn dim(&self) -> usize {
        match self.data {
            Support::One { .. } => 1,
            Support::Two { .. } => 2,
        }
    }

    /// `V_ψ u(x, ξ)` by direct quadrature.
    pub fn stft<W: Taper + ?Sized>(&self, window: &W, x: &[f64], xi: &[f64]) -> Complex64 {
        let reach = window.reach();
        match &self.data {
            Support::One { xs, us } => {
                let (lo, hi) = window_range(xs, x[0], reach);
                let mut acc = Complex64::new(0.0, 0.0);
                for j in lo..hi {
                    let w = window.factor(xs[j] - x[0]);
                    acc += us[j] * w * Complex64::from_polar(1.0, -xs[j] * xi[0]);
                }
                acc * self.h
            }
            Support::Two { rows, cols, block } => {
                let (r0, r1) = window_range(rows, x[0], reach);
                let (c0, c1) = window_range(cols, x[1], reach);
                let b: Vec<Complex64> = (c0..c1)
                    .map(|j| window.factor(cols[j] - x[1]) * Complex64::from_polar(1.0, -cols[j] * xi[1]))
                    .collect();
                separable_sum(rows, cols.len(), block, r0..r1, c0, &b, |r| {
                    window.factor(r - x[0]) * Complex64::from_polar(1.0, -r * xi[0])
                }) * (self.h * self.h)
            }
        }
    }

    /// `û(ξ) = Σ_j u(x_j) e^{-i<x_j, ξ>} h^d` by direct summation.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        match &self.data {
            Support::One { xs, us } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, u) in xs.iter().zip(us) {
                    acc += u * Complex64::from_polar(1.0, -x * xi[0]);
                }
                acc * self.h
            }
            Support::Two { rows, cols, block } => {
                let b: Vec<Complex64> = cols.iter().map(|&c| Complex64::from_polar(1.0, -c * xi[1])).collect();
                separable_sum(rows, cols.len(), block, 0..rows.len(), 0, &b, |r| Complex64::from_polar(1.0, -r * xi[0]))
                    * (self.h * self.h)
            }
        }
    }
}

/// Indices of the sorted coordinates within `reach` of `center`.
fn window_range(coords: &[f64], center: f64, reach: f64) -> (usize, usize) {
    let lo = coords.partition_point(|&c| c < center - reach);
    let hi = coords.partition_point(|&c| c <= center + reach);
    (lo, hi.max(lo))
}

/// `Σ_{i ∈ rows} a(r_i) Σ_j block[i][c0 + j] b_j`.
fn separable_sum<F: Fn(f64) -> Complex64>(
    rows: &[f64],
    width: usize,
    block: &[Complex64],
    row_range: std::ops::Range<usize>,
    c0: usize,
    b: &[Complex64],
    a: F,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in row_range {
        let row = &block[i * width + c0..i * width + c0 + b.len()];
        let mut inner = Complex64::new(0.0, 0.0);
        for (u, bj) in row.iter().zip(b) {
            inner += u * bj;
        }
        acc += a(rows[i]) * inner;
    }
    acc
}

fn check_point(u: &SampledDistribution, z: &PhasePoint) -> Result<()> {
    if z.x.len() != u.grid().dim() || z.xi.len() != u.grid().dim() {
        return Err(Error::GridMismatch(format!(
            "phase point of dimension {} on a {}-D grid",
            z.x.len(),
            u.grid().dim()
        )));
    }
    Ok(())
}

/// `V_ψ u(z)` at a single phase-space point, by direct summation.
pub fn stft_at<W: Taper + ?Sized>(u: &SampledDistribution, window: &W, z: &PhasePoint) -> Result<Complex64> {
    window.check_resolvable(u.grid())?;
    check_point(u, z)?;
    Ok(StftEvaluator::new(u).stft(window, &z.x, &z.xi))
}

/// `ξ ↦ V_ψ u(x, ξ)` on the whole dual grid, computed as the Fourier
/// transform of `u · conj(T_x ψ)`.
pub fn stft_slice<W: Taper + ?Sized>(u: &SampledDistribution, window: &W, x: &[f64]) -> Result<SampledDistribution> {
    window.check_resolvable(u.grid())?;
    if x.len() != u.grid().dim() {
        return Err(Error::GridMismatch("slice position dimension".into()));
    }
    Ok(localized(u, window, x).fourier_transform())
}

/// `u · T_x ψ` (the window is real).
pub(crate) fn localized<W: Taper + ?Sized>(u: &SampledDistribution, window: &W, x: &[f64]) -> SampledDistribution {
    let g = u.grid();
    let samples = u
        .samples()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let p = g.point(i);
            let w: f64 = p.iter().zip(x).map(|(pi, xi)| window.factor(pi - xi)).product();
            z * w
        })
        .collect();
    u.with_samples(samples, u.kind())
}

/// Reconstructs `u` from its STFT by the inversion formula
/// `u = (2π)^{-d} ∬ V_ψ u(x, ξ) M_ξ T_x ψ dx dξ`, with `x` running over every
/// `stride`-th grid point and `ξ` over the dual grid.
pub fn moyal_reconstruct<W: Taper + ?Sized>(
    u: &SampledDistribution,
    window: &W,
    stride: usize,
) -> Result<SampledDistribution> {
    window.check_resolvable(u.grid())?;
    if u.kind() == SampleKind::SingularSpike {
        return Err(Error::Precondition("reconstruction needs a function, not spikes".into()));
    }
    let g = *u.grid();
    let step = stride as f64 * g.spacing();
    if stride == 0 || step > window.lambda() / 2.0 {
        return Err(Error::TooCoarse(format!(
            "position step {step} must be positive and at most lambda/2 = {}",
            window.lambda() / 2.0
        )));
    }
    let positions: Vec<Vec<f64>> = match g.dim() {
        1 => (0..g.n()).step_by(stride).map(|j| vec![g.coord(j)]).collect(),
        _ => (0..g.n())
            .step_by(stride)
            .flat_map(|i| (0..g.n()).step_by(stride).map(move |j| vec![g.coord(i), g.coord(j)]))
            .collect(),
    };
    let weight = step.powi(g.dim() as i32);
    let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
    for x in &positions {
        let slice = localized(u, window, x).fourier_transform();
        let back = slice.inverse_fourier_transform();
        for (i, (a, b)) in acc.iter_mut().zip(back.samples()).enumerate() {
            let p = g.point(i);
            let w: f64 = p.iter().zip(x).map(|(pi, xi)| window.factor(pi - xi)).product();
            *a += b * (w * weight);
        }
    }
    Ok(u.with_samples(acc, SampleKind::Function).with_label(format!("moyal[{}]", u.label())))
}

/// Writes `V_ψ u` at `points` as CSV with columns `x..., xi..., re, im, abs`.
pub fn write_stft_csv<W: Taper + ?Sized, O: Write>(
    out: &mut O,
    u: &SampledDistribution,
    window: &W,
    points: &[PhasePoint],
) -> Result<()> {
    window.check_resolvable(u.grid())?;
    let d = u.grid().dim();
    let header: Vec<String> =
        if d == 1 { vec!["x".into(), "xi".into()] } else { vec!["x1".into(), "x2".into(), "xi1".into(), "xi2".into()] };
    writeln!(out, "{},re,im,abs", header.join(","))?;
    let ev = StftEvaluator::new(u);
    for z in points {
        check_point(u, z)?;
        let v = ev.stft(window, &z.x, &z.xi);
        let coords: Vec<String> = z.x.iter().chain(&z.xi).map(|c| c.to_string()).collect();
        writeln!(out, "{},{},{},{}", coords.join(","), v.re, v.im, v.norm())?;
    }
    Ok(())
}
