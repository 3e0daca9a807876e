//! Estimators for the Gabor wave front set, the frequency cone `Σ(u)` and the
//! classical wave front set, based on polynomial-decay fits along rays.
//!
//! Super-polynomial decay cannot be decided from finite data; a direction is
//! flagged singular when the fitted decay exponent of the ray profile is at
//! most `n_thresh` and the profile does not fall to the rounding floor.

pub mod directions;
pub mod fit;

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signal::SampledDistribution;
use crate::stft::{localized, CompactWindow, StftEvaluator, Taper, Window};

use directions::{hausdorff, norm, normalized, select_representatives};
use fit::{fit_decay, RadialGrid};

/// Fraction of the resolvable region used by the outermost radius.
pub const RADIUS_MARGIN: f64 = 0.9;

/// Directions and radii along which decay is measured.
#[derive(Debug, Clone, PartialEq)]
pub struct RaySampling {
    directions: Vec<Vec<f64>>,
    step: f64,
    connected: bool,
    n_dirs: usize,
    r_min: f64,
    r_max: f64,
    rho: f64,
    radial: RadialGrid,
}

impl RaySampling {
    /// Custom sampling; `step` is the angular resolution of `directions` and
    /// `connected` whether neighbouring directions form arcs.
    pub fn new(
        directions: Vec<Vec<f64>>,
        step: f64,
        connected: bool,
        r_min: f64,
        r_max: f64,
        rho: f64,
    ) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::InvalidSampling("no directions".into()));
        }
        let len = directions[0].len();
        if directions.iter().any(|d| d.len() != len || norm(d) == 0.0) {
            return Err(Error::InvalidSampling("directions must be nonzero and of equal length".into()));
        }
        let radial = RadialGrid::new(r_min, r_max, rho)?;
        let n_dirs = directions.len();
        let directions = directions.iter().map(|d| normalized(d)).collect();
        Ok(RaySampling { directions, step, connected, n_dirs, r_min, r_max, rho, radial })
    }

    /// Phase-space rays on `S^{2d-1}`: a circle of `n_dirs` directions for
    /// `d = 1` (at least 64) and the `S³` grid with angular step `2π/n_dirs`
    /// for `d = 2` (`n_dirs` at least 32 and divisible by 4). `r_max`
    /// defaults to [`gabor_radius_cap`].
    pub fn gabor(grid: &Grid, compact: bool, n_dirs: usize, r_min: f64, r_max: Option<f64>, rho: f64) -> Result<Self> {
        let cap = gabor_radius_cap(grid, compact);
        let r_max = checked_radius(r_max, cap)?;
        let step = 2.0 * PI / n_dirs as f64;
        let dirs = match grid.dim() {
            1 => {
                if n_dirs < 64 {
                    return Err(Error::InvalidSampling(format!("n_dirs = {n_dirs} < 64 on S^1")));
                }
                directions::circle(n_dirs)
            }
            _ => {
                if n_dirs < 32 || !n_dirs.is_multiple_of(4) {
                    return Err(Error::InvalidSampling(format!(
                        "n_dirs = {n_dirs} must be >= 32 and divisible by 4 on S^3"
                    )));
                }
                directions::sphere3(n_dirs)
            }
        };
        let mut s = Self::new(dirs, step, true, r_min, r_max, rho)?;
        s.n_dirs = n_dirs;
        Ok(s)
    }

    /// Frequency rays on `S^{d-1}`: the two half-lines for `d = 1`, a circle
    /// of `n_dirs` directions for `d = 2`. `r_max` defaults to
    /// [`frequency_radius_cap`].
    pub fn frequency(grid: &Grid, n_dirs: usize, r_min: f64, r_max: Option<f64>, rho: f64) -> Result<Self> {
        let r_max = checked_radius(r_max, frequency_radius_cap(grid))?;
        match grid.dim() {
            1 => {
                let mut s = Self::new(vec![vec![1.0], vec![-1.0]], PI, false, r_min, r_max, rho)?;
                s.n_dirs = n_dirs;
                Ok(s)
            }
            _ => {
                if n_dirs < 4 {
                    return Err(Error::InvalidSampling(format!("n_dirs = {n_dirs} too small for S^1")));
                }
                let mut s = Self::new(directions::circle(n_dirs), 2.0 * PI / n_dirs as f64, true, r_min, r_max, rho)?;
                s.n_dirs = n_dirs;
                Ok(s)
            }
        }
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// Angular resolution of the direction grid.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn n_dirs(&self) -> usize {
        self.n_dirs
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Fit abscissae `r_k = r_min ρ^k`.
    pub fn radii(&self) -> &[f64] {
        &self.radial.radii
    }

    /// All radii at which rays are sampled.
    pub fn sample_radii(&self) -> &[f64] {
        &self.radial.samples
    }

    fn space_dim(&self) -> usize {
        self.directions[0].len()
    }
}

/// Largest phase-space radius for Gabor rays.
///
/// Frequencies are resolvable up to `π/(2h)`. Positions of a compactly
/// supported input need no bound (the STFT has Gaussian decay in `x` past the
/// support and no periodisation occurs), so the cap is isotropic at
/// `0.9 π/(2h)`; otherwise positions must stay within `L/4` and the cap is
/// `0.9 min(L/4, π/(2h))`.
pub fn gabor_radius_cap(grid: &Grid, compact: bool) -> f64 {
    if compact {
        RADIUS_MARGIN * grid.resolvable_frequency()
    } else {
        RADIUS_MARGIN * grid.guard_radius().min(grid.resolvable_frequency())
    }
}

/// Largest frequency radius for `Σ(u)` and classical rays, `0.9 π/(2h)`.
pub fn frequency_radius_cap(grid: &Grid) -> f64 {
    RADIUS_MARGIN * grid.resolvable_frequency()
}

fn checked_radius(r_max: Option<f64>, cap: f64) -> Result<f64> {
    match r_max {
        None => Ok(cap),
        Some(r) if r <= cap * (1.0 + 1e-12) => Ok(r),
        Some(r) => Err(Error::InvalidSampling(format!("r_max = {r} exceeds the resolvable radius {cap}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportKind {
    Gabor,
    Sigma,
    Classical,
}

/// Fitted decay of one ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    #[serde(rename = "dir")]
    pub direction: Vec<f64>,
    /// Fitted exponent `s` in `|V| ≈ C r^{-s}` over the upper half of radii.
    pub slope: f64,
    pub residual: f64,
    pub floor_hit: bool,
    /// `|V|` at the sample radii of the report.
    #[serde(skip)]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub n_dirs: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub rho: f64,
    pub n_thresh: f64,
    /// Window width; absent for `Σ(u)`, which needs no window.
    pub lambda: Option<f64>,
}

/// Outcome of a detector run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefrontReport {
    pub kind: ReportKind,
    pub params: ReportParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub base_point: Option<Vec<f64>>,
    /// Whether the analysed samples vanish outside the central region.
    pub compact_support: bool,
    /// Angular resolution of the direction grid.
    pub angular_step: f64,
    pub connected: bool,
    /// Largest `|V|` over all sampled points.
    pub peak: f64,
    pub profiles: Vec<DecayProfile>,
    /// Generators of the detected cones (one or more per flagged arc).
    pub singular_dirs: Vec<Vec<f64>>,
    /// Flagged directions without flagged neighbours.
    pub isolated: Vec<Vec<f64>>,
    /// Every direction passing the threshold test.
    pub flagged: Vec<Vec<f64>>,
    #[serde(default)]
    pub sample_radii: Vec<f64>,
}

impl WavefrontReport {
    #[allow(clippy::too_many_arguments)]
    fn classify(
        kind: ReportKind,
        params: ReportParams,
        base_point: Option<Vec<f64>>,
        compact_support: bool,
        sampling_step: f64,
        connected: bool,
        peak: f64,
        profiles: Vec<DecayProfile>,
        sample_radii: Vec<f64>,
    ) -> Self {
        let mut report = WavefrontReport {
            kind,
            params,
            base_point,
            compact_support,
            angular_step: sampling_step,
            connected,
            peak,
            profiles,
            singular_dirs: vec![],
            isolated: vec![],
            flagged: vec![],
            sample_radii,
        };
        report.select();
        report
    }

    fn select(&mut self) {
        let thr = self.params.n_thresh;
        let flags: Vec<bool> = self.profiles.iter().map(|p| p.slope <= thr && !p.floor_hit).collect();
        let dirs: Vec<Vec<f64>> = self.profiles.iter().map(|p| p.direction.clone()).collect();
        let slopes: Vec<f64> = self.profiles.iter().map(|p| p.slope).collect();
        let sel = select_representatives(&dirs, &slopes, &flags, self.angular_step, self.connected);
        self.singular_dirs = sel.representatives.iter().map(|&i| dirs[i].clone()).collect();
        self.isolated = sel.isolated.iter().map(|&i| dirs[i].clone()).collect();
        self.flagged = (0..dirs.len()).filter(|&i| flags[i]).map(|i| dirs[i].clone()).collect();
    }

    /// The same report classified with a different threshold; identical to
    /// re-running the estimator, since fits do not depend on the threshold.
    pub fn with_threshold(&self, n_thresh: f64) -> Result<Self> {
        check_threshold(n_thresh)?;
        let mut r = self.clone();
        r.params.n_thresh = n_thresh;
        r.select();
        Ok(r)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes the ray profiles as CSV with columns `dir_index, r, abs_V`.
    pub fn write_profiles_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "dir_index,r,abs_V")?;
        for (i, p) in self.profiles.iter().enumerate() {
            for (r, v) in self.sample_radii.iter().zip(&p.values) {
                writeln!(out, "{i},{r},{v}")?;
            }
        }
        Ok(())
    }
}

fn check_threshold(n_thresh: f64) -> Result<()> {
    if n_thresh.is_finite() && n_thresh > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSampling(format!("n_thresh = {n_thresh} must be positive")))
    }
}

/// Samples `value(r ω)` on every ray, fits the decay and classifies.
#[allow(clippy::too_many_arguments)]
fn run_rays<F>(
    kind: ReportKind,
    sampling: &RaySampling,
    n_thresh: f64,
    lambda: Option<f64>,
    base_point: Option<Vec<f64>>,
    compact: bool,
    value: F,
) -> WavefrontReport
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let radii = sampling.sample_radii();
    let values: Vec<Vec<f64>> = sampling
        .directions
        .par_iter()
        .map(|w| {
            radii
                .iter()
                .map(|&r| {
                    let z: Vec<f64> = w.iter().map(|c| c * r).collect();
                    value(&z)
                })
                .collect()
        })
        .collect();
    let peak = values.iter().flatten().copied().fold(0.0, f64::max);
    let profiles = sampling
        .directions
        .iter()
        .zip(values)
        .map(|(w, v)| {
            let f = fit_decay(&sampling.radial, &v, peak);
            DecayProfile {
                direction: w.clone(),
                slope: f.slope,
                residual: f.residual,
                floor_hit: f.floor_hit,
                values: v,
            }
        })
        .collect();
    let params = ReportParams {
        n_dirs: sampling.n_dirs,
        r_min: sampling.r_min,
        r_max: sampling.r_max,
        rho: sampling.rho,
        n_thresh,
        lambda,
    };
    WavefrontReport::classify(
        kind,
        params,
        base_point,
        compact,
        sampling.step,
        sampling.connected,
        peak,
        profiles,
        radii.to_vec(),
    )
}

/// Gabor wave front set: decay of `r ↦ |V_ψ u(r ω)|` for `ω ∈ S^{2d-1}`.
pub fn estimate_gabor_wf<W: Taper + ?Sized>(
    u: &SampledDistribution,
    window: &W,
    sampling: &RaySampling,
    n_thresh: f64,
) -> Result<WavefrontReport> {
    window.check_resolvable(u.grid())?;
    check_threshold(n_thresh)?;
    let d = u.grid().dim();
    if sampling.space_dim() != 2 * d {
        return Err(Error::InvalidSampling(format!("need directions in R^{}", 2 * d)));
    }
    let compact = u.is_compactly_supported();
    checked_radius(Some(sampling.r_max), gabor_radius_cap(u.grid(), compact))?;
    let ev = StftEvaluator::new(u);
    Ok(run_rays(ReportKind::Gabor, sampling, n_thresh, Some(window.lambda()), None, compact, |z| {
        ev.stft(window, &z[..d], &z[d..]).norm()
    }))
}

/// Frequency cone `Σ(u)`: decay of `r ↦ |û(r η)|` for `η ∈ S^{d-1}`.
pub fn estimate_sigma(u: &SampledDistribution, sampling: &RaySampling, n_thresh: f64) -> Result<WavefrontReport> {
    check_threshold(n_thresh)?;
    let d = u.grid().dim();
    if sampling.space_dim() != d {
        return Err(Error::InvalidSampling(format!("need directions in R^{d}")));
    }
    checked_radius(Some(sampling.r_max), frequency_radius_cap(u.grid()))?;
    let compact = u.is_compactly_supported();
    if !compact {
        log::warn!("{}: not compactly supported inside L/4, Σ(u) is not meaningful", u.label());
    }
    let ev = StftEvaluator::new(u);
    Ok(run_rays(ReportKind::Sigma, sampling, n_thresh, None, None, compact, |xi| ev.fourier(xi).norm()))
}

/// Classical wave front set over `x0`: decay of `r ↦ |V_φ u(x0, r η)|` with a
/// compactly supported window `φ`.
pub fn estimate_classical_wf(
    u: &SampledDistribution,
    window: &CompactWindow,
    x0: &[f64],
    sampling: &RaySampling,
    n_thresh: f64,
) -> Result<WavefrontReport> {
    window.check_resolvable(u.grid())?;
    check_threshold(n_thresh)?;
    let d = u.grid().dim();
    if x0.len() != d || sampling.space_dim() != d {
        return Err(Error::InvalidSampling(format!("need a base point and directions in R^{d}")));
    }
    checked_radius(Some(sampling.r_max), frequency_radius_cap(u.grid()))?;
    let local = localized(u, window, x0);
    let ev = StftEvaluator::new(&local);
    Ok(run_rays(
        ReportKind::Classical,
        sampling,
        n_thresh,
        Some(window.lambda()),
        Some(x0.to_vec()),
        u.is_compactly_supported(),
        |xi| ev.fourier(xi).norm(),
    ))
}

/// Outcome of comparing a Gabor report with a `Σ(u)` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub passed: bool,
    /// Largest angle between a Gabor singular direction and `{0} × R^d`.
    pub x_offset_angle: f64,
    /// Angular Hausdorff distance between the frequency parts of the Gabor
    /// singular directions and the `Σ(u)` directions.
    pub hausdorff_angle: f64,
    pub ang_tol: f64,
}

/// Checks `WF_G(u) = {0} × Σ(u)` on detector outputs: every Gabor singular
/// direction must lie within `ang_tol` of `{0} × R^d`, and the normalised
/// frequency parts must match the `Σ(u)` directions within `ang_tol` in the
/// angular Hausdorff distance.
pub fn check_main_theorem(gabor: &WavefrontReport, sigma: &WavefrontReport, ang_tol: f64) -> Result<ComparisonResult> {
    if gabor.kind != ReportKind::Gabor || sigma.kind != ReportKind::Sigma {
        return Err(Error::Precondition("expected a gabor report and a sigma report".into()));
    }
    if !gabor.compact_support || !sigma.compact_support {
        return Err(Error::Precondition("input is not compactly supported".into()));
    }
    let x_offset_angle = gabor.singular_dirs.iter().map(|v| x_offset(v)).fold(0.0, f64::max);
    let d = sigma.profiles.first().map_or(0, |p| p.direction.len());
    let xi_parts: Vec<Vec<f64>> =
        gabor.singular_dirs.iter().filter(|v| norm(&v[d..]) > 1e-12).map(|v| normalized(&v[d..])).collect();
    let hausdorff_angle = hausdorff(&xi_parts, &sigma.singular_dirs);
    let passed = x_offset_angle <= ang_tol && xi_parts.len() == gabor.singular_dirs.len() && hausdorff_angle <= ang_tol;
    Ok(ComparisonResult { passed, x_offset_angle, hausdorff_angle, ang_tol })
}

/// Angle between a unit phase-space direction and the frequency subspace.
pub fn x_offset(v: &[f64]) -> f64 {
    let d = v.len() / 2;
    (norm(&v[..d]) / norm(v)).min(1.0).asin()
}

/// True when no Gabor singular direction lies within `ang_tol` of
/// `{0} × S^{d-1}`, i.e. the detector sees no local singularity.
pub fn schwartz_direction_test(report: &WavefrontReport, ang_tol: f64) -> Result<bool> {
    if report.kind != ReportKind::Gabor {
        return Err(Error::Precondition("smoothness test needs a gabor report".into()));
    }
    Ok(report.singular_dirs.iter().all(|v| x_offset(v) > ang_tol))
}

/// Detector configuration with the defaults used throughout the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub lambda: f64,
    pub n_dirs: usize,
    pub r_min: f64,
    /// `None` selects the largest resolvable radius.
    pub r_max: Option<f64>,
    pub rho: f64,
    pub n_thresh: f64,
    /// Width of the compact window for classical reports; `None` selects the
    /// narrowest resolvable width `4.1 h`.
    pub classical_lambda: Option<f64>,
}

impl DetectorParams {
    /// Defaults for dimension `d`: 256 directions on the circle, 32 (angular
    /// step `2π/32`) on `S³`.
    pub fn for_dim(d: usize) -> Self {
        DetectorParams {
            lambda: 1.0,
            n_dirs: if d == 1 { 256 } else { 32 },
            r_min: 1.0,
            r_max: None,
            rho: 1.15,
            n_thresh: 2.5,
            classical_lambda: None,
        }
    }

    /// Angular step of the phase-space direction grid.
    pub fn angular_step(&self) -> f64 {
        2.0 * PI / self.n_dirs as f64
    }

    /// Default comparison tolerance: two angular steps.
    pub fn ang_tol(&self) -> f64 {
        2.0 * self.angular_step()
    }

    pub fn gabor(&self, u: &SampledDistribution) -> Result<WavefrontReport> {
        let sampling =
            RaySampling::gabor(u.grid(), u.is_compactly_supported(), self.n_dirs, self.r_min, self.r_max, self.rho)?;
        estimate_gabor_wf(u, &Window::new(self.lambda)?, &sampling, self.n_thresh)
    }

    pub fn sigma(&self, u: &SampledDistribution) -> Result<WavefrontReport> {
        let sampling = RaySampling::frequency(u.grid(), self.n_dirs, self.r_min, self.r_max, self.rho)?;
        estimate_sigma(u, &sampling, self.n_thresh)
    }

    pub fn classical(&self, u: &SampledDistribution, x0: &[f64]) -> Result<WavefrontReport> {
        let lambda = self.classical_lambda.unwrap_or(4.1 * u.grid().spacing());
        let sampling = RaySampling::frequency(u.grid(), self.n_dirs, self.r_min, self.r_max, self.rho)?;
        estimate_classical_wf(u, &CompactWindow::new(lambda)?, x0, &sampling, self.n_thresh)
    }
}
