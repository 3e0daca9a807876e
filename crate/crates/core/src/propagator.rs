//! Harmonic-oscillator evolution `e^{-it(|x|² - Δ)}` by Hermite expansion,
//! its exact special-time forms, and end-to-end propagation checks.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::GroundTruth;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signal::{SampleKind, SampledDistribution};
use crate::special::hermite_functions;
use crate::symplectic::{propagate_wf_set, DirectionSet, QuadraticHamiltonian};
use crate::wavefront::directions::hausdorff;
use crate::wavefront::{schwartz_direction_test, DetectorParams};

/// Largest tolerated deviation of the quadrature Gram matrix from the identity.
pub const GRAM_TOL: f64 = 1e-8;

/// Orthonormal Hermite functions `h_0..=h_{n_max}` sampled on a grid; in two
/// dimensions the tensor products `h_{n₁} ⊗ h_{n₂}` with `n₁, n₂ <= n_max`.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    n_max: usize,
    grid: Grid,
    /// `table[n][j] = h_n(x_j)` along one axis.
    table: Vec<Vec<f64>>,
}

impl HermiteBasis {
    /// Basis up to order `n_max`; fails unless `n_max <= n/4` and the Gram
    /// matrix is the identity within [`GRAM_TOL`].
    pub fn new(grid: &Grid, n_max: usize) -> Result<Self> {
        if n_max > grid.n() / 4 {
            return Err(Error::InvalidBasis(format!("n_max = {n_max} exceeds n/4 = {}", grid.n() / 4)));
        }
        let table = sample_table(grid, n_max);
        let valid = orthonormal_prefix(&table, grid.spacing());
        if valid <= n_max {
            return Err(Error::InvalidBasis(format!(
                "Gram error above {GRAM_TOL:e} from order {valid}: the box cannot hold h_{n_max}"
            )));
        }
        Ok(HermiteBasis { n_max, grid: *grid, table })
    }

    /// The largest basis the grid resolves: all orders up to `n/4` whose
    /// Gram matrix stays within [`GRAM_TOL`] of the identity.
    pub fn largest(grid: &Grid) -> Result<Self> {
        let mut table = sample_table(grid, grid.n() / 4);
        let valid = orthonormal_prefix(&table, grid.spacing());
        if valid == 0 {
            return Err(Error::InvalidBasis("grid cannot resolve h_0".into()));
        }
        table.truncate(valid);
        Ok(HermiteBasis { n_max: valid - 1, grid: *grid, table })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of basis functions, `(n_max + 1)^d`.
    pub fn len(&self) -> usize {
        (self.n_max + 1).pow(self.grid.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total order `|n|` of flat coefficient index `k`.
    pub fn order(&self, k: usize) -> usize {
        let m = self.n_max + 1;
        match self.grid.dim() {
            1 => k,
            _ => k / m + k % m,
        }
    }

    /// `h_n` sampled on the grid (one dimension).
    pub fn function(&self, n: usize) -> &[f64] {
        &self.table[n]
    }

    /// Largest deviation of the quadrature Gram matrix from the identity.
    pub fn gram_error(&self) -> f64 {
        let h = self.grid.spacing();
        let mut worst = 0.0_f64;
        for i in 0..=self.n_max {
            for j in 0..=i {
                let g: f64 = self.table[i].iter().zip(&self.table[j]).map(|(a, b)| a * b).sum::<f64>() * h;
                worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }

    /// `Σ_n c_n h_n` on the grid.
    pub fn synthesize(&self, coefficients: &[Complex64], label: impl Into<String>) -> SampledDistribution {
        let n = self.grid.n();
        let m = self.n_max + 1;
        let zero = Complex64::new(0.0, 0.0);
        let samples = match self.grid.dim() {
            1 => {
                let mut out = vec![zero; n];
                for (c, row) in coefficients.iter().zip(&self.table) {
                    for (o, v) in out.iter_mut().zip(row) {
                        *o += c * v;
                    }
                }
                out
            }
            _ => {
                // out[i][j] = Σ_a h_a(x_i) Σ_b c[a][b] h_b(x_j)
                let mut partial = vec![zero; m * n];
                for a in 0..m {
                    for b in 0..m {
                        let c = coefficients[a * m + b];
                        for (p, v) in partial[a * n..(a + 1) * n].iter_mut().zip(&self.table[b]) {
                            *p += c * v;
                        }
                    }
                }
                let mut out = vec![zero; n * n];
                for a in 0..m {
                    for i in 0..n {
                        let w = self.table[a][i];
                        for (o, p) in out[i * n..(i + 1) * n].iter_mut().zip(&partial[a * n..(a + 1) * n]) {
                            *o += p * w;
                        }
                    }
                }
                out
            }
        };
        SampledDistribution::new(self.grid, samples, SampleKind::Function, label).expect("grid-sized synthesis")
    }
}

fn sample_table(grid: &Grid, n_max: usize) -> Vec<Vec<f64>> {
    let cols: Vec<Vec<f64>> = grid.coords().iter().map(|&x| hermite_functions(x, n_max)).collect();
    (0..=n_max).map(|k| cols.iter().map(|c| c[k]).collect()).collect()
}

/// Number of leading functions whose Gram block is within tolerance.
fn orthonormal_prefix(table: &[Vec<f64>], h: f64) -> usize {
    for k in 0..table.len() {
        for j in 0..=k {
            let g: f64 = table[k].iter().zip(&table[j]).map(|(a, b)| a * b).sum::<f64>() * h;
            if (g - if j == k { 1.0 } else { 0.0 }).abs() > GRAM_TOL {
                return k;
            }
        }
    }
    table.len()
}

/// Hermite coefficients of a sampled distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    /// `c_n = (u, h_n)`, row-major over `(n₁, n₂)` in two dimensions.
    pub coefficients: Vec<Complex64>,
    /// `‖u - Π u‖ / ‖u‖` with `Π` the projection onto the basis span.
    pub truncation_error: f64,
}

/// Grid inner products `c_n = (u, h_n)`.
pub fn hermite_coefficients(u: &SampledDistribution, basis: &HermiteBasis) -> Result<HermiteExpansion> {
    if !u.grid().same_as(&basis.grid) {
        return Err(Error::GridMismatch("basis and distribution grids differ".into()));
    }
    let n = basis.grid.n();
    let m = basis.n_max + 1;
    let h = basis.grid.spacing();
    let s = u.samples();
    let coefficients: Vec<Complex64> = match basis.grid.dim() {
        1 => basis.table.iter().map(|row| row.iter().zip(s).map(|(v, z)| z * v).sum::<Complex64>() * h).collect(),
        _ => {
            // t[a][j] = Σ_i h_a(x_i) u[i][j]
            let mut t = vec![Complex64::new(0.0, 0.0); m * n];
            for a in 0..m {
                for i in 0..n {
                    let w = basis.table[a][i];
                    if w == 0.0 {
                        continue;
                    }
                    for (tv, z) in t[a * n..(a + 1) * n].iter_mut().zip(&s[i * n..(i + 1) * n]) {
                        *tv += z * w;
                    }
                }
            }
            let mut c = vec![Complex64::new(0.0, 0.0); m * m];
            for a in 0..m {
                for b in 0..m {
                    c[a * m + b] =
                        t[a * n..(a + 1) * n].iter().zip(&basis.table[b]).map(|(z, v)| z * v).sum::<Complex64>()
                            * (h * h);
                }
            }
            c
        }
    };
    let projected = basis.synthesize(&coefficients, "projection");
    let norm = u.l2_norm();
    let truncation_error = if norm == 0.0 {
        0.0
    } else {
        let diff: f64 = s.iter().zip(projected.samples()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
        ((diff * basis.grid.cell_volume()).sqrt() / norm).clamp(0.0, 1.0)
    };
    Ok(HermiteExpansion { coefficients, truncation_error })
}

/// A state evolved by the harmonic oscillator.
#[derive(Debug, Clone)]
pub struct PropagatedState {
    pub state: SampledDistribution,
    pub t: f64,
    pub truncation_error: f64,
    pub coefficients: Vec<Complex64>,
}

/// Truncation errors above this are reported as warnings.
pub const TRUNCATION_WARN: f64 = 0.01;

/// `e^{-it(|x|² - Δ)} u = Σ_n c_n e^{-it(2|n| + d)} h_n`.
pub fn harmonic_propagate(u: &SampledDistribution, t: f64, basis: &HermiteBasis) -> Result<PropagatedState> {
    let exp = hermite_coefficients(u, basis)?;
    if exp.truncation_error > TRUNCATION_WARN {
        log::warn!("{}: Hermite truncation error {:.3} exceeds {TRUNCATION_WARN}", u.label(), exp.truncation_error);
    }
    Ok(propagate_coefficients(&exp, t, basis, u.label()))
}

fn propagate_coefficients(exp: &HermiteExpansion, t: f64, basis: &HermiteBasis, label: &str) -> PropagatedState {
    let d = basis.grid.dim() as f64;
    let coefficients: Vec<Complex64> = exp
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::from_polar(1.0, -t * (2.0 * basis.order(k) as f64 + d)))
        .collect();
    let state = basis.synthesize(&coefficients, format!("e^(-itH)[{label}], t = {t}"));
    PropagatedState { state, t, truncation_error: exp.truncation_error, coefficients }
}

/// Exact propagator at special times. With `quarter = false` this is
/// `t = kπ/2`: the identity for even `k`, the reflection `u(-x)` for odd `k`.
/// With `quarter = true` this is `t = π/4 + kπ/2`: `(2π)^{-d/2} F u`, composed
/// with the reflection for odd `k`, up to a unimodular constant. The Fourier
/// transform is evaluated on `u`'s own grid so results are comparable with
/// [`harmonic_propagate`].
pub fn special_time_operator(u: &SampledDistribution, k: i64, quarter: bool) -> Result<SampledDistribution> {
    let odd = k.rem_euclid(2) == 1;
    if !quarter {
        return Ok(if odd { u.reflected() } else { u.clone() });
    }
    let d = u.grid().dim() as i32;
    let f = u.fourier_transform_at(u.grid())?.scaled(Complex64::new((2.0 * PI).powf(-(d as f64) / 2.0), 0.0));
    Ok(if odd { f.reflected() } else { f })
}

/// Outcome of [`verify_propagation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub t: f64,
    pub predicted_dirs: Vec<Vec<f64>>,
    pub detected_dirs: Vec<Vec<f64>>,
    pub hausdorff_angle: f64,
    /// `t ∉ (π/2)Z`: the evolution should leave no local singularity.
    pub smooth_expected: bool,
    pub smooth_detected: bool,
    pub truncation_error: f64,
    pub ang_tol: f64,
    pub passed: bool,
}

/// Whether `t` is an integer multiple of `π/2` (within `1e-9` relative).
pub fn on_quarter_period_lattice(t: f64) -> bool {
    let q = t / FRAC_PI_2;
    (q - q.round()).abs() <= 1e-9 * q.abs().max(1.0)
}

/// Evolves `u0` to time `t`, runs the Gabor detector on the result and
/// compares with the ground truth moved by the flow `e^{2tJ}`.
pub fn verify_propagation(
    u0: &SampledDistribution,
    truth: &GroundTruth,
    t: f64,
    basis: &HermiteBasis,
    detector: &DetectorParams,
    ang_tol: f64,
) -> Result<VerificationReport> {
    let d = u0.grid().dim();
    let evolved = harmonic_propagate(u0, t, basis)?;
    let report = detector.gabor(&evolved.state)?;
    let q = QuadraticHamiltonian::harmonic_oscillator(d);
    let predicted = propagate_wf_set(&q, t, &DirectionSet::new(truth.gabor_wf_dirs.clone())?, 1e-9);
    let hausdorff_angle = hausdorff(&report.singular_dirs, &predicted.dirs);
    let smooth_expected = !on_quarter_period_lattice(t) && !truth.is_schwartz;
    let smooth_detected = schwartz_direction_test(&report, ang_tol)?;
    let passed = hausdorff_angle <= ang_tol && (!smooth_expected || smooth_detected);
    Ok(VerificationReport {
        t,
        predicted_dirs: predicted.dirs,
        detected_dirs: report.singular_dirs,
        hausdorff_angle,
        smooth_expected,
        smooth_detected,
        truncation_error: evolved.truncation_error,
        ang_tol,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_entry, CatalogEntry};
    use proptest::prelude::*;

    fn g1() -> Grid {
        Grid::new(1, 1024, 20.0).unwrap()
    }

    #[test]
    fn largest_basis_for_reference_grids() {
        let b = HermiteBasis::largest(&g1()).unwrap();
        assert!(b.n_max() >= 150 && b.n_max() < 256, "n_max = {}", b.n_max());
        assert!(b.gram_error() <= GRAM_TOL);
        assert!(HermiteBasis::new(&g1(), 256).is_err());
        assert!(HermiteBasis::new(&g1(), 300).is_err());
        assert!(HermiteBasis::new(&g1(), 40).is_ok());
    }

    #[test]
    fn coefficients_of_basis_functions() {
        let g = g1();
        let b = HermiteBasis::new(&g, 40).unwrap();
        let (u, _) = CatalogEntry::Hermite { order: 3 }.instantiate(&g).unwrap();
        let e = hermite_coefficients(&u, &b).unwrap();
        for (n, c) in e.coefficients.iter().enumerate() {
            let expected = if n == 3 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() <= 1e-8);
        }
        let (gauss, _) = catalog_entry("gaussian", &g).unwrap();
        let e = hermite_coefficients(&gauss, &b).unwrap();
        assert!((e.coefficients[0] - 1.0).norm() <= 1e-8);
        assert!(e.coefficients[1..].iter().all(|c| c.norm() <= 1e-8));
        assert!(e.truncation_error < 1e-8);
    }

    #[test]
    fn dirac_coefficients_are_values_at_zero() {
        let g = g1();
        let b = HermiteBasis::new(&g, 60).unwrap();
        let (u, _) = catalog_entry("dirac", &g).unwrap();
        let e = hermite_coefficients(&u, &b).unwrap();
        let h0 = hermite_functions(0.0, 60);
        for (n, (c, h)) in e.coefficients.iter().zip(&h0).enumerate() {
            assert!((c - h).norm() < 1e-12);
            if n % 2 == 1 {
                assert!(c.norm() < 1e-12);
            }
        }
        assert!(e.truncation_error > 0.5);
    }

    /// Eighth-order central difference second derivative.
    fn second_derivative(f: &[f64], h: f64, j: usize) -> f64 {
        const W: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
        let mut acc = W[0] * f[j];
        for k in 1..5 {
            acc += W[k] * (f[j + k] + f[j - k]);
        }
        acc / (h * h)
    }

    #[test]
    fn eigenrelation_by_finite_differences() {
        let g = g1();
        let b = HermiteBasis::new(&g, 10).unwrap();
        let h = g.spacing();
        for n in 0..=10 {
            let f = b.function(n);
            let mut num = 0.0;
            let mut den = 0.0;
            for j in 4..g.n() - 4 {
                let x = g.coord(j);
                let lhs = x * x * f[j] - second_derivative(f, h, j);
                let rhs = (2 * n + 1) as f64 * f[j];
                num += (lhs - rhs).powi(2);
                den += rhs * rhs;
            }
            assert!((num / den).sqrt() <= 1e-4, "n = {n}: {}", (num / den).sqrt());
        }
    }

    #[test]
    fn ground_state_only_picks_up_a_phase() {
        let g = g1();
        let b = HermiteBasis::new(&g, 20).unwrap();
        let (u, _) = catalog_entry("gaussian", &g).unwrap();
        let p = harmonic_propagate(&u, 0.37, &b).unwrap();
        let expected = u.scaled(Complex64::from_polar(1.0, -0.37));
        assert!(p.state.relative_l2_error(&expected).unwrap() < 1e-10);
    }

    #[test]
    fn full_period_is_identity_up_to_phase() {
        let g = g1();
        let b = HermiteBasis::new(&g, 60).unwrap();
        let (u, _) = catalog_entry("gaussian", &g).unwrap();
        let u = u.translated(&[20]).unwrap();
        let p = harmonic_propagate(&u, PI, &b).unwrap();
        // e^{-iπ(2n+1)} = -1 for every n
        assert!(p.state.relative_l2_error(&u.scaled(Complex64::new(-1.0, 0.0))).unwrap() < 1e-8);
    }

    #[test]
    fn special_time_examples() {
        let g = g1();
        let (d, _) = catalog_entry("dirac", &g).unwrap();
        assert_eq!(special_time_operator(&d, 1, false).unwrap(), d);
        let (bx, _) = CatalogEntry::Box { a: 0.5, center: 0.5 }.instantiate(&g).unwrap();
        let (expected, _) = CatalogEntry::Box { a: 0.5, center: -0.5 }.instantiate(&g).unwrap();
        assert_eq!(special_time_operator(&bx, 1, false).unwrap().samples(), expected.samples());
        let (gauss, _) = catalog_entry("gaussian", &g).unwrap();
        let q = special_time_operator(&gauss, 0, true).unwrap();
        assert!(q.relative_l2_error(&gauss).unwrap() < 1e-10);
    }

    #[test]
    fn quarter_period_matches_fourier_transform() {
        let g = g1();
        let b = HermiteBasis::largest(&g).unwrap();
        for name in ["gaussian", "hermite"] {
            let (u, _) = catalog_entry(name, &g).unwrap();
            let u = u.translated(&[13]).unwrap().modulated(&[0.9]).unwrap();
            let p = harmonic_propagate(&u, PI / 4.0, &b).unwrap().state;
            let f = special_time_operator(&u, 0, true).unwrap();
            let phase = f.inner(&p).unwrap();
            let c = phase.conj() / phase.norm();
            let err = p.relative_l2_error(&f.scaled(c)).unwrap();
            assert!(err <= 1e-6, "{name}: {err}");
        }
    }

    #[test]
    fn two_dimensional_tensor_basis() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let b = HermiteBasis::new(&g, 8).unwrap();
        assert_eq!(b.len(), 81);
        let u = SampledDistribution::from_fn(g, SampleKind::Function, "g", |x| {
            let h = hermite_functions(x[0], 2)[2] * hermite_functions(x[1], 1)[1];
            Complex64::new(h, 0.0)
        });
        let e = hermite_coefficients(&u, &b).unwrap();
        assert!((e.coefficients[2 * 9 + 1] - 1.0).norm() < 1e-8);
        let p = harmonic_propagate(&u, 0.5, &b).unwrap();
        // eigenvalue 2 (2 + 1) + 2 = 8
        let expected = u.scaled(Complex64::from_polar(1.0, -0.5 * 8.0));
        assert!(p.state.relative_l2_error(&expected).unwrap() < 1e-8);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn lattice_detection() {
        assert!(on_quarter_period_lattice(0.0));
        assert!(on_quarter_period_lattice(PI));
        // the rounded value users type on the command line
        assert!(on_quarter_period_lattice(1.570_796_326_8));
        assert!(!on_quarter_period_lattice(PI / 4.0));
        assert!(!on_quarter_period_lattice(0.9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn unitarity_and_group_law(
            re in proptest::collection::vec(-1.0f64..1.0, 6),
            im in proptest::collection::vec(-1.0f64..1.0, 6),
            s in -3.0f64..3.0,
            t in -3.0f64..3.0,
        ) {
            let g = Grid::new(1, 256, 10.0).unwrap();
            let b = HermiteBasis::new(&g, 30).unwrap();
            let u = SampledDistribution::from_fn(g, SampleKind::Function, "r", |x| {
                let h = hermite_functions(x[0], 5);
                (0..6).map(|k| Complex64::new(re[k], im[k]) * h[k] * (1.0 + 0.1 * x[0].sin())).sum()
            });
            let e = hermite_coefficients(&u, &b).unwrap();
            let p = harmonic_propagate(&u, t, &b).unwrap();
            let n0: f64 = e.coefficients.iter().map(|c| c.norm_sqr()).sum();
            let n1: f64 = p.coefficients.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((n0 - n1).abs() <= 1e-10 * n0.max(1e-300));
            let projected = b.synthesize(&e.coefficients, "p");
            prop_assert!((p.state.l2_norm() - projected.l2_norm()).abs() <= 1e-10 * projected.l2_norm());
            let two = harmonic_propagate(&harmonic_propagate(&u, s, &b).unwrap().state, t, &b).unwrap().state;
            let one = harmonic_propagate(&u, s + t, &b).unwrap().state;
            prop_assert!(two.relative_l2_error(&one).unwrap() <= 1e-9);
        }
    }
}
