use std::f64::consts::PI;

use proptest::prelude::*;
use wfset_core::catalog::NAMES;
use wfset_core::stft::StftEvaluator;
use wfset_core::*;

fn grid1() -> Grid {
    Grid::new(1, 1024, 20.0).unwrap()
}

/// `‖û‖²` with the cell volume of the dual grid `û` lives on.
fn dual_norm_sqr(uhat: &SampledDistribution) -> f64 {
    uhat.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() * uhat.grid().cell_volume()
}

fn smooth_entries() -> Vec<SampledDistribution> {
    ["gaussian", "hermite", "bump", "chirp"].iter().map(|name| catalog_entry(name, &grid1()).unwrap().0).collect()
}

#[test]
fn parseval_on_catalog_functions() {
    for u in smooth_entries() {
        let uhat = u.fourier_transform();
        let lhs = dual_norm_sqr(&uhat);
        let rhs = 2.0 * PI * u.l2_norm().powi(2);
        assert!((lhs - rhs).abs() <= 1e-8 * rhs, "{}: {lhs} vs {rhs}", u.label());
    }
}

#[test]
fn double_transform_is_scaled_reflection() {
    for u in smooth_entries() {
        let twice = u.fourier_transform().fourier_transform();
        let expected = u.reflected().scaled(Complex64::new(2.0 * PI, 0.0));
        let twice = SampledDistribution::new(*u.grid(), twice.samples().to_vec(), SampleKind::Function, "ff").unwrap();
        assert!(twice.relative_l2_error(&expected).unwrap() <= 1e-8, "{}", u.label());
    }
}

#[test]
fn compact_ground_truths_encode_the_main_theorem() {
    for name in NAMES {
        let entry = CatalogEntry::by_name(name).unwrap();
        let truth = entry.ground_truth();
        let Some(sigma) = truth.sigma_dirs else { continue };
        let d = entry.dim();
        let lifted: Vec<Vec<f64>> = sigma.iter().map(|s| [vec![0.0; d], s.clone()].concat()).collect();
        assert_eq!(lifted, truth.gabor_wf_dirs, "{name}");
    }
}

#[test]
fn stft_modulus_is_translation_covariant() {
    let g = grid1();
    let w = Window::new(1.0).unwrap();
    let shift = 77;
    let x0 = shift as f64 * g.spacing();
    for name in ["dirac", "dirac_derivative", "gaussian", "hermite", "box", "bump"] {
        let (u, _) = catalog_entry(name, &g).unwrap();
        let moved = u.translated(&[shift]).unwrap();
        let (a, b) = (StftEvaluator::new(&u), StftEvaluator::new(&moved));
        for &(x, xi) in &[(0.3, 0.0), (-1.7, 4.2), (2.25, -11.0), (0.0, 25.0)] {
            let lhs = b.stft(&w, &[x], &[xi]).norm();
            let rhs = a.stft(&w, &[x - x0], &[xi]).norm();
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs), "{name} at ({x}, {xi}): {lhs} vs {rhs}");
        }
    }
}

#[test]
fn stft_grows_at_most_quadratically() {
    let g = grid1();
    let w = Window::new(1.0).unwrap();
    let r = g.length() / 4.0;
    let axis: Vec<f64> = (0..=20).map(|k| -r + 2.0 * r * k as f64 / 20.0).collect();
    for name in ["dirac", "dirac_derivative", "gaussian", "hermite", "box", "chirp", "bump"] {
        let (u, _) = catalog_entry(name, &g).unwrap();
        let ev = StftEvaluator::new(&u);
        let mut worst: f64 = 0.0;
        for &x in &axis {
            for &xi in &axis {
                let weight = 1.0 + x * x + xi * xi;
                worst = worst.max(ev.stft(&w, &[x], &[xi]).norm() / weight);
            }
        }
        assert!(worst.is_finite() && worst < 10.0, "{name}: {worst}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn discrete_parseval_holds_for_arbitrary_samples(
        values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
    ) {
        let g = Grid::new(1, 64, 4.0).unwrap();
        let samples = values.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let u = SampledDistribution::new(g, samples, SampleKind::Function, "random").unwrap();
        let lhs = dual_norm_sqr(&u.fourier_transform());
        let rhs = 2.0 * PI * u.l2_norm().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300));
    }

    #[test]
    fn stft_modulus_ignores_unimodular_factors(
        phase in 0.0f64..(2.0 * PI),
        x in -8.0f64..8.0,
        xi in -20.0f64..20.0,
    ) {
        let (u, _) = catalog_entry("box", &grid1()).unwrap();
        let w = Window::new(1.0).unwrap();
        let z = PhasePoint::new(vec![x], vec![xi]).unwrap();
        let a = stft_at(&u, &w, &z).unwrap().norm();
        let b = stft_at(&u.scaled(Complex64::from_polar(1.0, phase)), &w, &z).unwrap().norm();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn stft_modulus_is_modulation_covariant(
        xi0 in -5.0f64..5.0,
        x in -6.0f64..6.0,
        xi in -15.0f64..15.0,
    ) {
        let (u, _) = catalog_entry("hermite", &grid1()).unwrap();
        let w = Window::new(1.0).unwrap();
        let a = StftEvaluator::new(&u.modulated(&[xi0]).unwrap()).stft(&w, &[x], &[xi]).norm();
        let b = StftEvaluator::new(&u).stft(&w, &[x], &[xi - xi0]).norm();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b));
    }
}
