//! Named test distributions with analytically known wave front data.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::signal::{SampleKind, SampledDistribution};
use crate::special::{gaussian_bump, hermite_functions, BUMP_EDGE};

/// Number of generators used to describe a full circle of directions.
pub const CIRCLE_GENERATORS: usize = 64;

/// A catalog entry with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", content = "params", rename_all = "snake_case")]
pub enum CatalogEntry {
    /// Point mass at the origin.
    Dirac,
    /// `k`-th derivative of the point mass (central differences of the spike).
    DiracDerivative { k: u32 },
    /// `(πσ²)^{-1/4} e^{-x²/(2σ²)}`, unit L² norm.
    Gaussian { sigma: f64 },
    /// L²-normalised Hermite function `h_order`.
    Hermite { order: usize },
    /// Indicator of `[center - a, center + a]`.
    Box { a: f64, center: f64 },
    /// `e^{iAx²/2}`.
    Chirp { a: f64 },
    /// `δ(x₁) ⊗ φ(x₂)` with `φ` the Gaussian-core bump of width `sigma`.
    #[serde(rename = "line_delta_2d")]
    LineDelta2d { sigma: f64 },
    /// Indicator of the square `[-a, a]²`.
    #[serde(rename = "box2d")]
    Box2d { a: f64 },
    /// Smooth compactly supported bump with a Gaussian core of width `sigma`.
    Bump { sigma: f64 },
}

/// Analytic wave front data; direction sets are unit generators of cones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub gabor_wf_dirs: Vec<Vec<f64>>,
    /// `None` when the distribution is not compactly supported.
    pub sigma_dirs: Option<Vec<Vec<f64>>>,
    /// Euclidean support radius; `None` for unbounded support.
    pub support_radius: Option<f64>,
    pub is_schwartz: bool,
}

/// JSON form of a catalog entry instantiated on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogRecord {
    #[serde(flatten)]
    pub entry: CatalogEntry,
    pub grid: Grid,
    pub ground_truth: GroundTruth,
}

pub const NAMES: [&str; 9] =
    ["dirac", "dirac_derivative", "gaussian", "hermite", "box", "chirp", "line_delta_2d", "box2d", "bump"];

impl CatalogEntry {
    /// The entry `name` with its default parameters.
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "dirac" => CatalogEntry::Dirac,
            "dirac_derivative" => CatalogEntry::DiracDerivative { k: 1 },
            "gaussian" => CatalogEntry::Gaussian { sigma: 1.0 },
            "hermite" => CatalogEntry::Hermite { order: 3 },
            "box" => CatalogEntry::Box { a: 1.0, center: 0.0 },
            "chirp" => CatalogEntry::Chirp { a: 1.0 },
            "line_delta_2d" => CatalogEntry::LineDelta2d { sigma: 0.5 },
            "box2d" => CatalogEntry::Box2d { a: 1.0 },
            "bump" => CatalogEntry::Bump { sigma: 0.5 },
            other => return Err(Error::UnknownEntry(other.to_string())),
        })
    }

    /// `name` with defaults overridden by the fields present in `params`
    /// (a JSON object).
    pub fn with_params(name: &str, params: &serde_json::Value) -> Result<Self> {
        let base = Self::by_name(name)?;
        if params.is_null() || params.as_object().is_some_and(|m| m.is_empty()) {
            return Ok(base);
        }
        let mut value = serde_json::to_value(&base)?;
        if let Some(overrides) = params.as_object() {
            let target = value
                .as_object_mut()
                .expect("adjacently tagged entry serializes to an object")
                .entry("params")
                .or_insert_with(|| serde_json::json!({}));
            let Some(fields) = target.as_object_mut() else {
                return Err(invalid(name, "entry takes no parameters"));
            };
            for (k, v) in overrides {
                if !fields.contains_key(k) {
                    return Err(invalid(name, &format!("unknown parameter `{k}`")));
                }
                fields.insert(k.clone(), v.clone());
            }
        } else if !params.is_null() {
            return Err(invalid(name, "parameters must be a JSON object"));
        }
        serde_json::from_value(value).map_err(|e| invalid(name, &e.to_string()))
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Dirac => "dirac",
            CatalogEntry::DiracDerivative { .. } => "dirac_derivative",
            CatalogEntry::Gaussian { .. } => "gaussian",
            CatalogEntry::Hermite { .. } => "hermite",
            CatalogEntry::Box { .. } => "box",
            CatalogEntry::Chirp { .. } => "chirp",
            CatalogEntry::LineDelta2d { .. } => "line_delta_2d",
            CatalogEntry::Box2d { .. } => "box2d",
            CatalogEntry::Bump { .. } => "bump",
        }
    }

    /// Spatial dimension the entry lives in.
    pub fn dim(&self) -> usize {
        match self {
            CatalogEntry::LineDelta2d { .. } | CatalogEntry::Box2d { .. } => 2,
            _ => 1,
        }
    }

    /// Short human-readable label including parameters.
    pub fn label(&self) -> String {
        match self {
            CatalogEntry::Dirac => "dirac".into(),
            CatalogEntry::DiracDerivative { k } => format!("dirac_derivative(k={k})"),
            CatalogEntry::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
            CatalogEntry::Hermite { order } => format!("hermite(order={order})"),
            CatalogEntry::Box { a, center } => format!("box(a={a}, center={center})"),
            CatalogEntry::Chirp { a } => format!("chirp(a={a})"),
            CatalogEntry::LineDelta2d { sigma } => format!("line_delta_2d(sigma={sigma})"),
            CatalogEntry::Box2d { a } => format!("box2d(a={a})"),
            CatalogEntry::Bump { sigma } => format!("bump(sigma={sigma})"),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(self.name(), &format!("{what} must be positive, got {v}")))
            }
        };
        match *self {
            CatalogEntry::Gaussian { sigma } | CatalogEntry::LineDelta2d { sigma } | CatalogEntry::Bump { sigma } => {
                positive(sigma, "sigma")
            }
            CatalogEntry::Box { a, center } => {
                positive(a, "a")?;
                if center.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(self.name(), "center must be finite"))
                }
            }
            CatalogEntry::Box2d { a } => positive(a, "a"),
            CatalogEntry::Chirp { a } => {
                if a.is_finite() && a != 0.0 {
                    Ok(())
                } else {
                    Err(invalid(self.name(), "chirp rate must be finite and nonzero"))
                }
            }
            _ => Ok(()),
        }
    }

    /// Analytic ground truth (independent of the grid).
    pub fn ground_truth(&self) -> GroundTruth {
        let poles_1d = || vec![vec![1.0], vec![-1.0]];
        let phase_poles_1d = || vec![vec![0.0, 1.0], vec![0.0, -1.0]];
        match *self {
            // û = (iξ)^k grows or stays constant along both frequency rays,
            // while |V_ψ δ^{(k)}(x, ξ)| carries a Gaussian factor in x.
            CatalogEntry::Dirac | CatalogEntry::DiracDerivative { .. } => GroundTruth {
                gabor_wf_dirs: phase_poles_1d(),
                sigma_dirs: Some(poles_1d()),
                support_radius: Some(0.0),
                is_schwartz: false,
            },
            CatalogEntry::Gaussian { .. } | CatalogEntry::Hermite { .. } => {
                GroundTruth { gabor_wf_dirs: vec![], sigma_dirs: None, support_radius: None, is_schwartz: true }
            }
            // û = 2 e^{-i c ξ} sin(aξ)/ξ decays only like |ξ|^{-1} in both directions.
            CatalogEntry::Box { a, center } => GroundTruth {
                gabor_wf_dirs: phase_poles_1d(),
                sigma_dirs: Some(poles_1d()),
                support_radius: Some(center.abs() + a),
                is_schwartz: false,
            },
            // |V_ψ u(x, ξ)| is a Gaussian in ξ - A x, so it concentrates on the
            // line ξ = A x and decays rapidly away from it.
            CatalogEntry::Chirp { a } => {
                let s = (1.0 + a * a).sqrt();
                GroundTruth {
                    gabor_wf_dirs: vec![vec![1.0 / s, a / s], vec![-1.0 / s, -a / s]],
                    sigma_dirs: None,
                    support_radius: None,
                    is_schwartz: false,
                }
            }
            // û(ξ) = φ̂(ξ₂) is Schwartz in ξ₂ and constant in ξ₁: only the
            // ξ₁ axis escapes rapid decay.
            CatalogEntry::LineDelta2d { sigma } => GroundTruth {
                gabor_wf_dirs: vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0, 0.0]],
                sigma_dirs: Some(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]),
                support_radius: Some(BUMP_EDGE * sigma),
                is_schwartz: false,
            },
            // û = 4 sin(aξ₁) sin(aξ₂)/(ξ₁ξ₂) decays like |ξ|^{-2} off the axes and
            // like |ξ|^{-1} on them: every frequency direction is singular.
            CatalogEntry::Box2d { a } => {
                let circle = circle_generators(CIRCLE_GENERATORS);
                GroundTruth {
                    gabor_wf_dirs: circle.iter().map(|v| vec![0.0, 0.0, v[0], v[1]]).collect(),
                    sigma_dirs: Some(circle),
                    support_radius: Some(a * std::f64::consts::SQRT_2),
                    is_schwartz: false,
                }
            }
            CatalogEntry::Bump { sigma } => GroundTruth {
                gabor_wf_dirs: vec![],
                sigma_dirs: Some(vec![]),
                support_radius: Some(BUMP_EDGE * sigma),
                is_schwartz: true,
            },
        }
    }

    /// Samples the entry on `grid` together with its ground truth.
    pub fn instantiate(&self, grid: &Grid) -> Result<(SampledDistribution, GroundTruth)> {
        self.validate()?;
        if grid.dim() != self.dim() {
            return Err(invalid(
                self.name(),
                &format!("lives in dimension {}, grid has dimension {}", self.dim(), grid.dim()),
            ));
        }
        let g = *grid;
        let h = g.spacing();
        let c = g.center_index();
        let label = self.label();
        let real = |v: f64| Complex64::new(v, 0.0);
        let u = match *self {
            CatalogEntry::Dirac => spike_stencil(g, &[1.0], label),
            CatalogEntry::DiracDerivative { k } => {
                // apply the central difference (f(x+h) - f(x-h)) / (2h) k times
                let mut stencil = vec![1.0];
                for _ in 0..k {
                    let mut next = vec![0.0; stencil.len() + 2];
                    for (i, s) in stencil.iter().enumerate() {
                        next[i] += s / (2.0 * h);
                        next[i + 2] -= s / (2.0 * h);
                    }
                    stencil = next;
                }
                if stencil.len() / 2 >= c {
                    return Err(invalid(self.name(), "derivative order too large for the grid"));
                }
                spike_stencil(g, &stencil, label)
            }
            CatalogEntry::Gaussian { sigma } => {
                let norm = (PI * sigma * sigma).powf(-0.25);
                SampledDistribution::from_fn(g, SampleKind::Function, label, |x| {
                    real(norm * (-x[0] * x[0] / (2.0 * sigma * sigma)).exp())
                })
            }
            CatalogEntry::Hermite { order } => {
                if order > g.n() / 4 {
                    return Err(invalid(self.name(), "order exceeds n/4"));
                }
                SampledDistribution::from_fn(g, SampleKind::Function, label, |x| {
                    real(hermite_functions(x[0], order)[order])
                })
            }
            CatalogEntry::Box { a, center } => SampledDistribution::from_fn(g, SampleKind::Function, label, |x| {
                real(if (x[0] - center).abs() <= a { 1.0 } else { 0.0 })
            }),
            CatalogEntry::Chirp { a } => SampledDistribution::from_fn(g, SampleKind::Function, label, |x| {
                Complex64::from_polar(1.0, a * x[0] * x[0] / 2.0)
            }),
            CatalogEntry::LineDelta2d { sigma } => {
                let n = g.n();
                let mut s = vec![Complex64::new(0.0, 0.0); n * n];
                for j in 0..n {
                    s[c * n + j] = real(gaussian_bump(g.coord(j), sigma) / h);
                }
                SampledDistribution::new(g, s, SampleKind::SingularSpike, label)?
            }
            CatalogEntry::Box2d { a } => SampledDistribution::from_fn(g, SampleKind::Function, label, |x| {
                real(if x[0].abs() <= a && x[1].abs() <= a { 1.0 } else { 0.0 })
            }),
            CatalogEntry::Bump { sigma } => {
                SampledDistribution::from_fn(g, SampleKind::Function, label, |x| real(gaussian_bump(x[0], sigma)))
            }
        };
        let truth = self.ground_truth();
        if truth.support_radius.is_some() {
            let extent = u.support_extent();
            if extent > g.guard_radius() * (1.0 + 1e-12) {
                return Err(Error::SupportTooLarge { radius: extent, limit: g.guard_radius() });
            }
        }
        Ok((u, truth))
    }

    pub fn record(&self, grid: &Grid) -> Result<CatalogRecord> {
        let (_, ground_truth) = self.instantiate(grid)?;
        Ok(CatalogRecord { entry: self.clone(), grid: *grid, ground_truth })
    }
}

/// Looks up `name` with default parameters and samples it on `grid`.
pub fn catalog_entry(name: &str, grid: &Grid) -> Result<(SampledDistribution, GroundTruth)> {
    CatalogEntry::by_name(name)?.instantiate(grid)
}

/// `count` equally spaced unit vectors on the circle, starting at `(1, 0)`.
pub fn circle_generators(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / count as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Unit generator along the diagonal `(1, 1)/√2`, used by propagation tests.
pub fn diagonal() -> Vec<f64> {
    vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]
}

fn spike_stencil(g: Grid, stencil: &[f64], label: String) -> SampledDistribution {
    let h = g.spacing();
    let c = g.center_index();
    let half = stencil.len() / 2;
    let mut s = vec![Complex64::new(0.0, 0.0); g.n()];
    for (i, w) in stencil.iter().enumerate() {
        s[c + i - half] = Complex64::new(w / h, 0.0);
    }
    SampledDistribution::new(g, s, SampleKind::SingularSpike, label).expect("length matches grid")
}

fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidParams { name: name.to_string(), reason: reason.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Grid {
        Grid::new(1, 1024, 20.0).unwrap()
    }

    fn g2() -> Grid {
        Grid::new(2, 256, 10.0).unwrap()
    }

    #[test]
    fn every_name_instantiates_on_its_grid() {
        for name in NAMES {
            let e = CatalogEntry::by_name(name).unwrap();
            let g = if e.dim() == 1 { g1() } else { g2() };
            let (u, t) = e.instantiate(&g).unwrap();
            assert_eq!(u.samples().len(), g.len());
            assert_eq!(t.is_schwartz, t.gabor_wf_dirs.is_empty());
            if let Some(s) = &t.sigma_dirs {
                assert_eq!(t.is_schwartz, s.is_empty());
            }
        }
    }

    #[test]
    fn compact_entries_encode_the_product_structure() {
        for name in NAMES {
            let t = CatalogEntry::by_name(name).unwrap().ground_truth();
            if t.support_radius.is_none() {
                continue;
            }
            let sigma = t.sigma_dirs.clone().expect("compact entries define sigma");
            let d = t.gabor_wf_dirs.first().map_or(0, |v| v.len() / 2);
            let projected: Vec<Vec<f64>> = t.gabor_wf_dirs.iter().map(|v| v[d..].to_vec()).collect();
            for v in &t.gabor_wf_dirs {
                assert!(v[..d].iter().all(|c| *c == 0.0), "{name}");
            }
            assert_eq!(projected, sigma, "{name}");
        }
    }

    #[test]
    fn dirac_has_unit_mass() {
        let g = g1();
        let (u, t) = catalog_entry("dirac", &g).unwrap();
        let mass: f64 = u.samples().iter().map(|z| z.re).sum::<f64>() * g.spacing();
        assert!((mass - 1.0).abs() < 1e-14);
        assert_eq!(u.samples()[g.center_index()].re, 1.0 / g.spacing());
        assert_eq!(t.gabor_wf_dirs, vec![vec![0.0, 1.0], vec![0.0, -1.0]]);
        assert_eq!(t.sigma_dirs, Some(vec![vec![1.0], vec![-1.0]]));
    }

    #[test]
    fn dirac_derivative_pairs_to_minus_the_derivative() {
        // <δ', φ> = -φ'(0); with φ(x) = x e^{-x²} that is -1
        let g = g1();
        let (u, _) = CatalogEntry::DiracDerivative { k: 1 }.instantiate(&g).unwrap();
        let pairing: f64 = u
            .samples()
            .iter()
            .enumerate()
            .map(|(j, z)| {
                let x = g.coord(j);
                z.re * x * (-x * x).exp()
            })
            .sum::<f64>()
            * g.spacing();
        assert!((pairing + 1.0).abs() < 1e-2);
        let (u2, _) = CatalogEntry::DiracDerivative { k: 2 }.instantiate(&g).unwrap();
        // <δ'', x²> = 2 exactly for the central-difference stencil
        let p2: f64 =
            u2.samples().iter().enumerate().map(|(j, z)| z.re * g.coord(j).powi(2)).sum::<f64>() * g.spacing();
        assert!((p2 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_is_normalized() {
        let (u, t) = catalog_entry("gaussian", &g1()).unwrap();
        assert!((u.l2_norm() - 1.0).abs() < 1e-12);
        assert!(t.is_schwartz && t.gabor_wf_dirs.is_empty());
    }

    #[test]
    fn line_delta_ground_truth() {
        let (_, t) = catalog_entry("line_delta_2d", &g2()).unwrap();
        assert_eq!(t.sigma_dirs, Some(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]));
        assert_eq!(t.gabor_wf_dirs, vec![vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0, 0.0]]);
    }

    #[test]
    fn chirp_is_a_diagonal() {
        let (_, t) = catalog_entry("chirp", &g1()).unwrap();
        assert!(t.sigma_dirs.is_none() && t.support_radius.is_none());
        let d = diagonal();
        assert!((t.gabor_wf_dirs[0][0] - d[0]).abs() < 1e-15);
        assert!((t.gabor_wf_dirs[0][1] - d[1]).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_and_oversized() {
        assert!(matches!(catalog_entry("nope", &g1()), Err(Error::UnknownEntry(_))));
        let small = Grid::new(1, 256, 1.5).unwrap();
        assert!(matches!(catalog_entry("box", &small), Err(Error::SupportTooLarge { .. })));
        assert!(catalog_entry("box2d", &g1()).is_err());
        assert!(CatalogEntry::Gaussian { sigma: -1.0 }.instantiate(&g1()).is_err());
    }

    #[test]
    fn params_override_defaults() {
        let e = CatalogEntry::with_params("box", &serde_json::json!({"a": 2.0})).unwrap();
        assert_eq!(e, CatalogEntry::Box { a: 2.0, center: 0.0 });
        assert!(CatalogEntry::with_params("box", &serde_json::json!({"b": 2.0})).is_err());
        assert!(CatalogEntry::with_params("dirac", &serde_json::json!({"b": 2.0})).is_err());
        assert_eq!(CatalogEntry::with_params("dirac", &serde_json::Value::Null).unwrap(), CatalogEntry::Dirac);
    }

    #[test]
    fn record_json_shape() {
        let r = CatalogEntry::by_name("box").unwrap().record(&g1()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["name"], "box");
        assert_eq!(v["params"]["a"], 1.0);
        assert_eq!(v["grid"]["n"], 1024);
        assert_eq!(v["ground_truth"]["is_schwartz"], false);
        let back: CatalogRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back.entry, r.entry);
    }
}
