use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use wfset_core::wavefront::RaySampling;
use wfset_core::{CatalogEntry, DetectorParams, Grid, GroundTruth, SampledDistribution, Taper, Window};

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Samples per axis [default: 1024 in one dimension, 512 in two]
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Box side length L, samples span [-L/2, L/2) [default: 40 in one dimension, 20 in two]
    #[arg(long = "L", global = true)]
    pub length: Option<f64>,

    /// Gaussian window width
    #[arg(long, global = true, default_value_t = 1.0)]
    pub lambda: f64,

    /// Number of detector directions [default: 256 in one dimension, 32 in two]
    #[arg(long, global = true)]
    pub n_dirs: Option<usize>,

    /// Smallest sampled radius along each ray
    #[arg(long, global = true, default_value_t = 1.0)]
    pub r_min: f64,

    /// Largest sampled radius [default: largest resolvable radius]
    #[arg(long, global = true)]
    pub r_max: Option<f64>,

    /// Ratio between consecutive radii
    #[arg(long, global = true, default_value_t = 1.15)]
    pub rho: f64,

    /// Decay exponent below which a direction counts as singular
    #[arg(long, global = true, default_value_t = 2.5)]
    pub n_thresh: f64,

    /// Angular tolerance in radians for set comparisons [default: two angular steps]
    #[arg(long, global = true)]
    pub ang_tol: Option<f64>,

    /// Catalog parameters as a JSON object, e.g. '{"sigma": 0.5}'
    #[arg(long, global = true)]
    pub params: Option<String>,

    /// Output directory
    #[arg(long, global = true, default_value = "wfset-out")]
    pub out: PathBuf,

    /// Also write the analysed samples as a binary dump
    #[arg(long, global = true)]
    pub dump_samples: bool,
}

impl CommonArgs {
    pub fn entry(&self, name: &str) -> anyhow::Result<CatalogEntry> {
        let entry = match &self.params {
            None => CatalogEntry::by_name(name)?,
            Some(text) => {
                let value: serde_json::Value = serde_json::from_str(text).context("--params is not valid JSON")?;
                CatalogEntry::with_params(name, &value)?
            }
        };
        Ok(entry)
    }

    pub fn grid(&self, dim: usize) -> anyhow::Result<Grid> {
        let (n, length) = match dim {
            1 => (1024, 40.0),
            _ => (512, 20.0),
        };
        let n = self.n.unwrap_or(n);
        let length = self.length.unwrap_or(length);
        Ok(Grid::new(dim, n, length / 2.0)?)
    }
}

/// Fully validated settings of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub entry: CatalogEntry,
    pub grid: Grid,
    pub detector: DetectorParams,
    pub ang_tol: f64,
    pub out: PathBuf,
    pub dump_samples: bool,
}

impl RunConfig {
    /// Resolves the catalog entry and checks every flag against the grid
    /// before any work starts.
    pub fn new(args: &CommonArgs, name: &str) -> anyhow::Result<Self> {
        let entry = args.entry(name)?;
        let grid = args.grid(entry.dim())?;
        let mut detector = DetectorParams::for_dim(entry.dim());
        detector.lambda = args.lambda;
        if let Some(n_dirs) = args.n_dirs {
            detector.n_dirs = n_dirs;
        }
        detector.r_min = args.r_min;
        detector.r_max = args.r_max;
        detector.rho = args.rho;
        detector.n_thresh = args.n_thresh;
        if !detector.n_thresh.is_finite() {
            bail!("--n-thresh must be finite");
        }
        let ang_tol = args.ang_tol.unwrap_or(detector.ang_tol());
        if !(ang_tol > 0.0 && ang_tol < std::f64::consts::PI) {
            bail!("--ang-tol must lie in (0, π), got {ang_tol}");
        }
        Window::new(detector.lambda)?.check_resolvable(&grid)?;
        let compact = entry.ground_truth().support_radius.is_some();
        RaySampling::gabor(&grid, compact, detector.n_dirs, detector.r_min, detector.r_max, detector.rho)?;
        RaySampling::frequency(&grid, detector.n_dirs, detector.r_min, detector.r_max, detector.rho)?;
        Ok(RunConfig { entry, grid, detector, ang_tol, out: args.out.clone(), dump_samples: args.dump_samples })
    }

    pub fn instantiate(&self) -> anyhow::Result<(SampledDistribution, GroundTruth)> {
        Ok(self.entry.instantiate(&self.grid)?)
    }
}
