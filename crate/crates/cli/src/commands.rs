use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use wfset_core::catalog::NAMES;
use wfset_core::io::write_samples;
use wfset_core::symplectic::to_rows;
use wfset_core::{
    check_main_theorem, hamilton_map, ker_re_f, poisson_bracket_vanishes, singular_space, verify_propagation,
    CatalogEntry, CatalogRecord, HermiteBasis, QuadraticHamiltonian, SampledDistribution, SingularSpace,
    WavefrontReport,
};

use crate::config::{CommonArgs, RunConfig};

/// How a command finished, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    fn from_passed(passed: bool) -> Self {
        if passed {
            Status::Success
        } else {
            Status::VerificationFailed
        }
    }
}

fn records(args: &CommonArgs) -> anyhow::Result<Vec<CatalogRecord>> {
    NAMES
        .iter()
        .map(|name| {
            let entry = CatalogEntry::by_name(name)?;
            let grid = args.grid(entry.dim())?;
            Ok(entry.record(&grid)?)
        })
        .collect()
}

fn params_text(entry: &CatalogEntry) -> anyhow::Result<String> {
    let value = serde_json::to_value(entry)?;
    Ok(match value.get("params") {
        Some(p) => p.to_string(),
        None => "{}".to_string(),
    })
}

/// Lists short direction sets in full and summarizes long ones.
fn format_dirs(dirs: &[Vec<f64>]) -> String {
    const SHOWN: usize = 8;
    if dirs.len() > SHOWN {
        return format!("{} directions (see the JSON report)", dirs.len());
    }
    let items: Vec<String> = dirs
        .iter()
        .map(|v| {
            let parts: Vec<String> = v.iter().map(|c| format!("{:.4}", (c * 1e4).round() / 1e4 + 0.0)).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

pub fn catalog_list(args: &CommonArgs, json: bool) -> anyhow::Result<Status> {
    let records = records(args)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&records)?);
        return Ok(Status::Success);
    }
    println!(
        "{:<18} {:>3}  {:<28} {:>9} {:>9} {:>9}  schwartz",
        "name", "dim", "params", "wf_dirs", "sigma", "support"
    );
    for r in &records {
        let gt = &r.ground_truth;
        let sigma = gt.sigma_dirs.as_ref().map_or("-".to_string(), |s| s.len().to_string());
        let support = gt.support_radius.map_or("inf".to_string(), |s| format!("{s:.3}"));
        println!(
            "{:<18} {:>3}  {:<28} {:>9} {:>9} {:>9}  {}",
            r.entry.name(),
            r.entry.dim(),
            params_text(&r.entry)?,
            gt.gabor_wf_dirs.len(),
            sigma,
            support,
            gt.is_schwartz
        );
    }
    Ok(Status::Success)
}

pub fn catalog_show(args: &CommonArgs, name: &str) -> anyhow::Result<Status> {
    let entry = args.entry(name)?;
    let record = entry.record(&args.grid(entry.dim())?)?;
    println!("{}", serde_json::to_string_pretty(&record)?);
    Ok(Status::Success)
}

fn create_out(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_profiles(path: &Path, report: &WavefrontReport) -> anyhow::Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?);
    report.write_profiles_csv(&mut out)?;
    out.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn dump(path: &Path, u: &SampledDistribution) -> anyhow::Result<()> {
    let mut out = BufWriter::new(File::create(path).with_context(|| format!("cannot write {}", path.display()))?);
    write_samples(&mut out, u)?;
    out.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}

fn out_file(config: &RunConfig, suffix: &str) -> PathBuf {
    config.out.join(format!("{}_{suffix}", config.entry.name()))
}

pub fn analyze(args: &CommonArgs, name: &str) -> anyhow::Result<Status> {
    let config = RunConfig::new(args, name)?;
    let (u, truth) = config.instantiate()?;
    let gabor = config.detector.gabor(&u)?;
    let sigma = config.detector.sigma(&u)?;

    create_out(&config.out)?;
    write_json(&out_file(&config, "gabor.json"), &gabor)?;
    write_profiles(&out_file(&config, "gabor_profiles.csv"), &gabor)?;
    write_json(&out_file(&config, "sigma.json"), &sigma)?;
    write_profiles(&out_file(&config, "sigma_profiles.csv"), &sigma)?;
    if config.dump_samples {
        dump(&out_file(&config, "samples.gwf"), &u)?;
    }

    println!("{}: {}", config.entry.label(), format_grid(&config));
    println!("  gabor singular directions: {}", format_dirs(&gabor.singular_dirs));
    println!("  sigma directions: {}", format_dirs(&sigma.singular_dirs));
    println!("  expected directions: {}", format_dirs(&truth.gabor_wf_dirs));

    if !u.is_compactly_supported() {
        eprintln!("warning: not compactly supported: theorem check skipped");
        return Ok(Status::Success);
    }
    let comparison = check_main_theorem(&gabor, &sigma, config.ang_tol)?;
    write_json(&out_file(&config, "theorem.json"), &comparison)?;
    println!(
        "  theorem check: {} (x offset {:.3}°, hausdorff {:.3}°, tolerance {:.3}°)",
        if comparison.passed { "PASS" } else { "FAIL" },
        comparison.x_offset_angle.to_degrees(),
        comparison.hausdorff_angle.to_degrees(),
        comparison.ang_tol.to_degrees()
    );
    Ok(Status::from_passed(comparison.passed))
}

fn format_grid(config: &RunConfig) -> String {
    format!(
        "d = {}, n = {}, L = {}, lambda = {}, n_dirs = {}, n_thresh = {}",
        config.grid.dim(),
        config.grid.n(),
        config.grid.length(),
        config.detector.lambda,
        config.detector.n_dirs,
        config.detector.n_thresh
    )
}

pub fn propagate(args: &CommonArgs, name: &str, t: f64, n_max: Option<usize>) -> anyhow::Result<Status> {
    anyhow::ensure!(t.is_finite(), "--t must be finite");
    let config = RunConfig::new(args, name)?;
    let (u, truth) = config.instantiate()?;
    let basis = match n_max {
        Some(n_max) => HermiteBasis::new(&config.grid, n_max)?,
        None => HermiteBasis::largest(&config.grid)?,
    };
    let report = verify_propagation(&u, &truth, t, &basis, &config.detector, config.ang_tol)?;

    create_out(&config.out)?;
    write_json(&out_file(&config, "propagation.json"), &report)?;
    if config.dump_samples {
        let state = wfset_core::harmonic_propagate(&u, t, &basis)?.state;
        dump(&out_file(&config, "propagated.gwf"), &state)?;
    }

    println!("{}: {}, t = {}, n_max = {}", config.entry.label(), format_grid(&config), t, basis.n_max());
    println!("  predicted directions: {}", format_dirs(&report.predicted_dirs));
    println!("  detected directions: {}", format_dirs(&report.detected_dirs));
    println!(
        "  smoothing: expected {}, detected {}; truncation error {:.3e}",
        report.smooth_expected, report.smooth_detected, report.truncation_error
    );
    println!(
        "  verification: {} (hausdorff {:.3}°, tolerance {:.3}°)",
        if report.passed { "PASS" } else { "FAIL" },
        report.hausdorff_angle.to_degrees(),
        report.ang_tol.to_degrees()
    );
    Ok(Status::from_passed(report.passed))
}

/// JSON written by `singular-space`.
#[derive(Debug, Serialize)]
struct SingularSpaceOutput {
    dim: usize,
    tol: f64,
    hamilton_map_re: Vec<Vec<f64>>,
    hamilton_map_im: Vec<Vec<f64>>,
    singular_space: SingularSpace,
    poisson_bracket_vanishes: bool,
    /// Present when the bracket vanishes and the singular space reduces to a kernel.
    ker_re_f: Option<SingularSpace>,
    /// Largest principal-angle sine between the two spaces.
    distance_to_ker_re_f: Option<f64>,
}

pub fn singular_space_cmd(args: &CommonArgs, file: &Path, tol: f64) -> anyhow::Result<Status> {
    anyhow::ensure!(tol > 0.0 && tol < 1.0, "--tol must lie in (0, 1), got {tol}");
    let text = fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let q = QuadraticHamiltonian::from_json(&text)?;
    let f = hamilton_map(&q);
    let s = singular_space(&q, tol);
    let vanishes = poisson_bracket_vanishes(&q, tol);
    let kernel = vanishes.then(|| ker_re_f(&q, tol));
    let output = SingularSpaceOutput {
        dim: q.dim(),
        tol,
        hamilton_map_re: to_rows(&f.re()),
        hamilton_map_im: to_rows(&f.im()),
        distance_to_ker_re_f: kernel.as_ref().map(|k| s.distance(k)),
        singular_space: s,
        poisson_bracket_vanishes: vanishes,
        ker_re_f: kernel,
    };

    create_out(&args.out)?;
    write_json(&args.out.join("singular_space.json"), &output)?;
    println!("dim S = {}, basis {}", output.singular_space.dim(), format_dirs(&output.singular_space.basis));
    println!("poisson bracket vanishes: {vanishes}");
    if let Some(d) = output.distance_to_ker_re_f {
        println!("distance to Ker Re F: {d:.3e}");
    }
    Ok(Status::Success)
}
