//! Direction grids on spheres, angular distances and the reduction of
//! flagged direction sets to representative generators.

use std::f64::consts::{FRAC_PI_2, PI};

/// `count` equally spaced points `(cos θ, sin θ)` with `θ_i = 2π i / count`.
pub fn circle(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / count as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Near-uniform grid on `S³ ⊂ R⁴` with angular step about `2π/n`:
/// `ω = (cos α (cos β, sin β), sin α (cos γ, sin γ))`, with `α` stepping by
/// `(π/2)/(n/4)` and the two circle angles sampled with `round(n cos α)` and
/// `round(n sin α)` points. Requires `n` divisible by 4.
pub fn sphere3(n: usize) -> Vec<Vec<f64>> {
    let m = n / 4;
    let mut out = Vec::new();
    for j in 0..=m {
        let alpha = j as f64 * FRAC_PI_2 / m as f64;
        let (ca, sa) = match j {
            0 => (1.0, 0.0),
            _ if j == m => (0.0, 1.0),
            _ => (alpha.cos(), alpha.sin()),
        };
        let nb = if j == m { 1 } else { ((n as f64 * ca).round() as usize).max(1) };
        let ng = if j == 0 { 1 } else { ((n as f64 * sa).round() as usize).max(1) };
        for ib in 0..nb {
            let beta = 2.0 * PI * ib as f64 / nb as f64;
            for ig in 0..ng {
                let gamma = 2.0 * PI * ig as f64 / ng as f64;
                out.push(vec![ca * beta.cos(), ca * beta.sin(), sa * gamma.cos(), sa * gamma.sin()]);
            }
        }
    }
    out
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn normalized(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|c| c / n).collect()
}

/// Angle between two nonzero vectors, accurate for small and large angles.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    let chord = a.iter().zip(b).map(|(x, y)| (x / na - y / nb).powi(2)).sum::<f64>().sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

/// Bidirectional angular Hausdorff distance between two direction sets:
/// 0 if both are empty, `∞` if exactly one is.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let one_sided = |p: &[Vec<f64>], q: &[Vec<f64>]| {
        p.iter().map(|u| q.iter().map(|v| angle(u, v)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Slack on slopes when choosing among candidate representatives.
const SLOPE_SLACK: f64 = 0.25;

/// Representatives and isolated flags of a flagged direction set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Selection {
    pub representatives: Vec<usize>,
    pub isolated: Vec<usize>,
}

/// Reduces the flagged directions to the generators of the detected cones.
///
/// Flagged directions within 1.5 angular steps form connected components
/// (discretised open cones). Within each, a direction is a candidate when it
/// is, up to half a step, the deepest inside the flagged region (largest
/// angle to any unflagged direction); among nearby candidates, those with the
/// slowest decay (smallest slope, up to a slack of 0.25) are kept. Components
/// of a single direction are also reported as isolated.
///
/// With `connected = false` (the two-point sphere `S⁰`) every flagged
/// direction is its own cone.
pub fn select_representatives(
    dirs: &[Vec<f64>],
    slopes: &[f64],
    flagged: &[bool],
    step: f64,
    connected: bool,
) -> Selection {
    let f: Vec<usize> = (0..dirs.len()).filter(|&i| flagged[i]).collect();
    if !connected || f.is_empty() {
        return Selection { representatives: f, isolated: vec![] };
    }
    let unflagged: Vec<usize> = (0..dirs.len()).filter(|&i| !flagged[i]).collect();
    let link = 1.5 * step + 1e-9;
    let reach = 2.0 * step + 1e-9;
    let units: Vec<Vec<f64>> = dirs.iter().map(|d| normalized(d)).collect();
    let nf = f.len();
    let pair: Vec<f64> =
        (0..nf).flat_map(|i| (0..nf).map(move |j| (i, j))).map(|(i, j)| angle(&units[f[i]], &units[f[j]])).collect();
    let ang = |i: usize, j: usize| pair[i * nf + j];
    let depth: Vec<f64> = f
        .iter()
        .map(|&i| unflagged.iter().map(|&u| angle(&units[i], &units[u])).fold(f64::INFINITY, f64::min))
        .collect();

    let mut comp = vec![usize::MAX; nf];
    let mut sizes = Vec::new();
    for start in 0..nf {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        comp[start] = id;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(k) = stack.pop() {
            size += 1;
            for (j, c) in comp.iter_mut().enumerate() {
                if *c == usize::MAX && ang(k, j) <= link {
                    *c = id;
                    stack.push(j);
                }
            }
        }
        sizes.push(size);
    }

    let candidate: Vec<bool> = (0..nf)
        .map(|i| {
            let deepest = (0..nf).filter(|&j| ang(i, j) <= link).map(|j| depth[j]).fold(f64::NEG_INFINITY, f64::max);
            depth[i] >= deepest - 0.5 * step
        })
        .collect();
    let mut sel = Selection::default();
    for i in 0..nf {
        if sizes[comp[i]] == 1 {
            sel.isolated.push(f[i]);
        }
        if !candidate[i] {
            continue;
        }
        let best = (0..nf)
            .filter(|&j| candidate[j] && comp[j] == comp[i] && ang(i, j) <= reach)
            .map(|j| slopes[f[j]])
            .fold(f64::INFINITY, f64::min);
        if slopes[f[i]] <= best + SLOPE_SLACK {
            sel.representatives.push(f[i]);
        }
    }
    sel
}
