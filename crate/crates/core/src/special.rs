//! Scalar special functions shared by the catalog, windows and propagator.

/// `e^{-1/z}` for `z > 0`, zero otherwise; the standard smooth-but-flat germ.
fn flat_germ(z: f64) -> f64 {
    if z > 0.0 {
        (-1.0 / z).exp()
    } else {
        0.0
    }
}

/// Smooth cutoff in `t`: exactly 1 for `t <= r0`, exactly 0 for `t >= r1`,
/// `C^∞` in between.
pub fn smooth_cutoff(t: f64, r0: f64, r1: f64) -> f64 {
    let s = ((t - r0) / (r1 - r0)).clamp(0.0, 1.0);
    let a = flat_germ(1.0 - s);
    let b = flat_germ(s);
    a / (a + b)
}

/// Compactly supported test function: a Gaussian core `e^{-x²/(2σ²)}`
/// cut off smoothly between `8.6σ` and `9.6σ`.
///
/// The Gaussian core makes the Fourier decay visibly super-polynomial on the
/// resolvable band; the classical `e^{-1/(1-x²)}` bump decays only like
/// `e^{-√ξ}` there, which a finite log-log fit cannot tell from a power law.
pub fn gaussian_bump(x: f64, sigma: f64) -> f64 {
    (-x * x / (2.0 * sigma * sigma)).exp() * smooth_cutoff(x.abs(), BUMP_CORE * sigma, BUMP_EDGE * sigma)
}

pub const BUMP_CORE: f64 = 8.6;
pub const BUMP_EDGE: f64 = 9.6;

/// L²-normalised Hermite functions `h_0..=h_n_max` at `x` via the
/// three-term recurrence `h_k = √(2/k) x h_{k-1} - √((k-1)/k) h_{k-2}`.
pub fn hermite_functions(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(h0);
    if n_max >= 1 {
        out.push(std::f64::consts::SQRT_2 * x * h0);
    }
    for k in 2..=n_max {
        let kf = k as f64;
        let v = (2.0 / kf).sqrt() * x * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(v);
    }
    out
}
