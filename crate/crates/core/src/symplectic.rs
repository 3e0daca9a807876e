//! Quadratic Hamiltonians `q(X) = <X, Q X>` on phase space `R^{2d}`, their
//! Hamilton maps `F = J Q`, singular spaces and flows.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative threshold for numerical kernels.
pub const DEFAULT_TOL: f64 = 1e-10;

/// The standard symplectic matrix `[[0, I], [-I, 0]]` on `R^{2d}`.
pub fn symplectic_j(d: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        j[(i, d + i)] = 1.0;
        j[(d + i, i)] = -1.0;
    }
    j
}

/// Complex symmetric `2d × 2d` matrix `Q` with `Re Q ⪰ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianSpec", into = "HamiltonianSpec")]
pub struct QuadraticHamiltonian {
    dim: usize,
    q: DMatrix<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HamiltonianSpec {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<HamiltonianSpec> for QuadraticHamiltonian {
    type Error = Error;
    fn try_from(s: HamiltonianSpec) -> Result<Self> {
        let re = from_rows(&s.re)?;
        let im = from_rows(&s.im)?;
        if re.shape() != im.shape() {
            return Err(Error::InvalidHamiltonian("re and im have different shapes".into()));
        }
        let q = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
        QuadraticHamiltonian::new(s.dim, q)
    }
}

impl From<QuadraticHamiltonian> for HamiltonianSpec {
    fn from(h: QuadraticHamiltonian) -> Self {
        HamiltonianSpec { dim: h.dim, re: to_rows(&h.re_q()), im: to_rows(&h.im_q()) }
    }
}

impl QuadraticHamiltonian {
    pub fn new(dim: usize, q: DMatrix<Complex64>) -> Result<Self> {
        if dim == 0 || q.shape() != (2 * dim, 2 * dim) {
            return Err(Error::InvalidHamiltonian(format!(
                "expected a {0}x{0} matrix, got {1}x{2}",
                2 * dim,
                q.nrows(),
                q.ncols()
            )));
        }
        if q.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidHamiltonian("non-finite entry".into()));
        }
        let asym = (&q - q.transpose()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if asym > 1e-12 {
            return Err(Error::InvalidHamiltonian(format!("not symmetric (|Q - Q^T| = {asym:e})")));
        }
        let re = q.map(|z| z.re);
        let min_eig = re.clone().symmetric_eigen().eigenvalues.min();
        if min_eig < -1e-12 {
            return Err(Error::InvalidHamiltonian(format!("Re Q has eigenvalue {min_eig:e} < 0")));
        }
        Ok(QuadraticHamiltonian { dim, q })
    }

    /// `Q` from real and imaginary parts.
    pub fn from_parts(dim: usize, re: &DMatrix<f64>, im: &DMatrix<f64>) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::InvalidHamiltonian("re and im have different shapes".into()));
        }
        Self::new(dim, DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)])))
    }

    /// The harmonic oscillator `q = i(|x|² + |ξ|²)`, i.e. `Q = i I`.
    pub fn harmonic_oscillator(dim: usize) -> Self {
        let q = DMatrix::from_diagonal_element(2 * dim, 2 * dim, Complex64::new(0.0, 1.0));
        QuadraticHamiltonian { dim, q }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.q
    }

    pub fn re_q(&self) -> DMatrix<f64> {
        self.q.map(|z| z.re)
    }

    pub fn im_q(&self) -> DMatrix<f64> {
        self.q.map(|z| z.im)
    }

    /// `q(X) = <X, Q X>` (bilinear, no conjugation).
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        let n = 2 * self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.q[(i, j)] * x[i] * x[j];
            }
        }
        acc
    }
}

/// Hamilton map `F = J Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonMap {
    f: DMatrix<Complex64>,
}

impl HamiltonMap {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.f
    }

    pub fn re(&self) -> DMatrix<f64> {
        self.f.map(|z| z.re)
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.f.map(|z| z.im)
    }
}

pub fn hamilton_map(q: &QuadraticHamiltonian) -> HamiltonMap {
    let j = symplectic_j(q.dim).map(|v| Complex64::new(v, 0.0));
    HamiltonMap { f: j * &q.q }
}

/// Orthonormal basis of a real subspace of `R^{2d}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpace {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<f64>>,
    pub tol: f64,
}

impl SingularSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for b in &self.basis {
            let c: f64 = b.iter().zip(v).map(|(x, y)| x * y).sum();
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// `‖v - P v‖`.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let p = self.project(v);
        v.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }

    /// Largest projection residual of either basis onto the other subspace,
    /// or `∞` when the dimensions differ.
    pub fn distance(&self, other: &SingularSpace) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let a = self.basis.iter().map(|v| other.residual(v));
        let b = other.basis.iter().map(|v| self.residual(v));
        a.chain(b).fold(0.0, f64::max)
    }
}

/// Numerical null space of `m` with singular values below `tol · σ_max`.
fn null_space(m: &DMatrix<f64>, tol: f64) -> SingularSpace {
    let n = m.ncols();
    let sigma_max = m.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let basis = if sigma_max == 0.0 {
        (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        // pad to at least n rows so that V^T is complete
        let rows = m.nrows().max(n);
        let mut padded = DMatrix::zeros(rows, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        let svd = padded.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        let mut basis: Vec<Vec<f64>> = (0..n)
            .filter(|&i| svd.singular_values[i] <= tol * smax)
            .map(|i| vt.row(i).iter().copied().collect())
            .collect();
        canonicalize(&mut basis);
        basis
    };
    SingularSpace { ambient_dim: n, basis, tol }
}

/// Rotates a basis to reduced row echelon-like form where possible so that
/// coordinate subspaces come out as unit vectors, and fixes signs.
fn canonicalize(basis: &mut Vec<Vec<f64>>) {
    if basis.is_empty() {
        return;
    }
    let k = basis.len();
    let n = basis[0].len();
    // orthonormal basis of the same span obtained by projecting the
    // coordinate vectors in order (Gram-Schmidt on P e_1, P e_2, ...)
    let space = SingularSpace { ambient_dim: n, basis: basis.clone(), tol: 0.0 };
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k);
    for i in 0..n {
        if out.len() == k {
            break;
        }
        let e: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        let mut v = space.project(&e);
        for _ in 0..2 {
            for o in &out {
                let c: f64 = o.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(o) {
                    *x -= c * y;
                }
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-6 {
            out.push(v.iter().map(|x| x / nv).collect());
        }
    }
    for v in &mut out {
        let lead = v.iter().copied().fold(0.0_f64, |a, x| if x.abs() > a.abs() + 1e-12 { x } else { a });
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v.iter_mut().for_each(|x| {
            if x.abs() < 1e-15 {
                *x = 0.0
            }
        });
    }
    *basis = out;
}

/// `S = ⋂_{j=0}^{2d-1} Ker[Re F (Im F)^j]` restricted to real vectors,
/// computed as the null space of the stacked real matrices.
pub fn singular_space(q: &QuadraticHamiltonian, tol: f64) -> SingularSpace {
    let f = hamilton_map(q);
    let (re, im) = (f.re(), f.im());
    let n = 2 * q.dim;
    let mut stacked = DMatrix::zeros(n * n, n);
    let mut power = DMatrix::identity(n, n);
    for j in 0..n {
        let block = &re * &power;
        stacked.view_mut((j * n, 0), (n, n)).copy_from(&block);
        power = &power * &im;
    }
    null_space(&stacked, tol)
}

/// Null space of `Re F`, which equals `S` when `{q, q̄} = 0`.
pub fn ker_re_f(q: &QuadraticHamiltonian, tol: f64) -> SingularSpace {
    if !poisson_bracket_vanishes(q, DEFAULT_TOL) {
        log::warn!("{{q, q̄}} does not vanish: Ker(Re F) need not equal the singular space");
    }
    null_space(&hamilton_map(q).re(), tol)
}

/// Matrix `B` of the quadratic form `X ↦ {q, q̄}(X) = <X, B X>`.
///
/// With `∇q = 2QX` and `{f, g} = <J∇f, ∇g>`, one gets
/// `{q, q̄}(X) = -4 Xᵀ Q J Q̄ X`, whose symmetric part is
/// `B = -2 (Q J Q̄ - Q̄ J Q)`.
pub fn poisson_bracket_matrix(q: &QuadraticHamiltonian) -> DMatrix<Complex64> {
    let j = symplectic_j(q.dim).map(|v| Complex64::new(v, 0.0));
    let qc = q.q.map(|z| z.conj());
    (&q.q * &j * &qc - &qc * &j * &q.q) * Complex64::new(-2.0, 0.0)
}

/// True when `{q, q̄}` is the zero form, relative to `‖Q‖²`.
pub fn poisson_bracket_vanishes(q: &QuadraticHamiltonian, tol: f64) -> bool {
    let b = poisson_bracket_matrix(q);
    let scale = q.q.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
    b.iter().map(|z| z.norm()).fold(0.0, f64::max) <= tol * scale
}

/// `e^{2t Im F}` (matrix exponential by scaling and squaring).
pub fn flow_matrix(q: &QuadraticHamiltonian, t: f64) -> DMatrix<f64> {
    (hamilton_map(q).im() * (2.0 * t)).exp()
}

/// `‖Mᵀ J M - J‖_F <= tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) {
        return false;
    }
    let j = symplectic_j(m.nrows() / 2);
    (m.transpose() * &j * m - j).norm() <= tol
}

/// Finite list of unit generators of a cone in phase space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectionSet {
    pub dirs: Vec<Vec<f64>>,
}

impl DirectionSet {
    /// Normalises every vector; zero vectors are rejected.
    pub fn new(dirs: Vec<Vec<f64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(dirs.len());
        for d in dirs {
            let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::Precondition("direction vectors must be nonzero".into()));
            }
            out.push(d.iter().map(|x| x / n).collect());
        }
        Ok(DirectionSet { dirs: out })
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }
}

/// Predicted generators of `(e^{2t Im F}(W ∩ S) ∩ S) \ 0` for a detected set
/// `W`: directions within `tol` of `S` are projected onto it, moved by the
/// flow, renormalised and kept if they are still within `tol` of `S`.
pub fn propagate_wf_set(q: &QuadraticHamiltonian, t: f64, dirs: &DirectionSet, tol: f64) -> DirectionSet {
    let s = singular_space(q, DEFAULT_TOL);
    let m = flow_matrix(q, t);
    let mut out = Vec::new();
    for v in &dirs.dirs {
        if v.len() != 2 * q.dim || s.residual(v) > tol {
            continue;
        }
        let p = s.project(v);
        let w = &m * nalgebra::DVector::from_vec(p);
        let nw = w.norm();
        if nw <= tol {
            continue;
        }
        let w: Vec<f64> = w.iter().map(|x| x / nw).collect();
        if s.residual(&w) <= tol {
            out.push(w);
        }
    }
    DirectionSet { dirs: out }
}

fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidHamiltonian("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

    fn real_q(entries: &[f64]) -> QuadraticHamiltonian {
        let n = (entries.len() as f64).sqrt() as usize;
        let re = DMatrix::from_row_slice(n, n, entries);
        QuadraticHamiltonian::from_parts(n / 2, &re, &DMatrix::zeros(n, n)).unwrap()
    }

    fn diag_q(re: [f64; 2], im: [f64; 2]) -> QuadraticHamiltonian {
        QuadraticHamiltonian::from_parts(
            1,
            &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(re.to_vec())),
            &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(im.to_vec())),
        )
        .unwrap()
    }

    #[test]
    fn hamilton_map_examples() {
        let osc = hamilton_map(&QuadraticHamiltonian::harmonic_oscillator(1));
        assert_eq!(osc.re(), DMatrix::zeros(2, 2));
        assert_eq!(osc.im(), symplectic_j(1));
        let heat = hamilton_map(&diag_q([0.0, 1.0], [0.0, 0.0]));
        assert_eq!(heat.re(), DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(hamilton_map(&real_q(&[1.0, 0.0, 0.0, 1.0])).re(), symplectic_j(1));
        let j = symplectic_j(2);
        assert_eq!(&j * &j, -DMatrix::<f64>::identity(4, 4));
    }

    #[test]
    fn rejects_invalid_q() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(QuadraticHamiltonian::from_parts(1, &asym, &DMatrix::zeros(2, 2)).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(QuadraticHamiltonian::from_parts(1, &indefinite, &DMatrix::zeros(2, 2)).is_err());
        assert!(QuadraticHamiltonian::from_parts(2, &DMatrix::zeros(2, 2), &DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn singular_space_examples() {
        assert_eq!(singular_space(&QuadraticHamiltonian::harmonic_oscillator(1), DEFAULT_TOL).dim(), 2);
        assert_eq!(singular_space(&QuadraticHamiltonian::harmonic_oscillator(2), DEFAULT_TOL).dim(), 4);
        assert_eq!(singular_space(&real_q(&[1.0, 0.0, 0.0, 1.0]), DEFAULT_TOL).dim(), 0);
        let heat = singular_space(&diag_q([0.0, 1.0], [0.0, 0.0]), DEFAULT_TOL);
        assert_eq!(heat.basis, vec![vec![1.0, 0.0]]);
    }

    #[test]
    fn singular_space_matches_brute_force_membership() {
        // a unit vector v lies in S iff every Re F (Im F)^j v vanishes
        let q = diag_q([0.0, 1.0], [0.0, 0.0]);
        let f = hamilton_map(&q);
        let s = singular_space(&q, DEFAULT_TOL);
        for k in 0..720 {
            let t = 2.0 * PI * k as f64 / 720.0;
            let v = nalgebra::DVector::from_vec(vec![t.cos(), t.sin()]);
            let mut p = DMatrix::<f64>::identity(2, 2);
            let mut member = true;
            for _ in 0..2 {
                member &= (f.re() * &p * &v).norm() < 1e-12;
                p *= f.im();
            }
            assert_eq!(member, s.residual(v.as_slice()) < 1e-9, "angle {t}");
        }
    }

    #[test]
    fn bracket_matrix_agrees_with_finite_differences() {
        let qs = [
            diag_q([1.0, 0.0], [0.0, 1.0]),
            QuadraticHamiltonian::from_parts(
                1,
                &DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]),
                &DMatrix::from_row_slice(2, 2, &[0.3, -1.0, -1.0, 0.7]),
            )
            .unwrap(),
        ];
        let eps = 1e-5;
        for q in &qs {
            let b = poisson_bracket_matrix(q);
            for k in 0..10 {
                let x: Vec<f64> = (0..2).map(|i| ((k * 7 + i * 3) as f64 * 0.37).sin() * 2.0).collect();
                // gradients by central differences
                let grad = |g: &dyn Fn(&[f64]) -> Complex64| -> Vec<Complex64> {
                    (0..2)
                        .map(|i| {
                            let mut p = x.clone();
                            let mut m = x.clone();
                            p[i] += eps;
                            m[i] -= eps;
                            (g(&p) - g(&m)) / (2.0 * eps)
                        })
                        .collect()
                };
                let gq = grad(&|y| q.evaluate(y));
                let gqc = grad(&|y| q.evaluate(y).conj());
                // {f, g} = ∂_ξ f ∂_x g - ∂_x f ∂_ξ g
                let bracket = gq[1] * gqc[0] - gq[0] * gqc[1];
                let form = (0..2)
                    .flat_map(|i| (0..2).map(move |j| (i, j)))
                    .map(|(i, j)| b[(i, j)] * x[i] * x[j])
                    .sum::<Complex64>();
                assert!((bracket - form).norm() < 1e-6 * (1.0 + form.norm()), "{bracket} vs {form}");
            }
        }
        // q = x² + iξ² has {q, q̄} = 8i x ξ
        let b = poisson_bracket_matrix(&qs[0]);
        assert!((b[(0, 1)] - Complex64::new(0.0, 4.0)).norm() < 1e-14);
        assert!(!poisson_bracket_vanishes(&qs[0], DEFAULT_TOL));
    }

    #[test]
    fn bracket_vanishes_for_proportional_forms() {
        assert!(poisson_bracket_vanishes(&QuadraticHamiltonian::harmonic_oscillator(2), DEFAULT_TOL));
        assert!(poisson_bracket_vanishes(&real_q(&[2.0, 1.0, 1.0, 3.0]), DEFAULT_TOL));
    }

    #[test]
    fn ker_re_f_examples() {
        assert_eq!(ker_re_f(&QuadraticHamiltonian::harmonic_oscillator(1), DEFAULT_TOL).dim(), 2);
        assert_eq!(ker_re_f(&real_q(&[1.0, 0.0, 0.0, 1.0]), DEFAULT_TOL).dim(), 0);
        assert_eq!(ker_re_f(&diag_q([0.0, 1.0], [0.0, 0.0]), DEFAULT_TOL).basis, vec![vec![1.0, 0.0]]);
        // without the bracket condition the two spaces can differ
        let q = diag_q([1.0, 0.0], [0.0, 1.0]);
        assert_eq!(singular_space(&q, DEFAULT_TOL).dim(), 0);
        assert_eq!(ker_re_f(&q, DEFAULT_TOL).basis, vec![vec![0.0, 1.0]]);
    }

    #[test]
    fn flow_examples() {
        let osc = QuadraticHamiltonian::harmonic_oscillator(1);
        let m = flow_matrix(&osc, PI / 4.0);
        assert!((m - symplectic_j(1)).norm() < 1e-14);
        let m = flow_matrix(&osc, PI / 2.0);
        assert!((m + DMatrix::<f64>::identity(2, 2)).norm() < 1e-14);
        let heat = diag_q([0.0, 1.0], [0.0, 0.0]);
        assert_eq!(flow_matrix(&heat, 0.0), DMatrix::identity(2, 2));
        for &t in &[-1.3_f64, 0.2, 0.7, 2.9] {
            let (c, s) = ((2.0 * t).cos(), (2.0 * t).sin());
            let closed = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
            assert!((flow_matrix(&osc, t) - closed).norm() < 1e-13);
        }
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic(&symplectic_j(1), 1e-12));
        assert!(is_symplectic(&flow_matrix(&QuadraticHamiltonian::harmonic_oscillator(1), 0.3), 1e-12));
        assert!(!is_symplectic(&(DMatrix::<f64>::identity(2, 2) * 2.0), 1e-12));
    }

    #[test]
    fn propagation_examples() {
        let osc = QuadraticHamiltonian::harmonic_oscillator(1);
        let up = DirectionSet::new(vec![vec![0.0, 1.0]]).unwrap();
        let p = propagate_wf_set(&osc, PI / 8.0, &up, 1e-9);
        assert!((p.dirs[0][0] - FRAC_1_SQRT_2).abs() < 1e-14 && (p.dirs[0][1] - FRAC_1_SQRT_2).abs() < 1e-14);
        let p = propagate_wf_set(&osc, PI / 2.0, &up, 1e-9);
        assert!((p.dirs[0][0]).abs() < 1e-14 && (p.dirs[0][1] + 1.0).abs() < 1e-14);
        let p = propagate_wf_set(&real_q(&[1.0, 0.0, 0.0, 1.0]), 0.4, &up, 1e-9);
        assert!(p.is_empty());
        let heat = diag_q([0.0, 1.0], [0.0, 0.0]);
        let both = DirectionSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(propagate_wf_set(&heat, 0.4, &both, 1e-9).dirs, vec![vec![1.0, 0.0]]);
    }

    #[test]
    fn json_round_trip() {
        let q = QuadraticHamiltonian::from_json(r#"{"dim":1,"re":[[0,0],[0,1]],"im":[[0,0],[0,0]]}"#).unwrap();
        assert_eq!(singular_space(&q, DEFAULT_TOL).basis, vec![vec![1.0, 0.0]]);
        let back = QuadraticHamiltonian::from_json(&q.to_json().unwrap()).unwrap();
        assert_eq!(back, q);
        assert!(QuadraticHamiltonian::from_json(r#"{"dim":1,"re":[[1,0],[0,-1]],"im":[[0,0],[0,0]]}"#).is_err());
    }

    fn psd(d: usize, seed: &[f64]) -> DMatrix<f64> {
        let n = 2 * d;
        let a = DMatrix::from_fn(n, n, |i, j| seed[(i * n + j) % seed.len()]);
        // rank-deficient on purpose sometimes: zero out a column pattern
        a.transpose() * a
    }

    proptest! {
        #[test]
        fn s_equals_ker_re_f_when_bracket_vanishes(
            d in 1usize..=2,
            seed in proptest::collection::vec(-1.0f64..1.0, 3..7),
            c_re in 0.0f64..2.0,
            c_im in -2.0f64..2.0,
            rank_cut in 0usize..3,
        ) {
            let mut a = psd(d, &seed);
            let n = 2 * d;
            for k in 0..rank_cut.min(n) {
                for i in 0..n { a[(k, i)] = 0.0; a[(i, k)] = 0.0; }
            }
            let c = Complex64::new(c_re, c_im);
            let q = QuadraticHamiltonian::new(d, a.map(|v| c * v)).unwrap();
            prop_assert!(poisson_bracket_vanishes(&q, DEFAULT_TOL));
            let s = singular_space(&q, DEFAULT_TOL);
            let k = ker_re_f(&q, DEFAULT_TOL);
            prop_assert!(s.distance(&k) <= 1e-9, "S {:?} vs Ker {:?}", s.basis, k.basis);
            // defining property of S
            let f = hamilton_map(&q);
            let mut p = DMatrix::<f64>::identity(n, n);
            for _ in 0..n {
                let m = f.re() * &p;
                for v in &s.basis {
                    let r = (&m * nalgebra::DVector::from_vec(v.clone())).norm();
                    prop_assert!(r <= 1e-9 * m.norm().max(1.0));
                }
                p *= f.im();
            }
        }

        #[test]
        fn flow_is_a_group(s in -2.0f64..2.0, t in -2.0f64..2.0, e in proptest::collection::vec(-1.0f64..1.0, 4)) {
            let re = DMatrix::from_row_slice(2, 2, &[e[0].abs(), 0.0, 0.0, e[1].abs()]);
            let im = DMatrix::from_row_slice(2, 2, &[e[2], e[3], e[3], -e[2]]);
            let q = QuadraticHamiltonian::from_parts(1, &re, &im).unwrap();
            let lhs = flow_matrix(&q, s + t);
            let rhs = flow_matrix(&q, s) * flow_matrix(&q, t);
            prop_assert!((&lhs - &rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
            let osc = flow_matrix(&QuadraticHamiltonian::harmonic_oscillator(2), t);
            prop_assert!(is_symplectic(&osc, 1e-12));
            prop_assert!((osc.transpose() * &osc - DMatrix::<f64>::identity(4, 4)).norm() < 1e-12);
        }

        #[test]
        fn zero_time_is_identity_for_imaginary_q(angles in proptest::collection::vec(0.0f64..TAU, 1..8)) {
            let dirs = DirectionSet::new(angles.iter().map(|a| vec![a.cos(), a.sin()]).collect()).unwrap();
            let p = propagate_wf_set(&QuadraticHamiltonian::harmonic_oscillator(1), 0.0, &dirs, 1e-9);
            prop_assert_eq!(p.len(), dirs.len());
            for (a, b) in p.dirs.iter().zip(&dirs.dirs) {
                prop_assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
            }
        }
    }
}
