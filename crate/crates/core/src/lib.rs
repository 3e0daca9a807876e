//! Numerical microlocal analysis of sampled distributions.
//!
//! The crate estimates Gabor and classical wave front sets and the frequency
//! singularity cone of compactly supported distributions from grid samples,
//! compares them, and propagates phase-space singularities under quadratic
//! Hamiltonians, with a spectral harmonic-oscillator propagator for checks.

pub mod catalog;
pub mod error;
pub mod grid;
pub mod io;
pub mod propagator;
pub mod signal;
pub mod special;
pub mod stft;
pub mod symplectic;
pub mod wavefront;

pub use num_complex::Complex64;

pub use catalog::{catalog_entry, CatalogEntry, CatalogRecord, GroundTruth};
pub use error::{Error, Result};
pub use grid::Grid;
pub use propagator::{
    harmonic_propagate, hermite_coefficients, special_time_operator, verify_propagation, HermiteBasis, PropagatedState,
    VerificationReport,
};
pub use signal::{SampleKind, SampledDistribution};
pub use stft::{moyal_reconstruct, stft_at, stft_slice, CompactWindow, PhasePoint, Taper, Window};
pub use symplectic::{
    flow_matrix, hamilton_map, is_symplectic, ker_re_f, poisson_bracket_vanishes, propagate_wf_set, singular_space,
    DirectionSet, HamiltonMap, QuadraticHamiltonian, SingularSpace,
};
pub use wavefront::{
    check_main_theorem, estimate_classical_wf, estimate_gabor_wf, estimate_sigma, schwartz_direction_test,
    ComparisonResult, DecayProfile, DetectorParams, RaySampling, ReportKind, WavefrontReport,
};
