//! Shared fixtures for the `wfset` benchmarks.

use wfset_core::{catalog_entry, Grid, HermiteBasis, QuadraticHamiltonian, SampledDistribution};

/// One-dimensional grid with `n` samples on `[-20, 20)`.
pub fn grid_1d(n: usize) -> Grid {
    Grid::new(1, n, 20.0).expect("valid benchmark grid")
}

/// Two-dimensional grid with `n` samples per axis on `[-10, 10)²`.
pub fn grid_2d(n: usize) -> Grid {
    Grid::new(2, n, 10.0).expect("valid benchmark grid")
}

/// Catalog entry `name` with default parameters on `grid`.
pub fn sampled(name: &str, grid: &Grid) -> SampledDistribution {
    catalog_entry(name, grid).expect("catalog entry fits the benchmark grid").0
}

/// Largest accurate Hermite basis on the default one-dimensional grid.
pub fn default_basis() -> HermiteBasis {
    HermiteBasis::largest(&grid_1d(1024)).expect("basis fits the default grid")
}

/// A `4 × 4` form with a nontrivial singular space: `diag(0, 1) ⊕ i·I₂`.
pub fn mixed_form() -> QuadraticHamiltonian {
    QuadraticHamiltonian::from_json(
        r#"{"dim": 2,
            "re": [[0,0,0,0],[0,0,0,0],[0,0,1,0],[0,0,0,0]],
            "im": [[1,0,0,0],[0,1,0,0],[0,0,0,0],[0,0,0,1]]}"#,
    )
    .expect("valid form")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_construct() {
        assert_eq!(sampled("box", &grid_1d(256)).grid().n(), 256);
        assert_eq!(sampled("line_delta_2d", &grid_2d(128)).grid().dim(), 2);
        assert_eq!(mixed_form().dim(), 2);
    }
}
