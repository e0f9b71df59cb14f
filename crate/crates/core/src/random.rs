//! Seeded instance generators for the property sweeps.
//!
//! Every trial draws from its own ChaCha8 stream (`seed`, stream = trial
//! index), so trials can be evaluated in any order or in parallel.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::gaussian::{GaussianStateForm, PreSymplecticSpace};
use crate::matops::{DenseMatrix, RealMatrix};

/// Identifier written into report metadata.
pub const RNG_ID: &str = "rand_chacha-0.9 ChaCha8Rng seed_from_u64(seed) set_stream(trial) StandardNormal";

/// Default scale `s` in `δ = s·GGᵀ`.
pub const DEFAULT_SCALE: f64 = 0.1;
/// Operator norm of `Σ₀` for random bases.
pub const BASE_SIGMA_NORM: f64 = 0.9;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> RealMatrix {
    // column-major fill keeps the draw order independent of nalgebra internals
    let mut m = RealMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = rng.sample(StandardNormal);
        }
    }
    m
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    let re = gaussian_matrix(rng, rows, cols);
    let im = gaussian_matrix(rng, rows, cols);
    DMatrix::from_fn(rows, cols, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let g = complex_gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `GG*/n` with complex Gaussian `G`: PSD, generically of full rank.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let g = complex_gaussian_matrix(rng, n, n);
    let p = &g * g.adjoint() / Complex64::new(n.max(1) as f64, 0.0);
    // exact Hermitian symmetry
    (&p + p.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `s·GGᵀ` with real Gaussian `G`.
pub fn random_delta<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> RealMatrix {
    let g = gaussian_matrix(rng, n, n);
    let d = &g * g.transpose() * scale;
    (&d + d.transpose()) * 0.5
}

/// Random state form: `μ = HHᵀ/n + ½`, antisymmetric `σ` rescaled to `‖Σ₀‖ = 0.9`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<GaussianStateForm> {
    let h = gaussian_matrix(rng, n, n);
    let mu = &h * h.transpose() / n.max(1) as f64 + RealMatrix::identity(n, n) * 0.5;
    let mu = (&mu + mu.transpose()) * 0.5;
    let a = gaussian_matrix(rng, n, n);
    let sigma = (&a - a.transpose()) * 0.5;
    let unit = GaussianStateForm::new(PreSymplecticSpace::new(sigma.clone())?, mu.clone())?;
    let norm = 1.0 - unit.domination_margin()?;
    let sigma = if norm > 0.0 { sigma * (BASE_SIGMA_NORM / norm) } else { sigma };
    GaussianStateForm::new(PreSymplecticSpace::new(sigma)?, mu)
}
