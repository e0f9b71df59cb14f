//! Modular data of a standard polarisation: `Δ = (1 − Σ)/(1 + Σ)`,
//! `K = −log Δ = 2 artanh Σ`, and the half-angle hyperbolic functions of `K`.
//!
//! The modular conjugation is complex conjugation Γ in canonical coordinates.
//! It is antilinear, so it is never stored as a matrix.

use nalgebra::DVector;
use num_complex::Complex64;
use rand_distr::StandardNormal;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{CanonicalPolarisation, PolarisationSpectrum};
use crate::matops::{self, DenseMatrix, RealFn, SpectralOptions};

pub const STANDARD_EPS: f64 = 1e-10;
pub const FACTORIAL_EPS: f64 = 1e-10;

/// Outcome of a threshold test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub margin: f64,
}

/// `1 ± Σ > eps`; margin `min(1 + s, 1 − s)` over the spectrum.
pub fn standardness_check(pol: &CanonicalPolarisation, eps: f64) -> Check {
    let margin = pol.spectrum().standard_margin();
    Check {
        passed: margin > eps,
        margin,
    }
}

/// `min |s| > eps`, i.e. `R` invertible.
pub fn factorial_check(pol: &CanonicalPolarisation, eps: f64) -> Check {
    let margin = pol.spectrum().factorial_margin();
    Check {
        passed: margin > eps,
        margin,
    }
}

/// Spectral data shared by Σ, Δ and K.
#[derive(Debug, Clone)]
pub struct ModularData {
    spectrum: PolarisationSpectrum,
    delta_eigs: Vec<f64>,
    k_eigs: Vec<f64>,
}

impl ModularData {
    /// Fails with `NotStandard` unless `standardness_check(pol, eps)` passes.
    pub fn new(pol: &CanonicalPolarisation, eps: f64) -> Result<Self> {
        let check = standardness_check(pol, eps);
        if !check.passed {
            return Err(Error::NotStandard {
                margin: check.margin,
                eps,
            });
        }
        let spectrum = pol.spectrum().clone();
        let delta_eigs = (0..spectrum.dim())
            .map(|j| spectrum.one_minus(j) / spectrum.one_plus(j))
            .collect();
        let k_eigs = (0..spectrum.dim()).map(|j| spectrum.modular_log(j)).collect();
        Ok(Self {
            spectrum,
            delta_eigs,
            k_eigs,
        })
    }

    pub fn dim(&self) -> usize {
        self.k_eigs.len()
    }

    pub fn sigma_eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn delta_eigenvalues(&self) -> &[f64] {
        &self.delta_eigs
    }

    pub fn k_eigenvalues(&self) -> &[f64] {
        &self.k_eigs
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        self.spectrum.eigenvectors()
    }

    pub fn spectrum(&self) -> &PolarisationSpectrum {
        &self.spectrum
    }

    /// Largest relative gap between `−log Δ` and `K` over the spectrum.
    pub fn path_discrepancy(&self) -> f64 {
        self.delta_eigs
            .iter()
            .zip(&self.k_eigs)
            .map(|(d, k)| (-d.ln() - k).abs() / k.abs().max(1.0))
            .fold(0.0, f64::max)
    }

    /// `K` by spectral calculus of `2 artanh` on the matrix `Σ`.
    ///
    /// Independent of the gap matrix, so it fails with a domain error once
    /// an eigenvalue of Σ is within the guard band of ±1.
    pub fn hamiltonian_via_artanh(&self) -> Result<DenseMatrix> {
        let sigma = self.spectrum.eigen_system().reconstruct();
        let k = matops::matrix_function(&sigma, &RealFn::ARTANH, SpectralOptions::default())?;
        Ok(k * Complex64::new(2.0, 0.0))
    }

    fn compose(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        self.spectrum.compose(|j| Complex64::new(f(self.k_eigs[j]), 0.0))
    }

    pub fn delta(&self) -> DenseMatrix {
        self.spectrum.compose(|j| Complex64::new(self.delta_eigs[j], 0.0))
    }

    pub fn hamiltonian(&self) -> DenseMatrix {
        self.compose(|k| k)
    }

    /// `Δ^t = exp(−tK)`.
    pub fn delta_power(&self, t: f64) -> DenseMatrix {
        self.compose(|k| (-t * k).exp())
    }

    /// The modular group `Δ^{it} = exp(−itK)`.
    pub fn modular_group(&self, t: f64) -> DenseMatrix {
        self.spectrum.compose(|j| Complex64::new(0.0, -t * self.k_eigs[j]).exp())
    }

    pub fn tanh_half(&self) -> DenseMatrix {
        self.compose(|k| (0.5 * k).tanh())
    }

    pub fn sech_half(&self) -> DenseMatrix {
        self.compose(|k| 1.0 / (0.5 * k).cosh())
    }

    fn ensure_factorial(&self, eps: f64) -> Result<()> {
        let margin = self.spectrum.factorial_margin();
        if margin > eps {
            Ok(())
        } else {
            Err(Error::NotFactorial { margin, eps })
        }
    }

    pub fn coth_half(&self, eps: f64) -> Result<DenseMatrix> {
        self.ensure_factorial(eps)?;
        Ok(self.compose(|k| 1.0 / (0.5 * k).tanh()))
    }

    pub fn csch_half(&self, eps: f64) -> Result<DenseMatrix> {
        self.ensure_factorial(eps)?;
        Ok(self.compose(|k| 1.0 / (0.5 * k).sinh()))
    }
}

pub fn modular_operator(pol: &CanonicalPolarisation, eps: f64) -> Result<ModularData> {
    ModularData::new(pol, eps)
}

pub fn modular_hamiltonian(pol: &CanonicalPolarisation, eps: f64) -> Result<ModularData> {
    ModularData::new(pol, eps)
}

/// `tanh(K/2)`, `sech(K/2)`, `coth(K/2)`, `csch(K/2)`.
#[derive(Debug, Clone)]
pub struct ModularFunctions {
    pub tanh_half: DenseMatrix,
    pub sech_half: DenseMatrix,
    pub coth_half: DenseMatrix,
    pub csch_half: DenseMatrix,
}

pub fn modular_functions(pol: &CanonicalPolarisation, standard_eps: f64, factorial_eps: f64) -> Result<ModularFunctions> {
    let data = ModularData::new(pol, standard_eps)?;
    Ok(ModularFunctions {
        tanh_half: data.tanh_half(),
        sech_half: data.sech_half(),
        coth_half: data.coth_half(factorial_eps)?,
        csch_half: data.csch_half(factorial_eps)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomitaResult {
    /// `max ‖S(κv + iκw) − (κv − iκw)‖ / (‖κv‖ + ‖κw‖)` over the trials.
    pub max_residual: f64,
    /// `‖ΓΔ^{1/2}Γ − Δ^{−1/2}‖_max / max(1, ‖Δ^{−1/2}‖_max)`.
    pub conjugation_residual: f64,
}

/// Checks `S = Δ^{−1/2}Γ` on seeded random vectors `κv + iκw`.
///
/// Vectors are carried in the eigenbasis of Σ, with Γ transported there as
/// `P = V*V̄`. Directions where `Δ^{−1/2}` is huge then keep their own small
/// components instead of inheriting rounding from the O(1) ones.
pub fn tomita_verify(pol: &CanonicalPolarisation, trials: usize, seed: u64, eps: f64) -> Result<TomitaResult> {
    let data = ModularData::new(pol, eps)?;
    let spec = data.spectrum();
    let n = data.dim();
    let v = spec.eigenvectors();
    let p = v.adjoint() * v.map(|z| z.conj());
    let column = |f: &dyn Fn(usize) -> f64| DVector::<Complex64>::from_fn(n, |j, _| Complex64::new(f(j), 0.0));
    let kappa = column(&|j| spec.one_plus(j).sqrt());
    let inv_sqrt_delta = column(&|j| (spec.one_plus(j) / spec.one_minus(j)).sqrt());
    let sqrt_delta = column(&|j| (spec.one_minus(j) / spec.one_plus(j)).sqrt());

    let mut rng = crate::random::trial_rng(seed, 0);
    let mut max_residual: f64 = 0.0;
    let i = Complex64::new(0.0, 1.0);
    for _ in 0..trials {
        let x = DVector::<Complex64>::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0));
        let y = DVector::<Complex64>::from_fn(n, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0));
        let kx = kappa.component_mul(&(v.adjoint() * &x));
        let ky = kappa.component_mul(&(v.adjoint() * &y));
        let vector = &kx + &ky * i;
        let image = (&p * vector.map(|z| z.conj())).component_mul(&inv_sqrt_delta);
        let target = &kx - &ky * i;
        let scale = kx.norm() + ky.norm();
        if scale > 0.0 {
            max_residual = max_residual.max((image - target).norm() / scale);
        }
    }

    let conjugated = &p * DenseMatrix::from_diagonal(&sqrt_delta) * p.adjoint();
    let target = DenseMatrix::from_diagonal(&inv_sqrt_delta);
    let conjugation_residual = matops::max_abs(&(conjugated - &target)) / matops::max_abs(&target).max(1.0);
    Ok(TomitaResult {
        max_residual,
        conjugation_residual,
    })
}
