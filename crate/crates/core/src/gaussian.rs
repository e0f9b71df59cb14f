//! Pre-symplectic spaces, Gaussian state forms, perturbations and canonical
//! polarisation operators.
//!
//! All operator algebra happens in μ₀-orthonormal coordinates. There `R` is a
//! real antisymmetric matrix and `Σ = iR` is Hermitian.
//!
//! Alongside `R`, a [`CanonicalPolarisation`] keeps the gap matrix
//! `1 + R² = 1 − Σ²`. Close to a pure state `1 − |s|` drops far below machine
//! epsilon while the gap is still representable, so every quantity that
//! depends on `1 ± Σ` is read from the gap instead of from `Σ` itself.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matops::{
    complexify, ensure_square, hermitian_eig, max_abs_real, real_part, schatten_norm, DenseMatrix,
    HermitianEigenSystem, RealMatrix, SchattenP,
};

/// Symmetry tolerance for μ, δ and the antisymmetry of R (relative to max(1, ‖·‖)).
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack allowed above ‖Σ‖ = 1.
pub const DOMINATION_TOL: f64 = 1e-10;
/// Lower eigenvalue tolerance of PSD perturbations.
pub const PSD_TOL: f64 = 1e-10;
/// Minimum eigenvalue of `1 + δ` for the invertible class.
pub const PLUS_ONE_FLOOR: f64 = 1e-10;
/// Threshold below which an eigenvalue of `1 + Σ` counts towards the kernel of κ.
pub const KERNEL_TOL: f64 = 1e-10;

fn ensure_finite_real(a: &RealMatrix) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn symmetric_part_checked(a: &RealMatrix) -> Result<RealMatrix> {
    ensure_square(a)?;
    ensure_finite_real(a)?;
    let asymmetry = max_abs_real(&(a - a.transpose()));
    let tolerance = SYMMETRY_TOL * max_abs_real(a).max(1.0);
    if asymmetry > tolerance {
        return Err(Error::NonHermitian { asymmetry, tolerance });
    }
    Ok((a + a.transpose()) * 0.5)
}

fn real_compose(eig: &HermitianEigenSystem, f: impl Fn(f64) -> f64) -> RealMatrix {
    real_part(&eig.compose(f))
}

/// A real vector space with an antisymmetric bilinear form σ.
#[derive(Debug, Clone, PartialEq)]
pub struct PreSymplecticSpace {
    sigma: RealMatrix,
}

impl PreSymplecticSpace {
    /// Requires `σᵀ = −σ` exactly. Degenerate forms are allowed.
    pub fn new(sigma: RealMatrix) -> Result<Self> {
        let n = ensure_square(&sigma)?;
        ensure_finite_real(&sigma)?;
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                defect = defect.max((sigma[(i, j)] + sigma[(j, i)]).abs());
            }
        }
        if defect != 0.0 {
            return Err(Error::NotAntisymmetric { defect });
        }
        Ok(Self { sigma })
    }

    /// The standard form on `n` canonical pairs, `[[0, 1], [−1, 0]]` blocks.
    pub fn standard(pairs: usize) -> Self {
        let mut sigma = RealMatrix::zeros(2 * pairs, 2 * pairs);
        for k in 0..pairs {
            sigma[(2 * k, 2 * k + 1)] = 1.0;
            sigma[(2 * k + 1, 2 * k)] = -1.0;
        }
        Self { sigma }
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn sigma(&self) -> &RealMatrix {
        &self.sigma
    }
}

/// A Gaussian state given by a real inner product μ on a pre-symplectic space.
#[derive(Debug, Clone)]
pub struct GaussianStateForm {
    space: PreSymplecticSpace,
    mu: RealMatrix,
    mu_sqrt: RealMatrix,
    mu_inv_sqrt: RealMatrix,
}

impl GaussianStateForm {
    /// Validates symmetry and positive definiteness of μ.
    ///
    /// Domination of σ by μ is not enforced here; it is checked by
    /// [`polarisation_canonical`] and measured by [`domination_margin`].
    pub fn new(space: PreSymplecticSpace, mu: RealMatrix) -> Result<Self> {
        let mu = symmetric_part_checked(&mu)?;
        if mu.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: mu.nrows(),
            });
        }
        let eig = hermitian_eig(&complexify(&mu))?;
        let min = eig.min_eigenvalue();
        if !(min > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        let mu_sqrt = real_compose(&eig, f64::sqrt);
        let mu_inv_sqrt = real_compose(&eig, |x| 1.0 / x.sqrt());
        Ok(Self {
            space,
            mu,
            mu_sqrt,
            mu_inv_sqrt,
        })
    }

    /// `μ = 1` on the given space.
    pub fn orthonormal(space: PreSymplecticSpace) -> Self {
        let n = space.dim();
        let id = RealMatrix::identity(n, n);
        Self {
            space,
            mu: id.clone(),
            mu_sqrt: id.clone(),
            mu_inv_sqrt: id,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &PreSymplecticSpace {
        &self.space
    }

    pub fn sigma(&self) -> &RealMatrix {
        self.space.sigma()
    }

    pub fn mu(&self) -> &RealMatrix {
        &self.mu
    }

    pub fn mu_sqrt(&self) -> &RealMatrix {
        &self.mu_sqrt
    }

    pub fn mu_inv_sqrt(&self) -> &RealMatrix {
        &self.mu_inv_sqrt
    }

    /// `μ^{−1/2} σ μ^{−1/2}`, antisymmetrised, without the domination check.
    fn raw_polarisation(&self) -> RealMatrix {
        let r = &self.mu_inv_sqrt * self.sigma() * &self.mu_inv_sqrt;
        (&r - r.transpose()) * 0.5
    }

    pub fn domination_margin(&self) -> Result<f64> {
        let norm = schatten_norm(&complexify(&self.raw_polarisation()), SchattenP::Inf)?;
        Ok(1.0 - norm)
    }

    pub fn polarisation(&self) -> Result<CanonicalPolarisation> {
        CanonicalPolarisation::new(self.raw_polarisation())
    }
}

pub fn polarisation_canonical(state: &GaussianStateForm) -> Result<CanonicalPolarisation> {
    state.polarisation()
}

/// `1 − ‖Σ‖_∞`; negative when μ fails to dominate σ.
pub fn domination_margin(state: &GaussianStateForm) -> Result<f64> {
    state.domination_margin()
}

/// `ω₂ = ½(μ + iσ)`.
pub fn two_point(state: &GaussianStateForm) -> DenseMatrix {
    DenseMatrix::from_fn(state.dim(), state.dim(), |i, j| {
        Complex64::new(0.5 * state.mu[(i, j)], 0.5 * state.sigma()[(i, j)])
    })
}

/// Spectral data of `Σ` with one-sided distances to ±1 read off the gap matrix.
#[derive(Debug, Clone)]
pub struct PolarisationSpectrum {
    eig: HermitianEigenSystem,
    gaps: Vec<f64>,
}

impl PolarisationSpectrum {
    fn new(r: &RealMatrix, gap: &RealMatrix) -> Result<Self> {
        let sigma = r.map(|x| Complex64::new(0.0, x));
        let eig = hermitian_eig(&sigma)?;
        let d = complexify(gap);
        let v = eig.eigenvectors();
        let gaps = (0..eig.dim())
            .map(|j| {
                let col = v.column(j);
                let g = (col.adjoint() * &d * col)[(0, 0)].re;
                g.clamp(0.0, 1.0)
            })
            .collect();
        Ok(Self { eig, gaps })
    }

    pub fn dim(&self) -> usize {
        self.gaps.len()
    }

    /// Eigenvalues `s_j` of Σ, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.eigenvalues()
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        self.eig.eigenvectors()
    }

    pub fn eigen_system(&self) -> &HermitianEigenSystem {
        &self.eig
    }

    /// `1 − s_j²` per eigenvector.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// `1 + s_j`, accurate when `s_j` is close to −1.
    pub fn one_plus(&self, j: usize) -> f64 {
        let s = self.eigenvalues()[j];
        if s < 0.0 {
            self.gaps[j] / (1.0 - s)
        } else {
            1.0 + s
        }
    }

    /// `1 − s_j`, accurate when `s_j` is close to 1.
    pub fn one_minus(&self, j: usize) -> f64 {
        let s = self.eigenvalues()[j];
        if s > 0.0 {
            self.gaps[j] / (1.0 + s)
        } else {
            1.0 - s
        }
    }

    /// `min_j min(1 + s_j, 1 − s_j)`.
    pub fn standard_margin(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.one_plus(j).min(self.one_minus(j)))
            .fold(f64::INFINITY, f64::min)
            .min(1.0)
    }

    /// `min_j |s_j|`.
    pub fn factorial_margin(&self) -> f64 {
        self.eigenvalues().iter().fold(f64::INFINITY, |m, s| m.min(s.abs()))
    }

    /// `max_j |s_j|`.
    pub fn norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// `K_j = log((1 + s_j)/(1 − s_j))`; infinite on a zero gap.
    pub fn modular_log(&self, j: usize) -> f64 {
        let s = self.eigenvalues()[j];
        let g = self.gaps[j];
        if s.abs() < 0.5 {
            return 2.0 * s.atanh();
        }
        if g == 0.0 {
            return s.signum() * f64::INFINITY;
        }
        // (1+|s|)²/g = (1+|s|)/(1−|s|) without the cancellation in 1−|s|
        s.signum() * ((1.0 + s.abs()).powi(2) / g).ln()
    }

    pub fn compose(&self, values: impl Fn(usize) -> Complex64) -> DenseMatrix {
        let values: Vec<Complex64> = (0..self.dim()).map(values).collect();
        self.eig.compose_values(&values)
    }
}

/// The polarisation operator `R` of a state in its own orthonormal chart.
#[derive(Debug, Clone)]
pub struct CanonicalPolarisation {
    r: RealMatrix,
    gap: RealMatrix,
    spectrum: PolarisationSpectrum,
}

impl CanonicalPolarisation {
    /// Accepts `R` with `‖R + Rᵀ‖ ≤ 1e−12·max(1, ‖R‖)` and `‖iR‖ ≤ 1 + 1e−10`.
    pub fn new(r: RealMatrix) -> Result<Self> {
        let n = ensure_square(&r)?;
        ensure_finite_real(&r)?;
        let defect = max_abs_real(&(&r + r.transpose()));
        if defect > SYMMETRY_TOL * max_abs_real(&r).max(1.0) {
            return Err(Error::NotAntisymmetric { defect });
        }
        let r = (&r - r.transpose()) * 0.5;
        let gap = RealMatrix::identity(n, n) + &r * &r;
        Self::from_parts(r, gap)
    }

    fn from_parts(r: RealMatrix, gap: RealMatrix) -> Result<Self> {
        let gap = (&gap + gap.transpose()) * 0.5;
        let spectrum = PolarisationSpectrum::new(&r, &gap)?;
        let norm = spectrum.norm();
        if norm > 1.0 + DOMINATION_TOL {
            return Err(Error::DominationFailure { norm });
        }
        Ok(Self { r, gap, spectrum })
    }

    /// Vacuum-type polarisation with `[[0, −1], [1, 0]]` blocks, so `R² = −1`.
    pub fn pure(pairs: usize) -> Self {
        let n = 2 * pairs;
        let mut r = RealMatrix::zeros(n, n);
        for k in 0..pairs {
            r[(2 * k, 2 * k + 1)] = -1.0;
            r[(2 * k + 1, 2 * k)] = 1.0;
        }
        Self::from_parts(r, RealMatrix::zeros(n, n)).expect("block polarisation is valid")
    }

    pub fn dim(&self) -> usize {
        self.r.nrows()
    }

    pub fn r(&self) -> &RealMatrix {
        &self.r
    }

    /// `Σ = iR`.
    pub fn sigma(&self) -> DenseMatrix {
        self.r.map(|x| Complex64::new(0.0, x))
    }

    /// `1 + R² = 1 − Σ²`.
    pub fn gap(&self) -> &RealMatrix {
        &self.gap
    }

    pub fn spectrum(&self) -> &PolarisationSpectrum {
        &self.spectrum
    }

    /// `‖Σ‖_∞`.
    pub fn norm(&self) -> f64 {
        self.spectrum.norm()
    }

    /// `R_δ = (1+δ)^{−1/2} R (1+δ)^{−1/2}`.
    ///
    /// The gap of the result is assembled as
    /// `W [D + δ + R F Rᵀ] W` with `W = (1+δ)^{−1/2}`, `F = δ(1+δ)^{−1}`,
    /// which has no cancellation for PSD δ.
    pub fn perturb(&self, delta: &Perturbation) -> Result<Self> {
        if delta.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: delta.dim(),
            });
        }
        if delta.class() == PositivityClass::InvertiblePlusOne {
            let shifted = complexify(&(RealMatrix::identity(self.dim(), self.dim()) + delta.matrix())) + self.sigma();
            let min = hermitian_eig(&shifted)?.min_eigenvalue();
            if min < -DOMINATION_TOL {
                return Err(Error::DominationFailure { norm: 1.0 - min });
            }
        }
        let w = delta.inv_sqrt_one_plus();
        let f = real_compose(delta.eigen_system(), |x| x / (1.0 + x));
        let r = &w * &self.r * &w;
        let r = (&r - r.transpose()) * 0.5;
        let inner = &self.gap + delta.matrix() + &self.r * f * self.r.transpose();
        let gap = &w * inner * &w;
        Self::from_parts(r, gap)
    }
}

/// `perturb(base, δ)` for a state form; see [`CanonicalPolarisation::perturb`].
pub fn perturb(base: &GaussianStateForm, delta: &Perturbation) -> Result<CanonicalPolarisation> {
    base.polarisation()?.perturb(delta)
}

/// `(κ, dim ker κ)` with `κ = √(1 + Σ)`.
///
/// In μ-orthonormal coordinates `⟨κf, κg⟩ = fᵀg + i·fᵀRg`.
pub fn one_particle_map(pol: &CanonicalPolarisation) -> (DenseMatrix, usize) {
    let spec = pol.spectrum();
    let kernel = (0..spec.dim()).filter(|&j| spec.one_plus(j) < KERNEL_TOL).count();
    let kappa = spec.compose(|j| Complex64::new(spec.one_plus(j).sqrt(), 0.0));
    (kappa, kernel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityClass {
    /// `δ ≥ 0`.
    Psd,
    /// Only `1 + δ > 0`.
    InvertiblePlusOne,
}

/// A symmetric perturbation `δ` of the reference inner product, in
/// μ₀-orthonormal coordinates: `μ_δ(f, g) = μ₀(f, (1 + δ) g)`.
#[derive(Debug, Clone)]
pub struct Perturbation {
    delta: RealMatrix,
    class: PositivityClass,
    eig: HermitianEigenSystem,
}

impl Perturbation {
    pub fn new(delta: RealMatrix, class: PositivityClass) -> Result<Self> {
        let delta = symmetric_part_checked(&delta)?;
        let eig = hermitian_eig(&complexify(&delta))?;
        let min = eig.min_eigenvalue();
        match class {
            PositivityClass::Psd if min < -PSD_TOL => {
                return Err(Error::NotPsd {
                    min_eigenvalue: min,
                    tolerance: PSD_TOL,
                })
            }
            PositivityClass::InvertiblePlusOne if !(1.0 + min >= PLUS_ONE_FLOOR) => {
                return Err(Error::NotPositive {
                    min_eigenvalue: 1.0 + min,
                })
            }
            _ => {}
        }
        Ok(Self { delta, class, eig })
    }

    pub fn psd(delta: RealMatrix) -> Result<Self> {
        Self::new(delta, PositivityClass::Psd)
    }

    pub fn zero(n: usize) -> Self {
        Self::psd(RealMatrix::zeros(n, n)).expect("zero is PSD")
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::psd(RealMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    /// Converts an operator `δ_raw` relative to the raw form μ₀
    /// (`μ_δ = μ₀(1 + δ_raw)`) into orthonormal coordinates: `μ₀^{1/2} δ_raw μ₀^{−1/2}`.
    pub fn from_raw_operator(base: &GaussianStateForm, raw: &RealMatrix, class: PositivityClass) -> Result<Self> {
        if raw.nrows() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: raw.nrows(),
            });
        }
        Self::new(base.mu_sqrt() * raw * base.mu_inv_sqrt(), class)
    }

    /// The perturbation taking μ₀ to a given form μ_δ: `μ₀^{−1/2} μ_δ μ₀^{−1/2} − 1`.
    pub fn from_forms(base: &GaussianStateForm, mu_delta: &RealMatrix, class: PositivityClass) -> Result<Self> {
        if mu_delta.nrows() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: mu_delta.nrows(),
            });
        }
        let n = base.dim();
        Self::new(
            base.mu_inv_sqrt() * mu_delta * base.mu_inv_sqrt() - RealMatrix::identity(n, n),
            class,
        )
    }

    pub fn dim(&self) -> usize {
        self.delta.nrows()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.delta
    }

    pub fn class(&self) -> PositivityClass {
        self.class
    }

    pub fn eigen_system(&self) -> &HermitianEigenSystem {
        &self.eig
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eig.eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig.min_eigenvalue()
    }

    pub fn trace(&self) -> f64 {
        self.delta.trace()
    }

    pub fn norm(&self, p: SchattenP) -> f64 {
        let abs = self.eigenvalues().iter().map(|x| x.abs());
        match p {
            SchattenP::One => abs.sum(),
            SchattenP::Two => abs.map(|x| x * x).sum::<f64>().sqrt(),
            SchattenP::Inf => abs.fold(0.0, f64::max),
        }
    }

    /// `(1 + δ)^{−1/2}`.
    pub fn inv_sqrt_one_plus(&self) -> RealMatrix {
        real_compose(&self.eig, |x| 1.0 / (1.0 + x).sqrt())
    }

    /// `(‖1 + δ‖_∞, ‖(1 + δ)^{−1}‖_∞)`, the two norm-equivalence constants between μ₀ and μ_δ.
    pub fn norm_equivalence(&self) -> (f64, f64) {
        (1.0 + self.eig.max_eigenvalue(), 1.0 / (1.0 + self.eig.min_eigenvalue()))
    }
}
