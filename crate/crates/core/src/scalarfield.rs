//! Free real scalar field on a flat circle or torus, truncated to finitely
//! many Fourier modes.
//!
//! Each real Fourier function (constant, cos, sin) carries two Cauchy-data
//! coordinates, stored next to each other: coordinate `2q` for the field
//! component and `2q + 1` for its conjugate. In these coordinates the vacuum
//! polarisation is block diagonal with blocks `[[0, −1], [1, 0]]`, and `δ`
//! is given directly in them.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CanonicalPolarisation, Perturbation};
use crate::matops::{complexify, inverse_real, schatten_norm, sqrt_psd_real, RealMatrix, SchattenP};
use crate::modular::ModularData;
use crate::quasiequiv::InequalityReport;

/// Largest dense real dimension built by default.
pub const MAX_DIM: usize = 4096;
/// Tolerance of the dense-versus-closed-form identities.
pub const IDENTITY_RTOL: f64 = 1e-10;
/// Absolute tolerance on the modular spectrum.
pub const SPECTRUM_TOL: f64 = 1e-10;
/// Tolerance of the energy identity.
pub const ENERGY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Circle { length: f64 },
    Torus { lengths: Vec<f64> },
    /// An explicit frequency list, for spectra not generated here.
    Explicit,
}

impl Geometry {
    pub fn label(&self) -> String {
        match self {
            Geometry::Circle { length } => format!("circle(L={length})"),
            Geometry::Torus { lengths } => {
                let ls: Vec<String> = lengths.iter().map(|l| l.to_string()).collect();
                format!("torus(L={})", ls.join(","))
            }
            Geometry::Explicit => "explicit".to_string(),
        }
    }

    fn lengths(&self) -> Vec<f64> {
        match self {
            Geometry::Circle { length } => vec![*length],
            Geometry::Torus { lengths } => lengths.clone(),
            Geometry::Explicit => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub omega: f64,
    pub multiplicity: usize,
    /// Representative lattice momentum (empty for explicit spectra).
    pub momentum: Vec<i64>,
}

impl Mode {
    pub fn is_zero_momentum(&self) -> bool {
        !self.momentum.is_empty() && self.momentum.iter().all(|&k| k == 0)
    }
}

/// Frequencies of `−Δ + m²` below the cutoff, one entry per `±k` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    geometry: Geometry,
    mass: f64,
    cutoff: usize,
    modes: Vec<Mode>,
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMass(mass))
    }
}

impl ModeSpectrum {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Number of real Fourier functions, `Σ g_k`.
    pub fn functions(&self) -> usize {
        self.modes.iter().map(|m| m.multiplicity).sum()
    }

    /// Real phase-space dimension `2 Σ g_k`.
    pub fn dim(&self) -> usize {
        2 * self.functions()
    }

    /// `ω` per phase-space coordinate.
    pub fn coordinate_frequencies(&self) -> Vec<f64> {
        self.modes
            .iter()
            .flat_map(|m| std::iter::repeat_n(m.omega, 2 * m.multiplicity))
            .collect()
    }

    /// Coordinates whose frequency is the mass itself, where `E = (m/4) tr δ` is exact.
    pub fn zero_momentum_coordinates(&self) -> Vec<bool> {
        self.modes
            .iter()
            .flat_map(|m| std::iter::repeat_n(m.omega == self.mass, 2 * m.multiplicity))
            .collect()
    }

    /// An explicit `(ω, g)` list; every ω must be at least `m`.
    pub fn from_modes(mass: f64, modes: &[(f64, usize)]) -> Result<Self> {
        check_mass(mass)?;
        let mut out = Vec::with_capacity(modes.len());
        for &(omega, g) in modes {
            if !(omega >= mass) || g == 0 {
                return Err(Error::InvalidArgument(format!(
                    "mode (omega={omega}, g={g}) needs omega >= mass and g >= 1"
                )));
            }
            out.push(Mode {
                omega,
                multiplicity: g,
                momentum: Vec::new(),
            });
        }
        let spec = Self {
            geometry: Geometry::Explicit,
            mass,
            cutoff: 0,
            modes: out,
        };
        spec.check_size(MAX_DIM)?;
        Ok(spec)
    }

    fn check_size(&self, limit: usize) -> Result<()> {
        if self.dim() > limit {
            Err(Error::TooLarge { dim: self.dim(), limit })
        } else {
            Ok(())
        }
    }
}

/// Modes `k ∈ ℤᵈ` with `|k_i| ≤ N`, one representative per `±k` pair
/// (first nonzero component positive), in lexicographic order.
fn half_lattice(d: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let side = (2 * cutoff + 1) as usize;
    let total = side.pow(d as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut k = vec![0i64; d];
        for slot in k.iter_mut().rev() {
            *slot = (rest % side) as i64 - cutoff;
            rest /= side;
        }
        let leading = k.iter().copied().find(|&x| x != 0);
        if leading.is_none_or(|x| x > 0) {
            out.push(k);
        }
    }
    // zero mode first, then by |k|² so the circle ordering is n = 0, 1, 2, ...
    out.sort_by_key(|k| (k.iter().map(|x| x * x).sum::<i64>(), k.clone()));
    out
}

/// Spectrum of `−Δ + m²` on a circle or a torus of dimension ≤ 3, truncated
/// at `|k_i| ≤ N`.
pub fn build_spectrum(geometry: Geometry, mass: f64, cutoff: usize) -> Result<ModeSpectrum> {
    build_spectrum_with_limit(geometry, mass, cutoff, MAX_DIM)
}

pub fn build_spectrum_with_limit(geometry: Geometry, mass: f64, cutoff: usize, limit: usize) -> Result<ModeSpectrum> {
    check_mass(mass)?;
    let lengths = geometry.lengths();
    if lengths.is_empty() || lengths.len() > 3 {
        return Err(Error::InvalidArgument(format!(
            "geometry needs 1 to 3 side lengths, got {}",
            lengths.len()
        )));
    }
    if let Some(bad) = lengths.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidArgument(format!("side length must be positive (got {bad})")));
    }
    // refuse before enumerating: the box holds about (2N+1)^d functions
    let functions = (2 * cutoff as u128 + 1).saturating_pow(lengths.len() as u32);
    if functions.saturating_mul(2) > limit as u128 {
        return Err(Error::TooLarge {
            dim: usize::try_from(functions.saturating_mul(2)).unwrap_or(usize::MAX),
            limit,
        });
    }
    let modes = half_lattice(lengths.len(), cutoff as i64)
        .into_iter()
        .map(|k| {
            let p2: f64 = k
                .iter()
                .zip(&lengths)
                .map(|(&n, &l)| (2.0 * PI * n as f64 / l).powi(2))
                .sum();
            let multiplicity = if k.iter().all(|&x| x == 0) { 1 } else { 2 };
            Mode {
                omega: (p2 + mass * mass).sqrt(),
                multiplicity,
                momentum: k,
            }
        })
        .collect();
    Ok(ModeSpectrum {
        geometry,
        mass,
        cutoff,
        modes,
    })
}

/// `R_vac` with `R_vac² = −1` exactly.
pub fn vacuum_polarisation(spec: &ModeSpectrum) -> CanonicalPolarisation {
    CanonicalPolarisation::pure(spec.functions())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && !beta.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("beta must be positive (got {beta})")))
    }
}

/// Bose factor `2/(e^{βω} − 1)` carried by both Cauchy-data components.
pub fn bose_delta(beta: f64, omega: f64) -> f64 {
    2.0 / (beta * omega).exp_m1()
}

pub fn thermal_delta(spec: &ModeSpectrum, beta: f64) -> Result<Perturbation> {
    check_beta(beta)?;
    let values: Vec<f64> = spec.coordinate_frequencies().iter().map(|&w| bose_delta(beta, w)).collect();
    Perturbation::diagonal(&values)
}

/// How the perturbation of a field state is specified.
#[derive(Debug, Clone)]
pub enum FieldStateSpec {
    Vacuum,
    Thermal { beta: f64 },
    /// One 2×2 block `[[δ₀₀, δ₀₁], [δ₁₀, δ₁₁]]` per real Fourier function.
    Blocks(Vec<[[f64; 2]; 2]>),
    Dense(RealMatrix),
}

pub fn field_delta(spec: &ModeSpectrum, state: &FieldStateSpec) -> Result<Perturbation> {
    let n = spec.dim();
    match state {
        FieldStateSpec::Vacuum => Ok(Perturbation::zero(n)),
        FieldStateSpec::Thermal { beta } => thermal_delta(spec, *beta),
        FieldStateSpec::Blocks(blocks) => {
            if blocks.len() != spec.functions() {
                return Err(Error::DimensionMismatch {
                    expected: spec.functions(),
                    found: blocks.len(),
                });
            }
            let mut delta = RealMatrix::zeros(n, n);
            for (q, b) in blocks.iter().enumerate() {
                for (i, row) in b.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        delta[(2 * q + i, 2 * q + j)] = x;
                    }
                }
            }
            Perturbation::psd(delta)
        }
        FieldStateSpec::Dense(delta) => {
            if delta.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: delta.nrows(),
                });
            }
            Perturbation::psd(delta.clone())
        }
    }
}

fn require_psd(delta: &Perturbation) -> Result<()> {
    let min = delta.min_eigenvalue();
    if min < -crate::gaussian::PSD_TOL {
        Err(Error::NotPositive { min_eigenvalue: min })
    } else {
        Ok(())
    }
}

fn require_dim(spec: &ModeSpectrum, delta: &Perturbation) -> Result<()> {
    if delta.dim() == spec.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: delta.dim(),
        })
    }
}

/// `E = ¼ tr(A^{1/4} δ A^{1/4})` and the check `E ≥ (m/4) tr δ`.
pub fn energy(spec: &ModeSpectrum, delta: &Perturbation) -> Result<(f64, InequalityReport)> {
    require_dim(spec, delta)?;
    require_psd(delta)?;
    let d = delta.matrix();
    let e = 0.25
        * spec
            .coordinate_frequencies()
            .iter()
            .enumerate()
            .map(|(i, w)| w * d[(i, i)])
            .sum::<f64>();
    let bound = 0.25 * spec.mass() * delta.trace();
    Ok((e, InequalityReport::less_eq("energy.lower_bound", bound, e)))
}

/// Modular data of `R_δ` over the vacuum.
///
/// Standardness is judged on the stable gap with threshold zero: for a
/// strictly positive δ the state is faithful however small `1 − |s|` gets.
fn perturbed_modular(spec: &ModeSpectrum, delta: &Perturbation) -> Result<(CanonicalPolarisation, ModularData)> {
    let pol = vacuum_polarisation(spec).perturb(delta)?;
    let data = ModularData::new(&pol, 0.0)?;
    Ok((pol, data))
}

/// The three bounds in terms of the energy, through `K_δ`.
pub fn verify_minkowski_bounds(spec: &ModeSpectrum, delta: &Perturbation) -> Result<Vec<InequalityReport>> {
    require_dim(spec, delta)?;
    let min = delta.min_eigenvalue();
    if !(min > 0.0) {
        return Err(Error::NotStrictlyPositive { min_eigenvalue: min });
    }
    let (e, _) = energy(spec, delta)?;
    let m = spec.mass();
    let (_, data) = perturbed_modular(spec, delta)?;
    let vacuum = vacuum_polarisation(spec);
    let i = Complex64::new(0.0, 1.0);
    // R_vac⁻¹ = −R_vac
    let coth_route = data.coth_half(0.0)? * i + complexify(vacuum.r());
    let sech = data.sech_half();
    let csch = data.csch_half(0.0)?;
    let ratio = e / m;
    Ok(vec![
        InequalityReport::less_eq("minkowski.coth_half", schatten_norm(&coth_route, SchattenP::One)?, 8.0 * ratio),
        InequalityReport::less_eq("minkowski.sech_half", sech.norm_squared(), 8.0 * ratio),
        InequalityReport::less_eq("minkowski.csch_half", csch.norm_squared(), 16.0 * ratio * (1.0 + 8.0 * ratio)),
    ])
}

/// Closed-form mode sums of the thermal state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalClosedForm {
    /// `Σ 2g δ`.
    pub trace_delta: f64,
    /// `Σ 2g tanh(βω/2)(1 + tanh(βω/2)) δ`.
    pub sqrt_gap_hs_sq: f64,
    /// `Σ 2g δ(δ + 2)`.
    pub inverse_sqrt_gap_hs_sq: f64,
    /// `Σ g ω/(e^{βω} − 1)`.
    pub energy: f64,
    /// `{±βω_k}`, each `g_k` times, ascending.
    pub k_spectrum: Vec<f64>,
    /// Smallest Bose factor; zero once `βω` overflows.
    pub min_delta: f64,
}

pub fn thermal_closed_form(spec: &ModeSpectrum, beta: f64) -> Result<ThermalClosedForm> {
    check_beta(beta)?;
    let mut out = ThermalClosedForm {
        trace_delta: 0.0,
        sqrt_gap_hs_sq: 0.0,
        inverse_sqrt_gap_hs_sq: 0.0,
        energy: 0.0,
        k_spectrum: Vec::with_capacity(spec.dim()),
        min_delta: f64::INFINITY,
    };
    for mode in spec.modes() {
        let g = mode.multiplicity as f64;
        let x = beta * mode.omega;
        let d = bose_delta(beta, mode.omega);
        let t = (0.5 * x).tanh();
        out.trace_delta += 2.0 * g * d;
        out.sqrt_gap_hs_sq += 2.0 * g * t * (1.0 + t) * d;
        out.inverse_sqrt_gap_hs_sq += 2.0 * g * d * (d + 2.0);
        out.energy += g * mode.omega / x.exp_m1();
        out.min_delta = out.min_delta.min(d);
        for _ in 0..mode.multiplicity {
            out.k_spectrum.push(x);
            out.k_spectrum.push(-x);
        }
    }
    out.k_spectrum.sort_by(f64::total_cmp);
    Ok(out)
}

/// Dense evaluation of the thermal identities against the closed forms.
///
/// Reports: trace identity, sqrt-gap identity and its strict bound,
/// inverse-sqrt-gap identity, modular spectrum, Σ closed form. Checks that
/// need `K_β` are skipped when a Bose factor underflows to zero.
pub fn thermal_exact_identities(spec: &ModeSpectrum, beta: f64) -> Result<Vec<InequalityReport>> {
    let closed = thermal_closed_form(spec, beta)?;
    let delta = thermal_delta(spec, beta)?;
    let vacuum = vacuum_polarisation(spec);
    let thermal = vacuum.perturb(&delta)?;

    let inv = inverse_real(thermal.r())?;
    // R_vac⁻¹ = −R_vac
    let trace_lhs = schatten_norm(&complexify(&(&inv + vacuum.r())), SchattenP::One)?;
    let sqrt_gap = sqrt_psd_real(thermal.gap())?;
    let sqrt_lhs = sqrt_gap.norm_squared();
    let inv_sqrt_lhs = (&inv * &sqrt_gap).norm_squared();

    let mut out = vec![
        InequalityReport::equal("thermal.trace_identity", trace_lhs, closed.trace_delta, IDENTITY_RTOL),
        InequalityReport::equal("thermal.sqrt_gap_identity", sqrt_lhs, closed.sqrt_gap_hs_sq, IDENTITY_RTOL),
    ];
    let twice_trace = 2.0 * closed.trace_delta;
    out.push(if twice_trace > 0.0 {
        InequalityReport::less("thermal.sqrt_gap_strict", sqrt_lhs, twice_trace)
    } else {
        InequalityReport::skipped("thermal.sqrt_gap_strict", "tr delta underflows to zero")
    });
    out.push(InequalityReport::equal(
        "thermal.inverse_sqrt_gap_identity",
        inv_sqrt_lhs,
        closed.inverse_sqrt_gap_hs_sq,
        IDENTITY_RTOL,
    ));

    if closed.min_delta > 0.0 {
        let data = ModularData::new(&thermal, 0.0)?;
        let mut k = data.k_eigenvalues().to_vec();
        k.sort_by(f64::total_cmp);
        let deviation = k
            .iter()
            .zip(&closed.k_spectrum)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.push(InequalityReport::at_most("thermal.k_spectrum", deviation, SPECTRUM_TOL));
    } else {
        out.push(InequalityReport::skipped(
            "thermal.k_spectrum",
            "a Bose factor underflows to zero, K_beta is not representable",
        ));
    }

    // Σ_β = tanh(βω/2)·Σ_vac, coordinate by coordinate
    let t = DVector::from_iterator(
        spec.dim(),
        spec.coordinate_frequencies().iter().map(|w| (0.5 * beta * w).tanh()),
    );
    let expected = vacuum.r().component_mul(&(&t * t.transpose()).map(f64::sqrt));
    let deviation = crate::matops::max_abs_real(&(thermal.r() - expected));
    out.push(InequalityReport::at_most("thermal.sigma_closed_form", deviation, 1e-12));
    Ok(out)
}

/// `tr δ_β` at each cutoff, from the closed form.
pub fn trace_delta_by_cutoff(geometry: &Geometry, mass: f64, beta: f64, cutoffs: &[usize]) -> Result<Vec<(usize, f64)>> {
    cutoffs
        .iter()
        .map(|&n| {
            let spec = build_spectrum_with_limit(geometry.clone(), mass, n, usize::MAX)?;
            Ok((n, thermal_closed_form(&spec, beta)?.trace_delta))
        })
        .collect()
}
