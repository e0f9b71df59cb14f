//! Quasi-equivalence quantities of perturbed Gaussian states and checks of
//! the accompanying Schatten-norm estimates.
//!
//! At finite dimension every pair of faithful states is quasi-equivalent, so
//! nothing here returns a yes/no verdict on equivalence. The functions report
//! the sizes of the relevant norms and whether each estimate holds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CanonicalPolarisation, Perturbation, PositivityClass, PSD_TOL};
use crate::matops::{
    self, complexify, inverse_real, schatten_norm, sqrt_psd, sqrt_psd_real, DenseMatrix, Domain,
    SchattenP, SpectralFn, SpectralOptions,
};
use crate::modular::{factorial_check, ModularData, FACTORIAL_EPS};

/// Absolute slack of `≤` checks, scaled by `max(1, rhs)`.
pub const LESS_EQ_ATOL: f64 = 1e-9;
/// Agreement required between the R-route and the K-route.
pub const ROUTE_RTOL: f64 = 1e-9;

/// How `lhs` is compared with `rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `lhs ≤ rhs + 1e−9·max(1, rhs)`.
    LessEq,
    /// `lhs < rhs`.
    Less,
    /// `lhs ≤ rhs` with no slack; used when `rhs` is itself a tolerance.
    AtMost,
    /// `|lhs − rhs| ≤ rtol·max(|lhs|, |rhs|)`.
    Equal { rtol: f64 },
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::LessEq | Relation::AtMost => "<=",
            Relation::Less => "<",
            Relation::Equal { .. } => "==",
        }
    }

    fn holds(&self, lhs: f64, rhs: f64) -> bool {
        match *self {
            Relation::LessEq => lhs <= rhs + LESS_EQ_ATOL * rhs.max(1.0),
            Relation::Less => lhs < rhs,
            Relation::AtMost => lhs <= rhs,
            Relation::Equal { rtol } => (lhs - rhs).abs() <= rtol * lhs.abs().max(rhs.abs()),
        }
    }
}

/// One evaluated inequality or identity.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs − lhs`.
    pub margin: f64,
    /// `margin / |rhs|`, or `margin` when `rhs = 0`.
    pub relative_slack: f64,
    pub relation: Relation,
    /// Left-hand side recomputed along an independent route, if any.
    pub cross_check: Option<f64>,
    pub note: Option<String>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, relation: Relation) -> Self {
        let margin = rhs - lhs;
        let relative_slack = if rhs != 0.0 { margin / rhs.abs() } else { margin };
        Self {
            name: name.into(),
            lhs,
            rhs,
            holds: relation.holds(lhs, rhs),
            margin,
            relative_slack,
            relation,
            cross_check: None,
            note: None,
        }
    }

    pub fn less_eq(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, Relation::LessEq)
    }

    pub fn less(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::new(name, lhs, rhs, Relation::Less)
    }

    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, tolerance, Relation::AtMost)
    }

    pub fn equal(name: impl Into<String>, lhs: f64, rhs: f64, rtol: f64) -> Self {
        Self::new(name, lhs, rhs, Relation::Equal { rtol })
    }

    /// A check whose hypotheses are not met; counts as holding.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            holds: true,
            margin: f64::NAN,
            relative_slack: f64::NAN,
            relation: Relation::LessEq,
            cross_check: None,
            note: Some(format!("skipped: {}", reason.into())),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.note.as_deref().is_some_and(|n| n.starts_with("skipped"))
    }

    /// Records a second evaluation of `lhs`; a disagreement beyond
    /// `rtol·max(1, |lhs|, |other|)` marks the report as failed.
    pub fn with_cross_check(mut self, other: f64, rtol: f64) -> Self {
        self.cross_check = Some(other);
        let scale = self.lhs.abs().max(other.abs()).max(1.0);
        if !((self.lhs - other).abs() <= rtol * scale) {
            self.holds = false;
            self.note = Some(format!("routes disagree: {:e} vs {:e}", self.lhs, other));
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

fn hs_sq(a: &DenseMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn require_psd(delta: &Perturbation) -> Result<()> {
    let min = delta.min_eigenvalue();
    if delta.class() == PositivityClass::Psd || min >= -PSD_TOL {
        Ok(())
    } else {
        Err(Error::NotPsd {
            min_eigenvalue: min,
            tolerance: PSD_TOL,
        })
    }
}

fn require_dim(pol: &CanonicalPolarisation, delta: &Perturbation) -> Result<()> {
    if pol.dim() == delta.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: pol.dim(),
            found: delta.dim(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArakiYamagami {
    /// `‖√(1 + δ + Σ₀) − √(1 + Σ₀)‖_HS`.
    pub hs_value: f64,
    /// `hs_value² ≤ tr|δ|`.
    pub ps_bound: InequalityReport,
    /// `(‖1 + δ‖_∞, ‖(1 + δ)^{−1}‖_∞)`, reported without a verdict.
    pub norm_equivalence: (f64, f64),
}

pub fn araki_yamagami_quantities(sigma0: &DenseMatrix, delta: &Perturbation) -> Result<ArakiYamagami> {
    let n = matops::ensure_square(sigma0)?;
    if n != delta.dim() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: delta.dim(),
        });
    }
    let one_plus_sigma = DenseMatrix::identity(n, n) + sigma0;
    let perturbed = &one_plus_sigma + complexify(delta.matrix());
    let diff = sqrt_psd(&perturbed)? - sqrt_psd(&one_plus_sigma)?;
    let hs_value = hs_sq(&diff).sqrt();
    Ok(ArakiYamagami {
        hs_value,
        ps_bound: InequalityReport::less_eq("araki_yamagami.hs_sq_le_trace", hs_value * hs_value, delta.norm(SchattenP::One)),
        norm_equivalence: delta.norm_equivalence(),
    })
}

/// The three Hilbert-Schmidt distances between polarisations that decide
/// quasi-equivalence in the factorial case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongoQuantities {
    /// `‖R₁⁻¹ − R₂⁻¹‖_HS`.
    pub inverse: f64,
    /// `‖R₁⁻¹√(1+R₁²) − R₂⁻¹√(1+R₂²)‖_HS`.
    pub inverse_sqrt: f64,
    /// `‖√(1+R₁²) − √(1+R₂²)‖_HS`.
    pub sqrt: f64,
    /// HS norm of `A₁ − A₂ − (R₁⁻¹ − R₂⁻¹)√(1+R₁²) − R₂⁻¹(√(1+R₁²) − √(1+R₂²))`
    /// with `A = R⁻¹√(1+R²)`; zero up to rounding.
    pub decomposition_residual: f64,
}

pub fn longo_quantities(r1: &CanonicalPolarisation, r2: &CanonicalPolarisation, eps: f64) -> Result<LongoQuantities> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch {
            expected: r1.dim(),
            found: r2.dim(),
        });
    }
    for pol in [r1, r2] {
        let check = factorial_check(pol, eps);
        if !check.passed {
            return Err(Error::NotFactorial { margin: check.margin, eps });
        }
    }
    let inv1 = inverse_real(r1.r())?;
    let inv2 = inverse_real(r2.r())?;
    let s1 = sqrt_psd_real(r1.gap())?;
    let s2 = sqrt_psd_real(r2.gap())?;
    let a1 = &inv1 * &s1;
    let a2 = &inv2 * &s2;
    let d_inv = &inv1 - &inv2;
    let d_sqrt = &s1 - &s2;
    let d_a = &a1 - &a2;
    let residual = &d_a - &d_inv * &s1 - &inv2 * &d_sqrt;
    Ok(LongoQuantities {
        inverse: d_inv.norm(),
        inverse_sqrt: d_a.norm(),
        sqrt: d_sqrt.norm(),
        decomposition_residual: residual.norm(),
    })
}

/// `‖R_δ − R₀‖_p ≤ ‖δ‖_p` for `δ ≥ 0`, and `≤ 2‖(1+δ)^{−1/2}‖·‖δ‖_p`
/// when only `1 + δ > 0` is known.
pub fn verify_r_estimate(base: &CanonicalPolarisation, delta: &Perturbation, p: SchattenP) -> Result<InequalityReport> {
    require_dim(base, delta)?;
    let perturbed = base.perturb(delta)?;
    let lhs = schatten_norm(&complexify(&(perturbed.r() - base.r())), p)?;
    let rhs = match delta.class() {
        PositivityClass::Psd => delta.norm(p),
        PositivityClass::InvertiblePlusOne => 2.0 / (1.0 + delta.min_eigenvalue()).sqrt() * delta.norm(p),
    };
    Ok(InequalityReport::less_eq(format!("r_estimate.p{}", p.label()), lhs, rhs))
}

/// Left-hand sides of the three perturbation estimates along the R-route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteValues {
    pub sqrt_hs_sq: f64,
    pub inverse_trace: Option<f64>,
    pub inverse_sqrt_hs_sq: Option<f64>,
}

fn r_route(base: &CanonicalPolarisation, perturbed: &CanonicalPolarisation, factorial: bool) -> Result<RouteValues> {
    let s0 = sqrt_psd_real(base.gap())?;
    let sd = sqrt_psd_real(perturbed.gap())?;
    let sqrt_hs_sq = (&sd - &s0).norm_squared();
    if !factorial {
        return Ok(RouteValues {
            sqrt_hs_sq,
            inverse_trace: None,
            inverse_sqrt_hs_sq: None,
        });
    }
    let inv0 = inverse_real(base.r())?;
    let invd = inverse_real(perturbed.r())?;
    let inverse_trace = schatten_norm(&complexify(&(&invd - &inv0)), SchattenP::One)?;
    let inverse_sqrt_hs_sq = (&invd * &sd - &inv0 * &s0).norm_squared();
    Ok(RouteValues {
        sqrt_hs_sq,
        inverse_trace: Some(inverse_trace),
        inverse_sqrt_hs_sq: Some(inverse_sqrt_hs_sq),
    })
}

const NOT_INVERTIBLE: &str = "R0 not invertible";

fn theorem_reports(values: &RouteValues, trace: f64, inv_norm: Option<f64>) -> Vec<InequalityReport> {
    let mut out = vec![InequalityReport::less_eq("sqrt_gap.hs_sq", values.sqrt_hs_sq, 2.0 * trace)];
    match (values.inverse_trace, values.inverse_sqrt_hs_sq, inv_norm) {
        (Some(b), Some(c), Some(k)) => {
            out.push(InequalityReport::less_eq("inverse.trace_norm", b, 2.0 * k * trace));
            out.push(InequalityReport::less_eq(
                "inverse_sqrt_gap.hs_sq",
                c,
                4.0 * k * k * (trace + 2.0 * trace * trace),
            ));
        }
        _ => {
            out.push(InequalityReport::skipped("inverse.trace_norm", NOT_INVERTIBLE));
            out.push(InequalityReport::skipped("inverse_sqrt_gap.hs_sq", NOT_INVERTIBLE));
        }
    }
    out
}

/// The three trace-class estimates for `δ ≥ 0`, with inverses of R.
///
/// Reports 2 and 3 are skipped when `R₀` is not invertible.
pub fn verify_theorem_bounds(base: &CanonicalPolarisation, delta: &Perturbation) -> Result<Vec<InequalityReport>> {
    require_dim(base, delta)?;
    require_psd(delta)?;
    let perturbed = base.perturb(delta)?;
    let factorial = factorial_check(base, FACTORIAL_EPS);
    let values = r_route(base, &perturbed, factorial.passed)?;
    let inv_norm = factorial.passed.then(|| 1.0 / factorial.margin);
    Ok(theorem_reports(&values, delta.trace(), inv_norm))
}

/// `sech`, `coth`, `csch` of `K/2` written through Σ, so they also exist on
/// non-standard polarisations: `√(1−Σ²)`, `Σ⁻¹`, `Σ⁻¹√(1−Σ²)`.
fn sigma_side_functions(pol: &CanonicalPolarisation, factorial: bool) -> (DenseMatrix, Option<(DenseMatrix, DenseMatrix)>) {
    let spec = pol.spectrum();
    let re = |x: f64| Complex64::new(x, 0.0);
    let sech = spec.compose(|j| re(spec.gaps()[j].sqrt()));
    let inverse = factorial.then(|| {
        let s = spec.eigenvalues();
        (
            spec.compose(|j| re(1.0 / s[j])),
            spec.compose(|j| re(spec.gaps()[j].sqrt() / s[j])),
        )
    });
    (sech, inverse)
}

/// The estimates of [`verify_theorem_bounds`] evaluated through the modular
/// Hamiltonian `K_δ`, each cross-checked against the R-route, plus
/// `tr|−i tanh(K_δ/2) − R₀| ≤ tr δ`.
///
/// `eps` is the standardness threshold applied to `R_δ`.
pub fn verify_corollary_modular(base: &CanonicalPolarisation, delta: &Perturbation, eps: f64) -> Result<Vec<InequalityReport>> {
    require_dim(base, delta)?;
    require_psd(delta)?;
    let perturbed = base.perturb(delta)?;
    let data = ModularData::new(&perturbed, eps)?;
    let factorial = factorial_check(base, FACTORIAL_EPS);
    let r_values = r_route(base, &perturbed, factorial.passed)?;
    let trace = delta.trace();

    let (sech0, inverse0) = sigma_side_functions(base, factorial.passed);
    let sqrt_hs_sq = hs_sq(&(data.sech_half() - &sech0));
    let (inverse_trace, inverse_sqrt_hs_sq) = match &inverse0 {
        Some((coth0, csch0)) => (
            Some(schatten_norm(&(data.coth_half(0.0)? - coth0), SchattenP::One)?),
            Some(hs_sq(&(data.csch_half(0.0)? - csch0))),
        ),
        None => (None, None),
    };
    let k_values = RouteValues {
        sqrt_hs_sq,
        inverse_trace,
        inverse_sqrt_hs_sq,
    };
    let inv_norm = factorial.passed.then(|| 1.0 / factorial.margin);
    let mut reports: Vec<InequalityReport> = theorem_reports(&k_values, trace, inv_norm)
        .into_iter()
        .zip([Some(r_values.sqrt_hs_sq), r_values.inverse_trace, r_values.inverse_sqrt_hs_sq])
        .map(|(report, other)| {
            let name = format!("modular.{}", report.name);
            let report = report.renamed(name);
            match other {
                Some(x) if !report.is_skipped() => report.with_cross_check(x, ROUTE_RTOL),
                _ => report,
            }
        })
        .collect();

    let tanh_route = data.tanh_half() * Complex64::new(0.0, -1.0) - complexify(base.r());
    reports.push(InequalityReport::less_eq(
        "modular.tanh_half.trace_norm",
        schatten_norm(&tanh_route, SchattenP::One)?,
        trace,
    ));
    Ok(reports)
}

fn sqrt_pair(a: &DenseMatrix, b: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = matops::ensure_square(a)?;
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.nrows(),
        });
    }
    Ok((sqrt_psd(a)?, sqrt_psd(b)?))
}

/// `‖√A − √B‖²_HS ≤ tr|A − B|`.
pub fn powers_stormer_check(a: &DenseMatrix, b: &DenseMatrix) -> Result<InequalityReport> {
    let (ra, rb) = sqrt_pair(a, b)?;
    Ok(InequalityReport::less_eq(
        "powers_stormer",
        hs_sq(&(ra - rb)),
        schatten_norm(&(a - b), SchattenP::One)?,
    ))
}

/// `α‖√A − √B‖_p ≤ ‖A − B‖_p` with `α = min eig(√A + √B)`.
pub fn van_hemmen_ando_check(a: &DenseMatrix, b: &DenseMatrix, p: SchattenP) -> Result<InequalityReport> {
    let (ra, rb) = sqrt_pair(a, b)?;
    let alpha = matops::hermitian_eig(&(&ra + &rb))?.min_eigenvalue().max(0.0);
    Ok(InequalityReport::less_eq(
        format!("van_hemmen_ando.p{}", p.label()),
        alpha * schatten_norm(&(ra - rb), p)?,
        schatten_norm(&(a - b), p)?,
    ))
}

/// `‖√A X √B‖_p ≤ ½‖AX + XB‖_p`.
pub fn am_gm_check(a: &DenseMatrix, b: &DenseMatrix, x: &DenseMatrix, p: SchattenP) -> Result<InequalityReport> {
    let (ra, rb) = sqrt_pair(a, b)?;
    if x.nrows() != a.nrows() || x.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: x.nrows(),
        });
    }
    Ok(InequalityReport::less_eq(
        format!("am_gm.p{}", p.label()),
        schatten_norm(&(ra * x * rb), p)?,
        0.5 * schatten_norm(&(a * x + x * b), p)?,
    ))
}

/// A function on `[−1, 1]` with a declared Lipschitz constant.
#[derive(Clone, Copy)]
pub struct LipschitzFn {
    pub function: SpectralFn<fn(f64) -> f64>,
    pub constant: f64,
}

impl LipschitzFn {
    const INTERVAL: Domain = Domain::Closed { lo: -1.0, hi: 1.0 };
    pub const IDENTITY: LipschitzFn = LipschitzFn {
        function: SpectralFn::new("identity", Self::INTERVAL, |x| x),
        constant: 1.0,
    };
    pub const TANH: LipschitzFn = LipschitzFn {
        function: SpectralFn::new("tanh", Self::INTERVAL, f64::tanh),
        constant: 1.0,
    };
    pub const SQUARE: LipschitzFn = LipschitzFn {
        function: SpectralFn::new("square", Self::INTERVAL, |x| x * x),
        constant: 2.0,
    };
    pub const SIN: LipschitzFn = LipschitzFn {
        function: SpectralFn::new("sin", Self::INTERVAL, f64::sin),
        constant: 1.0,
    };
    pub const ALL: [LipschitzFn; 4] = [Self::IDENTITY, Self::TANH, Self::SQUARE, Self::SIN];
}

/// `‖f(Σ_δ) − f(Σ₀)‖_HS ≤ k‖δ‖_HS` for `δ ≥ 0`.
pub fn lipschitz_check(f: &LipschitzFn, base: &CanonicalPolarisation, delta: &Perturbation) -> Result<InequalityReport> {
    require_dim(base, delta)?;
    require_psd(delta)?;
    let perturbed = base.perturb(delta)?;
    // ‖Σ‖ may exceed 1 by the domination slack
    let opts = SpectralOptions::clamping();
    let f0 = matops::apply_spectral(base.spectrum().eigen_system(), &f.function, opts)?;
    let fd = matops::apply_spectral(perturbed.spectrum().eigen_system(), &f.function, opts)?;
    Ok(InequalityReport::less_eq(
        format!("lipschitz.{}", f.function.name),
        hs_sq(&(fd - f0)).sqrt(),
        f.constant * delta.norm(SchattenP::Two),
    ))
}
