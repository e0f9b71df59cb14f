//! Dense matrix engine: Hermitian eigendecomposition, spectral calculus and
//! Schatten norms.
//!
//! Real-linear operators are stored through their complex-linear extension,
//! so every trace and norm in this crate is taken over the complexified
//! space. Tolerance checks use the entrywise max norm ([`max_abs`]).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

/// Relative reconstruction tolerance promised by [`hermitian_eig`].
pub const RECONSTRUCTION_RTOL: f64 = 1e-10;
/// Relative asymmetry accepted by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Default guard band around singular points of spectral functions.
pub const DEFAULT_GUARD: f64 = 1e-12;
/// Relative clamping tolerance of [`sqrt_psd`].
pub const PSD_CTOL: f64 = 1e-10;

// below this relative asymmetry a matrix is treated as exactly (skew-)Hermitian
// when picking the singular value route
const NORMAL_ROUTE_TOL: f64 = 1e-13;

pub fn complexify(a: &RealMatrix) -> DenseMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(a: &DenseMatrix) -> RealMatrix {
    a.map(|z| z.re)
}

pub fn imag_part(a: &DenseMatrix) -> RealMatrix {
    a.map(|z| z.im)
}

/// Entrywise max norm.
pub fn max_abs(a: &DenseMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_real(a: &RealMatrix) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn identity(n: usize) -> DenseMatrix {
    DenseMatrix::identity(n, n)
}

pub(crate) fn ensure_square<T: nalgebra::Scalar>(a: &DMatrix<T>) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NonSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

fn ensure_finite(a: &DenseMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Eigenvalues in ascending order with a unitary matrix of eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: DenseMatrix,
}

impl HermitianEigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DenseMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V · diag(values) · V*`.
    pub fn compose_values(&self, values: &[Complex64]) -> DenseMatrix {
        assert_eq!(values.len(), self.dim(), "one value per eigenvalue");
        let mut scaled = self.eigenvectors.clone();
        for (mut col, v) in scaled.column_iter_mut().zip(values) {
            col *= *v;
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `V · diag(f(λ)) · V*` without any domain checks.
    pub fn compose<F, T>(&self, f: F) -> DenseMatrix
    where
        F: Fn(f64) -> T,
        T: Into<Complex64>,
    {
        let values: Vec<Complex64> = self.eigenvalues.iter().map(|&x| f(x).into()).collect();
        self.compose_values(&values)
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.compose(|x| x)
    }
}

/// Groups indices into the connected components of the nonzero pattern.
fn components(a: &DenseMatrix) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in (j + 1)..n {
            if a[(i, j)] != Complex64::new(0.0, 0.0) || a[(j, i)] != Complex64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

/// Closed form for a 2x2 Hermitian block, ascending.
fn eig_2x2(a: f64, b: Complex64, d: f64) -> [(f64, [Complex64; 2]); 2] {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b.norm());
    // pick the formula without cancellation in the first eigenvector
    let upper = if half >= 0.0 {
        [Complex64::new(half + r, 0.0), b.conj()]
    } else {
        [b, Complex64::new(r - half, 0.0)]
    };
    let norm = (upper[0].norm_sqr() + upper[1].norm_sqr()).sqrt();
    let upper = [upper[0] / norm, upper[1] / norm];
    let lower = [-upper[1].conj(), upper[0].conj()];
    [(mean - r, lower), (mean + r, upper)]
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The matrix is first split into the connected components of its sparsity
/// pattern; each component is solved on its own (closed form up to size 2,
/// implicit QR above). Block-diagonal inputs therefore never mix blocks.
pub fn hermitian_eig(a: &DenseMatrix) -> Result<HermitianEigenSystem> {
    let n = ensure_square(a)?;
    ensure_finite(a)?;
    let scale = max_abs(a);
    let asymmetry = max_abs(&(a - a.adjoint()));
    let tolerance = HERMITIAN_TOL * scale.max(1.0);
    if asymmetry > tolerance {
        return Err(Error::NonHermitian {
            asymmetry,
            tolerance,
        });
    }
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);

    let mut pairs: Vec<(f64, Vec<(usize, Complex64)>)> = Vec::with_capacity(n);
    for comp in components(&h) {
        match comp.len() {
            1 => {
                let i = comp[0];
                pairs.push((h[(i, i)].re, vec![(i, Complex64::new(1.0, 0.0))]));
            }
            2 => {
                let (i, j) = (comp[0], comp[1]);
                for (value, v) in eig_2x2(h[(i, i)].re, h[(i, j)], h[(j, j)].re) {
                    pairs.push((value, vec![(i, v[0]), (j, v[1])]));
                }
            }
            k => {
                let sub = DenseMatrix::from_fn(k, k, |r, c| h[(comp[r], comp[c])]);
                let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
                for (c, &value) in eig.eigenvalues.iter().enumerate() {
                    let col = eig.eigenvectors.column(c);
                    pairs.push((value, comp.iter().zip(col.iter()).map(|(&i, &z)| (i, z)).collect()));
                }
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut eigenvectors = DenseMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (c, (value, entries)) in pairs.into_iter().enumerate() {
        eigenvalues.push(value);
        for (i, z) in entries {
            eigenvectors[(i, c)] = z;
        }
    }
    Ok(HermitianEigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Where a spectral function is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Real,
    /// Open interval `(lo, hi)`.
    Open { lo: f64, hi: f64 },
    /// Closed interval `[lo, hi]`; values within the guard band outside are clamped.
    Closed { lo: f64, hi: f64 },
    /// `x > 0`.
    Positive,
    /// `x != 0`.
    NonZero,
}

impl Domain {
    /// `Ok(x')` with `x'` the (possibly clamped) argument, `Err(boundary)` on violation.
    fn admit(&self, x: f64, guard: f64, clamp: bool) -> std::result::Result<f64, f64> {
        match *self {
            Domain::Real => Ok(x),
            Domain::Open { lo, hi } => {
                if x <= lo + guard {
                    if clamp { Ok(lo + guard) } else { Err(lo) }
                } else if x >= hi - guard {
                    if clamp { Ok(hi - guard) } else { Err(hi) }
                } else {
                    Ok(x)
                }
            }
            Domain::Closed { lo, hi } => {
                if x < lo - guard && !clamp {
                    Err(lo)
                } else if x > hi + guard && !clamp {
                    Err(hi)
                } else {
                    Ok(x.clamp(lo, hi))
                }
            }
            Domain::Positive => {
                if x <= guard {
                    if clamp { Ok(guard) } else { Err(0.0) }
                } else {
                    Ok(x)
                }
            }
            Domain::NonZero => {
                if x.abs() <= guard {
                    if clamp { Ok(if x < 0.0 { -guard } else { guard }) } else { Err(0.0) }
                } else {
                    Ok(x)
                }
            }
        }
    }
}

/// A scalar map together with the domain it may be evaluated on.
#[derive(Clone, Copy)]
pub struct SpectralFn<F> {
    pub name: &'static str,
    pub domain: Domain,
    pub f: F,
}

impl<F> SpectralFn<F> {
    pub const fn new(name: &'static str, domain: Domain, f: F) -> Self {
        Self { name, domain, f }
    }
}

pub type RealFn = SpectralFn<fn(f64) -> f64>;

impl RealFn {
    pub const IDENTITY: RealFn = SpectralFn::new("identity", Domain::Real, |x| x);
    pub const EXP: RealFn = SpectralFn::new("exp", Domain::Real, f64::exp);
    pub const LOG: RealFn = SpectralFn::new("log", Domain::Positive, f64::ln);
    pub const ARTANH: RealFn = SpectralFn::new("artanh", Domain::Open { lo: -1.0, hi: 1.0 }, f64::atanh);
    pub const RECIPROCAL: RealFn = SpectralFn::new("reciprocal", Domain::NonZero, |x| 1.0 / x);
    pub const CSCH: RealFn = SpectralFn::new("csch", Domain::NonZero, |x| 1.0 / x.sinh());
    pub const TANH: RealFn = SpectralFn::new("tanh", Domain::Real, f64::tanh);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub guard: f64,
    /// Clamp eigenvalues into the domain instead of failing.
    pub clamp: bool,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            guard: DEFAULT_GUARD,
            clamp: false,
        }
    }
}

impl SpectralOptions {
    pub fn clamping() -> Self {
        Self {
            clamp: true,
            ..Self::default()
        }
    }
}

/// Applies `f` to the eigenvalues of an already decomposed matrix.
pub fn apply_spectral<F, T>(eig: &HermitianEigenSystem, f: &SpectralFn<F>, opts: SpectralOptions) -> Result<DenseMatrix>
where
    F: Fn(f64) -> T,
    T: Into<Complex64>,
{
    let mut values = Vec::with_capacity(eig.dim());
    for &x in eig.eigenvalues() {
        let x = f.domain.admit(x, opts.guard, opts.clamp).map_err(|boundary| Error::DomainViolation {
            function: f.name,
            value: x,
            boundary,
        })?;
        values.push((f.f)(x).into());
    }
    Ok(eig.compose_values(&values))
}

/// `f(A)` by spectral calculus.
pub fn matrix_function<F, T>(a: &DenseMatrix, f: &SpectralFn<F>, opts: SpectralOptions) -> Result<DenseMatrix>
where
    F: Fn(f64) -> T,
    T: Into<Complex64>,
{
    apply_spectral(&hermitian_eig(a)?, f, opts)
}

/// Positive square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-ctol, 0)` with `ctol = 1e-10 · ‖A‖` are clamped to zero.
pub fn sqrt_psd(a: &DenseMatrix) -> Result<DenseMatrix> {
    let eig = hermitian_eig(a)?;
    let tolerance = PSD_CTOL * max_abs(a);
    let min = eig.min_eigenvalue();
    if min < -tolerance {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
            tolerance,
        });
    }
    Ok(eig.compose(|x| x.max(0.0).sqrt()))
}

pub fn sqrt_psd_real(a: &RealMatrix) -> Result<RealMatrix> {
    sqrt_psd(&complexify(a)).map(|m| real_part(&m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchattenP {
    One,
    Two,
    Inf,
}

impl SchattenP {
    pub const ALL: [SchattenP; 3] = [SchattenP::One, SchattenP::Two, SchattenP::Inf];

    pub fn label(&self) -> &'static str {
        match self {
            SchattenP::One => "1",
            SchattenP::Two => "2",
            SchattenP::Inf => "inf",
        }
    }

    fn aggregate(&self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            SchattenP::One => values.sum(),
            SchattenP::Two => values.map(|s| s * s).sum::<f64>().sqrt(),
            SchattenP::Inf => values.fold(0.0, f64::max),
        }
    }
}

impl std::str::FromStr for SchattenP {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(SchattenP::One),
            "2" => Ok(SchattenP::Two),
            "inf" | "∞" => Ok(SchattenP::Inf),
            other => Err(Error::InvalidArgument(format!("unsupported Schatten exponent {other}"))),
        }
    }
}

/// Singular values of a square matrix.
///
/// Hermitian and skew-Hermitian inputs use the eigenvalue route, everything
/// else a direct SVD.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    ensure_square(a)?;
    ensure_finite(a)?;
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let tol = NORMAL_ROUTE_TOL * scale;
    let half = Complex64::new(0.5, 0.0);
    if max_abs(&(a - a.adjoint())) <= tol {
        let h = (a + a.adjoint()) * half;
        return Ok(hermitian_eig(&h)?.eigenvalues().iter().map(|x| x.abs()).collect());
    }
    if max_abs(&(a + a.adjoint())) <= tol {
        let h = (a - a.adjoint()) * Complex64::new(0.0, 0.5);
        return Ok(hermitian_eig(&h)?.eigenvalues().iter().map(|x| x.abs()).collect());
    }
    let svd = a.clone().try_svd(false, false, f64::EPSILON, 0).ok_or(Error::NoConvergence)?;
    Ok(svd.singular_values.iter().copied().collect())
}

/// Schatten p-norm for p in {1, 2, ∞}.
pub fn schatten_norm(a: &DenseMatrix, p: SchattenP) -> Result<f64> {
    ensure_square(a)?;
    if p == SchattenP::Two {
        // Frobenius sum equals the singular value sum and needs no decomposition
        ensure_finite(a)?;
        return Ok(a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok(p.aggregate(singular_values(a)?.into_iter()))
}

pub fn schatten_norm_real(a: &RealMatrix, p: SchattenP) -> Result<f64> {
    schatten_norm(&complexify(a), p)
}

pub fn trace(a: &DenseMatrix) -> Result<Complex64> {
    ensure_square(a)?;
    Ok(a.diagonal().iter().sum())
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    ensure_square(a)?;
    a.clone().try_inverse().ok_or(Error::Singular)
}

pub fn inverse_real(a: &RealMatrix) -> Result<RealMatrix> {
    ensure_square(a)?;
    a.clone().try_inverse().ok_or(Error::Singular)
}

/// `(A + Aᵀ) / 2`
pub fn symmetrize(a: &RealMatrix) -> RealMatrix {
    (a + a.transpose()) * 0.5
}

/// `(A − Aᵀ) / 2`
pub fn antisymmetrize(a: &RealMatrix) -> RealMatrix {
    (a - a.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag(values: &[f64]) -> DenseMatrix {
        DenseMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| c(x, 0.0)),
        ))
    }

    fn check_system(a: &DenseMatrix, eig: &HermitianEigenSystem) {
        let scale = max_abs(a).max(1.0);
        assert!(max_abs(&(a - eig.reconstruct())) <= RECONSTRUCTION_RTOL * scale);
        let v = eig.eigenvectors();
        assert!(max_abs(&(v.adjoint() * v - identity(a.nrows()))) <= 1e-10);
        assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_eig_is_sorted_permutation() {
        let a = diag(&[3.0, 1.0]);
        let eig = hermitian_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 3.0]);
        let v = eig.eigenvectors();
        assert_eq!(v[(1, 0)].norm(), 1.0);
        assert_eq!(v[(0, 1)].norm(), 1.0);
        check_system(&a, &eig);
    }

    #[test]
    fn pauli_y_eig() {
        let a = DenseMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let eig = hermitian_eig(&a).unwrap();
        assert!((eig.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues()[1] - 1.0).abs() < 1e-15);
        check_system(&a, &eig);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = crate::random::random_hermitian(&mut rng, 8);
        let eig = hermitian_eig(&a).unwrap();
        check_system(&a, &eig);
    }

    #[test]
    fn dense_and_block_inputs_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 5, 17, 40] {
            let a = crate::random::random_hermitian(&mut rng, n);
            check_system(&a, &hermitian_eig(&a).unwrap());
        }
        // two decoupled blocks, listed out of order
        let mut a = DenseMatrix::zeros(5, 5);
        a[(0, 3)] = c(0.0, -0.5);
        a[(3, 0)] = c(0.0, 0.5);
        a[(1, 1)] = c(2.0, 0.0);
        a[(2, 4)] = c(1.0, 1.0);
        a[(4, 2)] = c(1.0, -1.0);
        a[(4, 4)] = c(-1.0, 0.0);
        check_system(&a, &hermitian_eig(&a).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let a = DenseMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(hermitian_eig(&a), Err(Error::NonHermitian { .. })));
        assert!(matches!(hermitian_eig(&DenseMatrix::zeros(2, 3)), Err(Error::NonSquare { .. })));
        let mut nan = identity(2);
        nan[(0, 0)] = c(f64::NAN, 0.0);
        assert_eq!(hermitian_eig(&nan).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn artanh_of_diagonal() {
        let out = matrix_function(&diag(&[0.5, -0.5]), &RealFn::ARTANH, SpectralOptions::default()).unwrap();
        let expected = 0.5 * (3.0f64).ln();
        assert!((out[(0, 0)].re - expected).abs() < 1e-15);
        assert!((out[(1, 1)].re + expected).abs() < 1e-15);
        assert!((0.549306144334054 - expected).abs() < 1e-14);
    }

    #[test]
    fn identity_function_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = crate::random::random_hermitian(&mut rng, 6);
        let out = matrix_function(&a, &RealFn::IDENTITY, SpectralOptions::default()).unwrap();
        assert!(max_abs(&(out - &a)) < 1e-12);
    }

    #[test]
    fn domain_guard_band() {
        let err = matrix_function(&diag(&[1.0]), &RealFn::ARTANH, SpectralOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { boundary, .. } if boundary == 1.0));
        let err = matrix_function(&diag(&[1e-13, 2.0]), &RealFn::RECIPROCAL, SpectralOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DomainViolation { boundary, .. } if boundary == 0.0));
        let clamped = matrix_function(&diag(&[1.0]), &RealFn::ARTANH, SpectralOptions::clamping()).unwrap();
        assert!((clamped[(0, 0)].re - (1.0 - DEFAULT_GUARD).atanh()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_psd_examples() {
        let r = sqrt_psd(&diag(&[4.0, 9.0])).unwrap();
        assert!(max_abs(&(r - diag(&[2.0, 3.0]))) < 1e-15);
        let r = sqrt_psd(&diag(&[0.0, 1.0])).unwrap();
        assert!(max_abs(&(r - diag(&[0.0, 1.0]))) < 1e-15);
        assert!(matches!(sqrt_psd(&diag(&[-1.0, 1.0])), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn schatten_examples() {
        let a = diag(&[3.0, -4.0]);
        assert_eq!(schatten_norm(&a, SchattenP::One).unwrap(), 7.0);
        assert_eq!(schatten_norm(&a, SchattenP::Two).unwrap(), 5.0);
        assert_eq!(schatten_norm(&a, SchattenP::Inf).unwrap(), 4.0);
        assert!(matches!(
            schatten_norm(&DenseMatrix::zeros(2, 1), SchattenP::One),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn schatten_routes_agree_on_non_normal_input() {
        // upper triangular Jordan-like block: singular values of [[1,2],[0,3]]
        let a = DenseMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        // oracle: σ² are the roots of t² − 14t + 9
        let disc = (14.0f64 * 14.0 - 36.0).sqrt();
        let s1 = ((14.0 + disc) / 2.0).sqrt();
        let s2 = ((14.0 - disc) / 2.0).sqrt();
        assert!((schatten_norm(&a, SchattenP::One).unwrap() - (s1 + s2)).abs() < 1e-13);
        assert!((schatten_norm(&a, SchattenP::Inf).unwrap() - s1).abs() < 1e-13);
        assert!((schatten_norm(&a, SchattenP::Two).unwrap() - 14f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&identity(4)).unwrap(), c(4.0, 0.0));
        assert_eq!(trace(&diag(&[1.0, 2.0, 3.0])).unwrap(), c(6.0, 0.0));
        let r = RealMatrix::from_row_slice(3, 3, &[0.0, 1.5, -2.0, -1.5, 0.0, 0.25, 2.0, -0.25, 0.0]);
        assert_eq!(trace(&complexify(&r)).unwrap(), c(0.0, 0.0));
    }
}
