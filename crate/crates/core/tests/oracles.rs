//! Library results against values worked out by hand or summed here over
//! the full momentum lattice, independently of `ModeSpectrum`.

use std::f64::consts::{PI, TAU};

use gaussmod::matops::{complexify, inverse_real, max_abs_real, schatten_norm, sqrt_psd_real};
use gaussmod::modular::{tomita_verify, ModularData};
use gaussmod::quasiequiv::{longo_quantities, verify_r_estimate};
use gaussmod::random::{gaussian_matrix, random_state, trial_rng};
use gaussmod::scalarfield::{
    build_spectrum, energy, field_delta, thermal_closed_form, thermal_delta, thermal_exact_identities,
    vacuum_polarisation, verify_minkowski_bounds, FieldStateSpec, Geometry, ModeSpectrum,
};
use gaussmod::{CanonicalPolarisation, Perturbation, PositivityClass, RealMatrix, SchattenP};

/// `Σ f(ω_k)` over every lattice momentum `k ∈ [−N, N]^d`.
fn lattice_sum(lengths: &[f64], m: f64, cutoff: i64, f: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    let mut k = vec![-cutoff; lengths.len()];
    loop {
        let p2: f64 = k.iter().zip(lengths).map(|(&n, l)| (TAU * n as f64 / l).powi(2)).sum();
        total += f((p2 + m * m).sqrt());
        let mut axis = 0;
        loop {
            if axis == k.len() {
                return total;
            }
            k[axis] += 1;
            if k[axis] <= cutoff {
                break;
            }
            k[axis] = -cutoff;
            axis += 1;
        }
    }
}

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn csch(x: f64) -> f64 {
    1.0 / x.sinh()
}

/// The three thermal HS / trace quantities computed straight from the
/// dense polarisations.
fn dense_thermal(spec: &ModeSpectrum, beta: f64) -> (f64, f64, f64) {
    let vac = vacuum_polarisation(spec);
    let thermal = vac.perturb(&thermal_delta(spec, beta).unwrap()).unwrap();
    let inv_t = inverse_real(thermal.r()).unwrap();
    let inv_v = inverse_real(vac.r()).unwrap();
    let trace = schatten_norm(&complexify(&(inv_t - &inv_v)), SchattenP::One).unwrap();
    let s = sqrt_psd_real(thermal.gap()).unwrap();
    let inv_t = inverse_real(thermal.r()).unwrap();
    (trace, s.norm_squared(), (inv_t * &s).norm_squared())
}

#[test]
fn circle_thermal_matches_lattice_sums() {
    let (l, m) = (TAU, 1.0);
    for beta in [0.5, 1.0, 2.0] {
        for n in [4usize, 16, 32] {
            let spec = build_spectrum(Geometry::Circle { length: l }, m, n).unwrap();
            let (trace, sqrt_gap, inv_sqrt_gap) = dense_thermal(&spec, beta);
            let h = |w: f64| 0.5 * beta * w;
            // each real Fourier function carries two Cauchy coordinates
            let want_trace = lattice_sum(&[l], m, n as i64, |w| 2.0 * (coth(h(w)) - 1.0));
            let want_sqrt = lattice_sum(&[l], m, n as i64, |w| 2.0 * sech(h(w)).powi(2));
            let want_inv = lattice_sum(&[l], m, n as i64, |w| 2.0 * csch(h(w)).powi(2));
            assert!(close(trace, want_trace, 1e-10), "beta={beta} N={n}: {trace} vs {want_trace}");
            assert!(close(sqrt_gap, want_sqrt, 1e-10), "beta={beta} N={n}: {sqrt_gap} vs {want_sqrt}");
            assert!(close(inv_sqrt_gap, want_inv, 1e-10), "beta={beta} N={n}: {inv_sqrt_gap} vs {want_inv}");
            assert!(sqrt_gap < 2.0 * trace);

            let closed = thermal_closed_form(&spec, beta).unwrap();
            let want_energy = lattice_sum(&[l], m, n as i64, |w| w / (beta * w).exp_m1());
            assert!(close(closed.energy, want_energy, 1e-12));
            let (e, lower) = energy(&spec, &thermal_delta(&spec, beta).unwrap()).unwrap();
            assert!(close(e, want_energy, 1e-12), "{e} vs {want_energy}");
            assert!(lower.holds);

            for r in thermal_exact_identities(&spec, beta).unwrap() {
                assert!(r.holds, "{r:?}");
            }
        }
    }
}

#[test]
fn torus_thermal_matches_lattice_sums() {
    let lengths = [TAU, 3.0];
    let spec = build_spectrum(Geometry::Torus { lengths: lengths.to_vec() }, 0.7, 3).unwrap();
    assert_eq!(spec.functions(), 7usize.pow(2));
    let beta = 1.3;
    let (trace, sqrt_gap, inv_sqrt_gap) = dense_thermal(&spec, beta);
    let h = |w: f64| 0.5 * beta * w;
    assert!(close(trace, lattice_sum(&lengths, 0.7, 3, |w| 2.0 * (coth(h(w)) - 1.0)), 1e-10));
    assert!(close(sqrt_gap, lattice_sum(&lengths, 0.7, 3, |w| 2.0 * sech(h(w)).powi(2)), 1e-10));
    assert!(close(inv_sqrt_gap, lattice_sum(&lengths, 0.7, 3, |w| 2.0 * csch(h(w)).powi(2)), 1e-10));
    for r in thermal_exact_identities(&spec, beta).unwrap() {
        assert!(r.holds, "{r:?}");
    }
}

#[test]
fn single_mode_by_hand() {
    // βω = ln 3: coth(βω/2) = 2, so δ = 1 on both coordinates and
    // R_β = R_vac / 2, K = ±ln 3.
    let spec = ModeSpectrum::from_modes(1.0, &[(1.0, 1)]).unwrap();
    let beta = 3f64.ln();
    let delta = thermal_delta(&spec, beta).unwrap();
    assert!(max_abs_real(&(delta.matrix() - RealMatrix::identity(2, 2))) < 1e-15);
    let vac = vacuum_polarisation(&spec);
    let thermal = vac.perturb(&delta).unwrap();
    assert!(max_abs_real(&(thermal.r() - vac.r() * 0.5)) < 1e-15);
    let data = ModularData::new(&thermal, 0.0).unwrap();
    let mut k = data.k_eigenvalues().to_vec();
    k.sort_by(f64::total_cmp);
    assert!((k[0] + 1.0986122886681098).abs() < 1e-12 && (k[1] - 1.0986122886681098).abs() < 1e-12);
    let d = data.delta_eigenvalues();
    let mut d = d.to_vec();
    d.sort_by(f64::total_cmp);
    assert!((d[0] - 1.0 / 3.0).abs() < 1e-14 && (d[1] - 3.0).abs() < 1e-14);

    // E = m/2; the bounds read 2 ≤ 4, 3/2 ≤ 4, 6 ≤ 40
    let reports = verify_minkowski_bounds(&spec, &delta).unwrap();
    let want = [(2.0, 4.0), (1.5, 4.0), (6.0, 40.0)];
    for (r, (lhs, rhs)) in reports.iter().zip(want) {
        assert!((r.lhs - lhs).abs() < 1e-10 && (r.rhs - rhs).abs() < 1e-10, "{r:?}");
        assert!(r.holds);
    }
}

#[test]
fn zero_momentum_delta_saturates_energy_bound() {
    let spec = build_spectrum(Geometry::Circle { length: 5.0 }, 1.7, 6).unwrap();
    let zero = spec.zero_momentum_coordinates();
    assert_eq!(zero.iter().filter(|&&z| z).count(), 2);
    let n = spec.dim();
    let mut d = RealMatrix::zeros(n, n);
    let idx: Vec<usize> = (0..n).filter(|&i| zero[i]).collect();
    d[(idx[0], idx[0])] = 0.8;
    d[(idx[1], idx[1])] = 0.3;
    d[(idx[0], idx[1])] = 0.2;
    d[(idx[1], idx[0])] = 0.2;
    let delta = field_delta(&spec, &FieldStateSpec::Dense(d)).unwrap();
    let (e, lower) = energy(&spec, &delta).unwrap();
    assert!(close(e, 1.7 / 4.0 * 1.1, 1e-12), "{e}");
    assert!((lower.lhs - lower.rhs).abs() <= 1e-12 * e);
    assert!(lower.holds);

    // any weight on a moving mode makes the bound strict
    let mut blocks = vec![[[0.0; 2]; 2]; spec.functions()];
    blocks[1] = [[0.5, 0.0], [0.0, 0.5]];
    let delta = field_delta(&spec, &FieldStateSpec::Blocks(blocks)).unwrap();
    let (e, lower) = energy(&spec, &delta).unwrap();
    assert!(lower.margin > 1e-3 * e);
}

#[test]
fn random_strictly_positive_fields_obey_energy_bounds() {
    for trial in 0..60u64 {
        let mut rng = trial_rng(11, trial);
        let cutoff = (trial % 5) as usize;
        let spec = build_spectrum(Geometry::Circle { length: 3.0 + trial as f64 * 0.1 }, 0.5 + 0.05 * trial as f64, cutoff).unwrap();
        let n = spec.dim();
        let g = gaussian_matrix(&mut rng, n, n);
        let d = &g * g.transpose() * (0.2 / n as f64) + RealMatrix::identity(n, n) * 1e-3;
        let delta = field_delta(&spec, &FieldStateSpec::Dense(d)).unwrap();
        for r in verify_minkowski_bounds(&spec, &delta).unwrap() {
            assert!(r.holds, "trial {trial}: {r:?}");
        }
        let (_, lower) = energy(&spec, &delta).unwrap();
        assert!(lower.holds);
    }
}

#[test]
fn commuting_blocks_longo_by_hand() {
    // R = r·J with J² = −1: R⁻¹ = −J/r and √(1+R²) = √(1−r²)
    let j = RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    let (a, b) = (0.6, 0.3);
    let r1 = CanonicalPolarisation::new(&j * a).unwrap();
    let r2 = CanonicalPolarisation::new(&j * b).unwrap();
    let q = longo_quantities(&r1, &r2, 1e-10).unwrap();
    let s = 2f64.sqrt();
    assert!(close(q.inverse, s * (1.0 / a - 1.0 / b).abs(), 1e-13));
    assert!(close(q.sqrt, s * ((1.0 - a * a).sqrt() - (1.0 - b * b).sqrt()).abs(), 1e-13));
    let f = |r: f64| (1.0 - r * r).sqrt() / r;
    assert!(close(q.inverse_sqrt, s * (f(a) - f(b)).abs(), 1e-13));
    assert!(q.decomposition_residual < 1e-14);
}

#[test]
fn r_estimate_for_indefinite_perturbations() {
    for trial in 0..40u64 {
        let mut rng = trial_rng(5, trial);
        let n = 2 + (trial % 7) as usize;
        let base = random_state(&mut rng, n).unwrap().polarisation().unwrap();
        let g = gaussian_matrix(&mut rng, n, n);
        let sym = (&g + g.transpose()) * 0.5;
        let norm = schatten_norm(&complexify(&sym), SchattenP::Inf).unwrap();
        // keep 1 + δ + Σ₀ ≥ 0 with ‖Σ₀‖ = 0.9
        let delta = Perturbation::new(sym * (0.08 / norm), PositivityClass::InvertiblePlusOne).unwrap();
        for p in SchattenP::ALL {
            let r = verify_r_estimate(&base, &delta, p).unwrap();
            assert!(r.holds, "trial {trial}: {r:?}");
        }
    }
}

#[test]
fn tomita_on_torus_thermal_state() {
    let spec = build_spectrum(Geometry::Torus { lengths: vec![PI, 2.0] }, 1.0, 2).unwrap();
    let thermal = vacuum_polarisation(&spec).perturb(&thermal_delta(&spec, 2.5).unwrap()).unwrap();
    let t = tomita_verify(&thermal, 20, 3, 0.0).unwrap();
    assert!(t.max_residual < 1e-9 && t.conjugation_residual < 1e-9, "{t:?}");
}
