//! The three subcommands. Each builds a [`RunReport`]; trials run on a rayon
//! pool and are folded back in trial order.

use std::path::{Path, PathBuf};

use gaussmod::matio;
use gaussmod::modular::{factorial_check, tomita_verify};
use gaussmod::quasiequiv::{
    am_gm_check, araki_yamagami_quantities, lipschitz_check, longo_quantities, powers_stormer_check,
    van_hemmen_ando_check, verify_corollary_modular, verify_r_estimate, verify_theorem_bounds, LipschitzFn,
    LongoQuantities,
};
use gaussmod::random::{complex_gaussian_matrix, random_delta, random_psd, random_state, trial_rng, RNG_ID};
use gaussmod::scalarfield::{
    build_spectrum, energy, thermal_closed_form, thermal_delta, thermal_exact_identities, trace_delta_by_cutoff,
    vacuum_polarisation, verify_minkowski_bounds, ENERGY_RTOL,
};
use gaussmod::{
    DenseMatrix, Error, GaussianStateForm, InequalityReport, Perturbation, PositivityClass, PreSymplecticSpace,
    RealMatrix, SchattenP,
};
use rayon::prelude::*;
use serde_json::Value;

use crate::config::{InequalityConfig, OutputConfig, PerturbConfig, ThermalConfig};
use crate::report::{number, Aggregator, RunReport};
use crate::CliError;

/// Tolerance on the Tomita residuals and the Longo decomposition residual.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Instances are echoed into the report while `trials·dim²` stays below this.
pub const ECHO_LIMIT: usize = 256;

fn new_report(output: &OutputConfig, config: std::collections::BTreeMap<String, Value>) -> RunReport {
    RunReport {
        seed: output.seed,
        rng: RNG_ID.to_string(),
        config,
        timestamp: output.timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        }),
        ..Default::default()
    }
}

fn run_trials<T: Send>(pool: &rayon::ThreadPool, trials: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    pool.install(|| (0..trials).into_par_iter().map(f).collect())
}

fn skip_all(names: &[&str], reason: &str) -> Vec<InequalityReport> {
    names.iter().map(|n| InequalityReport::skipped(*n, reason)).collect()
}

pub fn thermal(cfg: &ThermalConfig) -> Result<RunReport, CliError> {
    let spec = build_spectrum(cfg.geometry.clone(), cfg.mass, cfg.cutoff).map_err(|e| match e {
        Error::TooLarge { .. } | Error::NonPositiveMass(_) | Error::InvalidArgument(_) => CliError::Config(e.to_string()),
        other => CliError::Compute(other),
    })?;
    let mut report = new_report(&cfg.output, cfg.echo());
    let closed = thermal_closed_form(&spec, cfg.beta)?;
    let delta = thermal_delta(&spec, cfg.beta)?;

    report.results.extend(thermal_exact_identities(&spec, cfg.beta)?);

    const MINKOWSKI: [&str; 3] = ["minkowski.coth_half", "minkowski.sech_half", "minkowski.csch_half"];
    if delta.min_eigenvalue() > 0.0 {
        report.results.extend(verify_minkowski_bounds(&spec, &delta)?);
    } else {
        report.results.extend(skip_all(&MINKOWSKI, "delta is not strictly positive"));
    }

    let (e, lower) = energy(&spec, &delta)?;
    report.results.push(InequalityReport::equal("energy.closed_form", e, closed.energy, ENERGY_RTOL));
    report.results.push(lower);

    if closed.min_delta > 0.0 {
        let thermal = vacuum_polarisation(&spec).perturb(&delta)?;
        let t = tomita_verify(&thermal, cfg.tomita_trials, cfg.output.seed, 0.0)?;
        report.results.push(InequalityReport::at_most("tomita.residual", t.max_residual, RESIDUAL_TOL));
        report
            .results
            .push(InequalityReport::at_most("tomita.conjugation", t.conjugation_residual, RESIDUAL_TOL));
    } else {
        report.results.extend(skip_all(
            &["tomita.residual", "tomita.conjugation"],
            "a Bose factor underflows to zero",
        ));
    }

    report.scalar_value("dim", Value::from(spec.dim()));
    report.scalar_value("modes", Value::from(spec.modes().len()));
    report.scalar("energy", e);
    report.scalar("energy.closed_form", closed.energy);
    report.scalar("trace_delta", closed.trace_delta);
    report.scalar("trace_delta.dense", delta.trace());
    report.scalar("min_delta", closed.min_delta);
    report.scalar("sqrt_gap.ratio_to_twice_trace", closed.sqrt_gap_hs_sq / (2.0 * closed.trace_delta));
    let k = &closed.k_spectrum;
    report.scalar_value("k_spectrum.count", Value::from(k.len()));
    report.scalar("k_spectrum.min", k.first().copied().unwrap_or(f64::NAN));
    report.scalar("k_spectrum.max", k.last().copied().unwrap_or(f64::NAN));
    let positive: Vec<f64> = k.iter().copied().filter(|&x| x > 0.0).collect();
    report.scalar("k_spectrum.min_positive", positive.first().copied().unwrap_or(f64::NAN));

    let mut cutoffs = vec![cfg.cutoff / 4, cfg.cutoff / 2, cfg.cutoff];
    cutoffs.dedup();
    let tail = trace_delta_by_cutoff(&cfg.geometry, cfg.mass, cfg.beta, &cutoffs)?;
    for (n, tr) in &tail {
        report.scalar(format!("trace_delta.cutoff_{n}"), *tr);
    }
    if let [.., (_, half), (_, full)] = tail[..] {
        report.scalar("trace_delta.tail", full - half);
    }
    Ok(report)
}

/// σ, μ and δ read from files; `None` entries are drawn per trial.
#[derive(Debug, Clone, Default)]
struct FixedInstance {
    state: Option<GaussianStateForm>,
    delta: Option<Perturbation>,
}

fn load_real(path: &Path) -> Result<RealMatrix, CliError> {
    matio::read_real_matrix(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn perturbation_from(matrix: RealMatrix) -> gaussmod::Result<Perturbation> {
    match Perturbation::psd(matrix.clone()) {
        Err(Error::NotPsd { .. }) => Perturbation::new(matrix, PositivityClass::InvertiblePlusOne),
        other => other,
    }
}

fn load_fixed(cfg: &mut PerturbConfig) -> Result<FixedInstance, CliError> {
    let config_err = |e: Error| CliError::Config(e.to_string());
    let mut fixed = FixedInstance::default();
    match (&cfg.sigma, &cfg.mu) {
        (Some(s), mu) => {
            let space = PreSymplecticSpace::new(load_real(s)?).map_err(config_err)?;
            let mu = match mu {
                Some(p) => load_real(p)?,
                None => RealMatrix::identity(space.dim(), space.dim()),
            };
            let state = GaussianStateForm::new(space, mu).map_err(config_err)?;
            state.polarisation().map_err(config_err)?;
            cfg.dim = state.dim();
            fixed.state = Some(state);
        }
        (None, Some(_)) => return Err(CliError::Config("--mu needs --sigma".into())),
        (None, None) => {}
    }
    if let Some(path) = &cfg.delta {
        let delta = perturbation_from(load_real(path)?).map_err(config_err)?;
        if fixed.state.is_some() && delta.dim() != cfg.dim {
            return Err(CliError::Config(format!(
                "delta has dimension {}, the state has {}",
                delta.dim(),
                cfg.dim
            )));
        }
        cfg.dim = delta.dim();
        fixed.delta = Some(delta);
    }
    Ok(fixed)
}

fn matrix_json(m: &RealMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| number(m[(i, j)])).collect()))
            .collect(),
    )
}

struct PerturbTrial {
    reports: Vec<InequalityReport>,
    longo: Option<LongoQuantities>,
    norm_equivalence: (f64, f64),
    instance: Option<Value>,
}

const MODULAR_NAMES: [&str; 4] = [
    "modular.sqrt_gap.hs_sq",
    "modular.inverse.trace_norm",
    "modular.inverse_sqrt_gap.hs_sq",
    "modular.tanh_half.trace_norm",
];

fn dump_instance(dir: &Path, trial: usize, state: &GaussianStateForm, delta: &Perturbation) -> gaussmod::Result<()> {
    let file = |what: &str| -> PathBuf { dir.join(format!("trial_{trial:06}_{what}.txt")) };
    matio::write_real_matrix(file("sigma"), state.sigma())?;
    matio::write_real_matrix(file("mu"), state.mu())?;
    matio::write_real_matrix(file("delta"), delta.matrix())
}

fn perturb_trial(cfg: &PerturbConfig, fixed: &FixedInstance, trial: usize, echo: bool) -> gaussmod::Result<PerturbTrial> {
    let mut rng = trial_rng(cfg.output.seed, trial as u64);
    let state = match &fixed.state {
        Some(s) => s.clone(),
        None => random_state(&mut rng, cfg.dim)?,
    };
    let delta = match &fixed.delta {
        Some(d) => d.clone(),
        None => Perturbation::psd(random_delta(&mut rng, cfg.dim, cfg.scale))?,
    };
    if let Some(dir) = &cfg.dump_dir {
        dump_instance(dir, trial, &state, &delta)?;
    }
    let base = state.polarisation()?;
    let perturbed = base.perturb(&delta)?;

    let mut reports = Vec::new();
    for p in SchattenP::ALL {
        reports.push(verify_r_estimate(&base, &delta, p)?);
    }
    let psd = delta.class() == PositivityClass::Psd;
    if psd {
        reports.extend(verify_theorem_bounds(&base, &delta)?);
        match verify_corollary_modular(&base, &delta, cfg.standard_eps) {
            Ok(r) => reports.extend(r),
            Err(Error::NotStandard { .. }) => reports.extend(skip_all(&MODULAR_NAMES, "perturbed state not standard")),
            Err(e) => return Err(e),
        }
    } else {
        reports.extend(skip_all(
            &["sqrt_gap.hs_sq", "inverse.trace_norm", "inverse_sqrt_gap.hs_sq"],
            "delta is not positive semi-definite",
        ));
        reports.extend(skip_all(&MODULAR_NAMES, "delta is not positive semi-definite"));
    }
    let ay = araki_yamagami_quantities(&base.sigma(), &delta)?;
    reports.push(if psd {
        ay.ps_bound
    } else {
        InequalityReport::skipped("araki_yamagami.hs_sq_le_trace", "delta is not positive semi-definite")
    });

    let factorial = factorial_check(&base, cfg.factorial_eps).passed && factorial_check(&perturbed, cfg.factorial_eps).passed;
    let longo = if factorial {
        let q = longo_quantities(&base, &perturbed, cfg.factorial_eps)?;
        reports.push(InequalityReport::at_most(
            "longo.decomposition_residual",
            q.decomposition_residual,
            RESIDUAL_TOL,
        ));
        Some(q)
    } else {
        reports.push(InequalityReport::skipped("longo.decomposition_residual", "R not invertible"));
        None
    };

    let instance = echo.then(|| {
        serde_json::json!({
            "trial": trial,
            "sigma": matrix_json(state.sigma()),
            "mu": matrix_json(state.mu()),
            "delta": matrix_json(delta.matrix()),
        })
    });
    Ok(PerturbTrial {
        reports,
        longo,
        norm_equivalence: ay.norm_equivalence,
        instance,
    })
}

fn width(trials: usize) -> usize {
    (trials.max(2) - 1).to_string().len()
}

pub fn perturb(cfg: &PerturbConfig, pool: &rayon::ThreadPool) -> Result<RunReport, CliError> {
    let mut cfg = cfg.clone();
    let fixed = load_fixed(&mut cfg)?;
    if let Some(dir) = &cfg.dump_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut report = new_report(&cfg.output, cfg.echo());
    let echo = cfg.trials * cfg.dim * cfg.dim <= ECHO_LIMIT;
    let outcomes = run_trials(pool, cfg.trials, |t| perturb_trial(&cfg, &fixed, t, echo));

    let w = width(cfg.trials);
    let mut agg = Aggregator::default();
    let mut upper = f64::NEG_INFINITY;
    let mut lower = f64::NEG_INFINITY;
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(trial) => {
                for r in &trial.reports {
                    agg.add(t, r);
                }
                if let Some(q) = trial.longo {
                    report.scalar(format!("longo.{t:0w$}.inverse"), q.inverse);
                    report.scalar(format!("longo.{t:0w$}.inverse_sqrt"), q.inverse_sqrt);
                    report.scalar(format!("longo.{t:0w$}.sqrt"), q.sqrt);
                }
                upper = upper.max(trial.norm_equivalence.0);
                lower = lower.max(trial.norm_equivalence.1);
                report.instances.extend(trial.instance);
            }
            Err(e) => report.errors.push(format!("trial {t}: {e}")),
        }
    }
    agg.finish(&mut report);
    report.scalar("araki_yamagami.max_norm_one_plus_delta", upper);
    report.scalar("araki_yamagami.max_norm_inverse_one_plus_delta", lower);
    report.scalar_value("dim", Value::from(cfg.dim));
    Ok(report)
}

fn inequality_trial(cfg: &InequalityConfig, trial: usize) -> gaussmod::Result<Vec<InequalityReport>> {
    let n = cfg.dim;
    let mut rng = trial_rng(cfg.output.seed, trial as u64);
    let a = random_psd(&mut rng, n);
    let b = random_psd(&mut rng, n);
    let x = complex_gaussian_matrix(&mut rng, n, n);
    let mut out = vec![powers_stormer_check(&a, &b)?];
    for p in SchattenP::ALL {
        out.push(van_hemmen_ando_check(&a, &b, p)?);
    }
    for p in SchattenP::ALL {
        out.push(am_gm_check(&a, &b, &x, p)?);
    }
    let base = random_state(&mut rng, n)?.polarisation()?;
    let delta = Perturbation::psd(random_delta(&mut rng, n, cfg.scale))?;
    for f in &LipschitzFn::ALL {
        out.push(lipschitz_check(f, &base, &delta)?);
    }
    Ok(out)
}

/// The scalar cases where van Hemmen–Ando and AM–GM are equalities.
fn equality_witnesses() -> gaussmod::Result<Vec<InequalityReport>> {
    let scalar = |x: f64| DenseMatrix::from_element(1, 1, x.into());
    let mut out = Vec::new();
    for p in SchattenP::ALL {
        let r = van_hemmen_ando_check(&scalar(4.0), &scalar(1.0), p)?;
        let name = format!("{}.witness", r.name);
        out.push(r.renamed(name));
    }
    for p in SchattenP::ALL {
        let r = am_gm_check(&scalar(1.0), &scalar(1.0), &scalar(1.0), p)?;
        let name = format!("{}.witness", r.name);
        out.push(r.renamed(name));
    }
    Ok(out)
}

pub fn inequalities(cfg: &InequalityConfig, pool: &rayon::ThreadPool) -> Result<RunReport, CliError> {
    let mut report = new_report(&cfg.output, cfg.echo());
    let outcomes = run_trials(pool, cfg.trials, |t| inequality_trial(cfg, t));
    let mut agg = Aggregator::default();
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(reports) => reports.iter().for_each(|r| agg.add(t, r)),
            Err(e) => report.errors.push(format!("trial {t}: {e}")),
        }
    }
    agg.finish(&mut report);
    for w in equality_witnesses()? {
        report.scalar(format!("{}.margin", w.name), w.margin);
        report.results.push(w);
    }
    Ok(report)
}
