//! Subcommand implementations. Each writes its artifacts and a manifest into
//! the output directory and reports whether its checks passed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use beurling_core::analysis_kernels::{
    cassels_min_margin, default_estimate_grid, gaussian_line_integral, gaussian_line_quadrature,
    random_power_sum_instances, verify_estimate_bounds, EstimateCheck,
};
use beurling_core::density::{PrimeDensity, TargetDensity, ZeroSpec};
use beurling_core::oscillation::{
    interference_v_floor, interference_zeros, non_increasing_after_first, residue_error_envelope, residue_side,
    rvm_residual, rvm_window_maxima, s_pair, verify_interference, verify_lower_oscillation, InterferenceReport,
    RangePolicy,
};
use beurling_core::prime_sampler::{max_count_discrepancy, sample_primes, PrimeSystem};
use beurling_core::semigroup::{
    axiom_a_fit, enumerate_norms, geometric_grid, tables_from_index, ChebyshevIndex, EnumerationLimits, EnumerationMode,
};
use beurling_core::sine_polynomial::{search_low_norm, SearchOutcome, SinePolynomial};
use beurling_core::zeta::{log_deriv, log_zeta, ZetaContext};
use num_complex::Complex64;

use crate::artifacts::{fmt_f64, Csv, Manifest, OutputDir};
use crate::config::{ExperimentConfig, SineConfig};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Build,
    Tables,
    Zeta,
    RvmCheck,
    SineSearch,
    Oscillation,
    Interference,
    Lemmas,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Build => "build",
            Self::Tables => "tables",
            Self::Zeta => "zeta",
            Self::RvmCheck => "rvm-check",
            Self::SineSearch => "sine-search",
            Self::Oscillation => "oscillation",
            Self::Interference => "interference",
            Self::Lemmas => "lemmas",
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub passed: bool,
    pub summary: String,
    pub outputs: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

pub const PRIMES_FILE: &str = "primes.bin";

/// Runs `cmd` with outputs under `out`.
pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    let dir = OutputDir::acquire(out)?;
    let mut manifest = Manifest::new(cmd.name(), &cfg.to_text());
    manifest.add("seed", cfg.seed);
    manifest.add("sampler", cfg.sampler);
    let mut outcome = match cmd {
        Command::Build => build(cfg, &dir, &mut manifest),
        Command::Tables => tables(cfg, &dir, &mut manifest),
        Command::Zeta => zeta(cfg, &dir, &mut manifest),
        Command::RvmCheck => rvm_check(cfg, &dir, &mut manifest),
        Command::SineSearch => sine_search(cfg, &dir, &mut manifest),
        Command::Oscillation => oscillation(cfg, &dir, &mut manifest),
        Command::Interference => interference(cfg, &dir, &mut manifest),
        Command::Lemmas => lemmas(cfg, &dir, &mut manifest),
    };
    // Partial results (e.g. an exhausted enumeration) are still recorded.
    let partial = match &mut outcome {
        Ok(o) => o.outputs.clone(),
        Err(Failure { outputs, .. }) => outputs.clone(),
    };
    for p in &partial {
        manifest.add_output(p)?;
    }
    manifest.add("passed", outcome.as_ref().map(|o| o.passed).unwrap_or(false));
    let manifest_path = manifest.write(&dir)?;
    match outcome {
        Ok(mut o) => {
            o.outputs.push(manifest_path);
            Ok(o)
        }
        Err(f) => Err(f.error),
    }
}

/// An error together with any outputs written before it occurred.
struct Failure {
    error: CliError,
    outputs: Vec<PathBuf>,
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Self { error: e.into(), outputs: Vec::new() }
    }
}

type Step = Result<RunOutcome, Failure>;

fn density_fingerprint(d: &TargetDensity) -> String {
    hex::encode(d.fingerprint())
}

/// Loads `primes.bin` and checks it was built from the configured density.
fn load_system(cfg: &ExperimentConfig, dir: &OutputDir, d: &TargetDensity) -> Result<PrimeSystem, CliError> {
    let path = dir.require(PRIMES_FILE, "build")?;
    let ps = PrimeSystem::load(&path)?;
    if ps.density_fingerprint != d.fingerprint() {
        return Err(CliError::Config(vec![format!(
            "{}: built from a different density (fingerprint {}); rerun `beurling build` with this config",
            path.display(),
            ps.fingerprint_hex()
        )]));
    }
    if ps.seed != cfg.seed || ps.method != cfg.sampler {
        return Err(CliError::Config(vec![format!(
            "{}: built with sampler {} seed {}, config asks for {} seed {}; rerun `beurling build`",
            path.display(),
            ps.method,
            ps.seed,
            cfg.sampler,
            cfg.seed
        )]));
    }
    Ok(ps)
}

fn build(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let d = cfg.density()?;
    manifest.add("density_fingerprint", density_fingerprint(&d));
    manifest.add("M", d.m());
    let ps = sample_primes(&d, cfg.sampler, cfg.seed, cfg.x_max)?;
    let path = dir.path(PRIMES_FILE);
    ps.save(&path)?;
    let discrepancy = max_count_discrepancy(&ps, &d, cfg.x_max)?;
    manifest.add("prime_count", ps.len());
    manifest.add("max_count_discrepancy", fmt_f64(discrepancy));
    let mut side = path.clone().into_os_string();
    side.push(".txt");
    Ok(RunOutcome {
        passed: discrepancy <= 2.0,
        summary: format!(
            "{} primes up to {:e} (M = {}); max |π_P − F| over jumps = {:.6}",
            ps.len(),
            cfg.x_max,
            d.m(),
            discrepancy
        ),
        outputs: vec![path, PathBuf::from(side)],
    })
}

fn tables(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let d = cfg.density()?;
    manifest.add("density_fingerprint", density_fingerprint(&d));
    let ps = load_system(cfg, dir, &d)?;
    let grid = geometric_grid(1.0, ps.x_max, cfg.grid_ratio)?;
    let index = ChebyshevIndex::new(&ps, ps.x_max)?;
    let t = tables_from_index(&index, &grid)?;
    let limits = EnumerationLimits { max_norms: Some(cfg.max_norms), ..EnumerationLimits::default() };
    let en = enumerate_norms(&ps, cfg.x_cut, EnumerationMode::Stream, &grid, limits)?;
    let reached = en.counts.grid.len();

    let mut csv = Csv::new(&["x", "N", "psi", "theta", "pi", "Pi", "delta"]);
    for (i, &x) in grid.iter().enumerate() {
        let n = if i < reached { en.counts.n_values[i].to_string() } else { String::new() };
        csv.row(&[
            fmt_f64(x),
            n,
            fmt_f64(t.psi[i]),
            fmt_f64(t.theta[i]),
            t.pi[i].to_string(),
            fmt_f64(t.big_pi[i]),
            fmt_f64(t.delta[i]),
        ]);
    }
    let tables_path = dir.write("tables.csv", &csv.finish())?;

    let mut fit_text = String::new();
    let _ = writeln!(fit_text, "x_cut = {}", fmt_f64(cfg.x_cut));
    let _ = writeln!(fit_text, "norms_emitted = {}", en.emitted);
    match en.exhausted_at {
        Some(x) => {
            let _ = writeln!(fit_text, "exhausted_at = {}", fmt_f64(x));
        }
        None => {
            let _ = writeln!(fit_text, "exhausted_at = none");
        }
    }
    let fit = axiom_a_fit(&en.counts);
    match &fit {
        Ok(f) => {
            let _ = writeln!(fit_text, "kappa_hat = {}", fmt_f64(f.kappa_hat));
            let _ = writeln!(fit_text, "theta_hat = {}", fmt_f64(f.theta_hat));
            let _ = writeln!(fit_text, "A_hat = {}", fmt_f64(f.a_hat));
            let _ = writeln!(fit_text, "degenerate = {}", f.degenerate);
        }
        Err(e) => {
            let _ = writeln!(fit_text, "fit = unavailable ({e})");
        }
    }
    let fit_path = dir.write("axiom_a_fit.txt", &fit_text)?;
    let outputs = vec![tables_path, fit_path];
    if let Some(x) = en.exhausted_at {
        return Err(Failure {
            error: CliError::Resource(format!(
                "norm budget of {} exhausted at x = {x:.6e} before X_cut = {:e}; N(x) and the fit cover only x < {x:.6e}",
                cfg.max_norms, cfg.x_cut
            )),
            outputs,
        });
    }
    let summary = match fit {
        Ok(f) => format!(
            "{} grid points; {} norms ≤ {:e}; κ̂ = {:.6}, θ̂ = {:.4}, Â = {:.4}",
            grid.len(),
            en.emitted,
            cfg.x_cut,
            f.kappa_hat,
            f.theta_hat,
            f.a_hat
        ),
        Err(e) => format!("{} grid points; {} norms ≤ {:e}; fit unavailable: {e}", grid.len(), en.emitted, cfg.x_cut),
    };
    Ok(RunOutcome { passed: true, summary, outputs })
}

fn zeta(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let d = cfg.density()?;
    manifest.add("density_fingerprint", density_fingerprint(&d));
    let ps = load_system(cfg, dir, &d)?;
    let ctx = ZetaContext::new(&ps, &d, cfg.x_cut)?;
    let t_max = 2.0 * d.zeros().max_gamma().max(1.0) + 10.0;
    let steps = (t_max / 0.25).round() as usize;
    let mut csv = Csv::new(&[
        "sigma",
        "t",
        "log_zeta_re",
        "log_zeta_im",
        "log_zeta_tail",
        "log_deriv_re",
        "log_deriv_im",
        "log_deriv_tail",
    ]);
    for sigma in [1.1, 1.25, 1.5, 2.0, 3.0] {
        for k in 0..=steps {
            let t = 0.25 * k as f64;
            let s = Complex64::new(sigma, t);
            let lz = log_zeta(&ctx, s)?;
            let ld = log_deriv(&ctx, s)?;
            csv.row(&[
                fmt_f64(sigma),
                fmt_f64(t),
                fmt_f64(lz.value.re),
                fmt_f64(lz.value.im),
                fmt_f64(lz.tail_bound),
                fmt_f64(ld.value.re),
                fmt_f64(ld.value.im),
                fmt_f64(ld.tail_bound),
            ]);
        }
    }
    let path = dir.write("zeta_sweep.csv", &csv.finish())?;
    Ok(RunOutcome {
        passed: true,
        summary: format!("log ζ and ζ'/ζ on 5 vertical lines, t ∈ [0, {t_max}], X_cut = {:e}", cfg.x_cut),
        outputs: vec![path],
    })
}

fn decade_edges(lo: f64, hi: f64) -> Vec<f64> {
    let mut edges = vec![lo];
    let mut e = lo * 10.0;
    while e < hi * (1.0 - 1e-12) {
        edges.push(e);
        e *= 10.0;
    }
    edges.push(hi);
    edges
}

fn rvm_check(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let d = cfg.density()?;
    manifest.add("density_fingerprint", density_fingerprint(&d));
    let ps = load_system(cfg, dir, &d)?;
    if ps.x_max <= 1e2 {
        return Err(CliError::Config(vec![format!("x_max: rvm-check needs x_max > 100, got {}", ps.x_max)]).into());
    }
    let index = ChebyshevIndex::new(&ps, ps.x_max)?;
    let grid = geometric_grid(1e2, ps.x_max, cfg.grid_ratio)?;
    let r = rvm_residual(&index, &d, &grid)?;
    let mut csv = Csv::new(&["x", "delta", "residual", "residual_pole_corrected"]);
    for p in &r.points {
        csv.row(&[fmt_f64(p.x), fmt_f64(p.delta), fmt_f64(p.residual), fmt_f64(p.residual_pole_corrected)]);
    }
    let grid_path = dir.write("rvm_residual.csv", &csv.finish())?;

    let windows = rvm_window_maxima(&index, &d, &decade_edges(1e2, ps.x_max))?;
    let mut csv = Csv::new(&["x_lo", "x_hi", "max_over_sqrt", "max_over_sqrt_pole_corrected"]);
    for w in &windows {
        csv.row(&[fmt_f64(w.lo), fmt_f64(w.hi), fmt_f64(w.literal), fmt_f64(w.pole_corrected)]);
    }
    let window_path = dir.write("rvm_windows.csv", &csv.finish())?;
    let literal: Vec<f64> = windows.iter().map(|w| w.literal).collect();
    let corrected: Vec<f64> = windows.iter().map(|w| w.pole_corrected).collect();
    let passed = literal.iter().all(|v| v.is_finite()) && non_increasing_after_first(&literal);
    let fmt_list = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    Ok(RunOutcome {
        passed,
        summary: format!(
            "window maxima of |Δ + Σx^ρ/ρ|/√x: [{}]; with x^r/r removed: [{}] (non-increasing after first: {} / {})",
            fmt_list(&literal),
            fmt_list(&corrected),
            non_increasing_after_first(&literal),
            non_increasing_after_first(&corrected)
        ),
        outputs: vec![grid_path, window_path],
    })
}

fn run_search(s: &SineConfig) -> Result<SearchOutcome, CliError> {
    Ok(search_low_norm(s.epsilon, s.strategy, s.seed, s.budget)?)
}

fn sine_record(outcome: &SearchOutcome, s: &SineConfig) -> String {
    let mut text = String::new();
    let (status, evaluations) = match outcome {
        SearchOutcome::Success { evaluations, .. } => ("success", *evaluations),
        SearchOutcome::Failure { evaluations, .. } => ("failure", *evaluations),
    };
    let _ = writeln!(text, "status = {status}");
    let _ = writeln!(text, "epsilon = {}", fmt_f64(s.epsilon));
    let _ = writeln!(text, "target = {}", fmt_f64(std::f64::consts::FRAC_PI_2 + s.epsilon));
    let _ = writeln!(text, "strategy = {}", s.strategy);
    let _ = writeln!(text, "seed = {}", s.seed);
    let _ = writeln!(text, "evaluations = {evaluations}");
    match outcome.polynomial() {
        Some(p) => {
            let _ = writeln!(text, "polynomial = {p}");
        }
        None => {
            let _ = writeln!(text, "polynomial = none");
        }
    }
    text
}

fn sine_search(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let s = cfg.sine.clone().unwrap_or_default();
    manifest.add("sine_seed", s.seed);
    let outcome = run_search(&s)?;
    let path = dir.write("sine.txt", &sine_record(&outcome, &s))?;
    match outcome {
        SearchOutcome::Success { poly, evaluations } => Ok(RunOutcome {
            passed: true,
            summary: format!("{poly} after {evaluations} evaluations"),
            outputs: vec![path],
        }),
        SearchOutcome::Failure { best, target, evaluations } => Err(Failure {
            error: CliError::Resource(format!(
                "no polynomial with norm ≤ {target:.6} within {evaluations} evaluations; best: {}",
                best.map_or("none".to_string(), |p| p.to_string())
            )),
            outputs: vec![path],
        }),
    }
}

/// The zero the oscillation statement is about: largest real part among
/// non-real zeros, then smallest ordinate.
fn leading_zero(d: &TargetDensity) -> Option<Complex64> {
    d.zeros()
        .zeros()
        .iter()
        .filter(|z| z.gamma > 0.0)
        .max_by(|a, b| a.beta.total_cmp(&b.beta).then(b.gamma.total_cmp(&a.gamma)))
        .map(|z| z.rho())
}

fn oscillation(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let d = cfg.density()?;
    manifest.add("density_fingerprint", density_fingerprint(&d));
    let o = cfg.oscillation.clone().unwrap_or_default();
    let rho0 = leading_zero(&d)
        .ok_or_else(|| CliError::Config(vec!["zero: oscillation needs at least one non-real zero".into()]))?;
    let ps = load_system(cfg, dir, &d)?;
    let index = ChebyshevIndex::new(&ps, ps.x_max)?;
    let rep = verify_lower_oscillation(&index, &d, rho0, o.epsilon, o.y, o.c)?;
    let theta = d.r();

    let mut csv = Csv::new(&[
        "m",
        "s_pair_re",
        "s_pair_im",
        "quad_error",
        "residue_re",
        "residue_im",
        "pole_terms_re",
        "pole_terms_im",
        "envelope",
        "agrees",
    ]);
    let mut all_agree = true;
    for &m in &o.m {
        let s = s_pair(&index, &d, rho0, m, RangePolicy::Continuum)?;
        let r = residue_side(&d, rho0, m)?;
        let envelope = residue_error_envelope(m, rho0.re, theta);
        let agrees = (s.value - r.with_poles()).norm() <= s.quad_error + envelope;
        all_agree &= agrees;
        csv.row(&[
            fmt_f64(m),
            fmt_f64(s.value.re),
            fmt_f64(s.value.im),
            fmt_f64(s.quad_error),
            fmt_f64(r.zeros_only.re),
            fmt_f64(r.zeros_only.im),
            fmt_f64(r.pole_terms.re),
            fmt_f64(r.pole_terms.im),
            fmt_f64(envelope),
            agrees.to_string(),
        ]);
    }
    let csv_path = dir.write("s_pair.csv", &csv.finish())?;

    let mut text = String::new();
    let _ = writeln!(text, "rho0 = {}+{}i", fmt_f64(rho0.re), fmt_f64(rho0.im));
    let _ = writeln!(text, "interval = [{}, {}]", fmt_f64(rep.interval.0), fmt_f64(rep.interval.1));
    let _ = writeln!(text, "truncated = {}", rep.truncated);
    let _ = writeln!(text, "K = {}", fmt_f64(rep.k));
    let _ = writeln!(text, "K_times_abs_rho0 = {}", fmt_f64(rep.k * rho0.norm()));
    let _ = writeln!(text, "bound_lower = {}", fmt_f64(rep.bound_lower));
    let _ = writeln!(text, "bound_upper = {}", fmt_f64(rep.bound_upper));
    let _ = writeln!(text, "rvm_residual_max_over_sqrt = {}", fmt_f64(rep.rvm_residual_max_over_sqrt));
    let _ = writeln!(text, "holds = {}", rep.holds);
    let _ = writeln!(text, "caveat = {}", rep.caveat);
    let report_path = dir.write("oscillation.txt", &text)?;
    Ok(RunOutcome {
        passed: rep.holds && all_agree,
        summary: format!(
            "K·|ρ₀| = {:.4} on [{:e}, {:e}] (lower bound π/2 − ε = {:.4}); S vs residue side agree for m ∈ {:?}: {}",
            rep.k * rho0.norm(),
            rep.interval.0,
            rep.interval.1,
            rep.bound_lower * rho0.norm(),
            o.m,
            all_agree
        ),
        outputs: vec![report_path, csv_path],
    })
}

fn write_interference(text: &mut String, label: &str, rep: &InterferenceReport) {
    let _ = writeln!(text, "{label}.measured_sup = {}", fmt_f64(rep.measured_sup));
    let _ = writeln!(text, "{label}.target = {}", fmt_f64(rep.target));
    let _ = writeln!(text, "{label}.holds_strict = {}", rep.holds_strict);
    let _ = writeln!(text, "{label}.rvm_allowance = {}", fmt_f64(rep.rvm_allowance));
    let _ = writeln!(text, "{label}.holds_with_allowance = {}", rep.holds_with_allowance);
    let _ = writeln!(text, "{label}.detrended_sup = {}", fmt_f64(rep.detrended_sup));
    let _ = writeln!(text, "{label}.detrended_sup_top_decade = {}", fmt_f64(rep.detrended_sup_top_decade));
}

/// Result of the interference pipeline, exposed for callers that want the
/// numbers rather than the files.
#[derive(Clone, Debug)]
pub struct InterferenceRun {
    pub sine: SinePolynomial,
    pub m: u32,
    pub prime_count: usize,
    pub report: InterferenceReport,
    pub baseline: InterferenceReport,
}

impl InterferenceRun {
    pub fn passed(&self) -> bool {
        self.report.holds_strict && self.baseline.measured_sup >= 1.9
    }
}

/// Builds the layout system for `sine` and the single-pair baseline with the
/// same `ρ₀`, then measures both over `[x_lo, x_hi]`.
pub fn interference_pipeline(cfg: &ExperimentConfig, sine: &SinePolynomial) -> Result<InterferenceRun, CliError> {
    let ic = cfg
        .interference
        .clone()
        .ok_or_else(|| CliError::Config(vec!["interference: the [interference] section is required".into()]))?;
    let floor = interference_v_floor(sine, ic.epsilon);
    if !(ic.v > floor) {
        return Err(CliError::Config(vec![format!(
            "interference.v: must exceed (4N+4)/ε = {floor} for the found polynomial of degree N = {}, got {}",
            sine.degree(),
            ic.v
        )]));
    }
    let measure = |poly: &SinePolynomial| -> Result<(TargetDensity, usize, InterferenceReport), CliError> {
        let zeros = ZeroSpec::new(interference_zeros(poly, ic.v, ic.beta0))?;
        let d = TargetDensity::new(cfg.r, zeros, None)?;
        let ps = sample_primes(&d, cfg.sampler, cfg.seed, ic.x_hi)?;
        let index = ChebyshevIndex::new(&ps, ic.x_hi)?;
        let rep = verify_interference(&index, &d, poly, ic.v, ic.beta0, ic.epsilon, (ic.x_lo, ic.x_hi))?;
        Ok((d, ps.len(), rep))
    };
    let (d, prime_count, report) = measure(sine)?;
    let single = SinePolynomial::new(vec![0])?;
    let (_, _, baseline) = measure(&single)?;
    Ok(InterferenceRun { sine: sine.clone(), m: d.m(), prime_count, report, baseline })
}

fn interference(cfg: &ExperimentConfig, dir: &OutputDir, manifest: &mut Manifest) -> Step {
    let ic = cfg
        .interference
        .clone()
        .ok_or_else(|| CliError::Config(vec!["interference: the [interference] section is required".into()]))?;
    let s = cfg.sine.clone().unwrap_or(SineConfig { epsilon: ic.epsilon, ..SineConfig::default() });
    manifest.add("sine_seed", s.seed);
    let outcome = run_search(&s)?;
    let sine_path = dir.write("interference_sine.txt", &sine_record(&outcome, &s))?;
    let sine = match outcome {
        SearchOutcome::Success { poly, .. } => poly,
        SearchOutcome::Failure { target, evaluations, .. } => {
            return Err(Failure {
                error: CliError::Resource(format!(
                    "sine search found no polynomial with norm ≤ {target:.6} in {evaluations} evaluations"
                )),
                outputs: vec![sine_path],
            })
        }
    };
    let run = interference_pipeline(cfg, &sine).map_err(|e| Failure { error: e, outputs: vec![sine_path.clone()] })?;
    let mut text = String::new();
    let _ = writeln!(text, "sine = {}", run.sine);
    let _ = writeln!(text, "v = {}", fmt_f64(ic.v));
    let _ = writeln!(text, "beta0 = {}", fmt_f64(ic.beta0));
    let _ = writeln!(text, "epsilon = {}", fmt_f64(ic.epsilon));
    let _ = writeln!(text, "x_range = [{}, {}]", fmt_f64(ic.x_lo), fmt_f64(ic.x_hi));
    let _ = writeln!(text, "M = {}", run.m);
    let _ = writeln!(text, "prime_count = {}", run.prime_count);
    write_interference(&mut text, "layout", &run.report);
    write_interference(&mut text, "baseline", &run.baseline);
    let _ = writeln!(text, "caveat = {}", run.report.caveat);
    let path = dir.write("interference.txt", &text)?;
    Ok(RunOutcome {
        passed: run.passed(),
        summary: format!(
            "layout sup |Δ|·|ρ₀|/x^β₀ = {:.4} (target {:.4}); baseline {:.4} (needs ≥ 1.9); detrended layout {:.4}, baseline {:.4}",
            run.report.measured_sup,
            run.report.target,
            run.baseline.measured_sup,
            run.report.detrended_sup,
            run.baseline.detrended_sup
        ),
        outputs: vec![sine_path, path],
    })
}

fn lemmas(cfg: &ExperimentConfig, dir: &OutputDir, _manifest: &mut Manifest) -> Step {
    let mut csv = Csv::new(&["check", "param1", "param2", "param3", "lhs", "rhs", "holds"]);
    let mut all = true;
    for a in [0.25, 1.0, 4.0] {
        for b in [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(1.0, 1.0),
        ] {
            let closed = gaussian_line_integral(a, b)?;
            let quad = gaussian_line_quadrature(a, b, 0.5)?;
            let rel = (closed - quad).norm() / closed.norm();
            let ok = rel <= 1e-8;
            all &= ok;
            csv.row(&[
                "gaussian_line".into(),
                fmt_f64(a),
                fmt_f64(b.re),
                fmt_f64(b.im),
                fmt_f64(rel),
                fmt_f64(1e-8),
                ok.to_string(),
            ]);
        }
    }
    let est = verify_estimate_bounds(&default_estimate_grid());
    for o in &est.outcomes {
        let (name, p) = match o.check {
            EstimateCheck::GaussianTail { b } => ("gaussian_tail", [b, f64::NAN, f64::NAN]),
            EstimateCheck::LogPower { lambda, alpha, x } => ("log_power", [lambda, alpha, x]),
            EstimateCheck::CosineGaussian { p, r } => ("cosine_gaussian", [p, r, f64::NAN]),
        };
        csv.row(&[
            name.into(),
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2]),
            o.lhs.map_or(String::new(), fmt_f64),
            o.rhs.map_or(String::new(), fmt_f64),
            o.holds.to_string(),
        ]);
    }
    all &= est.all_hold;
    let instances = random_power_sum_instances(200, cfg.seed);
    let margin = cassels_min_margin(&instances, 256)?;
    let ok = margin >= -1e-6;
    all &= ok;
    csv.row(&[
        "cassels_min_margin".into(),
        "200".into(),
        cfg.seed.to_string(),
        "256".into(),
        fmt_f64(margin),
        fmt_f64(-1e-6),
        ok.to_string(),
    ]);
    let path = dir.write("lemmas.csv", &csv.finish())?;
    Ok(RunOutcome {
        passed: all,
        summary: format!(
            "Gaussian line integral (18 points), {} estimate points, Cassels margin {margin:.3e} over 200 instances: {}",
            est.outcomes.len(),
            if all { "all hold" } else { "FAILURES, see lemmas.csv" }
        ),
        outputs: vec![path],
    })
}
