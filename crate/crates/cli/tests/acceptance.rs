//! Acceptance criteria AC1–AC11. Each test prints one `PASS`/`FAIL` line to
//! the real stdout (bypassing the test harness capture) and then asserts.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use beurling_cli::commands::interference_pipeline;
use beurling_cli::config::{InterferenceConfig, OscillationConfig, SineConfig};
use beurling_cli::{run, CliError, Command, ExperimentConfig};
use beurling_core::analysis_kernels::{cassels_min_margin, gaussian_line_integral, random_power_sum_instances};
use beurling_core::density::{TargetDensity, Zero, ZeroSpec};
use beurling_core::oscillation::{
    non_increasing_after_first, residue_error_envelope, residue_side, rvm_window_maxima, s_pair, RangePolicy,
};
use beurling_core::prime_sampler::{max_count_discrepancy, sample_primes, PrimeSystem, SamplingMethod};
use beurling_core::semigroup::{
    axiom_a_fit, enumerate_norms, geometric_grid, stream_norms, ChebyshevIndex, EnumerationLimits, EnumerationMode,
};
use beurling_core::sine_polynomial::{gibbs_norm, search_low_norm, SearchOutcome, SearchStrategy, SinePolynomial};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

fn report(id: &str, pass: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{id} {}: {detail}", if pass { "PASS" } else { "FAIL" });
    let _ = out.flush();
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Composite Simpson along `Re s = 0` for `(1/2πi)∫ e^{as²+bs} ds`,
/// truncated where the Gaussian factor is below e^{−60}.
fn gaussian_line_oracle(a: f64, b: Complex64) -> Complex64 {
    let t_max = (60.0 / a).sqrt() + b.im.abs() / (2.0 * a);
    let n = 400_000usize;
    let h = 2.0 * t_max / n as f64;
    let f = |t: f64| {
        let s = Complex64::new(0.0, t);
        (a * s * s + b * s).exp()
    };
    let mut acc = f(-t_max) + f(t_max);
    for k in 1..n {
        acc += f(-t_max + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0 / (2.0 * PI)
}

#[test]
fn ac01_gaussian_line_integral() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut values = Vec::new();
    for a in [0.25, 1.0, 4.0] {
        for b in [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(1.0, 1.0),
        ] {
            values.push((a, b, gaussian_line_integral(a, b).unwrap()));
        }
    }
    let elapsed = start.elapsed();
    for (a, b, closed) in values {
        let oracle = gaussian_line_oracle(a, b);
        worst = worst.max((closed - oracle).norm() / oracle.norm());
    }
    let pass = worst <= 1e-8 && elapsed < Duration::from_secs(1);
    report("AC1", pass, &format!("max rel. error {worst:.2e} over 18 (a, b) points (≤ 1e-8), closed form in {}", secs(elapsed)));
    assert!(pass);
}

#[test]
fn ac02_cassels_bound() {
    let start = Instant::now();
    let instances = random_power_sum_instances(200, 20240601);
    let margin = cassels_min_margin(&instances, 256).unwrap();
    let elapsed = start.elapsed();
    let pass = margin >= -1e-6 && elapsed < Duration::from_secs(10);
    report("AC2", pass, &format!("min (max − k) over 200 instances = {margin:.3e} (≥ −1e-6) in {}", secs(elapsed)));
    assert!(pass);
}

#[test]
fn ac03_gibbs_constant() {
    let start = Instant::now();
    let norm = gibbs_norm(500).unwrap();
    let elapsed = start.elapsed();
    // Independent limit: ∫₀^π sin x / x dx by Simpson.
    let n = 200_000;
    let h = PI / n as f64;
    let f = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    let si_pi = (f(0.0) + f(PI) + (1..n).map(|k| f(h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum::<f64>()) * h / 3.0;
    let pass = (norm - 1.8519).abs() <= 0.02 && (si_pi - 1.8519).abs() < 1e-4 && elapsed < Duration::from_secs(5);
    report("AC3", pass, &format!("sup norm of 500-term partial sum = {norm:.6} (1.8519 ± 0.02; Si(π) = {si_pi:.6}) in {}", secs(elapsed)));
    assert!(pass);
}

#[test]
fn ac04_low_norm_polynomial() {
    let start = Instant::now();
    let outcome = search_low_norm(0.25, SearchStrategy::Anneal, 1, 1_000_000).unwrap();
    let elapsed = start.elapsed();
    let (pass, detail) = match &outcome {
        SearchOutcome::Success { poly, evaluations } => {
            let norm = poly.certified_norm().unwrap();
            // Recertify on a dense grid of [0, π/2].
            let grid = 1 << 20;
            let dense = (0..=grid).map(|k| poly.eval(FRAC_PI_2 * k as f64 / grid as f64).abs()).fold(0.0, f64::max);
            let ok = norm <= FRAC_PI_2 + 0.25 && dense <= norm + 1e-12 && *evaluations <= 1_000_000;
            (ok, format!("{poly}; certified {norm:.6} ≤ 1.8208, dense grid max {dense:.6}, {evaluations} evaluations, {}", secs(elapsed)))
        }
        SearchOutcome::Failure { evaluations, .. } => (false, format!("no success within {evaluations} evaluations")),
    };
    report("AC4", pass, &detail);
    assert!(pass);
}

/// `(r, zeros)` of the three sampler configurations.
fn sampler_configs() -> Vec<(f64, Vec<Zero>)> {
    vec![
        (0.55, vec![Zero::new(0.7, 3.0, 1)]),
        (0.6, vec![Zero::new(0.75, 5.0, 1)]),
        (0.75, vec![Zero::new(0.85, 4.0, 1), Zero::new(0.8, 0.0, 1)]),
    ]
}

#[test]
fn ac05_sampler_contract() {
    let mut pass = true;
    let mut parts = Vec::new();
    for (r, zeros) in sampler_configs() {
        let start = Instant::now();
        let d = TargetDensity::new(r, ZeroSpec::new(zeros).unwrap(), None).unwrap();
        let ps = sample_primes(&d, SamplingMethod::Quantile, 0, 1e7).unwrap();
        let disc = max_count_discrepancy(&ps, &d, 1e7).unwrap();
        let elapsed = start.elapsed();
        let ok = disc <= 2.0 && elapsed < Duration::from_secs(120);
        pass &= ok;
        parts.push(format!(
            "r={r} (#S={}, {} primes): max |π−F| = {disc:.6} in {}",
            d.zeros().total_multiplicity(),
            ps.len(),
            secs(elapsed)
        ));
    }
    report("AC5", pass, &parts.join("; "));
    assert!(pass);
}

/// All products of powers of `primes` up to `x`, by depth-first search.
fn brute_force_norms(primes: &[f64], x: f64) -> Vec<f64> {
    fn go(primes: &[f64], i: usize, acc: f64, x: f64, out: &mut Vec<f64>) {
        if i == primes.len() {
            out.push(acc);
            return;
        }
        let mut v = acc;
        while v <= x {
            go(primes, i + 1, v, x, out);
            v *= primes[i];
        }
    }
    let mut out = Vec::new();
    go(primes, 0, 1.0, x, &mut out);
    out.sort_by(f64::total_cmp);
    out
}

struct Reference {
    d: TargetDensity,
    ps: PrimeSystem,
    index: ChebyshevIndex,
}

/// The r = 0.6, S = {0.75 ± 5i} quantile system up to 10⁷.
fn reference_system() -> &'static Reference {
    static CELL: OnceLock<Reference> = OnceLock::new();
    CELL.get_or_init(|| {
        let d = TargetDensity::new(0.6, ZeroSpec::new(vec![Zero::new(0.75, 5.0, 1)]).unwrap(), None).unwrap();
        let ps = sample_primes(&d, SamplingMethod::Quantile, 0, 1e7).unwrap();
        let index = ChebyshevIndex::new(&ps, 1e7).unwrap();
        Reference { d, ps, index }
    })
}

#[test]
fn ac06_enumeration_oracle_and_throughput() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    let mut total = 0usize;
    for _ in 0..50 {
        let k = rng.random_range(1..=6usize);
        let primes: Vec<f64> = (0..k).map(|_| rng.random_range(1.05..40.0)).collect();
        let x: f64 = rng.random_range(10.0..=1e4);
        let ps = PrimeSystem::from_primes(primes.clone(), x.max(40.0)).unwrap();
        let mut sorted = primes.clone();
        sorted.sort_by(f64::total_cmp);
        let expected = brute_force_norms(&sorted, x);
        let got = enumerate_norms(&ps, x, EnumerationMode::Collect, &[x], EnumerationLimits::default())
            .unwrap()
            .norms
            .unwrap();
        total += expected.len();
        let same = got.len() == expected.len()
            && got.iter().zip(&expected).all(|(a, b)| (a - b).abs() <= 1e-12 * b);
        if !same {
            mismatches += 1;
        }
    }
    let sys = reference_system();
    let start = Instant::now();
    let mut last = 0.0;
    let (emitted, _) = stream_norms(&sys.ps, 1e7, Some(10_000_000), |n| last = n);
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && emitted == 10_000_000 && elapsed < Duration::from_secs(60);
    report(
        "AC6",
        pass,
        &format!(
            "{mismatches}/50 multiset mismatches ({total} norms checked); 10⁷ norms streamed in {} (largest {last:.3})",
            secs(elapsed)
        ),
    );
    assert!(pass);
}

#[test]
fn ac07_rvm_residual() {
    let sys = reference_system();
    let edges = [1e2, 1e3, 1e4, 1e5, 1e6, 1e7];
    let w = rvm_window_maxima(&sys.index, &sys.d, &edges).unwrap();
    let literal: Vec<f64> = w.iter().map(|m| m.literal).collect();
    let corrected: Vec<f64> = w.iter().map(|m| m.pole_corrected).collect();
    let bounded = literal.iter().all(|v| v.is_finite());
    let pass = bounded && non_increasing_after_first(&literal);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ");
    report(
        "AC7",
        pass,
        &format!(
            "decade maxima of |Δ+Σx^ρ/ρ|/√x: [{}]; diagnostic with x^r/r removed: [{}] (non-increasing after first: {})",
            fmt(&literal),
            fmt(&corrected),
            non_increasing_after_first(&corrected)
        ),
    );
    assert!(pass);
}

#[test]
fn ac08_axiom_a_fit() {
    let sys = reference_system();
    let grid = geometric_grid(1.0, 1e7, 1.01).unwrap();
    let limits = EnumerationLimits { max_norms: Some(50_000_000), ..EnumerationLimits::default() };
    let start = Instant::now();
    let en = enumerate_norms(&sys.ps, 1e7, EnumerationMode::Stream, &grid, limits).unwrap();
    let elapsed = start.elapsed();
    let fit = axiom_a_fit(&en.counts);
    let (pass, detail) = match (en.exhausted_at, &fit) {
        (None, Ok(f)) => (
            (0.55..=0.65).contains(&f.theta_hat) && f.kappa_hat > 0.0,
            format!("θ̂ = {:.4}, κ̂ = {:.6}, Â = {:.4} at X_cut = 1e7", f.theta_hat, f.kappa_hat, f.a_hat),
        ),
        (Some(x), _) => (
            false,
            format!(
                "enumeration to X_cut = 1e7 infeasible: the 5·10⁷-norm budget ran out at x = {x:.2} after {}; fit on the reachable range: {}",
                secs(elapsed),
                match &fit {
                    Ok(f) => format!("θ̂ = {:.4}, κ̂ = {:.4}", f.theta_hat, f.kappa_hat),
                    Err(e) => format!("unavailable ({e})"),
                }
            ),
        ),
        (None, Err(e)) => (false, format!("fit failed: {e}")),
    };
    report("AC8", pass, &detail);
    assert!(pass);
}

#[test]
fn ac09_weighted_integral_identity() {
    let sys = reference_system();
    let rho0 = Complex64::new(0.75, 5.0);
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [2.0, 3.0] {
        let s = s_pair(&sys.index, &sys.d, rho0, m, RangePolicy::Continuum).unwrap();
        let r = residue_side(&sys.d, rho0, m).unwrap();
        let tol = s.quad_error + residue_error_envelope(m, 0.75, 0.6);
        let diff = (s.value - r.with_poles()).norm();
        pass &= diff <= tol;
        parts.push(format!("m={m}: S = {:.10}{:+.1e}i, residue side {:.10}, |diff| = {diff:.2e} ≤ {tol:.2e}", s.value.re, s.value.im, r.with_poles().re));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    report("AC9", pass, &format!("{} ({})", parts.join("; "), secs(elapsed)));
    assert!(pass);
}

#[test]
fn ac10_interference_headline() {
    let sine_cfg = SineConfig { epsilon: 0.2, strategy: SearchStrategy::Anneal, seed: 1, budget: 1_000_000 };
    let outcome = search_low_norm(sine_cfg.epsilon, sine_cfg.strategy, sine_cfg.seed, sine_cfg.budget).unwrap();
    let Some(sine) = outcome.polynomial().filter(|_| outcome.is_success()).cloned() else {
        report("AC10", false, "no sine polynomial with norm ≤ π/2 + 0.2 found");
        panic!("sine search failed");
    };
    let floor = beurling_core::oscillation::interference_v_floor(&sine, 0.2);
    let cfg = ExperimentConfig {
        r: 0.6,
        sine: Some(sine_cfg),
        interference: Some(InterferenceConfig { v: floor + 5.0, epsilon: 0.2, beta0: 0.75, x_lo: 1e3, x_hi: 1e7 }),
        ..ExperimentConfig::default()
    };
    let start = Instant::now();
    let run = interference_pipeline(&cfg, &sine).unwrap();
    let elapsed = start.elapsed();
    let pass = run.passed();
    report(
        "AC10",
        pass,
        &format!(
            "{sine}, v = {:.1}, M = {}: sup |Δ|·|ρ₀|/x^β₀ on [1e3, 1e7] = {:.4} (≤ 2.1708 needed); baseline {:.4} (≥ 1.9 needed); \
             diagnostic without the non-oscillating trend: layout {:.4} (top decade {:.4}), baseline {:.4} (top decade {:.4}); {}; {}",
            floor + 5.0,
            run.m,
            run.report.measured_sup,
            run.baseline.measured_sup,
            run.report.detrended_sup,
            run.report.detrended_sup_top_decade,
            run.baseline.detrended_sup,
            run.baseline.detrended_sup_top_decade,
            run.report.caveat,
            secs(elapsed)
        ),
    );
    assert!(pass);
}

#[test]
fn ac11_reproducibility() {
    let cfg = ExperimentConfig {
        sampler: SamplingMethod::DmvRandom,
        seed: 2024,
        x_max: 1e5,
        x_cut: 1e5,
        grid_ratio: 1.02,
        max_norms: 1_000_000,
        sine: Some(SineConfig { epsilon: 0.3, ..SineConfig::default() }),
        oscillation: Some(OscillationConfig { y: 1e2, ..OscillationConfig::default() }),
        ..ExperimentConfig::default()
    };
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let commands = [
        Command::Lemmas,
        Command::Build,
        Command::Tables,
        Command::Zeta,
        Command::RvmCheck,
        Command::SineSearch,
        Command::Oscillation,
    ];
    for dir in &dirs {
        for cmd in commands {
            match run(cmd, &cfg, dir.path()) {
                Ok(_) | Err(CliError::Resource(_)) => {}
                Err(e) => panic!("{cmd:?}: {e}"),
            }
        }
    }
    let mut compared = Vec::new();
    let mut pass = true;
    let mut names: Vec<String> = std::fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv") || n.ends_with(".bin") || n == "sine.txt")
        .collect();
    names.sort();
    for name in &names {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        pass &= a == b;
        compared.push(name.clone());
    }
    pass &= compared.iter().filter(|n| n.ends_with(".csv")).count() >= 6;
    report("AC11", pass, &format!("byte-identical across two runs: {}", compared.join(", ")));
    assert!(pass);
}

#[test]
fn ac10_layout_zeros_follow_sine_polynomial() {
    // Guard for the pipeline wiring used by AC10: zeros at β₀ + i(2n+1)v.
    let sine = SinePolynomial::new(vec![0, 2, 5]).unwrap();
    let z = beurling_core::oscillation::interference_zeros(&sine, 50.0, 0.75);
    let gammas: Vec<f64> = z.iter().map(|z| z.gamma).collect();
    assert_eq!(gammas, vec![50.0, 250.0, 550.0]);
}
