//! Beurling zeta function of a sampled system and its analytic companions.

use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::TargetDensity;
use crate::error::{domain, Error, Result};
use crate::numeric::ComplexSum;
use crate::prime_sampler::PrimeSystem;
use crate::semigroup::{stream_norms, ChebyshevIndex};

/// Upper bounds for prime sums beyond a cutoff, used for truncation tails.
pub trait TailModel: Sync {
    /// Bound for `Σ_{p>X} p^{−σ}` (`σ > 1`).
    fn tail_mass(&self, sigma: f64, x: f64) -> f64;
    /// Bound for `Σ_{p>X} log p · p^{−σ}` (`σ > 1`).
    fn tail_log_mass(&self, sigma: f64, x: f64) -> f64;
}

impl TargetDensity {
    /// Exponents `a` and weights `c_a` with `dF/du ≤ (1/u) Σ c_a e^{a u}` for `u > 0`.
    fn growth_terms(&self) -> Vec<(f64, f64)> {
        let mut v = vec![(1.0, 1.0), (self.r(), 1.0), (0.5, f64::from(self.m()))];
        for z in self.zeros().zeros() {
            v.push((z.beta, f64::from(z.expanded_count())));
        }
        v
    }
}

impl TailModel for TargetDensity {
    // ∫_X^∞ y^{−σ} dF ≤ Σ c_a e^{(a−σ)U}/(U(σ−a)) with U = log X, plus
    // 4X^{−σ} from |π_P − F| ≤ 2 after integrating by parts.
    fn tail_mass(&self, sigma: f64, x: f64) -> f64 {
        let u = x.ln().max(f64::MIN_POSITIVE);
        let smooth: f64 = self.growth_terms().iter().map(|&(a, c)| c * ((a - sigma) * u).exp() / (u * (sigma - a))).sum();
        smooth + 4.0 * x.powf(-sigma)
    }

    fn tail_log_mass(&self, sigma: f64, x: f64) -> f64 {
        let u = x.ln();
        let smooth: f64 = self.growth_terms().iter().map(|&(a, c)| c * ((a - sigma) * u).exp() / (sigma - a)).sum();
        smooth + 4.0 * u.max(1.0 / sigma) * x.powf(-sigma)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailPolicy {
    /// Refuse evaluations whose tail bound exceeds the context tolerance.
    Reject,
    /// Return the value with its tail bound.
    Estimate,
}

impl FromStr for TailPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "reject" => Ok(Self::Reject),
            "estimate" => Ok(Self::Estimate),
            other => Err(Error::Format(format!("unknown tail policy {other:?} (expected reject or estimate)"))),
        }
    }
}

/// Evaluation context: primes up to `x_cut` and a tail model beyond it.
#[derive(Clone, Copy)]
pub struct ZetaContext<'a> {
    pub ps: &'a PrimeSystem,
    pub d: &'a TargetDensity,
    pub x_cut: f64,
    pub tail_policy: TailPolicy,
    /// Evaluations need `Re s ≥ 1 + margin`.
    pub margin: f64,
    /// Largest tail bound accepted under [`TailPolicy::Reject`].
    pub tail_tolerance: f64,
    tail: &'a dyn TailModel,
}

impl<'a> ZetaContext<'a> {
    pub fn new(ps: &'a PrimeSystem, d: &'a TargetDensity, x_cut: f64) -> Result<Self> {
        if x_cut > ps.x_max {
            return domain(format!("truncation {x_cut:e} exceeds the sampled range x_max = {:e}", ps.x_max));
        }
        Ok(Self { ps, d, x_cut, tail_policy: TailPolicy::Estimate, margin: 0.05, tail_tolerance: 1e-6, tail: d })
    }

    /// Replaces the tail model (e.g. for prime lists not drawn from `d`).
    pub fn with_tail_model(mut self, tail: &'a dyn TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_policy(mut self, policy: TailPolicy) -> Self {
        self.tail_policy = policy;
        self
    }

    fn primes(&self) -> &'a [f64] {
        &self.ps.primes()[..self.ps.count_up_to(self.x_cut)]
    }

    fn check_region(&self, s: Complex64) -> Result<()> {
        if !(s.re >= 1.0 + self.margin) {
            return Err(Error::Divergent { sigma: s.re, limit: 1.0 + self.margin });
        }
        Ok(())
    }

    fn apply_policy(&self, tail: f64) -> Result<()> {
        if self.tail_policy == TailPolicy::Reject && tail > self.tail_tolerance {
            return Err(Error::Resource(format!(
                "truncation tail {tail:.3e} exceeds tolerance {:.3e}; raise X_cut or use the estimate policy",
                self.tail_tolerance
            )));
        }
        Ok(())
    }

    /// Bound on `|log ζ_P(s) − log ζ_trunc(s)|`.
    pub fn log_tail(&self, sigma: f64) -> f64 {
        self.tail.tail_mass(sigma, self.x_cut) / (1.0 - self.x_cut.powf(-sigma))
    }
}

/// Value with a truncation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounded {
    pub value: Complex64,
    pub tail_bound: f64,
}

fn sum_over_primes<F: Fn(f64) -> Complex64 + Sync>(primes: &[f64], f: F) -> Complex64 {
    // Fixed chunking keeps the reduction order independent of thread count.
    const CHUNK: usize = 4096;
    let partial: Vec<Complex64> = primes
        .par_chunks(CHUNK)
        .map(|c| {
            let mut s = ComplexSum::new();
            for &p in c {
                s.add(f(p));
            }
            s.value()
        })
        .collect();
    let mut s = ComplexSum::new();
    for v in partial {
        s.add(v);
    }
    s.value()
}

/// `log ζ_trunc(s) = −Σ_{p≤X} log(1 − p^{−s})` with per-factor principal logs.
///
/// Each factor has positive real part for `Re s > 0`, so the sum is the
/// branch continuous in `s` throughout `Re s > 1`.
pub fn log_zeta(ctx: &ZetaContext, s: Complex64) -> Result<Bounded> {
    ctx.check_region(s)?;
    let value = sum_over_primes(ctx.primes(), |p| -(1.0 - (-s * p.ln()).exp()).ln());
    let tail_bound = ctx.log_tail(s.re);
    ctx.apply_policy(tail_bound)?;
    Ok(Bounded { value, tail_bound })
}

/// Euler product `∏_{p≤X}(1−p^{−s})^{−1}`; `value·exp(±tail)` brackets ζ_P(s).
pub fn zeta_euler(ctx: &ZetaContext, s: Complex64) -> Result<Bounded> {
    let l = log_zeta(ctx, s)?;
    Ok(Bounded { value: l.value.exp(), tail_bound: l.tail_bound })
}

/// `log ζ` continued along the horizontal path from `σ` to `σ + it` by
/// argument unwrapping with step `dt`.
pub fn log_zeta_path_tracked(ctx: &ZetaContext, s: Complex64, dt: f64) -> Result<Complex64> {
    ctx.check_region(s)?;
    let start = log_zeta(ctx, Complex64::new(s.re, 0.0))?.value;
    let steps = (s.im.abs() / dt).ceil().max(1.0) as usize;
    let mut arg = start.im;
    let mut modulus_log = start.re;
    for k in 1..=steps {
        let t = s.im * k as f64 / steps as f64;
        let z = zeta_euler(ctx, Complex64::new(s.re, t))?.value;
        let mut d = z.arg() - arg.rem_euclid(2.0 * std::f64::consts::PI);
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        if d.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain(format!("argument step {d:.3} too large at t = {t}; reduce the path step")));
        }
        arg += d;
        modulus_log = z.norm().ln();
    }
    Ok(Complex64::new(modulus_log, arg))
}

/// Partial Dirichlet sum `Σ_{|g|≤X} |g|^{−s}` over enumerated norms.
pub fn zeta_dirichlet(ctx: &ZetaContext, s: Complex64, x: f64, max_norms: Option<u64>) -> Result<Complex64> {
    if x > ctx.x_cut {
        return domain(format!("Dirichlet cutoff {x:e} exceeds the enumeration cutoff {:e}", ctx.x_cut));
    }
    let mut sum = ComplexSum::new();
    let (_, exhausted) = stream_norms(ctx.ps, x, max_norms, |g| sum.add((-s * g.ln()).exp()));
    if let Some(at) = exhausted {
        return Err(Error::Resource(format!("norm budget exhausted at |g| = {at:e} before X = {x:e}")));
    }
    Ok(sum.value())
}

/// Rankin bound for `Σ_{g>X} |g|^{−σ}`: `min_δ X^{−δ} ζ(σ−δ)`, evaluated
/// with the truncated product and its tail.
pub fn dirichlet_tail_bound(ctx: &ZetaContext, sigma: f64, x: f64) -> Result<f64> {
    let room = sigma - 1.0 - ctx.margin;
    if room <= 0.0 {
        return Err(Error::Divergent { sigma, limit: 1.0 + ctx.margin });
    }
    let mut best = f64::INFINITY;
    for k in 1..=24 {
        let delta = room * k as f64 / 24.0;
        let z = log_zeta(ctx, Complex64::new(sigma - delta, 0.0))?;
        best = best.min((z.value.re + z.tail_bound - delta * x.ln()).exp());
    }
    Ok(best)
}

/// `−ζ'/ζ(s)` from the truncated Euler product: `Σ_{p≤X} log p·p^{−s}/(1−p^{−s})`.
pub fn log_deriv(ctx: &ZetaContext, s: Complex64) -> Result<Bounded> {
    ctx.check_region(s)?;
    let value = sum_over_primes(ctx.primes(), |p| {
        let lp = p.ln();
        let w = (-s * lp).exp();
        lp * w / (1.0 - w)
    });
    let tail_bound = ctx.tail.tail_log_mass(s.re, ctx.x_cut) / (1.0 - ctx.x_cut.powf(-s.re));
    ctx.apply_policy(tail_bound)?;
    Ok(Bounded { value, tail_bound })
}

fn check_not_one(s: Complex64) -> Result<()> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    Ok(())
}

/// `D(s) = −ζ'/ζ(s) − s/(s−1)`.
pub fn d_function(ctx: &ZetaContext, s: Complex64) -> Result<Bounded> {
    check_not_one(s)?;
    let l = log_deriv(ctx, s)?;
    Ok(Bounded { value: l.value - s / (s - 1.0), tail_bound: l.tail_bound })
}

/// `s∫₁^X Δ(x) x^{−s−1} dx`, exact between the jumps of `ψ`, with a bound on
/// its distance from `D(s)`.
pub fn d_function_integral(ctx: &ZetaContext, index: &ChebyshevIndex, s: Complex64) -> Result<Bounded> {
    check_not_one(s)?;
    ctx.check_region(s)?;
    let x = ctx.x_cut.min(index.limit());
    // s∫₁^X Δ x^{−s−1} dx = Σ_{p^k≤X} log p (p^{−ks} − X^{−s}) − (s/(s−1))(1 − X^{1−s}).
    let upto = index.jumps().partition_point(|&v| v <= x);
    let xs = (-s * x.ln()).exp();
    let jumps = &index.jumps()[..upto];
    let logs = &index.jump_logs()[..upto];
    let idx: Vec<usize> = (0..upto).collect();
    let value = {
        let partial: Vec<Complex64> = idx
            .par_chunks(4096)
            .map(|c| {
                let mut acc = ComplexSum::new();
                for &i in c {
                    acc.add(logs[i] * ((-s * jumps[i].ln()).exp() - xs));
                }
                acc.value()
            })
            .collect();
        let mut acc = ComplexSum::new();
        for v in partial {
            acc.add(v);
        }
        acc.value() - s / (s - 1.0) * (1.0 - ((1.0 - s) * x.ln()).exp())
    };
    // Missing: prime powers above X of primes ≤ X, primes above X, and the
    // boundary term ψ(X)X^{−σ} + |s/(s−1)|X^{1−σ}.
    let sigma = s.re;
    let powers: f64 = index
        .primes()
        .iter()
        .map(|&p| {
            let k = (x.ln() / p.ln()).floor() + 1.0;
            p.ln() * p.powf(-k * sigma) / (1.0 - p.powf(-sigma))
        })
        .sum();
    let bound = powers
        + ctx.tail.tail_log_mass(sigma, x) / (1.0 - x.powf(-sigma))
        + index.psi(x)? * x.powf(-sigma)
        + (s / (s - 1.0)).norm() * x.powf(1.0 - sigma);
    Ok(Bounded { value, tail_bound: bound })
}

/// `I(z, s) = log((s−z)/(s−z−1))` for `Re z ≤ 0`, `Re s > 1`.
pub fn mellin_i(z: Complex64, s: Complex64) -> Result<Complex64> {
    if !(z.re <= 0.0) || !(s.re > 1.0) {
        return domain(format!("mellin_I needs Re z ≤ 0 and Re s > 1, got z = {z}, s = {s}"));
    }
    Ok(((s - z) / (s - z - 1.0)).ln())
}

fn log_ratio_term(s: Complex64, a: Complex64) -> Result<Complex64> {
    // log((s − a + 1)/(s − a)): singular at s = a (pole) and s = a − 1 (zero).
    if s == a || s == a - 1.0 {
        return Err(Error::Pole(format!("log((s−a+1)/(s−a)) singular at s = {s} for a = {a}")));
    }
    Ok(((s - a + 1.0) / (s - a)).ln())
}

/// `L(s) = ∫ x^{−s} dF(x)` in closed form:
/// `log(s/(s−1)) + log((s−r+1)/(s−r)) + M log((s+½)/(s−½)) − Σ_ρ log((s−ρ+1)/(s−ρ))`.
pub fn mellin_l(d: &TargetDensity, s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = ComplexSum::new();
    acc.add(log_ratio_term(s, one)?);
    acc.add(log_ratio_term(s, Complex64::new(d.r(), 0.0))?);
    if d.m() > 0 {
        acc.add(f64::from(d.m()) * log_ratio_term(s, Complex64::new(0.5, 0.0))?);
    }
    for (rho, mult) in d.zeros().expanded() {
        acc.add(-f64::from(mult) * log_ratio_term(s, rho)?);
    }
    Ok(acc.value())
}

/// `R*(s) = log ζ(s) − L(s) − ½L(2s)`.
pub fn rstar_empirical(ctx: &ZetaContext, s: Complex64) -> Result<Bounded> {
    let lz = log_zeta(ctx, s)?;
    let value = lz.value - mellin_l(ctx.d, s)? - 0.5 * mellin_l(ctx.d, 2.0 * s)?;
    Ok(Bounded { value, tail_bound: lz.tail_bound })
}

/// Shape of the `R*` bound: `σ/(σ−½) + σ√(log(|t|+2))/√(σ−½)`.
pub fn rstar_envelope(s: Complex64) -> f64 {
    let sigma = s.re;
    sigma / (sigma - 0.5) + sigma * (s.im.abs() + 2.0).ln().sqrt() / (sigma - 0.5).sqrt()
}

/// `Q(s) = ∏_{ρ∈S}(s−ρ) / ((s−1)(s−r)(s−½)^M)`.
pub fn q_eval(d: &TargetDensity, s: Complex64) -> Result<Complex64> {
    for (p, name) in [(1.0, "1"), (d.r(), "r"), (0.5, "1/2")] {
        if s == Complex64::new(p, 0.0) && (name != "1/2" || d.m() > 0) {
            return Err(Error::Pole(format!("Q has a pole at s = {name}")));
        }
    }
    let mut v = 1.0 / ((s - 1.0) * (s - d.r()) * (s - 0.5).powu(d.m()));
    for (rho, mult) in d.zeros().expanded() {
        v *= (s - rho).powu(mult);
    }
    Ok(v)
}

/// Right-hand side `(1/(b−θ)){½T log T + (2 log(A+κ) + log(1/(b−θ)) + 3)T}`.
pub fn zero_count_bound(b: f64, t: f64, a_hat: f64, kappa_hat: f64, theta: f64) -> Result<f64> {
    if !(theta < b && b < 1.0) {
        return domain(format!("zero count bound needs θ < b < 1, got θ = {theta}, b = {b}"));
    }
    if !(t >= 5.0) {
        return domain(format!("zero count bound needs T ≥ 5, got {t}"));
    }
    if !(a_hat + kappa_hat > 0.0) {
        return domain("zero count bound needs A + κ > 0");
    }
    let gap = b - theta;
    Ok((0.5 * t * t.ln() + (2.0 * (a_hat + kappa_hat).ln() + (1.0 / gap).ln() + 3.0) * t) / gap)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroCountCheck {
    pub count: u32,
    pub bound: f64,
    pub holds: bool,
}

/// Compares the prescribed zeros with `Re ρ ≥ b`, `|Im ρ| < T` to the bound.
pub fn zero_count_check(
    zeros: &crate::density::ZeroSpec,
    b: f64,
    t: f64,
    a_hat: f64,
    kappa_hat: f64,
    theta: f64,
) -> Result<ZeroCountCheck> {
    let bound = zero_count_bound(b, t, a_hat, kappa_hat, theta)?;
    let count = zeros.expanded().iter().filter(|(rho, _)| rho.re >= b && rho.im.abs() < t).map(|(_, m)| m).sum();
    Ok(ZeroCountCheck { count, bound, holds: f64::from(count) <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::ZeroSpec;

    #[test]
    fn region_refused() {
        let d = TargetDensity::new(0.6, ZeroSpec::empty(), None).unwrap();
        let ps = PrimeSystem::from_primes(vec![2.0], 10.0).unwrap();
        let ctx = ZetaContext::new(&ps, &d, 10.0).unwrap();
        let e = zeta_euler(&ctx, Complex64::new(1.01, 0.0)).unwrap_err();
        assert!(matches!(e, Error::Divergent { .. }));
        assert!(e.to_string().contains("divergence region"));
    }

    #[test]
    fn reject_policy() {
        let d = TargetDensity::new(0.6, ZeroSpec::empty(), None).unwrap();
        let ps = PrimeSystem::from_primes(vec![2.0], 10.0).unwrap();
        let ctx = ZetaContext::new(&ps, &d, 10.0).unwrap().with_policy(TailPolicy::Reject);
        assert!(matches!(zeta_euler(&ctx, Complex64::new(2.0, 0.0)), Err(Error::Resource(_))));
    }

    #[test]
    fn pole_inputs() {
        let d = TargetDensity::new_unchecked(0.6, ZeroSpec::empty(), 0);
        assert!(q_eval(&d, Complex64::new(1.0, 0.0)).is_err());
        assert!(q_eval(&d, Complex64::new(0.6, 0.0)).is_err());
        assert!(mellin_l(&d, Complex64::new(1.0, 0.0)).is_err());
        assert!(mellin_i(Complex64::new(0.1, 0.0), Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn bound_domain() {
        assert!(zero_count_bound(0.5, 10.0, 1.0, 1.0, 0.6).is_err());
        assert!(zero_count_bound(0.7, 4.0, 1.0, 1.0, 0.6).is_err());
    }
}
