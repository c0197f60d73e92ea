//! Oscillation of `Δ(x) = ψ(x) − x`: explicit-formula residual, the sup
//! statistic `K`, the Gaussian-weighted integral `U(w)` against its residue
//! evaluation, and the one-zero and interference verifications.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::{PrimeDensity, TargetDensity};
use crate::error::{domain, Error, Result};
use crate::numeric::ComplexSum;
use crate::quad::{integrate, integrate_pieces, QuadOptions};
use crate::semigroup::ChebyshevIndex;
use crate::sine_polynomial::SinePolynomial;

/// Residual at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RvmPoint {
    pub x: f64,
    pub delta: f64,
    /// `Δ(x) + Σ_{ρ∈S} x^ρ/ρ`.
    pub residual: f64,
    /// The residual with the pole term `x^r/r` also removed.
    pub residual_pole_corrected: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RvmReport {
    pub points: Vec<RvmPoint>,
    pub max_over_sqrt: f64,
    pub max_over_sqrt_pole_corrected: f64,
}

fn rvm_point(d: &TargetDensity, x: f64, psi: f64) -> RvmPoint {
    let delta = psi - x;
    let residual = delta + d.zeros().power_sum_over_rho(x);
    RvmPoint { x, delta, residual, residual_pole_corrected: residual - x.powf(d.r()) / d.r() }
}

/// Residual `Δ + Σ x^ρ/ρ` on a grid and its maximum relative to `√x`.
pub fn rvm_residual(index: &ChebyshevIndex, d: &TargetDensity, grid: &[f64]) -> Result<RvmReport> {
    let points: Vec<RvmPoint> =
        grid.par_iter().map(|&x| Ok(rvm_point(d, x, index.psi(x)?))).collect::<Result<_>>()?;
    let max_over_sqrt = points.iter().map(|p| p.residual.abs() / p.x.sqrt()).fold(0.0, f64::max);
    let max_over_sqrt_pole_corrected =
        points.iter().map(|p| p.residual_pole_corrected.abs() / p.x.sqrt()).fold(0.0, f64::max);
    Ok(RvmReport { points, max_over_sqrt, max_over_sqrt_pole_corrected })
}

/// Maxima of `|residual|/√x` over one window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowMax {
    pub lo: f64,
    pub hi: f64,
    pub literal: f64,
    pub pole_corrected: f64,
}

/// Evaluates `f(x, ψ)` at `lo`, `hi` and both one-sided limits of every jump
/// of `ψ` inside `(lo, hi]`, folding with `max`.
fn fold_jump_endpoints<F>(index: &ChebyshevIndex, lo: f64, hi: f64, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Vec<f64> + Sync,
{
    let jumps = index.jumps();
    let a = jumps.partition_point(|&v| v <= lo);
    let b = jumps.partition_point(|&v| v <= hi);
    let init = {
        let mut v = f(lo, index.psi(lo)?);
        for (m, w) in v.iter_mut().zip(f(hi, index.psi(hi)?)) {
            *m = m.max(w);
        }
        v
    };
    let width = init.len();
    let best = (a..b)
        .into_par_iter()
        .with_min_len(4096)
        .fold(
            || vec![0.0f64; width],
            |mut acc, i| {
                let x = jumps[i];
                let after = index.psi_after(i);
                let before = after - index.jump_logs()[i];
                for v in [f(x, before), f(x, after)] {
                    for (m, w) in acc.iter_mut().zip(v) {
                        *m = m.max(w);
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; width],
            |mut a, b| {
                for (m, w) in a.iter_mut().zip(b) {
                    *m = m.max(w);
                }
                a
            },
        );
    Ok(init.into_iter().zip(best).map(|(a, b)| a.max(b)).collect())
}

/// Per-window maxima of `|Δ + Σx^ρ/ρ|/√x` (and the pole-corrected variant)
/// over all jump endpoints, so nothing between grid points is missed.
pub fn rvm_window_maxima(index: &ChebyshevIndex, d: &TargetDensity, edges: &[f64]) -> Result<Vec<WindowMax>> {
    if edges.iter().any(|&e| e > index.limit()) {
        return domain(format!("window edge beyond the indexed range {:e}", index.limit()));
    }
    edges
        .windows(2)
        .map(|w| {
            let v = fold_jump_endpoints(index, w[0], w[1], |x, psi| {
                let p = rvm_point(d, x, psi);
                let s = x.sqrt();
                vec![p.residual.abs() / s, p.residual_pole_corrected.abs() / s]
            })?;
            Ok(WindowMax { lo: w[0], hi: w[1], literal: v[0], pole_corrected: v[1] })
        })
        .collect()
}

/// True when `values[i+1] ≤ values[i]` for every `i ≥ 1`.
pub fn non_increasing_after_first(values: &[f64]) -> bool {
    values.iter().skip(1).collect::<Vec<_>>().windows(2).all(|w| w[1] <= w[0])
}

/// Largest grid ratio that resolves frequencies up to `max_gamma`.
pub fn max_grid_ratio(max_gamma: f64) -> f64 {
    if max_gamma > 0.0 {
        1.0 + PI / (8.0 * max_gamma)
    } else {
        f64::INFINITY
    }
}

/// `K = sup_{x∈[a,b]} |Δ(x)|/x^{β₀}`.
///
/// Between jumps `Δ(x)/x^{β₀}` is strictly decreasing (since `ψ ≥ 0`), so the
/// supremum over each inter-jump interval sits at an endpoint; all of them
/// are checked, which makes the result exact rather than grid-limited.
pub fn k_sup(
    index: &ChebyshevIndex,
    beta0: f64,
    interval: (f64, f64),
    grid_ratio: f64,
    max_gamma: f64,
) -> Result<f64> {
    let (a, b) = interval;
    if !(a >= 1.0 && b >= a) {
        return domain(format!("K interval must satisfy 1 ≤ a ≤ b, got [{a}, {b}]"));
    }
    if b > index.limit() {
        return domain(format!("K interval end {b:e} beyond the ψ-computable range {:e}", index.limit()));
    }
    let limit = max_grid_ratio(max_gamma);
    if !(grid_ratio > 1.0) || grid_ratio > limit {
        return Err(Error::GridTooCoarse(format!(
            "grid ratio {grid_ratio} does not resolve frequency {max_gamma}; need at most {limit}"
        )));
    }
    let v = fold_jump_endpoints(index, a, b, |x, psi| vec![(psi - x).abs() / x.powf(beta0)])?;
    Ok(v[0])
}

/// Where `U(w)` needs `ψ` beyond the sampled range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangePolicy {
    /// Refuse when the Gaussian window exceeds the indexed range.
    Reject,
    /// Truncate at the range end and report a crude bound on the remainder.
    CrudeBound,
    /// Extend `ϑ` with the model `ϑ_F` beyond the range end.
    Continuum,
}

impl FromStr for RangePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "reject" => Ok(Self::Reject),
            "crude" => Ok(Self::CrudeBound),
            "continuum" => Ok(Self::Continuum),
            other => Err(Error::Format(format!("unknown range policy {other:?} (reject, crude, continuum)"))),
        }
    }
}

impl fmt::Display for RangePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Reject => "reject",
            Self::CrudeBound => "crude",
            Self::Continuum => "continuum",
        })
    }
}

/// `U(w)` with its accounting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UValue {
    pub value: Complex64,
    /// Quadrature error estimate.
    pub quad_error: f64,
    /// Bound on the omitted remainder (crude policy only).
    pub tail_bound: f64,
    /// Whether model values beyond the sampled range were used.
    pub extrapolated: bool,
}

impl std::ops::Add for UValue {
    type Output = UValue;
    fn add(self, o: UValue) -> UValue {
        UValue {
            value: self.value + o.value,
            quad_error: self.quad_error + o.quad_error,
            tail_bound: self.tail_bound + o.tail_bound,
            extrapolated: self.extrapolated || o.extrapolated,
        }
    }
}

/// Gaussian window `G(ℓ) = exp(−(ℓ−M)²/4m)/(2√(πm))` with `M = 16m`.
#[derive(Clone, Copy, Debug)]
struct Window {
    m: f64,
    big_m: f64,
}

impl Window {
    fn new(m: f64) -> Result<Self> {
        if !(m >= 1.0) || !m.is_finite() {
            return domain(format!("U needs m ≥ 1, got {m}"));
        }
        Ok(Self { m, big_m: 16.0 * m })
    }

    /// Upper end `ℓ = M + 16m` of the window (`y = 8√m`).
    fn l_hi(&self) -> f64 {
        self.big_m + 16.0 * self.m
    }

    /// `Φ(x) = x^{−w} G(log x)` at `ℓ = log x`.
    fn phi(&self, w: Complex64, l: f64) -> Complex64 {
        let e = -w * l - (l - self.big_m).powi(2) / (4.0 * self.m);
        e.exp() / (2.0 * (PI * self.m).sqrt())
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-14, rel_tol: 1e-13, max_intervals: 20_000 }
}

fn breaks(a: f64, b: f64, width: f64) -> Vec<f64> {
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

/// `U(w)` for a synthetic `Δ` by quadrature of
/// `(1/√π) ∫ Δ(x) x^{−w} (y/√m + w) e^{−y²} dy`, `log x = M + 2√m y`,
/// over `|y| ≤ 8√m`.
pub fn u_weighted_synthetic<F>(delta: F, w: Complex64, m: f64) -> Result<UValue>
where
    F: Fn(f64) -> Complex64,
{
    let win = Window::new(m)?;
    let sm = m.sqrt();
    let y_max = 8.0 * sm;
    let freq = 2.0 * sm * (w.im.abs() + 1.0);
    let f = |y: f64| {
        let l = win.big_m + 2.0 * sm * y;
        let x = l.exp();
        delta(x) * (-w * l).exp() * (y / sm + w) * (-y * y).exp()
    };
    let r = integrate_pieces(f, &breaks(-y_max, y_max, 1.0 / freq.max(1.0)), quad_opts())?;
    Ok(UValue { value: r.value / PI.sqrt(), quad_error: r.error / PI.sqrt(), tail_bound: 0.0, extrapolated: false })
}

/// `U(w)` for a sampled system, written by parts as
/// `Σ_g Λ(g)Φ(|g|) − Φ(1) − ∫₁^∞ Φ(x) dx` over the window `log x ≤ M + 16m`.
pub fn u_weighted(
    index: &ChebyshevIndex,
    d: &TargetDensity,
    w: Complex64,
    m: f64,
    policy: RangePolicy,
) -> Result<UValue> {
    let win = Window::new(m)?;
    let l_hi = win.l_hi();
    let l_known = index.limit().ln();
    let beyond = l_hi > l_known;
    if beyond && policy == RangePolicy::Reject {
        return domain(format!(
            "U window reaches x = e^{l_hi:.1} but ψ is known only up to e^{l_known:.2}; choose a range policy"
        ));
    }
    // Jump part from known primes: every power p^n inside the window, or only
    // those inside the known range under the crude policy.
    let l_jump_max = if policy == RangePolicy::CrudeBound { l_hi.min(l_known) } else { l_hi };
    let primes = index.primes();
    let partial: Vec<Complex64> = primes
        .par_chunks(2048)
        .map(|chunk| {
            let mut acc = ComplexSum::new();
            for &p in chunk {
                let lp = p.ln();
                let mut n = 1.0;
                while n * lp <= l_jump_max {
                    acc.add(lp * win.phi(w, n * lp));
                    n += 1.0;
                }
            }
            acc.value()
        })
        .collect();
    let mut total = ComplexSum::new();
    for v in partial {
        total.add(v);
    }
    total.add(-win.phi(w, 0.0));
    let width = 0.5 / (w.im.abs() + d.zeros().max_gamma() + 1.0);
    let l_smooth = if policy == RangePolicy::CrudeBound { l_hi.min(l_known) } else { l_hi };
    let lin = integrate_pieces(|l: f64| win.phi(w, l) * l.exp(), &breaks(0.0, l_smooth, width.max(1e-3)), quad_opts())?;
    total.add(-lin.value);
    let mut quad_error = lin.error;
    let mut tail_bound = 0.0;
    let mut extrapolated = false;
    if beyond {
        match policy {
            RangePolicy::Continuum => {
                extrapolated = true;
                // ∫ Φ(t^n) log t dF(t) over primes t beyond the range, all powers n.
                let mut n = 1.0;
                while n * l_known < l_hi {
                    let top = l_hi / n;
                    let wn = 0.5 / (n * w.im.abs() + d.zeros().max_gamma() + 1.0);
                    let r = integrate_pieces(
                        |u: f64| win.phi(w, n * u) * (u * d.log_density(u)),
                        &breaks(l_known, top, wn.max(1e-3)),
                        quad_opts(),
                    )?;
                    total.add(r.value);
                    quad_error += r.error;
                    n += 1.0;
                }
            }
            RangePolicy::CrudeBound => {
                // |∫ Φ dΔ| over the unknown range ≤ (1 + c_ψ) ∫ |Φ| dx with
                // c_ψ = max ψ(x)/x seen on the known range.
                let c_psi = index.psi(index.limit())? / index.limit();
                let r = integrate(
                    |l: f64| win.phi(Complex64::new(w.re, 0.0), l) * l.exp(),
                    l_known,
                    l_hi,
                    quad_opts(),
                )?;
                tail_bound = (1.0 + c_psi.max(1.0)) * r.value.re;
            }
            RangePolicy::Reject => unreachable!(),
        }
    }
    Ok(UValue { value: total.value(), quad_error, tail_bound, extrapolated })
}

/// `S(ρ₀) = U(ρ₀) + U(ρ̄₀)`.
pub fn s_pair(
    index: &ChebyshevIndex,
    d: &TargetDensity,
    rho0: Complex64,
    m: f64,
    policy: RangePolicy,
) -> Result<UValue> {
    Ok(u_weighted(index, d, rho0, m, policy)? + u_weighted(index, d, rho0.conj(), m, policy)?)
}

/// `S` for a synthetic `Δ`.
pub fn s_pair_synthetic<F>(delta: F, rho0: Complex64, m: f64) -> Result<UValue>
where
    F: Fn(f64) -> Complex64,
{
    Ok(u_weighted_synthetic(&delta, rho0, m)? + u_weighted_synthetic(&delta, rho0.conj(), m)?)
}

/// Residue evaluation of `S(ρ₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidueSide {
    /// Contribution of the prescribed zeros (residue `−mult` each).
    pub zeros_only: Complex64,
    /// Contributions of the singularities at `1`, `r`, `1/2`.
    pub pole_terms: Complex64,
}

impl ResidueSide {
    pub fn with_poles(&self) -> Complex64 {
        self.zeros_only + self.pole_terms
    }
}

/// `Σ_a res_a [e^{m(a−ρ₀)²+M(a−ρ₀)} + e^{m(a−ρ̄₀)²+M(a−ρ̄₀)}]` over the
/// singularities of `D(s) = −ζ'/ζ(s) − s/(s−1)`: residue `−mult` at each
/// prescribed zero, `+1 − 1 = 0` at `s = 1`, `+1` at `s = r`, `M + 1/2` at `s = 1/2`.
pub fn residue_side(d: &TargetDensity, rho0: Complex64, m: f64) -> Result<ResidueSide> {
    let win = Window::new(m)?;
    let kernel = |a: Complex64| {
        let mut s = Complex64::new(0.0, 0.0);
        for w in [rho0, rho0.conj()] {
            let z = a - w;
            s += (win.m * z * z + win.big_m * z).exp();
        }
        s
    };
    let mut zeros = ComplexSum::new();
    for (rho, mult) in d.zeros().expanded() {
        zeros.add(-f64::from(mult) * kernel(rho));
    }
    let mut poles = ComplexSum::new();
    // s = 1: +1 from −ζ'/ζ and −1 from −s/(s−1) cancel.
    poles.add(Complex64::new(0.0, 0.0) * kernel(Complex64::new(1.0, 0.0)));
    poles.add(kernel(Complex64::new(d.r(), 0.0)));
    poles.add((f64::from(d.m()) + 0.5) * kernel(Complex64::new(0.5, 0.0)));
    Ok(ResidueSide { zeros_only: zeros.value(), pole_terms: poles.value() })
}

/// `4e^{−2m} + e^{−3m(β₀−θ)}`.
pub fn residue_error_envelope(m: f64, beta0: f64, theta: f64) -> f64 {
    4.0 * (-2.0 * m).exp() + (-3.0 * m * (beta0 - theta)).exp()
}

/// `(4K|ρ₀|/π)(1 + 4/(√m γ₀)) + 4e^{−2m}`.
pub fn s_upper_estimate(k: f64, rho0: Complex64, m: f64) -> f64 {
    4.0 * k * rho0.norm() / PI * (1.0 + 4.0 / (m.sqrt() * rho0.im.abs())) + 4.0 * (-2.0 * m).exp()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillationReport {
    pub interval: (f64, f64),
    pub k: f64,
    /// `(π/2 − ε)/|ρ₀|`.
    pub bound_lower: f64,
    /// `(π/2 + 3ε)/|ρ₀|`.
    pub bound_upper: f64,
    pub rvm_residual_max_over_sqrt: f64,
    /// The requested window did not fit the computable range.
    pub truncated: bool,
    pub holds: bool,
    pub caveat: String,
}

/// Checks `K·|ρ₀| ≥ π/2 − ε` over `[Y, Y^c]` (truncated to the known range).
pub fn verify_lower_oscillation(
    index: &ChebyshevIndex,
    d: &TargetDensity,
    rho0: Complex64,
    epsilon: f64,
    y: f64,
    c: f64,
) -> Result<OscillationReport> {
    if !(y > 1.0 && c > 1.0) {
        return domain(format!("window needs Y > 1 and c > 1, got Y = {y}, c = {c}"));
    }
    if y >= index.limit() {
        return domain(format!("window start {y:e} lies beyond the computable range {:e}", index.limit()));
    }
    let want_hi = y.powf(c);
    let hi = want_hi.min(index.limit());
    let gamma = d.zeros().max_gamma().max(rho0.im.abs());
    let k = k_sup(index, rho0.re, (y, hi), max_grid_ratio(gamma).min(1.05), gamma)?;
    let rvm = rvm_window_maxima(index, d, &[y, hi])?[0].literal;
    let norm = rho0.norm();
    let bound_lower = (FRAC_PI_2 - epsilon) / norm;
    Ok(OscillationReport {
        interval: (y, hi),
        k,
        bound_lower,
        bound_upper: (FRAC_PI_2 + 3.0 * epsilon) / norm,
        rvm_residual_max_over_sqrt: rvm,
        truncated: hi < want_hi,
        holds: k >= bound_lower,
        caveat: "desk-scale window [Y, Y^c]; the asymptotic window exponent is not computable".into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceReport {
    pub x_range: (f64, f64),
    /// `sup |Δ(x)|·|ρ₀|/x^{β₀}` over the range (exact over jumps).
    pub measured_sup: f64,
    pub target: f64,
    pub rvm_allowance: f64,
    pub holds_strict: bool,
    pub holds_with_allowance: bool,
    /// Same statistic for `ϑ(x) − (ϑ_F(x) + Σx^ρ/ρ)`, i.e. with the
    /// non-oscillating part of the model removed.
    pub detrended_sup: f64,
    /// Detrended statistic over the top decade of the range only.
    pub detrended_sup_top_decade: f64,
    pub caveat: String,
}

/// `ρ_k = β₀ + i(2n_k+1)v` for each index of the sine polynomial.
pub fn interference_zeros(sine: &SinePolynomial, v: f64, beta0: f64) -> Vec<crate::density::Zero> {
    sine.indices().iter().map(|&n| crate::density::Zero::new(beta0, f64::from(2 * n + 1) * v, 1)).collect()
}

/// Smallest admissible `v`: the bound `(4N+4)/ε`.
pub fn interference_v_floor(sine: &SinePolynomial, epsilon: f64) -> f64 {
    (4.0 * sine.degree() as f64 + 4.0) / epsilon
}

/// Checks `sup |Δ|·|ρ₀|/x^{β₀} ≤ π/2 + 3ε` on `x_range` for a system built
/// from the zero layout of `sine`.
pub fn verify_interference(
    index: &ChebyshevIndex,
    d: &TargetDensity,
    sine: &SinePolynomial,
    v: f64,
    beta0: f64,
    epsilon: f64,
    x_range: (f64, f64),
) -> Result<InterferenceReport> {
    let floor = interference_v_floor(sine, epsilon);
    if !(v > floor) {
        return domain(format!("v = {v} must exceed (4N+4)/ε = {floor} for N = {}", sine.degree()));
    }
    let layout = crate::density::ZeroSpec::new(interference_zeros(sine, v, beta0))?;
    if &layout != d.zeros() {
        return domain("density zeros do not follow the layout β₀ + i(2n_k+1)v of the sine polynomial");
    }
    let (lo, hi) = x_range;
    if !(lo >= 1.0 && hi > lo) || hi > index.limit() {
        return domain(format!("x range [{lo}, {hi}] must lie within [1, {:e}]", index.limit()));
    }
    let rho0 = Complex64::new(beta0, v);
    let norm = rho0.norm();
    let gamma = d.zeros().max_gamma();
    let ratio = max_grid_ratio(gamma);
    let measured_sup = k_sup(index, beta0, x_range, ratio, gamma)? * norm;
    let rvm = rvm_window_maxima(index, d, &[lo, hi])?[0].literal;
    let rvm_allowance = rvm * norm * lo.powf(0.5 - beta0);
    let target = FRAC_PI_2 + 3.0 * epsilon;
    let detrended = |a: f64, b: f64| -> Result<f64> {
        let primes = index.primes();
        let i0 = primes.partition_point(|&p| p <= a);
        let i1 = primes.partition_point(|&p| p <= b);
        let trend = |x: f64| -> Result<f64> { Ok(d.theta_model(x)? + d.zeros().power_sum_over_rho(x)) };
        let eval = |x: f64, theta: f64| -> Result<f64> { Ok((theta - trend(x)?).abs() * norm / x.powf(beta0)) };
        let mut best = eval(a, index.theta(a)?)?.max(eval(b, index.theta(b)?)?);
        let inner: Vec<f64> = (i0..i1)
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| {
                let x = primes[i];
                let after = index.theta(x)?;
                let before = after - x.ln();
                Ok(eval(x, before)?.max(eval(x, after)?))
            })
            .collect::<Result<_>>()?;
        for v in inner {
            best = best.max(v);
        }
        Ok(best)
    };
    Ok(InterferenceReport {
        x_range,
        measured_sup,
        target,
        rvm_allowance,
        holds_strict: measured_sup <= target,
        holds_with_allowance: measured_sup <= target + rvm_allowance,
        detrended_sup: detrended(lo, hi)?,
        detrended_sup_top_decade: detrended((hi / 10.0).max(lo), hi)?,
        caveat: "the bound is asymptotic (all sufficiently large x); only the finite window above was examined".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_requires_m_at_least_one() {
        assert!(Window::new(0.5).is_err());
        assert!(Window::new(1.0).is_ok());
    }

    #[test]
    fn monotone_check() {
        assert!(non_increasing_after_first(&[1.0, 5.0, 4.0, 4.0, 3.0]));
        assert!(!non_increasing_after_first(&[1.0, 5.0, 4.0, 4.5]));
        assert!(non_increasing_after_first(&[]));
    }

    #[test]
    fn policy_parsing() {
        for p in [RangePolicy::Reject, RangePolicy::CrudeBound, RangePolicy::Continuum] {
            assert_eq!(p.to_string().parse::<RangePolicy>().unwrap(), p);
        }
    }
}
