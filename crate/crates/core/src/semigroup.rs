//! Generalized integers generated by a prime system: ascending norm
//! enumeration, counting function `N(x)`, Chebyshev functions and the
//! Axiom A fit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numeric::CompensatedSum;
use crate::prime_sampler::PrimeSystem;

#[derive(Clone, Copy, Debug)]
struct State {
    norm: f64,
    prefix: f64,
    last: u32,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for State {}
impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for State {
    // Reversed so that `BinaryHeap` pops the smallest norm first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .norm
            .total_cmp(&self.norm)
            .then_with(|| other.last.cmp(&self.last))
            .then_with(|| other.prefix.total_cmp(&self.prefix))
    }
}

/// Ascending stream of norms `≤ limit`, each multiset of primes once.
///
/// A state `(norm, prefix, i)` stands for `prefix · p_i` with all factors of
/// `prefix` having index `≤ i`. Its children are `norm · p_i` (repeat the
/// largest prime) and `prefix · p_{i+1}` (advance the largest prime), so every
/// nondecreasing index tuple has exactly one parent.
pub struct NormStream<'a> {
    primes: &'a [f64],
    limit: f64,
    heap: BinaryHeap<State>,
    started: bool,
}

impl<'a> NormStream<'a> {
    pub fn new(primes: &'a [f64], limit: f64) -> Self {
        let mut heap = BinaryHeap::new();
        if let Some(&p) = primes.first() {
            if p <= limit {
                heap.push(State { norm: p, prefix: 1.0, last: 0 });
            }
        }
        Self { primes, limit, heap, started: false }
    }

    /// Current frontier size.
    pub fn frontier(&self) -> usize {
        self.heap.len()
    }
}

impl Iterator for NormStream<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if !self.started {
            self.started = true;
            if self.limit >= 1.0 {
                return Some(1.0);
            }
            self.heap.clear();
            return None;
        }
        let s = self.heap.pop()?;
        let i = s.last as usize;
        let repeat = s.norm * self.primes[i];
        if repeat <= self.limit {
            self.heap.push(State { norm: repeat, prefix: s.norm, last: s.last });
        }
        if let Some(&q) = self.primes.get(i + 1) {
            let advance = s.prefix * q;
            if advance <= self.limit {
                self.heap.push(State { norm: advance, prefix: s.prefix, last: s.last + 1 });
            }
        }
        Some(s.norm)
    }
}

/// `N(x)` sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerCounts {
    pub grid: Vec<f64>,
    pub n_values: Vec<u64>,
    pub x_cut: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Stream,
    Collect,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationLimits {
    /// Largest projected count that collect mode will materialize.
    pub max_collect: f64,
    /// Stop after this many norms (stream mode); `None` means unbounded.
    pub max_norms: Option<u64>,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_collect: 5e7, max_norms: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// Counts on the grid; truncated to the reached range if the norm budget ran out.
    pub counts: IntegerCounts,
    /// All norms in ascending order (collect mode only).
    pub norms: Option<Vec<f64>>,
    pub emitted: u64,
    /// Largest norm emitted before the budget ran out, if it did.
    pub exhausted_at: Option<f64>,
}

/// Rankin upper bound `min_σ X^σ ∏_{p≤X} (1 − p^{−σ})^{−1}` on `N(X)`.
pub fn projected_count(primes: &[f64], x: f64) -> f64 {
    let upto = primes.partition_point(|&p| p <= x);
    let logs: Vec<f64> = primes[..upto].iter().map(|p| p.ln()).collect();
    let lx = x.max(1.0).ln();
    let mut best = f64::INFINITY;
    for j in 0..60 {
        let sigma = 0.05 * (80.0f64).powf(j as f64 / 59.0);
        let mut log_bound = sigma * lx;
        for &l in &logs {
            log_bound -= (-(-sigma * l).exp()).ln_1p();
        }
        best = best.min(log_bound);
    }
    best.exp()
}

/// Streams norms `≤ x_cut` in ascending order into `consumer`; returns the
/// number emitted and, if `max_norms` stopped the stream, the last norm.
pub fn stream_norms<F: FnMut(f64)>(
    ps: &PrimeSystem,
    x_cut: f64,
    max_norms: Option<u64>,
    mut consumer: F,
) -> (u64, Option<f64>) {
    let mut emitted = 0u64;
    let mut last = 0.0;
    for norm in NormStream::new(ps.primes(), x_cut) {
        if max_norms.is_some_and(|m| emitted >= m) {
            return (emitted, Some(last));
        }
        consumer(norm);
        emitted += 1;
        last = norm;
    }
    (emitted, None)
}

/// Enumerates norms up to `x_cut` and counts them on `grid`.
pub fn enumerate_norms(
    ps: &PrimeSystem,
    x_cut: f64,
    mode: EnumerationMode,
    grid: &[f64],
    limits: EnumerationLimits,
) -> Result<Enumeration> {
    if !(x_cut >= 1.0) {
        return domain(format!("enumeration cutoff must be ≥ 1, got {x_cut}"));
    }
    if x_cut > ps.x_max * ps.x_max {
        return domain(format!("cutoff {x_cut:e} exceeds x_max² = {:e}", ps.x_max * ps.x_max));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("count grid must be strictly increasing");
    }
    if mode == EnumerationMode::Collect {
        let projected = projected_count(ps.primes(), x_cut);
        if projected > limits.max_collect {
            return Err(Error::Resource(format!(
                "collect mode would hold up to {projected:.3e} norms (budget {:.3e}); use stream mode",
                limits.max_collect
            )));
        }
    }
    let grid: Vec<f64> = grid.iter().copied().filter(|&x| x <= x_cut).collect();
    let mut n_values = vec![0u64; grid.len()];
    let mut norms = (mode == EnumerationMode::Collect).then(Vec::new);
    let mut gi = 0usize;
    let mut count = 0u64;
    let (emitted, exhausted_at) = stream_norms(ps, x_cut, limits.max_norms, |norm| {
        while gi < grid.len() && grid[gi] < norm {
            n_values[gi] = count;
            gi += 1;
        }
        count += 1;
        if let Some(v) = norms.as_mut() {
            v.push(norm);
        }
    });
    let reached = match exhausted_at {
        // Counts are exact only strictly below the next unseen norm.
        Some(_) => gi,
        None => {
            while gi < grid.len() {
                n_values[gi] = count;
                gi += 1;
            }
            grid.len()
        }
    };
    let counts = IntegerCounts { grid: grid[..reached].to_vec(), n_values: n_values[..reached].to_vec(), x_cut };
    Ok(Enumeration { counts, norms, emitted, exhausted_at })
}

/// Sorted prime-power jumps with prefix sums for `ψ`, `ϑ`, `π`, `Π`.
#[derive(Clone, Debug)]
pub struct ChebyshevIndex {
    limit: f64,
    primes: Vec<f64>,
    theta_prefix: Vec<f64>,
    jumps: Vec<f64>,
    jump_log: Vec<f64>,
    psi_prefix: Vec<f64>,
    big_pi_prefix: Vec<f64>,
}

impl ChebyshevIndex {
    /// Indexes all prime powers `p^k ≤ limit` (`limit ≤ x_max`).
    pub fn new(ps: &PrimeSystem, limit: f64) -> Result<Self> {
        if limit > ps.x_max {
            return domain(format!("index limit {limit:e} exceeds x_max = {:e}", ps.x_max));
        }
        let primes: Vec<f64> = ps.primes()[..ps.count_up_to(limit)].to_vec();
        let mut theta_prefix = Vec::with_capacity(primes.len() + 1);
        let mut acc = CompensatedSum::new();
        theta_prefix.push(0.0);
        for &p in &primes {
            acc.add(p.ln());
            theta_prefix.push(acc.value());
        }
        let mut raw: Vec<(f64, f64, u32)> = Vec::new();
        for &p in &primes {
            let lp = p.ln();
            let mut k = 1u32;
            let mut v = p;
            while v <= limit {
                raw.push((v, lp, k));
                k += 1;
                v = p.powi(k as i32);
            }
        }
        raw.par_sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)).then(a.1.total_cmp(&b.1)));
        let mut jumps = Vec::with_capacity(raw.len());
        let mut jump_log = Vec::with_capacity(raw.len());
        let mut psi_prefix = Vec::with_capacity(raw.len() + 1);
        let mut big_pi_prefix = Vec::with_capacity(raw.len() + 1);
        psi_prefix.push(0.0);
        big_pi_prefix.push(0.0);
        let mut psi = CompensatedSum::new();
        let mut big_pi = CompensatedSum::new();
        for (v, lp, k) in raw {
            jumps.push(v);
            jump_log.push(lp);
            psi.add(lp);
            big_pi.add(1.0 / f64::from(k));
            psi_prefix.push(psi.value());
            big_pi_prefix.push(big_pi.value());
        }
        Ok(Self { limit, primes, theta_prefix, jumps, jump_log, psi_prefix, big_pi_prefix })
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    fn check(&self, x: f64) -> Result<()> {
        if x > self.limit {
            return domain(format!("x = {x:e} beyond the indexed range {:e}", self.limit));
        }
        Ok(())
    }

    /// `ψ(x)`.
    pub fn psi(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.psi_prefix[self.jumps.partition_point(|&v| v <= x)])
    }

    /// `ψ(x⁻)`.
    pub fn psi_left(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.psi_prefix[self.jumps.partition_point(|&v| v < x)])
    }

    /// `ϑ(x)`.
    pub fn theta(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.theta_prefix[self.primes.partition_point(|&p| p <= x)])
    }

    /// `π_P(x)`.
    pub fn pi(&self, x: f64) -> Result<usize> {
        self.check(x)?;
        Ok(self.primes.partition_point(|&p| p <= x))
    }

    /// `Π(x) = Σ_n π_P(x^{1/n})/n`.
    pub fn big_pi(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.big_pi_prefix[self.jumps.partition_point(|&v| v <= x)])
    }

    /// `Δ(x) = ψ(x) − x`.
    pub fn delta(&self, x: f64) -> Result<f64> {
        Ok(self.psi(x)? - x)
    }

    /// Jump locations of `ψ` (prime powers, ascending, with repeats).
    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    /// `log p` of each jump.
    pub fn jump_logs(&self) -> &[f64] {
        &self.jump_log
    }

    /// `ψ` just after each jump (prefix sums without the leading zero).
    pub fn psi_after(&self, i: usize) -> f64 {
        self.psi_prefix[i + 1]
    }

    pub fn primes(&self) -> &[f64] {
        &self.primes
    }
}

/// Tables of `N`, `ψ`, `ϑ`, `Π`, `Δ` on a grid, with optional Axiom A fit.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryTables {
    pub grid: Vec<f64>,
    pub n: Option<Vec<u64>>,
    pub psi: Vec<f64>,
    pub theta: Vec<f64>,
    pub pi: Vec<u64>,
    pub big_pi: Vec<f64>,
    pub delta: Vec<f64>,
    pub fit: Option<AxiomAFit>,
}

/// Chebyshev functions of `ps` at every grid point.
pub fn chebyshev_tables(ps: &PrimeSystem, grid: &[f64]) -> Result<SummaryTables> {
    let top = grid.iter().copied().fold(1.0f64, f64::max);
    if top > ps.x_max {
        return domain(format!("grid point {top:e} is beyond x_max = {:e}; primes there are unknown", ps.x_max));
    }
    let index = ChebyshevIndex::new(ps, top)?;
    tables_from_index(&index, grid)
}

pub fn tables_from_index(index: &ChebyshevIndex, grid: &[f64]) -> Result<SummaryTables> {
    let rows: Vec<(f64, f64, u64, f64)> = grid
        .par_iter()
        .map(|&x| Ok((index.psi(x)?, index.theta(x)?, index.pi(x)? as u64, index.big_pi(x)?)))
        .collect::<Result<_>>()?;
    Ok(SummaryTables {
        grid: grid.to_vec(),
        n: None,
        psi: rows.iter().map(|r| r.0).collect(),
        theta: rows.iter().map(|r| r.1).collect(),
        pi: rows.iter().map(|r| r.2).collect(),
        big_pi: rows.iter().map(|r| r.3).collect(),
        delta: rows.iter().zip(grid).map(|(r, &x)| r.0 - x).collect(),
        fit: None,
    })
}

/// Geometric grid `x_lo, x_lo·q, …` up to and including `x_hi`.
pub fn geometric_grid(x_lo: f64, x_hi: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(ratio > 1.0) || !(x_lo > 0.0) || !(x_hi >= x_lo) {
        return domain(format!("geometric grid needs ratio > 1 and 0 < x_lo ≤ x_hi (got {x_lo}, {x_hi}, {ratio})"));
    }
    let steps = ((x_hi / x_lo).ln() / ratio.ln()).floor() as usize;
    let mut g: Vec<f64> = (0..=steps).map(|k| x_lo * ratio.powi(k as i32)).filter(|&x| x <= x_hi).collect();
    if g.last().is_none_or(|&l| l < x_hi * (1.0 - 1e-12)) {
        g.push(x_hi);
    }
    Ok(g)
}

/// Fitted Axiom A parameters `N(x) ≈ κ(x−1) + R(x)`, `|R| ≤ A x^θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomAFit {
    pub kappa_hat: f64,
    pub theta_hat: f64,
    pub a_hat: f64,
    /// `R ≡ 0` on the grid; `theta_hat` is reported as 0.
    pub degenerate: bool,
}

/// Weighted least squares for `N ≈ κ(x−1) + c·x^θ` at fixed `θ`; returns
/// `(κ, c, weighted residual sum of squares)`.
fn fit_at(xs: &[f64], ns: &[f64], theta: f64) -> Option<(f64, f64, f64)> {
    let (mut saa, mut sab, mut sbb, mut say, mut sby) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &n) in xs.iter().zip(ns) {
        // Weights x^{−1} keep the objective comparable across θ.
        let w = 1.0 / x;
        let a = x - 1.0;
        let b = x.powf(theta);
        saa += w * a * a;
        sab += w * a * b;
        sbb += w * b * b;
        say += w * a * n;
        sby += w * b * n;
    }
    let det = saa * sbb - sab * sab;
    if !(det.abs() > 1e-14 * saa * sbb) {
        return None;
    }
    let kappa = (say * sbb - sby * sab) / det;
    let c = (saa * sby - sab * say) / det;
    let ssr = xs.iter().zip(ns).map(|(&x, &n)| (n - kappa * (x - 1.0) - c * x.powf(theta)).powi(2) / x).sum();
    Some((kappa, c, ssr))
}

/// Fits `κ̂`, `θ̂`, `Â`.
///
/// `θ̂` minimizes the residual of the two-parameter fit `N ≈ κ(x−1) + c·x^θ`
/// (profile over a θ grid on `[0.02, 0.98]`, then golden refinement); `κ̂` is
/// the fitted `κ` there and `Â = max |N − κ̂(x−1)|/x^θ̂`. When the
/// through-origin slope already explains `N` exactly, the fit is degenerate.
pub fn axiom_a_fit(counts: &IntegerCounts) -> Result<AxiomAFit> {
    let pts: Vec<(f64, f64)> =
        counts.grid.iter().zip(&counts.n_values).filter(|(&x, _)| x > 1.0).map(|(&x, &n)| (x, n as f64)).collect();
    if pts.len() < 4 {
        return domain("Axiom A fit needs at least four grid points above 1");
    }
    let (x_lo, x_hi) = (pts[0].0, pts[pts.len() - 1].0);
    if (x_hi / x_lo).log10() < 3.0 - 1e-9 {
        return domain(format!("Axiom A fit needs a grid spanning three decades, got [{x_lo:e}, {x_hi:e}]"));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ns: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let top: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] >= x_hi / 10.0).collect();
    let num: f64 = top.iter().map(|&i| ns[i] * (xs[i] - 1.0)).sum();
    let den: f64 = top.iter().map(|&i| (xs[i] - 1.0) * (xs[i] - 1.0)).sum();
    let kappa0 = num / den;
    let residual = |k: f64| -> Vec<f64> { xs.iter().zip(&ns).map(|(&x, &n)| n - k * (x - 1.0)).collect() };
    let scale = ns.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    if residual(kappa0).iter().all(|r| r.abs() <= 1e-9 * scale) {
        return Ok(AxiomAFit { kappa_hat: kappa0, theta_hat: 0.0, a_hat: 0.0, degenerate: true });
    }
    let ssr = |t: f64| fit_at(&xs, &ns, t).map_or(f64::INFINITY, |f| f.2);
    let grid: Vec<f64> = (0..=96).map(|k| 0.02 + 0.01 * k as f64).collect();
    let best = grid.iter().copied().min_by(|a, b| ssr(*a).total_cmp(&ssr(*b))).expect("nonempty grid");
    let (mut a, mut b) = ((best - 0.01).max(0.0), (best + 0.01).min(0.999));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-7 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if ssr(c) <= ssr(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let theta = 0.5 * (a + b);
    let kappa = fit_at(&xs, &ns, theta).map_or(kappa0, |f| f.0);
    let r = residual(kappa);
    let a_hat = xs.iter().zip(&r).map(|(&x, &v)| v.abs() / x.powf(theta)).fold(0.0, f64::max);
    Ok(AxiomAFit { kappa_hat: kappa, theta_hat: theta, a_hat, degenerate: false })
}
