//! Sparse odd sine polynomials `S(y) = 2 Σ sin((2n_k+1)y)/(2n_k+1)` and
//! their sup-norm certification.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::numeric::CompensatedSum;

/// Minimum grid points per unit of top frequency.
pub const NYQUIST_FACTOR: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct SinePolynomial {
    indices: Vec<u32>,
    certified_norm: Option<f64>,
    certification_grid: usize,
}

impl SinePolynomial {
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.first() != Some(&0) {
            return domain("sine polynomial must contain the fundamental index 0 first");
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return domain("sine polynomial indices must be strictly increasing");
        }
        Ok(Self { indices, certified_norm: None, certification_grid: 0 })
    }

    /// Consecutive partial sum with indices `0..terms`.
    pub fn consecutive(terms: u32) -> Self {
        Self { indices: (0..terms.max(1)).collect(), certified_norm: None, certification_grid: 0 }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn certified_norm(&self) -> Option<f64> {
        self.certified_norm
    }

    pub fn certification_grid(&self) -> usize {
        self.certification_grid
    }

    /// Number of terms minus one (the `N` of the sum).
    pub fn degree(&self) -> usize {
        self.indices.len() - 1
    }

    /// Largest frequency `2n_N + 1`.
    pub fn top_frequency(&self) -> u64 {
        2 * u64::from(*self.indices.last().expect("nonempty")) + 1
    }

    /// Smallest grid accepted by [`SinePolynomial::sup_norm`].
    pub fn min_grid(&self) -> usize {
        NYQUIST_FACTOR * self.top_frequency() as usize
    }

    pub fn eval(&self, y: f64) -> f64 {
        let mut s = CompensatedSum::new();
        for &n in &self.indices {
            let m = f64::from(2 * n + 1);
            s.add((m * y).sin() / m);
        }
        2.0 * s.value()
    }

    fn curvature_bound(&self) -> f64 {
        2.0 * self.indices.iter().map(|&n| f64::from(2 * n + 1)).sum::<f64>()
    }

    /// Refined maximum of `|S|` over `[0, π/2]` using `grid` points; stores it
    /// as the certified norm.
    pub fn sup_norm(&mut self, grid: usize) -> Result<f64> {
        let norm = self.certify(grid)?;
        self.certified_norm = Some(norm);
        self.certification_grid = grid;
        Ok(norm)
    }

    /// Same as [`SinePolynomial::sup_norm`] without storing the result.
    pub fn certify(&self, grid: usize) -> Result<f64> {
        if grid < self.min_grid() {
            return Err(Error::GridTooCoarse(format!(
                "{grid} points on [0, π/2] for top frequency {}; need at least {}",
                self.top_frequency(),
                self.min_grid()
            )));
        }
        let h = FRAC_PI_2 / (grid - 1) as f64;
        let values: Vec<f64> = (0..grid).into_par_iter().map(|j| self.eval(h * j as f64).abs()).collect();
        let grid_max = values.iter().copied().fold(0.0, f64::max);
        let slack = self.curvature_bound() * h * h / 8.0;
        let mut best = grid_max;
        let candidates: Vec<usize> = (0..grid)
            .filter(|&j| {
                let left = if j > 0 { values[j - 1] } else { f64::NEG_INFINITY };
                let right = if j + 1 < grid { values[j + 1] } else { f64::NEG_INFINITY };
                values[j] >= left && values[j] >= right && values[j] >= grid_max - 2.0 * slack
            })
            .collect();
        let refined: Vec<f64> = candidates
            .par_iter()
            .map(|&j| {
                let a = h * j.saturating_sub(1) as f64;
                let b = (h * (j + 1) as f64).min(FRAC_PI_2);
                golden_max(|y| self.eval(y).abs(), a, b)
            })
            .collect();
        for v in refined {
            best = best.max(v);
        }
        Ok(best)
    }

    /// Text record `indices=<list>; norm=<value>; grid=<points>`.
    pub fn to_record(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SinePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.indices.iter().map(u32::to_string).collect();
        let norm = match self.certified_norm {
            Some(v) => format!("{v:?}"),
            None => "none".to_string(),
        };
        write!(f, "indices={}; norm={}; grid={}", list.join(","), norm, self.certification_grid)
    }
}

impl FromStr for SinePolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut indices = None;
        let mut norm = None;
        let mut grid = None;
        for field in s.trim().split(';') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("field without '=' in sine record: {field:?}")))?;
            let value = value.trim();
            match key.trim() {
                "indices" => {
                    let list: std::result::Result<Vec<u32>, _> = value.split(',').map(|v| v.trim().parse()).collect();
                    indices = Some(list.map_err(|e| Error::Format(format!("bad index list {value:?}: {e}")))?);
                }
                "norm" => {
                    norm = Some(if value == "none" {
                        None
                    } else {
                        Some(value.parse::<f64>().map_err(|e| Error::Format(format!("bad norm {value:?}: {e}")))?)
                    });
                }
                "grid" => {
                    grid = Some(value.parse::<usize>().map_err(|e| Error::Format(format!("bad grid {value:?}: {e}")))?);
                }
                other => return Err(Error::Format(format!("unknown sine record field {other:?}"))),
            }
        }
        let mut poly = SinePolynomial::new(indices.ok_or_else(|| Error::Format("sine record lacks indices".into()))?)?;
        poly.certified_norm = norm.unwrap_or(None);
        poly.certification_grid = grid.unwrap_or(0);
        Ok(poly)
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-14 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(0.5 * (a + b)))
}

fn smooth_odd(mut m: u64, p: u64) -> bool {
    let mut q = 3;
    while q <= p && m > 1 {
        while m.is_multiple_of(q) {
            m /= q;
        }
        q += 2;
    }
    m == 1
}

/// Frequencies `m ≤ 2N+1` that are odd and `P`-smooth, as indices `(m−1)/2`.
pub fn smooth_index_polynomial(p: u32, n: u32) -> Result<SinePolynomial> {
    if p < 3 || n < 1 {
        return domain(format!("smooth_index_polynomial needs P ≥ 3 and N ≥ 1, got P={p}, N={n}"));
    }
    let top = 2 * u64::from(n) + 1;
    let indices = (1..=top)
        .step_by(2)
        .filter(|&m| smooth_odd(m, u64::from(p)))
        .map(|m| ((m - 1) / 2) as u32)
        .collect();
    SinePolynomial::new(indices)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    Smooth,
    Anneal,
}

impl FromStr for SearchStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "smooth" => Ok(Self::Smooth),
            "anneal" => Ok(Self::Anneal),
            other => Err(Error::Format(format!("unknown search strategy {other:?} (expected smooth or anneal)"))),
        }
    }
}

impl fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Smooth => "smooth",
            Self::Anneal => "anneal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Success { poly: SinePolynomial, evaluations: u64 },
    Failure { best: Option<SinePolynomial>, target: f64, evaluations: u64 },
}

impl SearchOutcome {
    pub fn polynomial(&self) -> Option<&SinePolynomial> {
        match self {
            Self::Success { poly, .. } => Some(poly),
            Self::Failure { best, .. } => best.as_ref(),
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success { .. })
    }
}

/// Grid used when certifying search results.
pub fn certification_grid_for(poly: &SinePolynomial) -> usize {
    4 * poly.min_grid()
}

struct Tracker {
    target: f64,
    budget: u64,
    evaluations: u64,
    best: Option<SinePolynomial>,
}

impl Tracker {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    /// Certifies a candidate; counts as one evaluation.
    fn certify(&mut self, indices: Vec<u32>) -> Result<Option<SinePolynomial>> {
        self.evaluations += 1;
        let mut poly = SinePolynomial::new(indices)?;
        let grid = certification_grid_for(&poly);
        let norm = poly.sup_norm(grid)?;
        let better = self.best.as_ref().and_then(|b| b.certified_norm).is_none_or(|b| norm < b);
        if better {
            self.best = Some(poly.clone());
        }
        Ok((norm <= self.target).then_some(poly))
    }

    fn finish(self) -> SearchOutcome {
        SearchOutcome::Failure { best: self.best, target: self.target, evaluations: self.evaluations }
    }
}

/// Searches for a polynomial with certified norm `≤ π/2 + ε`. The budget
/// counts objective evaluations; exhausting it yields an explicit failure.
pub fn search_low_norm(epsilon: f64, strategy: SearchStrategy, seed: u64, budget: u64) -> Result<SearchOutcome> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return domain(format!("epsilon must lie in (0, 0.5), got {epsilon}"));
    }
    let mut tracker = Tracker { target: FRAC_PI_2 + epsilon, budget, evaluations: 0, best: None };
    match strategy {
        SearchStrategy::Smooth => smooth_search(&mut tracker)?,
        SearchStrategy::Anneal => anneal_search(&mut tracker, seed)?,
    }
    Ok(match tracker.best.take() {
        Some(p) if p.certified_norm.is_some_and(|n| n <= tracker.target) => {
            SearchOutcome::Success { poly: p, evaluations: tracker.evaluations }
        }
        best => {
            tracker.best = best;
            tracker.finish()
        }
    })
}

fn odd_primes_up_to(limit: u32) -> Vec<u32> {
    (3..=limit).step_by(2).filter(|&q| (3..q).step_by(2).take_while(|d| d * d <= q).all(|d| q % d != 0)).collect()
}

fn smooth_search(t: &mut Tracker) -> Result<()> {
    let cutoffs: Vec<u32> = (3..=12).map(|k| 1u32 << k).collect();
    for p in odd_primes_up_to(199) {
        for &n in &cutoffs {
            if t.exhausted() {
                return Ok(());
            }
            let poly = smooth_index_polynomial(p, n)?;
            if t.certify(poly.indices.clone())?.is_some() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Toggle annealing on a fixed grid table for one index cap.
struct AnnealTable {
    rows: Vec<Vec<f64>>,
}

impl AnnealTable {
    fn new(n_max: u32) -> Self {
        let grid = NYQUIST_FACTOR * (2 * n_max as usize + 1);
        let h = FRAC_PI_2 / (grid - 1) as f64;
        let rows = (0..=n_max)
            .map(|k| {
                let m = f64::from(2 * k + 1);
                (0..grid).map(|j| 2.0 * (m * h * j as f64).sin() / m).collect()
            })
            .collect();
        Self { rows }
    }

    fn sum(&self, chosen: &[bool]) -> Vec<f64> {
        let mut s = vec![0.0; self.rows[0].len()];
        for (k, row) in self.rows.iter().enumerate() {
            if chosen[k] {
                for (a, b) in s.iter_mut().zip(row) {
                    *a += b;
                }
            }
        }
        s
    }
}

fn anneal_search(t: &mut Tracker, seed: u64) -> Result<()> {
    const CAPS: [u32; 6] = [10, 14, 20, 28, 40, 56];
    const SWEEP: u64 = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round = 0usize;
    while !t.exhausted() {
        let n_max = CAPS[round % CAPS.len()];
        round += 1;
        let table = AnnealTable::new(n_max);
        let mut chosen: Vec<bool> = (0..=n_max).map(|k| k == 0 || rng.random_bool(0.5)).collect();
        let mut cur = table.sum(&chosen);
        let objective = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut cur_obj = objective(&cur);
        t.evaluations += 1;
        let steps = SWEEP.min(t.budget.saturating_sub(t.evaluations));
        let (t0, t1) = (0.02f64, 1e-5f64);
        let mut best_obj = f64::INFINITY;
        let mut trial = vec![0.0; cur.len()];
        for step in 0..steps {
            let temp = t0 * (t1 / t0).powf(step as f64 / steps.max(1) as f64);
            let k = rng.random_range(1..=n_max) as usize;
            let sign = if chosen[k] { -1.0 } else { 1.0 };
            for ((o, c), r) in trial.iter_mut().zip(&cur).zip(&table.rows[k]) {
                *o = c + sign * r;
            }
            let obj = objective(&trial);
            t.evaluations += 1;
            let accept = obj <= cur_obj || rng.random::<f64>() < ((cur_obj - obj) / temp).exp();
            if accept {
                chosen[k] = !chosen[k];
                std::mem::swap(&mut cur, &mut trial);
                cur_obj = obj;
                if step % 4096 == 0 {
                    cur = table.sum(&chosen);
                }
                if cur_obj < best_obj - 1e-12 && cur_obj <= t.target {
                    best_obj = cur_obj;
                    let indices: Vec<u32> = (0..=n_max).filter(|&k| chosen[k as usize]).collect();
                    if t.certify(indices)?.is_some() {
                        return Ok(());
                    }
                }
            }
            if t.exhausted() {
                break;
            }
        }
        if best_obj == f64::INFINITY && !t.exhausted() {
            // Record the round's end state so a failure report has a best candidate.
            let indices: Vec<u32> = (0..=n_max).filter(|&k| chosen[k as usize]).collect();
            if t.certify(indices)?.is_some() {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Certified norm of the consecutive partial sum with `terms` terms.
pub fn gibbs_norm(terms: u32) -> Result<f64> {
    let mut p = SinePolynomial::consecutive(terms);
    let grid = 4 * p.min_grid();
    p.sup_norm(grid)
}

/// Value of the limiting square wave, `π/2`, for reference in reports.
pub const SQUARE_WAVE_LEVEL: f64 = PI / 2.0;
