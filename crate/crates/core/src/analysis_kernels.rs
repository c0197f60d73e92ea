//! Auxiliary analytic lemmas: Gaussian line integral, three elementary
//! estimates, and the modified Cassels power-sum maximum.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::numeric::erfc;
use crate::quad::{integrate, integrate_pieces, QuadOptions};

/// Closed form of `(1/2πi) ∫_{(c)} exp(a s² + b s) ds = exp(−b²/4a) / (2√(πa))`.
pub fn gaussian_line_integral(a: f64, b: Complex64) -> Result<Complex64> {
    if !(a > 0.0) || !a.is_finite() {
        return domain(format!("gaussian_line_integral needs a > 0, got {a}"));
    }
    Ok((-b * b / (4.0 * a)).exp() / (2.0 * (PI * a).sqrt()))
}

/// Direct quadrature of the same line integral along `Re s = c`,
/// truncated at `|Im s| = 40/√a`.
pub fn gaussian_line_quadrature(a: f64, b: Complex64, c: f64) -> Result<Complex64> {
    if !(a > 0.0) {
        return domain(format!("gaussian_line_quadrature needs a > 0, got {a}"));
    }
    let t_max = 40.0 / a.sqrt();
    let integrand = |t: f64| {
        let s = Complex64::new(c, t);
        (a * s * s + b * s).exp()
    };
    // Split into unit-width pieces in the scaled variable so that panels
    // resolve both the Gaussian envelope and the oscillation from Im b.
    let pieces = 80usize.max((t_max * (1.0 + b.norm() + c.abs())).ceil() as usize);
    let breaks: Vec<f64> = (0..=pieces).map(|k| -t_max + 2.0 * t_max * k as f64 / pieces as f64).collect();
    let r = integrate_pieces(integrand, &breaks, QuadOptions::new(1e-18, 1e-13))?;
    Ok(r.value / (2.0 * PI))
}

/// One grid point of the estimate lemma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EstimateCheck {
    /// `∫_B^∞ e^{−x²} dx < e^{−B²}` for `B ≥ 1/2`.
    GaussianTail { b: f64 },
    /// `log^λ x ≤ e^{λ/α+λ²} x^α` for `λ ≥ 1`, `0 < α < 1`, `x ≥ 1`.
    LogPower { lambda: f64, alpha: f64, x: f64 },
    /// `∫ |cos(Py+R)| e^{−y²} dy ≤ 2/√π + 2π/P` for `P > 0`.
    CosineGaussian { p: f64, r: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateOutcome {
    pub check: EstimateCheck,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub holds: bool,
    /// Set when the point lies outside the stated domain and was skipped.
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub outcomes: Vec<EstimateOutcome>,
    pub all_hold: bool,
}

fn tail_lhs(b: f64) -> f64 {
    // ∫_B^∞ e^{−x²} dx = (√π/2) erfc(B)
    0.5 * PI.sqrt() * erfc(b)
}

fn cosine_gaussian_lhs(p: f64, r: f64) -> Result<f64> {
    // The weight is below 1e-35 outside |y| ≤ 9; split at the kinks of |cos|.
    let lim = 9.0;
    let mut breaks = vec![-lim];
    let k_lo = ((p * -lim + r) / PI - 0.5).ceil() as i64;
    let k_hi = ((p * lim + r) / PI - 0.5).floor() as i64;
    if k_hi - k_lo < 20_000 {
        for k in k_lo..=k_hi {
            let y = ((k as f64 + 0.5) * PI - r) / p;
            if y > -lim && y < lim {
                breaks.push(y);
            }
        }
    }
    breaks.push(lim);
    breaks.dedup();
    let r = integrate_pieces(|y: f64| (p * y + r).cos().abs() * (-y * y).exp(), &breaks, QuadOptions::new(1e-14, 1e-12))?;
    Ok(r.value)
}

fn evaluate(check: EstimateCheck) -> EstimateOutcome {
    let skipped = |why: String| EstimateOutcome { check, lhs: None, rhs: None, holds: false, flag: Some(why) };
    match check {
        EstimateCheck::GaussianTail { b } => {
            if !(b >= 0.5) {
                return skipped(format!("B = {b} is below 1/2"));
            }
            let lhs = tail_lhs(b);
            let rhs = (-b * b).exp();
            EstimateOutcome { check, lhs: Some(lhs), rhs: Some(rhs), holds: lhs < rhs, flag: None }
        }
        EstimateCheck::LogPower { lambda, alpha, x } => {
            if !(lambda >= 1.0) || !(alpha > 0.0 && alpha < 1.0) || !(x >= 1.0) {
                return skipped(format!("(λ, α, x) = ({lambda}, {alpha}, {x}) outside λ ≥ 1, 0 < α < 1, x ≥ 1"));
            }
            let lhs = x.ln().powf(lambda);
            let rhs = (lambda / alpha + lambda * lambda).exp() * x.powf(alpha);
            EstimateOutcome { check, lhs: Some(lhs), rhs: Some(rhs), holds: lhs <= rhs, flag: None }
        }
        EstimateCheck::CosineGaussian { p, r } => {
            if !(p > 0.0) || !r.is_finite() {
                return skipped(format!("P = {p} must be positive"));
            }
            match cosine_gaussian_lhs(p, r) {
                Ok(lhs) => {
                    let rhs = 2.0 / PI.sqrt() + 2.0 * PI / p;
                    EstimateOutcome { check, lhs: Some(lhs), rhs: Some(rhs), holds: lhs <= rhs, flag: None }
                }
                Err(e) => skipped(format!("quadrature failed: {e}")),
            }
        }
    }
}

/// Evaluates both sides of each estimate at every grid point.
pub fn verify_estimate_bounds(grid: &[EstimateCheck]) -> EstimateReport {
    let outcomes: Vec<EstimateOutcome> = grid.par_iter().map(|&c| evaluate(c)).collect();
    let all_hold = outcomes.iter().all(|o| o.holds && o.flag.is_none());
    EstimateReport { outcomes, all_hold }
}

/// A modest grid covering all three estimates.
pub fn default_estimate_grid() -> Vec<EstimateCheck> {
    let mut grid = Vec::new();
    for b in [0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0] {
        grid.push(EstimateCheck::GaussianTail { b });
    }
    for lambda in [1.0, 1.5, 2.0, 4.0] {
        for alpha in [0.1, 0.5, 0.9] {
            for x in [1.0, 2.0, 10.0, 1e3, 1e8, 1e30] {
                grid.push(EstimateCheck::LogPower { lambda, alpha, x });
            }
        }
    }
    for p in [0.1, 0.5, 1.0, 2.0 * PI, 10.0, 100.0] {
        for r in [0.0, FRAC_1_SQRT_2, 1.5, -2.0] {
            grid.push(EstimateCheck::CosineGaussian { p, r });
        }
    }
    grid
}

/// `k` unit terms plus conjugate pairs `w, w̄`, window start `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumInstance {
    pub k: u32,
    pub pairs: Vec<Complex64>,
    pub h: f64,
}

impl PowerSumInstance {
    pub fn new(k: u32, pairs: Vec<Complex64>, h: f64) -> Result<Self> {
        if k == 0 {
            return domain("power-sum instance needs k ≥ 1 unit terms");
        }
        if !(h > 0.0) || !h.is_finite() {
            return domain(format!("window start H must be positive, got {h}"));
        }
        if pairs.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return domain("pair entries must be finite");
        }
        Ok(Self { k, pairs, h })
    }

    pub fn term_count(&self) -> usize {
        self.k as usize + 2 * self.pairs.len()
    }

    /// Window `[H, (2n+1)H]`.
    pub fn window(&self) -> (f64, f64) {
        (self.h, (2 * self.pairs.len() + 1) as f64 * self.h)
    }

    /// `Re Σ r^L e^{iαL}` with principal arguments.
    pub fn real_part(&self, l: f64) -> f64 {
        let mut s = self.k as f64;
        for w in &self.pairs {
            let r = w.norm();
            if r == 0.0 {
                continue;
            }
            s += 2.0 * r.powf(l) * (w.arg() * l).cos();
        }
        s
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-13 * (1.0 + a.abs()) {
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
    let x = 0.5 * (a + b);
    (f(x), x)
}

/// Maximum of the power sum over `L ∈ [H, (2n+1)H]`: uniform grid of
/// `grid_density` points per unit `L`, then golden-section refinement
/// around the three best grid points. Returns `(value, argmax_L)`.
pub fn cassels_max(inst: &PowerSumInstance, grid_density: u32) -> Result<(f64, f64)> {
    if grid_density < 64 {
        return domain(format!("grid density must be at least 64 points per unit L, got {grid_density}"));
    }
    let (lo, hi) = inst.window();
    if hi == lo {
        return Ok((inst.real_part(lo), lo));
    }
    let n = ((hi - lo) * grid_density as f64).ceil() as usize + 1;
    let step = (hi - lo) / (n - 1) as f64;
    let values: Vec<f64> = (0..n).into_par_iter().map(|i| inst.real_part(lo + step * i as f64)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut best = (values[order[0]], lo + step * order[0] as f64);
    let f = |l: f64| inst.real_part(l);
    for &i in order.iter().take(3) {
        let a = lo + step * i.saturating_sub(1) as f64;
        let b = (lo + step * (i + 1).min(n - 1) as f64).min(hi);
        let (v, x) = golden_max(&f, a, b);
        if v > best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Cassels statistic over many instances: smallest `value − k`.
pub fn cassels_min_margin(instances: &[PowerSumInstance], grid_density: u32) -> Result<f64> {
    let mut margin = f64::INFINITY;
    for inst in instances {
        let (v, _) = cassels_max(inst, grid_density)?;
        margin = margin.min(v - inst.k as f64);
    }
    Ok(margin)
}

/// Seeded random instances with `k ≤ 4`, up to six pairs,
/// `r ∈ [0.2, 1]`, `α ∈ [−π, π]`, `H ∈ [0.5, 10]`.
pub fn random_power_sum_instances(count: usize, seed: u64) -> Vec<PowerSumInstance> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=4u32);
            let n = rng.random_range(0..=6usize);
            let pairs = (0..n)
                .map(|_| {
                    let r = rng.random_range(0.2..=1.0);
                    let a: f64 = rng.random_range(-PI..=PI);
                    Complex64::from_polar(r, a)
                })
                .collect();
            let h = rng.random_range(0.5..=10.0);
            PowerSumInstance { k, pairs, h }
        })
        .collect()
}

/// Convenience wrapper used by the self-check report.
pub fn gaussian_tail(b: f64) -> Result<f64> {
    let r = integrate(|x: f64| (-x * x).exp(), b, b + 40.0, QuadOptions::new(1e-300, 1e-13))?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_rejects_nonpositive_a() {
        assert!(gaussian_line_integral(0.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(gaussian_line_integral(-1.0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn tail_closed_form_matches_quadrature() {
        for b in [0.5, 1.0, 2.5] {
            let q = gaussian_tail(b).unwrap();
            assert!((q - tail_lhs(b)).abs() < 1e-14, "B = {b}");
        }
    }

    #[test]
    fn empty_instance_rejected() {
        assert!(PowerSumInstance::new(0, vec![], 1.0).is_err());
    }

    #[test]
    fn coarse_grid_rejected() {
        let inst = PowerSumInstance::new(1, vec![], 1.0).unwrap();
        assert!(cassels_max(&inst, 10).is_err());
    }
}
