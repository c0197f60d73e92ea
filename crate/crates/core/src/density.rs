//! Target density: `f₀(x) = x + x^r/r + 2M√x − Σ x^ρ/ρ` and the smoothed
//! counting function `F(x) = ∫₁ˣ (1−1/y)/log y · df₀(y)`.

use std::fmt::Write as _;
use std::sync::RwLock;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::numeric::{CompensatedSum, ComplexSum};
use crate::quad::{integrate, QuadOptions};

/// A prescribed zero `β + iγ` (stored with `γ ≥ 0`; the conjugate is implied).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
    pub mult: u32,
}

impl Zero {
    pub fn new(beta: f64, gamma: f64, mult: u32) -> Self {
        Self { beta, gamma: gamma.abs(), mult }
    }

    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }

    pub fn is_real(&self) -> bool {
        self.gamma == 0.0
    }

    /// Multiplicity counted over the conjugate-closed multiset.
    pub fn expanded_count(&self) -> u32 {
        if self.is_real() {
            self.mult
        } else {
            2 * self.mult
        }
    }

    /// `weight · Re f(ρ)` summed over `ρ` and `ρ̄`, for `f` with `f(ρ̄) = conj f(ρ)`.
    fn real_sum(&self, value: Complex64) -> f64 {
        if self.is_real() {
            f64::from(self.mult) * value.re
        } else {
            2.0 * f64::from(self.mult) * value.re
        }
    }
}

/// Conjugate-closed multiset of prescribed zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroSpec {
    zeros: Vec<Zero>,
}

impl ZeroSpec {
    pub fn new(zeros: Vec<Zero>) -> Result<Self> {
        let mut merged: Vec<Zero> = Vec::new();
        for z in zeros {
            let z = Zero::new(z.beta, z.gamma, z.mult);
            if !(z.beta > 0.5 && z.beta < 1.0) {
                return domain(format!("zero real part must lie in (1/2, 1), got {}", z.beta));
            }
            if !z.gamma.is_finite() {
                return domain("zero imaginary part must be finite");
            }
            if z.mult == 0 {
                return domain("zero multiplicity must be positive");
            }
            match merged.iter_mut().find(|m| m.beta == z.beta && m.gamma == z.gamma) {
                Some(m) => m.mult += z.mult,
                None => merged.push(z),
            }
        }
        merged.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
        Ok(Self { zeros: merged })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// `N`: total multiplicity over the expanded multiset.
    pub fn total_multiplicity(&self) -> u32 {
        self.zeros.iter().map(Zero::expanded_count).sum()
    }

    /// `B`: largest real part.
    pub fn max_beta(&self) -> Option<f64> {
        self.zeros.iter().map(|z| z.beta).reduce(f64::max)
    }

    pub fn max_gamma(&self) -> f64 {
        self.zeros.iter().map(|z| z.gamma).fold(0.0, f64::max)
    }

    /// Expanded multiset as `(ρ, multiplicity)` with both conjugates listed.
    pub fn expanded(&self) -> Vec<(Complex64, u32)> {
        let mut out = Vec::new();
        for z in &self.zeros {
            out.push((z.rho(), z.mult));
            if !z.is_real() {
                out.push((z.rho().conj(), z.mult));
            }
        }
        out
    }

    /// `Σ_{ρ∈S} x^ρ/ρ`, exactly real.
    pub fn power_sum_over_rho(&self, x: f64) -> f64 {
        let lx = x.ln();
        let mut s = CompensatedSum::new();
        for z in &self.zeros {
            let rho = z.rho();
            s.add(z.real_sum((rho * lx).exp() / rho));
        }
        s.value()
    }

    /// `Σ_{ρ∈S} x^{ρ−1}`, exactly real.
    pub fn power_sum_shifted(&self, x: f64) -> f64 {
        let lx = x.ln();
        let mut s = CompensatedSum::new();
        for z in &self.zeros {
            s.add(z.real_sum(((z.rho() - 1.0) * lx).exp()));
        }
        s.value()
    }
}

/// `M₀` for the zero spec, or 1 for the empty spec.
pub fn m_min(zeros: &ZeroSpec) -> Result<u32> {
    match zeros.max_beta() {
        None => Ok(1),
        Some(b) => m0_formula(zeros.total_multiplicity(), b),
    }
}

/// `M₀ = ⌈2N^{1/(2(1−B))}⌉` for `N` zeros (with multiplicity) and `B = max β`.
pub fn m0_formula(n: u32, b: f64) -> Result<u32> {
    if !(0.0..1.0).contains(&b) {
        return domain(format!("largest zero real part B = {b} must lie in [0, 1)"));
    }
    let n = f64::from(n);
    let v = 2.0 * n.powf(1.0 / (2.0 * (1.0 - b)));
    // Snap values that are integers up to rounding noise before taking the ceiling.
    let snapped = if (v - v.round()).abs() <= 1e-9 * v { v.round() } else { v.ceil() };
    if snapped > f64::from(u32::MAX) {
        return domain(format!("M₀ = {v:e} does not fit the supported range"));
    }
    Ok(snapped.max(1.0) as u32)
}

/// Smoothed prime counting density in the log variable `u = log x`.
pub trait PrimeDensity: Sync {
    /// `dF/du` at `u = log x`.
    fn log_density(&self, u: f64) -> f64;

    /// `F(x)`.
    fn cdf(&self, x: f64) -> Result<f64>;

    /// `inf{x : F(x) ≥ level}`.
    fn quantile(&self, level: f64) -> Result<f64>;

    /// Fingerprint of the defining configuration.
    fn fingerprint(&self) -> [u8; 32];

    /// Length scale in `u` below which the density has no oscillation.
    fn panel_width(&self) -> f64 {
        1.0 / 16.0
    }

    /// `∫₁ˣ y^{−it} dF(y)`.
    fn twisted_mass(&self, x: f64, t: f64) -> Result<Complex64> {
        if x < 1.0 {
            return domain(format!("twisted mass needs x ≥ 1, got {x}"));
        }
        let u_hi = x.ln();
        let width = self.panel_width().min(if t != 0.0 { 1.0 / t.abs() } else { f64::INFINITY });
        let pieces = (u_hi / width).ceil().max(1.0) as usize;
        let mut total = ComplexSum::new();
        for k in 0..pieces {
            let a = u_hi * k as f64 / pieces as f64;
            let b = u_hi * (k + 1) as f64 / pieces as f64;
            let r = integrate(
                |u: f64| Complex64::from_polar(self.log_density(u), -t * u),
                a,
                b,
                QuadOptions::new(1e-300, 1e-13),
            )?;
            total.add(r.value);
        }
        Ok(total.value())
    }
}

/// `(1 − e^{−u})/u`, with its series near the removable singularity.
pub fn log_weight(u: f64) -> f64 {
    if u.abs() < 1e-6 {
        1.0 - u / 2.0 + u * u / 6.0
    } else {
        -(-u).exp_m1() / u
    }
}

/// Parameters `(r, S, M)` defining `f₀` and `F`, with a lazily built cache
/// of `F` at panel boundaries in `u = log x`.
#[derive(Debug)]
pub struct TargetDensity {
    r: f64,
    zeros: ZeroSpec,
    m: u32,
    panel: f64,
    cache: RwLock<Vec<f64>>,
}

impl Clone for TargetDensity {
    fn clone(&self) -> Self {
        Self::build(self.r, self.zeros.clone(), self.m)
    }
}

impl PartialEq for TargetDensity {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.zeros == other.zeros && self.m == other.m
    }
}

const U_LIMIT: f64 = 700.0;

impl TargetDensity {
    /// Validated constructor; `m = None` selects `m_min`.
    pub fn new(r: f64, zeros: ZeroSpec, m: Option<u32>) -> Result<Self> {
        if !(0.5..1.0).contains(&r) {
            return domain(format!("r must lie in [1/2, 1), got {r}"));
        }
        if let Some(z) = zeros.zeros().iter().find(|z| z.beta <= r) {
            return domain(format!("zero real part {} must exceed r = {r}", z.beta));
        }
        let floor = m_min(&zeros)?;
        let m = m.unwrap_or(floor);
        if m < floor {
            return domain(format!("M = {m} is below M₀ = {floor}; f₀ would not be monotone"));
        }
        Ok(Self::build(r, zeros, m))
    }

    /// Skips validation; for tests that need e.g. `M = 0`.
    pub fn new_unchecked(r: f64, zeros: ZeroSpec, m: u32) -> Self {
        Self::build(r, zeros, m)
    }

    fn build(r: f64, zeros: ZeroSpec, m: u32) -> Self {
        let g = zeros.max_gamma();
        let panel = if g > 16.0 { 1.0 / g } else { 1.0 / 16.0 };
        Self { r, zeros, m, panel, cache: RwLock::new(vec![0.0]) }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn zeros(&self) -> &ZeroSpec {
        &self.zeros
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn check_x(x: f64) -> Result<()> {
        if !(x >= 1.0) || !x.is_finite() {
            return domain(format!("density evaluated at x = {x}; need finite x ≥ 1"));
        }
        Ok(())
    }

    /// `f₀(x)`.
    pub fn f0(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        let mut s = CompensatedSum::new();
        s.add(x);
        s.add(x.powf(self.r) / self.r);
        s.add(2.0 * f64::from(self.m) * x.sqrt());
        s.add(-self.zeros.power_sum_over_rho(x));
        Ok(s.value())
    }

    /// `f₀'(x)`.
    pub fn f0_prime(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(x.powf(self.r - 1.0));
        s.add(f64::from(self.m) / x.sqrt());
        s.add(-self.zeros.power_sum_shifted(x));
        Ok(s.value())
    }

    /// `x·f₀'(x)` at `x = e^u`.
    fn scaled_f0_prime(&self, u: f64) -> f64 {
        let mut s = CompensatedSum::new();
        s.add(u.exp());
        s.add((self.r * u).exp());
        s.add(f64::from(self.m) * (0.5 * u).exp());
        for z in self.zeros.zeros() {
            s.add(-z.real_sum((z.rho() * u).exp()));
        }
        s.value()
    }

    /// Ensures the panel cache covers `u`; returns the covering index.
    fn ensure_cached(&self, u: f64) -> Result<()> {
        let need = (u / self.panel).floor() as usize + 1;
        if self.cache.read().expect("cache lock").len() > need {
            return Ok(());
        }
        let mut cache = self.cache.write().expect("cache lock");
        let mut acc = CompensatedSum::new();
        acc.add(*cache.last().expect("cache seeded"));
        while cache.len() <= need {
            let k = cache.len() - 1;
            let a = k as f64 * self.panel;
            let b = (k + 1) as f64 * self.panel;
            let r = integrate(|v| self.log_density(v), a, b, QuadOptions::new(1e-300, 1e-13))?;
            acc.add(r.value);
            cache.push(acc.value());
        }
        Ok(())
    }

    fn cached(&self, k: usize) -> f64 {
        self.cache.read().expect("cache lock")[k]
    }

    /// `∫_a^b dF` with limits in `x`.
    fn partial_x(&self, a: f64, b: f64) -> Result<f64> {
        Ok(integrate(|y: f64| self.log_density(y.ln()) / y, a, b, QuadOptions::new(1e-300, 1e-13))?.value)
    }

    /// `F(x)` from cached panel sums plus the partial panel.
    pub fn f_eval(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        let u = x.ln();
        if u > U_LIMIT {
            return domain(format!("x = {x:e} exceeds the supported range"));
        }
        self.ensure_cached(u)?;
        let k = (u / self.panel).floor() as usize;
        let base = self.cached(k);
        let a = (k as f64 * self.panel).exp();
        if a >= x {
            return Ok(base);
        }
        Ok(base + self.partial_x(a, x)?)
    }

    /// `inf{x : F(x) ≥ level}` by safeguarded Newton inside the bracketing
    /// cache panel, to `max(1e-9, 2 ulp(x))`.
    pub fn inverse_f(&self, level: f64) -> Result<f64> {
        if !(level >= 0.0) || !level.is_finite() {
            return domain(format!("quantile level must be finite and nonnegative, got {level}"));
        }
        if level == 0.0 {
            return Ok(1.0);
        }
        // Grow the cache until it brackets the level.
        let mut reach = self.cache.read().expect("cache lock").len() as f64 * self.panel;
        loop {
            let last = *self.cache.read().expect("cache lock").last().expect("seeded");
            if last >= level {
                break;
            }
            if reach > U_LIMIT {
                return domain(format!("level {level} is beyond the supported range of F"));
            }
            reach = (reach * 1.5).max(reach + 1.0);
            self.ensure_cached(reach)?;
        }
        let (k, lo_val, hi_val) = {
            let cache = self.cache.read().expect("cache lock");
            let k = cache.partition_point(|&v| v < level);
            (k, cache[k - 1], cache[k])
        };
        let hi_x = (k as f64 * self.panel).exp();
        if hi_val == level {
            return Ok(hi_x);
        }
        let lo_x = ((k - 1) as f64 * self.panel).exp();
        let target = level - lo_val;
        let (mut a, mut b) = (lo_x, hi_x);
        let mut x = lo_x + (hi_x - lo_x) * (target / (hi_val - lo_val));
        for _ in 0..200 {
            let val = self.partial_x(lo_x, x)? - target;
            if val >= 0.0 {
                b = x;
            } else {
                a = x;
            }
            let slope = self.log_density(x.ln()) / x;
            let tol = 1e-9f64.max(2.0 * f64::EPSILON * x);
            let newton = x - val / slope;
            let next = if slope > 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
            if (next - x).abs() <= tol || b - a <= tol {
                x = next.clamp(a, b);
                break;
            }
            x = next;
        }
        Ok(x)
    }

    /// `ϑ_F(y) = ∫₁^y log t dF(t)` in closed form.
    pub fn theta_model(&self, y: f64) -> Result<f64> {
        Self::check_x(y)?;
        let r = self.r;
        let m = f64::from(self.m);
        let mut s = CompensatedSum::new();
        s.add(self.f0(y)?);
        s.add(-self.f0(1.0)?);
        s.add(-y.ln());
        s.add(-(y.powf(r - 1.0) - 1.0) / (r - 1.0));
        s.add(-2.0 * m * (1.0 - 1.0 / y.sqrt()));
        let ly = y.ln();
        for z in self.zeros.zeros() {
            let rho = z.rho();
            s.add(z.real_sum((((rho - 1.0) * ly).exp() - 1.0) / (rho - 1.0)));
        }
        Ok(s.value())
    }

    /// Empirical Chebyshev constant `max F(x)·log x / x` on a log grid.
    pub fn chebyshev_constant(&self, x_lo: f64, x_hi: f64, points: usize) -> Result<f64> {
        let mut c = 0.0f64;
        for i in 0..points.max(2) {
            let x = x_lo * (x_hi / x_lo).powf(i as f64 / (points.max(2) - 1) as f64);
            c = c.max(self.f_eval(x)? * x.ln() / x);
        }
        Ok(c)
    }

    /// Canonical text used for fingerprints and sidecars.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("r={:?}\nM={}\n", self.r, self.m);
        for z in self.zeros.zeros() {
            let _ = writeln!(s, "zero={:?},{:?},{}", z.beta, z.gamma, z.mult);
        }
        s
    }
}

impl PrimeDensity for TargetDensity {
    fn log_density(&self, u: f64) -> f64 {
        log_weight(u) * self.scaled_f0_prime(u)
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        self.f_eval(x)
    }

    fn quantile(&self, level: f64) -> Result<f64> {
        self.inverse_f(level)
    }

    fn fingerprint(&self) -> [u8; 32] {
        Sha256::digest(self.canonical_text().as_bytes()).into()
    }

    fn panel_width(&self) -> f64 {
        self.panel
    }
}

/// `F(x) = c·(x − 1)`: a test density with an exact inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearDensity {
    pub slope: f64,
}

impl PrimeDensity for LinearDensity {
    fn log_density(&self, u: f64) -> f64 {
        self.slope * u.exp()
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        if x < 1.0 {
            return Err(Error::Domain(format!("x = {x} below 1")));
        }
        Ok(self.slope * (x - 1.0))
    }

    fn quantile(&self, level: f64) -> Result<f64> {
        Ok(1.0 + level / self.slope)
    }

    fn fingerprint(&self) -> [u8; 32] {
        Sha256::digest(format!("linear slope={:?}", self.slope).as_bytes()).into()
    }
}
