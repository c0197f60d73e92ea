//! Generalized primes realizing a target density, their binary format, and
//! the exponential-sum discrepancy `J(x, t)`.

use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::density::PrimeDensity;
use crate::error::{domain, Error, Result};
use crate::numeric::ComplexSum;

const MAGIC: &[u8; 4] = b"BPRM";
const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 8 + 8 + 8 + 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SamplingMethod {
    /// `p_j = F⁻¹(j − 1/2)`.
    Quantile,
    /// `p_j = F⁻¹(j − 1 + U_j)` with seeded uniform `U_j`.
    DmvRandom,
}

impl SamplingMethod {
    fn code(self) -> u8 {
        match self {
            Self::Quantile => 0,
            Self::DmvRandom => 1,
        }
    }

    fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(Self::Quantile),
            1 => Ok(Self::DmvRandom),
            other => Err(Error::Format(format!("unknown sampling method byte {other}"))),
        }
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Quantile => "quantile",
            Self::DmvRandom => "dmv-random",
        })
    }
}

impl FromStr for SamplingMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quantile" => Ok(Self::Quantile),
            "dmv-random" => Ok(Self::DmvRandom),
            other => Err(Error::Format(format!("unknown sampler {other:?} (expected quantile or dmv-random)"))),
        }
    }
}

/// Sorted generalized primes with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeSystem {
    primes: Vec<f64>,
    pub method: SamplingMethod,
    pub seed: u64,
    pub x_max: f64,
    pub density_fingerprint: [u8; 32],
}

impl PrimeSystem {
    /// Builds a system from explicit primes (sorted here; all must exceed 1).
    pub fn from_primes(mut primes: Vec<f64>, x_max: f64) -> Result<Self> {
        if primes.iter().any(|&p| !(p > 1.0) || !p.is_finite()) {
            return domain("generalized primes must be finite and exceed 1");
        }
        primes.sort_by(f64::total_cmp);
        if let Some(&last) = primes.last() {
            if last > x_max {
                return domain(format!("prime {last} exceeds the cutoff {x_max}"));
            }
        }
        Ok(Self { primes, method: SamplingMethod::Quantile, seed: 0, x_max, density_fingerprint: [0; 32] })
    }

    pub fn primes(&self) -> &[f64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// `π_P(x)`.
    pub fn count_up_to(&self, x: f64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn fingerprint_hex(&self) -> String {
        self.density_fingerprint.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * self.primes.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(self.method.code());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.x_max.to_le_bytes());
        out.extend_from_slice(&(self.primes.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.density_fingerprint);
        for p in &self.primes {
            out.extend_from_slice(&p.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
            return Err(Error::Format("not a prime system file (bad magic or truncated header)".into()));
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().expect("8 bytes"));
        let version = u32_at(4);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported prime system version {version}")));
        }
        let method = SamplingMethod::from_code(bytes[8])?;
        let seed = u64_at(9);
        let x_max = f64::from_bits(u64_at(17));
        let count = u64_at(25) as usize;
        let mut density_fingerprint = [0u8; 32];
        density_fingerprint.copy_from_slice(&bytes[33..65]);
        let body = &bytes[HEADER_LEN..];
        if body.len() != 8 * count {
            return Err(Error::Format(format!("expected {count} primes, found {} bytes of data", body.len())));
        }
        let primes: Vec<f64> =
            body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        if primes.windows(2).any(|w| w[0] > w[1]) || primes.first().is_some_and(|&p| !(p > 1.0)) {
            return Err(Error::Format("prime list is not sorted or contains values ≤ 1".into()));
        }
        Ok(Self { primes, method, seed, x_max, density_fingerprint })
    }

    /// Human-readable metadata mirroring the binary header.
    pub fn sidecar(&self) -> String {
        format!(
            "format=BPRM\nversion={FORMAT_VERSION}\nmethod={}\nseed={}\nx_max={:?}\ncount={}\ndensity_fingerprint={}\n",
            self.method,
            self.seed,
            self.x_max,
            self.primes.len(),
            self.fingerprint_hex()
        )
    }

    /// Writes `path` and `path.txt` (the sidecar).
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        let mut side = path.as_os_str().to_owned();
        side.push(".txt");
        fs::write(Path::new(&side), self.sidecar())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut buf = Vec::new();
        fs::File::open(path)?.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }
}

/// Places primes at quantiles of `d` up to `x_max`.
///
/// Quantile: `p_j = F⁻¹(j − 1/2)` for `j ≤ ⌊F(x_max) + 1/2⌋`.
/// DMV-random: one prime per unit level, `p_j = F⁻¹(j − 1 + U_j)`, kept while `≤ x_max`.
pub fn sample_primes<D: PrimeDensity + ?Sized>(d: &D, method: SamplingMethod, seed: u64, x_max: f64) -> Result<PrimeSystem> {
    let total = d.cdf(x_max)?;
    let mut primes = Vec::new();
    match method {
        SamplingMethod::Quantile => {
            let count = (total + 0.5).floor() as u64;
            if count == 0 {
                return Err(Error::EmptySystem(format!("F(x_max) = {total:.6} is below the first quantile level 1/2")));
            }
            primes.reserve(count as usize);
            for j in 1..=count {
                primes.push(d.quantile(j as f64 - 0.5)?.min(x_max));
            }
        }
        SamplingMethod::DmvRandom => {
            if total < 1.0 {
                return Err(Error::EmptySystem(format!("F(x_max) = {total:.6} < 1")));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let mut j = 1u64;
            loop {
                let u: f64 = rng.random();
                let level = (j - 1) as f64 + u;
                if level > total {
                    break;
                }
                let p = d.quantile(level)?;
                if p > x_max {
                    break;
                }
                primes.push(p);
                j += 1;
            }
            if primes.is_empty() {
                return Err(Error::EmptySystem("no sampled prime below x_max".into()));
            }
        }
    }
    separate_collisions(&mut primes);
    Ok(PrimeSystem { primes, method, seed, x_max, density_fingerprint: d.fingerprint() })
}

/// Nudges equal neighbours apart by one ulp so the list is strictly increasing.
fn separate_collisions(primes: &mut [f64]) {
    for i in 1..primes.len() {
        if primes[i] <= primes[i - 1] {
            let bumped = f64::from_bits(primes[i - 1].to_bits() + 1);
            log::warn!("prime collision at index {i} ({:e}); moved by one ulp", primes[i]);
            primes[i] = bumped;
        }
    }
}

/// Largest `|π_P(x) − F(x)|` over jump points (both one-sided limits) and
/// midpoints between consecutive primes, for `x ≤ x_hi`.
pub fn max_count_discrepancy<D: PrimeDensity + ?Sized>(ps: &PrimeSystem, d: &D, x_hi: f64) -> Result<f64> {
    use rayon::prelude::*;
    let primes = ps.primes();
    let upto = primes.partition_point(|&p| p <= x_hi);
    let worst = (0..upto)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let p = primes[i];
            let f = d.cdf(p)?;
            // Left limit has count i, right value has count i + 1 (ties aside).
            let mut w = (f - i as f64).abs().max((f - (i + 1) as f64).abs());
            let mid = if i + 1 < primes.len() { 0.5 * (p + primes[i + 1]) } else { 0.5 * (p + x_hi) };
            if mid <= x_hi && mid > p {
                w = w.max((d.cdf(mid)? - (i + 1) as f64).abs());
            }
            Ok(w)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    Ok(worst.max((d.cdf(x_hi)? - upto as f64).abs()))
}

/// `J(x,t) = Σ_{p≤x} p^{−it} − ∫₁ˣ y^{−it} dF(y)`.
pub fn discrepancy_j<D: PrimeDensity + ?Sized>(ps: &PrimeSystem, d: &D, x: f64, t: f64) -> Result<Complex64> {
    if !(1.0..=ps.x_max).contains(&x) {
        return domain(format!("J(x, t) needs 1 ≤ x ≤ x_max = {}, got {x}", ps.x_max));
    }
    let mut s = ComplexSum::new();
    for &p in &ps.primes()[..ps.count_up_to(x)] {
        s.add(Complex64::from_polar(1.0, -t * p.ln()));
    }
    Ok(s.value() - d.twisted_mass(x, t)?)
}

/// The reference envelope `√x + √(x·log(|t|+1)/log(x+1))`.
pub fn j_envelope(x: f64, t: f64) -> f64 {
    x.sqrt() + (x * (t.abs() + 1.0).ln() / (x + 1.0).ln()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::LinearDensity;

    #[test]
    fn collisions_are_separated() {
        let mut v = vec![2.0, 2.0, 2.0, 3.0];
        separate_collisions(&mut v);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn method_round_trip() {
        for m in [SamplingMethod::Quantile, SamplingMethod::DmvRandom] {
            assert_eq!(m.to_string().parse::<SamplingMethod>().unwrap(), m);
            assert_eq!(SamplingMethod::from_code(m.code()).unwrap(), m);
        }
    }

    #[test]
    fn rejects_corrupt_bytes() {
        let d = LinearDensity { slope: 1.0 };
        let ps = sample_primes(&d, SamplingMethod::Quantile, 0, 10.0).unwrap();
        let mut b = ps.to_bytes();
        b.truncate(b.len() - 3);
        assert!(PrimeSystem::from_bytes(&b).is_err());
        assert!(PrimeSystem::from_bytes(b"XXXX").is_err());
    }

    #[test]
    fn x_out_of_range_in_j() {
        let d = LinearDensity { slope: 1.0 };
        let ps = sample_primes(&d, SamplingMethod::Quantile, 0, 10.0).unwrap();
        assert!(discrepancy_j(&ps, &d, 11.0, 1.0).is_err());
        assert!(discrepancy_j(&ps, &d, 0.5, 1.0).is_err());
    }
}
