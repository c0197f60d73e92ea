//! Line-oriented experiment configuration.
//!
//! ```text
//! r = 0.6
//! sampler = quantile
//! zero = 0.75,5,1
//!
//! [sine]
//! epsilon = 0.25
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use beurling_core::density::{TargetDensity, Zero, ZeroSpec};
use beurling_core::prime_sampler::SamplingMethod;
use beurling_core::sine_polynomial::SearchStrategy;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct SineConfig {
    pub epsilon: f64,
    pub strategy: SearchStrategy,
    pub seed: u64,
    pub budget: u64,
}

impl Default for SineConfig {
    fn default() -> Self {
        Self { epsilon: 0.25, strategy: SearchStrategy::Anneal, seed: 1, budget: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterferenceConfig {
    pub v: f64,
    pub epsilon: f64,
    pub beta0: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

/// Parameters of the lower-oscillation and weighted-integral checks.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillationConfig {
    pub epsilon: f64,
    /// Window start `Y`; the window is `[Y, Y^c]`.
    pub y: f64,
    pub c: f64,
    pub m: Vec<f64>,
}

impl Default for OscillationConfig {
    fn default() -> Self {
        Self { epsilon: 0.1, y: 1e3, c: 2.0, m: vec![2.0, 3.0] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub r: f64,
    pub zeros: Vec<Zero>,
    pub m: Option<u32>,
    pub sampler: SamplingMethod,
    pub seed: u64,
    pub x_max: f64,
    pub x_cut: f64,
    pub grid_ratio: f64,
    /// Norm budget for the `N(x)` enumeration in `tables`.
    pub max_norms: u64,
    pub sine: Option<SineConfig>,
    pub interference: Option<InterferenceConfig>,
    pub oscillation: Option<OscillationConfig>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            r: 0.6,
            zeros: vec![Zero::new(0.75, 5.0, 1)],
            m: None,
            sampler: SamplingMethod::Quantile,
            seed: 0,
            x_max: 1e6,
            x_cut: 1e6,
            grid_ratio: 1.01,
            max_norms: 10_000_000,
            sine: None,
            interference: None,
            oscillation: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    Sine,
    Interference,
    Oscillation,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Self::Top => "",
            Self::Sine => "sine",
            Self::Interference => "interference",
            Self::Oscillation => "oscillation",
        }
    }
}

fn field(section: Section, key: &str) -> String {
    match section {
        Section::Top => key.to_string(),
        s => format!("{}.{key}", s.name()),
    }
}

fn parse_num<T: FromStr>(name: &str, value: &str, diags: &mut Vec<String>) -> Option<T>
where
    T::Err: std::fmt::Display,
{
    match value.parse::<T>() {
        Ok(v) => Some(v),
        Err(e) => {
            diags.push(format!("{name}: cannot parse {value:?}: {e}"));
            None
        }
    }
}

fn parse_zero(value: &str, diags: &mut Vec<String>) -> Option<Zero> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        diags.push(format!("zero: expected beta,gamma,mult, got {value:?}"));
        return None;
    }
    let beta = parse_num::<f64>("zero.beta", parts[0], diags)?;
    let gamma = parse_num::<f64>("zero.gamma", parts[1], diags)?;
    let mult = parse_num::<u32>("zero.mult", parts[2], diags)?;
    Some(Zero::new(beta, gamma, mult))
}

fn parse_list(name: &str, value: &str, diags: &mut Vec<String>) -> Option<Vec<f64>> {
    value.split(',').map(|v| parse_num::<f64>(name, v.trim(), diags)).collect()
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut zeros = Vec::new();
        let mut zeros_given = false;
        let mut diags = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut section = Section::Top;
        let mut sine: Option<SineConfig> = None;
        let mut inter: [Option<f64>; 5] = [None; 5];
        let mut inter_seen = false;
        let mut osc: Option<OscillationConfig> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = lineno + 1;
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = match name.trim() {
                    "sine" => Section::Sine,
                    "interference" => Section::Interference,
                    "oscillation" => Section::Oscillation,
                    other => {
                        diags.push(format!("line {at}: unknown section [{other}]"));
                        continue;
                    }
                };
                match section {
                    Section::Sine => sine = Some(sine.unwrap_or_default()),
                    Section::Interference => inter_seen = true,
                    Section::Oscillation => osc = Some(osc.unwrap_or_default()),
                    Section::Top => {}
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                diags.push(format!("line {at}: expected `key = value`, got {line:?}"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let name = field(section, key);
            if key != "zero" && !seen.insert(name.clone()) {
                diags.push(format!("line {at}: {name} given twice"));
                continue;
            }
            match (section, key) {
                (Section::Top, "r") => cfg.r = parse_num(&name, value, &mut diags).unwrap_or(cfg.r),
                (Section::Top, "M") => cfg.m = parse_num(&name, value, &mut diags),
                (Section::Top, "sampler") => match value.parse() {
                    Ok(s) => cfg.sampler = s,
                    Err(e) => diags.push(format!("{name}: {e}")),
                },
                (Section::Top, "seed") => cfg.seed = parse_num(&name, value, &mut diags).unwrap_or(cfg.seed),
                (Section::Top, "x_max") => cfg.x_max = parse_num(&name, value, &mut diags).unwrap_or(cfg.x_max),
                (Section::Top, "X_cut") => cfg.x_cut = parse_num(&name, value, &mut diags).unwrap_or(cfg.x_cut),
                (Section::Top, "grid_ratio") => {
                    cfg.grid_ratio = parse_num(&name, value, &mut diags).unwrap_or(cfg.grid_ratio)
                }
                (Section::Top, "max_norms") => {
                    cfg.max_norms = parse_num(&name, value, &mut diags).unwrap_or(cfg.max_norms)
                }
                (Section::Top, "output_dir") => cfg.output_dir = PathBuf::from(value),
                (Section::Top, "zero") => {
                    zeros_given = true;
                    zeros.extend(parse_zero(value, &mut diags));
                }
                (Section::Sine, k) => {
                    let s = sine.get_or_insert_with(SineConfig::default);
                    match k {
                        "epsilon" => s.epsilon = parse_num(&name, value, &mut diags).unwrap_or(s.epsilon),
                        "strategy" => match value.parse() {
                            Ok(v) => s.strategy = v,
                            Err(e) => diags.push(format!("{name}: {e}")),
                        },
                        "seed" => s.seed = parse_num(&name, value, &mut diags).unwrap_or(s.seed),
                        "budget" => s.budget = parse_num(&name, value, &mut diags).unwrap_or(s.budget),
                        _ => diags.push(format!("line {at}: unknown key {name}")),
                    }
                }
                (Section::Interference, k) => {
                    let slot = ["v", "epsilon", "beta0", "x_lo", "x_hi"].iter().position(|&n| n == k);
                    match slot {
                        Some(i) => inter[i] = parse_num(&name, value, &mut diags),
                        None => diags.push(format!("line {at}: unknown key {name}")),
                    }
                }
                (Section::Oscillation, k) => {
                    let o = osc.get_or_insert_with(OscillationConfig::default);
                    match k {
                        "epsilon" => o.epsilon = parse_num(&name, value, &mut diags).unwrap_or(o.epsilon),
                        "y" => o.y = parse_num(&name, value, &mut diags).unwrap_or(o.y),
                        "c" => o.c = parse_num(&name, value, &mut diags).unwrap_or(o.c),
                        "m" => o.m = parse_list(&name, value, &mut diags).unwrap_or_default(),
                        _ => diags.push(format!("line {at}: unknown key {name}")),
                    }
                }
                _ => diags.push(format!("line {at}: unknown key {name}")),
            }
        }
        if zeros_given {
            cfg.zeros = zeros;
        }
        if inter_seen {
            let names = ["v", "epsilon", "beta0", "x_lo", "x_hi"];
            for (i, n) in names.iter().enumerate() {
                if inter[i].is_none() && *n != "beta0" {
                    diags.push(format!("interference.{n}: required in [interference]"));
                }
            }
            if let [Some(v), Some(epsilon), beta0, Some(x_lo), Some(x_hi)] = inter {
                cfg.interference = Some(InterferenceConfig { v, epsilon, beta0: beta0.unwrap_or(0.75), x_lo, x_hi });
            }
        }
        cfg.sine = sine;
        cfg.oscillation = osc;
        if !diags.is_empty() {
            return Err(CliError::Config(diags));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ExperimentConfig {
    pub fn zero_spec(&self) -> Result<ZeroSpec, CliError> {
        ZeroSpec::new(self.zeros.clone()).map_err(|e| CliError::Config(vec![format!("zero: {e}")]))
    }

    pub fn density(&self) -> Result<TargetDensity, CliError> {
        TargetDensity::new(self.r, self.zero_spec()?, self.m).map_err(|e| CliError::Config(vec![format!("r/zero/M: {e}")]))
    }

    /// Range checks with one diagnostic per offending field.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut d = Vec::new();
        if !(0.5..1.0).contains(&self.r) {
            d.push(format!("r: must lie in [0.5, 1), got {}", self.r));
        }
        match ZeroSpec::new(self.zeros.clone()) {
            Err(e) => d.push(format!("zero: {e}")),
            Ok(spec) => {
                if d.is_empty() {
                    if let Err(e) = TargetDensity::new(self.r, spec, self.m) {
                        d.push(format!("r/zero/M: {e}"));
                    }
                }
            }
        }
        if !(self.x_max > 1.0 && self.x_max.is_finite()) {
            d.push(format!("x_max: must be a finite number > 1, got {}", self.x_max));
        }
        if !(self.x_cut > 1.0 && self.x_cut <= self.x_max) {
            d.push(format!("X_cut: must lie in (1, x_max = {}], got {}", self.x_max, self.x_cut));
        }
        if !(self.grid_ratio > 1.0 && self.grid_ratio <= 2.0) {
            d.push(format!("grid_ratio: must lie in (1, 2], got {}", self.grid_ratio));
        }
        if self.max_norms == 0 {
            d.push("max_norms: must be positive".into());
        }
        if let Some(s) = &self.sine {
            if !(s.epsilon > 0.0 && s.epsilon < 0.5) {
                d.push(format!("sine.epsilon: must lie in (0, 0.5), got {}", s.epsilon));
            }
        }
        if let Some(i) = &self.interference {
            if !(i.epsilon > 0.0 && i.epsilon < 0.5) {
                d.push(format!("interference.epsilon: must lie in (0, 0.5), got {}", i.epsilon));
            }
            if !(i.beta0 > self.r && i.beta0 < 1.0) {
                d.push(format!("interference.beta0: must lie in (r, 1), got {}", i.beta0));
            }
            if !(i.v > 0.0) {
                d.push(format!("interference.v: must be positive, got {}", i.v));
            }
            if !(i.x_lo >= 1.0 && i.x_hi > i.x_lo && i.x_hi.is_finite()) {
                d.push(format!("interference.x_lo/x_hi: need 1 ≤ x_lo < x_hi, got [{}, {}]", i.x_lo, i.x_hi));
            }
        }
        if let Some(o) = &self.oscillation {
            if !(o.epsilon > 0.0 && o.epsilon < 0.5) {
                d.push(format!("oscillation.epsilon: must lie in (0, 0.5), got {}", o.epsilon));
            }
            if !(o.y > 1.0 && o.y < self.x_max) {
                d.push(format!("oscillation.y: must lie in (1, x_max), got {}", o.y));
            }
            if !(o.c > 1.0) {
                d.push(format!("oscillation.c: must exceed 1, got {}", o.c));
            }
            if o.m.is_empty() || o.m.iter().any(|&m| !(m >= 1.0)) {
                d.push(format!("oscillation.m: need a non-empty list of values ≥ 1, got {:?}", o.m));
            }
        }
        if d.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(d))
        }
    }

    /// Canonical text; parsing it gives back an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "r = {:?}", self.r);
        if let Some(m) = self.m {
            let _ = writeln!(s, "M = {m}");
        }
        let _ = writeln!(s, "sampler = {}", self.sampler);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "x_max = {:?}", self.x_max);
        let _ = writeln!(s, "X_cut = {:?}", self.x_cut);
        let _ = writeln!(s, "grid_ratio = {:?}", self.grid_ratio);
        let _ = writeln!(s, "max_norms = {}", self.max_norms);
        let _ = writeln!(s, "output_dir = {}", self.output_dir.display());
        for z in &self.zeros {
            let _ = writeln!(s, "zero = {:?},{:?},{}", z.beta, z.gamma, z.mult);
        }
        if let Some(c) = &self.sine {
            let _ = write!(
                s,
                "\n[sine]\nepsilon = {:?}\nstrategy = {}\nseed = {}\nbudget = {}\n",
                c.epsilon, c.strategy, c.seed, c.budget
            );
        }
        if let Some(c) = &self.interference {
            let _ = write!(
                s,
                "\n[interference]\nv = {:?}\nepsilon = {:?}\nbeta0 = {:?}\nx_lo = {:?}\nx_hi = {:?}\n",
                c.v, c.epsilon, c.beta0, c.x_lo, c.x_hi
            );
        }
        if let Some(c) = &self.oscillation {
            let m: Vec<String> = c.m.iter().map(|v| format!("{v:?}")).collect();
            let _ = write!(s, "\n[oscillation]\nepsilon = {:?}\ny = {:?}\nc = {:?}\nm = {}\n", c.epsilon, c.y, c.c, m.join(","));
        }
        s
    }
}
