use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitcore::BitProbability;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Sigmoid-transfer binary PSO.
    Mbpso,
    /// V-shaped-transfer binary PSO.
    Mvpso,
    /// Boolean PSO with a noise term in the velocity update.
    Mbopso,
    /// Sticky binary PSO.
    Msbpso,
    /// Velocity-free binary PSO with a randomly searching particle subset.
    Mbnvpso,
    /// Velocity-free boolean PSO with a noise bit.
    Mbonvpso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Mbpso,
        Algorithm::Mvpso,
        Algorithm::Mbopso,
        Algorithm::Msbpso,
        Algorithm::Mbnvpso,
        Algorithm::Mbonvpso,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mbpso => "mbpso",
            Algorithm::Mvpso => "mvpso",
            Algorithm::Mbopso => "mbopso",
            Algorithm::Msbpso => "msbpso",
            Algorithm::Mbnvpso => "mbnvpso",
            Algorithm::Mbonvpso => "mbonvpso",
        }
    }

    pub fn is_velocity_free(self) -> bool {
        matches!(self, Algorithm::Mbnvpso | Algorithm::Mbonvpso)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| Error::UnknownName {
                kind: "algorithm",
                name: s.to_string(),
            })
    }
}

/// Linear interpolation over the iterations of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub start: f64,
    pub end: f64,
}

impl ScheduleSpec {
    pub const fn new(start: f64, end: f64) -> Self {
        ScheduleSpec { start, end }
    }

    pub const fn constant(value: f64) -> Self {
        ScheduleSpec {
            start: value,
            end: value,
        }
    }

    /// Value at iteration `t` of `total`: `start` at `t = 0`, `end` at
    /// `t = total - 1`.
    pub fn value(&self, t: usize, total: usize) -> f64 {
        if total <= 1 {
            return self.start;
        }
        self.start + (self.end - self.start) * t as f64 / (total - 1) as f64
    }

    fn check_probability(&self, name: &'static str) -> Result<()> {
        for v in [self.start, self.end] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid(
                    name,
                    format!("endpoint {v} is outside [0, 1]"),
                ));
            }
        }
        Ok(())
    }
}

/// Where the noise bit of the velocity-free boolean update is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// A fresh random subset of particles (`random_search_fraction` of the
    /// swarm) draws a noise bit per dimension each iteration.
    ParticleSubset,
    /// Every bit of every particle draws a noise bit.
    PerBit,
}

/// Parameters of every update rule. Only the fields relevant to
/// `algorithm` are read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub algorithm: Algorithm,
    // real-velocity rules
    pub c1: f64,
    pub c2: f64,
    pub inertia: ScheduleSpec,
    pub vmax_real: f64,
    // boolean velocity rule
    pub rho1: BitProbability,
    pub rho2: BitProbability,
    pub omega: BitProbability,
    pub beta_noise: BitProbability,
    /// Maximum number of velocity bits set; `None` means the full position
    /// length (no clamping).
    pub vmax_bits: Option<usize>,
    // sticky rule
    pub im: f64,
    pub ip: f64,
    pub ig: f64,
    pub stickiness_steps: usize,
    // velocity-free rules
    pub alpha: ScheduleSpec,
    pub alpha2: BitProbability,
    pub beta: BitProbability,
    pub random_search_fraction: f64,
    pub noise_mode: NoiseMode,
}

fn p(v: f64) -> BitProbability {
    BitProbability::new(v).expect("default probabilities are within [0, 1]")
}

impl AlgorithmParams {
    pub fn defaults(algorithm: Algorithm) -> Self {
        let (alpha, random_search_fraction) = match algorithm {
            Algorithm::Mbnvpso => (ScheduleSpec::new(0.5, 0.33), 0.10),
            _ => (ScheduleSpec::new(0.3, 0.7), 0.05),
        };
        AlgorithmParams {
            algorithm,
            c1: 2.0,
            c2: 2.0,
            inertia: ScheduleSpec::new(0.9, 0.4),
            vmax_real: 6.0,
            rho1: p(0.5),
            rho2: p(0.5),
            omega: p(0.5),
            beta_noise: p(0.05),
            vmax_bits: None,
            im: 0.25,
            ip: 0.25,
            ig: 0.5,
            stickiness_steps: 50,
            alpha,
            alpha2: p(0.5),
            beta: p(0.5),
            random_search_fraction,
            noise_mode: NoiseMode::ParticleSubset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::invalid(
                "c1/c2",
                "acceleration constants must be positive",
            ));
        }
        if self.vmax_real.is_nan() || self.vmax_real <= 0.0 {
            return Err(Error::invalid("vmax_real", "must be positive"));
        }
        if [self.im, self.ip, self.ig]
            .iter()
            .any(|w| w.is_nan() || *w < 0.0)
        {
            return Err(Error::invalid("im/ip/ig", "weights must be non-negative"));
        }
        if self.stickiness_steps == 0 {
            return Err(Error::invalid("stickiness_steps", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.random_search_fraction) {
            return Err(Error::invalid(
                "random_search_fraction",
                format!("{} is outside [0, 1]", self.random_search_fraction),
            ));
        }
        self.alpha.check_probability("alpha")?;
        Ok(())
    }

    /// Number of particles in the per-iteration random-search / noise subset.
    pub fn subset_size(&self, swarm_size: usize) -> usize {
        ((self.random_search_fraction * swarm_size as f64).round() as usize).min(swarm_size)
    }
}

/// Partial parameter set read from configuration files; every present field
/// replaces the corresponding default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub inertia: Option<ScheduleSpec>,
    pub vmax_real: Option<f64>,
    pub rho1: Option<BitProbability>,
    pub rho2: Option<BitProbability>,
    pub omega: Option<BitProbability>,
    pub beta_noise: Option<BitProbability>,
    pub vmax_bits: Option<usize>,
    pub im: Option<f64>,
    pub ip: Option<f64>,
    pub ig: Option<f64>,
    pub stickiness_steps: Option<usize>,
    pub alpha: Option<ScheduleSpec>,
    pub alpha2: Option<BitProbability>,
    pub beta: Option<BitProbability>,
    pub random_search_fraction: Option<f64>,
    pub noise_mode: Option<NoiseMode>,
}

impl ParamOverrides {
    pub fn apply(&self, params: &mut AlgorithmParams) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { params.$field = v; })*
            };
        }
        take!(
            c1,
            c2,
            inertia,
            vmax_real,
            rho1,
            rho2,
            omega,
            beta_noise,
            im,
            ip,
            ig,
            stickiness_steps,
            alpha,
            alpha2,
            beta,
            random_search_fraction,
            noise_mode
        );
        if self.vmax_bits.is_some() {
            params.vmax_bits = self.vmax_bits;
        }
    }
}
