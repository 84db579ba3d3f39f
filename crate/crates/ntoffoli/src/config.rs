//! TOML experiment configuration. Frequencies are `f/2pi` strings with a unit
//! (`"40 MHz"`), times likewise (`"30 us"`); both become internal units here.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::evolution::NoiseSpec;
use crate::synth::{ConstraintSet, CostWeights, OptimizerOptions};
use crate::units::{parse_frequency, parse_time, GHZ, MHZ, US};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SweepDrive,
    SweepN,
    Qec3,
    Steane,
    Synth,
    Table1Check,
    NormError,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::SweepDrive,
        Experiment::SweepN,
        Experiment::Qec3,
        Experiment::Steane,
        Experiment::Synth,
        Experiment::Table1Check,
        Experiment::NormError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SweepDrive => "sweep-drive",
            Experiment::SweepN => "sweep-n",
            Experiment::Qec3 => "qec3",
            Experiment::Steane => "steane",
            Experiment::Synth => "synth",
            Experiment::Table1Check => "table1-check",
            Experiment::NormError => "norm-error",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn frequency<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let s = String::deserialize(d)?;
    parse_frequency(&s).map_err(serde::de::Error::custom)
}

fn opt_time<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    Option::<String>::deserialize(d)?
        .map(|s| parse_time(&s).map_err(serde::de::Error::custom))
        .transpose()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceSection {
    /// Number of controls.
    pub n: usize,
    #[serde(deserialize_with = "frequency")]
    pub coupling: f64,
    pub theta: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        Self {
            n: 2,
            coupling: 40.0 * MHZ,
            theta: 0.0,
        }
    }
}

/// `J/Omega` grid; either an explicit list or `start..=stop` by `step`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveSection {
    pub ratios: Option<Vec<f64>>,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            ratios: None,
            start: 4.0,
            stop: 20.0,
            step: 1.0,
        }
    }
}

impl DriveSection {
    pub fn grid(&self) -> Result<Vec<f64>> {
        let g = match &self.ratios {
            Some(r) => r.clone(),
            None => {
                if !(self.step > 0.0) || self.stop < self.start {
                    return Err(Error::Config(format!(
                        "bad drive range {}..={} step {}",
                        self.start, self.stop, self.step
                    )));
                }
                let k = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
                (0..=k).map(|i| self.start + i as f64 * self.step).collect()
            }
        };
        if g.is_empty() || g.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
            return Err(Error::Config("J/Omega grid must be nonempty and positive".into()));
        }
        Ok(g)
    }
}

/// Noise is on when either time is given, or with `enabled = true` (T1 defaults to 30 us, T2 to T1).
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub enabled: Option<bool>,
    #[serde(deserialize_with = "opt_time")]
    pub t1: Option<f64>,
    #[serde(deserialize_with = "opt_time")]
    pub t2: Option<f64>,
}

impl NoiseSection {
    pub fn spec(&self) -> Result<Option<NoiseSpec>> {
        let on = self.enabled.unwrap_or(self.t1.is_some() || self.t2.is_some());
        if !on {
            return Ok(None);
        }
        let t1 = self.t1.unwrap_or(30.0 * US);
        let t2 = self.t2.unwrap_or(t1);
        Ok(Some(NoiseSpec::new(t1, t2)?))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepNSection {
    pub n: Vec<usize>,
    pub ratio: f64,
}

impl Default for SweepNSection {
    fn default() -> Self {
        Self {
            n: vec![1, 2, 3, 4, 5],
            ratio: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QecGates {
    Ideal,
    Driven,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QecSection {
    pub gates: QecGates,
    /// `J/Omega` for the bit-flip code (the Steane sweep uses `[drive]`).
    pub ratio: f64,
}

impl Default for QecSection {
    fn default() -> Self {
        Self {
            gates: QecGates::Driven,
            ratio: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSection {
    pub n_controls: usize,
    pub seeds: usize,
    pub asymmetric: bool,
    pub max_evaluations: usize,
    pub margin: f64,
    #[serde(deserialize_with = "frequency")]
    pub jz_min: f64,
    #[serde(deserialize_with = "frequency")]
    pub jz_max: f64,
    pub cross_max: f64,
    pub swap_max: f64,
    pub alpha_rel_min: f64,
    pub alpha_rel_max: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    #[serde(deserialize_with = "frequency")]
    pub max_energy: f64,
    pub capacitance_min: f64,
    pub capacitance_max: f64,
    pub weights: CostWeights,
}

impl Default for SynthSection {
    fn default() -> Self {
        let c = ConstraintSet::default();
        let o = OptimizerOptions::default();
        Self {
            n_controls: o.n_controls,
            seeds: o.seeds,
            asymmetric: o.asymmetric,
            max_evaluations: o.max_evaluations,
            margin: o.margin,
            jz_min: c.jz_range.0,
            jz_max: c.jz_range.1,
            cross_max: c.cross_max,
            swap_max: c.swap_max,
            alpha_rel_min: c.alpha_rel_range.0,
            alpha_rel_max: c.alpha_rel_range.1,
            ratio_min: c.ratio_range.0,
            ratio_max: c.ratio_range.1,
            max_energy: 100.0 * GHZ,
            capacitance_min: c.capacitance_range.0,
            capacitance_max: c.capacitance_range.1,
            weights: o.weights,
        }
    }
}

impl SynthSection {
    pub fn constraints(&self) -> ConstraintSet {
        ConstraintSet {
            jz_range: (self.jz_min, self.jz_max),
            cross_max: self.cross_max,
            swap_max: self.swap_max,
            alpha_rel_range: (self.alpha_rel_min, self.alpha_rel_max),
            ratio_range: (self.ratio_min, self.ratio_max),
            max_energy: self.max_energy,
            capacitance_range: (self.capacitance_min, self.capacitance_max),
        }
    }

    pub fn options(&self, rng_seed: u64) -> OptimizerOptions {
        OptimizerOptions {
            n_controls: self.n_controls,
            seeds: self.seeds,
            rng_seed,
            asymmetric: self.asymmetric,
            max_evaluations: self.max_evaluations,
            margin: self.margin,
            weights: self.weights.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Table1Section {
    /// Golden table; the bundled copy is used when absent.
    pub path: Option<PathBuf>,
    pub n: usize,
    /// `Omega = |J^z| / ratio`.
    pub ratio: f64,
    /// Time scan over `[1 - span, 1 + span] * T`.
    pub span: f64,
    pub points: usize,
}

impl Default for Table1Section {
    fn default() -> Self {
        Self {
            path: None,
            n: 2,
            ratio: 8.0,
            span: 0.2,
            points: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NormErrorSection {
    pub n: Vec<usize>,
}

impl Default for NormErrorSection {
    fn default() -> Self {
        Self { n: vec![2, 3, 4, 5, 6] }
    }
}

/// Whole configuration file. Every section is optional.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub device: DeviceSection,
    pub drive: DriveSection,
    pub noise: NoiseSection,
    pub sweep_n: SweepNSection,
    pub qec: QecSection,
    pub synth: SynthSection,
    pub table1: Table1Section,
    pub norm_error: NormErrorSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 0,
            threads: None,
            out: None,
            format: OutputFormat::Csv,
            device: DeviceSection::default(),
            drive: DriveSection::default(),
            noise: NoiseSection::default(),
            sweep_n: SweepNSection::default(),
            qec: QecSection::default(),
            synth: SynthSection::default(),
            table1: Table1Section::default(),
            norm_error: NormErrorSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
