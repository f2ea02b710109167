// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Run manifests: everything one pipeline invocation needs, read from
//! `key = value` text.
//!
//! ```text
//! # low-power run
//! blif = benchmarks/alu_slice.blif
//! cycles = 10000
//! seed = 7
//! override.op1 = const:0
//! transforms = driver_duplicate
//! min_fanout = 6
//! fanout_exponent = 2
//! ```

use std::path::PathBuf;

use thiserror::Error;

use crate::opt::{OptConfig, ThresholdMode, Transforms};
use crate::power::PowerConfig;
use crate::stimulus::{StimulusOptions, Waveform};

pub const DEFAULT_CYCLES: u64 = 4096;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManifestError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {msg}")]
    BadValue { key: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub blif: Option<PathBuf>,
    pub profile: Option<PathBuf>,
    /// Optimized BLIF.
    pub out: Option<PathBuf>,
    /// Pass report.
    pub report: Option<PathBuf>,
    pub power_report: Option<PathBuf>,
    pub cycles: u64,
    pub seed: u64,
    pub detect_resets: bool,
    pub overrides: Vec<(String, Waveform)>,
    pub opt: OptConfig,
    pub power: PowerConfig,
    cycles_explicit: bool,
}

impl Default for RunManifest {
    fn default() -> Self {
        RunManifest {
            blif: None,
            profile: None,
            out: None,
            report: None,
            power_report: None,
            cycles: DEFAULT_CYCLES,
            seed: DEFAULT_SEED,
            detect_resets: true,
            overrides: Vec::new(),
            opt: OptConfig::default(),
            power: PowerConfig::default(),
            cycles_explicit: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ManifestError> {
    value.parse().map_err(|_| ManifestError::BadValue {
        key: key.to_string(),
        msg: format!("`{value}` is not a number"),
    })
}

impl RunManifest {
    /// Set one key. Later settings of the same key win.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ManifestError> {
        let bad = |msg: String| ManifestError::BadValue {
            key: key.to_string(),
            msg,
        };
        if let Some(input) = key.strip_prefix("override.") {
            let w: Waveform = value.parse().map_err(bad)?;
            self.overrides.retain(|(n, _)| n != input);
            self.overrides.push((input.to_string(), w));
            return Ok(());
        }
        match key {
            "blif" => self.blif = Some(value.into()),
            "profile" => self.profile = Some(value.into()),
            "out" => self.out = Some(value.into()),
            "report" => self.report = Some(value.into()),
            "power_report" => self.power_report = Some(value.into()),
            "cycles" => {
                self.cycles = parse_num(key, value)?;
                self.cycles_explicit = true;
            }
            "seed" => self.seed = parse_num(key, value)?,
            "detect_resets" => {
                self.detect_resets = match value {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    _ => return Err(bad(format!("`{value}` is not a boolean"))),
                }
            }
            "threshold" => self.opt.threshold = value.parse::<ThresholdMode>().map_err(|e| bad(e.to_string()))?,
            "transforms" => self.opt.transforms = value.parse::<Transforms>().map_err(|e| bad(e.to_string()))?,
            "max_area_growth_pct" => {
                self.opt.max_area_growth_pct = match value {
                    "unlimited" | "none" => None,
                    v => Some(parse_num(key, v)?),
                }
            }
            "min_fanout" => self.opt.min_fanout_for_duplication = parse_num(key, value)?,
            "supply_voltage" => self.power.supply_voltage = parse_num(key, value)?,
            "clock_freq" => self.power.clock_freq = parse_num(key, value)?,
            "c_base" => self.power.c_base = parse_num(key, value)?,
            "c_per_fanout" => self.power.c_per_fanout = parse_num(key, value)?,
            "c_dup_overhead" => self.power.c_dup_overhead = parse_num(key, value)?,
            "fanout_exponent" => self.power.fanout_exponent = parse_num(key, value)?,
            _ => return Err(ManifestError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Whether `cycles` was set rather than left at its default.
    pub fn has_explicit_cycles(&self) -> bool {
        self.cycles_explicit
    }

    pub fn stimulus_options(&self) -> StimulusOptions {
        StimulusOptions {
            detect_resets: self.detect_resets,
            overrides: self.overrides.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        if self.cycles < 2 {
            return Err(ManifestError::Invalid(format!("cycles must be at least 2, got {}", self.cycles)));
        }
        if self.opt.min_fanout_for_duplication < 2 {
            return Err(ManifestError::Invalid("min_fanout must be at least 2".into()));
        }
        if let Some(g) = self.opt.max_area_growth_pct {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(ManifestError::Invalid("max_area_growth_pct must be nonnegative".into()));
            }
        }
        self.power
            .validate()
            .map_err(|e| ManifestError::Invalid(e.to_string()))?;
        let paths: Vec<&PathBuf> = [&self.blif, &self.profile, &self.out, &self.report, &self.power_report]
            .into_iter()
            .flatten()
            .collect();
        for (i, p) in paths.iter().enumerate() {
            if paths[..i].contains(p) {
                return Err(ManifestError::Invalid(format!("path {} is used twice", p.display())));
            }
        }
        Ok(())
    }
}

/// Parse `key = value` lines; `#` starts a comment. The result is not validated.
pub fn parse_manifest(text: &str) -> Result<RunManifest, ManifestError> {
    let mut m = RunManifest::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ManifestError::Syntax {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        m.set(k.trim(), v.trim())?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_sections() {
        let m = parse_manifest(
            "# demo\nblif = a.blif\ncycles = 512\nseed=3\noverride.rst = const:1\n\
             threshold = percentile:75\ntransforms = driver_duplicate\nmin_fanout = 4\n\
             max_area_growth_pct = 20\nfanout_exponent = 2 # wiring\n",
        )
        .unwrap();
        assert_eq!(m.blif, Some(PathBuf::from("a.blif")));
        assert_eq!((m.cycles, m.seed), (512, 3));
        assert_eq!(m.overrides, vec![("rst".to_string(), Waveform::Constant(true))]);
        assert_eq!(m.opt.threshold, ThresholdMode::Percentile(75.0));
        assert!(m.opt.transforms.driver_duplicate && !m.opt.transforms.shannon_split);
        assert_eq!(m.opt.min_fanout_for_duplication, 4);
        assert_eq!(m.opt.max_area_growth_pct, Some(20.0));
        assert_eq!(m.power.fanout_exponent, 2.0);
        m.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_manifest("cycles 5"), Err(ManifestError::Syntax { line: 1, .. })));
        assert!(matches!(parse_manifest("colour = red"), Err(ManifestError::UnknownKey(_))));
        assert!(matches!(parse_manifest("cycles = many"), Err(ManifestError::BadValue { .. })));
        assert!(matches!(parse_manifest("override.a = wobble:1"), Err(ManifestError::BadValue { .. })));
        assert!(parse_manifest("cycles = 1").unwrap().validate().is_err());
        assert!(parse_manifest("blif = x\nout = x").unwrap().validate().is_err());
        assert!(parse_manifest("min_fanout = 1").unwrap().validate().is_err());
    }

    #[test]
    fn waveform_specs() {
        assert_eq!("toggle:3".parse::<Waveform>(), Ok(Waveform::ToggleEvery(3)));
        assert_eq!("random:0.25".parse::<Waveform>(), Ok(Waveform::Random(0.25)));
        assert_eq!("bits:0110".parse::<Waveform>(), Ok(Waveform::Explicit(vec![false, true, true, false])));
        assert!("toggle:0".parse::<Waveform>().is_err());
        assert!("random:2".parse::<Waveform>().is_err());
    }
}
