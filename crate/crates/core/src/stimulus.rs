// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-input waveforms that drive a simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netlist::Netlist;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StimulusError {
    #[error("stimulus needs at least {min} cycles, got {got}")]
    TooFewCycles { min: u64, got: u64 },
    #[error("input `{0}` has more than one waveform")]
    DuplicateInput(String),
    #[error("explicit waveform for `{name}` has {len} values, expected {cycles}")]
    ExplicitLength { name: String, len: usize, cycles: u64 },
    #[error("waveform for `{0}` has an invalid parameter")]
    BadParameter(String),
    #[error("stimulus does not match the netlist inputs (missing: [{}], unknown: [{}])", missing.join(", "), unknown.join(", "))]
    InputMismatch {
        missing: Vec<String>,
        unknown: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    /// Starts at 0 and flips every `k` cycles.
    ToggleEvery(u64),
    /// Independent draws, 1 with probability `p`.
    Random(f64),
    Constant(bool),
    Explicit(Vec<bool>),
}

impl std::str::FromStr for Waveform {
    type Err = String;

    /// `toggle:<k>`, `random:<p>`, `const:<0|1>` or `bits:<0101...>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad waveform `{s}`");
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "toggle" => match arg.parse() {
                Ok(k) if k > 0 => Ok(Waveform::ToggleEvery(k)),
                _ => Err(bad()),
            },
            "random" => match arg.parse::<f64>() {
                Ok(p) if (0.0..=1.0).contains(&p) => Ok(Waveform::Random(p)),
                _ => Err(bad()),
            },
            "const" => match arg {
                "0" => Ok(Waveform::Constant(false)),
                "1" => Ok(Waveform::Constant(true)),
                _ => Err(bad()),
            },
            "bits" if !arg.is_empty() => arg
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()
                .map(Waveform::Explicit),
            _ => Err(bad()),
        }
    }
}

/// Input waveforms for `num_cycles` counted cycles. The initialization cycle
/// reuses the first value of every waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct Stimulus {
    num_cycles: u64,
    seed: u64,
    waves: Vec<(String, Waveform)>,
    notes: Vec<String>,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a, used for stable digests and per-input seeds.
pub(crate) fn fnv1a(state: u64, bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(state, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

impl Stimulus {
    pub fn new(num_cycles: u64, seed: u64, waves: Vec<(String, Waveform)>) -> Result<Self, StimulusError> {
        for (i, (name, wave)) in waves.iter().enumerate() {
            if waves[..i].iter().any(|(n, _)| n == name) {
                return Err(StimulusError::DuplicateInput(name.clone()));
            }
            match wave {
                Waveform::ToggleEvery(0) => return Err(StimulusError::BadParameter(name.clone())),
                Waveform::Random(p) if !(0.0..=1.0).contains(p) => {
                    return Err(StimulusError::BadParameter(name.clone()))
                }
                Waveform::Explicit(v) if v.len() as u64 != num_cycles => {
                    return Err(StimulusError::ExplicitLength {
                        name: name.clone(),
                        len: v.len(),
                        cycles: num_cycles,
                    })
                }
                _ => {}
            }
        }
        Ok(Stimulus {
            num_cycles,
            seed,
            waves,
            notes: Vec::new(),
        })
    }

    pub fn num_cycles(&self) -> u64 {
        self.num_cycles
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn waves(&self) -> &[(String, Waveform)] {
        &self.waves
    }

    pub fn wave(&self, name: &str) -> Option<&Waveform> {
        self.waves.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }

    /// Diagnostics recorded while generating the stimulus.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Stable 64-bit hash of cycles, seed and every waveform.
    pub fn digest(&self) -> u64 {
        let mut h = fnv1a(FNV_OFFSET, &self.num_cycles.to_le_bytes());
        h = fnv1a(h, &self.seed.to_le_bytes());
        for (name, wave) in &self.waves {
            h = fnv1a(h, name.as_bytes());
            h = fnv1a(h, &[0]);
            h = match wave {
                Waveform::ToggleEvery(k) => fnv1a(fnv1a(h, b"T"), &k.to_le_bytes()),
                Waveform::Random(p) => fnv1a(fnv1a(h, b"R"), &p.to_bits().to_le_bytes()),
                Waveform::Constant(b) => fnv1a(h, if *b { b"C1" } else { b"C0" }),
                Waveform::Explicit(v) => {
                    let bits: Vec<u8> = v.iter().map(|&b| b as u8).collect();
                    fnv1a(fnv1a(h, b"E"), &bits)
                }
            };
        }
        h
    }

    /// Materialized values of one waveform, one per counted cycle.
    pub fn sequence(&self, name: &str, wave: &Waveform) -> Vec<bool> {
        let n = self.num_cycles as usize;
        match wave {
            Waveform::ToggleEvery(k) => (0..self.num_cycles).map(|i| (i / k) % 2 == 1).collect(),
            Waveform::Random(p) => {
                let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(self.seed, name.as_bytes()));
                (0..n).map(|_| rng.random_bool(*p)).collect()
            }
            Waveform::Constant(b) => vec![*b; n],
            Waveform::Explicit(v) => v.clone(),
        }
    }

    /// Per-cycle input vectors ordered like `nl.inputs()`.
    pub fn bind(&self, nl: &Netlist) -> Result<Vec<Vec<bool>>, StimulusError> {
        let names = nl.input_names();
        let missing: Vec<String> = names
            .iter()
            .filter(|n| self.wave(n).is_none())
            .map(|n| n.to_string())
            .collect();
        let unknown: Vec<String> = self
            .waves
            .iter()
            .filter(|(n, _)| !names.contains(&n.as_str()))
            .map(|(n, _)| n.clone())
            .collect();
        if !missing.is_empty() || !unknown.is_empty() {
            return Err(StimulusError::InputMismatch { missing, unknown });
        }
        let columns: Vec<Vec<bool>> = names
            .iter()
            .map(|n| self.sequence(n, self.wave(n).unwrap()))
            .collect();
        Ok((0..self.num_cycles as usize)
            .map(|c| columns.iter().map(|col| col[c]).collect())
            .collect())
    }
}

/// Knobs for [`generate_stimulus_with`].
#[derive(Debug, Clone)]
pub struct StimulusOptions {
    /// Hold inputs named like resets at their inactive level.
    pub detect_resets: bool,
    /// Explicit waveforms that replace the generated ones.
    pub overrides: Vec<(String, Waveform)>,
}

impl Default for StimulusOptions {
    fn default() -> Self {
        StimulusOptions {
            detect_resets: true,
            overrides: Vec::new(),
        }
    }
}

/// Inactive level for a reset-like input name, or `None` if it is not one.
pub fn reset_inactive_level(name: &str) -> Option<bool> {
    let lower = name.to_ascii_lowercase();
    if !(lower.starts_with("rst") || lower.starts_with("reset")) {
        return None;
    }
    let active_low = lower.ends_with("_n") || lower.ends_with("_b") || lower == "rstn" || lower == "resetn";
    Some(active_low)
}

pub fn generate_stimulus(nl: &Netlist, num_cycles: u64, seed: u64) -> Result<Stimulus, StimulusError> {
    generate_stimulus_with(nl, num_cycles, seed, &StimulusOptions::default())
}

/// Random stimulus that exercises every data input.
///
/// Data inputs get `Random(0.5)`; reset-like inputs are held inactive; inputs
/// used only as latch clocks get a free-running clock. A random input that
/// happens never to change falls back to `ToggleEvery(1)`, with a note.
pub fn generate_stimulus_with(
    nl: &Netlist,
    num_cycles: u64,
    seed: u64,
    opts: &StimulusOptions,
) -> Result<Stimulus, StimulusError> {
    if num_cycles < 2 {
        return Err(StimulusError::TooFewCycles {
            min: 2,
            got: num_cycles,
        });
    }
    let clocks: Vec<&str> = nl
        .latches()
        .iter()
        .filter_map(|l| l.control.as_ref().map(|(_, c)| c.as_str()))
        .collect();
    let mut waves = Vec::new();
    for &id in nl.inputs() {
        let name = nl.net_name(id);
        let wave = if let Some((_, w)) = opts.overrides.iter().find(|(n, _)| n == name) {
            w.clone()
        } else if let (true, Some(level)) = (opts.detect_resets, reset_inactive_level(name)) {
            Waveform::Constant(level)
        } else if clocks.contains(&name) && nl.fanout(id).unwrap_or(0) == 0 {
            Waveform::ToggleEvery(1)
        } else {
            Waveform::Random(0.5)
        };
        waves.push((name.to_string(), wave));
    }
    let mut stim = Stimulus::new(num_cycles, seed, waves)?;
    let mut notes = Vec::new();
    for i in 0..stim.waves.len() {
        let (name, wave) = &stim.waves[i];
        if matches!(wave, Waveform::Random(_)) {
            let seq = stim.sequence(name, wave);
            if seq.windows(2).all(|w| w[0] == w[1]) {
                notes.push(format!("input {name} never toggled under random draws; using toggle_every(1)"));
                stim.waves[i].1 = Waveform::ToggleEvery(1);
            }
        }
    }
    stim.notes = notes;
    Ok(stim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blif::parse_blif;

    fn design() -> Netlist {
        parse_blif(
            ".model d\n.inputs clk reset_n a b rst\n.outputs y q\n.names a b y\n11 1\n.latch y q re clk 0\n.end\n",
        )
        .unwrap()
    }

    #[test]
    fn deterministic() {
        let nl = design();
        let a = generate_stimulus(&nl, 64, 7).unwrap();
        let b = generate_stimulus(&nl, 64, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.bind(&nl).unwrap(), b.bind(&nl).unwrap());
        let c = generate_stimulus(&nl, 64, 8).unwrap();
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn resets_held_and_clock_free_running() {
        let nl = design();
        let s = generate_stimulus(&nl, 16, 1).unwrap();
        assert_eq!(s.wave("reset_n"), Some(&Waveform::Constant(true)));
        assert_eq!(s.wave("rst"), Some(&Waveform::Constant(false)));
        assert_eq!(s.wave("clk"), Some(&Waveform::ToggleEvery(1)));
        assert_eq!(s.wave("a"), Some(&Waveform::Random(0.5)));

        let opts = StimulusOptions {
            detect_resets: false,
            overrides: vec![("a".into(), Waveform::Constant(true))],
        };
        let s = generate_stimulus_with(&nl, 16, 1, &opts).unwrap();
        assert_eq!(s.wave("rst"), Some(&Waveform::Random(0.5)));
        assert_eq!(s.wave("a"), Some(&Waveform::Constant(true)));
    }

    #[test]
    fn too_few_cycles() {
        assert_eq!(
            generate_stimulus(&design(), 1, 0).unwrap_err(),
            StimulusError::TooFewCycles { min: 2, got: 1 }
        );
    }

    #[test]
    fn waveform_shapes() {
        let s = Stimulus::new(6, 0, vec![]).unwrap();
        assert_eq!(
            s.sequence("x", &Waveform::ToggleEvery(2)),
            vec![false, false, true, true, false, false]
        );
        assert_eq!(s.sequence("x", &Waveform::Random(1.0)), vec![true; 6]);
        assert_eq!(s.sequence("x", &Waveform::Random(0.0)), vec![false; 6]);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Stimulus::new(3, 0, vec![("a".into(), Waveform::Explicit(vec![true]))]),
            Err(StimulusError::ExplicitLength { .. })
        ));
        assert!(Stimulus::new(3, 0, vec![("a".into(), Waveform::ToggleEvery(0))]).is_err());
        assert!(Stimulus::new(3, 0, vec![("a".into(), Waveform::Random(1.5))]).is_err());
        let dup = vec![
            ("a".into(), Waveform::Constant(true)),
            ("a".into(), Waveform::Constant(false)),
        ];
        assert_eq!(Stimulus::new(3, 0, dup), Err(StimulusError::DuplicateInput("a".into())));
    }

    #[test]
    fn bind_reports_mismatch() {
        let nl = design();
        let s = Stimulus::new(2, 0, vec![("zz".into(), Waveform::Constant(true))]).unwrap();
        match s.bind(&nl).unwrap_err() {
            StimulusError::InputMismatch { missing, unknown } => {
                assert_eq!(missing.len(), 5);
                assert_eq!(unknown, vec!["zz".to_string()]);
            }
            e => panic!("{e:?}"),
        }
    }
}
