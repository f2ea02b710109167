// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Per-net toggle counters and their line-oriented text format:
//!
//! ```text
//! simopt-profile v1 cycles=512 digest=00000000deadbeef
//! # warning: latch q has unknown init; using 0
//! a 512
//! b 0
//! ```
//!
//! Net lines are sorted by name. `# warning:` comments carry simulation
//! warnings; other comments are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::netlist::{NetId, Netlist};
use crate::stimulus::fnv1a;

const MAGIC: &str = "simopt-profile";
const VERSION: &str = "v1";
const WARNING_PREFIX: &str = "# warning: ";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("unsupported profile version `{0}`")]
    Version(String),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("net `{net}` toggled {counter} times in {cycles} cycles")]
    CounterExceedsCycles { net: String, counter: u64, cycles: u64 },
    #[error("net `{0}` listed twice")]
    DuplicateNet(String),
    #[error("profile does not match netlist (missing: [{}], extra: [{}])", missing.join(", "), extra.join(", "))]
    NetMismatch { missing: Vec<String>, extra: Vec<String> },
    #[error("refusing to merge profiles with identical stimulus digests")]
    SameDigest,
}

/// Toggle counts for every net of a simulated netlist, keyed by net name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityProfile {
    num_cycles: u64,
    counters: BTreeMap<String, u64>,
    digest: u64,
    warnings: Vec<String>,
}

impl ActivityProfile {
    pub fn from_parts(
        num_cycles: u64,
        counters: BTreeMap<String, u64>,
        digest: u64,
        warnings: Vec<String>,
    ) -> Result<Self, ProfileError> {
        if let Some((net, &counter)) = counters.iter().find(|(_, &c)| c > num_cycles) {
            return Err(ProfileError::CounterExceedsCycles {
                net: net.clone(),
                counter,
                cycles: num_cycles,
            });
        }
        Ok(ActivityProfile {
            num_cycles,
            counters,
            digest,
            warnings,
        })
    }

    pub fn num_cycles(&self) -> u64 {
        self.num_cycles
    }

    pub fn digest(&self) -> u64 {
        self.digest
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn counters(&self) -> &BTreeMap<String, u64> {
        &self.counters
    }

    pub fn counter(&self, net: &str) -> Option<u64> {
        self.counters.get(net).copied()
    }

    /// Counter of a net of `nl`, 0 for nets the profile does not know.
    pub fn counter_of(&self, nl: &Netlist, net: NetId) -> u64 {
        self.counter(nl.net_name(net)).unwrap_or(0)
    }

    /// Switching activity factor: toggles per cycle, in [0, 1].
    pub fn alpha(&self, net: &str) -> Option<f64> {
        let c = self.counter(net)?;
        Some(if self.num_cycles == 0 {
            0.0
        } else {
            c as f64 / self.num_cycles as f64
        })
    }

    /// Check that the profile covers exactly the nets of `nl`.
    pub fn check_matches(&self, nl: &Netlist) -> Result<(), ProfileError> {
        let mut missing: Vec<String> = nl
            .net_ids()
            .map(|n| nl.net_name(n))
            .filter(|n| !self.counters.contains_key(*n))
            .map(str::to_string)
            .collect();
        missing.sort();
        let extra: Vec<String> = self
            .counters
            .keys()
            .filter(|k| nl.find_net(k).is_none())
            .cloned()
            .collect();
        if missing.is_empty() && extra.is_empty() {
            Ok(())
        } else {
            Err(ProfileError::NetMismatch { missing, extra })
        }
    }

    /// Sum two profiles of the same netlist taken under different stimuli.
    pub fn merge(&self, other: &ActivityProfile) -> Result<ActivityProfile, ProfileError> {
        if self.digest == other.digest {
            return Err(ProfileError::SameDigest);
        }
        let keys_a: Vec<_> = self.counters.keys().collect();
        let keys_b: Vec<_> = other.counters.keys().collect();
        if keys_a != keys_b {
            let missing = other
                .counters
                .keys()
                .filter(|k| !self.counters.contains_key(*k))
                .cloned()
                .collect();
            let extra = self
                .counters
                .keys()
                .filter(|k| !other.counters.contains_key(*k))
                .cloned()
                .collect();
            return Err(ProfileError::NetMismatch { missing, extra });
        }
        let counters = self
            .counters
            .iter()
            .map(|(k, v)| (k.clone(), v + other.counters[k]))
            .collect();
        let digest = fnv1a(fnv1a(self.digest, &other.digest.to_le_bytes()), b"merge");
        let mut warnings = self.warnings.clone();
        warnings.extend(other.warnings.iter().cloned());
        ActivityProfile::from_parts(self.num_cycles + other.num_cycles, counters, digest, warnings)
    }
}

pub fn write_profile(p: &ActivityProfile) -> String {
    let mut s = String::new();
    writeln!(s, "{MAGIC} {VERSION} cycles={} digest={:016x}", p.num_cycles, p.digest).unwrap();
    for w in &p.warnings {
        writeln!(s, "{WARNING_PREFIX}{w}").unwrap();
    }
    for (name, c) in &p.counters {
        writeln!(s, "{name} {c}").unwrap();
    }
    s
}

pub fn read_profile(text: &str) -> Result<ActivityProfile, ProfileError> {
    let malformed = |line: usize, msg: &str| ProfileError::Malformed {
        line,
        msg: msg.to_string(),
    };
    let mut header: Option<(u64, u64)> = None;
    let mut counters = BTreeMap::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(w) = raw.strip_prefix(WARNING_PREFIX) {
            warnings.push(w.to_string());
            continue;
        }
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((cycles, _)) = header else {
            let [magic, version, cycles, digest] = fields[..] else {
                return Err(malformed(lineno, "expected profile header"));
            };
            if magic != MAGIC {
                return Err(malformed(lineno, "expected profile header"));
            }
            if version != VERSION {
                return Err(ProfileError::Version(version.to_string()));
            }
            let cycles = cycles
                .strip_prefix("cycles=")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed(lineno, "bad cycles field"))?;
            let digest = digest
                .strip_prefix("digest=")
                .filter(|v| v.len() == 16)
                .and_then(|v| u64::from_str_radix(v, 16).ok())
                .ok_or_else(|| malformed(lineno, "bad digest field"))?;
            header = Some((cycles, digest));
            continue;
        };
        let [name, count] = fields[..] else {
            return Err(malformed(lineno, "expected `<net> <counter>`"));
        };
        let count: u64 = count
            .parse()
            .map_err(|_| malformed(lineno, "counter is not a nonnegative integer"))?;
        if count > cycles {
            return Err(ProfileError::CounterExceedsCycles {
                net: name.to_string(),
                counter: count,
                cycles,
            });
        }
        if counters.insert(name.to_string(), count).is_some() {
            return Err(ProfileError::DuplicateNet(name.to_string()));
        }
    }
    let (cycles, digest) = header.ok_or_else(|| malformed(1, "missing profile header"))?;
    ActivityProfile::from_parts(cycles, counters, digest, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ActivityProfile {
        let counters = [("a".to_string(), 512), ("b".to_string(), 0)].into_iter().collect();
        ActivityProfile::from_parts(512, counters, 0xdead_beef, vec![]).unwrap()
    }

    #[test]
    fn round_trip_exact() {
        let p = sample();
        let text = write_profile(&p);
        assert_eq!(text, "simopt-profile v1 cycles=512 digest=00000000deadbeef\na 512\nb 0\n");
        assert_eq!(read_profile(&text).unwrap(), p);
    }

    #[test]
    fn counter_above_cycles_rejected() {
        let text = "simopt-profile v1 cycles=512 digest=0000000000000001\nx 600\n";
        assert!(matches!(
            read_profile(text),
            Err(ProfileError::CounterExceedsCycles { counter: 600, cycles: 512, .. })
        ));
    }

    #[test]
    fn empty_profile_is_valid() {
        let text = "simopt-profile v1 cycles=10 digest=0000000000000000\n";
        let p = read_profile(text).unwrap();
        assert!(p.counters().is_empty());
        assert_eq!(write_profile(&p), text);
    }

    #[test]
    fn header_errors() {
        assert!(matches!(
            read_profile("simopt-profile v2 cycles=1 digest=0000000000000000\n"),
            Err(ProfileError::Version(v)) if v == "v2"
        ));
        assert!(matches!(read_profile(""), Err(ProfileError::Malformed { .. })));
        assert!(matches!(
            read_profile("simopt-profile v1 cycles=1 digest=00\n"),
            Err(ProfileError::Malformed { line: 1, .. })
        ));
        let dup = "simopt-profile v1 cycles=3 digest=0000000000000000\na 1\na 2\n";
        assert_eq!(read_profile(dup), Err(ProfileError::DuplicateNet("a".into())));
        let bad = "simopt-profile v1 cycles=3 digest=0000000000000000\na -1\n";
        assert!(matches!(read_profile(bad), Err(ProfileError::Malformed { line: 2, .. })));
    }

    #[test]
    fn comments_and_warnings() {
        let text = "# produced by hand\nsimopt-profile v1 cycles=4 digest=0000000000000002\n\
                    # warning: latch q has unknown init; using 0\n# note\nq 4 # trailing\n";
        let p = read_profile(text).unwrap();
        assert_eq!(p.warnings(), ["latch q has unknown init; using 0"]);
        assert_eq!(p.counter("q"), Some(4));
        assert_eq!(read_profile(&write_profile(&p)).unwrap(), p);
    }

    #[test]
    fn merge_requires_distinct_digests() {
        let p = sample();
        assert_eq!(p.merge(&p), Err(ProfileError::SameDigest));
        let q = ActivityProfile::from_parts(100, p.counters().clone().into_keys().map(|k| (k, 50)).collect(), 1, vec![]).unwrap();
        let m = p.merge(&q).unwrap();
        assert_eq!(m.num_cycles(), 612);
        assert_eq!(m.counter("a"), Some(562));
        assert_eq!(m.counter("b"), Some(50));
    }

    proptest! {
        #[test]
        fn write_read_identity(
            cycles in 0u64..10_000,
            digest in any::<u64>(),
            nets in proptest::collection::btree_map("[a-z_][a-z0-9_\\[\\]$.]{0,12}", 0u64..=1, 0..20),
        ) {
            let counters = nets.into_iter().map(|(k, v)| (k, v * cycles / 2)).collect();
            let p = ActivityProfile::from_parts(cycles, counters, digest, vec![]).unwrap();
            let text = write_profile(&p);
            prop_assert_eq!(read_profile(&text).unwrap(), p);
            prop_assert_eq!(write_profile(&read_profile(&text).unwrap()), text);
        }
    }
}
