// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Activity-driven netlist rewriting.
//!
//! Nets toggling more often than a threshold (the median over LUT outputs by
//! default) are targeted. A target's driving LUT can be Shannon-split on its
//! most active input into two cofactor LUTs and a 2:1 mux, and its loads can
//! be divided between the original driver and a clone.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::netlist::{Cell, CellId, Driver, NetId, Netlist, NetlistError, Sink};
use crate::profile::{ActivityProfile, ProfileError};
use crate::truthtable::{decompose, Cut, TruthTable, TruthTableError};

/// 2:1 mux over inputs `(f0, f1, s)`: `s ? f1 : f0`.
pub const MUX_TABLE: u64 = 0xCA;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptError {
    #[error("netlist has no LUT outputs to take a threshold over")]
    NoLutOutputs,
    #[error("net `{0}` is not driven by a LUT")]
    NotLutDriven(String),
    #[error("net `{0}` is driven by a latch")]
    LatchDriven(String),
    #[error("driver of `{net}` has {inputs} input(s); splitting needs at least 2")]
    TooFewInputs { net: String, inputs: usize },
    #[error("no split variable for `{0}`")]
    NoSplitVar(String),
    #[error("split input {pos} out of range for driver of `{net}`")]
    BadSplitInput { net: String, pos: usize },
    #[error("net `{net}` has fanout {fanout}, below {min}")]
    FanoutBelowThreshold { net: String, fanout: usize, min: usize },
    #[error("net `{net}` has {loads} cell/latch load(s); duplication needs 2")]
    TooFewLoads { net: String, loads: usize },
    #[error("percentile must lie strictly between 0 and 100, got {0}")]
    BadPercentile(f64),
    #[error("unknown net `{0}`")]
    UnknownNet(String),
    #[error("invalid option `{0}`")]
    BadOption(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    TruthTable(#[from] TruthTableError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    Median,
    /// Order statistic at `floor(q/100 * (k-1))`, `q` in (0, 100).
    Percentile(f64),
    Absolute(u64),
}

impl FromStr for ThresholdMode {
    type Err = OptError;

    /// `median`, `percentile:<q>` or `absolute:<count>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OptError::BadOption(s.to_string());
        match s.split_once(':') {
            None if s == "median" => Ok(ThresholdMode::Median),
            Some(("percentile", q)) => {
                let q: f64 = q.parse().map_err(|_| bad())?;
                if !(q > 0.0 && q < 100.0) {
                    return Err(OptError::BadPercentile(q));
                }
                Ok(ThresholdMode::Percentile(q))
            }
            Some(("absolute", n)) => Ok(ThresholdMode::Absolute(n.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMode::Median => f.write_str("median"),
            ThresholdMode::Percentile(q) => write!(f, "percentile:{q}"),
            ThresholdMode::Absolute(n) => write!(f, "absolute:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    ShannonSplit,
    DriverDuplicate,
}

impl Transform {
    /// LUTs added by one application.
    pub fn lut_cost(self) -> usize {
        match self {
            Transform::ShannonSplit => 2,
            Transform::DriverDuplicate => 1,
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::ShannonSplit => "shannon_split",
            Transform::DriverDuplicate => "driver_duplicate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Transforms {
    pub shannon_split: bool,
    pub driver_duplicate: bool,
}

impl Transforms {
    pub const ALL: Transforms = Transforms {
        shannon_split: true,
        driver_duplicate: true,
    };
    pub const NONE: Transforms = Transforms {
        shannon_split: false,
        driver_duplicate: false,
    };

    pub fn is_empty(&self) -> bool {
        !self.shannon_split && !self.driver_duplicate
    }
}

impl FromStr for Transforms {
    type Err = OptError;

    /// `all`, `none`, or a comma-separated list of transform names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => return Ok(Transforms::ALL),
            "none" | "" => return Ok(Transforms::NONE),
            _ => {}
        }
        let mut t = Transforms::NONE;
        for part in s.split(',').map(str::trim) {
            match part {
                "shannon_split" => t.shannon_split = true,
                "driver_duplicate" => t.driver_duplicate = true,
                other => return Err(OptError::BadOption(other.to_string())),
            }
        }
        Ok(t)
    }
}

impl fmt::Display for Transforms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.shannon_split, self.driver_duplicate) {
            (true, true) => f.write_str("shannon_split,driver_duplicate"),
            (true, false) => f.write_str("shannon_split"),
            (false, true) => f.write_str("driver_duplicate"),
            (false, false) => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig {
    pub threshold: ThresholdMode,
    pub transforms: Transforms,
    /// `None` is unlimited.
    pub max_area_growth_pct: Option<f64>,
    pub min_fanout_for_duplication: usize,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            threshold: ThresholdMode::Median,
            transforms: Transforms::ALL,
            max_area_growth_pct: None,
            min_fanout_for_duplication: 2,
        }
    }
}

fn lut_counters(profile: &ActivityProfile, nl: &Netlist) -> Result<Vec<u64>, OptError> {
    let mut v: Vec<u64> = nl.lut_output_nets().map(|n| profile.counter_of(nl, n)).collect();
    if v.is_empty() {
        return Err(OptError::NoLutOutputs);
    }
    v.sort_unstable();
    Ok(v)
}

/// Lower median of the LUT-output counters: index `floor((k-1)/2)` of the sorted list.
pub fn median_threshold(profile: &ActivityProfile, nl: &Netlist) -> Result<u64, OptError> {
    let v = lut_counters(profile, nl)?;
    Ok(v[(v.len() - 1) / 2])
}

pub fn threshold(profile: &ActivityProfile, nl: &Netlist, mode: ThresholdMode) -> Result<u64, OptError> {
    match mode {
        ThresholdMode::Median => median_threshold(profile, nl),
        ThresholdMode::Percentile(q) => {
            if !(q > 0.0 && q < 100.0) {
                return Err(OptError::BadPercentile(q));
            }
            let v = lut_counters(profile, nl)?;
            let idx = ((q / 100.0) * (v.len() - 1) as f64).floor() as usize;
            Ok(v[idx])
        }
        ThresholdMode::Absolute(n) => Ok(n),
    }
}

/// LUT-output nets toggling strictly more than the threshold, most active
/// first, ties by name.
pub fn select_targets(profile: &ActivityProfile, nl: &Netlist, cfg: &OptConfig) -> Result<Vec<NetId>, OptError> {
    let t = threshold(profile, nl, cfg.threshold)?;
    Ok(targets_above(profile, nl, t))
}

fn targets_above(profile: &ActivityProfile, nl: &Netlist, t: u64) -> Vec<NetId> {
    let mut v: Vec<(u64, NetId)> = nl
        .lut_output_nets()
        .map(|n| (profile.counter_of(nl, n), n))
        .filter(|&(c, _)| c > t)
        .collect();
    v.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| nl.net_name(a.1).cmp(nl.net_name(b.1))));
    v.into_iter().map(|(_, n)| n).collect()
}

fn lut_driver(nl: &Netlist, net: NetId) -> Result<CellId, OptError> {
    let info = nl.net(net)?;
    match info.driver {
        Driver::Cell(c) if !nl.cell(c).is_constant() => Ok(c),
        Driver::Latch(_) => Err(OptError::LatchDriven(info.name.clone())),
        _ => Err(OptError::NotLutDriven(info.name.clone())),
    }
}

/// Position of the driver's most active input; the lowest position wins ties.
pub fn choose_split_input(nl: &Netlist, cell: &Cell, profile: &ActivityProfile) -> usize {
    let mut best = 0;
    let mut best_count = None;
    for (i, &n) in cell.inputs.iter().enumerate() {
        let c = profile.counter_of(nl, n);
        if best_count.is_none_or(|b| c > b) {
            best = i;
            best_count = Some(c);
        }
    }
    best
}

/// Names of the nets a Shannon split creates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShannonSplit {
    pub positive_net: String,
    pub negative_net: String,
    pub split_net: String,
}

/// Replace the LUT driving `net` with cofactor LUTs on the input at
/// `split_pos` and a mux selecting between them.
///
/// The driver's table is decomposed over a cut whose right side is every
/// input and whose left side omits the split input, so the split input is the
/// only right-only variable. `activity` is the (counter, threshold) pair for
/// the decomposition's activity guard.
pub fn shannon_rewrite(
    nl: &Netlist,
    net: NetId,
    split_pos: usize,
    activity: (u64, u64),
) -> Result<(Netlist, ShannonSplit), OptError> {
    let cid = lut_driver(nl, net)?;
    let cell = nl.cell(cid).clone();
    let name = nl.net_name(net).to_string();
    let n = cell.inputs.len();
    if n < 2 {
        return Err(OptError::TooFewInputs { net: name, inputs: n });
    }
    if split_pos >= n {
        return Err(OptError::BadSplitInput { net: name, pos: split_pos });
    }
    let right: Vec<usize> = (0..n).collect();
    let left: Vec<usize> = (0..n).filter(|&i| i != split_pos).collect();
    let cut = Cut::new(left, right)?;
    let (_, trace) = decompose(&cell.function, &cut, activity.0, activity.1)?;
    let step = trace.steps.first().ok_or_else(|| OptError::NoSplitVar(name.clone()))?;
    debug_assert_eq!(step.split_var, split_pos);

    let rest: Vec<NetId> = cell
        .inputs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != split_pos)
        .map(|(_, &n)| n)
        .collect();
    let select = cell.inputs[split_pos];

    let mut b = nl.to_builder();
    let pos_name = b.fresh_name(&format!("{name}__f1"));
    let f1 = b.net(&pos_name);
    let neg_name = b.fresh_name(&format!("{name}__f0"));
    let f0 = b.net(&neg_name);
    let new_cells = [
        Cell {
            inputs: rest.clone(),
            output: f1,
            function: step.positive.clone(),
        },
        Cell {
            inputs: rest,
            output: f0,
            function: step.negative.clone(),
        },
        Cell {
            inputs: vec![f0, f1, select],
            output: cell.output,
            function: TruthTable::from_u64(3, MUX_TABLE)?,
        },
    ];
    b.cells_mut().splice(cid.index()..=cid.index(), new_cells);
    let out = b.build()?;
    Ok((
        out,
        ShannonSplit {
            positive_net: pos_name,
            negative_net: neg_name,
            split_net: nl.net_name(select).to_string(),
        },
    ))
}

/// Clone the LUT driving `net` and move the second half of its cell/latch
/// loads (ascending sink order) onto the clone's fresh output net. Primary
/// outputs stay on the original net. Returns the new net's name.
pub fn duplicate_driver(nl: &Netlist, net: NetId, min_fanout: usize) -> Result<(Netlist, String), OptError> {
    let cid = lut_driver(nl, net)?;
    let info = nl.net(net)?;
    let fanout = info.loads.len();
    if fanout < min_fanout {
        return Err(OptError::FanoutBelowThreshold {
            net: info.name.clone(),
            fanout,
            min: min_fanout,
        });
    }
    let loads: Vec<Sink> = info
        .loads
        .iter()
        .copied()
        .filter(|s| !matches!(s, Sink::Output(_)))
        .collect();
    if loads.len() < 2 {
        return Err(OptError::TooFewLoads {
            net: info.name.clone(),
            loads: loads.len(),
        });
    }
    let keep = loads.len().div_ceil(2);
    let mut b = nl.to_builder();
    let dup_name = b.fresh_name(&format!("{}__dup", info.name));
    let dup = b.net(&dup_name);
    for sink in &loads[keep..] {
        match *sink {
            Sink::Cell(c) => {
                for i in b.cells_mut()[c.index()].inputs.iter_mut().filter(|i| **i == net) {
                    *i = dup;
                }
            }
            Sink::Latch(l) => b.latches_mut()[l.index()].input = dup,
            Sink::Output(_) => unreachable!(),
        }
    }
    let mut clone = nl.cell(cid).clone();
    clone.output = dup;
    b.cells_mut().insert(cid.index() + 1, clone);
    Ok((b.build()?, dup_name))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppliedTransform {
    pub net: String,
    pub counter: u64,
    pub transform: Transform,
    pub delta_luts: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedTransform {
    pub net: String,
    pub transform: Transform,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PassReport {
    pub threshold: Option<u64>,
    pub targets: Vec<AppliedTransform>,
    pub skipped: Vec<SkippedTransform>,
    pub luts_before: usize,
    pub luts_after: usize,
}

impl PassReport {
    pub fn delta_luts(&self) -> i64 {
        self.luts_after as i64 - self.luts_before as i64
    }

    /// `<net> <counter> <transform> <dLUT>` lines, skipped transforms as
    /// comments, then a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# net counter transform dLUT\n");
        for t in &self.targets {
            writeln!(s, "{} {} {} {:+}", t.net, t.counter, t.transform, t.delta_luts).unwrap();
        }
        for k in &self.skipped {
            writeln!(s, "# skipped {} {}: {}", k.net, k.transform, k.reason).unwrap();
        }
        let threshold = self.threshold.map_or("-".to_string(), |t| t.to_string());
        writeln!(
            s,
            "summary threshold={threshold} applied={} skipped={} luts_before={} luts_after={} delta={:+}",
            self.targets.len(),
            self.skipped.len(),
            self.luts_before,
            self.luts_after,
            self.delta_luts()
        )
        .unwrap();
        s
    }
}

fn within_budget(cfg: &OptConfig, before: usize, now: usize, cost: usize) -> bool {
    match cfg.max_area_growth_pct {
        None => true,
        Some(limit) => {
            let after = (now + cost) as f64;
            let growth = if before == 0 {
                f64::INFINITY
            } else {
                100.0 * (after - before as f64) / before as f64
            };
            growth <= limit
        }
    }
}

/// Threshold, select and rewrite. A transform that cannot be applied to a
/// target is recorded as skipped; the pass itself only fails on a profile that
/// does not match the netlist.
pub fn run_pass(nl: &Netlist, profile: &ActivityProfile, cfg: &OptConfig) -> Result<(Netlist, PassReport), OptError> {
    profile.check_matches(nl)?;
    let luts_before = nl.area_luts();
    let mut report = PassReport {
        luts_before,
        luts_after: luts_before,
        ..Default::default()
    };
    if cfg.transforms.is_empty() {
        return Ok((nl.clone(), report));
    }
    let t = match threshold(profile, nl, cfg.threshold) {
        Ok(t) => t,
        Err(OptError::NoLutOutputs) => return Ok((nl.clone(), report)),
        Err(e) => return Err(e),
    };
    report.threshold = Some(t);
    let targets: Vec<String> = targets_above(profile, nl, t)
        .into_iter()
        .map(|n| nl.net_name(n).to_string())
        .collect();

    let mut current = nl.clone();
    for name in targets {
        let counter = profile.counter(&name).unwrap_or(0);
        let mut steps = Vec::new();
        if cfg.transforms.shannon_split {
            steps.push(Transform::ShannonSplit);
        }
        if cfg.transforms.driver_duplicate {
            steps.push(Transform::DriverDuplicate);
        }
        for transform in steps {
            let skip = |reason: String| SkippedTransform {
                net: name.clone(),
                transform,
                reason,
            };
            let now = current.area_luts();
            if !within_budget(cfg, luts_before, now, transform.lut_cost()) {
                report.skipped.push(skip("area budget".into()));
                continue;
            }
            let net = current
                .find_net(&name)
                .ok_or_else(|| OptError::UnknownNet(name.clone()))?;
            let result = match transform {
                Transform::ShannonSplit => lut_driver(&current, net).and_then(|cid| {
                    let pos = choose_split_input(&current, current.cell(cid), profile);
                    shannon_rewrite(&current, net, pos, (counter, t)).map(|(n, _)| n)
                }),
                Transform::DriverDuplicate => {
                    duplicate_driver(&current, net, cfg.min_fanout_for_duplication).map(|(n, _)| n)
                }
            };
            match result {
                Ok(next) => {
                    let delta = next.area_luts() as i64 - now as i64;
                    debug_assert_eq!(delta, transform.lut_cost() as i64);
                    report.targets.push(AppliedTransform {
                        net: name.clone(),
                        counter,
                        transform,
                        delta_luts: delta,
                    });
                    current = next;
                }
                Err(e) => report.skipped.push(skip(e.to_string())),
            }
        }
    }
    report.luts_after = current.area_luts();
    Ok((current, report))
}
