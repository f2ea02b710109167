// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! The full flow on one netlist: simulate, optimize, re-simulate both
//! netlists under the same stimulus for power, and check equivalence.

use thiserror::Error;

use crate::equiv::{check_equiv, CheckMode, EquivError, EquivResult, Verdict};
use crate::manifest::RunManifest;
use crate::netlist::Netlist;
use crate::opt::{run_pass, OptError, PassReport};
use crate::power::{estimate_dynamic_power, PowerConfig, PowerError, PowerReport};
use crate::profile::ActivityProfile;
use crate::sim::{simulate, SimError};
use crate::stimulus::{generate_stimulus_with, Stimulus, StimulusError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Stimulus(#[from] StimulusError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error("optimized netlist differs from its input: {0}")]
    NotEquivalent(EquivResult),
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub stimulus: Stimulus,
    pub profile: ActivityProfile,
    pub optimized: Netlist,
    pub pass: PassReport,
    pub optimized_profile: ActivityProfile,
    pub baseline_power: PowerReport,
    /// Carries the delta against `baseline_power`.
    pub optimized_power: PowerReport,
    pub check_mode: CheckMode,
    pub check: EquivResult,
}

pub fn stimulus_for(nl: &Netlist, m: &RunManifest) -> Result<Stimulus, StimulusError> {
    generate_stimulus_with(nl, m.cycles, m.seed, &m.stimulus_options())
}

/// Baseline and optimized power under one shared stimulus. The optimized
/// report carries the delta.
pub fn compare_power(
    base: &Netlist,
    opt: &Netlist,
    stim: &Stimulus,
    cfg: &PowerConfig,
) -> Result<(ActivityProfile, ActivityProfile, PowerReport, PowerReport), PipelineError> {
    let pb = simulate(base, stim)?;
    let po = simulate(opt, stim)?;
    let rb = estimate_dynamic_power(base, &pb, cfg)?;
    let mut ro = estimate_dynamic_power(opt, &po, cfg)?;
    ro.name = format!("{}/opt", rb.name);
    let ro = ro.with_baseline(&rb)?;
    Ok((pb, po, rb, ro))
}

/// Run every stage. Fails if the check finds a mismatch.
pub fn run_pipeline(nl: &Netlist, m: &RunManifest) -> Result<PipelineResult, PipelineError> {
    let stimulus = stimulus_for(nl, m)?;
    let profile = simulate(nl, &stimulus)?;
    let (optimized, pass) = run_pass(nl, &profile, &m.opt)?;
    let (_, optimized_profile, baseline_power, optimized_power) = compare_power(nl, &optimized, &stimulus, &m.power)?;
    let (check_mode, check) = check_equiv(nl, &optimized, &stimulus)?;
    if check.verdict == Verdict::Mismatch {
        return Err(PipelineError::NotEquivalent(check));
    }
    Ok(PipelineResult {
        stimulus,
        profile,
        optimized,
        pass,
        optimized_profile,
        baseline_power,
        optimized_power,
        check_mode,
        check,
    })
}
