// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-valued cycle-based simulation and toggle counting.
//!
//! Cycle 0 initializes state (latch init values, first input vector) and is not
//! counted. Each counted cycle applies inputs, settles the combinational logic
//! in topological order, compares every net against the previous cycle, and
//! then clocks the latches.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::netlist::{LatchInit, Netlist};
use crate::profile::ActivityProfile;
use crate::stimulus::{Stimulus, StimulusError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("simulation needs at least one cycle")]
    ZeroCycles,
    #[error(transparent)]
    Stimulus(#[from] StimulusError),
    #[error("input vector has {got} values, netlist has {expected} inputs")]
    InputWidth { expected: usize, got: usize },
}

/// Net values of one netlist, advanced one cycle at a time.
pub struct Simulator<'a> {
    nl: &'a Netlist,
    values: Vec<bool>,
    state: Vec<bool>,
    warnings: Vec<String>,
}

impl<'a> Simulator<'a> {
    /// Latches with unknown init start at 0; each gets a warning.
    pub fn new(nl: &'a Netlist) -> Self {
        let mut warnings = Vec::new();
        let state = nl
            .latches()
            .iter()
            .map(|l| match l.init {
                LatchInit::One => true,
                LatchInit::Zero => false,
                LatchInit::Unknown => {
                    warnings.push(format!("latch {} has unknown init; using 0", nl.net_name(l.output)));
                    false
                }
            })
            .collect();
        Simulator {
            nl,
            values: vec![false; nl.num_nets()],
            state,
            warnings,
        }
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Drive inputs and latch outputs, then evaluate every cell.
    pub fn settle(&mut self, inputs: &[bool]) -> Result<(), SimError> {
        let nl = self.nl;
        if inputs.len() != nl.inputs().len() {
            return Err(SimError::InputWidth {
                expected: nl.inputs().len(),
                got: inputs.len(),
            });
        }
        for (&id, &v) in nl.inputs().iter().zip(inputs) {
            self.values[id.index()] = v;
        }
        for (l, &v) in nl.latches().iter().zip(&self.state) {
            self.values[l.output.index()] = v;
        }
        for &cid in nl.topo_order() {
            let cell = nl.cell(cid);
            let m = cell
                .inputs
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, n)| acc | (self.values[n.index()] as usize) << i);
            self.values[cell.output.index()] = cell.function.bit(m);
        }
        Ok(())
    }

    /// Rising clock edge: every latch captures its data input.
    pub fn clock(&mut self) {
        for (l, s) in self.nl.latches().iter().zip(self.state.iter_mut()) {
            *s = self.values[l.input.index()];
        }
    }

    /// Current value of every net, indexed by net id.
    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn outputs(&self) -> Vec<bool> {
        self.nl.outputs().iter().map(|n| self.values[n.index()]).collect()
    }
}

/// Run the initialization cycle and then one counted cycle per input vector.
/// `observe(cycle, values)` sees settled values; cycle 0 is initialization.
pub fn run_cycles(
    nl: &Netlist,
    vectors: &[Vec<bool>],
    mut observe: impl FnMut(usize, &Simulator<'_>),
) -> Result<Vec<String>, SimError> {
    let Some(first) = vectors.first() else {
        return Err(SimError::ZeroCycles);
    };
    let mut sim = Simulator::new(nl);
    sim.settle(first)?;
    observe(0, &sim);
    sim.clock();
    for (i, v) in vectors.iter().enumerate() {
        sim.settle(v)?;
        observe(i + 1, &sim);
        sim.clock();
    }
    Ok(sim.warnings)
}

/// Simulate under `stim` and count value changes on every net.
pub fn simulate(nl: &Netlist, stim: &Stimulus) -> Result<ActivityProfile, SimError> {
    if stim.num_cycles() == 0 {
        return Err(SimError::ZeroCycles);
    }
    let vectors = stim.bind(nl)?;
    let mut prev = vec![false; nl.num_nets()];
    let mut counts = vec![0u64; nl.num_nets()];
    let mut warnings = run_cycles(nl, &vectors, |cycle, sim| {
        let now = sim.values();
        if cycle > 0 {
            for ((c, p), v) in counts.iter_mut().zip(&prev).zip(now) {
                *c += (p != v) as u64;
            }
        }
        prev.copy_from_slice(now);
    })?;
    warnings.extend(stim.notes().iter().cloned());
    let counters: BTreeMap<String, u64> = nl
        .net_ids()
        .map(|id| (nl.net_name(id).to_string(), counts[id.index()]))
        .collect();
    Ok(ActivityProfile::from_parts(stim.num_cycles(), counters, stim.digest(), warnings)
        .expect("counts are bounded by the cycle count"))
}
