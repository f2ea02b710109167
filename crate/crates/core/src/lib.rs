// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Activity-driven optimization of LUT netlists.
//!
//! The pipeline: parse a BLIF netlist, simulate it to count per-net toggles,
//! rewrite the most active nets (Shannon split of the driving LUT, driver
//! duplication), then estimate dynamic power and check that the rewritten
//! netlist still computes the same function.

pub mod blif;
pub mod equiv;
pub mod manifest;
pub mod netlist;
pub mod opt;
pub mod pipeline;
pub mod power;
pub mod profile;
pub mod sim;
pub mod stimulus;
pub mod truthtable;

pub use blif::{emit_blif, parse_blif, BlifError};
pub use equiv::{check_equiv, exhaustive_equiv, lockstep_equiv, EquivResult, Verdict};
pub use netlist::{Netlist, NetlistBuilder};
pub use opt::{run_pass, OptConfig, PassReport};
pub use power::{estimate_dynamic_power, PowerConfig, PowerReport};
pub use profile::{read_profile, write_profile, ActivityProfile};
pub use sim::simulate;
pub use stimulus::{generate_stimulus, Stimulus};
pub use truthtable::{decompose, Cut, TruthTable};
