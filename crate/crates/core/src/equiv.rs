// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Functional equivalence between two netlists with matching I/O names.
//!
//! Small combinational designs are checked over every input assignment.
//! Sequential designs are simulated side by side; agreement over a bounded
//! run is reported as inconclusive, never as equivalent.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::netlist::Netlist;
use crate::sim::{run_cycles, SimError, Simulator};
use crate::stimulus::Stimulus;

/// Largest input count checked exhaustively.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 16;

const CHUNK: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquivError {
    #[error("{got} primary inputs; exhaustive checking stops at {max}")]
    TooManyInputs { got: usize, max: usize },
    #[error("primary {kind} differ: [{}] vs [{}]", left.join(" "), right.join(" "))]
    IoMismatch {
        kind: &'static str,
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("netlist `{0}` has latches; use lockstep checking")]
    Sequential(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Mismatch,
    /// Outputs agreed on every cycle simulated; not a proof.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Mismatch => "mismatch",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Input trace leading to an output difference.
///
/// `trace[i]` is the input vector (ordered like `input_names`) of counted
/// cycle `i + 1`; initialization reuses `trace[0]`. Combinational
/// counterexamples have a one-vector trace and `cycle == None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input_names: Vec<String>,
    pub trace: Vec<Vec<bool>>,
    pub cycle: Option<u64>,
}

impl Counterexample {
    /// Inputs applied at the mismatching cycle.
    pub fn assignment(&self) -> &[bool] {
        let k = self.cycle.unwrap_or(0) as usize;
        &self.trace[k.saturating_sub(1)]
    }

    /// Re-simulate both netlists on the trace and report whether their
    /// outputs differ at the recorded cycle.
    pub fn replays(&self, a: &Netlist, b: &Netlist) -> Result<bool, EquivError> {
        let k = self.cycle.unwrap_or(0) as usize;
        let perm = output_permutation(a, b)?;
        let at = |nl: &Netlist| -> Result<Vec<bool>, EquivError> {
            let perm = input_permutation(a, nl)?;
            let vectors: Vec<Vec<bool>> = self
                .trace
                .iter()
                .map(|v| {
                    let mut w = vec![false; v.len()];
                    for (i, &j) in perm.iter().enumerate() {
                        w[j] = v[i];
                    }
                    w
                })
                .collect();
            let mut out = Vec::new();
            run_cycles(nl, &vectors, |c, sim| {
                if c == k {
                    out = sim.outputs();
                }
            })?;
            Ok(out)
        };
        let oa = at(a)?;
        let ob = at(b)?;
        Ok(perm.iter().enumerate().any(|(i, &j)| oa[i] != ob[j]))
    }
}

impl fmt::Display for Counterexample {
    /// `<input>=<bit> ...`, prefixed by `cycle=<k>` for sequential mismatches.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(c) = self.cycle {
            write!(f, "cycle={c}")?;
            first = false;
        }
        for (name, &bit) in self.input_names.iter().zip(self.assignment()) {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{name}={}", bit as u8)?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivResult {
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    /// Assignments (exhaustive) or counted cycles (lockstep) compared.
    pub coverage: u64,
}

impl fmt::Display for EquivResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} coverage={}", self.verdict, self.coverage)?;
        if let Some(c) = &self.counterexample {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// For each input of `a`, its position among the inputs of `b`.
fn input_permutation(a: &Netlist, b: &Netlist) -> Result<Vec<usize>, EquivError> {
    permutation("inputs", a.input_names(), b.input_names())
}

/// For each output of `a`, its position among the outputs of `b`.
fn output_permutation(a: &Netlist, b: &Netlist) -> Result<Vec<usize>, EquivError> {
    permutation("outputs", a.output_names(), b.output_names())
}

fn permutation(kind: &'static str, left: Vec<&str>, right: Vec<&str>) -> Result<Vec<usize>, EquivError> {
    let mut l = left.clone();
    let mut r = right.clone();
    l.sort_unstable();
    r.sort_unstable();
    if l != r {
        return Err(EquivError::IoMismatch {
            kind,
            left: left.iter().map(|s| s.to_string()).collect(),
            right: right.iter().map(|s| s.to_string()).collect(),
        });
    }
    let perm = left.iter().map(|n| right.iter().position(|m| m == n).unwrap()).collect();
    Ok(perm)
}

/// Compare two combinational netlists on all `2^k` input assignments.
/// Minterm bit `i` drives input `i` of `a`; the counterexample is the lowest
/// mismatching minterm.
pub fn exhaustive_equiv(a: &Netlist, b: &Netlist) -> Result<EquivResult, EquivError> {
    for nl in [a, b] {
        if !nl.is_combinational() {
            return Err(EquivError::Sequential(nl.name().to_string()));
        }
    }
    let in_perm = input_permutation(a, b)?;
    let out_perm = output_permutation(a, b)?;
    let k = a.inputs().len();
    if k > MAX_EXHAUSTIVE_INPUTS {
        return Err(EquivError::TooManyInputs {
            got: k,
            max: MAX_EXHAUSTIVE_INPUTS,
        });
    }
    let total = 1usize << k;
    // b's input j is a's input in_perm^-1(j)
    let mut b_from_a = vec![0; k];
    for (i, &j) in in_perm.iter().enumerate() {
        b_from_a[j] = i;
    }
    let first = (0..total.div_ceil(CHUNK)).into_par_iter().find_map_first(|chunk| {
        let mut sa = Simulator::new(a);
        let mut sb = Simulator::new(b);
        let mut va = vec![false; k];
        let mut vb = vec![false; k];
        for m in chunk * CHUNK..((chunk + 1) * CHUNK).min(total) {
            for (i, v) in va.iter_mut().enumerate() {
                *v = (m >> i) & 1 == 1;
            }
            for (j, v) in vb.iter_mut().enumerate() {
                *v = va[b_from_a[j]];
            }
            sa.settle(&va).expect("width checked");
            sb.settle(&vb).expect("width checked");
            let (oa, ob) = (sa.outputs(), sb.outputs());
            if out_perm.iter().enumerate().any(|(i, &j)| oa[i] != ob[j]) {
                return Some(va.clone());
            }
        }
        None
    });
    Ok(match first {
        None => EquivResult {
            verdict: Verdict::Equivalent,
            counterexample: None,
            coverage: total as u64,
        },
        Some(v) => EquivResult {
            verdict: Verdict::Mismatch,
            counterexample: Some(Counterexample {
                input_names: a.input_names().iter().map(|s| s.to_string()).collect(),
                trace: vec![v],
                cycle: None,
            }),
            coverage: total as u64,
        },
    })
}

/// Simulate both netlists under `stim` and compare primary outputs on every
/// cycle, including initialization. Reports the first differing cycle.
pub fn lockstep_equiv(a: &Netlist, b: &Netlist, stim: &Stimulus) -> Result<EquivResult, EquivError> {
    input_permutation(a, b)?;
    let out_perm = output_permutation(a, b)?;
    if stim.num_cycles() == 0 {
        return Ok(EquivResult {
            verdict: Verdict::Inconclusive,
            counterexample: None,
            coverage: 0,
        });
    }
    let va = stim.bind(a).map_err(SimError::from)?;
    let vb = stim.bind(b).map_err(SimError::from)?;
    let mut outs_a = Vec::with_capacity(va.len() + 1);
    run_cycles(a, &va, |_, s| outs_a.push(s.outputs()))?;
    let mut diff = None;
    let mut cycle = 0;
    run_cycles(b, &vb, |c, s| {
        if diff.is_none() {
            let ob = s.outputs();
            if out_perm.iter().enumerate().any(|(i, &j)| outs_a[c][i] != ob[j]) {
                diff = Some(c);
            }
        }
        cycle = c;
    })?;
    debug_assert_eq!(cycle as u64, stim.num_cycles());
    Ok(match diff {
        None => EquivResult {
            verdict: Verdict::Inconclusive,
            counterexample: None,
            coverage: stim.num_cycles(),
        },
        Some(c) => EquivResult {
            verdict: Verdict::Mismatch,
            counterexample: Some(Counterexample {
                input_names: a.input_names().iter().map(|s| s.to_string()).collect(),
                trace: va[..c.max(1)].to_vec(),
                cycle: Some(c as u64),
            }),
            coverage: c as u64,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Lockstep,
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Exhaustive => "exhaustive",
            CheckMode::Lockstep => "lockstep",
        })
    }
}

/// Exhaustive for combinational designs within the input cap, lockstep otherwise.
pub fn check_mode(a: &Netlist, b: &Netlist) -> CheckMode {
    if a.is_combinational() && b.is_combinational() && a.inputs().len() <= MAX_EXHAUSTIVE_INPUTS {
        CheckMode::Exhaustive
    } else {
        CheckMode::Lockstep
    }
}

/// Check with the mode [`check_mode`] picks; `stim` is used for lockstep only.
pub fn check_equiv(a: &Netlist, b: &Netlist, stim: &Stimulus) -> Result<(CheckMode, EquivResult), EquivError> {
    let mode = check_mode(a, b);
    let r = match mode {
        CheckMode::Exhaustive => exhaustive_equiv(a, b)?,
        CheckMode::Lockstep => lockstep_equiv(a, b, stim)?,
    };
    Ok((mode, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blif::parse_blif;
    use crate::stimulus::generate_stimulus;

    fn p(s: &str) -> Netlist {
        parse_blif(s).unwrap()
    }

    #[test]
    fn buffer_vs_double_inverter() {
        let a = p(".model a\n.inputs x\n.outputs y\n.names x y\n1 1\n.end\n");
        let b = p(".model b\n.inputs x\n.outputs y\n.names x t\n0 1\n.names t y\n0 1\n.end\n");
        let r = exhaustive_equiv(&a, &b).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert_eq!(r.coverage, 2);
    }

    #[test]
    fn and_vs_or_counterexample() {
        let a = p(".model a\n.inputs x0 x1\n.outputs y\n.names x0 x1 y\n11 1\n.end\n");
        let b = p(".model b\n.inputs x0 x1\n.outputs y\n.names x0 x1 y\n1- 1\n-1 1\n.end\n");
        let r = exhaustive_equiv(&a, &b).unwrap();
        assert_eq!(r.verdict, Verdict::Mismatch);
        let c = r.counterexample.unwrap();
        assert_eq!(c.to_string(), "x0=1 x1=0");
        assert!(c.replays(&a, &b).unwrap());
        assert_eq!(exhaustive_equiv(&a, &a).unwrap().verdict, Verdict::Equivalent);
    }

    #[test]
    fn io_order_does_not_matter() {
        let a = p(".model a\n.inputs x0 x1\n.outputs y z\n.names x0 x1 y\n10 1\n.names x0 z\n1 1\n.end\n");
        let b = p(".model b\n.inputs x1 x0\n.outputs z y\n.names x0 x1 y\n10 1\n.names x0 z\n1 1\n.end\n");
        assert_eq!(exhaustive_equiv(&a, &b).unwrap().verdict, Verdict::Equivalent);
        let c = p(".model c\n.inputs x1 x0\n.outputs z y\n.names x0 x1 y\n01 1\n.names x0 z\n1 1\n.end\n");
        let r = exhaustive_equiv(&a, &c).unwrap();
        let cex = r.counterexample.unwrap();
        assert_eq!(cex.to_string(), "x0=1 x1=0");
        assert!(cex.replays(&a, &c).unwrap());
    }

    #[test]
    fn errors() {
        let a = p(".model a\n.inputs x\n.outputs y\n.names x y\n1 1\n.end\n");
        let b = p(".model b\n.inputs w\n.outputs y\n.names w y\n1 1\n.end\n");
        assert!(matches!(exhaustive_equiv(&a, &b), Err(EquivError::IoMismatch { kind: "inputs", .. })));
        let s = p(".model s\n.inputs x\n.outputs y\n.latch x y 0\n.end\n");
        assert!(matches!(exhaustive_equiv(&s, &s), Err(EquivError::Sequential(_))));
        let mut doc = String::from(".model w\n.inputs");
        for i in 0..17 {
            doc += &format!(" i{i}");
        }
        doc += "\n.outputs i0\n.end\n";
        let w = p(&doc);
        assert!(matches!(exhaustive_equiv(&w, &w), Err(EquivError::TooManyInputs { got: 17, .. })));
        assert_eq!(check_mode(&w, &w), CheckMode::Lockstep);
    }

    const COUNTER: &str = ".model c\n.inputs en\n.outputs q0 q1\n\
        .names en q0 d0\n10 1\n01 1\n.names en q0 q1 d1\n-01 1\n0-1 1\n110 1\n\
        .latch d0 q0 0\n.latch d1 q1 0\n.end\n";

    #[test]
    fn lockstep_agrees_then_diverges() {
        let a = p(COUNTER);
        let stim = generate_stimulus(&a, 1000, 5).unwrap();
        let r = lockstep_equiv(&a, &a, &stim).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.coverage, 1000);

        let inverted = COUNTER.replace(".names en q0 d0\n10 1\n01 1\n", ".names en q0 d0\n00 1\n11 1\n");
        let b = p(&inverted);
        let r = lockstep_equiv(&a, &b, &stim).unwrap();
        assert_eq!(r.verdict, Verdict::Mismatch);
        let c = r.counterexample.unwrap();
        assert_eq!(c.cycle, Some(1));
        assert!(c.to_string().starts_with("cycle=1 en="));
        assert!(c.replays(&a, &b).unwrap());
    }

    #[test]
    fn zero_cycles_is_vacuous() {
        let a = p(COUNTER);
        let stim = Stimulus::new(0, 0, vec![("en".into(), crate::stimulus::Waveform::Constant(true))]).unwrap();
        let r = lockstep_equiv(&a, &a, &stim).unwrap();
        assert_eq!((r.verdict, r.coverage), (Verdict::Inconclusive, 0));
    }

    #[test]
    fn exhaustive_matches_truth_table_eval() {
        use crate::truthtable::TruthTable;
        for f in 0u64..256 {
            for g in [f, f ^ 0x10, 0x96] {
                let rows = |t: &TruthTable| {
                    let mut s = String::new();
                    for m in 0..8 {
                        if t.bit(m) {
                            s += &format!("{}{}{} 1\n", m & 1, (m >> 1) & 1, (m >> 2) & 1);
                        }
                    }
                    s
                };
                let tf = TruthTable::from_u64(3, f).unwrap();
                let tg = TruthTable::from_u64(3, g).unwrap();
                let a = p(&format!(".model a\n.inputs x0 x1 x2\n.outputs y\n.names x0 x1 x2 y\n{}.end\n", rows(&tf)));
                let b = p(&format!(".model b\n.inputs x0 x1 x2\n.outputs y\n.names x0 x1 x2 y\n{}.end\n", rows(&tg)));
                let r = exhaustive_equiv(&a, &b).unwrap();
                let first = (0..8).find(|&m| tf.bit(m) != tg.bit(m));
                assert_eq!(r.verdict == Verdict::Equivalent, first.is_none());
                if let Some(m) = first {
                    let v = &r.counterexample.unwrap().trace[0];
                    let got: usize = v.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum();
                    assert_eq!(got, m);
                }
            }
        }
    }
}
