// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::PathBuf;

use actopt_core::netlist::Netlist;
use actopt_core::parse_blif;
use proptest::prelude::*;

pub const BENCHMARKS: [&str; 7] = ["counter3", "toggle1", "updown4", "adder8", "alu_slice", "mult4x4", "fifo4"];

pub fn bench_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("benchmarks")
}

pub fn bench_path(name: &str) -> PathBuf {
    bench_dir().join(format!("{name}.blif"))
}

pub fn bench(name: &str) -> Netlist {
    parse_blif(&std::fs::read_to_string(bench_path(name)).unwrap()).unwrap()
}

/// Shape of a random netlist: inputs, latches, and cells given as
/// (fanin picks, truth-table seed). Picks index the nets available so far.
#[derive(Debug, Clone)]
pub struct Shape {
    pub inputs: usize,
    pub latches: usize,
    pub cells: Vec<(Vec<usize>, u64)>,
    pub outputs: usize,
}

pub fn shape(max_inputs: usize, max_latches: usize) -> impl Strategy<Value = Shape> {
    (1..=max_inputs, 0..=max_latches, 1usize..4)
        .prop_flat_map(|(i, l, o)| {
            let cell = (proptest::collection::vec(any::<usize>(), 1..=4), any::<u64>());
            (Just(i), Just(l), proptest::collection::vec(cell, (l + o).max(2)..14), Just(o))
        })
        .prop_map(|(inputs, latches, cells, outputs)| Shape {
            inputs,
            latches,
            cells,
            outputs,
        })
}

/// BLIF text for a shape. Latch outputs are available to every cell; latch
/// data inputs are the first cell outputs; primary outputs are the last ones.
pub fn shape_blif(s: &Shape) -> String {
    let mut nets: Vec<String> = (0..s.inputs).map(|i| format!("i{i}")).collect();
    nets.extend((0..s.latches).map(|i| format!("q{i}")));
    let mut body = String::new();
    for (c, (picks, seed)) in s.cells.iter().enumerate() {
        let mut fanin: Vec<String> = Vec::new();
        for p in picks {
            let n = nets[p % nets.len()].clone();
            if !fanin.contains(&n) {
                fanin.push(n);
            }
        }
        let out = format!("n{c}");
        body += &format!(".names {} {out}\n", fanin.join(" "));
        for m in 0..(1usize << fanin.len()) {
            if (seed >> (m % 64)) & 1 == 1 {
                let row: String = (0..fanin.len()).map(|i| if (m >> i) & 1 == 1 { '1' } else { '0' }).collect();
                body += &format!("{row} 1\n");
            }
        }
        nets.push(out);
    }
    let k = s.cells.len();
    let outs: Vec<String> = (k - s.outputs.min(k)..k).map(|c| format!("n{c}")).collect();
    let mut text = format!(
        ".model rnd\n.inputs {}\n.outputs {}\n",
        (0..s.inputs).map(|i| format!("i{i}")).collect::<Vec<_>>().join(" "),
        outs.join(" ")
    );
    for l in 0..s.latches {
        text += &format!(".latch n{l} q{l} {}\n", l % 2);
    }
    text + &body + ".end\n"
}
