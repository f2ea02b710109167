// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! LUT-level netlist graph: cells, latches, primary I/O and the nets between them.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::truthtable::{TruthTable, MAX_VARS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatchId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl CellId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LatchId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("net `{0}` has more than one driver")]
    MultipleDrivers(String),
    #[error("net `{0}` has no driver")]
    Undriven(String),
    #[error("combinational cycle through net `{0}`")]
    CombinationalCycle(String),
    #[error("cell driving `{net}` has {arity} inputs, at most {MAX_VARS} are supported")]
    ArityTooLarge { net: String, arity: usize },
    #[error("cell driving `{net}` has {inputs} inputs but a {vars}-variable function")]
    ArityMismatch { net: String, inputs: usize, vars: usize },
    #[error("unknown net id {0}")]
    UnknownNet(u32),
    #[error("net `{0}` is listed as a primary output more than once")]
    DuplicateOutput(String),
}

/// What drives a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Driver {
    /// Primary input, by position in [`Netlist::inputs`].
    Input(usize),
    Cell(CellId),
    Latch(LatchId),
}

/// A reader of a net. Ordering is cells, then latches, then primary outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sink {
    Cell(CellId),
    Latch(LatchId),
    /// Primary output, by position in [`Netlist::outputs`].
    Output(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetInfo {
    pub name: String,
    pub driver: Driver,
    /// Distinct sinks in ascending order.
    pub loads: Vec<Sink>,
}

/// A LUT. Variable `i` of `function` is bound to `inputs[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub inputs: Vec<NetId>,
    pub output: NetId,
    pub function: TruthTable,
}

impl Cell {
    pub fn is_constant(&self) -> bool {
        self.inputs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatchInit {
    Zero,
    One,
    Unknown,
}

/// Rising-edge register on the single global clock.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Latch {
    pub input: NetId,
    pub output: NetId,
    pub init: LatchInit,
    /// `<type> <control>` tokens as written in the source, kept for emission.
    pub control: Option<(String, String)>,
}

/// A validated netlist. Construct through [`NetlistBuilder`].
#[derive(Debug, Clone)]
pub struct Netlist {
    name: String,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    cells: Vec<Cell>,
    latches: Vec<Latch>,
    nets: Vec<NetInfo>,
    by_name: HashMap<String, NetId>,
    topo: Vec<CellId>,
}

impl Netlist {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.index()]
    }

    pub fn latch(&self, id: LatchId) -> &Latch {
        &self.latches[id.index()]
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    pub fn net_ids(&self) -> impl Iterator<Item = NetId> + '_ {
        (0..self.nets.len() as u32).map(NetId)
    }

    pub fn net(&self, id: NetId) -> Result<&NetInfo, NetlistError> {
        self.nets.get(id.index()).ok_or(NetlistError::UnknownNet(id.0))
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.nets[id.index()].name
    }

    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.by_name.get(name).copied()
    }

    /// Cells in an order where every cell comes after the cells feeding it.
    pub fn topo_order(&self) -> &[CellId] {
        &self.topo
    }

    pub fn is_combinational(&self) -> bool {
        self.latches.is_empty()
    }

    /// Number of distinct sinks reading `net`.
    pub fn fanout(&self, net: NetId) -> Result<usize, NetlistError> {
        Ok(self.net(net)?.loads.len())
    }

    /// The cell driving `net`, if a cell drives it.
    pub fn driver_cell(&self, net: NetId) -> Option<CellId> {
        match self.nets.get(net.index())?.driver {
            Driver::Cell(c) => Some(c),
            _ => None,
        }
    }

    /// LUT count: cells with at least one input.
    pub fn area_luts(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_constant()).count()
    }

    /// Output nets of non-constant cells, in cell order.
    pub fn lut_output_nets(&self) -> impl Iterator<Item = NetId> + '_ {
        self.cells.iter().filter(|c| !c.is_constant()).map(|c| c.output)
    }

    pub fn input_names(&self) -> Vec<&str> {
        self.inputs.iter().map(|&n| self.net_name(n)).collect()
    }

    pub fn output_names(&self) -> Vec<&str> {
        self.outputs.iter().map(|&n| self.net_name(n)).collect()
    }

    /// Structural equality after mapping nets by name: same I/O lists, and the
    /// same cells and latches in the same order.
    pub fn same_structure(&self, other: &Netlist) -> bool {
        let names = |nl: &Netlist, ids: &[NetId]| -> Vec<String> {
            ids.iter().map(|&n| nl.net_name(n).to_string()).collect()
        };
        if self.name != other.name
            || names(self, &self.inputs) != names(other, &other.inputs)
            || names(self, &self.outputs) != names(other, &other.outputs)
            || self.cells.len() != other.cells.len()
            || self.latches.len() != other.latches.len()
        {
            return false;
        }
        let cells_match = self.cells.iter().zip(&other.cells).all(|(a, b)| {
            a.function == b.function
                && self.net_name(a.output) == other.net_name(b.output)
                && names(self, &a.inputs) == names(other, &b.inputs)
        });
        let latches_match = self.latches.iter().zip(&other.latches).all(|(a, b)| {
            a.init == b.init
                && self.net_name(a.input) == other.net_name(b.input)
                && self.net_name(a.output) == other.net_name(b.output)
        });
        cells_match && latches_match
    }

    /// Builder preloaded with this netlist's contents, for producing a modified copy.
    pub fn to_builder(&self) -> NetlistBuilder {
        NetlistBuilder {
            name: self.name.clone(),
            net_names: self.nets.iter().map(|n| n.name.clone()).collect(),
            by_name: self.by_name.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            cells: self.cells.clone(),
            latches: self.latches.clone(),
        }
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} inputs, {} outputs, {} cells ({} LUTs), {} latches, {} nets",
            self.name,
            self.inputs.len(),
            self.outputs.len(),
            self.cells.len(),
            self.area_luts(),
            self.latches.len(),
            self.nets.len()
        )
    }
}

/// Mutable staging area for a netlist. Nets are created on first reference by
/// name; [`NetlistBuilder::build`] checks every structural invariant.
#[derive(Debug, Clone, Default)]
pub struct NetlistBuilder {
    name: String,
    net_names: Vec<String>,
    by_name: HashMap<String, NetId>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    cells: Vec<Cell>,
    latches: Vec<Latch>,
}

impl NetlistBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetlistBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Id for `name`, creating the net if needed.
    pub fn net(&mut self, name: &str) -> NetId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = NetId(self.net_names.len() as u32);
        self.net_names.push(name.to_string());
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn has_net(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    /// A net name derived from `base` that is not yet in use.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.has_net(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !self.has_net(n))
            .unwrap()
    }

    pub fn net_name(&self, id: NetId) -> &str {
        &self.net_names[id.index()]
    }

    pub fn add_input(&mut self, name: &str) -> NetId {
        let id = self.net(name);
        self.inputs.push(id);
        id
    }

    pub fn add_output(&mut self, name: &str) -> NetId {
        let id = self.net(name);
        self.outputs.push(id);
        id
    }

    pub fn add_cell(&mut self, inputs: Vec<NetId>, output: NetId, function: TruthTable) -> CellId {
        self.cells.push(Cell {
            inputs,
            output,
            function,
        });
        CellId(self.cells.len() as u32 - 1)
    }

    pub fn add_latch(
        &mut self,
        input: NetId,
        output: NetId,
        init: LatchInit,
        control: Option<(String, String)>,
    ) -> LatchId {
        self.latches.push(Latch {
            input,
            output,
            init,
            control,
        });
        LatchId(self.latches.len() as u32 - 1)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut Vec<Cell> {
        &mut self.cells
    }

    pub fn latches_mut(&mut self) -> &mut Vec<Latch> {
        &mut self.latches
    }

    pub fn build(self) -> Result<Netlist, NetlistError> {
        let num_nets = self.net_names.len();
        let check = |id: NetId| -> Result<(), NetlistError> {
            if id.index() < num_nets {
                Ok(())
            } else {
                Err(NetlistError::UnknownNet(id.0))
            }
        };
        let name_of = |id: NetId| self.net_names[id.index()].clone();

        let mut drivers: Vec<Option<Driver>> = vec![None; num_nets];
        let mut set_driver = |id: NetId, d: Driver| -> Result<(), NetlistError> {
            check(id)?;
            let slot = &mut drivers[id.index()];
            if slot.is_some() {
                return Err(NetlistError::MultipleDrivers(name_of(id)));
            }
            *slot = Some(d);
            Ok(())
        };
        for (i, &n) in self.inputs.iter().enumerate() {
            set_driver(n, Driver::Input(i))?;
        }
        for (i, c) in self.cells.iter().enumerate() {
            set_driver(c.output, Driver::Cell(CellId(i as u32)))?;
        }
        for (i, l) in self.latches.iter().enumerate() {
            set_driver(l.output, Driver::Latch(LatchId(i as u32)))?;
        }

        let mut loads: Vec<Vec<Sink>> = vec![Vec::new(); num_nets];
        for (i, c) in self.cells.iter().enumerate() {
            if c.inputs.len() > MAX_VARS {
                return Err(NetlistError::ArityTooLarge {
                    net: name_of(c.output),
                    arity: c.inputs.len(),
                });
            }
            if c.function.num_vars() != c.inputs.len() {
                return Err(NetlistError::ArityMismatch {
                    net: name_of(c.output),
                    inputs: c.inputs.len(),
                    vars: c.function.num_vars(),
                });
            }
            for &n in &c.inputs {
                check(n)?;
                loads[n.index()].push(Sink::Cell(CellId(i as u32)));
            }
        }
        for (i, l) in self.latches.iter().enumerate() {
            check(l.input)?;
            loads[l.input.index()].push(Sink::Latch(LatchId(i as u32)));
        }
        let mut seen_outputs = vec![false; num_nets];
        for (i, &n) in self.outputs.iter().enumerate() {
            check(n)?;
            if std::mem::replace(&mut seen_outputs[n.index()], true) {
                return Err(NetlistError::DuplicateOutput(name_of(n)));
            }
            loads[n.index()].push(Sink::Output(i));
        }

        let mut nets = Vec::with_capacity(num_nets);
        for (i, (driver, mut sinks)) in drivers.into_iter().zip(loads).enumerate() {
            let driver = driver.ok_or_else(|| NetlistError::Undriven(self.net_names[i].clone()))?;
            sinks.sort();
            sinks.dedup();
            nets.push(NetInfo {
                name: self.net_names[i].clone(),
                driver,
                loads: sinks,
            });
        }

        let topo = topo_sort(&self.cells, &nets).map_err(|n| NetlistError::CombinationalCycle(name_of(n)))?;

        Ok(Netlist {
            name: self.name,
            inputs: self.inputs,
            outputs: self.outputs,
            cells: self.cells,
            latches: self.latches,
            nets,
            by_name: self.by_name,
            topo,
        })
    }
}

/// Kahn's algorithm over cell-to-cell edges. On a cycle, returns the output
/// net of a cell on it.
fn topo_sort(cells: &[Cell], nets: &[NetInfo]) -> Result<Vec<CellId>, NetId> {
    let mut indegree: Vec<usize> = cells
        .iter()
        .map(|c| {
            let mut srcs: Vec<_> = c
                .inputs
                .iter()
                .filter_map(|n| match nets[n.index()].driver {
                    Driver::Cell(d) => Some(d),
                    _ => None,
                })
                .collect();
            srcs.sort();
            srcs.dedup();
            srcs.len()
        })
        .collect();
    let mut ready: Vec<CellId> = (0..cells.len() as u32)
        .rev()
        .map(CellId)
        .filter(|c| indegree[c.index()] == 0)
        .collect();
    let mut order = Vec::with_capacity(cells.len());
    while let Some(c) = ready.pop() {
        order.push(c);
        for sink in &nets[cells[c.index()].output.index()].loads {
            if let Sink::Cell(s) = sink {
                indegree[s.index()] -= 1;
                if indegree[s.index()] == 0 {
                    ready.push(*s);
                }
            }
        }
    }
    if order.len() == cells.len() {
        Ok(order)
    } else {
        let stuck = indegree.iter().position(|&d| d > 0).unwrap();
        Err(cells[stuck].output)
    }
}
