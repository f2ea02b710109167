// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Bit-packed truth tables with Shannon cofactoring and cut-driven decomposition.
//!
//! Minterm `m` is stored at bit position `m`; variable `i` is bit `i` of the
//! minterm index. Storage uses words of a configurable width `W` (a power of two
//! between 8 and 64), each kept in the low `W` bits of a `u64`.

use std::fmt;

use thiserror::Error;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 16;

/// Default storage word width in bits.
pub const DEFAULT_WORD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthTableError {
    #[error("truth table has {0} variables, at most {MAX_VARS} are supported")]
    TooManyVars(usize),
    #[error("word width {0} is not a power of two in 8..=64")]
    BadWordWidth(u32),
    #[error("assignment has {got} bits, table has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("variable position {pos} out of range for a {num_vars}-variable table")]
    PositionOutOfRange { pos: usize, num_vars: usize },
    #[error("cannot cofactor a constant (0-variable) table")]
    NoVariables,
    #[error("cofactor size mismatch: {0} vs {1} variables")]
    SizeMismatch(usize, usize),
    #[error("invalid hex literal: {0}")]
    BadHex(String),
    #[error("table has {table} variables but the cut support has {support}")]
    SupportMismatch { table: usize, support: usize },
    #[error("cut variable {0} listed twice on one side")]
    DuplicateCutVar(usize),
}

/// A Boolean function of up to 16 variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_vars: usize,
    word_bits: u32,
    words: Vec<u64>,
}

fn word_count(num_vars: usize, word_bits: u32) -> usize {
    ((1usize << num_vars) / word_bits as usize).max(1)
}

impl TruthTable {
    /// Constant-zero table over `num_vars` variables with the default word width.
    pub fn zero(num_vars: usize) -> Result<Self, TruthTableError> {
        Self::zero_with_word_bits(num_vars, DEFAULT_WORD_BITS)
    }

    pub fn zero_with_word_bits(num_vars: usize, word_bits: u32) -> Result<Self, TruthTableError> {
        if num_vars > MAX_VARS {
            return Err(TruthTableError::TooManyVars(num_vars));
        }
        if !word_bits.is_power_of_two() || !(8..=64).contains(&word_bits) {
            return Err(TruthTableError::BadWordWidth(word_bits));
        }
        Ok(TruthTable {
            num_vars,
            word_bits,
            words: vec![0; word_count(num_vars, word_bits)],
        })
    }

    /// Constant-one table.
    pub fn one(num_vars: usize) -> Result<Self, TruthTableError> {
        let mut t = Self::zero(num_vars)?;
        for m in 0..t.num_bits() {
            t.set_bit(m, true);
        }
        Ok(t)
    }

    /// Table whose ON-set is exactly the given minterms.
    pub fn from_minterms(
        num_vars: usize,
        minterms: impl IntoIterator<Item = usize>,
    ) -> Result<Self, TruthTableError> {
        let mut t = Self::zero(num_vars)?;
        for m in minterms {
            if m >= t.num_bits() {
                return Err(TruthTableError::PositionOutOfRange {
                    pos: m,
                    num_vars,
                });
            }
            t.set_bit(m, true);
        }
        Ok(t)
    }

    /// Build a table from the low `2^num_vars` bits of `bits`. Only valid for
    /// `num_vars <= 6`.
    pub fn from_u64(num_vars: usize, bits: u64) -> Result<Self, TruthTableError> {
        if num_vars > 6 {
            return Err(TruthTableError::TooManyVars(num_vars));
        }
        Self::from_minterms(num_vars, (0..1usize << num_vars).filter(|m| bits >> m & 1 == 1))
    }

    /// Build a table by evaluating `f` on every minterm index.
    pub fn from_fn(num_vars: usize, f: impl Fn(usize) -> bool) -> Result<Self, TruthTableError> {
        Self::from_minterms(num_vars, (0..1usize << num_vars).filter(|&m| f(m)))
    }

    /// Parse a hex literal listing the most significant minterm first, e.g.
    /// `"E8"` for 3-input majority. Tables under 4 variables use one digit.
    pub fn from_hex(num_vars: usize, hex: &str) -> Result<Self, TruthTableError> {
        let bad = || TruthTableError::BadHex(hex.to_string());
        let hex = hex.trim_start_matches("0x").trim_start_matches("0X");
        let digits: Vec<u32> = hex
            .chars()
            .filter(|c| *c != '_')
            .map(|c| c.to_digit(16).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        let mut t = Self::zero(num_vars)?;
        let bits = t.num_bits();
        if digits.len() != bits.div_ceil(4) {
            return Err(bad());
        }
        for (i, d) in digits.iter().rev().enumerate() {
            for b in 0..4 {
                if d >> b & 1 == 1 {
                    let m = 4 * i + b;
                    if m >= bits {
                        return Err(bad());
                    }
                    t.set_bit(m, true);
                }
            }
        }
        Ok(t)
    }

    /// Hex rendering, most significant minterm first.
    pub fn to_hex(&self) -> String {
        let bits = self.num_bits();
        let ndigits = bits.div_ceil(4);
        (0..ndigits)
            .rev()
            .map(|i| {
                let d = (0..4)
                    .filter(|b| 4 * i + b < bits && self.bit(4 * i + b))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(d, 16).unwrap().to_ascii_uppercase()
            })
            .collect()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_bits(&self) -> usize {
        1 << self.num_vars
    }

    pub fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn bit(&self, m: usize) -> bool {
        let w = self.word_bits as usize;
        self.words[m / w] >> (m % w) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, m: usize, value: bool) {
        let w = self.word_bits as usize;
        debug_assert!(m < self.num_bits());
        let mask = 1u64 << (m % w);
        if value {
            self.words[m / w] |= mask;
        } else {
            self.words[m / w] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_const(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            n if n == self.num_bits() => Some(true),
            _ => None,
        }
    }

    /// True when no bit beyond `2^n` is set, in any word.
    pub fn padding_is_clean(&self) -> bool {
        let w = self.word_bits as usize;
        self.words.iter().enumerate().all(|(i, &word)| {
            let valid = self.num_bits().saturating_sub(i * w).min(w);
            let mask = if valid == 64 { u64::MAX } else { (1u64 << valid) - 1 };
            word & !mask == 0
        })
    }

    /// Evaluate on an assignment, where `assignment[i]` is the value of variable `i`.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool, TruthTableError> {
        if assignment.len() != self.num_vars {
            return Err(TruthTableError::AssignmentLength {
                expected: self.num_vars,
                got: assignment.len(),
            });
        }
        let m = assignment
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
        Ok(self.bit(m))
    }

    /// Shannon cofactor with variable `pos` fixed to `value`.
    ///
    /// Scans every minterm of the source; each ON minterm with `x_pos == value`
    /// has bit `pos` squeezed out of its index and is set in the result.
    pub fn cofactor(&self, pos: usize, value: bool) -> Result<TruthTable, TruthTableError> {
        if self.num_vars == 0 {
            return Err(TruthTableError::NoVariables);
        }
        if pos >= self.num_vars {
            return Err(TruthTableError::PositionOutOfRange {
                pos,
                num_vars: self.num_vars,
            });
        }
        let mut dst = TruthTable::zero_with_word_bits(self.num_vars - 1, self.word_bits)?;
        let low_mask = (1usize << pos) - 1;
        for m in 0..self.num_bits() {
            if self.bit(m) && (m >> pos & 1 == 1) == value {
                let squeezed = (m & low_mask) | ((m >> (pos + 1)) << pos);
                dst.set_bit(squeezed, true);
            }
        }
        Ok(dst)
    }

    /// Rebuild an `n`-variable table from its cofactors: the lower half is
    /// `t0`, the upper half `t1`, so the new most significant variable selects
    /// between them.
    pub fn concat_cofactors(t1: &TruthTable, t0: &TruthTable) -> Result<TruthTable, TruthTableError> {
        if t1.num_vars != t0.num_vars {
            return Err(TruthTableError::SizeMismatch(t1.num_vars, t0.num_vars));
        }
        if t1.word_bits != t0.word_bits {
            return Err(TruthTableError::BadWordWidth(t0.word_bits));
        }
        let half = t0.num_bits();
        let mut t = TruthTable::zero_with_word_bits(t0.num_vars + 1, t0.word_bits)?;
        for m in 0..half {
            t.set_bit(m, t0.bit(m));
            t.set_bit(m + half, t1.bit(m));
        }
        Ok(t)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}v, 0x{})", self.num_vars, self.to_hex())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A pair of cut leaf lists, given as global variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Cut {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self, TruthTableError> {
        for side in [&left, &right] {
            for (i, v) in side.iter().enumerate() {
                if side[..i].contains(v) {
                    return Err(TruthTableError::DuplicateCutVar(*v));
                }
            }
        }
        Ok(Cut { left, right })
    }

    /// Variable binding of the table handed to [`decompose`]: the right leaves
    /// in order, followed by left-only leaves in order.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.right.clone();
        s.extend(self.left.iter().filter(|v| !self.right.contains(v)));
        s
    }

    /// First variable of `side` that the opposite side does not contain.
    pub fn find_split_var(&self, side: Side) -> Option<usize> {
        let (this, other) = match side {
            Side::Left => (&self.left, &self.right),
            Side::Right => (&self.right, &self.left),
        };
        this.iter().copied().find(|v| !other.contains(v))
    }
}

/// One Shannon split performed by [`decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitStep {
    pub side: Side,
    pub split_var: usize,
    /// Position of the split variable in the binding before this step.
    pub position: usize,
    pub positive: TruthTable,
    pub negative: TruthTable,
}

/// Record of a decomposition: the steps taken and the final variable binding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DecomposeTrace {
    pub steps: Vec<SplitStep>,
    /// `binding[i]` is the global variable bound to position `i` of the result.
    pub binding: Vec<usize>,
}

impl DecomposeTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Shannon-decompose `table` on the cut's unshared variables.
///
/// `table` is bound to `cut.support()`. Nets whose toggle `counter` does not
/// exceed `threshold` are returned unchanged. Otherwise the first right-only
/// variable, then the first left-only variable, are each cofactored out and the
/// halves concatenated back with the split variable promoted to the most
/// significant position. The trace carries the resulting variable order.
pub fn decompose(
    table: &TruthTable,
    cut: &Cut,
    counter: u64,
    threshold: u64,
) -> Result<(TruthTable, DecomposeTrace), TruthTableError> {
    let mut binding = cut.support();
    if binding.len() != table.num_vars() {
        return Err(TruthTableError::SupportMismatch {
            table: table.num_vars(),
            support: binding.len(),
        });
    }
    let mut trace = DecomposeTrace::default();
    if counter <= threshold {
        trace.binding = binding;
        return Ok((table.clone(), trace));
    }

    let mut current = table.clone();
    for side in [Side::Right, Side::Left] {
        let Some(split_var) = cut.find_split_var(side) else {
            continue;
        };
        let position = binding
            .iter()
            .position(|&v| v == split_var)
            .expect("split variable is part of the support");
        let negative = current.cofactor(position, false)?;
        let positive = current.cofactor(position, true)?;
        current = TruthTable::concat_cofactors(&positive, &negative)?;
        binding.remove(position);
        binding.push(split_var);
        trace.steps.push(SplitStep {
            side,
            split_var,
            position,
            positive,
            negative,
        });
    }
    trace.binding = binding;
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tt(n: usize, hex: &str) -> TruthTable {
        TruthTable::from_hex(n, hex).unwrap()
    }

    #[test]
    fn hex_round_trip_and_layout() {
        let maj = tt(3, "E8");
        assert_eq!(maj.count_ones(), 4);
        for m in [3, 5, 6, 7] {
            assert!(maj.bit(m));
        }
        assert_eq!(maj.to_hex(), "E8");
        assert_eq!(tt(1, "2").to_hex(), "2");
        assert_eq!(tt(0, "1").to_hex(), "1");
        assert!(TruthTable::from_hex(1, "4").is_err());
        assert!(TruthTable::from_hex(3, "E").is_err());
        assert!(TruthTable::from_hex(3, "G8").is_err());
    }

    #[test]
    fn word_count_follows_width() {
        let t = TruthTable::zero_with_word_bits(10, 8).unwrap();
        assert_eq!(t.num_words(), 128);
        let t = TruthTable::zero_with_word_bits(2, 8).unwrap();
        assert_eq!(t.num_words(), 1);
        assert_eq!(TruthTable::zero(16).unwrap().num_words(), 1024);
        assert!(TruthTable::zero_with_word_bits(4, 12).is_err());
        assert!(TruthTable::zero_with_word_bits(4, 4).is_err());
        assert!(TruthTable::zero(17).is_err());
    }

    #[test]
    fn eval_examples() {
        let and2 = tt(2, "8");
        assert!(and2.eval(&[true, true]).unwrap());
        assert!(!and2.eval(&[true, false]).unwrap());
        let xor3 = tt(3, "96");
        assert!(!xor3.eval(&[true, true, false]).unwrap());
        assert_eq!(
            and2.eval(&[true]),
            Err(TruthTableError::AssignmentLength {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn cofactor_examples() {
        let and2 = tt(2, "8");
        assert_eq!(and2.cofactor(1, true).unwrap(), tt(1, "2"));
        assert_eq!(and2.cofactor(1, false).unwrap(), tt(1, "0"));
        // MAJ3 with x2 = 1 is OR(x0, x1).
        assert_eq!(tt(3, "E8").cofactor(2, true).unwrap(), tt(2, "E"));
        assert_eq!(
            and2.cofactor(2, true),
            Err(TruthTableError::PositionOutOfRange {
                pos: 2,
                num_vars: 2
            })
        );
        assert_eq!(tt(0, "1").cofactor(0, true), Err(TruthTableError::NoVariables));
    }

    #[test]
    fn maj3_cofactor_matches_enumeration() {
        // Independent rule: for each 2-var minterm, re-insert x2 = 1 and read MAJ3.
        let maj = |a: bool, b: bool, c: bool| (a as u8 + b as u8 + c as u8) >= 2;
        let cof = tt(3, "E8").cofactor(2, true).unwrap();
        for m in 0..4 {
            assert_eq!(cof.bit(m), maj(m & 1 == 1, m & 2 == 2, true));
        }
    }

    #[test]
    fn concat_examples() {
        assert_eq!(
            TruthTable::concat_cofactors(&tt(1, "2"), &tt(1, "0")).unwrap(),
            tt(2, "8")
        );
        let f = tt(2, "6");
        assert_eq!(TruthTable::concat_cofactors(&f, &f).unwrap(), tt(3, "66"));
        let xor3 = TruthTable::concat_cofactors(&tt(2, "9"), &tt(2, "6")).unwrap();
        assert_eq!(xor3, tt(3, "96"));
        for m in 0..8usize {
            let a = [m & 1 == 1, m & 2 == 2, m & 4 == 4];
            assert_eq!(xor3.eval(&a).unwrap(), m.count_ones() % 2 == 1);
        }
        assert_eq!(
            TruthTable::concat_cofactors(&tt(2, "9"), &tt(1, "1")),
            Err(TruthTableError::SizeMismatch(2, 1))
        );
    }

    #[test]
    fn cofactor_works_across_word_widths() {
        for w in [8, 16, 32, 64] {
            let mut t = TruthTable::zero_with_word_bits(9, w).unwrap();
            for m in (0..512).filter(|m| (m * 7 + 3) % 5 < 2) {
                t.set_bit(m, true);
            }
            let c1 = t.cofactor(4, true).unwrap();
            let c0 = t.cofactor(4, false).unwrap();
            assert_eq!(c1.num_words(), (256 / w as usize).max(1));
            assert_eq!(c0.count_ones() + c1.count_ones(), t.count_ones());
            assert!(c0.padding_is_clean() && c1.padding_is_clean());
        }
    }

    #[test]
    fn split_var_selection() {
        let cut = Cut::new(vec![5, 7], vec![2, 5, 7]).unwrap();
        assert_eq!(cut.find_split_var(Side::Right), Some(2));
        let cut = Cut::new(vec![5, 7], vec![5, 7]).unwrap();
        assert_eq!(cut.find_split_var(Side::Right), None);
        let cut = Cut::new(vec![4, 9], vec![9]).unwrap();
        assert_eq!(cut.find_split_var(Side::Left), Some(4));
        assert_eq!(
            Cut::new(vec![1, 1], vec![]),
            Err(TruthTableError::DuplicateCutVar(1))
        );
    }

    #[test]
    fn decompose_guard_rejects_quiet_nets() {
        let t = tt(3, "96");
        let cut = Cut::new(vec![1, 2], vec![0, 1, 2]).unwrap();
        let (out, trace) = decompose(&t, &cut, 2, 5).unwrap();
        assert_eq!(out, t);
        assert!(trace.is_empty());
        // Equal to the threshold is not above it.
        let (_, trace) = decompose(&t, &cut, 5, 5).unwrap();
        assert!(trace.is_empty());
    }

    #[test]
    fn decompose_xor3_right_side() {
        let t = tt(3, "96");
        let cut = Cut::new(vec![1, 2], vec![0, 1, 2]).unwrap();
        let (out, trace) = decompose(&t, &cut, 10, 5).unwrap();
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!((step.side, step.split_var, step.position), (Side::Right, 0, 0));
        assert_eq!(step.positive, tt(2, "9"));
        assert_eq!(step.negative, tt(2, "6"));
        assert_eq!(trace.binding, vec![1, 2, 0]);
        // XOR is symmetric so the reordered table is still 0x96.
        assert_eq!(out, tt(3, "96"));
    }

    #[test]
    fn decompose_fully_shared_cut_is_identity() {
        let t = tt(2, "8");
        let cut = Cut::new(vec![3, 4], vec![3, 4]).unwrap();
        let (out, trace) = decompose(&t, &cut, 100, 0).unwrap();
        assert_eq!(out, t);
        assert!(trace.is_empty());
        assert_eq!(trace.binding, vec![3, 4]);
    }

    #[test]
    fn decompose_both_sides() {
        // f(x0, x1, x2) = x0 & !x2 | x1, cut right = [0, 1], left = [1, 2].
        let t = TruthTable::from_fn(3, |m| (m & 1 == 1 && m & 4 == 0) || m & 2 == 2).unwrap();
        let cut = Cut::new(vec![1, 2], vec![0, 1]).unwrap();
        let (out, trace) = decompose(&t, &cut, 9, 1).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[0].split_var, 0);
        assert_eq!(trace.steps[1].split_var, 2);
        assert_eq!(trace.binding, vec![1, 0, 2]);
        for m in 0..8usize {
            let global = |v: usize| m >> v & 1 == 1;
            let local: Vec<bool> = trace.binding.iter().map(|&v| global(v)).collect();
            let orig: Vec<bool> = [0, 1, 2].iter().map(|&v| global(v)).collect();
            assert_eq!(out.eval(&local).unwrap(), t.eval(&orig).unwrap());
        }
    }

    #[test]
    fn decompose_rejects_wrong_support() {
        let cut = Cut::new(vec![0], vec![1, 2]).unwrap();
        assert!(matches!(
            decompose(&tt(2, "8"), &cut, 3, 1),
            Err(TruthTableError::SupportMismatch { .. })
        ));
    }
}
