// Copyright 2026 The actopt Authors
// SPDX-License-Identifier: Apache-2.0

//! Reader and writer for a single-model BLIF subset:
//! `.model`, `.inputs`, `.outputs`, `.names`, `.latch` and `.end`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::netlist::{LatchInit, NetId, Netlist, NetlistBuilder, NetlistError};
use crate::truthtable::{TruthTable, TruthTableError, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlifError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported construct `{directive}`")]
    Unsupported {
        line: usize,
        col: usize,
        directive: String,
    },
    #[error("{line}:{col}: `.names` block for `{net}` has {arity} inputs, at most {MAX_VARS} are supported")]
    ArityTooLarge {
        line: usize,
        col: usize,
        net: String,
        arity: usize,
    },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

struct Token<'a> {
    text: &'a str,
    col: usize,
}

/// A logical line after comment stripping and `\` continuation joining.
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn logical_lines(text: &str) -> Vec<Line<'_>> {
    let mut out: Vec<Line<'_>> = Vec::new();
    let mut continuing = false;
    for (idx, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = body.trim_end();
        let (body, continues) = match trimmed.strip_suffix('\\') {
            Some(b) => (b, true),
            None => (trimmed, false),
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &body[s..i],
                        col: s + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if continuing {
            out.last_mut().unwrap().tokens.extend(tokens);
        } else if !tokens.is_empty() || continues {
            out.push(Line {
                number: idx + 1,
                tokens,
            });
        }
        continuing = continues;
    }
    out.retain(|l| !l.tokens.is_empty());
    out
}

struct NamesBlock {
    line: usize,
    col: usize,
    inputs: Vec<NetId>,
    output: NetId,
    on_rows: Vec<(u32, u32)>,
    off_rows: Vec<(u32, u32)>,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> BlifError {
    BlifError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parse one cover row into a (care mask, care value) pair plus its output bit.
fn parse_row(line: &Line<'_>, arity: usize) -> Result<(u32, u32, bool), BlifError> {
    let (pattern, out) = match (arity, line.tokens.as_slice()) {
        (0, [o]) => (None, o),
        (k, [p, o]) if k > 0 => (Some(p), o),
        _ => {
            return Err(syntax(
                line.number,
                line.tokens[0].col,
                format!("cover row must have {} column(s)", if arity == 0 { 1 } else { 2 }),
            ))
        }
    };
    let mut mask = 0u32;
    let mut value = 0u32;
    if let Some(p) = pattern {
        if p.text.len() != arity {
            return Err(syntax(
                line.number,
                p.col,
                format!("cover row has {} input columns, expected {arity}", p.text.len()),
            ));
        }
        for (i, ch) in p.text.chars().enumerate() {
            match ch {
                '0' => mask |= 1 << i,
                '1' => {
                    mask |= 1 << i;
                    value |= 1 << i;
                }
                '-' => {}
                _ => {
                    return Err(syntax(
                        line.number,
                        p.col + i,
                        format!("invalid cover character `{ch}`"),
                    ))
                }
            }
        }
    }
    let bit = match out.text {
        "1" => true,
        "0" => false,
        other => {
            return Err(syntax(
                line.number,
                out.col,
                format!("invalid cover output `{other}`"),
            ))
        }
    };
    Ok((mask, value, bit))
}

fn finish_block(b: &mut NetlistBuilder, block: NamesBlock) -> Result<(), BlifError> {
    let arity = block.inputs.len();
    let err = |e: TruthTableError| syntax(block.line, block.col, e.to_string());
    if !block.on_rows.is_empty() && !block.off_rows.is_empty() {
        return Err(syntax(
            block.line,
            block.col,
            "cover mixes ON-set and OFF-set rows",
        ));
    }
    let full = (1u32 << arity) - 1;
    let mut table = TruthTable::zero(arity).map_err(err)?;
    let rows = if block.off_rows.is_empty() {
        &block.on_rows
    } else {
        &block.off_rows
    };
    for &(mask, value) in rows {
        // Walk every assignment of the don't-care positions.
        let free = full & !mask;
        let mut sub = free;
        loop {
            table.set_bit((value | sub) as usize, true);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    if !block.off_rows.is_empty() {
        for m in 0..table.num_bits() {
            let v = table.bit(m);
            table.set_bit(m, !v);
        }
    }
    b.add_cell(block.inputs, block.output, table);
    Ok(())
}

/// Parse a BLIF document into a validated netlist.
pub fn parse_blif(text: &str) -> Result<Netlist, BlifError> {
    let mut builder: Option<NetlistBuilder> = None;
    let mut block: Option<NamesBlock> = None;
    let mut ended = false;

    for line in logical_lines(text) {
        let head = &line.tokens[0];
        if !head.text.starts_with('.') {
            let Some(blk) = block.as_mut() else {
                return Err(syntax(line.number, head.col, "cover row outside a `.names` block"));
            };
            let (mask, value, bit) = parse_row(&line, blk.inputs.len())?;
            if bit {
                blk.on_rows.push((mask, value));
            } else {
                blk.off_rows.push((mask, value));
            }
            continue;
        }
        if let Some(done) = block.take() {
            finish_block(builder.as_mut().unwrap(), done)?;
        }
        if ended {
            return Err(BlifError::Unsupported {
                line: line.number,
                col: head.col,
                directive: format!("{} after .end", head.text),
            });
        }
        let args = &line.tokens[1..];
        match head.text {
            ".model" => {
                if builder.is_some() {
                    return Err(BlifError::Unsupported {
                        line: line.number,
                        col: head.col,
                        directive: ".model (multiple models)".into(),
                    });
                }
                let name = args.first().map(|t| t.text).unwrap_or("top");
                builder = Some(NetlistBuilder::new(name));
            }
            ".end" => ended = true,
            directive => {
                let Some(b) = builder.as_mut() else {
                    return Err(syntax(line.number, head.col, "expected `.model` first"));
                };
                match directive {
                    ".inputs" => {
                        for t in args {
                            b.add_input(t.text);
                        }
                    }
                    ".outputs" => {
                        for t in args {
                            b.add_output(t.text);
                        }
                    }
                    ".names" => {
                        let Some((out, ins)) = args.split_last() else {
                            return Err(syntax(line.number, head.col, "`.names` needs an output net"));
                        };
                        if ins.len() > MAX_VARS {
                            return Err(BlifError::ArityTooLarge {
                                line: line.number,
                                col: head.col,
                                net: out.text.to_string(),
                                arity: ins.len(),
                            });
                        }
                        let inputs = ins.iter().map(|t| b.net(t.text)).collect();
                        let output = b.net(out.text);
                        block = Some(NamesBlock {
                            line: line.number,
                            col: head.col,
                            inputs,
                            output,
                            on_rows: Vec::new(),
                            off_rows: Vec::new(),
                        });
                    }
                    ".latch" => {
                        let (init_tok, control) = match args {
                            [_, _] => (None, None),
                            [_, _, i] => (Some(i), None),
                            [_, _, t, c] => (None, Some((t, c))),
                            [_, _, t, c, i] => (Some(i), Some((t, c))),
                            _ => {
                                return Err(syntax(
                                    line.number,
                                    head.col,
                                    "`.latch` takes <in> <out> [<type> <ctrl>] [<init>]",
                                ))
                            }
                        };
                        let init = match init_tok.map(|t| t.text) {
                            None | Some("2") | Some("3") => LatchInit::Unknown,
                            Some("0") => LatchInit::Zero,
                            Some("1") => LatchInit::One,
                            Some(other) => {
                                return Err(syntax(
                                    line.number,
                                    init_tok.unwrap().col,
                                    format!("invalid latch init `{other}`"),
                                ))
                            }
                        };
                        if let Some((t, _)) = control {
                            if !matches!(t.text, "re" | "fe" | "ah" | "al" | "as") {
                                return Err(syntax(
                                    line.number,
                                    t.col,
                                    format!("invalid latch type `{}`", t.text),
                                ));
                            }
                        }
                        let input = b.net(args[0].text);
                        let output = b.net(args[1].text);
                        let control = control.map(|(t, c)| (t.text.to_string(), c.text.to_string()));
                        b.add_latch(input, output, init, control);
                    }
                    other => {
                        return Err(BlifError::Unsupported {
                            line: line.number,
                            col: head.col,
                            directive: other.to_string(),
                        })
                    }
                }
            }
        }
    }
    if let Some(done) = block.take() {
        finish_block(builder.as_mut().unwrap(), done)?;
    }
    let builder = builder.ok_or_else(|| syntax(1, 1, "no `.model` found"))?;
    Ok(builder.build()?)
}

/// Emit a netlist as BLIF. Covers list ON-set minterms in ascending order.
pub fn emit_blif(nl: &Netlist) -> String {
    let mut s = String::new();
    let name = |id: NetId| nl.net_name(id);
    writeln!(s, ".model {}", nl.name()).unwrap();
    if !nl.inputs().is_empty() {
        writeln!(s, ".inputs {}", nl.input_names().join(" ")).unwrap();
    }
    if !nl.outputs().is_empty() {
        writeln!(s, ".outputs {}", nl.output_names().join(" ")).unwrap();
    }
    for l in nl.latches() {
        let init = match l.init {
            LatchInit::Zero => "0",
            LatchInit::One => "1",
            LatchInit::Unknown => "3",
        };
        match &l.control {
            Some((t, c)) => writeln!(s, ".latch {} {} {t} {c} {init}", name(l.input), name(l.output)),
            None => writeln!(s, ".latch {} {} {init}", name(l.input), name(l.output)),
        }
        .unwrap();
    }
    for c in nl.cells() {
        s.push_str(".names");
        for &i in &c.inputs {
            s.push(' ');
            s.push_str(name(i));
        }
        s.push(' ');
        s.push_str(name(c.output));
        s.push('\n');
        let k = c.inputs.len();
        for m in (0..c.function.num_bits()).filter(|&m| c.function.bit(m)) {
            for i in 0..k {
                s.push(if m >> i & 1 == 1 { '1' } else { '0' });
            }
            if k > 0 {
                s.push(' ');
            }
            s.push_str("1\n");
        }
    }
    s.push_str(".end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_buffer() {
        let nl = parse_blif(".model buf\n.inputs a\n.outputs y\n.names a y\n1 1\n.end").unwrap();
        assert_eq!(nl.cells().len(), 1);
        assert_eq!(nl.cells()[0].function, TruthTable::from_hex(1, "2").unwrap());
        assert_eq!(nl.name(), "buf");
    }

    #[test]
    fn and_cover_is_single_minterm() {
        let nl = parse_blif(".model m\n.inputs a b\n.outputs y\n.names a b y\n11 1\n.end\n").unwrap();
        let f = &nl.cells()[0].function;
        assert_eq!(f.count_ones(), 1);
        assert!(f.bit(3));
    }

    #[test]
    fn dont_cares_and_offset_covers() {
        let nl = parse_blif(
            ".model m\n.inputs a b c\n.outputs y z\n.names a b c y\n1-- 1\n-11 1\n.names a b z\n11 0\n.end\n",
        )
        .unwrap();
        let y = &nl.cells()[0].function;
        let expect = TruthTable::from_fn(3, |m| m & 1 == 1 || m & 6 == 6).unwrap();
        assert_eq!(y, &expect);
        // OFF-set cover of AND is NAND.
        assert_eq!(nl.cells()[1].function, TruthTable::from_hex(2, "7").unwrap());
    }

    #[test]
    fn multiple_drivers_rejected() {
        let err = parse_blif(".model m\n.inputs a\n.outputs y\n.names a y\n1 1\n.names a y\n0 1\n.end\n")
            .unwrap_err();
        assert_eq!(err, BlifError::Netlist(NetlistError::MultipleDrivers("y".into())));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_blif(".model m\n.inputs a\n.outputs y\n.names a y\n1x 1\n").unwrap_err();
        assert!(matches!(err, BlifError::Syntax { line: 5, col: 1, .. }), "{err:?}");
        let err = parse_blif(".model m\n.inputs a b\n.outputs y\n.names a b y\n1x 1\n").unwrap_err();
        assert!(matches!(err, BlifError::Syntax { line: 5, col: 2, .. }), "{err:?}");
        let err = parse_blif(".model m\n  .subckt foo a=b\n").unwrap_err();
        assert!(matches!(err, BlifError::Unsupported { line: 2, col: 3, .. }), "{err:?}");
        let err = parse_blif("11 1\n").unwrap_err();
        assert!(matches!(err, BlifError::Syntax { line: 1, .. }));
        let err = parse_blif(".model a\n.end\n.model b\n.end\n").unwrap_err();
        assert!(matches!(err, BlifError::Unsupported { line: 3, .. }));
    }

    #[test]
    fn arity_limit() {
        let ins: Vec<String> = (0..17).map(|i| format!("i{i}")).collect();
        let doc = format!(
            ".model m\n.inputs {0}\n.outputs y\n.names {0} y\n{1} 1\n.end\n",
            ins.join(" "),
            "1".repeat(17)
        );
        assert!(matches!(parse_blif(&doc), Err(BlifError::ArityTooLarge { arity: 17, .. })));
    }

    #[test]
    fn cycle_rejected() {
        let err = parse_blif(".model m\n.outputs y\n.names y x\n0 1\n.names x y\n0 1\n.end\n").unwrap_err();
        assert!(matches!(err, BlifError::Netlist(NetlistError::CombinationalCycle(_))));
    }

    #[test]
    fn constants_emit_blif_convention() {
        let nl = parse_blif(".model k\n.outputs y z\n.names y\n1\n.names z\n.end\n").unwrap();
        assert_eq!(nl.area_luts(), 0);
        let text = emit_blif(&nl);
        assert!(text.contains(".names y\n1\n"));
        assert!(text.contains(".names z\n.end"));
    }

    #[test]
    fn latch_forms() {
        let doc = ".model r\n.inputs clk d\n.outputs q0 q1 q2 q3\n\
                   .latch d q0\n.latch d q1 1\n.latch d q2 re clk 0\n.latch d q3 re clk 2\n.end\n";
        let nl = parse_blif(doc).unwrap();
        let inits: Vec<_> = nl.latches().iter().map(|l| l.init).collect();
        assert_eq!(
            inits,
            vec![LatchInit::Unknown, LatchInit::One, LatchInit::Zero, LatchInit::Unknown]
        );
        assert_eq!(nl.latches()[2].control, Some(("re".into(), "clk".into())));
        let again = parse_blif(&emit_blif(&nl)).unwrap();
        assert!(nl.same_structure(&again));
        assert!(parse_blif(".model r\n.inputs d\n.latch d q 7\n.end\n").is_err());
        assert!(parse_blif(".model r\n.inputs d\n.latch d q zz clk 0\n.end\n").is_err());
    }

    #[test]
    fn continuation_and_comments() {
        let doc = "# header\n.model m # trailing\n.inputs a \\\n b\n.outputs y\n.names a b y\n11 1 # row\n.end\n";
        let nl = parse_blif(doc).unwrap();
        assert_eq!(nl.input_names(), vec!["a", "b"]);
    }

    #[test]
    fn emit_sorts_minterms_ascending() {
        let nl = parse_blif(".model m\n.inputs a b\n.outputs y\n.names a b y\n-1 1\n1- 1\n.end\n").unwrap();
        let text = emit_blif(&nl);
        assert!(text.contains(".names a b y\n10 1\n01 1\n11 1\n"), "{text}");
    }
}
