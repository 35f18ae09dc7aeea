// SPDX-License-Identifier: Apache-2.0

//! Native line-oriented circuit text and OpenQASM 2.0 export.
//!
//! Native format:
//!
//! ```text
//! # comment
//! variant add n=4
//! reg A 4 input-a
//! reg B 4 input-b
//! reg Z 5 output
//! barrier init
//! ccx A[0] B[0] Z[1]
//! cnot A[1] B[1]
//! not Z[0]
//! ```
//!
//! `reg` and `variant` lines form the header and must precede every gate and
//! barrier line. A gate belongs to the phase of the most recent barrier.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Barrier, Circuit, Gate, GateKind, Phase, RegisterLayout, Role, Wire};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

pub fn to_native(circuit: &Circuit) -> String {
    let mut out = String::new();
    if let Some(v) = &circuit.variant {
        let _ = writeln!(out, "variant {v}");
    }
    for r in circuit.layout.registers() {
        let _ = writeln!(out, "reg {} {} {}", r.name, r.size, r.role);
    }
    let mut barriers = circuit.barriers().iter().peekable();
    for (i, g) in circuit.gates().iter().enumerate() {
        while let Some(b) = barriers.next_if(|b| b.position == i) {
            let _ = writeln!(out, "barrier {}", b.phase);
        }
        let name = |w: Wire| circuit.layout.wire_name(w);
        let c = g.controls();
        let _ = match g.kind() {
            GateKind::Not => writeln!(out, "not {}", name(g.target())),
            GateKind::Cnot => writeln!(out, "cnot {} {}", name(c[0]), name(g.target())),
            GateKind::Toffoli => writeln!(
                out,
                "ccx {} {} {}",
                name(c[0]),
                name(c[1]),
                name(g.target())
            ),
        };
    }
    for b in barriers {
        let _ = writeln!(out, "barrier {}", b.phase);
    }
    out
}

fn parse_wire(layout: &RegisterLayout, tok: &str) -> Result<Wire, String> {
    let (name, rest) = tok
        .split_once('[')
        .ok_or_else(|| format!("expected REG[i], found `{tok}`"))?;
    let idx = rest
        .strip_suffix(']')
        .ok_or_else(|| format!("expected REG[i], found `{tok}`"))?;
    let index: u32 = idx
        .parse()
        .map_err(|_| format!("bad wire index in `{tok}`"))?;
    let reg = layout
        .find(name)
        .ok_or_else(|| format!("unknown register `{name}`"))?;
    let wire = Wire::new(reg, index);
    if !layout.contains(wire) {
        return Err(format!("wire `{tok}` is out of range"));
    }
    Ok(wire)
}

pub fn parse_native(text: &str) -> Result<Circuit, ParseError> {
    let mut layout = RegisterLayout::new();
    let mut variant = None;
    let mut gates = Vec::new();
    let mut barriers = Vec::new();
    let mut in_body = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let err = |message: String| ParseError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "variant" => {
                if in_body || variant.is_some() {
                    return Err(err("`variant` must appear once, in the header".into()));
                }
                if toks.len() < 2 {
                    return Err(err("`variant` needs a description".into()));
                }
                variant = Some(toks[1..].join(" "));
            }
            "reg" => {
                if in_body {
                    return Err(err("`reg` after the first gate or barrier".into()));
                }
                let [_, name, size, role] = toks[..] else {
                    return Err(err("expected `reg <name> <size> <role>`".into()));
                };
                let size: u32 = size
                    .parse()
                    .map_err(|_| err(format!("bad register size `{size}`")))?;
                let role: Role = role.parse().map_err(err)?;
                layout
                    .add(name, size, role)
                    .map_err(|e| err(e.to_string()))?;
            }
            "barrier" => {
                in_body = true;
                let [_, phase] = toks[..] else {
                    return Err(err("expected `barrier <phase>`".into()));
                };
                let phase: Phase = phase.parse().map_err(err)?;
                barriers.push(Barrier {
                    position: gates.len(),
                    phase,
                });
            }
            op @ ("not" | "cnot" | "ccx") => {
                in_body = true;
                let arity = match op {
                    "not" => 1,
                    "cnot" => 2,
                    _ => 3,
                };
                if toks.len() != arity + 1 {
                    return Err(err(format!("`{op}` takes {arity} wire(s)")));
                }
                let ws = toks[1..]
                    .iter()
                    .map(|t| parse_wire(&layout, t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                let (target, controls) = ws.split_last().expect("arity >= 1");
                let phase = barriers.last().map(|b: &Barrier| b.phase);
                let gate = Gate::controlled(controls, *target).with_phase(phase);
                if gate
                    .wires()
                    .collect::<std::collections::BTreeSet<_>>()
                    .len()
                    != arity
                {
                    return Err(err("gate wires must be distinct".into()));
                }
                gates.push(gate);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    let mut circuit = Circuit::from_parts(layout, gates, barriers);
    circuit.variant = variant;
    circuit.validate().map_err(|e| ParseError {
        line: 0,
        message: e.to_string(),
    })?;
    Ok(circuit)
}

/// OpenQASM 2.0 text. Register `R` becomes `qr` (lowercased, `q`-prefixed
/// so names never collide with gate identifiers); phases become comments.
pub fn to_qasm(circuit: &Circuit) -> String {
    let layout = &circuit.layout;
    let mut names: Vec<String> = Vec::new();
    for (i, r) in layout.registers().iter().enumerate() {
        let mut name = format!("q{}", r.name.to_ascii_lowercase());
        if names.contains(&name) {
            name = format!("{name}_{i}");
        }
        names.push(name);
    }
    let wire = |w: Wire| format!("{}[{}]", names[w.reg.0 as usize], w.index);
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if let Some(v) = &circuit.variant {
        let _ = writeln!(out, "// variant {v}");
    }
    for (r, name) in layout.registers().iter().zip(&names) {
        if r.size > 0 {
            let _ = writeln!(out, "qreg {name}[{}]; // {} {}", r.size, r.name, r.role);
        }
    }
    let mut barriers = circuit.barriers().iter().peekable();
    for (i, g) in circuit.gates().iter().enumerate() {
        while let Some(b) = barriers.next_if(|b| b.position == i) {
            let _ = writeln!(out, "// phase {}", b.phase);
        }
        let c = g.controls();
        let _ = match g.kind() {
            GateKind::Not => writeln!(out, "x {};", wire(g.target())),
            GateKind::Cnot => writeln!(out, "cx {},{};", wire(c[0]), wire(g.target())),
            GateKind::Toffoli => writeln!(
                out,
                "ccx {},{},{};",
                wire(c[0]),
                wire(c[1]),
                wire(g.target())
            ),
        };
    }
    out
}
