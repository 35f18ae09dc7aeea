// SPDX-License-Identifier: Apache-2.0

//! The logarithmic-depth carry-status network: P-, G-, C- and P⁻¹-rounds.
//!
//! On entry `G[j] = g[j-1, j]` (1-based) and `P_0[i] = p[i, i+1]`; on exit
//! `G[j] = c_j` with `P_0` and the scratch bits restored. `P_t[m]` holds
//! `p[2^t m, 2^t (m+1)]`.

use std::collections::HashMap;

use thiserror::Error;

use crate::bits::floor_log2;
use crate::circuit::{Circuit, CircuitError, Gate, Phase, RegId, RegisterLayout, Role, Wire};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("carry network width must be at least 1")]
    ZeroWidth,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RoundKind {
    P,
    G,
    C,
    Pinv,
}

impl RoundKind {
    pub fn phase(self) -> Phase {
        match self {
            RoundKind::P => Phase::P,
            RoundKind::G => Phase::G,
            RoundKind::C => Phase::C,
            RoundKind::Pinv => Phase::Pinv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CarryNetworkSpec {
    pub n: usize,
    pub direction: Direction,
}

/// A value of the network: `G[j]` (1-based) or `P_t[m]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    G(usize),
    P(u32, usize),
}

/// One Toffoli of a round: `target ^= controls[0] & controls[1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub target: Node,
    pub controls: [Node; 2],
}

fn term(target: Node, c1: Node, c2: Node) -> Term {
    Term {
        target,
        controls: [c1, c2],
    }
}

fn lg(n: usize) -> u32 {
    floor_log2(n as u64)
}

/// Number of P-round levels, `⌊log n⌋ - 1` (0 when negative).
pub fn p_levels(n: usize) -> u32 {
    if n < 2 {
        0
    } else {
        lg(n) - 1
    }
}

/// Number of G-round levels, `⌊log n⌋`.
pub fn g_levels(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        lg(n)
    }
}

/// Highest C-round level: the largest `t` with `3 * 2^(t-1) <= n`, or 0.
pub fn c_levels(n: usize) -> u32 {
    let mut t = 0;
    while 3usize << t <= n {
        t += 1;
    }
    t
}

/// The Toffolis of one round, in loop order. Out-of-range levels give an
/// empty list.
pub fn round_terms(kind: RoundKind, t: u32, n: usize) -> Vec<Term> {
    if t == 0 {
        return Vec::new();
    }
    let half = 1usize << (t - 1);
    let step = 1usize << t;
    match kind {
        RoundKind::P | RoundKind::Pinv => {
            if t > p_levels(n) {
                return Vec::new();
            }
            let ms = 1..n >> t;
            let mut v: Vec<Term> = ms
                .map(|m| {
                    term(
                        Node::P(t, m),
                        Node::P(t - 1, 2 * m),
                        Node::P(t - 1, 2 * m + 1),
                    )
                })
                .collect();
            if kind == RoundKind::Pinv {
                v.reverse();
            }
            v
        }
        RoundKind::G => {
            if t > g_levels(n) {
                return Vec::new();
            }
            (0..n >> t)
                .map(|m| {
                    term(
                        Node::G(step * m + step),
                        Node::G(step * m + half),
                        Node::P(t - 1, 2 * m + 1),
                    )
                })
                .collect()
        }
        RoundKind::C => {
            if t > c_levels(n) || n < half {
                return Vec::new();
            }
            (1..=(n - half) >> t)
                .map(|m| {
                    term(
                        Node::G(step * m + half),
                        Node::G(step * m),
                        Node::P(t - 1, 2 * m),
                    )
                })
                .collect()
        }
    }
}

/// Rounds of the forward network in execution order.
pub fn forward_rounds(n: usize) -> Vec<(RoundKind, u32)> {
    let mut v = Vec::new();
    v.extend((1..=p_levels(n)).map(|t| (RoundKind::P, t)));
    v.extend((1..=g_levels(n)).map(|t| (RoundKind::G, t)));
    v.extend((1..=c_levels(n)).rev().map(|t| (RoundKind::C, t)));
    v.extend((1..=p_levels(n)).rev().map(|t| (RoundKind::Pinv, t)));
    v
}

/// Placement of the `P_t[m]` scratch values: levels contiguous starting at
/// `t = 1`, blocks in increasing `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AncillaMap {
    n: usize,
    reg: RegId,
    base: u32,
    level_offsets: Vec<u32>,
}

impl AncillaMap {
    /// Map for width `n` starting at bit `base` of register `reg`.
    pub fn new(n: usize, reg: RegId, base: u32) -> Self {
        let mut level_offsets = Vec::new();
        let mut acc = 0u32;
        for t in 1..=p_levels(n) {
            level_offsets.push(acc);
            acc += ((n >> t) - 1) as u32;
        }
        level_offsets.push(acc);
        AncillaMap {
            n,
            reg,
            base,
            level_offsets,
        }
    }

    /// Number of scratch bits, `n - w(n) - ⌊log n⌋` (0 for `n <= 1`).
    pub fn len(&self) -> usize {
        *self.level_offsets.last().unwrap_or(&0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn size_for(n: usize) -> usize {
        AncillaMap::new(n, RegId(0), 0).len()
    }

    pub fn wire(&self, t: u32, m: usize) -> Option<Wire> {
        if t == 0 || t > p_levels(self.n) || m == 0 || m >= self.n >> t {
            return None;
        }
        let off = self.level_offsets[(t - 1) as usize] + (m - 1) as u32;
        Some(Wire::new(self.reg, self.base + off))
    }
}

/// Where the network's values live.
#[derive(Clone, Debug)]
pub struct NetworkWires {
    pub n: usize,
    /// `g[j]` is the wire of `G[j]`; index 0 is unused.
    pub g: Vec<Option<Wire>>,
    /// `p0[i]` is the wire of `P_0[i]`.
    pub p0: Vec<Option<Wire>>,
    pub ancilla: AncillaMap,
}

impl NetworkWires {
    pub fn wire(&self, node: Node) -> Option<Wire> {
        match node {
            Node::G(j) => self.g.get(j).copied().flatten(),
            Node::P(0, i) => self.p0.get(i).copied().flatten(),
            Node::P(t, m) => self.ancilla.wire(t, m),
        }
    }

    fn gate(&self, t: &Term) -> Gate {
        let w = |node: Node| {
            self.wire(node)
                .unwrap_or_else(|| panic!("network value {node:?} has no wire"))
        };
        Gate::toffoli(w(t.controls[0]), w(t.controls[1]), w(t.target))
    }
}

/// Gates of one round mapped onto wires.
pub fn enumerate_round_gates(
    kind: RoundKind,
    t: u32,
    n: usize,
    wires: &NetworkWires,
) -> Result<Vec<Gate>, NetworkError> {
    if n == 0 {
        return Err(NetworkError::ZeroWidth);
    }
    Ok(round_terms(kind, t, n)
        .iter()
        .map(|term| wires.gate(term).with_phase(Some(kind.phase())))
        .collect())
}

/// Appends the network to `circuit`, one barrier per phase. The inverse is
/// the exact reversal of the forward gate list.
pub fn emit_network(
    circuit: &mut Circuit,
    wires: &NetworkWires,
    direction: Direction,
) -> Result<(), NetworkError> {
    let n = wires.n;
    if n == 0 {
        return Err(NetworkError::ZeroWidth);
    }
    let mut phases: Vec<(Phase, Vec<Gate>)> = Vec::new();
    for (kind, t) in forward_rounds(n) {
        let gates = enumerate_round_gates(kind, t, n, wires)?;
        match phases.last_mut() {
            Some((p, v)) if *p == kind.phase() => v.extend(gates),
            _ => phases.push((kind.phase(), gates)),
        }
    }
    if direction == Direction::Inverse {
        phases.reverse();
        for (_, v) in &mut phases {
            v.reverse();
        }
    }
    for (phase, gates) in phases {
        if gates.is_empty() {
            continue;
        }
        circuit.barrier(phase);
        circuit.extend(gates);
    }
    Ok(())
}

/// Standalone network over registers `B[n]` (`P_0`, with `B[0]` unused),
/// `G[n+1]` (`G[j]` at index `j`, index 0 unused) and scratch `X`.
pub fn build_carry_network(spec: CarryNetworkSpec) -> Result<Circuit, NetworkError> {
    let n = spec.n;
    if n == 0 {
        return Err(NetworkError::ZeroWidth);
    }
    let mut layout = RegisterLayout::new();
    let b = layout.add("B", n as u32, Role::InputB)?;
    let g = layout.add("G", n as u32 + 1, Role::InOutB)?;
    let x = layout.add("X", AncillaMap::size_for(n) as u32, Role::Ancilla)?;
    let wires = NetworkWires {
        n,
        g: (0..=n).map(|j| Some(Wire::new(g, j as u32))).collect(),
        p0: (0..n).map(|i| Some(Wire::new(b, i as u32))).collect(),
        ancilla: AncillaMap::new(n, x, 0),
    };
    let mut circuit = Circuit::new(layout);
    let dir = match spec.direction {
        Direction::Forward => "",
        Direction::Inverse => " inverse",
    };
    circuit.variant = Some(format!("carry-network n={n}{dir}"));
    emit_network(&mut circuit, &wires, spec.direction)?;
    Ok(circuit)
}

/// Where a value of a padded network currently lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Known at generation time.
    Const(bool),
    /// Held by a wire this value may write.
    Owned(Wire),
    /// Read-only view of a wire that holds an equal value.
    Alias(Wire),
    /// Handed over to another node; must not be read again.
    Moved,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolveError {
    #[error("{0:?} was read after its value moved")]
    ReadMoved(Node),
    #[error("{0:?} is a read-only alias and cannot be written")]
    WriteAlias(Node),
    #[error("{0:?} cannot be written after its value moved")]
    WriteMoved(Node),
    #[error("{0:?} holds a constant 1 and cannot absorb a live value")]
    ConstOneTarget(Node),
}

/// Maps the rounds of a network whose width is padded with compile-time
/// constants onto real wires. Gates whose outcome is known are dropped;
/// values that equal an existing wire are aliased or moved instead of
/// copied; scratch bits are allocated on demand in `X`, in order.
#[derive(Clone, Debug)]
pub struct Resolver {
    slots: HashMap<Node, Slot>,
    x_reg: RegId,
    x_used: u32,
}

impl Resolver {
    pub fn new(x_reg: RegId) -> Self {
        Resolver {
            slots: HashMap::new(),
            x_reg,
            x_used: 0,
        }
    }

    pub fn set(&mut self, node: Node, slot: Slot) {
        self.slots.insert(node, slot);
    }

    /// Current slot; `P_t` values with `t >= 1` not yet written read as 0.
    pub fn slot(&self, node: Node) -> Slot {
        match self.slots.get(&node) {
            Some(&s) => s,
            None => match node {
                Node::P(t, _) if t > 0 => Slot::Const(false),
                _ => panic!("padded network value {node:?} was never defined"),
            },
        }
    }

    pub fn x_used(&self) -> u32 {
        self.x_used
    }

    /// Resolves one Toffoli term, returning the physical gate if one is needed.
    pub fn apply(&mut self, term: &Term) -> Result<Option<Gate>, ResolveError> {
        let mut live = Vec::with_capacity(2);
        let mut live_nodes = Vec::with_capacity(2);
        for &c in &term.controls {
            match self.slot(c) {
                Slot::Const(false) => return Ok(None),
                Slot::Const(true) => {}
                Slot::Owned(w) | Slot::Alias(w) => {
                    live.push(w);
                    live_nodes.push(c);
                }
                Slot::Moved => return Err(ResolveError::ReadMoved(c)),
            }
        }
        let target = term.target;
        match self.slot(target) {
            Slot::Owned(w) => Ok(Some(Gate::controlled(&live, w))),
            Slot::Alias(_) => Err(ResolveError::WriteAlias(target)),
            Slot::Moved => Err(ResolveError::WriteMoved(target)),
            Slot::Const(v) if live.is_empty() => {
                self.set(target, Slot::Const(!v));
                Ok(None)
            }
            Slot::Const(true) => Err(ResolveError::ConstOneTarget(target)),
            Slot::Const(false) if live.len() == 1 => {
                let src = live_nodes[0];
                match src {
                    // A generate value is consumed by exactly one later
                    // read, so it can move instead of being copied.
                    Node::G(_) => {
                        self.set(target, Slot::Owned(live[0]));
                        self.set(src, Slot::Moved);
                    }
                    Node::P(..) => self.set(target, Slot::Alias(live[0])),
                }
                Ok(None)
            }
            Slot::Const(false) => {
                let x = Wire::new(self.x_reg, self.x_used);
                self.x_used += 1;
                self.set(target, Slot::Owned(x));
                Ok(Some(Gate::toffoli(live[0], live[1], x)))
            }
        }
    }
}
