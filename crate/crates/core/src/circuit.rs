// SPDX-License-Identifier: Apache-2.0

//! Circuit intermediate representation: registers, wires, gates and phases.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("duplicate register name `{0}`")]
    DuplicateRegister(String),
    #[error("invalid register name `{0}`")]
    InvalidRegisterName(String),
    #[error("only one carry-in register of size at most 1 is allowed")]
    CarryInRegister,
    #[error("register id {0} does not exist")]
    UnknownRegister(u16),
    #[error("gate {gate}: wire {wire} is outside the layout")]
    WireOutOfRange { gate: usize, wire: String },
    #[error("gate {gate}: wires are not pairwise distinct")]
    RepeatedWire { gate: usize },
    #[error("barrier {index} at position {position} is out of order or out of bounds")]
    BadBarrier { index: usize, position: usize },
    #[error("state has {got} bits but the layout has {expected} wires")]
    StateSize { expected: usize, got: usize },
    #[error("circuits have different register layouts")]
    LayoutMismatch,
}

/// Index of a register inside a [`RegisterLayout`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RegId(pub u16);

/// One bit line: a register and a bit position within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire {
    pub reg: RegId,
    pub index: u32,
}

impl Wire {
    pub fn new(reg: RegId, index: u32) -> Self {
        Wire { reg, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    /// First operand; restored at the end.
    InputA,
    /// Second operand; restored at the end.
    InputB,
    /// Second operand that is overwritten with the low bits of the result.
    InOutB,
    /// Fresh zero-initialized output bits.
    Output,
    /// Scratch bits, zero on entry and on exit.
    Ancilla,
    /// Incoming carry bit; restored at the end.
    CarryIn,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::InputA => "input-a",
            Role::InputB => "input-b",
            Role::InOutB => "inout-b",
            Role::Output => "output",
            Role::Ancilla => "ancilla",
            Role::CarryIn => "carry-in",
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "input-a" => Role::InputA,
            "input-b" => Role::InputB,
            "inout-b" => Role::InOutB,
            "output" => Role::Output,
            "ancilla" => Role::Ancilla,
            "carry-in" => Role::CarryIn,
            other => return Err(format!("unknown register role `{other}`")),
        })
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub size: u32,
    pub role: Role,
}

/// Ordered register declarations. Wires are flattened register by register,
/// in declaration order, for simulation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RegisterLayout {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, size: u32, role: Role) -> Result<RegId, CircuitError> {
        if !valid_name(name) {
            return Err(CircuitError::InvalidRegisterName(name.to_string()));
        }
        if self.registers.iter().any(|r| r.name == name) {
            return Err(CircuitError::DuplicateRegister(name.to_string()));
        }
        if role == Role::CarryIn
            && (size > 1 || self.registers.iter().any(|r| r.role == Role::CarryIn))
        {
            return Err(CircuitError::CarryInRegister);
        }
        let id = RegId(self.registers.len() as u16);
        self.registers.push(Register {
            name: name.to_string(),
            size,
            role,
        });
        Ok(id)
    }

    /// Changes a register's size. Generators use this for scratch registers
    /// whose size is only known once construction is finished.
    pub(crate) fn resize(&mut self, id: RegId, size: u32) {
        self.registers[id.0 as usize].size = size;
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn ids(&self) -> impl Iterator<Item = RegId> + '_ {
        (0..self.registers.len()).map(|i| RegId(i as u16))
    }

    pub fn get(&self, id: RegId) -> Option<&Register> {
        self.registers.get(id.0 as usize)
    }

    pub fn register(&self, id: RegId) -> &Register {
        &self.registers[id.0 as usize]
    }

    pub fn find(&self, name: &str) -> Option<RegId> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .map(|i| RegId(i as u16))
    }

    pub fn find_role(&self, role: Role) -> Option<RegId> {
        self.registers
            .iter()
            .position(|r| r.role == role)
            .map(|i| RegId(i as u16))
    }

    pub fn total_width(&self) -> usize {
        self.registers.iter().map(|r| r.size as usize).sum()
    }

    /// Total size of ancilla-role registers.
    pub fn ancilla_count(&self) -> usize {
        self.registers
            .iter()
            .filter(|r| r.role == Role::Ancilla)
            .map(|r| r.size as usize)
            .sum()
    }

    pub fn contains(&self, wire: Wire) -> bool {
        self.get(wire.reg).is_some_and(|r| wire.index < r.size)
    }

    /// Start offset of every register in the flattened wire order.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.registers
            .iter()
            .map(|r| {
                let o = acc;
                acc += r.size as usize;
                o
            })
            .collect()
    }

    pub fn wire_name(&self, wire: Wire) -> String {
        match self.get(wire.reg) {
            Some(r) => format!("{}[{}]", r.name, wire.index),
            None => format!("#{}[{}]", wire.reg.0, wire.index),
        }
    }

    /// Every wire of the layout, in flattened order.
    pub fn wires(&self) -> impl Iterator<Item = Wire> + '_ {
        self.ids()
            .flat_map(move |id| (0..self.register(id).size).map(move |i| Wire::new(id, i)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 0,
            GateKind::Cnot => 1,
            GateKind::Toffoli => 2,
        }
    }
}

/// Phase tags. Metadata only: simulation and counting ignore them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    P,
    G,
    C,
    Pinv,
    Init,
    Sum,
    Fixup,
    Negate,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::P => "P",
            Phase::G => "G",
            Phase::C => "C",
            Phase::Pinv => "Pinv",
            Phase::Init => "init",
            Phase::Sum => "sum",
            Phase::Fixup => "fixup",
            Phase::Negate => "negate",
        }
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "P" => Phase::P,
            "G" => Phase::G,
            "C" => Phase::C,
            "Pinv" => Phase::Pinv,
            "init" => Phase::Init,
            "sum" => Phase::Sum,
            "fixup" => Phase::Fixup,
            "negate" => Phase::Negate,
            other => return Err(format!("unknown phase `{other}`")),
        })
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A NOT, CNOT or Toffoli gate. Every gate is its own inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    // unused slots repeat the target
    controls: [Wire; 2],
    target: Wire,
    pub phase: Option<Phase>,
}

impl Gate {
    pub fn not(target: Wire) -> Self {
        Gate {
            kind: GateKind::Not,
            controls: [target, target],
            target,
            phase: None,
        }
    }

    pub fn cnot(control: Wire, target: Wire) -> Self {
        Gate {
            kind: GateKind::Cnot,
            controls: [control, target],
            target,
            phase: None,
        }
    }

    pub fn toffoli(c1: Wire, c2: Wire, target: Wire) -> Self {
        Gate {
            kind: GateKind::Toffoli,
            controls: [c1, c2],
            target,
            phase: None,
        }
    }

    /// Builds the gate with the given controls (0, 1 or 2 of them).
    pub fn controlled(controls: &[Wire], target: Wire) -> Self {
        match *controls {
            [] => Gate::not(target),
            [c] => Gate::cnot(c, target),
            [c1, c2] => Gate::toffoli(c1, c2, target),
            _ => panic!("at most two controls"),
        }
    }

    pub fn with_phase(mut self, phase: Option<Phase>) -> Self {
        self.phase = phase;
        self
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> Wire {
        self.target
    }

    pub fn controls(&self) -> &[Wire] {
        &self.controls[..self.kind.arity()]
    }

    /// Controls followed by the target.
    pub fn wires(&self) -> impl Iterator<Item = Wire> + '_ {
        self.controls()
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
    }

    fn wires_distinct(&self) -> bool {
        match self.kind {
            GateKind::Not => true,
            GateKind::Cnot => self.controls[0] != self.target,
            GateKind::Toffoli => {
                let [a, b] = self.controls;
                a != b && a != self.target && b != self.target
            }
        }
    }
}

/// Start of a named phase within the gate list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Barrier {
    pub position: usize,
    pub phase: Phase,
}

/// An ordered gate list over a register layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub layout: RegisterLayout,
    gates: Vec<Gate>,
    barriers: Vec<Barrier>,
    /// Free-form description of what the circuit computes, e.g.
    /// `add n=10 in-place`. Carried through the text format.
    pub variant: Option<String>,
}

impl Circuit {
    pub fn new(layout: RegisterLayout) -> Self {
        Circuit {
            layout,
            gates: Vec::new(),
            barriers: Vec::new(),
            variant: None,
        }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn barriers(&self) -> &[Barrier] {
        &self.barriers
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn current_phase(&self) -> Option<Phase> {
        self.barriers.last().map(|b| b.phase)
    }

    /// Opens a new phase; later gates are tagged with it.
    pub fn barrier(&mut self, phase: Phase) {
        self.barriers.push(Barrier {
            position: self.gates.len(),
            phase,
        });
    }

    /// Appends a gate, tagging it with the current phase.
    pub fn push(&mut self, gate: Gate) {
        let phase = self.current_phase();
        self.gates.push(gate.with_phase(phase));
    }

    pub fn not(&mut self, t: Wire) {
        self.push(Gate::not(t));
    }

    pub fn cnot(&mut self, c: Wire, t: Wire) {
        self.push(Gate::cnot(c, t));
    }

    pub fn toffoli(&mut self, c1: Wire, c2: Wire, t: Wire) {
        self.push(Gate::toffoli(c1, c2, t));
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) {
        for g in gates {
            self.push(g);
        }
    }

    /// Appends gates keeping their own phase tags and recreating barriers
    /// wherever the tag changes.
    pub fn append_tagged<'a, I: IntoIterator<Item = &'a Gate>>(&mut self, gates: I) {
        for g in gates {
            if let Some(p) = g.phase {
                if self.current_phase() != Some(p) || self.barriers.last().is_none() {
                    self.barrier(p);
                }
            }
            self.gates.push(*g);
        }
    }

    /// Raw constructor used by the parser and the transforms.
    pub(crate) fn from_parts(
        layout: RegisterLayout,
        gates: Vec<Gate>,
        barriers: Vec<Barrier>,
    ) -> Self {
        Circuit {
            layout,
            gates,
            barriers,
            variant: None,
        }
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (i, g) in self.gates.iter().enumerate() {
            for w in g.wires() {
                if !self.layout.contains(w) {
                    return Err(CircuitError::WireOutOfRange {
                        gate: i,
                        wire: self.layout.wire_name(w),
                    });
                }
            }
            if !g.wires_distinct() {
                return Err(CircuitError::RepeatedWire { gate: i });
            }
        }
        let mut last = 0;
        for (i, b) in self.barriers.iter().enumerate() {
            if b.position < last || b.position > self.gates.len() {
                return Err(CircuitError::BadBarrier {
                    index: i,
                    position: b.position,
                });
            }
            last = b.position;
        }
        Ok(())
    }

    /// Gate index range covered by each barrier, in order.
    pub fn phase_ranges(&self) -> Vec<(Phase, std::ops::Range<usize>)> {
        self.barriers
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let end = self
                    .barriers
                    .get(i + 1)
                    .map_or(self.gates.len(), |n| n.position);
                (b.phase, b.position..end)
            })
            .collect()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> (RegisterLayout, RegId, RegId) {
        let mut l = RegisterLayout::new();
        let a = l.add("A", 2, Role::InputA).unwrap();
        let z = l.add("Z", 1, Role::Output).unwrap();
        (l, a, z)
    }

    #[test]
    fn rejects_bad_layouts() {
        let mut l = RegisterLayout::new();
        l.add("A", 3, Role::InputA).unwrap();
        assert_eq!(
            l.add("A", 1, Role::InputB),
            Err(CircuitError::DuplicateRegister("A".into()))
        );
        assert_eq!(
            l.add("Y", 2, Role::CarryIn),
            Err(CircuitError::CarryInRegister)
        );
        l.add("Y", 1, Role::CarryIn).unwrap();
        assert_eq!(
            l.add("Y2", 1, Role::CarryIn),
            Err(CircuitError::CarryInRegister)
        );
        assert!(l.add("9x", 1, Role::Ancilla).is_err());
    }

    #[test]
    fn validation_catches_range_and_repeats() {
        let (l, a, z) = layout();
        let mut c = Circuit::new(l.clone());
        c.toffoli(Wire::new(a, 0), Wire::new(a, 1), Wire::new(z, 0));
        assert!(c.validate().is_ok());

        let mut c = Circuit::new(l.clone());
        c.cnot(Wire::new(a, 2), Wire::new(z, 0));
        assert!(matches!(
            c.validate(),
            Err(CircuitError::WireOutOfRange { gate: 0, .. })
        ));

        let mut c = Circuit::new(l);
        c.toffoli(Wire::new(a, 0), Wire::new(a, 0), Wire::new(z, 0));
        assert_eq!(c.validate(), Err(CircuitError::RepeatedWire { gate: 0 }));
    }

    #[test]
    fn gates_are_tagged_with_open_phase() {
        let (l, a, z) = layout();
        let mut c = Circuit::new(l);
        c.barrier(Phase::Init);
        c.cnot(Wire::new(a, 0), Wire::new(z, 0));
        c.barrier(Phase::Sum);
        c.not(Wire::new(z, 0));
        assert_eq!(c.gates()[0].phase, Some(Phase::Init));
        assert_eq!(c.gates()[1].phase, Some(Phase::Sum));
        assert_eq!(
            c.phase_ranges(),
            vec![(Phase::Init, 0..1), (Phase::Sum, 1..2)]
        );
    }
}
