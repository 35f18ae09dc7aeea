// SPDX-License-Identifier: Apache-2.0

//! Whole-circuit rewrites: inversion, constant propagation, lightcones.

use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Barrier, Circuit, CircuitError, Gate, Phase, Wire};

/// Reverses the gate list. Every gate is self-inverse, so this is the
/// inverse circuit. Phase segments are reversed along with the gates.
pub fn invert(circuit: &Circuit) -> Circuit {
    let len = circuit.len();
    let gates: Vec<Gate> = circuit.gates().iter().rev().copied().collect();
    let barriers = circuit
        .phase_ranges()
        .into_iter()
        .rev()
        .map(|(phase, range)| Barrier {
            position: len - range.end,
            phase,
        })
        .collect();
    let mut out = Circuit::from_parts(circuit.layout.clone(), gates, barriers);
    out.variant = circuit.variant.clone();
    out
}

/// Simplifies a circuit whose `constants` wires start with known values.
///
/// Known values are tracked forward. Gates with a control known to be 0 are
/// dropped, controls known to be 1 are removed, and gates acting only on
/// known wires just update the tracked value. When a known wire first
/// receives a live value it is materialized with a NOT if needed; wires still
/// known at the end get fixup NOTs. The result agrees with the original on
/// every wire for every assignment of the remaining inputs.
pub fn constant_propagate(
    circuit: &Circuit,
    constants: &BTreeMap<Wire, bool>,
) -> Result<Circuit, CircuitError> {
    circuit.validate()?;
    let layout = &circuit.layout;
    let offsets = layout.offsets();
    let flat = |w: Wire| offsets[w.reg.0 as usize] + w.index as usize;
    let width = layout.total_width();
    // logical: value the original circuit would hold, when known.
    // physical: value the simplified circuit actually holds on that wire.
    let mut logical: Vec<Option<bool>> = vec![None; width];
    let mut physical = vec![false; width];
    for (&w, &v) in constants {
        if !layout.contains(w) {
            return Err(CircuitError::WireOutOfRange {
                gate: 0,
                wire: layout.wire_name(w),
            });
        }
        logical[flat(w)] = Some(v);
        physical[flat(w)] = v;
    }

    let mut out = Circuit::new(layout.clone());
    out.variant = circuit.variant.clone();
    'gates: for gate in circuit.gates() {
        let mut live: Vec<Wire> = Vec::with_capacity(2);
        for &c in gate.controls() {
            match logical[flat(c)] {
                Some(false) => continue 'gates,
                Some(true) => {}
                None => live.push(c),
            }
        }
        let t = flat(gate.target());
        match logical[t] {
            Some(v) if live.is_empty() => logical[t] = Some(!v),
            Some(v) => {
                if physical[t] != v {
                    out.append_tagged(&[Gate::not(gate.target()).with_phase(gate.phase)]);
                }
                logical[t] = None;
                out.append_tagged(&[Gate::controlled(&live, gate.target()).with_phase(gate.phase)]);
            }
            None => {
                out.append_tagged(&[Gate::controlled(&live, gate.target()).with_phase(gate.phase)]);
            }
        }
    }
    let mut fixups = Vec::new();
    for w in layout.wires() {
        let f = flat(w);
        if let Some(v) = logical[f] {
            if v != physical[f] {
                fixups.push(Gate::not(w).with_phase(Some(Phase::Fixup)));
            }
        }
    }
    out.append_tagged(&fixups);
    Ok(out)
}

/// Indices of the gates that can influence the final value of `sink`.
pub fn lightcone(circuit: &Circuit, sink: Wire) -> BTreeSet<usize> {
    let offsets = circuit.layout.offsets();
    let flat = |w: Wire| offsets[w.reg.0 as usize] + w.index as usize;
    let mut marked = vec![false; circuit.layout.total_width()];
    marked[flat(sink)] = true;
    let mut cone = BTreeSet::new();
    for (i, gate) in circuit.gates().iter().enumerate().rev() {
        if marked[flat(gate.target())] {
            cone.insert(i);
            for &c in gate.controls() {
                marked[flat(c)] = true;
            }
        }
    }
    cone
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateKind, RegisterLayout, Role};

    fn wires(n: u32) -> (RegisterLayout, Vec<Wire>) {
        let mut l = RegisterLayout::new();
        let r = l.add("Q", n, Role::InputA).unwrap();
        (l, (0..n).map(|i| Wire::new(r, i)).collect())
    }

    #[test]
    fn invert_keeps_single_toffoli() {
        let (l, q) = wires(3);
        let mut c = Circuit::new(l);
        c.toffoli(q[0], q[1], q[2]);
        assert_eq!(invert(&c).gates(), c.gates());
    }

    #[test]
    fn invert_reverses_phase_segments() {
        let (l, q) = wires(2);
        let mut c = Circuit::new(l);
        c.barrier(Phase::P);
        c.not(q[0]);
        c.barrier(Phase::G);
        c.not(q[1]);
        c.cnot(q[0], q[1]);
        let inv = invert(&c);
        assert_eq!(inv.phase_ranges(), vec![(Phase::G, 0..2), (Phase::P, 2..3)]);
        assert_eq!(inv.gates()[0].kind(), GateKind::Cnot);
    }

    #[test]
    fn constant_controls_simplify() {
        let (l, q) = wires(3);
        let mut c = Circuit::new(l);
        c.toffoli(q[0], q[1], q[2]);
        let one = BTreeMap::from([(q[0], true)]);
        let s = constant_propagate(&c, &one).unwrap();
        assert_eq!(s.gates(), &[Gate::cnot(q[1], q[2])]);
        let zero = BTreeMap::from([(q[0], false)]);
        assert!(constant_propagate(&c, &zero).unwrap().is_empty());
    }

    #[test]
    fn known_target_is_materialized_once_live() {
        let (l, q) = wires(2);
        let mut c = Circuit::new(l);
        c.not(q[1]);
        c.cnot(q[0], q[1]);
        let s = constant_propagate(&c, &BTreeMap::from([(q[1], false)])).unwrap();
        assert_eq!(s.gates(), &[Gate::not(q[1]), Gate::cnot(q[0], q[1])]);
    }

    #[test]
    fn lightcone_follows_controls() {
        let (l, q) = wires(4);
        let mut c = Circuit::new(l);
        c.cnot(q[0], q[1]);
        c.cnot(q[2], q[3]);
        c.cnot(q[1], q[2]);
        assert_eq!(lightcone(&c, q[2]), BTreeSet::from([0, 2]));
        assert_eq!(lightcone(&c, q[3]), BTreeSet::from([1]));
    }
}
