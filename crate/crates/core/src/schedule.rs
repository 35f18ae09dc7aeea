// SPDX-License-Identifier: Apache-2.0

//! Greedy as-soon-as-possible time-slice scheduling.

use crate::circuit::{Circuit, CircuitError, GateKind};

/// Gate indices grouped into time-slices. Within a slice no two gates share
/// a wire; gates sharing a wire keep their original relative order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slicing {
    pub slices: Vec<Vec<usize>>,
}

impl Slicing {
    pub fn total_slices(&self) -> usize {
        self.slices.len()
    }

    /// Number of slices containing at least one gate of the given kind.
    pub fn slices_with(&self, circuit: &Circuit, kind: GateKind) -> usize {
        self.slices
            .iter()
            .filter(|s| s.iter().any(|&i| circuit.gates()[i].kind() == kind))
            .count()
    }

    /// Gate order obtained by concatenating the slices.
    pub fn flattened(&self) -> Vec<usize> {
        self.slices.iter().flatten().copied().collect()
    }
}

/// Places every gate in the earliest slice after the last slice that used
/// any of its wires.
pub fn schedule_asap(circuit: &Circuit) -> Result<Slicing, CircuitError> {
    circuit.validate()?;
    let offsets = circuit.layout.offsets();
    let mut ready = vec![0usize; circuit.layout.total_width()];
    let mut slices: Vec<Vec<usize>> = Vec::new();
    let mut flat = [0usize; 3];
    for (i, gate) in circuit.gates().iter().enumerate() {
        let mut k = 0;
        for w in gate.wires() {
            flat[k] = offsets[w.reg.0 as usize] + w.index as usize;
            k += 1;
        }
        let slot = flat[..k].iter().map(|&f| ready[f]).max().unwrap_or(0);
        for &f in &flat[..k] {
            ready[f] = slot + 1;
        }
        if slot == slices.len() {
            slices.push(Vec::new());
        }
        slices[slot].push(i);
    }
    Ok(Slicing { slices })
}

/// Greedy scheduling that keeps NOT and CNOT gates out of Toffoli slices.
///
/// Time is ordered as Toffoli layer 1, the CNOT/NOT slices after it, Toffoli
/// layer 2, and so on. Each gate goes to the earliest such slot after the
/// last use of its wires: a Toffoli opens the next Toffoli layer, any other
/// gate takes the next slice of the current gap. The number of slices holding
/// a Toffoli is then the largest number of Toffolis on one dependency chain,
/// which no schedule can beat.
pub fn schedule_toffoli_layers(circuit: &Circuit) -> Result<Slicing, CircuitError> {
    circuit.validate()?;
    let offsets = circuit.layout.offsets();
    // (toffoli layer, position in the gap after it; 0 is the layer itself)
    let mut ready = vec![(0usize, 0usize); circuit.layout.total_width()];
    let mut slots = Vec::with_capacity(circuit.len());
    for gate in circuit.gates() {
        let flat: Vec<usize> = gate
            .wires()
            .map(|w| offsets[w.reg.0 as usize] + w.index as usize)
            .collect();
        let t = flat.iter().map(|&f| ready[f]).max().unwrap_or((0, 0));
        let slot = if gate.kind() == GateKind::Toffoli {
            (t.0 + 1, 0)
        } else {
            (t.0, t.1 + 1)
        };
        for &f in &flat {
            ready[f] = slot;
        }
        slots.push(slot);
    }
    let mut order: Vec<(usize, usize)> = slots.clone();
    order.sort_unstable();
    order.dedup();
    let mut slices = vec![Vec::new(); order.len()];
    for (i, slot) in slots.iter().enumerate() {
        let k = order.binary_search(slot).expect("slot recorded");
        slices[k].push(i);
    }
    Ok(Slicing { slices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{RegisterLayout, Role, Wire};

    fn regs(size: u32) -> (RegisterLayout, Vec<Wire>) {
        let mut l = RegisterLayout::new();
        let r = l.add("Q", size, Role::Ancilla).unwrap();
        (l, (0..size).map(|i| Wire::new(r, i)).collect())
    }

    #[test]
    fn empty_has_no_slices() {
        let (l, _) = regs(2);
        let s = schedule_asap(&Circuit::new(l)).unwrap();
        assert_eq!(s.total_slices(), 0);
    }

    #[test]
    fn disjoint_gates_share_a_slice() {
        let (l, q) = regs(4);
        let mut c = Circuit::new(l);
        c.cnot(q[0], q[1]);
        c.cnot(q[2], q[3]);
        assert_eq!(schedule_asap(&c).unwrap().slices, vec![vec![0, 1]]);
    }

    #[test]
    fn later_gate_can_move_ahead_of_unrelated_one() {
        let (l, q) = regs(4);
        let mut c = Circuit::new(l);
        c.cnot(q[0], q[1]);
        c.cnot(q[1], q[2]);
        c.not(q[3]);
        let s = schedule_asap(&c).unwrap();
        assert_eq!(s.slices, vec![vec![0, 2], vec![1]]);
        assert_eq!(s.slices_with(&c, GateKind::Not), 1);
        assert_eq!(s.slices_with(&c, GateKind::Toffoli), 0);
    }

    #[test]
    fn layered_schedule_keeps_toffoli_slices_pure() {
        let (l, q) = regs(6);
        let mut c = Circuit::new(l);
        c.toffoli(q[0], q[1], q[2]);
        c.cnot(q[3], q[4]);
        c.toffoli(q[2], q[4], q[5]);
        // plain ASAP puts the CNOT next to the first Toffoli
        assert_eq!(schedule_asap(&c).unwrap().slices, vec![vec![0, 1], vec![2]]);
        let s = schedule_toffoli_layers(&c).unwrap();
        assert_eq!(s.slices, vec![vec![1], vec![0], vec![2]]);
        assert_eq!(s.slices_with(&c, GateKind::Toffoli), 2);
    }

    #[test]
    fn cnot_between_toffolis_adds_no_toffoli_layer() {
        let (l, q) = regs(5);
        let mut c = Circuit::new(l);
        c.toffoli(q[0], q[1], q[2]);
        c.cnot(q[2], q[3]);
        c.cnot(q[3], q[4]);
        c.toffoli(q[0], q[4], q[1]);
        let s = schedule_toffoli_layers(&c).unwrap();
        assert_eq!(s.slices_with(&c, GateKind::Toffoli), 2);
        assert_eq!(s.total_slices(), 4);
    }
}
