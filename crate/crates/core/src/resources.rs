// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::circuit::{Circuit, CircuitError, GateKind};
use crate::schedule::{schedule_asap, schedule_toffoli_layers};

/// Gate tallies and depths of a circuit. `total_slices` comes from
/// [`schedule_asap`]; `toffoli_slices` from [`schedule_toffoli_layers`], which
/// keeps CNOT and NOT gates in slices of their own.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub toffoli_count: usize,
    pub cnot_count: usize,
    pub not_count: usize,
    pub total_slices: usize,
    /// Slices containing at least one Toffoli, with Toffoli slices kept free
    /// of other gates.
    pub toffoli_slices: usize,
    pub ancilla_count: usize,
}

impl ResourceReport {
    pub fn gate_count(&self) -> usize {
        self.toffoli_count + self.cnot_count + self.not_count
    }
}

pub fn resource_report(circuit: &Circuit) -> Result<ResourceReport, CircuitError> {
    let slicing = schedule_asap(circuit)?;
    let layered = schedule_toffoli_layers(circuit)?;
    Ok(ResourceReport {
        toffoli_count: circuit.count(GateKind::Toffoli),
        cnot_count: circuit.count(GateKind::Cnot),
        not_count: circuit.count(GateKind::Not),
        total_slices: slicing.total_slices(),
        toffoli_slices: layered.slices_with(circuit, GateKind::Toffoli),
        ancilla_count: circuit.layout.ancilla_count(),
    })
}
