// SPDX-License-Identifier: Apache-2.0

//! Logarithmic-depth carry-lookahead adders as classical reversible circuits
//! over NOT, CNOT and Toffoli gates.
//!
//! The crate builds the circuits ([`adder`], [`carry_network`]), simulates
//! them on basis states ([`sim`]), measures them ([`resources`],
//! [`schedule`]) and compares the measurements with closed-form counts
//! ([`verify`]).

pub mod adder;
pub mod bits;
pub mod carry_network;
pub mod carry_status;
pub mod circuit;
pub mod format;
pub mod resources;
pub mod schedule;
pub mod sim;
pub mod transform;
pub mod verify;

pub use adder::{generate, AdderError, AdderRequest, Function, ZeroRep};
pub use carry_network::{build_carry_network, CarryNetworkSpec, Direction, NetworkError};
pub use carry_status::CarryStatus;
pub use circuit::{
    Barrier, Circuit, CircuitError, Gate, GateKind, Phase, RegId, Register, RegisterLayout, Role,
    Wire,
};
pub use format::{parse_native, to_native, to_qasm, ParseError};
pub use resources::{resource_report, ResourceReport};
pub use schedule::{schedule_asap, schedule_toffoli_layers, Slicing};
pub use sim::{
    exhaustive_check, oracle_eval, random_check, run, run_operands, BitState, CheckReport, Domain,
    OperandAssignment, RunOutcome, SimError,
};
pub use transform::{constant_propagate, invert, lightcone};
pub use verify::{formula_eval, verify_family, Family, FamilyReport, FormulaEntry, VerifyError};
