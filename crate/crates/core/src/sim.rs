// SPDX-License-Identifier: Apache-2.0

//! Classical simulation on basis states, operand encoding and the integer
//! oracles.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::adder::{generate, AdderError, AdderRequest, Function, ZeroRep};
use crate::carry_network::{build_carry_network, CarryNetworkSpec, Direction};
use crate::carry_status::{generate as gen_bit, ripple_carries};
use crate::circuit::{Circuit, CircuitError, GateKind, Phase, RegId, RegisterLayout, Role, Wire};

/// Largest width accepted by [`exhaustive_check`].
pub const EXHAUSTIVE_MAX_N: usize = 12;

/// Most failing inputs an exhaustive check lists individually.
pub const FAILURE_LIST_LIMIT: usize = 1 << 12;

/// Default seed for randomized checks.
pub const DEFAULT_SEED: u64 = 0x5eed_ca22_1ab0_0c1a;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Adder(#[from] AdderError),
    #[error("operand {name} = {value} does not fit in {n} bits")]
    OperandRange { name: char, value: String, n: usize },
    #[error("circuit has no {0} register")]
    MissingRegister(&'static str),
    #[error("exhaustive check is limited to n <= {EXHAUSTIVE_MAX_N}, got {0}")]
    TooWide(usize),
    #[error("circuit carries no variant description")]
    NoVariant,
    #[error("bad variant description: {0}")]
    BadVariant(String),
}

/// One bit per wire, packed 64 to a word in flattened layout order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitState {
    offsets: Vec<usize>,
    width: usize,
    words: Vec<u64>,
}

impl BitState {
    pub fn zeros(layout: &RegisterLayout) -> Self {
        let width = layout.total_width();
        BitState {
            offsets: layout.offsets(),
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    fn flat(&self, w: Wire) -> usize {
        self.offsets[w.reg.0 as usize] + w.index as usize
    }

    pub fn bit(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn get(&self, w: Wire) -> bool {
        self.bit(self.flat(w))
    }

    pub fn set(&mut self, w: Wire, v: bool) {
        let f = self.flat(w);
        self.set_bit(f, v);
    }

    pub fn register(&self, layout: &RegisterLayout, reg: RegId) -> BigUint {
        let size = layout.register(reg).size;
        let mut v = BigUint::zero();
        for i in (0..size).rev() {
            v <<= 1u32;
            if self.get(Wire::new(reg, i)) {
                v |= BigUint::one();
            }
        }
        v
    }

    pub fn set_register(&mut self, layout: &RegisterLayout, reg: RegId, value: &BigUint) {
        for i in 0..layout.register(reg).size {
            self.set(Wire::new(reg, i), value.bit(i as u64));
        }
    }

    /// Bits as a `0`/`1` string, wire 0 first.
    pub fn to_bit_string(&self) -> String {
        (0..self.width)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Op {
    kind: GateKind,
    c0: u32,
    c1: u32,
    t: u32,
}

/// A circuit lowered to flat wire indices.
#[derive(Clone)]
pub struct Program {
    ops: Vec<Op>,
    width: usize,
}

impl Program {
    pub fn compile(circuit: &Circuit) -> Result<Self, CircuitError> {
        circuit.validate()?;
        let offsets = circuit.layout.offsets();
        let flat = |w: Wire| (offsets[w.reg.0 as usize] + w.index as usize) as u32;
        let ops = circuit
            .gates()
            .iter()
            .map(|g| {
                let c = g.controls();
                let t = flat(g.target());
                Op {
                    kind: g.kind(),
                    c0: c.first().map_or(t, |&w| flat(w)),
                    c1: c.get(1).map_or(t, |&w| flat(w)),
                    t,
                }
            })
            .collect();
        Ok(Program {
            ops,
            width: circuit.layout.total_width(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Runs 64 independent basis states at once; bit `l` of `lanes[w]` is
    /// wire `w` of state `l`.
    pub fn run_lanes(&self, lanes: &mut [u64]) {
        assert_eq!(
            lanes.len(),
            self.width,
            "lane vector does not match the layout"
        );
        for op in &self.ops {
            let (c0, c1, t) = (op.c0 as usize, op.c1 as usize, op.t as usize);
            let flip = match op.kind {
                GateKind::Not => !0,
                GateKind::Cnot => lanes[c0],
                GateKind::Toffoli => lanes[c0] & lanes[c1],
            };
            lanes[t] ^= flip;
        }
    }

    pub fn run_prefix_lanes(&self, lanes: &mut [u64], end: usize) {
        let prefix = Program {
            ops: self.ops[..end].to_vec(),
            width: self.width,
        };
        prefix.run_lanes(lanes);
    }

    fn run_state(&self, state: &mut BitState) {
        for op in &self.ops {
            let flip = match op.kind {
                GateKind::Not => true,
                GateKind::Cnot => state.bit(op.c0 as usize),
                GateKind::Toffoli => state.bit(op.c0 as usize) && state.bit(op.c1 as usize),
            };
            if flip {
                let t = op.t as usize;
                let v = state.bit(t);
                state.set_bit(t, !v);
            }
        }
    }
}

/// Applies the gates in order to a copy of `state`.
pub fn run(circuit: &Circuit, state: &BitState) -> Result<BitState, SimError> {
    let expected = circuit.layout.total_width();
    if state.len() != expected {
        return Err(CircuitError::StateSize {
            expected,
            got: state.len(),
        }
        .into());
    }
    let program = Program::compile(circuit)?;
    let mut out = state.clone();
    program.run_state(&mut out);
    Ok(out)
}

/// Applies the gates to 64 states at once (see [`Program::run_lanes`]).
pub fn run_batch(circuit: &Circuit, lanes: &mut [u64]) -> Result<(), SimError> {
    let program = Program::compile(circuit)?;
    if lanes.len() != program.width() {
        return Err(CircuitError::StateSize {
            expected: program.width(),
            got: lanes.len(),
        }
        .into());
    }
    program.run_lanes(lanes);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperandAssignment {
    pub a: BigUint,
    pub b: BigUint,
    pub y: bool,
}

impl OperandAssignment {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>, y: bool) -> Self {
        OperandAssignment {
            a: a.into(),
            b: b.into(),
            y,
        }
    }
}

/// Decoded result of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    /// `(register, value)` for the in/out and output registers, in layout order.
    pub outputs: Vec<(String, BigUint)>,
    /// Those registers concatenated, first register lowest.
    pub value: BigUint,
    /// Input and carry-in registers hold their initial values.
    pub restored: bool,
    /// All ancilla registers are zero.
    pub clean: bool,
    pub state: BitState,
}

impl RunOutcome {
    pub fn summary(&self) -> String {
        let mut s: Vec<String> = self
            .outputs
            .iter()
            .map(|(name, v)| format!("{name}={v}"))
            .collect();
        s.push(format!("restored={}", self.restored));
        s.push(format!("clean={}", self.clean));
        s.join(" ")
    }
}

struct Roles {
    a: RegId,
    b: RegId,
    y: Option<RegId>,
    n: usize,
}

fn roles(layout: &RegisterLayout) -> Result<Roles, SimError> {
    let a = layout
        .find_role(Role::InputA)
        .ok_or(SimError::MissingRegister("input-a"))?;
    let b = layout
        .find_role(Role::InputB)
        .or_else(|| layout.find_role(Role::InOutB))
        .ok_or(SimError::MissingRegister("input-b"))?;
    Ok(Roles {
        a,
        b,
        y: layout.find_role(Role::CarryIn),
        n: layout.register(a).size as usize,
    })
}

fn is_output(role: Role) -> bool {
    matches!(role, Role::InOutB | Role::Output)
}

fn is_preserved(role: Role) -> bool {
    matches!(role, Role::InputA | Role::InputB | Role::CarryIn)
}

/// Encodes operands into `A`, `B`, `Y`, runs and decodes.
pub fn run_operands(circuit: &Circuit, ops: &OperandAssignment) -> Result<RunOutcome, SimError> {
    let layout = &circuit.layout;
    let r = roles(layout)?;
    let bound = BigUint::one() << r.n;
    let n_b = layout.register(r.b).size as usize;
    if ops.a >= bound {
        return Err(SimError::OperandRange {
            name: 'a',
            value: ops.a.to_string(),
            n: r.n,
        });
    }
    if ops.b >= BigUint::one() << n_b {
        return Err(SimError::OperandRange {
            name: 'b',
            value: ops.b.to_string(),
            n: n_b,
        });
    }
    let mut state = BitState::zeros(layout);
    state.set_register(layout, r.a, &ops.a);
    state.set_register(layout, r.b, &ops.b);
    if let Some(y) = r.y {
        if layout.register(y).size > 0 {
            state.set(Wire::new(y, 0), ops.y);
        }
    }
    let before = state.clone();
    let after = run(circuit, &state)?;

    let mut outputs = Vec::new();
    let mut value = BigUint::zero();
    let mut shift = 0u64;
    let mut restored = true;
    let mut clean = true;
    for id in layout.ids() {
        let reg = layout.register(id);
        let v = after.register(layout, id);
        if is_output(reg.role) {
            value |= &v << shift;
            shift += reg.size as u64;
            outputs.push((reg.name.clone(), v));
        } else if is_preserved(reg.role) {
            restored &= v == before.register(layout, id);
        } else if reg.role == Role::Ancilla {
            clean &= v.is_zero();
        }
    }
    Ok(RunOutcome {
        outputs,
        value,
        restored,
        clean,
        state: after,
    })
}

/// Expected decoded value for a request.
pub fn oracle_eval(req: &AdderRequest, ops: &OperandAssignment) -> Result<BigUint, SimError> {
    req.validate()?;
    let n = req.n;
    let modulus = BigUint::one() << n;
    for (name, v) in [('a', &ops.a), ('b', &ops.b)] {
        if *v >= modulus {
            return Err(SimError::OperandRange {
                name,
                value: v.to_string(),
                n,
            });
        }
    }
    let y = BigUint::from(ops.y as u8);
    let (a, b) = (&ops.a, &ops.b);
    Ok(match req.function {
        Function::Add => a + b + y,
        Function::AddMod2n => (a + b + y) % &modulus,
        Function::Subtract => &modulus + a - b,
        Function::Compare => BigUint::from((*a >= b + y) as u8),
        Function::AddMersenne => {
            let ones = &modulus - 1u32;
            let s = a + b;
            if req.rep() == ZeroRep::Zeros && s == ones {
                BigUint::zero()
            } else if s >= modulus {
                s - ones
            } else {
                s
            }
        }
    })
}

/// Same as [`oracle_eval`] on machine words, for `n <= 62`.
pub fn oracle_small(req: &AdderRequest, a: u64, b: u64, y: bool) -> u64 {
    let n = req.n as u32;
    let modulus = 1u64 << n;
    let y = y as u64;
    match req.function {
        Function::Add => a + b + y,
        Function::AddMod2n => (a + b + y) & (modulus - 1),
        Function::Subtract => modulus + a - b,
        Function::Compare => (a >= b + y) as u64,
        Function::AddMersenne => {
            let ones = modulus - 1;
            let s = a + b;
            if req.rep() == ZeroRep::Zeros && s == ones {
                0
            } else if s >= modulus {
                s - ones
            } else {
                s
            }
        }
    }
}

/// Variant description embedded in a circuit.
pub fn circuit_request(circuit: &Circuit) -> Result<AdderRequest, SimError> {
    circuit
        .variant
        .as_deref()
        .ok_or(SimError::NoVariant)?
        .parse()
        .map_err(SimError::BadVariant)
}

/// A failing input with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub a: String,
    pub b: String,
    pub y: bool,
    pub expected: String,
    pub got: String,
    pub restored: bool,
    pub clean: bool,
    /// Final state, wire 0 first in layout order.
    pub state: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub request: String,
    pub inputs: u64,
    /// Inputs outside the operand domain that were skipped.
    pub excluded: u64,
    pub failures: u64,
    pub first_failure: Option<Counterexample>,
    /// Failing `(a, b, y)` in visiting order, at most [`FAILURE_LIST_LIMIT`]
    /// (exhaustive checks only).
    pub failing: Vec<(u64, u64, bool)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self) -> String {
        match &self.first_failure {
            None if self.excluded > 0 => format!(
                "pass ({} inputs, {} outside the operand domain)",
                self.inputs, self.excluded
            ),
            None => format!("pass ({} inputs)", self.inputs),
            Some(cx) => format!(
                "FAIL ({} of {} inputs); first: a={} b={} y={} expected={} got={} restored={} clean={}",
                self.failures,
                self.inputs,
                cx.a,
                cx.b,
                cx.y as u8,
                cx.expected,
                cx.got,
                cx.restored,
                cx.clean
            ),
        }
    }
}

/// Which operand assignments an exhaustive check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Every `(a, b, y)`.
    Full,
    /// Every assignment allowed by [`AdderRequest::b_in_domain`].
    Operands,
}

/// Flattened wire indices of each register.
fn register_bits(layout: &RegisterLayout) -> Vec<Vec<usize>> {
    let offsets = layout.offsets();
    layout
        .registers()
        .iter()
        .zip(offsets)
        .map(|(r, o)| (o..o + r.size as usize).collect())
        .collect()
}

fn lane_value(lanes: &[u64], bits: &[usize], lane: u32) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &f)| acc | (lanes[f] >> lane & 1) << i)
}

/// Runs every operand assignment of a generated circuit against the oracle.
/// Inputs are visited in lexicographic `(a, b, y)` order and the first
/// mismatch in that order is reported.
pub fn exhaustive_check(req: &AdderRequest, domain: Domain) -> Result<CheckReport, SimError> {
    req.validate()?;
    if req.n > EXHAUSTIVE_MAX_N {
        return Err(SimError::TooWide(req.n));
    }
    let circuit = generate(req)?;
    exhaustive_check_circuit(&circuit, req, domain)
}

/// [`exhaustive_check`] for an already built circuit.
pub fn exhaustive_check_circuit(
    circuit: &Circuit,
    req: &AdderRequest,
    domain: Domain,
) -> Result<CheckReport, SimError> {
    let n = req.n;
    if n > EXHAUSTIVE_MAX_N {
        return Err(SimError::TooWide(n));
    }
    let layout = &circuit.layout;
    let program = Program::compile(circuit)?;
    let r = roles(layout)?;
    let bits = register_bits(layout);
    let ybit = r.y.map(|y| bits[y.0 as usize][0]);
    let ycount = if ybit.is_some() { 2u64 } else { 1 };
    let total = (1u64 << (2 * n)) * ycount;
    let ones = (1u64 << n) - 1;
    let decode = |idx: u64| {
        let y = ybit.is_some() && idx % 2 == 1;
        let ab = idx / ycount;
        (ab >> n, ab & ones, y)
    };

    let mut report = CheckReport {
        request: req.to_string(),
        inputs: 0,
        excluded: 0,
        failures: 0,
        first_failure: None,
        failing: Vec::new(),
    };
    let mut lanes = vec![0u64; program.width()];
    let mut start = 0u64;
    while start < total {
        let count = (total - start).min(64) as u32;
        lanes.iter_mut().for_each(|l| *l = 0);
        for lane in 0..count {
            let (a, b, y) = decode(start + lane as u64);
            for (i, &f) in bits[r.a.0 as usize].iter().enumerate() {
                lanes[f] |= (a >> i & 1) << lane;
            }
            for (i, &f) in bits[r.b.0 as usize].iter().enumerate() {
                lanes[f] |= (b >> i & 1) << lane;
            }
            if let Some(f) = ybit {
                lanes[f] |= (y as u64) << lane;
            }
        }
        let initial = lanes.clone();
        program.run_lanes(&mut lanes);
        for lane in 0..count {
            let (a, b, y) = decode(start + lane as u64);
            if domain == Domain::Operands && !req.b_in_domain(b == 0, b == ones) {
                report.excluded += 1;
                continue;
            }
            report.inputs += 1;
            let mut value = 0u64;
            let mut shift = 0;
            let mut restored = true;
            let mut clean = true;
            for (id, reg) in layout.ids().zip(layout.registers()) {
                let rb = &bits[id.0 as usize];
                let v = lane_value(&lanes, rb, lane);
                if is_output(reg.role) {
                    value |= v << shift;
                    shift += rb.len();
                } else if is_preserved(reg.role) {
                    restored &= v == lane_value(&initial, rb, lane);
                } else if reg.role == Role::Ancilla {
                    clean &= v == 0;
                }
            }
            let expected = oracle_small(req, a, b, y);
            if value != expected || !restored || !clean {
                report.failures += 1;
                if report.failing.len() < FAILURE_LIST_LIMIT {
                    report.failing.push((a, b, y));
                }
                if report.first_failure.is_none() {
                    let state: String = (0..program.width())
                        .map(|f| if lanes[f] >> lane & 1 == 1 { '1' } else { '0' })
                        .collect();
                    report.first_failure = Some(Counterexample {
                        a: a.to_string(),
                        b: b.to_string(),
                        y,
                        expected: expected.to_string(),
                        got: value.to_string(),
                        restored,
                        clean,
                        state,
                    });
                }
            }
        }
        start += count as u64;
    }
    Ok(report)
}

fn random_below_pow2(rng: &mut ChaCha8Rng, n: usize) -> BigUint {
    let mut bytes = vec![0u8; n.div_ceil(8)];
    rng.fill(&mut bytes[..]);
    let v = BigUint::from_bytes_le(&bytes);
    v % (BigUint::one() << n)
}

/// Checks `pairs` uniformly random operand assignments (within the operand
/// domain) against the oracle, 64 at a time.
pub fn random_check(req: &AdderRequest, pairs: usize, seed: u64) -> Result<CheckReport, SimError> {
    let circuit = generate(req)?;
    let n = req.n;
    let layout = &circuit.layout;
    let program = Program::compile(&circuit)?;
    let r = roles(layout)?;
    let bits = register_bits(layout);
    let ybit = r.y.map(|y| bits[y.0 as usize][0]);
    let ones = (BigUint::one() << n) - 1u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut report = CheckReport {
        request: req.to_string(),
        inputs: 0,
        excluded: 0,
        failures: 0,
        first_failure: None,
        failing: Vec::new(),
    };
    let mut lanes = vec![0u64; program.width()];
    let mut done = 0;
    while done < pairs {
        let count = (pairs - done).min(64);
        let mut batch = Vec::with_capacity(count);
        for _ in 0..count {
            let a = random_below_pow2(&mut rng, n);
            let mut b = random_below_pow2(&mut rng, n);
            while !req.b_in_domain(b.is_zero(), b == ones) {
                b = random_below_pow2(&mut rng, n);
            }
            let y = ybit.is_some() && rng.random::<bool>();
            batch.push(OperandAssignment { a, b, y });
        }
        lanes.iter_mut().for_each(|l| *l = 0);
        for (lane, ops) in batch.iter().enumerate() {
            for (i, &f) in bits[r.a.0 as usize].iter().enumerate() {
                lanes[f] |= (ops.a.bit(i as u64) as u64) << lane;
            }
            for (i, &f) in bits[r.b.0 as usize].iter().enumerate() {
                lanes[f] |= (ops.b.bit(i as u64) as u64) << lane;
            }
            if let Some(f) = ybit {
                lanes[f] |= (ops.y as u64) << lane;
            }
        }
        let initial = lanes.clone();
        program.run_lanes(&mut lanes);
        for (lane, ops) in batch.iter().enumerate() {
            report.inputs += 1;
            let lane = lane as u32;
            let mut value = BigUint::zero();
            let mut shift = 0u64;
            let mut restored = true;
            let mut clean = true;
            for (id, reg) in layout.ids().zip(layout.registers()) {
                for (i, &f) in bits[id.0 as usize].iter().enumerate() {
                    let bit = lanes[f] >> lane & 1 == 1;
                    if is_output(reg.role) {
                        if bit {
                            value.set_bit(shift + i as u64, true);
                        }
                    } else if is_preserved(reg.role) {
                        restored &= bit == (initial[f] >> lane & 1 == 1);
                    } else if reg.role == Role::Ancilla {
                        clean &= !bit;
                    }
                }
                if is_output(reg.role) {
                    shift += reg.size as u64;
                }
            }
            let expected = oracle_eval(req, ops)?;
            if value != expected || !restored || !clean {
                report.failures += 1;
                if report.first_failure.is_none() {
                    report.first_failure = Some(Counterexample {
                        a: ops.a.to_string(),
                        b: ops.b.to_string(),
                        y: ops.y,
                        expected: expected.to_string(),
                        got: value.to_string(),
                        restored,
                        clean,
                        state: String::new(),
                    });
                }
            }
        }
        done += count;
    }
    Ok(report)
}

/// Outcome of the exhaustive carry-network checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkCheck {
    pub pairs: u64,
    /// Some `G[j]` differed from the true carry `c_j` at the end.
    pub carry_failures: u64,
    /// `P_0` or the scratch bits were not restored.
    pub restore_failures: u64,
    /// At the G/C boundary some `G[j]` differed from `g[(j-1) & j, j]`.
    pub boundary_failures: u64,
}

impl NetworkCheck {
    pub fn passed(&self) -> bool {
        self.carry_failures == 0 && self.restore_failures == 0 && self.boundary_failures == 0
    }
}

/// Runs the standalone forward network on every operand pair of width `n`
/// (`n <= 12`), starting from `G[j] = a_{j-1} b_{j-1}`, `B[i] = a_i ^ b_i`.
pub fn carry_network_check(n: usize) -> Result<NetworkCheck, SimError> {
    if n > EXHAUSTIVE_MAX_N {
        return Err(SimError::TooWide(n));
    }
    let circuit = build_carry_network(CarryNetworkSpec {
        n,
        direction: Direction::Forward,
    })
    .map_err(|e| SimError::BadVariant(e.to_string()))?;
    let layout = &circuit.layout;
    let program = Program::compile(&circuit)?;
    let bits = register_bits(layout);
    let find = |name| layout.find(name).expect("network register").0 as usize;
    let (bb, gb, xb) = (&bits[find("B")], &bits[find("G")], &bits[find("X")]);
    // first gate after the G-rounds
    let boundary = circuit
        .phase_ranges()
        .iter()
        .find(|(p, _)| matches!(p, Phase::C | Phase::Pinv))
        .map_or(circuit.len(), |(_, r)| r.start);

    let mut check = NetworkCheck {
        pairs: 0,
        carry_failures: 0,
        restore_failures: 0,
        boundary_failures: 0,
    };
    let total = 1u64 << (2 * n);
    let mask = (1u64 << n) - 1;
    let mut start = 0;
    while start < total {
        let count = (total - start).min(64) as u32;
        let mut lanes = vec![0u64; program.width()];
        for lane in 0..count {
            let idx = start + lane as u64;
            let (a, b) = (idx >> n, idx & mask);
            for i in 0..n {
                let (ai, bi) = (a >> i & 1, b >> i & 1);
                lanes[bb[i]] |= (ai ^ bi) << lane;
                lanes[gb[i + 1]] |= (ai & bi) << lane;
            }
        }
        let initial = lanes.clone();
        let mut mid = lanes.clone();
        program.run_prefix_lanes(&mut mid, boundary);
        program.run_lanes(&mut lanes);
        for lane in 0..count {
            let idx = start + lane as u64;
            let (a, b) = (idx >> n, idx & mask);
            check.pairs += 1;
            let c = ripple_carries(a, b, n);
            if (1..=n).any(|j| (lanes[gb[j]] >> lane & 1 == 1) != c[j]) {
                check.carry_failures += 1;
            }
            let p_ok = bb.iter().all(|&f| (lanes[f] ^ initial[f]) >> lane & 1 == 0);
            let x_ok = xb.iter().all(|&f| lanes[f] >> lane & 1 == 0);
            if !(p_ok && x_ok) {
                check.restore_failures += 1;
            }
            let boundary_ok = (1..=n).all(|j| {
                let i = (j - 1) & j;
                (mid[gb[j]] >> lane & 1 == 1) == gen_bit(a, b, i, j)
            });
            if !boundary_ok {
                check.boundary_failures += 1;
            }
        }
        start += count as u64;
    }
    Ok(check)
}
