// SPDX-License-Identifier: Apache-2.0

//! Addition modulo `2^n - 1` with an end-around carry.
//!
//! The carry into position 0 is `c_0 = g[0, n]` (ones representation) or
//! `g[0, n] ^ p[0, n]` (zeros representation). The network is padded to
//! `W = 2^⌈log n⌉` like the comparator; after the G-rounds `G[W]` holds
//! `c_0`, which then seeds every C-round through one extra gate per round.

use crate::bits::ceil_log2;
use crate::carry_network::{round_terms, Node, Resolver, RoundKind, Slot, Term};
use crate::circuit::{Circuit, Gate, Phase, RegId, RegisterLayout, Role, Wire};

use super::{reg_wires, AdderError, Function, ZeroRep};

/// Gates of the forward network, grouped by phase, and the scratch bits used.
struct Network {
    phases: Vec<(Phase, Vec<Gate>)>,
    x_used: u32,
}

/// `g[j]` gives the wire of `G[j]` for `1 <= j <= n`, `p0[i]` the wire of
/// `P_0[i] = a_i ^ b_i`.
fn network(
    n: usize,
    rep: ZeroRep,
    g: &dyn Fn(usize) -> Wire,
    p0: &[Wire],
    x: RegId,
) -> Result<Network, AdderError> {
    let k = ceil_log2(n as u64);
    let w = 1usize << k;
    let mut r = Resolver::new(x);
    for j in 1..=w {
        r.set(
            Node::G(j),
            if j <= n {
                Slot::Owned(g(j))
            } else {
                Slot::Const(false)
            },
        );
    }
    for i in 0..w {
        r.set(
            Node::P(0, i),
            if i < n {
                Slot::Alias(p0[i])
            } else {
                Slot::Const(true)
            },
        );
    }

    // P-rounds including the blocks starting at 0, which the wrap-around
    // C-round gates need.
    let mut p_gates = Vec::new();
    for t in 1..k {
        for m in 0..w >> t {
            let term = Term {
                target: Node::P(t, m),
                controls: [Node::P(t - 1, 2 * m), Node::P(t - 1, 2 * m + 1)],
            };
            p_gates.extend(r.apply(&term)?);
        }
    }

    let mut g_gates = Vec::new();
    for t in 1..=k {
        for term in round_terms(RoundKind::G, t, w) {
            if rep == ZeroRep::Zeros && term.target == Node::G(w) && t == k {
                // fold p[0, n] into the value that becomes c_0; placed just
                // before the last write so it can share a slice with the
                // previous G-round
                let fold = Term {
                    target: Node::G(w),
                    controls: [Node::P(k - 1, 0), Node::P(k - 1, 1)],
                };
                g_gates.extend(r.apply(&fold)?);
            }
            g_gates.extend(r.apply(&term)?);
        }
    }
    let top = r.slot(Node::G(w));
    r.set(Node::G(0), top);

    let mut c_gates = Vec::new();
    for t in (1..=k).rev() {
        let half = 1usize << (t - 1);
        let step = 1usize << t;
        for m in 0.. {
            let j = step * m + half;
            if j >= n {
                break;
            }
            let term = Term {
                target: Node::G(j),
                controls: [Node::G(step * m), Node::P(t - 1, 2 * m)],
            };
            c_gates.extend(r.apply(&term)?);
        }
    }
    let pinv: Vec<Gate> = p_gates.iter().rev().copied().collect();
    Ok(Network {
        phases: vec![
            (Phase::P, p_gates),
            (Phase::G, g_gates),
            (Phase::C, c_gates),
            (Phase::Pinv, pinv),
        ],
        x_used: r.x_used(),
    })
}

fn emit(c: &mut Circuit, net: &Network, inverse: bool) {
    let mut phases: Vec<&(Phase, Vec<Gate>)> = net.phases.iter().collect();
    if inverse {
        phases.reverse();
    }
    for (phase, gates) in phases {
        if gates.is_empty() {
            continue;
        }
        c.barrier(*phase);
        if inverse {
            c.extend(gates.iter().rev().copied());
        } else {
            c.extend(gates.iter().copied());
        }
    }
}

/// Adder modulo `2^n - 1`. Out of place the sum goes to `Z`; in place it
/// replaces `B` and the carries use the scratch register `C`.
pub fn gen_add_mersenne(n: usize, in_place: bool, rep: ZeroRep) -> Result<Circuit, AdderError> {
    Function::AddMersenne.check_width(n)?;
    let mut layout = RegisterLayout::new();
    layout.add("A", n as u32, Role::InputA)?;
    layout.add(
        "B",
        n as u32,
        if in_place { Role::InOutB } else { Role::InputB },
    )?;
    if in_place {
        layout.add("C", n as u32, Role::Ancilla)?;
    } else {
        layout.add("Z", n as u32, Role::Output)?;
    }
    let x = layout.add("X", 0, Role::Ancilla)?;
    let mut c = Circuit::new(layout);
    let a = reg_wires(&c, "A");
    let b = reg_wires(&c, "B");
    // carry[i] ends up holding c_i; generate G[j] starts in carry[j mod n]
    let carry: Vec<Wire> = if in_place {
        let cw = reg_wires(&c, "C");
        (0..n).map(|i| cw[(i + n - 1) % n]).collect()
    } else {
        reg_wires(&c, "Z")
    };
    let g = |j: usize| carry[j % n];

    let init = |c: &mut Circuit| {
        for i in 0..n {
            c.toffoli(a[i], b[i], g(i + 1));
        }
    };
    let cnot_ab = |c: &mut Circuit| {
        for i in 0..n {
            c.cnot(a[i], b[i]);
        }
    };

    let forward = network(n, rep, &g, &b, x)?;
    c.barrier(Phase::Init);
    init(&mut c);
    cnot_ab(&mut c);
    emit(&mut c, &forward, false);
    c.barrier(Phase::Sum);
    let mut used = forward.x_used;
    if in_place {
        for i in 0..n {
            c.cnot(carry[i], b[i]);
        }
        c.barrier(Phase::Negate);
        b.iter().for_each(|&w| c.not(w));
        c.barrier(Phase::Init);
        cnot_ab(&mut c);
        // B now holds a ^ s'; undo the addition of a and s' in the other
        // representation, whose carries coincide with the forward ones
        let undo = network(n, rep.other(), &g, &b, x)?;
        emit(&mut c, &undo, true);
        used = used.max(undo.x_used);
        c.barrier(Phase::Init);
        cnot_ab(&mut c);
        init(&mut c);
        c.barrier(Phase::Negate);
        b.iter().for_each(|&w| c.not(w));
    } else {
        for i in 0..n {
            c.cnot(b[i], carry[i]);
        }
        c.barrier(Phase::Fixup);
        cnot_ab(&mut c);
    }
    c.layout.resize(x, used);
    Ok(c)
}
