// SPDX-License-Identifier: Apache-2.0

use crate::bits::ceil_log2;
use crate::carry_network::{round_terms, Node, Resolver, RoundKind, Slot, Term};
use crate::circuit::{Circuit, Gate, Phase, RegisterLayout, Role, Wire};
use crate::transform::lightcone;

use super::{reg_wires, AdderError, Function, Virtual};

/// The G-round terms of a `w`-bit network that can reach `G[w]`.
pub(crate) fn g_terms_toward_top(w: usize) -> Vec<Term> {
    let k = ceil_log2(w as u64);
    let terms: Vec<Term> = (1..=k)
        .flat_map(|t| round_terms(RoundKind::G, t, w))
        .collect();
    // A throwaway circuit with one wire per network value, so the generic
    // lightcone can pick the gates feeding G[w].
    let mut layout = RegisterLayout::new();
    let g = layout
        .add("G", w as u32 + 1, Role::Ancilla)
        .expect("fresh layout");
    let levels: Vec<_> = (0..k)
        .map(|t| {
            layout
                .add(&format!("P{t}"), (w >> t) as u32, Role::Ancilla)
                .expect("fresh layout")
        })
        .collect();
    let wire = |node: Node| match node {
        Node::G(j) => Wire::new(g, j as u32),
        Node::P(t, m) => Wire::new(levels[t as usize], m as u32),
    };
    let mut virt = Circuit::new(layout);
    for t in &terms {
        virt.toffoli(wire(t.controls[0]), wire(t.controls[1]), wire(t.target));
    }
    let cone = lightcone(&virt, wire(Node::G(w)));
    terms
        .into_iter()
        .enumerate()
        .filter(|(i, _)| cone.contains(i))
        .map(|(_, t)| t)
        .collect()
}

/// Comparator: `Z[0] = [a >= b + y]`, everything else restored.
pub fn gen_compare(n: usize, incoming_carry: bool) -> Result<Circuit, AdderError> {
    Function::Compare.check_width(n)?;
    let big = n + incoming_carry as usize;
    let k = ceil_log2(big as u64);
    let w = 1usize << k;

    let mut layout = RegisterLayout::new();
    layout.add("A", n as u32, Role::InputA)?;
    layout.add("B", n as u32, Role::InputB)?;
    layout.add("C", n as u32 - 1, Role::Ancilla)?;
    layout.add("Z", 1, Role::Output)?;
    let x = layout.add("X", 0, Role::Ancilla)?;
    if incoming_carry {
        layout.add("Y", 1, Role::CarryIn)?;
    }
    let mut c = Circuit::new(layout);
    let a = reg_wires(&c, "A");
    let b = reg_wires(&c, "B");
    let z = reg_wires(&c, "Z")[0];
    let v = Virtual::new(&a, &b, incoming_carry);

    let mut zp: Vec<Option<Wire>> = vec![None; big + 1];
    let mut next = reg_wires(&c, "C").into_iter();
    for (j, slot) in zp.iter_mut().enumerate().take(big).skip(1) {
        *slot = if incoming_carry && j == 1 {
            Some(reg_wires(&c, "Y")[0])
        } else {
            next.next()
        };
    }
    zp[big] = Some(z);

    c.barrier(Phase::Negate);
    a.iter().for_each(|&w| c.not(w));
    c.barrier(Phase::Init);
    for i in 0..big {
        if let (Some(ai), Some(bi)) = (v.a[i], v.b[i]) {
            c.toffoli(ai, bi, zp[i + 1].expect("generate slot"));
        }
    }
    for i in 1..big {
        if let (Some(ai), Some(bi)) = (v.a[i], v.b[i]) {
            c.cnot(ai, bi);
        }
    }

    // Positions >= big are padding: after complementing a they all
    // propagate and none generates.
    let mut r = Resolver::new(x);
    for j in 1..=w {
        r.set(
            Node::G(j),
            match zp.get(j).copied().flatten() {
                Some(wire) if j <= big => Slot::Owned(wire),
                _ => Slot::Const(false),
            },
        );
    }
    for i in 1..w {
        r.set(
            Node::P(0, i),
            if i < big {
                Slot::Alias(v.b[i].expect("real position"))
            } else {
                Slot::Const(true)
            },
        );
    }

    let mut p_gates = Vec::new();
    for t in 1..k {
        for term in round_terms(RoundKind::P, t, w) {
            p_gates.extend(r.apply(&term)?);
        }
    }
    let mut g_gates = Vec::new();
    for term in g_terms_toward_top(w) {
        g_gates.extend(r.apply(&term)?);
    }
    debug_assert_eq!(r.slot(Node::G(w)), Slot::Owned(z));

    c.barrier(Phase::P);
    c.extend(p_gates.iter().copied());
    c.barrier(Phase::G);
    c.extend(g_gates.iter().copied());
    c.extend(
        g_gates
            .iter()
            .rev()
            .filter(|g: &&Gate| g.target() != z)
            .copied(),
    );
    c.barrier(Phase::Pinv);
    c.extend(p_gates.iter().rev().copied());

    c.barrier(Phase::Init);
    for i in 1..big {
        if let (Some(ai), Some(bi)) = (v.a[i], v.b[i]) {
            c.cnot(ai, bi);
        }
    }
    for i in 0..big - 1 {
        if let (Some(ai), Some(bi)) = (v.a[i], v.b[i]) {
            c.toffoli(ai, bi, zp[i + 1].expect("generate slot"));
        }
    }
    c.barrier(Phase::Negate);
    a.iter().for_each(|&w| c.not(w));
    c.not(z);

    let used = r.x_used();
    c.layout.resize(x, used);
    Ok(c)
}
