// SPDX-License-Identifier: Apache-2.0

use crate::carry_network::{emit_network, AncillaMap, Direction, NetworkWires};
use crate::circuit::{Circuit, Phase, RegId, RegisterLayout, Role, Wire};

use super::{reg_wires, AdderError, Function, Virtual};

struct Shape {
    n: usize,
    in_place: bool,
    modular: bool,
    carry_in: bool,
}

impl Shape {
    /// Width of the virtual adder.
    fn big_n(&self) -> usize {
        self.n + self.carry_in as usize
    }

    /// Width of the forward carry network.
    fn net_n(&self) -> usize {
        self.big_n() - self.modular as usize
    }
}

fn network_wires(width: usize, zp: &[Option<Wire>], v: &Virtual, x: RegId) -> NetworkWires {
    NetworkWires {
        n: width,
        g: zp[..=width].to_vec(),
        p0: v.b[..width].to_vec(),
        ancilla: AncillaMap::new(width, x, 0),
    }
}

fn build(shape: Shape) -> Result<Circuit, AdderError> {
    let n = shape.n;
    let f = if shape.modular {
        Function::AddMod2n
    } else {
        Function::Add
    };
    f.check_width(n)?;
    let big = shape.big_n();
    let net = shape.net_n();
    let mut layout = RegisterLayout::new();
    layout.add("A", n as u32, Role::InputA)?;
    layout.add(
        "B",
        n as u32,
        if shape.in_place {
            Role::InOutB
        } else {
            Role::InputB
        },
    )?;
    if shape.in_place {
        layout.add("C", n as u32 - 1, Role::Ancilla)?;
        if !shape.modular {
            layout.add("Z", 1, Role::Output)?;
        }
    } else {
        layout.add("Z", (n + !shape.modular as usize) as u32, Role::Output)?;
    }
    let x = layout.add("X", AncillaMap::size_for(net) as u32, Role::Ancilla)?;
    if shape.carry_in {
        layout.add("Y", 1, Role::CarryIn)?;
    }
    let mut c = Circuit::new(layout);
    let a = reg_wires(&c, "A");
    let b = reg_wires(&c, "B");
    let y = shape.carry_in.then(|| reg_wires(&c, "Y")[0]);
    let v = Virtual::new(&a, &b, shape.carry_in);

    // zp[j] is the wire holding G[j] of the virtual adder (index 0 is the
    // low sum bit out of place).
    let mut zp: Vec<Option<Wire>> = vec![None; big + 1];
    if shape.in_place {
        let cw = reg_wires(&c, "C");
        let mut next = cw.iter().copied();
        let first = if let Some(y) = y {
            zp[1] = Some(y);
            2
        } else {
            1
        };
        for slot in zp.iter_mut().take(big).skip(first) {
            *slot = next.next();
        }
        if !shape.modular {
            zp[big] = Some(reg_wires(&c, "Z")[0]);
        }
    } else {
        let z = reg_wires(&c, "Z");
        let shift = shape.carry_in as usize;
        for (k, &w) in z.iter().enumerate() {
            zp[k + shift] = Some(w);
        }
    }

    let toffoli = |c: &mut Circuit, i: usize| {
        if let (Some(ai), Some(bi), Some(t)) = (v.a[i], v.b[i], zp[i + 1]) {
            c.toffoli(ai, bi, t);
        }
    };
    let cnot_ab = |c: &mut Circuit, i: usize| {
        if let (Some(ai), Some(bi)) = (v.a[i], v.b[i]) {
            c.cnot(ai, bi);
        }
    };

    if shape.in_place {
        let init_end = if shape.modular { big - 1 } else { big };
        c.barrier(Phase::Init);
        (0..init_end).for_each(|i| toffoli(&mut c, i));
        (0..big).for_each(|i| cnot_ab(&mut c, i));
        if net > 0 {
            emit_network(&mut c, &network_wires(net, &zp, &v, x), Direction::Forward)?;
        }
        c.barrier(Phase::Sum);
        for i in 1..big {
            if let (Some(bi), Some(z)) = (v.b[i], zp[i]) {
                c.cnot(z, bi);
            }
        }
        c.barrier(Phase::Negate);
        v.b[..big - 1].iter().flatten().for_each(|&w| c.not(w));
        c.barrier(Phase::Init);
        (1..big - 1).for_each(|i| cnot_ab(&mut c, i));
        if big > 1 {
            emit_network(
                &mut c,
                &network_wires(big - 1, &zp, &v, x),
                Direction::Inverse,
            )?;
        }
        c.barrier(Phase::Init);
        (1..big - 1).for_each(|i| cnot_ab(&mut c, i));
        (0..big - 1).for_each(|i| toffoli(&mut c, i));
        c.barrier(Phase::Negate);
        v.b[..big - 1].iter().flatten().for_each(|&w| c.not(w));
    } else {
        let top = if shape.modular { big - 1 } else { big };
        c.barrier(Phase::Init);
        if let Some(y) = y {
            c.cnot(y, zp[1].expect("carry slot"));
        }
        (0..top).for_each(|i| toffoli(&mut c, i));
        (1..top).for_each(|i| cnot_ab(&mut c, i));
        if net > 0 {
            emit_network(&mut c, &network_wires(net, &zp, &v, x), Direction::Forward)?;
        }
        c.barrier(Phase::Sum);
        for i in 0..top {
            if let (Some(bi), Some(z)) = (v.b[i], zp[i]) {
                c.cnot(bi, z);
            }
        }
        if shape.modular {
            // the top sum bit is c_{N-1} ^ a ^ b; no carry network covers it
            let z = zp[top].expect("top sum bit");
            c.cnot(v.a[top].expect("real position"), z);
            c.cnot(v.b[top].expect("real position"), z);
        }
        c.barrier(Phase::Fixup);
        if let (Some(a0), Some(z0)) = (v.a[0], zp[0]) {
            if top > 0 {
                c.cnot(a0, z0);
            }
        }
        (1..top).for_each(|i| cnot_ab(&mut c, i));
    }
    Ok(c)
}

/// Out-of-place adder: `Z = a + b (+ y)`.
pub fn gen_add_oop(n: usize, incoming_carry: bool) -> Result<Circuit, AdderError> {
    build(Shape {
        n,
        in_place: false,
        modular: false,
        carry_in: incoming_carry,
    })
}

/// In-place adder: `B = (a + b (+ y)) mod 2^n`, `Z[0]` = high bit.
pub fn gen_add_ip(n: usize, incoming_carry: bool) -> Result<Circuit, AdderError> {
    build(Shape {
        n,
        in_place: true,
        modular: false,
        carry_in: incoming_carry,
    })
}

/// Adder modulo `2^n`, out of place into `Z[n]` or in place into `B`.
pub fn gen_add_mod2n(
    n: usize,
    in_place: bool,
    incoming_carry: bool,
) -> Result<Circuit, AdderError> {
    build(Shape {
        n,
        in_place,
        modular: true,
        carry_in: incoming_carry,
    })
}

/// Subtractor: the output bits (`Z`, or `B` and `Z`) read `2^n + a - b`.
pub fn gen_sub(n: usize, in_place: bool) -> Result<Circuit, AdderError> {
    Function::Subtract.check_width(n)?;
    let inner = build(Shape {
        n,
        in_place,
        modular: false,
        carry_in: false,
    })?;
    let mut c = Circuit::new(inner.layout.clone());
    let a = reg_wires(&c, "A");
    c.barrier(Phase::Negate);
    a.iter().for_each(|&w| c.not(w));
    c.append_tagged(inner.gates());
    c.barrier(Phase::Negate);
    a.iter().for_each(|&w| c.not(w));
    if in_place {
        reg_wires(&c, "B").iter().for_each(|&w| c.not(w));
    }
    reg_wires(&c, "Z").iter().for_each(|&w| c.not(w));
    Ok(c)
}
