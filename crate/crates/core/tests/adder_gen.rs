// SPDX-License-Identifier: Apache-2.0

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use qcla_core::adder::{
    gen_add_ip, gen_add_mersenne, gen_add_mod2n, gen_add_oop, gen_compare, gen_sub,
};
use qcla_core::bits::{floor_log2, weight};
use qcla_core::verify::Family;
use qcla_core::{
    generate, random_check, resource_report, run_operands, AdderError, AdderRequest, Circuit,
    Function, GateKind, OperandAssignment, Phase, ResourceReport, ZeroRep,
};

fn report(c: &Circuit) -> ResourceReport {
    resource_report(c).unwrap()
}

fn out(c: &Circuit, a: u64, b: u64, y: bool) -> (u64, bool, bool) {
    let r = run_operands(c, &OperandAssignment::new(a, b, y)).unwrap();
    (r.value.to_u64().unwrap(), r.restored, r.clean)
}

fn reg(c: &Circuit, a: u64, b: u64, name: &str) -> u64 {
    let r = run_operands(c, &OperandAssignment::new(a, b, false)).unwrap();
    let v: &BigUint = &r.outputs.iter().find(|(n, _)| n == name).unwrap().1;
    v.to_u64().unwrap()
}

/// Integer model of each request, written independently of the library.
fn expected(req: &AdderRequest, a: u64, b: u64, y: bool) -> u64 {
    let n = req.n;
    let y = y as u64;
    let full = 1u64 << n;
    match req.function {
        Function::Add => a + b + y,
        Function::AddMod2n => (a + b + y) % full,
        // Complement trick: (a' + b)' over n + 1 bits.
        Function::Subtract => {
            let mask = (full << 1) - 1;
            !((!a & (full - 1)) + b) & mask
        }
        Function::Compare => (a >= b + y) as u64,
        Function::AddMersenne => {
            let m = full - 1;
            // End-around carry.
            let mut s = a + b;
            if s >= full {
                s = (s & m) + 1;
            }
            if req.rep() == ZeroRep::Zeros && a ^ b == m {
                0
            } else {
                s
            }
        }
    }
}

#[test]
fn out_of_place_examples() {
    let c = gen_add_oop(4, false).unwrap();
    assert_eq!(out(&c, 5, 7, false), (12, true, true));
    let r = report(&gen_add_oop(10, false).unwrap());
    assert_eq!(
        (r.toffoli_count, r.cnot_count, r.ancilla_count),
        (34, 29, 5)
    );
    assert_eq!((r.total_slices, r.toffoli_slices), (11, 8));
    let ic = gen_add_oop(4, true).unwrap();
    assert_eq!(out(&ic, 15, 1, true), (17, true, true));
    assert!(matches!(
        gen_add_oop(0, false),
        Err(AdderError::Width { .. })
    ));
}

#[test]
fn in_place_examples() {
    let r = report(&gen_add_ip(10, false).unwrap());
    assert_eq!(
        (r.toffoli_count, r.cnot_count, r.not_count, r.ancilla_count),
        (63, 35, 18, 14)
    );
    let r = report(&gen_add_ip(8, false).unwrap());
    assert_eq!((r.toffoli_count, r.toffoli_slices), (46, 15));
    let c = gen_add_ip(4, false).unwrap();
    assert_eq!(reg(&c, 9, 9, "B"), 2);
    assert_eq!(reg(&c, 9, 9, "Z"), 1);
    assert_eq!(out(&c, 9, 9, false), (18, true, true));
}

#[test]
fn modular_examples() {
    let r = report(&gen_add_mod2n(10, false, false).unwrap());
    assert_eq!(
        (r.toffoli_count, r.cnot_count, r.ancilla_count),
        (29, 28, 4)
    );
    let r = report(&gen_add_mod2n(8, true, false).unwrap());
    assert_eq!((r.toffoli_count, r.toffoli_slices), (38, 14));
    for in_place in [false, true] {
        let c = gen_add_mod2n(4, in_place, false).unwrap();
        assert_eq!(out(&c, 9, 9, false).0, 2);
    }
}

#[test]
fn subtract_examples() {
    // (a' + b)' = a - b, brute forced before trusting the sign convention.
    for a in 0..16u64 {
        for b in 0..16u64 {
            let low = !((!a & 15) + b) & 15;
            assert_eq!(low, a.wrapping_sub(b) & 15);
            let high = !((!a & 15) + b) >> 4 & 1;
            assert_eq!(high == 1, a >= b);
        }
    }
    for in_place in [false, true] {
        let c = gen_sub(4, in_place).unwrap();
        assert_eq!(out(&c, 3, 5, false).0, 0b01110);
        for a in 0..16 {
            let (v, restored, clean) = out(&c, a, a, false);
            assert_eq!((v & 15, v >> 4, restored, clean), (0, 1, true, true));
        }
    }
    for n in 1..=64 {
        for in_place in [false, true] {
            let add =
                report(&generate(&AdderRequest::new(Function::Add, n).in_place(in_place)).unwrap());
            let sub = report(&gen_sub(n, in_place).unwrap());
            assert_eq!(
                sub.toffoli_count, add.toffoli_count,
                "n={n} in_place={in_place}"
            );
        }
    }
}

#[test]
fn compare_examples() {
    assert!(matches!(
        gen_compare(1, false),
        Err(AdderError::Width { .. })
    ));
    let c = gen_compare(4, false).unwrap();
    assert_eq!(out(&c, 3, 3, false).0, 1);
    assert_eq!(out(&c, 2, 5, false).0, 0);
    assert_eq!(report(&gen_compare(8, false).unwrap()).toffoli_count, 34);

    // G-phase steps at n = 7: forward toward the output, then undo.
    let c = gen_compare(7, false).unwrap();
    let z = c.layout.find("Z").unwrap();
    let g: Vec<_> = c
        .gates()
        .iter()
        .filter(|g| g.phase == Some(Phase::G) && g.kind() == GateKind::Toffoli)
        .collect();
    let last = g.iter().rposition(|g| g.target().reg == z).unwrap();
    assert_eq!(last + 1, 6);
    assert_eq!(g.len() - last - 1, 7 - weight(6) as usize - 1);
    assert!(g[last + 1..].iter().all(|g| g.target().reg != z));
}

#[test]
fn mersenne_examples() {
    let r = report(&gen_add_mersenne(7, false, ZeroRep::Ones).unwrap());
    assert_eq!(
        (r.toffoli_count, r.cnot_count, r.ancilla_count),
        (29, 21, 5)
    );
    for rep in [ZeroRep::Ones, ZeroRep::Zeros] {
        let r = report(&gen_add_mersenne(7, true, rep).unwrap());
        assert_eq!(
            (r.toffoli_count, r.cnot_count, r.not_count, r.ancilla_count),
            (59, 28, 14, 12)
        );
    }
    let ones = gen_add_mersenne(3, false, ZeroRep::Ones).unwrap();
    let zeros = gen_add_mersenne(3, false, ZeroRep::Zeros).unwrap();
    assert_eq!(out(&ones, 5, 4, false).0, 2);
    assert_eq!(out(&zeros, 5, 4, false).0, 2);
    assert_eq!(out(&zeros, 3, 4, false).0, 0b000);
    assert_eq!(out(&ones, 3, 4, false).0, 0b111);
    assert_eq!(out(&ones, 0, 0, false).0, 0b000);
    assert_eq!(out(&ones, 7, 7, false).0, 0b111);
    assert!(matches!(
        gen_add_mersenne(1, false, ZeroRep::Ones),
        Err(AdderError::Width { .. })
    ));
}

#[test]
fn request_validation() {
    let bad = [
        AdderRequest::new(Function::AddMersenne, 4).carry_in(true),
        AdderRequest::new(Function::Subtract, 4).carry_in(true),
        AdderRequest::new(Function::Compare, 4).in_place(true),
        AdderRequest::new(Function::Add, 4).zero_rep(ZeroRep::Zeros),
        AdderRequest::new(Function::Compare, 1),
        AdderRequest::new(Function::AddMersenne, 1),
        AdderRequest::new(Function::Add, 0),
    ];
    for req in bad {
        assert!(generate(&req).is_err(), "{req}");
    }
    for f in Family::ALL
        .into_iter()
        .filter(|f| *f != Family::CarryNetwork)
    {
        let req = f.request(9).unwrap();
        let text = req.to_string();
        assert_eq!(text.parse::<AdderRequest>().unwrap(), req);
        assert_eq!(
            generate(&req).unwrap().variant.as_deref(),
            Some(text.as_str())
        );
    }
}

/// Every family against the integer model, all inputs, n up to 6. In-place
/// mersenne adders skip the `b` that encodes zero the other way.
#[test]
fn exhaustive_against_model() {
    for f in Family::ALL
        .into_iter()
        .filter(|f| *f != Family::CarryNetwork)
    {
        for n in 1..=6usize {
            let Some(req) = f.request(n) else { continue };
            if req.validate().is_err() {
                continue;
            }
            let c = generate(&req).unwrap();
            let m = (1u64 << n) - 1;
            let ys: &[bool] = if req.incoming_carry {
                &[false, true]
            } else {
                &[false]
            };
            for a in 0..=m {
                for b in 0..=m {
                    if !req.b_in_domain(b == 0, b == m) {
                        continue;
                    }
                    for &y in ys {
                        let got = out(&c, a, b, y);
                        assert_eq!(
                            got,
                            (expected(&req, a, b, y), true, true),
                            "{req} a={a} b={b} y={y}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn mersenne_congruence_on_every_input() {
    for n in 2..=6usize {
        let m = (1u64 << n) - 1;
        for in_place in [false, true] {
            for rep in [ZeroRep::Ones, ZeroRep::Zeros] {
                let c = gen_add_mersenne(n, in_place, rep).unwrap();
                let req = AdderRequest::new(Function::AddMersenne, n)
                    .in_place(in_place)
                    .zero_rep(rep);
                for a in 0..=m {
                    for b in 0..=m {
                        let (v, restored, clean) = out(&c, a, b, false);
                        assert!(v <= m);
                        assert_eq!(
                            v % m,
                            (a + b) % m,
                            "n={n} ip={in_place} {rep:?} a={a} b={b}"
                        );
                        assert!(restored);
                        assert_eq!(clean, req.b_in_domain(b == 0, b == m));
                    }
                }
            }
        }
    }
}

/// In-place mersenne adders on `b` equal to the other zero encoding. Both
/// encodings of `b` reach the same output for most `a`, so a reversible
/// circuit has to keep the difference somewhere: exactly one scratch bit is
/// left set. The output value itself is still the out-of-place result.
#[test]
fn mersenne_in_place_characterization() {
    for n in 2..=4usize {
        let m = (1u64 << n) - 1;
        for rep in [ZeroRep::Ones, ZeroRep::Zeros] {
            let c = gen_add_mersenne(n, true, rep).unwrap();
            let req = AdderRequest::new(Function::AddMersenne, n)
                .in_place(true)
                .zero_rep(rep);
            let other_zero = if rep == ZeroRep::Zeros { m } else { 0 };
            let scratch = c.layout.find("C").unwrap();
            for a in 0..=m {
                let r = run_operands(&c, &OperandAssignment::new(a, other_zero, false)).unwrap();
                assert!(r.restored);
                assert_eq!(
                    r.value.to_u64().unwrap(),
                    expected(&req, a, other_zero, false)
                );
                let dirty = r.state.register(&c.layout, scratch).count_ones();
                assert_eq!(dirty, 1, "n={n} {rep:?} a={a}");
                let other = out(&c, a, m - other_zero, false);
                assert!(other.2);
                if a != 0 && a != m {
                    assert_eq!(other.0, r.value.to_u64().unwrap());
                }
            }
        }
    }
}

/// Out of place the carry-in saves one Toffoli over the next wider adder; in
/// place the carry network runs twice, so it saves two.
#[test]
fn incoming_carry_saves_toffolis() {
    for n in 1..=64usize {
        for in_place in [false, true] {
            for f in [Function::Add, Function::AddMod2n] {
                let base = AdderRequest::new(f, n).in_place(in_place);
                let ic = report(&generate(&base.carry_in(true)).unwrap()).toffoli_count;
                let wider = report(&generate(&base.with_n(n + 1)).unwrap()).toffoli_count;
                let saved = if in_place { 2 } else { 1 };
                assert_eq!(ic + saved, wider, "{f} n={n} in_place={in_place}");
            }
        }
    }
}

#[test]
fn comparator_agrees_with_subtractor_sign() {
    for n in 2..=7usize {
        let cmp = gen_compare(n, false).unwrap();
        let sub = gen_sub(n, false).unwrap();
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                assert_eq!(
                    out(&cmp, a, b, false).0,
                    out(&sub, a, b, false).0 >> n,
                    "n={n} a={a} b={b}"
                );
            }
        }
    }
}

#[test]
fn toffoli_formulas_small_and_large() {
    for n in 2..=200usize {
        let lg = floor_log2(n as u64) as i64;
        let w = weight(n as u64) as i64;
        let n_i = n as i64;
        let r = report(&gen_add_oop(n, false).unwrap());
        assert_eq!(r.toffoli_count as i64, 5 * n_i - 3 * w - 3 * lg - 1);
        assert_eq!(r.cnot_count as i64, 3 * n_i - 1);
        assert_eq!(r.ancilla_count as i64, (n_i - w - lg).max(0));
    }
}

#[test]
fn randomized_wide_widths() {
    for f in Family::ALL
        .into_iter()
        .filter(|f| *f != Family::CarryNetwork)
    {
        for n in [16, 64] {
            let req = f.request(n).unwrap();
            let r = random_check(&req, 1000, 7).unwrap();
            assert!(r.passed(), "{}", r.summary());
            assert_eq!(r.inputs, 1000);
        }
    }
}
