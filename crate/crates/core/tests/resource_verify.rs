// SPDX-License-Identifier: Apache-2.0

use qcla_core::bits::{floor_log2, weight};
use qcla_core::verify::{
    default_grid, popcount_identity_check, table_consistency, verify_one, Relation, FORMULA_MIN_N,
};
use qcla_core::{formula_eval, verify_family, Family, VerifyError};

#[test]
fn popcount_identity() {
    // n - w(n) against the halving sum, computed here.
    for n in 1..=5000u64 {
        let mut sum = 0;
        let mut i = 1;
        while n >> i > 0 {
            sum += n >> i;
            i += 1;
        }
        assert_eq!(n - n.count_ones() as u64, sum);
    }
    assert_eq!(10 - 2, 5 + 2 + 1);
    assert_eq!(popcount_identity_check(1), Ok(()));
    assert_eq!(popcount_identity_check(1_000_000), Ok(()));
}

#[test]
fn formula_examples() {
    let add = formula_eval(Family::Add, 10).unwrap();
    assert_eq!((add.toffoli, add.ancillae), (34, 5));
    assert_eq!(add.cnot, Some(29));

    let ip_ic = formula_eval(Family::AddIpIc, 8).unwrap();
    // 4k + 4 at k = 3.
    assert_eq!((ip_ic.toffoli, ip_ic.toffoli_depth()), (54, 16));
    assert_eq!(ip_ic.table_consistent, Some(true));

    assert_eq!(formula_eval(Family::Compare, 16).unwrap().toffoli, 79);

    let cn = formula_eval(Family::CarryNetwork, 10).unwrap();
    assert_eq!((cn.toffoli, cn.toffoli_depth()), (24, 7));
}

#[test]
fn below_validity_is_an_error() {
    for f in Family::ALL {
        for n in 0..FORMULA_MIN_N {
            assert!(matches!(
                formula_eval(f, n),
                Err(VerifyError::BelowValidity { min: 7, .. })
            ));
        }
        assert!(formula_eval(f, FORMULA_MIN_N).is_ok());
    }
}

/// Power-of-two rows against the general rows, recomputed here from the
/// general formulas for the families whose rows are easy to state.
#[test]
fn table_consistency_for_powers_of_two() {
    for k in 3..=10u32 {
        for f in Family::ALL {
            if let Some(ok) = table_consistency(f, k) {
                assert!(ok, "{} k={k}", f.id());
            }
        }
        let n = 1i64 << k;
        let k = k as i64;
        let add = formula_eval(Family::Add, n as usize).unwrap();
        assert_eq!(add.toffoli, 5 * n - 3 * k - 4);
        assert_eq!(add.toffoli_depth(), 2 * k + 2);
        let ip = formula_eval(Family::AddIp, n as usize).unwrap();
        assert_eq!(ip.toffoli, 10 * n - 9 * k - 7);
        assert_eq!(ip.toffoli_depth(), 4 * k + 3);
        let cmp = formula_eval(Family::Compare, n as usize).unwrap();
        assert_eq!(cmp.toffoli, 6 * n - 3 * k - 5);
    }
}

#[test]
fn general_formulas_against_direct_evaluation() {
    let l = |x: usize| floor_log2(x as u64) as i64;
    let w = |x: usize| weight(x as u64) as i64;
    for n in 7..=300usize {
        let ni = n as i64;
        let e = formula_eval(Family::Add, n).unwrap();
        assert_eq!(e.toffoli, 5 * ni - 3 * w(n) - 3 * l(n) - 1);
        assert_eq!(e.ancillae, ni - w(n) - l(n));
        let e = formula_eval(Family::AddIp, n).unwrap();
        assert_eq!(
            e.toffoli,
            10 * ni - 3 * w(n) - 3 * w(n - 1) - 3 * l(n) - 3 * l(n - 1) - 7
        );
        assert_eq!((e.cnot, e.not), (Some(4 * ni - 5), Some(2 * ni - 2)));
        assert_eq!(e.ancillae, 2 * ni - w(n) - l(n) - 1);
        let e = formula_eval(Family::Mod2n, n).unwrap();
        assert_eq!(e.toffoli, 5 * ni - 3 * w(n - 1) - 3 * l(n - 1) - 6);
        assert_eq!(e.cnot, Some(3 * ni - 2));
        let e = formula_eval(Family::Compare, n).unwrap();
        assert_eq!(e.toffoli, 6 * ni - w(n - 1) - 2 * l(n - 1) - 7);
        assert_eq!((e.cnot, e.not), (Some(2 * ni - 2), Some(2 * ni + 1)));
        assert_eq!(e.ancillae, 2 * ni - l(n - 1) - 3);
        let e = formula_eval(Family::MersenneOnes, n).unwrap();
        assert_eq!(
            (e.toffoli, e.cnot, e.ancillae),
            (5 * ni - 6, Some(3 * ni), ni - 2)
        );
        let e = formula_eval(Family::MersenneIpZeros, n).unwrap();
        assert_eq!(
            (e.toffoli, e.cnot, e.not, e.ancillae),
            (10 * ni - 11, Some(4 * ni), Some(2 * ni), 2 * ni - 2)
        );
    }
}

#[test]
fn verify_family_examples() {
    let ns: Vec<usize> = (7..=64).collect();
    let add = verify_family(Family::Add, &ns).unwrap();
    assert!(add.passed(), "{}", add.to_table());
    assert_eq!(add.records.len(), ns.len());
    assert_eq!(add.records.iter().map(|r| r.n).collect::<Vec<_>>(), ns);
    for r in &add.records {
        for c in &r.checks {
            if c.relation == Relation::Exact {
                assert_eq!(c.measured, c.expected);
            }
        }
    }

    let cn = verify_family(Family::CarryNetwork, &[10]).unwrap();
    assert!(cn.passed());
    let table = cn.to_table();
    assert!(table.contains("24 toffoli (expected 24)"), "{table}");
    assert!(
        table.contains("7 toffoli-depth (network) (expected 7) ="),
        "{table}"
    );

    let cmp = verify_family(Family::Compare, &[8]).unwrap();
    assert!(cmp.passed());
    let r = &cmp.records[0];
    assert_eq!(r.expected.depth.len(), 2);
    assert_eq!(r.notes.len(), 1);
    assert!(
        r.notes[0].starts_with("depth bounds disagree"),
        "{:?}",
        r.notes
    );
    assert!(cmp.to_table().contains("note: depth bounds disagree"));

    let bad = verify_family(Family::Compare, &[5]);
    assert!(matches!(bad, Err(VerifyError::BelowValidity { n: 5, .. })));
}

#[test]
fn every_family_on_the_grid() {
    let grid = default_grid();
    assert_eq!(grid.first(), Some(&7));
    assert_eq!(grid.last(), Some(&1024));
    for f in Family::ALL {
        let rep = verify_family(f, &grid).unwrap();
        let failures: Vec<String> = rep
            .failures()
            .map(|(r, c)| format!("n={} {} {} vs {}", r.n, c.quantity, c.measured, c.expected))
            .collect();
        assert!(failures.is_empty(), "{}: {failures:?}", f.id());
    }
}

#[test]
fn jsonl_records() {
    let rep = verify_family(Family::AddIp, &[8, 9]).unwrap();
    let text = rep.to_jsonl();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(v["family"], "add-ip");
    assert_eq!(v["n"], 8);
    assert_eq!(v["measured"]["toffoli_count"], 46);
    assert_eq!(v["expected"]["toffoli"], 46);
    assert_eq!(v["measured"]["toffoli_slices"], 15);
    let one = verify_one(Family::AddIp, 8).unwrap();
    assert_eq!(serde_json::to_string(&one).unwrap(), lines[0]);
}

#[test]
fn family_ids_round_trip() {
    for f in Family::ALL {
        assert_eq!(f.id().parse::<Family>().unwrap(), f);
        assert_eq!(f.to_string(), f.id());
    }
    assert!("adder".parse::<Family>().is_err());
}
