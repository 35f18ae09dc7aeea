// SPDX-License-Identifier: Apache-2.0

//! Closed-form resource formulas and the harness that compares them with
//! measured circuits.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::adder::{generate, AdderError, AdderRequest, Function, ZeroRep};
use crate::bits::{floor_log2, floor_log2_ratio, halving_sum, is_power_of_two, weight};
use crate::carry_network::{build_carry_network, CarryNetworkSpec, Direction, NetworkError};
use crate::circuit::{Circuit, CircuitError};
use crate::resources::{resource_report, ResourceReport};

/// Smallest `n` for which the formulas are claimed exact.
pub const FORMULA_MIN_N: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("formula not guaranteed for {family} at n={n} (needs n >= {min})")]
    BelowValidity {
        family: Family,
        n: usize,
        min: usize,
    },
    #[error(transparent)]
    Adder(#[from] AdderError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A circuit family with its own row of formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    CarryNetwork,
    Add,
    AddIc,
    AddIp,
    AddIpIc,
    Mod2n,
    Mod2nIc,
    Mod2nIp,
    Mod2nIpIc,
    Subtract,
    SubtractIp,
    Compare,
    CompareIc,
    MersenneOnes,
    MersenneZeros,
    MersenneIpOnes,
    MersenneIpZeros,
}

impl Family {
    pub const ALL: [Family; 17] = [
        Family::CarryNetwork,
        Family::Add,
        Family::AddIc,
        Family::AddIp,
        Family::AddIpIc,
        Family::Mod2n,
        Family::Mod2nIc,
        Family::Mod2nIp,
        Family::Mod2nIpIc,
        Family::Subtract,
        Family::SubtractIp,
        Family::Compare,
        Family::CompareIc,
        Family::MersenneOnes,
        Family::MersenneZeros,
        Family::MersenneIpOnes,
        Family::MersenneIpZeros,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::CarryNetwork => "carry-network",
            Family::Add => "add",
            Family::AddIc => "add-ic",
            Family::AddIp => "add-ip",
            Family::AddIpIc => "add-ip-ic",
            Family::Mod2n => "add-mod2n",
            Family::Mod2nIc => "add-mod2n-ic",
            Family::Mod2nIp => "add-mod2n-ip",
            Family::Mod2nIpIc => "add-mod2n-ip-ic",
            Family::Subtract => "subtract",
            Family::SubtractIp => "subtract-ip",
            Family::Compare => "compare",
            Family::CompareIc => "compare-ic",
            Family::MersenneOnes => "mersenne-ones",
            Family::MersenneZeros => "mersenne-zeros",
            Family::MersenneIpOnes => "mersenne-ip-ones",
            Family::MersenneIpZeros => "mersenne-ip-zeros",
        }
    }

    /// The generator request, or `None` for the bare carry network.
    pub fn request(self, n: usize) -> Option<AdderRequest> {
        use Function::*;
        let r = |f| AdderRequest::new(f, n);
        Some(match self {
            Family::CarryNetwork => return None,
            Family::Add => r(Add),
            Family::AddIc => r(Add).carry_in(true),
            Family::AddIp => r(Add).in_place(true),
            Family::AddIpIc => r(Add).in_place(true).carry_in(true),
            Family::Mod2n => r(AddMod2n),
            Family::Mod2nIc => r(AddMod2n).carry_in(true),
            Family::Mod2nIp => r(AddMod2n).in_place(true),
            Family::Mod2nIpIc => r(AddMod2n).in_place(true).carry_in(true),
            Family::Subtract => r(Subtract),
            Family::SubtractIp => r(Subtract).in_place(true),
            Family::Compare => r(Compare),
            Family::CompareIc => r(Compare).carry_in(true),
            Family::MersenneOnes => r(AddMersenne).zero_rep(ZeroRep::Ones),
            Family::MersenneZeros => r(AddMersenne).zero_rep(ZeroRep::Zeros),
            Family::MersenneIpOnes => r(AddMersenne).in_place(true).zero_rep(ZeroRep::Ones),
            Family::MersenneIpZeros => r(AddMersenne).in_place(true).zero_rep(ZeroRep::Zeros),
        })
    }

    pub fn build(self, n: usize) -> Result<Circuit, VerifyError> {
        match self.request(n) {
            Some(req) => Ok(generate(&req)?),
            None => Ok(build_carry_network(CarryNetworkSpec {
                n,
                direction: Direction::Forward,
            })?),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A depth bound with the name of its source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthBound {
    pub source: &'static str,
    pub slices: i64,
}

/// Expected resources of one family at one width.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaEntry {
    pub family: String,
    pub n: usize,
    pub validity: usize,
    pub toffoli: i64,
    pub cnot: Option<i64>,
    pub not: Option<i64>,
    pub ancillae: i64,
    /// Toffoli depth; the first bound is the one checked.
    pub depth: Vec<DepthBound>,
    /// For `n = 2^k`, whether the power-of-two row agrees with the general one.
    pub table_consistent: Option<bool>,
}

impl FormulaEntry {
    pub fn toffoli_depth(&self) -> i64 {
        self.depth[0].slices
    }
}

fn l(x: usize) -> i64 {
    floor_log2(x as u64) as i64
}

fn l3(x: usize) -> i64 {
    floor_log2_ratio(x as u64, 3)
}

fn w(x: usize) -> i64 {
    weight(x as u64) as i64
}

/// `(toffoli, ancillae, depth)` of the power-of-two rows, `n = 2^k`.
fn power_of_two_row(family: Family, k: i64) -> Option<(i64, i64, i64)> {
    let n = 1i64 << k;
    Some(match family {
        Family::Add => (5 * n - 3 * k - 4, n - k - 1, 2 * k + 2),
        Family::AddIc => (5 * n - 3 * k - 3, n - k - 1, 2 * k + 2),
        Family::AddIp => (10 * n - 9 * k - 7, 2 * n - k - 2, 4 * k + 3),
        Family::AddIpIc => (10 * n - 6 * k - 8, 2 * n - k - 2, 4 * k + 4),
        Family::Mod2n => (5 * n - 6 * k - 3, n - 2 * k, 2 * k + 1),
        Family::Mod2nIc => (5 * n - 3 * k - 5, n - k - 1, 2 * k + 2),
        Family::Mod2nIp => (10 * n - 12 * k - 6, 2 * n - 2 * k - 1, 4 * k + 2),
        Family::Mod2nIpIc => (10 * n - 6 * k - 10, 2 * n - k - 2, 4 * k + 4),
        Family::MersenneOnes => (5 * n - 6, n - 2, 2 * k + 3),
        Family::MersenneIpOnes | Family::MersenneIpZeros => (10 * n - 11, 2 * n - 2, 4 * k + 7),
        Family::Compare => (6 * n - 3 * k - 5, 2 * n - k - 2, 2 * k + 5),
        Family::CompareIc => (6 * n - 2 * k - 4, 2 * n - k - 2, 2 * k + 5),
        Family::CarryNetwork | Family::Subtract | Family::SubtractIp | Family::MersenneZeros => {
            return None
        }
    })
}

/// Formulas valid for any `n` (no validity check).
fn general(family: Family, n: usize) -> FormulaEntry {
    let ni = n as i64;
    let bound = |source, slices| DepthBound { source, slices };
    let (toffoli, cnot, not, ancillae, depth) = match family {
        Family::CarryNetwork => (
            4 * ni - 3 * w(n) - 3 * l(n) - 1,
            Some(0),
            Some(0),
            ni - w(n) - l(n),
            vec![bound("network", l(n) + l3(n) + 3)],
        ),
        Family::Add | Family::Subtract => (
            5 * ni - 3 * w(n) - 3 * l(n) - 1,
            Some(3 * ni - 1),
            Some(if family == Family::Add { 0 } else { 3 * ni + 1 }),
            ni - w(n) - l(n),
            vec![bound("summary", l(n) + l3(n) + 4)],
        ),
        Family::AddIc => (
            5 * ni - 3 * w(n + 1) - 3 * l(n + 1) + 3,
            // one more than a plain (n+1)-bit adder saves, since y is kept
            Some(3 * ni + 1),
            Some(0),
            ni - w(n + 1) - l(n + 1) + 1,
            vec![bound("summary", l(n + 1) + l3(n + 1) + 4)],
        ),
        Family::AddIp | Family::SubtractIp => (
            10 * ni - 3 * w(n) - 3 * w(n - 1) - 3 * l(n) - 3 * l(n - 1) - 7,
            Some(4 * ni - 5),
            Some(if family == Family::AddIp {
                2 * ni - 2
            } else {
                5 * ni - 1
            }),
            2 * ni - w(n) - l(n) - 1,
            vec![bound("summary", l(n) + l(n - 1) + l3(n) + l3(n - 1) + 8)],
        ),
        Family::AddIpIc => (
            10 * ni - 3 * w(n) - 3 * w(n + 1) - 3 * l(n) - 3 * l(n + 1) + 1,
            Some(4 * ni - 2),
            Some(2 * ni - 2),
            2 * ni - w(n + 1) - l(n + 1),
            vec![bound("summary", l(n) + l(n + 1) + l3(n) + l3(n + 1) + 8)],
        ),
        Family::Mod2n => (
            5 * ni - 3 * w(n - 1) - 3 * l(n - 1) - 6,
            Some(3 * ni - 2),
            Some(0),
            ni - w(n - 1) - l(n - 1) - 1,
            vec![bound("summary", l(n - 1) + l3(n - 1) + 4)],
        ),
        Family::Mod2nIc => (
            5 * ni - 3 * w(n) - 3 * l(n) - 2,
            Some(3 * ni),
            Some(0),
            ni - w(n) - l(n),
            vec![bound("summary", l(n) + l3(n) + 4)],
        ),
        Family::Mod2nIp => (
            10 * ni - 6 * w(n - 1) - 6 * l(n - 1) - 12,
            Some(4 * ni - 5),
            Some(2 * ni - 2),
            2 * ni - w(n - 1) - l(n - 1) - 2,
            vec![bound("summary", 2 * l(n - 1) + 2 * l3(n - 1) + 8)],
        ),
        Family::Mod2nIpIc => (
            10 * ni - 6 * w(n) - 6 * l(n) - 4,
            Some(4 * ni - 2),
            Some(2 * ni - 2),
            2 * ni - w(n) - l(n) - 1,
            vec![bound("summary", 2 * l(n) + 2 * l3(n) + 8)],
        ),
        Family::MersenneOnes => (
            5 * ni - 6,
            Some(3 * ni),
            Some(0),
            ni - 2,
            vec![bound("summary", 2 * l(n - 1) + 5)],
        ),
        Family::MersenneZeros => (
            5 * ni - 5,
            Some(3 * ni),
            Some(0),
            ni - 2,
            vec![bound("construction", l(n - 1) + l3(n - 1) + 7)],
        ),
        Family::MersenneIpOnes | Family::MersenneIpZeros => (
            10 * ni - 11,
            Some(4 * ni),
            Some(2 * ni),
            2 * ni - 2,
            vec![bound("summary", 3 * l(n - 1) + l3(n - 1) + 12)],
        ),
        Family::Compare => (
            6 * ni - w(n - 1) - 2 * l(n - 1) - 7,
            Some(2 * ni - 2),
            Some(2 * ni + 1),
            2 * ni - l(n - 1) - 3,
            vec![
                bound("summary", 2 * l(n) + 5),
                bound("construction", 2 * l(n - 1) + 5),
            ],
        ),
        Family::CompareIc => (
            6 * ni - w(n) - 2 * l(n) - 3,
            Some(2 * ni),
            Some(2 * ni + 1),
            2 * ni - l(n) - 2,
            vec![bound("summary", 2 * l(n + 1) + 5)],
        ),
    };
    FormulaEntry {
        family: family.id().to_string(),
        n,
        validity: FORMULA_MIN_N,
        toffoli,
        cnot,
        not,
        ancillae,
        depth,
        table_consistent: None,
    }
}

/// Whether the power-of-two row for `n = 2^k` equals the general formula.
/// `None` if the family has no power-of-two row.
pub fn table_consistency(family: Family, k: u32) -> Option<bool> {
    let (size, anc, depth) = power_of_two_row(family, k as i64)?;
    let g = general(family, 1 << k);
    Some(g.toffoli == size && g.ancillae == anc && g.toffoli_depth() == depth)
}

/// Expected resources; an error below the validity bound.
pub fn formula_eval(family: Family, n: usize) -> Result<FormulaEntry, VerifyError> {
    if n < FORMULA_MIN_N {
        return Err(VerifyError::BelowValidity {
            family,
            n,
            min: FORMULA_MIN_N,
        });
    }
    let mut entry = general(family, n);
    if is_power_of_two(n as u64) {
        entry.table_consistent = table_consistency(family, floor_log2(n as u64));
    }
    Ok(entry)
}

/// `n - w(n) = sum_{i >= 1} floor(n / 2^i)` for `1 <= n <= limit`; returns
/// the first `n` where it fails.
pub fn popcount_identity_check(limit: u64) -> Result<(), u64> {
    for n in 1..=limit {
        if n - weight(n) as u64 != halving_sum(n) {
            return Err(n);
        }
    }
    Ok(())
}

/// `7..=64` plus the powers of two up to 1024.
pub fn default_grid() -> Vec<usize> {
    (FORMULA_MIN_N..=64).chain([128, 256, 512, 1024]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Measured must equal expected.
    Exact,
    /// Measured must not exceed expected.
    AtMost,
    /// Recorded only.
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub expected: i64,
    pub measured: i64,
    pub relation: Relation,
    pub ok: bool,
}

impl Check {
    fn new(quantity: impl Into<String>, expected: i64, measured: i64, relation: Relation) -> Self {
        let ok = match relation {
            Relation::Exact => measured == expected,
            Relation::AtMost => measured <= expected,
            Relation::Reference => true,
        };
        Check {
            quantity: quantity.into(),
            expected,
            measured,
            relation,
            ok,
        }
    }
}

/// Expected versus measured for one `(family, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub family: String,
    pub n: usize,
    pub expected: FormulaEntry,
    pub measured: ResourceReport,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Measures one circuit of the family against its formulas.
pub fn verify_one(family: Family, n: usize) -> Result<Record, VerifyError> {
    let expected = formula_eval(family, n)?;
    let circuit = family.build(n)?;
    let measured = resource_report(&circuit)?;
    let mut checks = vec![
        Check::new(
            "toffoli",
            expected.toffoli,
            measured.toffoli_count as i64,
            Relation::Exact,
        ),
        Check::new(
            "ancillae",
            expected.ancillae,
            measured.ancilla_count as i64,
            Relation::Exact,
        ),
    ];
    if let Some(cnot) = expected.cnot {
        checks.push(Check::new(
            "cnot",
            cnot,
            measured.cnot_count as i64,
            Relation::Exact,
        ));
    }
    if let Some(not) = expected.not {
        checks.push(Check::new(
            "not",
            not,
            measured.not_count as i64,
            Relation::Exact,
        ));
    }
    let slices = measured.toffoli_slices as i64;
    let mut notes = Vec::new();
    for (i, bound) in expected.depth.iter().enumerate() {
        let relation = if i == 0 {
            Relation::AtMost
        } else {
            Relation::Reference
        };
        checks.push(Check::new(
            format!("toffoli-depth ({})", bound.source),
            bound.slices,
            slices,
            relation,
        ));
    }
    if let [first, second, ..] = expected.depth.as_slice() {
        let (lo, hi) = if first.slices <= second.slices {
            (first, second)
        } else {
            (second, first)
        };
        if lo.slices < hi.slices {
            let verdict = if slices <= lo.slices {
                "meets both".to_string()
            } else if slices <= hi.slices {
                format!("meets only the {} bound", hi.source)
            } else {
                "exceeds both".to_string()
            };
            notes.push(format!(
                "depth bounds disagree: {} {} vs {} {}; measured {slices} {verdict}",
                hi.source, hi.slices, lo.source, lo.slices
            ));
        }
    }
    if expected.table_consistent == Some(false) {
        checks.push(Check::new("table-consistency", 1, 0, Relation::Exact));
    }
    Ok(Record {
        family: family.id().to_string(),
        n,
        expected,
        measured,
        checks,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub records: Vec<Record>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(Record::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&Record, &Check)> {
        self.records
            .iter()
            .flat_map(|r| r.checks.iter().filter(|c| !c.ok).map(move |c| (r, c)))
    }

    /// Human-readable table, one line per width.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let cells: Vec<String> = r
                .checks
                .iter()
                .map(|c| {
                    let mark = match (c.ok, c.relation) {
                        (false, _) => " MISMATCH",
                        (true, Relation::AtMost) if c.measured == c.expected => " =",
                        (true, Relation::AtMost) => " <",
                        _ => "",
                    };
                    format!(
                        "{} {} (expected {}){}",
                        c.measured, c.quantity, c.expected, mark
                    )
                })
                .collect();
            out.push_str(&format!("{} n={}: {}\n", r.family, r.n, cells.join(", ")));
            for note in &r.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        out
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

/// [`verify_one`] over several widths, in the order given. Widths are
/// measured on separate threads.
pub fn verify_family(family: Family, ns: &[usize]) -> Result<FamilyReport, VerifyError> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |p| p.get())
        .min(ns.len().max(1));
    let chunk = ns.len().div_ceil(workers).max(1);
    let results: Vec<Result<Record, VerifyError>> = std::thread::scope(|s| {
        let handles: Vec<_> = ns
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&n| verify_one(family, n))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    Ok(FamilyReport {
        family: family.id().to_string(),
        records: results.into_iter().collect::<Result<_, _>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.id().parse::<Family>().unwrap(), f);
        }
        assert!("adder".parse::<Family>().is_err());
    }

    #[test]
    fn below_validity_is_explicit() {
        assert!(matches!(
            formula_eval(Family::Add, 6),
            Err(VerifyError::BelowValidity { min: 7, .. })
        ));
    }

    #[test]
    fn power_of_two_rows_agree() {
        for f in Family::ALL {
            for k in 3..=10 {
                assert_ne!(table_consistency(f, k), Some(false), "{f} k={k}");
            }
        }
    }

    #[test]
    fn popcount_identity_small() {
        assert_eq!(popcount_identity_check(5000), Ok(()));
    }
}
