// SPDX-License-Identifier: Apache-2.0

//! `qcla`: generate, simulate, measure and verify carry-lookahead adder
//! circuits.
//!
//! Exit status: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or
//! parse error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use qcla_core::sim::{
    carry_network_check, circuit_request, exhaustive_check_circuit, EXHAUSTIVE_MAX_N,
};
use qcla_core::verify::{default_grid, FORMULA_MIN_N};
use qcla_core::{
    build_carry_network, exhaustive_check, generate, invert, oracle_eval, parse_native,
    resource_report, run_operands, to_native, to_qasm, AdderRequest, CarryNetworkSpec, Circuit,
    Direction, Domain, Family, Function, OperandAssignment, ZeroRep,
};

#[derive(Parser)]
#[command(
    name = "qcla",
    version,
    about = "Reversible carry-lookahead adder circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a circuit in the native format or as OpenQASM 2.0.
    Gen(GenArgs),
    /// Run a circuit file on operands, or on every operand assignment.
    Sim(SimArgs),
    /// Print gate counts, depths and ancillae of a circuit file.
    Stats(StatsArgs),
    /// Compare measured resources with the closed-form formulas.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CircuitKind {
    Add,
    AddMod2n,
    AddMersenne,
    Subtract,
    Compare,
    CarryNetwork,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Native,
    Qasm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rep {
    Ones,
    Zeros,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    circuit: CircuitKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    in_place: bool,
    #[arg(long)]
    carry_in: bool,
    /// Zero representation of the mod 2^n - 1 adder.
    #[arg(long, value_enum)]
    zero_rep: Option<Rep>,
    /// Emit the inverse circuit.
    #[arg(long)]
    inverse: bool,
    #[arg(long, value_enum, default_value = "native")]
    format: Format,
    /// Output path; standard output when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    /// Circuit file in the native format.
    file: PathBuf,
    /// First operand, decimal or 0x-prefixed hex.
    #[arg(long, required_unless_present = "exhaustive")]
    a: Option<String>,
    /// Second operand, decimal or 0x-prefixed hex.
    #[arg(long, required_unless_present = "exhaustive")]
    b: Option<String>,
    /// Incoming carry.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    y: u8,
    /// Print outputs as bit strings, most significant bit first.
    #[arg(long)]
    bits: bool,
    /// Check every operand assignment against the oracle.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    exhaustive: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    family: Family,
    /// Inclusive width range `a..b`, or a single width. Defaults to 7..64
    /// plus the powers of two up to 1024.
    #[arg(long)]
    range: Option<String>,
    /// One JSON record per line instead of the table.
    #[arg(long)]
    json: bool,
}

/// How a command failed, mapped onto the exit-code contract.
enum Failure {
    Mismatch,
    Usage(anyhow::Error),
    Io(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn io(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Io(e.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Sim(a) => cmd_sim(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn request(args: &GenArgs) -> Result<AdderRequest, Failure> {
    let function = match args.circuit {
        CircuitKind::Add => Function::Add,
        CircuitKind::AddMod2n => Function::AddMod2n,
        CircuitKind::AddMersenne => Function::AddMersenne,
        CircuitKind::Subtract => Function::Subtract,
        CircuitKind::Compare => Function::Compare,
        CircuitKind::CarryNetwork => unreachable!("handled by the caller"),
    };
    let mut req = AdderRequest::new(function, args.n)
        .in_place(args.in_place)
        .carry_in(args.carry_in);
    if let Some(rep) = args.zero_rep {
        req = req.zero_rep(match rep {
            Rep::Ones => ZeroRep::Ones,
            Rep::Zeros => ZeroRep::Zeros,
        });
    }
    req.validate().map_err(usage)?;
    Ok(req)
}

fn build(args: &GenArgs) -> Result<Circuit, Failure> {
    if args.circuit == CircuitKind::CarryNetwork {
        if args.in_place || args.carry_in || args.zero_rep.is_some() {
            return Err(usage(anyhow!(
                "carry-network takes no --in-place, --carry-in or --zero-rep"
            )));
        }
        let direction = if args.inverse {
            Direction::Inverse
        } else {
            Direction::Forward
        };
        return build_carry_network(CarryNetworkSpec {
            n: args.n,
            direction,
        })
        .map_err(usage);
    }
    let circuit = generate(&request(args)?).map_err(usage)?;
    if args.inverse {
        // The inverse does not compute the variant's function, so it carries
        // no variant line.
        let mut inv = invert(&circuit);
        inv.variant = None;
        return Ok(inv);
    }
    Ok(circuit)
}

fn cmd_gen(args: GenArgs) -> Outcome {
    let circuit = build(&args)?;
    let text = match args.format {
        Format::Native => to_native(&circuit),
        Format::Qasm => to_qasm(&circuit),
    };
    match &args.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(io),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to standard output")
            .map_err(io),
    }
}

fn load(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(io)?;
    parse_native(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(io)
}

fn parse_operand(name: &str, text: &str) -> Result<BigUint, Failure> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => BigUint::parse_bytes(hex.as_bytes(), 16),
        None => BigUint::parse_bytes(t.as_bytes(), 10),
    };
    parsed.ok_or_else(|| {
        usage(anyhow!(
            "--{name}: `{text}` is not a decimal or 0x-hex integer"
        ))
    })
}

/// `value` as `width` bits, most significant first.
fn bit_string(value: &BigUint, width: u32) -> String {
    (0..width as u64)
        .rev()
        .map(|i| if value.bit(i) { '1' } else { '0' })
        .collect()
}

fn cmd_sim(args: SimArgs) -> Outcome {
    let circuit = load(&args.file)?;
    if args.exhaustive {
        return sim_exhaustive(&circuit, args.json);
    }
    let a = parse_operand("a", args.a.as_deref().unwrap_or_default())?;
    let b = parse_operand("b", args.b.as_deref().unwrap_or_default())?;
    let ops = OperandAssignment::new(a, b, args.y == 1);
    let outcome = run_operands(&circuit, &ops).map_err(usage)?;
    // The oracle applies only when the file names a variant.
    let expected = match circuit_request(&circuit) {
        Ok(req) => Some(oracle_eval(&req, &ops).map_err(usage)?),
        Err(_) => None,
    };
    let ok =
        outcome.restored && outcome.clean && expected.as_ref().is_none_or(|e| *e == outcome.value);

    let shown: Vec<(String, String)> = outcome
        .outputs
        .iter()
        .map(|(name, v)| {
            let text = if args.bits {
                let reg = circuit.layout.find(name).expect("output register exists");
                bit_string(v, circuit.layout.register(reg).size)
            } else {
                v.to_string()
            };
            (name.clone(), text)
        })
        .collect();
    if args.json {
        let outputs: serde_json::Map<String, serde_json::Value> =
            shown.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let doc = json!({
            "outputs": outputs,
            "value": outcome.value.to_string(),
            "expected": expected.as_ref().map(|e| e.to_string()),
            "restored": outcome.restored,
            "clean": outcome.clean,
        });
        println!("{doc}");
    } else {
        let mut parts: Vec<String> = shown.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.push(format!("restored={}", outcome.restored));
        parts.push(format!("clean={}", outcome.clean));
        println!("{}", parts.join(" "));
        if let Some(e) = expected.as_ref().filter(|e| **e != outcome.value) {
            println!("mismatch: expected {e}, got {}", outcome.value);
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn sim_exhaustive(circuit: &Circuit, json_out: bool) -> Outcome {
    let req = circuit_request(circuit)
        .map_err(|e| usage(anyhow!("--exhaustive needs an adder variant line: {e}")))?;
    if req.n > EXHAUSTIVE_MAX_N {
        return Err(usage(anyhow!(
            "--exhaustive supports n <= {EXHAUSTIVE_MAX_N}, circuit has n = {}",
            req.n
        )));
    }
    let report = exhaustive_check_circuit(circuit, &req, Domain::Operands).map_err(usage)?;
    if json_out {
        println!(
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        );
    } else {
        println!("{}", report.summary());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn cmd_stats(args: StatsArgs) -> Outcome {
    let circuit = load(&args.file)?;
    let r = resource_report(&circuit).map_err(io)?;
    if args.json {
        println!("{}", serde_json::to_string(&r).expect("report serializes"));
    } else {
        println!("toffoli        {}", r.toffoli_count);
        println!("cnot           {}", r.cnot_count);
        println!("not            {}", r.not_count);
        println!("total_slices   {}", r.total_slices);
        println!("toffoli_slices {}", r.toffoli_slices);
        println!("ancillae       {}", r.ancilla_count);
    }
    Ok(())
}

fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    let parse = |s: &str| -> anyhow::Result<usize> {
        s.trim().parse().with_context(|| format!("bad width `{s}`"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if lo > hi {
        bail!("empty range `{text}`");
    }
    Ok((lo..=hi).collect())
}

fn cmd_verify(args: VerifyArgs) -> Outcome {
    let widths = match &args.range {
        Some(r) => parse_range(r).map_err(usage)?,
        None => default_grid(),
    };
    let family = args.family;
    let formula_ns: Vec<usize> = widths
        .iter()
        .copied()
        .filter(|&n| n >= FORMULA_MIN_N)
        .collect();
    let exhaustive_ns: Vec<usize> = widths.iter().copied().filter(|&n| n <= 8).collect();
    let min_width = family.request(8).map_or(1, |r| r.function.min_width());
    if formula_ns.is_empty() && exhaustive_ns.iter().all(|&n| n < min_width) {
        return Err(usage(anyhow!(
            "range has no width >= {min_width} for {family}"
        )));
    }

    let mut ok = true;
    if !formula_ns.is_empty() {
        let report = qcla_core::verify_family(family, &formula_ns).map_err(usage)?;
        ok &= report.passed();
        if args.json {
            print!("{}", report.to_jsonl());
        } else {
            print!("{}", report.to_table());
            for (r, c) in report.failures() {
                println!(
                    "MISMATCH {} n={}: {} measured {} expected {}",
                    r.family, r.n, c.quantity, c.measured, c.expected
                );
            }
        }
    }
    for n in exhaustive_ns {
        let (passed, line, doc) = match family.request(n) {
            None => {
                let check = carry_network_check(n).map_err(usage)?;
                let line = format!(
                    "{} pairs, {} carry, {} restore, {} boundary failures",
                    check.pairs,
                    check.carry_failures,
                    check.restore_failures,
                    check.boundary_failures
                );
                (
                    check.passed(),
                    line,
                    json!({ "pairs": check.pairs, "passed": check.passed() }),
                )
            }
            Some(req) if req.validate().is_err() => continue,
            Some(req) => {
                let report = exhaustive_check(&req, Domain::Operands).map_err(usage)?;
                let doc = serde_json::to_value(&report).expect("report serializes");
                (report.passed(), report.summary(), doc)
            }
        };
        ok &= passed;
        if args.json {
            let rec = json!({ "family": family.id(), "n": n, "exhaustive": doc });
            println!("{rec}");
        } else {
            println!("{family} n={n} exhaustive: {line}");
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}
