//! Command-line front end: generate, solve, verify, convert, scan, bench.
//!
//! Exit codes: 0 solution found / verified; 1 no solution; 2 usage error;
//! 3 budget refusal; 4 internal error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use serde_json::json;

use gsskit::coeffs::{CoefficientSet, Profile, SolverConfig};
use gsskit::experiments::{
    phase_csv, phase_scan, work_scaling, PhaseSpec, ScalingAlgo, ScalingSpec,
};
use gsskit::instance::{self, GssInstance, InstanceError, Solution};
use gsskit::mitm::{self, MitmError};
use gsskit::oracle;
use gsskit::repsolver::{self, AutoOutcome, RepError};
use gsskit::work::WorkStats;

const EXIT_NOT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "gsskit", version, about = "Average-case generalized subset sum toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance
    Gen(GenArgs),
    /// Solve an instance file
    Solve(SolveArgs),
    /// Check a solution file against an instance
    Verify(VerifyArgs),
    /// Convert a Subset Sum or Number Balancing input to a GSS instance
    Convert(ConvertArgs),
    /// Solvability probability across a grid of M = |C|^{alpha*n}
    ScanPhase(ScanArgs),
    /// Work-scaling benchmark of mitm and rep solvers
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Bound M (decimal; x is uniform on [0, M-1])
    #[arg(long, short = 'M', visible_alias = "m")]
    big_m: String,
    #[arg(long, default_value = "0")]
    tau: String,
    /// Coefficient set: "d" for C(d) or "d,zero" for C0(d)
    #[arg(long)]
    coeffs: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = ["brute", "mitm", "rep"])]
    algo: String,
    #[arg(long = "in")]
    input: PathBuf,
    /// "auto" (iterate all profiles) or a JSON file {"counts": {"-1": 3, ...}}
    #[arg(long, default_value = "auto")]
    profile: String,
    /// Repeat budget of the rep solver (default 4n^2)
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the solution JSON here on success
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(subcommand)]
    kind: ConvertKind,
}

#[derive(Subcommand)]
enum ConvertKind {
    /// Subset Sum (x, tau) over C(1): subsets <-> sign vectors
    SubsetSum {
        /// Comma-separated nonnegative integers
        #[arg(long)]
        x: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Number Balancing: reals y in [0,1] truncated at precision delta
    Balance {
        /// Comma-separated reals in [0,1]
        #[arg(long)]
        y: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    coeffs: String,
    #[arg(long)]
    n: usize,
    /// Comma-separated M exponents alpha
    #[arg(long)]
    alphas: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value = "0")]
    tau: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    coeffs: String,
    /// Comma-separated values of n
    #[arg(long = "n-grid")]
    n_grid: String,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// M exponent per n: M = round(|C|^{alpha*n})
    #[arg(long, default_value_t = 0.95)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

struct Failure {
    code: u8,
    reason: String,
}

impl Failure {
    fn usage(reason: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, reason: reason.into() }
    }
    fn not_found(reason: impl Into<String>) -> Self {
        Failure { code: EXIT_NOT_FOUND, reason: reason.into() }
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<MitmError> for Failure {
    fn from(e: MitmError) -> Self {
        let code = match e {
            MitmError::BudgetExceeded { .. } => EXIT_BUDGET,
            MitmError::NotC1 => EXIT_USAGE,
            MitmError::Unsorted(_) => EXIT_INTERNAL,
        };
        Failure { code, reason: e.to_string() }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        let code = match e {
            RepError::BudgetExceeded(_) => EXIT_BUDGET,
            RepError::NotCanonical | RepError::Precondition(_) => EXIT_USAGE,
            RepError::Internal(_) => EXIT_INTERNAL,
        };
        Failure { code, reason: e.to_string() }
    }
}

impl From<oracle::OracleError> for Failure {
    fn from(e: oracle::OracleError) -> Self {
        Failure { code: EXIT_BUDGET, reason: e.to_string() }
    }
}

impl From<gsskit::experiments::ExpError> for Failure {
    fn from(e: gsskit::experiments::ExpError) -> Self {
        use gsskit::experiments::ExpError;
        match e {
            ExpError::Domain(d) => Failure::usage(d),
            ExpError::Instance(i) => i.into(),
            ExpError::Mitm(m) => m.into(),
            ExpError::Rep(r) => r.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("io error: {e}"))
    }
}

fn budget_bytes() -> Result<u64, Failure> {
    match std::env::var("GSSKIT_BUDGET_BYTES") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| Failure::usage(format!("GSSKIT_BUDGET_BYTES = {v:?} is not a byte count"))),
        Err(_) => Ok(gsskit::DEFAULT_BUDGET_BYTES),
    }
}

fn parse_coeffs(s: &str) -> Result<CoefficientSet, Failure> {
    let mut parts = s.split(',');
    let d: u32 = parts
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("--coeffs {s:?}: expected d or d,zero")))?;
    let zero = match parts.next() {
        None => false,
        Some(z) if z.trim() == "zero" => true,
        Some(z) => return Err(Failure::usage(format!("--coeffs {s:?}: unknown token {z:?}"))),
    };
    if parts.next().is_some() {
        return Err(Failure::usage(format!("--coeffs {s:?}: too many tokens")));
    }
    CoefficientSet::new(d, zero).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_biguint(s: &str, what: &str) -> Result<BigUint, Failure> {
    BigUint::from_str(s.trim()).map_err(|_| Failure::usage(format!("{what} = {s:?} is not a nonnegative integer")))
}

fn parse_bigint(s: &str, what: &str) -> Result<BigInt, Failure> {
    BigInt::from_str(s.trim()).map_err(|_| Failure::usage(format!("{what} = {s:?} is not an integer")))
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|_| Failure::usage(format!("{what}: bad entry {tok:?}")))
        })
        .collect()
}

fn read_instance(path: &PathBuf) -> Result<GssInstance, Failure> {
    let text = std::fs::read_to_string(path)?;
    instance::deserialize(&text).map_err(Failure::from)
}

#[derive(serde::Deserialize)]
struct ProfileFile {
    counts: BTreeMap<String, usize>,
}

fn read_profile(path: &str, set: &CoefficientSet) -> Result<Profile, Failure> {
    let text = std::fs::read_to_string(path)?;
    let file: ProfileFile =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("profile file: {e}")))?;
    let mut counts = BTreeMap::new();
    for (k, v) in file.counts {
        let key: i64 =
            k.parse().map_err(|_| Failure::usage(format!("profile key {k:?} is not an integer")))?;
        counts.insert(key, v);
    }
    Profile::new(&set.elements(), &counts).map_err(|e| Failure::usage(e.to_string()))
}

fn emit_solution(
    args: &SolveArgs,
    sol: &Solution,
    work: &WorkStats,
) -> Result<(), Failure> {
    let text = instance::serialize_solution(sol);
    if let Some(out) = &args.out {
        std::fs::write(out, &text)?;
    }
    if args.json {
        println!(
            "{}",
            json!({
                "status": "found",
                "c": sol.c,
                "work": {
                    "partials_enumerated": work.partials_enumerated,
                    "dp_cells": work.dp_cells,
                    "list_elements": work.list_elements,
                    "pairs_examined": work.pairs_examined,
                    "total": work.total(),
                }
            })
        );
    } else {
        print!("found {text}");
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    let set = parse_coeffs(&args.coeffs)?;
    let m = parse_biguint(&args.big_m, "-M")?;
    let tau = parse_bigint(&args.tau, "--tau")?;
    let inst = GssInstance::generate_random(args.n, m, tau, set, args.seed)?;
    std::fs::write(&args.out, instance::serialize(&inst))?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let inst = read_instance(&args.input)?;
    let budget = budget_bytes()?;
    match args.algo.as_str() {
        "brute" => {
            let found = oracle::brute_force_solve(&inst, oracle::DEFAULT_STATE_BUDGET)?;
            match found {
                Some(sol) => emit_solution(args, &sol, &WorkStats::default()),
                None => Err(Failure::not_found("exhaustive search found no solution")),
            }
        }
        "mitm" => {
            let r = mitm::solve_mitm(&inst, budget)?;
            match r.solution {
                Some(sol) => emit_solution(args, &sol, &r.work),
                None => Err(Failure::not_found("no solution")),
            }
        }
        "rep" => {
            let mut cfg = SolverConfig {
                rng_seed: args.seed,
                budget_bytes: budget,
                ..SolverConfig::for_n(inst.n())
            };
            if let Some(k) = args.repeats {
                cfg.repeats = k;
            }
            if args.profile == "auto" {
                match repsolver::solve_auto(&inst, &cfg)? {
                    AutoOutcome::TooLarge => Err(Failure::not_found("regime:too_large")),
                    AutoOutcome::Solved { solution, work } => {
                        emit_solution(args, &solution, &work)
                    }
                    AutoOutcome::NotFound { .. } => Err(Failure::not_found("no solution found")),
                }
            } else {
                let Some((canon, map)) = inst.canonicalize() else {
                    return Err(Failure::not_found("target indivisible under the affine set"));
                };
                let pi = read_profile(&args.profile, canon.coeffs())?;
                let out = repsolver::solve_profile(&canon, &pi, &cfg)?;
                if out.rejected_by_size {
                    return Err(Failure::not_found("profile rejected by the size bound"));
                }
                match out.solution {
                    Some(sol) => emit_solution(args, &map.lift(&sol), &out.work),
                    None => Err(Failure::not_found("no solution with this profile found")),
                }
            }
        }
        _ => unreachable!("clap validates --algo"),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let inst = read_instance(&args.input)?;
    let text = std::fs::read_to_string(&args.solution)?;
    let sol = instance::deserialize_solution(&text)?;
    let verdict = match inst.verify(&sol) {
        Ok(v) => v,
        Err(e @ InstanceError::CoefficientOutsideSet { .. })
        | Err(e @ InstanceError::LengthMismatch { .. }) => {
            return Err(Failure::not_found(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    if args.json {
        println!("{}", json!({ "verified": verdict }));
    } else {
        println!("{}", if verdict { "ok" } else { "mismatch" });
    }
    if verdict {
        Ok(())
    } else {
        Err(Failure { code: EXIT_NOT_FOUND, reason: String::new() })
    }
}

fn cmd_convert(args: &ConvertArgs) -> Result<(), Failure> {
    match &args.kind {
        ConvertKind::SubsetSum { x, tau, out } => {
            let xs: Vec<BigUint> = x
                .split(',')
                .map(|tok| parse_biguint(tok, "--x"))
                .collect::<Result<_, _>>()?;
            let tau = parse_bigint(tau, "--tau")?;
            let inst = GssInstance::from_subset_sum(&xs, &tau)?;
            std::fs::write(out, instance::serialize(&inst))?;
            println!("wrote {}", out.display());
            Ok(())
        }
        ConvertKind::Balance { y, delta, coeffs, out } => {
            let ys: Vec<f64> = parse_list(y, "--y")?;
            let set = parse_coeffs(coeffs)?;
            let (inst, meta) = GssInstance::from_number_balancing(&ys, *delta, set)?;
            std::fs::write(out, instance::serialize(&inst))?;
            println!(
                "wrote {} (any solution has real imbalance < {})",
                out.display(),
                meta.imbalance_bound
            );
            Ok(())
        }
    }
}

fn cmd_scan(args: &ScanArgs) -> Result<(), Failure> {
    let spec = PhaseSpec {
        set: parse_coeffs(&args.coeffs)?,
        n: args.n,
        alphas: parse_list(&args.alphas, "--alphas")?,
        trials: args.trials,
        tau: parse_bigint(&args.tau, "--tau")?,
        seed: args.seed,
        budget_bytes: budget_bytes()?,
    };
    let rows = phase_scan(&spec)?;
    std::fs::write(&args.out, phase_csv(&rows))?;
    for r in &rows {
        if r.skipped {
            println!("alpha {}: skipped (checker refused)", r.alpha);
        } else {
            println!("alpha {}: {}/{} solvable", r.alpha, r.successes, r.trials);
        }
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let spec = ScalingSpec {
        set: parse_coeffs(&args.coeffs)?,
        ns: parse_list(&args.n_grid, "--n-grid")?,
        trials: args.trials,
        alpha: args.alpha,
        seed: args.seed,
        budget_bytes: budget_bytes()?,
    };
    let mut csv = String::from("schema,v1\nalgo,n,mean_log2_work,seed\n");
    for algo in [ScalingAlgo::Mitm, ScalingAlgo::Rep] {
        let report = work_scaling(&spec, algo)?;
        let name = match algo {
            ScalingAlgo::Mitm => "mitm",
            ScalingAlgo::Rep => "rep",
        };
        for p in &report.points {
            csv.push_str(&format!("{},{},{},{}\n", name, p.n, p.mean_log2_work, p.seed));
        }
        println!("{name}: slope {:.4} bits/n (intercept {:.2})", report.slope, report.intercept);
    }
    std::fs::write(&args.out, csv)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Convert(a) => cmd_convert(a),
        Command::ScanPhase(a) => cmd_scan(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let json_mode = matches!(
                &cli.command,
                Command::Solve(SolveArgs { json: true, .. })
                    | Command::Verify(VerifyArgs { json: true, .. })
            );
            if json_mode {
                println!("{}", json!({ "status": "error", "code": f.code, "reason": f.reason }));
            } else if !f.reason.is_empty() {
                eprintln!("error: {}", f.reason);
            }
            ExitCode::from(f.code)
        }
    }
}
