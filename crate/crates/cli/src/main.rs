//! `codelim`: optimal D-ary prefix codes with bounded codeword lengths.
//!
//! Exit codes: 0 success, 1 usage or parse errors, 2 infeasible constraints,
//! 3 verification failures.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use codelim::{
    assign_canonical, fringe_solve, solve, solve_linear_space, CodingProblem, FringeProblem,
    LengthBounds, Penalty, Radix,
};

mod input;
mod render;
mod verify;

use render::{decimal_string, rational_string, ReportInputs};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "codelim",
    version,
    about = "Optimal D-ary prefix codes with bounded codeword lengths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an optimal code with lengths confined to [min-len, max-len]
    Solve(SolveArgs),
    /// Construct the best code whose length spread is at most a bound
    Fringe(FringeArgs),
    /// Check a codebook JSON file for prefix-freedom and Kraft validity
    Verify(VerifyArgs),
    /// Exhaustive reference for tiny instances (dev tool)
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Output alphabet size D
    #[arg(long, default_value_t = 2)]
    radix: u32,
    /// Penalty function: linear, quadratic, or exp:<t>
    #[arg(long, default_value = "linear")]
    penalty: String,
    /// Report format
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
    /// Include wall-clock timing in the report (output is no longer
    /// byte-deterministic)
    #[arg(long)]
    timing: bool,
    /// Weights file, one weight per line ('#' comments); '-' reads stdin
    #[arg(default_value = "-")]
    weights: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Minimum codeword length
    #[arg(long, default_value_t = 0)]
    min_len: u32,
    /// Maximum codeword length; default is the hard bound
    /// ceil((n-1)/(D-1))
    #[arg(long)]
    max_len: Option<u32>,
    /// Solver memory strategy: 'linear' reconstructs in O(n) space, 'full'
    /// keeps node lists
    #[arg(long, default_value = "linear", value_parser = ["full", "linear"])]
    space: String,
}

#[derive(Args)]
struct FringeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Maximum allowed difference between longest and shortest codeword
    #[arg(long)]
    max_fringe: u32,
    /// Extra blocks of D-1 zero-weight dummies, admitting codes that need
    /// Kraft slack
    #[arg(long, default_value_t = 0)]
    extra_dummy_blocks: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Codebook JSON file
    codebook: String,
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 0)]
    min_len: u32,
    #[arg(long)]
    max_len: Option<u32>,
}

fn main() -> ExitCode {
    ExitCode::from(run())
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Fringe(args) => cmd_fringe(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn usage_error(message: &str) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn core_error(e: codelim::Error) -> u8 {
    eprintln!("error: {e}");
    if e.is_infeasible() {
        EXIT_INFEASIBLE
    } else {
        EXIT_USAGE
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn parse_penalty(spec: &str) -> Result<Penalty, String> {
    match spec {
        "linear" => Ok(Penalty::Linear),
        "quadratic" => Ok(Penalty::Quadratic),
        other => match other.strip_prefix("exp:") {
            Some(t) => Ok(Penalty::Exponential {
                t: input::parse_positive_rational(t)
                    .map_err(|e| format!("exp penalty rate: {e}"))?,
                precision: Penalty::default_precision(),
            }),
            None => Err(format!(
                "unknown penalty {other:?}; expected linear, quadratic, or exp:<t>"
            )),
        },
    }
}

/// `ceil((n - 1) / (D - 1))`, the largest length any optimal code can need.
fn hard_length_bound(n_real: usize, radix: Radix) -> u32 {
    let step = (radix.get() - 1) as usize;
    ((n_real - 1).div_ceil(step)) as u32
}

struct CommonParsed {
    radix: Radix,
    penalty: Penalty,
    weights: Vec<num::BigRational>,
    json: bool,
    timing: bool,
}

fn parse_common(common: &CommonArgs) -> Result<CommonParsed, u8> {
    let radix = match Radix::new(common.radix) {
        Ok(r) => r,
        Err(e) => return Err(core_error(e)),
    };
    let penalty = parse_penalty(&common.penalty).map_err(|e| usage_error(&e))?;
    let text = read_input(&common.weights).map_err(|e| usage_error(&e))?;
    let weights = input::parse_weights(&text).map_err(|e| usage_error(&e))?;
    Ok(CommonParsed {
        radix,
        penalty,
        weights,
        json: common.format == "json",
        timing: common.timing,
    })
}

fn cmd_solve(args: SolveArgs) -> u8 {
    let parsed = match parse_common(&args.common) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let max_len = args
        .max_len
        .unwrap_or_else(|| hard_length_bound(parsed.weights.len(), parsed.radix));
    let bounds = match LengthBounds::new(args.min_len, max_len) {
        Ok(b) => b,
        Err(e) => return core_error(e),
    };
    let problem = match CodingProblem::new(&parsed.weights, parsed.radix, bounds, parsed.penalty.clone())
    {
        Ok(p) => p,
        Err(e) => return core_error(e),
    };
    let started = Instant::now();
    let result = match args.space.as_str() {
        "full" => solve(&problem),
        _ => solve_linear_space(&problem),
    };
    let elapsed = started.elapsed();
    let result = match result {
        Ok(r) => r,
        Err(e) => return core_error(e),
    };
    let book = match assign_canonical(&result.lengths, parsed.radix) {
        Ok(b) => b,
        Err(e) => return core_error(e),
    };
    let inputs = ReportInputs {
        radix: parsed.radix,
        penalty: &parsed.penalty,
        result: &result,
        book: &book,
        dummies: problem.weights().dummy_count(),
        bounds: Some((bounds.l_min(), bounds.l_max())),
        timing_ms: parsed.timing.then(|| render::millis(elapsed)),
    };
    if parsed.json {
        let report = render::solve_json(&inputs);
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print!("{}", render::solve_text(&inputs));
    }
    0
}

fn cmd_fringe(args: FringeArgs) -> u8 {
    let parsed = match parse_common(&args.common) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let problem = FringeProblem {
        weights: parsed.weights.clone(),
        radix: parsed.radix,
        max_fringe: args.max_fringe,
        penalty: parsed.penalty.clone(),
        extra_dummy_blocks: args.extra_dummy_blocks,
    };
    let started = Instant::now();
    let outcome = fringe_solve(&problem);
    let elapsed = started.elapsed();
    let fringe = match outcome {
        Ok(f) => f,
        Err(e) => return core_error(e),
    };
    let book = match assign_canonical(&fringe.result.lengths, parsed.radix) {
        Ok(b) => b,
        Err(e) => return core_error(e),
    };
    let dummies = fringe.result.padded_lengths.len() - fringe.result.lengths.len();
    let inputs = ReportInputs {
        radix: parsed.radix,
        penalty: &parsed.penalty,
        result: &fringe.result,
        book: &book,
        dummies,
        bounds: None,
        timing_ms: parsed.timing.then(|| render::millis(elapsed)),
    };
    if parsed.json {
        let report = render::fringe_json(&inputs, &fringe, args.max_fringe, args.extra_dummy_blocks);
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print!(
            "{}",
            render::fringe_text(&inputs, &fringe, args.max_fringe)
        );
    }
    0
}

fn cmd_verify(args: VerifyArgs) -> u8 {
    let text = match read_input(&args.codebook) {
        Ok(t) => t,
        Err(e) => return usage_error(&e),
    };
    let file: verify::CodebookFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => return usage_error(&format!("{}: {e}", args.codebook)),
    };
    let report = verify::verify_codebook(&file);
    if args.format == "json" {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else if report.ok {
        println!("ok");
    } else {
        for v in &report.violations {
            println!("{}: {}", v.kind, v.detail);
        }
    }
    if report.ok {
        0
    } else {
        EXIT_VERIFY
    }
}

fn cmd_oracle(args: OracleArgs) -> u8 {
    let parsed = match parse_common(&args.common) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let max_len = args
        .max_len
        .unwrap_or_else(|| hard_length_bound(parsed.weights.len(), parsed.radix));
    let bounds = match LengthBounds::new(args.min_len, max_len) {
        Ok(b) => b,
        Err(e) => return core_error(e),
    };
    let problem = match CodingProblem::new(&parsed.weights, parsed.radix, bounds, parsed.penalty)
    {
        Ok(p) => p,
        Err(e) => return core_error(e),
    };
    let oracle = match codelim::oracle::brute_force_code(&problem) {
        Ok(o) => o,
        Err(e) => return core_error(e),
    };
    if parsed.json {
        let report = serde_json::json!({
            "minimum_penalty": oracle.min_penalty.as_ref().map(rational_string),
            "optimal_count": oracle.optimal_lengths.len(),
            "optimal_lengths": oracle.optimal_lengths,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        if oracle.min_penalty.is_none() {
            return EXIT_INFEASIBLE;
        }
        return 0;
    }
    match &oracle.min_penalty {
        Some(min) => {
            println!(
                "minimum_penalty: {} (~{})",
                rational_string(min),
                decimal_string(min)
            );
            println!("optimal_vectors: {}", oracle.optimal_lengths.len());
            for lengths in &oracle.optimal_lengths {
                println!(
                    "  {}",
                    lengths
                        .iter()
                        .map(|l| l.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            0
        }
        None => {
            println!("infeasible: no kraft-equality vector within bounds");
            EXIT_INFEASIBLE
        }
    }
}
