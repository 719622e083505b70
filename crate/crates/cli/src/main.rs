use std::cmp::Ordering;
use std::fmt::Write as _;
use std::process::ExitCode;

use chebex::oracle::brute_force_max;
use chebex::solver::threshold_index;
use chebex::{
    solve, verify_solution, ExtremalSolution, Kind, OracleRecord, ProblemSpec, SolutionRecord,
};
use clap::{Args, Parser, Subcommand};

const INVALID: u8 = 1;
const FAILED: u8 = 2;

/// Extremal polynomial families under a sup-norm bound on the sum of squares.
#[derive(Parser)]
#[command(name = "chebex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the verified solution as JSON.
    Solve(Instance),
    /// Solve over a grid of b and print `b,k,objective,active_set` as CSV.
    Sweep(SweepArgs),
    /// Compare the solver objective with the brute-force oracle.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Instance {
    #[arg(long, default_value = "first")]
    kind: Kind,
    /// Comma-separated degrees, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    indices: Vec<usize>,
    /// Half-width of the interval [-b, b].
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "first")]
    kind: Kind,
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    indices: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    b_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    b_max: f64,
    /// Number of grid points, both ends included.
    #[arg(long, default_value_t = 101)]
    steps: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: Instance,
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Closed forms cover only the full range and consecutive pairs for the
/// weighted problem.
fn checked_spec(kind: Kind, indices: &[usize], b: f64) -> Result<ProblemSpec, String> {
    let spec = ProblemSpec::new(kind, indices.iter().copied(), b).map_err(|e| e.to_string())?;
    if kind == Kind::Second && !(spec.is_full_range() || spec.is_pair()) {
        return Err("second kind needs indices 0..n or n-1,n".into());
    }
    Ok(spec)
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("chebex: {msg}");
    ExitCode::from(INVALID)
}

fn cmd_solve(args: Instance) -> ExitCode {
    let spec = match checked_spec(args.kind, &args.indices, args.b) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let (sol, report) = match solve(&spec).and_then(|sol| {
        let report = verify_solution(&sol, &spec)?;
        Ok((sol, report))
    }) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    println!("{}", SolutionRecord::new(&spec, &sol, &report).to_json());
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        eprintln!("chebex: verification failed");
        ExitCode::from(FAILED)
    }
}

/// Phase index when a closed form defines one, otherwise the smallest index
/// with positive weight.
fn phase_column(sol: &ExtremalSolution, spec: &ProblemSpec) -> usize {
    sol.phase_index
        .or_else(|| sol.alphas.iter().find(|(_, &a)| a > 0.0).map(|(&j, _)| j))
        .unwrap_or_else(|| threshold_index(spec.n(), spec.b(), spec.kind()))
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    if args.b_min.partial_cmp(&args.b_max) != Some(Ordering::Less) {
        return fail(format!(
            "b-min ({}) must be below b-max ({})",
            args.b_min, args.b_max
        ));
    }
    if args.steps < 2 {
        return fail("steps must be at least 2");
    }
    let mut out = String::from("b,k,objective,active_set\n");
    for i in 0..args.steps {
        let t = i as f64 / (args.steps - 1) as f64;
        let b = if i + 1 == args.steps {
            args.b_max
        } else {
            args.b_min + t * (args.b_max - args.b_min)
        };
        let spec = match checked_spec(args.kind, &args.indices, b) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let sol = match solve(&spec) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let active: Vec<String> = sol.active_set.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "{:.16e},{},{:.16e},{}",
            b,
            phase_column(&sol, &spec),
            sol.objective,
            active.join(" ")
        );
    }
    print!("{out}");
    ExitCode::SUCCESS
}

fn cmd_oracle(args: OracleArgs) -> ExitCode {
    let inst = args.instance;
    let spec = match checked_spec(inst.kind, &inst.indices, inst.b) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let result = solve(&spec).and_then(|sol| {
        let oracle = brute_force_max(&spec, args.budget, args.seed)?;
        Ok(OracleRecord::new(
            &spec,
            sol.objective,
            &oracle,
            args.budget,
        ))
    });
    match result {
        Ok(record) => {
            println!("{}", record.to_json());
            if record.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("chebex: oracle gap exceeds tolerance");
                ExitCode::from(FAILED)
            }
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(INVALID);
        }
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}
