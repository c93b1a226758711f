//! The `men` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 input or parse error, 3 verification
//! failure, 4 resource cap.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use men_core::engine::{emit_trace, Engine, EngineError, Solution};
use men_core::oracle::{check_partition, OracleError, DEFAULT_LIMIT};
use men_core::{parse_dimacs, solve, Cnf, Options, Row};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "men", version, about = "Compressed enumeration of all models of a CNF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the final rows and totals.
    Solve(Common),
    /// Print only the totals.
    Count(Common),
    /// Print every model as a 0/1 string.
    Enum(Common),
    /// Check the rows against brute force.
    Verify(Common),
    /// Print the plain 012-row expansion of the solution.
    Expand(Common),
    /// Print size and pruning statistics.
    Stats(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// DIMACS file; standard input if absent or "-".
    input: Option<PathBuf>,
    /// Keep sons that hold no model of the remaining clauses.
    #[arg(long)]
    no_prune: bool,
    /// Write engine events to the error stream.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Stop with exit code 4 once more than N final rows are produced.
    #[arg(long, value_name = "N")]
    max_rows: Option<usize>,
    /// Largest variable count the brute-force check accepts.
    #[arg(long, value_name = "T", default_value_t = DEFAULT_LIMIT)]
    oracle_limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Common {
    fn options(&self) -> Options {
        Options { prune: !self.no_prune, max_rows: self.max_rows, trace: self.trace, ..Options::default() }
    }
}

/// A failed command: exit code plus message for the error stream.
struct Failure(i32, String);

impl Failure {
    fn new(code: i32, msg: impl Display) -> Self {
        Failure(code, msg.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_PARSE, e)
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = dispatch(cli.command, stdin, out, err);
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "men: {msg}");
            code
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Solve(args) => cmd_solve(&args, stdin, out, err),
        Command::Count(args) => cmd_count(&args, stdin, out, err),
        Command::Enum(args) => cmd_enum(&args, stdin, out, err),
        Command::Verify(args) => cmd_verify(&args, stdin, out, err),
        Command::Expand(args) => cmd_expand(&args, stdin, out, err),
        Command::Stats(args) => cmd_stats(&args, stdin, out, err),
    }
}

fn read_input(args: &Common, stdin: &mut dyn Read) -> Result<Cnf, Failure> {
    let text = match &args.input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?,
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            text
        }
    };
    let cnf = parse_dimacs(&text).map_err(|e| Failure::new(EXIT_PARSE, e))?;
    if cnf.num_vars() == 0 {
        return Err(Failure::new(EXIT_PARSE, EngineError::NoVariables));
    }
    Ok(cnf)
}

fn engine_failure(e: EngineError) -> Failure {
    match e {
        EngineError::RowLimit { .. } => Failure::new(EXIT_RESOURCE, e),
        EngineError::NoVariables => Failure::new(EXIT_PARSE, e),
        EngineError::Invariant(_) => Failure::new(EXIT_VERIFY, e),
    }
}

fn run_solver(args: &Common, cnf: &Cnf, err: &mut dyn Write) -> Result<Solution, Failure> {
    match solve(cnf, args.options()) {
        Ok(solution) => {
            err.write_all(emit_trace(&solution.trace).as_bytes())?;
            Ok(solution)
        }
        Err(EngineError::RowLimit { limit, partial }) => {
            err.write_all(emit_trace(&partial.trace).as_bytes())?;
            Err(engine_failure(EngineError::RowLimit { limit, partial }))
        }
        Err(e) => Err(engine_failure(e)),
    }
}

fn totals(solution: &Solution) -> String {
    format!("rows={} models={}", solution.final_rows.len(), solution.model_count)
}

fn rows_json(rows: &[Row]) -> serde_json::Value {
    serde_json::to_value(rows).expect("rows serialize")
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json"))
}

fn cmd_solve(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    let solution = run_solver(args, &cnf, err)?;
    match args.format {
        Format::Text => {
            for row in &solution.final_rows {
                writeln!(out, "{row}")?;
            }
            writeln!(out, "{}", totals(&solution))?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "rows": rows_json(&solution.final_rows),
                "row_count": solution.final_rows.len(),
                "models": solution.model_count.to_string(),
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_count(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    let solution = run_solver(args, &cnf, err)?;
    match args.format {
        Format::Text => writeln!(out, "{}", totals(&solution))?,
        Format::Json => write_json(
            out,
            &json!({ "rows": solution.final_rows.len(), "models": solution.model_count.to_string() }),
        )?,
    }
    Ok(EXIT_OK)
}

/// Streams models row by row without holding the solution.
fn cmd_enum(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    let mut engine = Engine::new(&cnf, args.options()).map_err(engine_failure)?;
    let json = args.format == Format::Json;
    let mut rows = 0usize;
    let mut first = true;
    if json {
        write!(out, "[")?;
    }
    while let Some(row) = engine.next() {
        err.write_all(emit_trace(&engine.drain_trace()).as_bytes())?;
        let row = row.map_err(engine_failure)?;
        rows += 1;
        if args.max_rows.is_some_and(|limit| rows > limit) {
            return Err(Failure::new(EXIT_RESOURCE, format!("row limit of {} exceeded", rows - 1)));
        }
        for model in row.members() {
            if json {
                write!(out, "{}\"{model}\"", if first { "" } else { "," })?;
            } else {
                writeln!(out, "{model}")?;
            }
            first = false;
        }
    }
    err.write_all(emit_trace(&engine.drain_trace()).as_bytes())?;
    if json {
        writeln!(out, "]")?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    if cnf.num_vars() > args.oracle_limit {
        return Err(Failure::new(
            EXIT_RESOURCE,
            OracleError::TooManyVars { t: cnf.num_vars(), limit: args.oracle_limit },
        ));
    }
    let solution = run_solver(args, &cnf, err)?;
    let report = check_partition(&solution.final_rows, &cnf, args.oracle_limit)
        .map_err(|e| Failure::new(EXIT_RESOURCE, e))?;
    match args.format {
        Format::Text => writeln!(out, "{report}")?,
        Format::Json => write_json(out, &report.to_json())?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_expand(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    let solution = run_solver(args, &cnf, err)?;
    let expanded: Vec<String> =
        solution.final_rows.iter().flat_map(Row::expand_012).map(|r| r.to_string()).collect();
    match args.format {
        Format::Text => {
            for row in &expanded {
                writeln!(out, "{row}")?;
            }
            writeln!(out, "rows012={}", expanded.len())?;
        }
        Format::Json => write_json(out, &json!({ "rows012": expanded, "count": expanded.len() }))?,
    }
    Ok(EXIT_OK)
}

fn ratio(models: &BigUint, rows: usize) -> f64 {
    if rows == 0 {
        return 0.0;
    }
    models.to_f64().unwrap_or(f64::INFINITY) / rows as f64
}

fn cmd_stats(args: &Common, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cnf = read_input(args, stdin)?;
    let solution = run_solver(args, &cnf, err)?;
    let rows = solution.final_rows.len();
    let expansion: BigUint = solution.final_rows.iter().map(Row::expand_012_len).sum();
    let ratio = ratio(&solution.model_count, rows);
    match args.format {
        Format::Text => {
            writeln!(out, "rows={rows}")?;
            writeln!(out, "models={}", solution.model_count)?;
            writeln!(out, "ratio={ratio:.2}")?;
            writeln!(out, "rows012={expansion}")?;
            writeln!(out, "{}", solution.stats)?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "rows": rows,
                "models": solution.model_count.to_string(),
                "ratio": ratio,
                "rows012": expansion.to_string(),
                "engine": solution.stats,
            }),
        )?,
    }
    Ok(EXIT_OK)
}
