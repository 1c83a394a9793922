//! The `ivd` command line.
//!
//! Exit codes: 0 decided (or a valid solution for `check`), 1 invalid
//! solution, 2 brute-force budget exceeded, 64 usage error, 65 bad input
//! data, 70 internal failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, BenchConfig};
use crate::dispatch::{solve_with, Algo, DispatchError};
use crate::generators::{self, MsiSource};
use crate::instance::{
    parse_instance, parse_solution, serialize_instance, serialize_solution, Instance, NO_ANSWER_JSON,
};
use crate::voronoi::{check_solution, CheckError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "ivd", version, about = "Inverse Voronoi toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find sites realizing the given cells, or report that none exist.
    Solve(SolveArgs),
    /// Check a solution against an instance.
    Check(CheckArgs),
    /// Write a generated instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time the tree solver on planted instances.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Instance JSON, `-` for stdin.
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub algo: Algo,
    /// Maximum number of site tuples the brute-force search may visit.
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub solution: PathBuf,
}

#[derive(Args, Debug)]
pub struct Out {
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Random tree with the exact cells of random planted sites.
    TreeYes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        min_len: i64,
        #[arg(long, default_value_t = 10)]
        max_len: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the planted sites here.
        #[arg(long)]
        planted: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Random tree with arbitrary connected, possibly overlapping cells.
    TreeCells {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        min_len: i64,
        #[arg(long, default_value_t = 3)]
        max_len: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Random subcubic tree with disjoint connected cells.
    Subcubic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        min_len: i64,
        #[arg(long, default_value_t = 3)]
        max_len: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Voronoi cells of random sites on a random connected graph.
    GraphCells {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Edges added on top of a random spanning tree.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 1)]
        min_len: i64,
        #[arg(long, default_value_t = 3)]
        max_len: i64,
        /// Move one vertex into a neighbouring cell.
        #[arg(long)]
        perturb: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Positive 1-in-3-SAT formula, e.g. `--vars 4 --clauses 0,1,2;1,2,3`.
    OneInThree {
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value = "")]
        clauses: String,
        #[command(flatten)]
        out: Out,
    },
    /// Multicoloured subgraph isomorphism, e.g.
    /// `--parts 0,0,1,2 --edges 0-2,1-3 --pattern 0-1,1-2,0-2`.
    Msi {
        #[arg(long)]
        parts: String,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        out: Out,
    },
    /// Multicoloured independent set on `l` parts of `t` vertices, edges as
    /// `i.h-i2.h2`.
    Mis {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        edges: String,
        #[command(flatten)]
        out: Out,
    },
    /// Two stars encoding whether the sets `x` and `y` intersect.
    Stars {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated sizes; powers of two from 2^13 to 2^17 by default.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// First seed; seeds `seed .. seed + repeats` are used for every size.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub repeats: u64,
    /// Number of cells is `n / cells_divisor`.
    #[arg(long, default_value_t = 64)]
    pub cells_divisor: usize,
    #[arg(long, default_value_t = 1)]
    pub min_len: i64,
    #[arg(long, default_value_t = 10)]
    pub max_len: i64,
    /// Machine-readable results (JSON) go here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn fail<T>(code: i32, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { code, message: message.into() })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        return io::stdin().read_to_string(&mut s).map(|_| s).or_else(|e| fail(EXIT_DATA, format!("stdin: {e}")));
    }
    fs::read_to_string(path).or_else(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) if p != Path::new("-") => fs::write(p, format!("{text}\n")),
        _ => writeln!(io::stdout(), "{text}"),
    };
    res.or_else(|e| fail(EXIT_DATA, format!("write failed: {e}")))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read_text(path)?).or_else(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn cmd_solve(a: &SolveArgs) -> Result<i32, Failure> {
    let inst = load_instance(&a.input)?;
    let (answer, used) = solve_with(&inst, a.algo, a.budget).map_err(|e| Failure {
        code: match e {
            DispatchError::Budget(_) => EXIT_BUDGET,
            DispatchError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_DATA,
        },
        message: e.to_string(),
    })?;
    eprintln!("algorithm: {used:?}");
    let text = answer.as_ref().map_or(NO_ANSWER_JSON.to_string(), serialize_solution);
    write_text(a.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_check(a: &CheckArgs) -> Result<i32, Failure> {
    let inst = load_instance(&a.input)?;
    let text = read_text(&a.solution)?;
    let sol = parse_solution(&text).or_else(|e| fail(EXIT_DATA, format!("{}: {e}", a.solution.display())))?;
    match check_solution(&inst, &sol) {
        Ok(true) => {
            println!("valid");
            Ok(EXIT_OK)
        }
        Ok(false) => {
            println!("invalid");
            Ok(EXIT_INVALID)
        }
        Err(e @ (CheckError::LengthMismatch { .. } | CheckError::InvalidVertex(_))) => fail(EXIT_USAGE, e.to_string()),
    }
}

fn list<T: std::str::FromStr>(s: &str, sep: char) -> Result<Vec<T>, Failure> {
    s.split(sep)
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().or_else(|_| fail(EXIT_USAGE, format!("cannot parse {x:?}"))))
        .collect()
}

fn pair<T: std::str::FromStr + Copy>(s: &str) -> Result<(T, T), Failure> {
    match list::<T>(s, '-')?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => fail(EXIT_USAGE, format!("expected a-b, got {s:?}")),
    }
}

fn weights(min: i64, max: i64) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    if min < 1 || min > max {
        return fail(EXIT_USAGE, format!("need 1 ≤ min-len ≤ max-len, got {min}..{max}"));
    }
    Ok(min..=max)
}

fn need(cond: bool, msg: &str) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        fail(EXIT_USAGE, msg)
    }
}

fn cmd_gen(g: &GenCommand) -> Result<i32, Failure> {
    let usage = |e: generators::GenError| Failure { code: EXIT_USAGE, message: e.to_string() };
    let (inst, out) = match g {
        GenCommand::TreeYes { n, k, min_len, max_len, seed, planted, out } => {
            let (inst, sol) =
                generators::gen_random_tree_yes(*n, *k, weights(*min_len, *max_len)?, *seed).map_err(usage)?;
            if let Some(p) = planted {
                write_text(Some(p), &serialize_solution(&sol))?;
            }
            (inst, out)
        }
        GenCommand::TreeCells { n, k, min_len, max_len, seed, out } => {
            need(*k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
            (generators::gen_random_tree_cells(*n, *k, weights(*min_len, *max_len)?, *seed), out)
        }
        GenCommand::Subcubic { n, k, min_len, max_len, seed, out } => {
            need(*k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
            (generators::gen_random_subcubic_disjoint(*n, *k, weights(*min_len, *max_len)?, *seed), out)
        }
        GenCommand::GraphCells { n, k, extra, min_len, max_len, perturb, seed, out } => {
            need(*k >= 1 && k <= n, "need 1 ≤ k ≤ n")?;
            let w = weights(*min_len, *max_len)?;
            (generators::gen_random_graph_cells(*n, *k, *extra, w, *perturb, *seed), out)
        }
        GenCommand::OneInThree { vars, clauses, out } => {
            let clauses: Vec<[usize; 3]> = clauses
                .split(';')
                .filter(|c| !c.trim().is_empty())
                .map(|c| match list::<usize>(c, ',')?.as_slice() {
                    &[a, b, c] => Ok([a, b, c]),
                    _ => fail(EXIT_USAGE, format!("clause {c:?} needs three variables")),
                })
                .collect::<Result<_, _>>()?;
            (generators::gen_from_1in3sat(*vars, &clauses).map_err(usage)?, out)
        }
        GenCommand::Msi { parts, edges, pattern, out } => {
            let src = MsiSource {
                part: list(parts, ',')?,
                edges: list::<String>(edges, ',')?.iter().map(|e| pair(e)).collect::<Result<_, _>>()?,
                pattern: list::<String>(pattern, ',')?.iter().map(|e| pair(e)).collect::<Result<_, _>>()?,
            };
            (generators::gen_from_msi(&src).map_err(usage)?, out)
        }
        GenCommand::Mis { l, t, edges, out } => {
            let vertex = |s: &str| -> Result<(usize, usize), Failure> {
                match list::<usize>(s, '.')?.as_slice() {
                    &[i, h] => Ok((i, h)),
                    _ => fail(EXIT_USAGE, format!("expected part.index, got {s:?}")),
                }
            };
            let edges = list::<String>(edges, ',')?
                .iter()
                .map(|e| match e.split_once('-') {
                    Some((a, b)) => Ok((vertex(a)?, vertex(b)?)),
                    None => fail(EXIT_USAGE, format!("expected u-v, got {e:?}")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (generators::gen_from_mis(*l, *t, &edges).map_err(usage)?.instance, out)
        }
        GenCommand::Stars { x, y, out } => {
            (generators::gen_set_intersection_stars(&list(x, ',')?, &list(y, ',')?).map_err(usage)?, out)
        }
    };
    let text = serialize_instance(&inst).or_else(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    write_text(out.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs) -> Result<i32, Failure> {
    need(a.repeats >= 1, "need at least one repeat")?;
    need(a.cells_divisor >= 1, "cells divisor must be positive")?;
    let cfg = BenchConfig {
        sizes: a.sizes.clone().unwrap_or_else(|| BenchConfig::default().sizes),
        seeds: (a.seed..a.seed + a.repeats).collect(),
        cells_divisor: a.cells_divisor,
        weights: weights(a.min_len, a.max_len)?,
        threads: threads_from_env()?,
    };
    need(cfg.sizes.iter().all(|&n| n >= 2), "sizes must be at least 2")?;
    let rows = bench::run(&cfg).or_else(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    print!("{}", bench::format_table(&rows));
    if let Some(p) = &a.json {
        let doc = serde_json::json!({ "rows": rows, "summary": bench::summarize(&rows) });
        write_text(Some(p), &doc.to_string())?;
    }
    Ok(EXIT_OK)
}

/// Worker count from `IVD_THREADS`, 1 when unset.
fn threads_from_env() -> Result<usize, Failure> {
    let Ok(v) = std::env::var("IVD_THREADS") else { return Ok(1) };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => fail(EXIT_USAGE, format!("IVD_THREADS must be a positive integer, got {v:?}")),
    }
}

pub fn execute(cli: &Cli) -> Result<i32, Failure> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Check(a) => cmd_check(a),
        Command::Gen(g) => cmd_gen(g),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// printing diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
