//! Command-line front end: single product rows, cached whole tables,
//! vanishing-property sweeps, and the built-in verification suite.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hilb_pieri::classes::MsTriple;
use hilb_pieri::dag::sweep_conjecture;
use hilb_pieri::partition::Partition;
use hilb_pieri::pieri::{intersect_with_h, pieri_matrix, PieriRow};
use hilb_pieri::rewrite::RewriteOptions;
use hilb_pieri::verify;

const CACHE_ENV: &str = "HILB_PIERI_CACHE";

#[derive(Parser)]
#[command(
    name = "hilb-pieri",
    version,
    about = "Products with the incidence divisor on Hilbert schemes of plane points",
    after_help = "Sweeps run on all cores by default; set RAYON_NUM_THREADS to pin the \
                  worker count. Results are byte-identical either way."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the product of the divisor with one basis class
    Product(ProductArgs),
    /// Compute every product row at n points and cache them on disk
    Matrix(MatrixArgs),
    /// Sweep the vanishing property of signed path sums and report
    Conjecture(ConjectureArgs),
    /// Run the built-in self-checks
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ProductArgs {
    /// Number of points; inferred from the partitions when omitted
    #[arg(long)]
    n: Option<u64>,
    /// Pointed-line partition, comma-separated descending (empty = none)
    #[arg(long, default_value = "")]
    a: String,
    /// Fixed-line partition, comma-separated descending (empty = none)
    #[arg(long, default_value = "")]
    b: String,
    /// Moving-line partition, comma-separated descending (empty = none)
    #[arg(long, default_value = "")]
    c: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory holding table caches (falls back to $HILB_PIERI_CACHE, then .)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Re-verify length and codimension after every rewrite step
    #[arg(long)]
    check_invariants: bool,
}

#[derive(Args)]
struct MatrixArgs {
    /// Number of points
    #[arg(long)]
    n: u32,
    /// Directory to write the cache into (falls back to $HILB_PIERI_CACHE, then .)
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Recompute even when a cache file already exists
    #[arg(long)]
    force: bool,
    /// Re-verify length and codimension after every rewrite step
    #[arg(long)]
    check_invariants: bool,
}

#[derive(Args)]
struct ConjectureArgs {
    /// Largest partition weight to sweep
    #[arg(long)]
    max_weight: u32,
    /// Directory to write the report into (falls back to $HILB_PIERI_CACHE, then .)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Re-verify length and codimension after every rewrite step
    #[arg(long)]
    check_invariants: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

/// Failures carry the exit status the process should end with: 1 for engine
/// or I/O failures, 2 for bad input, 3 for a found counterexample.
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            status: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Product(args) => run_product(&args),
        Command::Matrix(args) => run_matrix(&args),
        Command::Conjecture(args) => run_conjecture(&args),
        Command::Verify(args) => run_verify(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status)
        }
    }
}

/// Parses a command-line partition: comma-separated descending positive
/// integers, the empty string standing for the empty partition.
fn parse_partition(which: &str, input: &str) -> Result<Partition, Failure> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok(Partition::empty());
    }
    let mut parts = Vec::new();
    for piece in trimmed.split(',') {
        let value: u32 = piece.trim().parse().map_err(|_| {
            Failure::usage(format!("--{which}: '{piece}' is not a positive integer"))
        })?;
        if value == 0 {
            return Err(Failure::usage(format!(
                "--{which}: entries must be positive"
            )));
        }
        parts.push(value);
    }
    Partition::new(parts).map_err(|e| Failure::usage(format!("--{which}: {e}")))
}

fn resolve_out_dir(flag: &Option<PathBuf>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    if let Some(dir) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(dir);
    }
    PathBuf::from(".")
}

fn cache_path(dir: &Path, n: u64) -> PathBuf {
    dir.join(format!("pieri_N{n}.json"))
}

/// The on-disk shape of a cached table.
#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: u32,
    rows: Vec<PieriRow>,
}

/// The printed shape of a single product row.
#[derive(Serialize)]
struct ProductOutput<'a> {
    n: u64,
    input: &'a MsTriple,
    terms: Vec<ProductTerm<'a>>,
}

#[derive(Serialize)]
struct ProductTerm<'a> {
    a: &'a Partition,
    b: &'a Partition,
    c: &'a Partition,
    coef: i64,
}

fn run_product(args: &ProductArgs) -> Result<(), Failure> {
    let a = parse_partition("a", &args.a)?;
    let b = parse_partition("b", &args.b)?;
    let c = parse_partition("c", &args.c)?;
    let alpha = MsTriple::new(a, b, c).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(n) = args.n {
        if n != alpha.n() {
            return Err(Failure::usage(format!(
                "--n {n} does not match the partitions, which hold {} points",
                alpha.n()
            )));
        }
    }

    let terms = match cached_row(&resolve_out_dir(&args.out_dir), &alpha) {
        Some(row) => row.terms,
        None => {
            let opts = RewriteOptions {
                check_steps: args.check_invariants,
            };
            intersect_with_h(&alpha, &opts)
                .map_err(|e| Failure::runtime(e.to_string()))?
                .terms
        }
    };

    println!("{}", render_row(&alpha, &terms, args.format));
    Ok(())
}

/// Reads one row verbatim from a table cache, when one exists and holds the
/// class.
fn cached_row(dir: &Path, alpha: &MsTriple) -> Option<PieriRow> {
    let bytes = std::fs::read(cache_path(dir, alpha.n())).ok()?;
    let file: MatrixFile = serde_json::from_slice(&bytes).ok()?;
    file.rows.into_iter().find(|row| row.input == *alpha)
}

fn render_row(alpha: &MsTriple, terms: &[(MsTriple, i64)], format: Format) -> String {
    match format {
        Format::Json => {
            let out = ProductOutput {
                n: alpha.n(),
                input: alpha,
                terms: terms
                    .iter()
                    .map(|(t, coef)| ProductTerm {
                        a: t.a(),
                        b: t.b(),
                        c: t.c(),
                        coef: *coef,
                    })
                    .collect(),
            };
            serde_json::to_string(&out).expect("row serialization cannot fail")
        }
        Format::Text => {
            let mut line = format!("H * {alpha} = ");
            if terms.is_empty() {
                line.push('0');
                return line;
            }
            for (i, (t, coef)) in terms.iter().enumerate() {
                let magnitude = coef.unsigned_abs();
                if i == 0 {
                    if *coef < 0 {
                        line.push_str("- ");
                    }
                } else if *coef < 0 {
                    line.push_str(" - ");
                } else {
                    line.push_str(" + ");
                }
                if magnitude == 1 {
                    let _ = write!(line, "{t}");
                } else {
                    let _ = write!(line, "{magnitude}*{t}");
                }
            }
            line
        }
        Format::Latex => {
            let mut line = format!("H \\cdot \\sigma_{{{alpha}}} = ");
            if terms.is_empty() {
                line.push('0');
                return line;
            }
            for (i, (t, coef)) in terms.iter().enumerate() {
                let magnitude = coef.unsigned_abs();
                if i == 0 {
                    if *coef < 0 {
                        line.push('-');
                    }
                } else if *coef < 0 {
                    line.push_str(" - ");
                } else {
                    line.push_str(" + ");
                }
                if magnitude == 1 {
                    let _ = write!(line, "\\sigma_{{{t}}}");
                } else {
                    let _ = write!(line, "{magnitude}\\sigma_{{{t}}}");
                }
            }
            line
        }
    }
}

fn run_matrix(args: &MatrixArgs) -> Result<(), Failure> {
    let dir = resolve_out_dir(&args.out_dir);
    let path = cache_path(&dir, u64::from(args.n));
    if !args.force && path.exists() {
        println!("cache hit: {}", path.display());
        return Ok(());
    }
    let opts = RewriteOptions {
        check_steps: args.check_invariants,
    };
    let rows = pieri_matrix(args.n, &opts).map_err(|e| Failure::runtime(e.to_string()))?;
    let file = MatrixFile { n: args.n, rows };
    write_json(&path, &file)?;
    println!("wrote {} rows to {}", file.rows.len(), path.display());
    Ok(())
}

fn run_conjecture(args: &ConjectureArgs) -> Result<(), Failure> {
    let dir = resolve_out_dir(&args.out_dir);
    let path = dir.join(format!("conjecture_w{}.json", args.max_weight));
    let sweep = sweep_conjecture(args.max_weight).map_err(|e| Failure::runtime(e.to_string()))?;
    write_json(&path, &sweep)?;
    println!(
        "checked {} anchored partitions of weight <= {}; report at {}",
        sweep.cases.len(),
        args.max_weight,
        path.display()
    );
    if !sweep.pass {
        let witness = sweep
            .counterexamples
            .first()
            .expect("a failing sweep has a witness");
        return Err(Failure {
            status: 3,
            message: format!(
                "vanishing fails at m = {}, anchor {}; witness serialized in the report",
                witness.m, witness.i
            ),
        });
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Failure::runtime(format!("creating {}: {e}", parent.display())))?;
        }
    }
    let mut bytes = serde_json::to_vec(value).expect("serialization cannot fail");
    bytes.push(b'\n');
    std::fs::write(path, bytes)
        .map_err(|e| Failure::runtime(format!("writing {}: {e}", path.display())))
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let checks = verify::run_all(args.check_invariants);
    for check in &checks {
        match &check.outcome {
            Ok(()) => println!("ok   {}", check.name),
            Err(diff) => println!("FAIL {}: {diff}", check.name),
        }
    }
    for note in verify::CONVENTION_NOTES {
        println!("note: {note}");
    }
    let failed = checks.iter().filter(|c| c.outcome.is_err()).count();
    if failed > 0 {
        return Err(Failure::runtime(format!(
            "{failed} of {} checks failed",
            checks.len()
        )));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}
