use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use oa_hilbert::analysis::{classify, is_oa_projection, summarize};
use oa_hilbert::hilbert::{brute_force_minimal_solutions, DEFAULT_ORACLE_NODE_CAP};
use oa_hilbert::indicator::{cross_check_basis, enumerate_indicators, EnumerationOptions};
use oa_hilbert::io;
use oa_hilbert::{
    build_model_matrix, hilbert_basis, verify_matrix, Algorithm, Budget, ConeSystem, Error,
    HilbertBasis,
};

/// Environment variable holding the log filter (e.g. `info`, `debug`).
const LOG_ENV: &str = "OA_HILBERT_LOG";

#[derive(Parser)]
#[command(
    name = "oa-hilbert",
    version,
    about = "Two-level orthogonal arrays as Hilbert basis elements"
)]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Design {
    /// Number of factors n.
    #[arg(short = 'n', long)]
    factors: usize,
    /// Strength m.
    #[arg(short = 'm', long)]
    strength: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    ProjectAndLift,
    Completion,
}

#[derive(Clone, Copy, ValueEnum)]
enum SummaryFormat {
    Table,
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Write the model matrix of the interactions of order 1..=m.
    Matrix {
        #[command(flatten)]
        design: Design,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute the minimal Hilbert basis of OA(n, m).
    Hilbert {
        #[command(flatten)]
        design: Design,
        /// Comma separated point indices (canonical order) forced to zero.
        #[arg(long, value_delimiter = ',')]
        force_zero: Vec<usize>,
        /// Maximum number of candidate vectors the solver may create.
        #[arg(long)]
        budget: Option<u64>,
        /// Wall clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long, value_enum, default_value = "project-and-lift")]
        algorithm: AlgorithmArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Verify a basis file: membership, minimality, order and balance.
    Check {
        #[arg(short, long)]
        basis: PathBuf,
        #[command(flatten)]
        design: Design,
        #[arg(long, value_delimiter = ',')]
        force_zero: Vec<usize>,
    },
    /// One classification record per basis element (tab separated).
    Classify {
        #[arg(short, long)]
        basis: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Cross-tabulate a basis by support, total and maximum replication.
    Summarize {
        #[arg(short, long)]
        basis: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: SummaryFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all orthogonal arrays without replication (n <= 5).
    Enumerate {
        #[command(flatten)]
        design: Design,
        /// Keep one fraction of each complementary pair.
        #[arg(long)]
        quotient_complement: bool,
        #[arg(long)]
        max_support: Option<usize>,
        /// Also relate the fractions to this basis file.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Brute-force the minimal solutions with total at most T.
    Oracle {
        #[command(flatten)]
        design: Design,
        #[arg(long)]
        max_total: u32,
        #[arg(long, value_delimiter = ',')]
        force_zero: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_ORACLE_NODE_CAP)]
        node_cap: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Matrix { .. } => "matrix",
            Command::Hilbert { .. } => "hilbert",
            Command::Check { .. } => "check",
            Command::Classify { .. } => "classify",
            Command::Summarize { .. } => "summarize",
            Command::Enumerate { .. } => "enumerate",
            Command::Oracle { .. } => "oracle",
        }
    }
}

enum Failure {
    Lib(Error),
    Io(String),
    Check(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::BudgetExhausted { .. })
            | Failure::Lib(Error::OracleInfeasible { .. }) => 3,
            Failure::Check(_) => 4,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(s) => s.clone(),
            Failure::Check(n) => format!("{n} check(s) failed"),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Writes to `out`, or to standard output when no file is given.
fn emit(out: &Option<PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn system(design: Design, force_zero: &[usize]) -> std::result::Result<ConeSystem, Failure> {
    Ok(
        ConeSystem::orthogonal_array(design.factors, design.strength)?
            .with_forced_zero(force_zero.iter().copied())?,
    )
}

/// Reads a basis file whose width determines the number of factors.
fn load_basis(path: &Path) -> std::result::Result<HilbertBasis, Failure> {
    let text = read(path)?;
    let (width, elements) = io::read_elements(&text)?;
    let sys = ConeSystem::new(Vec::new(), width)?;
    Ok(HilbertBasis::from_elements(sys, elements)?)
}

fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Matrix { design, out } => {
            let m = build_model_matrix(design.factors, design.strength)?;
            let report = verify_matrix(&m);
            if !report.passed() {
                for f in &report.failures {
                    eprintln!("matrix check: {f}");
                }
                return Err(Failure::Check(report.failures.len()));
            }
            emit(out, &io::write_matrix(&m.to_int_matrix()))?;
            Ok(format!(
                "rows={} cols={} rank={}",
                m.rows(),
                m.cols(),
                report.rank
            ))
        }
        Command::Hilbert {
            design,
            force_zero,
            budget,
            time_limit,
            algorithm,
            out,
        } => {
            let sys = system(*design, force_zero)?;
            let mut b = Budget::default();
            if let Some(k) = budget {
                b.max_insertions = *k;
            }
            b.time_limit = time_limit.map(Duration::from_secs_f64);
            let alg = match algorithm {
                AlgorithmArg::ProjectAndLift => Algorithm::ProjectAndLift,
                AlgorithmArg::Completion => Algorithm::Completion,
            };
            let start = Instant::now();
            let basis = hilbert_basis(&sys, alg, &b)?;
            let secs = start.elapsed().as_secs_f64();
            eprintln!("{} elements in {secs:.3}s", basis.len());
            emit(out, &io::write_basis(&basis))?;
            Ok(format!(
                "elements={} algorithm={alg} seconds={secs:.3}",
                basis.len()
            ))
        }
        Command::Check {
            basis,
            design,
            force_zero,
        } => {
            let sys = system(*design, force_zero)?;
            let text = read(basis)?;
            let basis = io::read_basis(&text, sys)?;
            let mut problems = basis.verify();
            for (i, e) in basis.elements().iter().enumerate() {
                if !is_oa_projection(e, design.strength) {
                    problems.push(format!(
                        "element {i} is not balanced on {} factors",
                        design.strength
                    ));
                }
            }
            if io::write_basis(&basis) != text {
                problems.push("file is not in canonical form".into());
            }
            for p in &problems {
                println!("FAIL {p}");
            }
            if problems.is_empty() {
                Ok(format!("elements={} problems=0", basis.len()))
            } else {
                Err(Failure::Check(problems.len()))
            }
        }
        Command::Classify { basis, out } => {
            let basis = load_basis(basis)?;
            let mut text =
                String::from("index\tsupport\ttotal\tmaxrep\tindicator\tb0\tresolution\tregular\n");
            for (i, e) in basis.elements().iter().enumerate() {
                let c = classify(e);
                let regular = match c.is_regular {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "-",
                };
                text.push_str(&format!(
                    "{i}\t{}\t{}\t{}\t{}\t{}\t{}\t{regular}\n",
                    c.support,
                    c.total,
                    c.maxrep,
                    if c.is_indicator { "yes" } else { "no" },
                    c.b0,
                    c.resolution
                ));
            }
            emit(out, &text)?;
            Ok(format!("elements={}", basis.len()))
        }
        Command::Summarize { basis, format, out } => {
            let basis = load_basis(basis)?;
            let s = summarize(&basis);
            let text = match format {
                SummaryFormat::Table => io::render_summary(&s),
                SummaryFormat::Tsv => io::write_summary_tsv(&s),
                SummaryFormat::Json => io::write_summary_json(&s),
            };
            emit(out, &text)?;
            Ok(format!("elements={}", s.elements))
        }
        Command::Enumerate {
            design,
            quotient_complement,
            max_support,
            basis,
            out,
        } => {
            let options = EnumerationOptions {
                quotient_complement: *quotient_complement,
                max_support: *max_support,
            };
            let found = enumerate_indicators(design.factors, design.strength, &options)?;
            let mut hist = std::collections::BTreeMap::<usize, (usize, usize)>::new();
            for r in &found {
                let c = classify(r);
                let slot = hist.entry(c.support).or_default();
                slot.0 += 1;
                if c.is_regular == Some(true) {
                    slot.1 += 1;
                }
            }
            println!("support\tcount\tregular");
            for (s, (count, regular)) in &hist {
                println!("{s}\t{count}\t{regular}");
            }
            let mut summary = format!("fractions={}", found.len());
            if let Some(path) = basis {
                let sys = system(*design, &[])?;
                let b = io::read_basis(&read(path)?, sys)?;
                let x = cross_check_basis(&found, &b)?;
                println!(
                    "basis_elements={} disjoint_unions={} undecomposed={} disjoint_pairs={}",
                    x.basis_elements(),
                    x.disjoint_unions(),
                    x.undecomposed(),
                    x.disjoint_pairs
                );
                summary.push_str(&format!(" undecomposed={}", x.undecomposed()));
                if x.undecomposed() > 0 {
                    return Err(Failure::Check(x.undecomposed()));
                }
            }
            if out.is_some() {
                emit(out, &io::write_fractions(1 << design.factors, &found))?;
            }
            Ok(summary)
        }
        Command::Oracle {
            design,
            max_total,
            force_zero,
            node_cap,
            out,
        } => {
            let sys = system(*design, force_zero)?;
            let found = brute_force_minimal_solutions(&sys, *max_total, *node_cap)?;
            emit(out, &io::write_fractions(sys.width(), &found))?;
            Ok(format!("solutions={}", found.len()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let name = cli.command.name();
    match run(&cli.command) {
        Ok(fields) => {
            println!("result command={name} status=ok {fields}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            println!("result command={name} status=error code={}", f.code());
            ExitCode::from(f.code())
        }
    }
}
