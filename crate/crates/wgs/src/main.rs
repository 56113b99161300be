use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wgs::error::{WgsError, WgsResult};
use wgs::io::{self, FusionRecord, FusionReport, OutcomeRecord, ProtocolReport, SampleCounts, StateSummary};
use wgs::scan;
use wgs::verify::{self, VerifyOptions};
use wgs_core::analysis::entanglement_report;
use wgs_core::optics::OutcomeKind;
use wgs_core::protocols::{self, sample_outcome, ProtocolOutcome, Weighted};
use wgs_core::state::ZERO_OUTCOME_CUTOFF;

/// Weighted graph states and their fusion with linear optics.
///
/// All angles are in radians. Exit codes: 0 ok, 1 verification failure,
/// 2 invalid input, 3 numerical abort. WGS_THREADS caps parallelism.
#[derive(Parser, Debug)]
#[command(name = "wgs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the state of a graph file and print a summary.
    Build {
        #[arg(long)]
        graph: PathBuf,
        /// Include the amplitude vector.
        #[arg(long)]
        amplitudes: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a fusion protocol and report every outcome.
    Fuse {
        #[command(subcommand)]
        kind: FuseKind,
    },
    /// Sweep a closed form against simulation and write CSV.
    Scan {
        #[command(subcommand)]
        quantity: ScanKind,
    },
    /// Run the verification suite.
    Verify {
        /// Reduced ensembles and a coarser appendix grid.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 20240)]
        seed: u64,
        /// Replace every numeric tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Run only these checks (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
        /// Write the full results as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add an offset to the closed forms (self-test of the suite).
        #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb: f64,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Draw this many outcomes (requires --seed).
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Include residual amplitudes in the report.
    #[arg(long)]
    amplitudes: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Pair {
    /// Graph file holding vertex `a`.
    #[arg(long)]
    left: PathBuf,
    /// Graph file holding vertex `b`.
    #[arg(long)]
    right: PathBuf,
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

#[derive(Subcommand, Debug)]
enum FuseKind {
    /// Type-I fusion of two chain endpoints.
    I {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Type-II fusion of a logical-pair member with a vertex.
    Ii {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Generalized fusion through an arbitrary network.
    Gen {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        unitary: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Logical-qubit creation by measuring an interior vertex.
    Logical {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        vertex: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct ScanOut {
    /// Grid points per axis.
    #[arg(long)]
    points: Option<usize>,
    /// Exit with status 1 if any residual exceeds this.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ScanKind {
    /// Logical-qubit success probability over χ ∈ (0, π].
    LogicalProb(ScanOut),
    /// Type-II failure probabilities over (χ_bf, χ_bf').
    FailureSplit(ScanOut),
    /// Relevant-outcome det ρ and entropy, closed form against a dense oracle.
    DetEntropy {
        /// Network to use; a random balanced network when absent.
        #[arg(long)]
        unitary: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        grid: ScanOut,
    },
    /// Largest reachable pair weight from a weighted 3-chain.
    GhzRange {
        #[arg(long, requires = "chi2", allow_negative_numbers = true)]
        chi1: Option<f64>,
        #[arg(long, requires = "chi1", allow_negative_numbers = true)]
        chi2: Option<f64>,
        #[command(flatten)]
        grid: ScanOut,
    },
    /// Hyperbola construction for target weights.
    XiSolve(ScanOut),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> WgsResult<ExitCode> {
    match cli.command {
        Command::Build { graph, amplitudes, out } => {
            let g = io::read_graph(&graph)?;
            warn(&g.warnings);
            io::emit(out.as_deref(), &io::to_json(&StateSummary::new(&g, amplitudes)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuse { kind } => fuse(kind).map(|_| ExitCode::SUCCESS),
        Command::Scan { quantity } => scan_cmd(quantity),
        Command::Verify { quick, seed, tol, only, out, perturb } => {
            if let Some(t) = tol {
                positive("--tol", t)?;
            }
            let opts = VerifyOptions { quick, seed, tol, perturb, only };
            let results = verify::run(&opts);
            for r in &results {
                println!("{}", r.line());
            }
            if let Some(p) = out {
                io::emit(Some(&p), &io::to_json(&results))?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} checks passed", results.len() - failed, results.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn positive(flag: &str, v: f64) -> WgsResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(WgsError::Invalid(format!("{flag} must be positive, got {v}")))
    }
}

/// Sample `shots` outcomes, labelled by `name`, if sampling was requested.
fn samples<T: Weighted>(c: &Common, outcomes: &[T], name: impl Fn(&T) -> String) -> WgsResult<Option<SampleCounts>> {
    let Some(shots) = c.sample else { return Ok(None) };
    let seed = c.seed.ok_or_else(|| WgsError::Invalid("--sample needs --seed".into()))?;
    let mut rng = wgs::random::rng(seed);
    let mut counts: Vec<(String, usize)> = outcomes.iter().map(|o| (name(o), 0)).collect();
    for _ in 0..shots {
        if let Some(o) = sample_outcome(outcomes, &mut rng) {
            let k = outcomes.iter().position(|x| std::ptr::eq(x, o)).expect("sampled from the list");
            counts[k].1 += 1;
        }
    }
    Ok(Some(SampleCounts { seed, shots, counts }))
}

fn protocol_report(name: &'static str, out: &[ProtocolOutcome], c: &Common, warnings: Vec<String>) -> WgsResult<()> {
    let report = ProtocolReport {
        protocol: name,
        total_probability: out.iter().map(|o| o.probability).sum(),
        outcomes: out.iter().map(|o| OutcomeRecord::new(o, c.amplitudes)).collect(),
        samples: samples(c, out, |o| o.label.to_string())?,
        warnings,
    };
    io::emit(c.out.as_deref(), &io::to_json(&report))
}

fn load_pair(p: &Pair) -> WgsResult<(io::LoadedGraph, io::LoadedGraph, Vec<String>)> {
    let (l, r) = (io::read_graph(&p.left)?, io::read_graph(&p.right)?);
    let warnings: Vec<String> = l.warnings.iter().chain(&r.warnings).cloned().collect();
    warn(&warnings);
    Ok((l, r, warnings))
}

fn fuse(kind: FuseKind) -> WgsResult<()> {
    match kind {
        FuseKind::I { pair, common } => {
            let (l, r, w) = load_pair(&pair)?;
            let out = protocols::fuse_type_i(&l.chain, &pair.a, &r.chain, &pair.b)?;
            protocol_report("type-i", &out, &common, w)
        }
        FuseKind::Ii { pair, common } => {
            let (l, r, w) = load_pair(&pair)?;
            let out = protocols::fuse_type_ii(&l.chain, &pair.a, &r.chain, &pair.b)?;
            protocol_report("type-ii", &out, &common, w)
        }
        FuseKind::Logical { graph, vertex, common } => {
            let g = io::read_graph(&graph)?;
            warn(&g.warnings);
            let out = protocols::create_logical_qubit(&g.chain, &vertex)?;
            protocol_report("logical", &out, &common, g.warnings)
        }
        FuseKind::Gen { pair, unitary, common } => {
            let (l, r, warnings) = load_pair(&pair)?;
            let u = io::read_unitary(&unitary)?;
            let gen = protocols::fuse_generalized(&l.chain, &pair.a, &r.chain, &pair.b, &u)?;
            let z = gen.context.z();
            let live: Vec<_> = gen.outcomes.iter().filter(|o| o.probability >= ZERO_OUTCOME_CUTOFF).cloned().collect();
            let outcomes = live
                .iter()
                .map(|o| {
                    // |z| → 1 leaves no entanglement measure to report.
                    let rep = (o.kind == OutcomeKind::Relevant).then(|| entanglement_report(&o.m_matrix, z).ok()).flatten();
                    FusionRecord::new(o, rep.as_ref())
                })
                .collect();
            let report = FusionReport {
                protocol: "generalized",
                z: [z.re, z.im],
                register: gen.register.clone(),
                relevant_probability: live.iter().filter(|o| o.kind == OutcomeKind::Relevant).map(|o| o.probability).sum(),
                outcomes,
                samples: samples(&common, &live, |o| format!("{},{}", o.pattern.0, o.pattern.1))?,
                warnings,
            };
            io::emit(common.out.as_deref(), &io::to_json(&report))
        }
    }
}

fn points(g: &ScanOut, default: usize) -> WgsResult<usize> {
    if let Some(t) = g.tol {
        positive("--tol", t)?;
    }
    match g.points.unwrap_or(default) {
        0 => Err(WgsError::Invalid("--points must be at least 1".into())),
        n => Ok(n),
    }
}

/// Write the CSV and compare the largest residual with `--tol`.
fn finish_scan<T: serde::Serialize>(g: &ScanOut, rows: &[T], residual: impl Fn(&T) -> f64) -> WgsResult<ExitCode> {
    io::emit(g.out.as_deref(), scan::to_csv(rows)?.trim_end())?;
    let worst = rows.iter().map(&residual).fold(0.0f64, |a, r| if r.is_nan() { f64::INFINITY } else { a.max(r) });
    eprintln!("{} rows, max residual {worst:.3e}", rows.len());
    Ok(match g.tol {
        Some(t) if worst > t => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn scan_cmd(q: ScanKind) -> WgsResult<ExitCode> {
    match q {
        ScanKind::LogicalProb(g) => {
            let rows = scan::logical_prob(&scan::half_grid(points(&g, 100)?))?;
            finish_scan(&g, &rows, |r| r.residual)
        }
        ScanKind::FailureSplit(g) => {
            let rows = scan::failure_split(&scan::weight_grid(points(&g, 24)?))?;
            finish_scan(&g, &rows, |r| r.residual)
        }
        ScanKind::DetEntropy { unitary, seed, grid } => {
            let n = points(&grid, 12)?;
            let u = match unitary {
                Some(p) => io::read_unitary(Path::new(&p))?,
                None => wgs::random::balanced(&mut wgs::random::rng(seed)),
            };
            let rows = scan::det_entropy(&u, &scan::weight_grid(n))?;
            finish_scan(&grid, &rows, |r| r.residual)
        }
        ScanKind::GhzRange { chi1, chi2, grid } => {
            let pts = match (chi1, chi2) {
                (Some(a), Some(b)) => vec![(a, b)],
                _ => {
                    let w = scan::weight_grid(points(&grid, 24)?);
                    scan::grid_pairs(&w, &w)
                }
            };
            let rows = scan::ghz_range(&pts)?;
            finish_scan(&grid, &rows, |r| r.residual)
        }
        ScanKind::XiSolve(g) => {
            let w = scan::weight_grid(points(&g, 12)?);
            let rows = scan::xi_solve(&scan::grid_pairs(&w, &w))?;
            finish_scan(&g, &rows, |r| r.residual)
        }
    }
}
