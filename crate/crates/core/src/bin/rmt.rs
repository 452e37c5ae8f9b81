use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rmt_lab::control::{is_controllable, ControlMode};
use rmt_lab::ensembles::{sample_matrix, EnsembleBlock, EnsembleKind, EnsembleSpec, GraphBlock};
use rmt_lab::experiments::{
    emit, gap_cdf_csv, parse_records_json, run_campaign, scatter_csv, ExperimentConfig, OUT_DIR_ENV,
};
use rmt_lab::graph::digraph_report;
use rmt_lab::io::{matrix_to_csv, parse_matrix_csv, parse_real_vector_csv};
use rmt_lab::seed::derive_trial_seed;
use rmt_lab::spectral::{
    charpoly_exact, eigen_decompose, gap_distribution_of, is_squarefree, min_gap, DEFAULT_TOL,
};
use rmt_lab::structure::{parse_vector_csv, structure_report, LcdQuery, ReportOptions};
use rmt_lab::{exact::IntMatrix, Error, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "rmt", version, about = "Random matrix spectra, structure and controllability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a matrix and print it as CSV.
    Gen(GenArgs),
    /// Eigenvalues, residuals and gaps of a CSV matrix.
    Spectrum {
        matrix: PathBuf,
        /// Also decide simplicity exactly (integer matrices only).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Compressibility, LCD and small-ball report for a vector (`re` or `re,im` per line).
    Structure {
        vector: PathBuf,
        #[command(flatten)]
        atom: AtomArgs,
        /// LCD scale parameter L; defaults to the atom's value.
        #[arg(long)]
        lcd_l: Option<f64>,
        /// Small-ball radii to estimate.
        #[arg(long = "levy-radius")]
        levy_radii: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Controllability of (A, b).
    Control {
        matrix: PathBuf,
        vector: PathBuf,
        #[arg(long, default_value = "all")]
        mode: ControlMode,
    },
    /// Connectivity, Perron and outlier report for a 0/1 adjacency matrix.
    Graph {
        matrix: PathBuf,
        /// Edge probability used for the outlier location p·n.
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
    },
    /// Run a campaign file. Exits 1 when an acceptance threshold fails.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Output directory; falls back to the config, then $RMT_OUT_DIR, then ./rmt-out.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot-ready CSV tables.
    #[command(subcommand)]
    Plot(PlotCommand),
}

#[derive(Subcommand)]
enum PlotCommand {
    /// Eigenvalues of a CSV matrix, scaled by 1/√n.
    Scatter {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical CDF of `normalized_delta` from a campaign's records JSON.
    Gaps {
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AtomArgs {
    /// rademacher | gaussian | uniform_pm | centered_bernoulli
    #[arg(long)]
    atom: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    half_width: Option<f64>,
    /// Success probability of a centered Bernoulli atom.
    #[arg(long = "bernoulli-p")]
    bernoulli_p: Option<f64>,
}

impl AtomArgs {
    fn block(&self, n: usize) -> EnsembleBlock {
        EnsembleBlock {
            n,
            atom: self.atom.clone(),
            sigma: self.sigma,
            half_width: self.half_width,
            p: self.bernoulli_p,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Take the ensemble and seed of trial `--trial` from a campaign file.
    #[arg(long, conflicts_with_all = ["n", "atom", "graph_p", "seed"])]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0, requires = "config")]
    trial: u64,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    atom: AtomArgs,
    #[arg(long)]
    zero_diagonal: bool,
    /// Sample a directed Erdős–Rényi adjacency matrix with this edge probability.
    #[arg(long, conflicts_with = "atom")]
    graph_p: Option<f64>,
    #[arg(long, requires = "graph_p")]
    loops: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => stdout(text),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    stdout(&format!("{text}\n"))
}

fn gen(args: &GenArgs) -> Result<()> {
    let (spec, seed) = match &args.config {
        Some(path) => {
            let c = ExperimentConfig::from_path(path)?;
            let seed = derive_trial_seed(c.master_seed, args.trial);
            (c.ensemble, seed)
        }
        None => {
            let n = args.n.ok_or_else(|| Error::Config("gen needs --n or --config".into()))?;
            let mut block = args.atom.block(n);
            if let Some(p) = args.graph_p {
                block.graph = Some(GraphBlock { p, loops: args.loops });
            }
            if args.zero_diagonal {
                block.diagonal = Some(rmt_lab::ensembles::Diagonal::Zero);
            }
            (EnsembleSpec::try_from(block)?, args.seed)
        }
    };
    write_or_print(args.out.as_deref(), &matrix_to_csv(&sample_matrix(&spec, seed)?))
}

#[derive(Serialize)]
struct SpectrumOutput {
    spectrum: rmt_lab::spectral::SpectralRecord,
    gap: Option<rmt_lab::spectral::GapStats>,
    charpoly: Option<rmt_lab::spectral::CharPolyRecord>,
    simple_exact: Option<bool>,
}

fn spectrum(path: &Path, exact: bool, tol: f64) -> Result<()> {
    let a = parse_matrix_csv(&read(path)?)?;
    let spec = eigen_decompose(&a, tol)?;
    let gap = if spec.n() >= 2 { Some(min_gap(&spec)?) } else { None };
    let (charpoly, simple_exact) = if exact {
        let m = IntMatrix::from_f64(&a)
            .ok_or_else(|| Error::Config("--exact needs integer entries".into()))?;
        let p = charpoly_exact(&m)?;
        let simple = is_squarefree(p.as_poly());
        (Some(p.to_record()), Some(simple))
    } else {
        (None, None)
    };
    print_json(&SpectrumOutput {
        spectrum: spec.to_record(),
        gap,
        charpoly,
        simple_exact,
    })
}

fn atom_of(args: &AtomArgs) -> Result<Option<rmt_lab::ensembles::AtomDistribution>> {
    if args.atom.is_none() {
        return Ok(None);
    }
    match EnsembleSpec::try_from(args.block(1))?.kind {
        EnsembleKind::Iid { atom, .. } => Ok(Some(atom)),
        EnsembleKind::Digraph { .. } => unreachable!("atom blocks never produce digraphs"),
    }
}

fn campaign(config: &Path, workers: usize, out: Option<PathBuf>) -> Result<bool> {
    let config = ExperimentConfig::from_path(config)?;
    let dir = out
        .or_else(|| config.output.dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("rmt-out"));
    let run = run_campaign(&config, workers)?;
    let written = emit(&dir, &config, &run, workers)?;
    let s = &run.summary;
    eprintln!(
        "{}: {}/{} passed (95% CI {:.4}..{:.4}), {} errors, {:.2}s",
        s.name,
        s.pass_count,
        s.trial_count,
        s.wilson_interval_95.0,
        s.wilson_interval_95.1,
        s.error_count,
        s.wall_time.unwrap_or(0.0)
    );
    for check in &s.acceptance {
        eprintln!(
            "  {} {}: observed {} required {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.key,
            check.observed,
            check.required
        );
    }
    for path in written {
        stdout(&format!("{}\n", path.display()))?;
    }
    Ok(s.accepted)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => gen(&args)?,
        Command::Spectrum { matrix, exact, tol } => spectrum(&matrix, exact, tol)?,
        Command::Structure {
            vector,
            atom,
            lcd_l,
            levy_radii,
            samples,
            seed,
        } => {
            let z = parse_vector_csv(&read(&vector)?)?;
            let opts = ReportOptions {
                atom: atom_of(&atom)?,
                lcd: lcd_l.map(|l| LcdQuery::with_l(l, z.len())),
                levy_radii,
                mc_samples: samples,
                seed,
                ..Default::default()
            };
            print_json(&structure_report(&z, &opts)?)?
        }
        Command::Control {
            matrix,
            vector,
            mode,
        } => {
            let a = parse_matrix_csv(&read(&matrix)?)?;
            let b = parse_real_vector_csv(&read(&vector)?)?;
            print_json(&is_controllable(&a, &b, mode)?)?
        }
        Command::Graph { matrix, p, delta } => {
            let a = parse_matrix_csv(&read(&matrix)?)?;
            print_json(&digraph_report(&a, p, delta)?)?
        }
        Command::Campaign {
            config,
            workers,
            out,
        } => return campaign(&config, workers, out),
        Command::Plot(PlotCommand::Scatter { matrix, out }) => {
            let a = parse_matrix_csv(&read(&matrix)?)?;
            let values = rmt_lab::spectral::eigenvalues(&a)?;
            write_or_print(out.as_deref(), &scatter_csv(&values))?
        }
        Command::Plot(PlotCommand::Gaps { records, out }) => {
            let file = parse_records_json(&read(&records)?)?;
            let values: Vec<f64> = file
                .records
                .iter()
                .filter_map(|r| r.measures.get("normalized_delta").copied())
                .collect();
            write_or_print(out.as_deref(), &gap_cdf_csv(&gap_distribution_of(&values)?))?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rmt: {e}");
            ExitCode::from(2)
        }
    }
}
