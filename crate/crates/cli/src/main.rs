use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use enosr::csvio::{read_points, read_samples, write_convergence, write_xy};
use enosr::harness::{DEFAULT_N0, DEFAULT_SEED, DEFAULT_SIGMA};
use enosr::{build_interpolant, convergence_study, f_d, Grid, Mode, Samples};

/// ENO and ENO-SR interpolation of point values with corner detection.
#[derive(Debug, Parser)]
#[command(name = "enosr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label intervals and locate the corner in a samples file (`x,f`).
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// True corner location; prints the detection error when given.
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Evaluate an interpolant of a samples file and write `x,y`.
    Interp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, value_enum, default_value_t = CliMode::Enosr)]
        mode: CliMode,
        /// File of evaluation points with header `x`.
        #[arg(long, conflicts_with = "dense", required_unless_present = "dense")]
        eval_at: Option<PathBuf>,
        /// Number of equispaced evaluation points spanning the grid.
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        dense: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement study on f_d; writes `d,k,h_max,e_k,p_k,E_k,P_k`.
    Converge {
        #[arg(long, value_enum, default_value_t = TestFunction::Fd)]
        function: TestFunction,
        /// Corner strengths, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 7)]
        levels: usize,
        /// Intervals in the base grid.
        #[arg(long, default_value_t = DEFAULT_N0)]
        n0: usize,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = CliMode::Enosr)]
        mode: CliMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliMode {
    Lagrange,
    Eno,
    Enosr,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Lagrange => Mode::FixedLagrange,
            CliMode::Eno => Mode::Eno,
            CliMode::Enosr => Mode::EnoSr,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TestFunction {
    Fd,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Detect { input, m, mu } => detect(&input, m, mu),
        Command::Interp { input, m, mode, eval_at, dense, out } => {
            let samples = load_samples(&input)?;
            let interp = build_interpolant(&samples, m, mode.into())?;
            let xs = match (eval_at, dense) {
                (Some(path), _) => {
                    read_points(BufReader::new(open(&path)?)).with_context(|| format!("reading {}", path.display()))?
                }
                (None, Some(n)) => dense_points(samples.grid(), n as usize),
                (None, None) => unreachable!("clap requires one of --eval-at and --dense"),
            };
            let ys = xs.iter().map(|&x| interp.eval(x)).collect::<enosr::Result<Vec<_>>>()?;
            write_xy(output(out.as_deref())?, xs.into_iter().zip(ys))?;
            Ok(())
        }
        Command::Converge { function: TestFunction::Fd, d, m, levels, n0, sigma, seed, mode, out } => {
            if levels == 0 {
                bail!("--levels must be at least 1");
            }
            let base = Grid::generate_quasi_uniform(n0, (-1.0, 1.0), sigma, seed)?;
            let studies = d
                .iter()
                .map(|&d| Ok((d, convergence_study(&f_d(d), &base, levels, m, mode.into())?)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            write_convergence(output(out.as_deref())?, &studies)?;
            Ok(())
        }
    }
}

fn detect(input: &Path, m: usize, mu: Option<f64>) -> anyhow::Result<()> {
    let samples = load_samples(input)?;
    let interp = build_interpolant(&samples, m, Mode::EnoSr)?;
    let psi = interp.locate_corner()?;
    let labels = interp.labels().expect("ENO-SR interpolants carry labels");
    println!("labels: {labels}");
    match psi {
        Some(psi) => println!("psi: {psi}"),
        None => println!("psi: none"),
    }
    if let Some(mu) = mu {
        match psi {
            Some(psi) => println!("e: {:e}", (mu - psi).abs()),
            None => println!("e: none"),
        }
    }
    Ok(())
}

fn open(path: &Path) -> anyhow::Result<File> {
    File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

fn load_samples(path: &Path) -> anyhow::Result<Samples> {
    read_samples(BufReader::new(open(path)?)).with_context(|| format!("reading {}", path.display()))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// `n` equispaced points from the first to the last node, endpoints exact.
fn dense_points(grid: &Grid, n: usize) -> Vec<f64> {
    let (a, b) = (grid.lo(), grid.hi());
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}
