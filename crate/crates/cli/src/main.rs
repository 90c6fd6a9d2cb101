//! `mpos`: validate digit systems, run transforms, verify the identity
//! suite, and render tiles.
//!
//! Exit codes: 0 on success, 1 when the verification suite reports a failed
//! identity, 2 on usage or configuration errors. Configuration errors print
//! a stable machine-readable name (`error: NotExpanding: ...`).

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use mpos_core::{
    fourier_step, inverse_fourier_step, pgm_bytes, poisson_check, raster, raster_cells, run_suite,
    tile_points, vc_fast, vc_forward_naive, vc_inverse_naive, Direction, Error as CoreError,
    MSystem, Side, Space, SpectrumVector, StepFunction, SystemConfig, DEFAULT_POINT_BUDGET,
};

const BUDGET_ENV: &str = "MPOS_POINT_BUDGET";

#[derive(Parser)]
#[command(
    name = "mpos",
    about = "Exact harmonic analysis on matrix digit systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a system definition and report its validation outcome.
    Validate {
        /// JSON config with fields matrix, digits?, dual_digits?, label?
        config: PathBuf,
    },
    /// Apply the depth-n transform to a coefficient vector (CSV: re,im per line).
    Vc {
        config: PathBuf,
        /// Transform depth n; the input must hold m^n coefficients.
        #[arg(short = 'n', long)]
        scale: u32,
        #[arg(long, value_enum, default_value_t = DirectionArg::Forward)]
        direction: DirectionArg,
        /// Use the quadratic reference path instead of the fast butterflies.
        #[arg(long)]
        naive: bool,
        /// Input file (defaults to stdin).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output file (defaults to stdout).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fourier-transform a step-function file (header `space,n,p`, then
    /// m^(n+p) lines `re,im`).
    Fourier {
        config: PathBuf,
        /// Apply the inverse transform (expects a dual-side input).
        #[arg(long)]
        inverse: bool,
        /// Also print both sides of the grid-sum identity for the input.
        #[arg(long)]
        poisson: bool,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the identity verification suite against a system.
    Verify {
        config: PathBuf,
        /// 1 = depths to 3, 2 = depths to 6.
        #[arg(long, default_value_t = 1)]
        level: u8,
    },
    /// Render the depth-n anchor cloud of the tile.
    Tile {
        config: PathBuf,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        /// Color raster pixels by the cell index at this coarser depth.
        #[arg(long)]
        cells: Option<u32>,
        /// Also run the Monte Carlo area diagnostic with this many samples.
        #[arg(long)]
        measure_samples: Option<u64>,
        /// Seed for the Monte Carlo sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum DirectionArg {
    Forward,
    /// Exact inverse of `forward` (the synthesis sum scaled so that
    /// forward-then-inverse reproduces the input).
    Inverse,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm,
    PgmAscii,
}

enum Failure {
    /// Usage or configuration problem; exit 2 with a machine-readable name.
    Config(String),
    /// An identity failed during verification; exit 1.
    Identity(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Config(format!("{}: {}", e.code(), e))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("Io: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(name)) => {
            eprintln!("error: IdentityFailure: {name}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn point_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_POINT_BUDGET)
}

fn load_system(config: &Path) -> Result<MSystem, Failure> {
    let parsed = SystemConfig::from_path(config)?
        .map_err(|e| Failure::Config(format!("ConfigParse: {e}")))?;
    Ok(parsed.build()?)
}

fn check_budget(m: u64, depth: u32) -> Result<(), Failure> {
    let budget = point_budget();
    let requested = (m as u128).checked_pow(depth).unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(CoreError::DepthTooLarge { requested, budget: budget as u128 }.into());
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { config } => cmd_validate(&config),
        Command::Vc { config, scale, direction, naive, input, output } => {
            cmd_vc(&config, scale, direction, naive, input.as_deref(), output.as_deref())
        }
        Command::Fourier { config, inverse, poisson, input, output } => {
            cmd_fourier(&config, inverse, poisson, input.as_deref(), output.as_deref())
        }
        Command::Verify { config, level } => cmd_verify(&config, level),
        Command::Tile { config, depth, format, output, width, height, cells, measure_samples, seed } => {
            cmd_tile(&config, depth, format, output.as_deref(), width, height, cells, measure_samples, seed)
        }
    }
}

fn cmd_validate(config: &Path) -> Result<(), Failure> {
    let sys = load_system(config)?;
    if let Some(label) = sys.label() {
        println!("label: {label}");
    }
    println!("dimension: {}", sys.dim());
    println!("m: {}", sys.m());
    println!("det sign: {:+}", sys.matrix().sign());
    println!(
        "dilation certificate: min eigenvalue modulus {:.6}",
        sys.matrix().min_eigenvalue_modulus()
    );
    for (name, set) in [("digits", sys.digits()), ("dual digits", sys.dual_digits())] {
        let rendered: Vec<String> = set
            .digits()
            .iter()
            .map(|d| {
                let inner: Vec<String> = d.iter().map(|c| c.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect();
        println!("{name}: {}", rendered.join(" "));
        let m = set.m();
        println!("{name} addition table:");
        for i in 0..m {
            let row: Vec<String> = (0..m).map(|j| set.add(i, j).to_string()).collect();
            println!("  {}", row.join(" "));
        }
    }
    println!("valid");
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn parse_complex_line(line: &str, lineno: usize) -> Result<Complex64, Failure> {
    let mut parts = line.split(',');
    let bad = || Failure::Config(format!("ValueParse: line {lineno} is not `re,im`"));
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn parse_complex_lines(text: &str, skip: usize) -> Result<Vec<Complex64>, Failure> {
    text.lines()
        .enumerate()
        .skip(skip)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_complex_line(l, i + 1))
        .collect()
}

fn format_complex_lines(values: &[Complex64]) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&format!("{},{}\n", v.re, v.im));
    }
    out
}

fn cmd_vc(
    config: &Path,
    scale: u32,
    direction: DirectionArg,
    naive: bool,
    input: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let sys = load_system(config)?;
    check_budget(sys.m(), scale)?;
    let values = parse_complex_lines(&read_input(input)?, 0)?;
    let result = match direction {
        DirectionArg::Forward => {
            let sv = SpectrumVector::new(&sys, Side::Time, scale, values)?;
            if naive {
                vc_forward_naive(&sys, &sv)?
            } else {
                vc_fast(&sys, &sv, Direction::Forward)?
            }
            .into_values()
        }
        DirectionArg::Inverse => {
            let sv = SpectrumVector::new(&sys, Side::Frequency, scale, values)?;
            let synthesized = if naive {
                vc_inverse_naive(&sys, &sv)?
            } else {
                vc_fast(&sys, &sv, Direction::Inverse)?
            };
            // undo the symmetric m^-n factor so that forward-then-inverse
            // is the identity
            let undo = (sys.m() as f64).powi(scale as i32);
            synthesized.into_values().into_iter().map(|v| v * undo).collect()
        }
    };
    write_output(output, format_complex_lines(&result).as_bytes())
}

fn parse_step_file(sys: &MSystem, text: &str) -> Result<StepFunction, Failure> {
    let header = text
        .lines()
        .next()
        .ok_or_else(|| Failure::Config("ValueParse: empty step-function file".into()))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(Failure::Config("ValueParse: header must be `space,n,p`".into()));
    }
    let space = match fields[0] {
        "X" => Space::Primal,
        "X*" => Space::Dual,
        other => {
            return Err(Failure::Config(format!("ValueParse: unknown space `{other}`")));
        }
    };
    let bad = |what: &str| Failure::Config(format!("ValueParse: bad {what} in header"));
    let n: i64 = fields[1].parse().map_err(|_| bad("value scale"))?;
    let p: i64 = fields[2].parse().map_err(|_| bad("support scale"))?;
    if let Ok(depth) = u32::try_from(n + p) {
        check_budget(sys.m(), depth)?;
    }
    let coeffs = parse_complex_lines(text, 1)?;
    Ok(StepFunction::new(sys, space, n, p, coeffs)?)
}

fn format_step_file(f: &StepFunction) -> String {
    let space = match f.space() {
        Space::Primal => "X",
        Space::Dual => "X*",
    };
    let mut out = format!("{space},{},{}\n", f.value_scale(), f.support_scale());
    out.push_str(&format_complex_lines(f.coeffs()));
    out
}

fn cmd_fourier(
    config: &Path,
    inverse: bool,
    poisson: bool,
    input: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let sys = load_system(config)?;
    let f = parse_step_file(&sys, &read_input(input)?)?;
    if poisson {
        let (lhs, rhs) = poisson_check(&sys, &f)?;
        println!(
            "poisson: lhs={},{} rhs={},{} gap={:.3e}",
            lhs.re,
            lhs.im,
            rhs.re,
            rhs.im,
            (lhs - rhs).norm()
        );
    }
    let transformed = if inverse { inverse_fourier_step(&sys, &f)? } else { fourier_step(&sys, &f)? };
    write_output(output, format_step_file(&transformed).as_bytes())
}

fn cmd_verify(config: &Path, level: u8) -> Result<(), Failure> {
    let sys = load_system(config)?;
    let outcomes = run_suite(&sys, level);
    let mut first_failure: Option<String> = None;
    for outcome in &outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", outcome.name, outcome.detail);
        if !outcome.passed && first_failure.is_none() {
            first_failure = Some(outcome.name.to_string());
        }
    }
    match first_failure {
        Some(name) => Err(Failure::Identity(name)),
        None => Ok(()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_tile(
    config: &Path,
    depth: u32,
    format: FormatArg,
    output: Option<&Path>,
    width: usize,
    height: usize,
    cells: Option<u32>,
    measure_samples: Option<u64>,
    seed: u64,
) -> Result<(), Failure> {
    let sys = load_system(config)?;
    let budget = point_budget();
    let cloud = tile_points(&sys, depth, budget)?;
    let coincident = cloud.coincident_count();
    if coincident > 0 {
        eprintln!("warning: {coincident} anchors coincide; the digit data is degenerate");
    }
    if let Some(samples) = measure_samples {
        let (estimate, stderr) = mpos_core::measure_estimate(&sys, depth, samples, seed, budget)?;
        println!("measure: estimate={estimate} stderr={stderr}");
    }
    let bytes = match format {
        FormatArg::Csv => cloud.to_csv().into_bytes(),
        FormatArg::Pgm | FormatArg::PgmAscii => {
            let grid = match cells {
                Some(coarse) => raster_cells(&cloud, width, height, coarse, sys.m())?,
                None => raster(&cloud, width, height)?,
            };
            pgm_bytes(&grid, matches!(format, FormatArg::Pgm))
        }
    };
    write_output(output, &bytes)
}
