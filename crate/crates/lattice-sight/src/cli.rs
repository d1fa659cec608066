//! The `lattice-sight` command line.
//!
//! Exit status is 0 on success, 1 when the library rejects the request and
//! 2 when the arguments do not parse.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lattice_sight_core::{
    construct_forest, ggcd, is_b_visible, sight_coefficient, verify_forest, zeta_int, BigUint,
    DensityReport, Exponent, Forest, Method, Point, PrimeMatrix, SieveConfig,
};

use crate::formats::{
    anchors_csv, density_csv, read_prime_matrix, ConstructionRecord, DensityRecord, ForestRecord,
    SearchRecord, VerificationRecord, WitnessGridRecord, ZetaRecord,
};
use crate::render::{render_grid, RenderFormat, RenderSpec};
use crate::{parallel, AppError};

#[derive(Debug, Parser)]
#[command(
    name = "lattice-sight",
    version,
    about = "Generalized lattice-point visibility from the origin"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print ggcd_b(r, s) = max{k : k | r and k^b | s}.
    Ggcd(PointArgs),
    /// Print whether (r, s) is b-visible from the origin.
    Visible(PointArgs),
    /// Print the reduced coefficient a of the sight curve y = a·x^b through (r, s).
    Coeff(PointArgs),
    /// Count b-invisible points in [1,N]² and compare with 1 − 1/ζ(b+1).
    Density(DensityArgs),
    /// Density reports for several exponents over the same grid.
    Table(TableArgs),
    /// Evaluate ζ(s) for an integer s ≥ 2.
    Zeta(ZetaArgs),
    /// Build, check or search for rectangular b-invisible forests.
    #[command(subcommand)]
    Forest(ForestCommand),
    /// Draw the b-invisible points of [1,N]² as plain PBM or SVG.
    Render(RenderArgs),
}

#[derive(Debug, Subcommand)]
pub enum ForestCommand {
    /// Construct a forest from a prime matrix by the Chinese remainder theorem.
    Construct(ConstructArgs),
    /// Check that the block anchored at (r, s) is b-invisible and print witnesses.
    Verify(VerifyArgs),
    /// Exhaustively find the forest nearest the origin within the given bounds.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct OutputArgs {
    /// Emit CSV instead of JSON.
    #[arg(long, conflicts_with = "plain")]
    pub csv: bool,
    /// Emit human-readable text instead of JSON.
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    #[arg(value_parser = parse_positive)]
    pub r: BigUint,
    #[arg(value_parser = parse_positive)]
    pub s: BigUint,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    /// Grid size N.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value = "brute", value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated exponents.
    #[arg(long, value_parser = parse_exponent, value_delimiter = ',', default_value = "1,2,3,4")]
    pub b: Vec<Exponent>,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value = "brute", value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RunArgs {
    /// Worker threads; never changes the result.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    /// Largest grid the sieve may allocate, in cells.
    #[arg(long, default_value_t = SieveConfig::default().max_cells)]
    pub max_cells: u64,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    pub s: u32,
    #[arg(long, default_value_t = lattice_sight_core::zeta::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ShapeArgs {
    /// Forest width (x-extent). A "2×3" forest in row×column notation has 3 columns.
    #[arg(long, alias = "n", value_parser = clap::value_parser!(u64).range(1..))]
    pub cols: Option<u64>,
    /// Forest height (y-extent).
    #[arg(long, alias = "m", value_parser = clap::value_parser!(u64).range(1..))]
    pub rows: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// Prime matrix file: one row per line, top row first.
    #[arg(long)]
    pub primes: Option<PathBuf>,
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(value_parser = parse_positive)]
    pub r: BigUint,
    #[arg(value_parser = parse_positive)]
    pub s: BigUint,
    #[arg(long)]
    pub plain: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub rmax: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub smax: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, value_parser = parse_exponent)]
    pub b: Exponent,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(long, default_value = "pbm", value_parser = parse_format)]
    pub format: RenderFormat,
    /// Draw visible points black instead of invisible ones.
    #[arg(long)]
    pub invert: bool,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    let b: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Exponent::new(b).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> Result<BigUint, String> {
    let n: BigUint = s
        .parse()
        .map_err(|_| format!("`{s}` is not a natural number"))?;
    if n == BigUint::ZERO {
        return Err("coordinates must be at least 1".into());
    }
    Ok(n)
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
        .map_err(|e: lattice_sight_core::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<RenderFormat, String> {
    s.parse().map_err(|e: AppError| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            use clap::CommandFactory;
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            1
        }
    }
}

fn threads(t: Option<u64>) -> Option<usize> {
    t.map(|t| t as usize)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), AppError> {
    match command {
        Command::Ggcd(p) => {
            writeln!(out, "{}", ggcd(p.b, &p.r, &p.s)?)?;
        }
        Command::Visible(p) => {
            writeln!(out, "{}", is_b_visible(p.b, &Point::new(p.r, p.s)?))?;
        }
        Command::Coeff(p) => {
            let (num, den) = sight_coefficient(p.b, &Point::new(p.r, p.s)?);
            writeln!(out, "{num}/{den}")?;
        }
        Command::Density(args) => {
            let pool = parallel::pool(threads(args.run.threads))?;
            let config = SieveConfig {
                max_cells: args.run.max_cells,
            };
            let report = parallel::density_report(&pool, args.b, args.n, args.method, &config)?;
            write_reports(out, std::slice::from_ref(&report), args.output, false)?;
        }
        Command::Table(args) => {
            let pool = parallel::pool(threads(args.run.threads))?;
            let config = SieveConfig {
                max_cells: args.run.max_cells,
            };
            let reports = args
                .b
                .iter()
                .map(|&b| parallel::density_report(&pool, b, args.n, args.method, &config))
                .collect::<Result<Vec<_>, _>>()?;
            write_reports(out, &reports, args.output, true)?;
        }
        Command::Zeta(args) => {
            let z = zeta_int(args.s, args.tol)?;
            if args.output.plain {
                writeln!(out, "{:.15}", z.value)?;
            } else if args.output.csv {
                writeln!(
                    out,
                    "s,value,abs_error_bound\n{},{},{}",
                    z.s, z.value, z.abs_error_bound
                )?;
            } else {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&ZetaRecord::from(&z))?
                )?;
            }
        }
        Command::Forest(ForestCommand::Construct(args)) => construct(args, out)?,
        Command::Forest(ForestCommand::Verify(args)) => {
            let (n, m) = shape(args.shape)?;
            let forest = Forest::at(args.b, Point::new(args.r, args.s)?, n, m)?;
            let witnesses = verify_forest(&forest)?;
            if args.plain {
                write_witnesses(out, &WitnessGridRecord::from(&witnesses))?;
            } else {
                let record = VerificationRecord {
                    forest: ForestRecord::from(&forest),
                    witnesses: WitnessGridRecord::from(&witnesses),
                };
                writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
            }
        }
        Command::Forest(ForestCommand::Search(args)) => {
            let (n, m) = shape(args.shape)?;
            let pool = parallel::pool(threads(args.threads))?;
            let found = parallel::find_nearest_forest(&pool, args.b, n, m, args.rmax, args.smax)?;
            if args.output.csv {
                out.write_all(anchors_csv(&found)?.as_bytes())?;
            } else if args.output.plain {
                for (r, s) in &found.anchors {
                    writeln!(out, "({r}, {s})")?;
                }
            } else {
                let record = SearchRecord::new(&found, args.rmax, args.smax);
                writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
            }
        }
        Command::Render(args) => {
            let pool = parallel::pool(threads(args.run.threads))?;
            let config = SieveConfig {
                max_cells: args.run.max_cells,
            };
            let grid = parallel::sieve_grid(&pool, args.b, args.n, args.n, &config)?;
            let spec = RenderSpec {
                format: args.format,
                n: args.n,
                b: args.b,
                invert: args.invert,
            };
            let bytes = render_grid(&grid, &spec)?;
            match args.out {
                Some(path) => fs::write(path, bytes)?,
                None => out.write_all(&bytes)?,
            }
        }
    }
    Ok(())
}

fn shape(shape: ShapeArgs) -> Result<(usize, usize), AppError> {
    match (shape.cols, shape.rows) {
        (Some(n), Some(m)) => Ok((n as usize, m as usize)),
        _ => Err(lattice_sight_core::Error::InvalidArgument(
            "--cols and --rows are required".into(),
        )
        .into()),
    }
}

fn construct(args: ConstructArgs, out: &mut dyn Write) -> Result<(), AppError> {
    let matrix = match &args.primes {
        Some(path) => {
            let matrix = read_prime_matrix(path)?;
            let given = (
                args.shape.cols.map(|n| n as usize),
                args.shape.rows.map(|m| m as usize),
            );
            if given.0.is_some_and(|n| n != matrix.n()) || given.1.is_some_and(|m| m != matrix.m())
            {
                return Err(lattice_sight_core::Error::DimensionMismatch(format!(
                    "{} has {} columns and {} rows",
                    path.display(),
                    matrix.n(),
                    matrix.m()
                ))
                .into());
            }
            matrix
        }
        None => {
            let (n, m) = shape(args.shape)?;
            PrimeMatrix::smallest(n, m)?
        }
    };
    let forest = construct_forest(&matrix, args.b)?;
    let witnesses = verify_forest(&forest)?;
    let record = ConstructionRecord {
        prime_matrix: matrix.top_rows(),
        forest: ForestRecord::from(&forest),
        witnesses: WitnessGridRecord::from(&witnesses),
    };
    if args.plain {
        writeln!(out, "prime matrix (top row first):")?;
        for row in &record.prime_matrix {
            writeln!(
                out,
                "  {}",
                row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            )?;
        }
        let f = &record.forest;
        writeln!(out, "anchor: ({}, {})", f.anchor.r, f.anchor.s)?;
        if let (Some(rm), Some(sm)) = (&f.r_modulus, &f.s_modulus) {
            writeln!(out, "r modulus: {rm}\ns modulus: {sm}")?;
        }
        write_witnesses(out, &record.witnesses)?;
    } else {
        writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
    }
    Ok(())
}

fn write_witnesses(out: &mut dyn Write, grid: &WitnessGridRecord) -> Result<(), AppError> {
    writeln!(out, "witnesses (top row first):")?;
    for row in grid.cells.iter().rev() {
        let cells: Vec<String> = row
            .iter()
            .map(|w| {
                let factors: Vec<String> = w
                    .factorization
                    .iter()
                    .map(|p| match p.exponent {
                        1 => p.prime.clone(),
                        e => format!("{}^{e}", p.prime),
                    })
                    .collect();
                format!("{} = {}", w.value, factors.join("·"))
            })
            .collect();
        writeln!(out, "  {}", cells.join("   "))?;
    }
    Ok(())
}

fn write_reports(
    out: &mut dyn Write,
    reports: &[DensityReport],
    output: OutputArgs,
    as_array: bool,
) -> Result<(), AppError> {
    if output.csv {
        out.write_all(density_csv(reports)?.as_bytes())?;
    } else if output.plain {
        writeln!(out, "b  zeta(b+1)  1/zeta  1-1/zeta  observed invisible")?;
        for r in reports {
            let zeta = zeta_int(r.b.succ(), lattice_sight_core::zeta::DEFAULT_TOLERANCE)?;
            writeln!(
                out,
                "{:<2} {:<10.3} {:<7.3} {:<9.3} {}/{} ≈ {:.3}",
                r.b.get(),
                zeta.value,
                r.predicted_visible_proportion,
                r.predicted_invisible_proportion,
                r.invisible_count,
                r.total,
                r.observed_invisible_proportion
            )?;
        }
    } else {
        let records: Vec<DensityRecord> = reports.iter().map(DensityRecord::from).collect();
        let json = if as_array {
            serde_json::to_string_pretty(&records)?
        } else {
            serde_json::to_string_pretty(&records[0])?
        };
        writeln!(out, "{json}")?;
    }
    Ok(())
}
