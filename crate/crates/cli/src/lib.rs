//! Command logic for the `supersmooth` binary.

pub mod family;
mod gen;
mod table;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use supersmooth_core::geometry::{validate_cell, Cell};
use supersmooth_core::polyspline::{
    basis_spline_space, default_cap, first_vertex_mismatch, mos_oracle, PiecewisePolynomial, SpaceReport,
    SplineError,
};
use supersmooth_core::GeometryError;

use family::{resolve, FormulaArg, MosFormula};
pub use table::{run_table, SweepConfig, TableFormat};

/// Environment variable overriding the default mos search cap.
pub const CAP_ENV: &str = "SUPERSMOOTH_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("search cap reached: mos >= {cap}")]
    CapReached { cap: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::CapReached { .. } => 3,
            CliError::Mismatch(_) => 4,
            CliError::Verification(_) => 5,
            CliError::Internal(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<SplineError> for CliError {
    fn from(e: SplineError) -> Self {
        match e {
            SplineError::CapReached { cap } => CliError::CapReached { cap },
            SplineError::Internal(m) => CliError::Internal(m),
            SplineError::Geometry(GeometryError::Internal(m)) => CliError::Internal(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Internal(m) => CliError::Internal(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "supersmooth", version, about = "Spline space dimensions and supersmoothness on simplicial cells")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cell construction.
    Cell {
        #[command(subcommand)]
        action: CellAction,
    },
    /// Dimension of S_d^r, compared with the closed form when one applies.
    Dim(DimArgs),
    /// Maximal order of supersmoothness at the center.
    Mos(MosArgs),
    /// Dimension table over r and d, with the mos for each r.
    Table(TableArgs),
    /// Checks basis soundness, vertex smoothness and Taylor truncation.
    Verify(VerifyArgs),
    /// Writes a spline whose pieces first differ at order mos + 1.
    Witness(WitnessArgs),
    /// Writes a basis of S_d^r as a JSON list of splines.
    Basis(BasisArgs),
}

#[derive(Debug, Subcommand)]
enum CellAction {
    /// Generate a cell file.
    Gen(gen::GenArgs),
}

#[derive(Debug, Args)]
struct FormulaOpts {
    /// Closed form to compare against.
    #[arg(long, value_enum, default_value = "auto")]
    formula: FormulaArg,
    /// Dimension the formula is meant for; must match the cell.
    #[arg(long = "formula-n")]
    formula_n: Option<usize>,
}

#[derive(Debug, Args)]
struct DimArgs {
    cell: PathBuf,
    #[arg(short, long)]
    d: usize,
    #[arg(short, long)]
    r: usize,
    #[command(flatten)]
    formula: FormulaOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct MosArgs {
    cell: PathBuf,
    #[arg(short, long)]
    r: usize,
    /// Search cap; defaults to r + n(r+2) or $SUPERSMOOTH_CAP.
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    formula: FormulaOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    cell: PathBuf,
    #[arg(long = "r-max")]
    r_max: usize,
    #[arg(long = "d-max")]
    d_max: usize,
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    formula: FormulaOpts,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    cell: PathBuf,
    #[arg(short, long)]
    d: usize,
    #[arg(short, long)]
    r: usize,
    /// Basis file to check instead of a freshly computed basis.
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    cell: PathBuf,
    #[arg(short, long)]
    r: usize,
    #[arg(long)]
    cap: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BasisArgs {
    cell: PathBuf,
    #[arg(short, long)]
    d: usize,
    #[arg(short, long)]
    r: usize,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and the generated files where requested.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // --help and --version
        Err(e) if !e.use_stderr() => {
            write!(out, "{}", e.render())?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Input(e.render().to_string().trim_end().to_string())),
    };
    match cli.command {
        Command::Cell { action: CellAction::Gen(args) } => gen::run(&args, out),
        Command::Dim(args) => cmd_dim(&args, out),
        Command::Mos(args) => cmd_mos(&args, out),
        Command::Table(args) => {
            let cell = read_cell(&args.cell)?;
            let formula = resolve(&cell, args.formula.formula, args.formula.formula_n)?;
            let config = SweepConfig {
                r_max: args.r_max,
                d_max: args.d_max,
                cap: args.cap.or_else(env_cap),
                format: args.format,
                jobs: args.jobs,
            };
            run_table(&cell, formula, &config, out)
        }
        Command::Verify(args) => verify::run(&args, out),
        Command::Witness(args) => cmd_witness(&args, out),
        Command::Basis(args) => {
            let cell = read_cell(&args.cell)?;
            let basis = basis_spline_space(&cell, args.d, args.r)?;
            emit(args.out.as_deref(), &PiecewisePolynomial::list_to_json(&basis), out)?;
            Ok(())
        }
    }
}

pub fn read_cell(path: &Path) -> Result<Cell, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let cell = Cell::from_json(&text)?;
    if let Some(v) = validate_cell(&cell).violation {
        return Err(CliError::Input(format!("invalid geometry: {v}")));
    }
    Ok(cell)
}

fn env_cap() -> Option<usize> {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok())
}

/// Cap for one `r`: explicit, then the environment, then `r + n(r+2)`.
pub(crate) fn cap_for(explicit: Option<usize>, n: usize, r: usize) -> usize {
    explicit.or_else(env_cap).unwrap_or_else(|| default_cap(n, r))
}

/// Writes `text` to `path`, or to `out` when no path is given.
fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// One (d, r) comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub oracle_dim: usize,
    pub formula_dim: Option<usize>,
    pub degenerate: bool,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

impl ReportRow {
    pub fn new(report: &SpaceReport, formula_dim: Option<usize>) -> Self {
        ReportRow {
            n: report.n,
            d: report.d,
            r: report.r,
            oracle_dim: report.dimension,
            formula_dim,
            degenerate: report.degenerate,
            matches: formula_dim.map(|f| f == report.dimension),
        }
    }

    pub fn csv(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.r,
            self.oracle_dim,
            opt(self.formula_dim.map(|v| v.to_string())),
            self.degenerate,
            opt(self.matches.map(|v| v.to_string())),
        )
    }
}

fn cmd_dim(args: &DimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cell = read_cell(&args.cell)?;
    let formula = resolve(&cell, args.formula.formula, args.formula.formula_n)?;
    let report = supersmooth_core::polyspline::dim_spline_space(&cell, args.d, args.r)?;
    let formula_dim = match formula {
        Some(f) => f.dim(args.d, args.r)?,
        None => None,
    };
    let row = ReportRow::new(&report, formula_dim);
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&row).expect("row serializes"))?;
    } else {
        writeln!(out, "{}", table::CSV_HEADER)?;
        writeln!(out, "{}", row.csv())?;
    }
    if row.matches == Some(false) {
        return Err(CliError::Mismatch(format!(
            "oracle dimension {} differs from the formula value {}",
            report.dimension,
            formula_dim.expect("formula present")
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct MosOutput<'a> {
    #[serde(flatten)]
    report: &'a supersmooth_core::MosReport,
    formula_mos: Option<String>,
}

fn cmd_mos(args: &MosArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cell = read_cell(&args.cell)?;
    let formula = resolve(&cell, args.formula.formula, args.formula.formula_n)?;
    let cap = cap_for(args.cap, cell.dimension, args.r);
    let report = mos_oracle(&cell, args.r, cap)?;
    let expected: Option<MosFormula> = match formula {
        Some(f) => f.mos(args.r)?,
        None => None,
    };
    if args.json {
        let shown = MosOutput {
            report: &report,
            formula_mos: expected.map(|m| m.to_string()),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&shown).expect("report serializes"))?;
    } else {
        if report.exact {
            writeln!(out, "mos: {}", report.mos)?;
        } else {
            writeln!(out, "mos: >= {} (cap reached)", report.mos)?;
        }
        writeln!(out, "r: {}", report.r)?;
        writeln!(out, "exact: {}", report.exact)?;
        if let Some(m) = expected {
            writeln!(out, "formula mos: {m}")?;
        }
        for t in &report.trace {
            writeln!(out, "d={} dim={} degenerate={}", t.d, t.dimension, t.degenerate)?;
        }
    }
    if !report.exact {
        return Err(CliError::CapReached { cap });
    }
    if let Some(m) = expected {
        if !m.admits(report.mos) {
            return Err(CliError::Mismatch(format!("oracle mos {} is outside the formula value {m}", report.mos)));
        }
    }
    Ok(())
}

fn cmd_witness(args: &WitnessArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cell = read_cell(&args.cell)?;
    let cap = cap_for(args.cap, cell.dimension, args.r);
    let report = mos_oracle(&cell, args.r, cap)?;
    let witness = match (&report.witness, report.exact) {
        (Some(w), true) => w,
        _ => {
            writeln!(out, "mos: >= {cap} (cap reached); no witness")?;
            return Err(CliError::CapReached { cap });
        }
    };
    let mismatch = first_vertex_mismatch(witness)
        .ok_or_else(|| CliError::Internal("witness has equal pieces".into()))?;
    let text = witness.to_json();
    match &args.out {
        Some(p) => {
            emit(Some(p), &text, out)?;
            writeln!(out, "mos: {}", report.mos)?;
            writeln!(out, "mismatch order: {}", mismatch.order)?;
            writeln!(out, "multi-index: {}", mismatch.alpha)?;
            writeln!(out, "pieces: {} {}", mismatch.pieces.0, mismatch.pieces.1)?;
        }
        None => {
            out.write_all(text.as_bytes())?;
            eprintln!("mismatch order: {} at {}", mismatch.order, mismatch.alpha);
        }
    }
    if mismatch.order != report.mos + 1 {
        return Err(CliError::Verification(format!(
            "witness mismatch at order {} instead of {}",
            mismatch.order,
            report.mos + 1
        )));
    }
    Ok(())
}
