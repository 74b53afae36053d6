use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use supersmooth_core::geometry::Cell;
use supersmooth_core::polyspline::{dim_pi, homogeneous_count, mos_oracle, SpaceReport, SplineSpace};

use crate::family::Formula;
use crate::{cap_for, CliError, ReportRow};

pub const CSV_HEADER: &str = "n,d,r,oracle_dim,formula_dim,degenerate,match";
const MOS_HEADER: &str = "r,mos,exact,formula_mos";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub r_max: usize,
    pub d_max: usize,
    /// Explicit mos cap; the per-`r` default applies otherwise.
    pub cap: Option<usize>,
    pub format: TableFormat,
    pub jobs: usize,
}

#[derive(Debug, Clone, Serialize)]
struct MosRow {
    r: usize,
    mos: usize,
    exact: bool,
    formula_mos: Option<String>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    n: usize,
    rows: &'a [ReportRow],
    mos: &'a [MosRow],
}

/// Rows for every `r <= r_max` and `r <= d <= d_max`, ordered by `(r, d)`,
/// then one mos line per `r`. Work is split into one job per `(r, degree)`
/// and one per mos search; results are keyed, so the output does not depend
/// on the number of workers.
pub fn run_table(
    cell: &Cell,
    formula: Option<Formula>,
    config: &SweepConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if config.r_max > config.d_max {
        return Err(CliError::Input(format!(
            "r-max {} exceeds d-max {}",
            config.r_max, config.d_max
        )));
    }
    if let Some(cap) = config.cap {
        if config.d_max > cap {
            return Err(CliError::Input(format!("d-max {} exceeds the cap {cap}", config.d_max)));
        }
    }
    if config.jobs == 0 {
        return Err(CliError::Input("jobs must be positive".into()));
    }
    let n = cell.dimension;
    let spaces = (0..=config.r_max)
        .map(|r| SplineSpace::new(cell, r))
        .collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;

    let block_jobs: Vec<(usize, usize)> = (0..=config.r_max)
        .flat_map(|r| (0..=config.d_max).map(move |k| (r, k)))
        .collect();
    let (extras, mos_results) = pool.install(|| {
        let extras: BTreeMap<(usize, usize), usize> = block_jobs
            .par_iter()
            .map(|&(r, k)| ((r, k), spaces[r].extra(k)))
            .collect();
        let mos: Vec<_> = (0..=config.r_max)
            .into_par_iter()
            .map(|r| (r, mos_oracle(cell, r, cap_for(config.cap, n, r))))
            .collect();
        (extras, mos)
    });

    let mut rows = Vec::new();
    for r in 0..=config.r_max {
        let mut dimension = 0;
        for k in 0..=config.d_max {
            dimension += homogeneous_count(n, k) + extras[&(r, k)];
            if k < r {
                continue;
            }
            let report = SpaceReport {
                n,
                d: k,
                r,
                dimension,
                degenerate: dimension == dim_pi(n, k as i64),
            };
            let formula_dim = match formula {
                Some(f) => f.dim(k, r)?,
                None => None,
            };
            rows.push(ReportRow::new(&report, formula_dim));
        }
    }
    let mut mos_rows = Vec::new();
    let mut mos_mismatch = None;
    let mut capped = None;
    for (r, result) in mos_results {
        let report = result?;
        let expected = match formula {
            Some(f) => f.mos(r)?,
            None => None,
        };
        if report.exact {
            if let Some(m) = expected.filter(|m| !m.admits(report.mos)) {
                mos_mismatch.get_or_insert(format!("r={r}: oracle mos {} outside formula value {m}", report.mos));
            }
        } else {
            capped.get_or_insert(report.cap);
        }
        mos_rows.push(MosRow {
            r,
            mos: report.mos,
            exact: report.exact,
            formula_mos: expected.map(|m| m.to_string()),
        });
    }

    match config.format {
        TableFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for row in &rows {
                writeln!(out, "{}", row.csv())?;
            }
            writeln!(out)?;
            writeln!(out, "{MOS_HEADER}")?;
            for m in &mos_rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    m.r,
                    m.mos,
                    m.exact,
                    m.formula_mos.clone().unwrap_or_default()
                )?;
            }
        }
        TableFormat::Json => {
            let doc = TableJson {
                n,
                rows: &rows,
                mos: &mos_rows,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("table serializes"))?;
        }
    }

    if let Some(row) = rows.iter().find(|row| row.matches == Some(false)) {
        return Err(CliError::Mismatch(format!(
            "d={} r={}: oracle dimension {} differs from formula value {}",
            row.d,
            row.r,
            row.oracle_dim,
            row.formula_dim.expect("formula present")
        )));
    }
    if let Some(msg) = mos_mismatch {
        return Err(CliError::Mismatch(msg));
    }
    if let Some(cap) = capped {
        return Err(CliError::CapReached { cap });
    }
    Ok(())
}
