use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};

use supersmooth_core::geometry::{
    make_alfeld, make_clough_tocher, make_facet_split, make_split_k_n, make_star_cell_2d, make_two_cell,
    standard_simplex, validate_cell, Cell, SplitPoint,
};
use supersmooth_core::scalar::{parse_scalar_list, Scalar};
use supersmooth_core::Point;

use crate::{emit, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    CloughTocher,
    Star2d,
    Alfeld,
    SplitKn,
    Facet,
    TwoCell,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    kind: Kind,
    /// Ambient dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Outer simplex vertices, e.g. "0,0;1,0;0,1". Defaults to the standard simplex.
    #[arg(long)]
    outer: Option<String>,
    /// Interior point. Defaults to the barycenter (the origin for star2d).
    #[arg(long)]
    center: Option<String>,
    /// star2d boundary directions from the center, in angular order.
    #[arg(long)]
    directions: Option<String>,
    /// split-kn: level at which splitting starts.
    #[arg(long)]
    k: Option<usize>,
    /// split-kn: split point for one face, "i,j,k=x,y,z" (repeatable).
    #[arg(long = "split")]
    splits: Vec<String>,
    /// facet: points on the facets, indexed by opposite vertex, ";"-separated.
    #[arg(long = "face-points")]
    face_points: Option<String>,
    /// facet: put each facet point on the line through the center and the
    /// opposite vertex.
    #[arg(long)]
    aligned: bool,
    /// two-cell: index of the outer vertex opposite the chosen facet.
    #[arg(long, default_value_t = 0)]
    face: usize,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn parse_point(text: &str) -> Result<Point, CliError> {
    parse_scalar_list(text)
        .map(Point::new)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn parse_points(text: &str) -> Result<Vec<Point>, CliError> {
    text.split(';').map(parse_point).collect()
}

fn parse_split(text: &str) -> Result<SplitPoint, CliError> {
    let (face, point) = text
        .split_once('=')
        .ok_or_else(|| CliError::Input(format!("split {text:?} must look like \"i,j=x,y\"")))?;
    let face = face
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Input(format!("bad face indices in {text:?}")))?;
    Ok(SplitPoint {
        face,
        point: parse_point(point)?,
    })
}

fn build(args: &GenArgs) -> Result<Cell, CliError> {
    let n = args.dim;
    if n == 0 {
        return Err(CliError::Input("dimension must be positive".into()));
    }
    let outer = match &args.outer {
        Some(text) => parse_points(text)?,
        None => standard_simplex(n),
    };
    let center = || -> Result<Point, CliError> {
        match &args.center {
            Some(text) => parse_point(text),
            None => Ok(Point::barycenter(&outer.iter().collect::<Vec<_>>())),
        }
    };
    let cell = match args.kind {
        Kind::CloughTocher => {
            if n != 2 {
                return Err(CliError::Input("clough-tocher is planar; use --dim 2".into()));
            }
            make_clough_tocher(&outer, &center()?)?
        }
        Kind::Star2d => {
            let dirs = args
                .directions
                .as_deref()
                .ok_or_else(|| CliError::Input("star2d needs --directions".into()))?;
            let v = match &args.center {
                Some(text) => parse_point(text)?,
                None => Point::origin(2),
            };
            if v.dim() != 2 {
                return Err(CliError::Input("star2d is planar".into()));
            }
            let boundary = parse_points(dirs)?
                .into_iter()
                .map(|d| {
                    if d.dim() != 2 {
                        return Err(CliError::Input("directions need two coordinates".into()));
                    }
                    Ok(Point::new(
                        v.coords().iter().zip(d.coords()).map(|(a, b)| a + b).collect::<Vec<Scalar>>(),
                    ))
                })
                .collect::<Result<Vec<_>, _>>()?;
            make_star_cell_2d(&v, &boundary)?
        }
        Kind::Alfeld => make_alfeld(n, &outer, &center()?)?,
        Kind::SplitKn => {
            let k = args.k.ok_or_else(|| CliError::Input("split-kn needs --k".into()))?;
            let mut overrides = args.splits.iter().map(|s| parse_split(s)).collect::<Result<Vec<_>, _>>()?;
            if let Some(text) = &args.center {
                overrides.push(SplitPoint {
                    face: (0..=n).collect(),
                    point: parse_point(text)?,
                });
            }
            make_split_k_n(k, n, &outer, &overrides)?
        }
        Kind::Facet => {
            let pts = args.face_points.as_deref().map(parse_points).transpose()?;
            make_facet_split(n, &outer, &center()?, pts.as_deref(), args.aligned)?
        }
        Kind::TwoCell => make_two_cell(n, &outer, &center()?, args.face)?,
    };
    Ok(cell)
}

pub(crate) fn run(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cell = build(args)?;
    let diag = validate_cell(&cell);
    if let Some(v) = diag.violation {
        return Err(CliError::Input(format!("invalid geometry: {v}")));
    }
    emit(args.out.as_deref(), &cell.to_json(), out)?;
    let summary = format!(
        "valid cell: dimension {}, {} elements, {} interior faces",
        cell.dimension, diag.elements, diag.interior_faces
    );
    if args.out.is_some() {
        writeln!(out, "{summary}")?;
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
