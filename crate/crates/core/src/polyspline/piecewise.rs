use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::multi_index::MultiIndex;
use super::{Polynomial, SplineError};
use crate::geometry::Point;
use crate::scalar::{self, format_scalar, parse_scalar, Scalar};

/// One polynomial per element of a cell, all with the same degree bound.
///
/// Pieces are expressed in the shifted variables `y = x - v`, where `v` is
/// the cell center, so the coefficient of `y^alpha` is `D^alpha f(v) / alpha!`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    center: Point,
    degree: usize,
    pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    pub fn new(center: Point, pieces: Vec<Polynomial>) -> Self {
        let degree = pieces.first().map_or(0, Polynomial::degree);
        assert!(
            pieces
                .iter()
                .all(|p| p.degree() == degree && p.nvars() == center.dim()),
            "pieces must share the degree bound and the ambient dimension"
        );
        PiecewisePolynomial { center, degree, pieces }
    }

    /// The same local polynomial on every piece.
    pub fn replicate(center: Point, local: Polynomial, count: usize) -> Self {
        Self::new(center, vec![local; count])
    }

    /// Pieces given in absolute coordinates `x`.
    pub fn from_global(center: Point, pieces: &[Polynomial]) -> Self {
        let local = pieces.iter().map(|p| p.translate(center.coords())).collect();
        Self::new(center, local)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn nvars(&self) -> usize {
        self.center.dim()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn piece(&self, i: usize) -> &Polynomial {
        &self.pieces[i]
    }

    /// Piece `i` in absolute coordinates.
    pub fn global_piece(&self, i: usize) -> Polynomial {
        let back: Vec<Scalar> = self.center.coords().iter().map(|c| -c).collect();
        self.pieces[i].translate(&back)
    }

    pub fn eval_piece(&self, i: usize, x: &Point) -> Scalar {
        self.pieces[i].eval(&x.sub(&self.center))
    }

    pub fn all_pieces_equal(&self) -> bool {
        self.pieces.windows(2).all(|w| w[0] == w[1])
    }

    pub fn map_pieces(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        Self::new(self.center.clone(), self.pieces.iter().map(f).collect())
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        self.map_pieces(|p| p.scale(factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.pieces.len(), other.pieces.len());
        let degree = self.degree.max(other.degree);
        Self::new(
            self.center.clone(),
            self.pieces
                .iter()
                .zip(&other.pieces)
                .map(|(a, b)| (a + b).with_degree(degree))
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let file = self.to_file();
        let mut text = serde_json::to_string_pretty(&file).expect("spline serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, SplineError> {
        let file: SplineFile =
            serde_json::from_str(text).map_err(|e| SplineError::Input(format!("spline file: {e}")))?;
        Self::from_file(file)
    }

    /// JSON array of splines.
    pub fn list_to_json(splines: &[Self]) -> String {
        let files: Vec<SplineFile> = splines.iter().map(Self::to_file).collect();
        let mut text = serde_json::to_string_pretty(&files).expect("splines serialize");
        text.push('\n');
        text
    }

    pub fn list_from_json(text: &str) -> Result<Vec<Self>, SplineError> {
        let files: Vec<SplineFile> =
            serde_json::from_str(text).map_err(|e| SplineError::Input(format!("spline list: {e}")))?;
        files.into_iter().map(Self::from_file).collect()
    }

    fn to_file(&self) -> SplineFile {
        SplineFile {
            dimension: self.nvars(),
            degree: self.degree,
            center: self.center.coords().to_vec(),
            pieces: self
                .pieces
                .iter()
                .map(|p| {
                    p.terms()
                        .into_iter()
                        .map(|(alpha, c)| (exponent_key(&alpha), format_scalar(c)))
                        .collect()
                })
                .collect(),
        }
    }

    fn from_file(file: SplineFile) -> Result<Self, SplineError> {
        if file.center.len() != file.dimension {
            return Err(SplineError::Input("center has the wrong number of coordinates".into()));
        }
        let mut pieces = Vec::with_capacity(file.pieces.len());
        for map in file.pieces {
            let mut terms = Vec::new();
            for (key, value) in &map {
                let alpha = parse_exponent_key(key, file.dimension)?;
                if alpha.degree() > file.degree {
                    return Err(SplineError::Input(format!("term {key} exceeds degree {}", file.degree)));
                }
                let c = parse_scalar(value).map_err(|e| SplineError::Input(e.to_string()))?;
                terms.push((alpha, c));
            }
            pieces.push(Polynomial::from_terms(file.dimension, file.degree, terms));
        }
        if pieces.is_empty() {
            return Err(SplineError::Input("spline has no pieces".into()));
        }
        Ok(Self::new(Point::new(file.center), pieces))
    }
}

fn exponent_key(alpha: &MultiIndex) -> String {
    alpha
        .exponents()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_exponent_key(key: &str, n: usize) -> Result<MultiIndex, SplineError> {
    let exps = key
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| SplineError::Input(format!("bad exponent key {key:?}")))?;
    if exps.len() != n {
        return Err(SplineError::Input(format!("exponent key {key:?} needs {n} entries")));
    }
    Ok(MultiIndex::new(exps))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplineFile {
    dimension: usize,
    degree: usize,
    #[serde(with = "scalar::serde_vec")]
    center: Vec<Scalar>,
    pieces: Vec<IndexMap<String, String>>,
}
