//! Exact-rational cells: points, simplices, faces, and constructors for
//! the standard split families.

mod generators;
mod io;
pub mod predicates;
mod validate;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, RationalMatrix};
use crate::scalar::{format_scalar, Scalar};

pub use generators::{
    make_alfeld, make_clough_tocher, make_facet_split, make_split_k_n, make_star_cell_2d,
    make_two_cell, standard_simplex, SplitPoint,
};
pub use validate::{validate_cell, Diagnostics};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T, GeometryError> {
    Err(GeometryError::InvalidGeometry(msg.into()))
}

pub(crate) fn bad_input<T>(msg: impl Into<String>) -> Result<T, GeometryError> {
    Err(GeometryError::Input(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Scalar::zero(); n])
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, other: &Point) -> Vec<Scalar> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// Affine combination `sum w_i p_i` (weights are not required to sum to one).
    pub fn combination(points: &[&Point], weights: &[Scalar]) -> Point {
        let n = points[0].dim();
        let mut out = vec![Scalar::zero(); n];
        for (p, w) in points.iter().zip(weights) {
            for (o, c) in out.iter_mut().zip(p.coords()) {
                *o += w * c;
            }
        }
        Point(out)
    }

    pub fn barycenter(points: &[&Point]) -> Point {
        let w = Scalar::new(1.into(), (points.len() as i64).into());
        Point::combination(points, &vec![w; points.len()])
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_scalar).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Affine function `coefficients . x + constant`, scaled so that the first
/// nonzero coefficient is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coefficients: Vec<Scalar>,
    constant: Scalar,
}

impl LinearForm {
    pub fn new(coefficients: Vec<Scalar>, constant: Scalar) -> Result<Self, GeometryError> {
        let Some(lead) = coefficients.iter().find(|c| !c.is_zero()).cloned() else {
            return bad_input("linear form has no nonzero coefficient");
        };
        Ok(LinearForm {
            coefficients: coefficients.iter().map(|c| c / &lead).collect(),
            constant: constant / lead,
        })
    }

    /// The hyperplane through `points` (n affinely independent points in R^n).
    pub fn through(points: &[&Point]) -> Result<Self, GeometryError> {
        let n = points[0].dim();
        if points.len() != n {
            return bad_input(format!("a hyperplane in R^{n} needs {n} points"));
        }
        let rows = points
            .iter()
            .map(|p| {
                let mut r = p.coords().to_vec();
                r.push(Scalar::one());
                r
            })
            .collect();
        let kernel = linalg::nullspace(&RationalMatrix::from_dense_rows(n + 1, rows));
        match kernel.as_slice() {
            [normal] if normal[..n].iter().any(|c| !c.is_zero()) => {
                Self::new(normal[..n].to_vec(), normal[n].clone())
            }
            _ => invalid("face vertices do not span a hyperplane"),
        }
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coefficients
    }

    pub fn constant(&self) -> &Scalar {
        &self.constant
    }

    /// Index of the leading (unit) coefficient.
    pub fn lead_index(&self) -> usize {
        self.coefficients
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero form")
    }

    pub fn eval(&self, x: &Point) -> Scalar {
        self.coefficients
            .iter()
            .zip(x.coords())
            .fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Simplex,
    Complement,
}

/// An (n-1)-face given by n point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub form: LinearForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub kind: ElementKind,
    pub vertices: Vec<usize>,
    /// Only for complements: the faces shared with the simplex element.
    pub constraint_faces: Vec<Face>,
}

impl Element {
    pub fn simplex(vertices: Vec<usize>) -> Self {
        Element {
            kind: ElementKind::Simplex,
            vertices,
            constraint_faces: Vec::new(),
        }
    }

    pub fn contains_vertex(&self, id: usize) -> bool {
        self.vertices.contains(&id)
    }
}

/// Which constructor produced a cell. Used to pick closed-form formulas;
/// never inferred from raw coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum CellFamily {
    CloughTocher,
    Star2d,
    Alfeld,
    SplitKn {
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        aligned: Option<bool>,
    },
    Facet { aligned: bool },
    TwoCell,
}

/// A set of elements around the center vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dimension: usize,
    pub points: Vec<Point>,
    pub elements: Vec<Element>,
    pub center: usize,
    pub family: Option<CellFamily>,
}

impl Cell {
    pub fn center_point(&self) -> &Point {
        &self.points[self.center]
    }

    pub fn element_points(&self, element: usize) -> Vec<&Point> {
        self.elements[element]
            .vertices
            .iter()
            .map(|&i| &self.points[i])
            .collect()
    }

    pub fn is_two_cell(&self) -> bool {
        self.elements
            .iter()
            .any(|e| e.kind == ElementKind::Complement)
    }

    pub(crate) fn face_from_ids(&self, mut ids: Vec<usize>) -> Result<Face, GeometryError> {
        ids.sort_unstable();
        let pts: Vec<&Point> = ids.iter().map(|&i| &self.points[i]).collect();
        let form = LinearForm::through(&pts)?;
        Ok(Face { vertices: ids, form })
    }

    /// Adjacent element pairs with their shared face, each pair once, in
    /// `(a, b)` order with `a < b`. For a 2-cell this is the simplex and the
    /// complement once per constraint face.
    pub fn interior_faces(&self) -> Vec<(usize, usize, Face)> {
        let mut out = Vec::new();
        for (b, eb) in self.elements.iter().enumerate() {
            if eb.kind == ElementKind::Complement {
                for face in &eb.constraint_faces {
                    for a in 0..b {
                        if face.vertices.iter().all(|v| self.elements[a].contains_vertex(*v)) {
                            out.push((a, b, face.clone()));
                        }
                    }
                }
            }
        }
        for a in 0..self.elements.len() {
            for b in a + 1..self.elements.len() {
                let (ea, eb) = (&self.elements[a], &self.elements[b]);
                if ea.kind != ElementKind::Simplex || eb.kind != ElementKind::Simplex {
                    continue;
                }
                let shared: Vec<usize> = ea
                    .vertices
                    .iter()
                    .copied()
                    .filter(|v| eb.contains_vertex(*v))
                    .collect();
                if shared.len() == self.dimension {
                    if let Ok(face) = self.face_from_ids(shared) {
                        out.push((a, b, face));
                    }
                }
            }
        }
        out.sort_by(|x, y| (x.0, x.1, &x.2.vertices).cmp(&(y.0, y.1, &y.2.vertices)));
        out
    }

    /// Points joined to the center by an edge of some element.
    pub fn center_neighbors(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = Vec::new();
        for e in &self.elements {
            let candidates: Vec<usize> = match e.kind {
                ElementKind::Simplex => e.vertices.clone(),
                ElementKind::Complement => e
                    .constraint_faces
                    .iter()
                    .flat_map(|f| f.vertices.iter().copied())
                    .collect(),
            };
            ids.extend(candidates.into_iter().filter(|&i| i != self.center));
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Number of distinct undirected directions among the edges at the
    /// center of a planar cell.
    pub fn count_distinct_slopes_2d(&self) -> Result<usize, GeometryError> {
        if self.dimension != 2 {
            return bad_input(format!(
                "slope count needs a planar cell, got dimension {}",
                self.dimension
            ));
        }
        let v = self.center_point();
        let mut reps: Vec<Vec<Scalar>> = Vec::new();
        for id in self.center_neighbors() {
            let dir = self.points[id].sub(v);
            if !reps.iter().any(|r| predicates::cross2(r, &dir).is_zero()) {
                reps.push(dir);
            }
        }
        Ok(reps.len())
    }

    /// Image of the cell under `x -> A x + b`; `A` must be invertible.
    pub fn apply_affine(&self, a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Cell, GeometryError> {
        let n = self.dimension;
        if a.len() != n || a.iter().any(|r| r.len() != n) || b.len() != n {
            return bad_input("affine map has the wrong shape");
        }
        if predicates::determinant(a.to_vec()).is_zero() {
            return bad_input("affine map is singular");
        }
        let map = |p: &Point| {
            Point::new(
                (0..n)
                    .map(|i| {
                        a[i].iter()
                            .zip(p.coords())
                            .fold(b[i].clone(), |acc, (m, x)| acc + m * x)
                    })
                    .collect(),
            )
        };
        let points: Vec<Point> = self.points.iter().map(map).collect();
        let mut out = Cell {
            points,
            ..self.clone()
        };
        for e in 0..out.elements.len() {
            let faces = out.elements[e].constraint_faces.clone();
            out.elements[e].constraint_faces = faces
                .into_iter()
                .map(|f| out.face_from_ids(f.vertices))
                .collect::<Result<_, _>>()?;
        }
        Ok(out)
    }
}
