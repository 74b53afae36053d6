//! Cell JSON: `{"dimension", "points", "elements", "center"}` with rationals
//! as canonical `"p/q"` strings, plus optional generator metadata.

use serde::{Deserialize, Serialize};

use super::{bad_input, Cell, CellFamily, Element, ElementKind, GeometryError, Point};
use crate::scalar::{self, Scalar};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ElementFile {
    Simplex {
        vertices: Vec<usize>,
    },
    Complement {
        vertices: Vec<usize>,
        constraint_faces: Vec<Vec<usize>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellFile {
    dimension: usize,
    points: Vec<PointFile>,
    elements: Vec<ElementFile>,
    center: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<CellFamily>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct PointFile(#[serde(with = "scalar::serde_vec")] Vec<Scalar>);

impl Cell {
    pub fn to_json(&self) -> String {
        let file = CellFile {
            dimension: self.dimension,
            points: self.points.iter().map(|p| PointFile(p.coords().to_vec())).collect(),
            elements: self
                .elements
                .iter()
                .map(|e| match e.kind {
                    ElementKind::Simplex => ElementFile::Simplex {
                        vertices: e.vertices.clone(),
                    },
                    ElementKind::Complement => ElementFile::Complement {
                        vertices: e.vertices.clone(),
                        constraint_faces: e
                            .constraint_faces
                            .iter()
                            .map(|f| f.vertices.clone())
                            .collect(),
                    },
                })
                .collect(),
            center: self.center,
            metadata: self.family.clone(),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("cell serializes");
        text.push('\n');
        text
    }

    /// Parses cell JSON. Index ranges and face spans are checked here; the
    /// mesh conditions are left to `validate_cell`.
    pub fn from_json(text: &str) -> Result<Cell, GeometryError> {
        let file: CellFile =
            serde_json::from_str(text).map_err(|e| GeometryError::Input(format!("cell file: {e}")))?;
        let n_points = file.points.len();
        let in_range = |ids: &[usize]| ids.iter().all(|&i| i < n_points);
        if file.center >= n_points {
            return bad_input("center index out of range");
        }
        let mut cell = Cell {
            dimension: file.dimension,
            points: file.points.into_iter().map(|p| Point::new(p.0)).collect(),
            elements: Vec::new(),
            center: file.center,
            family: file.metadata,
        };
        if cell.points.iter().any(|p| p.dim() != cell.dimension) {
            return bad_input("point with the wrong number of coordinates");
        }
        for e in file.elements {
            let element = match e {
                ElementFile::Simplex { vertices } => {
                    if !in_range(&vertices) {
                        return bad_input("element references a missing point");
                    }
                    Element::simplex(vertices)
                }
                ElementFile::Complement { vertices, constraint_faces } => {
                    if !in_range(&vertices) || !constraint_faces.iter().all(|f| in_range(f)) {
                        return bad_input("element references a missing point");
                    }
                    let faces = constraint_faces
                        .into_iter()
                        .map(|f| {
                            if f.len() != cell.dimension {
                                return bad_input("constraint face has the wrong vertex count");
                            }
                            cell.face_from_ids(f)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Element {
                        kind: ElementKind::Complement,
                        vertices,
                        constraint_faces: faces,
                    }
                }
            };
            cell.elements.push(element);
        }
        Ok(cell)
    }
}
