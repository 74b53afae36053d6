use std::collections::HashSet;

use num_traits::Zero;

use super::predicates::{affine_coordinates, in_relative_interior, orientation};
use super::{Cell, ElementKind, LinearForm, Point};
use crate::scalar::Scalar;

/// Outcome of [`validate_cell`]: the first violated invariant, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub violation: Option<String>,
    pub elements: usize,
    pub interior_faces: usize,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the mesh conditions of a cell with exact predicates.
pub fn validate_cell(cell: &Cell) -> Diagnostics {
    let violation = check(cell).err();
    let interior_faces = if violation.is_none() {
        cell.interior_faces().len()
    } else {
        0
    };
    Diagnostics {
        violation,
        elements: cell.elements.len(),
        interior_faces,
    }
}

fn check(cell: &Cell) -> Result<(), String> {
    let n = cell.dimension;
    if n == 0 {
        return Err("dimension must be positive".into());
    }
    if let Some(i) = cell.points.iter().position(|p| p.dim() != n) {
        return Err(format!("point {i} does not have {n} coordinates"));
    }
    let mut seen = HashSet::new();
    for (i, p) in cell.points.iter().enumerate() {
        if !seen.insert(p) {
            return Err(format!("point {i} duplicates the coordinates of an earlier point"));
        }
    }
    if cell.center >= cell.points.len() {
        return Err("center index out of range".into());
    }
    if cell.elements.is_empty() {
        return Err("cell has no elements".into());
    }
    for (e, el) in cell.elements.iter().enumerate() {
        if let Some(&bad) = el.vertices.iter().find(|&&i| i >= cell.points.len()) {
            return Err(format!("element {e} references missing point {bad}"));
        }
        let distinct: HashSet<_> = el.vertices.iter().collect();
        if distinct.len() != el.vertices.len() {
            return Err(format!("element {e} has a repeated vertex"));
        }
        if !el.contains_vertex(cell.center) {
            return Err(format!("element {e} does not contain the center"));
        }
    }
    if cell.is_two_cell() {
        check_two_cell(cell)
    } else {
        check_simplicial(cell)
    }
}

fn check_simplex_shape(cell: &Cell, e: usize) -> Result<(), String> {
    let el = &cell.elements[e];
    if el.vertices.len() != cell.dimension + 1 {
        return Err(format!("element {e} is not an {}-simplex", cell.dimension));
    }
    if orientation(&cell.element_points(e)).is_zero() {
        return Err(format!("element {e} is a degenerate simplex"));
    }
    Ok(())
}

fn check_simplicial(cell: &Cell) -> Result<(), String> {
    let n = cell.dimension;
    let c = cell.center;
    for e in 0..cell.elements.len() {
        check_simplex_shape(cell, e)?;
    }
    let sets: Vec<HashSet<usize>> = cell
        .elements
        .iter()
        .map(|el| el.vertices.iter().copied().collect())
        .collect();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if sets[a] == sets[b] {
                return Err(format!("elements {a} and {b} have the same vertices"));
            }
        }
    }
    if n == 2 && cell.elements.len() < 3 {
        return Err("a planar cell needs at least 3 triangles".into());
    }
    // every facet through the center is shared with exactly one element on
    // the other side
    for (e, el) in cell.elements.iter().enumerate() {
        for &opp in el.vertices.iter().filter(|&&u| u != c) {
            let facet: Vec<usize> = el.vertices.iter().copied().filter(|&u| u != opp).collect();
            let pts: Vec<&Point> = facet.iter().map(|&i| &cell.points[i]).collect();
            let form = LinearForm::through(&pts).map_err(|err| err.to_string())?;
            let side = form.eval(&cell.points[opp]);
            let partners: Vec<usize> = (0..cell.elements.len())
                .filter(|&o| o != e && facet.iter().all(|u| sets[o].contains(u)))
                .collect();
            match partners.as_slice() {
                [] => {
                    if overlaps_across(cell, e, &form, &side) {
                        return Err(format!(
                            "element {e} meets a neighbour along face {facet:?} but the intersection is not a common face"
                        ));
                    }
                    return Err(format!(
                        "face {facet:?} of element {e} is on the boundary; the center is not interior"
                    ));
                }
                [o] => {
                    let other = cell.elements[*o]
                        .vertices
                        .iter()
                        .find(|u| !facet.contains(u))
                        .expect("opposite vertex");
                    let other_side = form.eval(&cell.points[*other]);
                    if (&side * &other_side) >= Scalar::zero() {
                        return Err(format!(
                            "elements {e} and {o} overlap; the intersection is not a common face"
                        ));
                    }
                }
                _ => {
                    return Err(format!(
                        "face {facet:?} is shared by more than two elements; the intersection is not a common face"
                    ))
                }
            }
        }
    }
    // the cones at the center cover a neighbourhood exactly once
    let v = cell.center_point();
    let probe: Vec<Scalar> = {
        let first = &cell.elements[0];
        let mut d = vec![Scalar::zero(); n];
        for &u in first.vertices.iter().filter(|&&u| u != c) {
            for (acc, x) in d.iter_mut().zip(cell.points[u].sub(v)) {
                *acc += x;
            }
        }
        d
    };
    let target = Point::new(v.coords().iter().zip(&probe).map(|(a, b)| a + b).collect());
    let covering = (0..cell.elements.len())
        .filter(|&e| {
            affine_coordinates(&cell.element_points(e), &target)
                .is_some_and(|l| {
                    let pos = cell.elements[e].vertices.iter().position(|&u| u == c).expect("center");
                    // nonnegative cone coordinates; the center weight is free
                    l.iter().enumerate().all(|(i, x)| i == pos || x >= &Scalar::zero())
                })
        })
        .count();
    if covering != 1 {
        return Err(format!(
            "{covering} elements cover a neighbourhood of the center; the intersection is not a common face"
        ));
    }
    Ok(())
}

/// Whether another element has a face through the center on the same
/// hyperplane, on the opposite side.
fn overlaps_across(cell: &Cell, e: usize, form: &LinearForm, side: &Scalar) -> bool {
    let c = cell.center;
    cell.elements.iter().enumerate().any(|(o, el)| {
        o != e
            && el.vertices.iter().filter(|&&u| u != c).any(|&opp| {
                let facet: Vec<&Point> = el
                    .vertices
                    .iter()
                    .filter(|&&u| u != opp)
                    .map(|&i| &cell.points[i])
                    .collect();
                LinearForm::through(&facet).is_ok_and(|f| {
                    &f == form && (side * &form.eval(&cell.points[opp])) < Scalar::zero()
                })
            })
    })
}

fn check_two_cell(cell: &Cell) -> Result<(), String> {
    let n = cell.dimension;
    let c = cell.center;
    if cell.elements.len() != 2
        || cell.elements[0].kind != ElementKind::Simplex
        || cell.elements[1].kind != ElementKind::Complement
    {
        return Err("a complement element is only allowed as the second element of a 2-cell".into());
    }
    check_simplex_shape(cell, 0)?;
    let t1 = &cell.elements[0];
    let comp = &cell.elements[1];
    let outer: Vec<usize> = comp.vertices.iter().copied().filter(|&u| u != c).collect();
    if outer.len() != n + 1 {
        return Err("complement must list the outer simplex vertices and the center".into());
    }
    let outer_pts: Vec<&Point> = outer.iter().map(|&i| &cell.points[i]).collect();
    if orientation(&outer_pts).is_zero() {
        return Err("outer simplex of the 2-cell is degenerate".into());
    }
    if !in_relative_interior(&outer_pts, cell.center_point()) {
        return Err("center is not strictly inside the outer simplex".into());
    }
    if t1.vertices.iter().any(|u| *u != c && !outer.contains(u)) {
        return Err("simplex element is not a cone over a facet of the outer simplex".into());
    }
    if comp.constraint_faces.len() != n {
        return Err(format!(
            "complement carries {} constraint faces, expected {n}",
            comp.constraint_faces.len()
        ));
    }
    let mut distinct = HashSet::new();
    for (i, face) in comp.constraint_faces.iter().enumerate() {
        if face.vertices.len() != n
            || !face.vertices.contains(&c)
            || face.vertices.iter().any(|u| !t1.contains_vertex(*u))
        {
            return Err(format!("constraint face {i} is not a face of the simplex through the center"));
        }
        let pts: Vec<&Point> = face.vertices.iter().map(|&u| &cell.points[u]).collect();
        match LinearForm::through(&pts) {
            Ok(form) if form == face.form => {}
            Ok(_) => return Err(format!("constraint face {i} has a stale linear form")),
            Err(_) => return Err(format!("constraint face {i} does not span a hyperplane")),
        }
        let mut key = face.vertices.clone();
        key.sort_unstable();
        if !distinct.insert(key) {
            return Err(format!("constraint face {i} is repeated"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_clough_tocher, Element};
    use crate::scalar::{int, ratio};

    fn pt(c: &[i64]) -> Point {
        Point::new(c.iter().map(|&v| int(v)).collect())
    }

    fn star(points: Vec<Point>, elements: Vec<Vec<usize>>, center: usize) -> Cell {
        Cell {
            dimension: 2,
            points,
            elements: elements.into_iter().map(Element::simplex).collect(),
            center,
            family: None,
        }
    }

    #[test]
    fn partial_edge_overlap_is_reported() {
        // v at the origin; two triangles along the positive x-axis end at
        // (2,0) and (1,0) respectively
        let cell = star(
            vec![pt(&[2, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -1]), pt(&[1, 0]), pt(&[0, 0])],
            vec![vec![0, 1, 5], vec![1, 2, 5], vec![2, 3, 5], vec![3, 4, 5]],
            5,
        );
        let d = validate_cell(&cell);
        assert!(d.violation.unwrap().contains("intersection is not a common face"));
    }

    #[test]
    fn overlapping_fans_are_reported() {
        let cell = star(
            vec![pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -1]), pt(&[1, 1]), pt(&[0, 0])],
            vec![vec![0, 1, 5], vec![1, 2, 5], vec![2, 3, 5], vec![3, 0, 5], vec![0, 4, 5], vec![4, 1, 5]],
            5,
        );
        let d = validate_cell(&cell);
        assert!(d.violation.unwrap().contains("not a common face"));
    }

    #[test]
    fn degenerate_and_duplicate() {
        let mut cell = make_clough_tocher(
            &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])],
            &Point::new(vec![ratio(1, 4), ratio(1, 4)]),
        )
        .unwrap();
        cell.elements[0].vertices = vec![1, 1, 3];
        assert!(validate_cell(&cell).violation.unwrap().contains("repeated vertex"));

        let mut dup = make_clough_tocher(
            &[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])],
            &Point::new(vec![ratio(1, 4), ratio(1, 4)]),
        )
        .unwrap();
        dup.points.push(pt(&[1, 0]));
        assert!(validate_cell(&dup).violation.unwrap().contains("duplicates"));
    }

    #[test]
    fn two_triangle_cell_rejected() {
        let cell = star(
            vec![pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, 0])],
            vec![vec![0, 1, 3], vec![1, 2, 3]],
            3,
        );
        assert!(!validate_cell(&cell).is_valid());
    }
}
