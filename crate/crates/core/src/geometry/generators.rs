//! Constructors for the cell families: Clough-Tocher, planar stars, Alfeld,
//! the recursive `k, n` splits, facet splits and 2-cells.

use num_traits::{One, Zero};

use super::predicates::{affine_coordinates, cross2, orientation};
use super::{bad_input, invalid, Cell, CellFamily, Element, ElementKind, GeometryError, Point};
use crate::scalar::Scalar;

/// Explicit split point for one face of the outer simplex, given by the
/// indices of the outer vertices spanning that face.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPoint {
    pub face: Vec<usize>,
    pub point: Point,
}

/// The simplex with vertices 0, e_1, ..., e_n.
pub fn standard_simplex(n: usize) -> Vec<Point> {
    let mut pts = vec![Point::origin(n)];
    for i in 0..n {
        let mut c = vec![Scalar::zero(); n];
        c[i] = Scalar::one();
        pts.push(Point::new(c));
    }
    pts
}

fn check_outer(n: usize, outer: &[Point]) -> Result<(), GeometryError> {
    if n == 0 {
        return bad_input("dimension must be positive");
    }
    if outer.len() != n + 1 {
        return bad_input(format!("an {n}-simplex needs {} vertices, got {}", n + 1, outer.len()));
    }
    if outer.iter().any(|p| p.dim() != n) {
        return bad_input(format!("all points must have {n} coordinates"));
    }
    let refs: Vec<&Point> = outer.iter().collect();
    if orientation(&refs).is_zero() {
        return invalid("outer simplex is degenerate");
    }
    Ok(())
}

/// Barycentric coordinates of `v`, all strictly positive.
fn strictly_inside(outer: &[Point], v: &Point) -> Result<Vec<Scalar>, GeometryError> {
    if v.dim() != outer[0].dim() {
        return bad_input("interior point has the wrong number of coordinates");
    }
    let refs: Vec<&Point> = outer.iter().collect();
    let beta = affine_coordinates(&refs, v)
        .ok_or_else(|| GeometryError::Internal("barycentric solve failed".into()))?;
    if beta.iter().any(|b| b <= &Scalar::zero()) {
        return invalid(format!("point {v} is not strictly inside the simplex"));
    }
    Ok(beta)
}

pub fn make_clough_tocher(triangle: &[Point], v: &Point) -> Result<Cell, GeometryError> {
    let mut cell = make_alfeld(2, triangle, v)?;
    cell.family = Some(CellFamily::CloughTocher);
    Ok(cell)
}

/// Cone of `v` over each facet of the outer simplex: n+1 elements.
pub fn make_alfeld(n: usize, outer: &[Point], v: &Point) -> Result<Cell, GeometryError> {
    check_outer(n, outer)?;
    strictly_inside(outer, v)?;
    let center = n + 1;
    let mut points = outer.to_vec();
    points.push(v.clone());
    let elements = (0..=n)
        .map(|skip| {
            let mut ids: Vec<usize> = (0..=n).filter(|&i| i != skip).collect();
            ids.push(center);
            Element::simplex(ids)
        })
        .collect();
    Ok(Cell {
        dimension: n,
        points,
        elements,
        center,
        family: Some(CellFamily::Alfeld),
    })
}

/// Triangles `{v, p_i, p_(i+1)}` for a boundary listed in angular order
/// around `v` (either orientation, exactly one turn).
pub fn make_star_cell_2d(v: &Point, boundary: &[Point]) -> Result<Cell, GeometryError> {
    let m = boundary.len();
    if v.dim() != 2 || boundary.iter().any(|p| p.dim() != 2) {
        return bad_input("star cells are planar");
    }
    if m < 3 {
        return invalid(format!("a planar cell needs at least 3 triangles, got {m}"));
    }
    let dirs: Vec<Vec<Scalar>> = boundary.iter().map(|p| p.sub(v)).collect();
    let turns: Vec<Scalar> = (0..m).map(|i| cross2(&dirs[i], &dirs[(i + 1) % m])).collect();
    if let Some(i) = turns.iter().position(Zero::is_zero) {
        return invalid(format!(
            "boundary points {i} and {} are collinear with the center",
            (i + 1) % m
        ));
    }
    let positive = turns[0] > Scalar::zero();
    if turns.iter().any(|t| (t > &Scalar::zero()) != positive) {
        return invalid("boundary points are not in angular order around the center");
    }
    // Each turn is less than half a revolution; count the sectors that sweep
    // past the first direction to get the winding number.
    let sign = |x: Scalar| if positive { x } else { -x };
    let u = &dirs[0];
    let windings = (0..m)
        .filter(|&i| {
            let (a, b) = (&dirs[i], &dirs[(i + 1) % m]);
            sign(cross2(a, u)) > Scalar::zero() && sign(cross2(u, b)) >= Scalar::zero()
        })
        .count();
    if windings != 1 {
        return invalid(format!("boundary winds {windings} times around the center"));
    }
    let center = m;
    let mut points = boundary.to_vec();
    points.push(v.clone());
    let elements = (0..m)
        .map(|i| Element::simplex(vec![i, (i + 1) % m, center]))
        .collect();
    Ok(Cell {
        dimension: 2,
        points,
        elements,
        center,
        family: Some(CellFamily::Star2d),
    })
}

fn subsets(n_vertices: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n_vertices, size, &mut Vec::new(), &mut out);
    out
}

/// Split that cones a point of each `j`-face over the split `(j-1)`-faces
/// for `j = k..=n`; the point chosen for the whole simplex is the center.
/// Faces without an override get their barycenter.
pub fn make_split_k_n(
    k: usize,
    n: usize,
    outer: &[Point],
    overrides: &[SplitPoint],
) -> Result<Cell, GeometryError> {
    check_outer(n, outer)?;
    if k == 0 || k > n {
        return bad_input(format!("split level k={k} must satisfy 1 <= k <= {n}"));
    }
    let mut points = outer.to_vec();
    let mut face_point: Vec<(Vec<usize>, usize)> = Vec::new();
    for ov in overrides {
        let mut face = ov.face.clone();
        face.sort_unstable();
        face.dedup();
        if face.len() != ov.face.len() || face.iter().any(|&i| i > n) {
            return bad_input(format!("bad face index list {:?}", ov.face));
        }
        if face.len() < k + 1 {
            return bad_input(format!("face {face:?} has dimension below k={k}"));
        }
        if overrides.iter().filter(|o| {
            let mut f = o.face.clone();
            f.sort_unstable();
            f == face
        }).count() > 1
        {
            return bad_input(format!("face {face:?} given more than once"));
        }
    }
    for j in k..=n {
        for face in subsets(n + 1, j + 1) {
            let verts: Vec<&Point> = face.iter().map(|&i| &outer[i]).collect();
            let chosen = overrides.iter().find(|o| {
                let mut f = o.face.clone();
                f.sort_unstable();
                f == face
            });
            let p = match chosen {
                Some(o) => {
                    if o.point.dim() != n {
                        return bad_input("split point has the wrong number of coordinates");
                    }
                    let lambda = affine_coordinates(&verts, &o.point);
                    if !lambda.is_some_and(|l| l.iter().all(|x| x > &Scalar::zero())) {
                        return invalid(format!(
                            "split point {} is not in the relative interior of face {face:?}",
                            o.point
                        ));
                    }
                    o.point.clone()
                }
                None => Point::barycenter(&verts),
            };
            face_point.push((face, points.len()));
            points.push(p);
        }
    }
    let id_of = |face: &[usize]| {
        face_point
            .iter()
            .find(|(f, _)| f == face)
            .map(|(_, id)| *id)
            .expect("every face of dimension >= k has a split point")
    };
    let mut elements = Vec::new();
    let full: Vec<usize> = (0..=n).collect();
    let mut stack = vec![(full, Vec::<usize>::new())];
    while let Some((face, mut chain)) = stack.pop() {
        chain.push(id_of(&face));
        if face.len() == k + 1 {
            for &skip in &face {
                let mut ids: Vec<usize> = face.iter().copied().filter(|&i| i != skip).collect();
                ids.extend(chain.iter().rev());
                elements.push(Element::simplex(ids));
            }
        } else {
            for &skip in face.iter().rev() {
                let sub: Vec<usize> = face.iter().copied().filter(|&i| i != skip).collect();
                stack.push((sub, chain.clone()));
            }
        }
    }
    let center = id_of(&(0..=n).collect::<Vec<_>>());
    let aligned = (k + 1 == n).then(|| facet_points_aligned(outer, &points, &face_point, center));
    Ok(Cell {
        dimension: n,
        points,
        elements,
        center,
        family: Some(CellFamily::SplitKn { k, aligned }),
    })
}

/// Whether every facet split point is collinear with the center and the
/// outer vertex opposite that facet.
fn facet_points_aligned(
    outer: &[Point],
    points: &[Point],
    face_point: &[(Vec<usize>, usize)],
    center: usize,
) -> bool {
    let n = outer.len() - 1;
    let v = &points[center];
    face_point
        .iter()
        .filter(|(f, _)| f.len() == n)
        .all(|(f, id)| {
            let opposite = (0..=n).find(|i| !f.contains(i)).expect("opposite vertex");
            let a = points[*id].sub(&outer[opposite]);
            let b = v.sub(&outer[opposite]);
            // parallel iff every 2x2 minor vanishes
            (0..n).all(|i| (i + 1..n).all(|j| (&a[i] * &b[j] - &a[j] * &b[i]).is_zero()))
        })
}

/// Alfeld split of the outer simplex followed by a split of each facet at
/// one point. With `aligned`, the facet point opposite vertex `i` is where
/// the line from vertex `i` through `v` meets the facet; otherwise the
/// supplied points (indexed by opposite vertex) or facet barycenters are used.
pub fn make_facet_split(
    n: usize,
    outer: &[Point],
    v: &Point,
    face_points: Option<&[Point]>,
    aligned: bool,
) -> Result<Cell, GeometryError> {
    check_outer(n, outer)?;
    let beta = strictly_inside(outer, v)?;
    let mut overrides = vec![SplitPoint {
        face: (0..=n).collect(),
        point: v.clone(),
    }];
    match (aligned, face_points) {
        (true, Some(_)) => return bad_input("aligned facet points are computed, not supplied"),
        (true, None) => {
            for i in 0..=n {
                let face: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
                let scale = Scalar::one() - &beta[i];
                let weights: Vec<Scalar> = face.iter().map(|&j| &beta[j] / &scale).collect();
                let verts: Vec<&Point> = face.iter().map(|&j| &outer[j]).collect();
                let p = Point::combination(&verts, &weights);
                if weights.iter().any(|w| w <= &Scalar::zero()) {
                    return Err(GeometryError::Internal(
                        "aligned facet point left the facet interior".into(),
                    ));
                }
                overrides.push(SplitPoint { face, point: p });
            }
        }
        (false, Some(pts)) => {
            if pts.len() != n + 1 {
                return bad_input(format!("expected {} facet points, got {}", n + 1, pts.len()));
            }
            for (i, p) in pts.iter().enumerate() {
                let face = (0..=n).filter(|&j| j != i).collect();
                overrides.push(SplitPoint { face, point: p.clone() });
            }
        }
        (false, None) => {}
    }
    let mut cell = make_split_k_n(n - 1, n, outer, &overrides)?;
    let is_aligned = matches!(cell.family, Some(CellFamily::SplitKn { aligned: Some(true), .. }));
    cell.family = Some(CellFamily::Facet { aligned: is_aligned });
    Ok(cell)
}

/// Simplex `T_1` coning `v` over the facet opposite vertex `chosen_face`,
/// and the closure of the rest of the outer simplex as a complement element.
pub fn make_two_cell(
    n: usize,
    outer: &[Point],
    v: &Point,
    chosen_face: usize,
) -> Result<Cell, GeometryError> {
    check_outer(n, outer)?;
    if chosen_face > n {
        return bad_input(format!("face index {chosen_face} out of range 0..={n}"));
    }
    strictly_inside(outer, v)?;
    let center = n + 1;
    let mut points = outer.to_vec();
    points.push(v.clone());
    let facet: Vec<usize> = (0..=n).filter(|&i| i != chosen_face).collect();
    let mut t1 = facet.clone();
    t1.push(center);
    let mut cell = Cell {
        dimension: n,
        points,
        elements: vec![Element::simplex(t1)],
        center,
        family: Some(CellFamily::TwoCell),
    };
    let faces = facet
        .iter()
        .map(|&drop| {
            let mut ids: Vec<usize> = facet.iter().copied().filter(|&i| i != drop).collect();
            ids.push(center);
            cell.face_from_ids(ids)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut comp: Vec<usize> = (0..=n).collect();
    comp.push(center);
    cell.elements.push(Element {
        kind: ElementKind::Complement,
        vertices: comp,
        constraint_faces: faces,
    });
    Ok(cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_cell;
    use crate::scalar::{int, ratio};

    fn pt(c: &[i64]) -> Point {
        Point::new(c.iter().map(|&v| int(v)).collect())
    }

    fn tri() -> Vec<Point> {
        vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]
    }

    fn quarter2() -> Point {
        Point::new(vec![ratio(1, 4), ratio(1, 4)])
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn clough_tocher_counts() {
        let cell = make_clough_tocher(&tri(), &quarter2()).unwrap();
        assert_eq!(cell.elements.len(), 3);
        assert_eq!(cell.interior_faces().len(), 3);
        assert!(validate_cell(&cell).is_valid());
        let err = make_clough_tocher(&tri(), &pt(&[0, 0])).unwrap_err();
        assert!(matches!(err, GeometryError::InvalidGeometry(_)));
        let outside = make_clough_tocher(&tri(), &pt(&[1, 1])).unwrap_err();
        assert!(matches!(outside, GeometryError::InvalidGeometry(_)));
    }

    #[test]
    fn clough_tocher_has_three_slopes() {
        let big = vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])];
        let cell = make_clough_tocher(&big, &Point::new(vec![ratio(1, 2), ratio(1, 2)])).unwrap();
        assert_eq!(cell.elements.len(), 3);
        assert_eq!(cell.count_distinct_slopes_2d().unwrap(), 3);
    }

    #[test]
    fn star_cells() {
        let v = pt(&[0, 0]);
        let square = make_star_cell_2d(&v, &[pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -1])]).unwrap();
        assert_eq!(square.elements.len(), 4);
        assert_eq!(square.count_distinct_slopes_2d().unwrap(), 2);
        assert!(validate_cell(&square).is_valid());

        let bad = make_star_cell_2d(&v, &[pt(&[1, 0]), pt(&[-1, 0]), pt(&[0, 1])]);
        assert!(matches!(bad, Err(GeometryError::InvalidGeometry(_))));

        let five = make_star_cell_2d(
            &v,
            &[pt(&[1, 0]), pt(&[1, 1]), pt(&[-1, 1]), pt(&[-2, -1]), pt(&[1, -2])],
        )
        .unwrap();
        assert_eq!(five.elements.len(), 5);
        assert_eq!(five.interior_faces().len(), 5);
        assert_eq!(five.count_distinct_slopes_2d().unwrap(), 5);

        // both axes are doubled: (1,0),(-1,0) and (0,1),(0,-2)
        let axes =
            make_star_cell_2d(&v, &[pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -2])]).unwrap();
        assert_eq!(axes.count_distinct_slopes_2d().unwrap(), 2);
        let three_slopes =
            make_star_cell_2d(&v, &[pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[1, -2])]).unwrap();
        assert_eq!(three_slopes.count_distinct_slopes_2d().unwrap(), 3);

        let clockwise = make_star_cell_2d(&v, &[pt(&[0, -1]), pt(&[-1, 0]), pt(&[0, 1]), pt(&[1, 0])]).unwrap();
        assert!(validate_cell(&clockwise).is_valid());

        let twice = make_star_cell_2d(
            &v,
            &[pt(&[1, 0]), pt(&[0, 1]), pt(&[-1, 0]), pt(&[0, -1]), pt(&[2, 1]), pt(&[-1, 2]), pt(&[-2, -1])],
        );
        assert!(twice.is_err());
    }

    #[test]
    fn alfeld_counts() {
        let v3 = Point::new(vec![ratio(1, 4); 3]);
        let a3 = make_alfeld(3, &standard_simplex(3), &v3).unwrap();
        assert_eq!(a3.elements.len(), 4);
        assert_eq!(a3.interior_faces().len(), 6);
        assert!(validate_cell(&a3).is_valid());

        let v4 = Point::new(vec![ratio(1, 5); 4]);
        let a4 = make_alfeld(4, &standard_simplex(4), &v4).unwrap();
        assert_eq!(a4.elements.len(), 5);
        assert_eq!(a4.interior_faces().len(), 10);
        assert!(validate_cell(&a4).is_valid());

        let a2 = make_alfeld(2, &tri(), &quarter2()).unwrap();
        let ct = make_clough_tocher(&tri(), &quarter2()).unwrap();
        assert_eq!(a2.elements, ct.elements);
    }

    #[test]
    fn split_k_n_counts() {
        for n in 2..=4 {
            for k in 1..=n {
                let cell = make_split_k_n(k, n, &standard_simplex(n), &[]).unwrap();
                assert_eq!(cell.elements.len(), factorial(n + 1) / factorial(k), "k={k} n={n}");
                let diag = validate_cell(&cell);
                assert!(diag.is_valid(), "k={k} n={n}: {:?}", diag.violation);
                assert_eq!(cell.interior_faces().len(), cell.elements.len() * n / 2);
            }
        }
        let wf = make_split_k_n(2, 3, &standard_simplex(3), &[]).unwrap();
        assert_eq!(wf.elements.len(), 12);
        let ps = make_split_k_n(1, 2, &standard_simplex(2), &[]).unwrap();
        assert_eq!(ps.elements.len(), 6);
        let alf = make_split_k_n(3, 3, &standard_simplex(3), &[]).unwrap();
        let direct = make_alfeld(3, &standard_simplex(3), &Point::new(vec![ratio(1, 4); 3])).unwrap();
        assert_eq!(alf.elements.len(), direct.elements.len());
        assert_eq!(alf.interior_faces().len(), direct.interior_faces().len());
    }

    #[test]
    fn split_k_n_rejects_bad_points() {
        let outside = SplitPoint { face: vec![0, 1], point: pt(&[2, 0]) };
        let err = make_split_k_n(1, 2, &standard_simplex(2), &[outside]).unwrap_err();
        assert!(matches!(err, GeometryError::InvalidGeometry(_)));
        let off_hull = SplitPoint { face: vec![0, 1], point: Point::new(vec![ratio(1, 2), ratio(1, 2)]) };
        assert!(make_split_k_n(1, 2, &standard_simplex(2), &[off_hull]).is_err());
        assert!(make_split_k_n(0, 2, &standard_simplex(2), &[]).is_err());
        assert!(make_split_k_n(3, 2, &standard_simplex(2), &[]).is_err());
    }

    #[test]
    fn facet_split_aligned_points_are_facet_barycenters() {
        let s = standard_simplex(3);
        let v = Point::new(vec![ratio(1, 4); 3]);
        let cell = make_facet_split(3, &s, &v, None, true).unwrap();
        assert_eq!(cell.elements.len(), 12);
        assert_eq!(cell.family, Some(CellFamily::Facet { aligned: true }));
        for i in 0..=3 {
            let facet: Vec<&Point> = (0..=3).filter(|&j| j != i).map(|j| &s[j]).collect();
            let bc = Point::barycenter(&facet);
            assert!(cell.points.contains(&bc));
        }
        let two = make_facet_split(2, &standard_simplex(2), &Point::new(vec![ratio(1, 3); 2]), None, true).unwrap();
        assert_eq!(two.elements.len(), 6);
        assert!(validate_cell(&two).is_valid());
    }

    #[test]
    fn facet_split_non_aligned() {
        let s = standard_simplex(3);
        let v = Point::new(vec![ratio(1, 4); 3]);
        let face_pts: Vec<Point> = (0..=3)
            .map(|i| {
                let facet: Vec<&Point> = (0..=3).filter(|&j| j != i).map(|j| &s[j]).collect();
                Point::combination(&facet, &[ratio(1, 2), ratio(1, 3), ratio(1, 6)])
            })
            .collect();
        let cell = make_facet_split(3, &s, &v, Some(&face_pts), false).unwrap();
        assert_eq!(cell.elements.len(), 12);
        assert_eq!(cell.family, Some(CellFamily::Facet { aligned: false }));
        assert!(validate_cell(&cell).is_valid());
        assert!(make_facet_split(3, &s, &v, Some(&face_pts), true).is_err());
    }

    #[test]
    fn two_cells() {
        let cell = make_two_cell(2, &tri(), &quarter2(), 2).unwrap();
        assert_eq!(cell.elements.len(), 2);
        let t1: Vec<&Point> = cell.element_points(0);
        assert!(t1.contains(&&pt(&[0, 0])) && t1.contains(&&pt(&[1, 0])) && t1.contains(&&quarter2()));
        assert_eq!(cell.elements[1].kind, ElementKind::Complement);
        assert_eq!(cell.elements[1].constraint_faces.len(), 2);
        assert!(validate_cell(&cell).is_valid());

        let c3 = make_two_cell(3, &standard_simplex(3), &Point::new(vec![ratio(1, 4); 3]), 0).unwrap();
        assert_eq!(c3.elements[1].constraint_faces.len(), 3);
        let faces = c3.interior_faces();
        assert_eq!(faces.len(), 3);
        assert!(faces.iter().all(|(a, b, _)| (*a, *b) == (0, 1)));
        assert!(matches!(make_two_cell(2, &tri(), &quarter2(), 3), Err(GeometryError::Input(_))));
    }
}
