use proptest::prelude::*;

use supersmooth_core::geometry::{
    make_alfeld, make_clough_tocher, make_facet_split, make_split_k_n, make_star_cell_2d, make_two_cell,
    standard_simplex, validate_cell, Cell, LinearForm, SplitPoint,
};
use supersmooth_core::polyspline::{
    default_cap, dim_pi, first_vertex_mismatch, mos_oracle, smoothness_constraints, vertex_smoothness_order,
    SplineSpace,
};
use supersmooth_core::scalar::{int, ratio};
use supersmooth_core::{Point, Scalar};

fn pt(c: &[(i64, i64)]) -> Point {
    Point::new(c.iter().map(|&(p, q)| ratio(p, q)).collect())
}

fn sample_cells() -> Vec<Cell> {
    let tri = standard_simplex(2);
    let tet = standard_simplex(3);
    let star = |dirs: &[(i64, i64)]| {
        let boundary: Vec<Point> = dirs.iter().map(|&(x, y)| Point::new(vec![int(x), int(y)])).collect();
        make_star_cell_2d(&Point::origin(2), &boundary).unwrap()
    };
    vec![
        make_clough_tocher(&tri, &pt(&[(1, 5), (2, 7)])).unwrap(),
        star(&[(1, 0), (0, 1), (-1, 0), (0, -1)]),
        star(&[(3, 1), (-1, 4), (-5, -2), (2, -7), (6, -5)]),
        make_split_k_n(1, 2, &tri, &[]).unwrap(),
        make_alfeld(3, &tet, &pt(&[(1, 5), (1, 4), (1, 3)])).unwrap(),
        make_two_cell(2, &tri, &pt(&[(1, 4), (1, 3)]), 1).unwrap(),
        make_two_cell(3, &tet, &pt(&[(1, 5), (1, 4), (1, 6)]), 0).unwrap(),
    ]
}

#[test]
fn space_sweep_invariants() {
    for cell in sample_cells() {
        let n = cell.dimension;
        for r in 0..=2 {
            let space = SplineSpace::new(&cell, r).unwrap();
            let mos = mos_oracle(&cell, r, default_cap(n, r)).unwrap();
            assert!(mos.exact);
            let top = mos.mos + 2;
            let basis = space.basis(top).unwrap();
            let mut seen_nondegenerate = false;
            for d in r..=top {
                let report = space.report(d).unwrap();
                assert!(report.dimension >= dim_pi(n, d as i64));
                if d == r {
                    assert!(report.degenerate, "S_r^r must be degenerate");
                }
                if seen_nondegenerate {
                    assert!(!report.degenerate, "degeneracy returned at d={d}");
                }
                seen_nondegenerate |= !report.degenerate;
                assert_eq!(report.degenerate, d <= mos.mos);

                let sub = space.basis(d).unwrap();
                assert_eq!(sub.len(), report.dimension);
                let all_equal = sub.iter().all(|s| s.all_pieces_equal());
                assert_eq!(all_equal, report.degenerate);
                let system = smoothness_constraints(&cell, d, r).unwrap();
                assert!(sub.iter().all(|s| system.is_satisfied_by(s)));
                for s in &sub {
                    assert!(vertex_smoothness_order(s, top).is_some_and(|o| o >= mos.mos));
                }
                if d == mos.mos + 1 {
                    assert!(sub
                        .iter()
                        .any(|s| first_vertex_mismatch(s).is_some_and(|m| m.order == mos.mos + 1)));
                }
            }
            assert_eq!(basis.len(), space.dimension(top));
        }
    }
}

#[test]
fn refinement_never_loses_splines() {
    let tri = standard_simplex(2);
    let tet = standard_simplex(3);
    let alfeld2 = make_alfeld(2, &tri, &Point::barycenter(&tri.iter().collect::<Vec<_>>())).unwrap();
    let ps = make_split_k_n(1, 2, &tri, &[]).unwrap();
    let alfeld3 = make_alfeld(3, &tet, &Point::barycenter(&tet.iter().collect::<Vec<_>>())).unwrap();
    let wf = make_split_k_n(2, 3, &tet, &[]).unwrap();
    let facet = make_facet_split(3, &tet, &Point::barycenter(&tet.iter().collect::<Vec<_>>()), None, false).unwrap();
    for r in 0..=2 {
        for (coarse, fine) in [(&alfeld2, &ps), (&alfeld3, &wf), (&alfeld3, &facet)] {
            let a = SplineSpace::new(coarse, r).unwrap();
            let b = SplineSpace::new(fine, r).unwrap();
            for d in r..=r + 3 {
                assert!(a.dimension(d) <= b.dimension(d), "r={r} d={d}");
            }
        }
    }
}

#[test]
fn generator_outputs_are_valid_with_expected_counts() {
    let tri = standard_simplex(2);
    let tet = standard_simplex(3);
    let center3 = pt(&[(1, 5), (1, 4), (1, 3)]);
    let cases: Vec<(Cell, usize)> = vec![
        (make_alfeld(2, &tri, &pt(&[(1, 3), (1, 3)])).unwrap(), 3),
        (make_alfeld(3, &tet, &center3).unwrap(), 4),
        (make_split_k_n(1, 2, &tri, &[]).unwrap(), 6),
        (make_split_k_n(1, 3, &tet, &[]).unwrap(), 24),
        (make_split_k_n(2, 3, &tet, &[]).unwrap(), 12),
        (make_facet_split(3, &tet, &center3, None, true).unwrap(), 12),
        (make_facet_split(2, &tri, &pt(&[(1, 4), (1, 2)]), None, true).unwrap(), 6),
        (make_two_cell(3, &tet, &center3, 2).unwrap(), 2),
    ];
    for (cell, count) in cases {
        assert!(validate_cell(&cell).is_valid(), "{:?}", validate_cell(&cell).violation);
        assert_eq!(cell.elements.len(), count);
    }
}

#[test]
fn hyperplane_forms_are_canonical() {
    let a = pt(&[(1, 1), (0, 1), (2, 1)]);
    let b = pt(&[(0, 1), (3, 1), (1, 2)]);
    let c = pt(&[(5, 1), (-1, 1), (1, 3)]);
    let one = LinearForm::through(&[&a, &b, &c]).unwrap();
    let two = LinearForm::through(&[&c, &a, &b]).unwrap();
    assert_eq!(one, two);
    // The midpoint of a and b lies on the same plane.
    let mid = Point::barycenter(&[&a, &b]);
    assert_eq!(LinearForm::through(&[&mid, &b, &c]).unwrap(), one);
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

/// Invertible 2x2 rational maps (determinant checked) with a shift.
fn affine2() -> impl Strategy<Value = (Vec<Vec<Scalar>>, Vec<Scalar>)> {
    (proptest::collection::vec(scalar(), 4), proptest::collection::vec(scalar(), 2))
        .prop_filter("invertible", |(m, _)| &m[0] * &m[3] != &m[1] * &m[2])
        .prop_map(|(m, b)| (vec![vec![m[0].clone(), m[1].clone()], vec![m[2].clone(), m[3].clone()]], b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_maps_preserve_everything((a, b) in affine2(), which in 0usize..4) {
        let tri = standard_simplex(2);
        let cell = match which {
            0 => make_clough_tocher(&tri, &pt(&[(1, 5), (2, 7)])).unwrap(),
            1 => make_star_cell_2d(
                &Point::origin(2),
                &[pt(&[(1, 1), (0, 1)]), pt(&[(0, 1), (1, 1)]), pt(&[(-1, 1), (0, 1)]), pt(&[(0, 1), (-1, 1)])],
            )
            .unwrap(),
            2 => make_split_k_n(1, 2, &tri, &[SplitPoint { face: vec![0, 1, 2], point: pt(&[(1, 4), (1, 3)]) }]).unwrap(),
            _ => make_two_cell(2, &tri, &pt(&[(1, 4), (1, 3)]), 0).unwrap(),
        };
        let image = cell.apply_affine(&a, &b).unwrap();
        prop_assert!(validate_cell(&image).is_valid());
        prop_assert_eq!(image.interior_faces().len(), cell.interior_faces().len());
        if !cell.is_two_cell() {
            prop_assert_eq!(image.count_distinct_slopes_2d().unwrap(), cell.count_distinct_slopes_2d().unwrap());
        }
        for r in 0..=2 {
            let before = SplineSpace::new(&cell, r).unwrap();
            let after = SplineSpace::new(&image, r).unwrap();
            for d in r..=r + 3 {
                prop_assert_eq!(before.dimension(d), after.dimension(d));
            }
            let m1 = mos_oracle(&cell, r, default_cap(2, r)).unwrap();
            let m2 = mos_oracle(&image, r, default_cap(2, r)).unwrap();
            prop_assert_eq!((m1.mos, m1.exact), (m2.mos, m2.exact));
        }
    }

    #[test]
    fn degeneracy_is_monotone_for_random_centers(x in 1i64..30, y in 1i64..30) {
        prop_assume!(x + y < 30);
        let cell = make_clough_tocher(&standard_simplex(2), &pt(&[(x, 30), (y, 30)])).unwrap();
        for r in 0..=2 {
            let space = SplineSpace::new(&cell, r).unwrap();
            let flags: Vec<bool> = (r..=r + 4).map(|d| space.report(d).unwrap().degenerate).collect();
            prop_assert!(flags.windows(2).all(|w| w[0] || !w[1]));
        }
    }
}
