use supersmooth_core::formulas::{
    alfeld_a, dim_2d_cell, dim_2d_cell_binomial, dim_2d_cell_sum, dim_alfeld, dim_facet_aligned, dim_pi, dim_two_cell,
    facet_p, mos_2d, mos_alfeld, mos_facet, mos_two_cell, wf_bounds,
};

/// Largest `d >= r` with `dim(d) == dim Pi_d`, scanning up to `limit`.
fn last_degenerate(n: usize, r: usize, limit: usize, dim: impl Fn(usize) -> usize) -> Option<usize> {
    (r..=limit).find(|&d| dim(d) != dim_pi(n, d as i64)).map(|d| d - 1)
}

#[test]
fn planar_forms_agree() {
    for m in 3..=8 {
        for m_v in 2..=m {
            for r in 0..=6 {
                for d in r..=r + 6 {
                    assert_eq!(
                        dim_2d_cell_sum(m, m_v, d, r),
                        dim_2d_cell_binomial(m, m_v, d, r),
                        "m={m} m_v={m_v} d={d} r={r}"
                    );
                }
            }
        }
    }
}

#[test]
fn alfeld_plane_is_three_triangle_cell() {
    for r in 0..=6 {
        for d in r..=r + 6 {
            assert_eq!(dim_alfeld(2, d, r).unwrap(), dim_2d_cell(3, 3, d, r).unwrap());
        }
    }
}

#[test]
fn dimension_formulas_imply_mos_formulas() {
    for r in 0..=5 {
        for m in 3..=7 {
            for m_v in 2..=m {
                let mos = last_degenerate(2, r, 40, |d| dim_2d_cell(m, m_v, d, r).unwrap());
                assert_eq!(mos, Some(mos_2d(m, m_v, r).unwrap()), "m={m} m_v={m_v} r={r}");
            }
        }
        for n in 2..=4 {
            let limit = 60;
            let alfeld = last_degenerate(n, r, limit, |d| dim_alfeld(n, d, r).unwrap());
            assert_eq!(alfeld, Some(mos_alfeld(n, r).unwrap()), "alfeld n={n} r={r}");
            let facet = last_degenerate(n, r, limit, |d| dim_facet_aligned(n, d, r).unwrap());
            assert_eq!(facet, Some(mos_facet(n, r).unwrap()), "facet n={n} r={r}");
            let two = last_degenerate(n, r, limit, |d| dim_two_cell(n, d, r).unwrap());
            assert_eq!(two, Some(mos_two_cell(n, r).unwrap()), "2-cell n={n} r={r}");
        }
    }
}

#[test]
fn generic_star_supersmooth_threshold() {
    for m in 3..=10 {
        for r in 0..=12 {
            let supersmooth = mos_2d(m, m, r).unwrap() > r;
            assert_eq!(supersmooth, r + 2 >= m, "m={m} r={r}");
        }
    }
}

#[test]
fn correction_terms_grow_with_degree() {
    for n in 2..=5 {
        for r in 0..=5 {
            for d in r..30 {
                assert!(alfeld_a(n, d, r).unwrap() <= alfeld_a(n, d + 1, r).unwrap());
                assert!(facet_p(n, d, r).unwrap() <= facet_p(n, d + 1, r).unwrap());
            }
        }
    }
}

#[test]
fn bounds_are_ordered() {
    for n in 3..=6 {
        for k in 2..=n {
            for r in 0..=8 {
                let (lo, hi) = wf_bounds(k, n, r).unwrap();
                assert!(lo <= hi);
            }
        }
    }
}
