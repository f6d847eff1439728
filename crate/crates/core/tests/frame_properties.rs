//! Least-squares frame machinery: truncated SVD, assembly, operator images
//! and the stationary solver.

mod common;

use common::{gaussian_families, small_grid, xs};
use fracframes::basis1d::Interval;
use fracframes::frame::{
    assemble, operator_image, tsvd_solve, BasisFamily, Cutoff, FamilyKind, LsSystem, OperatorSpec, Point, SumSpace,
};
use fracframes::linalg::{norm2, Matrix};
use fracframes::solver::{solve_stationary, Rhs};
use proptest::prelude::*;

/// Wraps a bare matrix in a system with a placeholder space of matching width.
fn bare_system(m: usize, n: usize, data: Vec<f64>) -> LsSystem<f64> {
    let fam = BasisFamily::weighted_jacobi(0.5, Interval::reference()).unwrap();
    let space = SumSpace::new(vec![fam], n).unwrap();
    let points = (0..m).map(|i| Point::D1(i as f64)).collect();
    LsSystem::from_parts(Matrix::from_row_major(m, n, data).unwrap(), points, space.as_image()).unwrap()
}

fn system_strategy() -> impl Strategy<Value = (usize, usize, Vec<f64>, Vec<f64>)> {
    (1usize..6, 6usize..14).prop_flat_map(|(n, m)| {
        (Just(m), Just(n), proptest::collection::vec(-1.0f64..1.0, m * n), proptest::collection::vec(-1.0f64..1.0, m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn truncated_solution_norm_bound((m, n, data, y) in system_strategy(), eps in 1e-6f64..0.5) {
        let sys = bare_system(m, n, data);
        let sol = tsvd_solve(&sys, &y, Cutoff::Absolute(eps)).unwrap();
        prop_assert!(norm2(&sol.coeffs) <= norm2(&y) / eps * (1.0 + 1e-12));
    }

    #[test]
    fn kept_rank_follows_the_cutoff((m, n, data, y) in system_strategy(), eps in 1e-6f64..0.5) {
        let sys = bare_system(m, n, data);
        let sol = tsvd_solve(&sys, &y, Cutoff::Absolute(eps)).unwrap();
        let sv = sys.svd().unwrap().singular_values();
        prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]) && sv.iter().all(|&v| v >= 0.0));
        prop_assert_eq!(sol.kept_rank, sv.iter().filter(|&&v| v >= eps).count());
        prop_assert!(sv[..sol.kept_rank].iter().all(|&v| v >= eps));
        prop_assert!(sv[sol.kept_rank..].iter().all(|&v| v < eps));
    }

    #[test]
    fn residual_grows_with_cutoff((m, n, data, y) in system_strategy(), e1 in 1e-6f64..0.5, e2 in 1e-6f64..0.5) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let sys = bare_system(m, n, data);
        let r_lo = tsvd_solve(&sys, &y, Cutoff::Absolute(lo)).unwrap().residual;
        let r_hi = tsvd_solve(&sys, &y, Cutoff::Absolute(hi)).unwrap().residual;
        prop_assert!(r_lo <= r_hi + 1e-13 * norm2(&y));
    }
}

#[test]
fn duplicated_columns_respect_norm_bound() {
    let base = [[1.0, 0.5], [0.3, -0.2], [0.7, 0.9], [-0.4, 0.1], [0.2, 0.6]];
    let data: Vec<f64> = base.iter().flat_map(|r| [r[0], r[1], r[0], r[1]]).collect();
    let sys = bare_system(5, 4, data);
    let y = vec![1.0, -2.0, 0.5, 0.25, 3.0];
    for eps in [1e-12, 1e-3, 0.5] {
        let sol = tsvd_solve(&sys, &y, Cutoff::Absolute(eps)).unwrap();
        assert!(sol.kept_rank <= 2);
        assert!(norm2(&sol.coeffs) <= norm2(&y) / eps);
    }
}

#[test]
fn orthogonal_columns_solve_exactly() {
    // columns e₁ and (e₂ + e₃)/√2
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sys = bare_system(3, 2, vec![1.0, 0.0, 0.0, h, 0.0, h]);
    let y = [2.0, -1.0, -1.0];
    let sol = tsvd_solve(&sys, &y, Cutoff::Absolute(1e-3)).unwrap();
    assert!(sol.residual <= 1e-12 * norm2(&y));
    assert!((sol.coeffs[0] - 2.0).abs() < 1e-14 && (sol.coeffs[1] + 2.0 * h).abs() < 1e-14);
    let zero = tsvd_solve(&sys, &[0.0; 3], Cutoff::default()).unwrap();
    assert!(zero.coeffs.iter().all(|&c| c == 0.0));
}

#[test]
fn assembly_is_reproducible() {
    let s = 1.0 / 3.0;
    let (ivs, points) = small_grid(101);
    let space = SumSpace::new(gaussian_families(s, &ivs), 60).unwrap();
    let image = operator_image(&space, &OperatorSpec::identity_plus(s)).unwrap();
    let a = assemble(&image, &points).unwrap();
    let b = assemble(&image, &points).unwrap();
    assert_eq!(a.matrix.as_slice(), b.matrix.as_slice());
    assert_eq!((a.rows(), a.cols()), (points.len(), 60));
}

#[test]
fn images_compose_by_adding_exponents() {
    let ivs = common::tiling(-3.0, 3.0, 3);
    let mut fams: Vec<_> = ivs.iter().map(|iv| BasisFamily::weighted_jacobi(0.25, *iv).unwrap()).collect();
    fams.extend(ivs.iter().map(|iv| BasisFamily::extended_jacobi(0.25, 0.1, *iv, 0).unwrap()));
    let space = SumSpace::new(fams, 30).unwrap();
    let (s, t) = (0.2, 0.3);
    let twice =
        operator_image(&space, &OperatorSpec::fractional(t)).unwrap().apply(&OperatorSpec::fractional(s)).unwrap();
    let once = operator_image(&space, &OperatorSpec::fractional(s + t)).unwrap();
    for f in 0..space.families().len() {
        let (p2, p1) = (twice.parts(f), once.parts(f));
        assert_eq!(p2.len(), p1.len());
        for ((c2, g2), (c1, g1)) in p2.iter().zip(p1) {
            assert!((c2 - c1).abs() <= 1e-14 * c1.abs(), "family {f}: {c2} vs {c1}");
            assert_eq!(g2.geometry, g1.geometry);
            match (g2.kind, g1.kind) {
                (FamilyKind::ExtendedJacobi { a: a2, s: s2 }, FamilyKind::ExtendedJacobi { a: a1, s: s1 }) => {
                    assert_eq!(a2, a1);
                    assert!((s2 - s1).abs() <= 1e-14);
                }
                other => panic!("unexpected image kinds {other:?}"),
            }
        }
    }
}

#[test]
fn identity_image_is_the_space() {
    let (ivs, _) = small_grid(10);
    let space = SumSpace::new(gaussian_families(0.4, &ivs), 12).unwrap();
    let image = operator_image(&space, &OperatorSpec::identity()).unwrap();
    for (f, fam) in space.families().iter().enumerate() {
        assert_eq!(image.parts(f), &[(1.0, *fam)]);
    }
}

#[test]
fn planted_coefficients_are_read_off() {
    let s = 0.4;
    let iv = Interval::new(-1.0, 1.0).unwrap();
    let fams = vec![BasisFamily::extended_jacobi(-s, -s, iv, 0).unwrap(), BasisFamily::weighted_jacobi(s, iv).unwrap()];
    let pads = (Interval::new(-6.0, -1.0).unwrap(), Interval::new(1.0, 6.0).unwrap());
    let points = fracframes::frame::collocation_grid_1d(&[iv], 200, 1e-2, Some(pads)).unwrap();
    let space = SumSpace::new(fams, 16).unwrap();
    let op = OperatorSpec::identity_plus(s);
    let sys = assemble(&operator_image(&space, &op).unwrap(), &points).unwrap();
    let mut v = vec![0.0f64; space.len()];
    v[0] = 1.0;
    v[3] = -0.5;
    v[8] = 0.25;
    v[13] = 2.0;
    let f = sys.matrix.matvec(&v);
    let sol = solve_stationary(&op, Rhs::Samples(&f), &space, &points, Cutoff::default()).unwrap();
    assert_eq!(sol.diagnostics.kept_rank, space.len(), "planted test needs a full-rank system");
    let err = sol.coeffs.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err <= 1e-8, "recovery error {err:e}");
}

#[test]
fn solves_are_linear_in_the_data() {
    let s = 1.0 / 3.0;
    let (ivs, points) = small_grid(201);
    let space = SumSpace::new(gaussian_families(s, &ivs), 60).unwrap();
    let op = OperatorSpec::identity_plus(s);
    let sys = assemble(&operator_image(&space, &op).unwrap(), &points).unwrap();
    let x = xs(&points);
    let f1: Vec<f64> = x.iter().map(|x| (-x * x).exp()).collect();
    let f2: Vec<f64> = x.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
    let (alpha, beta) = (0.7, -1.3);
    let f12: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| alpha * a + beta * b).collect();
    let u1 = tsvd_solve(&sys, &f1, Cutoff::default()).unwrap();
    let u2 = tsvd_solve(&sys, &f2, Cutoff::default()).unwrap();
    let u12 = tsvd_solve(&sys, &f12, Cutoff::default()).unwrap();
    assert!(u1.kept_rank == u2.kept_rank && u2.kept_rank == u12.kept_rank);
    let scale = u12.coeff_inf_norm.max(1.0);
    for ((a, b), c) in u1.coeffs.iter().zip(&u2.coeffs).zip(&u12.coeffs) {
        assert!((alpha * a + beta * b - c).abs() <= 1e-9 * scale);
    }
}

#[test]
fn even_data_gives_even_solution() {
    let s = 0.3;
    let iv = Interval::new(-1.0, 1.0).unwrap();
    let fams = vec![BasisFamily::extended_jacobi(-s, -s, iv, 0).unwrap(), BasisFamily::weighted_jacobi(s, iv).unwrap()];
    let pads = (Interval::new(-6.0, -1.0).unwrap(), Interval::new(1.0, 6.0).unwrap());
    let points = fracframes::frame::collocation_grid_1d(&[iv], 301, 1e-2, Some(pads)).unwrap();
    let space = SumSpace::new(fams, 40).unwrap();
    let f = |p: Point<f64>| match p {
        Point::D1(x) => (-x * x).exp() + fracframes::solver::frac_lap_gaussian_1d(s, x).unwrap(),
        _ => unreachable!(),
    };
    let sol = solve_stationary(&OperatorSpec::identity_plus(s), Rhs::Function(&f), &space, &points, Cutoff::default())
        .unwrap();
    let cmax = sol.diagnostics.coeff_inf_norm;
    for (j, &(_, degree)) in space.columns().iter().enumerate() {
        if degree % 2 == 1 {
            assert!(sol.coeffs[j].abs() <= 1e-9 * cmax, "degree {degree}: {}", sol.coeffs[j]);
        }
    }
}

#[test]
fn one_image_column_expands_to_a_unit_vector() {
    let s = 0.4;
    let iv = Interval::new(-1.0, 1.0).unwrap();
    let fams = vec![BasisFamily::extended_jacobi(-s, -s, iv, 0).unwrap(), BasisFamily::weighted_jacobi(s, iv).unwrap()];
    let pads = (Interval::new(-6.0, -1.0).unwrap(), Interval::new(1.0, 6.0).unwrap());
    let points = fracframes::frame::collocation_grid_1d(&[iv], 100, 1e-2, Some(pads)).unwrap();
    let space = SumSpace::new(fams, 10).unwrap();
    let sys = assemble(&operator_image(&space, &OperatorSpec::identity_plus(s)).unwrap(), &points).unwrap();
    let col = sys.matrix.column(5);
    let sol = tsvd_solve(&sys, &col, Cutoff::default()).unwrap();
    assert!(sol.residual <= 1e-10);
    for (j, c) in sol.coeffs.iter().enumerate() {
        let want: f64 = if j == 5 { 1.0 } else { 0.0 };
        assert!((c - want).abs() <= 1e-8, "column {j}: {c}");
    }
}

#[test]
fn column_count_and_order() {
    let (ivs, _) = small_grid(10);
    let space = SumSpace::new(gaussian_families(0.4, &ivs), 14).unwrap();
    assert_eq!(space.len(), 14);
    // degree 0 of the three extended families, then the three weighted ones
    let first: Vec<(usize, usize)> = space.columns()[..7].to_vec();
    assert_eq!(first, vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0), (0, 1)]);
}
