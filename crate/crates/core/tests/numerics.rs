mod common;

use common::{c, gaussian, rng, unitary};
use proptest::prelude::*;
use qutrit_slocc::harness::random_rank_matrix;
use qutrit_slocc::numerics::{
    cubic_form_roots, det_form, eigenvalues_3x3, matrix_rank, numerical_rank, singular_values, svd, unitarity_defect,
    CMatrix, FormRoots, HomogeneousForm, TolerancePolicy, C64,
};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Characteristic polynomial `l^3 - a l^2 + b l - d` of a 3x3 matrix from
/// its trace, principal 2x2 minors and determinant.
fn char_poly(m: &CMatrix) -> [C64; 3] {
    let a = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    let minor = |i: usize, j: usize| m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
    let b = minor(0, 1) + minor(0, 2) + minor(1, 2);
    [a, b, m.det()]
}

#[test]
fn spin_triplet_matrix_has_full_rank() {
    let s = 1.0 / 6f64.sqrt();
    let m = CMatrix::from_real_rows(&[[s, s, 0.0], [s, 0.0, s], [0.0, s, s]]);
    let sv = svd(&m, &tol()).unwrap();
    // every sigma^2 must be a root of the characteristic polynomial of C^H C
    let gram = &m.adjoint() * &m;
    let [a, b, d] = char_poly(&gram);
    for s2 in sv.singulars.iter().map(|x| c(x * x)) {
        let r = s2 * s2 * s2 - a * s2 * s2 + b * s2 - d;
        assert!(r.norm() < 1e-14, "{r}");
    }
    assert_eq!(numerical_rank(&sv.singulars, &tol()), 3);
    assert!((m.det() - c(-2.0 * s * s * s)).norm() < 1e-15);
}

#[test]
fn diagonal_and_identity_examples() {
    let sv = singular_values(&CMatrix::identity(3)).unwrap();
    assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-15));
    let d = CMatrix::diag(&[c(3.0), c(0.5), c(0.0)]);
    let sv = singular_values(&d).unwrap();
    assert!((sv[0] - 3.0).abs() < 1e-15 && (sv[1] - 0.5).abs() < 1e-15 && sv[2] == 0.0);
    assert_eq!(matrix_rank(&d, &tol()).unwrap(), 2);
    assert_eq!(numerical_rank(&[1.0, 1e-3, 1e-15], &tol()), 2);
    assert_eq!(numerical_rank(&[0.0, 0.0, 0.0], &tol()), 0);
}

#[test]
fn cubic_root_examples() {
    let roots = |d: [f64; 3]| match cubic_form_roots(
        &det_form(&[CMatrix::identity(3), CMatrix::diag(&[c(d[0]), c(d[1]), c(d[2])])]),
        &tol(),
    ) {
        FormRoots::Roots(v) => v
            .iter()
            .map(|r| (r.ratio().unwrap(), r.multiplicity))
            .collect::<Vec<_>>(),
        FormRoots::IdenticallyZero => panic!("nonzero form"),
    };
    let r = roots([1.0, 2.0, 3.0]);
    assert_eq!(r.len(), 3);
    for (root, want) in r.iter().zip([-3.0, -2.0, -1.0]) {
        assert!((root.0 - c(want)).norm() < 1e-10 && root.1 == 1);
    }
    let r = roots([1.0, 1.0, 2.0]);
    assert_eq!(r.len(), 2);
    assert!((r[0].0 - c(-2.0)).norm() < 1e-10 && r[0].1 == 1);
    assert!((r[1].0 - c(-1.0)).norm() < 1e-10 && r[1].1 == 2);
    let z = det_form(&[CMatrix::unit(3, 3, 1, 1), CMatrix::unit(3, 3, 2, 2)]);
    assert_eq!(cubic_form_roots(&z, &tol()), FormRoots::IdenticallyZero);
}

fn check_svd(m: &CMatrix) {
    let d = svd(m, &tol()).unwrap();
    let scale = m.frobenius_norm();
    assert!((&d.reconstruct() - m).frobenius_norm() <= 1e-11 * scale);
    assert!(unitarity_defect(&d.left) <= 1e-11);
    assert!(unitarity_defect(&d.right) <= 1e-11);
    assert!(d.singulars.windows(2).all(|w| w[0] >= w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn svd_reconstructs_square_and_wide(seed in any::<u64>(), rank in 1usize..=3) {
        let mut r = rng(seed);
        check_svd(&random_rank_matrix(&mut r, 3, rank));
        check_svd(&gaussian(seed ^ 1, 3, 9));
        check_svd(&gaussian(seed ^ 2, 9, 3));
    }

    #[test]
    fn rank_is_unitarily_invariant(seed in any::<u64>(), rank in 0usize..=3) {
        let m = if rank == 0 { CMatrix::zeros(3, 3) } else { random_rank_matrix(&mut rng(seed), 3, rank) };
        let moved = &(&unitary(seed ^ 3, 3) * &m) * &unitary(seed ^ 4, 3);
        prop_assert_eq!(matrix_rank(&m, &tol()).unwrap(), rank);
        prop_assert_eq!(matrix_rank(&moved, &tol()).unwrap(), rank);
    }

    #[test]
    fn eigenvalue_product_is_determinant(seed in any::<u64>()) {
        let m = gaussian(seed, 3, 3);
        let ev = eigenvalues_3x3(&m);
        let det = m.det();
        let prod = ev[0] * ev[1] * ev[2];
        prop_assert!((prod - det).norm() <= 1e-9 * det.norm().max(1e-300));
        let n3 = m.frobenius_norm().powi(3);
        for l in ev {
            let shifted = &m - &CMatrix::diag(&[l, l, l]);
            prop_assert!(shifted.det().norm() <= 1e-12 * n3);
        }
    }

    #[test]
    fn cubic_roots_satisfy_the_form(seed in any::<u64>(), planted in 0usize..3) {
        let g = gaussian(seed, 1, 6);
        let v = g.as_slice();
        // product of three linear forms, with `planted` of them repeated
        let lin = [[v[0], v[1]], [v[2], v[3]], [v[4], v[5]]];
        let pick = match planted { 0 => [0, 1, 2], 1 => [0, 0, 1], _ => [0, 0, 0] };
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for &k in &pick {
            let [a, b] = lin[k];
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, x) in coeffs.iter().enumerate() {
                next[i] += x * a;
                next[i + 1] += x * b;
            }
            coeffs = next;
        }
        let f = HomogeneousForm::new(2, 3, coeffs.clone()).unwrap();
        let big = f.max_abs();
        match cubic_form_roots(&f, &tol()) {
            FormRoots::IdenticallyZero => prop_assert!(false, "nonzero cubic"),
            FormRoots::Roots(roots) => {
                prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 3);
                prop_assert_eq!(roots.len(), 3 - planted);
                for r in roots {
                    prop_assert!(f.evaluate(&r.point).norm() <= 1e-8 * big);
                }
            }
        }
    }
}
