mod common;

use common::{c, gaussian, invertible, projector};
use proptest::prelude::*;
use qutrit_slocc::harness::{apply_ilo_tripartite, random_ilo, random_span};
use qutrit_slocc::numerics::{matrix_rank, CMatrix, TolerancePolicy, C64};
use qutrit_slocc::pencil::{
    analyze_span, product_vectors_in_span, rank_profile_dim2, rank_profile_dim3, right_subspace, RayCount,
    SearchBudget, SpanSignature,
};
use qutrit_slocc::states::{catalog, PureState};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn e(i: usize, j: usize) -> CMatrix {
    CMatrix::unit(3, 3, i, j)
}

fn profile(g: &[CMatrix]) -> SpanSignature {
    match g.len() {
        2 => rank_profile_dim2(&g[0], &g[1], &tol()).unwrap(),
        _ => rank_profile_dim3(&g[0], &g[1], &g[2], &tol(), &SearchBudget::default()).unwrap(),
    }
}

#[test]
fn right_subspace_examples() {
    let pi = right_subspace(&PureState::from_kets(&["000"]).unwrap(), &tol()).unwrap();
    assert_eq!(pi.dim, 1);
    assert!((pi.generators[0][(0, 0)].norm() - 1.0).abs() < 1e-15);
    assert_eq!(matrix_rank(&pi.generators[0], &tol()).unwrap(), 1);

    let pi = right_subspace(&PureState::from_kets(&["000", "011", "022"]).unwrap(), &tol()).unwrap();
    assert_eq!(pi.dim, 1);
    assert_eq!(matrix_rank(&pi.generators[0], &tol()).unwrap(), 3);

    let pi = right_subspace(&PureState::from_kets(&["000", "111"]).unwrap(), &tol()).unwrap();
    assert_eq!(pi.dim, 2);
    let span = projector(&pi.generators.iter().map(|g| g.as_slice().to_vec()).collect::<Vec<_>>());
    let want = projector(&[e(0, 0).as_slice().to_vec(), e(1, 1).as_slice().to_vec()]);
    assert!((&span - &want).frobenius_norm() < 1e-12);
}

#[test]
fn dim2_examples() {
    let s = profile(&[e(0, 0), e(1, 1)]);
    assert!(s.det_vanishes);
    assert_eq!((s.generic_rank, s.rank1_rays), (2, RayCount::Finite(2)));
    assert!(!s.common_left_factor && !s.common_right_factor);

    let s = profile(&[e(0, 0), e(0, 1)]);
    assert_eq!((s.generic_rank, s.rank1_rays), (1, RayCount::Infinite));
    assert!(s.common_left_factor);

    let s = profile(&[CMatrix::identity(3), CMatrix::diag(&[c(1.0), c(1.0), c(2.0)])]);
    assert!(!s.det_vanishes);
    assert_eq!(s.root_profile, vec![(1, 2), (2, 1)]);
    assert_eq!((s.rank1_rays, s.rank2_rays), (RayCount::Finite(1), RayCount::Finite(1)));
}

#[test]
fn dim3_examples() {
    let s = profile(&[e(0, 0), e(0, 1), e(0, 2)]);
    assert_eq!((s.generic_rank, s.rank1_rays), (1, RayCount::Infinite));
    assert!(s.common_left_factor);

    let s = profile(&[e(0, 0), e(1, 1), e(2, 2)]);
    assert_eq!(s.generic_rank, 3);
    assert_eq!(s.rank1_rays, RayCount::Finite(3));
    assert_eq!(s.rank2_rays, RayCount::Infinite);
    assert_eq!(s.line_profile, vec![1, 1, 1]);

    let sig = |kets: &[&str]| {
        let pi = right_subspace(&PureState::from_kets(kets).unwrap(), &tol()).unwrap();
        analyze_span(&pi, &tol(), &SearchBudget::default()).unwrap().signature
    };
    let p1p1p2 = sig(&["000", "011", "022", "101", "112", "202", "221"]);
    let p0p0p2 = sig(&["000", "011", "022", "101", "202"]);
    assert_ne!(p1p1p2, p0p0p2);
}

#[test]
fn product_vector_examples() {
    let pv = |kets: &[&str]| {
        let pi = right_subspace(&PureState::from_kets(kets).unwrap(), &tol()).unwrap();
        product_vectors_in_span(&pi, &tol(), &SearchBudget::default()).unwrap()
    };
    let one = pv(&["000"]);
    assert_eq!(one.len(), 1);
    assert!((one[0].phi[0].norm() - 1.0).abs() < 1e-14 && (one[0].psi[0].norm() - 1.0).abs() < 1e-14);
    assert!(pv(&["000", "011"]).is_empty());
    let ghz = pv(&["000", "111", "222"]);
    assert_eq!(ghz.len(), 3);
    for p in &ghz {
        // each factorization reproduces the span element
        let pi = right_subspace(&PureState::from_kets(&["000", "111", "222"]).unwrap(), &tol()).unwrap();
        let m = CMatrix::combine(&p.coeffs, &pi.generators);
        let rebuilt = CMatrix::from_fn(3, 3, |i, j| p.phi[i] * p.psi[j] * p.scale);
        let phase = m.inner(&rebuilt) / m.inner(&m);
        assert!((&m.scale(phase) - &rebuilt).frobenius_norm() < 1e-10 * p.scale);
    }
}

fn mix(g: &[CMatrix], seed: u64) -> Vec<CMatrix> {
    let a = invertible(seed, g.len(), 20.0);
    (0..g.len()).map(|i| CMatrix::combine(&a.row(i), g)).collect()
}

fn catalog_spans() -> Vec<Vec<CMatrix>> {
    catalog()
        .iter()
        .map(|e| right_subspace(&e.state, &tol()).unwrap().generators)
        .filter(|g| g.len() > 1)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn signature_is_basis_independent(seed in any::<u64>(), dim in 2usize..=3, pick in 0usize..40) {
        let spans = catalog_spans();
        let g = if pick < spans.len() && pick % 2 == 0 { spans[pick].clone() } else { random_span(seed, dim) };
        prop_assert_eq!(profile(&g), profile(&mix(&g, seed)));
    }

    #[test]
    fn signature_is_slocc_covariant(seed in any::<u64>(), dim in 2usize..=3, pick in 0usize..40) {
        let spans = catalog_spans();
        let g = if pick < spans.len() && pick % 2 == 0 { spans[pick].clone() } else { random_span(seed, dim) };
        let (a, b) = (invertible(seed ^ 1, 3, 50.0), invertible(seed ^ 2, 3, 50.0));
        let moved: Vec<CMatrix> = g.iter().map(|m| &(&a * m) * &b.transpose()).collect();
        prop_assert_eq!(profile(&g), profile(&moved));
    }

    #[test]
    fn right_subspace_transforms_by_conjugate_factors(seed in any::<u64>(), pick in 0usize..43) {
        let s = &catalog()[pick].state;
        let t = random_ilo(seed, 50.0).unwrap();
        let before = right_subspace(s, &tol()).unwrap();
        let after = right_subspace(&apply_ilo_tripartite(s, &t).unwrap(), &tol()).unwrap();
        prop_assert_eq!(before.dim, after.dim);
        let (f2, f3) = (t.f2.conj(), t.f3.conj());
        let moved: Vec<Vec<C64>> = before
            .generators
            .iter()
            .map(|m| (&(&f2 * m) * &f3.transpose()).as_slice().to_vec())
            .collect();
        let got: Vec<Vec<C64>> = after.generators.iter().map(|m| m.as_slice().to_vec()).collect();
        prop_assert!((&projector(&moved) - &projector(&got)).frobenius_norm() < 1e-8);
    }

    #[test]
    fn nondegenerate_pencil_roots_count_three(seed in any::<u64>()) {
        let g = random_span(seed, 2);
        let s = profile(&g);
        if !s.det_vanishes {
            prop_assert_eq!(s.root_profile.iter().map(|r| r.0).sum::<usize>(), 3);
        }
        prop_assert!(s.min_rank() <= 2);
    }

    #[test]
    fn common_left_factor_means_a_shared_column(seed in any::<u64>(), dim in 2usize..=3) {
        // phi (x) psi_k for random psi_k
        let phi = gaussian(seed, 3, 1);
        let g: Vec<CMatrix> = (0..dim).map(|k| &phi * &gaussian(seed ^ (k as u64 + 9), 1, 3)).collect();
        let s = profile(&g);
        prop_assert!(s.common_left_factor);
        prop_assert_eq!(s.rank1_rays, RayCount::Infinite);
        let m = CMatrix::combine(&gaussian(seed ^ 77, 1, dim).row(0), &g);
        let stacked = CMatrix::from_fn(3, 2, |i, j| if j == 0 { phi[(i, 0)] } else { m.column(0)[i] });
        prop_assert_eq!(matrix_rank(&stacked, &tol()).unwrap(), 1);
    }
}
