#![allow(dead_code)]

use qutrit_slocc::harness::complex_gaussian;
use qutrit_slocc::numerics::{condition_number, CMatrix, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn gaussian(seed: u64, rows: usize, cols: usize) -> CMatrix {
    complex_gaussian(&mut rng(seed), rows, cols)
}

/// Random invertible matrix with condition number at most `bound`.
pub fn invertible(seed: u64, n: usize, bound: f64) -> CMatrix {
    let mut r = rng(seed);
    loop {
        let m = complex_gaussian(&mut r, n, n);
        if condition_number(&m).unwrap() <= bound {
            return m;
        }
    }
}

/// Unitary from Gram-Schmidt on a Gaussian draw.
pub fn unitary(seed: u64, n: usize) -> CMatrix {
    let a = gaussian(seed, n, n);
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = a.column(j);
        for k in 0..j {
            let u = q.column(k);
            let p: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(&u) {
                *vi -= p * ui;
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= nrm;
        }
        q.set_column(j, &v);
    }
    q
}

/// Frobenius distance between two matrices.
pub fn dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).frobenius_norm()
}

/// Orthogonal projector onto the span of the (vectorized) matrices, from
/// the Gram matrix inverse; independent of the SVD kernel.
pub fn projector(vectors: &[Vec<C64>]) -> CMatrix {
    let n = vectors[0].len();
    let k = vectors.len();
    let a = CMatrix::from_fn(n, k, |i, j| vectors[j][i]);
    let gram = &a.adjoint() * &a;
    &(&a * &gram.inverse().unwrap()) * &a.adjoint()
}
