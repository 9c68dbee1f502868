use nalgebra::{Matrix3, Schur};

use super::matrix::{CMatrix, C64, ONE, ZERO};

/// Eigenvalues of a 3x3 complex matrix, sorted by real part then imaginary
/// part. Repeated eigenvalues appear with their algebraic multiplicity.
pub fn eigenvalues_3x3(m: &CMatrix) -> [C64; 3] {
    assert_eq!(m.shape(), (3, 3), "eigenvalues_3x3 needs a 3x3 matrix");
    let a = Matrix3::from_fn(|i, j| m[(i, j)]);
    let mut ev = match Schur::try_new(a, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
        Some(v) => [v[0], v[1], v[2]],
        None => {
            // Characteristic polynomial lambda^3 - t lambda^2 + s lambda - d.
            let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
            let s = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
                + m[(1, 1)] * m[(2, 2)]
                - m[(1, 2)] * m[(2, 1)];
            let roots = durand_kerner(&[ONE, -tr, s, -m.det()]);
            [roots[0], roots[1], roots[2]]
        }
    };
    sort_lex(&mut ev);
    ev
}

/// Sorts by real part, then imaginary part. Real parts within a relative
/// `1e-9` of each other count as equal so rounding noise cannot reorder
/// conjugate pairs.
pub(crate) fn sort_lex(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let before = |a: &C64, b: &C64| {
        if (a.re - b.re).abs() > 1e-9 * scale {
            a.re < b.re
        } else {
            a.im < b.im
        }
    };
    // insertion sort: the tolerant comparison is not a total order
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && before(&v[j], &v[j - 1]) {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
}

/// Roots of a monic-normalizable polynomial with coefficients in descending
/// powers. Used only as a fallback when Schur iteration fails.
pub(crate) fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let lead = coeffs[0];
    let c: Vec<C64> = coeffs.iter().map(|z| z / lead).collect();
    let n = c.len() - 1;
    let radius = 1.0 + c[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let eval = |x: C64| c.iter().fold(ZERO, |acc, a| acc * x + a);
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let denom: C64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            if denom == ZERO {
                z[i] += C64::new(1e-8, 1e-8);
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn diagonal_spectra() {
        let e = eigenvalues_3x3(&CMatrix::diag(&[r(3.0), r(1.0), r(2.0)]));
        for (got, want) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - r(want)).norm() < 1e-14);
        }
        let e = eigenvalues_3x3(&CMatrix::diag(&[r(1.0), r(2.0), r(1.0)]));
        for (got, want) in e.iter().zip([1.0, 1.0, 2.0]) {
            assert!((got - r(want)).norm() < 1e-14);
        }
    }

    #[test]
    fn cyclic_shift_gives_cube_roots_of_unity() {
        let p = CMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        let e = eigenvalues_3x3(&p);
        // lambda^3 = 1, sorted by real part then imaginary part
        let h = 3f64.sqrt() / 2.0;
        let want = [C64::new(-0.5, -h), C64::new(-0.5, h), r(1.0)];
        for (g, w) in e.iter().zip(want) {
            assert!((g - w).norm() < 1e-13, "{g} vs {w}");
        }
    }

    #[test]
    fn durand_kerner_recovers_simple_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let mut z = durand_kerner(&[r(1.0), r(0.0), r(-7.0), r(6.0)]);
        sort_lex(&mut z);
        for (g, w) in z.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((g - r(w)).norm() < 1e-10);
        }
    }
}
