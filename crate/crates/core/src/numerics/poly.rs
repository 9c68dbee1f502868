//! Homogeneous polynomial forms in two or three variables, determinant and
//! minor forms of matrix pencils, and projective root finding for binary
//! forms of degree at most three.

use nalgebra::{DMatrix, Schur};

use super::eigen::durand_kerner;
use super::matrix::{vec_norm, CMatrix, C64, ONE, ZERO};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};

/// Exponent vectors of all degree-`degree` monomials in `num_vars` variables,
/// in descending lexicographic order (`x^d` first). Unused slots are zero.
pub fn monomials(num_vars: usize, degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    match num_vars {
        1 => out.push([degree, 0, 0]),
        2 => {
            for i in 0..=degree {
                out.push([degree - i, i, 0]);
            }
        }
        3 => {
            for a in (0..=degree).rev() {
                for b in (0..=degree - a).rev() {
                    out.push([a, b, degree - a - b]);
                }
            }
        }
        _ => panic!("forms in {num_vars} variables are not supported"),
    }
    out
}

/// A homogeneous polynomial with complex coefficients, indexed by the
/// monomial order of [`monomials`].
///
/// `scale` records the magnitude of the data the form was built from, so
/// that "identically zero" can be judged relative to the input.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: usize,
    coeffs: Vec<C64>,
    scale: f64,
}

impl HomogeneousForm {
    pub fn new(num_vars: usize, degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        if !(1..=3).contains(&num_vars) {
            return Err(Error::Shape {
                expected: "1 to 3 variables".into(),
                found: num_vars.to_string(),
            });
        }
        let n = monomials(num_vars, degree).len();
        if coeffs.len() != n {
            return Err(Error::Shape {
                expected: format!("{n} coefficients"),
                found: coeffs.len().to_string(),
            });
        }
        Ok(Self {
            num_vars,
            degree,
            coeffs,
            scale: 1.0,
        })
    }

    pub fn zero(num_vars: usize, degree: usize) -> Self {
        let n = monomials(num_vars, degree).len();
        Self {
            num_vars,
            degree,
            coeffs: vec![ZERO; n],
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn index_of(&self, e: [usize; 3]) -> usize {
        monomials(self.num_vars, self.degree)
            .iter()
            .position(|m| *m == e)
            .expect("exponent of matching degree")
    }

    pub fn coefficient(&self, e: [usize; 3]) -> C64 {
        self.coeffs[self.index_of(e)]
    }

    fn add_to(&mut self, e: [usize; 3], v: C64) {
        let i = self.index_of(e);
        self.coeffs[i] += v;
    }

    pub fn evaluate(&self, p: &[C64]) -> C64 {
        monomials(self.num_vars, self.degree)
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| c * monomial_value(e, p))
            .sum()
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> HomogeneousForm {
        assert!(self.degree > 0 && var < self.num_vars);
        let mut out = HomogeneousForm::zero(self.num_vars, self.degree - 1);
        out.scale = self.scale;
        for (e, c) in monomials(self.num_vars, self.degree).iter().zip(&self.coeffs) {
            if e[var] > 0 {
                let mut d = *e;
                d[var] -= 1;
                out.add_to(d, c * e[var] as f64);
            }
        }
        out
    }

    pub fn gradient(&self, p: &[C64]) -> Vec<C64> {
        (0..self.num_vars)
            .map(|v| {
                monomials(self.num_vars, self.degree)
                    .iter()
                    .zip(&self.coeffs)
                    .filter(|(e, _)| e[v] > 0)
                    .map(|(e, c)| {
                        let mut d = *e;
                        d[v] -= 1;
                        c * e[v] as f64 * monomial_value(&d, p)
                    })
                    .sum()
            })
            .collect()
    }

    /// Coefficients of the binary form obtained by restricting to the line
    /// `s * a + t * b`, as a form in `(s, t)`.
    pub fn restrict_to_line(&self, a: &[C64], b: &[C64]) -> HomogeneousForm {
        let mut out = vec![ZERO; self.degree + 1];
        for (e, c) in monomials(self.num_vars, self.degree).iter().zip(&self.coeffs) {
            // product over variables of (a_v s + b_v t)^{e_v}, as polynomial in t
            let mut poly = vec![*c];
            for v in 0..self.num_vars {
                for _ in 0..e[v] {
                    poly = poly_mul(&poly, &[a[v], b[v]]);
                }
            }
            for (k, z) in poly.iter().enumerate() {
                out[k] += z;
            }
        }
        HomogeneousForm {
            num_vars: 2,
            degree: self.degree,
            coeffs: out,
            scale: self.scale,
        }
    }
}

fn monomial_value(e: &[usize; 3], p: &[C64]) -> C64 {
    let mut v = ONE;
    for (k, &n) in e.iter().enumerate() {
        for _ in 0..n {
            v *= p[k];
        }
    }
    v
}

/// Multiplies polynomials given by ascending coefficient lists.
fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `det(sum_l x_l M_l)` for two or three 3x3 generators, expanded exactly by
/// distributing the columns over the generators.
pub fn det_form(gens: &[CMatrix]) -> HomogeneousForm {
    let nv = gens.len();
    assert!((2..=3).contains(&nv), "det_form takes 2 or 3 generators");
    let mut out = HomogeneousForm::zero(nv, 3);
    for s0 in 0..nv {
        for s1 in 0..nv {
            for s2 in 0..nv {
                let m = CMatrix::from_fn(3, 3, |i, j| gens[[s0, s1, s2][j]][(i, j)]);
                let mut e = [0usize; 3];
                e[s0] += 1;
                e[s1] += 1;
                e[s2] += 1;
                out.add_to(e, m.det());
            }
        }
    }
    let s = gens.iter().map(|g| g.frobenius_norm()).fold(0.0, f64::max);
    out.scale = s * s * s;
    out
}

/// The nine 2x2 minors of `sum_l x_l M_l` as quadratic forms.
pub fn minor_forms(gens: &[CMatrix]) -> Vec<HomogeneousForm> {
    let nv = gens.len();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let s = gens.iter().map(|g| g.frobenius_norm()).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(9);
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            let mut f = HomogeneousForm::zero(nv, 2);
            for l in 0..nv {
                for m in 0..nv {
                    let v = gens[l][(a, c)] * gens[m][(b, d)] - gens[l][(a, d)] * gens[m][(b, c)];
                    let mut e = [0usize; 3];
                    e[l] += 1;
                    e[m] += 1;
                    f.add_to(e, v);
                }
            }
            f.scale = s * s;
            out.push(f);
        }
    }
    out
}

/// A root of a binary form as a unit vector `(x, y)` with its multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveRoot {
    pub point: [C64; 2],
    pub multiplicity: usize,
}

impl ProjectiveRoot {
    /// Affine coordinate `x / y`, or `None` for the point at infinity.
    pub fn ratio(&self) -> Option<C64> {
        if self.point[1].norm() < 1e-300 {
            None
        } else {
            Some(self.point[0] / self.point[1])
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormRoots {
    IdenticallyZero,
    Roots(Vec<ProjectiveRoot>),
}

/// Projective roots of a binary cubic with multiplicities.
pub fn cubic_form_roots(f: &HomogeneousForm, tol: &TolerancePolicy) -> FormRoots {
    assert!(f.num_vars == 2 && f.degree == 3, "binary cubic expected");
    binary_form_roots(f, tol)
}

/// Projective roots of a binary form of degree 1 to 3.
///
/// The form is dehomogenized along the sampled direction where it is
/// largest, so no root sits at infinity in the working chart. Roots are
/// found as companion-matrix eigenvalues; a group of computed roots is
/// merged into one multiple root when every derivative below the group size
/// vanishes at the group mean. The mean of a perturbed multiple root is far
/// more accurate than its individual members.
pub fn binary_form_roots(f: &HomogeneousForm, tol: &TolerancePolicy) -> FormRoots {
    assert_eq!(f.num_vars, 2);
    let d = f.degree;
    assert!((1..=3).contains(&d));
    let big = f.max_abs();
    if big <= tol.form_zero * f.scale || big == 0.0 {
        return FormRoots::IdenticallyZero;
    }
    let norm: Vec<C64> = f.coeffs.iter().map(|c| c / big).collect();
    let g = HomogeneousForm {
        num_vars: 2,
        degree: d,
        coeffs: norm,
        scale: 1.0,
    };

    // direction with the largest value: chart p(t) = g(t * dir + perp)
    let mut best = (0.0, [ONE, ZERO]);
    for k in 0..8 {
        let th = std::f64::consts::PI * k as f64 / 8.0 + 0.1;
        let dir = [C64::new(th.cos(), 0.0), C64::new(th.sin(), 0.0)];
        let v = g.evaluate(&dir).norm();
        if v > best.0 {
            best = (v, dir);
        }
    }
    let dir = best.1;
    let perp = [-dir[1], dir[0]];
    // restrict_to_line gives coefficients in ascending powers of the second
    // line parameter; use (perp, dir) so the variable t multiplies dir.
    let line = g.restrict_to_line(&perp, &dir);
    let asc = line.coeffs; // p(t) = sum asc[k] t^k, degree d, asc[d] = g(dir) != 0
    let lead = asc[d];
    let monic_desc: Vec<C64> = (0..=d).rev().map(|k| asc[k] / lead).collect();

    let raw = companion_roots(&monic_desc);
    let pscale: f64 = asc.iter().map(|c| c.norm()).sum::<f64>() / lead.norm();
    let eval_deriv = |t: C64, j: usize| -> C64 {
        // j-th derivative / j! of the monic polynomial
        let mut acc = ZERO;
        for k in j..=d {
            let coef = asc[k] / lead * binom(k, j) as f64;
            acc += coef * t.powu((k - j) as u32);
        }
        acc
    };

    let mut best_groups: Option<(usize, f64, Vec<Vec<usize>>)> = None;
    for part in set_partitions(raw.len()) {
        let mut ok = true;
        let mut worst = 0.0f64;
        for grp in &part {
            if grp.len() < 2 {
                continue;
            }
            let mean: C64 = grp.iter().map(|&i| raw[i]).sum::<C64>() / grp.len() as f64;
            let s = pscale * (1.0 + mean.norm()).powi(d as i32);
            for j in 0..grp.len() {
                let r = eval_deriv(mean, j).norm() / s;
                worst = worst.max(r);
                if r > tol.root_cluster {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        let better = match &best_groups {
            None => true,
            Some((n, w, _)) => part.len() < *n || (part.len() == *n && worst < *w),
        };
        if better {
            best_groups = Some((part.len(), worst, part));
        }
    }
    let groups = best_groups
        .map(|b| b.2)
        .unwrap_or_else(|| (0..raw.len()).map(|i| vec![i]).collect());

    let mut roots: Vec<ProjectiveRoot> = groups
        .iter()
        .map(|grp| {
            let t: C64 = grp.iter().map(|&i| raw[i]).sum::<C64>() / grp.len() as f64;
            let p = [t * dir[0] + perp[0], t * dir[1] + perp[1]];
            ProjectiveRoot {
                point: normalize_projective(&p),
                multiplicity: grp.len(),
            }
        })
        .collect();
    sort_roots(&mut roots);
    FormRoots::Roots(roots)
}

/// Scales a nonzero vector to unit norm with its largest component real positive.
pub fn normalize_projective(p: &[C64]) -> [C64; 2] {
    let n = vec_norm(p);
    let k = if p[0].norm() >= p[1].norm() { 0 } else { 1 };
    let ph = p[k].conj() / p[k].norm();
    [p[0] * ph / n, p[1] * ph / n]
}

/// Orders roots by the affine ratio `x / y` (real part, then imaginary
/// part), with the point at infinity last.
fn sort_roots(roots: &mut [ProjectiveRoot]) {
    let key = |p: &ProjectiveRoot| -> C64 {
        if p.point[1].norm() <= 1e-14 * p.point[0].norm() {
            C64::new(f64::INFINITY, 0.0)
        } else {
            p.point[0] / p.point[1]
        }
    };
    let before = |a: &ProjectiveRoot, b: &ProjectiveRoot| {
        let (ka, kb) = (key(a), key(b));
        let scale = 1.0 + ka.norm().min(kb.norm());
        if ka.re.is_infinite() || kb.re.is_infinite() {
            kb.re.is_infinite() && !ka.re.is_infinite()
        } else if (ka.re - kb.re).abs() > 1e-9 * scale {
            ka.re < kb.re
        } else {
            ka.im < kb.im
        }
    };
    for i in 1..roots.len() {
        let mut j = i;
        while j > 0 && before(&roots[j], &roots[j - 1]) {
            roots.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Eigenvalues of the companion matrix of a monic polynomial given in
/// descending powers (leading 1 included).
pub(crate) fn companion_roots(monic_desc: &[C64]) -> Vec<C64> {
    let d = monic_desc.len() - 1;
    if d == 1 {
        return vec![-monic_desc[1]];
    }
    let mut c = DMatrix::<C64>::zeros(d, d);
    for j in 0..d {
        c[(0, j)] = -monic_desc[j + 1];
    }
    for i in 1..d {
        c[(i, i - 1)] = ONE;
    }
    match Schur::try_new(c, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
        Some(v) => v.iter().copied().collect(),
        None => durand_kerner(monic_desc),
    }
}

/// All set partitions of `{0, .., n-1}` for `n <= 3`.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    match n {
        0 => vec![vec![]],
        1 => vec![vec![vec![0]]],
        2 => vec![vec![vec![0, 1]], vec![vec![0], vec![1]]],
        3 => vec![
            vec![vec![0, 1, 2]],
            vec![vec![0, 1], vec![2]],
            vec![vec![0, 2], vec![1]],
            vec![vec![1, 2], vec![0]],
            vec![vec![0], vec![1], vec![2]],
        ],
        _ => panic!("partitions of more than 3 roots are not needed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn ratios(roots: &FormRoots) -> Vec<(C64, usize)> {
        match roots {
            FormRoots::IdenticallyZero => panic!("unexpected zero form"),
            FormRoots::Roots(v) => v.iter().map(|p| (p.ratio().unwrap(), p.multiplicity)).collect(),
        }
    }

    fn diag(v: [f64; 3]) -> CMatrix {
        CMatrix::diag(&[r(v[0]), r(v[1]), r(v[2])])
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3).len(), 4);
        assert_eq!(monomials(3, 3).len(), 10);
        assert_eq!(monomials(3, 2).len(), 6);
        assert!(HomogeneousForm::new(3, 3, vec![ZERO; 9]).is_err());
    }

    #[test]
    fn det_form_of_diagonal_pencil() {
        // det(x I + y diag(1,2,3)) = (x+y)(x+2y)(x+3y) = x^3 + 6x^2y + 11xy^2 + 6y^3
        let f = det_form(&[CMatrix::identity(3), diag([1.0, 2.0, 3.0])]);
        let want = [1.0, 6.0, 11.0, 6.0];
        for (c, w) in f.coeffs().iter().zip(want) {
            assert!((c - r(w)).norm() < 1e-13);
        }
    }

    #[test]
    fn distinct_roots() {
        let f = det_form(&[CMatrix::identity(3), diag([1.0, 2.0, 3.0])]);
        let got = ratios(&cubic_form_roots(&f, &TolerancePolicy::default()));
        assert_eq!(got.len(), 3);
        for ((t, m), w) in got.iter().zip([-3.0, -2.0, -1.0]) {
            assert_eq!(*m, 1);
            assert!((t - r(w)).norm() < 1e-10, "{t}");
        }
    }

    #[test]
    fn repeated_root_is_merged() {
        // (x+y)^2 (x+2y)
        let f = det_form(&[CMatrix::identity(3), diag([1.0, 1.0, 2.0])]);
        let got = ratios(&cubic_form_roots(&f, &TolerancePolicy::default()));
        assert_eq!(got.len(), 2);
        assert!((got[0].0 - r(-2.0)).norm() < 1e-10 && got[0].1 == 1);
        assert!((got[1].0 - r(-1.0)).norm() < 1e-10 && got[1].1 == 2);
    }

    #[test]
    fn defective_triple_root_is_merged() {
        // det(x I + y J) with J a 3x3 nilpotent Jordan block: x^3
        let j = CMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]);
        let f = det_form(&[CMatrix::identity(3), j]);
        match cubic_form_roots(&f, &TolerancePolicy::default()) {
            FormRoots::Roots(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!(v[0].multiplicity, 3);
                assert!(v[0].point[0].norm() < 1e-12);
            }
            FormRoots::IdenticallyZero => panic!(),
        }
    }

    #[test]
    fn identically_zero_pencil() {
        let f = det_form(&[CMatrix::unit(3, 3, 0, 0), CMatrix::unit(3, 3, 1, 1)]);
        assert_eq!(
            cubic_form_roots(&f, &TolerancePolicy::default()),
            FormRoots::IdenticallyZero
        );
    }

    #[test]
    fn root_at_infinity() {
        // x * y^2 : roots (0:1) simple and (1:0) double
        let f = HomogeneousForm::new(2, 3, vec![r(0.0), r(0.0), r(1.0), r(0.0)]).unwrap();
        match cubic_form_roots(&f, &TolerancePolicy::default()) {
            FormRoots::Roots(v) => {
                assert_eq!(v.len(), 2);
                let inf = v.iter().find(|p| p.point[1].norm() < 1e-12).unwrap();
                assert_eq!(inf.multiplicity, 2);
                let zero = v.iter().find(|p| p.point[0].norm() < 1e-12).unwrap();
                assert_eq!(zero.multiplicity, 1);
            }
            FormRoots::IdenticallyZero => panic!(),
        }
    }

    #[test]
    fn minors_of_rank_one_pencil_vanish() {
        // x E00 + y E01 has every element of rank <= 1
        let fs = minor_forms(&[CMatrix::unit(3, 3, 0, 0), CMatrix::unit(3, 3, 0, 1)]);
        assert!(fs.iter().all(|f| f.max_abs() == 0.0));
    }

    #[test]
    fn restriction_and_gradient() {
        // f = x*y*z restricted to line s*(1,1,0) + t*(0,1,1) gives s*(s+t)*t = s^2 t + s t^2
        let mut c = vec![ZERO; 10];
        let idx = monomials(3, 3).iter().position(|e| *e == [1, 1, 1]).unwrap();
        c[idx] = ONE;
        let f = HomogeneousForm::new(3, 3, c).unwrap();
        let l = f.restrict_to_line(&[ONE, ONE, ZERO], &[ZERO, ONE, ONE]);
        let want = [0.0, 1.0, 1.0, 0.0];
        for (g, w) in l.coeffs().iter().zip(want) {
            assert!((g - r(w)).norm() < 1e-15);
        }
        let g = f.gradient(&[r(2.0), r(3.0), r(5.0)]);
        assert_eq!(g, vec![r(15.0), r(10.0), r(6.0)]);
        assert_eq!(f.derivative(0).evaluate(&[r(2.0), r(3.0), r(5.0)]), r(15.0));
    }
}
