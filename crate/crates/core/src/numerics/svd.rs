use super::matrix::{vdot, vec_norm, CMatrix, C64, ONE, ZERO};
use super::tolerance::TolerancePolicy;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 500;

/// Full singular value decomposition `C = V diag(singulars) W^H`.
///
/// `left` is `m x m` and `right` is `n x n`, both unitary; `singulars` has
/// `min(m, n)` entries in descending order. Singular vectors beyond
/// `min(m, n)` complete the bases.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: CMatrix,
    pub singulars: Vec<f64>,
    pub right: CMatrix,
}

impl SvdResult {
    /// Left singular vector `v_k`.
    pub fn left_vector(&self, k: usize) -> Vec<C64> {
        self.left.column(k)
    }

    /// Right singular vector `w_k`.
    pub fn right_vector(&self, k: usize) -> Vec<C64> {
        self.right.column(k)
    }

    /// `V Sigma W^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        let mut sigma = CMatrix::zeros(m, n);
        for (k, s) in self.singulars.iter().enumerate() {
            sigma[(k, k)] = C64::new(*s, 0.0);
        }
        &(&self.left * &sigma) * &self.right.adjoint()
    }
}

/// Deviation of `U^H U` from the identity, Frobenius norm.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let g = &u.adjoint() * u;
    (&g - &CMatrix::identity(u.cols())).frobenius_norm()
}

/// Singular value decomposition (one-sided Jacobi) with a fixed phase convention: the first
/// nonzero component of every left singular vector is real and positive,
/// and the matching right vector carries the same phase.
pub fn svd(c: &CMatrix, tol: &TolerancePolicy) -> Result<SvdResult> {
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    let (m, n) = c.shape();
    let k = m.min(n);
    let norm = c.frobenius_norm();

    let (mut left_cols, singulars, mut right_cols) = if norm == 0.0 {
        (Vec::new(), vec![0.0; k], Vec::new())
    } else if m >= n {
        let (u, sv, v) = jacobi(columns(c), tol)?;
        (u, sv, v)
    } else {
        // A^H = U S V^H  =>  A = V S U^H
        let (u, sv, v) = jacobi(columns(&c.adjoint()), tol)?;
        (v, sv, u)
    };
    let paired = left_cols.len().min(right_cols.len());
    for idx in 0..paired {
        let phase = leading_phase(&left_cols[idx]);
        for z in left_cols[idx].iter_mut() {
            *z *= phase;
        }
        for z in right_cols[idx].iter_mut() {
            *z *= phase;
        }
    }
    complete_basis(&mut left_cols, m)?;
    complete_basis(&mut right_cols, n)?;
    for col in left_cols.iter_mut().skip(paired) {
        let phase = leading_phase(col);
        col.iter_mut().for_each(|z| *z *= phase);
    }

    let mut left = CMatrix::zeros(m, m);
    for (j, col) in left_cols.iter().enumerate() {
        left.set_column(j, col);
    }
    let mut right = CMatrix::zeros(n, n);
    for (j, col) in right_cols.iter().enumerate() {
        right.set_column(j, col);
    }
    let out = SvdResult { left, singulars, right };

    let recon = (&out.reconstruct() - c).frobenius_norm();
    if recon > tol.tol_recon * norm.max(f64::MIN_POSITIVE) && norm > 0.0 {
        return Err(Error::NumericalFailure(format!(
            "SVD reconstruction error {recon:e} exceeds tolerance"
        )));
    }
    let defect = unitarity_defect(&out.left).max(unitarity_defect(&out.right));
    if defect > tol.tol_unitary {
        return Err(Error::NumericalFailure(format!(
            "SVD unitarity defect {defect:e} exceeds tolerance"
        )));
    }
    Ok(out)
}

/// Number of singular values above `rank_rel * sigma_1`; zero when all vanish.
pub fn numerical_rank(singulars: &[f64], tol: &TolerancePolicy) -> usize {
    let top = singulars.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    singulars.iter().filter(|&&s| s > tol.rank_rel * top).count()
}

/// Singular values only, descending.
pub fn singular_values(c: &CMatrix) -> Result<Vec<f64>> {
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    if c.frobenius_norm() == 0.0 {
        return Ok(vec![0.0; c.rows().min(c.cols())]);
    }
    let cols = if c.rows() >= c.cols() {
        columns(c)
    } else {
        columns(&c.adjoint())
    };
    Ok(jacobi(cols, &TolerancePolicy::default())?.1)
}

/// Rank of `c` under the policy's relative threshold.
pub fn matrix_rank(c: &CMatrix, tol: &TolerancePolicy) -> Result<usize> {
    Ok(numerical_rank(&singular_values(c)?, tol))
}

/// Singular values of a 3x3 matrix given row-major, descending. Fixed-size
/// fast path for the pencil searches, which evaluate many small matrices.
pub fn singular_values_3x3(m: &[C64; 9]) -> [f64; 3] {
    let mut b = [[ZERO; 3]; 3];
    for (j, col) in b.iter_mut().enumerate() {
        for (i, z) in col.iter_mut().enumerate() {
            *z = m[3 * i + j];
        }
    }
    let floor = noise_floor(m.iter());
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (bi, bj) = (b[i], b[j]);
            if let Some((c, s, ph)) = rotation(&bi, &bj, floor) {
                rotated = true;
                for r in 0..3 {
                    b[i][r] = c * bi[r] - s * ph * bj[r];
                    b[j][r] = s * bi[r] + c * ph * bj[r];
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s = b.map(|col| vec_norm(&col));
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Squared column norm below which a column is indistinguishable from zero.
fn noise_floor<'a>(entries: impl Iterator<Item = &'a C64>) -> f64 {
    let frob2: f64 = entries.map(|z| z.norm_sqr()).sum();
    (f64::EPSILON * f64::EPSILON) * frob2
}

fn columns(c: &CMatrix) -> Vec<Vec<C64>> {
    (0..c.cols()).map(|j| c.column(j)).collect()
}

/// Complex Jacobi rotation orthogonalizing columns `bi`, `bj`: returns
/// `(c, s, e^{-i phi})` for `bi' = c bi - s e^{-i phi} bj`,
/// `bj' = s bi + c e^{-i phi} bj`, or `None` when they are already
/// orthogonal to working precision. Columns with squared norm at most
/// `floor` are rounding noise and are left alone; rotating them can cycle
/// forever.
fn rotation(bi: &[C64], bj: &[C64], floor: f64) -> Option<(f64, f64, C64)> {
    let alpha: f64 = bi.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = bj.iter().map(|z| z.norm_sqr()).sum();
    if alpha.min(beta) <= floor {
        return None;
    }
    let gamma = vdot(bi, bj);
    let g = gamma.norm();
    if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
        return None;
    }
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    Some((c, c * t, gamma.conj() / g))
}

type Columns = Vec<Vec<C64>>;

/// One-sided Jacobi on the columns of a tall or square matrix `B`:
/// returns `(U, sigma, V)` with `B = U diag(sigma) V^H`, sorted descending.
/// `U` holds only the columns of nonnegligible singular values; `V` is
/// square.
fn jacobi(mut b: Columns, tol: &TolerancePolicy) -> Result<(Columns, Vec<f64>, Columns)> {
    let q = b.len();
    let floor = noise_floor(b.iter().flatten());
    let mut v: Vec<Vec<C64>> = (0..q)
        .map(|j| (0..q).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in i + 1..q {
                if let Some((c, s, ph)) = rotation(&b[i], &b[j], floor) {
                    rotated = true;
                    for cols in [&mut b, &mut v] {
                        for r in 0..cols[i].len() {
                            let (x, y) = (cols[i][r], cols[j][r]);
                            cols[i][r] = c * x - s * ph * y;
                            cols[j][r] = s * x + c * ph * y;
                        }
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NumericalFailure("Jacobi SVD did not converge".into()));
    }
    let sv: Vec<f64> = b.iter().map(|col| vec_norm(col)).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&x, &y| sv[y].total_cmp(&sv[x]));
    let top = sv.iter().copied().fold(0.0, f64::max);
    let mut u = Vec::new();
    for &k in &order {
        // directions of negligible singular values come from basis completion
        if sv[k] > 1e-3 * tol.tol_recon * top {
            u.push(b[k].iter().map(|z| z / sv[k]).collect());
        } else {
            break;
        }
    }
    let singulars = order.iter().map(|&k| sv[k]).collect();
    let v = order.iter().map(|&k| v[k].clone()).collect();
    Ok((u, singulars, v))
}

/// Condition number `sigma_max / sigma_min` of a square matrix.
pub fn condition_number(c: &CMatrix) -> Result<f64> {
    let s = singular_values(c)?;
    let lo = *s.last().unwrap_or(&0.0);
    Ok(if lo == 0.0 { f64::INFINITY } else { s[0] / lo })
}

fn leading_phase(v: &[C64]) -> C64 {
    let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.iter().find(|z| z.norm() > 1e-12 * big.max(f64::MIN_POSITIVE)) {
        Some(z) => z.conj() / z.norm(),
        None => ONE,
    }
}

/// Extends an orthonormal set to a full basis of C^n with modified
/// Gram-Schmidt, run twice for each candidate.
fn complete_basis(cols: &mut Vec<Vec<C64>>, n: usize) -> Result<()> {
    let mut e = 0;
    while cols.len() < n {
        if e >= n {
            return Err(Error::NumericalFailure("basis completion failed".into()));
        }
        let mut v = vec![ZERO; n];
        v[e] = ONE;
        e += 1;
        for _ in 0..2 {
            for q in cols.iter() {
                let p = vdot(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= p * qi;
                }
            }
        }
        let nv = vec_norm(&v);
        if nv > 0.5 / (n as f64).sqrt() {
            cols.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn identity_has_unit_singulars() {
        let s = svd(&CMatrix::identity(3), &TolerancePolicy::default()).unwrap();
        for v in &s.singulars {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_rank_two() {
        let tol = TolerancePolicy::default();
        let s = svd(&CMatrix::diag(&[r(3.0), r(2.0), r(0.0)]), &tol).unwrap();
        assert!((s.singulars[0] - 3.0).abs() < 1e-14);
        assert!((s.singulars[1] - 2.0).abs() < 1e-14);
        assert!(s.singulars[2].abs() < 1e-14);
        assert_eq!(numerical_rank(&s.singulars, &tol), 2);
    }

    #[test]
    fn threshold_arithmetic() {
        let tol = TolerancePolicy::default();
        assert_eq!(numerical_rank(&[1.0, 1e-3, 1e-15], &tol), 2);
        assert_eq!(numerical_rank(&[0.0, 0.0, 0.0], &tol), 0);
    }

    #[test]
    fn zero_matrix_is_handled() {
        let s = svd(&CMatrix::zeros(3, 9), &TolerancePolicy::default()).unwrap();
        assert_eq!(s.singulars, vec![0.0; 3]);
        assert!(unitarity_defect(&s.right) < 1e-14);
    }

    #[test]
    fn phase_convention_first_component_positive() {
        let c = CMatrix::from_complex_rows(&[
            [C64::new(0.0, 1.0), r(2.0), r(0.0)],
            [r(0.0), C64::new(-1.0, 1.0), r(1.0)],
        ]);
        let s = svd(&c, &TolerancePolicy::default()).unwrap();
        for k in 0..2 {
            let v = s.left_vector(k);
            let first = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
        assert!((&s.reconstruct() - &c).frobenius_norm() < 1e-13);
    }

    #[test]
    fn non_finite_input_rejected() {
        let mut c = CMatrix::identity(3);
        c[(1, 1)] = C64::new(f64::INFINITY, 0.0);
        assert!(matches!(svd(&c, &TolerancePolicy::default()), Err(Error::NonFinite)));
    }
}
