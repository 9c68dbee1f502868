//! Two-qutrit states: Schmidt-rank classification, canonicalizing local
//! operators, and the three biqutrit reference states `|I>`, `|II>`, `|III>`.
//!
//! Operators act on kets. For `(f1 (x) f2)|psi>` the coefficient matrix
//! transforms as `C -> f1 C f2^T`, so right singular vectors `w` map to
//! `conj(f2) w`.

use crate::error::{Error, Result};
use crate::numerics::{matrix_rank, numerical_rank, singular_values, svd, CMatrix, TolerancePolicy, C64};
use crate::states::{bipartite_canonical, flatten, unflatten, Flattening, PureState};

/// Schmidt rank and the matching canonical vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteClass {
    pub schmidt_rank: usize,
    pub canonical: PureState,
}

impl BipartiteClass {
    /// `Psi_0`, `Psi_1` or `Psi_2`.
    pub fn canonical_name(&self) -> &'static str {
        ["Psi0", "Psi1", "Psi2"][self.schmidt_rank - 1]
    }
}

/// A pair of invertible 3x3 local operators.
#[derive(Debug, Clone, PartialEq)]
pub struct IloPair {
    pub f1: CMatrix,
    pub f2: CMatrix,
}

impl IloPair {
    pub fn new(f1: CMatrix, f2: CMatrix) -> Result<Self> {
        check_invertible(&f1)?;
        check_invertible(&f2)?;
        Ok(Self { f1, f2 })
    }

    pub fn identity() -> Self {
        Self {
            f1: CMatrix::identity(3),
            f2: CMatrix::identity(3),
        }
    }

    /// The pair acting as `self` first, then `then`.
    pub fn followed_by(&self, then: &IloPair) -> IloPair {
        IloPair {
            f1: &then.f1 * &self.f1,
            f2: &then.f2 * &self.f2,
        }
    }
}

/// Rejects square operators whose smallest singular value is zero or below
/// `1e-12` of the largest.
pub(crate) fn check_invertible(f: &CMatrix) -> Result<()> {
    if f.shape() != (3, 3) {
        return Err(Error::Shape {
            expected: "3x3 operator".into(),
            found: format!("{}x{}", f.rows(), f.cols()),
        });
    }
    let s = singular_values(f)?;
    let lo = s[2];
    if lo.is_nan() || lo <= 1e-12 * s[0] {
        return Err(Error::SingularOperator(lo));
    }
    Ok(())
}

fn require_bipartite(s: &PureState) -> Result<()> {
    if s.parties() != 2 {
        return Err(Error::InvalidState(format!(
            "expected a 2-party state, got {} parties",
            s.parties()
        )));
    }
    Ok(())
}

/// Coefficient matrix `C[i][j] = c_ij`.
pub fn coefficient_matrix(s: &PureState) -> Result<CMatrix> {
    require_bipartite(s)?;
    Ok(flatten(s, 1)?.matrix)
}

/// Number of singular values above threshold, for any square or
/// rectangular coefficient matrix (local dimensions other than 3 included).
pub fn schmidt_rank(c: &CMatrix, tol: &TolerancePolicy) -> Result<usize> {
    matrix_rank(c, tol)
}

pub fn classify_bipartite(s: &PureState, tol: &TolerancePolicy) -> Result<BipartiteClass> {
    let rank = schmidt_rank(&coefficient_matrix(s)?, tol)?;
    Ok(BipartiteClass {
        schmidt_rank: rank,
        canonical: bipartite_canonical(rank)?,
    })
}

/// Local operators taking `s` to its canonical vector: `f1` maps `v_k` to
/// `e_k / sigma_k` and `f2` maps `conj(w_k)` to `e_k`, both extended by the
/// orthonormal completion of the singular bases.
pub fn canonicalize_bipartite(s: &PureState, tol: &TolerancePolicy) -> Result<(BipartiteClass, IloPair)> {
    let c = coefficient_matrix(s)?;
    let dec = svd(&c, tol)?;
    let rank = numerical_rank(&dec.singulars, tol);
    let scale = (rank as f64).sqrt();
    let d = CMatrix::diag(
        &(0..3)
            .map(|k| {
                if k < rank {
                    C64::new(1.0 / (scale * dec.singulars[k]), 0.0)
                } else {
                    C64::new(1.0, 0.0)
                }
            })
            .collect::<Vec<_>>(),
    );
    let f1 = &d * &dec.left.adjoint();
    let f2 = dec.right.transpose();
    let pair = IloPair::new(f1, f2)?;
    Ok((
        BipartiteClass {
            schmidt_rank: rank,
            canonical: bipartite_canonical(rank)?,
        },
        pair,
    ))
}

/// `(f1 (x) f2)|s>`, i.e. `C -> f1 C f2^T`.
pub fn apply_ilo_bipartite(s: &PureState, pair: &IloPair) -> Result<PureState> {
    let c = coefficient_matrix(s)?;
    check_invertible(&pair.f1)?;
    check_invertible(&pair.f2)?;
    let out = &(&pair.f1 * &c) * &pair.f2.transpose();
    unflatten(
        &Flattening {
            pivot_party: 1,
            matrix: out,
        },
        2,
    )
}

/// `|I> = (|11> + |00>)/sqrt2` with the spin basis `|1>, |0>, |-1>` written
/// as `|0>, |1>, |2>`.
pub fn state_i() -> PureState {
    PureState::from_kets(&["00", "11"]).expect("valid kets")
}

/// `|II> = (|11> + |00> + |-1-1>)/sqrt3`.
pub fn state_ii() -> PureState {
    PureState::from_kets(&["00", "11", "22"]).expect("valid kets")
}

/// `|III> = (|11> + |-1-1> + |10> + |01> + |0-1> + |-10>)/sqrt6`.
pub fn state_iii() -> PureState {
    PureState::from_kets(&["00", "22", "01", "10", "12", "21"]).expect("valid kets")
}

/// The second-party operator `(1/sqrt2)[[1,1,-1],[1,-1,1],[-1,1,1]]` that
/// takes `|III>` to `|II>` with the identity on the first party.
pub fn iii_to_ii_operator() -> CMatrix {
    let h = 1.0 / 2f64.sqrt();
    CMatrix::from_real_rows(&[[h, h, -h], [h, -h, h], [-h, h, h]])
}
