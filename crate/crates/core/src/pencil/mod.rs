//! Structure of the right singular subspace of a three-qutrit state: the
//! span of right singular vectors of the party-1 flattening, each reshaped
//! to a 3x3 matrix, and its stratification by rank.

mod dim2;
mod dim3;
mod types;

pub use types::{Confidence, PencilAnalysis, RankRay, RayCount, SearchBudget, SpanSignature};

use crate::error::{Error, Result};
use crate::numerics::{matrix_rank, numerical_rank, singular_values_3x3, svd, CMatrix, TolerancePolicy, C64};
use crate::states::{flatten, PureState};

/// Right singular subspace of `C_{1|23}`: generators are the right singular
/// vectors `w` with `sigma` above threshold, reshaped by `w[3j+k] -> M[j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSubspace {
    pub dim: usize,
    pub generators: Vec<CMatrix>,
    pub singulars: Vec<f64>,
}

pub fn right_subspace(s: &PureState, tol: &TolerancePolicy) -> Result<SingularSubspace> {
    if s.parties() != 3 {
        return Err(Error::InvalidState("right subspace needs a 3-party state".into()));
    }
    let c = flatten(s, 1)?.matrix;
    let dec = svd(&c, tol)?;
    let r = numerical_rank(&dec.singulars, tol);
    let generators = (0..r)
        .map(|k| CMatrix::from_row_major(3, 3, dec.right_vector(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularSubspace {
        dim: r,
        generators,
        singulars: dec.singulars[..r].to_vec(),
    })
}

/// Generators flattened to fixed-size row-major arrays, scaled so the
/// largest has unit Frobenius norm.
pub(crate) struct Gens {
    pub mats: Vec<CMatrix>,
    pub flat: Vec<[C64; 9]>,
}

impl Gens {
    pub(crate) fn new(gens: &[CMatrix]) -> Result<Self> {
        for m in gens {
            if m.shape() != (3, 3) {
                return Err(Error::Shape {
                    expected: "3x3 generator".into(),
                    found: format!("{}x{}", m.rows(), m.cols()),
                });
            }
            if !m.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let s = gens.iter().map(|m| m.frobenius_norm()).fold(0.0, f64::max);
        if s == 0.0 {
            return Err(Error::InvalidState("zero generators".into()));
        }
        let mats: Vec<CMatrix> = gens.iter().map(|m| m.scale(C64::new(1.0 / s, 0.0))).collect();
        let flat = mats
            .iter()
            .map(|m| {
                let mut a = [C64::new(0.0, 0.0); 9];
                a.copy_from_slice(m.as_slice());
                a
            })
            .collect();
        Ok(Self { mats, flat })
    }
}

pub(crate) fn combine(g: &Gens, c: &[C64]) -> [C64; 9] {
    let mut out = [C64::new(0.0, 0.0); 9];
    for (m, x) in g.flat.iter().zip(c) {
        for (o, v) in out.iter_mut().zip(m) {
            *o += x * v;
        }
    }
    out
}

pub(crate) fn rank_of(m: &[C64; 9], tol: &TolerancePolicy) -> usize {
    numerical_rank(&singular_values_3x3(m), tol)
}

pub(crate) fn rank_at(g: &Gens, c: &[C64], tol: &TolerancePolicy) -> usize {
    rank_of(&combine(g, c), tol)
}

/// Joint column-space and row-space tests: `[M1 | M2 | ..]` of rank 1 and
/// `[M1; M2; ..]` of rank 1.
pub(crate) fn common_factors(g: &Gens, tol: &TolerancePolicy) -> Result<(bool, bool)> {
    let n = g.mats.len();
    let side = CMatrix::from_fn(3, 3 * n, |i, j| g.mats[j / 3][(i, j % 3)]);
    let stack = CMatrix::from_fn(3 * n, 3, |i, j| g.mats[i / 3][(i % 3, j)]);
    Ok((matrix_rank(&side, tol)? == 1, matrix_rank(&stack, tol)? == 1))
}

fn independent(gens: &[CMatrix], tol: &TolerancePolicy) -> Result<()> {
    let m = CMatrix::from_fn(gens.len(), 9, |i, j| gens[i].as_slice()[j]);
    if matrix_rank(&m, tol)? != gens.len() {
        return Err(Error::InvalidState("generators are linearly dependent".into()));
    }
    Ok(())
}

/// Signature of the span of one nonzero matrix.
pub fn rank_profile_dim1(m: &CMatrix, tol: &TolerancePolicy) -> Result<SpanSignature> {
    Ok(analyze_dim1(m, tol)?.signature)
}

pub fn analyze_dim1(m: &CMatrix, tol: &TolerancePolicy) -> Result<PencilAnalysis> {
    let g = Gens::new(std::slice::from_ref(m))?;
    let r = rank_of(&g.flat[0], tol);
    let one = C64::new(1.0, 0.0);
    Ok(PencilAnalysis {
        signature: SpanSignature {
            dim: 1,
            generic_rank: r,
            det_vanishes: r < 3,
            rank1_rays: RayCount::Finite((r == 1) as usize),
            rank2_rays: RayCount::Finite((r == 2) as usize),
            common_left_factor: r == 1,
            common_right_factor: r == 1,
            root_profile: Vec::new(),
            line_profile: Vec::new(),
            singular_rank2: None,
        },
        rays: if r < 3 {
            vec![RankRay {
                coeffs: vec![one],
                rank: r,
                multiplicity: None,
            }]
        } else {
            Vec::new()
        },
        confidence: Confidence::Certified,
    })
}

/// Signature of the pencil `x M1 + y M2`.
pub fn rank_profile_dim2(m1: &CMatrix, m2: &CMatrix, tol: &TolerancePolicy) -> Result<SpanSignature> {
    Ok(analyze_dim2(m1, m2, tol)?.signature)
}

/// [`rank_profile_dim2`] together with the located rank-deficient rays.
pub fn analyze_dim2(m1: &CMatrix, m2: &CMatrix, tol: &TolerancePolicy) -> Result<PencilAnalysis> {
    let gens = [m1.clone(), m2.clone()];
    independent(&gens, tol)?;
    dim2::analyze(&Gens::new(&gens)?, tol)
}

/// Signature of the net `x M1 + y M2 + z M3`.
pub fn rank_profile_dim3(
    m1: &CMatrix,
    m2: &CMatrix,
    m3: &CMatrix,
    tol: &TolerancePolicy,
    budget: &SearchBudget,
) -> Result<SpanSignature> {
    Ok(analyze_dim3(m1, m2, m3, tol, budget)?.signature)
}

/// [`rank_profile_dim3`] with located rank-1 points, rank-2 singular points
/// and the search confidence.
pub fn analyze_dim3(
    m1: &CMatrix,
    m2: &CMatrix,
    m3: &CMatrix,
    tol: &TolerancePolicy,
    budget: &SearchBudget,
) -> Result<PencilAnalysis> {
    let gens = [m1.clone(), m2.clone(), m3.clone()];
    independent(&gens, tol)?;
    dim3::analyze(&Gens::new(&gens)?, tol, budget)
}

/// Dispatches on the dimension of the subspace.
pub fn analyze_span(pi: &SingularSubspace, tol: &TolerancePolicy, budget: &SearchBudget) -> Result<PencilAnalysis> {
    let g = &pi.generators;
    match g.len() {
        1 => analyze_dim1(&g[0], tol),
        2 => analyze_dim2(&g[0], &g[1], tol),
        3 => analyze_dim3(&g[0], &g[1], &g[2], tol, budget),
        n => Err(Error::Shape {
            expected: "1 to 3 generators".into(),
            found: n.to_string(),
        }),
    }
}

/// A rank-1 element `coeffs . generators = scale * phi (x) psi` of the span,
/// with unit `phi` and `psi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector {
    pub coeffs: Vec<C64>,
    pub scale: f64,
    pub phi: [C64; 3],
    pub psi: [C64; 3],
}

/// Product vectors found in the span. When the rank-1 locus is a curve the
/// list is a finite sample of it (check the signature).
pub fn product_vectors_in_span(
    pi: &SingularSubspace,
    tol: &TolerancePolicy,
    budget: &SearchBudget,
) -> Result<Vec<ProductVector>> {
    let analysis = analyze_span(pi, tol, budget)?;
    let mut rays: Vec<Vec<C64>> = analysis.rank1_rays().map(|r| r.coeffs.clone()).collect();
    if analysis.signature.generic_rank == 1 {
        // every element is a product; report the generators
        rays = (0..pi.dim)
            .map(|i| (0..pi.dim).map(|j| C64::new((i == j) as u8 as f64, 0.0)).collect())
            .collect();
    }
    let mut out = Vec::with_capacity(rays.len());
    for c in rays {
        let m = CMatrix::combine(&c, &pi.generators);
        let dec = svd(&m, tol)?;
        let v = dec.left_vector(0);
        let w = dec.right_vector(0);
        out.push(ProductVector {
            coeffs: c,
            scale: dec.singulars[0],
            phi: [v[0], v[1], v[2]],
            psi: [w[0].conj(), w[1].conj(), w[2].conj()],
        });
    }
    Ok(out)
}
