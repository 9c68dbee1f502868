use super::types::{Confidence, PencilAnalysis, RankRay, RayCount, SpanSignature};
use super::{common_factors, rank_at, Gens};
use crate::error::Result;
use crate::numerics::{
    binary_form_roots, det_form, minor_forms, numerical_rank, svd, CMatrix, FormRoots, HomogeneousForm,
    TolerancePolicy, C64,
};

/// Points used to sample a pencil whose determinant vanishes identically.
fn sample_points() -> [[C64; 2]; 7] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 7];
    for (k, p) in out.iter_mut().enumerate() {
        let th = 0.37 + 0.83 * k as f64;
        *p = [C64::new(th.cos(), 0.0), C64::from_polar(th.sin(), 0.5 + 1.3 * k as f64)];
    }
    out
}

pub(crate) fn analyze(g: &Gens, tol: &TolerancePolicy) -> Result<PencilAnalysis> {
    let mats = [g.mats[0].clone(), g.mats[1].clone()];
    let det = det_form(&mats);
    let (left, right) = common_factors(g, tol)?;

    let (generic_rank, rays, root_profile, det_vanishes) = match binary_form_roots(&det, tol) {
        FormRoots::Roots(roots) => {
            let mut rays = Vec::new();
            let mut profile = Vec::new();
            for r in roots {
                let rank = rank_at(g, &r.point, tol);
                profile.push((r.multiplicity, rank));
                rays.push(RankRay {
                    coeffs: r.point.to_vec(),
                    rank,
                    multiplicity: Some(r.multiplicity),
                });
            }
            profile.sort();
            (3, rays, profile, false)
        }
        FormRoots::IdenticallyZero => {
            let generic = sample_points().iter().map(|p| rank_at(g, p, tol)).max().unwrap_or(0);
            let rays = if generic <= 1 {
                Vec::new()
            } else {
                rank_one_rays(g, tol)?.unwrap_or_default()
            };
            (generic, rays, Vec::new(), true)
        }
    };

    let count = |rank: usize| RayCount::Finite(rays.iter().filter(|r| r.rank == rank).count());
    let (rank1_rays, rank2_rays) = match generic_rank {
        0 | 1 => (RayCount::Infinite, RayCount::Finite(0)),
        2 => (count(1), RayCount::Infinite),
        _ => (count(1), count(2)),
    };
    Ok(PencilAnalysis {
        signature: SpanSignature {
            dim: 2,
            generic_rank,
            det_vanishes,
            rank1_rays,
            rank2_rays,
            common_left_factor: left,
            common_right_factor: right,
            root_profile,
            line_profile: Vec::new(),
            singular_rank2: None,
        },
        rays,
        confidence: Confidence::Certified,
    })
}

/// Rank-1 rays of a pencil of generic rank 2: common zeros of the nine
/// 2x2 minors. Writing each minor as `row . (x^2, xy, y^2)`, a common zero
/// is a Veronese vector in the kernel of the 9x3 coefficient matrix.
/// `None` when every minor vanishes, i.e. every element has rank <= 1.
pub(crate) fn rank_one_rays(g: &Gens, tol: &TolerancePolicy) -> Result<Option<Vec<RankRay>>> {
    let minors = minor_forms(&g.mats);
    let q = CMatrix::from_fn(9, 3, |i, j| minors[i].coeffs()[j]);
    if q.max_abs() <= tol.form_zero {
        return Ok(None);
    }
    let dec = svd(&q, tol)?;
    let rho = numerical_rank(&dec.singulars, tol);
    let candidates: Vec<[C64; 2]> = match rho {
        1 => {
            // all minors are multiples of one quadratic
            let row = dec.right_vector(0);
            let quad = HomogeneousForm::new(2, 2, row.iter().map(|z| z.conj()).collect())?;
            match binary_form_roots(&quad, tol) {
                FormRoots::Roots(r) => r.into_iter().map(|r| r.point).collect(),
                FormRoots::IdenticallyZero => Vec::new(),
            }
        }
        2 => {
            let n = dec.right_vector(2);
            let p = if n[0].norm() >= n[2].norm() {
                [n[0], n[1]]
            } else {
                [n[1], n[2]]
            };
            let veronese = (n[0] * n[2] - n[1] * n[1]).norm();
            if veronese <= 1e-6 {
                vec![p]
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    };
    let mut out = Vec::new();
    for c in candidates {
        let norm = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
        let c = [c[0] / norm, c[1] / norm];
        if rank_at(g, &c, tol) == 1 {
            out.push(RankRay {
                coeffs: c.to_vec(),
                rank: 1,
                multiplicity: None,
            });
        }
    }
    Ok(Some(out))
}
