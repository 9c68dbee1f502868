use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::dim2::rank_one_rays;
use super::types::{Confidence, PencilAnalysis, RankRay, RayCount, SearchBudget, SpanSignature};
use super::{common_factors, rank_at, Gens};
use crate::error::Result;
use crate::numerics::{
    binary_form_roots, companion_roots, det_form, minor_forms, svd, CMatrix, FormRoots, HomogeneousForm,
    TolerancePolicy, C64,
};

type P2 = [C64; 3];

const ZERO: C64 = C64::new(0.0, 0.0);
/// Candidates closer than this (chordal) may be the same point.
const MERGE_RADIUS: f64 = 0.05;
const MAX_ITER: usize = 60;
const PROFILE_LINES: usize = 5;
/// Gradient residual below which a stalled Newton run is retried on the
/// rank-1 system.
const NEAR_SINGULAR: f64 = 1e-6;

/// Quadratic form in three variables, monomials `x^2, xy, xz, y^2, yz, z^2`.
#[derive(Clone, Copy)]
struct Quad3([C64; 6]);

impl Quad3 {
    fn from_form(f: &HomogeneousForm, scale: f64) -> Self {
        let mut c = [ZERO; 6];
        for (o, v) in c.iter_mut().zip(f.coeffs()) {
            *o = v / scale;
        }
        Quad3(c)
    }

    fn eval(&self, u: &P2) -> C64 {
        let c = &self.0;
        u[0] * (c[0] * u[0] + c[1] * u[1] + c[2] * u[2]) + u[1] * (c[3] * u[1] + c[4] * u[2]) + c[5] * u[2] * u[2]
    }

    fn grad(&self, u: &P2) -> P2 {
        let c = &self.0;
        [
            2.0 * c[0] * u[0] + c[1] * u[1] + c[2] * u[2],
            c[1] * u[0] + 2.0 * c[3] * u[1] + c[4] * u[2],
            c[2] * u[0] + c[4] * u[1] + 2.0 * c[5] * u[2],
        ]
    }
}

/// A homogeneous quadratic system whose projective zeros are sought.
struct System(Vec<Quad3>);

impl System {
    fn new(forms: &[HomogeneousForm]) -> Self {
        let big = forms
            .iter()
            .map(|f| f.max_abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        System(forms.iter().map(|f| Quad3::from_form(f, big)).collect())
    }

    fn residual(&self, u: &P2) -> f64 {
        self.0.iter().map(|q| q.eval(u).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Damped Gauss-Newton on the unit sphere: steps solve
    /// `(J^H J + u u^H + mu I) d = -J^H F` with `mu` the squared residual.
    fn solve(&self, start: &P2) -> (P2, f64) {
        let mut u = unit(start);
        let mut r = self.residual(&u);
        let mut mu = (r * r).max(1e-14);
        let mut stalled = 0;
        for _ in 0..MAX_ITER {
            if r <= 1e-15 {
                break;
            }
            let mut a = [[ZERO; 3]; 3];
            let mut b = [ZERO; 3];
            for q in &self.0 {
                let f = q.eval(&u);
                let j = q.grad(&u);
                for p in 0..3 {
                    b[p] -= j[p].conj() * f;
                    for s in 0..3 {
                        a[p][s] += j[p].conj() * j[s];
                    }
                }
            }
            for p in 0..3 {
                for s in 0..3 {
                    a[p][s] += u[p] * u[s].conj();
                }
            }
            let mut accepted = None;
            for _ in 0..8 {
                let mut m = a;
                for (p, row) in m.iter_mut().enumerate() {
                    row[p] += C64::new(mu, 0.0);
                }
                let Some(d) = solve3(m, b) else {
                    mu *= 10.0;
                    continue;
                };
                let cand = unit(&[u[0] + d[0], u[1] + d[1], u[2] + d[2]]);
                let rc = self.residual(&cand);
                if rc < r {
                    accepted = Some((cand, rc));
                    break;
                }
                mu = (mu * 10.0).max(1e-12);
            }
            let Some((cand, rc)) = accepted else { break };
            stalled = if rc > 0.9 * r { stalled + 1 } else { 0 };
            u = cand;
            r = rc;
            mu = (r * r).max(1e-14);
            if stalled >= 4 {
                break;
            }
        }
        (u, r)
    }
}

fn solve3(mut a: [[C64; 3]; 3], mut b: P2) -> Option<P2> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = [ZERO; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
}

fn unit(u: &P2) -> P2 {
    let n = (u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()).sqrt();
    [u[0] / n, u[1] / n, u[2] / n]
}

fn inner(a: &P2, b: &P2) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

fn chordal(a: &P2, b: &P2) -> f64 {
    (1.0 - inner(a, b).norm_sqr()).max(0.0).sqrt()
}

/// Representative with the largest component real and positive.
fn fix_phase(u: &P2) -> P2 {
    let k = (0..3).max_by(|&i, &j| u[i].norm().total_cmp(&u[j].norm())).unwrap_or(0);
    let ph = u[k].conj() / u[k].norm();
    [u[0] * ph, u[1] * ph, u[2] * ph]
}

struct Cluster {
    point: P2,
    residual: f64,
    hits: usize,
}

/// Distinct zeros of one system. Two candidates are merged when they are
/// close and the system also vanishes at their midpoint, so a multiple zero
/// found with reduced accuracy is not split while distinct nearby zeros stay
/// apart.
struct Clusters(Vec<Cluster>);

impl Clusters {
    fn add(&mut self, sys: &System, p: P2, res: f64, tol: &TolerancePolicy) {
        for c in self.0.iter_mut() {
            if chordal(&p, &c.point) >= MERGE_RADIUS {
                continue;
            }
            let ov = inner(&c.point, &p);
            let ph = ov.conj() / ov.norm().max(f64::MIN_POSITIVE);
            let mid = unit(&[c.point[0] + p[0] * ph, c.point[1] + p[1] * ph, c.point[2] + p[2] * ph]);
            if sys.residual(&mid) <= 10.0 * res.max(c.residual) + tol.newton_residual {
                c.hits += 1;
                if res < c.residual {
                    c.point = fix_phase(&p);
                    c.residual = res;
                }
                return;
            }
        }
        self.0.push(Cluster {
            point: fix_phase(&p),
            residual: res,
            hits: 1,
        });
    }

    fn count(&self, threshold: usize) -> RayCount {
        if self.0.len() > threshold {
            RayCount::Infinite
        } else {
            RayCount::Finite(self.0.len())
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> P2 {
    let mut u = [ZERO; 3];
    for z in u.iter_mut() {
        *z = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    unit(&u)
}

/// Points where the line through `a` and `b` meets the curve `det = 0`.
fn line_meets_curve(det: &HomogeneousForm, a: &P2, b: &P2) -> Vec<P2> {
    let line = det.restrict_to_line(a, b);
    let asc = line.coeffs();
    let lead = asc[3];
    if lead.norm() <= 1e-12 * line.max_abs() {
        return Vec::new();
    }
    let monic: Vec<C64> = (0..=3).rev().map(|k| asc[k] / lead).collect();
    companion_roots(&monic)
        .into_iter()
        .map(|t| unit(&[a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]]))
        .collect()
}

/// Multiplicity pattern of `det` on a generic line: the most frequent
/// pattern over a few random lines.
fn line_profile(det: &HomogeneousForm, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Vec<usize> {
    let mut seen: Vec<(Vec<usize>, usize)> = Vec::new();
    for _ in 0..PROFILE_LINES {
        let (a, b) = (random_point(rng), random_point(rng));
        if let FormRoots::Roots(roots) = binary_form_roots(&det.restrict_to_line(&a, &b), tol) {
            let mut m: Vec<usize> = roots.iter().map(|r| r.multiplicity).collect();
            m.sort_by(|x, y| y.cmp(x));
            match seen.iter_mut().find(|(p, _)| *p == m) {
                Some(e) => e.1 += 1,
                None => seen.push((m, 1)),
            }
        }
    }
    seen.sort_by(|x, y| y.1.cmp(&x.1).then(y.0.len().cmp(&x.0.len())));
    seen.into_iter().next().map(|e| e.0).unwrap_or_default()
}

/// The line carrying the multiple component of a non-reduced determinant
/// curve, as two orthonormal points. On a random line the multiple root is
/// the mean of a cluster of computed roots and is accurate to rounding,
/// unlike points produced by Newton iteration on the singular locus.
fn multiple_component(det: &HomogeneousForm, rng: &mut ChaCha8Rng, tol: &TolerancePolicy) -> Result<Option<(P2, P2)>> {
    let mut pts: Vec<P2> = Vec::new();
    for _ in 0..4 * PROFILE_LINES {
        let (a, b) = (random_point(rng), random_point(rng));
        if let FormRoots::Roots(roots) = binary_form_roots(&det.restrict_to_line(&a, &b), tol) {
            if let Some(r) = roots.iter().find(|r| r.multiplicity >= 2) {
                let [s, t] = r.point;
                pts.push(unit(&[s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]]));
            }
        }
        if pts.len() >= PROFILE_LINES {
            break;
        }
    }
    if pts.len() < 2 {
        return Ok(None);
    }
    let m = CMatrix::from_fn(3, pts.len(), |i, j| pts[j][i]);
    let dec = svd(&m, tol)?;
    if dec.singulars[2] > 1e-6 * dec.singulars[0] {
        return Ok(None);
    }
    let col = |k: usize| {
        let v = dec.left_vector(k);
        [v[0], v[1], v[2]]
    };
    Ok(Some((col(0), col(1))))
}

pub(crate) fn analyze(g: &Gens, tol: &TolerancePolicy, budget: &SearchBudget) -> Result<PencilAnalysis> {
    let det = det_form(&g.mats);
    let vanishes = det.max_abs() <= tol.form_zero * det.scale();
    let (left, right) = common_factors(g, tol)?;
    let minors = System::new(&minor_forms(&g.mats));
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let thr = budget.infinite_threshold;
    let mut confidence = Confidence::Certified;

    let mut rank1 = Clusters(Vec::new());
    let mut sing2 = Clusters(Vec::new());
    let mut generic_rank = 3;
    let mut line_prof = Vec::new();
    let mut singular_rank2 = None;
    let mut rank1_on_line = false;

    if vanishes {
        generic_rank = (0..7)
            .map(|_| rank_at(g, &random_point(&mut rng), tol))
            .max()
            .unwrap_or(0);
        if generic_rank >= 2 {
            'lines: for _ in 0..budget.lines {
                for _ in 0..3 {
                    let (p, res) = minors.solve(&random_point(&mut rng));
                    if res <= tol.newton_residual && rank_at(g, &p, tol) == 1 {
                        rank1.add(&minors, p, res, tol);
                        if rank1.0.len() > thr {
                            break 'lines;
                        }
                    }
                }
            }
        }
    } else {
        line_prof = line_profile(&det, &mut rng, tol);
        let grad_forms: Vec<HomogeneousForm> = (0..3).map(|v| det.derivative(v)).collect();
        let grad = System::new(&grad_forms);
        let mut sing = Clusters(Vec::new());
        let mut starts = Vec::new();
        let mut near = Vec::new();
        for _ in 0..budget.lines {
            let (a, b) = (random_point(&mut rng), random_point(&mut rng));
            for p in line_meets_curve(&det, &a, &b) {
                if sing.0.len() <= thr {
                    let (q, res) = grad.solve(&p);
                    if res <= tol.newton_residual {
                        sing.add(&grad, q, res, tol);
                    } else if res <= NEAR_SINGULAR {
                        near.push(q);
                    }
                }
                starts.push(p);
            }
        }
        if sing.0.len() > thr {
            // non-reduced curve: search the rank-1 locus directly
            singular_rank2 = Some(RayCount::Infinite);
            match multiple_component(&det, &mut rng, tol)? {
                Some((a, b)) => {
                    let sub = Gens::new(&[CMatrix::combine(&a, &g.mats), CMatrix::combine(&b, &g.mats)])?;
                    match rank_one_rays(&sub, tol)? {
                        None => rank1_on_line = true,
                        Some(rays) => {
                            for r in rays {
                                let p = [0, 1, 2].map(|i| r.coeffs[0] * a[i] + r.coeffs[1] * b[i]);
                                let res = minors.residual(&unit(&p));
                                rank1.add(&minors, unit(&p), res, tol);
                            }
                        }
                    }
                }
                None => {
                    confidence = Confidence::BudgetLimited;
                    for p in &starts {
                        let (q, res) = minors.solve(p);
                        if res <= tol.newton_residual && rank_at(g, &q, tol) == 1 {
                            rank1.add(&minors, q, res, tol);
                            if rank1.0.len() > thr {
                                break;
                            }
                        }
                    }
                }
            }
        } else {
            // rank-1 points are singular points of the curve
            for c in &sing.0 {
                let (q, res) = minors.solve(&c.point);
                if res <= tol.newton_residual && chordal(&q, &c.point) < MERGE_RADIUS {
                    rank1.add(&minors, q, res, tol);
                } else {
                    sing2.0.push(Cluster {
                        point: c.point,
                        residual: c.residual,
                        hits: c.hits,
                    });
                }
                if c.hits == 1 {
                    confidence = Confidence::BudgetLimited;
                }
            }
            // Newton on the gradient converges slowly at cusps and may stall
            // short of the residual bound; such points are polished on the
            // rank-1 system instead.
            for q in &near {
                if rank1.0.iter().any(|c| chordal(q, &c.point) < MERGE_RADIUS) {
                    continue;
                }
                let (r, res) = minors.solve(q);
                if res <= tol.newton_residual && chordal(q, &r) < MERGE_RADIUS && rank_at(g, &r, tol) == 1 {
                    rank1.add(&minors, r, res, tol);
                }
            }
            singular_rank2 = Some(sing2.count(thr));
            if sing.0.len() > 3 {
                confidence = Confidence::BudgetLimited;
            }
        }
    }

    let rank1_rays = if generic_rank <= 1 || rank1_on_line {
        RayCount::Infinite
    } else {
        rank1.count(thr)
    };
    let rank2_rays = if generic_rank <= 1 {
        RayCount::Finite(0)
    } else {
        RayCount::Infinite
    };
    if let RayCount::Finite(n) = rank1_rays {
        if n > 6 || (vanishes && rank1.0.iter().any(|c| c.hits == 1)) {
            confidence = Confidence::BudgetLimited;
        }
    }

    let mut rays: Vec<RankRay> = Vec::new();
    for (cl, rank) in [(&rank1, 1), (&sing2, 2)] {
        for c in &cl.0 {
            rays.push(RankRay {
                coeffs: c.point.to_vec(),
                rank,
                multiplicity: None,
            });
        }
    }

    Ok(PencilAnalysis {
        signature: SpanSignature {
            dim: 3,
            generic_rank,
            det_vanishes: vanishes,
            rank1_rays,
            rank2_rays,
            common_left_factor: left,
            common_right_factor: right,
            root_profile: Vec::new(),
            line_profile: line_prof,
            singular_rank2,
        },
        rays,
        confidence,
    })
}
