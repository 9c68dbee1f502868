//! Randomized test infrastructure: seeded ILO triples, orbit sampling,
//! random spans, a brute-force rank oracle and orbit fixtures.
//!
//! Everything here is a pure function of its seed.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bipartite::check_invertible;
use crate::error::{Error, Result};
use crate::numerics::{condition_number, singular_values, CMatrix, C64};
use crate::states::{catalog, PureState};

/// Retry cap for [`random_ilo`], per factor.
pub const MAX_DRAWS: usize = 1000;
/// Condition bound used by the orbit tests.
pub const DEFAULT_CONDITION_BOUND: f64 = 50.0;

/// Three invertible local operators with the seed and bound that produced
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct IloTriple {
    pub f1: CMatrix,
    pub f2: CMatrix,
    pub f3: CMatrix,
    pub seed: u64,
    pub condition_bound: f64,
}

impl IloTriple {
    pub fn new(f1: CMatrix, f2: CMatrix, f3: CMatrix) -> Result<Self> {
        let mut bound = 1.0f64;
        for f in [&f1, &f2, &f3] {
            check_invertible(f)?;
            bound = bound.max(condition_number(f)?);
        }
        Ok(Self {
            f1,
            f2,
            f3,
            seed: 0,
            condition_bound: bound,
        })
    }

    pub fn identity() -> Self {
        Self {
            f1: CMatrix::identity(3),
            f2: CMatrix::identity(3),
            f3: CMatrix::identity(3),
            seed: 0,
            condition_bound: 1.0,
        }
    }

    pub fn factors(&self) -> [&CMatrix; 3] {
        [&self.f1, &self.f2, &self.f3]
    }
}

/// Matrix with independent complex standard normal entries (real and
/// imaginary parts each `N(0, 1/2)`).
pub fn complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    })
}

/// Orthonormalizes the columns (modified Gram-Schmidt), giving the unitary
/// factor of a QR decomposition.
fn unitary_factor(a: &CMatrix) -> Option<CMatrix> {
    let n = a.cols();
    let mut q = a.clone();
    for j in 0..n {
        let mut v = q.column(j);
        for k in 0..j {
            let u = q.column(k);
            let p: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(&u) {
                *vi -= p * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in &mut v {
            *z /= norm;
        }
        q.set_column(j, &v);
    }
    Some(q)
}

/// Seeded ILO triple whose factors each have condition number at most
/// `condition_bound`.
///
/// Factors are complex Gaussian matrices, redrawn until the bound holds.
/// A bound of exactly 1 admits only unitaries, which are produced by
/// orthonormalizing the draw instead.
pub fn random_ilo(seed: u64, condition_bound: f64) -> Result<IloTriple> {
    if !condition_bound.is_finite() || condition_bound < 1.0 {
        return Err(Error::InvalidConditionBound(condition_bound));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<CMatrix> {
        for _ in 0..MAX_DRAWS {
            let a = complex_gaussian(rng, 3, 3);
            if condition_bound == 1.0 {
                if let Some(q) = unitary_factor(&a) {
                    return Ok(q);
                }
                continue;
            }
            let s = singular_values(&a)?;
            if s[2] > 0.0 && s[0] / s[2] <= condition_bound {
                return Ok(a);
            }
        }
        Err(Error::RetryLimit {
            bound: condition_bound,
            tries: MAX_DRAWS,
        })
    };
    Ok(IloTriple {
        f1: draw(&mut rng)?,
        f2: draw(&mut rng)?,
        f3: draw(&mut rng)?,
        seed,
        condition_bound,
    })
}

/// `(f1 (x) f2 (x) f3)|s>`, left unnormalized.
pub fn apply_ilo_tripartite(s: &PureState, t: &IloTriple) -> Result<PureState> {
    if s.parties() != 3 {
        return Err(Error::InvalidState(format!(
            "expected a 3-party state, got {} parties",
            s.parties()
        )));
    }
    for f in t.factors() {
        check_invertible(f)?;
    }
    let c = s.amplitudes();
    let mut out = vec![C64::new(0.0, 0.0); 27];
    // apply one factor at a time along its axis
    let mut cur = c.to_vec();
    for (axis, f) in t.factors().into_iter().enumerate() {
        let stride = [9, 3, 1][axis];
        for (idx, slot) in out.iter_mut().enumerate() {
            let i = (idx / stride) % 3;
            let base = idx - i * stride;
            *slot = (0..3).map(|a| f[(i, a)] * cur[base + a * stride]).sum();
        }
        std::mem::swap(&mut cur, &mut out);
    }
    PureState::new(3, cur)
}

/// Orbit sample: the state moved by `random_ilo(seed, condition_bound)`.
pub fn orbit_sample(s: &PureState, seed: u64, condition_bound: f64) -> Result<PureState> {
    Ok(apply_ilo_tripartite(s, &random_ilo(seed, condition_bound)?)?.normalized())
}

/// Random `rows x cols` matrix of the given rank: a product of complex
/// Gaussian factors.
pub fn random_rank_matrix(rng: &mut impl Rng, n: usize, rank: usize) -> CMatrix {
    let a = complex_gaussian(rng, n, rank);
    let b = complex_gaussian(rng, rank, n);
    &a * &b
}

/// `dim` generators of independently drawn ranks 1 to 3, seeded.
pub fn random_span(seed: u64, dim: usize) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim)
        .map(|_| {
            let r = rng.random_range(1..=3);
            random_rank_matrix(&mut rng, 3, r)
        })
        .collect()
}

/// Relative threshold of the oracle: `sigma_k <= ORACLE_THRESHOLD * sigma_1`
/// counts as zero.
pub const ORACLE_THRESHOLD: f64 = 1e-8;

/// A rank drop located by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDrop {
    pub coeffs: Vec<C64>,
    pub rank: usize,
    /// `sigma_{rank+1} / sigma_1` at `coeffs`.
    pub ratio: f64,
}

/// Rank statistics of a span from dense sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct RankLocusSample {
    /// Grid points examined.
    pub samples: usize,
    /// `histogram[r]` grid points of rank `r`.
    pub histogram: [usize; 4],
    /// Largest rank seen on the grid.
    pub generic_rank: usize,
    /// Smallest rank seen, on the grid or after local minimization.
    pub min_rank: usize,
    pub drops: Vec<RankDrop>,
}

/// Brute-force rank oracle for a span of one to three 3x3 matrices.
///
/// Samples a projective grid of about `grid_n` points, then runs
/// Nelder-Mead on `sigma_{r+1} / sigma_1` from the best grid points for each
/// `r` below the grid rank, since isolated rank drops are never hit exactly.
/// Only the SVD kernel is shared with the pencil analysis.
pub fn brute_force_rank_locus(gens: &[CMatrix], grid_n: usize) -> Result<RankLocusSample> {
    if !(1..=3).contains(&gens.len()) {
        return Err(Error::Shape {
            expected: "1 to 3 generators".into(),
            found: gens.len().to_string(),
        });
    }
    if grid_n < 100 {
        return Err(Error::Shape {
            expected: "grid of at least 100 points".into(),
            found: grid_n.to_string(),
        });
    }
    for g in gens {
        if g.shape() != (3, 3) {
            return Err(Error::Shape {
                expected: "3x3 generator".into(),
                found: format!("{}x{}", g.rows(), g.cols()),
            });
        }
    }
    let d = gens.len();
    let sv = |c: &[C64]| -> Result<Vec<f64>> { singular_values(&CMatrix::combine(c, gens)) };
    let rank_of = |s: &[f64]| s.iter().filter(|&&x| x > ORACLE_THRESHOLD * s[0]).count();

    let grid = projective_grid(d, grid_n);
    let mut histogram = [0usize; 4];
    let mut scored = Vec::with_capacity(grid.len());
    for c in &grid {
        let s = sv(c)?;
        if s[0] == 0.0 {
            histogram[0] += 1;
            continue;
        }
        histogram[rank_of(&s)] += 1;
        scored.push((c.clone(), s));
    }
    let generic_rank = (0..4).rev().find(|&r| histogram[r] > 0).unwrap_or(0);
    let mut min_rank = (0..4).find(|&r| histogram[r] > 0).unwrap_or(0);
    let mut drops = Vec::new();
    if d > 1 {
        for r in (1..generic_rank).rev() {
            scored.sort_by(|a, b| (a.1[r] / a.1[0]).total_cmp(&(b.1[r] / b.1[0])));
            for (start, _) in scored.iter().take(STARTS) {
                let (c, ratio) = minimize_ratio(gens, start, r);
                if ratio <= ORACLE_THRESHOLD {
                    let rank = rank_of(&sv(&c)?);
                    min_rank = min_rank.min(rank);
                    if !drops
                        .iter()
                        .any(|p: &RankDrop| p.rank == rank && chordal(&p.coeffs, &c) < 1e-4)
                    {
                        drops.push(RankDrop { coeffs: c, rank, ratio });
                    }
                }
            }
        }
    }
    Ok(RankLocusSample {
        samples: grid.len(),
        histogram,
        generic_rank,
        min_rank,
        drops,
    })
}

const STARTS: usize = 12;

/// Affine values `r e^{i theta}` on polar rings, `r = 0` included.
fn disc_values(m: usize) -> Vec<C64> {
    let rings = ((m as f64).sqrt().ceil() as usize).max(2);
    let angles = m.div_ceil(rings).max(3);
    let mut out = vec![C64::new(0.0, 0.0)];
    for i in 1..rings {
        let r = (std::f64::consts::FRAC_PI_2 * i as f64 / rings as f64).tan();
        for k in 0..angles {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5 * (i % 2) as f64) / angles as f64;
            out.push(C64::from_polar(r, th));
        }
    }
    out
}

/// Projective grid of `P^{d-1}` in the standard affine charts.
fn projective_grid(d: usize, n: usize) -> Vec<Vec<C64>> {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    match d {
        1 => vec![vec![one]],
        2 => {
            let mut g: Vec<Vec<C64>> = disc_values(n).into_iter().map(|z| vec![one, z]).collect();
            g.push(vec![zero, one]);
            g
        }
        _ => {
            let side = (n as f64).sqrt().ceil() as usize;
            let vals = disc_values(side);
            let mut g = Vec::new();
            for a in &vals {
                for b in &vals {
                    g.push(vec![one, *a, *b]);
                }
            }
            for a in &vals {
                g.push(vec![zero, one, *a]);
            }
            g.push(vec![zero, zero, one]);
            g
        }
    }
}

fn chordal(a: &[C64], b: &[C64]) -> f64 {
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    (1.0 - (ip.norm() / (na * nb)).powi(2)).max(0.0).sqrt()
}

/// Minimizes `sigma_{r+1} / sigma_1` over the affine chart in which the
/// start's largest coordinate is 1.
fn minimize_ratio(gens: &[CMatrix], start: &[C64], r: usize) -> (Vec<C64>, f64) {
    let d = start.len();
    let pivot = (0..d)
        .max_by(|&i, &j| start[i].norm().total_cmp(&start[j].norm()))
        .unwrap_or(0);
    let free: Vec<usize> = (0..d).filter(|&i| i != pivot).collect();
    let to_coeffs = |x: &[f64]| -> Vec<C64> {
        let mut c = vec![C64::new(0.0, 0.0); d];
        c[pivot] = C64::new(1.0, 0.0);
        for (k, &i) in free.iter().enumerate() {
            c[i] = C64::new(x[2 * k], x[2 * k + 1]);
        }
        c
    };
    let f = |x: &[f64]| -> f64 {
        match singular_values(&CMatrix::combine(&to_coeffs(x), gens)) {
            Ok(s) if s[0] > 0.0 => s[r] / s[0],
            _ => f64::INFINITY,
        }
    };
    let x0: Vec<f64> = free
        .iter()
        .flat_map(|&i| {
            let z = start[i] / start[pivot];
            [z.re, z.im]
        })
        .collect();
    let step = 0.1 * (1.0 + x0.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    let mut x = x0;
    let mut fx = f64::INFINITY;
    // restarts recover from simplex collapse on the non-smooth objective;
    // a start that is not heading to zero is abandoned
    for round in 0..4 {
        let (nx, nf) = nelder_mead(&f, &x, step * 0.1f64.powi(round), 400);
        x = nx;
        fx = nf;
        if fx <= 1e-3 * ORACLE_THRESHOLD || fx > 1e-4 {
            break;
        }
    }
    (to_coeffs(&x), fx)
}

/// Plain Nelder-Mead with standard coefficients.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = f(&x);
        simplex.push((x, v));
    }
    let point = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect() };
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter <= 1e-14 * (1.0 + simplex[0].0.iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let refl = point(&centroid, &worst.0, -1.0);
        let fr = f(&refl);
        if fr < simplex[0].1 {
            let exp = point(&centroid, &worst.0, -2.0);
            let fe = f(&exp);
            simplex[n] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (refl, fr);
        } else {
            let (base, fb) = if fr < worst.1 {
                (refl, fr)
            } else {
                (worst.0.clone(), worst.1)
            };
            let con = point(&centroid, &base, 0.5);
            let fc = f(&con);
            if fc < fb {
                simplex[n] = (con, fc);
            } else {
                let best = simplex[0].0.clone();
                for s in simplex.iter_mut().skip(1) {
                    s.0 = point(&best, &s.0, 0.5);
                    s.1 = f(&s.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// One orbit-invariance case: catalog vector, ILO seed, expected family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFixture {
    pub id: String,
    pub seed: u64,
    pub family: String,
}

/// Every catalog vector paired with seeds `0..seeds`.
pub fn orbit_fixtures(seeds: u64) -> Vec<OrbitFixture> {
    let mut out = Vec::new();
    for e in catalog() {
        for seed in 0..seeds {
            out.push(OrbitFixture {
                id: e.id.to_string(),
                seed,
                family: e.id.family.to_string(),
            });
        }
    }
    out
}

pub fn read_fixtures(path: &Path) -> Result<Vec<OrbitFixture>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}
