use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, C64};

/// A pure state of two or three qutrits, stored as raw (possibly
/// unnormalized) amplitudes. The amplitude of `|ijk>` sits at offset
/// `9i + 3j + k`; for two parties `|ij>` sits at `3i + j`.
#[derive(Clone, PartialEq)]
pub struct PureState {
    parties: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(parties: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if !(2..=3).contains(&parties) {
            return Err(Error::InvalidState(format!(
                "{parties} parties; only 2 or 3 qutrits are supported"
            )));
        }
        let expected = 3usize.pow(parties as u32);
        if amplitudes.len() != expected {
            return Err(Error::WrongAmplitudeCount {
                expected,
                found: amplitudes.len(),
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if amplitudes.iter().all(|z| z.norm_sqr() == 0.0) {
            return Err(Error::InvalidState("all amplitudes are zero".into()));
        }
        Ok(Self { parties, amplitudes })
    }

    /// Normalized sum of basis kets with unit coefficients, written as digit
    /// strings: `from_kets(&["000", "111"])`.
    pub fn from_kets(kets: &[&str]) -> Result<Self> {
        let parties = kets.first().map(|k| k.len()).unwrap_or(0);
        let terms: Vec<(Vec<usize>, C64)> = kets
            .iter()
            .map(|k| {
                let idx = k
                    .chars()
                    .map(|c| match c.to_digit(10) {
                        Some(d) if d < 3 => Ok(d as usize),
                        _ => Err(Error::Parse(format!("bad ket `{k}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((idx, C64::new(1.0, 0.0)))
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_terms(parties, &terms)?.normalized())
    }

    /// Sum of `coefficient * |index>` terms; repeated indices accumulate.
    pub fn from_terms(parties: usize, terms: &[(Vec<usize>, C64)]) -> Result<Self> {
        let mut amps = vec![C64::new(0.0, 0.0); 3usize.pow(parties as u32)];
        for (idx, c) in terms {
            if idx.len() != parties || idx.iter().any(|&i| i > 2) {
                return Err(Error::InvalidState(format!(
                    "index {idx:?} is not a {parties}-qutrit basis label"
                )));
            }
            amps[offset(idx)] += c;
        }
        Self::new(parties, amps)
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude of the basis ket with the given digit labels.
    pub fn amplitude(&self, index: &[usize]) -> C64 {
        assert_eq!(index.len(), self.parties);
        self.amplitudes[offset(index)]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            parties: self.parties,
            amplitudes: self.amplitudes.iter().map(|z| z / n).collect(),
        }
    }

    /// `min over phases of || a/|a| - e^{it} b/|b| ||`, the distance between
    /// the rays spanned by the two states.
    pub fn ray_distance(&self, other: &PureState) -> f64 {
        assert_eq!(self.parties, other.parties);
        let ov: C64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let c = ov.norm() / (self.norm() * other.norm());
        (2.0 - 2.0 * c.min(1.0)).max(0.0).sqrt()
    }

    /// Basis labels of the nonzero amplitudes, in offset order.
    pub fn support(&self) -> Vec<(Vec<usize>, C64)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm_sqr() > 0.0)
            .map(|(o, z)| (labels(o, self.parties), *z))
            .collect()
    }
}

fn offset(index: &[usize]) -> usize {
    index.iter().fold(0, |acc, &i| 3 * acc + i)
}

fn labels(mut offset: usize, parties: usize) -> Vec<usize> {
    let mut out = vec![0; parties];
    for slot in out.iter_mut().rev() {
        *slot = offset % 3;
        offset /= 3;
    }
    out
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .support()
            .iter()
            .map(|(idx, z)| {
                let k: String = idx.iter().map(|d| char::from(b'0' + *d as u8)).collect();
                format!("({:.4}{:+.4}i)|{k}>", z.re, z.im)
            })
            .collect();
        write!(f, "PureState[{}]", terms.join(" + "))
    }
}

/// A party-versus-rest coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Flattening {
    pub pivot_party: usize,
    pub matrix: CMatrix,
}

/// Coefficient matrix with `pivot` (1-based) as row index. Tripartite:
/// pivot 1 gives `M[i][3j+k]`, pivot 2 `M[j][3i+k]`, pivot 3 `M[k][3i+j]`.
/// Bipartite: pivot 1 gives `C[i][j]`, pivot 2 its transpose.
pub fn flatten(s: &PureState, pivot: usize) -> Result<Flattening> {
    let p = s.parties;
    if pivot == 0 || pivot > p {
        return Err(Error::InvalidPivot { pivot, parties: p });
    }
    let cols = 3usize.pow(p as u32 - 1);
    let matrix = CMatrix::from_fn(3, cols, |r, c| {
        let idx = place(r, c, pivot, p);
        s.amplitudes[offset(&idx)]
    });
    Ok(Flattening {
        pivot_party: pivot,
        matrix,
    })
}

/// Inverse of [`flatten`].
pub fn unflatten(f: &Flattening, parties: usize) -> Result<PureState> {
    let cols = 3usize.pow(parties as u32 - 1);
    if f.matrix.shape() != (3, cols) {
        return Err(Error::Shape {
            expected: format!("3x{cols}"),
            found: format!("{}x{}", f.matrix.rows(), f.matrix.cols()),
        });
    }
    if f.pivot_party == 0 || f.pivot_party > parties {
        return Err(Error::InvalidPivot {
            pivot: f.pivot_party,
            parties,
        });
    }
    let mut amps = vec![C64::new(0.0, 0.0); 3 * cols];
    for r in 0..3 {
        for c in 0..cols {
            amps[offset(&place(r, c, f.pivot_party, parties))] = f.matrix[(r, c)];
        }
    }
    PureState::new(parties, amps)
}

/// Full basis label for row `r` and column `c` of the pivot flattening.
fn place(r: usize, c: usize, pivot: usize, parties: usize) -> Vec<usize> {
    let rest = labels(c, parties - 1);
    let mut idx = Vec::with_capacity(parties);
    let mut it = rest.into_iter();
    for party in 1..=parties {
        if party == pivot {
            idx.push(r);
        } else {
            idx.push(it.next().expect("label count"));
        }
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_follow_party_one_slowest() {
        assert_eq!(offset(&[1, 2, 0]), 15);
        assert_eq!(labels(15, 3), vec![1, 2, 0]);
        assert_eq!(offset(&[2, 1]), 7);
    }

    #[test]
    fn zero_state_rejected() {
        let e = PureState::new(2, vec![C64::new(0.0, 0.0); 9]).unwrap_err();
        assert!(matches!(e, Error::InvalidState(_)));
    }

    #[test]
    fn wrong_count_rejected() {
        let e = PureState::new(3, vec![C64::new(1.0, 0.0); 26]).unwrap_err();
        assert_eq!(
            e,
            Error::WrongAmplitudeCount {
                expected: 27,
                found: 26
            }
        );
    }

    #[test]
    fn product_state_flattening() {
        let s = PureState::from_kets(&["000"]).unwrap();
        let f = flatten(&s, 1).unwrap();
        assert_eq!(f.matrix.shape(), (3, 9));
        assert_eq!(f.matrix[(0, 0)], C64::new(1.0, 0.0));
        assert!((f.matrix.frobenius_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bipartite_pivot_three_rejected() {
        let s = PureState::from_kets(&["00"]).unwrap();
        assert!(matches!(
            flatten(&s, 3),
            Err(Error::InvalidPivot { pivot: 3, parties: 2 })
        ));
    }
}
