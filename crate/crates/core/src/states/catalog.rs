use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::PureState;
use crate::error::{Error, Result};
use crate::numerics::C64;

/// Span-type tag of a tripartite class: the kinds of bipartite vectors
/// (`P0 = |00>`, `P1 = |00>+|11>`, `P2 = |00>+|11>+|22>`) spanning the
/// right singular subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "dim1-P0")]
    Dim1P0,
    #[serde(rename = "dim1-P1")]
    Dim1P1,
    #[serde(rename = "dim1-P2")]
    Dim1P2,
    P0P0,
    P1P1,
    P0P1,
    P0P2,
    P1P2,
    P0P0P0,
    P0P0P1,
    P0P0P2,
    P1P1P0,
    P1P1P1,
    P1P1P2,
    P2P1P0,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Dim1P0,
        Family::Dim1P1,
        Family::Dim1P2,
        Family::P0P0,
        Family::P1P1,
        Family::P0P1,
        Family::P0P2,
        Family::P1P2,
        Family::P0P0P0,
        Family::P0P0P1,
        Family::P0P0P2,
        Family::P1P1P0,
        Family::P1P1P1,
        Family::P1P1P2,
        Family::P2P1P0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Dim1P0 => "dim1-P0",
            Family::Dim1P1 => "dim1-P1",
            Family::Dim1P2 => "dim1-P2",
            Family::P0P0 => "P0P0",
            Family::P1P1 => "P1P1",
            Family::P0P1 => "P0P1",
            Family::P0P2 => "P0P2",
            Family::P1P2 => "P1P2",
            Family::P0P0P0 => "P0P0P0",
            Family::P0P0P1 => "P0P0P1",
            Family::P0P0P2 => "P0P0P2",
            Family::P1P1P0 => "P1P1P0",
            Family::P1P1P1 => "P1P1P1",
            Family::P1P1P2 => "P1P1P2",
            Family::P2P1P0 => "P2P1P0",
        }
    }

    /// Dimension of the right singular subspace of the family's states.
    pub fn span_dim(self) -> usize {
        match self {
            Family::Dim1P0 | Family::Dim1P1 | Family::Dim1P2 => 1,
            Family::P0P0 | Family::P1P1 | Family::P0P1 | Family::P0P2 | Family::P1P2 => 2,
            _ => 3,
        }
    }

    /// Number of listed canonical vectors.
    pub fn variant_count(self) -> usize {
        match self {
            Family::P0P0 | Family::P1P2 | Family::P0P0P2 | Family::P1P1P0 => 3,
            Family::P1P1 | Family::P0P1 => 4,
            Family::P0P0P0 | Family::P1P1P1 => 6,
            Family::P1P1P2 | Family::P2P1P0 => 3,
            _ => 1,
        }
    }

    pub fn takes_parameters(self) -> bool {
        self == Family::P0P0P1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// The four single-qutrit states `phi, varphi, chi, psi` of the row
/// `|000> + |011> + |1 phi varphi> + |2 chi psi>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    pub phi: [C64; 3],
    pub varphi: [C64; 3],
    pub chi: [C64; 3],
    pub psi: [C64; 3],
}

impl ProductParams {
    /// Fixed representative used by the catalog. Not a canonical form: the
    /// row leaves these states free.
    pub fn representative() -> Self {
        let s = 1.0 / 3f64.sqrt();
        let v = |a: f64, b: f64, c: f64| [C64::new(a * s, 0.0), C64::new(b * s, 0.0), C64::new(c * s, 0.0)];
        Self {
            phi: v(1.0, 1.0, 1.0),
            varphi: v(1.0, 1.0, 1.0),
            chi: v(1.0, -1.0, 1.0),
            psi: v(1.0, 1.0, -1.0),
        }
    }

    fn normalized(&self) -> Result<Self> {
        let n = |v: &[C64; 3]| -> Result<[C64; 3]> {
            let r = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidState("parameter state must be nonzero".into()));
            }
            Ok([v[0] / r, v[1] / r, v[2] / r])
        };
        Ok(Self {
            phi: n(&self.phi)?,
            varphi: n(&self.varphi)?,
            chi: n(&self.chi)?,
            psi: n(&self.psi)?,
        })
    }
}

/// A row entry of the canonical tables: family, 1-based variant, and the
/// product-state parameters for the one parametrized row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalId {
    pub family: Family,
    pub variant: usize,
    pub params: Option<ProductParams>,
}

impl CanonicalId {
    pub fn new(family: Family, variant: usize) -> Result<Self> {
        let id = Self {
            family,
            variant,
            params: None,
        };
        id.check_variant()?;
        Ok(id)
    }

    pub fn with_params(family: Family, variant: usize, params: ProductParams) -> Result<Self> {
        let id = Self {
            family,
            variant,
            params: Some(params),
        };
        id.check_variant()?;
        Ok(id)
    }

    /// `FAMILY` or `FAMILY:VARIANT`; the variant defaults to 1.
    pub fn parse(s: &str) -> Result<Self> {
        let (fam, var) = match s.split_once(':') {
            Some((f, v)) => (
                f,
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad variant in `{s}`")))?,
            ),
            None => (s, 1),
        };
        Self::new(fam.trim().parse()?, var)
    }

    fn check_variant(&self) -> Result<()> {
        let count = self.family.variant_count();
        if self.variant == 0 || self.variant > count {
            return Err(Error::InvalidVariant {
                family: self.family.to_string(),
                variant: self.variant,
                count,
            });
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.variant)
    }
}

const DIM1: [&[&str]; 3] = [&["000"], &["000", "011"], &["000", "011", "022"]];

const P0P0: [&[&str]; 3] = [&["000", "101"], &["000", "110"], &["000", "111"]];

const P1P1: [&[&str]; 4] = [
    &["000", "011", "101", "112"],
    &["000", "011", "112", "120"],
    &["000", "011", "120", "101"],
    &["000", "011", "120", "102"],
];

const P0P1: [&[&str]; 4] = [
    &["000", "011", "101"],
    &["000", "011", "112"],
    &["000", "011", "120"],
    &["000", "011", "122"],
];

const P0P2: [&[&str]; 1] = [&["000", "011", "022", "101"]];

const P1P2: [&[&str]; 3] = [
    &["000", "011", "022", "101", "112"],
    &["000", "011", "022", "112", "120"],
    &["000", "011", "022", "120", "101"],
];

const P0P0P0: [&[&str]; 6] = [
    &["000", "101", "202"],
    &["000", "110", "220"],
    &["000", "111", "202"],
    &["000", "111", "220"],
    &["000", "111", "201"],
    &["000", "111", "222"],
];

const P0P0P2: [&[&str]; 3] = [
    &["000", "011", "022", "101", "202"],
    &["000", "011", "022", "110", "220"],
    &["000", "011", "022", "101", "212"],
];

/// Fixed part of the rows ending in `|2 phi varphi>`.
const P1P1P0: [&[&str]; 3] = [
    &["000", "011", "101", "112"],
    &["000", "011", "112", "120"],
    &["000", "011", "120", "101"],
];

const P1P1P1: [&[&str]; 6] = [
    &["000", "011", "101", "112", "202", "221"],
    &["000", "011", "101", "112", "210", "202"],
    &["000", "011", "101", "112", "221", "210"],
    &["000", "011", "112", "120", "202", "221"],
    &["000", "011", "112", "120", "221", "210"],
    &["000", "011", "120", "101", "221", "210"],
];

const P1P1P2: [&[&str]; 3] = [
    &["000", "011", "022", "101", "112", "202", "221"],
    &["000", "011", "022", "101", "112", "210", "202"],
    &["000", "011", "022", "101", "112", "221", "210"],
];

const P2P1P0: [&[&str]; 3] = [
    &["000", "011", "022", "101", "112", "202"],
    &["000", "011", "022", "101", "112", "220"],
    &["000", "011", "022", "101", "112", "221"],
];

fn ket_terms(kets: &[&str]) -> Vec<(Vec<usize>, C64)> {
    kets.iter()
        .map(|k| {
            let idx = k.bytes().map(|b| (b - b'0') as usize).collect();
            (idx, C64::new(1.0, 0.0))
        })
        .collect()
}

/// `|p a b>` for fixed first-party digit `p`.
fn product_terms(p: usize, a: &[C64; 3], b: &[C64; 3]) -> Vec<(Vec<usize>, C64)> {
    let mut out = Vec::with_capacity(9);
    for j in 0..3 {
        for k in 0..3 {
            out.push((vec![p, j, k], a[j] * b[k]));
        }
    }
    out
}

/// The normalized canonical vector of a table row.
pub fn canonical_state(id: &CanonicalId) -> Result<PureState> {
    id.check_variant()?;
    let v = id.variant - 1;
    if id.family.takes_parameters() {
        let p = id
            .params
            .ok_or_else(|| Error::MissingParameters(id.family.to_string()))?
            .normalized()?;
        let mut terms = ket_terms(&["000", "011"]);
        terms.extend(product_terms(1, &p.phi, &p.varphi));
        terms.extend(product_terms(2, &p.chi, &p.psi));
        return Ok(PureState::from_terms(3, &terms)?.normalized());
    }
    if id.params.is_some() {
        return Err(Error::UnexpectedParameters(id.family.to_string()));
    }
    let kets: &[&str] = match id.family {
        Family::Dim1P0 => DIM1[0],
        Family::Dim1P1 => DIM1[1],
        Family::Dim1P2 => DIM1[2],
        Family::P0P0 => P0P0[v],
        Family::P1P1 => P1P1[v],
        Family::P0P1 => P0P1[v],
        Family::P0P2 => P0P2[v],
        Family::P1P2 => P1P2[v],
        Family::P0P0P0 => P0P0P0[v],
        Family::P0P0P2 => P0P0P2[v],
        Family::P1P1P1 => P1P1P1[v],
        Family::P1P1P2 => P1P1P2[v],
        Family::P2P1P0 => P2P1P0[v],
        Family::P1P1P0 => {
            let r = ProductParams::representative();
            let mut terms = ket_terms(P1P1P0[v]);
            terms.extend(product_terms(2, &r.phi, &r.varphi));
            return Ok(PureState::from_terms(3, &terms)?.normalized());
        }
        Family::P0P0P1 => unreachable!("handled above"),
    };
    Ok(PureState::from_terms(3, &ket_terms(kets))?.normalized())
}

/// One catalog row with its state. `representative` marks rows whose free
/// product states were fixed to a chosen value.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: CanonicalId,
    pub state: PureState,
    pub representative: bool,
}

/// Every tripartite canonical vector of the tables, in table order
/// (43 states: 3 with a one-dimensional span, 15 two-dimensional, 25
/// three-dimensional).
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for family in Family::ALL {
        for variant in 1..=family.variant_count() {
            let id = if family.takes_parameters() {
                CanonicalId::with_params(family, variant, ProductParams::representative())
            } else {
                CanonicalId::new(family, variant)
            }
            .expect("catalog ids are valid");
            let state = canonical_state(&id).expect("catalog states are valid");
            out.push(CatalogEntry {
                representative: matches!(family, Family::P0P0P1 | Family::P1P1P0),
                id,
                state,
            });
        }
    }
    out
}

/// `Psi_0 = |00>`, `Psi_1 = |00>+|11>`, `Psi_2 = |00>+|11>+|22>` for Schmidt
/// rank 1, 2, 3, normalized.
pub fn bipartite_canonical(rank: usize) -> Result<PureState> {
    match rank {
        1 => PureState::from_kets(&["00"]),
        2 => PureState::from_kets(&["00", "11"]),
        3 => PureState::from_kets(&["00", "11", "22"]),
        _ => Err(Error::InvalidState(format!("no bipartite canonical of rank {rank}"))),
    }
}

/// The three bipartite canonical vectors.
pub fn bipartite_catalog() -> Vec<PureState> {
    (1..=3).map(|r| bipartite_canonical(r).expect("rank 1..3")).collect()
}
