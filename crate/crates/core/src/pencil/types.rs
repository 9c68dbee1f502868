use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerics::C64;

/// Number of rays (points of the projectivized span) with some property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RayCount {
    Finite(usize),
    Infinite,
}

impl RayCount {
    pub fn is_zero(self) -> bool {
        self == RayCount::Finite(0)
    }
}

impl fmt::Display for RayCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayCount::Finite(n) => write!(f, "{n}"),
            RayCount::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for RayCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RayCount::Finite(n) => s.serialize_u64(*n as u64),
            RayCount::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for RayCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(RayCount::Finite(n)),
            Raw::S(s) if s == "infinite" => Ok(RayCount::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad ray count `{s}`"))),
        }
    }
}

/// Basis-independent rank stratification of a span of 3x3 matrices.
///
/// * `rank1_rays`, `rank2_rays`: rays of rank exactly 1 or 2.
/// * `common_left_factor`: all elements share one column space of
///   dimension 1; `common_right_factor`: one row space of dimension 1.
/// * `root_profile` (two-dimensional spans with a nonvanishing determinant):
///   `(multiplicity, rank)` for every root of the binary cubic, sorted.
/// * `line_profile` (three-dimensional spans with a nonvanishing
///   determinant): root multiplicities of the determinant on a generic
///   line, descending, i.e. the multiplicity pattern of the curve's components.
/// * `singular_rank2` (three-dimensional spans with a nonvanishing
///   determinant): singular points of the determinant curve of rank 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanSignature {
    pub dim: usize,
    pub generic_rank: usize,
    pub det_vanishes: bool,
    pub rank1_rays: RayCount,
    pub rank2_rays: RayCount,
    pub common_left_factor: bool,
    pub common_right_factor: bool,
    pub root_profile: Vec<(usize, usize)>,
    pub line_profile: Vec<usize>,
    pub singular_rank2: Option<RayCount>,
}

impl SpanSignature {
    /// Smallest rank attained on the span.
    pub fn min_rank(&self) -> usize {
        if !self.rank1_rays.is_zero() || self.generic_rank == 1 {
            1
        } else if !self.rank2_rays.is_zero() || self.generic_rank == 2 {
            2
        } else {
            3
        }
    }
}

impl fmt::Display for SpanSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={} generic_rank={} det_vanishes={} rank1={} rank2={}",
            self.dim, self.generic_rank, self.det_vanishes, self.rank1_rays, self.rank2_rays
        )?;
        if self.common_left_factor {
            f.write_str(" common_left")?;
        }
        if self.common_right_factor {
            f.write_str(" common_right")?;
        }
        if !self.root_profile.is_empty() {
            write!(f, " roots={:?}", self.root_profile)?;
        }
        if !self.line_profile.is_empty() {
            write!(f, " line={:?}", self.line_profile)?;
        }
        if let Some(s) = self.singular_rank2 {
            write!(f, " singular_rank2={s}")?;
        }
        Ok(())
    }
}

/// Whether a budgeted search may have missed or over-split points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Confidence {
    Certified,
    BudgetLimited,
}

/// Parameters of the three-dimensional locus search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Random projective lines used to seed the point searches.
    pub lines: usize,
    pub seed: u64,
    /// More distinct points than this means a curve.
    pub infinite_threshold: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            lines: 200,
            seed: 0x5eed,
            infinite_threshold: 12,
        }
    }
}

impl SearchBudget {
    pub fn with_lines(lines: usize) -> Self {
        Self {
            lines,
            ..Self::default()
        }
    }
}

/// A ray of the span, as coefficients on the generators, with its rank and
/// (for roots of a binary cubic) multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RankRay {
    pub coeffs: Vec<C64>,
    pub rank: usize,
    pub multiplicity: Option<usize>,
}

/// Signature plus the explicit points behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilAnalysis {
    pub signature: SpanSignature,
    /// Rank-deficient rays located explicitly. For a curve-like locus this is
    /// a finite sample.
    pub rays: Vec<RankRay>,
    pub confidence: Confidence,
}

impl PencilAnalysis {
    pub fn rank1_rays(&self) -> impl Iterator<Item = &RankRay> {
        self.rays.iter().filter(|r| r.rank == 1)
    }
}
