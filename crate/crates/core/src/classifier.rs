//! Tripartite SLOCC classification.
//!
//! A state is reduced to the rank stratification of its right singular
//! subspace and the ranks of its three flattenings. That fingerprint is
//! looked up in a decision table calibrated on the catalog of canonical
//! vectors: the table is never written by hand.
//!
//! The catalog has 15 span families (three of dimension one, five of
//! dimension two, seven of dimension three), while [`count_classes`]`(3)`
//! evaluates the closed-form count to 12. The two numbers answer different
//! questions and are reported as they are.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::bipartite::classify_bipartite;
use crate::error::{Error, Result};
use crate::numerics::{matrix_rank, TolerancePolicy};
use crate::pencil::{analyze_span, right_subspace, Confidence, SearchBudget, SpanSignature};
use crate::states::{catalog, flatten, Family, PureState};

/// How a three-party state factorizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Separability {
    FullySeparable,
    /// The given party (1-based) is in a product with the other two, which
    /// are entangled.
    Biseparable(usize),
    GenuinelyTripartite,
}

impl Separability {
    /// From the flattening ranks at pivots 1, 2, 3.
    pub fn from_rank_triple(r: [usize; 3]) -> Self {
        if r == [1, 1, 1] {
            Separability::FullySeparable
        } else if let Some(p) = r.iter().position(|&x| x == 1) {
            Separability::Biseparable(p + 1)
        } else {
            Separability::GenuinelyTripartite
        }
    }
}

impl fmt::Display for Separability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separability::FullySeparable => f.write_str("fully-separable"),
            Separability::Biseparable(p) => write!(f, "biseparable({p})"),
            Separability::GenuinelyTripartite => f.write_str("genuinely-tripartite"),
        }
    }
}

impl Serialize for Separability {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Family plus, when the fingerprint pins it down, the catalog variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub family: Family,
    pub variant: Option<usize>,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Some(v) => write!(f, "family={} variant={v}", self.family),
            None => write!(f, "family={}", self.family),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SloccVerdict {
    /// `None` when the fingerprint matches no catalog family.
    pub label: Option<ClassLabel>,
    pub signature: SpanSignature,
    pub separability: Separability,
    pub confidence: Confidence,
    pub rank_triple: [usize; 3],
    pub dim_pi: usize,
}

impl SloccVerdict {
    pub fn is_classified(&self) -> bool {
        self.label.is_some()
    }
}

impl fmt::Display for SloccVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}, {}", self.separability),
            None => write!(f, "unclassified ({}), {}", self.signature, self.separability),
        }
    }
}

#[derive(Serialize)]
struct VerdictJson<'a> {
    family: &'a str,
    variant: Option<usize>,
    dim_pi: usize,
    rank_triple: [usize; 3],
    separability: Separability,
    confidence: Confidence,
    signature: &'a SpanSignature,
}

impl Serialize for SloccVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VerdictJson {
            family: self.label.map_or("unclassified", |l| l.family.as_str()),
            variant: self.label.and_then(|l| l.variant),
            dim_pi: self.dim_pi,
            rank_triple: self.rank_triple,
            separability: self.separability,
            confidence: self.confidence,
            signature: &self.signature,
        }
        .serialize(s)
    }
}

/// Everything the classifier compares: the span signature and the ranks of
/// the three flattenings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub signature: SpanSignature,
    pub rank_triple: [usize; 3],
}

#[derive(Debug, Clone)]
struct Row {
    family: Family,
    variants: Vec<usize>,
}

/// Fingerprint to family map, one row per distinct fingerprint of the
/// catalog.
#[derive(Debug, Clone)]
pub struct DecisionTable {
    rows: BTreeMap<Fingerprint, Row>,
}

/// Two catalog families produced the same fingerprint.
#[derive(Debug, Clone, PartialEq)]
pub struct Collision {
    pub fingerprint: Fingerprint,
    pub families: (String, String),
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} and {} share the fingerprint {} with ranks {:?}",
            self.families.0, self.families.1, self.fingerprint.signature, self.fingerprint.rank_triple
        )
    }
}

impl DecisionTable {
    /// Runs every catalog vector through the analysis. Fails on a numerical
    /// error, or with a [`Collision`] when two families are indistinguishable.
    pub fn calibrate(tol: &TolerancePolicy, budget: &SearchBudget) -> Result<std::result::Result<Self, Collision>> {
        let mut rows: BTreeMap<Fingerprint, Row> = BTreeMap::new();
        for entry in catalog() {
            let fp = fingerprint(&entry.state, tol, budget)?.0;
            let family = entry.id.family;
            match rows.get_mut(&fp) {
                Some(row) if row.family != family => {
                    return Ok(Err(Collision {
                        fingerprint: fp,
                        families: (row.family.to_string(), entry.id.to_string()),
                    }));
                }
                Some(row) => row.variants.push(entry.id.variant),
                None => {
                    rows.insert(
                        fp,
                        Row {
                            family,
                            variants: vec![entry.id.variant],
                        },
                    );
                }
            }
        }
        Ok(Ok(Self { rows }))
    }

    /// Table calibrated once with default tolerances and budget.
    ///
    /// # Panics
    /// If calibration fails; the catalog and defaults are fixed, so this is a
    /// defect in the crate, not in the input.
    pub fn global() -> &'static DecisionTable {
        static TABLE: OnceLock<DecisionTable> = OnceLock::new();
        TABLE.get_or_init(
            || match DecisionTable::calibrate(&TolerancePolicy::default(), &SearchBudget::default()) {
                Ok(Ok(t)) => t,
                Ok(Err(c)) => panic!("decision table collision: {c}"),
                Err(e) => panic!("decision table calibration failed: {e}"),
            },
        )
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Families appearing in the table.
    pub fn families(&self) -> Vec<Family> {
        let mut f: Vec<Family> = self.rows.values().map(|r| r.family).collect();
        f.sort_by_key(|x| Family::ALL.iter().position(|y| y == x));
        f.dedup();
        f
    }

    pub fn lookup(&self, fp: &Fingerprint) -> Option<ClassLabel> {
        self.rows.get(fp).map(|r| ClassLabel {
            family: r.family,
            variant: (r.variants.len() == 1).then(|| r.variants[0]),
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Fingerprint, Family, &[usize])> {
        self.rows.iter().map(|(k, r)| (k, r.family, r.variants.as_slice()))
    }
}

/// Ranks of the flattenings at pivots 1, 2, 3.
pub fn rank_triple(s: &PureState, tol: &TolerancePolicy) -> Result<[usize; 3]> {
    if s.parties() != 3 {
        return Err(Error::InvalidState(format!(
            "rank triple needs a 3-party state, got {} parties",
            s.parties()
        )));
    }
    let mut r = [0; 3];
    for (p, slot) in r.iter_mut().enumerate() {
        *slot = matrix_rank(&flatten(s, p + 1)?.matrix, tol)?;
    }
    Ok(r)
}

fn fingerprint(s: &PureState, tol: &TolerancePolicy, budget: &SearchBudget) -> Result<(Fingerprint, Confidence)> {
    let ranks = rank_triple(s, tol)?;
    let pi = right_subspace(s, tol)?;
    let analysis = analyze_span(&pi, tol, budget)?;
    Ok((
        Fingerprint {
            signature: analysis.signature,
            rank_triple: ranks,
        },
        analysis.confidence,
    ))
}

/// Classifies a three-qutrit state against the calibrated table.
///
/// An unrecognized fingerprint is not an error: the verdict carries no label
/// and the raw signature.
pub fn classify_tripartite(s: &PureState, tol: &TolerancePolicy, budget: &SearchBudget) -> Result<SloccVerdict> {
    classify_with(DecisionTable::global(), s, tol, budget)
}

/// [`classify_tripartite`] against an explicit table.
pub fn classify_with(
    table: &DecisionTable,
    s: &PureState,
    tol: &TolerancePolicy,
    budget: &SearchBudget,
) -> Result<SloccVerdict> {
    let (fp, confidence) = fingerprint(s, tol, budget)?;
    Ok(SloccVerdict {
        label: table.lookup(&fp),
        separability: Separability::from_rank_triple(fp.rank_triple),
        dim_pi: fp.signature.dim,
        rank_triple: fp.rank_triple,
        signature: fp.signature,
        confidence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Equivalence {
    SameClass,
    DifferentClass,
    Inconclusive,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::SameClass => "SameClass",
            Equivalence::DifferentClass => "DifferentClass",
            Equivalence::Inconclusive => "Inconclusive",
        })
    }
}

/// Compares two states by SLOCC invariants.
///
/// `DifferentClass` is reported only when an invariant differs: flattening
/// ranks always, span signatures when both searches are certified.
/// `SameClass` needs matching certified labels that name a single orbit.
/// Two-party states are decided by Schmidt rank alone.
pub fn verify_equivalence(
    s1: &PureState,
    s2: &PureState,
    tol: &TolerancePolicy,
    budget: &SearchBudget,
) -> Result<Equivalence> {
    if s1.parties() != s2.parties() {
        return Err(Error::Shape {
            expected: format!("{} parties", s1.parties()),
            found: format!("{} parties", s2.parties()),
        });
    }
    if s1.parties() == 2 {
        let same = classify_bipartite(s1, tol)?.schmidt_rank == classify_bipartite(s2, tol)?.schmidt_rank;
        return Ok(if same {
            Equivalence::SameClass
        } else {
            Equivalence::DifferentClass
        });
    }
    if s1.ray_distance(s2) <= tol.tol_recon {
        return Ok(Equivalence::SameClass);
    }
    let v1 = classify_tripartite(s1, tol, budget)?;
    let v2 = classify_tripartite(s2, tol, budget)?;
    if v1.rank_triple != v2.rank_triple {
        return Ok(Equivalence::DifferentClass);
    }
    let certified = v1.confidence == Confidence::Certified && v2.confidence == Confidence::Certified;
    if !certified {
        return Ok(Equivalence::Inconclusive);
    }
    if v1.signature != v2.signature {
        return Ok(Equivalence::DifferentClass);
    }
    match (v1.label, v2.label) {
        (Some(a), Some(b)) if a == b && names_single_orbit(a) => Ok(Equivalence::SameClass),
        _ => Ok(Equivalence::Inconclusive),
    }
}

/// A label identifies one orbit when it names one catalog vector without
/// free parameters.
fn names_single_orbit(l: ClassLabel) -> bool {
    !l.family.takes_parameters() && (l.variant.is_some() || l.family.variant_count() == 1)
}

/// Number of SLOCC classes in `C^n (x) C^n (x) C^n` by the closed formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub n: u64,
    pub total: u128,
}

/// `(n-1)^2 + sum_{i=2}^{n} [(1 + i(n-i)) C(n, n-i) - i(n-i)]` in exact
/// integer arithmetic, for `2 <= n <= 20`.
pub fn count_classes(n: u64) -> Result<ClassCount> {
    if !(2..=20).contains(&n) {
        return Err(Error::CountOutOfRange(n));
    }
    let n128 = n as u128;
    let mut total = (n128 - 1) * (n128 - 1);
    for i in 2..=n128 {
        let k = i * (n128 - i);
        total += (1 + k) * binomial(n128, n128 - i) - k;
    }
    Ok(ClassCount { n, total })
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    // each partial product is itself a binomial coefficient, so the
    // division is exact
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{CanonicalId, PureState};

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn classify(kets: &[&str]) -> SloccVerdict {
        classify_tripartite(&PureState::from_kets(kets).unwrap(), &tol(), &SearchBudget::default()).unwrap()
    }

    #[test]
    fn product_state() {
        let v = classify(&["000"]);
        assert_eq!(v.label.unwrap().family, Family::Dim1P0);
        assert_eq!(v.separability, Separability::FullySeparable);
    }

    #[test]
    fn p0p2_example() {
        let v = classify(&["000", "011", "022", "101"]);
        assert_eq!(v.label.unwrap().family, Family::P0P2);
        assert_eq!(v.separability, Separability::GenuinelyTripartite);
    }

    #[test]
    fn biseparable_example() {
        let v = classify(&["000", "101"]);
        assert_eq!(
            v.label,
            Some(ClassLabel {
                family: Family::P0P0,
                variant: Some(1)
            })
        );
        assert_eq!(v.separability, Separability::Biseparable(2));
        assert_eq!(v.rank_triple, [2, 1, 2]);
    }

    #[test]
    fn ghz_is_p0p0_variant_3() {
        let v = classify(&["000", "111"]);
        assert_eq!(v.to_string(), "family=P0P0 variant=3, genuinely-tripartite");
    }

    #[test]
    fn every_catalog_vector_maps_to_its_family() {
        for e in catalog() {
            let v = classify_tripartite(&e.state, &tol(), &SearchBudget::default()).unwrap();
            let l = v.label.unwrap_or_else(|| panic!("{} unclassified", e.id));
            assert_eq!(l.family, e.id.family, "{}", e.id);
            if let Some(var) = l.variant {
                assert_eq!(var, e.id.variant, "{}", e.id);
            }
        }
    }

    #[test]
    fn table_covers_all_families() {
        assert_eq!(DecisionTable::global().families(), Family::ALL.to_vec());
    }

    #[test]
    fn verdict_json_shape() {
        let v = classify(&["000", "111"]);
        let j = serde_json::to_value(&v).unwrap();
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in [
            "family",
            "variant",
            "dim_pi",
            "rank_triple",
            "separability",
            "confidence",
            "signature",
        ] {
            assert!(keys.contains(&k), "{k}");
        }
        assert_eq!(j["family"], "P0P0");
        assert_eq!(j["variant"], 3);
        assert_eq!(j["separability"], "genuinely-tripartite");
        assert_eq!(j["confidence"], "certified");
    }

    #[test]
    fn equivalence_examples() {
        let b = SearchBudget::default();
        let a = PureState::from_kets(&["000", "011"]).unwrap();
        let g = PureState::from_kets(&["000", "111"]).unwrap();
        assert_eq!(
            verify_equivalence(&a, &g, &tol(), &b).unwrap(),
            Equivalence::DifferentClass
        );
        assert_eq!(verify_equivalence(&g, &g, &tol(), &b).unwrap(), Equivalence::SameClass);
        let two = PureState::from_kets(&["00"]).unwrap();
        assert!(verify_equivalence(&a, &two, &tol(), &b).is_err());
        let id = CanonicalId::new(Family::P1P2, 1).unwrap();
        let p = crate::states::canonical_state(&id).unwrap();
        let q = PureState::from_kets(&["000", "011", "022", "101", "112"]).unwrap();
        assert_eq!(verify_equivalence(&p, &q, &tol(), &b).unwrap(), Equivalence::SameClass);
    }

    #[test]
    fn counts() {
        assert_eq!(count_classes(2).unwrap().total, 2);
        assert_eq!(count_classes(3).unwrap().total, 12);
        assert_eq!(count_classes(4).unwrap().total, 9 + 26 + 13 + 1);
        assert!(count_classes(1).is_err());
        assert!(count_classes(21).is_err());
        assert!(count_classes(20).is_ok());
    }

    #[test]
    fn separability_from_ranks() {
        assert_eq!(Separability::from_rank_triple([1, 1, 1]), Separability::FullySeparable);
        assert_eq!(Separability::from_rank_triple([2, 2, 1]), Separability::Biseparable(3));
        assert_eq!(
            Separability::from_rank_triple([2, 2, 2]),
            Separability::GenuinelyTripartite
        );
    }
}
