use serde::{Deserialize, Serialize};

use super::state::PureState;
use crate::error::{Error, Result};
use crate::numerics::C64;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    parties: usize,
    amplitudes: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    index: Vec<usize>,
    re: f64,
    im: f64,
}

/// Parses the JSON state format
/// `{"parties": 2|3, "amplitudes": [{"index": [i, j, k], "re": x, "im": y}, ...]}`.
/// Omitted indices are zero; amplitudes are kept unnormalized.
pub fn read_state(bytes: &[u8]) -> Result<PureState> {
    let file: StateFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    if !(2..=3).contains(&file.parties) {
        return Err(Error::Parse(format!("parties must be 2 or 3, got {}", file.parties)));
    }
    let n = 3usize.pow(file.parties as u32);
    let mut amps = vec![C64::new(0.0, 0.0); n];
    let mut seen = vec![false; n];
    for e in &file.amplitudes {
        if e.index.len() != file.parties {
            return Err(Error::WrongAmplitudeCount {
                expected: file.parties,
                found: e.index.len(),
            });
        }
        if e.index.iter().any(|&i| i > 2) {
            return Err(Error::Parse(format!("index {:?} out of range", e.index)));
        }
        let off = e.index.iter().fold(0, |acc, &i| 3 * acc + i);
        if seen[off] {
            return Err(Error::Parse(format!("duplicate index {:?}", e.index)));
        }
        seen[off] = true;
        amps[off] = C64::new(e.re, e.im);
    }
    if file.amplitudes.len() > n {
        return Err(Error::WrongAmplitudeCount {
            expected: n,
            found: file.amplitudes.len(),
        });
    }
    PureState::new(file.parties, amps)
}

/// Like [`read_state`], but insists on a dense listing of every amplitude.
pub fn read_state_dense(bytes: &[u8]) -> Result<PureState> {
    let file: StateFile = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let n = 3usize.pow(file.parties.min(3) as u32);
    if file.amplitudes.len() != n {
        return Err(Error::WrongAmplitudeCount {
            expected: n,
            found: file.amplitudes.len(),
        });
    }
    read_state(bytes)
}

/// Canonical serialization: every nonzero amplitude in offset order, floats
/// in shortest round-trip form, pretty-printed with a trailing newline.
pub fn write_state(s: &PureState) -> Vec<u8> {
    let file = StateFile {
        parties: s.parties(),
        amplitudes: s
            .support()
            .into_iter()
            .map(|(index, z)| Entry {
                index,
                re: z.re,
                im: z.im,
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&file).expect("state serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_bell_like_pair() {
        let json = br#"{"parties": 2, "amplitudes": [
            {"index": [0, 0], "re": 1.0, "im": 0.0},
            {"index": [1, 1], "re": 1.0, "im": 0.0}]}"#;
        let s = read_state(json).unwrap();
        assert_eq!(s.amplitude(&[0, 0]), C64::new(1.0, 0.0));
        assert_eq!(s.amplitude(&[1, 1]), C64::new(1.0, 0.0));
        assert_eq!(s.amplitude(&[0, 1]), C64::new(0.0, 0.0));
        assert!((s.norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn duplicate_index_is_an_error() {
        let json = br#"{"parties": 2, "amplitudes": [
            {"index": [0, 0], "re": 1.0, "im": 0.0},
            {"index": [0, 0], "re": 2.0, "im": 0.0}]}"#;
        assert!(matches!(read_state(json), Err(Error::Parse(_))));
    }

    #[test]
    fn empty_and_zero_inputs_fail() {
        assert!(read_state(b"").is_err());
        let zero = br#"{"parties": 3, "amplitudes": []}"#;
        assert!(matches!(read_state(zero), Err(Error::InvalidState(_))));
    }

    #[test]
    fn short_dense_listing_is_wrong_count() {
        let mut entries = Vec::new();
        for o in 0..26 {
            entries.push(format!(
                r#"{{"index": [{}, {}, {}], "re": 1.0, "im": 0.0}}"#,
                o / 9,
                (o / 3) % 3,
                o % 3
            ));
        }
        let json = format!(r#"{{"parties": 3, "amplitudes": [{}]}}"#, entries.join(","));
        let e = read_state_dense(json.as_bytes()).unwrap_err();
        assert!(e.to_string().contains("wrong amplitude count"));
    }
}
