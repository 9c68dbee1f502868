//! Write a canonical state and a point of its orbit to JSON and read them back.

use qutrit_slocc::harness::{apply_ilo_tripartite, random_ilo};
use qutrit_slocc::states::{canonical_state, read_state, write_state, CanonicalId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let id = CanonicalId::parse("P1P2:1")?;
    let s = canonical_state(&id)?;
    let bytes = write_state(&s);
    println!(
        "{id}: {} bytes of JSON, {} nonzero amplitudes",
        bytes.len(),
        s.support().len()
    );
    assert_eq!(read_state(&bytes)?, s);

    let moved = apply_ilo_tripartite(&s, &random_ilo(7, 50.0)?)?.normalized();
    let back = read_state(&write_state(&moved))?;
    println!(
        "orbit point: {} nonzero amplitudes, exact round trip {}",
        back.support().len(),
        back == moved
    );
    Ok(())
}
