//! Classify a three-qutrit state given as kets, or read from a JSON state file.
//!
//! ```text
//! cargo run --example classify_state
//! cargo run --example classify_state -- path/to/state.json
//! ```

use qutrit_slocc::classifier::classify_tripartite;
use qutrit_slocc::numerics::TolerancePolicy;
use qutrit_slocc::pencil::SearchBudget;
use qutrit_slocc::states::{read_state, PureState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();
    let budget = SearchBudget::default();

    let states: Vec<(String, PureState)> = match std::env::args().nth(1) {
        Some(path) => vec![(path.clone(), read_state(&std::fs::read(&path)?)?)],
        None => [
            &["000"][..],
            &["000", "111"],
            &["000", "111", "222"],
            &["001", "010", "100"],
            &["000", "011", "022", "101", "112"],
        ]
        .iter()
        .map(|kets| Ok((kets.join("+"), PureState::from_kets(kets)?)))
        .collect::<qutrit_slocc::error::Result<_>>()?,
    };

    for (name, s) in states {
        let v = classify_tripartite(&s, &tol, &budget)?;
        println!("{name:>24}  {v}");
        println!(
            "{:>24}  ranks {:?}, span dim {}, {}",
            "", v.rank_triple, v.dim_pi, v.signature
        );
    }
    Ok(())
}
