//! Product vectors phi (x) psi inside the right singular subspace of a state.

use qutrit_slocc::numerics::{TolerancePolicy, C64};
use qutrit_slocc::pencil::{product_vectors_in_span, right_subspace, SearchBudget};
use qutrit_slocc::states::PureState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();
    for kets in [&["000", "111", "222"][..], &["000", "011"], &["000", "011", "101"]] {
        let pi = right_subspace(&PureState::from_kets(kets)?, &tol)?;
        let found = product_vectors_in_span(&pi, &tol, &SearchBudget::default())?;
        println!(
            "{}: span dim {}, {} product vectors",
            kets.join("+"),
            pi.dim,
            found.len()
        );
        for p in found {
            println!("  phi [{}]  psi [{}]", show(&p.phi), show(&p.psi));
        }
    }
    Ok(())
}

fn show(v: &[C64]) -> String {
    v.iter()
        .map(|z| format!("{:.3}{:+.3}i", z.re, z.im))
        .collect::<Vec<_>>()
        .join(", ")
}
