//! Rank profiles of small matrix spans: a pencil with a double root, a span
//! sharing a left factor, and the diagonal three-dimensional span.

use qutrit_slocc::numerics::{CMatrix, TolerancePolicy, C64};
use qutrit_slocc::pencil::{analyze_dim2, rank_profile_dim2, rank_profile_dim3, SearchBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();
    let e = |i, j| CMatrix::unit(3, 3, i, j);
    let c = |x: f64| C64::new(x, 0.0);

    let a = CMatrix::identity(3);
    let b = CMatrix::diag(&[c(1.0), c(1.0), c(2.0)]);
    println!("I, diag(1,1,2): {}", rank_profile_dim2(&a, &b, &tol)?);
    for ray in analyze_dim2(&a, &b, &tol)?.rays {
        println!("  rank {} at [{}]", ray.rank, show(&ray.coeffs));
    }

    println!("E00, E01: {}", rank_profile_dim2(&e(0, 0), &e(0, 1), &tol)?);
    println!(
        "E00, E11, E22: {}",
        rank_profile_dim3(&e(0, 0), &e(1, 1), &e(2, 2), &tol, &SearchBudget::default())?
    );
    Ok(())
}

fn show(v: &[C64]) -> String {
    v.iter()
        .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
        .collect::<Vec<_>>()
        .join(", ")
}
