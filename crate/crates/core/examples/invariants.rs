//! Homology rank, equivariant Euler characteristic and the Reeb period strata.
//!
//! ```text
//! cargo run --example invariants -- 4 5 9 19
//! ```

use brieskorn::reeb::{mean_euler, mean_euler_coprime};
use brieskorn::topology::{chi_s1, kappa, ExponentTuple};
use brieskorn::Limits;

fn main() -> brieskorn::Result<()> {
    let mut entries: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if entries.is_empty() {
        entries = vec![4, 5, 9, 19];
    }
    let limits = Limits::default();
    let a = ExponentTuple::from_u64s(&entries)?;
    let report = mean_euler(&a, &limits)?;

    println!("tuple {a}, d = {}", report.period);
    println!("kappa = {}, chi_S1 = {}", kappa(&a, &limits)?, chi_s1(&a, &limits)?);
    println!("{:>10} {:<20} {:>4} {:>8} {:>8} {:>7}", "T", "b", "dim", "mu_RS", "phi", "chi_S1");
    for s in &report.strata {
        println!(
            "{:>10} {:<20} {:>4} {:>8} {:>8} {:>7}",
            s.period.to_string(),
            s.subtuple.to_string(),
            s.dim,
            s.mu_rs.to_string(),
            s.frequency.to_string(),
            s.chi_s1.to_string()
        );
    }
    match &report.value {
        Some(v) => println!("chi_m = {v}"),
        None => println!("chi_m undefined (total index {})", report.total_mu_rs),
    }
    if a.is_pairwise_coprime() {
        println!("pairwise coprime closed form: {}", mean_euler_coprime(&a)?);
    }
    Ok(())
}
