//! Consecutive Fermat numbers and the asymptotics of their mean Euler characteristic.
//!
//! ```text
//! cargo run --example fermat_asymptotics -- 3
//! ```

use brieskorn::families::{fermat_asymptotics, fermat_sequence};
use brieskorn::Limits;

fn main() -> brieskorn::Result<()> {
    let n: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let limits = Limits::default();
    for (ell, f) in fermat_sequence(6, &limits)?.iter().enumerate() {
        println!("F_{ell} = {f}");
    }
    let report = fermat_asymptotics(1..=4, n, &limits)?;
    for row in &report.rows {
        println!("l = {}: chi_m = {}", row.ell, row.chi_m);
        println!("        ratio = {}", row.asymptotic_ratio);
    }
    for check in &report.checks {
        println!("{} {}", if check.passed { "PASS" } else { "FAIL" }, check.name);
    }
    Ok(())
}
