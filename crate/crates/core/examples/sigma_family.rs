//! The family Sigma(m, m+1, 2m+1, 4m+3) against its closed form.
//!
//! ```text
//! cargo run --release --example sigma_family -- 4 40
//! ```

use brieskorn::families::verify_sigma_m_family;
use brieskorn::Limits;

fn main() -> brieskorn::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (low, high) = match args[..] {
        [low, high, ..] => (low, high),
        _ => (4, 20),
    };
    let report = verify_sigma_m_family(low, high, &Limits::default())?;
    for row in &report.rows {
        let chi = row.chi_m.as_ref().map(ToString::to_string).unwrap_or_default();
        let closed = row.closed_form.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into());
        println!("m = {:>4}  {:<24} chi_m = {:<20} closed form = {closed}", row.parameter, row.tuple.to_string(), chi);
    }
    for check in &report.checks {
        println!("{} {}", if check.passed { "PASS" } else { "FAIL" }, check.name);
    }
    if !report.increases_at.is_empty() {
        println!("chi_m rises at m = {:?}", report.increases_at);
    }
    Ok(())
}
