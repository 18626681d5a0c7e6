//! Exact polynomial checks behind the monotonicity of the Sigma_m family.
//!
//! ```text
//! cargo run --example polynomial_certificates
//! ```

use brieskorn::arith::{dominance_witness, BigInt, BigRational};
use brieskorn::families::{sigma_m_denominator, sigma_m_derivative_numerator, sigma_m_numerator};

fn main() -> brieskorn::Result<()> {
    let g = sigma_m_numerator();
    let h = sigma_m_denominator();
    println!("g(m) = {g}");
    println!("h(m) = {h}");
    println!("g'h - h'g = {}", sigma_m_derivative_numerator());

    let witness = dominance_witness(&h, &BigInt::from(3))?;
    println!(
        "leading term {} vs lower terms {} at radius 3: roots of h inside the disc: {}",
        witness.leading_term,
        witness.lower_terms,
        witness.holds()
    );

    let four = BigRational::from_integer(BigInt::from(4));
    println!("g(4)/h(4) = {}", g.evaluate(&four) / h.evaluate(&four));
    Ok(())
}
