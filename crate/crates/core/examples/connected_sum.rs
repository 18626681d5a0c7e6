//! Mean Euler characteristic of contact connected sums.
//!
//! ```text
//! cargo run --example connected_sum
//! ```

use brieskorn::reeb::{connected_sum_chi, mean_euler, neutral_chi};
use brieskorn::topology::ExponentTuple;
use brieskorn::Limits;

fn main() -> brieskorn::Result<()> {
    let limits = Limits::default();
    let summands = [[4u64, 5, 9, 19], [5, 6, 11, 23], [7, 8, 15, 31]];
    let mut values = Vec::new();
    for entries in summands {
        let a = ExponentTuple::from_u64s(&entries)?;
        let chi = mean_euler(&a, &limits)?.value.expect("defined for these tuples");
        println!("chi_m{a} = {chi}");
        values.push(chi);
    }
    let n = 3;
    println!("standard sphere (neutral element): {}", neutral_chi(n));
    println!("xi_4 # xi_4: {}", connected_sum_chi(&[values[0].clone(), values[0].clone()], n)?);
    println!("xi_4 # xi_5: {}", connected_sum_chi(&values[..2], n)?);
    println!("xi_4 # xi_5 # xi_7: {}", connected_sum_chi(&values, n)?);
    Ok(())
}
