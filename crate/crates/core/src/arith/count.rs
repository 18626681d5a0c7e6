//! Counting multiples of a base that avoid a set of forbidden divisors.
//!
//! `#{a >= 1 : a*base < bound, a*base not in f*N for every forbidden f}`.
//! Two routes are provided: a direct loop, usable when the range of `a` is
//! short, and inclusion–exclusion over the divisibility-minimal reduced
//! moduli. [`count_multiples_avoiding`] runs both whenever the direct loop
//! is affordable and insists they agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Count with both strategies, cross-checking when the direct range is
/// within `limits.direct_count_limit`.
pub fn count_multiples_avoiding(
    base: &BigInt,
    bound: &BigInt,
    forbidden: &[BigInt],
    limits: &Limits,
) -> Result<BigInt> {
    validate(base, bound, forbidden)?;
    let by_sieve = count_multiples_inclusion_exclusion(base, bound, forbidden, limits)?;
    let range = range_len(base, bound);
    if range <= BigInt::from(limits.direct_count_limit) {
        let direct = count_multiples_direct(base, bound, forbidden)?;
        if direct != by_sieve {
            return Err(Error::Inconsistent(format!(
                "multiple count for base {base}, bound {bound}: direct loop gives {direct}, \
                 inclusion-exclusion gives {by_sieve}"
            )));
        }
    }
    Ok(by_sieve)
}

/// Direct loop over `a = 1, 2, ...` while `a*base < bound`.
pub fn count_multiples_direct(base: &BigInt, bound: &BigInt, forbidden: &[BigInt]) -> Result<BigInt> {
    validate(base, bound, forbidden)?;
    // A forbidden f > bound has no multiple below bound.
    let relevant: Vec<&BigInt> = forbidden.iter().filter(|f| *f < bound).collect();

    if let (Some(base), Some(bound), Some(fs)) = (
        base.to_u64(),
        bound.to_u64(),
        relevant.iter().map(|f| f.to_u64()).collect::<Option<Vec<u64>>>(),
    ) {
        let mut count = 0u64;
        let mut multiple = base;
        while multiple < bound {
            if fs.iter().all(|f| multiple % f != 0) {
                count += 1;
            }
            match multiple.checked_add(base) {
                Some(next) => multiple = next,
                None => break,
            }
        }
        return Ok(BigInt::from(count));
    }

    let mut count = BigInt::zero();
    let mut multiple = base.clone();
    while &multiple < bound {
        if relevant.iter().all(|f| !(&multiple % *f).is_zero()) {
            count += 1;
        }
        multiple += base;
    }
    Ok(count)
}

/// Inclusion–exclusion over the divisibility antichain of reduced moduli.
pub fn count_multiples_inclusion_exclusion(
    base: &BigInt,
    bound: &BigInt,
    forbidden: &[BigInt],
    limits: &Limits,
) -> Result<BigInt> {
    validate(base, bound, forbidden)?;
    // a*base ≡ 0 (mod f)  <=>  a ≡ 0 (mod f / gcd(base, f)) = lcm(base, f) / base
    let reduced: Vec<BigInt> = forbidden.iter().map(|f| f / base.gcd(f)).collect();
    let antichain = divisibility_antichain(reduced);
    if antichain.len() > limits.antichain_cap {
        return Err(Error::capacity(
            "inclusion-exclusion antichain",
            antichain.len(),
            limits.antichain_cap,
        ));
    }
    let top = range_len(base, bound);
    let mut total = BigInt::zero();
    sieve(&antichain, 0, &BigInt::one(), true, &top, &mut total);
    Ok(total)
}

/// Deduplicated moduli, keeping only those not divisible by a smaller one,
/// sorted ascending.
pub fn divisibility_antichain(mut moduli: Vec<BigInt>) -> Vec<BigInt> {
    moduli.sort();
    moduli.dedup();
    let mut kept: Vec<BigInt> = Vec::with_capacity(moduli.len());
    for q in moduli {
        if kept.iter().all(|k| !(&q % k).is_zero()) {
            kept.push(q);
        }
    }
    kept
}

// Adds sign * floor(top / lcm(S)) for every subset S of moduli[from..] joined
// to the current subset. Once the running lcm exceeds `top` every extension
// contributes zero, so that branch is cut.
fn sieve(moduli: &[BigInt], from: usize, acc: &BigInt, positive: bool, top: &BigInt, total: &mut BigInt) {
    let term = top / acc;
    if positive {
        *total += term;
    } else {
        *total -= term;
    }
    for (i, q) in moduli.iter().enumerate().skip(from) {
        let next = acc.lcm(q);
        if &next > top {
            continue;
        }
        sieve(moduli, i + 1, &next, !positive, top, total);
    }
}

// Number of a >= 1 with a*base < bound.
fn range_len(base: &BigInt, bound: &BigInt) -> BigInt {
    (bound - 1u32) / base
}

fn validate(base: &BigInt, bound: &BigInt, forbidden: &[BigInt]) -> Result<()> {
    if !base.is_positive() || !bound.is_positive() {
        return Err(Error::InvalidInput(format!(
            "base and bound must be at least 1, got base {base}, bound {bound}"
        )));
    }
    if let Some(f) = forbidden.iter().find(|f| !f.is_positive()) {
        return Err(Error::InvalidInput(format!("forbidden modulus must be at least 1, got {f}")));
    }
    Ok(())
}
