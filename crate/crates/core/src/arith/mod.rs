//! Exact integer, rational and polynomial arithmetic.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`; this module
//! adds the gcd/lcm conventions the invariants rely on and the counting kernel
//! behind Reeb orbit frequencies.

mod count;
mod poly;

pub use count::{count_multiples_avoiding, count_multiples_direct, count_multiples_inclusion_exclusion, divisibility_antichain};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use poly::{dominance_check, dominance_witness, Dominance, IntPolynomial};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Nonnegative gcd; `gcd(0, 0) = 0`.
pub fn gcd(x: &BigInt, y: &BigInt) -> BigInt {
    x.gcd(y)
}

/// Least common multiple of two positive integers.
pub fn lcm(x: &BigInt, y: &BigInt) -> Result<BigInt> {
    ensure_positive(x)?;
    ensure_positive(y)?;
    Ok(x.lcm(y))
}

/// Least common multiple of a sequence of positive integers. The empty lcm is 1.
pub fn lcm_all<'a, I>(xs: I) -> Result<BigInt>
where
    I: IntoIterator<Item = &'a BigInt>,
{
    let mut acc = BigInt::one();
    for x in xs {
        ensure_positive(x)?;
        acc = acc.lcm(x);
    }
    Ok(acc)
}

/// Integer `m^e` for a small exponent.
pub fn pow(base: &BigInt, exp: usize) -> BigInt {
    num_traits::pow(base.clone(), exp)
}

/// `(-1)^k` as an `i32`.
pub fn sign_of_power(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Integer rational `n/1`.
pub fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Rational `num/den`, reduced. Panics if `den` is zero.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `1/2`.
pub fn one_half() -> BigRational {
    ratio(1, 2)
}

fn ensure_positive(x: &BigInt) -> Result<()> {
    if x.is_zero() || x.is_negative() {
        return Err(Error::InvalidInput(format!(
            "lcm is only defined here for positive integers, got {x}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&b(4), &b(19)), b(1));
        assert_eq!(gcd(&b(-12), &b(0)), b(12));
        assert_eq!(gcd(&b(0), &b(0)), b(0));
        assert_eq!(gcd(&b(17), &b(4294967297)), b(1));
    }

    #[test]
    fn lcm_examples() {
        let xs = [b(4), b(5), b(9), b(19)];
        assert_eq!(lcm_all(&xs).unwrap(), b(3420));
        assert_eq!(lcm_all(&[]).unwrap(), b(1));
        assert_eq!(lcm(&b(2), &b(2)).unwrap(), b(2));
    }

    #[test]
    fn lcm_rejects_nonpositive() {
        assert!(matches!(lcm(&b(0), &b(3)), Err(Error::InvalidInput(_))));
        assert!(matches!(lcm_all(&[b(3), b(-2)]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn rationals_are_reduced() {
        let r = ratio(814, 5284);
        assert_eq!(r.numer(), &b(407));
        assert_eq!(r.denom(), &b(2642));
        let neg = ratio(3, -6);
        assert_eq!(neg.numer(), &b(-1));
        assert_eq!(neg.denom(), &b(2));
    }

    proptest! {
        #[test]
        fn gcd_times_lcm_is_product(x in 1i64..100_000, y in 1i64..100_000) {
            let (x, y) = (b(x), b(y));
            prop_assert_eq!(gcd(&x, &y) * lcm(&x, &y).unwrap(), &x * &y);
        }

        #[test]
        fn rational_add_sub_round_trip(a in -1000i64..1000, bd in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let p = ratio(a, bd);
            let q = ratio(c, d);
            prop_assert_eq!((&p + &q) - &q, p);
        }
    }
}
