//! Naive machine-integer oracles, written without the library's algorithms.
#![allow(dead_code)]

use num_integer::Integer;
use num_rational::Ratio;

pub type Q = Ratio<i128>;

pub fn lcm_of(xs: &[i128]) -> i128 {
    xs.iter().fold(1, |acc, &x| acc.lcm(&x))
}

fn members(a: &[i128], mask: usize) -> Vec<i128> {
    (0..a.len()).filter(|j| mask >> j & 1 == 1).map(|j| a[j]).collect()
}

/// Alternating subset sum of `Π/lcm` over all index subsets.
pub fn kappa(a: &[i128]) -> i128 {
    let len = a.len();
    (0..1usize << len)
        .map(|mask| {
            let sub = members(a, mask);
            let quotient = sub.iter().product::<i128>() / lcm_of(&sub);
            if (len - sub.len()).is_multiple_of(2) {
                quotient
            } else {
                -quotient
            }
        })
        .sum()
}

pub fn chi_s1(a: &[i128]) -> i128 {
    let n = a.len() as i128 - 1;
    n + if (n - 1) % 2 == 0 { kappa(a) } else { -kappa(a) }
}

/// Sphere test straight from the gcd graph: at least two isolated vertices,
/// or one isolated vertex and an odd even-component (size > 1) whose
/// members pairwise have gcd exactly 2.
pub fn is_sphere(a: &[i128]) -> bool {
    let len = a.len();
    let isolated = (0..len).filter(|&i| (0..len).all(|j| j == i || a[i].gcd(&a[j]) == 1)).count();
    if isolated >= 2 {
        return true;
    }
    let evens: Vec<i128> = a.iter().copied().filter(|x| x % 2 == 0).collect();
    let others_touch_even = a.iter().filter(|x| *x % 2 == 1).any(|x| evens.iter().any(|e| e.gcd(x) > 1));
    let pairwise_two = evens.iter().enumerate().all(|(i, x)| evens[i + 1..].iter().all(|y| x.gcd(y) == 2));
    isolated >= 1 && evens.len() > 1 && evens.len() % 2 == 1 && pairwise_two && !others_touch_even
}

/// Reeb periods: lcms of index subsets of size at least two, ascending.
pub fn periods(a: &[i128]) -> Vec<i128> {
    let mut ts: Vec<i128> = (0..1usize << a.len())
        .filter(|m| m.count_ones() >= 2)
        .map(|m| lcm_of(&members(a, m)))
        .collect();
    ts.sort_unstable();
    ts.dedup();
    ts
}

/// Multiples `kT < d` of `T` that avoid every larger period; 1 at `T = d`.
pub fn frequency(ts: &[i128], i: usize) -> i128 {
    let d = *ts.last().unwrap();
    if ts[i] == d {
        return 1;
    }
    (1..)
        .map(|k| k * ts[i])
        .take_while(|&x| x < d)
        .filter(|x| ts[i + 1..].iter().all(|t| x % t != 0))
        .count() as i128
}

pub fn mu_rs(a: &[i128], t: i128) -> i128 {
    a.iter().map(|&e| Integer::div_floor(&t, &e) + Integer::div_ceil(&t, &e)).sum::<i128>() - 2 * t
}

pub fn total_mu_rs(a: &[i128]) -> i128 {
    let d = lcm_of(a);
    2 * (a.iter().map(|e| d / e).sum::<i128>() - d)
}

/// Stratified mean Euler characteristic with per-stratum signs.
pub fn chi_m(a: &[i128]) -> Option<Q> {
    let total = total_mu_rs(a);
    if total == 0 {
        return None;
    }
    let ts = periods(a);
    let numerator: i128 = (0..ts.len())
        .map(|i| {
            let sub: Vec<i128> = a.iter().copied().filter(|e| ts[i] % e == 0).collect();
            let half_quotient = sub.len() as i128 - 2;
            let sign = if (mu_rs(a, ts[i]) - half_quotient).rem_euclid(2) == 0 { 1 } else { -1 };
            sign * frequency(&ts, i) * chi_s1(&sub)
        })
        .sum();
    Some(Q::new(numerator, total.abs()))
}

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

/// Rational value of `g(m)/|h(m)|` for the Sigma_m family.
pub fn sigma_closed(m: i128) -> Q {
    let g = 21 * m * m + 17 * m + 3;
    let h = 16 * m.pow(4) - 8 * m.pow(3) - 50 * m * m - 34 * m - 6;
    Q::new(g, h.abs())
}

pub fn to_q(r: &num_rational::BigRational) -> Q {
    use num_traits::ToPrimitive;
    Q::new(r.numer().to_i128().unwrap(), r.denom().to_i128().unwrap())
}

pub fn big_tuple(a: &[i128]) -> brieskorn::topology::ExponentTuple {
    brieskorn::topology::ExponentTuple::new(a.iter().map(|&x| num_bigint::BigInt::from(x)).collect()).unwrap()
}
