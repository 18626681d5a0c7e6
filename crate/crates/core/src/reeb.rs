//! Reeb period strata, Robbin–Salamon indices and the mean Euler
//! characteristic of Brieskorn contact structures.
//!
//! The Reeb flow rotates `z_j` with speed `1/a_j`, so a point's minimal
//! period is the lcm of the exponents over its nonzero coordinates. No point
//! has a single nonzero coordinate, hence the periods are exactly the lcms
//! of index subsets of size at least two, and `Σ_T` is the Brieskorn
//! submanifold on the exponents dividing `T`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{count_multiples_avoiding, one_half, ratio};
use crate::error::{Error, Result};
use crate::json;
use crate::limits::Limits;
use crate::topology::{check_subset_cap, chi_s1, subsets_by_size, ExponentTuple};

/// The submanifold `Σ_T` of `T`-periodic Reeb orbits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    #[serde(with = "json::decimal")]
    pub period: BigInt,
    /// Indices `j` with `a_j | T`.
    pub indices: Vec<usize>,
    #[serde(with = "json::tuple")]
    pub subtuple: ExponentTuple,
    /// Number of exponents dividing the period.
    pub m_t: usize,
    /// `2 m_T - 3`
    pub dim: usize,
    /// `2 m_T - 4`, dimension of the orbit space `Σ_T / S¹`.
    pub quotient_dim: usize,
    #[serde(with = "json::decimal")]
    pub mu_rs: BigInt,
    #[serde(with = "json::decimal")]
    pub chi_s1: BigInt,
    #[serde(with = "json::decimal")]
    pub frequency: BigInt,
}

impl Stratum {
    /// `(-1)^{μ_RS - dim(Σ_T/S¹)/2}`.
    pub fn local_sign(&self) -> i32 {
        let half_quotient = BigInt::from(self.quotient_dim / 2);
        if (&self.mu_rs - half_quotient).is_even() {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanEulerReport {
    #[serde(with = "json::tuple")]
    pub tuple: ExponentTuple,
    /// `d = lcm(a)`
    #[serde(with = "json::decimal")]
    pub period: BigInt,
    #[serde(with = "json::decimal")]
    pub total_mu_rs: BigInt,
    /// `None` exactly when the total index vanishes.
    #[serde(with = "json::opt_rational")]
    pub value: Option<BigRational>,
    /// Ascending by period; the last one is `T = d` with frequency 1.
    pub strata: Vec<Stratum>,
    /// `(-1)^{n+1}`
    pub global_sign: i32,
}

impl MeanEulerReport {
    pub fn defined(&self) -> bool {
        self.value.is_some()
    }

    /// `Σ frequency · χ^{S¹}` over the strata, without any sign.
    pub fn unsigned_sum(&self) -> BigInt {
        self.strata.iter().map(|s| &s.frequency * &s.chi_s1).sum()
    }
}

/// Minimal Reeb periods `T_1 < ... < T_k = d`.
pub fn reeb_periods(a: &ExponentTuple, limits: &Limits) -> Result<Vec<BigInt>> {
    check_subset_cap(a, limits)?;
    let periods: BTreeSet<BigInt> = subsets_by_size(a.len(), 2)
        .map(|idx| idx.iter().fold(BigInt::one(), |acc, &j| acc.lcm(&a.entries()[j])))
        .collect();
    Ok(periods.into_iter().collect())
}

/// Robbin–Salamon index `Σ_j (⌊T/a_j⌋ + ⌈T/a_j⌉) - 2T` of the stratum at `T`.
pub fn mu_rs_at(a: &ExponentTuple, period: &BigInt) -> BigInt {
    let sum: BigInt = a
        .entries()
        .iter()
        .map(|e| period.div_floor(e) + period.div_ceil(e))
        .sum();
    sum - period * 2u32
}

/// `μ_RS(Σ(a)) = 2 (Σ_j d/a_j - d)`.
pub fn total_mu_rs(a: &ExponentTuple) -> BigInt {
    let d = a.lcm();
    let sum: BigInt = a.entries().iter().map(|e| &d / e).sum();
    (sum - d) * 2u32
}

// Stratum at a known period, frequency left at zero.
fn stratum_without_frequency(a: &ExponentTuple, period: &BigInt, limits: &Limits) -> Result<Stratum> {
    let indices: Vec<usize> = a
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| (period % *e).is_zero())
        .map(|(j, _)| j)
        .collect();
    let m_t = indices.len();
    let span = indices.iter().fold(BigInt::one(), |acc, &j| acc.lcm(&a.entries()[j]));
    if m_t < 2 || &span != period {
        return Err(Error::InvalidInput(format!("{period} is not a Reeb period of {a}")));
    }
    let subtuple = a.subtuple(&indices)?;
    let chi = chi_s1(&subtuple, limits)?;
    Ok(Stratum {
        period: period.clone(),
        indices,
        subtuple,
        m_t,
        dim: 2 * m_t - 3,
        quotient_dim: 2 * m_t - 4,
        mu_rs: mu_rs_at(a, period),
        chi_s1: chi,
        frequency: BigInt::zero(),
    })
}

/// The fully populated stratum at period `T`.
pub fn stratum(a: &ExponentTuple, period: &BigInt, limits: &Limits) -> Result<Stratum> {
    let mut s = stratum_without_frequency(a, period, limits)?;
    let periods = reeb_periods(a, limits)?;
    let pos = periods
        .iter()
        .position(|p| p == period)
        .ok_or_else(|| Error::Inconsistent(format!("period {period} missing from enumeration of {a}")))?;
    s.frequency = frequency_at(&periods, pos, limits)?;
    Ok(s)
}

/// Frequencies `φ_{T_i}(T_{i+1}, ..., T_k)`; the last one is 1 by convention.
pub fn frequencies(periods: &[BigInt], limits: &Limits) -> Result<Vec<BigInt>> {
    let top = periods
        .last()
        .ok_or_else(|| Error::InvalidInput("frequencies need at least one period".into()))?;
    if !top.is_positive() {
        return Err(Error::InvalidInput(format!("periods must be positive, got {top}")));
    }
    for w in periods.windows(2) {
        if w[0] >= w[1] || !w[0].is_positive() {
            return Err(Error::InvalidInput("periods must be positive and strictly increasing".into()));
        }
    }
    if let Some(p) = periods.iter().find(|p| !(top % *p).is_zero()) {
        return Err(Error::InvalidInput(format!("period {p} does not divide the top period {top}")));
    }
    (0..periods.len()).map(|i| frequency_at(periods, i, limits)).collect()
}

fn frequency_at(periods: &[BigInt], i: usize, limits: &Limits) -> Result<BigInt> {
    let last = periods.len() - 1;
    if i == last {
        return Ok(BigInt::one());
    }
    count_multiples_avoiding(&periods[i], &periods[last], &periods[i + 1..], limits)
}

/// Mean Euler characteristic with its full stratification.
///
/// The numerator is computed twice, once with the per-stratum signs and
/// once with the global `(-1)^{n+1}`; a disagreement is reported as
/// [`Error::Inconsistent`]. A vanishing total index is not an error: the
/// report then carries no value.
pub fn mean_euler(a: &ExponentTuple, limits: &Limits) -> Result<MeanEulerReport> {
    let periods = reeb_periods(a, limits)?;
    let freqs = frequencies(&periods, limits)?;
    let strata = periods
        .iter()
        .zip(freqs)
        .map(|(t, phi)| {
            let mut s = stratum_without_frequency(a, t, limits)?;
            s.frequency = phi;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;

    let global_sign = if a.n() % 2 == 1 { 1 } else { -1 };
    let local: BigInt = strata
        .iter()
        .map(|s| &s.frequency * &s.chi_s1 * BigInt::from(s.local_sign()))
        .sum();
    let unsigned: BigInt = strata.iter().map(|s| &s.frequency * &s.chi_s1).sum();
    let global = unsigned * BigInt::from(global_sign);
    if local != global {
        return Err(Error::Inconsistent(format!(
            "signed stratum sum {local} differs from globally signed sum {global} for {a}"
        )));
    }

    let total = total_mu_rs(a);
    let value = (!total.is_zero()).then(|| BigRational::new(global, total.abs()));
    Ok(MeanEulerReport {
        tuple: a.clone(),
        period: a.lcm(),
        total_mu_rs: total,
        value,
        strata,
        global_sign,
    })
}

/// Closed form for pairwise coprime exponents:
/// `(-1)^{n+1} Σ_{s<n} (n-s) e_s(a-1) / (2 |Σ_j Π_{i≠j} a_i - Π a|)`.
pub fn mean_euler_coprime(a: &ExponentTuple) -> Result<BigRational> {
    if let Some((i, j)) = a.first_common_factor_pair() {
        return Err(Error::Precondition(format!(
            "closed form needs pairwise coprime exponents, but a_{i} = {} and a_{j} = {} share a factor",
            a.entries()[i],
            a.entries()[j]
        )));
    }
    let n = a.n();
    let shifted: Vec<BigInt> = a.entries().iter().map(|e| e - 1u32).collect();
    let elementary = elementary_symmetric(&shifted);
    let bracket: BigInt = (0..n).map(|s| BigInt::from(n - s) * &elementary[s]).sum();

    let product: BigInt = a.entries().iter().product();
    let cofactors: BigInt = a.entries().iter().map(|e| &product / e).sum();
    let denominator = (cofactors - &product).abs() * 2u32;
    if denominator.is_zero() {
        return Err(Error::Inconsistent(format!("vanishing total index for coprime tuple {a}")));
    }
    let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    Ok(BigRational::new(sign * bracket, denominator))
}

/// `e_0, ..., e_len` of the given values.
pub fn elementary_symmetric(xs: &[BigInt]) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); xs.len() + 1];
    e[0] = BigInt::one();
    for (count, x) in xs.iter().enumerate() {
        for s in (1..=count + 1).rev() {
            let add = &e[s - 1] * x;
            e[s] += add;
        }
    }
    e
}

/// Mean Euler characteristic of a contact connected sum:
/// `Σ values + (count - 1)(-1)^n / 2`.
pub fn connected_sum_chi(values: &[BigRational], n: usize) -> Result<BigRational> {
    if values.is_empty() {
        return Err(Error::InvalidInput("connected sum of zero summands".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("connected sums need n >= 2, got {n}")));
    }
    let correction = if n.is_multiple_of(2) { one_half() } else { -one_half() };
    let sum: BigRational = values.iter().sum();
    Ok(sum + correction * BigRational::from_integer((values.len() - 1).into()))
}

/// The value acting as the neutral element under [`connected_sum_chi`],
/// `(-1)^{n+1} / 2`.
pub fn neutral_chi(n: usize) -> BigRational {
    if n % 2 == 1 {
        ratio(1, 2)
    } else {
        ratio(-1, 2)
    }
}

/// True when some exponent is coprime to all the others.
pub fn has_isolated_exponent(a: &ExponentTuple) -> bool {
    let e = a.entries();
    (0..e.len()).any(|i| (0..e.len()).all(|j| i == j || e[i].gcd(&e[j]).is_one()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn t(xs: &[u64]) -> ExponentTuple {
        ExponentTuple::from_u64s(xs).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn period_examples() {
        assert_eq!(reeb_periods(&t(&[2, 2, 3]), &lim()).unwrap(), ints(&[2, 6]));
        assert_eq!(reeb_periods(&t(&[2, 3, 5]), &lim()).unwrap(), ints(&[6, 10, 15, 30]));
        assert_eq!(
            reeb_periods(&t(&[4, 5, 9, 19]), &lim()).unwrap(),
            ints(&[20, 36, 45, 76, 95, 171, 180, 380, 684, 855, 3420])
        );
    }

    #[test]
    fn stratum_examples() {
        let s = stratum(&t(&[4, 5, 9, 19]), &20.into(), &lim()).unwrap();
        assert_eq!(s.subtuple, t(&[4, 5]));
        assert_eq!((s.m_t, s.dim), (2, 1));
        assert_eq!(s.mu_rs, BigInt::from(-14));

        let s = stratum(&t(&[2, 3, 5]), &6.into(), &lim()).unwrap();
        assert_eq!(s.subtuple, t(&[2, 3]));
        assert_eq!(s.mu_rs, BigInt::from(1));
        assert_eq!(s.chi_s1, BigInt::from(1));
        assert_eq!(s.frequency, BigInt::from(4));

        let s = stratum(&t(&[2, 3, 5]), &30.into(), &lim()).unwrap();
        assert!(s.mu_rs.is_even());
        assert_eq!(s.frequency, BigInt::from(1));

        assert!(matches!(stratum(&t(&[2, 3, 5]), &12.into(), &lim()), Err(Error::InvalidInput(_))));
        assert!(matches!(stratum(&t(&[2, 3, 5]), &2.into(), &lim()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn total_index_examples() {
        assert_eq!(total_mu_rs(&t(&[4, 5, 9, 19])), BigInt::from(-2642));
        assert_eq!(total_mu_rs(&t(&[2, 4, 6, 12])), BigInt::from(0));
        assert_eq!(total_mu_rs(&t(&[2, 3, 5])), BigInt::from(2));
    }

    #[test]
    fn frequency_examples() {
        assert_eq!(frequencies(&ints(&[2, 6]), &lim()).unwrap(), ints(&[2, 1]));
        assert_eq!(frequencies(&ints(&[6, 10, 15, 30]), &lim()).unwrap(), ints(&[4, 2, 1, 1]));
        assert_eq!(frequencies(&ints(&[3420]), &lim()).unwrap(), ints(&[1]));
        assert!(frequencies(&ints(&[]), &lim()).is_err());
        assert!(frequencies(&ints(&[6, 4, 12]), &lim()).is_err());
        assert!(frequencies(&ints(&[4, 6, 10]), &lim()).is_err());
    }

    #[test]
    fn mean_euler_examples() {
        let r = mean_euler(&t(&[4, 5, 9, 19]), &lim()).unwrap();
        assert_eq!(r.value, Some(ratio(407, 2642)));
        let last = r.strata.last().unwrap();
        assert_eq!(last.period, BigInt::from(3420));
        assert_eq!(last.frequency, BigInt::from(1));

        let r = mean_euler(&t(&[2, 3, 5]), &lim()).unwrap();
        assert_eq!(r.value, Some(ratio(-9, 2)));
        assert_eq!(r.global_sign, -1);

        let r = mean_euler(&t(&[2, 4, 6, 12]), &lim()).unwrap();
        assert!(!r.defined());
        assert!(r.value.is_none());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(mean_euler_coprime(&t(&[4, 5, 9, 19])).unwrap(), ratio(407, 2642));
        assert_eq!(mean_euler_coprime(&t(&[2, 3, 5])).unwrap(), ratio(-9, 2));
        let fermat = t(&[17, 257, 65537, 4294967297]);
        assert_eq!(mean_euler_coprime(&fermat).unwrap(), mean_euler(&fermat, &lim()).unwrap().value.unwrap());
        match mean_euler_coprime(&t(&[6, 7, 13, 27])) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("a_0") && msg.contains("a_3")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn elementary_symmetric_small() {
        assert_eq!(elementary_symmetric(&ints(&[3, 4, 8, 18])), ints(&[1, 33, 338, 1320, 1728]));
    }

    #[test]
    fn connected_sum_examples() {
        let x = ratio(407, 2642);
        let s = connected_sum_chi(&[x.clone(), x.clone()], 3).unwrap();
        assert_eq!(s, ratio(-507, 2642));
        assert!(s < rat(0));
        assert_eq!(connected_sum_chi(std::slice::from_ref(&x), 3).unwrap(), x);
        let y = ratio(613, 7574);
        assert_eq!(
            connected_sum_chi(&[x.clone(), y.clone()], 3).unwrap(),
            connected_sum_chi(&[y, x], 3).unwrap()
        );
        assert!(connected_sum_chi(&[], 3).is_err());
    }

    #[test]
    fn isolated_exponent_examples() {
        assert!(has_isolated_exponent(&t(&[4, 5, 9, 19])));
        assert!(!has_isolated_exponent(&t(&[2, 4, 6, 12])));
        assert!(has_isolated_exponent(&t(&[2, 2, 3])));
    }

    #[test]
    fn top_stratum_index_equals_total_index() {
        for xs in [[4u64, 5, 9, 19], [2, 4, 6, 12], [6, 10, 15, 7]] {
            let a = t(&xs);
            assert_eq!(mu_rs_at(&a, &a.lcm()), total_mu_rs(&a));
        }
    }

    // Greedily keep entries coprime to everything kept so far.
    pub(crate) fn coprime_tuple(min_len: usize, max_len: usize, max_entry: u64) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(2u64..=max_entry, 12..24)
            .prop_map(move |raw| {
                let mut kept: Vec<u64> = Vec::new();
                for x in raw {
                    if kept.len() < max_len && kept.iter().all(|&k| num_integer::gcd(k, x) == 1) {
                        kept.push(x);
                    }
                }
                kept
            })
            .prop_filter("enough coprime entries", move |v| v.len() >= min_len)
    }

    fn rational_strategy() -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..500).prop_map(|(p, q)| ratio(p, q))
    }

    proptest! {
        #[test]
        fn neutral_element(x in rational_strategy(), n in 2usize..9) {
            prop_assert_eq!(connected_sum_chi(&[x.clone(), neutral_chi(n)], n).unwrap(), x);
        }

        #[test]
        fn connected_sum_is_associative(x in rational_strategy(), y in rational_strategy(), z in rational_strategy(), n in 2usize..9) {
            let xy = connected_sum_chi(&[x.clone(), y.clone()], n).unwrap();
            let yz = connected_sum_chi(&[y.clone(), z.clone()], n).unwrap();
            let left = connected_sum_chi(&[xy, z.clone()], n).unwrap();
            let right = connected_sum_chi(&[x.clone(), yz], n).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left, connected_sum_chi(&[x, y, z], n).unwrap());
        }

        #[test]
        fn parity_of_stratum_index(xs in proptest::collection::vec(2u64..=30, 2..=6)) {
            let a = t(&xs);
            let n1 = a.len() as i64;
            let r = mean_euler(&a, &lim()).unwrap();
            for s in &r.strata {
                let lhs = s.mu_rs.mod_floor(&BigInt::from(2));
                prop_assert_eq!(lhs, BigInt::from((n1 - s.m_t as i64).rem_euclid(2)));
                prop_assert_eq!(s.local_sign(), r.global_sign);
            }
        }

        #[test]
        fn isolated_exponent_implies_nonzero_index(xs in proptest::collection::vec(2u64..=30, 2..=6)) {
            let a = t(&xs);
            if has_isolated_exponent(&a) {
                prop_assert!(!total_mu_rs(&a).is_zero());
            }
        }

        #[test]
        fn closed_form_agrees_with_strata(xs in coprime_tuple(3, 5, 50)) {
            let a = t(&xs);
            let general = mean_euler(&a, &lim()).unwrap().value.unwrap();
            prop_assert_eq!(&general, &mean_euler_coprime(&a).unwrap());
            let signed = general * BigRational::from_integer(if a.n() % 2 == 1 { 1 } else { -1 }.into());
            prop_assert!(signed > rat(0));
        }
    }
}
