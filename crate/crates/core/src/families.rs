//! The two parametric families: `Σ_m = Σ(m, m+1, 2m+1, 4m+3)` and tuples of
//! consecutive Fermat numbers.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{dominance_witness, rat, ratio, IntPolynomial};
use crate::error::{Error, Result};
use crate::json;
use crate::limits::Limits;
use crate::reeb::{connected_sum_chi, mean_euler, mean_euler_coprime};
use crate::topology::{evaluate_criterion, ExponentTuple, SphereVerdict};

/// One member of a family scan.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    #[serde(with = "json::decimal")]
    pub parameter: BigInt,
    #[serde(with = "json::tuple")]
    pub tuple: ExponentTuple,
    pub sphere_verdict: SphereVerdict,
    #[serde(with = "json::opt_rational")]
    pub chi_m: Option<BigRational>,
    /// Closed-form value, when the closed form applies to this member.
    #[serde(with = "json::opt_rational")]
    pub closed_form: Option<BigRational>,
    /// `chi_m == closed_form`, present iff `closed_form` is.
    pub agrees: Option<bool>,
}

/// A named pass/fail item of a verification report.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// `(m, m+1, 2m+1, 4m+3)` for `m >= 2`.
pub fn sigma_m_tuple(m: &BigInt) -> Result<ExponentTuple> {
    if m < &BigInt::from(2) {
        return Err(Error::InvalidInput(format!("Σ_m needs m >= 2, got {m}")));
    }
    ExponentTuple::new(vec![m.clone(), m + 1u32, m * 2u32 + 1u32, m * 4u32 + 3u32])
}

/// `g(m) = 21m² + 17m + 3`
pub fn sigma_m_numerator() -> IntPolynomial {
    IntPolynomial::from_i64(&[3, 17, 21])
}

/// `h(m) = 16m⁴ - 8m³ - 50m² - 34m - 6`
pub fn sigma_m_denominator() -> IntPolynomial {
    IntPolynomial::from_i64(&[-6, -34, -50, -8, 16])
}

/// `g'h - h'g`, the numerator of the derivative of `g/h`.
pub fn sigma_m_derivative_numerator() -> IntPolynomial {
    let (g, h) = (sigma_m_numerator(), sigma_m_denominator());
    &(&g.derivative() * &h) - &(&h.derivative() * &g)
}

/// `g(m) / |h(m)|`. Refused when `3 | m`, where the exponents stop being
/// pairwise coprime.
///
/// `h` is positive from `m = 3` on, so this is `g/h` on every `m >= 4`; at
/// `m = 2` the absolute value carried over from the coprime formula matters
/// (`h(2) = -82`).
pub fn sigma_m_closed_form(m: &BigInt) -> Result<BigRational> {
    if m < &BigInt::from(2) {
        return Err(Error::InvalidInput(format!("Σ_m needs m >= 2, got {m}")));
    }
    if !m.gcd(&BigInt::from(3)).is_one() {
        return Err(Error::Precondition(format!(
            "closed form for Σ_m needs gcd(m, 3) = 1, got m = {m}"
        )));
    }
    let x = BigRational::from_integer(m.clone());
    Ok(sigma_m_numerator().evaluate(&x) / sigma_m_denominator().evaluate(&x).abs())
}

pub fn sigma_m_row(m: &BigInt, limits: &Limits) -> Result<FamilyRow> {
    let tuple = sigma_m_tuple(m)?;
    let sphere_verdict = evaluate_criterion(&tuple)?;
    let chi_m = mean_euler(&tuple, limits)?.value;
    let closed_form = match sigma_m_closed_form(m) {
        Ok(v) => Some(v),
        Err(Error::Precondition(_)) => None,
        Err(e) => return Err(e),
    };
    let agrees = closed_form.as_ref().map(|c| chi_m.as_ref() == Some(c));
    Ok(FamilyRow { parameter: m.clone(), tuple, sphere_verdict, chi_m, closed_form, agrees })
}

pub fn sigma_m_rows(range: RangeInclusive<u64>, limits: &Limits) -> Result<Vec<FamilyRow>> {
    let ms: Vec<u64> = range.collect();
    ms.par_iter().map(|&m| sigma_m_row(&BigInt::from(m), limits)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaMReport {
    pub rows: Vec<FamilyRow>,
    pub checks: Vec<Check>,
    /// Parameters `m` (any residue mod 3) where `χ_m(ξ_m) >= χ_m(ξ_{m-1})`.
    pub increases_at: Vec<u64>,
}

impl SigmaMReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exact checks of the `Σ_m` family over `m_low..=m_high`:
/// closed-form agreement, strict decrease over `gcd(m, 3) = 1`, the
/// derivative-numerator coefficients, coefficient dominance of the
/// denominator at radius 3, and the sign of the derivative numerator at
/// every `m` in range.
pub fn verify_sigma_m_family(m_low: u64, m_high: u64, limits: &Limits) -> Result<SigmaMReport> {
    if m_low < 4 || m_low >= m_high {
        return Err(Error::InvalidInput(format!(
            "Σ_m scan needs 4 <= low < high, got [{m_low}, {m_high}]"
        )));
    }
    let rows = sigma_m_rows(m_low..=m_high, limits)?;
    let valid: Vec<&FamilyRow> = rows.iter().filter(|r| r.closed_form.is_some()).collect();
    let mut checks = Vec::new();

    let disagreeing: Vec<String> = valid
        .iter()
        .filter(|r| r.agrees != Some(true))
        .map(|r| r.parameter.to_string())
        .collect();
    checks.push(Check::new(
        "closed form agrees with stratified value",
        disagreeing.is_empty(),
        if disagreeing.is_empty() {
            format!("{} values of m with gcd(m,3)=1", valid.len())
        } else {
            format!("disagreement at m = {}", disagreeing.join(", "))
        },
    ));

    let not_decreasing: Vec<String> = valid
        .windows(2)
        .filter(|w| !(w[1].chi_m < w[0].chi_m))
        .map(|w| w[1].parameter.to_string())
        .collect();
    checks.push(Check::new(
        "strictly decreasing over gcd(m,3)=1",
        not_decreasing.is_empty(),
        if not_decreasing.is_empty() {
            format!("m in [{m_low}, {m_high}]")
        } else {
            format!("fails at m = {}", not_decreasing.join(", "))
        },
    ));

    if let Some(first) = rows.iter().find(|r| r.parameter == BigInt::from(4)) {
        let below = first.chi_m.as_ref().is_some_and(|v| v < &ratio(1, 4));
        let shown = first.chi_m.as_ref().map(ToString::to_string).unwrap_or_else(|| "undefined".into());
        checks.push(Check::new("chi_m(xi_4) < 1/4", below, shown));
    }

    let deriv = sigma_m_derivative_numerator();
    let expected = IntPolynomial::from_i64(&[0, 48, 208, 80, -648, -672]);
    checks.push(Check::new(
        "g'h - h'g coefficients",
        deriv == expected,
        deriv.to_string(),
    ));

    let dom = dominance_witness(&sigma_m_denominator(), &BigInt::from(3))?;
    checks.push(Check::new(
        "denominator dominance at radius 3",
        dom.holds(),
        format!("{} > {}", dom.leading_term, dom.lower_terms),
    ));

    let nonnegative: Vec<u64> = (m_low..=m_high)
        .filter(|&m| !deriv.evaluate_int(&BigInt::from(m)).is_negative())
        .collect();
    checks.push(Check::new(
        "g'h - h'g negative on range",
        nonnegative.is_empty(),
        if nonnegative.is_empty() {
            format!("m in [{m_low}, {m_high}]")
        } else {
            format!("not negative at {nonnegative:?}")
        },
    ));

    let increases_at = rows
        .windows(2)
        .filter(|w| !(w[1].chi_m < w[0].chi_m))
        .filter_map(|w| w[1].parameter.to_u64())
        .collect();
    Ok(SigmaMReport { rows, checks, increases_at })
}

/// `F_ℓ = 2^{2^ℓ} + 1`.
pub fn fermat(ell: u32, limits: &Limits) -> Result<BigInt> {
    if ell > limits.fermat_cap {
        return Err(Error::capacity("Fermat index", ell, limits.fermat_cap));
    }
    Ok((BigInt::one() << (1usize << ell)) + 1u32)
}

/// `F_0, ..., F_top`, each checked against `F_k = F_0 ⋯ F_{k-1} + 2`.
pub fn fermat_sequence(top: u32, limits: &Limits) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(top as usize + 1);
    let mut product = BigInt::one();
    for k in 0..=top {
        let f = fermat(k, limits)?;
        if k >= 1 && f != &product + 2u32 {
            return Err(Error::Inconsistent(format!("Fermat recursion fails at index {k}")));
        }
        product *= &f;
        out.push(f);
    }
    Ok(out)
}

/// `(F_ℓ, ..., F_{ℓ+n})`.
pub fn fermat_tuple(ell: u32, n: u32, limits: &Limits) -> Result<ExponentTuple> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("Fermat tuples need n >= 2, got {n}")));
    }
    let top = ell
        .checked_add(n)
        .filter(|&t| t <= limits.fermat_cap)
        .ok_or_else(|| Error::capacity("Fermat index l+n", ell as u64 + n as u64, limits.fermat_cap))?;
    let seq = fermat_sequence(top, limits)?;
    let tuple = ExponentTuple::new(seq[ell as usize..].to_vec())?;
    if !tuple.is_pairwise_coprime() {
        return Err(Error::Inconsistent(format!("Fermat tuple {tuple} is not pairwise coprime")));
    }
    Ok(tuple)
}

#[derive(Clone, Debug, Serialize)]
pub struct FermatRow {
    pub ell: u32,
    #[serde(with = "json::tuple")]
    pub tuple: ExponentTuple,
    pub sphere_verdict: Option<SphereVerdict>,
    #[serde(with = "json::rational")]
    pub chi_m: BigRational,
    /// `(-1)^{n+1} χ_m`
    #[serde(with = "json::rational")]
    pub signed_chi_m: BigRational,
    /// `(-1)^{n+1} χ_m · 2x³` with `x = 2^{2^ℓ}`; tends to 1.
    #[serde(with = "json::rational")]
    pub asymptotic_ratio: BigRational,
    /// `(-1)^{n+1} χ_m(a_ℓ # a_ℓ)`
    #[serde(with = "json::rational")]
    pub signed_self_sum: BigRational,
    /// Whether the stratified algorithm was run and matched the closed form.
    pub stratified_agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FermatReport {
    pub n: u32,
    pub rows: Vec<FermatRow>,
    /// First `ℓ` in range where `(-1)^{n+1} χ_m < 1/4`.
    pub first_below_quarter: Option<u32>,
    pub checks: Vec<Check>,
}

impl FermatReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Largest tuple length for which the stratified algorithm is re-run as a
/// cross-check in [`fermat_asymptotics`].
const STRATIFIED_CROSS_CHECK_LEN: usize = 5;

/// Exact asymptotics of the Fermat family for `ℓ` in `ells`.
pub fn fermat_asymptotics(ells: RangeInclusive<u32>, n: u32, limits: &Limits) -> Result<FermatReport> {
    if ells.is_empty() {
        return Err(Error::InvalidInput("empty Fermat index range".into()));
    }
    let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
    let ell_list: Vec<u32> = ells.collect();
    let rows = ell_list
        .par_iter()
        .map(|&ell| {
            let tuple = fermat_tuple(ell, n, limits)?;
            let sphere_verdict = if tuple.len() >= 3 { Some(evaluate_criterion(&tuple)?) } else { None };
            let chi_m = mean_euler_coprime(&tuple)?;
            let stratified_agrees = if tuple.len() <= STRATIFIED_CROSS_CHECK_LEN {
                Some(mean_euler(&tuple, limits)?.value.as_ref() == Some(&chi_m))
            } else {
                None
            };
            let signed_chi_m = &sign * &chi_m;
            let x = BigInt::one() << (1usize << ell);
            let asymptotic_ratio = &signed_chi_m * BigRational::from_integer(x.pow(3) * 2u32);
            let self_sum = connected_sum_chi(&[chi_m.clone(), chi_m.clone()], n as usize)?;
            Ok(FermatRow {
                ell,
                tuple,
                sphere_verdict,
                chi_m,
                signed_chi_m,
                asymptotic_ratio,
                signed_self_sum: &sign * self_sum,
                stratified_agrees,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let quarter = ratio(1, 4);
    let first_below_quarter = rows.iter().find(|r| r.signed_chi_m < quarter).map(|r| r.ell);
    let mut checks = Vec::new();

    let gaps: Vec<BigRational> = rows.iter().map(|r| (&r.asymptotic_ratio - rat(1)).abs()).collect();
    checks.push(Check::new(
        "ratio to 1/(2x^3) approaches 1 monotonically",
        gaps.windows(2).all(|w| w[1] < w[0]),
        rows.iter().map(|r| format!("l={}: {}", r.ell, r.asymptotic_ratio)).collect::<Vec<_>>().join("; "),
    ));
    checks.push(Check::new(
        "(-1)^(n+1) chi_m > 0",
        rows.iter().all(|r| r.signed_chi_m.is_positive()),
        format!("{} rows", rows.len()),
    ));
    checks.push(Check::new(
        "(-1)^(n+1) chi_m decreasing in l",
        rows.windows(2).all(|w| w[1].signed_chi_m < w[0].signed_chi_m),
        String::new(),
    ));
    let tail: Vec<&FermatRow> = match first_below_quarter {
        Some(first) => rows.iter().filter(|r| r.ell >= first).collect(),
        None => Vec::new(),
    };
    checks.push(Check::new(
        "in (0, 1/4) from the first entry on",
        first_below_quarter.is_some()
            && tail.iter().all(|r| r.signed_chi_m.is_positive() && r.signed_chi_m < quarter),
        match first_below_quarter {
            Some(l) => format!("enters at l = {l}"),
            None => "never below 1/4 in range".into(),
        },
    ));
    checks.push(Check::new(
        "self connected sum has negative signed value",
        !tail.is_empty() && tail.iter().all(|r| r.signed_self_sum.is_negative()),
        tail.iter().map(|r| format!("l={}: {}", r.ell, r.signed_self_sum)).collect::<Vec<_>>().join("; "),
    ));
    let mismatched: Vec<u32> = rows.iter().filter(|r| r.stratified_agrees == Some(false)).map(|r| r.ell).collect();
    checks.push(Check::new(
        "stratified algorithm matches closed form",
        mismatched.is_empty(),
        if mismatched.is_empty() { String::new() } else { format!("mismatch at l = {mismatched:?}") },
    ));
    if let Some(r) = rows.iter().find(|r| r.sphere_verdict.as_ref().is_some_and(|v| !v.is_sphere() && r.tuple.len() >= 4)) {
        checks.push(Check::new("Fermat tuples are spheres", false, format!("l = {}", r.ell)));
    }

    Ok(FermatReport { n, rows, first_below_quarter, checks })
}
