//! End-to-end reproduction suite behind `brieskorn verify-paper`.
//!
//! Each item recomputes a published value or property from scratch with
//! exact arithmetic and compares it to the frozen expectation in
//! [`Expectations`]. Items never share intermediate results except the
//! list of tuples whose frequencies are later re-counted by item 8.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{count_multiples_direct, count_multiples_inclusion_exclusion, dominance_witness, ratio, IntPolynomial};
use crate::error::Result;
use crate::families::{
    fermat_asymptotics, fermat_sequence, fermat_tuple, sigma_m_closed_form, sigma_m_denominator,
    sigma_m_derivative_numerator, sigma_m_tuple,
};
use crate::limits::Limits;
use crate::reeb::{has_isolated_exponent, mean_euler, mean_euler_coprime, reeb_periods, total_mu_rs, MeanEulerReport};
use crate::search::{certify_non_brieskorn_pairs, distinctness_classes, enumerate_sphere_tuples};
use crate::topology::{evaluate_criterion, invariant_subtuples, kappa, ExponentTuple, VerdictKind};

/// Frozen values the suite compares against.
#[derive(Clone, Debug)]
pub struct Expectations {
    pub chi_sigma_4: BigRational,
    pub self_sum_sigma_4: BigRational,
    /// Ascending coefficients of `g'h - h'g`.
    pub derivative_numerator: Vec<i64>,
    pub dominance: (i64, i64),
    pub chi_235: BigRational,
    pub frequencies_235: Vec<(i64, i64)>,
    pub total_index_235: i64,
}

impl Default for Expectations {
    fn default() -> Self {
        Expectations {
            chi_sigma_4: ratio(407, 2642),
            self_sum_sigma_4: ratio(-507, 2642),
            derivative_numerator: vec![0, 48, 208, 80, -648, -672],
            dominance: (1296, 774),
            chi_235: ratio(-9, 2),
            frequencies_235: vec![(6, 4), (10, 2), (15, 1), (30, 1)],
            total_index_235: 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub items: Vec<ItemResult>,
    pub elapsed_ms: u128,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, id: &str) -> Option<&ItemResult> {
        self.items.iter().find(|i| i.id == id)
    }
}

/// Size knobs of the property items.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub sigma_m_range: (u64, u64),
    pub parity_samples: usize,
    pub parity_max_len: usize,
    pub parity_max_entry: u64,
    pub parity_seed: u64,
    pub positivity_max_entry: u64,
    pub isolated_max_entry: u64,
    pub fermat_recursion_top: u32,
    pub certificate_ms: Vec<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sigma_m_range: (4, 200),
            parity_samples: 1000,
            parity_max_len: 6,
            parity_max_entry: 30,
            parity_seed: 0x5EED_B41E,
            positivity_max_entry: 20,
            isolated_max_entry: 30,
            fermat_recursion_top: 7,
            certificate_ms: vec![4, 5, 7, 8, 10],
        }
    }
}

struct Ctx<'a> {
    limits: &'a Limits,
    expect: &'a Expectations,
    config: &'a SuiteConfig,
    /// Tuples whose frequencies item 8 re-counts both ways.
    frequency_pool: Vec<ExponentTuple>,
}

type Outcome = Result<(bool, String)>;

const FREQUENCY_ORACLE_MAX_PERIOD: u64 = 1_000_000;

pub fn run(limits: &Limits) -> SuiteResult {
    run_with(limits, &Expectations::default(), &SuiteConfig::default())
}

pub fn run_with(limits: &Limits, expect: &Expectations, config: &SuiteConfig) -> SuiteResult {
    let start = Instant::now();
    let mut ctx = Ctx { limits, expect, config, frequency_pool: Vec::new() };
    let mut items = Vec::new();

    type Item = (&'static str, &'static str, Option<Duration>, fn(&mut Ctx) -> Outcome);
    let plan: [Item; 13] = [
        ("A", "sphere criterion examples", None, criterion_examples),
        ("B", "homology rank identities", None, kappa_identities),
        ("1", "chi_m(4,5,9,19) = 407/2642 by both formulas", Some(Duration::from_secs(1)), item_sigma_4),
        ("2", "closed form and strict decrease on the Sigma_m family", Some(Duration::from_secs(30)), item_sigma_family),
        ("3", "connected-sum certificates and distinct values", None, item_certificates),
        ("4", "g'h - h'g coefficients", None, item_derivative),
        ("5", "denominator dominance at radius 3", None, item_dominance),
        ("6", "Robbin-Salamon parity and sign coherence", None, item_parity),
        ("7", "positivity over sphere 4-tuples", Some(Duration::from_secs(60)), item_positivity),
        ("9", "Fermat recursion and asymptotics", None, item_fermat),
        ("10", "isolated exponent forces nonzero total index", None, item_isolated),
        ("11", "hand-worked (2,3,5) cross-check", None, item_235),
        ("8", "frequency counts agree (direct vs inclusion-exclusion)", None, item_frequency_oracle),
    ];

    for (id, title, budget, f) in plan {
        let t0 = Instant::now();
        let outcome = f(&mut ctx);
        let elapsed = t0.elapsed();
        let (mut passed, mut detail) = match outcome {
            Ok(pair) => pair,
            Err(e) => (false, format!("error: {e}")),
        };
        if let Some(limit) = budget {
            if elapsed > limit {
                passed = false;
                detail = format!("{detail}; took {elapsed:?}, limit {limit:?}");
            }
        }
        items.push(ItemResult { id: id.into(), title: title.into(), passed, detail, elapsed_ms: elapsed.as_millis() });
    }
    // report in numeric order with the lettered preliminaries first
    items.sort_by_key(|i| i.id.parse::<u32>().map(|n| (1, n)).unwrap_or((0, 0)));
    SuiteResult { items, elapsed_ms: start.elapsed().as_millis() }
}

fn tuple(xs: &[u64]) -> ExponentTuple {
    ExponentTuple::from_u64s(xs).expect("literal tuple is valid")
}

fn fail_list<T: std::fmt::Display>(what: &str, bad: &[T]) -> (bool, String) {
    if bad.is_empty() {
        (true, format!("{what}: ok"))
    } else {
        let shown: Vec<String> = bad.iter().take(5).map(ToString::to_string).collect();
        (false, format!("{what}: {} failures, e.g. {}", bad.len(), shown.join("; ")))
    }
}

fn criterion_examples(_: &mut Ctx) -> Outcome {
    let cases: [(&[u64], VerdictKind); 5] = [
        (&[4, 5, 9, 19], VerdictKind::SphereByI),
        (&[2, 2, 2, 2], VerdictKind::NotSphere),
        (&[2, 3, 5], VerdictKind::HomologySphereConditionsHold),
        (&[2, 2, 2, 3, 5], VerdictKind::SphereByII),
        (&[17, 257, 65537, 4294967297], VerdictKind::SphereByI),
    ];
    let mut bad = Vec::new();
    for (xs, want) in cases {
        let got = evaluate_criterion(&tuple(xs))?.kind;
        if got != want {
            bad.push(format!("{}: {got} (want {want})", tuple(xs)));
        }
    }
    Ok(fail_list("5 verdicts", &bad))
}

fn kappa_identities(ctx: &mut Ctx) -> Outcome {
    let mut bad = Vec::new();
    for (xs, want) in [(&[2u64, 2, 2][..], 0), (&[2, 3, 5, 7], 0), (&[2, 2, 2, 2], 1), (&[2, 2], 1)] {
        let got = kappa(&tuple(xs), ctx.limits)?;
        if got != BigInt::from(want) {
            bad.push(format!("kappa{} = {got}, want {want}", tuple(xs)));
        }
    }
    for p in 2u64..=50 {
        for q in p..=50 {
            let got = kappa(&tuple(&[p, q]), ctx.limits)?;
            if got != BigInt::from(num_integer::gcd(p, q) - 1) {
                bad.push(format!("kappa({p},{q}) = {got}"));
            }
        }
    }
    Ok(fail_list("kappa examples and kappa(p,q) = gcd - 1 for p,q <= 50", &bad))
}

fn item_sigma_4(ctx: &mut Ctx) -> Outcome {
    let a = tuple(&[4, 5, 9, 19]);
    ctx.frequency_pool.push(a.clone());
    let general = mean_euler(&a, ctx.limits)?.value;
    let closed = mean_euler_coprime(&a)?;
    let want = &ctx.expect.chi_sigma_4;
    let ok = general.as_ref() == Some(want) && &closed == want;
    let shown = general.map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
    Ok((ok, format!("stratified {shown}, closed form {closed}")))
}

fn item_sigma_family(ctx: &mut Ctx) -> Outcome {
    let (lo, hi) = ctx.config.sigma_m_range;
    let mut disagree = Vec::new();
    let mut prev: Option<BigRational> = None;
    let mut rises = Vec::new();
    let mut checked = 0;
    for m in lo..=hi {
        if m % 3 == 0 {
            continue;
        }
        let a = sigma_m_tuple(&m.into())?;
        if a.lcm() <= BigInt::from(FREQUENCY_ORACLE_MAX_PERIOD) {
            ctx.frequency_pool.push(a.clone());
        }
        let general = mean_euler(&a, ctx.limits)?.value;
        let closed = sigma_m_closed_form(&m.into())?;
        if general.as_ref() != Some(&closed) {
            disagree.push(m);
        }
        if let (Some(p), Some(g)) = (&prev, &general) {
            if g >= p {
                rises.push(m);
            }
        }
        prev = general;
        checked += 1;
    }
    let ok = disagree.is_empty() && rises.is_empty();
    Ok((
        ok,
        format!(
            "{checked} values in [{lo},{hi}] with gcd(m,3)=1; disagreements {disagree:?}; non-decreasing steps {rises:?}"
        ),
    ))
}

fn item_certificates(ctx: &mut Ctx) -> Outcome {
    let tuples: Vec<ExponentTuple> = ctx
        .config
        .certificate_ms
        .iter()
        .map(|&m| sigma_m_tuple(&m.into()))
        .collect::<Result<_>>()?;
    let mut self_certs = Vec::new();
    for t in &tuples {
        let certs = certify_non_brieskorn_pairs(std::slice::from_ref(t), ctx.limits)?;
        self_certs.extend(certs);
    }
    let sigma4 = self_certs.iter().find(|c| c.tuple_a == tuple(&[4, 5, 9, 19]));
    let sum_ok = sigma4.is_some_and(|c| c.chi_sum == ctx.expect.self_sum_sigma_4 && c.chi_sum.is_negative());
    let classes = distinctness_classes(&self_certs);
    let distinct = self_certs.len() == tuples.len() && classes.len() == tuples.len();
    let shown = sigma4.map(|c| c.chi_sum.to_string()).unwrap_or_else(|| "missing".into());
    Ok((
        sum_ok && distinct,
        format!(
            "chi_m(xi_4 # xi_4) = {shown}; {} self-sum certificates in {} distinct classes",
            self_certs.len(),
            classes.len()
        ),
    ))
}

fn item_derivative(ctx: &mut Ctx) -> Outcome {
    let got = sigma_m_derivative_numerator();
    let want = IntPolynomial::from_i64(&ctx.expect.derivative_numerator);
    Ok((got == want, got.to_string()))
}

fn item_dominance(ctx: &mut Ctx) -> Outcome {
    let w = dominance_witness(&sigma_m_denominator(), &BigInt::from(3))?;
    let (lead, rest) = ctx.expect.dominance;
    let ok = w.holds() && w.leading_term == BigInt::from(lead) && w.lower_terms == BigInt::from(rest);
    Ok((ok, format!("{} > {}", w.leading_term, w.lower_terms)))
}

/// Signed numerator recomputed from the report's strata, per-stratum signs.
fn locally_signed_value(r: &MeanEulerReport) -> Option<BigRational> {
    let num: BigInt = r
        .strata
        .iter()
        .map(|s| {
            let exponent = &s.mu_rs - BigInt::from(s.quotient_dim / 2);
            let term = &s.frequency * &s.chi_s1;
            if exponent.is_even() { term } else { -term }
        })
        .sum();
    (!r.total_mu_rs.is_zero()).then(|| BigRational::new(num, r.total_mu_rs.abs()))
}

fn item_parity(ctx: &mut Ctx) -> Outcome {
    let cfg = ctx.config;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.parity_seed);
    let mut parity_bad = Vec::new();
    let mut sign_bad = Vec::new();
    let mut strata_seen = 0usize;
    let mut defined = 0usize;
    for _ in 0..cfg.parity_samples {
        let len = rng.gen_range(2..=cfg.parity_max_len);
        let xs: Vec<u64> = (0..len).map(|_| rng.gen_range(2..=cfg.parity_max_entry)).collect();
        let a = tuple(&xs);
        if a.lcm() <= BigInt::from(FREQUENCY_ORACLE_MAX_PERIOD) {
            ctx.frequency_pool.push(a.clone());
        }
        let r = mean_euler(&a, ctx.limits)?;
        let l = a.len() as i64;
        for s in &r.strata {
            strata_seen += 1;
            let lhs = s.mu_rs.mod_floor(&BigInt::from(2));
            if lhs != BigInt::from((l - s.m_t as i64).rem_euclid(2)) {
                parity_bad.push(format!("{a} at T={}", s.period));
            }
        }
        if let Some(v) = &r.value {
            defined += 1;
            let global = BigRational::new(&r.unsigned_sum() * BigInt::from(r.global_sign), r.total_mu_rs.abs());
            if locally_signed_value(&r).as_ref() != Some(&global) || v != &global {
                sign_bad.push(a.to_string());
            }
        }
    }
    let (p_ok, p_msg) = fail_list(&format!("parity on {strata_seen} strata of {} tuples", cfg.parity_samples), &parity_bad);
    let (s_ok, s_msg) = fail_list(&format!("sign coherence on {defined} defined values"), &sign_bad);
    Ok((p_ok && s_ok, format!("{p_msg}; {s_msg}")))
}

fn item_positivity(ctx: &mut Ctx) -> Outcome {
    let spheres = enumerate_sphere_tuples(ctx.config.positivity_max_entry, 4, ctx.limits)?;
    let mut bad = Vec::new();
    for a in &spheres {
        for (_, b) in invariant_subtuples(a, 3, ctx.limits)?.iter().filter(|(_, b)| b.len() == 3) {
            if !kappa(b, ctx.limits)?.is_zero() {
                bad.push(format!("kappa{b} != 0 inside {a}"));
            }
        }
        match mean_euler(a, ctx.limits)?.value {
            Some(v) if v.is_positive() => {}
            other => bad.push(format!("chi_m{a} = {other:?}")),
        }
    }
    ctx.frequency_pool.extend(spheres.iter().cloned());
    Ok(fail_list(&format!("{} sphere 4-tuples with entries <= {}", spheres.len(), ctx.config.positivity_max_entry), &bad))
}

fn item_fermat(ctx: &mut Ctx) -> Outcome {
    let limits = Limits { fermat_cap: ctx.limits.fermat_cap.max(ctx.config.fermat_recursion_top), ..ctx.limits.clone() };
    let recursion_ok = fermat_sequence(ctx.config.fermat_recursion_top, &limits).is_ok();
    let verdict = evaluate_criterion(&fermat_tuple(2, 3, &limits)?)?.kind;
    let report = fermat_asymptotics(2..=4, 3, &limits)?;
    let ok = recursion_ok && verdict == VerdictKind::SphereByI && report.passed();
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let ratios: Vec<String> = report.rows.iter().map(|r| format!("l={}: {}", r.ell, r.asymptotic_ratio)).collect();
    Ok((
        ok,
        format!(
            "recursion to l={} {}; (F_2..F_5) {verdict}; ratios {}; failed checks {failed:?}",
            ctx.config.fermat_recursion_top,
            if recursion_ok { "exact" } else { "FAILED" },
            ratios.join(", ")
        ),
    ))
}

fn item_isolated(ctx: &mut Ctx) -> Outcome {
    let max = ctx.config.isolated_max_entry;
    let mut bad = Vec::new();
    let mut with_isolated = 0usize;
    for a in 2..=max {
        for b in a..=max {
            for c in b..=max {
                for d in c..=max {
                    let t = tuple(&[a, b, c, d]);
                    if has_isolated_exponent(&t) {
                        with_isolated += 1;
                        if total_mu_rs(&t).is_zero() {
                            bad.push(t.to_string());
                        }
                    }
                }
            }
        }
    }
    let undefined = !mean_euler(&tuple(&[2, 4, 6, 12]), ctx.limits)?.defined();
    let (ok, msg) = fail_list(&format!("{with_isolated} 4-tuples with an isolated exponent, entries <= {max}"), &bad);
    Ok((ok && undefined, format!("{msg}; (2,4,6,12) undefined: {undefined}")))
}

fn item_235(ctx: &mut Ctx) -> Outcome {
    let a = tuple(&[2, 3, 5]);
    ctx.frequency_pool.push(a.clone());
    let r = mean_euler(&a, ctx.limits)?;
    let closed = mean_euler_coprime(&a)?;
    let freqs: Vec<(BigInt, BigInt)> = r.strata.iter().map(|s| (s.period.clone(), s.frequency.clone())).collect();
    let want_freqs: Vec<(BigInt, BigInt)> =
        ctx.expect.frequencies_235.iter().map(|&(t, f)| (t.into(), f.into())).collect();
    let ok = r.value.as_ref() == Some(&ctx.expect.chi_235)
        && closed == ctx.expect.chi_235
        && freqs == want_freqs
        && r.total_mu_rs == BigInt::from(ctx.expect.total_index_235);
    let shown: Vec<String> = freqs.iter().map(|(t, f)| format!("{t}:{f}")).collect();
    Ok((
        ok,
        format!(
            "stratified {}, closed {closed}, strata {}, total index {}",
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            shown.join(" "),
            r.total_mu_rs
        ),
    ))
}

fn item_frequency_oracle(ctx: &mut Ctx) -> Outcome {
    let mut pool = std::mem::take(&mut ctx.frequency_pool);
    pool.sort();
    pool.dedup();
    let limit = BigInt::from(FREQUENCY_ORACLE_MAX_PERIOD);
    let mut bad = Vec::new();
    let mut counted = 0usize;
    let mut tuples = 0usize;
    for a in pool.iter().filter(|a| a.lcm() <= limit) {
        tuples += 1;
        let periods = reeb_periods(a, ctx.limits)?;
        let top = periods.last().expect("at least one period");
        for i in 0..periods.len() - 1 {
            let direct = count_multiples_direct(&periods[i], top, &periods[i + 1..])?;
            let sieve = count_multiples_inclusion_exclusion(&periods[i], top, &periods[i + 1..], ctx.limits)?;
            counted += 1;
            if direct != sieve {
                bad.push(format!("{a} at T={}: {direct} vs {sieve}", periods[i]));
            }
        }
    }
    Ok(fail_list(&format!("{counted} frequencies over {tuples} tuples with d <= 10^6"), &bad))
}
