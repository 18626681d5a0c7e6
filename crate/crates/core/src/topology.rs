//! Exponent tuples with Brieskorn's sphere criterion on their gcd graph.
//! The middle homology rank lives here too.
//!
//! A Brieskorn manifold is represented entirely by its exponent tuple
//! `a = (a_0, ..., a_n)`. The graph has one vertex per *index* (equal
//! exponents are distinct vertices) and an edge wherever two exponents share
//! a factor.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::lcm_all;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Ordered exponent tuple with `L >= 2` entries, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTuple {
    entries: Vec<BigInt>,
}

impl ExponentTuple {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "an exponent tuple needs at least 2 entries, got {}",
                entries.len()
            )));
        }
        let two = BigInt::from(2);
        if let Some((index, value)) = entries.iter().enumerate().find(|(_, e)| **e < two) {
            return Err(Error::EntryTooSmall { index, value: value.to_string() });
        }
        Ok(ExponentTuple { entries })
    }

    pub fn from_u64s(entries: &[u64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Number of entries, `L = n + 1`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `n` in `a = (a_0, ..., a_n)`.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    /// Real dimension `2n - 1` of the manifold.
    pub fn dimension(&self) -> usize {
        2 * self.n() - 1
    }

    /// `d = lcm(a_0, ..., a_n)`, the period of the Reeb flow.
    pub fn lcm(&self) -> BigInt {
        lcm_all(&self.entries).expect("entries are validated positive")
    }

    /// Entries sorted ascending. Σ(a) does not depend on the order.
    pub fn canonical(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.sort();
        ExponentTuple { entries }
    }

    pub fn is_canonical(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= w[1])
    }

    /// Subtuple on the given indices (in the given order).
    pub fn subtuple(&self, indices: &[usize]) -> Result<Self> {
        let entries = indices
            .iter()
            .map(|&i| {
                self.entries
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// First pair of indices whose entries share a factor, if any.
    pub fn first_common_factor_pair(&self) -> Option<(usize, usize)> {
        (0..self.len())
            .tuple_combinations()
            .find(|&(i, j)| !self.entries[i].gcd(&self.entries[j]).is_one())
    }

    pub fn is_pairwise_coprime(&self) -> bool {
        self.first_common_factor_pair().is_none()
    }

    /// Decimal strings, one per entry.
    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.entries.iter().join(","))
    }
}

/// The graph Γ(a): vertices are indices, edges join entries with gcd >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorGraph {
    pub edges: Vec<(usize, usize)>,
    /// Connected components as sorted index sets, ordered by smallest index.
    pub components: Vec<Vec<usize>>,
    /// The component holding the even entries (all even entries share the
    /// factor 2, so there is at most one). Empty when every entry is odd.
    pub even_component: Vec<usize>,
    /// Singleton components.
    pub isolated_points: Vec<usize>,
}

pub fn build_graph(a: &ExponentTuple) -> DivisorGraph {
    let len = a.len();
    let edges: Vec<(usize, usize)> = (0..len)
        .tuple_combinations()
        .filter(|&(k, l)| a.entries[k].gcd(&a.entries[l]) >= BigInt::from(2))
        .collect();

    // union-find over indices
    let mut parent: Vec<usize> = (0..len).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(k, l) in &edges {
        let (rk, rl) = (find(&mut parent, k), find(&mut parent, l));
        if rk != rl {
            parent[rk.max(rl)] = rk.min(rl);
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; len];
    for v in 0..len {
        let r = find(&mut parent, v);
        if slot_of_root[r] == usize::MAX {
            slot_of_root[r] = components.len();
            components.push(Vec::new());
        }
        components[slot_of_root[r]].push(v);
    }

    let even_component = a
        .entries
        .iter()
        .position(|e| e.is_even())
        .map(|v| components[slot_of_root[find(&mut parent, v)]].clone())
        .unwrap_or_default();
    let isolated_points = components.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();

    DivisorGraph { edges, components, even_component, isolated_points }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    /// At least two isolated points.
    SphereByI,
    /// An isolated point plus an odd even-component of size > 1 whose
    /// pairwise gcds are all exactly 2.
    SphereByII,
    NotSphere,
    /// Three-entry tuples: the graph conditions hold (integral homology
    /// 3-sphere). No homeomorphism type is claimed.
    HomologySphereConditionsHold,
    HomologySphereConditionsFail,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::SphereByI => "SPHERE_BY_I",
            VerdictKind::SphereByII => "SPHERE_BY_II",
            VerdictKind::NotSphere => "NOT_SPHERE",
            VerdictKind::HomologySphereConditionsHold => "HOMOLOGY_SPHERE_CONDITIONS_HOLD",
            VerdictKind::HomologySphereConditionsFail => "HOMOLOGY_SPHERE_CONDITIONS_FAIL",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereVerdict {
    pub kind: VerdictKind,
    pub isolated_points: Vec<usize>,
    pub even_component_size: usize,
    pub even_component_pairwise_gcd2: bool,
}

impl SphereVerdict {
    pub fn is_sphere(&self) -> bool {
        matches!(self.kind, VerdictKind::SphereByI | VerdictKind::SphereByII)
    }
}

/// Brieskorn's criterion for `Σ(a)` to be a topological sphere.
///
/// For `L >= 4` the verdict is an if-and-only-if statement about
/// homeomorphism to `S^{2n-1}`. For `L = 3` only whether the same graph
/// conditions hold is reported. When both conditions hold, condition (ii)
/// is named.
pub fn evaluate_criterion(a: &ExponentTuple) -> Result<SphereVerdict> {
    if a.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "the sphere criterion needs at least 3 exponents, got {}",
            a.len()
        )));
    }
    let graph = build_graph(a);
    let even = &graph.even_component;
    let two = BigInt::from(2);
    let pairwise_gcd2 = even
        .iter()
        .tuple_combinations()
        .all(|(&k, &l)| a.entries[k].gcd(&a.entries[l]) == two);

    let cond_i = graph.isolated_points.len() >= 2;
    let cond_ii = !graph.isolated_points.is_empty() && even.len() > 1 && even.len() % 2 == 1 && pairwise_gcd2;

    let kind = match (a.len() == 3, cond_ii, cond_i) {
        (false, true, _) => VerdictKind::SphereByII,
        (false, false, true) => VerdictKind::SphereByI,
        (false, false, false) => VerdictKind::NotSphere,
        (true, ii, i) if ii || i => VerdictKind::HomologySphereConditionsHold,
        (true, _, _) => VerdictKind::HomologySphereConditionsFail,
    };
    Ok(SphereVerdict {
        kind,
        isolated_points: graph.isolated_points,
        even_component_size: even.len(),
        even_component_pairwise_gcd2: pairwise_gcd2,
    })
}

/// Index subsets of `0..len` in increasing size, then lexicographic order.
pub(crate) fn subsets_by_size(len: usize, min_size: usize) -> impl Iterator<Item = Vec<usize>> {
    (min_size..=len).flat_map(move |k| (0..len).combinations(k))
}

pub(crate) fn check_subset_cap(a: &ExponentTuple, limits: &Limits) -> Result<()> {
    if a.len() > limits.subset_cap {
        return Err(Error::capacity("subset enumeration (tuple length)", a.len(), limits.subset_cap));
    }
    Ok(())
}

/// Signed layer sums of the homology-rank expansion: entry `k` is
/// `(-1)^{L-k} * sum over k-subsets I of prod(a_I) / lcm(a_I)`.
pub fn kappa_layers(a: &ExponentTuple, limits: &Limits) -> Result<Vec<BigInt>> {
    check_subset_cap(a, limits)?;
    let len = a.len();
    let mut layers = vec![BigInt::zero(); len + 1];
    for subset in subsets_by_size(len, 0) {
        let mut product = BigInt::one();
        let mut lcm = BigInt::one();
        for &j in &subset {
            product *= &a.entries[j];
            lcm = lcm.lcm(&a.entries[j]);
        }
        let (quotient, rem) = product.div_rem(&lcm);
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!(
                "product/lcm not integral on subset {subset:?} of {a}"
            )));
        }
        layers[subset.len()] += quotient;
    }
    for (k, layer) in layers.iter_mut().enumerate() {
        if (len - k) % 2 == 1 {
            *layer = -&*layer;
        }
    }

    // The first three layers have closed forms: ±1, ∓L, ±Σ gcd over pairs.
    let sign = |k: usize| if (len - k).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let pair_gcds: BigInt = (0..len)
        .tuple_combinations()
        .map(|(i, j)| a.entries[i].gcd(&a.entries[j]))
        .sum();
    if layers[0] != sign(0) || layers[1] != sign(1) * BigInt::from(len) || layers[2] != sign(2) * pair_gcds {
        return Err(Error::Inconsistent(format!("low-order layers of the rank expansion disagree for {a}")));
    }
    Ok(layers)
}

/// κ(a): rank of `H_{n-1}(Σ(a))`, by subset enumeration.
pub fn kappa(a: &ExponentTuple, limits: &Limits) -> Result<BigInt> {
    Ok(kappa_layers(a, limits)?.into_iter().sum())
}

/// `χ^{S¹}(Σ(a)) = n + (-1)^{n-1} κ(a)` with `n = L - 1`.
pub fn chi_s1(a: &ExponentTuple, limits: &Limits) -> Result<BigInt> {
    let k = kappa(a, limits)?;
    let n = BigInt::from(a.n());
    Ok(if a.n() % 2 == 1 { n + k } else { n - k })
}

/// All subtuples of length at least `min_length`, paired with their index sets.
pub fn invariant_subtuples(
    a: &ExponentTuple,
    min_length: usize,
    limits: &Limits,
) -> Result<Vec<(Vec<usize>, ExponentTuple)>> {
    if min_length < 2 || min_length > a.len() {
        return Err(Error::InvalidInput(format!(
            "minimum subtuple length must lie in [2, {}], got {min_length}",
            a.len()
        )));
    }
    check_subset_cap(a, limits)?;
    subsets_by_size(a.len(), min_length)
        .map(|idx| a.subtuple(&idx).map(|b| (idx, b)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SubtupleRow {
    pub indices: Vec<usize>,
    pub entries: Vec<String>,
    pub kappa: String,
    pub chi_s1: String,
}

/// Outcome of checking that every invariant Brieskorn submanifold of a
/// 5-dimensional Brieskorn sphere has positive equivariant Euler
/// characteristic, and that its 3-dimensional ones are rational homology
/// spheres.
#[derive(Clone, Debug, Serialize)]
pub struct SubtuplePositivityReport {
    pub tuple: Vec<String>,
    pub rows: Vec<SubtupleRow>,
    /// Human-readable descriptions of every violated assertion.
    pub falsifications: Vec<String>,
}

impl SubtuplePositivityReport {
    pub fn holds(&self) -> bool {
        self.falsifications.is_empty()
    }
}

pub fn check_subtuple_positivity(a: &ExponentTuple, limits: &Limits) -> Result<SubtuplePositivityReport> {
    if a.len() != 4 {
        return Err(Error::Precondition(format!(
            "positivity check applies to 4-tuples (5-dimensional), got length {}",
            a.len()
        )));
    }
    let verdict = evaluate_criterion(a)?;
    if !verdict.is_sphere() {
        return Err(Error::Precondition(format!("{a} is not a Brieskorn sphere ({})", verdict.kind)));
    }
    let mut rows = Vec::new();
    let mut falsifications = Vec::new();
    for (indices, b) in invariant_subtuples(a, 2, limits)? {
        let k = kappa(&b, limits)?;
        let chi = chi_s1(&b, limits)?;
        if b.len() == 3 && !k.is_zero() {
            falsifications.push(format!("kappa{b} = {k}, expected 0"));
        }
        if !chi.is_positive() {
            falsifications.push(format!("chi_S1{b} = {chi}, expected > 0"));
        }
        rows.push(SubtupleRow { indices, entries: b.to_strings(), kappa: k.to_string(), chi_s1: chi.to_string() });
    }
    Ok(SubtuplePositivityReport { tuple: a.to_strings(), rows, falsifications })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(xs: &[u64]) -> ExponentTuple {
        ExponentTuple::from_u64s(xs).unwrap()
    }

    fn small(x: &BigInt) -> i64 {
        num_traits::ToPrimitive::to_i64(x).expect("small integer")
    }

    fn k(xs: &[u64]) -> i64 {
        small(&kappa(&t(xs), &Limits::default()).unwrap())
    }

    // Independent rank oracle: the same alternating sum written over u128
    // with a bitmask walk instead of ordered combinations.
    fn kappa_oracle(xs: &[u64]) -> i128 {
        fn g(a: u128, b: u128) -> u128 {
            if b == 0 { a } else { g(b, a % b) }
        }
        let len = xs.len();
        let mut total = 0i128;
        for mask in 0u32..(1 << len) {
            let (mut p, mut l) = (1u128, 1u128);
            for (j, &x) in xs.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    p *= x as u128;
                    l = l / g(l, x as u128) * x as u128;
                }
            }
            let size = mask.count_ones() as usize;
            let term = (p / l) as i128;
            total += if (len - size).is_multiple_of(2) { term } else { -term };
        }
        total
    }

    #[test]
    fn make_tuple_validation() {
        let a = t(&[4, 5, 9, 19]);
        assert_eq!(a.n(), 3);
        assert_eq!(a.dimension(), 5);
        match ExponentTuple::from_u64s(&[2, 1, 3]) {
            Err(Error::EntryTooSmall { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(ExponentTuple::from_u64s(&[7]).is_err());
        let fermat = ExponentTuple::from_u64s(&[17, 257, 65537, 4294967297]).unwrap();
        assert_eq!(fermat.len(), 4);
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(&t(&[4, 5, 9, 19]));
        assert!(g.edges.is_empty());
        assert_eq!(g.isolated_points, vec![0, 1, 2, 3]);

        let g = build_graph(&t(&[2, 2, 2, 2]));
        assert_eq!(g.edges.len(), 6);
        assert_eq!(g.even_component.len(), 4);

        let g = build_graph(&t(&[2, 4, 6, 12]));
        assert_eq!(g.edges.len(), 6);
        assert!(g.isolated_points.is_empty());

        let g = build_graph(&t(&[3, 5, 7]));
        assert!(g.even_component.is_empty());
    }

    #[test]
    fn even_component_may_reach_odd_entries() {
        // 3 joins the even component through 6; the gcd-2 clause then fails.
        let a = t(&[2, 6, 10, 3, 7]);
        let g = build_graph(&a);
        assert_eq!(g.even_component, vec![0, 1, 2, 3]);
        let v = evaluate_criterion(&a).unwrap();
        assert!(!v.even_component_pairwise_gcd2);
        assert_eq!(v.kind, VerdictKind::NotSphere);
    }

    #[test]
    fn criterion_examples() {
        let v = evaluate_criterion(&t(&[4, 5, 9, 19])).unwrap();
        assert_eq!(v.kind, VerdictKind::SphereByI);
        assert!(v.isolated_points.contains(&1) && v.isolated_points.contains(&2));

        let v = evaluate_criterion(&t(&[2, 2, 2, 2])).unwrap();
        assert_eq!(v.kind, VerdictKind::NotSphere);
        assert_eq!(v.even_component_size, 4);

        assert_eq!(evaluate_criterion(&t(&[2, 3, 5])).unwrap().kind, VerdictKind::HomologySphereConditionsHold);
        assert_eq!(evaluate_criterion(&t(&[2, 2, 4])).unwrap().kind, VerdictKind::HomologySphereConditionsFail);

        let v = evaluate_criterion(&t(&[2, 2, 2, 3, 5])).unwrap();
        assert_eq!(v.kind, VerdictKind::SphereByII);
        assert_eq!(v.even_component_size, 3);
        assert!(v.even_component_pairwise_gcd2);

        assert!(matches!(evaluate_criterion(&t(&[2, 3])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(k(&[2, 2, 2]), 0);
        assert_eq!(k(&[2, 3, 5, 7]), 0);
        assert_eq!(k(&[2, 2, 2, 2]), 1);
        assert_eq!(k(&[2, 2]), 1);
        assert_eq!(kappa_oracle(&[2, 2, 2, 2]), 1);
    }

    #[test]
    fn kappa_cap() {
        let l = Limits { subset_cap: 3, ..Limits::default() };
        assert!(matches!(kappa(&t(&[2, 3, 5, 7]), &l), Err(Error::Capacity { .. })));
    }

    #[test]
    fn chi_s1_examples() {
        let l = Limits::default();
        assert_eq!(chi_s1(&t(&[4, 5, 9, 19]), &l).unwrap(), 3.into());
        assert_eq!(chi_s1(&t(&[2, 2]), &l).unwrap(), 2.into());
        assert_eq!(chi_s1(&t(&[2, 2, 2, 2]), &l).unwrap(), 4.into());
    }

    #[test]
    fn subtuple_enumeration() {
        let l = Limits::default();
        let subs = invariant_subtuples(&t(&[4, 5, 9, 19]), 3, &l).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[0].0, vec![0, 1, 2]);
        assert_eq!(subs[4].1, t(&[4, 5, 9, 19]));
        assert_eq!(invariant_subtuples(&t(&[2, 3, 5]), 2, &l).unwrap().len(), 4);
        let whole = invariant_subtuples(&t(&[6, 10, 15]), 3, &l).unwrap();
        assert_eq!(whole, vec![(vec![0, 1, 2], t(&[6, 10, 15]))]);
        assert!(invariant_subtuples(&t(&[6, 10, 15]), 1, &l).is_err());
        assert!(invariant_subtuples(&t(&[6, 10, 15]), 4, &l).is_err());
    }

    #[test]
    fn positivity_report() {
        let l = Limits::default();
        let r = check_subtuple_positivity(&t(&[4, 5, 9, 19]), &l).unwrap();
        assert!(r.holds());
        assert_eq!(r.rows.iter().filter(|row| row.entries.len() == 3).count(), 4);
        assert!(r.rows.iter().filter(|row| row.entries.len() == 3).all(|row| row.kappa == "0"));
        assert!(check_subtuple_positivity(&t(&[2, 3, 5, 7]), &l).unwrap().holds());
        assert!(matches!(check_subtuple_positivity(&t(&[2, 2, 2, 3, 5]), &l), Err(Error::Precondition(_))));
        assert!(matches!(check_subtuple_positivity(&t(&[2, 2, 2, 2]), &l), Err(Error::Precondition(_))));
    }

    #[test]
    fn kappa_of_pairs_is_gcd_minus_one() {
        for p in 2u64..=50 {
            for q in 2u64..=50 {
                assert_eq!(k(&[p, q]), num_integer::gcd(p, q) as i64 - 1, "({p},{q})");
            }
        }
    }

    fn tuple_strategy(max_len: usize, max_entry: u64) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(2u64..=max_entry, 2..=max_len)
    }

    proptest! {
        #[test]
        fn kappa_matches_bitmask_oracle(xs in tuple_strategy(7, 40)) {
            prop_assert_eq!(k(&xs) as i128, kappa_oracle(&xs));
        }

        #[test]
        fn sphere_four_tuples_have_vanishing_rank(xs in proptest::collection::vec(2u64..=30, 4)) {
            let a = t(&xs);
            if evaluate_criterion(&a).unwrap().is_sphere() {
                prop_assert_eq!(k(&xs), 0);
                let l = Limits::default();
                for (_, b) in invariant_subtuples(&a, 3, &l).unwrap() {
                    prop_assert!(kappa(&b, &l).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn coprime_subtuples_are_rational_homology_spheres(xs in crate::reeb::tests::coprime_tuple(3, 6, 50)) {
            let a = t(&xs);
            let l = Limits::default();
            for (_, b) in invariant_subtuples(&a, 3, &l).unwrap() {
                prop_assert!(kappa(&b, &l).unwrap().is_zero());
            }
        }

        #[test]
        fn criterion_is_permutation_invariant(xs in tuple_strategy(6, 30).prop_filter("len>=3", |v| v.len() >= 3), seed in any::<u64>()) {
            let mut ys = xs.clone();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..ys.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ys.swap(i, (s >> 33) as usize % (i + 1));
            }
            let va = evaluate_criterion(&t(&xs)).unwrap();
            let vb = evaluate_criterion(&t(&ys)).unwrap();
            prop_assert_eq!(va.kind, vb.kind);
            prop_assert_eq!(va.isolated_points.len(), vb.isolated_points.len());
            prop_assert_eq!(va.even_component_size, vb.even_component_size);
        }
    }
}
