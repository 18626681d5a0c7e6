//! Search for contact connected sums of Brieskorn 5-spheres that cannot be
//! Brieskorn, with JSONL certificate persistence.
//!
//! Every 5-dimensional Brieskorn sphere has `χ_m > 0`. In dimension 5 the
//! connected sum satisfies `χ_m(a # b) = χ_m(a) + χ_m(b) - 1/2`, so any pair
//! with `χ_m(a) + χ_m(b) <= 1/2` yields a contact sphere that is not
//! contactomorphic to a Brieskorn one.

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{one_half, rat};
use crate::error::{Error, Result};
use crate::json;
use crate::limits::Limits;
use crate::reeb::{connected_sum_chi, mean_euler};
use crate::topology::{evaluate_criterion, ExponentTuple};

pub const CONCLUSION: &str = "connected sum not contactomorphic to any Brieskorn contact structure";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonBrieskornCertificate {
    #[serde(with = "json::tuple")]
    pub tuple_a: ExponentTuple,
    #[serde(with = "json::tuple")]
    pub tuple_b: ExponentTuple,
    #[serde(with = "json::rational")]
    pub chi_a: BigRational,
    #[serde(with = "json::rational")]
    pub chi_b: BigRational,
    #[serde(with = "json::rational")]
    pub chi_sum: BigRational,
    pub dimension: u32,
    /// `chi_sum == 0`. Still a certificate, since Brieskorn spheres have
    /// strictly positive `χ_m`.
    pub boundary: bool,
    pub conclusion: String,
}

impl NonBrieskornCertificate {
    pub fn new(tuple_a: ExponentTuple, chi_a: BigRational, tuple_b: ExponentTuple, chi_b: BigRational) -> Result<Self> {
        let chi_sum = connected_sum_chi(&[chi_a.clone(), chi_b.clone()], 3)?;
        Ok(NonBrieskornCertificate {
            boundary: chi_sum.is_zero(),
            tuple_a,
            tuple_b,
            chi_a,
            chi_b,
            chi_sum,
            dimension: 5,
            conclusion: CONCLUSION.to_string(),
        })
    }

    /// Violated certificate invariants, empty when the certificate is sound.
    /// Only the stored fields are inspected; `χ_m` is not recomputed.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.dimension != 5 {
            out.push(format!("dimension is {}, certificates are 5-dimensional", self.dimension));
        }
        if self.tuple_a.len() != 4 || self.tuple_b.len() != 4 {
            out.push("tuples must have 4 entries".into());
        }
        if self.chi_sum != &self.chi_a + &self.chi_b - one_half() {
            out.push("chi_sum != chi_a + chi_b - 1/2".into());
        }
        if self.chi_sum.is_positive() {
            out.push("chi_sum is positive".into());
        }
        if self.boundary != self.chi_sum.is_zero() {
            out.push("boundary flag does not match chi_sum".into());
        }
        out
    }
}

fn multiset_count(values: u64, length: usize) -> BigInt {
    // C(values + length - 1, length)
    let mut acc = BigInt::from(1);
    for i in 0..length as u64 {
        acc = acc * (values + i) / (i + 1);
    }
    acc
}

/// Canonical (ascending) tuples of the given length with entries in
/// `[2, max_exponent]` that pass the sphere criterion, in lexicographic order.
pub fn enumerate_sphere_tuples(max_exponent: u64, length: usize, limits: &Limits) -> Result<Vec<ExponentTuple>> {
    if max_exponent < 2 {
        return Err(Error::InvalidInput(format!("max exponent must be at least 2, got {max_exponent}")));
    }
    if length < 3 {
        return Err(Error::InvalidInput(format!("sphere search needs length >= 3, got {length}")));
    }
    let candidates = multiset_count(max_exponent - 1, length);
    if candidates > BigInt::from(limits.search_budget) {
        return Err(Error::capacity("sphere search candidates", candidates, limits.search_budget));
    }

    let mut found = Vec::new();
    let mut current = vec![2u64; length];
    loop {
        let tuple = ExponentTuple::from_u64s(&current)?;
        if evaluate_criterion(&tuple)?.is_sphere() {
            found.push(tuple);
        }
        // next nondecreasing sequence
        let Some(pos) = current.iter().rposition(|&v| v < max_exponent) else { break };
        let next = current[pos] + 1;
        current[pos..].iter_mut().for_each(|v| *v = next);
    }
    Ok(found)
}

/// `χ_m` of every canonical 5-dimensional sphere tuple in the input, in
/// canonical order, duplicates removed.
pub fn sphere_chis(tuples: &[ExponentTuple], limits: &Limits) -> Result<Vec<(ExponentTuple, BigRational)>> {
    let mut canonical: Vec<ExponentTuple> = tuples.iter().map(ExponentTuple::canonical).collect();
    canonical.sort();
    canonical.dedup();
    canonical
        .into_par_iter()
        .map(|t| {
            if t.len() != 4 {
                return Err(Error::Precondition(format!("{t} is not 5-dimensional")));
            }
            let verdict = evaluate_criterion(&t)?;
            if !verdict.is_sphere() {
                return Err(Error::Precondition(format!("{t} is not a Brieskorn sphere ({})", verdict.kind)));
            }
            let chi = mean_euler(&t, limits)?
                .value
                .ok_or_else(|| Error::Precondition(format!("mean Euler characteristic of {t} is undefined")))?;
            Ok((t, chi))
        })
        .collect()
}

/// Every unordered pair (self-pairs included) whose connected sum has
/// `χ_m <= 0`, in canonical pair order.
pub fn certify_non_brieskorn_pairs(tuples: &[ExponentTuple], limits: &Limits) -> Result<Vec<NonBrieskornCertificate>> {
    let chis = sphere_chis(tuples, limits)?;
    certify_from_chis(&chis)
}

/// Certificates from precomputed `(tuple, χ_m)` rows, which must be in
/// canonical order.
pub fn certify_from_chis(chis: &[(ExponentTuple, BigRational)]) -> Result<Vec<NonBrieskornCertificate>> {
    let mut by_value: Vec<usize> = (0..chis.len()).collect();
    by_value.sort_by(|&x, &y| chis[x].1.cmp(&chis[y].1));

    let half = one_half();
    let pairs: Vec<(usize, usize)> = (0..chis.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let room = &half - &chis[i].1;
            let fits = by_value.partition_point(|&j| chis[j].1 <= room);
            let mut partners: Vec<usize> = by_value[..fits].iter().copied().filter(|&j| j >= i).collect();
            partners.sort_unstable();
            partners.into_iter().map(move |j| (i, j))
        })
        .collect();

    pairs
        .into_par_iter()
        .map(|(i, j)| {
            let (ta, ca) = &chis[i];
            let (tb, cb) = &chis[j];
            NonBrieskornCertificate::new(ta.clone(), ca.clone(), tb.clone(), cb.clone())
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateClass {
    #[serde(with = "json::rational")]
    pub chi_sum: BigRational,
    /// Indices into the certificate list.
    pub members: Vec<usize>,
    /// Number of distinct unordered tuple pairs in the class.
    pub distinct_pairs: usize,
    /// False when different connected sums share this `χ_m`: the invariant
    /// cannot tell them apart.
    pub conclusive: bool,
}

/// Group certificates by exact `χ_m` of the connected sum, ascending.
/// Connected sums in different classes are pairwise non-contactomorphic.
pub fn distinctness_classes(certs: &[NonBrieskornCertificate]) -> Vec<CertificateClass> {
    let mut order: Vec<usize> = (0..certs.len()).collect();
    order.par_sort_by(|&x, &y| {
        let (p, q) = (&certs[x].chi_sum, &certs[y].chi_sum);
        (p.numer() * q.denom()).cmp(&(q.numer() * p.denom())).then(x.cmp(&y))
    });
    let groups: Vec<Vec<usize>> = order
        .chunk_by(|&x, &y| certs[x].chi_sum == certs[y].chi_sum)
        .map(<[usize]>::to_vec)
        .collect();
    groups
        .into_par_iter()
        .map(|members| {
            let chi_sum = &certs[members[0]].chi_sum;
            let mut keys: Vec<(Cow<ExponentTuple>, Cow<ExponentTuple>)> = members
                .iter()
                .map(|&i| {
                    let (a, b) = (canonical_cow(&certs[i].tuple_a), canonical_cow(&certs[i].tuple_b));
                    if a <= b { (a, b) } else { (b, a) }
                })
                .collect();
            keys.sort();
            keys.dedup();
            CertificateClass {
                chi_sum: chi_sum.clone(),
                distinct_pairs: keys.len(),
                conclusive: keys.len() == 1,
                members,
            }
        })
        .collect()
}

fn canonical_cow(t: &ExponentTuple) -> Cow<'_, ExponentTuple> {
    if t.is_canonical() {
        Cow::Borrowed(t)
    } else {
        Cow::Owned(t.canonical())
    }
}

pub fn write_jsonl<W: Write>(certs: &[NonBrieskornCertificate], mut out: W) -> std::io::Result<()> {
    for c in certs {
        serde_json::to_writer(&mut out, c)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Write one certificate per line.
pub fn persist(certs: &[NonBrieskornCertificate], path: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io_err)?;
    write_jsonl(certs, BufWriter::new(file)).map_err(io_err)
}

/// Read certificates back, rejecting lines that do not parse or whose
/// stored values violate the certificate invariants. Blank lines are skipped.
pub fn load(path: &Path) -> Result<Vec<NonBrieskornCertificate>> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let reader = BufReader::new(File::open(path).map_err(io_err)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| Error::MalformedLine { path: path.to_path_buf(), line: i + 1, message };
        let cert: NonBrieskornCertificate = serde_json::from_str(&line).map_err(|e| malformed(e.to_string()))?;
        let problems = cert.problems();
        if !problems.is_empty() {
            return Err(malformed(problems.join("; ")));
        }
        out.push(cert);
    }
    Ok(out)
}

/// Sum of `χ_m` over a self pair, `2χ - 1/2`.
pub fn self_sum(chi: &BigRational) -> BigRational {
    chi * rat(2) - one_half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn t(xs: &[u64]) -> ExponentTuple {
        ExponentTuple::from_u64s(xs).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn enumeration_membership() {
        let found = enumerate_sphere_tuples(5, 4, &lim()).unwrap();
        assert!(found.contains(&t(&[2, 3, 4, 5])));
        assert!(found.windows(2).all(|w| w[0] < w[1]));
        assert!(found.iter().all(|a| a.is_canonical()));
        assert!(enumerate_sphere_tuples(2, 4, &lim()).unwrap().is_empty());
    }

    #[test]
    fn enumeration_budget() {
        let l = Limits { search_budget: 10, ..Limits::default() };
        assert!(matches!(enumerate_sphere_tuples(10, 4, &l), Err(Error::Capacity { .. })));
        assert_eq!(multiset_count(4, 4), BigInt::from(35));
    }

    #[test]
    fn single_sigma_4_certificate() {
        let certs = certify_non_brieskorn_pairs(&[t(&[4, 5, 9, 19])], &lim()).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].chi_sum, ratio(-507, 2642));
        assert!(!certs[0].boundary);
        assert!(certs[0].problems().is_empty());
    }

    #[test]
    fn mixed_pair_is_certified() {
        let certs = certify_non_brieskorn_pairs(&[t(&[5, 6, 11, 23]), t(&[19, 9, 5, 4])], &lim()).unwrap();
        assert_eq!(certs.len(), 3);
        let mixed = certs.iter().find(|c| c.tuple_a != c.tuple_b).unwrap();
        assert_eq!(mixed.tuple_a, t(&[4, 5, 9, 19]));
        assert_eq!(mixed.chi_b, ratio(613, 7574));
        assert_eq!(mixed.chi_sum, ratio(407, 2642) + ratio(613, 7574) - one_half());
    }

    #[test]
    fn large_values_give_no_certificate() {
        // (2,3,5,7): χ_m well above 1/4
        let chis = sphere_chis(&[t(&[2, 3, 5, 7])], &lim()).unwrap();
        assert!(chis[0].1 >= ratio(1, 4));
        assert!(certify_from_chis(&chis).unwrap().is_empty());
    }

    #[test]
    fn boundary_certificate() {
        let chis = vec![(t(&[2, 3, 5, 7]), ratio(1, 4))];
        let certs = certify_from_chis(&chis).unwrap();
        assert_eq!(certs.len(), 1);
        assert!(certs[0].boundary);
    }

    #[test]
    fn rejects_non_sphere_and_undefined() {
        assert!(matches!(certify_non_brieskorn_pairs(&[t(&[2, 2, 2, 2])], &lim()), Err(Error::Precondition(_))));
        assert!(matches!(certify_non_brieskorn_pairs(&[t(&[2, 3, 5])], &lim()), Err(Error::Precondition(_))));
    }

    #[test]
    fn classes() {
        let chis: Vec<_> = [4u64, 5, 7, 8]
            .iter()
            .map(|&m| {
                let a = crate::families::sigma_m_tuple(&m.into()).unwrap();
                let chi = mean_euler(&a, &lim()).unwrap().value.unwrap();
                (a, chi)
            })
            .collect();
        let selfs: Vec<_> = chis
            .iter()
            .map(|(a, c)| NonBrieskornCertificate::new(a.clone(), c.clone(), a.clone(), c.clone()).unwrap())
            .collect();
        let classes = distinctness_classes(&selfs);
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.conclusive));

        let twice = vec![selfs[0].clone(), selfs[0].clone()];
        let classes = distinctness_classes(&twice);
        assert_eq!(classes.len(), 1);
        assert!(classes[0].conclusive);

        let x = ratio(1, 10);
        let a = NonBrieskornCertificate::new(t(&[4, 5, 9, 19]), x.clone(), t(&[4, 5, 9, 19]), x.clone()).unwrap();
        let b = NonBrieskornCertificate::new(t(&[2, 3, 5, 7]), x.clone(), t(&[2, 3, 5, 7]), x).unwrap();
        let classes = distinctness_classes(&[a, b]);
        assert_eq!(classes.len(), 1);
        assert!(!classes[0].conclusive);
        assert_eq!(classes[0].distinct_pairs, 2);
    }

    #[test]
    fn jsonl_schema() {
        let certs = certify_non_brieskorn_pairs(&[t(&[4, 5, 9, 19])], &lim()).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&certs, &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert_eq!(
            line,
            "{\"tuple_a\":[\"4\",\"5\",\"9\",\"19\"],\"tuple_b\":[\"4\",\"5\",\"9\",\"19\"],\
             \"chi_a\":{\"num\":\"407\",\"den\":\"2642\"},\"chi_b\":{\"num\":\"407\",\"den\":\"2642\"},\
             \"chi_sum\":{\"num\":\"-507\",\"den\":\"2642\"},\"dimension\":5,\"boundary\":false,\
             \"conclusion\":\"connected sum not contactomorphic to any Brieskorn contact structure\"}\n"
        );
    }

    #[test]
    fn persist_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("certs.jsonl");
        let certs = certify_non_brieskorn_pairs(&[t(&[4, 5, 9, 19]), t(&[5, 6, 11, 23])], &lim()).unwrap();
        persist(&certs, &path).unwrap();
        assert_eq!(load(&path).unwrap(), certs);
    }

    #[test]
    fn load_reports_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("certs.jsonl");
        let certs = certify_non_brieskorn_pairs(&[t(&[4, 5, 9, 19])], &lim()).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&certs, &mut buf).unwrap();
        write_jsonl(&certs, &mut buf).unwrap();
        buf.extend_from_slice(b"{\"tuple_a\": nope}\n");
        std::fs::write(&path, &buf).unwrap();
        match load(&path) {
            Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }

        // a parseable line whose stored sum is wrong
        let bad = String::from_utf8(buf[..buf.len() / 3].to_vec()).unwrap().replace("-507", "-506");
        std::fs::write(&path, bad).unwrap();
        assert!(matches!(load(&path), Err(Error::MalformedLine { line: 1, .. })));
    }

    #[test]
    fn load_empty_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        std::fs::write(&path, "").unwrap();
        assert!(load(&path).unwrap().is_empty());
        assert!(matches!(load(&dir.path().join("missing.jsonl")), Err(Error::Io { .. })));
    }
}
