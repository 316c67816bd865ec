//! The order-`p^8` maximal-class classification: immediate descendants of
//! every parent, counts checked against the formulas, and an exact matching
//! of the generated descendants against the catalog.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::iso::{IsoContext, IsoResult};
use super::porc::{parent_formula, total_count};
use crate::error::{Error, Result};
use crate::generation::{cover_kernel, immediate_descendants, DescendantFilter, DescendantSet};
use crate::gfplin::check_prime;
use crate::presentation::{catalog_p7, CatalogRing, P8_PARENTS};

/// `log_p` of the order being classified.
pub const TARGET_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberCount {
    pub id: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParentReport {
    pub id: String,
    pub count: usize,
    pub expected: u64,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Per-member counts for a parameterized family.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<MemberCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub parents: Vec<ParentReport>,
    pub total: usize,
    pub expected_total: u64,
    #[serde(rename = "match")]
    pub matched: bool,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_validation: Option<CrossValidation>,
}

impl ClassificationReport {
    pub fn count(&self, id: &str) -> Option<usize> {
        self.parents.iter().find(|r| r.id == id).map(|r| r.count)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// The parents, their descendant sets and the count report.
#[derive(Clone, Debug)]
pub struct Classification {
    pub p: u32,
    pub parents: Vec<CatalogRing>,
    /// `descendants[i]` belongs to `parents[i]`.
    pub descendants: Vec<DescendantSet>,
    pub report: ClassificationReport,
}

fn check_p(p: u32) -> Result<()> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    Ok(())
}

fn descendant_sets(parents: &[CatalogRing]) -> Result<Vec<DescendantSet>> {
    let one = |c: &CatalogRing| immediate_descendants(&c.ring, TARGET_DIM, DescendantFilter::MaximalClass);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        parents.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        parents.iter().map(one).collect()
    }
}

/// Builds the `p + 8` parents and all their maximal-class descendants of
/// order `p^8`. `w` overrides the primitive root used by the catalog.
pub fn run_classification(p: u32, w: Option<u32>) -> Result<Classification> {
    check_p(p)?;
    let start = Instant::now();
    let parents = catalog_p7(p, w)?;
    let descendants = descendant_sets(&parents)?;

    let mut parent_reports = Vec::with_capacity(P8_PARENTS.len());
    for id in P8_PARENTS {
        let members: Vec<MemberCount> = parents
            .iter()
            .zip(&descendants)
            .filter(|(c, _)| c.entry.subsection == id)
            .map(|(c, ds)| MemberCount { id: c.label(), count: ds.len() })
            .collect();
        let count = members.iter().map(|m| m.count).sum();
        let expected = parent_formula(id, p)?;
        parent_reports.push(ParentReport {
            id: id.to_string(),
            count,
            expected,
            matched: count as u64 == expected,
            members: if members.len() > 1 { members } else { Vec::new() },
        });
    }
    let total = parent_reports.iter().map(|r| r.count).sum();
    let expected_total = total_count(p);
    let matched = parent_reports.iter().all(|r| r.matched) && total as u64 == expected_total;
    let report = ClassificationReport {
        p,
        parents: parent_reports,
        total,
        expected_total,
        matched,
        elapsed_ms: start.elapsed().as_millis() as u64,
        cross_validation: None,
    };
    Ok(Classification { p, parents, descendants, report })
}

/// Counts only.
pub fn classify(p: u32) -> Result<ClassificationReport> {
    Ok(run_classification(p, None)?.report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub label: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub catalog_size: usize,
    pub generated: usize,
    /// Catalog rings examined (all of them unless sampled).
    pub checked: usize,
    pub matched: usize,
    /// Catalog rings not isomorphic to any generated descendant of their
    /// listed parent.
    pub unmatched: Vec<Mismatch>,
    /// Generated descendants hit by more than one catalog ring.
    pub collisions: Vec<Mismatch>,
    /// Generated descendants hit by no catalog ring (full runs only).
    pub missed: Vec<String>,
    pub ok: bool,
}

/// `(parent index, descendant index)` for one catalog ring.
fn locate(cls: &Classification, ring: &CatalogRing, ctx: &IsoContext) -> std::result::Result<(usize, usize), String> {
    let c = &ring.ring;
    if c.dim() != TARGET_DIM || !c.is_graded() || c.top_weight() != 7 {
        return Err(format!("not a graded ring of order p^{TARGET_DIM} and p-class 7"));
    }
    let q = c.truncate(6);
    let d = c.layer(1).len();
    let listed: Vec<usize> =
        (0..cls.parents.len()).filter(|&i| cls.parents[i].entry.subsection == ring.entry.subsection).collect();
    let others = (0..cls.parents.len()).filter(|i| !listed.contains(i));

    let mut found = listed.iter().copied().find(|&i| cls.parents[i].ring == q).map(|i| (i, None));
    if found.is_none() {
        for i in listed.iter().copied().chain(others) {
            match ctx.is_isomorphic(&cls.parents[i].ring, &q) {
                Ok(IsoResult::Isomorphic(images)) => {
                    found = Some((i, Some(images)));
                    break;
                }
                Ok(IsoResult::NonIsomorphic(_)) => {}
                Ok(IsoResult::Indeterminate) => return Err("isomorphism search budget exhausted".into()),
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    let Some((i, images)) = found else {
        return Err("quotient of p-class 6 is not one of the parents".into());
    };
    if !listed.contains(&i) {
        return Err(format!("descends from {}, not {}", cls.parents[i].label(), ring.entry.subsection));
    }
    let gens: Vec<Vec<u32>> = (0..d)
        .map(|g| {
            let mut v = images.as_ref().map_or_else(|| q.basis(g), |im| im[g].clone());
            v.resize(c.dim(), 0);
            v
        })
        .collect();
    let ds = &cls.descendants[i];
    let t = cover_kernel(&ds.cover, c, &gens).map_err(|e| e.to_string())?;
    ds.descendant_for(&t)
        .map(|k| (i, k))
        .ok_or_else(|| format!("kernel in the cover of {} is not a kept allowable subspace", cls.parents[i].label()))
}

/// Matches catalog rings to generated descendants through their kernels in
/// the parent's cover, which is exact: two descendants of one parent are
/// isomorphic iff their kernels share an orbit. `sample = Some(n)` checks
/// about `n` evenly spaced catalog rings instead of all of them.
pub fn cross_validate(cls: &Classification, catalog: &[CatalogRing], sample: Option<usize>) -> Result<CrossValidation> {
    let ctx = IsoContext::from_env();
    let step = match sample {
        Some(n) if n > 0 && n < catalog.len() => catalog.len().div_ceil(n),
        _ => 1,
    };
    let picked: Vec<&CatalogRing> = catalog.iter().step_by(step).collect();
    let one = |r: &&CatalogRing| (r.label(), locate(cls, r, &ctx));
    #[cfg(feature = "parallel")]
    let located: Vec<(String, std::result::Result<(usize, usize), String>)> = {
        use rayon::prelude::*;
        picked.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let located: Vec<(String, std::result::Result<(usize, usize), String>)> = picked.iter().map(one).collect();

    let mut hits: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    let mut unmatched = Vec::new();
    for (label, r) in located {
        match r {
            Ok(key) => hits.entry(key).or_default().push(label),
            Err(reason) => unmatched.push(Mismatch { label, reason }),
        }
    }
    let collisions: Vec<Mismatch> = hits
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(&(i, k), v)| Mismatch {
            label: format!("{}#{}", cls.parents[i].label(), k + 1),
            reason: format!("matched by {}", v.join(", ")),
        })
        .collect();
    let mut missed = Vec::new();
    if step == 1 {
        for (i, ds) in cls.descendants.iter().enumerate() {
            for k in 0..ds.len() {
                if !hits.contains_key(&(i, k)) {
                    missed.push(format!("{}#{}", cls.parents[i].label(), k + 1));
                }
            }
        }
    }
    let generated = cls.report.total;
    let matched = hits.values().filter(|v| v.len() == 1).count();
    let ok =
        unmatched.is_empty() && collisions.is_empty() && missed.is_empty() && (step > 1 || catalog.len() == generated);
    Ok(CrossValidation {
        catalog_size: catalog.len(),
        generated,
        checked: picked.len(),
        matched,
        unmatched,
        collisions,
        missed,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{catalog_p8, parse};

    #[test]
    fn counts_at_5() {
        let r = classify(5).unwrap();
        assert_eq!(r.total, 816);
        assert!(r.matched);
        let counts: Vec<usize> = r.parents.iter().map(|x| x.count).collect();
        assert_eq!(counts, vec![22, 8, 32, 58, 25, 86, 355, 115, 115]);
        assert_eq!(r.count("7.646"), Some(25));
        let fam = &r.parents[6];
        assert_eq!(fam.members.len(), 5);
        assert_eq!(fam.members.iter().map(|m| m.count).sum::<usize>(), 355);
        assert!(r.parents[0].members.is_empty());
    }

    #[test]
    fn report_json_shape() {
        let r = classify(5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["p"], 5);
        assert_eq!(v["total"], 816);
        assert_eq!(v["expected_total"], 816);
        assert_eq!(v["match"], true);
        assert_eq!(v["parents"][0]["id"], "7.623");
        assert_eq!(v["parents"][0]["expected"], 22);
        assert_eq!(v["parents"][0]["match"], true);
        assert!(v["elapsed_ms"].is_u64());
        assert!(v.get("cross_validation").is_none());
    }

    #[test]
    fn small_primes_rejected() {
        assert_eq!(classify(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(classify(3).unwrap_err(), Error::PrimeTooSmall(3));
    }

    #[test]
    fn catalog_bijection_and_faults() {
        let cls = run_classification(5, None).unwrap();
        let mut cat = catalog_p8(5, None).unwrap();
        let cv = cross_validate(&cls, &cat, None).unwrap();
        assert!(cv.ok, "{cv:?}");
        assert_eq!((cv.matched, cv.checked), (816, 816));

        let sampled = cross_validate(&cls, &cat, Some(50)).unwrap();
        assert!(sampled.ok);
        assert!(sampled.checked <= 52 && sampled.missed.is_empty());

        // 7.623-d1 with the coefficient of ba^6 in pa changed from 0 to 1 is 7.623-d2
        let mut bad = cat.clone();
        let e = &mut bad[0].entry;
        e.presentation = parse("<a,b | bab, ba^3b, pa-ba^6, pb, ba^5b, class 7>").unwrap();
        bad[0] = e.clone().instance(5, 2, &[]).unwrap();
        let cv = cross_validate(&cls, &bad, None).unwrap();
        assert!(!cv.ok);
        assert_eq!(cv.collisions.len(), 1);
        assert_eq!(cv.missed.len(), 1);
        assert!(cv.collisions[0].reason.contains("7.623-d1") && cv.collisions[0].reason.contains("7.623-d2"));

        // a 7.627 line filed under 7.623
        let i = cat.iter().position(|c| c.entry.subsection == "7.627").unwrap();
        cat[i].entry.subsection = "7.623".into();
        let cv = cross_validate(&cls, &cat, None).unwrap();
        assert!(!cv.ok);
        assert_eq!(cv.unmatched.len(), 1);
        assert!(cv.unmatched[0].reason.starts_with("descends from 7.627"), "{:?}", cv.unmatched);
    }
}
