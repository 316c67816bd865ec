//! End-to-end acceptance checks. Runs as a plain binary so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use liegen::classify::{
    brute_force_isomorphic, brute_force_orbits, check_representatives, cross_validate, is_isomorphic, parent_formula,
    parse_comment, porc_sum_check, run_classification, solve_equivalence, total_count, Classification, EquivRelation,
    IsoResult,
};
use liegen::generation::{
    automorphism_group, brute_force_automorphism_count, brute_force_automorphisms, extend_to_cover, extension_matrix,
    immediate_descendants, p_cover, DescendantFilter,
};
use liegen::gfplin::{is_prime, primitive_root, subspace_orbits};
use liegen::liering::{
    class, has_characteristic_p, lower_central_series, lower_p_central_series, p_multiples_in_last_term,
};
use liegen::presentation::{catalog_p8, p8_entries, CatalogRing};
use liegen::LieRing;

type Check = Result<String, String>;
type Criterion = fn(&Runs) -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const P5_COUNTS: [(&str, usize); 9] = [
    ("7.623", 22),
    ("7.627", 8),
    ("7.633", 32),
    ("7.641", 58),
    ("7.646", 25),
    ("7.648", 86),
    ("7.650", 355),
    ("7.656", 115),
    ("7.657", 115),
];

struct Runs {
    c5: Classification,
    c7: Classification,
    catalog5: Vec<CatalogRing>,
}

fn counts_at_5(r: &Runs) -> Check {
    let rep = &r.c5.report;
    for (id, n) in P5_COUNTS {
        let got = rep.count(id).ok_or(format!("{id} missing"))?;
        let formula = parent_formula(id, 5).map_err(|e| e.to_string())?;
        ensure(got == n && formula == n as u64, || format!("{id}: generated {got}, formula {formula}, listed {n}"))?;
    }
    ensure(rep.total == 816 && total_count(5) == 816 && rep.matched, || format!("total {}", rep.total))?;
    Ok(format!("total 816 in {} ms", rep.elapsed_ms))
}

fn counts_at_7(r: &Runs) -> Check {
    let rep = &r.c7.report;
    ensure(rep.total == 1988 && total_count(7) == 1988 && rep.matched, || format!("total {}", rep.total))?;
    Ok(format!("total 1988 in {} ms", rep.elapsed_ms))
}

fn symbolic_identity(_: &Runs) -> Check {
    ensure(porc_sum_check(), || "per-parent formulas do not sum to the total".into())?;
    Ok("nine formulas sum to the total".into())
}

fn bijection_at_5(r: &Runs) -> Check {
    ensure(r.catalog5.len() == 816, || format!("catalog has {} entries", r.catalog5.len()))?;
    let start = Instant::now();
    let cv = cross_validate(&r.c5, &r.catalog5, None).map_err(|e| e.to_string())?;
    ensure(cv.ok && cv.matched == 816, || {
        format!(
            "matched {}, unmatched {:?}, collisions {:?}, missed {:?}",
            cv.matched,
            cv.unmatched.iter().take(3).collect::<Vec<_>>(),
            cv.collisions.iter().take(3).collect::<Vec<_>>(),
            cv.missed.iter().take(3).collect::<Vec<_>>()
        )
    })?;
    Ok(format!("816 catalog rings matched one-to-one in {} ms", start.elapsed().as_millis()))
}

fn ring_axioms(ring: &LieRing, what: &str) -> Result<(), String> {
    ensure(ring.is_consistent(), || format!("{what}: {}", ring.consistency_defect().unwrap_or_default()))?;
    ensure(p_multiples_in_last_term(ring) == Ok(true), || format!("{what}: pL not in the last central term"))?;
    let lcs = lower_central_series(ring);
    let lpcs = lower_p_central_series(ring);
    let same = lcs.len() == lpcs.len()
        && lcs.iter().zip(&lpcs).all(|(a, b)| a.contains_ideal(ring, b) && b.contains_ideal(ring, a));
    ensure(same, || format!("{what}: lower central and lower p-central series differ"))
}

fn structure(r: &Runs) -> Check {
    let mut rings = 0;
    for cls in [&r.c5, &r.c7] {
        let p = cls.p;
        ensure(cls.parents.len() == p as usize + 8, || format!("p={p}: {} parents", cls.parents.len()))?;
        for (par, ds) in cls.parents.iter().zip(&cls.descendants) {
            let m = &par.ring;
            ensure(m.dim() == 7 && class(m) == 6 && has_characteristic_p(m), || format!("parent {}", par.label()))?;
            ring_axioms(m, &par.label())?;
            rings += 1;
            for (k, d) in ds.descendants.iter().enumerate() {
                let what = format!("p={p} {}#{}", par.label(), k + 1);
                let l = &d.ring;
                ensure(l.dim() == 8 && class(l) == 7, || format!("{what}: order or class"))?;
                ring_axioms(l, &what)?;
                let lcs = lower_central_series(l);
                let last = &lcs[lcs.len() - 2];
                ensure(last.dim() == 1 && last.contains(l, &l.basis(7)), || format!("{what}: last term"))?;
                ensure(&l.truncate(6) == m, || format!("{what}: quotient is not the parent"))?;
                rings += 1;
            }
        }
    }
    for c in &r.catalog5 {
        let what = c.label();
        ensure(c.ring.dim() == 8 && class(&c.ring) == 7, || format!("{what}: order or class"))?;
        ring_axioms(&c.ring, &what)?;
        let q = c.ring.truncate(6);
        let parent_ok =
            r.c5.parents
                .iter()
                .filter(|m| m.entry.subsection == c.entry.subsection)
                .any(|m| m.ring == q || matches!(is_isomorphic(&m.ring, &q), Ok(IsoResult::Isomorphic(_))));
        ensure(parent_ok, || format!("{what}: quotient is not its parent"))?;
        rings += 1;
    }
    Ok(format!("{rings} rings, zero violations"))
}

/// Deterministic pseudo-random `Z` vectors.
fn offsets(seed: u64, d: usize, z: usize, p: u32) -> Vec<Vec<u32>> {
    let mut s = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    (0..d)
        .map(|_| {
            (0..z)
                .map(|_| {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s % p as u64) as u32
                })
                .collect()
        })
        .collect()
}

fn covers(r: &Runs) -> Check {
    let mut n = 0;
    for cls in [&r.c5, &r.c7] {
        for (par, ds) in cls.parents.iter().zip(&cls.descendants) {
            let cov = &ds.cover;
            cov.verify().map_err(|e| format!("{}: {e}", par.label()))?;
            let m = &par.ring;
            ensure(cov.cover().truncate(6) == *m, || format!("{}: cover/Z is not the parent", par.label()))?;
            let d = m.layer(1).len();
            for (g, (a, base)) in ds.automorphisms.generators().iter().zip(&ds.z_action).enumerate() {
                for seed in 1..=2 {
                    let off = offsets(seed * 1000 + g as u64, d, cov.z_dim(), m.p());
                    let again = extension_matrix(a, cov, Some(&off)).map_err(|e| e.to_string())?;
                    ensure(&again == base, || format!("{}: extension depends on the preimage", par.label()))?;
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} covers verified"))
}

fn relation_shapes() -> Vec<EquivRelation> {
    let mut seen = BTreeMap::new();
    for e in p8_entries() {
        if !e.relation.params.is_empty() {
            seen.insert(e.relation.to_string(), e.relation.clone());
        }
    }
    for (params, c) in [(&['x', 'y'][..], "x,y != 0, [x,y] ~ [-x,y]"), (&['x', 'y'][..], "x,y != 0, [x,y] ~ [x,-y]")] {
        let rel = parse_comment(c, params).unwrap();
        seen.insert(rel.to_string(), rel);
    }
    seen.into_values().collect()
}

fn equivalence_oracle(_: &Runs) -> Check {
    let shapes = relation_shapes();
    let mut cases = 0;
    for p in (5..=50).filter(|&p| is_prime(p as u64)) {
        let w = primitive_root(p).unwrap();
        for rel in &shapes {
            let reps = solve_equivalence(rel, p, w).map_err(|e| format!("{rel} at p={p}: {e}"))?;
            let orbits = brute_force_orbits(rel, p);
            ensure(reps.len() == orbits.len() && check_representatives(rel, p, &reps), || {
                format!("{rel} at p={p}: {} reps vs {} orbits", reps.len(), orbits.len())
            })?;
            cases += 1;
        }
    }
    Ok(format!("{} relation shapes, {cases} (shape, p) cases", shapes.len()))
}

fn small_generation(_: &Runs) -> Check {
    for p in [5, 7] {
        let ab = LieRing::elementary_abelian(p, 2).unwrap();
        let ds = immediate_descendants(&ab, 3, DescendantFilter::All).map_err(|e| e.to_string())?;
        ensure(ds.len() == 3, || format!("p={p}: {} descendants", ds.len()))?;
        // group every allowable quotient by exhaustive isomorphism testing
        let mut classes: Vec<(LieRing, Vec<usize>)> = Vec::new();
        for (i, t) in ds.allowable.iter().enumerate() {
            let q = ds.cover.quotient_by(t);
            let mut placed = false;
            for (rep, members) in classes.iter_mut() {
                if brute_force_isomorphic(rep, &q).unwrap() {
                    members.push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                classes.push((q, vec![i]));
            }
        }
        ensure(classes.len() == 3, || format!("p={p}: {} isomorphism classes", classes.len()))?;
        let mut by_iso: Vec<Vec<usize>> = classes.into_iter().map(|(_, m)| m).collect();
        let mut by_orbit: Vec<Vec<usize>> = ds.orbits.iter().map(|o| o.members.clone()).collect();
        by_iso.sort();
        by_orbit.sort();
        ensure(by_iso == by_orbit, || format!("p={p}: orbits differ from isomorphism classes"))?;
        for a in &ds.descendants {
            for b in &ds.descendants {
                let lifted = is_isomorphic(&a.ring, &b.ring).unwrap().verdict();
                let brute = brute_force_isomorphic(&a.ring, &b.ring).unwrap();
                ensure(lifted == Some(brute), || format!("p={p}: lifting and exhaustive tests disagree"))?;
            }
        }
    }
    Ok("3 descendants at p = 5, 7; orbits equal exhaustive isomorphism classes".into())
}

fn automorphism_oracle(_: &Runs) -> Check {
    let p = 5;
    let mut rings = vec![LieRing::elementary_abelian(p, 2).unwrap()];
    let p3 = immediate_descendants(&rings[0], 3, DescendantFilter::All).unwrap();
    for d in &p3.descendants {
        rings.push(d.ring.clone());
        if let Ok(ds) = immediate_descendants(&d.ring, 4, DescendantFilter::All) {
            rings.extend(ds.descendants.iter().map(|x| x.ring.clone()));
        }
    }
    let mut partitions = 0;
    for (i, ring) in rings.iter().enumerate() {
        let mut g = automorphism_group(ring).map_err(|e| e.to_string())?;
        g.close().map_err(|e| e.to_string())?;
        let (top, e) = g.order();
        let lifted = top as u64 * (p as u64).pow(e as u32);
        let brute = brute_force_automorphism_count(ring);
        ensure(lifted == brute, || format!("ring {i} (order p^{}): lifted {lifted}, brute force {brute}", ring.dim()))?;
        if ring.dim() <= 3 {
            let cov = p_cover(ring).map_err(|e| e.to_string())?;
            if cov.is_terminal() {
                continue;
            }
            let action = extend_to_cover(&g, &cov).map_err(|e| e.to_string())?;
            let all: Vec<_> = brute_force_automorphisms(ring)
                .iter()
                .map(|a| extension_matrix(a, &cov, None))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for step in 1..=cov.nucleus().dim() {
                let spaces = liegen::generation::allowable_subspaces(&cov, step).map_err(|e| e.to_string())?;
                let a = subspace_orbits(&action.restriction_to_z, &spaces).map_err(|e| e.to_string())?;
                let b = subspace_orbits(&all, &spaces).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("ring {i}: orbit partitions differ at step {step}"))?;
                partitions += 1;
            }
        }
    }
    Ok(format!("{} rings of order at most p^4, {partitions} orbit partitions", rings.len()))
}

fn main() {
    let start = Instant::now();
    let runs = Runs {
        c5: run_classification(5, None).expect("classification at 5"),
        c7: run_classification(7, None).expect("classification at 7"),
        catalog5: catalog_p8(5, None).expect("catalog at 5"),
    };
    let criteria: [(&str, Criterion); 9] = [
        ("end-to-end count, p=5", counts_at_5),
        ("end-to-end count, p=7", counts_at_7),
        ("symbolic counting identity", symbolic_identity),
        ("catalog/pipeline bijection, p=5", bijection_at_5),
        ("structural properties", structure),
        ("cover invariants", covers),
        ("equivalence solver vs brute force", equivalence_oracle),
        ("small-instance generation", small_generation),
        ("automorphism completeness", automorphism_oracle),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(|| f(&runs))).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match r {
            Ok(detail) => println!("criterion {}: PASS  {name} — {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} — {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
