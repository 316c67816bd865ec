use liegen::classify::{parse_comment, solve_equivalence};
use liegen::generation::{immediate_descendants, DescendantFilter};
use liegen::gfplin::{gcd, is_prime, primitive_root, subspace_orbits};
use liegen::presentation::{instantiate, p8_entries, parse, Binding};
use liegen::LieRing;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u32> {
    (5u32..50).prop_filter("prime", |&p| is_prime(p as u64))
}

const WORDS: [&str; 8] = ["ba", "ba^2", "bab", "ba^3", "ba^2b", "ba^4", "ba^3b", "ba^5"];

/// Relators `c0·w0 + c1·w1` over `<a,b>` with a `p`-multiple term.
fn relator() -> impl Strategy<Value = String> {
    (0usize..WORDS.len(), 0usize..WORDS.len(), -3i32..4, prop_oneof![Just("pa"), Just("pb")]).prop_map(
        |(i, j, c, pm)| match c {
            0 => format!("{}-{}", WORDS[i], WORDS[j]),
            c if c < 0 => format!("{pm}-{}{}", -c, WORDS[i]),
            c => format!("{}+{c}{}", WORDS[i], WORDS[j]),
        },
    )
}

fn presentation() -> impl Strategy<Value = String> {
    proptest::collection::vec(relator(), 0..4).prop_map(|mut r| {
        r.push("class 5".into());
        format!("<a,b | {}>", r.join(", "))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_exponent_class_count(p in prime(), k in prop::sample::select(vec![3u32, 6, 7, 8, 9, 10, 12])) {
        let rel = parse_comment(&format!("x != 0, x ~ xa^{k}"), &['x']).unwrap();
        let reps = solve_equivalence(&rel, p, primitive_root(p).unwrap()).unwrap();
        prop_assert_eq!(reps.len() as u64, gcd((p - 1) as u64, k as u64));
    }

    #[test]
    fn print_parse_round_trip(text in presentation()) {
        let a = parse(&text).unwrap();
        let b = parse(&a.to_string()).unwrap();
        prop_assert_eq!(a.to_string(), b.to_string());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn catalog_print_parse_round_trip(i in 0usize..200) {
        let entries = p8_entries();
        let pres = &entries[i % entries.len()].presentation;
        prop_assert_eq!(&parse(&pres.to_string()).unwrap(), pres);
    }

    #[test]
    fn class_bound_truncates(text in presentation(), lo in 1u32..5) {
        // lowering the bound gives the matching truncation of the larger quotient
        let pres = parse(&text).unwrap();
        let full = instantiate(&pres, 5, &Binding::new()).unwrap();
        let small = instantiate(&pres.clone().with_class(lo as usize), 5, &Binding::new()).unwrap();
        prop_assert!(small.dim() <= full.dim());
        prop_assert_eq!(small, full.truncate(lo));
    }

    #[test]
    fn json_round_trip(text in presentation()) {
        let ring = instantiate(&parse(&text).unwrap(), 5, &Binding::new()).unwrap();
        prop_assert!(ring.is_consistent());
        prop_assert_eq!(LieRing::from_json(&ring.to_json()).unwrap(), ring);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn orbit_count_ignores_input_order(perm in Just((0usize..64).collect::<Vec<_>>()).prop_shuffle(), p in prop::sample::select(vec![5u32, 7])) {
        let ab = LieRing::elementary_abelian(p, 2).unwrap();
        let d3 = immediate_descendants(&ab, 3, DescendantFilter::All).unwrap();
        let ds = immediate_descendants(&d3.descendants[0].ring, 4, DescendantFilter::All).unwrap();
        let mut spaces = ds.allowable.clone();
        for (i, &j) in perm.iter().enumerate() {
            let n = spaces.len();
            spaces.swap(i % n, j % n);
        }
        let orbits = subspace_orbits(&ds.z_action, &spaces).unwrap();
        prop_assert_eq!(orbits.len(), ds.orbits.len());
        let mut reps: Vec<_> = orbits.iter().map(|o| o.representative.clone()).collect();
        let mut expected: Vec<_> = ds.orbits.iter().map(|o| o.representative.clone()).collect();
        reps.sort();
        expected.sort();
        prop_assert_eq!(reps, expected);
    }
}
