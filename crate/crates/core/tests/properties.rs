use centeredkit::coincidence::{related, weakly_related, FiniteFunction, FunctionSpace};
use centeredkit::document::{CollectionDocument, SpaceDocument};
use centeredkit::setalgebra::{
    cap_closure, classify_collection, finer, generated_filter, is_ultrafilter,
    is_ultrafilter_by_complement, satisfies_f0, up_closure, SubsetCollection, SubsetMask, Universe,
};
use centeredkit::spaces::{
    converges, enumerate_spaces, is_centered, CenteredSpace, EventuallyPeriodicSequence, SpaceClass,
};
use proptest::prelude::*;

fn collection(max_points: usize) -> impl Strategy<Value = SubsetCollection> {
    (1..=max_points).prop_flat_map(|n| {
        prop::collection::vec(0u32..(1 << n), 0..12).prop_map(move |bits| {
            let x = Universe::new(n).unwrap();
            SubsetCollection::new(
                x,
                bits.into_iter()
                    .map(|b| SubsetMask::from_bits(x, b).unwrap()),
            )
            .unwrap()
        })
    })
}

/// Two collections on the same universe.
fn pair(
    max_points: usize,
) -> impl Strategy<Value = (SubsetCollection, SubsetCollection, SubsetCollection)> {
    (1..=max_points).prop_flat_map(|n| {
        let one = prop::collection::vec(0u32..(1 << n), 0..8);
        (one.clone(), one.clone(), one).prop_map(move |(a, b, c)| {
            let x = Universe::new(n).unwrap();
            let mk = |v: Vec<u32>| {
                SubsetCollection::new(
                    x,
                    v.into_iter().map(|b| SubsetMask::from_bits(x, b).unwrap()),
                )
                .unwrap()
            };
            (mk(a), mk(b), mk(c))
        })
    })
}

/// A centered space: every listed set at `x` gets `x` added.
fn space(max_points: usize) -> impl Strategy<Value = CenteredSpace> {
    (1..=max_points).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u32..(1 << n), 0..4), n).prop_map(move |nu| {
            let x = Universe::new(n).unwrap();
            let nu = nu
                .into_iter()
                .enumerate()
                .map(|(p, sets)| {
                    SubsetCollection::new(
                        x,
                        sets.into_iter()
                            .map(|b| SubsetMask::from_bits(x, b | 1 << p).unwrap()),
                    )
                    .unwrap()
                })
                .collect();
            CenteredSpace::new(x, nu).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn finer_is_a_preorder((a, b, c) in pair(5)) {
        prop_assert!(finer(&a, &a));
        if finer(&a, &b) && finer(&b, &c) {
            prop_assert!(finer(&a, &c));
        }
    }

    #[test]
    fn closures_are_extensive_idempotent_and_commute(p in collection(5)) {
        let up = up_closure(&p);
        let cap = cap_closure(&p);
        prop_assert!(p.is_subcollection_of(&up));
        prop_assert!(p.is_subcollection_of(&cap));
        prop_assert_eq!(up_closure(&up), up.clone());
        prop_assert_eq!(cap_closure(&cap), cap.clone());
        prop_assert_eq!(cap_closure(&up), up_closure(&cap));
        // each member of the closures is refined by the original
        prop_assert!(finer(&p, &up));
        if !p.is_empty() && satisfies_f0(&p).unwrap() {
            prop_assert_eq!(finer(&p, &cap), classify_collection(&p).unwrap().is_filterbase);
        }
    }

    #[test]
    fn closures_are_monotone((a, b, _) in pair(5)) {
        let union = a.with_members(b.iter().copied()).unwrap();
        prop_assert!(up_closure(&a).is_subcollection_of(&up_closure(&union)));
        prop_assert!(cap_closure(&a).is_subcollection_of(&cap_closure(&union)));
    }

    #[test]
    fn generated_filter_is_a_filter(p in collection(5)) {
        if !p.is_empty() && satisfies_f0(&p).unwrap() {
            let f = generated_filter(&p).unwrap();
            prop_assert!(classify_collection(&f).unwrap().is_filter);
            prop_assert!(p.is_subcollection_of(&f));
        } else if !p.is_empty() {
            prop_assert!(generated_filter(&p).is_err());
        }
    }

    #[test]
    fn ultrafilter_tests_agree(p in collection(5)) {
        prop_assert_eq!(is_ultrafilter(&p), is_ultrafilter_by_complement(&p));
    }

    #[test]
    fn collection_documents_round_trip(p in collection(6)) {
        let text = CollectionDocument::from_collection(&p).to_text();
        let parsed = CollectionDocument::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_text(), text);
        prop_assert_eq!(parsed.to_collection().unwrap(), p);
    }

    #[test]
    fn space_documents_round_trip(s in space(4)) {
        let text = SpaceDocument::from_space(&s).to_text();
        let parsed = SpaceDocument::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_text(), text);
        prop_assert_eq!(parsed.to_space().unwrap(), s);
    }

    #[test]
    fn exact_relation_implies_weak(p in collection(3), seed in any::<u64>()) {
        let x = p.universe();
        let y = Universe::new(2).unwrap();
        let pick = |s: u64| {
            let values = (0..x.size()).map(|i| ((s >> i) & 1) as usize).collect();
            FiniteFunction::new(x, y, values).unwrap()
        };
        let (f, g) = (pick(seed), pick(seed >> 8));
        let exact = related(&p, &f, &g).unwrap();
        let weak = weakly_related(&p, &f, &g).unwrap();
        prop_assert!(!exact || weak);
        if !p.is_empty() && classify_collection(&p).unwrap().is_raster {
            prop_assert_eq!(exact, weak);
        }
    }

    #[test]
    fn convergence_matches_tails(s in space(3), prefix in prop::collection::vec(0usize..3, 0..4),
                                 cycle in prop::collection::vec(0usize..3, 1..4), x in 0usize..3) {
        let n = s.universe().size();
        prop_assume!(x < n);
        let prefix: Vec<usize> = prefix.into_iter().map(|p| p % n).collect();
        let cycle: Vec<usize> = cycle.into_iter().map(|p| p % n).collect();
        let seq = EventuallyPeriodicSequence::new(s.universe(), prefix.clone(), cycle).unwrap();
        // some tail inside every probe; tails stop shrinking after the prefix
        let expected = s.nu(x).iter().all(|&probe| {
            (0..=prefix.len()).any(|k| seq.tail(k).is_subset_of(probe))
        });
        prop_assert_eq!(converges(&s, &seq, x).unwrap(), expected);
    }
}

#[test]
fn composition_of_centered_maps_is_centered() {
    let x = Universe::new(2).unwrap();
    let spaces = enumerate_spaces(x, SpaceClass::Centered).unwrap();
    let maps: Vec<FiniteFunction> = FunctionSpace::new(x, x).collect();
    for a in &spaces {
        for b in &spaces {
            for f in &maps {
                if !is_centered(f, a, b).unwrap() {
                    continue;
                }
                for c in &spaces {
                    for g in &maps {
                        if is_centered(g, b, c).unwrap() {
                            assert!(is_centered(&g.compose(f).unwrap(), a, c).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identity_and_constants_are_centered() {
    let x = Universe::new(2).unwrap();
    for s in enumerate_spaces(x, SpaceClass::Centered).unwrap() {
        assert!(is_centered(&FiniteFunction::identity(x), &s, &s).unwrap());
        let d = CenteredSpace::discrete(x);
        assert!(is_centered(&FiniteFunction::constant(x, x, 1).unwrap(), &d, &d).unwrap());
    }
}
