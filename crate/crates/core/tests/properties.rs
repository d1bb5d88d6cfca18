use std::collections::BTreeSet;

use proptest::prelude::*;

use difflat::catalog::enumerate_lattices;
use difflat::classify::conjugate;
use difflat::derivation::{check_derivation, enumerate_derivations, inner, is_derivation, is_inner, is_monotone};
use difflat::derposet::{build_do_poset, op_algebra, FinPoset};
use difflat::io::{lattice_from_json, lattice_to_json};
use difflat::iso::{automorphisms, canonical_key};
use difflat::{FinLattice, OperatorMap};

/// A catalog lattice of order 1..=6 under a random relabeling.
fn lattice() -> impl Strategy<Value = FinLattice> {
    let all: Vec<FinLattice> = (1..=6).flat_map(|n| enumerate_lattices(n).unwrap().into_lattices()).collect();
    (0..all.len(), any::<u64>()).prop_map(move |(i, seed)| {
        let l = &all[i];
        let mut perm: Vec<usize> = (0..l.len()).collect();
        let mut s = seed;
        for k in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        l.relabel(&perm)
    })
}

fn lattice_and_map() -> impl Strategy<Value = (FinLattice, OperatorMap)> {
    lattice().prop_flat_map(|l| {
        let n = l.len();
        (Just(l), proptest::collection::vec(0..n, n)).prop_map(|(l, v)| (l, OperatorMap::new(v)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lattice_laws(l in lattice()) {
        for x in l.elements() {
            prop_assert_eq!(l.meet(x, x), x);
            prop_assert_eq!(l.meet(x, l.bottom()), l.bottom());
            prop_assert_eq!(l.join(x, l.top()), l.top());
            for y in l.elements() {
                prop_assert_eq!(l.meet(x, y), l.meet(y, x));
                prop_assert_eq!(l.join(x, y), l.join(y, x));
                prop_assert_eq!(l.meet(x, l.join(x, y)), x);
                prop_assert_eq!(l.join(x, l.meet(x, y)), x);
                prop_assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                for z in l.elements() {
                    prop_assert_eq!(l.meet(x, l.meet(y, z)), l.meet(l.meet(x, y), z));
                    prop_assert_eq!(l.join(x, l.join(y, z)), l.join(l.join(x, y), z));
                }
            }
        }
    }

    #[test]
    fn relabeling_preserves_keys_and_counts(l in lattice()) {
        let cat = enumerate_lattices(l.len()).unwrap();
        let key = canonical_key(&l);
        prop_assert!(cat.get(&key).is_some());
        let original = cat.get(&key).unwrap();
        prop_assert_eq!(enumerate_derivations(&l).len(), enumerate_derivations(original).len());
    }

    #[test]
    fn derivations_sit_between_zero_and_identity(l in lattice()) {
        let dset = enumerate_derivations(&l);
        let zero = OperatorMap::zero(&l);
        let id = OperatorMap::identity(&l);
        for d in &dset {
            prop_assert!(zero.precedes(d.map(), &l) && d.map().precedes(&id, &l));
            let range: BTreeSet<_> = d.map().range().into_iter().collect();
            let fix: BTreeSet<_> = d.fix_points().iter().copied().collect();
            prop_assert_eq!(range, fix);
            prop_assert_eq!(is_monotone(&l, d.map()), is_inner(&l, d.map()));
        }
        let poset = build_do_poset(&dset);
        prop_assert_eq!(poset.bottom().map(|i| dset.get(i).map().clone()), Some(zero));
        prop_assert_eq!(poset.top().map(|i| dset.get(i).map().clone()), Some(id));
    }

    #[test]
    fn automorphisms_act_on_derivations(l in lattice()) {
        let dset = enumerate_derivations(&l);
        for f in automorphisms(&l) {
            for d in &dset {
                prop_assert!(dset.contains(&conjugate(&f, d.map())));
            }
        }
    }

    #[test]
    fn cup_is_always_inner(l in lattice()) {
        let dset = enumerate_derivations(&l);
        for a in &dset {
            for b in &dset {
                let r = op_algebra(&l, a.map(), b.map()).unwrap();
                let expected = inner(&l, l.join(a.top_value(), b.top_value()));
                prop_assert_eq!(&r.cup, expected.map());
                prop_assert!(r.cup_in_do);
                for x in l.elements() {
                    prop_assert_eq!(r.pointwise_join.apply(x), l.join(a.apply(x), b.apply(x)));
                    prop_assert_eq!(r.pointwise_meet.apply(x), l.meet(a.apply(x), b.apply(x)));
                    prop_assert_eq!(r.compose.apply(x), a.apply(b.apply(x)));
                }
            }
        }
    }

    #[test]
    fn checker_and_predicate_agree((l, op) in lattice_and_map()) {
        prop_assert_eq!(is_derivation(&l, &op), check_derivation(&l, &op).is_ok());
        prop_assert_eq!(is_derivation(&l, &op), enumerate_derivations(&l).contains(&op));
    }

    #[test]
    fn json_round_trip(l in lattice()) {
        let back = lattice_from_json(&lattice_to_json(&l)).unwrap();
        prop_assert_eq!(&back, &l);
        prop_assert_eq!(back.labels(), l.labels());
    }

    #[test]
    fn do_posets_of_relabelings_are_isomorphic(l in lattice()) {
        let original = enumerate_lattices(l.len()).unwrap().find(&l).unwrap().clone();
        let a: FinPoset = build_do_poset(&enumerate_derivations(&l));
        let b: FinPoset = build_do_poset(&enumerate_derivations(&original));
        prop_assert_eq!(a.canonical_key(), b.canonical_key());
        prop_assert!(a.isomorphism(&b).is_some());
        prop_assert_eq!(a.is_lattice(), b.is_lattice());
    }
}
