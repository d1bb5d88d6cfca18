mod common;

use difflat::catalog::{enumerate_lattices, from_jsonl, generate_lattices, to_jsonl};
use difflat::iso::{are_isomorphic, canonical_key};

#[test]
fn counts_match_the_labeled_poset_oracle_through_order_seven() {
    for n in 1..=7 {
        assert_eq!(enumerate_lattices(n).unwrap().len(), common::lattice_count_oracle(n), "order {n}");
    }
}

#[test]
fn entries_are_pairwise_non_isomorphic() {
    for n in 1..=7 {
        let cat = enumerate_lattices(n).unwrap();
        let lattices: Vec<_> = cat.lattices().collect();
        for (i, a) in lattices.iter().enumerate() {
            for b in &lattices[i + 1..] {
                assert!(are_isomorphic(a, b).is_none(), "order {n}: duplicate entries");
            }
        }
    }
}

#[test]
fn keys_are_recomputable_and_sorted() {
    for n in 1..=7 {
        let cat = enumerate_lattices(n).unwrap();
        let keys: Vec<&String> = cat.entries().iter().map(|(k, _)| k).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        for (k, l) in cat.entries() {
            assert_eq!(&canonical_key(l), k);
            assert_eq!(l.len(), n);
        }
    }
}

#[test]
fn orders_eight_and_nine() {
    assert_eq!(enumerate_lattices(8).unwrap().len(), 222);
    assert_eq!(enumerate_lattices(9).unwrap().len(), 1078);
}

#[test]
fn serialization_is_stable_across_thread_counts() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| to_jsonl(&generate_lattices(7).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, to_jsonl(&enumerate_lattices(7).unwrap()));
    assert_eq!(to_jsonl(&from_jsonl(one.as_bytes()).unwrap()), one);
}
