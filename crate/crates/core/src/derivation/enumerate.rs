//! Exhaustive enumeration of derivations.
//!
//! The generic search assigns `d(x)` along a linear extension (bottom first).
//! Candidates for `d(x)` are `x` itself and the already-fixed elements strictly
//! below `x`, since a derivation is contractive and its image is its fix-point
//! set. After each assignment the Leibniz identity is checked against every
//! assigned element; the meet of two assigned elements is always assigned.

use rayon::prelude::*;

use super::{is_derivation, Derivation, DerivationSet, OperatorMap};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FinLattice};

const UNSET: Elem = usize::MAX;

struct Search<'a> {
    l: &'a FinLattice,
    order: &'a [Elem],
    image: Vec<Elem>,
    out: Vec<Vec<Elem>>,
}

impl Search<'_> {
    fn consistent(&self, depth: usize) -> bool {
        let (l, d) = (self.l, &self.image);
        let x = self.order[depth];
        self.order[..=depth].iter().all(|&z| d[l.meet(x, z)] == l.join(l.meet(d[x], z), l.meet(x, d[z])))
    }

    fn candidates(&self, x: Elem) -> Vec<Elem> {
        self.l.elements().filter(|&y| y == x || (self.l.lt(y, x) && self.image[y] == y)).collect()
    }

    fn extend(&mut self, depth: usize) {
        if depth == self.order.len() {
            self.out.push(self.image.clone());
            return;
        }
        let x = self.order[depth];
        for y in self.candidates(x) {
            self.image[x] = y;
            if self.consistent(depth) {
                self.extend(depth + 1);
            }
        }
        self.image[x] = UNSET;
    }
}

fn finish(l: &FinLattice, images: Vec<Vec<Elem>>) -> DerivationSet {
    let items = images
        .into_iter()
        .map(|image| {
            let map = OperatorMap::new(image);
            assert!(is_derivation(l, &map), "search emitted a non-derivation {:?}", map.image());
            Derivation::new_unchecked(l, map)
        })
        .collect();
    DerivationSet::from_sorted(l.clone(), items)
}

/// All derivations of `l`, sorted by image array.
pub fn enumerate_derivations(l: &FinLattice) -> DerivationSet {
    let order = l.linear_extension();
    let mut search = Search { l, order: &order, image: vec![UNSET; l.len()], out: Vec::new() };
    search.extend(0);
    finish(l, search.out)
}

/// Same result as [`enumerate_derivations`], with the search tree split on the
/// candidate list of the first element after the bottom and the subtrees
/// explored in parallel.
pub fn enumerate_derivations_par(l: &FinLattice) -> DerivationSet {
    let order = l.linear_extension();
    if order.len() < 2 {
        return enumerate_derivations(l);
    }
    let mut root = vec![UNSET; l.len()];
    root[order[0]] = order[0];
    let seed = Search { l, order: &order, image: root.clone(), out: Vec::new() };
    let branches = seed.candidates(order[1]);
    let images: Vec<Vec<Elem>> = branches
        .into_par_iter()
        .flat_map_iter(|y| {
            let mut image = root.clone();
            image[order[1]] = y;
            let mut search = Search { l, order: &order, image, out: Vec::new() };
            if search.consistent(1) {
                search.extend(2);
            }
            search.out
        })
        .collect();
    finish(l, images)
}

/// Derivations of a chain built directly: fix an initial segment `a_0..a_i`,
/// then map the tail antitonely into `[a_0, a_i]`.
pub fn enumerate_chain_fast(l: &FinLattice) -> Result<DerivationSet> {
    if !l.is_chain() {
        return Err(Error::WrongShape("expected a chain"));
    }
    let chain = l.linear_extension();
    let n = chain.len();
    let mut out = Vec::new();
    for i in 0..n {
        let mut image = vec![UNSET; n];
        for &a in &chain[..=i] {
            image[a] = a;
        }
        antitone_tails(&chain, i, i + 1, i, &mut image, &mut out);
    }
    Ok(finish(l, out))
}

fn antitone_tails(chain: &[Elem], max_index: usize, pos: usize, bound: usize, image: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
    if pos == chain.len() {
        out.push(image.clone());
        return;
    }
    for v in 0..=bound.min(max_index) {
        image[chain[pos]] = chain[v];
        antitone_tails(chain, max_index, pos + 1, v, image, out);
    }
}

/// Derivations of `M_n` built directly: `0_L`, `id_L`, and for each nonempty
/// set `S` of fixed atoms and each `t ∈ S ∪ {0}`, the map fixing `S`, sending
/// the other atoms to `0` and `1` to `t`.
pub fn enumerate_diamond_fast(l: &FinLattice) -> Result<DerivationSet> {
    if !l.is_diamond() {
        return Err(Error::WrongShape("expected M_n"));
    }
    let (bottom, top) = (l.bottom(), l.top());
    let atoms: Vec<Elem> = l.elements().filter(|&x| x != bottom && x != top).collect();
    let mut out = vec![OperatorMap::zero(l).image().to_vec(), OperatorMap::identity(l).image().to_vec()];
    for mask in 1u64..(1 << atoms.len()) {
        let fixed: Vec<Elem> = atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        for &t in std::iter::once(&bottom).chain(&fixed) {
            let mut image = vec![bottom; l.len()];
            for &a in &fixed {
                image[a] = a;
            }
            image[top] = t;
            out.push(image);
        }
    }
    Ok(finish(l, out))
}

/// `C(k + l - 1, k)`, the number of isotone maps from a `k`-chain to an `l`-chain.
pub fn isotone_count_formula(k: u64, l: u64) -> Result<u64> {
    if k == 0 || l == 0 {
        return Err(Error::BadSize("isotone count needs k, l >= 1".into()));
    }
    let top = k.checked_add(l - 1).ok_or(Error::Overflow("k + l - 1"))?;
    let r = k.min(top - k);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(u128::from(top - i)).ok_or(Error::Overflow("binomial coefficient"))? / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial coefficient"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_chains() {
        let c2 = FinLattice::chain(2).unwrap();
        assert_eq!(enumerate_derivations(&c2).images(), vec![vec![0, 0], vec![0, 1]]);
        let c3 = FinLattice::chain(3).unwrap();
        let images = enumerate_derivations(&c3).images();
        // 0_L, χ^(0), d_u, id
        assert_eq!(images, vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 1, 1], vec![0, 1, 2]]);
        assert_eq!(enumerate_derivations(&FinLattice::chain(1).unwrap()).images(), vec![vec![0]]);
    }

    #[test]
    fn m4_has_nine() {
        assert_eq!(enumerate_derivations(&FinLattice::diamond(4).unwrap()).len(), 9);
    }

    #[test]
    fn fast_generators_agree() {
        for n in 1..=7 {
            let c = FinLattice::chain(n).unwrap();
            assert_eq!(enumerate_chain_fast(&c).unwrap().images(), enumerate_derivations(&c).images());
        }
        for n in 3..=7 {
            let m = FinLattice::diamond(n).unwrap();
            assert_eq!(enumerate_diamond_fast(&m).unwrap().images(), enumerate_derivations(&m).images());
        }
        assert_eq!(enumerate_diamond_fast(&FinLattice::diamond(5).unwrap()).unwrap().len(), 21);
        assert_eq!(enumerate_chain_fast(&FinLattice::chain(4).unwrap()).unwrap().len(), 8);
    }

    #[test]
    fn fast_generators_reject_wrong_shapes() {
        assert!(matches!(enumerate_chain_fast(&FinLattice::diamond(4).unwrap()), Err(Error::WrongShape(_))));
        assert!(matches!(enumerate_diamond_fast(&FinLattice::chain(4).unwrap()), Err(Error::WrongShape(_))));
        assert!(matches!(enumerate_diamond_fast(&FinLattice::pentagon()), Err(Error::WrongShape(_))));
    }

    #[test]
    fn parallel_matches_sequential() {
        for l in [
            FinLattice::chain(1).unwrap(),
            FinLattice::chain(2).unwrap(),
            FinLattice::chain(6).unwrap(),
            FinLattice::boolean(3).unwrap(),
            FinLattice::pentagon(),
            FinLattice::diamond(6).unwrap(),
        ] {
            assert_eq!(enumerate_derivations_par(&l).images(), enumerate_derivations(&l).images());
        }
    }

    #[test]
    fn chain_fast_works_on_scrambled_ids() {
        let c5 = FinLattice::chain(5).unwrap().relabel(&[3, 0, 4, 1, 2]);
        assert_eq!(enumerate_chain_fast(&c5).unwrap().images(), enumerate_derivations(&c5).images());
    }

    fn brute_isotone_count(k: usize, l: usize) -> u64 {
        // all l^k maps [k] → [l], keep the monotone ones
        let mut count = 0;
        let total = l.pow(k as u32);
        for code in 0..total {
            let digits: Vec<usize> = (0..k).map(|i| code / l.pow(i as u32) % l).collect();
            if digits.windows(2).all(|w| w[0] <= w[1]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn isotone_formula_examples() {
        assert_eq!(brute_isotone_count(2, 3), 6);
        assert_eq!(brute_isotone_count(3, 2), 4);
        assert_eq!(isotone_count_formula(1, 1).unwrap(), 1);
        assert_eq!(isotone_count_formula(2, 3).unwrap(), 6);
        assert_eq!(isotone_count_formula(3, 2).unwrap(), 4);
        assert!(matches!(isotone_count_formula(0, 3), Err(Error::BadSize(_))));
        assert!(matches!(isotone_count_formula(u64::MAX, 2), Err(Error::Overflow(_))));
        assert!(matches!(isotone_count_formula(40, 60), Err(Error::Overflow(_))));
    }
}
