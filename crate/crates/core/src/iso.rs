//! Lattice isomorphisms, automorphism groups and canonical forms.
//!
//! An order isomorphism between lattices is automatically a lattice
//! isomorphism, so the searches below only preserve `<=`. Candidates for an
//! element are restricted to elements with the same signature
//! `(|down-set|, |up-set|, #lower covers, #upper covers)`.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::lattice::{Elem, FinLattice};

/// A bijection on element ids, `image[x]` being the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<Elem>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// Returns `None` unless `image` is a bijection on `0..image.len()`.
    pub fn new(image: Vec<Elem>) -> Option<Self> {
        let mut seen = vec![false; image.len()];
        for &y in &image {
            if y >= image.len() || std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(Permutation { image })
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&x| self.image[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv }
    }

    /// Whether this is an isomorphism from `from` onto `to`, checked on meets and joins.
    pub fn is_isomorphism(&self, from: &FinLattice, to: &FinLattice) -> bool {
        from.len() == self.len()
            && to.len() == self.len()
            && from.elements().all(|x| {
                from.elements().all(|y| {
                    self.apply(from.meet(x, y)) == to.meet(self.apply(x), self.apply(y))
                        && self.apply(from.join(x, y)) == to.join(self.apply(x), self.apply(y))
                })
            })
    }

    pub fn is_automorphism_of(&self, l: &FinLattice) -> bool {
        self.is_isomorphism(l, l)
    }
}

fn signatures(l: &FinLattice) -> Vec<(usize, usize, usize, usize)> {
    let mut lower = vec![0; l.len()];
    let mut upper = vec![0; l.len()];
    for &(lo, hi) in l.covers() {
        upper[lo] += 1;
        lower[hi] += 1;
    }
    l.elements().map(|x| (l.down_set(x).count(), l.up_set(x).count(), lower[x], upper[x])).collect()
}

struct IsoSearch<'a> {
    from: &'a FinLattice,
    to: &'a FinLattice,
    order: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    map: Vec<Elem>,
    used: Vec<bool>,
}

impl<'a> IsoSearch<'a> {
    fn new(from: &'a FinLattice, to: &'a FinLattice) -> Option<Self> {
        if from.len() != to.len() || from.covers().len() != to.covers().len() {
            return None;
        }
        let (sig_from, sig_to) = (signatures(from), signatures(to));
        let mut a = sig_from.clone();
        let mut b = sig_to.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        let candidates =
            from.elements().map(|x| to.elements().filter(|&y| sig_to[y] == sig_from[x]).collect()).collect();
        Some(IsoSearch {
            from,
            to,
            order: from.linear_extension(),
            candidates,
            map: vec![usize::MAX; from.len()],
            used: vec![false; from.len()],
        })
    }

    fn consistent(&self, depth: usize, x: Elem, y: Elem) -> bool {
        self.order[..depth].iter().all(|&p| {
            let q = self.map[p];
            self.from.leq(p, x) == self.to.leq(q, y) && self.from.leq(x, p) == self.to.leq(y, q)
        })
    }

    /// Visits every isomorphism; the callback returns `false` to stop.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[Elem]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let x = self.order[depth];
        for i in 0..self.candidates[x].len() {
            let y = self.candidates[x][i];
            if self.used[y] || !self.consistent(depth, x, y) {
                continue;
            }
            self.map[x] = y;
            self.used[y] = true;
            let keep_going = self.run(depth + 1, visit);
            self.used[y] = false;
            self.map[x] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// The full automorphism group, sorted lexicographically by image array.
pub fn automorphisms(l: &FinLattice) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut search = IsoSearch::new(l, l).expect("a lattice has the same signature as itself");
    search.run(0, &mut |map| {
        out.push(Permutation { image: map.to_vec() });
        true
    });
    out.sort();
    out
}

/// Some isomorphism `a → b`, if one exists.
pub fn are_isomorphic(a: &FinLattice, b: &FinLattice) -> Option<Permutation> {
    let mut search = IsoSearch::new(a, b)?;
    let mut found = None;
    search.run(0, &mut |map| {
        found = Some(Permutation { image: map.to_vec() });
        false
    });
    found
}

/// A small generating set of the group, picked greedily in the given order.
pub fn generators(group: &[Permutation]) -> Vec<Permutation> {
    let Some(first) = group.first() else { return Vec::new() };
    let identity = Permutation::identity(first.len());
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: HashSet<Permutation> = HashSet::from([identity.clone()]);
    for g in group {
        if closure.contains(g) {
            continue;
        }
        gens.push(g.clone());
        closure = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity.clone()]);
        while let Some(p) = queue.pop_front() {
            for s in &gens {
                let q = s.compose(&p);
                if closure.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
    }
    gens
}

/// Iterated color refinement of an order relation.
///
/// Colors are dense ranks `0..k`; the new color of `x` is determined by its
/// old color and the multisets of colors strictly below and strictly above
/// it. The rank order of the initial colors is preserved, so the result is
/// labeling-independent whenever the input colors are.
pub(crate) fn refine_order_colors(n: usize, leq: &dyn Fn(usize, usize) -> bool, mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = count_classes(&colors);
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut below: Vec<usize> = (0..n).filter(|&y| y != x && leq(y, x)).map(|y| colors[y]).collect();
                let mut above: Vec<usize> = (0..n).filter(|&y| y != x && leq(x, y)).map(|y| colors[y]).collect();
                below.sort_unstable();
                above.sort_unstable();
                (colors[x], below, above)
            })
            .collect();
        colors = dense_ranks(&keys);
        let next = count_classes(&colors);
        if next == classes {
            return colors;
        }
        classes = next;
    }
}

pub(crate) fn dense_ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("key present")).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

struct CanonSearch<'a> {
    lattice: &'a FinLattice,
    best: Option<(Vec<Elem>, Vec<Elem>)>,
}

impl CanonSearch<'_> {
    fn leaf_table(&self, perm: &[Elem]) -> Vec<Elem> {
        let n = self.lattice.len();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[self.lattice.meet(x, y)];
            }
        }
        table
    }

    fn run(&mut self, colors: Vec<usize>) {
        let l = self.lattice;
        let n = l.len();
        let colors = refine_order_colors(n, &|x, y| l.leq(x, y), colors);
        let classes = count_classes(&colors);
        if classes == n {
            let table = self.leaf_table(&colors);
            if self.best.as_ref().map_or(true, |(best, _)| table < *best) {
                self.best = Some((table, colors));
            }
            return;
        }
        let mut sizes = vec![0; classes];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..classes).find(|&c| sizes[c] > 1).expect("non-discrete partition has a big cell");
        for v in (0..n).filter(|&v| colors[v] == target) {
            let split = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if c > target || (c == target && w != v) { c + 1 } else { c })
                .collect();
            self.run(split);
        }
    }
}

/// The canonical relabeling `perm` (old id → new id) together with the
/// lexicographically least meet table it produces.
///
/// Relabelings range over the leaves of an individualize-and-refine tree
/// whose root partition is the `(|down-set|, |up-set|)` level split.
pub fn canonical_labeling(l: &FinLattice) -> (Permutation, Vec<Elem>) {
    let initial = dense_ranks(&l.elements().map(|x| (l.down_set(x).count(), l.up_set(x).count())).collect::<Vec<_>>());
    let mut search = CanonSearch { lattice: l, best: None };
    search.run(initial);
    let (table, perm) = search.best.expect("search always reaches a leaf");
    (Permutation { image: perm }, table)
}

/// Canonical key: the element count and the canonical meet table, one base-36
/// digit per entry (comma-separated decimals above 36 elements).
pub fn canonical_key(l: &FinLattice) -> String {
    let (_, table) = canonical_labeling(l);
    encode_key(l.len(), &table)
}

/// The lattice relabeled into canonical form, with its key.
pub fn canonical_form(l: &FinLattice) -> (FinLattice, String) {
    let (perm, table) = canonical_labeling(l);
    (l.relabel(perm.image()), encode_key(l.len(), &table))
}

fn encode_key(n: usize, table: &[Elem]) -> String {
    let body: String = if n <= 36 {
        table.iter().map(|&e| std::char::from_digit(e as u32, 36).expect("digit < 36")).collect()
    } else {
        table.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    };
    format!("{n}:{body}")
}
