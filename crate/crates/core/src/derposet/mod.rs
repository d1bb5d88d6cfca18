//! The pointwise-ordered poset of derivations and the operator algebra on it.

mod algebra;
mod probe;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub use algebra::{
    check_join_closed, check_meet_closed, chi_sublattice_check, distributivity_transfer, do_chain_criterion,
    family_join_closed, ido_lattice_iso, join_closure_failure, meet_closure_failure, op_algebra, ChiReport,
    FamilyMode, FamilyVerdict, IdoIso, OpAlgebraResult, TransferReport,
};
pub use probe::{
    collision_scan, conjecture_probe, run_conjecture, CertificateReport, Collision, ConjectureReport, OrderSummary, PairOutcome,
    ProbeReport,
};

use crate::derivation::DerivationSet;
use crate::error::{Error, Result};
use crate::iso::{dense_ranks, refine_order_colors};
use crate::lattice::FinLattice;

/// A finite poset on `0..size`; `labels[i]` is the external id of element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    size: usize,
    leq: Vec<bool>,
    labels: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Join,
    Meet,
}

/// A pair without a unique least upper (or greatest lower) bound, with its
/// minimal upper (maximal lower) bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: BoundKind,
    pub pair: (usize, usize),
    pub bounds: Vec<usize>,
}

impl FinPoset {
    /// Validates reflexivity, antisymmetry and transitivity.
    pub fn new(size: usize, leq: Vec<bool>, labels: Vec<usize>) -> Result<Self> {
        if leq.len() != size * size || labels.len() != size {
            return Err(Error::BadSize(format!("poset of size {size} needs {} relation entries", size * size)));
        }
        for a in 0..size {
            if !leq[a * size + a] {
                return Err(Error::Internal(format!("relation is not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && leq[a * size + b] && leq[b * size + a] {
                    return Err(Error::Internal(format!("relation is not antisymmetric at ({a}, {b})")));
                }
                if leq[a * size + b] {
                    for c in 0..size {
                        if leq[b * size + c] && !leq[a * size + c] {
                            return Err(Error::Internal(format!("relation is not transitive at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        }
        Ok(FinPoset { size, leq, labels })
    }

    pub fn from_fn(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let rel = (0..size * size).map(|i| leq(i / size, i % size)).collect();
        Self::new(size, rel, (0..size).collect())
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq(a, b)))
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.size).find(|&a| (0..self.size).all(|b| self.leq(b, a)))
    }

    pub fn minimal_upper_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        let upper: Vec<usize> = (0..self.size).filter(|&c| self.leq(a, c) && self.leq(b, c)).collect();
        upper.iter().copied().filter(|&c| upper.iter().all(|&d| d == c || !self.leq(d, c))).collect()
    }

    pub fn maximal_lower_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        let lower: Vec<usize> = (0..self.size).filter(|&c| self.leq(c, a) && self.leq(c, b)).collect();
        lower.iter().copied().filter(|&c| lower.iter().all(|&d| d == c || !self.leq(c, d))).collect()
    }

    /// The least upper bound, when there is exactly one minimal upper bound.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        match self.minimal_upper_bounds(a, b).as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        match self.maximal_lower_bounds(a, b).as_slice() {
            [c] => Some(*c),
            _ => None,
        }
    }

    /// `Ok(())` when every pair has a unique minimal upper bound and a unique
    /// maximal lower bound; otherwise the first failing pair.
    pub fn check_lattice(&self) -> Result<(), Certificate> {
        if self.size == 0 {
            return Err(Certificate { kind: BoundKind::Join, pair: (0, 0), bounds: Vec::new() });
        }
        // c is the least upper bound of a, b iff c is an upper bound and
        // up(c) = up(a) ∩ up(b); bitsets make this linear per pair.
        let n = self.size;
        let words = n.div_ceil(64);
        let bits = |f: &dyn Fn(usize) -> bool| {
            let mut v = vec![0u64; words];
            for c in (0..n).filter(|&c| f(c)) {
                v[c / 64] |= 1 << (c % 64);
            }
            v
        };
        let up: Vec<Vec<u64>> = (0..n).map(|a| bits(&|c| self.leq(a, c))).collect();
        let down: Vec<Vec<u64>> = (0..n).map(|a| bits(&|c| self.leq(c, a))).collect();
        let count = |v: &[u64]| v.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        let up_size: Vec<usize> = up.iter().map(|v| count(v)).collect();
        let down_size: Vec<usize> = down.iter().map(|v| count(v)).collect();
        let has_extreme = |sets: &[Vec<u64>], sizes: &[usize], a: usize, b: usize| {
            let common: Vec<u64> = sets[a].iter().zip(&sets[b]).map(|(x, y)| x & y).collect();
            let total = count(&common);
            (0..n).any(|c| common[c / 64] >> (c % 64) & 1 == 1 && sizes[c] == total)
        };
        for a in 0..n {
            for b in a + 1..n {
                if !has_extreme(&up, &up_size, a, b) {
                    return Err(Certificate { kind: BoundKind::Join, pair: (a, b), bounds: self.minimal_upper_bounds(a, b) });
                }
                if !has_extreme(&down, &down_size, a, b) {
                    return Err(Certificate { kind: BoundKind::Meet, pair: (a, b), bounds: self.maximal_lower_bounds(a, b) });
                }
            }
        }
        Ok(())
    }

    pub fn is_lattice(&self) -> bool {
        self.check_lattice().is_ok()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.comparable(a, b)))
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The poset as a [`FinLattice`], when it is one.
    pub fn to_lattice(&self) -> Result<FinLattice> {
        FinLattice::from_order(self.size, self.leq.clone())
    }

    fn refined_colors(&self) -> Vec<usize> {
        let n = self.size;
        let initial: Vec<(usize, usize)> = (0..n)
            .map(|a| ((0..n).filter(|&b| self.leq(b, a)).count(), (0..n).filter(|&b| self.leq(a, b)).count()))
            .collect();
        refine_order_colors(n, &|a, b| self.leq(a, b), dense_ranks(&initial))
    }

    /// An isomorphism-invariant key: the size, the refined color-class sizes
    /// and the number of order relations between each pair of classes, hashed.
    /// Equal keys do not imply isomorphism; use [`FinPoset::isomorphism`].
    pub fn canonical_key(&self) -> String {
        let colors = self.refined_colors();
        let k = colors.iter().copied().max().map_or(0, |m| m + 1);
        let mut class_sizes = vec![0u64; k];
        let mut relations = vec![0u64; k * k];
        for a in 0..self.size {
            class_sizes[colors[a]] += 1;
            for b in 0..self.size {
                if self.leq(a, b) {
                    relations[colors[a] * k + colors[b]] += 1;
                }
            }
        }
        let mut hasher = Sha256::new();
        hasher.update((self.size as u64).to_le_bytes());
        for v in class_sizes.iter().chain(&relations) {
            hasher.update(v.to_le_bytes());
        }
        let digest = hasher.finalize();
        let hex: String = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        format!("p{}-{hex}", self.size)
    }

    /// An order isomorphism `self → other` (`map[a]` is the image of `a`), if any.
    pub fn isomorphism(&self, other: &FinPoset) -> Option<Vec<usize>> {
        let n = self.size;
        if other.size != n {
            return None;
        }
        // refine the disjoint union so that colors are comparable across both
        let union = |a: usize, b: usize| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            _ => false,
        };
        let initial: Vec<(usize, usize)> = (0..2 * n)
            .map(|a| ((0..2 * n).filter(|&b| union(b, a)).count(), (0..2 * n).filter(|&b| union(a, b)).count()))
            .collect();
        let colors = refine_order_colors(2 * n, &union, dense_ranks(&initial));
        let (mine, theirs) = colors.split_at(n);
        let mut a_sorted = mine.to_vec();
        let mut b_sorted = theirs.to_vec();
        a_sorted.sort_unstable();
        b_sorted.sort_unstable();
        if a_sorted != b_sorted {
            return None;
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| ((0..n).filter(|&b| self.leq(b, a)).count(), a));
        let candidates: Vec<Vec<usize>> = (0..n).map(|a| (0..n).filter(|&b| theirs[b] == mine[a]).collect()).collect();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];

        fn go(
            depth: usize,
            order: &[usize],
            candidates: &[Vec<usize>],
            map: &mut [usize],
            used: &mut [bool],
            a: &FinPoset,
            b: &FinPoset,
        ) -> bool {
            if depth == order.len() {
                return true;
            }
            let x = order[depth];
            for &y in &candidates[x] {
                if used[y] {
                    continue;
                }
                let ok = order[..depth].iter().all(|&p| {
                    let q = map[p];
                    a.leq(p, x) == b.leq(q, y) && a.leq(x, p) == b.leq(y, q)
                });
                if !ok {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if go(depth + 1, order, candidates, map, used, a, b) {
                    return true;
                }
                used[y] = false;
                map[x] = usize::MAX;
            }
            false
        }

        go(0, &order, &candidates, &mut map, &mut used, self, other).then_some(map)
    }

    pub fn heights(&self) -> Vec<usize> {
        let n = self.size;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (0..n).filter(|&b| self.leq(b, a)).count());
        let covers = self.covers();
        let mut height = vec![0; n];
        for a in order {
            for &(lo, hi) in &covers {
                if hi == a {
                    height[a] = height[a].max(height[lo] + 1);
                }
            }
        }
        height
    }

    /// DOT rendering of the Hasse diagram with the given element names.
    pub fn to_dot(&self, name: &str, names: &[String]) -> String {
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        crate::io::hasse_dot(name, &names, &self.covers(), &self.heights())
    }
}

/// `(DO(L), ⪯)`; element `i` is derivation `i` of the set.
pub fn build_do_poset(dset: &DerivationSet) -> FinPoset {
    let l = dset.lattice();
    let m = dset.len();
    let leq = (0..m * m).map(|i| dset.get(i / m).map().precedes(dset.get(i % m).map(), l)).collect();
    FinPoset { size: m, leq, labels: (0..m).collect() }
}
