//! Bounded finite lattices stored as dense meet/join tables.
//!
//! Elements are the ids `0..n`. The bottom and top are discovered from the
//! order, so they need not be `0` and `n - 1`.

use crate::error::{Error, Result};

/// An element id of a [`FinLattice`].
pub type Elem = usize;

#[derive(Clone, Debug)]
pub struct FinLattice {
    n: usize,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    bottom: Elem,
    top: Elem,
    covers: Vec<(Elem, Elem)>,
    labels: Vec<String>,
    name: Option<String>,
    distributive: bool,
    modular: bool,
    chain: bool,
}

impl PartialEq for FinLattice {
    /// Equality of labeled structure (same ids, same order); names and labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.leq == other.leq
    }
}

impl Eq for FinLattice {}

impl FinLattice {
    /// Builds a lattice from its Hasse diagram. Redundant (transitive) edges are
    /// accepted and dropped from the stored cover relation.
    pub fn from_covers(n: usize, covers: &[(Elem, Elem)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadSize("a lattice needs at least one element".into()));
        }
        let mut succ = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in covers {
            for id in [lo, hi] {
                if id >= n {
                    return Err(Error::OutOfRange { id, n });
                }
            }
            if lo == hi {
                return Err(Error::CyclicCovers);
            }
            succ[lo].push(hi);
            indegree[hi] += 1;
        }

        // Kahn's algorithm; anything left over sits on a cycle.
        let mut topo = Vec::with_capacity(n);
        let mut ready: Vec<Elem> = (0..n).filter(|&x| indegree[x] == 0).collect();
        while let Some(x) = ready.pop() {
            topo.push(x);
            for &y in &succ[x] {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::CyclicCovers);
        }

        let mut leq = vec![false; n * n];
        for &x in topo.iter().rev() {
            leq[x * n + x] = true;
            for &y in &succ[x] {
                for z in 0..n {
                    if leq[y * n + z] {
                        leq[x * n + z] = true;
                    }
                }
            }
        }
        Self::from_order(n, leq)
    }

    /// Builds a lattice from a full order matrix, `leq[x * n + y]` meaning `x <= y`.
    pub fn from_order(n: usize, leq: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadSize("a lattice needs at least one element".into()));
        }
        if leq.len() != n * n {
            return Err(Error::BadSize(format!("order matrix has {} entries, expected {}", leq.len(), n * n)));
        }
        for x in 0..n {
            if !leq[x * n + x] {
                return Err(Error::Internal(format!("order is not reflexive at {x}")));
            }
            for y in 0..n {
                if x != y && leq[x * n + y] && leq[y * n + x] {
                    return Err(Error::CyclicCovers);
                }
                if leq[x * n + y] {
                    for z in 0..n {
                        if leq[y * n + z] && !leq[x * n + z] {
                            return Err(Error::Internal(format!("order is not transitive at ({x}, {y}, {z})")));
                        }
                    }
                }
            }
        }

        let bottom = (0..n).find(|&x| (0..n).all(|y| leq[x * n + y])).ok_or(Error::NotBounded("least"))?;
        let top = (0..n).find(|&x| (0..n).all(|y| leq[y * n + x])).ok_or(Error::NotBounded("greatest"))?;

        let down_size: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| leq[y * n + x]).count()).collect();
        let up_size: Vec<usize> = (0..n).map(|x| (0..n).filter(|&y| leq[x * n + y]).count()).collect();

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for x in 0..n {
            for y in x..n {
                let lower: Vec<Elem> = (0..n).filter(|&z| leq[z * n + x] && leq[z * n + y]).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .max_by_key(|&z| down_size[z])
                    .filter(|&g| lower.iter().all(|&z| leq[z * n + g]))
                    .ok_or(Error::NotALattice { x, y, bound: "greatest lower bound" })?;
                let upper: Vec<Elem> = (0..n).filter(|&z| leq[x * n + z] && leq[y * n + z]).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .max_by_key(|&z| up_size[z])
                    .filter(|&l| upper.iter().all(|&z| leq[l * n + z]))
                    .ok_or(Error::NotALattice { x, y, bound: "least upper bound" })?;
                meet[x * n + y] = glb;
                meet[y * n + x] = glb;
                join[x * n + y] = lub;
                join[y * n + x] = lub;
            }
        }

        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y
                    && leq[x * n + y]
                    && !(0..n).any(|z| z != x && z != y && leq[x * n + z] && leq[z * n + y])
                {
                    covers.push((x, y));
                }
            }
        }

        let mut lattice = FinLattice {
            n,
            leq,
            meet,
            join,
            bottom,
            top,
            covers,
            labels: (0..n).map(|x| x.to_string()).collect(),
            name: None,
            distributive: false,
            modular: false,
            chain: false,
        };
        lattice.distributive = lattice.distributivity_violation().is_none();
        lattice.modular = lattice.modularity_violation().is_none();
        lattice.chain = (0..n).all(|x| (0..n).all(|y| lattice.comparable(x, y)));
        Ok(lattice)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Replaces the display labels. Panics if the count does not match.
    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.n, "one label per element");
        self.labels = labels;
        self
    }

    /// The `n`-element chain `0 < a_1 < … < a_{n-2} < 1`, ids in increasing order.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadSize("a chain needs n >= 1".into()));
        }
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let labels: Vec<String> = match n {
            1 => vec!["0".into()],
            2 => vec!["0".into(), "1".into()],
            3 => vec!["0".into(), "u".into(), "1".into()],
            4 => vec!["0".into(), "u".into(), "v".into(), "1".into()],
            _ => std::iter::once("0".to_string())
                .chain((1..n - 1).map(|i| format!("a{i}")))
                .chain(std::iter::once("1".to_string()))
                .collect(),
        };
        Ok(Self::from_covers(n, &covers)?.with_labels(labels).with_name(format!("C_{n}")))
    }

    /// The diamond `M_n`: bottom `0`, atoms `1..=n-2` (labelled `b1…`), top `n-1`.
    pub fn diamond(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadSize("M_n needs n >= 3".into()));
        }
        let top = n - 1;
        let covers: Vec<_> = (1..top).flat_map(|b| [(0, b), (b, top)]).collect();
        let labels = std::iter::once("0".to_string())
            .chain((1..top).map(|i| format!("b{i}")))
            .chain(std::iter::once("1".to_string()));
        Ok(Self::from_covers(n, &covers)?.with_labels(labels).with_name(format!("M_{n}")))
    }

    /// The Boolean lattice of subsets of a `k`-set; element ids are bitmasks.
    pub fn boolean(k: u32) -> Result<Self> {
        if k > 6 {
            return Err(Error::BadSize(format!("B_(2^{k}) is larger than supported")));
        }
        let n = 1usize << k;
        let leq = (0..n * n).map(|i| (i / n) & (i % n) == i / n).collect();
        let lattice = Self::from_order(n, leq)?;
        let labels: Vec<String> = if k == 3 {
            // a, b, c atoms; u = a∨b, v = a∨c, w = b∨c
            ["0", "a", "b", "u", "c", "v", "w", "1"].iter().map(|s| s.to_string()).collect()
        } else {
            (0..n)
                .map(|m| match m {
                    0 => "0".to_string(),
                    _ if m == n - 1 => "1".to_string(),
                    _ => {
                        let bits: Vec<String> = (0..k).filter(|b| m >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
                        format!("{{{}}}", bits.join(","))
                    }
                })
                .collect()
        };
        Ok(lattice.with_labels(labels).with_name(format!("B_{n}")))
    }

    /// The pentagon `N_5 = {0, v, u, w, 1}` with `0 < v < u < 1` and `0 < w < 1`.
    pub fn pentagon() -> Self {
        Self::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("pentagon is a lattice")
            .with_labels(["0", "v", "u", "w", "1"])
            .with_name("N_5")
    }

    /// Direct product, with `(a, b)` stored at id `a * other.len() + b`.
    pub fn product(&self, other: &FinLattice) -> FinLattice {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut leq = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                leq[x * n + y] = self.leq(x / n2, y / n2) && other.leq(x % n2, y % n2);
            }
        }
        let labels: Vec<String> =
            (0..n).map(|x| format!("({},{})", self.labels[x / n2], other.labels[x % n2])).collect();
        Self::from_order(n, leq).expect("product of lattices is a lattice").with_labels(labels)
    }

    /// The order dual: meet and join swap, bottom and top swap.
    pub fn dual(&self) -> FinLattice {
        let n = self.n;
        let leq = (0..n * n).map(|i| self.leq[(i % n) * n + i / n]).collect();
        let mut dual = Self::from_order(n, leq).expect("dual of a lattice is a lattice").with_labels(self.labels.clone());
        dual.name = self.name.as_ref().map(|s| format!("{s}^op"));
        dual
    }

    /// Renames element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[Elem]) -> FinLattice {
        let n = self.n;
        assert_eq!(perm.len(), n);
        let mut leq = vec![false; n * n];
        let mut labels = vec![String::new(); n];
        for x in 0..n {
            labels[perm[x]] = self.labels[x].clone();
            for y in 0..n {
                leq[perm[x] * n + perm[y]] = self.leq[x * n + y];
            }
        }
        let mut out = Self::from_order(n, leq).expect("relabeling preserves the lattice").with_labels(labels);
        out.name = self.name.clone();
        out
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.meet[x * self.n + y]
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.join[x * self.n + y]
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.leq[x * self.n + y]
    }

    #[inline]
    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: Elem, y: Elem) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn covers(&self) -> &[(Elem, Elem)] {
        &self.covers
    }

    pub fn order_matrix(&self) -> &[bool] {
        &self.leq
    }

    pub fn meet_table(&self) -> &[Elem] {
        &self.meet
    }

    pub fn join_table(&self) -> &[Elem] {
        &self.join
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn find_label(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn down_set(&self, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        (0..self.n).filter(move |&y| self.leq(y, x))
    }

    pub fn up_set(&self, x: Elem) -> impl Iterator<Item = Elem> + '_ {
        (0..self.n).filter(move |&y| self.leq(x, y))
    }

    pub fn atoms(&self) -> Vec<Elem> {
        self.covers.iter().filter(|&&(lo, _)| lo == self.bottom).map(|&(_, hi)| hi).collect()
    }

    pub fn coatoms(&self) -> Vec<Elem> {
        self.covers.iter().filter(|&&(_, hi)| hi == self.top).map(|&(lo, _)| lo).collect()
    }

    /// Elements sorted by `(|down-set|, id)`; bottom comes first and every
    /// element follows all of its strict lower bounds.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = self.elements().collect();
        order.sort_by_key(|&x| (self.down_set(x).count(), x));
        order
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![0; self.n];
        for x in self.linear_extension() {
            for &(lo, hi) in &self.covers {
                if hi == x {
                    height[x] = height[x].max(height[lo] + 1);
                }
            }
        }
        height
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    pub fn is_modular(&self) -> bool {
        self.modular
    }

    pub fn is_chain(&self) -> bool {
        self.chain
    }

    /// A triple with `x∧(y∨z) != (x∧y)∨(x∧z)`, if any.
    pub fn distributivity_violation(&self) -> Option<(Elem, Elem, Elem)> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// A triple with `x <= z` and `x∨(y∧z) != (x∨y)∧z`, if any.
    pub fn modularity_violation(&self) -> Option<(Elem, Elem, Elem)> {
        let n = self.n;
        for x in 0..n {
            for z in 0..n {
                if !self.leq(x, z) {
                    continue;
                }
                for y in 0..n {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Whether the lattice has the shape of `M_n` for some `n >= 3`: every
    /// element other than the bounds is both an atom and a coatom.
    pub fn is_diamond(&self) -> bool {
        self.n >= 3
            && self.elements().filter(|&x| x != self.bottom && x != self.top).all(|x| {
                self.elements().all(|y| y == x || y == self.bottom || y == self.top || !self.comparable(x, y))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_lattice_laws(l: &FinLattice) {
        for x in l.elements() {
            assert_eq!(l.meet(x, x), x);
            assert_eq!(l.join(x, x), x);
            assert_eq!(l.meet(x, l.bottom()), l.bottom());
            assert_eq!(l.join(x, l.top()), l.top());
            for y in l.elements() {
                assert_eq!(l.meet(x, y), l.meet(y, x));
                assert_eq!(l.join(x, y), l.join(y, x));
                assert_eq!(l.meet(x, l.join(x, y)), x);
                assert_eq!(l.join(x, l.meet(x, y)), x);
                assert_eq!(l.leq(x, y), l.meet(x, y) == x);
                for z in l.elements() {
                    assert_eq!(l.meet(x, l.meet(y, z)), l.meet(l.meet(x, y), z));
                    assert_eq!(l.join(x, l.join(y, z)), l.join(l.join(x, y), z));
                    // glb really is greatest
                    if l.leq(z, x) && l.leq(z, y) {
                        assert!(l.leq(z, l.meet(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn two_chain() {
        let l = FinLattice::from_covers(2, &[(0, 1)]).unwrap();
        assert_eq!(l.meet(0, 1), 0);
        assert_eq!(l.join(0, 1), 1);
        assert_eq!((l.bottom(), l.top()), (0, 1));
    }

    #[test]
    fn m5_from_covers() {
        let l = FinLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap();
        assert!(!l.is_distributive());
        assert!(l.is_modular());
        assert_lattice_laws(&l);
    }

    #[test]
    fn missing_top_is_rejected() {
        let err = FinLattice::from_covers(4, &[(0, 1), (0, 2), (1, 3)]).unwrap_err();
        assert!(matches!(err, Error::NotBounded("greatest")));
    }

    #[test]
    fn no_unique_join_is_rejected() {
        // 0 < a, b < c, d < 1 with a, b both below c and d: a∨b is not unique
        let covers = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
        assert!(matches!(FinLattice::from_covers(6, &covers), Err(Error::NotALattice { .. })));
    }

    #[test]
    fn cycles_and_ranges() {
        assert!(matches!(FinLattice::from_covers(2, &[(0, 1), (1, 0)]), Err(Error::CyclicCovers)));
        assert!(matches!(FinLattice::from_covers(2, &[(0, 0)]), Err(Error::CyclicCovers)));
        assert!(matches!(FinLattice::from_covers(2, &[(0, 2)]), Err(Error::OutOfRange { id: 2, n: 2 })));
        assert!(matches!(FinLattice::from_covers(0, &[]), Err(Error::BadSize(_))));
    }

    #[test]
    fn bounds_are_discovered() {
        // top is id 0, bottom is id 2
        let l = FinLattice::from_covers(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!((l.bottom(), l.top()), (2, 0));
        assert!(l.is_chain());
    }

    #[test]
    fn redundant_edges_are_reduced() {
        let l = FinLattice::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(l.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn named_families() {
        let c3 = FinLattice::chain(3).unwrap();
        assert_eq!(c3.labels(), &["0", "u", "1"]);
        assert!(c3.is_chain() && c3.is_distributive());

        let m4 = FinLattice::diamond(4).unwrap();
        assert_eq!(m4.atoms(), vec![1, 2]);
        assert_eq!(m4.coatoms(), vec![1, 2]);
        assert!(m4.is_diamond());
        assert!(m4.is_distributive());
        assert!(!FinLattice::diamond(5).unwrap().is_distributive());

        let b8 = FinLattice::boolean(3).unwrap();
        assert_eq!(b8.len(), 8);
        assert_eq!(b8.atoms().len(), 3);
        assert_eq!(b8.coatoms().len(), 3);
        let (a, b, c) = (b8.find_label("a").unwrap(), b8.find_label("b").unwrap(), b8.find_label("c").unwrap());
        assert_eq!(b8.label(b8.join(a, b)), "u");
        assert_eq!(b8.label(b8.join(a, c)), "v");
        assert_eq!(b8.label(b8.join(b, c)), "w");

        let n5 = FinLattice::pentagon();
        assert!(!n5.is_modular());
        assert!(n5.modularity_violation().is_some());

        assert!(matches!(FinLattice::chain(0), Err(Error::BadSize(_))));
        assert!(matches!(FinLattice::diamond(2), Err(Error::BadSize(_))));
        assert!(FinLattice::chain(5).unwrap().is_distributive());
    }

    #[test]
    fn laws_hold_on_constructions() {
        let lattices = [
            FinLattice::chain(1).unwrap(),
            FinLattice::chain(6).unwrap(),
            FinLattice::diamond(6).unwrap(),
            FinLattice::boolean(3).unwrap(),
            FinLattice::pentagon(),
            FinLattice::pentagon().product(&FinLattice::chain(2).unwrap()),
        ];
        for l in &lattices {
            assert_lattice_laws(l);
            assert_lattice_laws(&l.dual());
        }
    }

    #[test]
    fn dual_swaps_operations() {
        let n5 = FinLattice::pentagon();
        let d = n5.dual();
        assert_eq!(d.bottom(), n5.top());
        assert_eq!(d.top(), n5.bottom());
        for x in n5.elements() {
            for y in n5.elements() {
                assert_eq!(d.meet(x, y), n5.join(x, y));
                assert_eq!(d.join(x, y), n5.meet(x, y));
            }
        }
    }

    #[test]
    fn diamond_shape_detection() {
        assert!(FinLattice::chain(3).unwrap().is_diamond());
        assert!(!FinLattice::chain(4).unwrap().is_diamond());
        assert!(!FinLattice::chain(2).unwrap().is_diamond());
        assert!(!FinLattice::boolean(3).unwrap().is_diamond());
    }
}
