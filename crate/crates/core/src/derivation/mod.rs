//! Operators on a finite lattice and the derivations among them.
//!
//! A derivation is a self-map `d` with `d(x∧y) = (d(x)∧y) ∨ (x∧d(y))` for all
//! `x, y`. Operator maps are plain image arrays; every function that needs the
//! lattice operations takes the lattice explicitly.

mod enumerate;
mod families;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use enumerate::{
    enumerate_chain_fast, enumerate_derivations, enumerate_derivations_par, enumerate_diamond_fast,
    isotone_count_formula,
};
pub use families::{chi, cut_condition, eta, inner, lambda_band, lambda_band_map, lambda_cut, lambda_cut_map, lower_top};

use crate::error::{Axiom, Error, Result};
use crate::lattice::{Elem, FinLattice};

/// An arbitrary self-map of a lattice, `image[x] = d(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OperatorMap {
    image: Vec<Elem>,
}

impl OperatorMap {
    pub fn new(image: Vec<Elem>) -> Self {
        OperatorMap { image }
    }

    pub fn from_fn(l: &FinLattice, f: impl Fn(Elem) -> Elem) -> Self {
        OperatorMap { image: l.elements().map(f).collect() }
    }

    /// `0_L`
    pub fn zero(l: &FinLattice) -> Self {
        Self::from_fn(l, |_| l.bottom())
    }

    /// `1_L`, the constant top map. Never a derivation when `|L| > 1`.
    pub fn one(l: &FinLattice) -> Self {
        Self::from_fn(l, |_| l.top())
    }

    /// `id_L`
    pub fn identity(l: &FinLattice) -> Self {
        Self::from_fn(l, |x| x)
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

    pub fn fix_points(&self) -> Vec<Elem> {
        (0..self.len()).filter(|&x| self.image[x] == x).collect()
    }

    /// The sorted, deduplicated image set `d(L)`.
    pub fn range(&self) -> Vec<Elem> {
        let mut r = self.image.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// `d ⪯ d'`: pointwise `d(x) <= d'(x)`.
    pub fn precedes(&self, other: &OperatorMap, l: &FinLattice) -> bool {
        self.image.iter().zip(&other.image).all(|(&a, &b)| l.leq(a, b))
    }

    /// `x ↦ d(x) ∨ d'(x)`
    pub fn pointwise_join(&self, other: &OperatorMap, l: &FinLattice) -> OperatorMap {
        OperatorMap { image: self.image.iter().zip(&other.image).map(|(&a, &b)| l.join(a, b)).collect() }
    }

    /// `x ↦ d(x) ∧ d'(x)`
    pub fn pointwise_meet(&self, other: &OperatorMap, l: &FinLattice) -> OperatorMap {
        OperatorMap { image: self.image.iter().zip(&other.image).map(|(&a, &b)| l.meet(a, b)).collect() }
    }

    /// `x ↦ x ∧ (d(1) ∨ d'(1))`
    pub fn cup(&self, other: &OperatorMap, l: &FinLattice) -> OperatorMap {
        let t = l.join(self.apply(l.top()), other.apply(l.top()));
        OperatorMap::from_fn(l, |x| l.meet(x, t))
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &OperatorMap) -> OperatorMap {
        OperatorMap { image: other.image.iter().map(|&x| self.image[x]).collect() }
    }
}

/// Whether the Leibniz identity holds for every ordered pair `(x, y)`.
pub fn is_derivation(l: &FinLattice, op: &OperatorMap) -> bool {
    op.len() == l.len()
        && op.image.iter().all(|&y| y < l.len())
        && l.elements().all(|x| l.elements().all(|y| leibniz_holds(l, op, x, y)))
}

#[inline]
pub(crate) fn leibniz_holds(l: &FinLattice, op: &OperatorMap, x: Elem, y: Elem) -> bool {
    op.apply(l.meet(x, y)) == l.join(l.meet(op.apply(x), y), l.meet(x, op.apply(y)))
}

/// Checks the derivation axioms in order (range, `d(0) = 0`, contraction,
/// Leibniz) and reports the first one that fails.
pub fn check_derivation(l: &FinLattice, op: &OperatorMap) -> Result<(), Axiom> {
    if op.len() != l.len() {
        return Err(Axiom::Range { x: op.len().min(l.len()) });
    }
    if let Some(x) = l.elements().find(|&x| op.apply(x) >= l.len()) {
        return Err(Axiom::Range { x });
    }
    if op.apply(l.bottom()) != l.bottom() {
        return Err(Axiom::FixesBottom);
    }
    if let Some(x) = l.elements().find(|&x| !l.leq(op.apply(x), x)) {
        return Err(Axiom::Contraction { x });
    }
    for x in l.elements() {
        for y in l.elements() {
            if !leibniz_holds(l, op, x, y) {
                return Err(Axiom::Leibniz { x, y });
            }
        }
    }
    Ok(())
}

/// Monotone on every comparable pair.
pub fn is_monotone(l: &FinLattice, op: &OperatorMap) -> bool {
    l.elements().all(|x| l.elements().all(|y| !l.leq(x, y) || l.leq(op.apply(x), op.apply(y))))
}

/// `d = d_{d(1)}`, the inner map at its own top value.
pub fn is_inner(l: &FinLattice, op: &OperatorMap) -> bool {
    let t = op.apply(l.top());
    l.elements().all(|x| op.apply(x) == l.meet(x, t))
}

/// `d(x∧y) = x∧d(y)` for all `x, y`.
pub fn is_meet_translation(l: &FinLattice, op: &OperatorMap) -> bool {
    l.elements().all(|x| l.elements().all(|y| op.apply(l.meet(x, y)) == l.meet(x, op.apply(y))))
}

/// A validated derivation with its fix-point set, `d(1)` and isotone flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Derivation {
    map: OperatorMap,
    fix_points: Vec<Elem>,
    top_value: Elem,
    isotone: bool,
}

impl Derivation {
    pub fn new(l: &FinLattice, map: OperatorMap) -> Result<Self> {
        check_derivation(l, &map).map_err(Error::NotADerivation)?;
        Ok(Self::new_unchecked(l, map))
    }

    pub(crate) fn new_unchecked(l: &FinLattice, map: OperatorMap) -> Self {
        Derivation {
            fix_points: map.fix_points(),
            top_value: map.apply(l.top()),
            isotone: is_monotone(l, &map),
            map,
        }
    }

    pub fn from_image(l: &FinLattice, image: Vec<Elem>) -> Result<Self> {
        Self::new(l, OperatorMap::new(image))
    }

    pub fn zero(l: &FinLattice) -> Self {
        Self::new_unchecked(l, OperatorMap::zero(l))
    }

    pub fn identity(l: &FinLattice) -> Self {
        Self::new_unchecked(l, OperatorMap::identity(l))
    }

    pub fn map(&self) -> &OperatorMap {
        &self.map
    }

    pub fn into_map(self) -> OperatorMap {
        self.map
    }

    pub fn image(&self) -> &[Elem] {
        self.map.image()
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map.apply(x)
    }

    /// `Fix_d(L)`, which for a derivation equals its image.
    pub fn fix_points(&self) -> &[Elem] {
        &self.fix_points
    }

    /// `d(1)`
    pub fn top_value(&self) -> Elem {
        self.top_value
    }

    pub fn is_isotone(&self) -> bool {
        self.isotone
    }
}

/// The derivations of one lattice, sorted by image array.
#[derive(Clone, Debug)]
pub struct DerivationSet {
    lattice: FinLattice,
    items: Vec<Derivation>,
    index: HashMap<Vec<Elem>, usize>,
}

impl DerivationSet {
    pub(crate) fn from_sorted(lattice: FinLattice, mut items: Vec<Derivation>) -> Self {
        items.sort();
        items.dedup();
        let index = items.iter().enumerate().map(|(i, d)| (d.image().to_vec(), i)).collect();
        DerivationSet { lattice, items, index }
    }

    pub fn lattice(&self) -> &FinLattice {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Derivation> {
        self.items.iter()
    }

    pub fn get(&self, i: usize) -> &Derivation {
        &self.items[i]
    }

    pub fn as_slice(&self) -> &[Derivation] {
        &self.items
    }

    pub fn position(&self, image: &[Elem]) -> Option<usize> {
        self.index.get(image).copied()
    }

    pub fn contains(&self, op: &OperatorMap) -> bool {
        self.index.contains_key(op.image())
    }

    pub fn isotone(&self) -> impl Iterator<Item = &Derivation> {
        self.items.iter().filter(|d| d.is_isotone())
    }

    pub fn images(&self) -> Vec<Vec<Elem>> {
        self.items.iter().map(|d| d.image().to_vec()).collect()
    }
}

impl<'a> IntoIterator for &'a DerivationSet {
    type Item = &'a Derivation;
    type IntoIter = std::slice::Iter<'a, Derivation>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}
