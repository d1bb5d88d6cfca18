//! Isomorphism classes of derivations on a fixed lattice.
//!
//! `d ≅ d'` when some automorphism `f` satisfies `f∘d = d'∘f`, i.e.
//! `d' = f∘d∘f⁻¹`. Classes are the orbits of the conjugation action of
//! `Aut(L)` on the derivation set, computed by breadth-first search over a
//! generating set of the group.

use std::collections::VecDeque;

use serde::Serialize;

use crate::derivation::{is_derivation, DerivationSet, OperatorMap};
use crate::error::{Error, Result};
use crate::iso::{automorphisms, generators, Permutation};
use crate::lattice::FinLattice;

/// `f∘d∘f⁻¹`
pub fn conjugate(f: &Permutation, d: &OperatorMap) -> OperatorMap {
    let inv = f.inverse();
    OperatorMap::new((0..d.len()).map(|x| f.apply(d.apply(inv.apply(x)))).collect())
}

/// An automorphism `f` with `f∘d = d'∘f`, if any.
pub fn are_isomorphic_derivations(l: &FinLattice, d: &OperatorMap, d2: &OperatorMap) -> Result<Option<Permutation>> {
    if d.len() != l.len() || d2.len() != l.len() {
        return Err(Error::DifferentLattices);
    }
    Ok(automorphisms(l)
        .into_iter()
        .find(|f| l.elements().all(|x| f.apply(d.apply(x)) == d2.apply(f.apply(x)))))
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoClass {
    /// Indices into the derivation set, ascending; the first is the representative.
    pub members: Vec<usize>,
    /// `|Fix_d(L)|`, shared by all members.
    pub fix_size: usize,
    /// Whether `d(1) = 0`, shared by all members.
    pub top_is_zero: bool,
    /// `witnesses[i]` conjugates the representative onto `members[i]`.
    pub witnesses: Vec<Permutation>,
}

impl IsoClass {
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoClassification {
    pub classes: Vec<IsoClass>,
    pub group_order: usize,
}

impl IsoClassification {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing derivation `i`.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&i))
    }
}

pub fn classify(dset: &DerivationSet) -> Result<IsoClassification> {
    classify_with_group(dset, &automorphisms(dset.lattice()))
}

/// Orbit partition under a precomputed automorphism group.
pub fn classify_with_group(dset: &DerivationSet, group: &[Permutation]) -> Result<IsoClassification> {
    let l = dset.lattice();
    let gens = generators(group);
    let mut class_of = vec![usize::MAX; dset.len()];
    let mut classes = Vec::new();

    for seed in 0..dset.len() {
        if class_of[seed] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[seed] = id;
        let mut found = vec![(seed, Permutation::identity(l.len()))];
        let mut queue = VecDeque::from([(seed, Permutation::identity(l.len()))]);
        while let Some((i, f)) = queue.pop_front() {
            for g in &gens {
                let image = conjugate(g, dset.get(i).map());
                if !is_derivation(l, &image) {
                    return Err(Error::Internal(format!("conjugate {:?} is not a derivation", image.image())));
                }
                let j = dset
                    .position(image.image())
                    .ok_or_else(|| Error::Internal(format!("conjugate {:?} missing from the set", image.image())))?;
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    let h = g.compose(&f);
                    found.push((j, h.clone()));
                    queue.push_back((j, h));
                }
            }
        }
        found.sort_by_key(|(i, _)| *i);
        let rep = dset.get(seed);
        classes.push(IsoClass {
            fix_size: rep.fix_points().len(),
            top_is_zero: rep.top_value() == l.bottom(),
            members: found.iter().map(|(i, _)| *i).collect(),
            witnesses: found.into_iter().map(|(_, f)| f).collect(),
        });
    }
    classes.sort_by_key(|c| (c.fix_size, c.top_is_zero, c.members[0]));
    Ok(IsoClassification { classes, group_order: group.len() })
}

/// On `M_n`: equal fix-point counts and `d(1)`, `d'(1)` both zero or both nonzero.
pub fn mn_class_predicate(l: &FinLattice, d: &OperatorMap, d2: &OperatorMap) -> Result<bool> {
    if !l.is_diamond() {
        return Err(Error::WrongShape("expected M_n"));
    }
    if d.len() != l.len() || d2.len() != l.len() {
        return Err(Error::DifferentLattices);
    }
    let zero_top = |op: &OperatorMap| op.apply(l.top()) == l.bottom();
    Ok(d.fix_points().len() == d2.fix_points().len() && zero_top(d) == zero_top(d2))
}

/// Guaranteed minimum number of derivation classes on a lattice of this size:
/// exact for one and two elements, 4 from three elements, 5 from four.
pub fn class_lower_bound(l: &FinLattice) -> usize {
    match l.len() {
        0 | 1 => 1,
        2 => 2,
        3 => 4,
        _ => 5,
    }
}
