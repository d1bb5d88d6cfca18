//! Per-lattice structural checks, recomputed from scratch on every call.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::derivation::{enumerate_derivations, inner, is_derivation, is_inner, is_meet_translation, is_monotone, DerivationSet};
use crate::derposet::{
    build_do_poset, check_join_closed, check_meet_closed, chi_sublattice_check, distributivity_transfer,
    do_chain_criterion, family_join_closed, ido_lattice_iso, FinPoset,
};
use crate::lattice::FinLattice;

pub const STRUCTURAL_CHECKS: &[&str] = &[
    "derivation_axioms",
    "bounds",
    "isotone_count",
    "isotone_inner_meet_translation",
    "ido_iso",
    "chi_sublattice",
    "fix_intersection",
    "cup_is_inner",
    "distributive_join_closed",
    "distributive_family_join",
    "distributive_do_lattice",
    "distributive_poset_join_is_pointwise",
    "distributive_isotone_cup_is_join",
    "sublattice_chains_m4",
    "diamond_meet_closed",
    "do_chain_criterion",
    "distributivity_transfer",
];

/// Failure counts per check (all present, zero when passing or not
/// applicable) plus a few readable failure descriptions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StructuralFindings {
    pub failures: BTreeMap<String, usize>,
    pub details: Vec<String>,
}

impl StructuralFindings {
    fn new() -> Self {
        StructuralFindings {
            failures: STRUCTURAL_CHECKS.iter().map(|k| (k.to_string(), 0)).collect(),
            details: Vec::new(),
        }
    }

    fn fail(&mut self, check: &str, detail: impl FnOnce() -> String) {
        *self.failures.get_mut(check).expect("registered check") += 1;
        if self.details.len() < 8 {
            self.details.push(format!("{check}: {}", detail()));
        }
    }

    pub fn total_failures(&self) -> usize {
        self.failures.values().sum()
    }

    pub fn merge(&mut self, other: StructuralFindings) {
        for (k, v) in other.failures {
            *self.failures.entry(k).or_default() += v;
        }
        for d in other.details {
            if self.details.len() < 8 {
                self.details.push(d);
            }
        }
    }

    pub fn empty() -> Self {
        Self::new()
    }
}

pub fn structural_check(l: &FinLattice) -> StructuralFindings {
    let dset = enumerate_derivations(l);
    structural_check_with(&dset)
}

pub fn structural_check_with(dset: &DerivationSet) -> StructuralFindings {
    let l = dset.lattice();
    let mut f = StructuralFindings::new();
    let key = l.name().map(str::to_string).unwrap_or_else(|| crate::iso::canonical_key(l));

    for d in dset {
        let m = d.map();
        let contractive = l.elements().all(|x| l.leq(m.apply(x), x));
        let idempotent = l.elements().all(|x| m.apply(m.apply(x)) == m.apply(x));
        let range: BTreeSet<_> = m.range().into_iter().collect();
        let fix: BTreeSet<_> = d.fix_points().iter().copied().collect();
        if !(contractive && idempotent && range == fix && is_derivation(l, m)) {
            f.fail("derivation_axioms", || format!("{key}: {:?}", m.image()));
        }
        if !(m.apply(l.bottom()) == l.bottom() && l.elements().all(|x| l.leq(l.bottom(), m.apply(x)))) {
            f.fail("bounds", || format!("{key}: {:?}", m.image()));
        }
        let (iso, inn, mt) = (is_monotone(l, m), is_inner(l, m), is_meet_translation(l, m));
        if iso != inn || inn != mt || iso != d.is_isotone() {
            f.fail("isotone_inner_meet_translation", || format!("{key}: {:?}", m.image()));
        }
    }
    let isotone = dset.iter().filter(|d| is_monotone(l, d.map())).count();
    if isotone != l.len() {
        f.fail("isotone_count", || format!("{key}: {isotone} isotone derivations"));
    }
    if let Err(e) = ido_lattice_iso(dset) {
        f.fail("ido_iso", || format!("{key}: {e}"));
    }
    let chi = chi_sublattice_check(dset);
    if !chi.all_hold() {
        f.fail("chi_sublattice", || format!("{key}: {chi:?}"));
    }

    for a in dset {
        for b in dset {
            let meet = a.map().pointwise_meet(b.map(), l);
            let lhs: BTreeSet<_> = meet.fix_points().into_iter().collect();
            let rhs: BTreeSet<_> = a.fix_points().iter().filter(|x| b.fix_points().contains(x)).copied().collect();
            if lhs != rhs {
                f.fail("fix_intersection", || format!("{key}: {:?}, {:?}", a.image(), b.image()));
            }
            let cup = a.map().cup(b.map(), l);
            let expected = inner(l, l.join(a.top_value(), b.top_value()));
            if cup != *expected.map() || !is_derivation(l, &cup) {
                f.fail("cup_is_inner", || format!("{key}: {:?}, {:?}", a.image(), b.image()));
            }
        }
    }

    let poset: FinPoset = build_do_poset(dset);
    let do_lattice = poset.is_lattice();
    if l.is_distributive() {
        if !check_join_closed(dset) {
            f.fail("distributive_join_closed", || key.clone());
        }
        match family_join_closed(dset) {
            Ok(v) if v.closed => {}
            other => f.fail("distributive_family_join", || format!("{key}: {other:?}")),
        }
        if !do_lattice {
            f.fail("distributive_do_lattice", || key.clone());
        } else {
            for i in 0..dset.len() {
                for j in 0..dset.len() {
                    let pointwise = dset.get(i).map().pointwise_join(dset.get(j).map(), l);
                    let poset_join = poset.join(i, j).map(|k| dset.get(k).map().clone());
                    if poset_join.as_ref() != Some(&pointwise) {
                        f.fail("distributive_poset_join_is_pointwise", || format!("{key}: ({i}, {j})"));
                    }
                }
            }
        }
        let ido: Vec<_> = dset.iter().filter(|d| d.is_isotone()).collect();
        for a in &ido {
            for b in &ido {
                if a.map().cup(b.map(), l) != a.map().pointwise_join(b.map(), l) {
                    f.fail("distributive_isotone_cup_is_join", || format!("{key}: {:?}, {:?}", a.image(), b.image()));
                }
            }
        }
    }
    let is_m4 = l.len() == 4 && l.is_diamond();
    if (l.is_chain() || is_m4) && !(check_join_closed(dset) && check_meet_closed(dset)) {
        f.fail("sublattice_chains_m4", || key.clone());
    }
    if l.is_diamond() && !check_meet_closed(dset) {
        f.fail("diamond_meet_closed", || key.clone());
    }
    if do_chain_criterion(dset) != (l.is_chain() && l.len() <= 3) {
        f.fail("do_chain_criterion", || key.clone());
    }
    if do_lattice {
        match distributivity_transfer(dset) {
            Ok(t) if t.holds => {}
            other => f.fail("distributivity_transfer", || format!("{key}: {other:?}")),
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_lattices_pass() {
        for l in [
            FinLattice::chain(1).unwrap(),
            FinLattice::chain(5).unwrap(),
            FinLattice::diamond(5).unwrap(),
            FinLattice::pentagon(),
            FinLattice::boolean(3).unwrap(),
        ] {
            let f = structural_check(&l);
            assert_eq!(f.total_failures(), 0, "{:?}", f.details);
            assert_eq!(f.failures.len(), STRUCTURAL_CHECKS.len());
        }
    }
}
