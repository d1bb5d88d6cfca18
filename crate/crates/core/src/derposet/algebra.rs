//! Pointwise operations on derivations and closure / sublattice checks.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{build_do_poset, FinPoset};
use crate::derivation::{chi, is_derivation, is_monotone, DerivationSet, OperatorMap};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FinLattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpAlgebraResult {
    pub pointwise_join: OperatorMap,
    pub pointwise_meet: OperatorMap,
    pub cup: OperatorMap,
    pub compose: OperatorMap,
    pub join_in_do: bool,
    pub meet_in_do: bool,
    pub cup_in_do: bool,
    pub compose_in_do: bool,
}

/// `d ∨ d'`, `d ∧ d'`, `d ∪ d'` and `d ∘ d'`, each tested with [`is_derivation`].
pub fn op_algebra(l: &FinLattice, d: &OperatorMap, d2: &OperatorMap) -> Result<OpAlgebraResult> {
    if d.len() != l.len() || d2.len() != l.len() {
        return Err(Error::DifferentLattices);
    }
    let pointwise_join = d.pointwise_join(d2, l);
    let pointwise_meet = d.pointwise_meet(d2, l);
    let cup = d.cup(d2, l);
    let compose = d.compose(d2);
    Ok(OpAlgebraResult {
        join_in_do: is_derivation(l, &pointwise_join),
        meet_in_do: is_derivation(l, &pointwise_meet),
        cup_in_do: is_derivation(l, &cup),
        compose_in_do: is_derivation(l, &compose),
        pointwise_join,
        pointwise_meet,
        cup,
        compose,
    })
}

fn closure_failure(dset: &DerivationSet, op: impl Fn(&OperatorMap, &OperatorMap) -> OperatorMap + Sync) -> Option<(usize, usize)> {
    let l = dset.lattice();
    let m = dset.len();
    (0..m)
        .into_par_iter()
        .filter_map(|i| {
            (i + 1..m).find_map(|j| {
                let c = op(dset.get(i).map(), dset.get(j).map());
                (!is_derivation(l, &c)).then_some((i, j))
            })
        })
        .min()
}

/// The first pair (by index) whose pointwise join is not a derivation.
pub fn join_closure_failure(dset: &DerivationSet) -> Option<(usize, usize)> {
    let l = dset.lattice();
    closure_failure(dset, |a, b| a.pointwise_join(b, l))
}

/// The first pair (by index) whose pointwise meet is not a derivation.
pub fn meet_closure_failure(dset: &DerivationSet) -> Option<(usize, usize)> {
    let l = dset.lattice();
    closure_failure(dset, |a, b| a.pointwise_meet(b, l))
}

pub fn check_join_closed(dset: &DerivationSet) -> bool {
    join_closure_failure(dset).is_none()
}

pub fn check_meet_closed(dset: &DerivationSet) -> bool {
    meet_closure_failure(dset).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyMode {
    /// Every subset enumerated.
    Exhaustive,
    /// The set of all subset joins built as a closure; exact.
    Closure,
    /// Pairs, triples and random subsets only; a `true` verdict is not a proof.
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyVerdict {
    pub closed: bool,
    pub mode: FamilyMode,
    /// Subsets (or closure elements) examined.
    pub checked: u64,
    /// Indices of a family whose join is not a derivation.
    pub counterexample: Option<Vec<usize>>,
}

const EXHAUSTIVE_LIMIT: usize = 20;
const CLOSURE_CAP: usize = 1 << 20;
const RANDOM_SAMPLES: usize = 1 << 16;

/// Whether the pointwise join of every family of derivations is a derivation.
/// The empty family joins to `0_L`.
pub fn family_join_closed(dset: &DerivationSet) -> Result<FamilyVerdict> {
    let l = dset.lattice();
    if !l.is_distributive() {
        return Err(Error::Precondition("family joins are only examined on distributive lattices"));
    }
    if dset.len() <= EXHAUSTIVE_LIMIT {
        return Ok(family_exhaustive(dset));
    }
    Ok(family_closure(dset).unwrap_or_else(|| family_sampled(dset)))
}

fn family_exhaustive(dset: &DerivationSet) -> FamilyVerdict {
    let l = dset.lattice();
    let mut verdict = FamilyVerdict { closed: true, mode: FamilyMode::Exhaustive, checked: 0, counterexample: None };
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut chosen = Vec::new();

    fn go(
        i: usize,
        acc: &OperatorMap,
        dset: &DerivationSet,
        l: &FinLattice,
        chosen: &mut Vec<usize>,
        seen: &mut HashSet<Vec<Elem>>,
        verdict: &mut FamilyVerdict,
    ) {
        if verdict.counterexample.is_some() {
            return;
        }
        if i == dset.len() {
            verdict.checked += 1;
            if seen.insert(acc.image().to_vec()) && !is_derivation(l, acc) {
                verdict.closed = false;
                verdict.counterexample = Some(chosen.clone());
            }
            return;
        }
        go(i + 1, acc, dset, l, chosen, seen, verdict);
        chosen.push(i);
        let next = acc.pointwise_join(dset.get(i).map(), l);
        go(i + 1, &next, dset, l, chosen, seen, verdict);
        chosen.pop();
    }

    go(0, &OperatorMap::zero(l), dset, l, &mut chosen, &mut seen, &mut verdict);
    verdict
}

/// Builds `{⋁S}` as `S ↦ S ∪ {s ∨ d}` one derivation at a time, remembering
/// one generating family per join. `None` when the closure outgrows the cap.
fn family_closure(dset: &DerivationSet) -> Option<FamilyVerdict> {
    let l = dset.lattice();
    let zero = OperatorMap::zero(l);
    let mut families: Vec<(OperatorMap, Vec<usize>)> = vec![(zero.clone(), Vec::new())];
    let mut seen: HashSet<OperatorMap> = HashSet::from([zero]);
    for (i, d) in dset.iter().enumerate() {
        let fresh: Vec<(OperatorMap, Vec<usize>)> = families
            .iter()
            .filter_map(|(s, fam)| {
                let j = s.pointwise_join(d.map(), l);
                (!seen.contains(&j)).then(|| {
                    let mut f = fam.clone();
                    f.push(i);
                    (j, f)
                })
            })
            .collect();
        for (j, f) in fresh {
            if seen.insert(j.clone()) {
                families.push((j, f));
            }
        }
        if families.len() > CLOSURE_CAP {
            return None;
        }
    }
    let failure = families.par_iter().find_first(|(s, _)| !is_derivation(l, s)).map(|(_, f)| f.clone());
    Some(FamilyVerdict {
        closed: failure.is_none(),
        mode: FamilyMode::Closure,
        checked: families.len() as u64,
        counterexample: failure,
    })
}

fn family_sampled(dset: &DerivationSet) -> FamilyVerdict {
    let l = dset.lattice();
    let m = dset.len();
    let mut checked = 0u64;
    let join_of = |fam: &[usize]| {
        fam.iter().fold(OperatorMap::zero(l), |acc, &i| acc.pointwise_join(dset.get(i).map(), l))
    };
    let test = |fam: Vec<usize>, checked: &mut u64| -> Option<Vec<usize>> {
        *checked += 1;
        (!is_derivation(l, &join_of(&fam))).then_some(fam)
    };
    for i in 0..m {
        for j in i + 1..m {
            if let Some(f) = test(vec![i, j], &mut checked) {
                return FamilyVerdict { closed: false, mode: FamilyMode::Sampled, checked, counterexample: Some(f) };
            }
            for k in j + 1..m {
                if let Some(f) = test(vec![i, j, k], &mut checked) {
                    return FamilyVerdict { closed: false, mode: FamilyMode::Sampled, checked, counterexample: Some(f) };
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..RANDOM_SAMPLES {
        let fam: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
        if let Some(f) = test(fam, &mut checked) {
            return FamilyVerdict { closed: false, mode: FamilyMode::Sampled, checked, counterexample: Some(f) };
        }
    }
    FamilyVerdict { closed: true, mode: FamilyMode::Sampled, checked, counterexample: None }
}

/// The table `d ↦ d(1)` on isotone derivations, as (derivation index, element).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdoIso {
    pub pairs: Vec<(usize, Elem)>,
}

impl IdoIso {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The isotone derivation sent to `u`.
    pub fn preimage(&self, u: Elem) -> Option<usize> {
        self.pairs.iter().find(|&&(_, v)| v == u).map(|&(i, _)| i)
    }
}

/// Verifies that `d ↦ d(1)` is a bijection from the isotone derivations onto
/// `L` carrying `∪` to `∨`, `∧` to `∧` and `⪯` to `≤`.
pub fn ido_lattice_iso(dset: &DerivationSet) -> Result<IdoIso> {
    let l = dset.lattice();
    let ido: Vec<usize> = (0..dset.len()).filter(|&i| is_monotone(l, dset.get(i).map())).collect();
    let pairs: Vec<(usize, Elem)> = ido.iter().map(|&i| (i, dset.get(i).top_value())).collect();
    let targets: BTreeSet<Elem> = pairs.iter().map(|&(_, u)| u).collect();
    if targets.len() != pairs.len() {
        return Err(Error::IsoFailure("d ↦ d(1) is not injective on isotone derivations".into()));
    }
    if targets.len() != l.len() {
        return Err(Error::IsoFailure(format!("{} isotone derivations for {} elements", pairs.len(), l.len())));
    }
    let iso = IdoIso { pairs };
    for &(i, u) in &iso.pairs {
        let d = dset.get(i).map();
        for &(j, v) in &iso.pairs {
            let e = dset.get(j).map();
            let cup = d.cup(e, l);
            let meet = d.pointwise_meet(e, l);
            let cup_ok = is_derivation(l, &cup) && is_monotone(l, &cup) && cup.apply(l.top()) == l.join(u, v);
            let meet_ok = is_derivation(l, &meet) && is_monotone(l, &meet) && meet.apply(l.top()) == l.meet(u, v);
            if !cup_ok || !meet_ok {
                return Err(Error::IsoFailure(format!("operations not transported for derivations {i} and {j}")));
            }
            if d.precedes(e, l) != l.leq(u, v) {
                return Err(Error::IsoFailure(format!("order not transported for derivations {i} and {j}")));
            }
        }
    }
    Ok(iso)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiReport {
    /// `χ^(u) ∨ χ^(v) = χ^(u∨v)` for all `u, v`.
    pub join_preserved: bool,
    /// `χ^(u) ∧ χ^(v) = χ^(u∧v)` for all `u, v`.
    pub meet_preserved: bool,
    pub injective: bool,
    /// `u <= v` iff `χ^(u) ⪯ χ^(v)`.
    pub order_embedding: bool,
    /// Every `χ^(u)` passes [`is_derivation`].
    pub all_derivations: bool,
    /// `χ^(u) ∘ χ^(v) = χ^(v)` whenever `v ≠ 1`.
    pub compose_law: bool,
    /// Upward closed and meet closed in `DO(L)`; `None` when `DO(L)` is not a lattice.
    pub filter: Option<bool>,
}

impl ChiReport {
    pub fn all_hold(&self) -> bool {
        self.join_preserved
            && self.meet_preserved
            && self.injective
            && self.order_embedding
            && self.all_derivations
            && self.compose_law
            && self.filter != Some(false)
    }
}

pub fn chi_sublattice_check(dset: &DerivationSet) -> ChiReport {
    let l = dset.lattice();
    let chis: Vec<OperatorMap> = l.elements().map(|u| chi(l, u).into_map()).collect();
    let mut report = ChiReport {
        join_preserved: true,
        meet_preserved: true,
        injective: chis.iter().collect::<HashSet<_>>().len() == chis.len(),
        order_embedding: true,
        all_derivations: chis.iter().all(|c| is_derivation(l, c)),
        compose_law: true,
        filter: None,
    };
    for u in l.elements() {
        for v in l.elements() {
            let (a, b) = (&chis[u], &chis[v]);
            report.join_preserved &= a.pointwise_join(b, l) == chis[l.join(u, v)];
            report.meet_preserved &= a.pointwise_meet(b, l) == chis[l.meet(u, v)];
            report.order_embedding &= a.precedes(b, l) == l.leq(u, v);
            if v != l.top() {
                report.compose_law &= a.compose(b) == *b;
            }
        }
    }

    let poset = build_do_poset(dset);
    if poset.is_lattice() {
        let members: Vec<usize> = chis.iter().filter_map(|c| dset.position(c.image())).collect();
        let in_chi = |i: usize| members.contains(&i);
        let upward = members.len() == chis.len()
            && members.iter().all(|&c| (0..dset.len()).all(|d| !poset.leq(c, d) || in_chi(d)));
        let meet_closed = members
            .iter()
            .all(|&a| members.iter().all(|&b| poset.meet(a, b).is_some_and(in_chi)));
        report.filter = Some(upward && meet_closed);
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub do_distributive: bool,
    pub lattice_distributive: bool,
    /// `do_distributive ⇒ lattice_distributive`
    pub holds: bool,
    /// Derivation indices `(a, b, c)` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)` in the DO lattice.
    pub do_violation: Option<(usize, usize, usize)>,
}

/// Compares distributivity of the `DO(L)` lattice with that of `L`.
pub fn distributivity_transfer(dset: &DerivationSet) -> Result<TransferReport> {
    let poset: FinPoset = build_do_poset(dset);
    if !poset.is_lattice() {
        return Err(Error::PosetNotLattice);
    }
    let do_lattice = poset.to_lattice()?;
    let do_violation = do_lattice.distributivity_violation();
    let do_distributive = do_violation.is_none();
    let lattice_distributive = dset.lattice().is_distributive();
    Ok(TransferReport {
        do_distributive,
        lattice_distributive,
        holds: !do_distributive || lattice_distributive,
        do_violation,
    })
}

/// Whether `(DO(L), ⪯)` is a chain.
pub fn do_chain_criterion(dset: &DerivationSet) -> bool {
    build_do_poset(dset).is_chain()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{enumerate_derivations, inner, lambda_cut_map};

    #[test]
    fn inner_pairs() {
        let b8 = FinLattice::boolean(3).unwrap();
        for u in b8.elements() {
            for v in b8.elements() {
                let r = op_algebra(&b8, inner(&b8, u).map(), inner(&b8, v).map()).unwrap();
                assert_eq!(r.cup, *inner(&b8, b8.join(u, v)).map());
                assert_eq!(r.compose, *inner(&b8, b8.meet(u, v)).map());
                assert_eq!(r.pointwise_meet, r.compose);
                assert!(r.cup_in_do && r.compose_in_do && r.meet_in_do);
            }
        }
    }

    #[test]
    fn m5_pointwise_join_fails() {
        let m5 = FinLattice::diamond(5).unwrap();
        let r = op_algebra(&m5, inner(&m5, 1).map(), inner(&m5, 3).map()).unwrap();
        assert_eq!(r.pointwise_join.apply(4), 4);
        assert_eq!(r.pointwise_join.apply(2), 0);
        assert!(!r.join_in_do);
        assert!(r.cup_in_do);
    }

    #[test]
    fn b8_cut_composition() {
        let b8 = FinLattice::boolean(3).unwrap();
        let (u, v, a) = (b8.find_label("u").unwrap(), b8.find_label("v").unwrap(), b8.find_label("a").unwrap());
        let r = op_algebra(&b8, &lambda_cut_map(&b8, u), &lambda_cut_map(&b8, v)).unwrap();
        assert_eq!(r.compose, r.pointwise_meet);
        assert_eq!(r.compose, lambda_cut_map(&b8, a));
        assert!(!r.compose_in_do && !r.meet_in_do);
    }

    #[test]
    fn closure_checks() {
        let c5 = enumerate_derivations(&FinLattice::chain(5).unwrap());
        assert!(check_join_closed(&c5) && check_meet_closed(&c5));
        let m5 = enumerate_derivations(&FinLattice::diamond(5).unwrap());
        assert!(check_meet_closed(&m5));
        assert!(!check_join_closed(&m5));
        let m4 = enumerate_derivations(&FinLattice::diamond(4).unwrap());
        assert!(check_meet_closed(&m4) && check_join_closed(&m4));
    }

    #[test]
    fn family_joins() {
        let c4 = enumerate_derivations(&FinLattice::chain(4).unwrap());
        let v = family_join_closed(&c4).unwrap();
        assert_eq!((v.closed, v.mode, v.checked), (true, FamilyMode::Exhaustive, 256));
        let b4 = enumerate_derivations(&FinLattice::boolean(2).unwrap());
        assert!(family_join_closed(&b4).unwrap().closed);
        let c6 = enumerate_derivations(&FinLattice::chain(6).unwrap());
        let v = family_join_closed(&c6).unwrap();
        assert_eq!((v.closed, v.mode), (true, FamilyMode::Closure));
        let m5 = enumerate_derivations(&FinLattice::diamond(5).unwrap());
        assert!(matches!(family_join_closed(&m5), Err(Error::Precondition(_))));
    }

    #[test]
    fn sampled_mode_finds_nothing_on_chains() {
        let c6 = enumerate_derivations(&FinLattice::chain(6).unwrap());
        let v = family_sampled(&c6);
        assert!(v.closed);
        assert_eq!(v.mode, FamilyMode::Sampled);
    }

    #[test]
    fn ido_isomorphisms() {
        let c3 = enumerate_derivations(&FinLattice::chain(3).unwrap());
        let iso = ido_lattice_iso(&c3).unwrap();
        assert_eq!(iso.pairs, vec![(0, 0), (2, 1), (3, 2)]);
        assert_eq!(ido_lattice_iso(&enumerate_derivations(&FinLattice::diamond(5).unwrap())).unwrap().len(), 5);
        assert_eq!(ido_lattice_iso(&enumerate_derivations(&FinLattice::boolean(3).unwrap())).unwrap().len(), 8);
    }

    #[test]
    fn chi_reports() {
        for l in [FinLattice::chain(4).unwrap(), FinLattice::diamond(5).unwrap(), FinLattice::pentagon()] {
            let r = chi_sublattice_check(&enumerate_derivations(&l));
            assert!(r.all_hold(), "{r:?}");
            assert_eq!(r.filter, Some(true));
        }
    }

    #[test]
    fn transfer_and_chain_criterion() {
        let m5 = enumerate_derivations(&FinLattice::diamond(5).unwrap());
        let t = distributivity_transfer(&m5).unwrap();
        assert!(t.holds && !t.do_distributive && t.do_violation.is_some());
        let b4 = enumerate_derivations(&FinLattice::boolean(2).unwrap());
        let t = distributivity_transfer(&b4).unwrap();
        assert!(t.do_distributive && t.lattice_distributive);
        for n in 1..=6 {
            let c = FinLattice::chain(n).unwrap();
            assert_eq!(do_chain_criterion(&enumerate_derivations(&c)), n <= 3);
        }
        assert!(!do_chain_criterion(&enumerate_derivations(&FinLattice::diamond(4).unwrap())));
    }
}
