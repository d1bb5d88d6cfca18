//! Explicitly defined derivations: inner maps, top redirects, up-set collapses,
//! down-set cuts and chain bands.

use super::{Derivation, OperatorMap};
use crate::error::{Error, Result};
use crate::lattice::{Elem, FinLattice};

/// `d_u(x) = x ∧ u`
pub fn inner(l: &FinLattice, u: Elem) -> Derivation {
    Derivation::new(l, OperatorMap::from_fn(l, |x| l.meet(x, u))).expect("inner maps are derivations")
}

/// `χ^(u)`: identity except `1 ↦ u`.
pub fn chi(l: &FinLattice, u: Elem) -> Derivation {
    let map = OperatorMap::from_fn(l, |x| if x == l.top() { u } else { x });
    Derivation::new(l, map).expect("top redirects are derivations")
}

/// `η^(u)`: `x ↦ u` when `u <= x`, identity elsewhere.
pub fn eta(l: &FinLattice, u: Elem) -> Derivation {
    let map = OperatorMap::from_fn(l, |x| if l.leq(u, x) { u } else { x });
    Derivation::new(l, map).expect("up-set collapses are derivations")
}

/// The raw map `λ^(u)`: `x ↦ x` if `x <= u`, else `0`.
pub fn lambda_cut_map(l: &FinLattice, u: Elem) -> OperatorMap {
    OperatorMap::from_fn(l, |x| if l.leq(x, u) { x } else { l.bottom() })
}

/// For all `x, y ≰ u`: `x∧y ≰ u` or `x∧y = 0`.
pub fn cut_condition(l: &FinLattice, u: Elem) -> bool {
    l.elements().filter(|&x| !l.leq(x, u)).all(|x| {
        l.elements().filter(|&y| !l.leq(y, u)).all(|y| {
            let m = l.meet(x, y);
            !l.leq(m, u) || m == l.bottom()
        })
    })
}

/// `λ^(u)` when [`cut_condition`] holds, `None` otherwise.
pub fn lambda_cut(l: &FinLattice, u: Elem) -> Option<Derivation> {
    cut_condition(l, u)
        .then(|| Derivation::new(l, lambda_cut_map(l, u)).expect("the cut condition implies the Leibniz identity"))
}

/// The raw map `λ^(v;u)`: `x ↦ x` if `x <= u`, else `v`. Defined on any lattice.
pub fn lambda_band_map(l: &FinLattice, v: Elem, u: Elem) -> OperatorMap {
    OperatorMap::from_fn(l, |x| if l.leq(x, u) { x } else { v })
}

/// `λ^(v;u)` on a chain, for `v <= u`.
pub fn lambda_band(l: &FinLattice, v: Elem, u: Elem) -> Result<Derivation> {
    if !l.is_chain() {
        return Err(Error::NotAChain);
    }
    if !l.leq(v, u) {
        return Err(Error::BadPair { lower: v, upper: u });
    }
    Ok(Derivation::new(l, lambda_band_map(l, v, u)).expect("band maps on chains are derivations"))
}

/// `d` with its value at `1` lowered to `u <= d(1)`.
pub fn lower_top(l: &FinLattice, d: &Derivation, u: Elem) -> Result<Derivation> {
    if !l.leq(u, d.top_value()) {
        return Err(Error::BadBound { value: u, top_value: d.top_value() });
    }
    let map = OperatorMap::from_fn(l, |x| if x == l.top() { u } else { d.apply(x) });
    Ok(Derivation::new(l, map).expect("lowering d(1) keeps a derivation"))
}
