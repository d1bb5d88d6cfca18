//! Per-lattice probes of the DO poset and the catalog-wide collision scan.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{build_do_poset, BoundKind, FinPoset};
use crate::catalog::enumerate_lattices;
use crate::derivation::{enumerate_derivations, DerivationSet};
use crate::error::Result;
use crate::iso::{are_isomorphic, canonical_key};
use crate::lattice::{Elem, FinLattice};

/// A failing pair of derivations with its incomparable minimal upper
/// (or maximal lower) bounds, all given as image arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub kind: BoundKind,
    pub pair: [Vec<Elem>; 2],
    pub bounds: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub order: usize,
    pub canonical_key: String,
    pub do_size: usize,
    pub do_is_lattice: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    pub do_poset_canonical_key: String,
}

fn probe_with(l: &FinLattice, dset: &DerivationSet, poset: &FinPoset) -> ProbeReport {
    let image = |i: usize| dset.get(i).image().to_vec();
    let certificate = poset.check_lattice().err().map(|c| CertificateReport {
        kind: c.kind,
        pair: [image(c.pair.0), image(c.pair.1)],
        bounds: c.bounds.into_iter().map(image).collect(),
    });
    ProbeReport {
        order: l.len(),
        canonical_key: canonical_key(l),
        do_size: dset.len(),
        do_is_lattice: certificate.is_none(),
        certificate,
        do_poset_canonical_key: poset.canonical_key(),
    }
}

pub fn conjecture_probe(l: &FinLattice) -> ProbeReport {
    let dset = enumerate_derivations(l);
    probe_with(l, &dset, &build_do_poset(&dset))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairOutcome {
    pub a: String,
    pub b: String,
    pub posets_isomorphic: bool,
    pub lattices_isomorphic: bool,
}

impl PairOutcome {
    /// Isomorphic DO posets over non-isomorphic lattices.
    pub fn is_counterexample(&self) -> bool {
        self.posets_isomorphic && !self.lattices_isomorphic
    }
}

/// Lattices sharing a DO-poset key, with exact pairwise outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub do_poset_canonical_key: String,
    pub lattices: Vec<String>,
    pub pairs: Vec<PairOutcome>,
}

/// Groups lattices by DO-poset key and, inside each group, decides poset
/// isomorphism exactly and lattice isomorphism separately.
pub fn collision_scan(lattices: &[FinLattice]) -> Vec<Collision> {
    let probes: Vec<(String, FinPoset)> = lattices
        .par_iter()
        .map(|l| {
            let poset = build_do_poset(&enumerate_derivations(l));
            (poset.canonical_key(), poset)
        })
        .collect();
    collisions_from(lattices, &probes)
}

fn collisions_from(lattices: &[FinLattice], probes: &[(String, FinPoset)]) -> Vec<Collision> {
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (key, _)) in probes.iter().enumerate() {
        groups.entry(key.as_str()).or_default().push(i);
    }
    groups
        .into_iter()
        .filter(|(_, members)| members.len() > 1)
        .map(|(key, members)| {
            let mut pairs = Vec::new();
            for (x, &i) in members.iter().enumerate() {
                for &j in &members[x + 1..] {
                    pairs.push(PairOutcome {
                        a: canonical_key(&lattices[i]),
                        b: canonical_key(&lattices[j]),
                        posets_isomorphic: probes[i].1.isomorphism(&probes[j].1).is_some(),
                        lattices_isomorphic: are_isomorphic(&lattices[i], &lattices[j]).is_some(),
                    });
                }
            }
            Collision {
                do_poset_canonical_key: key.to_string(),
                lattices: members.iter().map(|&i| canonical_key(&lattices[i])).collect(),
                pairs,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSummary {
    pub order: usize,
    pub lattices: usize,
    pub do_lattices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub max_order: usize,
    pub lattices_checked: usize,
    pub per_order: Vec<OrderSummary>,
    /// Probes whose DO poset is not a lattice, verbatim.
    pub non_lattice: Vec<ProbeReport>,
    pub collisions: Vec<Collision>,
    /// Pairs with isomorphic DO posets but non-isomorphic lattices.
    pub determination_counterexamples: Vec<PairOutcome>,
    pub lattices: Vec<ProbeReport>,
}

impl ConjectureReport {
    /// No non-lattice DO poset and no determination counterexample.
    pub fn consistent(&self) -> bool {
        self.non_lattice.is_empty() && self.determination_counterexamples.is_empty()
    }
}

/// Probes every catalog lattice of order `1..=max_order`. Runs on the current
/// rayon pool; output order follows the catalog.
pub fn run_conjecture(max_order: usize) -> Result<ConjectureReport> {
    let mut all = Vec::new();
    let mut per_order = Vec::new();
    for n in 1..=max_order {
        let cat = enumerate_lattices(n)?;
        per_order.push(OrderSummary { order: n, lattices: cat.len(), do_lattices: 0 });
        all.extend(cat.into_lattices());
    }
    let probed: Vec<(ProbeReport, FinPoset)> = all
        .par_iter()
        .map(|l| {
            let dset = enumerate_derivations(l);
            let poset = build_do_poset(&dset);
            (probe_with(l, &dset, &poset), poset)
        })
        .collect();
    for (p, _) in &probed {
        if p.do_is_lattice {
            per_order[p.order - 1].do_lattices += 1;
        }
    }
    let keyed: Vec<(String, FinPoset)> =
        probed.iter().map(|(p, poset)| (p.do_poset_canonical_key.clone(), poset.clone())).collect();
    let collisions = collisions_from(&all, &keyed);
    let determination_counterexamples =
        collisions.iter().flat_map(|c| c.pairs.iter().filter(|p| p.is_counterexample()).cloned()).collect();
    let lattices: Vec<ProbeReport> = probed.into_iter().map(|(p, _)| p).collect();
    Ok(ConjectureReport {
        max_order,
        lattices_checked: lattices.len(),
        per_order,
        non_lattice: lattices.iter().filter(|p| !p.do_is_lattice).cloned().collect(),
        collisions,
        determination_counterexamples,
        lattices,
    })
}
