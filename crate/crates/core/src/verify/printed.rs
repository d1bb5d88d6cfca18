//! Tabulated derivations of C_3, C_4 and M_4, compared against enumeration.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::derivation::enumerate_derivations;
use crate::derposet::build_do_poset;
use crate::lattice::{Elem, FinLattice};

/// A small lattice with its nontrivial derivations named and tabulated.
/// `0` and `id` are implicit.
pub struct PrintedExample {
    pub name: &'static str,
    pub lattice: FinLattice,
    pub maps: Vec<(&'static str, Vec<Elem>)>,
    pub hasse: Vec<(&'static str, &'static str)>,
    pub isotone: Vec<&'static str>,
    pub chi: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrintedOutcome {
    pub maps_match: bool,
    pub hasse_match: bool,
    pub isotone_match: bool,
    pub chi_match: bool,
}

impl PrintedOutcome {
    pub fn all_match() -> Self {
        PrintedOutcome { maps_match: true, hasse_match: true, isotone_match: true, chi_match: true }
    }
}

pub fn printed_examples() -> Vec<PrintedExample> {
    vec![
        PrintedExample {
            name: "C_3",
            lattice: FinLattice::chain(3).expect("chain"),
            maps: vec![("phi1", vec![0, 1, 0]), ("phi2", vec![0, 1, 1])],
            hasse: vec![("0", "phi1"), ("phi1", "phi2"), ("phi2", "id")],
            isotone: vec!["0", "id", "phi2"],
            chi: vec!["phi1", "phi2", "id"],
        },
        PrintedExample {
            name: "C_4",
            lattice: FinLattice::chain(4).expect("chain"),
            maps: vec![
                ("x1", vec![0, 1, 0, 0]),
                ("x2", vec![0, 1, 1, 0]),
                ("x3", vec![0, 1, 1, 1]),
                ("x4", vec![0, 1, 2, 0]),
                ("x5", vec![0, 1, 2, 1]),
                ("x6", vec![0, 1, 2, 2]),
            ],
            hasse: vec![
                ("0", "x1"),
                ("x1", "x2"),
                ("x2", "x3"),
                ("x2", "x4"),
                ("x3", "x5"),
                ("x4", "x5"),
                ("x5", "x6"),
                ("x6", "id"),
            ],
            isotone: vec!["0", "id", "x3", "x6"],
            chi: vec!["x4", "x5", "x6", "id"],
        },
        PrintedExample {
            name: "M_4",
            lattice: FinLattice::diamond(4).expect("diamond"),
            maps: vec![
                ("y1", vec![0, 1, 0, 0]),
                ("y2", vec![0, 1, 0, 1]),
                ("y3", vec![0, 0, 2, 0]),
                ("y4", vec![0, 0, 2, 2]),
                ("y5", vec![0, 1, 2, 0]),
                ("y6", vec![0, 1, 2, 1]),
                ("y7", vec![0, 1, 2, 2]),
            ],
            hasse: vec![
                ("y6", "id"),
                ("y7", "id"),
                ("y2", "y6"),
                ("y5", "y6"),
                ("y5", "y7"),
                ("y4", "y7"),
                ("y1", "y2"),
                ("y1", "y5"),
                ("y3", "y5"),
                ("y3", "y4"),
                ("0", "y1"),
                ("0", "y3"),
            ],
            isotone: vec!["0", "id", "y2", "y4"],
            chi: vec!["y5", "y6", "y7", "id"],
        },
    ]
}

pub fn check_printed(ex: &PrintedExample) -> PrintedOutcome {
    let l = &ex.lattice;
    let dset = enumerate_derivations(l);
    let mut named: Vec<(&str, Vec<Elem>)> = ex.maps.clone();
    named.push(("0", vec![l.bottom(); l.len()]));
    named.push(("id", l.elements().collect()));

    let listed: BTreeSet<Vec<Elem>> = named.iter().map(|(_, m)| m.clone()).collect();
    let found: BTreeSet<Vec<Elem>> = dset.images().into_iter().collect();
    let maps_match = listed.len() == named.len() && listed == found;

    let name_of = |i: usize| named.iter().find(|(_, m)| m.as_slice() == dset.get(i).image()).map(|(n, _)| *n);
    let poset = build_do_poset(&dset);
    let edges: Option<BTreeSet<(&str, &str)>> =
        poset.covers().into_iter().map(|(a, b)| Some((name_of(a)?, name_of(b)?))).collect();
    let hasse_match = maps_match && edges == Some(ex.hasse.iter().copied().collect());

    let names = |pred: &dyn Fn(usize) -> bool| -> Option<BTreeSet<&str>> {
        (0..dset.len()).filter(|&i| pred(i)).map(name_of).collect()
    };
    let isotone_match =
        maps_match && names(&|i| dset.get(i).is_isotone()) == Some(ex.isotone.iter().copied().collect());
    let chi_match = maps_match
        && names(&|i| {
            let d = dset.get(i);
            l.elements().all(|x| x == l.top() || d.apply(x) == x)
        }) == Some(ex.chi.iter().copied().collect());

    PrintedOutcome { maps_match, hasse_match, isotone_match, chi_match }
}
