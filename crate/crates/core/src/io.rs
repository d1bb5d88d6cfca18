//! JSON lattice files and DOT export of Hasse diagrams.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{Elem, FinLattice};

/// On-disk lattice: `{"n": 5, "covers": [[0,1], …], "name": "M_5"}`.
///
/// `labels` is an optional extension naming each element for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    pub covers: Vec<[Elem; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl LatticeJson {
    pub fn from_lattice(l: &FinLattice) -> Self {
        let default_labels = l.labels().iter().enumerate().all(|(i, s)| *s == i.to_string());
        LatticeJson {
            n: l.len(),
            covers: l.covers().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            name: l.name().map(str::to_string),
            labels: (!default_labels).then(|| l.labels().to_vec()),
        }
    }

    pub fn to_lattice(&self) -> Result<FinLattice> {
        let covers: Vec<(Elem, Elem)> = self.covers.iter().map(|&[lo, hi]| (lo, hi)).collect();
        let mut l = FinLattice::from_covers(self.n, &covers)?;
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(crate::Error::BadSize(format!("{} labels for {} elements", labels.len(), self.n)));
            }
            l = l.with_labels(labels.clone());
        }
        if let Some(name) = &self.name {
            l = l.with_name(name.clone());
        }
        Ok(l)
    }
}

pub fn lattice_from_json(text: &str) -> Result<FinLattice> {
    let parsed: LatticeJson = serde_json::from_str(text)?;
    parsed.to_lattice()
}

pub fn lattice_to_json(l: &FinLattice) -> String {
    serde_json::to_string(&LatticeJson::from_lattice(l)).expect("lattice serializes")
}

pub fn read_lattice(path: &Path) -> Result<FinLattice> {
    lattice_from_json(&std::fs::read_to_string(path)?)
}

/// Hasse diagram as a DOT digraph: edges run lower → upper and elements of
/// equal longest-path height share a rank.
pub fn lattice_to_dot(l: &FinLattice) -> String {
    let heights = l.heights();
    hasse_dot(
        l.name().unwrap_or("L"),
        &l.labels().iter().map(String::as_str).collect::<Vec<_>>(),
        l.covers(),
        &heights,
    )
}

pub(crate) fn hasse_dot(name: &str, labels: &[&str], covers: &[(usize, usize)], heights: &[usize]) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {:?} {{", name).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (x, label) in labels.iter().enumerate() {
        writeln!(out, "  {x} [label={:?}];", label).unwrap();
    }
    let max_height = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=max_height {
        let level: Vec<String> = (0..labels.len()).filter(|&x| heights[x] == h).map(|x| x.to_string()).collect();
        if !level.is_empty() {
            writeln!(out, "  {{ rank=same; {}; }}", level.join("; ")).unwrap();
        }
    }
    for &(lo, hi) in covers {
        writeln!(out, "  {lo} -> {hi};").unwrap();
    }
    out.push_str("}\n");
    out
}
