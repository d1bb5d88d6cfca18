//! All lattices of a given order, up to isomorphism.
//!
//! Order `n + 1` is generated from order `n`: every lattice of order at least
//! three has a coatom whose removal leaves a lattice, so each lattice of order
//! `n + 1` arises by adding a new coatom below the top of some lattice of
//! order `n`, its lower covers being a nonempty antichain of non-top
//! elements. Candidates are validated with [`FinLattice::from_order`] and
//! deduplicated by canonical key.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::LatticeJson;
use crate::iso::{are_isomorphic, canonical_form};
use crate::lattice::FinLattice;

pub const MAX_ORDER: usize = 9;

/// Environment variable naming a directory for cached JSON-lines catalogs.
pub const CACHE_ENV: &str = "DIFFLAT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub order: usize,
    pub generator: String,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<String>,
    /// Entry count before filtering.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unfiltered_count: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LatticeCatalog {
    order: usize,
    entries: Vec<(String, FinLattice)>,
    provenance: Provenance,
}

impl LatticeCatalog {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(canonical key, lattice)` pairs sorted by key.
    pub fn entries(&self) -> &[(String, FinLattice)] {
        &self.entries
    }

    pub fn lattices(&self) -> impl Iterator<Item = &FinLattice> {
        self.entries.iter().map(|(_, l)| l)
    }

    pub fn into_lattices(self) -> Vec<FinLattice> {
        self.entries.into_iter().map(|(_, l)| l).collect()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn get(&self, key: &str) -> Option<&FinLattice> {
        self.entries.binary_search_by(|(k, _)| k.as_str().cmp(key)).ok().map(|i| &self.entries[i].1)
    }

    /// The entry isomorphic to `l`, if any.
    pub fn find(&self, l: &FinLattice) -> Option<&FinLattice> {
        self.get(&crate::iso::canonical_key(l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogFilter {
    Distributive,
    Modular,
    Chain,
}

impl CatalogFilter {
    pub fn name(self) -> &'static str {
        match self {
            CatalogFilter::Distributive => "distributive",
            CatalogFilter::Modular => "modular",
            CatalogFilter::Chain => "chain",
        }
    }

    pub fn accepts(self, l: &FinLattice) -> bool {
        match self {
            CatalogFilter::Distributive => l.is_distributive(),
            CatalogFilter::Modular => l.is_modular(),
            CatalogFilter::Chain => l.is_chain(),
        }
    }
}

impl std::str::FromStr for CatalogFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distributive" => Ok(CatalogFilter::Distributive),
            "modular" => Ok(CatalogFilter::Modular),
            "chain" => Ok(CatalogFilter::Chain),
            other => Err(Error::BadSize(format!("unknown filter {other:?}"))),
        }
    }
}

pub fn catalog_filter(cat: &LatticeCatalog, filter: CatalogFilter) -> LatticeCatalog {
    let entries: Vec<(String, FinLattice)> = cat.entries.iter().filter(|(_, l)| filter.accepts(l)).cloned().collect();
    let mut provenance = cat.provenance.clone();
    provenance.unfiltered_count.get_or_insert(cat.entries.len());
    provenance.filter = Some(match &provenance.filter {
        Some(f) => format!("{f},{}", filter.name()),
        None => filter.name().to_string(),
    });
    provenance.count = entries.len();
    LatticeCatalog { order: cat.order, entries, provenance }
}

const GENERATOR: &str = "coatom-extension";

type Entries = Vec<(String, FinLattice)>;

fn memo() -> &'static Mutex<HashMap<usize, Entries>> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Entries>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Every lattice of order `n` up to isomorphism, `1 <= n <= 9`.
pub fn enumerate_lattices(n: usize) -> Result<LatticeCatalog> {
    if n == 0 {
        return Err(Error::BadSize("a lattice needs at least one element".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    let entries = entries_for(n)?;
    Ok(LatticeCatalog {
        order: n,
        provenance: Provenance {
            order: n,
            generator: GENERATOR.into(),
            count: entries.len(),
            filter: None,
            unfiltered_count: None,
        },
        entries,
    })
}

/// Same as [`enumerate_lattices`] but regenerated from order 1, bypassing the
/// in-process memo and the on-disk cache.
pub fn generate_lattices(n: usize) -> Result<LatticeCatalog> {
    if n == 0 {
        return Err(Error::BadSize("a lattice needs at least one element".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    let mut entries = Vec::new();
    for k in 1..=n {
        entries = if k <= 2 {
            let (canon, key) = canonical_form(&FinLattice::chain(k)?);
            vec![(key, finish(&canon))]
        } else {
            extend(&entries)
        };
    }
    Ok(LatticeCatalog {
        order: n,
        provenance: Provenance { order: n, generator: GENERATOR.into(), count: entries.len(), filter: None, unfiltered_count: None },
        entries,
    })
}

fn entries_for(n: usize) -> Result<Entries> {
    if let Some(e) = memo().lock().expect("catalog memo").get(&n) {
        return Ok(e.clone());
    }
    let cache = std::env::var_os(CACHE_ENV).map(|d| cache_path(Path::new(&d), n));
    if let Some(path) = cache.as_ref().filter(|p| p.exists()) {
        if let Ok(cat) = read_jsonl(path) {
            if cat.order == n && cat.provenance.filter.is_none() {
                memo().lock().expect("catalog memo").insert(n, cat.entries.clone());
                return Ok(cat.entries);
            }
        }
    }
    let entries = if n <= 2 {
        let l = FinLattice::chain(n)?;
        let (canon, key) = canonical_form(&l);
        vec![(key, finish(&canon))]
    } else {
        extend(&entries_for(n - 1)?)
    };
    if let Some(path) = cache {
        let cat = LatticeCatalog {
            order: n,
            provenance: Provenance { order: n, generator: GENERATOR.into(), count: entries.len(), filter: None, unfiltered_count: None },
            entries: entries.clone(),
        };
        // a failed cache write only costs a recomputation later
        let _ = std::fs::create_dir_all(path.parent().unwrap_or(Path::new("."))).and_then(|_| {
            let mut f = std::fs::File::create(&path)?;
            f.write_all(to_jsonl(&cat).as_bytes())
        });
    }
    memo().lock().expect("catalog memo").insert(n, entries.clone());
    Ok(entries)
}

fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("lattices-{n}.jsonl"))
}

/// Fresh default labels and a conventional name where one applies.
fn finish(canon: &FinLattice) -> FinLattice {
    let n = canon.len();
    let l = FinLattice::from_order(n, canon.order_matrix().to_vec()).expect("canonical form is a lattice");
    if l.is_chain() {
        l.with_name(format!("C_{n}"))
    } else if l.is_diamond() {
        l.with_name(format!("M_{n}"))
    } else if n == 5 && are_isomorphic(&l, &FinLattice::pentagon()).is_some() {
        l.with_name("N_5")
    } else {
        l
    }
}

fn antichains(l: &FinLattice) -> Vec<Vec<usize>> {
    let pool: Vec<usize> = l.elements().filter(|&x| x != l.top()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();

    fn go(i: usize, pool: &[usize], l: &FinLattice, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == pool.len() {
            if !current.is_empty() {
                out.push(current.clone());
            }
            return;
        }
        go(i + 1, pool, l, current, out);
        let x = pool[i];
        if current.iter().all(|&y| !l.comparable(x, y)) {
            current.push(x);
            go(i + 1, pool, l, current, out);
            current.pop();
        }
    }

    go(0, &pool, l, &mut current, &mut out);
    out
}

fn with_coatom(l: &FinLattice, lower: &[usize]) -> Option<FinLattice> {
    let n = l.len();
    let m = n + 1;
    let e = n;
    let mut leq = vec![false; m * m];
    for x in 0..n {
        for y in 0..n {
            leq[x * m + y] = l.leq(x, y);
        }
        leq[x * m + e] = lower.iter().any(|&a| l.leq(x, a));
    }
    leq[e * m + e] = true;
    leq[e * m + l.top()] = true;
    FinLattice::from_order(m, leq).ok()
}

fn extend(parents: &Entries) -> Entries {
    let found: BTreeMap<String, FinLattice> = parents
        .par_iter()
        .flat_map_iter(|(_, l)| {
            antichains(l).into_iter().filter_map(move |a| with_coatom(l, &a)).map(|c| {
                let (canon, key) = canonical_form(&c);
                (key, canon)
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    found.into_iter().map(|(k, l)| (k, finish(&l))).collect()
}

#[derive(Serialize, Deserialize)]
struct EntryLine {
    key: String,
    #[serde(flatten)]
    lattice: LatticeJson,
}

#[derive(Serialize, Deserialize)]
struct SummaryLine {
    summary: Provenance,
}

/// One JSON lattice per line, then a summary record.
pub fn to_jsonl(cat: &LatticeCatalog) -> String {
    let mut out = String::new();
    for (key, l) in &cat.entries {
        let line = EntryLine { key: key.clone(), lattice: LatticeJson::from_lattice(l) };
        writeln!(out, "{}", serde_json::to_string(&line).expect("entry serializes")).expect("write to string");
    }
    let summary = SummaryLine { summary: cat.provenance.clone() };
    writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes")).expect("write to string");
    out
}

pub fn write_jsonl(cat: &LatticeCatalog, path: &Path) -> Result<()> {
    std::fs::write(path, to_jsonl(cat))?;
    Ok(())
}

pub fn from_jsonl(reader: impl BufRead) -> Result<LatticeCatalog> {
    let mut entries = Vec::new();
    let mut summary: Option<Provenance> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if summary.is_some() {
            return Err(Error::BadSize(format!("line {}: data after the summary record", i + 1)));
        }
        let value: serde_json::Value = serde_json::from_str(&line)?;
        if value.get("summary").is_some() {
            summary = Some(serde_json::from_value::<SummaryLine>(value)?.summary);
        } else {
            let entry: EntryLine = serde_json::from_value(value)?;
            entries.push((entry.key, entry.lattice.to_lattice()?));
        }
    }
    let provenance = summary.ok_or_else(|| Error::BadSize("missing summary record".into()))?;
    if provenance.count != entries.len() {
        return Err(Error::BadSize(format!("summary counts {} lattices, file has {}", provenance.count, entries.len())));
    }
    if let Some((key, l)) = entries.iter().find(|(_, l)| l.len() != provenance.order) {
        return Err(Error::BadSize(format!("entry {key} has {} elements, expected {}", l.len(), provenance.order)));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(LatticeCatalog { order: provenance.order, entries, provenance })
}

pub fn read_jsonl(path: &Path) -> Result<LatticeCatalog> {
    from_jsonl(BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_lattices(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 15, 53]);
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(matches!(enumerate_lattices(10), Err(Error::TooLarge(10))));
        assert!(enumerate_lattices(0).is_err());
    }

    #[test]
    fn order_five_contents() {
        let cat = enumerate_lattices(5).unwrap();
        for l in [FinLattice::chain(5).unwrap(), FinLattice::diamond(5).unwrap(), FinLattice::pentagon()] {
            assert!(cat.find(&l).is_some());
        }
        let names: Vec<_> = cat.lattices().filter_map(|l| l.name()).collect();
        assert!(names.contains(&"N_5") && names.contains(&"M_5") && names.contains(&"C_5"));
        assert_eq!(catalog_filter(&cat, CatalogFilter::Chain).len(), 1);
        assert_eq!(catalog_filter(&cat, CatalogFilter::Distributive).len(), 3);
        let modular = catalog_filter(&cat, CatalogFilter::Modular);
        assert_eq!(modular.len(), 4);
        assert!(modular.find(&FinLattice::pentagon()).is_none());
        assert_eq!(modular.provenance().filter.as_deref(), Some("modular"));
        assert_eq!(modular.provenance().unfiltered_count, Some(5));
    }

    #[test]
    fn jsonl_round_trip() {
        let cat = enumerate_lattices(6).unwrap();
        let text = to_jsonl(&cat);
        assert_eq!(text.lines().count(), 16);
        let back = from_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 15);
        assert_eq!(to_jsonl(&back), text);
        let truncated: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(from_jsonl(truncated.as_bytes()).is_err());
    }

    #[test]
    fn antichains_of_a_square() {
        let b4 = FinLattice::boolean(2).unwrap();
        // {0}, {a}, {b}, {a, b}
        assert_eq!(antichains(&b4).len(), 4);
    }
}
