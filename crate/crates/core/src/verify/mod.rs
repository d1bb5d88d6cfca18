//! Registry of checkable claims and the runner behind `difflat verify`.
//!
//! Each claim is plain data: an id, a short anchor describing the statement,
//! a generator computing `(expected, computed)` as JSON values, and a
//! comparator deciding pass/fail.

mod printed;
mod structural;

use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use printed::{check_printed, printed_examples, PrintedExample, PrintedOutcome};
pub use structural::{structural_check, structural_check_with, StructuralFindings, STRUCTURAL_CHECKS};

use crate::catalog::enumerate_lattices;
use crate::classify::classify;
use crate::derivation::{
    enumerate_chain_fast, enumerate_derivations, enumerate_diamond_fast, inner, is_derivation, isotone_count_formula,
    lambda_cut, lambda_cut_map,
};
use crate::derposet::{op_algebra, run_conjecture};
use crate::error::{Error, Result};
use crate::lattice::FinLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quick,
    Paper,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Suite::Quick),
            "paper" => Ok(Suite::Paper),
            other => Err(Error::Precondition(if other.is_empty() { "empty suite name" } else { "unknown suite" })),
        }
    }
}

/// Ranges a claim runs over. The paper suite uses each claim's full range;
/// the quick suite clips everything at `max_n`. Catalog-based claims are
/// always clipped at `max_n`.
#[derive(Clone, Copy, Debug)]
pub struct Scope {
    pub suite: Suite,
    pub max_n: usize,
}

impl Scope {
    pub fn upto(&self, full: usize) -> usize {
        match self.suite {
            Suite::Paper => full,
            Suite::Quick => full.min(self.max_n),
        }
    }

    pub fn catalog_upto(&self, cap: usize) -> usize {
        cap.min(self.max_n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparator {
    /// `computed == expected`
    Exact,
    /// The generator ran to completion; the computed value is a finding.
    Completes,
}

pub struct Computation {
    pub expected: Value,
    pub computed: Value,
}

pub struct Claim {
    pub id: &'static str,
    pub anchor: &'static str,
    /// Where the expected value comes from.
    pub provenance: &'static str,
    pub comparator: Comparator,
    pub generator: fn(Scope) -> Result<Computation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub anchor: String,
    pub provenance: String,
    pub comparator: Comparator,
    pub expected: Value,
    pub computed: Value,
    pub passed: bool,
    pub runtime_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub max_n: usize,
    pub passed: bool,
    pub claims: Vec<ClaimResult>,
}

pub fn registry() -> &'static [Claim] {
    CLAIMS
}

static CLAIMS: &[Claim] = &[
    Claim {
        id: "thm-chain-count",
        anchor: "an n-chain has 2^(n-1) derivations; generic and chain-specific enumeration agree",
        provenance: "closed formula 2^(n-1), n = 1..10",
        comparator: Comparator::Exact,
        generator: chain_count,
    },
    Claim {
        id: "thm-chain-classes",
        anchor: "derivations of a chain are pairwise non-isomorphic",
        provenance: "class count equals derivation count, n = 1..8",
        comparator: Comparator::Exact,
        generator: chain_classes,
    },
    Claim {
        id: "thm-mn-count",
        anchor: "|DO(M_n)| = 2 + sum_k (k+1) C(n-2, k); generic and diamond-specific enumeration agree",
        provenance: "closed formula, n = 3..10",
        comparator: Comparator::Exact,
        generator: mn_count,
    },
    Claim {
        id: "thm-mn-classes",
        anchor: "M_n has 2(n-1) derivation classes",
        provenance: "closed formula, n = 3..10",
        comparator: Comparator::Exact,
        generator: mn_classes,
    },
    Claim {
        id: "ex-printed-tables",
        anchor: "derivation tables, Hasse orders and distinguished subsets of C_3, C_4, M_4",
        provenance: "printed tables",
        comparator: Comparator::Exact,
        generator: printed_tables,
    },
    Claim {
        id: "ex-b8-lambda",
        anchor: "on B_8 the down-set cut at a coatom is a derivation, at an atom it is not",
        provenance: "printed example",
        comparator: Comparator::Exact,
        generator: b8_lambda,
    },
    Claim {
        id: "rem-op-counterexamples",
        anchor: "pointwise join on M_5 and composition on B_8 leave the derivations",
        provenance: "printed remarks",
        comparator: Comparator::Exact,
        generator: op_counterexamples,
    },
    Claim {
        id: "struct-catalog",
        anchor: "structural statements hold on every lattice of order 2..7",
        provenance: "zero failures per check",
        comparator: Comparator::Exact,
        generator: struct_catalog,
    },
    Claim {
        id: "conj-probe",
        anchor: "the DO poset is a lattice; the DO poset determines the lattice",
        provenance: "open; findings only",
        comparator: Comparator::Completes,
        generator: conjecture,
    },
    Claim {
        id: "catalog-counts",
        anchor: "number of unlabeled lattices of order n",
        provenance: "known sequence 1, 1, 1, 2, 5, 15, 53, 222, 1078",
        comparator: Comparator::Exact,
        generator: catalog_counts,
    },
    Claim {
        id: "lem-isotone-count",
        anchor: "C(k+l-1, k) isotone maps from a k-chain to an l-chain",
        provenance: "brute-force count of monotone maps, 1 <= k, l <= 6",
        comparator: Comparator::Exact,
        generator: isotone_count,
    },
];

fn chain_count(scope: Scope) -> Result<Computation> {
    let top = scope.upto(10);
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for n in 1..=top {
        let c = FinLattice::chain(n)?;
        let generic = enumerate_derivations(&c);
        let fast = enumerate_chain_fast(&c)?;
        expected.push(json!([n, 1u64 << (n - 1), true]));
        computed.push(json!([n, generic.len(), generic.images() == fast.images()]));
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn chain_classes(scope: Scope) -> Result<Computation> {
    let top = scope.upto(8);
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for n in 1..=top {
        let dset = enumerate_derivations(&FinLattice::chain(n)?);
        let classes = classify(&dset)?;
        expected.push(json!([n, 1u64 << (n - 1), true]));
        computed.push(json!([n, classes.len(), classes.classes.iter().all(|c| c.len() == 1)]));
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn mn_formula(n: usize) -> u64 {
    let m = (n - 2) as u64;
    let mut binom = 1u64;
    let mut total = 2u64;
    for k in 1..=m {
        binom = binom * (m - k + 1) / k;
        total += (k + 1) * binom;
    }
    total
}

fn mn_count(scope: Scope) -> Result<Computation> {
    let top = scope.upto(10).max(3);
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for n in 3..=top {
        let m = FinLattice::diamond(n)?;
        let generic = enumerate_derivations(&m);
        let fast = enumerate_diamond_fast(&m)?;
        expected.push(json!([n, mn_formula(n), true]));
        computed.push(json!([n, generic.len(), generic.images() == fast.images()]));
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn mn_classes(scope: Scope) -> Result<Computation> {
    let top = scope.upto(10).max(3);
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for n in 3..=top {
        let dset = enumerate_diamond_fast(&FinLattice::diamond(n)?)?;
        expected.push(json!([n, 2 * (n - 1)]));
        computed.push(json!([n, classify(&dset)?.len()]));
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn printed_tables(_: Scope) -> Result<Computation> {
    let mut expected = serde_json::Map::new();
    let mut computed = serde_json::Map::new();
    for ex in printed_examples() {
        let outcome = check_printed(&ex);
        expected.insert(ex.name.to_string(), serde_json::to_value(PrintedOutcome::all_match())?);
        computed.insert(ex.name.to_string(), serde_json::to_value(outcome)?);
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn b8_lambda(_: Scope) -> Result<Computation> {
    let b8 = FinLattice::boolean(3)?;
    let mut expected = serde_json::Map::new();
    let mut computed = serde_json::Map::new();
    for name in ["a", "b", "c", "u", "v", "w"] {
        let x = b8.find_label(name).ok_or_else(|| Error::Internal(format!("B_8 has no element {name}")))?;
        let coatom = b8.coatoms().contains(&x);
        expected.insert(name.into(), json!(coatom));
        computed.insert(
            name.into(),
            json!(is_derivation(&b8, &lambda_cut_map(&b8, x)) && lambda_cut(&b8, x).is_some()),
        );
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

fn op_counterexamples(_: Scope) -> Result<Computation> {
    let m5 = FinLattice::diamond(5)?;
    let (b1, b2, b3) = (1, 2, 3);
    let r = op_algebra(&m5, inner(&m5, b1).map(), inner(&m5, b3).map())?;
    let b8 = FinLattice::boolean(3)?;
    let find = |s: &str| b8.find_label(s).ok_or_else(|| Error::Internal(format!("B_8 has no element {s}")));
    let (u, v, a) = (find("u")?, find("v")?, find("a")?);
    let s = op_algebra(&b8, &lambda_cut_map(&b8, u), &lambda_cut_map(&b8, v))?;
    let expected = json!({
        "m5_join_in_do": false,
        "m5_join_at_top": m5.top(),
        "m5_join_at_b2": m5.bottom(),
        "b8_compose_equals_meet": true,
        "b8_compose_equals_cut_at_a": true,
        "b8_compose_in_do": false,
    });
    let computed = json!({
        "m5_join_in_do": r.join_in_do,
        "m5_join_at_top": r.pointwise_join.apply(m5.top()),
        "m5_join_at_b2": r.pointwise_join.apply(b2),
        "b8_compose_equals_meet": s.compose == s.pointwise_meet,
        "b8_compose_equals_cut_at_a": s.compose == lambda_cut_map(&b8, a),
        "b8_compose_in_do": s.compose_in_do,
    });
    Ok(Computation { expected, computed })
}

fn struct_catalog(scope: Scope) -> Result<Computation> {
    let top = scope.catalog_upto(7);
    let mut lattices = Vec::new();
    for n in 2..=top {
        lattices.extend(enumerate_lattices(n)?.into_lattices());
    }
    let findings: Vec<StructuralFindings> = lattices.par_iter().map(structural_check).collect();
    let mut total = StructuralFindings::empty();
    for f in findings {
        total.merge(f);
    }
    let expected = json!({
        "orders": [2, top],
        "lattices": lattices.len(),
        "failures": StructuralFindings::empty().failures,
    });
    let mut computed = json!({
        "orders": [2, top],
        "lattices": lattices.len(),
        "failures": total.failures,
    });
    if !total.details.is_empty() {
        computed["details"] = json!(total.details);
    }
    Ok(Computation { expected, computed })
}

fn conjecture(scope: Scope) -> Result<Computation> {
    let top = scope.catalog_upto(9);
    let report = run_conjecture(top)?;
    let computed = json!({
        "verified_orders": [1, top],
        "lattices": report.lattices_checked,
        "do_not_lattice": report.non_lattice,
        "collisions": report.collisions.len(),
        "collision_pairs": report.collisions.iter().map(|c| c.pairs.len()).sum::<usize>(),
        "determination_counterexamples": report.determination_counterexamples,
    });
    Ok(Computation { expected: Value::Null, computed })
}

const LATTICE_COUNTS: [usize; 9] = [1, 1, 1, 2, 5, 15, 53, 222, 1078];

fn catalog_counts(scope: Scope) -> Result<Computation> {
    let top = scope.catalog_upto(9);
    let expected: Vec<usize> = LATTICE_COUNTS[..top].to_vec();
    let computed = (1..=top).map(|n| enumerate_lattices(n).map(|c| c.len())).collect::<Result<Vec<_>>>()?;
    Ok(Computation { expected: json!(expected), computed: json!(computed) })
}

fn brute_isotone(k: usize, l: usize) -> u64 {
    // count all l^k maps, keeping the monotone ones
    let total = l.pow(k as u32);
    (0..total)
        .filter(|&code| {
            let digits: Vec<usize> = (0..k).map(|i| code / l.pow(i as u32) % l).collect();
            digits.windows(2).all(|w| w[0] <= w[1])
        })
        .count() as u64
}

fn isotone_count(scope: Scope) -> Result<Computation> {
    let top = scope.upto(6);
    let mut expected = Vec::new();
    let mut computed = Vec::new();
    for k in 1..=top {
        for l in 1..=top {
            expected.push(json!([k, l, brute_isotone(k, l)]));
            computed.push(json!([k, l, isotone_count_formula(k as u64, l as u64)?]));
        }
    }
    Ok(Computation { expected: expected.into(), computed: computed.into() })
}

pub fn run_claim(claim: &Claim, scope: Scope) -> ClaimResult {
    let start = Instant::now();
    let outcome = (claim.generator)(scope);
    let runtime_ms = start.elapsed().as_millis();
    let (expected, computed, passed, error) = match outcome {
        Ok(c) => {
            let passed = match claim.comparator {
                Comparator::Exact => c.expected == c.computed,
                Comparator::Completes => true,
            };
            (c.expected, c.computed, passed, None)
        }
        Err(e) => (Value::Null, Value::Null, false, Some(e.to_string())),
    };
    ClaimResult {
        id: claim.id.into(),
        anchor: claim.anchor.into(),
        provenance: claim.provenance.into(),
        comparator: claim.comparator,
        expected,
        computed,
        passed,
        runtime_ms,
        error,
    }
}

/// Runs every registered claim; claims run in parallel, results keep registry order.
pub fn run_suite(suite: Suite, max_n: usize) -> VerificationReport {
    let scope = Scope { suite, max_n };
    let claims: Vec<ClaimResult> = CLAIMS.par_iter().map(|c| run_claim(c, scope)).collect();
    VerificationReport { suite, max_n, passed: claims.iter().all(|c| c.passed), claims }
}
