//! Brute-force references shared by the integration tests.

#![allow(dead_code)]

use itertools::Itertools;

/// Number of lattices of order `n` up to isomorphism, counted from scratch.
///
/// Every finite poset has a labeling along a linear extension, so it suffices
/// to take element 0 as bottom, `n - 1` as top and relations `i < j` only
/// between middle elements with `i < j`. Each such relation is checked for
/// transitivity and for the existence of all meets and joins, then reduced to
/// the least relation bitmask over all relabelings fixing the bounds.
pub fn lattice_count_oracle(n: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (1..=m).tuple_combinations().collect();
    let mut classes = std::collections::HashSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
            leq[0][x] = true;
            leq[x][n - 1] = true;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c])));
        if !transitive || !is_lattice(&leq) {
            continue;
        }
        let key = (1..=m)
            .permutations(m)
            .map(|perm| {
                let mut p: Vec<usize> = vec![0];
                p.extend(perm);
                p.push(n - 1);
                let mut bits = Vec::with_capacity(n * n);
                for a in 0..n {
                    for b in 0..n {
                        bits.push(leq[p[a]][p[b]]);
                    }
                }
                bits
            })
            .min()
            .expect("at least one permutation");
        classes.insert(key);
    }
    classes.len()
}

fn is_lattice(leq: &[Vec<bool>]) -> bool {
    let n = leq.len();
    let least = |set: &[usize]| set.iter().any(|&c| set.iter().all(|&d| leq[c][d]));
    let greatest = |set: &[usize]| set.iter().any(|&c| set.iter().all(|&d| leq[d][c]));
    (0..n).all(|a| {
        (0..n).all(|b| {
            let ub: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
            let lb: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
            least(&ub) && greatest(&lb)
        })
    })
}

/// Monotone maps from a `k`-chain to an `l`-chain, by listing all `l^k` maps.
pub fn monotone_map_count(k: usize, l: usize) -> u64 {
    (0..k)
        .map(|_| 0..l)
        .multi_cartesian_product()
        .filter(|f| f.windows(2).all(|w| w[0] <= w[1]))
        .count() as u64
}

/// `2 + Σ_{k=1}^{n-2} (k+1)·C(n-2, k)` computed with plain integer loops.
pub fn diamond_derivation_count(n: usize) -> u64 {
    let m = n as u64 - 2;
    let binom = |a: u64, b: u64| -> u64 { (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1)) };
    2 + (1..=m).map(|k| (k + 1) * binom(m, k)).sum::<u64>()
}
