//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bimono::cumulants::CumulantTable;
use bimono::distributions::{AtomicPlanarMeasure, GridDistribution, WordDistribution};
use bimono::partitions::Side;
use bimono::rational::{q, qi, Q};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with numerator in −5..=5 and denominator in 1..=4.
pub fn small_q(r: &mut impl Rng) -> Q {
    q(r.gen_range(-5..=5), r.gen_range(1..=4))
}

pub fn random_words(r: &mut impl Rng, max_len: usize) -> WordDistribution {
    WordDistribution::from_fn(max_len, |_| small_q(r))
}

pub fn random_word_cumulants(r: &mut impl Rng, max_len: usize) -> CumulantTable {
    CumulantTable::from_fn(max_len, |_| small_q(r))
}

pub fn random_grid_cumulants(r: &mut impl Rng, order: usize) -> CumulantTable {
    CumulantTable::grid_from_fn(order, |_, _| small_q(r))
}

pub fn random_grid(r: &mut impl Rng, order: usize) -> GridDistribution {
    GridDistribution::from_fn(order, |_, _| small_q(r))
}

/// Probability measure with 1..=5 atoms at small rational points and
/// positive weights summing to 1.
pub fn random_probability(r: &mut impl Rng) -> AtomicPlanarMeasure {
    let k = r.gen_range(1..=5);
    let raw: Vec<i64> = (0..k).map(|_| r.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    AtomicPlanarMeasure::from_weighted_points(
        raw.iter()
            .map(|&w| (small_q(r), small_q(r), q(w, total)))
            .collect::<Vec<_>>(),
    )
}

pub fn catalan(n: usize) -> u64 {
    // C_n = binom(2n, n)/(n+1), computed with exact integer steps.
    let mut c: u64 = 1;
    for k in 0..n as u64 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

pub fn all_words(len: usize) -> Vec<Vec<Side>> {
    (0..1usize << len)
        .map(|bits| {
            (0..len)
                .map(|i| if bits >> (len - 1 - i) & 1 == 0 { Side::Left } else { Side::Right })
                .collect()
        })
        .collect()
}

/// Every set partition of `0..n` as sorted blocks, blocks sorted by minimum.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Two blocks cross in the sequence order `seq` (positions ranked by index).
pub fn crosses(seq_rank: &[usize], a: &[usize], b: &[usize]) -> bool {
    for &a1 in a {
        for &a2 in a {
            for &b1 in b {
                for &b2 in b {
                    let (x1, x2, y1, y2) =
                        (seq_rank[a1], seq_rank[a2], seq_rank[b1], seq_rank[b2]);
                    if x1 < y1 && y1 < x2 && x2 < y2 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Classical monotone partitions of `1..=n` by brute force: non-crossing,
/// and any block lying strictly between two elements of another block has
/// the larger rank. Returned as (1-based blocks, rank) pairs, canonicalised.
pub fn monotone_partitions_oracle(n: usize) -> BTreeSet<(Vec<Vec<usize>>, Vec<usize>)> {
    let id: Vec<usize> = (0..n).collect();
    let mut out = BTreeSet::new();
    for p in set_partitions(n) {
        let k = p.len();
        let nc = (0..k).all(|i| (0..k).all(|j| i == j || !crosses(&id, &p[i], &p[j])));
        if !nc {
            continue;
        }
        for perm in permutations(k) {
            let rank: Vec<usize> = perm.iter().map(|r| r + 1).collect();
            let ok = (0..k).all(|v| {
                (0..k).all(|w| {
                    let inside = v != w
                        && p[v].iter().all(|&x| {
                            p[w].iter().any(|&y| y < x) && p[w].iter().any(|&y| y > x)
                        });
                    !inside || rank[v] > rank[w]
                })
            });
            if ok {
                out.insert(canonical(&p, &rank));
            }
        }
    }
    out
}

pub fn canonical(blocks: &[Vec<usize>], rank: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut pairs: Vec<(Vec<usize>, usize)> = blocks
        .iter()
        .map(|b| {
            let mut b: Vec<usize> = b.iter().map(|x| x + 1).collect();
            b.sort();
            b
        })
        .zip(rank.iter().copied())
        .collect();
    pairs.sort();
    pairs.into_iter().unzip()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}

pub fn int(n: i64) -> Q {
    qi(n)
}
