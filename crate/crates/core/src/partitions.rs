//! Combinatorics indexed by a left/right word χ.
//!
//! Every order-dependent question (intervals, crossings, nesting) is reduced
//! to the permutation returned by [`chi_order`]: left positions ascending,
//! then right positions descending. Positions are 0-based in memory and
//! 1-based in JSON.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

/// Which face an entry of a product belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn from_char(c: char) -> Result<Side> {
        match c {
            'L' | 'l' => Ok(Side::Left),
            'R' | 'r' => Ok(Side::Right),
            _ => Err(Error::invalid(format!("side must be L or R, got {c:?}"))),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }
}

/// Parses a string over `{L, R}`; the empty string gives the empty word.
pub fn parse_word(s: &str) -> Result<Vec<Side>> {
    s.chars().map(Side::from_char).collect()
}

pub fn word_to_string(word: &[Side]) -> String {
    word.iter().map(|s| s.as_char()).collect()
}

/// Dense index of a word among all words ordered by length, then
/// lexicographically with `L < R`. The empty word has index 0.
pub fn word_index(word: &[Side]) -> usize {
    let bits = word
        .iter()
        .fold(0usize, |acc, s| (acc << 1) | (*s == Side::Right) as usize);
    (1usize << word.len()) - 1 + bits
}

/// Inverse of [`word_index`].
pub fn word_from_index(index: usize) -> Vec<Side> {
    let mut len = 0;
    while (1usize << (len + 1)) - 1 <= index {
        len += 1;
    }
    let bits = index + 1 - (1usize << len);
    (0..len)
        .map(|i| {
            if bits >> (len - 1 - i) & 1 == 1 {
                Side::Right
            } else {
                Side::Left
            }
        })
        .collect()
}

/// Number of words of length at most `max_len`.
pub fn word_count(max_len: usize) -> usize {
    (1usize << (max_len + 1)) - 1
}

/// All words of length exactly `len`, in dense-index order.
pub fn words_of_len(len: usize) -> impl Iterator<Item = Vec<Side>> {
    let start = (1usize << len) - 1;
    (start..start + (1usize << len)).map(word_from_index)
}

/// Letters of `word` at the (ascending) positions in `subset`.
pub fn restrict(word: &[Side], subset: &[usize]) -> Vec<Side> {
    subset.iter().map(|&p| word[p]).collect()
}

/// The map χ: {1,…,n} → {ℓ, r}, with n ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiWord(Vec<Side>);

impl ChiWord {
    pub fn new(entries: Vec<Side>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("χ must have length at least 1"));
        }
        Ok(ChiWord(entries))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_word(s)?)
    }

    /// χ_{m,n} = (L^m, R^n).
    pub fn grid(m: usize, n: usize) -> Result<Self> {
        let mut v = vec![Side::Left; m];
        v.extend(std::iter::repeat(Side::Right).take(n));
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Side] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Side> {
        self.0
    }

    pub fn counts(&self) -> (usize, usize) {
        side_counts(&self.0)
    }
}

impl fmt::Display for ChiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_to_string(&self.0))
    }
}

pub fn side_counts(word: &[Side]) -> (usize, usize) {
    let l = word.iter().filter(|s| **s == Side::Left).count();
    (l, word.len() - l)
}

/// Family labels ω: {1,…,n} → K (labels are plain integers).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaWord(pub Vec<usize>);

impl OmegaWord {
    pub fn parse(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad family label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(OmegaWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The order ≺_χ as an explicit permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiPermutation {
    /// Positions listed in ≺_χ-increasing order (this is s_χ).
    pub order: Vec<usize>,
    /// `rank[p]` is the index of position `p` inside `order`.
    pub rank: Vec<usize>,
}

impl ChiPermutation {
    pub fn of_word(word: &[Side]) -> Self {
        let mut order: Vec<usize> = (0..word.len()).filter(|&p| word[p] == Side::Left).collect();
        order.extend((0..word.len()).rev().filter(|&p| word[p] == Side::Right));
        let mut rank = vec![0; word.len()];
        for (i, &p) in order.iter().enumerate() {
            rank[p] = i;
        }
        ChiPermutation { order, rank }
    }

    pub fn precedes(&self, p: usize, q: usize) -> bool {
        self.rank[p] < self.rank[q]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

pub fn chi_order(chi: &ChiWord) -> ChiPermutation {
    ChiPermutation::of_word(chi.as_slice())
}

/// A family of position sets, each contiguous in ≺_χ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiIntervalSet {
    pub intervals: Vec<Vec<usize>>,
}

impl ChiIntervalSet {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// All nonempty χ-intervals, listed by starting rank and then by length.
pub fn chi_intervals(chi: &ChiWord) -> ChiIntervalSet {
    ChiIntervalSet {
        intervals: intervals_of_word(chi.as_slice()),
    }
}

pub(crate) fn intervals_of_word(word: &[Side]) -> Vec<Vec<usize>> {
    let perm = ChiPermutation::of_word(word);
    let n = word.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(sorted(perm.order[i..=j].to_vec()));
        }
    }
    out
}

/// π_{χ,ω}: maximal ≺_χ-runs of constant ω, listed in ≺_χ order.
pub fn pi_chi_omega(chi: &ChiWord, omega: &OmegaWord) -> Result<Vec<Vec<usize>>> {
    if chi.len() != omega.len() {
        return Err(Error::invalid(format!(
            "χ has length {} but ω has length {}",
            chi.len(),
            omega.len()
        )));
    }
    Ok(runs_by_label(&chi_order(chi), &omega.0))
}

pub(crate) fn runs_by_label(perm: &ChiPermutation, labels: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut current: Option<usize> = None;
    for &p in &perm.order {
        if current == Some(labels[p]) {
            blocks.last_mut().unwrap().push(p);
        } else {
            blocks.push(vec![p]);
            current = Some(labels[p]);
        }
    }
    blocks.into_iter().map(sorted).collect()
}

fn check_subset(n: usize, v: &[usize]) -> Result<()> {
    if let Some(&p) = v.iter().find(|&&p| p >= n) {
        return Err(Error::invalid(format!(
            "position {} outside 1..={n}",
            p + 1
        )));
    }
    Ok(())
}

/// The ≺_χ-gaps of `subset`: prefix, inner gaps and suffix, with empty
/// gaps omitted.
pub fn complement_intervals(chi: &ChiWord, subset: &[usize]) -> Result<ChiIntervalSet> {
    check_subset(chi.len(), subset)?;
    Ok(ChiIntervalSet {
        intervals: gaps(&chi_order(chi), subset),
    })
}

pub(crate) fn gaps(perm: &ChiPermutation, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; perm.len()];
    for &p in subset {
        inside[p] = true;
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    for &p in &perm.order {
        if inside[p] {
            if !current.is_empty() {
                out.push(sorted(std::mem::take(&mut current)));
            }
        } else {
            current.push(p);
        }
    }
    if !current.is_empty() {
        out.push(sorted(current));
    }
    out
}

/// A set partition of {0,…,n−1}: blocks sorted internally and by minimum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            for &p in b {
                if p >= n || seen[p] {
                    return Err(Error::invalid("blocks must be disjoint subsets of 1..=n"));
                }
                seen[p] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("blocks must cover 1..=n"));
        }
        Ok(Self::canonical(blocks))
    }

    fn canonical(blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks.into_iter().map(sorted).collect();
        blocks.sort_unstable();
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SetPartition", 1)?;
        st.serialize_field("blocks", &one_based(&self.blocks))?;
        st.end()
    }
}

pub(crate) fn one_based(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|p| p + 1).collect())
        .collect()
}

/// A partition together with a ranking λ of its blocks (1 = lowest).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedPartition {
    pub partition: SetPartition,
    /// `rank[i]` is λ of `partition.blocks()[i]`.
    pub rank: Vec<usize>,
}

impl OrderedPartition {
    pub fn new(partition: SetPartition, rank: Vec<usize>) -> Result<Self> {
        let k = partition.num_blocks();
        let mut seen = vec![false; k];
        if rank.len() != k {
            return Err(Error::invalid("rank must list one value per block"));
        }
        for &r in &rank {
            if r == 0 || r > k || seen[r - 1] {
                return Err(Error::invalid("rank must be a bijection onto 1..=|π|"));
            }
            seen[r - 1] = true;
        }
        Ok(OrderedPartition { partition, rank })
    }

    /// The block with the largest λ.
    pub fn top_block(&self) -> &[usize] {
        let i = (0..self.rank.len()).max_by_key(|&i| self.rank[i]).unwrap();
        &self.partition.blocks()[i]
    }
}

impl Serialize for OrderedPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OrderedPartition", 2)?;
        st.serialize_field("blocks", &one_based(self.partition.blocks()))?;
        st.serialize_field("rank", &self.rank)?;
        st.end()
    }
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(Error::limit(format!(
            "enumeration requested for n = {n}, bound is {bound}"
        )));
    }
    Ok(())
}

/// Non-crossing partitions of the rank interval `lo..hi`.
fn nc_rank_partitions(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    if lo == hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // `lo` alone.
    for mut rest in nc_rank_partitions(lo + 1, hi) {
        rest.push(vec![lo]);
        out.push(rest);
    }
    // `lo` joined to the block of some later `j`; the stretch between is free.
    for j in lo + 1..hi {
        let inner = nc_rank_partitions(lo + 1, j);
        let outer = nc_rank_partitions(j, hi);
        for a in &inner {
            for b in &outer {
                let mut p = a.clone();
                for block in b {
                    let mut block = block.clone();
                    if block[0] == j {
                        block.insert(0, lo);
                    }
                    p.push(block);
                }
                out.push(p);
            }
        }
    }
    out
}

/// BNC(χ): partitions non-crossing with respect to ≺_χ, canonically sorted.
pub fn enumerate_bnc(chi: &ChiWord) -> Result<Vec<SetPartition>> {
    enumerate_bnc_bounded(chi, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_bnc_bounded(chi: &ChiWord, bound: usize) -> Result<Vec<SetPartition>> {
    check_bound(chi.len(), bound)?;
    Ok(bnc_of_word(chi.as_slice()))
}

pub(crate) fn bnc_of_word(word: &[Side]) -> Vec<SetPartition> {
    let perm = ChiPermutation::of_word(word);
    let mut out: Vec<SetPartition> = nc_rank_partitions(0, word.len())
        .into_iter()
        .map(|blocks| {
            SetPartition::canonical(
                blocks
                    .into_iter()
                    .map(|b| b.into_iter().map(|r| perm.order[r]).collect())
                    .collect(),
            )
        })
        .collect();
    out.sort_unstable();
    out
}

/// Existential interior test: some `v ∈ V` lies strictly between two
/// elements of `W` in ≺_χ.
pub fn is_interior(chi: &ChiWord, v: &[usize], w: &[usize]) -> Result<bool> {
    let n = chi.len();
    check_subset(n, v)?;
    check_subset(n, w)?;
    if v.is_empty() || w.is_empty() {
        return Err(Error::invalid("interior test needs nonempty sets"));
    }
    if v.iter().any(|p| w.contains(p)) {
        return Err(Error::invalid("interior test needs disjoint sets"));
    }
    Ok(interior_in(&chi_order(chi), v, w))
}

pub(crate) fn interior_in(perm: &ChiPermutation, v: &[usize], w: &[usize]) -> bool {
    let lo = w.iter().map(|&p| perm.rank[p]).min().unwrap();
    let hi = w.iter().map(|&p| perm.rank[p]).max().unwrap();
    v.iter().any(|&p| lo < perm.rank[p] && perm.rank[p] < hi)
}

/// The nesting forest of a bi-non-crossing partition: a block's parent is
/// the innermost block it is interior to.
#[derive(Clone, Debug)]
pub struct NestingForest {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub subtree_size: Vec<usize>,
}

impl NestingForest {
    pub fn new(perm: &ChiPermutation, partition: &SetPartition) -> Self {
        let blocks = partition.blocks();
        let k = blocks.len();
        let min_rank: Vec<usize> = blocks
            .iter()
            .map(|b| b.iter().map(|&p| perm.rank[p]).min().unwrap())
            .collect();
        let parent: Vec<Option<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && interior_in(perm, &blocks[i], &blocks[j]))
                    .max_by_key(|&j| min_rank[j])
            })
            .collect();
        let mut children = vec![Vec::new(); k];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        let mut subtree_size = vec![0; k];
        fn size(i: usize, children: &[Vec<usize>], out: &mut [usize]) -> usize {
            let s = 1 + children[i]
                .iter()
                .map(|&c| size(c, children, out))
                .sum::<usize>();
            out[i] = s;
            s
        }
        for i in 0..k {
            if parent[i].is_none() {
                size(i, &children, &mut subtree_size);
            }
        }
        NestingForest {
            parent,
            children,
            subtree_size,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Hook-length count `k! / ∏ subtree sizes` of admissible rankings.
    pub fn extension_count(&self) -> BigInt {
        let denom = self
            .subtree_size
            .iter()
            .fold(BigInt::one(), |acc, &s| acc * BigInt::from(s));
        factorial(self.len()) / denom
    }

    /// `(#admissible rankings) / k!`, which equals `1 / ∏ subtree sizes`.
    pub fn ranking_weight(&self) -> Q {
        let denom = self
            .subtree_size
            .iter()
            .fold(BigInt::one(), |acc, &s| acc * BigInt::from(s));
        Q::new(BigInt::one(), denom)
    }

    /// Every ranking in which each block is ranked above its ancestors.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        let k = self.len();
        let mut out = Vec::new();
        let mut rank = vec![0; k];
        let available: Vec<usize> = (0..k).filter(|&i| self.parent[i].is_none()).collect();
        self.extend(&mut rank, available, 1, &mut out);
        out
    }

    fn extend(&self, rank: &mut [usize], available: Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if available.is_empty() {
            out.push(rank.to_vec());
            return;
        }
        for (idx, &b) in available.iter().enumerate() {
            rank[b] = next;
            let mut rest = available.clone();
            rest.remove(idx);
            rest.extend_from_slice(&self.children[b]);
            self.extend(rank, rest, next + 1, out);
        }
        for &b in &available {
            rank[b] = 0;
        }
    }
}

/// BM(χ): bi-non-crossing partitions with rankings that put interior blocks
/// above the blocks enclosing them.
pub fn enumerate_bm(chi: &ChiWord) -> Result<Vec<OrderedPartition>> {
    enumerate_bm_bounded(chi, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_bm_bounded(chi: &ChiWord, bound: usize) -> Result<Vec<OrderedPartition>> {
    check_bound(chi.len(), bound)?;
    let perm = chi_order(chi);
    let mut out = Vec::new();
    for pi in bnc_of_word(chi.as_slice()) {
        let forest = NestingForest::new(&perm, &pi);
        for rank in forest.linear_extensions() {
            out.push(OrderedPartition {
                partition: pi.clone(),
                rank,
            });
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(s: &str) -> ChiWord {
        ChiWord::parse(s).unwrap()
    }

    fn one_based_order(c: &ChiWord) -> Vec<usize> {
        chi_order(c).order.iter().map(|p| p + 1).collect()
    }

    /// χ with L at {1,3,5,7,8,11} and R at {2,4,6,9,10,12}.
    fn twelve() -> ChiWord {
        chi("LRLRLRLLRRLR")
    }

    #[test]
    fn order_of_worked_example() {
        assert_eq!(
            one_based_order(&twelve()),
            vec![1, 3, 5, 7, 8, 11, 12, 10, 9, 6, 4, 2]
        );
        assert_eq!(one_based_order(&chi("LLL")), vec![1, 2, 3]);
        assert_eq!(one_based_order(&chi("RRR")), vec![3, 2, 1]);
        assert!(ChiWord::parse("").is_err());
        assert!(ChiWord::parse("LX").is_err());
    }

    #[test]
    fn word_indexing_round_trips() {
        for i in 0..word_count(6) {
            assert_eq!(word_index(&word_from_index(i)), i);
        }
        assert_eq!(word_index(&[]), 0);
        assert_eq!(word_index(&parse_word("L").unwrap()), 1);
        assert_eq!(word_index(&parse_word("R").unwrap()), 2);
        assert_eq!(word_index(&parse_word("LL").unwrap()), 3);
    }

    #[test]
    fn intervals() {
        assert_eq!(chi_intervals(&chi("L")).intervals, vec![vec![0]]);
        assert_eq!(
            chi_intervals(&chi("LR")).intervals,
            vec![vec![0], vec![0, 1], vec![1]]
        );
        // order 1,3,2
        let got = chi_intervals(&chi("LRL")).intervals;
        assert_eq!(got.len(), 6);
        for want in [vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
            assert!(got.contains(&want));
        }
        assert!(!got.contains(&vec![0, 1]));
        assert_eq!(chi_intervals(&twelve()).len(), 78);
    }

    #[test]
    fn pi_chi_omega_worked_example() {
        // a = 1, b = 2
        let omega = OmegaWord(vec![1, 1, 1, 1, 2, 1, 2, 1, 2, 2, 1, 1]);
        let mut got: Vec<Vec<usize>> = one_based(&pi_chi_omega(&twelve(), &omega).unwrap());
        got.sort();
        assert_eq!(
            got,
            vec![
                vec![1, 3],
                vec![2, 4, 6],
                vec![5, 7],
                vec![8, 11, 12],
                vec![9, 10]
            ]
        );
    }

    #[test]
    fn pi_chi_omega_small_cases() {
        let c = chi("LLR");
        assert_eq!(
            pi_chi_omega(&c, &OmegaWord(vec![2, 1, 2])).unwrap(),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            pi_chi_omega(&c, &OmegaWord(vec![4, 4, 4])).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert!(pi_chi_omega(&c, &OmegaWord(vec![1, 2])).is_err());
    }

    #[test]
    fn complement_gaps() {
        let c = chi("LRL");
        assert!(complement_intervals(&c, &[0, 1, 2]).unwrap().is_empty());
        assert_eq!(
            complement_intervals(&c, &[]).unwrap().intervals,
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            complement_intervals(&c, &[2]).unwrap().intervals,
            vec![vec![0], vec![1]]
        );
        assert!(complement_intervals(&c, &[3]).is_err());
    }

    #[test]
    fn interior_examples() {
        let c = chi("LLL");
        assert!(is_interior(&c, &[1], &[0, 2]).unwrap());
        assert!(!is_interior(&c, &[0], &[1, 2]).unwrap());
        assert!(is_interior(&c, &[0], &[0, 2]).is_err());
        // Order 1,3,5,7,8,11,12,10,9,6,4,2: {2,4,6} is the tail, so it
        // encloses nothing, while {1,2} spans everything.
        assert!(!is_interior(&twelve(), &[4, 6], &[1, 3, 5]).unwrap());
        assert!(is_interior(&twelve(), &[8, 9], &[0, 1]).unwrap());
    }

    #[test]
    fn small_enumeration_counts() {
        assert_eq!(enumerate_bnc(&chi("L")).unwrap().len(), 1);
        assert_eq!(enumerate_bnc(&chi("LRL")).unwrap().len(), 5);
        assert_eq!(enumerate_bnc(&chi("RLLR")).unwrap().len(), 14);
        assert_eq!(enumerate_bm(&chi("L")).unwrap().len(), 1);
        assert_eq!(enumerate_bm(&chi("LR")).unwrap().len(), 3);
        assert_eq!(enumerate_bm(&chi("RL")).unwrap().len(), 3);
        assert_eq!(enumerate_bm(&chi("LRL")).unwrap().len(), 12);
    }

    #[test]
    fn bound_is_enforced() {
        let long = ChiWord::new(vec![Side::Left; 13]).unwrap();
        assert!(matches!(enumerate_bnc(&long), Err(Error::ResourceLimit(_))));
        assert!(matches!(
            enumerate_bm_bounded(&chi("LLLL"), 3),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn crossing_pair_is_excluded() {
        // In ≺ order 1,3,2 for LRL, {1,2},{3} is non-crossing while in LLLL
        // {1,3},{2,4} crosses.
        let four = enumerate_bnc(&chi("LLLL")).unwrap();
        let crossing = SetPartition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!four.contains(&crossing));
        // For LLRR the order is 1,2,4,3, so {1,3},{2,4} is non-crossing.
        let mixed = enumerate_bnc(&chi("LLRR")).unwrap();
        assert!(mixed.contains(&crossing));
    }

    #[test]
    fn json_is_one_based() {
        let p = SetPartition::new(3, vec![vec![0, 2], vec![1]]).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"blocks":[[1,3],[2]]}"#
        );
        let op = OrderedPartition::new(p, vec![1, 2]).unwrap();
        assert_eq!(
            serde_json::to_string(&op).unwrap(),
            r#"{"blocks":[[1,3],[2]],"rank":[1,2]}"#
        );
    }
}
