//! Moment–cumulant transforms.
//!
//! A moment is a sum over bi-non-crossing partitions π of
//! `(#admissible rankings / |π|!) · ∏_V K_{χ|V}`; the ranking count is the
//! hook-length count of the nesting forest, so the weight of π is
//! `1 / ∏ subtree sizes`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::convolution::convolve;
use crate::distributions::{Moments, WordDistribution};
use crate::error::{Error, Result};
use crate::partitions::{
    bnc_of_word, intervals_of_word, restrict, side_counts, word_count, word_from_index,
    word_index, word_to_string, ChiPermutation, ChiWord, NestingForest, Side,
    DEFAULT_ENUMERATION_BOUND,
};
use crate::poly::TimePolynomial;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    /// Indexed by [`word_index`].
    Words { max_len: usize, entries: Vec<Option<Q>> },
    /// `K_w = k[#L(w)][#R(w)]`.
    Grid { order: usize, k: Vec<Vec<Q>> },
}

/// Cumulants `K_χ`, either per word or on the `(#L, #R)` grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantTable {
    storage: Storage,
}

impl CumulantTable {
    pub fn from_fn(max_len: usize, mut f: impl FnMut(&[Side]) -> Q) -> Self {
        let mut entries = vec![None; word_count(max_len)];
        for (i, e) in entries.iter_mut().enumerate().skip(1) {
            *e = Some(f(&word_from_index(i)));
        }
        CumulantTable {
            storage: Storage::Words { max_len, entries },
        }
    }

    /// Entries keyed by `"LRL"`-style strings; absent words stay missing.
    pub fn from_map(map: &BTreeMap<String, Q>) -> Result<Self> {
        let words = map
            .iter()
            .map(|(k, v)| Ok((crate::partitions::parse_word(k)?, v.clone())))
            .collect::<Result<Vec<_>>>()?;
        if words.iter().any(|(w, _)| w.is_empty()) {
            return Err(Error::invalid("cumulants are indexed by nonempty words"));
        }
        let max_len = words.iter().map(|(w, _)| w.len()).max().unwrap_or(0);
        if max_len > 20 {
            return Err(Error::limit("cumulant words longer than 20"));
        }
        let mut entries = vec![None; word_count(max_len)];
        for (w, v) in words {
            entries[word_index(&w)] = Some(v);
        }
        Ok(CumulantTable {
            storage: Storage::Words { max_len, entries },
        })
    }

    /// Grid table; `k[0][0]` is ignored.
    pub fn from_grid(k: Vec<Vec<Q>>) -> Result<Self> {
        let order = k
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::invalid("cumulant grid must have at least one row"))?;
        if k.iter().any(|r| r.len() != order + 1) {
            return Err(Error::invalid("cumulant grid must be square"));
        }
        Ok(CumulantTable {
            storage: Storage::Grid { order, k },
        })
    }

    pub fn grid_from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let k = (0..=order)
            .map(|m| {
                (0..=order)
                    .map(|n| if m + n == 0 { Q::zero() } else { f(m, n) })
                    .collect()
            })
            .collect();
        CumulantTable {
            storage: Storage::Grid { order, k },
        }
    }

    pub fn get(&self, word: &[Side]) -> Result<Q> {
        let missing = || Error::IncompleteTable(word_to_string(word));
        if word.is_empty() {
            return Err(Error::invalid("cumulants are indexed by nonempty words"));
        }
        match &self.storage {
            Storage::Words { max_len, entries } => {
                if word.len() > *max_len {
                    return Err(missing());
                }
                entries[word_index(word)].clone().ok_or_else(missing)
            }
            Storage::Grid { order, k } => {
                let (l, r) = side_counts(word);
                if l > *order || r > *order {
                    return Err(missing());
                }
                Ok(k[l][r].clone())
            }
        }
    }

    /// `K_{m,n}`, the cumulant of the word `LᵐRⁿ`.
    pub fn grid(&self, m: usize, n: usize) -> Result<Q> {
        let mut w = vec![Side::Left; m];
        w.extend(std::iter::repeat(Side::Right).take(n));
        self.get(&w)
    }

    /// The square grid of `K_{m,n}` up to `order` (entry `[0][0]` is 0).
    pub fn grid_rows(&self, order: usize) -> Result<Vec<Vec<Q>>> {
        (0..=order)
            .map(|m| {
                (0..=order)
                    .map(|n| if m + n == 0 { Ok(Q::zero()) } else { self.grid(m, n) })
                    .collect()
            })
            .collect()
    }

    /// Largest `order` such that every grid entry up to it is available.
    pub fn grid_order(&self) -> Option<usize> {
        match &self.storage {
            Storage::Grid { order, .. } => Some(*order),
            Storage::Words { .. } => None,
        }
    }

    /// Longest word a per-word table can hold.
    pub fn max_len(&self) -> Option<usize> {
        match &self.storage {
            Storage::Words { max_len, .. } => Some(*max_len),
            Storage::Grid { .. } => None,
        }
    }

    /// Every present entry of length at most `max_len`, keyed by word.
    pub fn to_map(&self, max_len: usize) -> BTreeMap<String, Q> {
        (1..word_count(max_len))
            .filter_map(|i| {
                let w = word_from_index(i);
                self.get(&w).ok().map(|v| (word_to_string(&w), v))
            })
            .collect()
    }

    /// `K_χ(N.a) = N·K_χ(a)`.
    pub fn scale(&self, c: &Q) -> Self {
        let storage = match &self.storage {
            Storage::Words { max_len, entries } => Storage::Words {
                max_len: *max_len,
                entries: entries
                    .iter()
                    .map(|e| e.as_ref().map(|x| x * c))
                    .collect(),
            },
            Storage::Grid { order, k } => Storage::Grid {
                order: *order,
                k: k.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
            },
        };
        CumulantTable { storage }
    }
}

fn check_len(n: usize) -> Result<()> {
    if n > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::limit(format!(
            "word of length {n} exceeds the enumeration bound {DEFAULT_ENUMERATION_BOUND}"
        )));
    }
    Ok(())
}

/// One product `weight · ∏ K_{block}` with blocks given by word index.
#[derive(Clone, Debug)]
struct Term {
    weight: Q,
    blocks: Vec<usize>,
}

/// Partition-sum terms for `word`, merged by the multiset of block words.
fn terms(word: &[Side]) -> Vec<Term> {
    let perm = ChiPermutation::of_word(word);
    let mut merged: HashMap<Vec<usize>, Q> = HashMap::new();
    for pi in bnc_of_word(word) {
        let forest = NestingForest::new(&perm, &pi);
        let mut blocks: Vec<usize> = pi
            .blocks()
            .iter()
            .map(|b| word_index(&restrict(word, b)))
            .collect();
        blocks.sort_unstable();
        *merged.entry(blocks).or_insert_with(Q::zero) += forest.ranking_weight();
    }
    let mut out: Vec<Term> = merged
        .into_iter()
        .map(|(blocks, weight)| Term { weight, blocks })
        .collect();
    out.sort_by(|a, b| a.blocks.cmp(&b.blocks));
    out
}

/// φ(a₁⋯a_n) from cumulants via the partition sum.
pub fn moment_from_cumulants(k: &CumulantTable, chi: &ChiWord) -> Result<Q> {
    check_len(chi.len())?;
    evaluate(&terms(chi.as_slice()), |i| k.get(&word_from_index(i)))
}

fn evaluate(terms: &[Term], mut k: impl FnMut(usize) -> Result<Q>) -> Result<Q> {
    let mut total = Q::zero();
    for t in terms {
        let mut prod = t.weight.clone();
        for &b in &t.blocks {
            prod *= k(b)?;
        }
        total += prod;
    }
    Ok(total)
}

/// Partition-sum terms for every word up to a length, shared across tables.
#[derive(Clone, Debug)]
pub struct MomentCumulantPlan {
    max_len: usize,
    terms: Vec<Vec<Term>>,
}

impl MomentCumulantPlan {
    pub fn new(max_len: usize) -> Result<Self> {
        check_len(max_len)?;
        let terms = (0..word_count(max_len))
            .map(|i| {
                if i == 0 {
                    Vec::new()
                } else {
                    terms(&word_from_index(i))
                }
            })
            .collect();
        Ok(MomentCumulantPlan { max_len, terms })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// All moments up to the plan's length.
    pub fn moments(&self, k: &CumulantTable) -> Result<WordDistribution> {
        let cache: Vec<Option<Q>> = (0..word_count(self.max_len))
            .map(|i| if i == 0 { None } else { k.get(&word_from_index(i)).ok() })
            .collect();
        WordDistribution::try_from_fn(self.max_len, |w| {
            evaluate(&self.terms[word_index(w)], |b| {
                cache[b]
                    .clone()
                    .ok_or_else(|| Error::IncompleteTable(word_to_string(&word_from_index(b))))
            })
        })
    }

    /// All cumulants up to the plan's length, solved by increasing length.
    pub fn cumulants(&self, d: &impl Moments) -> Result<CumulantTable> {
        let n = word_count(self.max_len);
        let mut k: Vec<Option<Q>> = vec![None; n];
        for i in 1..n {
            let word = word_from_index(i);
            let mut value = d.moment(&word)?;
            for t in &self.terms[i] {
                if t.blocks.len() < 2 {
                    continue;
                }
                let mut prod = t.weight.clone();
                for &b in &t.blocks {
                    prod *= k[b].as_ref().expect("shorter words are solved first");
                }
                value -= prod;
            }
            k[i] = Some(value);
        }
        Ok(CumulantTable {
            storage: Storage::Words {
                max_len: self.max_len,
                entries: k,
            },
        })
    }
}

/// `K_χ` from moments, solving for shorter subwords first (memoised per call).
pub fn cumulant_from_moments(d: &impl Moments, chi: &ChiWord) -> Result<Q> {
    check_len(chi.len())?;
    let mut memo = HashMap::new();
    cumulant_rec(d, chi.as_slice(), &mut memo)
}

fn cumulant_rec(d: &impl Moments, word: &[Side], memo: &mut HashMap<usize, Q>) -> Result<Q> {
    let idx = word_index(word);
    if let Some(v) = memo.get(&idx) {
        return Ok(v.clone());
    }
    let mut value = d.moment(word)?;
    for t in terms(word) {
        if t.blocks.len() < 2 {
            continue;
        }
        let mut prod = t.weight;
        for b in t.blocks {
            prod *= cumulant_rec(d, &word_from_index(b), memo)?;
        }
        value -= prod;
    }
    memo.insert(idx, value.clone());
    Ok(value)
}

/// All cumulants of `d` up to its `max_len`.
pub fn cumulants_from_moments(d: &WordDistribution) -> Result<CumulantTable> {
    MomentCumulantPlan::new(d.max_len())?.cumulants(d)
}

/// Evaluates φ_t through the interval recursion
/// `φ_t(w) = ∫_0^t Σ_{V ∈ I(w)} φ_s(w|_{V^c}) K_{w|_V} ds`, memoised by word.
pub struct PhiT<'a> {
    table: &'a CumulantTable,
    memo: HashMap<usize, TimePolynomial>,
}

impl<'a> PhiT<'a> {
    pub fn new(table: &'a CumulantTable) -> Self {
        PhiT {
            table,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, word: &[Side]) -> Result<TimePolynomial> {
        if word.is_empty() {
            return Ok(TimePolynomial::constant(Q::one()));
        }
        let idx = word_index(word);
        if let Some(p) = self.memo.get(&idx) {
            return Ok(p.clone());
        }
        let mut derivative = TimePolynomial::zero();
        for v in intervals_of_word(word) {
            let k = self.table.get(&restrict(word, &v))?;
            if k.is_zero() {
                continue;
            }
            let rest: Vec<Side> = (0..word.len())
                .filter(|p| !v.contains(p))
                .map(|p| word[p])
                .collect();
            let inner = self.eval(&rest)?;
            derivative = &derivative + &inner.scale(&k);
        }
        let p = derivative.integrate();
        self.memo.insert(idx, p.clone());
        Ok(p)
    }
}

pub fn phi_t(k: &CumulantTable, chi: &ChiWord) -> Result<TimePolynomial> {
    PhiT::new(k).eval(chi.as_slice())
}

/// Distribution of `(N.a, N.b)`: the `N`-fold convolution of `d` with itself.
pub fn dot_distribution(d: &WordDistribution, n: usize) -> Result<WordDistribution> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let mut acc = d.clone();
    for _ in 1..n {
        acc = convolve(&acc, d)?;
    }
    Ok(acc)
}

/// φ(N.a₁ ⋯ N.a_n).
pub fn dot_moment(d: &WordDistribution, chi: &ChiWord, n: usize) -> Result<Q> {
    let d = d.truncate(chi.len())?;
    dot_distribution(&d, n)?.moment(chi.as_slice())
}
