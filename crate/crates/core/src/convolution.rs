//! Mixed moments of bi-monotonically independent families and additive
//! convolution at the moment level.

use num_traits::{One, Zero};

use crate::distributions::{GridDistribution, Moments, WordDistribution};
use crate::error::{Error, Result};
use crate::partitions::{restrict, runs_by_label, ChiPermutation, ChiWord, OmegaWord, Side};
use crate::rational::Q;

/// Distributions of the pairs `(A_{k,ℓ}, A_{k,r})`, listed by increasing `k`.
#[derive(Clone, Debug)]
pub struct OrderedFamily {
    members: Vec<WordDistribution>,
}

impl OrderedFamily {
    pub fn new(members: Vec<WordDistribution>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("a family needs at least one member"));
        }
        Ok(OrderedFamily { members })
    }

    pub fn members(&self) -> &[WordDistribution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_lengths(chi: &ChiWord, omega: &OmegaWord) -> Result<()> {
    if chi.len() != omega.len() {
        return Err(Error::invalid(format!(
            "χ has length {} but ω has length {}",
            chi.len(),
            omega.len()
        )));
    }
    Ok(())
}

/// φ(a₁⋯a_n) for `a_j` in family `ω(j) ∈ {1, 2}`: family 1 is the lower one.
pub fn two_family_moment(
    d1: &impl Moments,
    d2: &impl Moments,
    chi: &ChiWord,
    omega: &OmegaWord,
) -> Result<Q> {
    check_lengths(chi, omega)?;
    if let Some(bad) = omega.0.iter().find(|&&l| l != 1 && l != 2) {
        return Err(Error::invalid(format!("ω takes values in {{1,2}}, got {bad}")));
    }
    let word = chi.as_slice();
    let low: Vec<usize> = (0..word.len()).filter(|&p| omega.0[p] == 1).collect();
    let mut value = d1.moment(&restrict(word, &low))?;
    for block in runs_by_label(&ChiPermutation::of_word(word), &omega.0) {
        if omega.0[block[0]] == 2 {
            value *= d2.moment(&restrict(word, &block))?;
        }
    }
    Ok(value)
}

fn member(fam: &OrderedFamily, label: usize) -> Result<&WordDistribution> {
    label
        .checked_sub(1)
        .and_then(|i| fam.members.get(i))
        .ok_or_else(|| {
            Error::invalid(format!(
                "family label {label} outside 1..={}",
                fam.members.len()
            ))
        })
}

/// Mixed moment of several families; labels are 1-based member indices.
///
/// Evaluated as a left-associated product: the highest label present plays
/// the role of family 2 against everything below it.
pub fn multi_family_moment(fam: &OrderedFamily, chi: &ChiWord, omega: &OmegaWord) -> Result<Q> {
    check_lengths(chi, omega)?;
    for &l in &omega.0 {
        member(fam, l)?;
    }
    peel_max(fam, chi.as_slice(), &omega.0)
}

fn peel_max(fam: &OrderedFamily, word: &[Side], labels: &[usize]) -> Result<Q> {
    let Some(&top) = labels.iter().max() else {
        return Ok(Q::one());
    };
    if labels.iter().all(|&l| l == top) {
        return member(fam, top)?.moment(word);
    }
    let split: Vec<usize> = labels.iter().map(|&l| if l == top { 2 } else { 1 }).collect();
    let rest: Vec<usize> = (0..word.len()).filter(|&p| labels[p] != top).collect();
    let mut value = peel_max(fam, &restrict(word, &rest), &restrict_labels(labels, &rest))?;
    for block in runs_by_label(&ChiPermutation::of_word(word), &split) {
        if labels[block[0]] == top {
            value *= member(fam, top)?.moment(&restrict(word, &block))?;
        }
    }
    Ok(value)
}

/// The same moment evaluated as a right-associated product: the lowest label
/// plays family 1 against the merged higher families.
pub fn multi_family_moment_right(
    fam: &OrderedFamily,
    chi: &ChiWord,
    omega: &OmegaWord,
) -> Result<Q> {
    check_lengths(chi, omega)?;
    for &l in &omega.0 {
        member(fam, l)?;
    }
    peel_min(fam, chi.as_slice(), &omega.0)
}

fn peel_min(fam: &OrderedFamily, word: &[Side], labels: &[usize]) -> Result<Q> {
    let Some(&bottom) = labels.iter().min() else {
        return Ok(Q::one());
    };
    if labels.iter().all(|&l| l == bottom) {
        return member(fam, bottom)?.moment(word);
    }
    let split: Vec<usize> = labels
        .iter()
        .map(|&l| if l == bottom { 1 } else { 2 })
        .collect();
    let low: Vec<usize> = (0..word.len()).filter(|&p| labels[p] == bottom).collect();
    let mut value = member(fam, bottom)?.moment(&restrict(word, &low))?;
    for block in runs_by_label(&ChiPermutation::of_word(word), &split) {
        if labels[block[0]] != bottom {
            value *= peel_min(
                fam,
                &restrict(word, &block),
                &restrict_labels(labels, &block),
            )?;
        }
    }
    Ok(value)
}

fn restrict_labels(labels: &[usize], subset: &[usize]) -> Vec<usize> {
    subset.iter().map(|&p| labels[p]).collect()
}

/// φ((a'₁+a''₁)⋯(a'_n+a''_n)) for a single word, with `a'` distributed by
/// `d1` and `a''` by `d2`: a sum over subsets V of `d1(w|V)` times the
/// `d2`-moments of the ≺-gaps of V.
pub fn convolve_moment(d1: &impl Moments, d2: &impl Moments, word: &[Side]) -> Result<Q> {
    let n = word.len();
    if n >= usize::BITS as usize - 1 {
        return Err(Error::limit("word too long for subset enumeration"));
    }
    let order = ChiPermutation::of_word(word).order;
    let mut total = Q::zero();
    let mut inside = vec![false; n];
    for mask in 0usize..(1 << n) {
        // Bit i of the mask refers to the i-th position in ≺ order.
        for (i, &p) in order.iter().enumerate() {
            inside[p] = mask >> i & 1 == 1;
        }
        let v: Vec<usize> = (0..n).filter(|&p| inside[p]).collect();
        let mut term = d1.moment(&restrict(word, &v))?;
        if term.is_zero() {
            continue;
        }
        let mut gap: Vec<usize> = Vec::new();
        for &p in &order {
            if inside[p] {
                if !gap.is_empty() {
                    gap.sort_unstable();
                    term *= d2.moment(&restrict(word, &gap))?;
                    gap.clear();
                }
            } else {
                gap.push(p);
            }
        }
        if !gap.is_empty() {
            gap.sort_unstable();
            term *= d2.moment(&restrict(word, &gap))?;
        }
        total += term;
    }
    Ok(total)
}

/// Distribution of `(a' + a'', b' + b'')` for bi-monotonically independent
/// pairs `(a', b') ~ d1` and `(a'', b'') ~ d2`.
pub fn convolve(d1: &WordDistribution, d2: &WordDistribution) -> Result<WordDistribution> {
    if d1.max_len() != d2.max_len() {
        return Err(Error::invalid(format!(
            "max_len mismatch: {} vs {}",
            d1.max_len(),
            d2.max_len()
        )));
    }
    WordDistribution::try_from_fn(d1.max_len(), |w| convolve_moment(d1, d2, w))
}

/// Weighted configurations of `len` letters of one side walked in ≺ order:
/// `table[len][v][g]` sums over ways to put `v` letters in V and leave the
/// last `g` letters in an open gap, weighting each closed gap by `closed(k)`.
fn one_sided_walk(order: usize, closed: impl Fn(usize) -> Q) -> Vec<Vec<Vec<Q>>> {
    let mut table = vec![vec![vec![Q::zero(); order + 1]; order + 1]; order + 1];
    table[0][0][0] = Q::one();
    for len in 0..order {
        for v in 0..=len {
            for g in 0..=len - v {
                let x = table[len][v][g].clone();
                if x.is_zero() {
                    continue;
                }
                let into_v = if g == 0 { x.clone() } else { &x * closed(g) };
                table[len + 1][v + 1][0] += into_v;
                table[len + 1][v][g + 1] += x;
            }
        }
    }
    table
}

/// Convolution of commuting-grid distributions.
///
/// For the word `LᵐRⁿ` the ≺ order is the `m` left letters followed by the
/// `n` right letters reversed, so the subset sum splits into an independent
/// walk over each side joined by the gap straddling the boundary.
pub fn grid_convolve(g1: &GridDistribution, g2: &GridDistribution) -> Result<GridDistribution> {
    if g1.order() != g2.order() {
        return Err(Error::invalid(format!(
            "grid order mismatch: {} vs {}",
            g1.order(),
            g2.order()
        )));
    }
    let order = g1.order();
    let left = one_sided_walk(order, |k| g2.get(k, 0).clone());
    let right = one_sided_walk(order, |k| g2.get(0, k).clone());
    Ok(GridDistribution::from_fn(order, |m, n| {
        let mut total = Q::zero();
        for vl in 0..=m {
            for gl in 0..=m - vl {
                let a = &left[m][vl][gl];
                if a.is_zero() {
                    continue;
                }
                for vr in 0..=n {
                    for gr in 0..=n - vr {
                        let b = &right[n][vr][gr];
                        if b.is_zero() {
                            continue;
                        }
                        total += a * b * g1.get(vl, vr) * g2.get(gl, gr);
                    }
                }
            }
        }
        total
    }))
}

/// `g` convolved with itself `n` times (`n ≥ 1`), by repeated squaring.
pub fn grid_convolve_power(g: &GridDistribution, n: usize) -> Result<GridDistribution> {
    if n == 0 {
        return Err(Error::invalid("power must be at least 1"));
    }
    let mut result: Option<GridDistribution> = None;
    let mut base = g.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => grid_convolve(&r, &base)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = grid_convolve(&base, &base)?;
    }
    Ok(result.expect("n ≥ 1"))
}
