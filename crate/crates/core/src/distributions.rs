//! Moment functionals of a single two-faced pair `(a, b)`.
//!
//! [`WordDistribution`] stores φ on every word over `{L, R}` up to a length;
//! [`GridDistribution`] stores `M[m][n] = φ(aᵐbⁿ)` for a pair whose moments
//! only depend on the letter counts.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{
    restrict, side_counts, word_count, word_from_index, word_index, word_to_string, ChiWord,
    Side,
};
use crate::rational::Q;

pub const DEFAULT_MAX_LEN: usize = 8;
pub const DEFAULT_ORDER: usize = 8;

/// Anything that can report φ on a word.
pub trait Moments {
    fn moment(&self, word: &[Side]) -> Result<Q>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordDistribution {
    max_len: usize,
    /// Indexed by [`word_index`].
    moments: Vec<Q>,
}

impl WordDistribution {
    /// Builds the table from `f`, which is never called on the empty word.
    pub fn from_fn(max_len: usize, mut f: impl FnMut(&[Side]) -> Q) -> Self {
        let mut moments = Vec::with_capacity(word_count(max_len));
        moments.push(Q::one());
        for i in 1..word_count(max_len) {
            moments.push(f(&word_from_index(i)));
        }
        WordDistribution { max_len, moments }
    }

    pub fn try_from_fn(max_len: usize, mut f: impl FnMut(&[Side]) -> Result<Q>) -> Result<Self> {
        let mut moments = Vec::with_capacity(word_count(max_len));
        moments.push(Q::one());
        for i in 1..word_count(max_len) {
            moments.push(f(&word_from_index(i))?);
        }
        Ok(WordDistribution { max_len, moments })
    }

    /// Builds from a map keyed by `"LRL"`-style strings. Every nonempty word
    /// up to `max_len` must be present; the empty word is fixed to 1.
    pub fn from_map(max_len: usize, map: &BTreeMap<String, Q>) -> Result<Self> {
        let mut moments: Vec<Option<Q>> = vec![None; word_count(max_len)];
        moments[0] = Some(Q::one());
        for (key, value) in map {
            let word = crate::partitions::parse_word(key)?;
            if word.len() > max_len {
                return Err(Error::invalid(format!(
                    "word {key} longer than max_len {max_len}"
                )));
            }
            if word.is_empty() && !value.is_one() {
                return Err(Error::invalid("moment of the empty word must be 1"));
            }
            moments[word_index(&word)] = Some(value.clone());
        }
        let moments = moments
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::invalid(format!(
                        "missing moment for word {}",
                        word_to_string(&word_from_index(i))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WordDistribution { max_len, moments })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// `(word, moment)` pairs in dense-index order, empty word first.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Side>, &Q)> {
        self.moments
            .iter()
            .enumerate()
            .map(|(i, m)| (word_from_index(i), m))
    }

    /// Restricts to words of length at most `max_len`.
    pub fn truncate(&self, max_len: usize) -> Result<Self> {
        if max_len > self.max_len {
            return Err(Error::limit(format!(
                "cannot extend a table of max_len {} to {max_len}",
                self.max_len
            )));
        }
        Ok(WordDistribution {
            max_len,
            moments: self.moments[..word_count(max_len)].to_vec(),
        })
    }
}

impl Moments for WordDistribution {
    fn moment(&self, word: &[Side]) -> Result<Q> {
        if word.len() > self.max_len {
            return Err(Error::limit(format!(
                "word of length {} exceeds max_len {}",
                word.len(),
                self.max_len
            )));
        }
        Ok(self.moments[word_index(word)].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridDistribution {
    order: usize,
    /// `m[i][j] = φ(aⁱbʲ)` for `i, j ≤ order`.
    m: Vec<Vec<Q>>,
}

impl GridDistribution {
    pub fn new(m: Vec<Vec<Q>>) -> Result<Self> {
        let order = m
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::invalid("grid must have at least one row"))?;
        if m.iter().any(|row| row.len() != order + 1) {
            return Err(Error::invalid("grid must be square"));
        }
        if !m[0][0].is_one() {
            return Err(Error::invalid("grid entry M[0][0] must be 1"));
        }
        Ok(GridDistribution { order, m })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let m = (0..=order)
            .map(|i| {
                (0..=order)
                    .map(|j| if i == 0 && j == 0 { Q::one() } else { f(i, j) })
                    .collect()
            })
            .collect();
        GridDistribution { order, m }
    }

    /// Distribution of the pair `(0, 0)`.
    pub fn point_mass_origin(order: usize) -> Self {
        Self::from_fn(order, |_, _| Q::zero())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.m
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::limit(format!(
                "cannot extend a grid of order {} to {order}",
                self.order
            )));
        }
        Ok(GridDistribution {
            order,
            m: self.m[..=order].iter().map(|r| r[..=order].to_vec()).collect(),
        })
    }

    pub fn left_marginal(&self) -> Vec<Q> {
        self.m.iter().map(|r| r[0].clone()).collect()
    }

    pub fn right_marginal(&self) -> Vec<Q> {
        self.m[0].clone()
    }
}

impl Moments for GridDistribution {
    fn moment(&self, word: &[Side]) -> Result<Q> {
        let (l, r) = side_counts(word);
        if l > self.order || r > self.order {
            return Err(Error::limit(format!(
                "word needs grid entry ({l}, {r}) beyond order {}",
                self.order
            )));
        }
        Ok(self.m[l][r].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub s: Q,
    pub t: Q,
    pub w: Q,
}

/// A finitely supported signed measure on the plane.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomicPlanarMeasure {
    atoms: Vec<Atom>,
}

impl AtomicPlanarMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if a.w.is_zero() {
                return Err(Error::invalid("atom weights must be nonzero"));
            }
            if atoms[..i].iter().any(|b| b.s == a.s && b.t == a.t) {
                return Err(Error::invalid(format!(
                    "duplicate atom at ({}, {})",
                    a.s, a.t
                )));
            }
        }
        Ok(AtomicPlanarMeasure { atoms })
    }

    pub fn point_mass(s: Q, t: Q) -> Self {
        AtomicPlanarMeasure {
            atoms: vec![Atom { s, t, w: Q::one() }],
        }
    }

    /// Merges atoms at equal points and drops those whose weight cancels.
    pub fn from_weighted_points(points: impl IntoIterator<Item = (Q, Q, Q)>) -> Self {
        let mut merged: Vec<Atom> = Vec::new();
        for (s, t, w) in points {
            match merged.iter_mut().find(|a| a.s == s && a.t == t) {
                Some(a) => a.w += w,
                None => merged.push(Atom { s, t, w }),
            }
        }
        merged.retain(|a| !a.w.is_zero());
        AtomicPlanarMeasure { atoms: merged }
    }

    /// `μ₁ ⊗ μ₂` for two measures on the line given as `(point, weight)`.
    pub fn product(left: &[(Q, Q)], right: &[(Q, Q)]) -> Self {
        Self::from_weighted_points(left.iter().flat_map(|(s, ws)| {
            right
                .iter()
                .map(move |(t, wt)| (s.clone(), t.clone(), ws * wt))
        }))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Q {
        self.atoms.iter().map(|a| &a.w).sum()
    }

    /// `Σ w · sᵐ tⁿ`, with `0⁰ = 1`.
    pub fn raw_moment(&self, m: usize, n: usize) -> Q {
        self.atoms
            .iter()
            .map(|a| pow(&a.s, m) * pow(&a.t, n) * &a.w)
            .sum()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_weighted_points(
            self.atoms
                .iter()
                .map(|a| (a.s.clone(), a.t.clone(), &a.w * c)),
        )
    }
}

fn pow(x: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, _| acc * x)
}

/// Grid of moments of `μ`. The entry `M[0][0]` is fixed to 1 whatever the
/// total mass; use [`AtomicPlanarMeasure::raw_moment`] for the raw value.
pub fn grid_from_measure(mu: &AtomicPlanarMeasure, order: usize) -> GridDistribution {
    GridDistribution::from_fn(order, |m, n| mu.raw_moment(m, n))
}

/// The word table of a grid: `w ↦ M[#L(w)][#R(w)]`, up to length `order`.
pub fn word_from_grid(g: &GridDistribution) -> WordDistribution {
    WordDistribution::from_fn(g.order(), |w| {
        let (l, r) = side_counts(w);
        g.get(l, r).clone()
    })
}

/// φ(a_V) where `a_j` is the letter `χ(j)` and V is read in index order.
pub fn moment_of(d: &impl Moments, chi: &ChiWord, subset: &[usize]) -> Result<Q> {
    if let Some(&p) = subset.iter().find(|&&p| p >= chi.len()) {
        return Err(Error::invalid(format!(
            "position {} outside 1..={}",
            p + 1,
            chi.len()
        )));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    d.moment(&restrict(chi.as_slice(), &sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::parse_word;
    use crate::rational::{q, qi};

    fn half_half() -> AtomicPlanarMeasure {
        AtomicPlanarMeasure::new(vec![
            Atom { s: qi(0), t: qi(1), w: q(1, 2) },
            Atom { s: qi(1), t: qi(0), w: q(1, 2) },
        ])
        .unwrap()
    }

    fn tau() -> AtomicPlanarMeasure {
        AtomicPlanarMeasure::new(vec![
            Atom { s: qi(1), t: qi(1), w: qi(15) },
            Atom { s: qi(-1), t: qi(1), w: qi(15) },
            Atom { s: qi(1), t: qi(-1), w: qi(15) },
        ])
        .unwrap()
    }

    #[test]
    fn grid_of_two_point_measure() {
        let g = grid_from_measure(&half_half(), 4);
        assert_eq!(*g.get(0, 0), qi(1));
        for k in 1..=4 {
            assert_eq!(*g.get(k, 0), q(1, 2));
            assert_eq!(*g.get(0, k), q(1, 2));
            for j in 1..=4 {
                assert_eq!(*g.get(k, j), qi(0));
            }
        }
    }

    #[test]
    fn grid_of_tau() {
        let g = grid_from_measure(&tau(), 5);
        assert_eq!(tau().total_mass(), qi(45));
        for m in 0..=5i32 {
            for n in 0..=5i32 {
                if m + n == 0 {
                    continue;
                }
                let want = 15 * (-1i64).pow(m as u32) + 15 * (-1i64).pow(n as u32) + 15;
                assert_eq!(*g.get(m as usize, n as usize), qi(want));
            }
        }
    }

    #[test]
    fn origin_and_point_masses() {
        let g = grid_from_measure(&AtomicPlanarMeasure::point_mass(qi(0), qi(0)), 3);
        assert_eq!(g, GridDistribution::point_mass_origin(3));
        let d = word_from_grid(&grid_from_measure(
            &AtomicPlanarMeasure::point_mass(qi(1), qi(1)),
            4,
        ));
        assert_eq!(d.moment(&parse_word("LRLR").unwrap()).unwrap(), qi(1));
    }

    #[test]
    fn words_from_grid() {
        let d = word_from_grid(&grid_from_measure(&half_half(), 4));
        assert_eq!(d.moment(&parse_word("LR").unwrap()).unwrap(), qi(0));
        assert_eq!(d.moment(&parse_word("LL").unwrap()).unwrap(), q(1, 2));
        assert_eq!(d.moment(&[]).unwrap(), qi(1));
        assert!(matches!(
            d.moment(&parse_word("LLLLL").unwrap()),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn subword_moments() {
        let chi = ChiWord::parse("LLR").unwrap();
        let d = word_from_grid(&grid_from_measure(
            &AtomicPlanarMeasure::point_mass(qi(2), qi(3)),
            3,
        ));
        assert_eq!(moment_of(&d, &chi, &[]).unwrap(), qi(1));
        assert_eq!(moment_of(&d, &chi, &[0, 2]).unwrap(), qi(6));
        let e = word_from_grid(&grid_from_measure(&half_half(), 3));
        assert_eq!(moment_of(&e, &chi, &[0, 1, 2]).unwrap(), qi(0));
        assert!(moment_of(&e, &chi, &[3]).is_err());
    }

    #[test]
    fn measure_validation() {
        let dup = vec![
            Atom { s: qi(1), t: qi(1), w: qi(1) },
            Atom { s: qi(1), t: qi(1), w: qi(2) },
        ];
        assert!(AtomicPlanarMeasure::new(dup).is_err());
        assert!(AtomicPlanarMeasure::new(vec![Atom { s: qi(0), t: qi(0), w: qi(0) }]).is_err());
        assert!(GridDistribution::new(vec![vec![qi(2)]]).is_err());
    }

    #[test]
    fn from_map_requires_every_word() {
        let mut map = BTreeMap::new();
        map.insert("L".to_string(), qi(1));
        assert!(WordDistribution::from_map(1, &map).is_err());
        map.insert("R".to_string(), qi(2));
        let d = WordDistribution::from_map(1, &map).unwrap();
        assert_eq!(d.moment(&parse_word("R").unwrap()).unwrap(), qi(2));
    }
}
