//! Finite-dimensional model of the monotonic product space and its left and
//! right representations.
//!
//! Each family `k` has a space `X_k` with basis `e_0 = ξ_k, e_1, …` where the
//! `e_i` with `i ≥ 1` span `X_k°`. The product space has basis words
//! `x₁ ⊗ … ⊗ x_n` with `x_i ∈ X_{k_i}°` and `k₁ > … > k_n`, plus the vacuum
//! `ξ` (the empty word). Families are numbered from 0 here.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::distributions::WordDistribution;
use crate::error::{Error, Result};
use crate::partitions::Side;
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointedSpace {
    pub dim: usize,
}

impl PointedSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("a pointed space has dimension at least 1"));
        }
        Ok(PointedSpace { dim })
    }
}

/// A matrix acting on `X_k`; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOperator {
    pub family: usize,
    pub matrix: Vec<Vec<Q>>,
}

impl LocalOperator {
    pub fn new(family: usize, matrix: Vec<Vec<Q>>) -> Result<Self> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|r| r.len() != d) {
            return Err(Error::invalid("operator matrix must be square and nonempty"));
        }
        Ok(LocalOperator { family, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// `φ_{ξ_k}(T) = ⟨Tξ_k, ξ_k⟩`.
    pub fn vacuum_expectation(&self) -> &Q {
        &self.matrix[0][0]
    }

    pub fn compose(&self, other: &LocalOperator) -> Result<LocalOperator> {
        if self.family != other.family || self.dim() != other.dim() {
            return Err(Error::invalid("operators act on different spaces"));
        }
        let d = self.dim();
        let m = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| &self.matrix[i][k] * &other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        LocalOperator::new(self.family, m)
    }
}

/// A basis letter `(family, index)` with `index ≥ 1`.
pub type Letter = (usize, usize);

/// Finite linear combination of basis words (the empty word is `ξ`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProductVector {
    terms: BTreeMap<Vec<Letter>, Q>,
}

impl ProductVector {
    pub fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Q::one());
        ProductVector { terms }
    }

    /// `c · x₁ ⊗ … ⊗ x_n`; labels must strictly decrease and indices be ≥ 1.
    pub fn basis(word: Vec<Letter>, c: Q) -> Result<Self> {
        if word.iter().any(|&(_, i)| i == 0) {
            return Err(Error::invalid("tensor letters must lie in X_k°"));
        }
        if word.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::invalid("family labels must strictly decrease"));
        }
        let mut v = ProductVector::default();
        v.add_term(word, c);
        Ok(v)
    }

    fn add_term(&mut self, word: Vec<Letter>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, word: &[Letter]) -> Q {
        self.terms.get(word).cloned().unwrap_or_else(Q::zero)
    }

    /// `φ_ξ`-component, the coefficient of the vacuum.
    pub fn vacuum_coefficient(&self) -> Q {
        self.coefficient(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Letter>, &Q)> {
        self.terms.iter()
    }
}

/// The families of the model together with the word-length budget.
#[derive(Clone, Debug)]
pub struct Type2Model {
    spaces: Vec<PointedSpace>,
    max_len: usize,
}

impl Type2Model {
    pub fn new(spaces: Vec<PointedSpace>, max_len: usize) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::invalid("a model needs at least one family"));
        }
        Ok(Type2Model { spaces, max_len })
    }

    pub fn spaces(&self) -> &[PointedSpace] {
        &self.spaces
    }

    fn check(&self, t: &LocalOperator) -> Result<()> {
        let space = self.spaces.get(t.family).ok_or_else(|| {
            Error::invalid(format!("family {} is not in the model", t.family))
        })?;
        if space.dim != t.dim() {
            return Err(Error::invalid(format!(
                "operator of size {} on a space of dimension {}",
                t.dim(),
                space.dim
            )));
        }
        Ok(())
    }

    fn push(&self, out: &mut ProductVector, word: Vec<Letter>, c: Q) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if word.len() > self.max_len {
            return Err(Error::limit(format!(
                "a term of length {} exceeds the word-length budget {}",
                word.len(),
                self.max_len
            )));
        }
        out.add_term(word, c);
        Ok(())
    }

    /// `λ_k(T)`: acts at the head of each word.
    pub fn lambda_action(&self, t: &LocalOperator, v: &ProductVector) -> Result<ProductVector> {
        self.check(t)?;
        let k = t.family;
        let m = &t.matrix;
        let d = t.dim();
        let mut out = ProductVector::default();
        for (word, c) in v.terms() {
            match word.first() {
                Some(&(k1, _)) if k < k1 => {}
                Some(&(k1, i1)) if k == k1 => {
                    let rest = word[1..].to_vec();
                    self.push(&mut out, rest.clone(), c * &m[0][i1])?;
                    for i in 1..d {
                        let mut w = vec![(k, i)];
                        w.extend_from_slice(&rest);
                        self.push(&mut out, w, c * &m[i][i1])?;
                    }
                }
                // k above every label (or the vacuum): T sees ξ_k.
                _ => {
                    self.push(&mut out, word.clone(), c * &m[0][0])?;
                    for i in 1..d {
                        let mut w = vec![(k, i)];
                        w.extend_from_slice(word);
                        self.push(&mut out, w, c * &m[i][0])?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `ρ_k(T)`: acts at the tail of each word.
    pub fn rho_action(&self, t: &LocalOperator, v: &ProductVector) -> Result<ProductVector> {
        self.check(t)?;
        let k = t.family;
        let m = &t.matrix;
        let d = t.dim();
        let mut out = ProductVector::default();
        for (word, c) in v.terms() {
            match word.last() {
                Some(&(kn, _)) if k > kn => {}
                Some(&(kn, i_n)) if k == kn => {
                    let rest = word[..word.len() - 1].to_vec();
                    self.push(&mut out, rest.clone(), c * &m[0][i_n])?;
                    for i in 1..d {
                        let mut w = rest.clone();
                        w.push((k, i));
                        self.push(&mut out, w, c * &m[i][i_n])?;
                    }
                }
                _ => {
                    self.push(&mut out, word.clone(), c * &m[0][0])?;
                    for i in 1..d {
                        let mut w = word.clone();
                        w.push((k, i));
                        self.push(&mut out, w, c * &m[i][0])?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `φ_ξ(T₁ ⋯ T_n)` where each `T_j` is represented on the left or right.
    pub fn moment(&self, word: &[(Side, LocalOperator)]) -> Result<Q> {
        let mut v = ProductVector::vacuum();
        for (side, t) in word.iter().rev() {
            v = match side {
                Side::Left => self.lambda_action(t, &v)?,
                Side::Right => self.rho_action(t, &v)?,
            };
            if v.is_zero() {
                return Ok(Q::zero());
            }
        }
        Ok(v.vacuum_coefficient())
    }
}

/// Moment of a word in a model whose budget equals the word length.
pub fn type2_moment(spaces: &[PointedSpace], word: &[(Side, LocalOperator)]) -> Result<Q> {
    Type2Model::new(spaces.to_vec(), word.len())?.moment(word)
}

/// Joint distribution of `(λ_k(A), ρ_k(B))` inside one family: on `X_k`
/// both act on the single tensor factor, so `φ(w) = (W)_{00}` with `W` the
/// matrix product read in word order.
pub fn family_distribution(
    left: &LocalOperator,
    right: &LocalOperator,
    max_len: usize,
) -> Result<WordDistribution> {
    if left.family != right.family || left.dim() != right.dim() {
        return Err(Error::invalid("left and right operators must share a space"));
    }
    let d = left.dim();
    Ok(WordDistribution::from_fn(max_len, |word| {
        let mut row: Vec<Q> = (0..d).map(|j| if j == 0 { Q::one() } else { Q::zero() }).collect();
        for side in word {
            let m = match side {
                Side::Left => &left.matrix,
                Side::Right => &right.matrix,
            };
            row = (0..d)
                .map(|j| (0..d).map(|i| &row[i] * &m[i][j]).sum())
                .collect();
        }
        row[0].clone()
    }))
}
