//! Moment matrices and exact positive-semidefiniteness checks.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::distributions::GridDistribution;
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    data: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn new(data: Vec<Vec<Q>>) -> Result<Self> {
        let n = data.len();
        if data.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square"));
        }
        Ok(RationalMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        RationalMatrix {
            n,
            data: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Q::one() } else { Q::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.data[i][j] == self.data[j][i]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.data[j][i].clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::invalid("dimension mismatch"));
        }
        Ok(Self::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| &self.data[i][k] * &o.data[k][j]).sum()
        }))
    }

    /// `⟨Xv, v⟩`.
    pub fn quadratic_form(&self, v: &[Q]) -> Result<Q> {
        if v.len() != self.n {
            return Err(Error::invalid("vector length does not match matrix"));
        }
        let mut total = Q::zero();
        for i in 0..self.n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                total += &v[i] * &self.data[i][j] * &v[j];
            }
        }
        Ok(total)
    }
}

/// Position of the bidegree `(i₁, i₂)` in a moment matrix of size
/// `(n+1)²`: `i₂·(n+1) + i₁`, so for `n = 1` the order is
/// `(0,0), (1,0), (0,1), (1,1)`.
pub fn bidegree_index(n: usize, i1: usize, i2: usize) -> usize {
    i2 * (n + 1) + i1
}

/// `X_n[(i₁,i₂),(j₁,j₂)] = M[i₁+j₁][i₂+j₂]`.
pub fn moment_matrix(g: &GridDistribution, n: usize) -> Result<RationalMatrix> {
    if g.order() < 2 * n {
        return Err(Error::invalid(format!(
            "moment matrix of size n = {n} needs grid order {} (have {})",
            2 * n,
            g.order()
        )));
    }
    let size = (n + 1) * (n + 1);
    let pair = |k: usize| (k % (n + 1), k / (n + 1));
    Ok(RationalMatrix::from_fn(size, |a, b| {
        let (i1, i2) = pair(a);
        let (j1, j2) = pair(b);
        g.get(i1 + j1, i2 + j2).clone()
    }))
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det_exact(x: &RationalMatrix) -> Q {
    let n = x.n;
    if n == 0 {
        return Q::one();
    }
    let mut a = x.data.clone();
    let mut sign = Q::one();
    let mut prev = Q::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Q::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `X = Σ d_k l_k l_kᵀ` with every `d_k > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankOneTerm {
    #[serde(with = "serde_q")]
    pub d: Q,
    #[serde(serialize_with = "serialize_vec")]
    pub l: Vec<Q>,
}

fn serialize_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn serialize_opt_vec<S: serde::Serializer>(
    v: &Option<Vec<Q>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_vec(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    /// A vector `v` with `⟨Xv, v⟩ < 0` when not PSD.
    #[serde(serialize_with = "serialize_opt_vec")]
    pub witness: Option<Vec<Q>>,
    /// Rank-one decomposition when PSD.
    pub certificate: Option<Vec<RankOneTerm>>,
}

impl PsdVerdict {
    /// Rebuilds `Σ d l lᵀ` from the certificate.
    pub fn reconstruct(&self, n: usize) -> Option<RationalMatrix> {
        let cert = self.certificate.as_ref()?;
        Some(RationalMatrix::from_fn(n, |i, j| {
            cert.iter().map(|t| &t.d * &t.l[i] * &t.l[j]).sum()
        }))
    }
}

/// Exact verdict by symmetric elimination.
///
/// The working matrix `W` is kept equal to `CᵀXC` on the indices not yet
/// eliminated, where the columns of `C` are original-coordinate vectors. A
/// negative diagonal entry `W_jj` gives the witness `c_j`; a zero diagonal
/// with `W_ij ≠ 0` and `W_ii = 0` gives `c_i − sign(W_ij)·c_j`.
pub fn psd_check(x: &RationalMatrix) -> Result<PsdVerdict> {
    if !x.is_symmetric() {
        return Err(Error::invalid("psd_check needs a symmetric matrix"));
    }
    let n = x.n;
    let mut w = x.data.clone();
    let mut c: Vec<Vec<Q>> = RationalMatrix::identity(n).data; // c[col][row]
    let mut active: Vec<bool> = vec![true; n];
    let mut certificate = Vec::new();
    let not_psd = |v: Vec<Q>| PsdVerdict {
        is_psd: false,
        witness: Some(v),
        certificate: None,
    };
    loop {
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        if let Some(&j) = idx.iter().find(|&&j| w[j][j].is_negative()) {
            return Ok(not_psd(c[j].clone()));
        }
        let Some(&p) = idx.iter().find(|&&j| w[j][j].is_positive()) else {
            // Every remaining diagonal entry is zero.
            for &i in &idx {
                if let Some(&j) = idx.iter().find(|&&j| j != i && !w[i][j].is_zero()) {
                    let s = if w[i][j].is_positive() { Q::one() } else { -Q::one() };
                    let v = (0..n).map(|r| &c[i][r] - &s * &c[j][r]).collect();
                    return Ok(not_psd(v));
                }
            }
            return Ok(PsdVerdict {
                is_psd: true,
                witness: None,
                certificate: Some(certificate),
            });
        };
        let pivot = w[p][p].clone();
        // Column p of the residual.
        let l: Vec<Q> = (0..n)
            .map(|r| if active[r] { w[r][p].clone() } else { Q::zero() })
            .collect();
        // The residual X − Σ d l lᵀ vanishes off the active indices and
        // equals W on them, so this term removes row and column p.
        certificate.push(RankOneTerm {
            d: pivot.clone(),
            l: l.iter().map(|x| x / &pivot).collect(),
        });
        for &i in &idx {
            if i == p {
                continue;
            }
            let f = &w[i][p] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &j in &idx {
                let v = &w[i][j] - &f * &w[p][j];
                w[i][j] = v;
            }
            let cp = c[p].clone();
            for (ci, cpr) in c[i].iter_mut().zip(cp.iter()) {
                *ci -= &f * cpr;
            }
        }
        active[p] = false;
    }
}
