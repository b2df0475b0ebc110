//! Truncated formal power series in `u = 1/z` and `v = 1/w`.
//!
//! A Cauchy transform `G(z, w) = Σ M_{m,n} z^{-m-1} w^{-n-1}` is stored as the
//! series `Σ M_{m,n} u^{m+1} v^{n+1}`. A reciprocal transform `F(z)` is
//! stored as `S(u)` with `F(z) = z·S(1/z)`, so that the marginal Cauchy
//! transform is `g(u) = u / S(u)` and `F₁∘F₂` corresponds to `g₁∘g₂`.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::cumulants::CumulantTable;
use crate::distributions::{AtomicPlanarMeasure, GridDistribution};
use crate::error::{Error, Result};
use crate::poly::TimePolynomial;
use crate::rational::{binomial, q, qi, Q};

pub const DEFAULT_SERIES_ORDER: usize = 8;

/// Coefficient ring for series: exact rationals or polynomials in t.
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn from_q(c: Q) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn inverse(&self) -> Option<Self>;
}

impl Coeff for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
    fn from_q(c: Q) -> Self {
        c
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coeff for TimePolynomial {
    fn zero() -> Self {
        TimePolynomial::zero()
    }
    fn one() -> Self {
        TimePolynomial::constant(<Q as One>::one())
    }
    fn is_zero(&self) -> bool {
        TimePolynomial::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, c: &Q) -> Self {
        TimePolynomial::scale(self, c)
    }
    fn from_q(c: Q) -> Self {
        TimePolynomial::constant(c)
    }
    fn inverse(&self) -> Option<Self> {
        match self.degree() {
            Some(0) => Some(TimePolynomial::constant(self.coeff(0).recip())),
            _ => None,
        }
    }
}

/// `c₀ + c₁u + … + c_N u^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries1<T> {
    c: Vec<T>,
}

impl<T: Coeff> TruncatedSeries1<T> {
    pub fn new(c: Vec<T>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::invalid("a series needs at least one coefficient"));
        }
        Ok(TruncatedSeries1 { c })
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        TruncatedSeries1 {
            c: (0..=order).map(f).collect(),
        }
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_| T::zero())
    }

    pub fn constant(order: usize, c: T) -> Self {
        let mut s = Self::zeros(order);
        s.c[0] = c;
        s
    }

    /// The series `u`.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zeros(order);
        if order >= 1 {
            s.c[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(order, |i| self.coeff(i))
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::invalid(format!(
                "series orders differ: {} vs {}",
                self.order(),
                o.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_fn(self.order(), |i| self.c[i].plus(&o.c[i])))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_fn(self.order(), |i| self.c[i].minus(&o.c[i])))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_fn(self.order(), |i| self.c[i].scale(k))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.mul_trunc(o))
    }

    fn mul_trunc(&self, o: &Self) -> Self {
        let n = self.order();
        let mut out = vec![T::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        TruncatedSeries1 { c: out }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.c[0].inverse().ok_or_else(|| {
            Error::SingularSeries("constant term is not invertible".to_string())
        })?;
        let n = self.order();
        let mut out: Vec<T> = vec![inv0.clone()];
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc.plus(&self.c[j].times(&out[k - j]));
            }
            out.push(T::zero().minus(&acc.times(&inv0)));
        }
        Ok(TruncatedSeries1 { c: out })
    }

    /// `self(inner(u))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_same(inner)?;
        if !inner.c[0].is_zero() {
            return Err(Error::invalid("inner series must have zero constant term"));
        }
        let n = self.order();
        let mut acc = Self::constant(n, self.c[n].clone());
        for k in (0..n).rev() {
            acc = acc.mul_trunc(inner);
            acc.c[0] = acc.c[0].plus(&self.c[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with valuation exactly 1.
    pub fn reverse(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 || !self.c[0].is_zero() {
            return Err(Error::invalid("reverse needs zero constant term and order ≥ 1"));
        }
        let inv1 = self.c[1].inverse().ok_or_else(|| {
            Error::SingularSeries("linear coefficient is not invertible".to_string())
        })?;
        // Each pass of k ↦ k + (u − self(k))/c₁ fixes one more coefficient.
        let u = Self::variable(n);
        let mut k = u.mul_trunc(&Self::constant(n, inv1.clone()));
        for _ in 1..n {
            let err = u.sub(&self.compose(&k)?)?;
            k = k.add(&err.mul_trunc(&Self::constant(n, inv1.clone())))?;
        }
        Ok(k)
    }

    /// `self^e` for a series with constant term 1, via the binomial series.
    pub fn pow(&self, e: &Q) -> Result<Self> {
        if self.c[0] != T::one() {
            return Err(Error::invalid("rational powers need constant term 1"));
        }
        let n = self.order();
        let mut x = self.clone();
        x.c[0] = T::zero();
        let mut acc = Self::constant(n, T::one());
        let mut xk = Self::constant(n, T::one());
        for k in 1..=n {
            xk = xk.mul_trunc(&x);
            acc = acc.add(&xk.scale(&binomial(e, k)))?;
        }
        Ok(acc)
    }

    /// Divides by `u^k`, dropping the order by `k`; the low coefficients
    /// must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() || self.c[..k].iter().any(|x| !x.is_zero()) {
            return Err(Error::invalid(format!("series is not divisible by u^{k}")));
        }
        Ok(TruncatedSeries1 {
            c: self.c[k..].to_vec(),
        })
    }

    /// Multiplies by `u^k`, raising the order by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![T::zero(); k];
        c.extend(self.c.iter().cloned());
        TruncatedSeries1 { c }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries1<U> {
        TruncatedSeries1 {
            c: self.c.iter().map(f).collect(),
        }
    }
}

impl TruncatedSeries1<TimePolynomial> {
    pub fn eval_time(&self, t: &Q) -> TruncatedSeries1<Q> {
        self.map(|p| p.eval(t))
    }

    fn integrate_time(&self) -> Self {
        self.map(|p| p.integrate())
    }
}

/// `Σ c_{i,j} u^i v^j` with `i, j ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries2<T> {
    c: Vec<Vec<T>>,
}

pub type TimeSeries2 = TruncatedSeries2<TimePolynomial>;

impl<T: Coeff> TruncatedSeries2<T> {
    pub fn new(c: Vec<Vec<T>>) -> Result<Self> {
        let n = c.len();
        if n == 0 || c.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("a bivariate series needs a square coefficient table"));
        }
        Ok(TruncatedSeries2 { c })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        TruncatedSeries2 {
            c: (0..=order)
                .map(|i| (0..=order).map(|j| f(i, j)).collect())
                .collect(),
        }
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| T::zero())
    }

    /// `c · u^i v^j`.
    pub fn monomial(order: usize, i: usize, j: usize, c: T) -> Self {
        let mut s = Self::zeros(order);
        if i <= order && j <= order {
            s.c[i][j] = c;
        }
        s
    }

    /// `p(u) · q(v)`.
    pub fn outer(p: &TruncatedSeries1<T>, q: &TruncatedSeries1<T>) -> Result<Self> {
        p.check_same(q)?;
        Ok(Self::from_fn(p.order(), |i, j| p.c[i].times(&q.c[j])))
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.c
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.c
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_fn(order, |i, j| self.coeff(i, j))
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::invalid(format!(
                "series orders differ: {} vs {}",
                self.order(),
                o.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_fn(self.order(), |i, j| self.c[i][j].plus(&o.c[i][j])))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_fn(self.order(), |i, j| self.c[i][j].minus(&o.c[i][j])))
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::from_fn(self.order(), |i, j| self.c[i][j].scale(k))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.mul_trunc(o))
    }

    fn mul_trunc(&self, o: &Self) -> Self {
        let n = self.order();
        let mut out = vec![vec![T::zero(); n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let a = &self.c[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..=n - i {
                    for l in 0..=n - j {
                        let b = &o.c[k][l];
                        if !b.is_zero() {
                            out[i + k][j + l] = out[i + k][j + l].plus(&a.times(b));
                        }
                    }
                }
            }
        }
        TruncatedSeries2 { c: out }
    }

    /// `self(p(u), q(v))` for `p`, `q` with zero constant term.
    pub fn bicompose(&self, p: &TruncatedSeries1<T>, q: &TruncatedSeries1<T>) -> Result<Self> {
        let n = self.order();
        if p.order() != n || q.order() != n {
            return Err(Error::invalid("bicompose needs series of equal order"));
        }
        if !p.c[0].is_zero() || !q.c[0].is_zero() {
            return Err(Error::invalid("inner series must have zero constant term"));
        }
        let powers = |s: &TruncatedSeries1<T>| {
            let mut out = vec![TruncatedSeries1::constant(n, T::one())];
            for k in 1..=n {
                out.push(out[k - 1].mul_trunc(s));
            }
            out
        };
        let pp = powers(p);
        let qp = powers(q);
        let mut out = vec![vec![T::zero(); n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let c = &self.c[i][j];
                if c.is_zero() {
                    continue;
                }
                // p^i has valuation ≥ i, q^j valuation ≥ j.
                for a in i..=n {
                    let x = &pp[i].c[a];
                    if x.is_zero() {
                        continue;
                    }
                    let cx = c.times(x);
                    for b in j..=n {
                        let y = &qp[j].c[b];
                        if !y.is_zero() {
                            out[a][b] = out[a][b].plus(&cx.times(y));
                        }
                    }
                }
            }
        }
        Ok(TruncatedSeries2 { c: out })
    }

    /// Divides by `uv`, dropping the order by one.
    pub fn div_uv(&self) -> Result<Self> {
        let n = self.order();
        if n == 0
            || self.c[0].iter().any(|x| !x.is_zero())
            || self.c.iter().any(|r| !r[0].is_zero())
        {
            return Err(Error::invalid("series is not divisible by uv"));
        }
        Ok(Self::from_fn(n - 1, |i, j| self.c[i + 1][j + 1].clone()))
    }

    /// Multiplies by `uv`, raising the order by one.
    pub fn mul_uv(&self) -> Self {
        Self::from_fn(self.order() + 1, |i, j| {
            if i == 0 || j == 0 {
                T::zero()
            } else {
                self.c[i - 1][j - 1].clone()
            }
        })
    }

    /// Coefficient of `v^j` as a series in `u`.
    pub fn column(&self, j: usize) -> TruncatedSeries1<T> {
        TruncatedSeries1::from_fn(self.order(), |i| self.coeff(i, j))
    }

    /// Coefficient of `u^i` as a series in `v`.
    pub fn row(&self, i: usize) -> TruncatedSeries1<T> {
        TruncatedSeries1::from_fn(self.order(), |j| self.coeff(i, j))
    }

    /// `self^e` for constant term 1, via the binomial series.
    pub fn pow(&self, e: &Q) -> Result<Self> {
        let n = self.order();
        if self.c[0][0] != T::one() {
            return Err(Error::invalid("rational powers need constant term 1"));
        }
        let mut x = self.clone();
        x.c[0][0] = T::zero();
        let mut acc = Self::monomial(n, 0, 0, T::one());
        let mut xk = acc.clone();
        // x^k has total degree ≥ k, so k ≤ 2N suffices for the box.
        for k in 1..=2 * n {
            xk = xk.mul_trunc(&x);
            acc = acc.add(&xk.scale(&binomial(e, k)))?;
        }
        Ok(acc)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TruncatedSeries2<U> {
        TruncatedSeries2 {
            c: self
                .c
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }
}

impl TruncatedSeries2<TimePolynomial> {
    pub fn eval_time(&self, t: &Q) -> TruncatedSeries2<Q> {
        self.map(|p| p.eval(t))
    }
}

/// `G(u, v) = Σ M_{m,n} u^{m+1} v^{n+1}`, of order `grid order + 1`.
pub fn cauchy_from_grid(g: &GridDistribution) -> TruncatedSeries2<Q> {
    let n = g.order() + 1;
    TruncatedSeries2::from_fn(n, |i, j| {
        if i == 0 || j == 0 {
            <Q as Zero>::zero()
        } else {
            g.get(i - 1, j - 1).clone()
        }
    })
}

/// Inverse of [`cauchy_from_grid`].
pub fn grid_from_cauchy(g: &TruncatedSeries2<Q>) -> Result<GridDistribution> {
    GridDistribution::new(g.div_uv()?.rows().to_vec())
}

/// Left marginal Cauchy transform `Σ M_{m,0} u^{m+1}`.
pub fn left_marginal<T: Coeff>(g: &TruncatedSeries2<T>) -> TruncatedSeries1<T> {
    g.column(1)
}

/// Right marginal Cauchy transform `Σ M_{0,n} v^{n+1}`.
pub fn right_marginal<T: Coeff>(g: &TruncatedSeries2<T>) -> TruncatedSeries1<T> {
    g.row(1)
}

/// The reciprocal transform of a marginal `g(u) = u + …`, in the form `S`
/// with `F(z) = z·S(1/z)`. The result has order one less than `g`.
pub fn f_transform<T: Coeff>(marginal: &TruncatedSeries1<T>) -> Result<TruncatedSeries1<T>> {
    let unit = marginal.shift_down(1)?;
    if unit.coeff(0) != T::one() {
        return Err(Error::invalid("a marginal Cauchy transform starts with u"));
    }
    unit.reciprocal()
}

/// Back from `S` to the marginal `g(u) = u / S(u)`.
pub fn marginal_from_f<T: Coeff>(f: &TruncatedSeries1<T>) -> Result<TruncatedSeries1<T>> {
    Ok(f.reciprocal()?.shift_up(1))
}

/// `F₁∘F₂` in `S` form.
pub fn compose_f<T: Coeff>(
    f1: &TruncatedSeries1<T>,
    f2: &TruncatedSeries1<T>,
) -> Result<TruncatedSeries1<T>> {
    let g1 = marginal_from_f(f1)?;
    let g2 = marginal_from_f(f2)?;
    f_transform(&g1.compose(&g2)?)
}

/// Cauchy transform of `(a₁ + a₂, b₁ + b₂)`:
/// `G = [G₁/(uv)](g_{a₂}, g_{b₂}) · G₂`, where `g = u/S` is the marginal of
/// the second pair recovered from its reciprocal transforms.
pub fn convolve_transform(
    g1: &TruncatedSeries2<Q>,
    g2: &TruncatedSeries2<Q>,
    f2a: &TruncatedSeries1<Q>,
    f2b: &TruncatedSeries1<Q>,
) -> Result<TruncatedSeries2<Q>> {
    let n = g1.order();
    if g2.order() != n || f2a.order() + 1 != n || f2b.order() + 1 != n {
        return Err(Error::invalid("mismatched truncation orders"));
    }
    let pa = marginal_from_f(f2a)?.truncate(n - 1);
    let pb = marginal_from_f(f2b)?.truncate(n - 1);
    let h = g1.div_uv()?.bicompose(&pa, &pb)?;
    Ok(h.mul(&g2.div_uv()?)?.mul_uv())
}

/// Grid convolution computed through transforms.
pub fn grid_convolve_transform(
    a: &GridDistribution,
    b: &GridDistribution,
) -> Result<GridDistribution> {
    let g1 = cauchy_from_grid(a);
    let g2 = cauchy_from_grid(b);
    let fa = f_transform(&left_marginal(&g2))?;
    let fb = f_transform(&right_marginal(&g2))?;
    grid_from_cauchy(&convolve_transform(&g1, &g2, &fa, &fb)?)
}

/// Cumulant generating series. `atilde` is `Ã` in `u, v` coordinates:
/// `u·A₁(u) + v·A₂(v) + A(u, v) = Σ_{(m,n) ≠ 0} K_{m,n} u^m v^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunctions {
    pub a1: TruncatedSeries1<Q>,
    pub a2: TruncatedSeries1<Q>,
    pub a: TruncatedSeries2<Q>,
    pub atilde: TruncatedSeries2<Q>,
}

impl GeneratingFunctions {
    pub fn order(&self) -> usize {
        self.atilde.order()
    }
}

/// Series of a grid cumulant table up to `order`.
pub fn generating_functions(k: &CumulantTable, order: usize) -> Result<GeneratingFunctions> {
    if order == 0 {
        return Err(Error::invalid("generating functions need order ≥ 1"));
    }
    let rows = k.grid_rows(order)?;
    Ok(generating_from_grid(&rows))
}

fn generating_from_grid(rows: &[Vec<Q>]) -> GeneratingFunctions {
    let order = rows.len() - 1;
    let zero = <Q as Zero>::zero;
    GeneratingFunctions {
        a1: TruncatedSeries1::from_fn(order - 1, |i| rows[i + 1][0].clone()),
        a2: TruncatedSeries1::from_fn(order - 1, |j| rows[0][j + 1].clone()),
        a: TruncatedSeries2::from_fn(order, |i, j| {
            if i == 0 || j == 0 {
                zero()
            } else {
                rows[i][j].clone()
            }
        }),
        atilde: TruncatedSeries2::from_fn(order, |i, j| {
            if i + j == 0 {
                zero()
            } else {
                rows[i][j].clone()
            }
        }),
    }
}

/// The grid `K_{m,n}` read back from `Ã`.
pub fn cumulants_from_atilde(atilde: &TruncatedSeries2<Q>) -> Result<CumulantTable> {
    CumulantTable::from_grid(atilde.rows().to_vec())
}

/// `Ã` for the compound Poisson cumulants `K_{m,n} = λ·∫ sᵐtⁿ dν`, summed
/// atom by atom as `λ w (1/((1 − su)(1 − tv)) − 1)`.
pub fn compound_poisson_generating(
    lambda: &Q,
    nu: &AtomicPlanarMeasure,
    order: usize,
) -> Result<TruncatedSeries2<Q>> {
    let mut acc = TruncatedSeries2::zeros(order);
    let one = TruncatedSeries1::constant(order, <Q as One>::one());
    for atom in nu.atoms() {
        let geo = |x: &Q| -> Result<TruncatedSeries1<Q>> {
            one.sub(&TruncatedSeries1::variable(order).scale(x))?.reciprocal()
        };
        let term = TruncatedSeries2::outer(&geo(&atom.s)?, &geo(&atom.t)?)?
            .sub(&TruncatedSeries2::monomial(order, 0, 0, <Q as One>::one()))?;
        acc = acc.add(&term.scale(&(lambda * &atom.w)))?;
    }
    Ok(acc)
}

fn to_time1(s: &TruncatedSeries1<Q>) -> TruncatedSeries1<TimePolynomial> {
    s.map(|c| TimePolynomial::constant(c.clone()))
}

fn to_time2(s: &TruncatedSeries2<Q>) -> TruncatedSeries2<TimePolynomial> {
    s.map(|c| TimePolynomial::constant(c.clone()))
}

/// Marginal Cauchy transform `g_t(u) = 1/F_{j,t}(1/u)` of the flow
/// `∂_t F = −A_j(F)`, i.e. `∂_t g = g²·A_j(g)` with `g_0 = u`, as a series
/// of order `A_j.order() + 1` with polynomial coefficients.
pub fn evolve_marginal(a: &TruncatedSeries1<Q>) -> Result<TruncatedSeries1<TimePolynomial>> {
    let n = a.order() + 1;
    let a_t = to_time1(&a.truncate(n));
    let u = TruncatedSeries1::<TimePolynomial>::variable(n);
    let mut g = u.clone();
    // The u^d coefficient of g²·A(g) only involves coefficients of g below
    // degree d, so each pass fixes one more degree.
    for _ in 1..n {
        let rhs = g.mul(&g)?.mul(&a_t.compose(&g)?)?;
        g = u.add(&rhs.integrate_time())?;
    }
    Ok(g)
}

/// Solution of the joint flow in `u, v` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JointEvolution {
    /// Left and right marginal Cauchy transforms, order `N`.
    pub g1: TruncatedSeries1<TimePolynomial>,
    pub g2: TruncatedSeries1<TimePolynomial>,
    /// `E_t = G_t/(uv) = Σ M_{m,n}(t) u^m v^n`, order `N`.
    pub e: TimeSeries2,
}

impl JointEvolution {
    pub fn order(&self) -> usize {
        self.e.order()
    }

    /// `G_t`, of order `N + 1`.
    pub fn cauchy(&self) -> TimeSeries2 {
        self.e.mul_uv()
    }

    /// Moments `M_{m,n}(t)` for `m, n ≤ N`.
    pub fn moment_polynomial(&self, m: usize, n: usize) -> TimePolynomial {
        self.e.coeff(m, n)
    }

    pub fn moments_at(&self, t: &Q) -> Result<GridDistribution> {
        GridDistribution::new(self.e.eval_time(t).rows().to_vec())
    }

    /// `H_t = G_t·F_{1,t}·F_{2,t}` as `E_t · S_{1,t}(u) · S_{2,t}(v)`, of
    /// order `N − 1` because the reciprocal transforms lose one degree.
    pub fn h(&self) -> Result<TimeSeries2> {
        let s1 = f_transform(&self.g1)?;
        let s2 = f_transform(&self.g2)?;
        let n = s1.order();
        let outer = TruncatedSeries2::outer(&s1, &s2.truncate(n))?;
        self.e.truncate(n).mul(&outer)
    }
}

/// Integrates `∂_t G = G·Ã(F₁, F₂)` from `G_0 = uv`; in `u, v` coordinates
/// `∂_t E = E·Ã(g₁, g₂)` with `E_0 = 1`.
pub fn evolve_joint(gf: &GeneratingFunctions) -> Result<JointEvolution> {
    let n = gf.order();
    let g1 = evolve_marginal(&gf.a1)?.truncate(n);
    let g2 = evolve_marginal(&gf.a2)?.truncate(n);
    let b = to_time2(&gf.atilde).bicompose(&g1, &g2)?;
    let mut e = vec![vec![TimePolynomial::zero(); n + 1]; n + 1];
    e[0][0] = <TimePolynomial as Coeff>::one();
    // E_{ij} depends on E at strictly smaller total degree since B has no
    // constant term.
    for d in 1..=2 * n {
        for i in d.saturating_sub(n)..=d.min(n) {
            let j = d - i;
            let mut rhs = TimePolynomial::zero();
            for a in 0..=i {
                for bb in 0..=j {
                    if a + bb == 0 {
                        continue;
                    }
                    let x = &b.rows()[a][bb];
                    let y = &e[i - a][j - bb];
                    if !x.is_zero() && !y.is_zero() {
                        rhs = &rhs + &(x * y);
                    }
                }
            }
            e[i][j] = rhs.integrate();
        }
    }
    Ok(JointEvolution {
        g1,
        g2,
        e: TruncatedSeries2::new(e)?,
    })
}

/// Checks the flow identities at times `s, t`:
/// `g_{j,s+t} = g_{j,s}∘g_{j,t}`, `E_{s+t} = E_s(g_{1,t}, g_{2,t})·E_t`
/// (the Cauchy-transform semigroup divided by `uv`) and
/// `H_{s+t} = H_s(g_{1,t}, g_{2,t})·H_t`.
pub fn semigroup_check(evo: &JointEvolution, s: &Q, t: &Q) -> Result<bool> {
    let st = s + t;
    let at = |x: &TruncatedSeries1<TimePolynomial>, tt: &Q| x.eval_time(tt);
    let g1t = at(&evo.g1, t);
    let g2t = at(&evo.g2, t);
    let marginals = at(&evo.g1, &st) == at(&evo.g1, s).compose(&g1t)?
        && at(&evo.g2, &st) == at(&evo.g2, s).compose(&g2t)?;
    let e_s = evo.e.eval_time(s);
    let e_t = evo.e.eval_time(t);
    let joint = evo.e.eval_time(&st) == e_s.bicompose(&g1t, &g2t)?.mul(&e_t)?;
    let h = evo.h()?;
    let m = h.order();
    let h_rel = h.eval_time(&st)
        == h.eval_time(s)
            .bicompose(&g1t.truncate(m), &g2t.truncate(m))?
            .mul(&h.eval_time(t))?;
    Ok(marginals && joint && h_rel)
}

/// Closed-form `G_t` for the central limit cumulants with `α = β`:
/// `G_t = uv·P(u)·P(v)·R^{γ/α}` where `P = (1 − 2αtu²)^{-1/2}`,
/// `S = (1 − 2αtu²)^{1/2} = Σ s_k u^k` and
/// `R = 1 − uv Σ_{k≥2} s_k Σ_{i+j=k−2} u^i v^j`.
/// Generic in the coefficient ring so `t` may be a number or the symbol t.
pub fn clt_closed_form<T: Coeff>(
    alpha: &Q,
    beta: &Q,
    gamma: &Q,
    t: &T,
    order: usize,
) -> Result<TruncatedSeries2<T>> {
    if alpha != beta {
        return Err(Error::UnsupportedParameters(
            "closed form is only rational when α = β".to_string(),
        ));
    }
    if Zero::is_zero(alpha) {
        return Err(Error::invalid("α must be nonzero"));
    }
    if order == 0 {
        return Err(Error::invalid("order must be at least 1"));
    }
    let n = order;
    // S is needed to degree 2N to fill the box of R.
    let mut base = TruncatedSeries1::constant(2 * n, T::one());
    base.c[2] = t.scale(&(alpha * qi(-2)));
    let p = base.pow(&q(-1, 2))?.truncate(n);
    let s = base.pow(&q(1, 2))?;
    let mut r = TruncatedSeries2::monomial(n, 0, 0, T::one());
    for k in 2..=2 * n {
        let sk = s.coeff(k);
        if sk.is_zero() {
            continue;
        }
        for i in 0..=k - 2 {
            let j = k - 2 - i;
            if i < n && j < n {
                r.c[i + 1][j + 1] = r.c[i + 1][j + 1].minus(&sk);
            }
        }
    }
    let e = gamma / alpha;
    let body = TruncatedSeries2::outer(&p, &p)?.mul(&r.pow(&e)?)?;
    Ok(body.truncate(n - 1).mul_uv())
}

/// Grid cumulants `K_{m,n}` of a commuting-grid distribution as the
/// coefficient of `N` in the moments of the `N`-fold convolution. Each
/// `M_{m,n}(N)` is a polynomial of degree at most `m + n`, so its derivative
/// at 0 follows from the values at `N = 0, …, 2·order` by forward
/// differences: `P'(0) = Σ_k (−1)^{k−1} Δ^k P(0) / k`.
pub fn grid_cumulants(g: &GridDistribution) -> Result<CumulantTable> {
    let order = g.order();
    let points = 2 * order;
    let mut values = vec![GridDistribution::point_mass_origin(order)];
    for k in 1..=points {
        let next = if k == 1 {
            g.clone()
        } else {
            grid_convolve_transform(&values[k - 1], g)?
        };
        values.push(next);
    }
    let rows = (0..=order)
        .map(|m| {
            (0..=order)
                .map(|n| {
                    if m + n == 0 {
                        return <Q as Zero>::zero();
                    }
                    let mut diffs: Vec<Q> = values.iter().map(|v| v.get(m, n).clone()).collect();
                    let mut deriv = <Q as Zero>::zero();
                    for k in 1..=points {
                        for i in 0..diffs.len() - 1 {
                            diffs[i] = &diffs[i + 1] - &diffs[i];
                        }
                        diffs.pop();
                        let term = &diffs[0] / qi(k as i64);
                        if k % 2 == 1 {
                            deriv += term;
                        } else {
                            deriv -= term;
                        }
                    }
                    deriv
                })
                .collect()
        })
        .collect();
    CumulantTable::from_grid(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{grid_from_measure, Atom};

    fn s1(c: &[i64]) -> TruncatedSeries1<Q> {
        TruncatedSeries1::new(c.iter().map(|&x| qi(x)).collect()).unwrap()
    }

    #[test]
    fn reciprocal_of_geometric() {
        let geo = TruncatedSeries1::from_fn(6, |_| qi(1));
        assert_eq!(geo.reciprocal().unwrap(), s1(&[1, -1, 0, 0, 0, 0, 0]));
        assert!(matches!(
            s1(&[0, 1]).reciprocal(),
            Err(Error::SingularSeries(_))
        ));
    }

    #[test]
    fn reverse_is_two_sided_inverse() {
        let g = s1(&[0, 1, 0, 1, 0, 0, 0, 0, 0]);
        let k = g.reverse().unwrap();
        let id = TruncatedSeries1::variable(8);
        assert_eq!(g.compose(&k).unwrap(), id);
        assert_eq!(k.compose(&g).unwrap(), id);
        // u − u³ + 3u⁵ − 12u⁷
        assert_eq!(k, s1(&[0, 1, 0, -1, 0, 3, 0, -12, 0]));
    }

    #[test]
    fn bicompose_identity() {
        let uv = TruncatedSeries2::monomial(5, 1, 1, qi(1));
        let id = TruncatedSeries1::variable(5);
        assert_eq!(uv.bicompose(&id, &id).unwrap(), uv);
    }

    #[test]
    fn point_mass_f_transform() {
        let g = grid_from_measure(&AtomicPlanarMeasure::point_mass(qi(3), qi(-2)), 4);
        let cauchy = cauchy_from_grid(&g);
        assert_eq!(f_transform(&left_marginal(&cauchy)).unwrap(), s1(&[1, -3, 0, 0, 0]));
        assert_eq!(f_transform(&right_marginal(&cauchy)).unwrap(), s1(&[1, 2, 0, 0, 0]));
        let origin = cauchy_from_grid(&GridDistribution::point_mass_origin(2));
        assert_eq!(origin, TruncatedSeries2::monomial(3, 1, 1, qi(1)));
        assert_eq!(f_transform(&left_marginal(&origin)).unwrap(), s1(&[1, 0, 0]));
    }

    #[test]
    fn centered_f_transform() {
        // M₁ = 0, M₂ = 5, M₃ = 7: F = z − 5/z − 7/z² + O(z⁻³).
        let g = GridDistribution::from_fn(3, |m, n| match (m, n) {
            (2, 0) => qi(5),
            (3, 0) => qi(7),
            _ => qi(0),
        });
        let f = f_transform(&left_marginal(&cauchy_from_grid(&g))).unwrap();
        assert_eq!(f.coeff(1), qi(0));
        assert_eq!(f.coeff(2), qi(-5));
        assert_eq!(f.coeff(3), qi(-7));
    }

    #[test]
    fn transform_convolution_with_origin() {
        let g = GridDistribution::from_fn(3, |m, n| q((m + 2 * n) as i64, (m + 1) as i64));
        let origin = GridDistribution::point_mass_origin(3);
        assert_eq!(grid_convolve_transform(&g, &origin).unwrap(), g);
        let half = AtomicPlanarMeasure::new(vec![
            Atom { s: qi(0), t: qi(1), w: q(1, 2) },
            Atom { s: qi(1), t: qi(0), w: q(1, 2) },
        ])
        .unwrap();
        let h = grid_from_measure(&half, 2);
        let c = grid_convolve_transform(&h, &h).unwrap();
        assert_eq!(*c.get(2, 1), q(5, 8));
        assert_eq!(*c.get(2, 2), q(3, 4));
    }

    #[test]
    fn clt_generating_functions() {
        let k = CumulantTable::grid_from_fn(3, |m, n| match (m, n) {
            (2, 0) => qi(2),
            (0, 2) => qi(3),
            (1, 1) => q(1, 2),
            _ => qi(0),
        });
        let gf = generating_functions(&k, 3).unwrap();
        assert_eq!(gf.a1, s1(&[0, 2, 0]));
        assert_eq!(gf.a2, s1(&[0, 3, 0]));
        assert_eq!(gf.a, TruncatedSeries2::monomial(3, 1, 1, q(1, 2)));
    }

    #[test]
    fn zero_flow_is_static() {
        let k = CumulantTable::grid_from_fn(3, |_, _| qi(0));
        let gf = generating_functions(&k, 3).unwrap();
        assert_eq!(gf.atilde, TruncatedSeries2::zeros(3));
        let evo = evolve_joint(&gf).unwrap();
        assert_eq!(
            evo.cauchy(),
            TruncatedSeries2::monomial(4, 1, 1, <TimePolynomial as Coeff>::one())
        );
        assert_eq!(evo.g1, TruncatedSeries1::variable(3));
    }

    #[test]
    fn arcsine_marginal() {
        // F_t(z) = √(z² − 2αt) with α = 1: S = (1 − 2tu²)^{1/2}.
        let a = s1(&[0, 1, 0, 0, 0, 0, 0, 0]);
        let g = evolve_marginal(&a).unwrap();
        let f = f_transform(&g).unwrap();
        let t = |c: Q, k: usize| TimePolynomial::monomial(c, k);
        assert_eq!(f.coeff(2), t(qi(-1), 1));
        assert_eq!(f.coeff(4), t(q(-1, 2), 2));
        assert_eq!(f.coeff(6), t(q(-1, 2), 3));
        assert!(f.coeff(1).is_zero() && f.coeff(3).is_zero());
    }

    #[test]
    fn clt_closed_form_at_zero_time() {
        let g = clt_closed_form(&qi(1), &qi(1), &q(1, 2), &qi(0), 5).unwrap();
        assert_eq!(g, TruncatedSeries2::monomial(5, 1, 1, qi(1)));
        assert!(matches!(
            clt_closed_form(&qi(1), &qi(2), &qi(0), &qi(1), 4),
            Err(Error::UnsupportedParameters(_))
        ));
    }

    #[test]
    fn compound_generating_recovers_cumulants() {
        let tau = AtomicPlanarMeasure::new(vec![
            Atom { s: qi(1), t: qi(1), w: qi(15) },
            Atom { s: qi(-1), t: qi(1), w: qi(15) },
            Atom { s: qi(1), t: qi(-1), w: qi(15) },
        ])
        .unwrap();
        let at = compound_poisson_generating(&qi(1), &tau, 4).unwrap();
        let k = cumulants_from_atilde(&at).unwrap();
        assert_eq!(k.grid(2, 3).unwrap(), qi(15));
        assert_eq!(k.grid(1, 1).unwrap(), qi(-15));
        assert_eq!(k.grid(3, 3).unwrap(), qi(-15));
        let empty = compound_poisson_generating(&qi(2), &AtomicPlanarMeasure::default(), 3).unwrap();
        assert_eq!(empty, TruncatedSeries2::zeros(3));
    }
}
