//! Polynomials in the time parameter t with rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{qi, Q};

/// `coeffs[k]` is the coefficient of `t^k`; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TimePolynomial {
    coeffs: Vec<Q>,
}

impl TimePolynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TimePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        TimePolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `c · t^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }

    /// `∫_0^t p(s) ds`.
    pub fn integrate(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Q::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c / qi(k as i64 + 1));
        }
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl From<Q> for TimePolynomial {
    fn from(c: Q) -> Self {
        Self::constant(c)
    }
}

impl Add for &TimePolynomial {
    type Output = TimePolynomial;
    fn add(self, o: &TimePolynomial) -> TimePolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        TimePolynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &TimePolynomial {
    type Output = TimePolynomial;
    fn sub(self, o: &TimePolynomial) -> TimePolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        TimePolynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &TimePolynomial {
    type Output = TimePolynomial;
    fn mul(self, o: &TimePolynomial) -> TimePolynomial {
        if self.is_zero() || o.is_zero() {
            return TimePolynomial::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        TimePolynomial::new(v)
    }
}

impl Neg for &TimePolynomial {
    type Output = TimePolynomial;
    fn neg(self) -> TimePolynomial {
        TimePolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for TimePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("t")?,
                1 => write!(f, "({c})t")?,
                _ if c.is_one() => write!(f, "t^{k}")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn arithmetic_and_calculus() {
        let p = TimePolynomial::new(vec![qi(1), qi(2)]); // 1 + 2t
        let sq = &p * &p; // 1 + 4t + 4t²
        assert_eq!(sq.coeffs(), &[qi(1), qi(4), qi(4)]);
        assert_eq!(sq.eval(&q(1, 2)), qi(4));
        assert_eq!(sq.integrate().coeffs(), &[qi(0), qi(1), qi(2), q(4, 3)]);
        assert_eq!(sq.integrate().derivative(), sq);
        assert!((&p - &p).is_zero());
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(TimePolynomial::monomial(qi(3), 2).to_string(), "(3)t^2");
    }
}
