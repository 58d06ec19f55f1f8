//! Exact integer polynomials in one variable.
//!
//! Coefficients are `i64` and every arithmetic step is overflow-checked.
//! A polynomial keeps the length it was built with, so `γ = 1 + 0τ` prints
//! as `(1,0)`; equality ignores trailing zeros.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<i64>) -> Self {
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![1] }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        IntPolynomial { coeffs }
    }

    /// `(1 + t)^k`, expanded with checked binomials.
    pub fn one_plus_t_pow(k: usize) -> Result<Self> {
        (0..=k)
            .map(|j| binomial(k as u64, j as u64).and_then(to_i64))
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    /// Coefficient of `t^i`, zero past the stored length.
    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Stored length minus one; `None` for the empty polynomial.
    pub fn declared_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the highest non-zero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn trimmed(&self) -> &[i64] {
        let end = self.degree().map_or(0, |d| d + 1);
        &self.coeffs[..end]
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| self.coeff(i).checked_add(other.coeff(i)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|i| self.coeff(i).checked_sub(other.coeff(i)).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(IntPolynomial::zero());
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        self.coeffs
            .iter()
            .map(|&c| c.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPolynomial { coeffs }
    }

    /// `p(t + shift)` by Taylor expansion with exact binomials.
    pub fn translate(&self, shift: i64) -> Result<Self> {
        let mut out = vec![0i64; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            // (t + s)^i = sum_j C(i,j) s^(i-j) t^j
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let binom = to_i64(binomial(i as u64, j as u64)?)?;
                let power = checked_pow(shift, (i - j) as u32)?;
                let term = c
                    .checked_mul(binom)
                    .and_then(|x| x.checked_mul(power))
                    .ok_or(Error::Overflow)?;
                *slot = slot.checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    /// Palindromic with respect to degree `n`: `c_i = c_{n-i}` for `0 ≤ i ≤ n`.
    pub fn is_palindromic(&self, n: usize) -> bool {
        self.degree().is_none_or(|d| d <= n) && (0..=n).all(|i| self.coeff(i) == self.coeff(n - i))
    }
}

impl PartialEq for IntPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for IntPolynomial {}

impl From<Vec<i64>> for IntPolynomial {
    fn from(coeffs: Vec<i64>) -> Self {
        IntPolynomial::new(coeffs)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc = C(n, i) here, so acc * (n - i) is divisible by i + 1
        acc = acc.checked_mul(n as u128 - i).ok_or(Error::Overflow)? / (i + 1);
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow);
        }
    }
    Ok(acc as u64)
}

pub(crate) fn to_i64(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

fn checked_pow(base: i64, exp: u32) -> Result<i64> {
    base.checked_pow(exp).ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_trailing_zeros() {
        assert_eq!(IntPolynomial::new(vec![1, 0]), IntPolynomial::new(vec![1]));
        assert_eq!(IntPolynomial::zero(), IntPolynomial::new(vec![0, 0]));
        assert_ne!(IntPolynomial::new(vec![1, 1]), IntPolynomial::new(vec![1]));
    }

    #[test]
    fn translate_matches_hand_expansion() {
        // 4 + 4t + t^2 at t-1 is 1 + 2t + t^2
        let f = IntPolynomial::new(vec![4, 4, 1]);
        assert_eq!(f.translate(-1).unwrap().coeffs(), &[1, 2, 1]);
    }

    #[test]
    fn multiplication_overflow_is_an_error() {
        let big = IntPolynomial::new(vec![i64::MAX / 2 + 1]);
        assert_eq!(big.checked_mul(&IntPolynomial::new(vec![2])), Err(Error::Overflow));
        assert_eq!(big.checked_add(&big), Err(Error::Overflow));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(62, 31).unwrap(), 465428353255261088);
        assert!(binomial(200, 100).is_err());
    }

    #[test]
    fn one_plus_t() {
        assert_eq!(IntPolynomial::one_plus_t_pow(3).unwrap().coeffs(), &[1, 3, 3, 1]);
        assert_eq!(IntPolynomial::one_plus_t_pow(0).unwrap().coeffs(), &[1]);
    }
}
