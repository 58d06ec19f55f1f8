//! f-, h- and γ-polynomials.

use crate::complex::{clique_f_vector, CompatibilityGraph, FVector};
use crate::error::{Error, Result};
use crate::polynomial::IntPolynomial;

/// `h(t) = f(t - 1)`.
pub fn f_to_h(f: &FVector) -> Result<IntPolynomial> {
    f.to_polynomial()?.translate(-1)
}

/// The unique `γ` with `h(t) = Σ γ_i t^i (1+t)^(n-2i)`, found by peeling off
/// one layer per index from the low end.
pub fn h_to_gamma(h: &IntPolynomial, n: usize) -> Result<IntPolynomial> {
    let degree = h.degree().unwrap_or(0);
    if degree != n {
        return Err(Error::DegreeMismatch { expected: n, found: degree });
    }
    if !h.is_palindromic(n) {
        return Err(Error::NotPalindromic(h.coeffs().to_vec()));
    }
    let mut rest = h.clone();
    let mut gamma = Vec::with_capacity(n / 2 + 1);
    for i in 0..=n / 2 {
        let g = rest.coeff(i);
        let layer = IntPolynomial::one_plus_t_pow(n - 2 * i)?.shift(i).checked_scale(g)?;
        rest = rest.checked_sub(&layer)?;
        gamma.push(g);
    }
    // palindromic h always peels to zero; anything left is a bug upstream
    if !rest.is_zero() {
        return Err(Error::NotPalindromic(h.coeffs().to_vec()));
    }
    Ok(IntPolynomial::new(gamma))
}

/// `Σ γ_i t^i (1+t)^(n-2i)`.
pub fn gamma_to_h(gamma: &IntPolynomial, n: usize) -> Result<IntPolynomial> {
    let mut h = IntPolynomial::zero();
    for (i, &g) in gamma.coeffs().iter().enumerate() {
        if g == 0 {
            continue;
        }
        if 2 * i > n {
            return Err(Error::DegreeMismatch { expected: n / 2, found: i });
        }
        let layer = IntPolynomial::one_plus_t_pow(n - 2 * i)?.shift(i).checked_scale(g)?;
        h = h.checked_add(&layer)?;
    }
    Ok(h)
}

/// Gal's inequality: every γ coefficient is non-negative.
pub fn gal_check(gamma: &IntPolynomial) -> bool {
    gamma.coeffs().iter().all(|&c| c >= 0)
}

/// f, h and γ of a simple graph in one go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vectors {
    pub f: FVector,
    pub h: IntPolynomial,
    pub gamma: IntPolynomial,
}

pub fn vectors(g: &CompatibilityGraph) -> Result<Vectors> {
    let f = clique_f_vector(g)?;
    let h = f_to_h(&f)?;
    let gamma = h_to_gamma(&h, g.dimension())?;
    Ok(Vectors { f, h, gamma })
}

pub fn gamma_of(g: &CompatibilityGraph) -> Result<IntPolynomial> {
    vectors(g).map(|v| v.gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::new(c.to_vec())
    }

    #[test]
    fn h_examples() {
        let h = |c: Vec<u64>| f_to_h(&FVector::new(c).unwrap()).unwrap().into_coeffs();
        assert_eq!(h(vec![4, 4, 1]), vec![1, 2, 1]);
        assert_eq!(h(vec![5, 5, 1]), vec![1, 3, 1]);
        assert_eq!(h(vec![14, 21, 9, 1]), vec![1, 6, 6, 1]);
        assert_eq!(h(vec![1]), vec![1]);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(h_to_gamma(&poly(&[1, 2, 1]), 2).unwrap().coeffs(), &[1, 0]);
        assert_eq!(h_to_gamma(&poly(&[1, 3, 1]), 2).unwrap().coeffs(), &[1, 1]);
        assert_eq!(h_to_gamma(&poly(&[1, 6, 6, 1]), 3).unwrap().coeffs(), &[1, 3]);
        assert_eq!(h_to_gamma(&poly(&[1]), 0).unwrap().coeffs(), &[1]);
        assert_eq!(
            h_to_gamma(&poly(&[1, 2, 2]), 2),
            Err(Error::NotPalindromic(vec![1, 2, 2]))
        );
        assert!(matches!(h_to_gamma(&poly(&[1, 2, 1]), 3), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn gal_examples() {
        assert!(gal_check(&poly(&[1, 0])));
        assert!(gal_check(&poly(&[1, 3])));
        assert!(!gal_check(&poly(&[1, -1])));
    }

    #[test]
    fn gamma_round_trip() {
        for (h, n) in [(vec![1, 6, 6, 1], 3), (vec![1, 11, 24, 11, 1], 4), (vec![1, 4, 6, 4, 1], 4)] {
            let h = poly(&h);
            let g = h_to_gamma(&h, n).unwrap();
            assert_eq!(gamma_to_h(&g, n).unwrap(), h);
        }
    }
}
