//! Polynomials over ℚ in the base variables: the commutative ring `O`.

use crate::error::Error;
use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;
use crate::Result;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of `O = ℚ[x_1, …, x_p]`, stored as a map from exponent vectors
/// to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Poly::constant(dim, Scalar::one())
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(MultiIndex::zero(dim), c);
        }
        Poly { dim, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(dim: usize, i: usize) -> Self {
        Poly::monomial(MultiIndex::unit(dim, i), Scalar::one())
    }

    pub fn monomial(alpha: MultiIndex, c: Scalar) -> Self {
        let dim = alpha.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
        Poly { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(a, c)| a.is_zero() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.total()).max()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Scalar) {
        assert_eq!(alpha.dim(), self.dim, "dimension mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            // remove the now-zero entry; recover the key via retain
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    /// Multiplication by a monomial `x^α`.
    pub fn mul_monomial(&self, alpha: &MultiIndex) -> Poly {
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.add(alpha), v.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (alpha, c) in &self.terms {
            let e = alpha.get(i);
            if e == 0 {
                continue;
            }
            let mut v = alpha.exponents().to_vec();
            v[i] -= 1;
            out.add_term(MultiIndex::new(v), c * &Scalar::from_int(e as i64));
        }
        out
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self * other)
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        for (a, c) in &self.terms {
            a.write_canonical(out);
            c.write_canonical(out);
        }
    }
}

/// Product of two polynomials with the same base dimension.
pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly> {
    a.checked_mul(b)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = Poly::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.add(b), c * d);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            let mono = alpha.display_with("x");
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(dim: usize, i: usize) -> Poly {
        Poly::var(dim, i)
    }

    #[test]
    fn schoolbook_identity() {
        // (x+1)(x-1) = x^2 - 1
        let one = Poly::one(1);
        let lhs = &(&x(1, 0) + &one) * &(&x(1, 0) - &one);
        let mut expect = Poly::monomial(MultiIndex::new(vec![2]), Scalar::one());
        expect.add_term(MultiIndex::zero(1), Scalar::from_int(-1));
        assert_eq!(lhs, expect);
    }

    #[test]
    fn unit_and_monomials() {
        let f = &(&x(2, 0) * &x(2, 1)) + &Poly::one(2);
        assert_eq!(&f * &Poly::one(2), f);
        // (x1 x2)*(x2) = x1 x2^2
        let g = &(&x(2, 0) * &x(2, 1)) * &x(2, 1);
        assert_eq!(g, Poly::monomial(MultiIndex::new(vec![1, 2]), Scalar::one()));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(poly_mul(&Poly::one(1), &Poly::one(2)).is_err());
    }

    #[test]
    fn derivative_rule() {
        let f = &x(1, 0) * &x(1, 0);
        assert_eq!(f.derivative(0), x(1, 0).scale(&Scalar::from_int(2)));
    }
}
