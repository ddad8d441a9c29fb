//! The normal-ordered Weyl algebra `D` of polynomial-coefficient differential
//! operators, and its action on `O`.

use crate::error::Error;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::Result;
use num::BigInt;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element `Σ c · x^α ∂^β` of the Weyl algebra in normal order (all `x`
/// factors to the left of all `∂` factors). Normal order is a normal form:
/// two operators are equal iff their coefficient maps are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylOp {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Scalar>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

impl WeylOp {
    pub fn zero(dim: usize) -> Self {
        WeylOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        WeylOp::term(MultiIndex::zero(dim), MultiIndex::zero(dim), Scalar::one())
    }

    /// The operator `c · x^α ∂^β`.
    pub fn term(alpha: MultiIndex, beta: MultiIndex, c: Scalar) -> Self {
        assert_eq!(alpha.dim(), beta.dim(), "dimension mismatch");
        let dim = alpha.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((alpha, beta), c);
        }
        WeylOp { dim, terms }
    }

    /// The coordinate operator `x_{i+1}`.
    pub fn x(dim: usize, i: usize) -> Self {
        WeylOp::term(MultiIndex::unit(dim, i), MultiIndex::zero(dim), Scalar::one())
    }

    /// The derivation `∂_{i+1}`.
    pub fn d(dim: usize, i: usize) -> Self {
        WeylOp::term(MultiIndex::zero(dim), MultiIndex::unit(dim, i), Scalar::one())
    }

    /// The derivation `∂^β`.
    pub fn d_pow(beta: MultiIndex) -> Self {
        let dim = beta.dim();
        WeylOp::term(MultiIndex::zero(dim), beta, Scalar::one())
    }

    pub fn from_poly(f: &Poly) -> Self {
        let mut terms = BTreeMap::new();
        for (a, c) in f.terms() {
            terms.insert((a.clone(), MultiIndex::zero(f.dim())), c.clone());
        }
        WeylOp {
            dim: f.dim(),
            terms,
        }
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
                .all(|((a, b), c)| a.is_zero() && b.is_zero() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Scalar)> {
        self.terms.iter()
    }

    /// Maximal total operator order `|β|`, or `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| b.total()).max()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((alpha, beta))
            .or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Scalar) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero(self.dim);
        }
        WeylOp {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Normal-ordered product. Re-normalizes `∂^β x^γ` via the commutation
    /// rule `∂^β x^γ = Σ_k (β choose k)(γ choose k) k! x^{γ-k} ∂^{β-k}`.
    pub fn checked_mul(&self, other: &WeylOp) -> Result<WeylOp> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = WeylOp::zero(self.dim);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // Commute ∂^{b1} past x^{a2}.
                let kmaxes: Vec<u32> = (0..self.dim)
                    .map(|i| b1.get(i).min(a2.get(i)))
                    .collect();
                for k in enumerate_boxed(&kmaxes) {
                    let mut coeff = BigInt::from(1);
                    for i in 0..self.dim {
                        coeff *= binomial(b1.get(i), k.get(i))
                            * binomial(a2.get(i), k.get(i))
                            * factorial(k.get(i));
                    }
                    let alpha = a1.add(&a2.checked_sub(&k).unwrap());
                    let beta = b2.add(&b1.checked_sub(&k).unwrap());
                    let c = c1 * c2 * Scalar::from_bigint(coeff);
                    out.add_term(alpha, beta, c);
                }
            }
        }
        Ok(out)
    }

    /// Action on a polynomial: `(x^α ∂^β) f = x^α · ∂^β f`.
    pub fn checked_apply(&self, f: &Poly) -> Result<Poly> {
        if self.dim != f.dim() {
            return Err(Error::DimensionMismatch(self.dim, f.dim()));
        }
        let mut out = Poly::zero(self.dim);
        for ((a, b), c) in &self.terms {
            for (gamma, v) in f.terms() {
                if !b.divides(gamma) {
                    continue;
                }
                let mut coeff = BigInt::from(1);
                for i in 0..self.dim {
                    // falling factorial gamma_i (gamma_i - 1) ... (gamma_i - b_i + 1)
                    for j in 0..b.get(i) {
                        coeff *= BigInt::from(gamma.get(i) - j);
                    }
                }
                let alpha = a.add(&gamma.checked_sub(b).unwrap());
                out.add_term(alpha, c * v * Scalar::from_bigint(coeff));
            }
        }
        Ok(out)
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        for ((a, b), c) in &self.terms {
            a.write_canonical(out);
            b.write_canonical(out);
            c.write_canonical(out);
        }
    }
}

/// All multi-indices `k` with `k_i <= maxes_i` componentwise.
fn enumerate_boxed(maxes: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(maxes.len())];
    for (i, &m) in maxes.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (m as usize + 1));
        for base in &out {
            for e in 0..=m {
                let mut v = base.exponents().to_vec();
                v[i] = e;
                next.push(MultiIndex::new(v));
            }
        }
        out = next;
    }
    out
}

/// Normal-ordered product of Weyl operators.
pub fn weyl_mul(a: &WeylOp, b: &WeylOp) -> Result<WeylOp> {
    a.checked_mul(b)
}

/// The defining left action of `D` on `O`.
pub fn weyl_apply(op: &WeylOp, f: &Poly) -> Result<Poly> {
    op.checked_apply(f)
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self + &(-rhs)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            let mut mono = a.display_with("x");
            let dpart = b.display_with("d");
            if !dpart.is_empty() {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&dpart);
            }
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

    #[test]
    fn commutation_rule() {
        // ∂1 · x1 = x1 ∂1 + 1
        let d1 = WeylOp::d(1, 0);
        let x1 = WeylOp::x(1, 0);
        let prod = weyl_mul(&d1, &x1).unwrap();
        let expect = &WeylOp::term(
            MultiIndex::new(vec![1]),
            MultiIndex::new(vec![1]),
            Scalar::one(),
        ) + &WeylOp::one(1);
        assert_eq!(prod, expect);
        // x1 · ∂1 is already normal ordered
        assert_eq!(
            weyl_mul(&x1, &d1).unwrap(),
            WeylOp::term(MultiIndex::new(vec![1]), MultiIndex::new(vec![1]), Scalar::one())
        );
    }

    #[test]
    fn second_order_commutation() {
        // ∂1^2 · x1 = x1 ∂1^2 + 2 ∂1, verified against the action on monomials
        let d2 = WeylOp::d_pow(MultiIndex::new(vec![2]));
        let x1 = WeylOp::x(1, 0);
        let prod = weyl_mul(&d2, &x1).unwrap();
        let expect = &WeylOp::term(
            MultiIndex::new(vec![1]),
            MultiIndex::new(vec![2]),
            Scalar::one(),
        ) + &WeylOp::d(1, 0).scale(&Scalar::from_int(2));
        assert_eq!(prod, expect);
        for k in 0..=3u32 {
            let f = Poly::monomial(MultiIndex::new(vec![k]), Scalar::one());
            let lhs = weyl_apply(&prod, &f).unwrap();
            let rhs = weyl_apply(&d2, &weyl_apply(&x1, &f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn ring_axioms_on_samples() {
        // distributivity and unit on a deterministic sample grid
        let dim = 2;
        let sample = |seed: u32| {
            let mut w = WeylOp::zero(dim);
            w.add_term(
                MultiIndex::new(vec![seed % 3, (seed / 3) % 2]),
                MultiIndex::new(vec![(seed / 6) % 2, seed % 2]),
                Scalar::from_int((seed % 5) as i64 - 2),
            );
            w.add_term(
                MultiIndex::new(vec![(seed + 1) % 2, 0]),
                MultiIndex::new(vec![0, (seed + 1) % 3]),
                Scalar::one(),
            );
            w
        };
        for s in 0..12u32 {
            let a = sample(s);
            let b = sample(s + 5);
            let c = sample(s + 9);
            let lhs = a.checked_mul(&(&b + &c)).unwrap();
            let rhs = &a.checked_mul(&b).unwrap() + &a.checked_mul(&c).unwrap();
            assert_eq!(lhs, rhs, "left distributivity");
            let one = WeylOp::one(dim);
            assert_eq!(a.checked_mul(&one).unwrap(), a);
            assert_eq!(one.checked_mul(&a).unwrap(), a);
        }
    }

    #[test]
    fn action_examples() {
        let d1 = WeylOp::d(1, 0);
        let x_sq = Poly::monomial(MultiIndex::new(vec![2]), Scalar::one());
        assert_eq!(
            weyl_apply(&d1, &x_sq).unwrap(),
            Poly::var(1, 0).scale(&Scalar::from_int(2))
        );
        let xd = weyl_mul(&WeylOp::x(1, 0), &d1).unwrap();
        assert_eq!(weyl_apply(&xd, &Poly::var(1, 0)).unwrap(), Poly::var(1, 0));
        let f = &Poly::var(1, 0) + &Poly::one(1);
        assert_eq!(weyl_apply(&WeylOp::one(1), &f).unwrap(), f);
    }
}
