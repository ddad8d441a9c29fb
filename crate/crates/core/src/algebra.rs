//! Normal-form elements of free graded-commutative `O`-algebras on
//! derivative-decorated generators, with Koszul-sign canonicalization.

use crate::gens::GenId;
use crate::multiindex::MultiIndex;
use crate::poly::Poly;
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// An `O`-module basis vector `∂^β · v` of `D · v`: a generator together with
/// its operator decoration. The decoration does not change the homological
/// degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OGen {
    pub gen: GenId,
    pub deco: MultiIndex,
}

impl OGen {
    pub fn plain(gen: GenId, dim: usize) -> Self {
        OGen {
            gen,
            deco: MultiIndex::zero(dim),
        }
    }

    pub fn degree(&self) -> u32 {
        self.gen.degree
    }

    pub fn is_odd(&self) -> bool {
        self.gen.is_odd()
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        self.gen.write_canonical(out);
        self.deco.write_canonical(out);
    }
}

impl Ord for OGen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gen
            .cmp(&other.gen)
            .then_with(|| self.deco.cmp(&other.deco))
    }
}

impl PartialOrd for OGen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deco.is_zero() {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}({})", self.deco.display_with("d"), self.gen)
        }
    }
}

/// A sorted graded-symmetric word of decorated generators. Odd-degree letters
/// are squarefree; the Koszul sign of sorting is absorbed into coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    letters: Vec<OGen>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            letters: Vec::new(),
        }
    }

    pub fn single(letter: OGen) -> Self {
        Monomial {
            letters: vec![letter],
        }
    }

    /// Sorts a word into normal form, returning the Koszul sign; `None` if an
    /// odd letter repeats (the square of an odd generator vanishes).
    pub fn from_letters(mut letters: Vec<OGen>) -> Option<(Monomial, bool)> {
        // insertion sort, counting odd-odd transpositions
        let mut negative = false;
        for i in 1..letters.len() {
            let mut j = i;
            while j > 0 && letters[j] < letters[j - 1] {
                if letters[j].is_odd() && letters[j - 1].is_odd() {
                    negative = !negative;
                }
                letters.swap(j, j - 1);
                j -= 1;
            }
        }
        for w in letters.windows(2) {
            if w[0] == w[1] && w[0].is_odd() {
                return None;
            }
        }
        Some((Monomial { letters }, negative))
    }

    pub fn letters(&self) -> &[OGen] {
        &self.letters
    }

    pub fn is_unit(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.letters.iter().map(|l| l.degree()).sum()
    }

    /// Merges two sorted monomials, `None` if an odd letter squares to zero.
    pub fn merge(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        let mut negative = false;
        let mut i = 0;
        let mut j = 0;
        // odd letters remaining in self past position i
        let odd_tail: Vec<usize> = {
            let mut tails = vec![0usize; self.letters.len() + 1];
            for k in (0..self.letters.len()).rev() {
                tails[k] = tails[k + 1] + usize::from(self.letters[k].is_odd());
            }
            tails
        };
        while i < self.letters.len() && j < other.letters.len() {
            if self.letters[i] <= other.letters[j] {
                letters.push(self.letters[i].clone());
                i += 1;
            } else {
                // other[j] jumps over the remaining letters of self
                if other.letters[j].is_odd() && odd_tail[i] % 2 == 1 {
                    negative = !negative;
                }
                letters.push(other.letters[j].clone());
                j += 1;
            }
        }
        letters.extend_from_slice(&self.letters[i..]);
        letters.extend_from_slice(&other.letters[j..]);
        for w in letters.windows(2) {
            if w[0] == w[1] && w[0].is_odd() {
                return None;
            }
        }
        Some((Monomial { letters }, negative))
    }

    /// Extracts `pattern` as a sub-multiset, returning the remainder and the
    /// Koszul sign of moving the pattern letters to the front. `None` if the
    /// pattern does not divide this monomial.
    pub fn extract(&self, pattern: &Monomial) -> Option<(Monomial, bool)> {
        let mut rest = self.letters.clone();
        let mut negative = false;
        for p in &pattern.letters {
            let pos = rest.iter().position(|l| l == p)?;
            if p.is_odd() {
                let skipped_odd = rest[..pos].iter().filter(|l| l.is_odd()).count();
                if skipped_odd % 2 == 1 {
                    negative = !negative;
                }
            }
            rest.remove(pos);
        }
        Some((Monomial { letters: rest }, negative))
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.letters.len() as u32).to_le_bytes());
        for l in &self.letters {
            l.write_canonical(out);
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Homogeneity of an algebra element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Degree {
    Zero,
    Homogeneous(u32),
    Mixed,
}

impl Degree {
    pub fn homogeneous(&self) -> Option<u32> {
        match self {
            Degree::Homogeneous(n) => Some(*n),
            _ => None,
        }
    }
}

/// A normal-form element of a free graded-commutative `O`-algebra: a finite
/// map from monomials to nonzero polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgElem {
    dim: usize,
    terms: BTreeMap<Monomial, Poly>,
}

impl AlgElem {
    pub fn zero(dim: usize) -> Self {
        AlgElem {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        AlgElem::from_poly(Poly::one(dim))
    }

    pub fn from_poly(p: Poly) -> Self {
        let dim = p.dim();
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(Monomial::unit(), p);
        }
        AlgElem { dim, terms }
    }

    pub fn gen(dim: usize, g: GenId) -> Self {
        AlgElem::letter(dim, OGen::plain(g, dim))
    }

    pub fn letter(dim: usize, l: OGen) -> Self {
        AlgElem::term(dim, Monomial::single(l), Poly::one(dim))
    }

    pub fn term(dim: usize, m: Monomial, p: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(m, p);
        }
        AlgElem { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Poly {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn add_term(&mut self, m: Monomial, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(m)
            .or_insert_with(|| Poly::zero(self.dim));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, p)| (m.clone(), -p)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> AlgElem {
        if c.is_zero() {
            return AlgElem::zero(self.dim);
        }
        AlgElem {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, p)| (m.clone(), p.scale(c)))
                .collect(),
        }
    }

    pub fn scale_poly(&self, f: &Poly) -> AlgElem {
        let mut out = AlgElem::zero(self.dim);
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p * f);
        }
        out
    }

    /// Free graded-commutative product (no relations applied).
    pub fn free_mul(&self, other: &AlgElem) -> AlgElem {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = AlgElem::zero(self.dim);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &other.terms {
                if let Some((m, negative)) = m1.merge(m2) {
                    let p = p1 * p2;
                    out.add_term(m, if negative { -&p } else { p });
                }
            }
        }
        out
    }

    pub fn degree(&self) -> Degree {
        let mut deg: Option<u32> = None;
        if self.terms.is_empty() {
            return Degree::Zero;
        }
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d == m.degree() => {}
                Some(_) => return Degree::Mixed,
            }
        }
        Degree::Homogeneous(deg.unwrap())
    }

    /// The generators appearing in this element.
    pub fn support(&self) -> impl Iterator<Item = &GenId> {
        self.terms
            .keys()
            .flat_map(|m| m.letters().iter().map(|l| &l.gen))
    }

    /// Deterministic byte serialization, used for payload interning and
    /// golden tests.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.terms.len() as u32).to_le_bytes());
        for (m, p) in &self.terms {
            m.write_canonical(&mut out);
            p.write_canonical(&mut out);
        }
        out
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = format!("{}", p);
            if m.is_unit() {
                write!(f, "{}", coeff)?;
            } else if p.is_one() {
                write!(f, "{}", m)?;
            } else if p.terms().count() == 1 && !coeff.contains(' ') {
                write!(f, "{}*{}", coeff, m)?;
            } else {
                write!(f, "({})*{}", coeff, m)?;
            }
        }
        Ok(())
    }
}
