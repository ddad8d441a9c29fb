//! The graded symmetrization (averaging) operator on tensor words.

use crate::algebra::OGen;
use crate::poly::Poly;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// A linear combination of ordered tensor words with polynomial coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorElem {
    dim: usize,
    terms: BTreeMap<Vec<OGen>, Poly>,
}

impl TensorElem {
    pub fn zero(dim: usize) -> Self {
        TensorElem {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(dim: usize, letters: Vec<OGen>) -> Self {
        TensorElem::term(dim, letters, Poly::one(dim))
    }

    pub fn term(dim: usize, letters: Vec<OGen>, p: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(letters, p);
        }
        TensorElem { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<OGen>, &Poly)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, letters: Vec<OGen>, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(letters)
            .or_insert_with(|| Poly::zero(self.dim));
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(w.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorElem) -> TensorElem {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(w.clone(), -p);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> TensorElem {
        if c.is_zero() {
            return TensorElem::zero(self.dim);
        }
        TensorElem {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(w, p)| (w.clone(), p.scale(c)))
                .collect(),
        }
    }
}

/// Applies a permutation to a word with the Koszul sign: `σ` sends the letter
/// in slot `i` to slot `σ(i)`; each inversion of two odd letters contributes
/// a sign.
pub fn permute_word(word: &[OGen], sigma: &[usize]) -> (Vec<OGen>, bool) {
    let n = word.len();
    debug_assert_eq!(sigma.len(), n);
    let mut out: Vec<Option<OGen>> = vec![None; n];
    let mut negative = false;
    for i in 0..n {
        for j in (i + 1)..n {
            if sigma[i] > sigma[j] && word[i].is_odd() && word[j].is_odd() {
                negative = !negative;
            }
        }
        out[sigma[i]] = Some(word[i].clone());
    }
    (out.into_iter().map(|l| l.unwrap()).collect(), negative)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        out.push(Vec::new());
    } else {
        heap(n, &mut cur, &mut out);
    }
    out
}

/// The averaging operator `𝔖(T) = (1/n!) Σ_σ σ·T` with Koszul signs. It is
/// the identity on invariant tensors, hence idempotent.
pub fn symmetrize(t: &TensorElem) -> TensorElem {
    let mut out = TensorElem::zero(t.dim());
    for (word, p) in t.terms() {
        let n = word.len();
        if n == 0 {
            out.add_term(Vec::new(), p.clone());
            continue;
        }
        let perms = permutations(n);
        let factor = Scalar::from_int(perms.len() as i64).inv();
        for sigma in &perms {
            let (w, negative) = permute_word(word, sigma);
            let coeff = p.scale(&factor);
            out.add_term(w, if negative { -&coeff } else { coeff });
        }
    }
    out
}

/// All words of the given length over an alphabet, in lexicographic order.
pub fn all_words(alphabet: &[OGen], len: usize) -> Vec<Vec<OGen>> {
    let mut out: Vec<Vec<OGen>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for l in alphabet {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out = next;
    }
    out
}
