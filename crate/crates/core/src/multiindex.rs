//! Exponent vectors for base variables and derivative decorations.

use std::fmt;

/// A vector of non-negative exponents of length equal to the base dimension
/// `p`. Used both for monomials `x^α` and for operator decorations `∂^β`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The basis index `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        assert!(i < dim, "direction out of range");
        let mut v = vec![0; dim];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn new(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn bump(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference; `None` unless `other` divides `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.divides(self) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// All indices of the given dimension with total degree at most `max`,
    /// in lexicographic order.
    pub fn all_up_to(dim: usize, max: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fn rec(dim: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos == dim {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[pos] = e;
                rec(dim, pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        if dim == 0 {
            out.push(MultiIndex(Vec::new()));
        } else {
            rec(dim, 0, max, &mut cur, &mut out);
        }
        out.sort();
        out
    }

    pub fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.0.len() as u32).to_le_bytes());
        for e in &self.0 {
            out.extend_from_slice(&e.to_le_bytes());
        }
    }

    /// Renders with the given variable prefix, e.g. `x1^2*x3`.
    pub fn display_with(&self, prefix: &str) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 1 {
                parts.push(format!("{}{}", prefix, i + 1));
            } else if e > 1 {
                parts.push(format!("{}{}^{}", prefix, i + 1, e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}
