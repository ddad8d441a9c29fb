//! Exact sparse rational matrices with labelled bases: rank, kernel, and
//! linear solves via exact elimination. Rows are rescaled to primitive
//! integer form after each pivot step to keep entries small; all arithmetic
//! is exact rational, so ranks are reproducible bit-for-bit.

use crate::scalar::Scalar;
use num::bigint::BigInt;
use num::Integer;
use num::{One, Signed, Zero};

/// A sparse matrix over ℚ with column-major storage.
#[derive(Clone, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    /// per column: sorted (row, value) pairs
    entries: Vec<Vec<(usize, Scalar)>>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            entries: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            return;
        }
        let col = &mut self.entries[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => col[i].1 = v,
            Err(i) => col.insert(i, (r, v)),
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let col = &mut self.entries[c];
        match col.binary_search_by_key(&r, |e| e.0) {
            Ok(i) => {
                col[i].1 += v;
                if col[i].1.is_zero() {
                    col.remove(i);
                }
            }
            Err(i) => col.insert(i, (r, v.clone())),
        }
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.entries[c]
    }

    pub fn dense_column(&self, c: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.rows];
        for (r, x) in &self.entries[c] {
            v[*r] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.rows);
        for c in 0..self.cols {
            elim.offer(self.dense_column(c));
        }
        elim.rank()
    }

    /// Deterministic kernel basis. Each basis vector has coefficient 1 at a
    /// free column and zeros at the later ones, in column order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        // row-reduce the transpose-free way: gather columns into dense rows
        // of the row-echelon form of the matrix itself.
        let rref = Rref::of(self);
        rref.kernel()
    }

    /// A particular solution of `A x = b` with free variables set to zero,
    /// chosen deterministically in basis order. `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        self.solve_impl(b)
    }
}

/// Dense reduced row echelon form with pivot bookkeeping.
struct Rref {
    cols: usize,
    /// rows of the RREF of the matrix, each paired with its pivot column
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Rref {
    fn of(m: &QMat) -> Self {
        // build dense rows
        let mut data: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); m.cols]; m.rows];
        for c in 0..m.cols {
            for (r, v) in m.column(c) {
                data[*r][c] = v.clone();
            }
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut next_row = 0usize;
        for col in 0..m.cols {
            // find a pivot row at or after next_row with nonzero entry in col
            let pivot = data
                .iter()
                .enumerate()
                .skip(next_row)
                .find(|(_, row)| !row[col].is_zero())
                .map(|(r, _)| r);
            let Some(pr) = pivot else { continue };
            data.swap(next_row, pr);
            let inv = data[next_row][col].inv();
            for v in data[next_row].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = data[next_row].clone();
            for (r, row) in data.iter_mut().enumerate() {
                if r != next_row && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= &(&f * pv);
                    }
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == data.len() {
                break;
            }
        }
        // rows are fully reduced above and below every pivot, pivots are 1
        let rows = pivots
            .into_iter()
            .map(|(pr, pc)| (pc, data[pr].clone()))
            .collect();
        Rref {
            cols: m.cols,
            rows,
        }
    }

    fn kernel(&self) -> Vec<Vec<Scalar>> {
        let pivot_cols: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (pc, row) in &self.rows {
                v[*pc] = -&row[free];
            }
            out.push(v);
        }
        out
    }

}

fn normalize_row(row: &mut [Scalar]) {
    // scale to primitive integer vector: clear denominators, divide by gcd
    let mut lcm = BigInt::one();
    for v in row.iter() {
        if !v.is_zero() {
            lcm = lcm.lcm(v.denom());
        }
    }
    let mut gcd = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            let scaled = v.numer() * (&lcm / v.denom());
            gcd = gcd.gcd(&scaled.abs());
        }
    }
    if gcd.is_zero() || (gcd.is_one() && lcm.is_one()) {
        return;
    }
    let factor = Scalar::from_bigint(lcm) * Scalar::from_bigint(gcd).inv();
    for v in row.iter_mut() {
        *v = &*v * &factor;
    }
}

/// Incremental rank tracker: offers vectors one at a time and reports whether
/// each increased the rank. Deterministic in offer order.
pub struct Eliminator {
    dim: usize,
    /// reduced rows with their pivot positions
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Eliminator {
    pub fn new(dim: usize) -> Self {
        Eliminator {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows; if a nonzero remainder is left,
    /// stores it and returns `true`.
    pub fn offer(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.dim);
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] * &row[*pivot].inv();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &(&f * r);
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            normalize_row(&mut v);
            self.rows.push((pivot, v));
            self.rows.sort_by_key(|(p, _)| *p);
            true
        } else {
            false
        }
    }

    /// Whether `v` lies in the span of the offered vectors (does not insert).
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] * &row[*pivot].inv();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &(&f * r);
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }
}

impl QMat {
    /// `rank`, `kernel`, and `solve` share this augmented elimination; the
    /// particular solution sets all free variables to zero.
    pub fn solve_impl(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        // Gauss-Jordan on the augmented system in column space: maintain
        // dense rows of [A | b].
        let mut data: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); self.cols + 1]; self.rows];
        for c in 0..self.cols {
            for (r, v) in self.column(c) {
                data[*r][c] = v.clone();
            }
        }
        for (r, v) in b.iter().enumerate() {
            data[r][self.cols] = v.clone();
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut next_row = 0usize;
        for col in 0..self.cols {
            let pivot = data
                .iter()
                .enumerate()
                .skip(next_row)
                .find(|(_, row)| !row[col].is_zero())
                .map(|(r, _)| r);
            let Some(pr) = pivot else { continue };
            data.swap(next_row, pr);
            let inv = data[next_row][col].inv();
            for v in data[next_row].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = data[next_row].clone();
            for (r, row) in data.iter_mut().enumerate() {
                if r != next_row && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= &(&f * pv);
                    }
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == data.len() {
                break;
            }
        }
        // inconsistent if a zero row has a nonzero augment
        for (r, row) in data.iter().enumerate() {
            let used = pivots.iter().any(|(pr, _)| *pr == r);
            if !used && !row[self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (pr, pc) in &pivots {
            x[*pc] = data[*pr][self.cols].clone();
        }
        Some(x)
    }
}
