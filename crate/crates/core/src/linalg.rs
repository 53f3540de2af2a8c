//! Linear algebra over `F_{q^2}` (and so over `F_q`): dense matrices for
//! small systems, sparse column elimination for tall operator matrices.

use crate::field::{Elem, FieldCtx};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn mul(&self, other: &Matrix, f: &FieldCtx) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Elem, f: &FieldCtx) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| f.mul(*x, s)).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let x = self.get(r, j);
                self.set(r, j, f.mul(x, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let x = self.get(r, j);
                    if !x.is_zero() {
                        let y = self.get(i, j);
                        self.set(i, j, f.sub(y, f.mul(factor, x)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    pub fn nullity(&self, f: &FieldCtx) -> usize {
        self.cols - self.rank(f)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self, f: &FieldCtx) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[fc] = Elem::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }
}

/// A sparse vector: `(index, value)` sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Elem)>;

/// `a + s·b`.
pub fn axpy(a: &SparseVec, s: Elem, b: &SparseVec, f: &FieldCtx) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = f.mul(s, b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(s, b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Collects `(index, value)` pairs into a canonical sparse vector.
pub fn sparse_from_pairs(mut pairs: Vec<(usize, Elem)>, f: &FieldCtx) -> SparseVec {
    pairs.sort_by_key(|p| p.0);
    let mut out: SparseVec = Vec::with_capacity(pairs.len());
    for (i, v) in pairs {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(last.1, v),
            _ => out.push((i, v)),
        }
    }
    out.retain(|p| !p.1.is_zero());
    out
}

/// Incremental column echelon basis keyed by pivot (leading) row.
pub struct SparseEchelon {
    pivots: std::collections::HashMap<usize, SparseVec>,
}

impl Default for SparseEchelon {
    fn default() -> Self {
        Self::new()
    }
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon { pivots: std::collections::HashMap::new() }
    }

    /// Reduces `v` against the basis; inserts it if independent.
    pub fn insert(&mut self, mut v: SparseVec, f: &FieldCtx) -> bool {
        while let Some(&(lead, x)) = v.first() {
            match self.pivots.get(&lead) {
                Some(b) => {
                    // b is normalized to have leading entry 1
                    v = axpy(&v, f.neg(x), b, f);
                }
                None => {
                    let inv = f.inv(x).expect("nonzero");
                    let v: SparseVec = v.into_iter().map(|(i, y)| (i, f.mul(y, inv))).collect();
                    self.pivots.insert(lead, v);
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Rank of the matrix with the given sparse columns.
pub fn sparse_rank(cols: &[SparseVec], f: &FieldCtx) -> usize {
    let mut ech = SparseEchelon::new();
    for c in cols {
        ech.insert(c.clone(), f);
    }
    ech.rank()
}
