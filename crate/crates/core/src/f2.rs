//! Exact linear algebra over GF(2) on bit-packed rows.
//!
//! Degree components of product rings reach thousands of dimensions, so
//! vectors pack 64 coordinates per machine word and row operations are
//! word-wise XOR.

use crate::Error;

/// A dense vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len={})",
            self.len
        );
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Addition in GF(2).
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor_assign: length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn lowest_set_bit(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i);
        }
        v
    }

    fn dot(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b))
            .count_ones()
            % 2
            == 1
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), row-major, one bit per entry.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r].set(c);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(i);
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form with deterministic pivoting (lowest column
    /// index first). Returns the reduced matrix and its rank. The row space
    /// is preserved.
    pub fn rref(&self) -> (BitMatrix, usize) {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&i| m.data[i].get(c)) else {
                continue;
            };
            m.data.swap(rank, pivot);
            let pivot_row = m.data[rank].clone();
            for (i, row) in m.data.iter_mut().enumerate() {
                if i != rank && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, rank)
    }

    /// Basis of the right kernel {v : m v = 0}, one vector per free column,
    /// in increasing free-column order. Count equals cols - rank.
    pub fn kernel_space(&self) -> Vec<BitVec> {
        let (red, rank) = self.rref();
        // pivot column of each of the first `rank` rows
        let mut pivot_cols = Vec::with_capacity(rank);
        for i in 0..rank {
            pivot_cols.push(red.data[i].lowest_set_bit().expect("pivot row nonzero"));
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for (j, &pivot) in is_pivot.iter().enumerate() {
            if pivot {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(j);
            for (i, &p) in pivot_cols.iter().enumerate() {
                if red.data[i].get(j) {
                    v.set(p);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// True iff `v` is a GF(2) linear combination of `basis`.
pub fn span_membership(basis: &[BitVec], v: &BitVec) -> Result<bool, Error> {
    for b in basis {
        if b.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                found: b.len(),
            });
        }
    }
    // Echelonize the basis once, then reduce v against it.
    let mut rows: Vec<BitVec> = Vec::with_capacity(basis.len());
    let mut pivots: Vec<usize> = Vec::with_capacity(basis.len());
    for b in basis {
        let mut r = b.clone();
        reduce_against(&mut r, &rows, &pivots);
        if let Some(p) = r.lowest_set_bit() {
            let at = pivots.partition_point(|&q| q < p);
            pivots.insert(at, p);
            rows.insert(at, r);
        }
    }
    let mut r = v.clone();
    reduce_against(&mut r, &rows, &pivots);
    Ok(r.is_zero())
}

fn reduce_against(r: &mut BitVec, rows: &[BitVec], pivots: &[usize]) {
    while let Some(p) = r.lowest_set_bit() {
        match pivots.binary_search(&p) {
            Ok(i) => r.xor_assign(&rows[i]),
            Err(_) => break,
        }
    }
}
