//! Dense GF(2) bit-matrix kernel.
//!
//! All arithmetic is modulo 2. Rows are packed into 64-bit words so that
//! row XOR, the inner loop of every elimination, touches whole words.
//! This backs the generator, check, decode and constraint matrices of the
//! parity code as well as every rank/null-space computation in the
//! compiler.

use std::fmt;

const WORD_BITS: usize = 64;

/// Dense bit matrix over GF(2) with word-packed row-major storage.
///
/// Values are immutable from the outside after construction; all
/// operations return new matrices, so sharing across threads is safe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    /// n-by-n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of 0/1 bytes. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b != 0);
            }
        }
        m
    }

    /// Build a matrix whose rows are indicator vectors of the given index sets.
    pub fn from_supports(supports: &[Vec<usize>], cols: usize) -> Self {
        let mut m = Self::zeros(supports.len(), cols);
        for (i, sup) in supports.iter().enumerate() {
            for &j in sup {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.bits[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if v {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    /// XOR row `src` into row `dst`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert!(src != dst);
        let w = self.words_per_row;
        let (a, b) = (src * w, dst * w);
        for k in 0..w {
            let v = self.bits[a + k];
            self.bits[b + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for k in 0..w {
            self.bits.swap(a * w + k, b * w + k);
        }
    }

    /// Number of 1s in row `r`.
    pub fn row_weight(&self, r: usize) -> usize {
        let w = self.words_per_row;
        self.bits[r * w..(r + 1) * w]
            .iter()
            .map(|x| x.count_ones() as usize)
            .sum()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        let w = self.words_per_row;
        self.bits[r * w..(r + 1) * w].iter().all(|&x| x == 0)
    }

    /// Column indices of the 1s in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Row `r` as a 0/1 byte vector.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// Matrix with the listed rows of `self`, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut m = Self::zeros(idx.len(), self.cols);
        let w = self.words_per_row;
        for (i, &r) in idx.iter().enumerate() {
            let (src, dst) = (r * w, i * w);
            for k in 0..w {
                m.bits[dst + k] = self.bits[src + k];
            }
        }
        m
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product modulo 2. `self` is r-by-k, `other` k-by-c.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        let w = out.words_per_row;
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (src, dst) = (k * other.words_per_row, r * w);
                    for i in 0..w.min(other.words_per_row) {
                        out.bits[dst + i] ^= other.bits[src + i];
                    }
                }
            }
        }
        out
    }

    /// Stack `self` above `other` (same column count).
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                if other.get(r, c) {
                    m.set(self.rows + r, c, true);
                }
            }
        }
        m
    }

    /// Place `self` left of `other` (same row count).
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    m.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    m.set(r, self.cols + c, true);
                }
            }
        }
        m
    }

    /// Columns `[lo, hi)` of `self`.
    pub fn col_slice(&self, lo: usize, hi: usize) -> BitMatrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut m = Self::zeros(self.rows, hi - lo);
        for r in 0..self.rows {
            for c in lo..hi {
                if self.get(r, c) {
                    m.set(r, c - lo, true);
                }
            }
        }
        m
    }

    /// Reduced row echelon form and the pivot columns, lowest-index pivot
    /// rule so results are reproducible across runs.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pr) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pr);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self · xᵀ = 0}`, one basis
    /// vector per row. Row count is `cols − rank`.
    pub fn null_space(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, true);
            for (row, &p) in pivots.iter().enumerate() {
                if r.get(row, f) {
                    basis.set(i, p, true);
                }
            }
        }
        basis
    }

    /// Any `X` with `self · X = target` (mod 2), free variables zero, or
    /// `None` when the system is inconsistent.
    pub fn solve_right(&self, target: &BitMatrix) -> Option<BitMatrix> {
        assert_eq!(self.rows, target.rows, "row mismatch in solve_right");
        let aug = self.hstack(target);
        let (r, pivots) = aug.rref();
        // a pivot in the augmented block means no solution
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, target.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for c in 0..target.cols {
                if r.get(row, self.cols + c) {
                    x.set(p, c, true);
                }
            }
        }
        Some(x)
    }

    /// True iff the row spaces of the two matrices coincide.
    pub fn row_space_equal(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        self.rref_nonzero() == other.rref_nonzero()
    }

    /// RREF with zero rows dropped: a canonical form of the row space.
    pub fn rref_nonzero(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        r.select_rows(&keep)
    }

    /// Apply the matrix to a bit-string on the left: returns `v · self`.
    pub fn act_on_left(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let w = self.words_per_row;
        let mut acc = vec![0u64; w];
        for (r, &b) in v.iter().enumerate() {
            if b & 1 == 1 {
                for k in 0..w {
                    acc[k] ^= self.bits[r * w + k];
                }
            }
        }
        (0..self.cols)
            .map(|c| ((acc[c / WORD_BITS] >> (c % WORD_BITS)) & 1) as u8)
            .collect()
    }

    /// Dot product of row `r` with a bit-string.
    pub fn row_dot(&self, r: usize, v: &[u8]) -> u8 {
        assert_eq!(v.len(), self.cols);
        let mut acc = 0u8;
        for c in 0..self.cols {
            acc ^= (self.get(r, c) as u8) & (v[c] & 1);
        }
        acc
    }

    /// Debug dump: one row per line of `0`/`1` characters.
    pub fn dump(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        write!(f, "{}", self.dump())
    }
}

/// XOR of two equal-length bit-strings.
pub fn xor_bits(a: &[u8], b: &[u8]) -> Vec<u8> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x ^ y) & 1).collect()
}
