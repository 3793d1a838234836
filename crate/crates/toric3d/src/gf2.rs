//! GF(2) linear algebra on bit-packed rows: solving, rank, and kernel
//! bases. This is the exact baseline behind the erasure decoders and the
//! fallback solver they call when peeling stalls.

const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Parity of the overlap `|self AND other|`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec[{}; ", self.len)?;
        f.debug_list().entries(self.ones()).finish()?;
        write!(f, "]")
    }
}

/// Dense GF(2) matrix, one packed `BitVec` per row.
#[derive(Clone, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

/// Outcome of [`BitMatrix::solve`]: either a canonical particular solution
/// or a report that the system is inconsistent. Never panics on bad input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Solution(BitVec),
    Inconsistent,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn from_row_supports(cols: usize, supports: &[Vec<usize>]) -> Self {
        let rows = supports
            .iter()
            .map(|s| BitVec::from_indices(cols, s.iter().copied()))
            .collect();
        BitMatrix { rows, cols }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// `A * x` over GF(2).
    pub fn mul_vec(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        let mut y = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                y.set(r, true);
            }
        }
        y
    }

    /// Row echelon elimination with pivots chosen in ascending column
    /// order. Returns the pivot column of every eliminated row.
    fn eliminate(rows: &mut [BitVec], cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, pivot_row);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        Self::eliminate(&mut rows, self.cols).len()
    }

    /// Solve `A x = y`. On success the returned solution is canonical:
    /// free variables (non-pivot columns under ascending-column pivoting)
    /// are zero.
    pub fn solve(&self, y: &BitVec) -> Solve {
        assert_eq!(y.len(), self.rows.len(), "rhs length mismatch");
        // Augment each row with its rhs bit in an extra column.
        let aug_cols = self.cols + 1;
        let mut rows: Vec<BitVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut a = BitVec::zeros(aug_cols);
                for c in row.ones() {
                    a.set(c, true);
                }
                a.set(self.cols, y.get(r));
                a
            })
            .collect();
        let pivots = Self::eliminate(&mut rows, self.cols);
        let rank = pivots.len();
        if rows[rank..].iter().any(|row| row.get(self.cols)) {
            return Solve::Inconsistent;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &col) in pivots.iter().enumerate() {
            if rows[r].get(self.cols) {
                x.set(col, true);
            }
        }
        Solve::Solution(x)
    }

    /// Basis of the null space; `cols - rank` independent vectors.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let mut rows = self.rows.clone();
        let pivots = Self::eliminate(&mut rows, self.cols);
        let pivot_of_col: std::collections::HashMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (r, &col) in pivots.iter().enumerate() {
                if rows[r].get(free) {
                    v.set(col, true);
                }
            }
            basis.push(v);
        }
        basis
    }
}
