//! Bit-packed GF(2) linear algebra.
//!
//! Three building blocks, kept free of any coding-theory vocabulary:
//!
//! * [`BitVector`] — a fixed-length bit string packed into `u64` words.
//!   Symbol payloads and inactive-variable masks are both stored this way.
//! * [`SparseColumnMatrix`] — a column-major incidence structure with a
//!   per-row reverse index, so removing a row touches exactly the columns
//!   that contain it. Removal is logical: column index lists are immutable
//!   and a live-degree counter tracks the effect of removals, which keeps
//!   the whole peeling pass linear in the number of incidences.
//! * [`DenseBitMatrix`] — a dense bit matrix with Gauss-Jordan elimination,
//!   rank, and a solver that reports either the unique solution, a
//!   deficiency (rank plus the non-pivot columns, in column order), or an
//!   inconsistency.

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
const fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

// ============================================================================
// BitVector
// ============================================================================

/// A fixed-length string of bits packed LSB-first into `u64` words.
///
/// Bits past `len` in the last word are always zero; every operation
/// preserves that, so equality and popcount can work word-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// All-zero vector of `len` bits.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Packs `len` bits out of `bytes` (LSB-first within each byte).
    ///
    /// # Panics
    /// If `bytes` is not exactly `ceil(len / 8)` long.
    #[must_use]
    pub fn from_bytes(bytes: &[u8], len: usize) -> Self {
        assert_eq!(
            bytes.len(),
            len.div_ceil(8),
            "byte buffer does not match bit length {len}"
        );
        let mut v = Self::zeros(len);
        for (i, &b) in bytes.iter().enumerate() {
            v.words[i / 8] |= u64::from(b) << (8 * (i % 8));
        }
        // Clear any padding bits the caller left set in the final byte.
        v.mask_tail();
        v
    }

    /// Serializes to `ceil(len / 8)` bytes, inverse of [`Self::from_bytes`].
    #[must_use]
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = (self.words[i / 8] >> (8 * (i % 8))) as u8;
        }
        out
    }

    /// A uniformly random vector of `len` bits.
    #[must_use]
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in &mut v.words {
            *w = rng.gen();
        }
        v.mask_tail();
        v
    }

    #[inline]
    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    #[inline]
    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    #[must_use]
    pub fn get(&self, bit: usize) -> bool {
        assert!(bit < self.len, "bit {bit} out of range {}", self.len);
        self.words[bit / WORD_BITS] >> (bit % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, bit: usize, value: bool) {
        assert!(bit < self.len, "bit {bit} out of range {}", self.len);
        let mask = 1u64 << (bit % WORD_BITS);
        if value {
            self.words[bit / WORD_BITS] |= mask;
        } else {
            self.words[bit / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// XORs `other` into `self`.
    ///
    /// # Panics
    /// If the lengths differ; mixing lengths is always a caller bug.
    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(
            self.len, other.len,
            "length mismatch: {} vs {}",
            self.len, other.len
        );
        for (d, s) in self.words.iter_mut().zip(&other.words) {
            *d ^= s;
        }
    }

    /// Zero-extends to `len` bits. Never shrinks.
    pub fn grow(&mut self, len: usize) {
        assert!(len >= self.len, "grow cannot shrink {} to {len}", self.len);
        self.len = len;
        self.words.resize(words_for(len), 0);
    }

    /// XORs `other` into `self`, zero-extending `self` first if `other` is
    /// longer. Used for masks that lengthen as variables are added.
    pub fn xor_assign_zext(&mut self, other: &Self) {
        if other.len > self.len {
            self.grow(other.len);
        }
        for (d, s) in self.words.iter_mut().zip(&other.words) {
            *d ^= s;
        }
    }

    /// Indices of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVector[{}; ", self.len)?;
        for i in 0..self.len.min(96) {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > 96 {
            write!(f, "…")?;
        }
        write!(f, "]")
    }
}

// ============================================================================
// SparseColumnMatrix
// ============================================================================

/// Column-major sparse incidence matrix over GF(2) with a reverse index.
///
/// Columns are immutable index lists; rows are removed logically. The
/// structure answers, in O(1) amortized per incidence:
/// which columns contain a row, what a column's live degree is, and which
/// rows of a column are still live.
pub struct SparseColumnMatrix {
    rows: usize,
    col_rows: Vec<Vec<u32>>,
    row_cols: Vec<Vec<u32>>,
    live_degree: Vec<u32>,
    removed: Vec<bool>,
}

impl SparseColumnMatrix {
    #[must_use]
    pub fn new(rows: usize) -> Self {
        SparseColumnMatrix {
            rows,
            col_rows: Vec::new(),
            row_cols: vec![Vec::new(); rows],
            live_degree: Vec::new(),
            removed: vec![false; rows],
        }
    }

    /// Appends a column given its set row indices; returns the column id.
    ///
    /// # Panics
    /// If the indices are not strictly increasing or exceed the row count.
    pub fn push_column(&mut self, rows: &[u32]) -> u32 {
        let col = self.col_rows.len() as u32;
        let mut prev: Option<u32> = None;
        for &r in rows {
            assert!((r as usize) < self.rows, "row {r} out of range {}", self.rows);
            assert!(
                prev.is_none_or(|p| p < r),
                "column rows must be strictly increasing"
            );
            prev = Some(r);
            self.row_cols[r as usize].push(col);
        }
        self.col_rows.push(rows.to_vec());
        self.live_degree.push(rows.len() as u32);
        col
    }

    #[inline]
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    #[must_use]
    pub fn columns(&self) -> usize {
        self.col_rows.len()
    }

    /// Live degree: set rows of the column that have not been removed.
    #[inline]
    #[must_use]
    pub fn degree(&self, col: u32) -> usize {
        self.live_degree[col as usize] as usize
    }

    /// The column's row indices as constructed (removals not applied).
    #[inline]
    #[must_use]
    pub fn initial_rows(&self, col: u32) -> &[u32] {
        &self.col_rows[col as usize]
    }

    /// The column's live row indices, ascending.
    pub fn live_rows(&self, col: u32) -> impl Iterator<Item = u32> + '_ {
        self.col_rows[col as usize]
            .iter()
            .copied()
            .filter(|&r| !self.removed[r as usize])
    }

    /// Columns containing `row`, in insertion order.
    #[inline]
    #[must_use]
    pub fn columns_with_row(&self, row: u32) -> &[u32] {
        &self.row_cols[row as usize]
    }

    /// Number of columns containing `row` as constructed.
    #[inline]
    #[must_use]
    pub fn row_degree(&self, row: u32) -> usize {
        self.row_cols[row as usize].len()
    }

    #[inline]
    #[must_use]
    pub fn row_is_removed(&self, row: u32) -> bool {
        self.removed[row as usize]
    }

    /// Removes a row, decrementing the live degree of exactly the columns
    /// containing it. Returns `(column, live degree after)` pairs.
    ///
    /// # Panics
    /// If the row was already removed.
    pub fn remove_row(&mut self, row: u32) -> Vec<(u32, u32)> {
        let r = row as usize;
        assert!(!self.removed[r], "row {row} removed twice");
        self.removed[r] = true;
        let mut touched = Vec::with_capacity(self.row_cols[r].len());
        for &col in &self.row_cols[r] {
            let d = &mut self.live_degree[col as usize];
            debug_assert!(*d > 0);
            *d -= 1;
            touched.push((col, *d));
        }
        touched
    }
}

// ============================================================================
// DenseBitMatrix
// ============================================================================

/// Error from [`DenseBitMatrix::solve`]: a zero coefficient row with a
/// nonzero right-hand side. Distinct from rank deficiency — a deficient but
/// consistent system yields [`Solve::Deficient`] instead.
#[derive(Debug, Error)]
#[error("inconsistent system: row {row} reduced to 0 = nonzero")]
pub struct InconsistentSystem {
    pub row: usize,
}

/// Outcome of a consistent solve.
#[derive(Debug)]
pub enum Solve {
    /// Full column rank: one value per column variable.
    Unique(Vec<BitVector>),
    /// Rank-deficient: `free_columns` (non-pivot, ascending) must be fixed
    /// externally before the remaining variables are determined.
    Deficient {
        rank: usize,
        free_columns: Vec<usize>,
    },
}

/// Workload counters for one elimination pass.
#[derive(Debug, Default, Clone, Copy)]
pub struct EliminationStats {
    /// Row-XOR count; with a right-hand side attached each one also costs a
    /// symbol XOR.
    pub row_xors: u64,
    pub row_swaps: u64,
}

/// Dense GF(2) matrix, one row per equation, packed row-major.
#[derive(Clone)]
pub struct DenseBitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl DenseBitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        DenseBitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    #[inline]
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols);
        self.words[row * self.stride + col / WORD_BITS] >> (col % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols);
        let w = &mut self.words[row * self.stride + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Copies a mask's set bits into a row. The mask may be shorter than the
    /// column count; it must not be longer.
    pub fn set_row(&mut self, row: usize, mask: &BitVector) {
        assert!(mask.len() <= self.cols, "mask wider than matrix");
        for bit in mask.iter_ones() {
            self.set(row, bit, true);
        }
    }

    #[inline]
    fn row_xor(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let (d, s) = (dst * self.stride, src * self.stride);
        for w in 0..self.stride {
            let v = self.words[s + w];
            self.words[d + w] ^= v;
        }
    }

    #[inline]
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// Matrix-vector product over symbol values: entry `r` of the result is
    /// the XOR of `values[c]` over the set columns `c` of row `r`.
    ///
    /// # Panics
    /// If `values.len() != cols` or the values' bit lengths differ.
    #[must_use]
    pub fn mul(&self, values: &[BitVector]) -> Vec<BitVector> {
        assert_eq!(values.len(), self.cols, "one value per column required");
        let width = values.first().map_or(0, BitVector::len);
        (0..self.rows)
            .map(|r| {
                let mut acc = BitVector::zeros(width);
                for c in 0..self.cols {
                    if self.get(r, c) {
                        acc.xor_assign(&values[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Rank via Gauss-Jordan on a scratch copy.
    #[must_use]
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let (rank, _, _) = a.eliminate(None);
        rank
    }

    /// Solves `self · x = rhs` (one `BitVector` per row).
    ///
    /// Full column rank gives [`Solve::Unique`]; a consistent deficient
    /// system reports its rank and free columns; an inconsistent system is
    /// an error regardless of deficiency.
    pub fn solve(
        &self,
        rhs: &[BitVector],
    ) -> Result<(Solve, EliminationStats), InconsistentSystem> {
        assert_eq!(rhs.len(), self.rows, "one right-hand side per row required");
        let mut a = self.clone();
        let mut values = rhs.to_vec();
        let (rank, pivot_cols, stats) = a.eliminate(Some(&mut values));

        // After full elimination every row from `rank` down is all-zero; a
        // nonzero right-hand side there cannot be satisfied.
        for row in rank..self.rows {
            if !values[row].is_zero() {
                return Err(InconsistentSystem { row });
            }
        }

        if rank == self.cols {
            // Pivot row i solves the variable of pivot column i; with full
            // rank that mapping is a permutation of all columns.
            let mut out = vec![BitVector::zeros(values.first().map_or(0, BitVector::len)); rank];
            for (row, &col) in pivot_cols.iter().enumerate() {
                out[col] = std::mem::replace(&mut values[row], BitVector::zeros(0));
            }
            Ok((Solve::Unique(out), stats))
        } else {
            let mut is_pivot = vec![false; self.cols];
            for &c in &pivot_cols {
                is_pivot[c] = true;
            }
            let free_columns = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
            Ok((
                Solve::Deficient {
                    rank,
                    free_columns,
                },
                stats,
            ))
        }
    }

    /// In-place Gauss-Jordan. Returns (rank, pivot column per pivot row,
    /// stats). When `rhs` is supplied it receives the same row operations.
    fn eliminate(&mut self, mut rhs: Option<&mut Vec<BitVector>>) -> (usize, Vec<usize>, EliminationStats) {
        let mut stats = EliminationStats::default();
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(pivot, rank);
            if let Some(v) = rhs.as_deref_mut() {
                v.swap(pivot, rank);
            }
            if pivot != rank {
                stats.row_swaps += 1;
            }
            for row in 0..self.rows {
                if row != rank && self.get(row, col) {
                    self.row_xor(row, rank);
                    stats.row_xors += 1;
                    if let Some(v) = rhs.as_deref_mut() {
                        let (a, b) = if row < rank {
                            let (lo, hi) = v.split_at_mut(rank);
                            (&mut lo[row], &hi[0])
                        } else {
                            let (lo, hi) = v.split_at_mut(row);
                            (&mut hi[0], &lo[rank])
                        };
                        a.xor_assign(b);
                    }
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, pivot_cols, stats)
    }
}

impl std::fmt::Debug for DenseBitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "DenseBitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(40) {
            for c in 0..self.cols.min(96) {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ============================================================================
// Tests
// ============================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    // ---- BitVector ----

    #[test]
    fn set_get_roundtrip() {
        let mut v = BitVector::zeros(130);
        for i in [0, 1, 63, 64, 65, 127, 128, 129] {
            assert!(!v.get(i));
            v.set(i, true);
            assert!(v.get(i));
        }
        v.set(64, false);
        assert!(!v.get(64));
        assert_eq!(v.count_ones(), 7);
    }

    #[test]
    fn bytes_roundtrip_non_multiple_of_eight() {
        let bytes = [0xA5u8, 0xFF, 0x01];
        let v = BitVector::from_bytes(&bytes, 19);
        assert_eq!(v.len(), 19);
        assert!(v.get(0) && !v.get(1) && v.get(2));
        // Bits 16..19 come from 0x01: only bit 16 set.
        assert!(v.get(16) && !v.get(17) && !v.get(18));
        let back = v.to_bytes();
        // The padding bits of the last byte are dropped on the way in.
        assert_eq!(back, vec![0xA5, 0xFF, 0x01]);
    }

    #[test]
    fn from_bytes_clears_padding() {
        let v = BitVector::from_bytes(&[0xFF], 3);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.to_bytes(), vec![0x07]);
    }

    #[test]
    fn xor_is_involutive() {
        let mut rng = StdRng::seed_from_u64(1);
        let a = BitVector::random(&mut rng, 200);
        let b = BitVector::random(&mut rng, 200);
        let mut c = a.clone();
        c.xor_assign(&b);
        c.xor_assign(&b);
        assert_eq!(c, a);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn xor_length_mismatch_panics() {
        let mut a = BitVector::zeros(8);
        a.xor_assign(&BitVector::zeros(9));
    }

    #[test]
    fn random_respects_length() {
        let mut rng = StdRng::seed_from_u64(2);
        for len in [1, 63, 64, 65, 100] {
            let v = BitVector::random(&mut rng, len);
            let mut w = v.clone();
            w.grow(len + 64);
            // Growing exposes only zeros past the original length.
            assert_eq!(w.count_ones(), v.count_ones());
        }
    }

    #[test]
    fn zext_xor_grows() {
        let mut a = BitVector::zeros(3);
        a.set(1, true);
        let mut b = BitVector::zeros(70);
        b.set(69, true);
        a.xor_assign_zext(&b);
        assert_eq!(a.len(), 70);
        assert!(a.get(1) && a.get(69));
        assert_eq!(a.count_ones(), 2);
    }

    #[test]
    fn iter_ones_matches_get() {
        let mut rng = StdRng::seed_from_u64(3);
        let v = BitVector::random(&mut rng, 150);
        let ones: Vec<usize> = v.iter_ones().collect();
        let expect: Vec<usize> = (0..150).filter(|&i| v.get(i)).collect();
        assert_eq!(ones, expect);
    }

    // ---- SparseColumnMatrix ----

    fn small_matrix() -> SparseColumnMatrix {
        let mut m = SparseColumnMatrix::new(5);
        m.push_column(&[0, 2, 4]); // col 0
        m.push_column(&[2]); // col 1
        m.push_column(&[1, 2]); // col 2
        m
    }

    #[test]
    fn construction_degree_equals_index_list_length() {
        let m = small_matrix();
        assert_eq!(m.degree(0), 3);
        assert_eq!(m.degree(1), 1);
        assert_eq!(m.degree(2), 2);
        assert_eq!(m.initial_rows(0), &[0, 2, 4]);
    }

    #[test]
    fn reverse_index_is_inverse_of_columns() {
        let m = small_matrix();
        assert_eq!(m.columns_with_row(2), &[0, 1, 2]);
        assert_eq!(m.columns_with_row(3), &[] as &[u32]);
        assert_eq!(m.row_degree(3), 0);
    }

    #[test]
    fn remove_row_touches_exactly_containing_columns() {
        let mut m = small_matrix();
        let touched = m.remove_row(2);
        assert_eq!(touched, vec![(0, 2), (1, 0), (2, 1)]);
        assert_eq!(m.degree(0), 2);
        assert_eq!(m.degree(1), 0);
        assert!(m.row_is_removed(2));
        // Live views no longer mention the removed row.
        assert_eq!(m.live_rows(0).collect::<Vec<_>>(), vec![0, 4]);
        assert_eq!(m.live_rows(2).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    #[should_panic(expected = "removed twice")]
    fn double_removal_panics() {
        let mut m = small_matrix();
        m.remove_row(2);
        m.remove_row(2);
    }

    #[test]
    #[should_panic(expected = "strictly increasing")]
    fn unsorted_column_panics() {
        let mut m = SparseColumnMatrix::new(5);
        m.push_column(&[2, 1]);
    }

    // ---- DenseBitMatrix ----

    fn from_rows(rows: &[&[u8]]) -> DenseBitMatrix {
        let cols = rows[0].len();
        let mut m = DenseBitMatrix::zeros(rows.len(), cols);
        for (r, bits) in rows.iter().enumerate() {
            for (c, &b) in bits.iter().enumerate() {
                m.set(r, c, b == 1);
            }
        }
        m
    }

    fn bv(byte: u8) -> BitVector {
        BitVector::from_bytes(&[byte], 8)
    }

    #[test]
    fn rank_of_identity_and_repeated_row() {
        assert_eq!(from_rows(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(from_rows(&[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(from_rows(&[&[0, 0], &[0, 0]]).rank(), 0);
    }

    #[test]
    fn solve_full_rank_hand_eliminated() {
        // Rows: x0+x1, x1+x2, x0+x1+x2 with values below; right-hand sides
        // were XORed by hand and are frozen here.
        let m = from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 1, 1]]);
        let x = [bv(0b1010), bv(0b0110), bv(0b0011)];
        let rhs = vec![bv(0b1100), bv(0b0101), bv(0b1111)];
        assert_eq!(m.mul(&x), rhs);
        let (solve, stats) = m.solve(&rhs).expect("consistent");
        match solve {
            Solve::Unique(values) => assert_eq!(values, x.to_vec()),
            other => panic!("expected unique solution, got {other:?}"),
        }
        assert!(stats.row_xors > 0);
    }

    #[test]
    fn solve_reports_free_columns_in_order() {
        // Columns 1 and 3 are copies/combinations: pivots land on 0 and 2.
        let m = from_rows(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 1, 1, 1], &[0, 0, 0, 0]]);
        let rhs = vec![bv(1), bv(2), bv(3), bv(0)];
        let (solve, _) = m.solve(&rhs).expect("consistent");
        match solve {
            Solve::Deficient {
                rank,
                free_columns,
            } => {
                assert_eq!(rank, 2);
                assert_eq!(free_columns, vec![1, 3]);
            }
            other => panic!("expected deficiency, got {other:?}"),
        }
    }

    #[test]
    fn solve_detects_inconsistency() {
        // x0 = 1, x0 = 2 cannot both hold.
        let m = from_rows(&[&[1], &[1]]);
        let rhs = vec![bv(1), bv(2)];
        let err = m.solve(&rhs).unwrap_err();
        assert_eq!(err.row, 1);
    }

    #[test]
    fn inconsistency_wins_over_deficiency() {
        let m = from_rows(&[&[1, 1], &[0, 0]]);
        let rhs = vec![bv(0), bv(7)];
        assert!(m.solve(&rhs).is_err());
    }

    #[test]
    fn solve_mul_roundtrip_random_square() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut solved = 0;
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let mut m = DenseBitMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, rng.gen());
                }
            }
            let x: Vec<BitVector> = (0..n).map(|_| BitVector::random(&mut rng, 24)).collect();
            let rhs = m.mul(&x);
            match m.solve(&rhs).expect("constructed systems are consistent") {
                (Solve::Unique(values), _) => {
                    assert_eq!(values, x);
                    solved += 1;
                }
                (Solve::Deficient { rank, .. }, _) => assert_eq!(rank, m.rank()),
            }
        }
        assert!(solved > 50, "full-rank squares should be common");
    }

    #[test]
    fn rank_bounded_by_dims() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=10);
            let cols = rng.gen_range(1..=10);
            let mut m = DenseBitMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, rng.gen());
                }
            }
            assert!(m.rank() <= rows.min(cols));
        }
    }
}
