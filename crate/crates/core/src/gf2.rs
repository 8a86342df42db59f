//! Bit-packed linear algebra over GF(2).
//!
//! [`Endo`] is a 27×27 matrix with one `u32` per row, acting on row vectors
//! (`e_x · M`), indexed by point ids. [`FlatVec`] is the same matrix flattened
//! to 729 bits (entry `(i, j)` at bit `27·i + j`), and [`Echelon`] keeps a
//! row-echelon basis of such vectors together with the combination of input
//! vectors each row represents.

use std::fmt;

use crate::quadrangle::NUM_POINTS;

const N: usize = NUM_POINTS;
const ROW_MASK: u32 = (1 << N) - 1;
pub const FLAT_BITS: usize = N * N;
const FLAT_WORDS: usize = FLAT_BITS.div_ceil(64);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Endo {
    rows: [u32; N],
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Endo [")?;
        for r in &self.rows {
            let s: String = (0..N).map(|j| if r & (1 << j) != 0 { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

impl Endo {
    pub const ZERO: Endo = Endo { rows: [0; N] };

    pub fn identity() -> Self {
        Endo { rows: std::array::from_fn(|i| 1 << i) }
    }

    pub fn from_rows(rows: [u32; N]) -> Self {
        Endo { rows: rows.map(|r| r & ROW_MASK) }
    }

    pub fn diagonal(bits: u32) -> Self {
        Endo { rows: std::array::from_fn(|i| bits & (1 << i)) }
    }

    #[inline]
    pub fn rows(&self) -> &[u32; N] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] & (1 << j) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i] ^= 1 << j;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn nonzero_entries(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// The diagonal as a bit mask, if the matrix is diagonal.
    pub fn as_diagonal(&self) -> Option<u32> {
        let mut d = 0;
        for (i, &r) in self.rows.iter().enumerate() {
            if r & !(1 << i) != 0 {
                return None;
            }
            d |= r;
        }
        Some(d)
    }

    #[inline]
    pub fn add(&self, other: &Endo) -> Endo {
        Endo { rows: std::array::from_fn(|i| self.rows[i] ^ other.rows[i]) }
    }

    /// Matrix product `self · other`.
    #[inline]
    pub fn mul(&self, other: &Endo) -> Endo {
        let mut out = [0u32; N];
        for (o, &r) in out.iter_mut().zip(self.rows.iter()) {
            let mut bits = r;
            let mut acc = 0;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc ^= other.rows[j];
                bits &= bits - 1;
            }
            *o = acc;
        }
        Endo { rows: out }
    }

    /// `XY - YX`, which is `XY + YX` in characteristic 2.
    #[inline]
    pub fn bracket(&self, other: &Endo) -> Endo {
        self.mul(other).add(&other.mul(self))
    }

    pub fn transpose(&self) -> Endo {
        let mut out = [0u32; N];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut bits = r;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                out[j] |= 1 << i;
                bits &= bits - 1;
            }
        }
        Endo { rows: out }
    }

    /// `P⁻¹ M P` for the permutation matrix `e_i P = e_{perm[i]}`: the entry
    /// at `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permute(&self, perm: &[u8; N]) -> Endo {
        let mut out = [0u32; N];
        for (i, &r) in self.rows.iter().enumerate() {
            let mut bits = r;
            let mut acc = 0;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc |= 1 << perm[j];
                bits &= bits - 1;
            }
            out[perm[i] as usize] = acc;
        }
        Endo { rows: out }
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.to_vec();
        let mut rank = 0;
        for bit in 0..N {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & (1 << bit) != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & (1 << bit) != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn flatten(&self) -> FlatVec {
        let mut v = FlatVec::ZERO;
        for (i, &r) in self.rows.iter().enumerate() {
            let mut bits = r;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                v.set(i * N + j);
                bits &= bits - 1;
            }
        }
        v
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Endo>) -> Endo {
        items.into_iter().fold(Endo::ZERO, |acc, x| acc.add(x))
    }
}

/// A 729-bit vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FlatVec {
    words: [u64; FLAT_WORDS],
}

impl FlatVec {
    pub const ZERO: FlatVec = FlatVec { words: [0; FLAT_WORDS] };

    #[inline]
    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    #[inline]
    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &FlatVec) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest_bit(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn to_endo(&self) -> Endo {
        let mut rows = [0u32; N];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..N {
                if self.get(i * N + j) {
                    *row |= 1 << j;
                }
            }
        }
        Endo { rows }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: FlatVec,
    pivot: usize,
    /// Which basis vectors sum to `vec`.
    combo: u128,
}

/// Incremental row-echelon form over GF(2) with coordinate tracking.
///
/// Basis vector `k` is the `k`-th vector accepted by [`Echelon::insert`].
/// Every stored row is reduced against all earlier pivots, so reducing a query
/// against the rows in insertion order clears each pivot once and for all.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<EchelonRow>,
}

pub const MAX_BASIS: usize = 128;

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual after elimination, and the basis combination that was removed.
    pub fn reduce(&self, v: &FlatVec) -> (FlatVec, u128) {
        let mut r = *v;
        let mut combo = 0u128;
        for row in &self.rows {
            if r.get(row.pivot) {
                r.xor_assign(&row.vec);
                combo ^= row.combo;
            }
        }
        (r, combo)
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    pub fn insert(&mut self, v: &FlatVec) -> bool {
        assert!(self.rows.len() < MAX_BASIS, "echelon basis limited to {MAX_BASIS} vectors");
        let (r, combo) = self.reduce(v);
        match r.lowest_bit() {
            None => false,
            Some(pivot) => {
                let k = self.rows.len();
                self.rows.push(EchelonRow { vec: r, pivot, combo: combo ^ (1u128 << k) });
                true
            }
        }
    }

    pub fn contains(&self, v: &FlatVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Coefficients of `v` over the basis, if `v` is in the span.
    pub fn coordinates(&self, v: &FlatVec) -> Option<u128> {
        let (r, combo) = self.reduce(v);
        r.is_zero().then_some(combo)
    }

    /// Sorted pivot positions; two echelons span the same space iff they
    /// have equal rank and each contains the other's rows.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.pivot).collect();
        p.sort_unstable();
        p
    }

    pub fn same_span(&self, other: &Echelon) -> bool {
        self.rank() == other.rank()
            && self.rows.iter().all(|r| other.contains(&r.vec))
            && other.rows.iter().all(|r| self.contains(&r.vec))
    }
}

/// Rank of a list of operators, with the echelon form of their span.
pub fn span_rank(ops: &[Endo]) -> (usize, Echelon) {
    let mut e = Echelon::new();
    for op in ops {
        e.insert(&op.flatten());
    }
    (e.rank(), e)
}

/// Left kernel of a list of rows of up to 128 bits: all combinations `c`
/// with `Σ cᵢ rowᵢ = 0`, as a basis of bit masks over the row indices.
pub fn left_kernel(rows: &[u128]) -> Vec<u128> {
    assert!(rows.len() <= MAX_BASIS);
    let mut reduced: Vec<(u128, u128)> = Vec::new(); // (vector, combo), pivots = lowest bit
    let mut kernel = Vec::new();
    for (i, &row) in rows.iter().enumerate() {
        let mut v = row;
        let mut combo = 1u128 << i;
        for &(r, c) in &reduced {
            if v & (r & r.wrapping_neg()) != 0 {
                v ^= r;
                combo ^= c;
            }
        }
        if v == 0 {
            kernel.push(combo);
        } else {
            reduced.push((v, combo));
        }
    }
    kernel
}
