//! Word-packed vectors over GF(2) and the small amount of linear algebra the
//! solvers need: span/rank, invertible coordinate changes, zero-sum subset
//! extraction and coset decomposition.
//!
//! A vector of `F_2^n` is stored in the low `n` bits of a `u32`. Coordinate 1
//! (the leftmost printed character) is the most significant stored bit, so
//! prepending a coordinate means setting bit `n` of the old value.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIM: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension {0} out of range 1..={MAX_DIM}")]
    DimensionOutOfRange(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },
    #[error("invalid bitstring {text:?} for dimension {dim}")]
    InvalidBitstring { text: String, dim: u32 },
    #[error("value {bits:#x} has bits above dimension {dim}")]
    BitsOutOfRange { bits: u32, dim: u32 },
    #[error("basis is not full rank ({rank} < {dim})")]
    NotFullRank { rank: usize, dim: u32 },
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("no qualifying zero-sum subset")]
    NoSuchSubset,
}

impl Gf2Error {
    pub fn name(&self) -> &'static str {
        match self {
            Gf2Error::DimensionOutOfRange(_) => "DimensionOutOfRange",
            Gf2Error::DimensionMismatch { .. } => "DimensionMismatch",
            Gf2Error::InvalidBitstring { .. } => "InvalidBitstring",
            Gf2Error::BitsOutOfRange { .. } => "BitsOutOfRange",
            Gf2Error::NotFullRank { .. } => "NotFullRank",
            Gf2Error::DependentRows => "DependentRows",
            Gf2Error::NoSuchSubset => "NoSuchSubset",
        }
    }
}

pub(crate) fn check_dim(dim: u32) -> Result<(), Gf2Error> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Gf2Error::DimensionOutOfRange(dim))
    }
}

#[inline]
pub(crate) fn mask(dim: u32) -> u32 {
    if dim >= 32 {
        u32::MAX
    } else {
        (1u32 << dim) - 1
    }
}

/// A vector of `F_2^dim`.
///
/// Ordering is numeric on the packed bits (vectors of different dimension are
/// never compared in practice).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    bits: u32,
    dim: u8,
}

impl BitVec {
    pub fn try_new(bits: u32, dim: u32) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if bits & !mask(dim) != 0 {
            return Err(Gf2Error::BitsOutOfRange { bits, dim });
        }
        Ok(BitVec {
            bits,
            dim: dim as u8,
        })
    }

    /// Panics if `bits` does not fit in `dim` coordinates.
    pub fn new(bits: u32, dim: u32) -> Self {
        Self::try_new(bits, dim).expect("invalid BitVec")
    }

    pub fn zero(dim: u32) -> Self {
        Self::new(0, dim)
    }

    /// The `i`-th standard basis vector, `i` counted from 1 at the left.
    pub fn unit(i: u32, dim: u32) -> Self {
        assert!(i >= 1 && i <= dim);
        Self::new(1 << (dim - i), dim)
    }

    pub fn parse(text: &str, dim: u32) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        let bad = || Gf2Error::InvalidBitstring {
            text: text.to_string(),
            dim,
        };
        if text.len() != dim as usize {
            return Err(bad());
        }
        let mut bits = 0u32;
        for c in text.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(bad()),
            }
        }
        Ok(BitVec {
            bits,
            dim: dim as u8,
        })
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u32 {
        self.dim as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// Coordinate `i` (1-based from the left).
    pub fn coord(self, i: u32) -> bool {
        assert!(i >= 1 && i <= self.dim());
        (self.bits >> (self.dim() - i)) & 1 == 1
    }

    /// Dot product over GF(2).
    pub fn dot(self, other: BitVec) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// Concatenation `prefix ‖ self`.
    pub fn with_prefix(self, prefix: BitVec) -> BitVec {
        BitVec::new(
            (prefix.bits << self.dim()) | self.bits,
            prefix.dim() + self.dim(),
        )
    }

    /// The leading `len` coordinates.
    pub fn prefix(self, len: u32) -> BitVec {
        assert!(len >= 1 && len <= self.dim());
        BitVec::new(self.bits >> (self.dim() - len), len)
    }

    /// The trailing `len` coordinates.
    pub fn suffix(self, len: u32) -> BitVec {
        assert!(len >= 1 && len <= self.dim());
        BitVec::new(self.bits & mask(len), len)
    }

    /// Reinterprets the value in a larger or smaller dimension. Panics if
    /// nonzero bits would be dropped.
    pub fn resize(self, dim: u32) -> BitVec {
        BitVec::new(self.bits, dim)
    }
}

impl Add for BitVec {
    type Output = BitVec;

    #[inline]
    fn add(self, rhs: BitVec) -> BitVec {
        debug_assert_eq!(self.dim, rhs.dim, "adding vectors of different dimension");
        BitVec {
            bits: self.bits ^ rhs.bits,
            dim: self.dim,
        }
    }
}

impl AddAssign for BitVec {
    #[inline]
    fn add_assign(&mut self, rhs: BitVec) {
        *self = *self + rhs;
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.dim()).rev() {
            f.write_str(if (self.bits >> i) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BitVec {
    type Err = Gf2Error;

    /// Width is taken from the string length.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BitVec::parse(s, s.len() as u32)
    }
}

/// XOR of a sequence of vectors of dimension `dim`.
pub fn xor_all<I: IntoIterator<Item = BitVec>>(dim: u32, it: I) -> BitVec {
    it.into_iter().fold(BitVec::zero(dim), |a, b| a + b)
}

/// An ordered list of vectors of one dimension; repetition allowed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorMultiset {
    dim: u32,
    items: Vec<BitVec>,
}

impl VectorMultiset {
    pub fn new(dim: u32, items: Vec<BitVec>) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        for v in &items {
            if v.dim() != dim {
                return Err(Gf2Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        Ok(VectorMultiset { dim, items })
    }

    pub fn empty(dim: u32) -> Self {
        Self::new(dim, Vec::new()).expect("valid dimension")
    }

    /// Parses comma-separated bitstrings of width `dim`.
    pub fn parse(text: &str, dim: u32) -> Result<Self, Gf2Error> {
        let items = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| BitVec::parse(s, dim))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, items)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn items(&self) -> &[BitVec] {
        &self.items
    }

    pub fn into_items(self) -> Vec<BitVec> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn xor_sum(&self) -> BitVec {
        xor_all(self.dim, self.items.iter().copied())
    }

    /// Distinct values with their multiplicities, in numeric order.
    pub fn histogram(&self) -> BTreeMap<BitVec, usize> {
        histogram(&self.items)
    }

    pub fn distinct_count(&self) -> usize {
        self.histogram().len()
    }

    pub fn all_multiplicities_even(&self) -> bool {
        self.histogram().values().all(|&c| c % 2 == 0)
    }

    /// Values occurring an odd number of times, in numeric order.
    pub fn odd_values(&self) -> Vec<BitVec> {
        self.histogram()
            .into_iter()
            .filter(|&(_, c)| c % 2 == 1)
            .map(|(v, _)| v)
            .collect()
    }

    /// Multiset equality (order-insensitive).
    pub fn same_multiset(&self, other: &VectorMultiset) -> bool {
        self.dim == other.dim && self.histogram() == other.histogram()
    }
}

pub fn histogram(items: &[BitVec]) -> BTreeMap<BitVec, usize> {
    let mut h = BTreeMap::new();
    for &v in items {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

/// Row-echelon accumulator keyed by the leading (most significant) bit.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<u32>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Fully reduces `x`; the result has a zero at every pivot position.
    pub fn reduce(&self, mut x: u32) -> u32 {
        for &r in &self.rows {
            let lead = 31 - r.leading_zeros();
            if (x >> lead) & 1 == 1 {
                x ^= r;
            }
        }
        x
    }

    pub fn contains(&self, x: u32) -> bool {
        self.reduce(x) == 0
    }

    /// Inserts `x`; returns `false` if it was already in the span.
    pub fn insert(&mut self, x: u32) -> bool {
        let r = self.reduce(x);
        if r == 0 {
            return false;
        }
        let lead = 31 - r.leading_zeros();
        for row in &mut self.rows {
            if (*row >> lead) & 1 == 1 {
                *row ^= r;
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|&row| row.leading_zeros() > r.leading_zeros())
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, r);
        true
    }

    pub fn pivot_mask(&self) -> u32 {
        self.rows
            .iter()
            .fold(0, |m, &r| m | (1 << (31 - r.leading_zeros())))
    }
}

/// A linearly independent list of vectors. `rows` keeps the caller's order
/// (it matters for coordinate changes); the echelon form is kept alongside
/// for membership tests.
#[derive(Clone, Debug)]
pub struct Basis {
    dim: u32,
    rows: Vec<BitVec>,
    echelon: Echelon,
}

impl Basis {
    /// Fails with `DependentRows` if the rows are not independent.
    pub fn from_rows(dim: u32, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        let mut echelon = Echelon::new();
        for r in &rows {
            if r.dim() != dim {
                return Err(Gf2Error::DimensionMismatch {
                    expected: dim,
                    got: r.dim(),
                });
            }
            if !echelon.insert(r.bits()) {
                return Err(Gf2Error::DependentRows);
            }
        }
        Ok(Basis { dim, rows, echelon })
    }

    /// Echelon basis of the span of `vs`.
    pub fn span_of(dim: u32, vs: &[BitVec]) -> Self {
        let mut echelon = Echelon::new();
        for v in vs {
            echelon.insert(v.bits());
        }
        let rows = echelon
            .rows()
            .iter()
            .map(|&r| BitVec::new(r, dim))
            .collect();
        Basis { dim, rows, echelon }
    }

    pub fn identity(dim: u32) -> Self {
        let rows = (1..=dim).map(|i| BitVec::unit(i, dim)).collect();
        Self::from_rows(dim, rows).expect("identity is independent")
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn contains(&self, v: BitVec) -> bool {
        self.echelon.contains(v.bits())
    }

    /// Extends to a basis of the whole space by appending standard vectors.
    pub fn extend_to_full(&self) -> Basis {
        let mut rows = self.rows.clone();
        let mut echelon = self.echelon.clone();
        for i in 1..=self.dim {
            let e = BitVec::unit(i, self.dim);
            if echelon.insert(e.bits()) {
                rows.push(e);
            }
        }
        Basis {
            dim: self.dim,
            rows,
            echelon,
        }
    }
}

/// Rank of the set of distinct values in `vs`.
pub fn dim_span(vs: &VectorMultiset) -> usize {
    rank_of(vs.items())
}

pub fn rank_of(vs: &[BitVec]) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v.bits());
    }
    e.rank()
}

/// An invertible linear map of `F_2^dim`, stored as the images of the
/// standard basis vectors (`cols[j]` is the image of bit `j`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap {
    dim: u32,
    cols: Vec<u32>,
}

impl LinearMap {
    pub fn identity(dim: u32) -> Self {
        LinearMap {
            dim,
            cols: (0..dim).map(|j| 1 << j).collect(),
        }
    }

    /// The map `c ↦ Σ c_i b_i` sending coordinate vectors to points, where
    /// `c_1` is the leftmost coordinate. Fails unless the basis is full.
    pub fn embedding(basis: &Basis) -> Result<Self, Gf2Error> {
        let n = basis.dim();
        if basis.rank() != n as usize {
            return Err(Gf2Error::NotFullRank {
                rank: basis.rank(),
                dim: n,
            });
        }
        let mut cols = vec![0; n as usize];
        for (i, row) in basis.rows().iter().enumerate() {
            cols[(n as usize) - 1 - i] = row.bits();
        }
        Ok(LinearMap { dim: n, cols })
    }

    /// Coordinate map whose `r`-th output coordinate (from the left) is the
    /// functional `rows[r]`. Fails unless the functionals are independent.
    pub fn from_functionals(dim: u32, rows: &[BitVec]) -> Result<Self, Gf2Error> {
        let b = Basis::from_rows(dim, rows.to_vec())?;
        if b.rank() != dim as usize {
            return Err(Gf2Error::NotFullRank {
                rank: b.rank(),
                dim,
            });
        }
        let n = dim as usize;
        let mut cols = vec![0u32; n];
        for (r, f) in rows.iter().enumerate() {
            let out_bit = n - 1 - r;
            for (j, col) in cols.iter_mut().enumerate() {
                if (f.bits() >> j) & 1 == 1 {
                    *col |= 1 << out_bit;
                }
            }
        }
        Ok(LinearMap { dim, cols })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn apply(&self, x: BitVec) -> BitVec {
        debug_assert_eq!(x.dim(), self.dim);
        BitVec::new(self.apply_bits(x.bits()), self.dim)
    }

    #[inline]
    pub(crate) fn apply_bits(&self, mut bits: u32) -> u32 {
        let mut out = 0;
        while bits != 0 {
            let j = bits.trailing_zeros();
            out ^= self.cols[j as usize];
            bits &= bits - 1;
        }
        out
    }

    pub fn inverse(&self) -> LinearMap {
        let n = self.dim as usize;
        let mut pairs: Vec<(u32, u32)> = (0..n).map(|j| (self.cols[j], 1u32 << j)).collect();
        for (row, bit) in (0..n).rev().enumerate() {
            let pivot = (row..n)
                .find(|&i| (pairs[i].0 >> bit) & 1 == 1)
                .expect("LinearMap is invertible");
            pairs.swap(row, pivot);
            let (pi, pp) = pairs[row];
            for (i, pair) in pairs.iter_mut().enumerate() {
                if i != row && (pair.0 >> bit) & 1 == 1 {
                    pair.0 ^= pi;
                    pair.1 ^= pp;
                }
            }
        }
        let mut cols = vec![0; n];
        for (image, pre) in pairs {
            cols[image.trailing_zeros() as usize] = pre;
        }
        LinearMap {
            dim: self.dim,
            cols,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let cols = other
            .cols
            .iter()
            .map(|&c| self.apply(BitVec::new(c, self.dim)).bits())
            .collect();
        LinearMap {
            dim: self.dim,
            cols,
        }
    }

    /// Coordinate map adapted to a subspace: the subspace spanned by `rows`
    /// (rank `d`) is sent onto the vectors whose leading `dim - d`
    /// coordinates vanish.
    pub fn adapted_to(dim: u32, rows: &[BitVec]) -> LinearMap {
        let span = Basis::span_of(dim, rows);
        let full = span.extend_to_full();
        let d = span.rank();
        // complement first so it lands on the leading coordinates
        let mut ordered: Vec<BitVec> = full.rows()[d..].to_vec();
        ordered.extend_from_slice(&full.rows()[..d]);
        let basis = Basis::from_rows(dim, ordered).expect("extended basis is independent");
        LinearMap::embedding(&basis).expect("full rank").inverse()
    }
}

/// Coordinates of every item with respect to `new_basis` (`c_1` leftmost).
pub fn change_of_basis(vs: &VectorMultiset, new_basis: &Basis) -> Result<VectorMultiset, Gf2Error> {
    if new_basis.dim() != vs.dim() {
        return Err(Gf2Error::DimensionMismatch {
            expected: vs.dim(),
            got: new_basis.dim(),
        });
    }
    let coords = LinearMap::embedding(new_basis)?.inverse();
    VectorMultiset::new(
        vs.dim(),
        vs.items().iter().map(|&v| coords.apply(v)).collect(),
    )
}

/// Cardinality constraint for [`zero_sum_subset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    fn accepts(self, size: usize) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => size.is_multiple_of(2),
            Parity::Odd => size % 2 == 1,
        }
    }
}

/// Indices of a nonempty subset of at most `max_size` items whose XOR is 0
/// and whose cardinality has the requested parity. Returned sorted.
///
/// Candidates come from the fundamental circuits of a left-to-right
/// elimination (with a parity coordinate appended when parity matters); the
/// smallest one is returned, earliest first on ties. For `Odd`, an odd
/// solution is shrunk greedily by even circuits.
pub fn zero_sum_subset(
    vs: &VectorMultiset,
    max_size: usize,
    parity: Parity,
) -> Result<Vec<usize>, Gf2Error> {
    let items = vs.items();
    if max_size == 0 {
        return Err(Gf2Error::NoSuchSubset);
    }
    if parity != Parity::Even {
        if let Some(i) = items.iter().position(|v| v.is_zero()) {
            return Ok(vec![i]);
        }
    }
    let dim = vs.dim();
    let augment = parity != Parity::Any;
    let lift = |v: BitVec| -> u64 {
        let b = v.bits() as u64;
        if augment {
            b | (1u64 << dim)
        } else {
            b
        }
    };

    // pivot rows: (reduced vector, lead bit, set of item indices as sorted vec)
    let mut rows: Vec<(u64, u32, Vec<usize>)> = Vec::new();
    let mut circuits: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in items.iter().enumerate() {
        let mut x = lift(v);
        let mut combo = vec![i];
        for (r, lead, set) in &rows {
            if (x >> lead) & 1 == 1 {
                x ^= r;
                combo = sym_diff(&combo, set);
            }
        }
        if x == 0 {
            circuits.push(combo);
        } else {
            let lead = 63 - x.leading_zeros();
            rows.push((x, lead, combo));
            rows.sort_by_key(|r| std::cmp::Reverse(r.1));
        }
    }

    let mut best: Option<Vec<usize>> = None;
    let consider = |best: &mut Option<Vec<usize>>, c: Vec<usize>| {
        if !c.is_empty() && c.len() <= max_size && parity.accepts(c.len()) {
            let better = match &*best {
                None => true,
                Some(b) => c.len() < b.len(),
            };
            if better {
                *best = Some(c);
            }
        }
    };

    match parity {
        Parity::Any | Parity::Even => {
            for c in &circuits {
                consider(&mut best, c.clone());
            }
            // pairwise symmetric differences can be smaller than either circuit
            if best.is_none() {
                for a in 0..circuits.len() {
                    for b in a + 1..circuits.len() {
                        consider(&mut best, sym_diff(&circuits[a], &circuits[b]));
                    }
                }
            }
        }
        Parity::Odd => {
            // represent (0, 1): an odd subset with zero sum
            let mut x = 1u64 << dim;
            let mut combo: Vec<usize> = Vec::new();
            for (r, lead, set) in &rows {
                if (x >> lead) & 1 == 1 {
                    x ^= r;
                    combo = sym_diff(&combo, set);
                }
            }
            if x == 0 {
                let mut improved = true;
                while improved {
                    improved = false;
                    for c in &circuits {
                        let cand = sym_diff(&combo, c);
                        if cand.len() < combo.len() {
                            combo = cand;
                            improved = true;
                        }
                    }
                }
                consider(&mut best, combo);
            }
        }
    }
    best.ok_or(Gf2Error::NoSuchSubset)
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// `F_2^n` split into the cosets of a subspace.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    subspace: Basis,
    translations: Vec<BitVec>,
}

impl CosetDecomposition {
    pub fn subspace(&self) -> &Basis {
        &self.subspace
    }

    /// Minimal coset representatives in increasing order; the first is 0.
    pub fn translations(&self) -> &[BitVec] {
        &self.translations
    }

    /// Index of the coset containing `x`.
    pub fn coset_of(&self, x: BitVec) -> usize {
        let rep = BitVec::new(self.subspace.echelon.reduce(x.bits()), x.dim());
        self.translations
            .binary_search(&rep)
            .expect("every vector has a representative")
    }

    /// All members of coset `i`, in increasing order.
    pub fn members(&self, i: usize) -> Vec<BitVec> {
        let t = self.translations[i];
        let span = span_elements(&self.subspace);
        let mut out: Vec<BitVec> = span.into_iter().map(|s| s + t).collect();
        out.sort();
        out
    }
}

/// Every element of the span of `basis`.
pub fn span_elements(basis: &Basis) -> Vec<BitVec> {
    let dim = basis.dim();
    let mut out = vec![BitVec::zero(dim)];
    for &r in basis.rows() {
        let len = out.len();
        for i in 0..len {
            let x = out[i] + r;
            out.push(x);
        }
    }
    out
}

pub fn coset_decompose(n: u32, subspace: &Basis) -> Result<CosetDecomposition, Gf2Error> {
    check_dim(n)?;
    if subspace.dim() != n {
        return Err(Gf2Error::DimensionMismatch {
            expected: n,
            got: subspace.dim(),
        });
    }
    let pivots = subspace.echelon.pivot_mask();
    let free: Vec<u32> = (0..n).filter(|b| (pivots >> b) & 1 == 0).collect();
    let count = 1usize << free.len();
    let translations = (0..count)
        .map(|i| {
            let mut bits = 0u32;
            for (k, &pos) in free.iter().enumerate() {
                if (i >> k) & 1 == 1 {
                    bits |= 1 << pos;
                }
            }
            BitVec::new(bits, n)
        })
        .collect();
    Ok(CosetDecomposition {
        subspace: subspace.clone(),
        translations,
    })
}

/// A nonzero functional vanishing on every vector in `vs`, if one exists.
pub fn annihilator(dim: u32, vs: &[BitVec]) -> Vec<BitVec> {
    // Solutions of <f, v> = 0 for all v: nullspace of the matrix with rows v.
    let span = Basis::span_of(dim, vs);
    let rows: Vec<u32> = span.echelon.rows().to_vec();
    let pivots = span.echelon.pivot_mask();
    let mut out = Vec::new();
    for free in (0..dim).filter(|b| (pivots >> b) & 1 == 0) {
        // set f_free = 1; each pivot coordinate is fixed by its row
        let mut f = 1u32 << free;
        for &r in &rows {
            let lead = 31 - r.leading_zeros();
            if (r >> free) & 1 == 1 {
                f |= 1 << lead;
            }
        }
        out.push(BitVec::new(f, dim));
    }
    out
}

/// A functional `f` with `<f, v_i> = b_i` for every constraint, if the
/// system is consistent.
pub fn solve_functional(dim: u32, constraints: &[(BitVec, bool)]) -> Option<BitVec> {
    // Augmented rows (v | b), eliminated on v.
    let mut rows: Vec<(u32, bool)> = Vec::new();
    for &(v, b) in constraints {
        let (mut x, mut y) = (v.bits(), b);
        for &(r, rb) in &rows {
            let lead = 31 - r.leading_zeros();
            if (x >> lead) & 1 == 1 {
                x ^= r;
                y ^= rb;
            }
        }
        if x == 0 {
            if y {
                return None;
            }
            continue;
        }
        let lead = 31 - x.leading_zeros();
        for row in rows.iter_mut() {
            if (row.0 >> lead) & 1 == 1 {
                row.0 ^= x;
                row.1 ^= y;
            }
        }
        rows.push((x, y));
    }
    // Reduced rows: choose f with f_lead = b and all free coordinates 0.
    let mut f = 0u32;
    for &(r, b) in &rows {
        if b {
            f |= 1 << (31 - r.leading_zeros());
        }
    }
    Some(BitVec::new(f, dim))
}
