//! Bit-packed vectors and matrices over the two-element field.
//!
//! A vector of length `len` is a single `u32`; coordinate `i` (0-based) is bit `i`.
//! All geometry in this crate reduces to word operations on these masks.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

pub const MAX_LEN: usize = 32;

#[inline]
fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

#[inline]
pub fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GF2Vector {
    bits: u32,
    len: u8,
}

impl GF2Vector {
    pub fn new(bits: u32, len: usize) -> Result<Self> {
        if len > MAX_LEN {
            return Err(Error::DimensionOutOfRange(len));
        }
        if bits & !mask(len) != 0 {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: 32 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self { bits, len: len as u8 })
    }

    /// Panics if `len > 32`; high bits are truncated.
    pub fn from_bits(bits: u32, len: usize) -> Self {
        assert!(len <= MAX_LEN, "vector length {len} exceeds {MAX_LEN}");
        Self { bits: bits & mask(len), len: len as u8 }
    }

    pub fn zero(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    pub fn unit(i: usize, len: usize) -> Self {
        assert!(i < len);
        Self::from_bits(1 << i, len)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len());
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn iter_ones(self) -> impl Iterator<Item = usize> {
        let mut b = self.bits;
        std::iter::from_fn(move || {
            if b == 0 {
                None
            } else {
                let i = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(i)
            }
        })
    }

    /// Parses a row of `0`/`1` characters; `|` and whitespace are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = 0u32;
        let mut len = 0usize;
        for ch in s.chars() {
            match ch {
                '0' | '1' => {
                    if len == MAX_LEN {
                        return Err(Error::DimensionOutOfRange(len + 1));
                    }
                    if ch == '1' {
                        bits |= 1 << len;
                    }
                    len += 1;
                }
                '|' => {}
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse { line: 0, msg: format!("unexpected character {c:?}") })
                }
            }
        }
        Ok(Self { bits, len: len as u8 })
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Add for GF2Vector {
    type Output = GF2Vector;

    fn add(self, rhs: GF2Vector) -> GF2Vector {
        assert_eq!(self.len, rhs.len, "adding vectors of different lengths");
        GF2Vector { bits: self.bits ^ rhs.bits, len: self.len }
    }
}

impl AddAssign for GF2Vector {
    fn add_assign(&mut self, rhs: GF2Vector) {
        *self = *self + rhs;
    }
}

/// The symplectic form pairing coordinates (0,1), (2,3), ... as hyperbolic planes.
pub fn symplectic_product(u: GF2Vector, v: GF2Vector) -> Result<bool> {
    if u.len != v.len {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    if u.len() % 2 == 1 {
        return Err(Error::OddLength(u.len()));
    }
    Ok(symplectic_bits(u.bits, v.bits))
}

/// Symplectic form on raw masks with adjacent coordinate pairs.
#[inline]
pub fn symplectic_bits(u: u32, v: u32) -> bool {
    const EVEN: u32 = 0x5555_5555;
    let swapped = ((v & EVEN) << 1) | ((v >> 1) & EVEN);
    parity(u & swapped)
}

pub fn euclidean_product(u: GF2Vector, v: GF2Vector) -> Result<bool> {
    if u.len != v.len {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(parity(u.bits & v.bits))
}

/// Incremental span of raw masks, indexed by pivot (lowest set bit).
///
/// Cheap to copy; used in the hot loops of the geometry code.
#[derive(Clone, Copy)]
pub struct SpanBuilder {
    pivot_rows: [u32; 32],
    rank: u32,
}

impl Default for SpanBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl SpanBuilder {
    pub const fn new() -> Self {
        Self { pivot_rows: [0; 32], rank: 0 }
    }

    /// Reduces `v` until its lowest set bit has no pivot; zero iff `v` is in the span.
    #[inline]
    pub fn reduce(&self, mut v: u32) -> u32 {
        while v != 0 {
            let p = v.trailing_zeros() as usize;
            let row = self.pivot_rows[p];
            if row == 0 {
                return v;
            }
            v ^= row;
        }
        0
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    /// Adds `v`; returns `true` iff the rank grew.
    #[inline]
    pub fn insert(&mut self, v: u32) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.pivot_rows[r.trailing_zeros() as usize] = r;
        self.rank += 1;
        true
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank as usize
    }
}

/// Rank of a list of raw masks.
pub fn rank_of(vectors: impl IntoIterator<Item = u32>) -> usize {
    let mut span = SpanBuilder::new();
    for v in vectors {
        span.insert(v);
    }
    span.rank()
}

/// Reduced row-echelon basis of the span of raw masks, pivots ascending.
///
/// Pivot rule: leftmost (lowest-index) column, topmost remaining row.
pub fn rref_basis(vectors: impl IntoIterator<Item = u32>, len: usize) -> Vec<u32> {
    let mut rows: Vec<u32> = vectors.into_iter().collect();
    let mut r = 0;
    for col in 0..len {
        let bit = 1u32 << col;
        let Some(found) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, found);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: Vec<GF2Vector>,
    ncols: usize,
}

impl GF2Matrix {
    pub fn new(rows: Vec<GF2Vector>, ncols: usize) -> Result<Self> {
        if ncols > MAX_LEN {
            return Err(Error::DimensionOutOfRange(ncols));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: bad.len() });
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_bits(rows: &[u32], ncols: usize) -> Self {
        Self {
            rows: rows.iter().map(|&b| GF2Vector::from_bits(b, ncols)).collect(),
            ncols,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { rows: vec![GF2Vector::zero(ncols); nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| GF2Vector::unit(i, n)).collect(), ncols: n }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[GF2Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> GF2Vector {
        self.rows[i]
    }

    pub fn row_bits(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.bits()).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Column `c` as a vector of length `nrows` (requires `nrows <= 32`).
    pub fn column(&self, c: usize) -> GF2Vector {
        let bits = self
            .rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, r)| acc | (u32::from(r.get(c)) << i));
        GF2Vector::from_bits(bits, self.nrows())
    }

    pub fn transpose(&self) -> GF2Matrix {
        GF2Matrix {
            rows: (0..self.ncols).map(|c| self.column(c)).collect(),
            ncols: self.nrows(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_of(self.rows.iter().map(|r| r.bits()))
    }

    /// Reduced row-echelon form with the same shape; zero rows at the bottom.
    pub fn row_reduce(&self) -> GF2Matrix {
        let mut basis = rref_basis(self.rows.iter().map(|r| r.bits()), self.ncols);
        basis.resize(self.nrows(), 0);
        GF2Matrix::from_bits(&basis, self.ncols)
    }

    /// Coefficients `c` with `sum_i c_i * row_i == target`, if any.
    pub fn solve_in_span(&self, target: GF2Vector) -> Result<Option<GF2Vector>> {
        if target.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, found: target.len() });
        }
        if self.nrows() > MAX_LEN {
            return Err(Error::DimensionOutOfRange(self.nrows()));
        }
        // Track the row combination producing each echelon row.
        let mut pivots: Vec<(u32, u32)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let (mut v, mut combo) = (row.bits(), 1u32 << i);
            for &(pv, pc) in &pivots {
                if v & (pv & pv.wrapping_neg()) != 0 {
                    v ^= pv;
                    combo ^= pc;
                }
            }
            if v != 0 {
                pivots.push((v, combo));
            }
        }
        let (mut t, mut combo) = (target.bits(), 0u32);
        for &(pv, pc) in &pivots {
            if t & (pv & pv.wrapping_neg()) != 0 {
                t ^= pv;
                combo ^= pc;
            }
        }
        Ok((t == 0).then(|| GF2Vector::from_bits(combo, self.nrows())))
    }

    /// Basis of `{x : <x, row> = 0 for every row}`, as rows of length `ncols`.
    pub fn kernel(&self) -> GF2Matrix {
        let rref = rref_basis(self.rows.iter().map(|r| r.bits()), self.ncols);
        let pivots: Vec<usize> = rref.iter().map(|r| r.trailing_zeros() as usize).collect();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivots.contains(c)) {
            let mut x = 1u32 << free;
            for (row, &p) in rref.iter().zip(&pivots) {
                if row >> free & 1 == 1 {
                    x |= 1 << p;
                }
            }
            out.push(x);
        }
        GF2Matrix::from_bits(&out, self.ncols)
    }

    pub fn row_space_contains(&self, v: GF2Vector) -> bool {
        let mut span = SpanBuilder::new();
        for r in &self.rows {
            span.insert(r.bits());
        }
        span.contains(v.bits())
    }

    /// Parses the text matrix format: one row per line of `0`/`1` characters,
    /// `|` and whitespace ignored, `#` starts a comment. Blank lines are skipped.
    pub fn parse_text(text: &str) -> Result<GF2Matrix> {
        let mut rows = Vec::new();
        let mut ncols = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = GF2Vector::parse(line).map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: idx + 1, msg },
                other => Error::Parse { line: idx + 1, msg: other.to_string() },
            })?;
            match ncols {
                None => ncols = Some(row.len()),
                Some(n) if n != row.len() => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("row has {} entries, expected {n}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Ok(GF2Matrix { rows, ncols: ncols.unwrap_or(0) })
    }

    /// Writes the text format; with `pair_separators` a `|` goes between column pairs.
    pub fn to_text(&self, pair_separators: bool) -> String {
        let mut out = String::new();
        for r in &self.rows {
            for c in 0..self.ncols {
                if pair_separators && c > 0 && c % 2 == 0 {
                    out.push('|');
                }
                out.push(if r.get(c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.nrows(), self.ncols)?;
        f.write_str(&self.to_text(false))
    }
}

pub fn rank(m: &GF2Matrix) -> usize {
    m.rank()
}

pub fn row_reduce(m: &GF2Matrix) -> GF2Matrix {
    m.row_reduce()
}

pub fn solve_in_span(m: &GF2Matrix, target: GF2Vector) -> Result<Option<GF2Vector>> {
    m.solve_in_span(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> GF2Vector {
        GF2Vector::parse(s).unwrap()
    }

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(GF2Matrix::identity(8).rank(), 8);
        assert_eq!(GF2Matrix::zeros(5, 10).rank(), 0);
    }

    #[test]
    fn row_reduce_identity_and_duplicate_rows() {
        let id = GF2Matrix::identity(6);
        assert_eq!(id.row_reduce(), id);
        let m = GF2Matrix::from_bits(&[0b1011, 0b1011], 4);
        let r = m.row_reduce();
        assert_eq!(r.row_bits(), vec![0b1011, 0]);
    }

    #[test]
    fn solve_identity_selects_row() {
        let id = GF2Matrix::identity(5);
        let c = id.solve_in_span(GF2Vector::unit(3, 5)).unwrap().unwrap();
        assert_eq!(c, GF2Vector::unit(3, 5));
    }

    #[test]
    fn solve_outside_span_is_none() {
        let m = GF2Matrix::from_bits(&[0b0011, 0b0110], 4);
        assert_eq!(m.solve_in_span(GF2Vector::from_bits(0b1000, 4)).unwrap(), None);
    }

    #[test]
    fn solve_length_mismatch() {
        let m = GF2Matrix::identity(4);
        assert!(matches!(
            m.solve_in_span(GF2Vector::zero(5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn symplectic_examples() {
        let e = |i| GF2Vector::unit(i, 4);
        assert!(symplectic_product(e(0), e(1)).unwrap());
        assert!(!symplectic_product(v("1011"), v("1011")).unwrap());
        assert!(!symplectic_product(e(0) + e(2), e(1) + e(3)).unwrap());
        assert_eq!(symplectic_product(v("101"), v("101")), Err(Error::OddLength(3)));
    }

    #[test]
    fn euclidean_examples() {
        assert!(!euclidean_product(v("11110000"), v("11110000")).unwrap());
        assert!(euclidean_product(v("1000"), v("1000")).unwrap());
        assert!(euclidean_product(v("100"), v("1000")).is_err());
    }

    #[test]
    fn text_format_ignores_separators_and_comments() {
        let m = GF2Matrix::parse_text("# header\n00|01\n11|10  # trailing\n\n").unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 4);
        assert_eq!(m.row(0), v("0001"));
        assert_eq!(GF2Matrix::parse_text(&m.to_text(true)).unwrap(), m);
    }

    #[test]
    fn text_format_reports_line_numbers() {
        let err = GF2Matrix::parse_text("0101\n01x1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = GF2Matrix::parse_text("0101\n011\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn vector_rejects_bits_beyond_length() {
        assert!(GF2Vector::new(0b100, 2).is_err());
        assert!(GF2Vector::new(0, 33).is_err());
    }
}
