//! Additive quaternary codes as binary matrices with paired columns, and their
//! line-system view.
//!
//! Quaternary coordinate `i` occupies binary columns `2i` and `2i+1`. Dimensions
//! are kept as binary dimensions `k2`; the quaternary dimension is `k2 / 2`.

use crate::error::{Error, Result};
use crate::geometry::{lines_in_general_position, Line};
use crate::gf2::{GF2Matrix, GF2Vector, SpanBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCode {
    gen: GF2Matrix,
    n: usize,
}

impl AdditiveCode {
    /// Keeps the rows that increase the rank, in their given order.
    pub fn from_generators(m: &GF2Matrix) -> Result<AdditiveCode> {
        if m.ncols() % 2 == 1 {
            return Err(Error::OddLength(m.ncols()));
        }
        let mut span = SpanBuilder::new();
        let rows: Vec<u32> = m.rows().iter().map(|r| r.bits()).filter(|&r| span.insert(r)).collect();
        Ok(AdditiveCode { gen: GF2Matrix::from_bits(&rows, m.ncols()), n: m.ncols() / 2 })
    }

    pub fn zero(n: usize) -> AdditiveCode {
        AdditiveCode { gen: GF2Matrix::zeros(0, 2 * n), n }
    }

    pub fn generator(&self) -> &GF2Matrix {
        &self.gen
    }

    /// Quaternary length.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Binary dimension.
    pub fn k2(&self) -> usize {
        self.gen.nrows()
    }

    /// Quaternary dimension `k2 / 2`, possibly half-integral.
    pub fn quaternary_dim(&self) -> f64 {
        self.k2() as f64 / 2.0
    }

    pub fn contains(&self, word: GF2Vector) -> bool {
        self.gen.row_space_contains(word)
    }

    /// Every codeword including zero, in Gray-code order.
    pub fn codewords(&self) -> impl Iterator<Item = u32> + '_ {
        let rows = self.gen.row_bits();
        let k = rows.len();
        let mut w = 0u32;
        let mut i = 0u64;
        std::iter::from_fn(move || {
            if i >> k != 0 {
                return None;
            }
            if i > 0 {
                w ^= rows[i.trailing_zeros() as usize];
            }
            i += 1;
            Some(w)
        })
    }

    /// Column pairs read back as generator pairs in `PG(k2-1, 2)`; `None` for pairs
    /// that are not lines.
    pub fn column_pairs(&self) -> Vec<(u32, u32)> {
        (0..self.n)
            .map(|i| (self.gen.column(2 * i).bits(), self.gen.column(2 * i + 1).bits()))
            .collect()
    }

    pub fn to_line_system(&self) -> Result<LineSystem> {
        let lines = self
            .column_pairs()
            .into_iter()
            .map(|(a, b)| Line::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(LineSystem { ambient_dim: self.k2(), lines })
    }
}

/// An ordered list of lines in a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSystem {
    pub ambient_dim: usize,
    pub lines: Vec<Line>,
}

impl LineSystem {
    pub fn new(ambient_dim: usize, lines: Vec<Line>) -> LineSystem {
        LineSystem { ambient_dim, lines }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// The `ambient_dim x 2n` matrix whose column pair `i` holds the generators of line `i`.
    pub fn matrix(&self) -> GF2Matrix {
        let rows: Vec<u32> = (0..self.ambient_dim)
            .map(|r| {
                self.lines.iter().enumerate().fold(0u32, |acc, (i, l)| {
                    let (a, b) = l.generators();
                    acc | ((a >> r & 1) << (2 * i)) | ((b >> r & 1) << (2 * i + 1))
                })
            })
            .collect();
        GF2Matrix::from_bits(&rows, 2 * self.lines.len())
    }

    /// Parses a generator matrix in text format (rows = ambient coordinates).
    pub fn parse_text(text: &str) -> Result<LineSystem> {
        let m = GF2Matrix::parse_text(text)?;
        if m.ncols() % 2 == 1 {
            return Err(Error::OddLength(m.ncols()));
        }
        let lines = (0..m.ncols() / 2)
            .map(|i| Line::new(m.column(2 * i).bits(), m.column(2 * i + 1).bits()))
            .collect::<Result<Vec<_>>>()?;
        Ok(LineSystem { ambient_dim: m.nrows(), lines })
    }

    pub fn to_text(&self) -> String {
        self.matrix().to_text(true)
    }
}

pub fn code_from_lines(ls: &LineSystem) -> AdditiveCode {
    AdditiveCode::from_generators(&ls.matrix()).expect("line-system matrices have even width")
}

/// Number of coordinate pairs of `word` that are not `00`.
pub fn quaternary_weight(word: GF2Vector, n: usize) -> Result<usize> {
    if word.len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, found: word.len() });
    }
    Ok(quaternary_weight_bits(word.bits()))
}

#[inline]
pub fn quaternary_weight_bits(w: u32) -> usize {
    ((w | w >> 1) & 0x5555_5555).count_ones() as usize
}

#[inline]
fn swap_pairs(v: u32) -> u32 {
    const EVEN: u32 = 0x5555_5555;
    ((v & EVEN) << 1) | ((v >> 1) & EVEN)
}

/// All vectors symplectically orthogonal to the code.
pub fn symplectic_dual(c: &AdditiveCode) -> AdditiveCode {
    let swapped: Vec<u32> = c.gen.row_bits().into_iter().map(swap_pairs).collect();
    let kernel = GF2Matrix::from_bits(&swapped, 2 * c.n).kernel();
    AdditiveCode { gen: kernel, n: c.n }
}

/// Minimum quaternary weight over nonzero codewords (full sweep, `k2 <= 26`).
pub fn min_quaternary_distance(c: &AdditiveCode) -> Result<usize> {
    if c.k2() == 0 {
        return Err(Error::ZeroCode);
    }
    assert!(c.k2() <= 26, "codeword sweep limited to binary dimension 26");
    Ok(c.codewords().skip(1).map(quaternary_weight_bits).min().expect("nonzero code"))
}

/// Largest `t` such that any `t` lines span a `2t`-dimensional space.
pub fn strength(ls: &LineSystem) -> usize {
    let n = ls.lines.len();
    let cap = n.min(ls.ambient_dim / 2);
    let mut t = 0;
    while t < cap && all_subsets_in_general_position(&ls.lines, t + 1) {
        t += 1;
    }
    t
}

fn all_subsets_in_general_position(lines: &[Line], t: usize) -> bool {
    let mut idx: Vec<usize> = (0..t).collect();
    let n = lines.len();
    loop {
        let subset: Vec<Line> = idx.iter().map(|&i| lines[i]).collect();
        if !lines_in_general_position(&subset) {
            return false;
        }
        // next combination
        let mut i = t;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < n - t + i {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All nonzero codewords whose quaternary support lies inside `support` (0-based
/// coordinate indices), found by solving for combinations that vanish elsewhere.
pub fn words_supported_on(c: &AdditiveCode, support: &[usize]) -> Vec<GF2Vector> {
    let outside: u32 = (0..c.n)
        .filter(|i| !support.contains(i))
        .fold(0, |acc, i| acc | 0b11 << (2 * i));
    // Restrict the generator to the outside columns, transpose, and take the kernel:
    // coefficient vectors y with y * G zero outside the support.
    let rows = c.gen.row_bits();
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let restricted: Vec<u32> = (0..2 * c.n)
        .filter(|col| outside >> col & 1 == 1)
        .map(|col| rows.iter().enumerate().fold(0u32, |acc, (i, r)| acc | ((r >> col & 1) << i)))
        .collect();
    let kernel = GF2Matrix::from_bits(&restricted, k).kernel();
    let basis: Vec<u32> = kernel
        .row_bits()
        .into_iter()
        .map(|y| (0..k).filter(|i| y >> i & 1 == 1).fold(0u32, |acc, i| acc ^ rows[i]))
        .collect();
    let mut out = Vec::new();
    let mut w = 0u32;
    for i in 1u64..(1 << basis.len()) {
        w ^= basis[i.trailing_zeros() as usize];
        out.push(GF2Vector::from_bits(w, 2 * c.n));
    }
    out.sort();
    out
}
