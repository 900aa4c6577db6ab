//! Points, lines and subspaces of PG(n,2) for n <= 7.
//!
//! A point is its unique nonzero vector in the ambient binary space; coordinate `i`
//! (printed as the `i+1`-th entry of `(x1:...:xd)`) is bit `i`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::gf2::{parity, rank_of, rref_basis, SpanBuilder};

/// Largest ambient vector-space dimension handled by the geometry layer.
pub const MAX_AMBIENT: usize = 8;

fn check_ambient(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_AMBIENT {
        Err(Error::DimensionOutOfRange(d))
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(u32);

impl Point {
    pub fn new(v: u32) -> Result<Self> {
        if v == 0 {
            Err(Error::Parse { line: 0, msg: "the zero vector is not a point".into() })
        } else {
            Ok(Point(v))
        }
    }

    #[inline]
    pub fn vector(self) -> u32 {
        self.0
    }

    /// `(x1:...:xd)` notation.
    pub fn to_coords(self, ambient_dim: usize) -> String {
        format_coords(self.0, ambient_dim)
    }

    pub fn parse_coords(s: &str) -> Result<(Point, usize)> {
        let (v, d) = parse_coords(s)?;
        Ok((Point::new(v)?, d))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:#b}", self.0)
    }
}

pub fn format_coords(v: u32, ambient_dim: usize) -> String {
    let parts: Vec<&str> = (0..ambient_dim).map(|i| if v >> i & 1 == 1 { "1" } else { "0" }).collect();
    format!("({})", parts.join(":"))
}

pub fn parse_coords(s: &str) -> Result<(u32, usize)> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { line: 0, msg: format!("expected (x1:...:xd), got {s:?}") })?;
    let mut v = 0u32;
    let mut d = 0usize;
    for part in inner.split(':') {
        match part.trim() {
            "0" => {}
            "1" => v |= 1 << d,
            other => {
                return Err(Error::Parse { line: 0, msg: format!("bad coordinate {other:?}") })
            }
        }
        d += 1;
        if d > MAX_AMBIENT {
            return Err(Error::DimensionOutOfRange(d));
        }
    }
    Ok((v, d))
}

/// A line of PG(n,2): three points `{a, b, a+b}`.
///
/// Equality, hashing and ordering use the sorted point triple; the generator pair
/// is kept so that generator matrices can be reproduced column for column.
#[derive(Clone, Copy)]
pub struct Line {
    pts: [u32; 3],
    gens: [u32; 2],
}

impl Line {
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || a == b {
            return Err(Error::DegenerateLine(a, b));
        }
        Ok(Self::new_unchecked(a, b))
    }

    #[inline]
    pub fn new_unchecked(a: u32, b: u32) -> Self {
        let mut pts = [a, b, a ^ b];
        pts.sort_unstable();
        Line { pts, gens: [a, b] }
    }

    #[inline]
    pub fn points(&self) -> [u32; 3] {
        self.pts
    }

    #[inline]
    pub fn generators(&self) -> (u32, u32) {
        (self.gens[0], self.gens[1])
    }

    #[inline]
    pub fn contains(&self, p: u32) -> bool {
        self.pts.contains(&p)
    }

    pub fn meets(&self, other: &Line) -> bool {
        self.pts.iter().any(|&p| other.contains(p))
    }

    /// Packed sorted triple; injective for ambient dimension <= 8.
    #[inline]
    pub fn key(&self) -> u32 {
        self.pts[0] | self.pts[1] << 8 | self.pts[2] << 16
    }

    /// Same line with the generator pair reset to the two smallest points.
    pub fn normalized(&self) -> Line {
        Line { pts: self.pts, gens: [self.pts[0], self.pts[1]] }
    }

    pub fn map(&self, f: impl Fn(u32) -> u32) -> Line {
        Line::new_unchecked(f(self.gens[0]), f(self.gens[1]))
    }
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.pts == other.pts
    }
}

impl Eq for Line {}

impl Hash for Line {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pts.hash(state)
    }
}

impl PartialOrd for Line {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Line {
    fn cmp(&self, other: &Self) -> Ordering {
        self.pts.cmp(&other.pts)
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line<{:#b},{:#b}>", self.gens[0], self.gens[1])
    }
}

/// Bitset over the 255 points of PG(7,2) (bit `v` for vector `v`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PointSet([u64; 4]);

impl PointSet {
    pub const fn new() -> Self {
        PointSet([0; 4])
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        self.0[(v >> 6) as usize] |= 1 << (v & 63);
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.0[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a |= b;
        }
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains_line(&self, line: &Line) -> bool {
        line.pts.iter().any(|&p| self.contains(p))
    }

    /// Inserts every nonzero vector of the span of `basis` (independent vectors).
    pub fn insert_span(&mut self, basis: &[u32]) {
        let k = basis.len();
        let mut v = 0u32;
        // Gray-code walk over all nonzero combinations.
        for i in 1u32..(1 << k) {
            v ^= basis[i.trailing_zeros() as usize];
            self.insert(v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut b = word;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let i = b.trailing_zeros();
                    b &= b - 1;
                    Some(w as u32 * 64 + i)
                }
            })
        })
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A linear subspace, stored as its reduced row-echelon basis together with a
/// reduced basis of its annihilator (normal vectors) for constant-time membership.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<u32>,
    normals: Vec<u32>,
}

impl Subspace {
    pub fn from_vectors(ambient_dim: usize, vectors: impl IntoIterator<Item = u32>) -> Subspace {
        let basis = rref_basis(vectors, ambient_dim);
        let normals = annihilator(&basis, ambient_dim);
        Subspace { ambient_dim, basis, normals }
    }

    /// The common kernel of the given linear functionals.
    pub fn from_normals(ambient_dim: usize, normals: impl IntoIterator<Item = u32>) -> Subspace {
        let normals = rref_basis(normals, ambient_dim);
        let basis = annihilator(&normals, ambient_dim);
        // Round-trip so the normal basis is the canonical one for this subspace.
        Subspace::from_vectors(ambient_dim, basis)
    }

    pub fn whole(ambient_dim: usize) -> Subspace {
        Subspace::from_vectors(ambient_dim, (0..ambient_dim).map(|i| 1 << i))
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Vector-space dimension (projective dimension plus one).
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn normals(&self) -> &[u32] {
        &self.normals
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.normals.iter().all(|&n| !parity(n & v))
    }

    pub fn contains_line(&self, line: &Line) -> bool {
        let (a, b) = line.generators();
        self.contains(a) && self.contains(b)
    }

    pub fn meets_line(&self, line: &Line) -> bool {
        line.points().iter().any(|&p| self.contains(p))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|&v| self.contains(v))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        Subspace::from_normals(self.ambient_dim, self.normals.iter().chain(&other.normals).copied())
    }

    pub fn points(&self) -> Vec<u32> {
        let mut set = PointSet::new();
        set.insert_span(&self.basis);
        set.iter().collect()
    }

    pub fn point_count(&self) -> usize {
        (1usize << self.dim()) - 1
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: ", self.dim(), self.ambient_dim)?;
        f.debug_list().entries(self.basis.iter().map(|b| format!("{b:#b}"))).finish()?;
        f.write_str(")")
    }
}

/// Reduced basis of `{x : <x, b> = 0 for all b in basis}`; `basis` must be in RREF.
fn annihilator(basis: &[u32], ambient_dim: usize) -> Vec<u32> {
    let pivots: Vec<u32> = basis.iter().map(|r| r.trailing_zeros()).collect();
    let mut out = Vec::new();
    for free in (0..ambient_dim as u32).filter(|c| !pivots.contains(c)) {
        let mut x = 1u32 << free;
        for (row, &p) in basis.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                x |= 1 << p;
            }
        }
        out.push(x);
    }
    rref_basis(out, ambient_dim)
}

/// Anything that can be fed to [`span`].
#[derive(Clone, Copy, Debug)]
pub enum GeomObject<'a> {
    Point(Point),
    Line(Line),
    Subspace(&'a Subspace),
}

/// Smallest subspace containing all objects.
pub fn span(ambient_dim: usize, objects: &[GeomObject<'_>]) -> Result<Subspace> {
    check_ambient(ambient_dim, 1)?;
    let limit = if ambient_dim >= 32 { u32::MAX } else { (1u32 << ambient_dim) - 1 };
    let mut vectors = Vec::new();
    for obj in objects {
        match obj {
            GeomObject::Point(p) => vectors.push(p.vector()),
            GeomObject::Line(l) => {
                let (a, b) = l.generators();
                vectors.extend([a, b]);
            }
            GeomObject::Subspace(s) => {
                if s.ambient_dim() != ambient_dim {
                    return Err(Error::MixedAmbient(ambient_dim, s.ambient_dim()));
                }
                vectors.extend_from_slice(s.basis());
            }
        }
    }
    if let Some(&bad) = vectors.iter().find(|&&v| v & !limit != 0) {
        return Err(Error::MixedAmbient(ambient_dim, 32 - bad.leading_zeros() as usize));
    }
    Ok(Subspace::from_vectors(ambient_dim, vectors))
}

/// All `2^d - 1` points of PG(d-1,2), in increasing vector order.
pub fn enumerate_points(ambient_dim: usize) -> Result<Vec<Point>> {
    check_ambient(ambient_dim, 1)?;
    Ok((1u32..(1 << ambient_dim)).map(Point).collect())
}

/// Every line of PG(d-1,2) exactly once, ordered by sorted point triple.
pub fn enumerate_lines(ambient_dim: usize) -> Result<Vec<Line>> {
    check_ambient(ambient_dim, 2)?;
    let n = 1u32 << ambient_dim;
    let mut out = Vec::new();
    for a in 1..n {
        for b in a + 1..n {
            let c = a ^ b;
            if c > b {
                out.push(Line::new_unchecked(a, b));
            }
        }
    }
    Ok(out)
}

/// Codimension-1 subspaces, one per nonzero normal vector (in increasing order).
pub fn enumerate_hyperplanes(ambient_dim: usize) -> Result<Vec<Subspace>> {
    check_ambient(ambient_dim, 1)?;
    Ok((1u32..(1 << ambient_dim)).map(|n| Subspace::from_normals(ambient_dim, [n])).collect())
}

/// Codimension-2 subspaces: intersections of pairs of distinct hyperplanes,
/// deduplicated. Each corresponds to exactly one line of the dual space.
pub fn enumerate_secunda(ambient_dim: usize) -> Result<Vec<Subspace>> {
    check_ambient(ambient_dim, 2)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let n = 1u32 << ambient_dim;
    for f in 1..n {
        for g in f + 1..n {
            let s = Subspace::from_normals(ambient_dim, [f, g]);
            if seen.insert(s.normals().to_vec()) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Number of `k`-dimensional subspaces of an `n`-dimensional binary space.
pub fn gaussian_binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// `|GL(n,2)|`.
pub fn gl_order(n: usize) -> u128 {
    (0..n).map(|i| (1u128 << n) - (1u128 << i)).product()
}

/// Image of a line under a quotient map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Line(Line),
    Point(u32),
    Zero,
}

/// The canonical map `V -> V / K`. Coordinates of the factor space are those of the
/// standard basis vectors at the non-pivot columns of `K`'s reduced basis, in
/// increasing order (so `V/<e1..e4>` uses `e5..e8`).
#[derive(Clone, Debug)]
pub struct QuotientMap {
    kernel: Subspace,
    complement: Vec<u32>,
}

impl QuotientMap {
    pub fn new(kernel: Subspace) -> QuotientMap {
        let pivots: Vec<u32> = kernel.basis().iter().map(|r| r.trailing_zeros()).collect();
        let complement = (0..kernel.ambient_dim() as u32).filter(|c| !pivots.contains(c)).collect();
        QuotientMap { kernel, complement }
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn image_dim(&self) -> usize {
        self.complement.len()
    }

    /// Complement basis vectors (standard unit vectors) defining factor coordinates.
    pub fn complement_basis(&self) -> Vec<u32> {
        self.complement.iter().map(|&c| 1 << c).collect()
    }

    pub fn apply(&self, v: u32) -> u32 {
        let mut r = v;
        for &b in self.kernel.basis() {
            if r >> b.trailing_zeros() & 1 == 1 {
                r ^= b;
            }
        }
        self.complement
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| acc | ((r >> c & 1) << i))
    }

    /// Preimage of a factor-space subspace given by spanning vectors.
    pub fn preimage(&self, image_vectors: &[u32]) -> Subspace {
        let lifted = image_vectors.iter().map(|&w| {
            self.complement
                .iter()
                .enumerate()
                .fold(0, |acc, (i, &c)| acc | ((w >> i & 1) << c))
        });
        Subspace::from_vectors(
            self.kernel.ambient_dim(),
            self.kernel.basis().iter().copied().chain(lifted),
        )
    }

    pub fn project(&self, line: &Line) -> Projection {
        let (a, b) = line.generators();
        let (x, y) = (self.apply(a), self.apply(b));
        match (x, y) {
            (0, 0) => Projection::Zero,
            (0, p) | (p, 0) => Projection::Point(p),
            (p, q) if p == q => Projection::Point(p),
            (p, q) => Projection::Line(Line::new_unchecked(p, q)),
        }
    }
}

pub fn project(q: &QuotientMap, line: &Line) -> Projection {
    q.project(line)
}

/// True iff no three of the (distinct) points are collinear.
pub fn is_cap(points: &[Point]) -> Result<bool> {
    let mut set = PointSet::new();
    for p in points {
        if set.contains(p.vector()) {
            return Err(Error::DuplicatePoint(format!("{:#b}", p.vector())));
        }
        set.insert(p.vector());
    }
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if set.contains(a.vector() ^ b.vector()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All lines through at least two of the points, sorted and deduplicated.
pub fn secants(points: &[Point]) -> Vec<Line> {
    let mut out: Vec<Line> = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a != b {
                out.push(Line::new_unchecked(a.vector(), b.vector()).normalized());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Vector-space dimension of the span of raw vectors.
pub fn span_dim(vectors: impl IntoIterator<Item = u32>) -> usize {
    rank_of(vectors)
}

/// True iff the given lines are in general position (span has dimension `2 * count`).
pub fn lines_in_general_position(lines: &[Line]) -> bool {
    let mut span = SpanBuilder::new();
    for l in lines {
        let (a, b) = l.generators();
        if !span.insert(a) || !span.insert(b) {
            return false;
        }
    }
    true
}
