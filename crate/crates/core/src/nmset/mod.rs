//! Strength-3 configurations of lines and points: `(n,m)`-sets.
//!
//! Any three objects of an `(n,m)`-set are in general position: their span has
//! dimension equal to the sum of the object dimensions (2 per line, 1 per point).

mod canon;
mod search;

pub use canon::{automorphism_order, canonical_form, isomorphism, Canonical, Transform};
pub use search::{
    classify, exhaustive_nm_search, max_points_given_lines, LevelStats, ProjectivityClass,
    SearchConstraints, SearchOutcome,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{enumerate_lines, format_coords, parse_coords, Line, Point, PointSet, MAX_AMBIENT};
use crate::gf2::{GF2Matrix, SpanBuilder};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NMSet {
    ambient_dim: usize,
    lines: Vec<Line>,
    points: Vec<u32>,
}

/// One object of a configuration, by its spanning vectors.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Object {
    Line(Line),
    Point(u32),
}

impl Object {
    fn generators(&self) -> ([u32; 2], usize) {
        match *self {
            Object::Line(l) => {
                let (a, b) = l.generators();
                ([a, b], 2)
            }
            Object::Point(p) => ([p, 0], 1),
        }
    }
}

impl NMSet {
    pub fn new(ambient_dim: usize, lines: Vec<Line>, points: Vec<Point>) -> Result<NMSet> {
        if ambient_dim == 0 || ambient_dim > MAX_AMBIENT {
            return Err(Error::DimensionOutOfRange(ambient_dim));
        }
        let limit = (1u32 << ambient_dim) - 1;
        let too_big = lines.iter().flat_map(|l| l.points()).chain(points.iter().map(|p| p.vector()));
        if let Some(v) = too_big.into_iter().find(|&v| v & !limit != 0) {
            return Err(Error::MixedAmbient(ambient_dim, 32 - v.leading_zeros() as usize));
        }
        Ok(NMSet { ambient_dim, lines, points: points.into_iter().map(|p| p.vector()).collect() })
    }

    pub fn empty(ambient_dim: usize) -> NMSet {
        NMSet { ambient_dim, lines: Vec::new(), points: Vec::new() }
    }

    pub fn from_lines(ambient_dim: usize, lines: Vec<Line>) -> NMSet {
        NMSet::new(ambient_dim, lines, Vec::new()).expect("lines fit the ambient space")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn points(&self) -> Vec<Point> {
        self.points.iter().map(|&v| Point::new(v).expect("nonzero")).collect()
    }

    pub fn point_vectors(&self) -> &[u32] {
        &self.points
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub(crate) fn objects(&self) -> Vec<Object> {
        self.lines
            .iter()
            .map(|&l| Object::Line(l))
            .chain(self.points.iter().map(|&p| Object::Point(p)))
            .collect()
    }

    pub fn with_line(&self, l: Line) -> NMSet {
        let mut s = self.clone();
        s.lines.push(l);
        s
    }

    pub fn with_point(&self, p: u32) -> NMSet {
        let mut s = self.clone();
        s.points.push(p);
        s
    }

    /// Vector-space dimension of the span of all objects.
    pub fn span_dim(&self) -> usize {
        let mut span = SpanBuilder::new();
        for o in self.objects() {
            let (g, k) = o.generators();
            for &v in &g[..k] {
                span.insert(v);
            }
        }
        span.rank()
    }

    pub fn map(&self, t: &Transform) -> NMSet {
        NMSet {
            ambient_dim: self.ambient_dim,
            lines: self.lines.iter().map(|l| l.map(|v| t.apply(v))).collect(),
            points: self.points.iter().map(|&p| t.apply(p)).collect(),
        }
    }

    /// Order-insensitive equality of the line sets and point sets.
    pub fn same_objects(&self, other: &NMSet) -> bool {
        let mut a = self.lines.clone();
        let mut b = other.lines.clone();
        a.sort();
        b.sort();
        let mut p = self.points.clone();
        let mut q = other.points.clone();
        p.sort_unstable();
        q.sort_unstable();
        self.ambient_dim == other.ambient_dim && a == b && p == q
    }

    /// Points covered by some object or by the span of two objects. For a strength-3
    /// set, a further object keeps strength 3 iff none of its points is in this set.
    pub fn forbidden_points(&self) -> PointSet {
        let objs = self.objects();
        let mut f = PointSet::new();
        for (i, a) in objs.iter().enumerate() {
            let (ga, ka) = a.generators();
            f.insert_span(&ga[..ka]);
            for b in &objs[i + 1..] {
                let (gb, kb) = b.generators();
                let mut basis: Vec<u32> = ga[..ka].to_vec();
                basis.extend_from_slice(&gb[..kb]);
                insert_span_any(&mut f, &basis);
            }
        }
        f
    }

    /// Generator matrix of the lines (rows = ambient coordinates) followed by the points
    /// in `(x1:...:xd)` notation, one per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.lines.is_empty() {
            out.push_str(&crate::code::LineSystem::new(self.ambient_dim, self.lines.clone()).to_text());
        } else {
            out.push_str(&format!("# ambient {}\n", self.ambient_dim));
        }
        for &p in &self.points {
            out.push_str(&format_coords(p, self.ambient_dim));
            out.push('\n');
        }
        out
    }

    /// Inverse of [`NMSet::to_text`]. A set without lines needs an `# ambient d` comment
    /// or at least one point to fix the dimension.
    pub fn parse_text(text: &str) -> Result<NMSet> {
        let mut matrix_text = String::new();
        let mut points = Vec::new();
        let mut point_dim = None;
        let mut declared = None;
        for (idx, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if let Some(rest) = trimmed.strip_prefix("# ambient") {
                declared = rest.trim().parse::<usize>().ok();
            }
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.starts_with('(') {
                let (v, d) = parse_coords(content).map_err(|e| Error::Parse { line: idx + 1, msg: e.to_string() })?;
                if v == 0 {
                    return Err(Error::Parse { line: idx + 1, msg: "zero point".into() });
                }
                if point_dim.is_some_and(|pd| pd != d) {
                    return Err(Error::Parse { line: idx + 1, msg: "points of different dimension".into() });
                }
                point_dim = Some(d);
                points.push(v);
                matrix_text.push('\n');
            } else {
                matrix_text.push_str(raw);
                matrix_text.push('\n');
            }
        }
        let m = GF2Matrix::parse_text(&matrix_text)?;
        let (ambient_dim, lines) = if m.nrows() > 0 {
            let ls = crate::code::LineSystem::parse_text(&matrix_text)?;
            (ls.ambient_dim, ls.lines)
        } else {
            let d = point_dim.or(declared).ok_or(Error::Parse { line: 0, msg: "cannot determine ambient dimension".into() })?;
            (d, Vec::new())
        };
        if point_dim.is_some_and(|pd| pd != ambient_dim) {
            return Err(Error::MixedAmbient(ambient_dim, point_dim.unwrap_or(0)));
        }
        NMSet::new(ambient_dim, lines, points.into_iter().map(|v| Point::new(v).expect("nonzero")).collect())
    }
}

/// Inserts the span of possibly dependent vectors.
fn insert_span_any(f: &mut PointSet, vectors: &[u32]) {
    let mut span = SpanBuilder::new();
    let basis: Vec<u32> = vectors.iter().copied().filter(|&v| span.insert(v)).collect();
    f.insert_span(&basis);
}

impl fmt::Debug for NMSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NMSet({},{}) in PG({},2)\n{}", self.lines.len(), self.points.len(), self.ambient_dim - 1, self.to_text())
    }
}

/// Direct check from the definition: every subset of at most three objects spans a
/// space whose dimension is the sum of the object dimensions.
pub fn check_strength3(s: &NMSet) -> bool {
    let objs = s.objects();
    let rank_of = |idx: &[usize]| {
        let mut span = SpanBuilder::new();
        let mut expected = 0;
        for &i in idx {
            let (g, k) = objs[i].generators();
            expected += k;
            for &v in &g[..k] {
                span.insert(v);
            }
        }
        span.rank() == expected
    };
    let n = objs.len();
    for i in 0..n {
        if !rank_of(&[i]) {
            return false;
        }
        for j in i + 1..n {
            if !rank_of(&[i, j]) {
                return false;
            }
            for k in j + 1..n {
                if !rank_of(&[i, j, k]) {
                    return false;
                }
            }
        }
    }
    true
}

/// All points `P` of the ambient space such that `s + P` still has strength 3.
pub fn extension_points(s: &NMSet) -> Vec<Point> {
    let f = s.forbidden_points();
    (1u32..(1 << s.ambient_dim))
        .filter(|&p| !f.contains(p))
        .map(|p| Point::new(p).expect("nonzero"))
        .collect()
}

/// All lines `L` of the ambient space such that `s + L` still has strength 3.
pub fn extension_lines(s: &NMSet) -> Vec<Line> {
    let f = s.forbidden_points();
    enumerate_lines(s.ambient_dim)
        .expect("ambient dimension in range")
        .into_iter()
        .filter(|l| !f.contains_line(l))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> u32 {
        1 << (i - 1)
    }

    fn l(a: u32, b: u32) -> Line {
        Line::new(a, b).unwrap()
    }

    pub(crate) fn three_lines() -> NMSet {
        NMSet::from_lines(6, vec![l(e(1), e(2)), l(e(3), e(4)), l(e(5), e(6))])
    }

    #[test]
    fn standard_prefix_has_strength3() {
        assert!(check_strength3(&three_lines()));
        let bad = NMSet::from_lines(6, vec![l(e(1), e(2)), l(e(3), e(4)), l(e(1) | e(3), e(2) | e(4))]);
        assert!(!check_strength3(&bad));
    }

    #[test]
    fn transversal_points() {
        assert_eq!(extension_points(&three_lines()).len(), 27);
    }

    #[test]
    fn extension_lines_of_empty_set() {
        assert_eq!(extension_lines(&NMSet::empty(6)).len(), 651);
    }

    #[test]
    fn forbidden_set_agrees_with_definition() {
        let s = three_lines();
        for p in 1u32..64 {
            let direct = check_strength3(&s.with_point(p));
            assert_eq!(direct, !s.forbidden_points().contains(p), "point {p:#b}");
        }
        for line in enumerate_lines(6).unwrap() {
            let direct = check_strength3(&s.with_line(line));
            assert_eq!(direct, !s.forbidden_points().contains_line(&line));
        }
    }

    #[test]
    fn text_round_trip() {
        let s = three_lines().with_point(e(1) | e(3) | e(5));
        let back = NMSet::parse_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
        let only_points = NMSet::empty(5).with_point(3);
        assert_eq!(NMSet::parse_text(&only_points.to_text()).unwrap(), only_points);
    }
}
