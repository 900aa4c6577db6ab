//! Canonical forms and automorphism groups of configurations under `GL(d,2)`.
//!
//! A frame is a basis of the span of the configuration built from its own points:
//! objects are taken one at a time (those with the smallest invariant first) and
//! their points not yet in the span are appended. The set of frames is equivariant,
//! so the smallest image code over all frames is a class invariant, and the frames
//! attaining it are in bijection with the automorphisms restricted to the span.

use std::collections::HashSet;

use super::{NMSet, Object};
use crate::error::{Error, Result};
use crate::geometry::{gl_order, Line};
use crate::gf2::parity;

/// An invertible linear map of the ambient space, stored by the images of `e_1..e_d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Transform {
    cols: [u32; 8],
    dim: usize,
}

impl Transform {
    pub fn identity(dim: usize) -> Transform {
        let mut cols = [0; 8];
        for (j, c) in cols.iter_mut().enumerate().take(dim) {
            *c = 1 << j;
        }
        Transform { cols, dim }
    }

    /// Map sending `e_j` to `cols[j]`; fails unless the columns form a basis.
    pub fn from_columns(cols: &[u32]) -> Result<Transform> {
        let dim = cols.len();
        if dim == 0 || dim > 8 {
            return Err(Error::DimensionOutOfRange(dim));
        }
        let mut arr = [0; 8];
        arr[..dim].copy_from_slice(cols);
        let t = Transform { cols: arr, dim };
        if cols.iter().any(|&c| c >> dim != 0) || crate::gf2::rank_of(cols.iter().copied()) != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: crate::gf2::rank_of(cols.iter().copied()) });
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[u32] {
        &self.cols[..self.dim]
    }

    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0;
        let mut bits = v;
        while bits != 0 {
            out ^= self.cols[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Transform) -> Transform {
        let mut cols = [0; 8];
        for (j, c) in cols.iter_mut().enumerate().take(self.dim) {
            *c = self.apply(other.cols[j]);
        }
        Transform { cols, dim: self.dim }
    }

    pub fn inverse(&self) -> Transform {
        let span = TaggedSpan::from_basis(self.columns());
        let mut cols = [0; 8];
        for (j, c) in cols.iter_mut().enumerate().take(self.dim) {
            *c = span.coordinates(1 << j).expect("transform is invertible");
        }
        Transform { cols, dim: self.dim }
    }

    /// Rows are the coordinates of the images, matching the matrix text format.
    pub fn to_text(&self) -> String {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|j| if self.cols[j] >> r & 1 == 1 { '1' } else { '0' }).collect::<String>() + "\n")
            .collect()
    }
}

/// Span with, for every reduced row, the combination of inserted vectors producing it.
#[derive(Clone, Copy)]
struct TaggedSpan {
    rows: [u32; 8],
    tags: [u32; 8],
    rank: usize,
}

impl TaggedSpan {
    fn new() -> TaggedSpan {
        TaggedSpan { rows: [0; 8], tags: [0; 8], rank: 0 }
    }

    fn from_basis(basis: &[u32]) -> TaggedSpan {
        let mut s = TaggedSpan::new();
        for &b in basis {
            s.push(b);
        }
        s
    }

    /// Residue and tag after reduction.
    #[inline]
    fn reduce(&self, mut v: u32) -> (u32, u32) {
        let mut tag = 0;
        while v != 0 {
            let p = v.trailing_zeros() as usize;
            if self.rows[p] == 0 {
                break;
            }
            v ^= self.rows[p];
            tag ^= self.tags[p];
        }
        (v, tag)
    }

    /// Appends `v` as the next basis vector; it must be outside the span.
    fn push(&mut self, v: u32) {
        let (r, tag) = self.reduce(v);
        debug_assert!(r != 0);
        let p = r.trailing_zeros() as usize;
        self.rows[p] = r;
        self.tags[p] = tag ^ (1 << self.rank);
        self.rank += 1;
    }

    #[inline]
    fn contains(&self, v: u32) -> bool {
        self.reduce(v).0 == 0
    }

    /// Coordinates with respect to the pushed basis, if `v` is in the span.
    #[inline]
    fn coordinates(&self, v: u32) -> Option<u32> {
        let (r, tag) = self.reduce(v);
        (r == 0).then_some(tag)
    }
}

/// Canonical representative data of a configuration.
#[derive(Clone, Debug)]
pub struct Canonical {
    /// Ambient dimension, line count, point count, sorted line keys, sorted points.
    pub code: Vec<u32>,
    /// Maps the input configuration onto the canonical one.
    pub to_canonical: Transform,
}

impl Canonical {
    /// The canonical configuration encoded by `code`.
    pub fn set(&self) -> NMSet {
        decode(&self.code)
    }
}

fn decode(code: &[u32]) -> NMSet {
    let d = code[0] as usize;
    let nl = code[1] as usize;
    let lines = code[3..3 + nl]
        .iter()
        .map(|&k| Line::new_unchecked(k & 0xff, k >> 8 & 0xff))
        .collect();
    let points = code[3 + nl..].to_vec();
    NMSet { ambient_dim: d, lines, points }
}

#[inline]
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn mix_all(seed: u64, items: &mut [u64]) -> u64 {
    items.sort_unstable();
    items.iter().fold(mix(seed), |acc, &x| mix(acc ^ x))
}

/// Invariants of the objects and of their points from incidences with hyperplanes,
/// refined twice. Point invariants are indexed by vector.
fn invariants(d: usize, objs: &[Object]) -> (Vec<u64>, Vec<u64>) {
    let inside = |o: &Object, f: u32| match *o {
        Object::Line(l) => {
            let (a, b) = l.generators();
            !parity(a & f) && !parity(b & f)
        }
        Object::Point(p) => !parity(p & f),
    };
    let normals: Vec<u32> = (1u32..(1 << d)).collect();
    let incidence: Vec<Vec<usize>> =
        normals.iter().map(|&f| (0..objs.len()).filter(|&i| inside(&objs[i], f)).collect()).collect();
    let base: Vec<u64> = objs.iter().map(|o| matches!(o, Object::Line(_)) as u64 + 1).collect();
    let mut inv = base.clone();
    let mut plane_keys = Vec::new();
    for _ in 0..2 {
        plane_keys = incidence
            .iter()
            .map(|members| {
                let mut items: Vec<u64> = members.iter().map(|&i| inv[i]).collect();
                mix_all(members.len() as u64, &mut items)
            })
            .collect();
        let mut per_object: Vec<Vec<u64>> = vec![Vec::new(); objs.len()];
        for (h, members) in incidence.iter().enumerate() {
            for &i in members {
                per_object[i].push(plane_keys[h]);
            }
        }
        inv = per_object
            .iter_mut()
            .enumerate()
            .map(|(i, keys)| mix_all(base[i] ^ inv[i].rotate_left(17), keys))
            .collect();
    }
    // Objects may share points when the input does not have strength 3.
    let mut owners: Vec<Vec<u64>> = vec![Vec::new(); 1 << d];
    for (i, o) in objs.iter().enumerate() {
        let pts = match *o {
            Object::Line(l) => l.points().to_vec(),
            Object::Point(p) => vec![p],
        };
        for x in pts {
            owners[x as usize].push(inv[i]);
        }
    }
    let mut point_inv = vec![0u64; 1 << d];
    for (x, own) in owners.iter_mut().enumerate() {
        if own.is_empty() {
            continue;
        }
        let mut keys: Vec<u64> =
            normals.iter().zip(&plane_keys).filter(|(&f, _)| !parity(x as u32 & f)).map(|(_, &k)| k).collect();
        keys.push(mix_all(0, own));
        point_inv[x] = mix_all(own.len() as u64, &mut keys);
    }
    (inv, point_inv)
}

struct FrameSearch<'a> {
    s: &'a NMSet,
    obj_points: Vec<Vec<u32>>,
    inv: Vec<u64>,
    point_inv: Vec<u64>,
    rank: usize,
    best: Option<(Vec<u32>, Vec<u32>)>,
    optimal_frames: HashSet<Vec<u32>>,
    count_all: bool,
}

impl FrameSearch<'_> {
    fn code_for(&self, span: &TaggedSpan) -> Vec<u32> {
        let co = |v: u32| span.coordinates(v).expect("object inside the span");
        let mut lines: Vec<u32> = self
            .s
            .lines
            .iter()
            .map(|l| {
                let (a, b) = l.generators();
                Line::new_unchecked(co(a), co(b)).key()
            })
            .collect();
        lines.sort_unstable();
        let mut points: Vec<u32> = self.s.points.iter().map(|&p| co(p)).collect();
        points.sort_unstable();
        let mut code = vec![self.s.ambient_dim as u32, lines.len() as u32, points.len() as u32];
        code.extend(lines);
        code.extend(points);
        code
    }

    fn dfs(&mut self, span: TaggedSpan, frame: &mut Vec<u32>, pending: Option<usize>) {
        if span.rank == self.rank {
            let code = self.code_for(&span);
            match &self.best {
                Some((best, _)) if code > *best => {}
                Some((best, _)) if code == *best => {
                    if self.count_all {
                        self.optimal_frames.insert(frame.clone());
                    }
                }
                _ => {
                    self.optimal_frames.clear();
                    self.optimal_frames.insert(frame.clone());
                    self.best = Some((code, frame.clone()));
                }
            }
            return;
        }
        let is_open = |i: usize| self.obj_points[i].iter().any(|&p| !span.contains(p));
        let choices: Vec<usize> = match pending {
            Some(i) => vec![i],
            None => {
                let open: Vec<usize> = (0..self.obj_points.len()).filter(|&i| is_open(i)).collect();
                let min = open.iter().map(|&i| self.inv[i]).min().expect("span not yet complete");
                open.into_iter().filter(|&i| self.inv[i] == min).collect()
            }
        };
        for i in choices {
            let open_points: Vec<u32> = self.obj_points[i].iter().copied().filter(|&p| !span.contains(p)).collect();
            let min = open_points.iter().map(|&p| self.point_inv[p as usize]).min().expect("object is open");
            for p in open_points {
                if self.point_inv[p as usize] != min {
                    continue;
                }
                let mut next = span;
                next.push(p);
                frame.push(p);
                let still_open = self.obj_points[i].iter().any(|&q| !next.contains(q));
                self.dfs(next, frame, still_open.then_some(i));
                frame.pop();
            }
        }
    }
}

fn run_frames(s: &NMSet, count_all: bool) -> FrameSearch<'_> {
    let objs = s.objects();
    let (inv, point_inv) = invariants(s.ambient_dim, &objs);
    let obj_points = objs
        .iter()
        .map(|o| match *o {
            Object::Line(l) => l.points().to_vec(),
            Object::Point(p) => vec![p],
        })
        .collect();
    let mut fs = FrameSearch {
        s,
        obj_points,
        inv,
        point_inv,
        rank: s.span_dim(),
        best: None,
        optimal_frames: HashSet::new(),
        count_all,
    };
    fs.dfs(TaggedSpan::new(), &mut Vec::new(), None);
    fs
}

/// Frame completed by the standard vectors outside its span, smallest index first.
fn complete_frame(frame: &[u32], d: usize) -> Vec<u32> {
    let mut span = TaggedSpan::from_basis(frame);
    let mut cols = frame.to_vec();
    for j in 0..d {
        if !span.contains(1 << j) {
            span.push(1 << j);
            cols.push(1 << j);
        }
    }
    cols
}

/// Canonical form: a pure function of the projectivity class.
pub fn canonical_form(s: &NMSet) -> Canonical {
    if s.lines.is_empty() && s.points.is_empty() {
        return Canonical { code: vec![s.ambient_dim as u32, 0, 0], to_canonical: Transform::identity(s.ambient_dim) };
    }
    let fs = run_frames(s, false);
    let (code, frame) = fs.best.expect("at least one frame");
    let f = Transform::from_columns(&complete_frame(&frame, s.ambient_dim)).expect("frame is a basis");
    Canonical { code, to_canonical: f.inverse() }
}

/// Order of the group of linear maps of the ambient space preserving the set of lines
/// and the set of points.
pub fn automorphism_order(s: &NMSet) -> u128 {
    let d = s.ambient_dim;
    if s.lines.is_empty() && s.points.is_empty() {
        return gl_order(d);
    }
    let fs = run_frames(s, true);
    let r = fs.rank;
    // Maps fixing the span pointwise: free images of the complement modulo the span.
    let fixing_span = (1u128 << (r * (d - r))) * gl_order(d - r);
    fs.optimal_frames.len() as u128 * fixing_span
}

/// A linear map `g` with `g(from) = to` (as sets of lines and points), if one exists.
pub fn isomorphism(from: &NMSet, to: &NMSet) -> Option<Transform> {
    if from.ambient_dim != to.ambient_dim {
        return None;
    }
    let a = canonical_form(from);
    let b = canonical_form(to);
    if a.code != b.code {
        return None;
    }
    let g = b.to_canonical.inverse().compose(&a.to_canonical);
    debug_assert!(from.map(&g).same_objects(to));
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(a: u32, b: u32) -> Line {
        Line::new(a, b).unwrap()
    }

    #[test]
    fn transform_inverse() {
        let t = Transform::from_columns(&[0b011, 0b110, 0b111]).unwrap();
        let id = t.compose(&t.inverse());
        assert_eq!(id, Transform::identity(3));
        assert!(Transform::from_columns(&[1, 2, 3]).is_err());
    }

    #[test]
    fn single_line_stabilizer() {
        let s = NMSet::from_lines(4, vec![l(1, 2)]);
        assert_eq!(automorphism_order(&s), 20160 / 35);
    }

    #[test]
    fn canonical_form_maps_input_to_canonical_set() {
        let s = NMSet::from_lines(6, vec![l(0b000011, 0b001100), l(0b110000, 0b000101)]).with_point(0b101010);
        let c = canonical_form(&s);
        assert!(s.map(&c.to_canonical).same_objects(&c.set()));
    }

    #[test]
    fn isomorphism_between_standard_line_pairs() {
        let a = NMSet::from_lines(5, vec![l(1, 2), l(4, 8)]);
        let b = NMSet::from_lines(5, vec![l(3, 16), l(5, 10)]);
        let g = isomorphism(&a, &b).unwrap();
        assert!(a.map(&g).same_objects(&b));
        let c = NMSet::from_lines(5, vec![l(1, 2), l(1, 4)]);
        assert!(isomorphism(&a, &c).is_none());
    }
}
