//! Quantum-code predicates on line systems: symplectic self-orthogonality, the
//! secundum parity condition, factor-space weights and hyperplane parities.

use std::collections::BTreeMap;

use crate::code::{AdditiveCode, LineSystem};
use crate::error::{Error, Result};
use crate::geometry::{enumerate_lines, enumerate_secunda, Line, Point, Projection, QuotientMap};
use crate::gf2::{parity, symplectic_bits};

/// True iff every pair of generators has symplectic product zero.
pub fn is_self_orthogonal(c: &AdditiveCode) -> bool {
    let rows = c.generator().row_bits();
    rows.iter()
        .enumerate()
        .all(|(i, &r)| rows[i + 1..].iter().all(|&s| !symplectic_bits(r, s)))
}

/// Index of the coordinate pair `(r, s)`, `r < s`, among the exterior-square coordinates.
#[inline]
pub fn wedge_index(r: usize, s: usize) -> usize {
    debug_assert!(r < s);
    s * (s - 1) / 2 + r
}

/// Exterior product `a ^ b` of two vectors of length <= 8, as 28 packed bits.
pub fn wedge(a: u32, b: u32) -> u32 {
    let mut out = 0u32;
    let mut bits = a | b;
    while bits != 0 {
        let s = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        for r in 0..s {
            let x = (a >> r & 1) & (b >> s & 1) ^ (a >> s & 1) & (b >> r & 1);
            out |= x << wedge_index(r, s);
        }
    }
    out
}

/// Plücker coordinates of a line; independent of the chosen generators.
#[inline]
pub fn plucker(line: &Line) -> u32 {
    let (a, b) = line.generators();
    wedge(a, b)
}

/// Sum of Plücker vectors. It vanishes iff the code of the system is symplectically
/// self-orthogonal, because row `r` and row `s` of the generator matrix have product
/// `sum_i (a_i[r] b_i[s] + a_i[s] b_i[r])`.
pub fn plucker_sum(lines: &[Line]) -> u32 {
    lines.iter().fold(0, |acc, l| acc ^ plucker(l))
}

/// Geometric secundum sweep: every codimension-2 subspace meets the lines a number of
/// times congruent to the number of lines mod 2. For thirteen codelines this says each
/// secundum meets an odd number of them.
///
/// Equivalent to self-orthogonality of [`crate::code::code_from_lines`] for every system;
/// kept as the slow independent route.
pub fn quantum_condition(ls: &LineSystem) -> bool {
    let target = ls.lines.len() % 2;
    enumerate_secunda(ls.ambient_dim)
        .expect("ambient dimension in range")
        .iter()
        .all(|s| ls.lines.iter().filter(|l| s.meets_line(l)).count() % 2 == target)
}

/// Fast route: the Plücker sum vanishes.
pub fn quantum_condition_fast(ls: &LineSystem) -> bool {
    plucker_sum(&ls.lines) == 0
}

/// Line weights of a PG(3,2) factor space with their induced point and plane weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    line_weights: BTreeMap<Line, u32>,
    image_dim: usize,
}

impl WeightTable {
    pub fn new(image_dim: usize, weights: impl IntoIterator<Item = (Line, u32)>) -> WeightTable {
        let mut line_weights: BTreeMap<Line, u32> = enumerate_lines(image_dim)
            .expect("factor dimension in range")
            .into_iter()
            .map(|l| (l, 0))
            .collect();
        for (l, w) in weights {
            *line_weights.get_mut(&l.normalized()).expect("line of the factor space") += w;
        }
        WeightTable { line_weights, image_dim }
    }

    pub fn image_dim(&self) -> usize {
        self.image_dim
    }

    pub fn line_weight(&self, g: &Line) -> u32 {
        self.line_weights.get(g).copied().unwrap_or(0)
    }

    pub fn line_weights(&self) -> impl Iterator<Item = (&Line, u32)> {
        self.line_weights.iter().map(|(l, &w)| (l, w))
    }

    pub fn total(&self) -> u32 {
        self.line_weights.values().sum()
    }

    /// `w(P) = sum of w(g) over lines g through P`.
    pub fn point_weight(&self, p: u32) -> u32 {
        self.line_weights.iter().filter(|(l, _)| l.contains(p)).map(|(_, &w)| w).sum()
    }

    /// `w(E) = sum of w(g) over lines g inside the plane with normal vector `normal``.
    pub fn plane_weight(&self, normal: u32) -> u32 {
        self.line_weights
            .iter()
            .filter(|(l, _)| l.points().iter().all(|&p| !parity(p & normal)))
            .map(|(_, &w)| w)
            .sum()
    }
}

/// Weights `w(g)` = number of codelines projecting onto `g` (two less than the number
/// of codelines in the preimage of `g`, the kernel codelines being the other two).
pub fn factor_weights(ls: &LineSystem, q: &QuotientMap) -> Result<WeightTable> {
    let mut weights = Vec::new();
    for (i, l) in ls.lines.iter().enumerate() {
        match q.project(l) {
            Projection::Zero => {}
            Projection::Point(_) => return Err(Error::DegenerateProjection(i)),
            Projection::Line(g) => weights.push((g, 1)),
        }
    }
    Ok(WeightTable::new(q.image_dim(), weights))
}

/// For every line `h` of the factor space, the weighted number of multiset lines meeting
/// `h` (including `h` itself) is odd.
pub fn multiset_parity_condition(wt: &WeightTable) -> bool {
    wt.line_weights.keys().all(|h| {
        let s: u32 = wt.line_weights.iter().filter(|(g, _)| g.meets(h)).map(|(_, &w)| w).sum();
        s % 2 == 1
    })
}

/// Every hyperplane of the ambient space meets `points` in a number of points whose
/// parity differs from `n_lines`.
pub fn hyperplane_parity(points: &[Point], ambient_dim: usize, n_lines: usize) -> bool {
    (1u32..(1 << ambient_dim)).all(|normal| {
        let inside = points.iter().filter(|p| !parity(p.vector() & normal)).count();
        inside % 2 != n_lines % 2
    })
}

/// Every codeword of the code generated by the rows of the matrix whose columns are the
/// points has even weight (sweep over all row combinations).
pub fn even_weight_condition(points: &[Point], ambient_dim: usize) -> bool {
    (1u32..(1 << ambient_dim)).all(|f| points.iter().filter(|p| parity(p.vector() & f)).count() % 2 == 0)
}

/// Sum of the point vectors; even weights in the row space are equivalent to this
/// sum vanishing, since even-weight words form a subspace.
pub fn point_sum(points: &[Point]) -> u32 {
    points.iter().fold(0, |acc, p| acc ^ p.vector())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::code_from_lines;
    use crate::geometry::Subspace;

    #[test]
    fn trivial_self_orthogonality() {
        assert!(is_self_orthogonal(&AdditiveCode::zero(4)));
        let one = AdditiveCode::from_generators(&crate::gf2::GF2Matrix::from_bits(&[0b1101], 4)).unwrap();
        assert!(is_self_orthogonal(&one));
    }

    #[test]
    fn plucker_is_generator_independent() {
        let (a, b) = (0b1011, 0b0110);
        assert_eq!(wedge(a, b), wedge(a, a ^ b));
        assert_eq!(wedge(a, b), wedge(b, a));
        assert_eq!(wedge(a, a), 0);
    }

    #[test]
    fn single_line_in_pg3_fails() {
        let ls = LineSystem::new(4, vec![Line::new(1, 2).unwrap()]);
        assert!(!quantum_condition(&ls));
        assert!(!quantum_condition_fast(&ls));
    }

    #[test]
    fn hyperplane_parity_of_empty_set() {
        assert!(hyperplane_parity(&[], 5, 3));
        assert!(!hyperplane_parity(&[], 5, 2));
    }

    #[test]
    fn even_weight_examples() {
        let p = Point::new(0b101).unwrap();
        assert!(even_weight_condition(&[p, p], 3));
        assert!(!even_weight_condition(&[p], 3));
    }

    #[test]
    fn multiset_parity_examples() {
        let zero = WeightTable::new(4, []);
        assert!(!multiset_parity_condition(&zero));
        let heavy = WeightTable::new(4, [(Line::new(1, 2).unwrap(), 11)]);
        assert_eq!(heavy.total(), 11);
        assert!(!multiset_parity_condition(&heavy));
    }

    #[test]
    fn factor_weights_reject_points() {
        let q = QuotientMap::new(Subspace::from_vectors(8, [1, 2, 4, 8]));
        let ls = LineSystem::new(8, vec![Line::new(1, 16).unwrap()]);
        assert_eq!(factor_weights(&ls, &q), Err(Error::DegenerateProjection(0)));
    }

    #[test]
    fn self_orthogonal_matches_plucker() {
        let ls = LineSystem::new(
            4,
            vec![Line::new(1, 2).unwrap(), Line::new(4, 8).unwrap(), Line::new(5, 10).unwrap()],
        );
        assert_eq!(is_self_orthogonal(&code_from_lines(&ls)), quantum_condition_fast(&ls));
        assert_eq!(quantum_condition(&ls), quantum_condition_fast(&ls));
    }
}
