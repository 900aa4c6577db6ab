use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stabcert_core::code::{code_from_lines, min_quaternary_distance, strength, symplectic_dual, AdditiveCode, LineSystem};
use stabcert_core::geometry::{Line, Projection, QuotientMap, Subspace};
use stabcert_core::gf2::{euclidean_product, parity, rank_of, symplectic_bits, GF2Matrix, GF2Vector};
use stabcert_core::nmset::{automorphism_order, canonical_form, isomorphism, NMSet, Transform};
use stabcert_core::quantum::{factor_weights, is_self_orthogonal, plucker_sum, quantum_condition, quantum_condition_fast};

fn e(i: u32) -> u32 {
    1 << (i - 1)
}

fn line(a: u32, b: u32) -> Line {
    Line::new(a, b).unwrap()
}

/// `n` random lines of PG(dim-1,2), repeats allowed.
fn lines_strategy(dim: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Line>> {
    let top = 1u32 << dim;
    prop::collection::vec((1..top, 1..top).prop_filter_map("distinct points", |(a, b)| Line::new(a, b).ok()), n)
}

/// Self-orthogonal systems: unions of the three lines through a point of a plane,
/// whose Plücker vectors cancel, optionally with doubled lines.
fn self_orthogonal_strategy(dim: usize) -> impl Strategy<Value = Vec<Line>> {
    let top = 1u32 << dim;
    let pencil = (1..top, 1..top, 1..top)
        .prop_filter("independent", |&(a, b, c)| rank_of([a, b, c]) == 3)
        .prop_map(|(a, b, c)| vec![line(a, b), line(a, c), line(a, b ^ c)]);
    let double = (1..top, 1..top).prop_filter_map("distinct points", |(a, b)| Line::new(a, b).ok().map(|l| vec![l, l]));
    prop::collection::vec(prop_oneof![3 => pencil, 1 => double], 1..=4).prop_map(|v| v.concat())
}

fn random_transform(rng: &mut impl Rng, dim: usize) -> Transform {
    loop {
        let cols: Vec<u32> = (0..dim).map(|_| rng.gen_range(1..1u32 << dim)).collect();
        if rank_of(cols.iter().copied()) == dim {
            return Transform::from_columns(&cols).unwrap();
        }
    }
}

fn hyperoval() -> NMSet {
    NMSet::from_lines(
        6,
        vec![
            line(e(1), e(2)),
            line(e(3), e(4)),
            line(e(5), e(6)),
            line(e(1) | e(3) | e(5), e(2) | e(4) | e(6)),
            line(e(1) | e(3) | e(4) | e(6), e(2) | e(3) | e(5) | e(6)),
            line(e(1) | e(4) | e(5) | e(6), e(2) | e(3) | e(4) | e(5)),
        ],
    )
}

fn two_four_set() -> NMSet {
    NMSet::from_lines(5, vec![line(e(1), e(2)), line(e(3), e(4))])
        .with_point(e(5))
        .with_point(e(1) | e(3) | e(5))
        .with_point(e(2) | e(4) | e(5))
        .with_point(e(1) | e(2) | e(3) | e(4) | e(5))
}

proptest! {
    #[test]
    fn symplectic_product_is_alternating_and_bilinear(u in 0u32..1 << 16, v in 0u32..1 << 16, w in 0u32..1 << 16) {
        prop_assert_eq!(symplectic_bits(u ^ v, w), symplectic_bits(u, w) ^ symplectic_bits(v, w));
        prop_assert_eq!(symplectic_bits(u, w), symplectic_bits(w, u));
        prop_assert!(!symplectic_bits(u, u));
        let vec = |x| GF2Vector::from_bits(x, 16);
        let sum = euclidean_product(vec(u) + vec(v), vec(w)).unwrap();
        prop_assert_eq!(sum, euclidean_product(vec(u), vec(w)).unwrap() ^ euclidean_product(vec(v), vec(w)).unwrap());
        prop_assert_eq!(euclidean_product(vec(u), vec(w)).unwrap(), parity(u & w));
    }

    #[test]
    fn rank_plus_nullity_is_width(ncols in 1usize..=16, rows in prop::collection::vec(any::<u32>(), 0..12)) {
        let rows: Vec<u32> = rows.iter().map(|r| r & ((1u64 << ncols) - 1) as u32).collect();
        let m = GF2Matrix::from_bits(&rows, ncols);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.nrows(), ncols);
        prop_assert_eq!(k.rank(), k.nrows());
        for x in k.row_bits() {
            prop_assert!(rows.iter().all(|&r| !parity(r & x)));
        }
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn row_reduction_is_idempotent(ncols in 1usize..=16, rows in prop::collection::vec(any::<u32>(), 1..12)) {
        let rows: Vec<u32> = rows.iter().map(|r| r & ((1u64 << ncols) - 1) as u32).collect();
        let m = GF2Matrix::from_bits(&rows, ncols);
        let r = m.row_reduce();
        prop_assert_eq!(r.row_reduce(), r.clone());
        prop_assert_eq!(r.rank(), m.rank());
        for &x in &rows {
            prop_assert!(r.row_space_contains(GF2Vector::from_bits(x, ncols)));
        }
    }

    #[test]
    fn symplectic_dual_has_complementary_dimension(n in 1usize..=8, rows in prop::collection::vec(any::<u32>(), 0..10)) {
        let rows: Vec<u32> = rows.iter().map(|r| r & ((1u64 << (2 * n)) - 1) as u32).collect();
        let c = AdditiveCode::from_generators(&GF2Matrix::from_bits(&rows, 2 * n)).unwrap();
        let d = symplectic_dual(&c);
        prop_assert_eq!(c.k2() + d.k2(), 2 * n);
        let dd = symplectic_dual(&d);
        prop_assert_eq!(dd.k2(), c.k2());
        for &x in &rows {
            prop_assert!(dd.contains(GF2Vector::from_bits(x, 2 * n)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Strength is the dual distance minus one once the lines cannot all be independent.
    #[test]
    fn strength_is_dual_distance_minus_one(dim in 4usize..=7, lines in lines_strategy(7, 3..=7)) {
        let lines: Vec<Line> = lines.into_iter().filter(|l| l.points().iter().all(|&p| p < 1 << dim)).collect();
        prop_assume!(2 * lines.len() > dim);
        let ls = LineSystem::new(dim, lines);
        let dual = symplectic_dual(&code_from_lines(&ls));
        prop_assert_eq!(strength(&ls) + 1, min_quaternary_distance(&dual).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn secundum_sweep_matches_self_orthogonality(dim in 4usize..=6, lines in lines_strategy(6, 1..=9)) {
        let lines: Vec<Line> = lines.into_iter().map(|l| l.map(|v| v & ((1 << dim) - 1))).filter(|l| {
            let (a, b) = l.generators();
            rank_of([a, b]) == 2
        }).collect();
        prop_assume!(!lines.is_empty());
        let ls = LineSystem::new(dim, lines);
        let so = is_self_orthogonal(&code_from_lines(&ls));
        prop_assert_eq!(quantum_condition(&ls), so);
        prop_assert_eq!(quantum_condition_fast(&ls), so);
    }

    #[test]
    fn generated_systems_are_self_orthogonal((dim, lines) in (4usize..=6).prop_flat_map(|d| (Just(d), self_orthogonal_strategy(d)))) {
        let ls = LineSystem::new(dim, lines);
        prop_assert_eq!(plucker_sum(&ls.lines), 0);
        prop_assert!(is_self_orthogonal(&code_from_lines(&ls)));
        prop_assert!(quantum_condition(&ls));
    }

    /// Each codeline outside the kernel projects onto a factor line, so the weights
    /// add up to two less than the number of codelines.
    #[test]
    fn factor_weights_sum_to_line_count_minus_two(lines in lines_strategy(8, 1..=11)) {
        let q = QuotientMap::new(Subspace::from_vectors(8, [e(1), e(2), e(3), e(4)]));
        let mut all = vec![line(e(1), e(2)), line(e(3), e(4))];
        all.extend(lines.into_iter().filter(|l| matches!(q.project(l), Projection::Line(_))));
        let ls = LineSystem::new(8, all);
        let wt = factor_weights(&ls, &q).unwrap();
        prop_assert_eq!(wt.total() as usize, ls.len() - 2);
    }
}

#[test]
fn canonical_form_is_invariant_under_projectivities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ho = hyperoval();
    let sets = [ho.clone(), two_four_set(), NMSet::from_lines(6, ho.lines()[..4].to_vec()).with_point(e(1) | e(3))];
    for s in &sets {
        let c = canonical_form(s);
        let aut = automorphism_order(s);
        for _ in 0..100 {
            let t = random_transform(&mut rng, s.ambient_dim());
            let image = s.map(&t);
            assert_eq!(canonical_form(&image).code, c.code);
            assert_eq!(automorphism_order(&image), aut);
            let g = isomorphism(s, &image).expect("images are equivalent");
            assert!(s.map(&g).same_objects(&image));
        }
        assert!(s.map(&c.to_canonical).same_objects(&c.set()));
    }
}
