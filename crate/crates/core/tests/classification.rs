use stabcert_core::geometry::Line;
use stabcert_core::nmset::{
    automorphism_order, check_strength3, exhaustive_nm_search, extension_lines, extension_points,
    max_points_given_lines, NMSet, SearchConstraints,
};

fn e(i: u32) -> u32 {
    1 << (i - 1)
}

fn line(a: u32, b: u32) -> Line {
    Line::new(a, b).unwrap()
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

#[test]
fn line_pairs_in_pg4_take_at_most_four_points() {
    assert_eq!(max_points_given_lines(5, 2).unwrap(), 4);
    let out = exhaustive_nm_search(5, 2, 4, &SearchConstraints::new());
    assert_eq!(out.classes.len(), 1);
}

#[test]
fn printed_two_four_set_is_maximal() {
    let s = NMSet::from_lines(5, vec![line(e(1), e(2)), line(e(3), e(4))])
        .with_point(e(5))
        .with_point(e(1) | e(3) | e(5))
        .with_point(e(2) | e(4) | e(5))
        .with_point(e(1) | e(2) | e(3) | e(4) | e(5));
    assert!(check_strength3(&s));
    assert!(extension_points(&s).is_empty());
}

#[test]
fn line_sets_in_pg5() {
    for n in 4..=6 {
        let out = exhaustive_nm_search(6, n, 0, &SearchConstraints::new());
        assert_eq!(out.classes.len(), 1, "n = {n}");
    }
    assert!(exhaustive_nm_search(6, 7, 0, &SearchConstraints::new()).classes.is_empty());
}

#[test]
fn hyperoval_facts() {
    let h = hyperoval();
    assert!(check_strength3(&h));
    assert!(extension_lines(&h).is_empty());
    assert_eq!(automorphism_order(&h), 2160);
    let first_five = NMSet::from_lines(6, h.lines()[..5].to_vec());
    assert!(extension_lines(&first_five).contains(&h.lines()[5]));
}

#[test]
fn point_bounds_in_pg5() {
    assert_eq!(max_points_given_lines(6, 6).unwrap(), 0);
    assert_eq!(max_points_given_lines(6, 5).unwrap(), 2);
    assert_eq!(max_points_given_lines(6, 4).unwrap(), 4);
    assert!(max_points_given_lines(6, 7).is_err());
}

#[test]
fn seven_line_sets_in_pg6() {
    let t = std::time::Instant::now();
    let out = exhaustive_nm_search(7, 7, 0, &SearchConstraints::new());
    eprintln!("(7,0) in PG(6,2): {:?} in {:?}", out.levels, t.elapsed());
    assert_eq!(out.classes.len(), 3);
    let mut ext: Vec<usize> = out.classes.iter().map(|c| extension_points(&c.canonical).len()).collect();
    ext.sort_unstable();
    assert_eq!(ext, vec![1, 2, 8]);
    for c in &out.classes {
        assert!(extension_lines(&c.canonical).is_empty());
    }
}
