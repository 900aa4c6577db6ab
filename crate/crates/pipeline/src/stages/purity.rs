//! Stage P: strength-3 line sets in small spaces.

use stabcert_core::code::{code_from_lines, symplectic_dual, words_supported_on, quaternary_weight_bits, LineSystem};
use stabcert_core::geometry::{enumerate_lines, span_dim, Line};
use stabcert_core::nmset::{
    automorphism_order, check_strength3, exhaustive_nm_search, extension_points, max_points_given_lines, NMSet,
    SearchConstraints,
};

use super::{cite, record_equivalence, RunOptions, StageId};
use crate::certificate::{Certificate, SampleRecord, SearchSpace, Severity};
use crate::error::Result;
use crate::fixtures;
use crate::lines::LineCompletion;
use crate::points::PointCompletion;
use crate::sampling::select;

fn e(i: u32) -> u32 {
    1 << (i - 1)
}

pub(crate) fn standard_prefix(dim: usize) -> NMSet {
    let l = |a, b| Line::new(a, b).expect("independent");
    NMSet::from_lines(dim, vec![l(e(1), e(2)), l(e(3), e(4)), l(e(5), e(6))])
}

/// Reduction-free (8,0)-sets of PG(6,2) through the standard prefix in a seeded
/// selection of subtrees.
pub(crate) fn resample(rate: f64, seed: u64) -> SampleRecord {
    let lc = LineCompletion::new(&standard_prefix(7), 5);
    let picked = select(lc.subtree_count(), rate, seed);
    let sampled = lc.run_subtrees(&picked);
    SampleRecord {
        rate,
        seed,
        subtrees_total: lc.subtree_count() as u64,
        subtrees: picked.iter().map(|&i| i as u64).collect(),
        nodes: sampled.nodes,
        found: sampled.solutions.len() as u64,
        expected_found: 0,
        reference: Vec::new(),
    }
}

pub fn run(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::P, cite::NO_SEVEN_ZERO);
    let hyperoval = fixtures::HYPEROVAL.parse()?;
    let two_four = fixtures::TWO_FOUR_SET.parse()?;
    let mut space = SearchSpace::default();

    // (2,m)-sets in PG(4,2).
    let pairs = exhaustive_nm_search(5, 2, 4, &SearchConstraints::new());
    space.nodes += pairs.nodes();
    space.candidates += pairs.candidates();
    cert.check("max points on two lines in PG(4,2)", max_points_given_lines(5, 2)?, 4, cite::TWO_FOUR, Severity::Required);
    cert.check("(2,4)-set classes in PG(4,2)", pairs.classes.len(), 1, cite::TWO_FOUR, Severity::Required);
    cert.check("printed (2,4)-set has strength 3", check_strength3(&two_four), true, cite::TWO_FOUR, Severity::Required);
    let reps: Vec<NMSet> = pairs.classes.iter().map(|c| c.canonical.clone()).collect();
    let idx = record_equivalence(&mut cert, fixtures::TWO_FOUR_SET.name, &two_four, &reps);
    cert.check("printed (2,4)-set is equivalent to the class", idx.is_some(), true, cite::TWO_FOUR, Severity::Required);
    let embedded = (0..4).all(|m| {
        exhaustive_nm_search(5, 2, m, &SearchConstraints::new())
            .classes
            .iter()
            .all(|c| m == 4 || !PointCompletion::new(&c.canonical, 4 - m, None).run().solutions.is_empty())
    });
    cert.check("every (2,m)-set extends to a (2,4)-set", embedded, true, cite::TWO_FOUR, Severity::Required);

    // Line sets in PG(5,2) and the binary hyperoval.
    let ho_classes = exhaustive_nm_search(6, 6, 0, &SearchConstraints::new());
    space.nodes += ho_classes.nodes();
    space.candidates += ho_classes.candidates();
    let per_level: Vec<usize> = ho_classes.levels.iter().skip(1).map(|l| l.classes).collect();
    cert.check("(n,0)-set classes in PG(5,2), n = 1..6", per_level, vec![1; 6], cite::HO_UNIQUE, Severity::Required);
    let seven = exhaustive_nm_search(6, 7, 0, &SearchConstraints::new());
    cert.check("(7,0)-set classes in PG(5,2)", seven.classes.len(), 0, cite::NO_SEVEN_ZERO, Severity::Required);
    let bounds: Vec<usize> = [6, 5, 4].into_iter().map(|n| max_points_given_lines(6, n)).collect::<std::result::Result<_, _>>()?;
    cert.check("max points with 6, 5, 4 lines in PG(5,2)", bounds, vec![0, 2, 4], cite::HO_POINTS, Severity::Required);
    cert.check(
        "transversal points of three lines in PG(5,2)",
        extension_points(&standard_prefix(6)).len(),
        27,
        cite::TRANSVERSAL,
        Severity::Required,
    );
    let first_four = NMSet::from_lines(6, hyperoval.lines()[..4].to_vec());
    let mut completing: Vec<u32> = extension_points(&first_four).iter().map(|p| p.vector()).collect();
    let mut on_last_two: Vec<u32> = hyperoval.lines()[4..].iter().flat_map(|l| l.points()).collect();
    completing.sort_unstable();
    on_last_two.sort_unstable();
    cert.check("points completing L1..L4 are the points of L5, L6", completing == on_last_two, true, cite::HO_SIX, Severity::Required);
    cert.check("printed hyperoval has strength 3", check_strength3(&hyperoval), true, cite::HO_UNIQUE, Severity::Required);
    cert.check("binary hyperoval automorphisms", automorphism_order(&hyperoval) as u64, 2160u64, cite::HO_AUT, Severity::Required);
    let ho_reps: Vec<NMSet> = ho_classes.classes.iter().map(|c| c.canonical.clone()).collect();
    let idx = record_equivalence(&mut cert, fixtures::HYPEROVAL.name, &hyperoval, &ho_reps);
    cert.check("printed hyperoval is equivalent to the (6,0)-class", idx.is_some(), true, cite::HO_UNIQUE, Severity::Required);

    // Reduction-free route for PG(5,2): the standard prefix is the unique (3,0)-class.
    let prefix5 = LineCompletion::new(&standard_prefix(6), 4);
    let full5 = prefix5.run();
    space.nodes += full5.nodes;
    cert.check("(7,0)-sets through the standard prefix in PG(5,2)", full5.solutions.len(), 0, cite::NO_SEVEN_ZERO, Severity::Required);

    // (8,0)-sets in PG(6,2).
    let eight = exhaustive_nm_search(7, 8, 0, &SearchConstraints::new());
    space.nodes += eight.nodes();
    space.candidates += eight.candidates();
    let levels: Vec<usize> = eight.levels.iter().skip(1).map(|l| l.classes).collect();
    cert.info("(n,0)-set classes in PG(6,2), n = 1..8", &levels);
    cert.check("(3,0)-set classes in PG(6,2)", levels.get(2).copied(), Some(1), cite::NO_SEVEN_ZERO, Severity::Required);
    cert.check("(8,0)-set classes in PG(6,2)", eight.classes.len(), 0, cite::NO_SEVEN_ZERO, Severity::Required);
    cert.sample = Some(resample(opts.sample_rate, opts.seed));

    // A dependent codeline triple carries a dual word of weight 2 or 3 on its support.
    let (l1, l2) = (Line::new(e(1), e(2))?, Line::new(e(3), e(4))?);
    let mut dependent = 0u64;
    let mut witnessed = 0u64;
    for l in enumerate_lines(8)? {
        if l == l1 || l == l2 {
            continue;
        }
        let pts = [l1, l2, l].iter().flat_map(|x| x.points()).collect::<Vec<_>>();
        if span_dim(pts) == 6 {
            continue;
        }
        dependent += 1;
        let dual = symplectic_dual(&code_from_lines(&LineSystem::new(8, vec![l1, l2, l])));
        let words = words_supported_on(&dual, &[0, 1, 2]);
        if !words.is_empty() && words.iter().all(|w| matches!(quaternary_weight_bits(w.bits()), 2 | 3)) {
            witnessed += 1;
        }
    }
    cert.check("dependent triples with a dual word of weight 2 or 3", witnessed, dependent, cite::PURE, Severity::Required);

    cert.search_space = space;
    cert.outcome.count = (seven.classes.len() + eight.classes.len()) as u64;
    Ok(cert)
}
