//! Stage W5: the (7,0)-sets of PG(6,2) and the parity of the (7,6)-set.

use std::collections::BTreeSet;

use stabcert_core::geometry::Line;
use stabcert_core::nmset::{
    automorphism_order, canonical_form, check_strength3, classify, exhaustive_nm_search, extension_points, NMSet,
    SearchConstraints,
};
use stabcert_core::quantum::hyperplane_parity;

use super::purity::standard_prefix;
use super::{cite, known_classes, record_equivalence, with_points, RunOptions, StageId};
use crate::certificate::{Certificate, SampleRecord, SearchSpace, Severity};
use crate::error::Result;
use crate::fixtures;
use crate::lines::LineCompletion;
use crate::points::PointCompletion;
use crate::sampling::select;

/// Some choice of two points on every line makes the binary generator matrix
/// (coordinates as rows, the chosen points as columns) orthogonal to itself under the
/// dot product, diagonal included.
pub fn euclidean_self_dual(lines: &[Line]) -> bool {
    let pairs: Vec<[(u32, u32); 3]> = lines
        .iter()
        .map(|l| {
            let [p, q, r] = l.points();
            [(p, q), (p, r), (q, r)]
        })
        .collect();
    let dim = 32 - lines.iter().flat_map(|l| l.points()).fold(0, |a, p| a | p).leading_zeros() as usize;
    let gram_zero = |choice: &[(u32, u32)]| {
        (0..dim).all(|r| {
            (r..dim).all(|s| {
                let dot = choice.iter().fold(0u32, |acc, &(a, b)| {
                    acc ^ ((a >> r) & (a >> s) & 1) ^ ((b >> r) & (b >> s) & 1)
                });
                dot == 0
            })
        })
    };
    let n = pairs.len();
    (0..3usize.pow(n as u32)).any(|mut code| {
        let choice: Vec<(u32, u32)> = pairs
            .iter()
            .map(|p| {
                let c = p[code % 3];
                code /= 3;
                c
            })
            .collect();
        gram_zero(&choice)
    })
}

/// Independent route: reduction-free (7,0)-sets through the standard prefix in a
/// seeded selection of subtrees; `found` counts those outside the `reference` classes.
pub(crate) fn resample(rate: f64, seed: u64, reference: Vec<String>) -> Result<SampleRecord> {
    let known = known_classes(&reference, |s| s.n_lines() == 7 && s.n_points() == 0)?;
    let prefix = standard_prefix(7);
    let lc = LineCompletion::new(&prefix, 4);
    let picked = select(lc.subtree_count(), rate, seed);
    let sampled = lc.run_subtrees(&picked);
    let stray = sampled
        .solutions
        .iter()
        .filter(|ls| !known.contains(&canonical_form(&ls.iter().fold(prefix.clone(), |s, &l| s.with_line(l))).code))
        .count();
    Ok(SampleRecord {
        rate,
        seed,
        subtrees_total: lc.subtree_count() as u64,
        subtrees: picked.iter().map(|&i| i as u64).collect(),
        nodes: sampled.nodes,
        found: stray as u64,
        expected_found: 0,
        reference,
    })
}

pub fn run(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::W5, cite::PARITY_76);
    let printed = fixtures::SEVENZERO_SELFDUAL.parse()?;
    let printed_points = fixtures::SEVENZERO_EXTENSION_POINTS.parse()?;

    let out = exhaustive_nm_search(7, 7, 0, &SearchConstraints::new());
    let mut space = SearchSpace { nodes: out.nodes(), candidates: out.candidates() };
    let reps: Vec<NMSet> = out.classes.iter().map(|c| c.canonical.clone()).collect();
    cert.check("(7,0)-set classes in PG(6,2)", reps.len(), 3, cite::THREE_CLASSES, Severity::Required);
    let ext: Vec<usize> = reps.iter().map(|r| extension_points(r).len()).collect();
    let mut sorted = ext.clone();
    sorted.sort_unstable();
    cert.check("extension points per class", &sorted, vec![1, 2, 8], cite::EXT_COUNTS, Severity::Required);
    let euclid: Vec<bool> = reps.iter().map(|r| euclidean_self_dual(r.lines())).collect();
    cert.check("classes with a Euclidean self-dual code", euclid.iter().filter(|&&b| b).count(), 1, cite::EUCLIDEAN, Severity::Required);
    let dual_ext: Vec<usize> = ext.iter().zip(&euclid).filter(|(_, &b)| b).map(|(&c, _)| c).collect();
    cert.check("extension points of the self-dual class", dual_ext, vec![8], cite::SELF_DUAL_EIGHT, Severity::Required);
    cert.info("automorphism orders", out.classes.iter().map(|c| c.aut_order as u64).collect::<Vec<_>>());

    // The printed self-dual set and its extension points.
    cert.check("printed (7,0)-set has strength 3", check_strength3(&printed), true, cite::SELF_DUAL_EIGHT, Severity::Required);
    let idx = record_equivalence(&mut cert, fixtures::SEVENZERO_SELFDUAL.name, &printed, &reps);
    cert.check("printed set lies in the class with 8 extension points", idx.map(|i| ext[i]), Some(8), cite::SELF_DUAL_EIGHT, Severity::Required);
    cert.check("printed set is Euclidean self-dual", euclidean_self_dual(printed.lines()), true, cite::EUCLIDEAN, Severity::Required);
    cert.check("automorphisms of the printed set", automorphism_order(&printed) as u64, 42u64, cite::AUT_42, Severity::Required);
    let mut found: Vec<u32> = extension_points(&printed).iter().map(|p| p.vector()).collect();
    let mut listed: Vec<u32> = printed_points.point_vectors().to_vec();
    found.sort_unstable();
    listed.sort_unstable();
    cert.check("printed extension points", found == listed, true, cite::EIGHT_POINTS, Severity::Required);
    let p0 = printed_points.point_vectors()[0];
    let e_set: BTreeSet<u32> = printed_points.point_vectors()[1..].iter().copied().collect();
    let h = 1u32 << 6;
    let cone: BTreeSet<u32> = printed
        .lines()
        .iter()
        .filter_map(|l| l.points().into_iter().find(|&q| q & h == 0))
        .map(|q| q ^ p0)
        .collect();
    cert.check("cone from P0 over the traces in x7 = 0 gives E", cone == e_set, true, cite::CONE, Severity::Required);

    // (7,7) and (7,6).
    let seven = PointCompletion::new(&printed, 7, None).run();
    space.nodes += seven.nodes;
    let unique_e = seven.solutions.len() == 1 && seven.solutions[0].iter().copied().collect::<BTreeSet<_>>() == e_set;
    cert.check("(7,7)-sets extending the printed set", seven.solutions.len(), 1, cite::SEVEN_SEVEN, Severity::Required);
    cert.check("the (7,7)-set is E", unique_e, true, cite::SEVEN_SEVEN, Severity::Required);
    let mut six_sets = Vec::new();
    for r in &reps {
        let six = PointCompletion::new(r, 6, None).run();
        space.nodes += six.nodes;
        six_sets.extend(six.solutions.iter().map(|s| with_points(r, s)));
    }
    let six_classes = classify(six_sets.iter().cloned());
    cert.check("(7,6)-set classes in PG(6,2)", six_classes.len(), 1, cite::SEVEN_SEVEN, Severity::Required);
    let quantum: Vec<&NMSet> = six_sets.iter().filter(|s| hyperplane_parity(&s.points(), 7, 7)).collect();
    cert.outcome.witnesses = six_classes.iter().map(|c| c.canonical.to_text()).collect();
    cert.outcome.count = quantum.len() as u64;
    cert.info("(7,6)-sets tested for hyperplane parity", six_sets.len());

    cert.sample = Some(resample(opts.sample_rate, opts.seed, reps.iter().map(|r| r.to_text()).collect())?);
    cert.search_space = space;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_line_is_not_self_orthogonal() {
        assert!(!euclidean_self_dual(&[Line::new(1, 2).unwrap()]));
    }
}
