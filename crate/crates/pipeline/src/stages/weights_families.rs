//! Stage W4c: six codelines in a hyperplane, any four of them spanning it.

use std::collections::BTreeSet;

use stabcert_core::geometry::span_dim;
use stabcert_core::nmset::{
    automorphism_order, canonical_form, check_strength3, exhaustive_nm_search, NMSet, SearchConstraints,
};

use super::purity::standard_prefix;
use super::weights_prefix::SevenPoint;
use super::{cite, known_classes, record_equivalence, standard_frame, RunOptions, StageId};
use crate::certificate::{Certificate, SampleRecord, SearchSpace, Severity};
use crate::error::Result;
use crate::fixtures;
use crate::lines::LineCompletion;
use crate::sampling::select;

/// Every four lines span the whole ambient space.
pub fn any_four_span(s: &NMSet) -> bool {
    let ls = s.lines();
    let n = ls.len();
    let d = s.ambient_dim();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for e in c + 1..n {
                    if span_dim([a, b, c, e].iter().flat_map(|&i| ls[i].points())) < d {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Independent route: reduction-free six-line sets through the standard prefix in a
/// seeded selection of subtrees; `found` counts those with both conditions outside
/// the `reference` classes.
pub(crate) fn resample(rate: f64, seed: u64, reference: Vec<String>) -> Result<SampleRecord> {
    let known = known_classes(&reference, |s| s.n_lines() == 6 && s.n_points() == 0 && any_four_span(s))?;
    let prefix = standard_prefix(7);
    let lc = LineCompletion::new(&prefix, 3);
    let picked = select(lc.subtree_count(), rate, seed);
    let sampled = lc.run_subtrees(&picked);
    let stray = sampled
        .solutions
        .iter()
        .map(|ls| ls.iter().fold(prefix.clone(), |s, &l| s.with_line(l)))
        .filter(|s| any_four_span(s) && !known.contains(&canonical_form(s).code))
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

/// Six-line sets with both conditions through the standard prefix, counted
/// without isomorph rejection. Each such set contains 20 line triples, all
/// equivalent to the prefix, so the count must equal the sum over the classes of
/// `20 |Aut(prefix)| / |Aut(class)|`; returns the count and whether it does.
fn orbit_count(aut_orders: &[u128]) -> (u64, bool) {
    let prefix = standard_prefix(7);
    let out = LineCompletion::new(&prefix, 3).run();
    let count = out
        .solutions
        .iter()
        .filter(|ls| any_four_span(&ls.iter().fold(prefix.clone(), |s, &l| s.with_line(l))))
        .count() as u64;
    let stab = automorphism_order(&prefix);
    let product: u128 = aut_orders.iter().product();
    let predicted: u128 = aut_orders.iter().map(|a| 20 * stab * (product / a)).sum();
    (count, count as u128 * product == predicted)
}

pub fn run(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::W4c, cite::FAMILIES_EMPTY);
    let families: Vec<NMSet> = fixtures::SIX_LINE_FAMILIES.iter().map(|f| f.parse()).collect::<Result<_>>()?;

    let out = exhaustive_nm_search(7, 6, 0, &SearchConstraints::new().hereditary(any_four_span));
    cert.search_space = SearchSpace { nodes: out.nodes(), candidates: out.candidates() };
    let reps: Vec<NMSet> = out.classes.iter().map(|c| c.canonical.clone()).collect();
    cert.check("classes of six-line families", reps.len(), 4, cite::FOUR_FAMILIES, Severity::Warning);
    let auts: Vec<u128> = out.classes.iter().map(|c| c.aut_order).collect();
    cert.info("automorphism orders", auts.iter().map(|&a| a as u64).collect::<Vec<_>>());
    let (count, agrees) = orbit_count(&auts);
    cert.info("families through the standard prefix", count);
    cert.check("orbit count matches the classes", agrees, true, cite::FOUR_FAMILIES, Severity::Required);

    let mut matched = Vec::new();
    for (f, fx) in families.iter().zip(fixtures::SIX_LINE_FAMILIES) {
        let ok = check_strength3(f) && any_four_span(f);
        cert.check(&format!("{} satisfies both conditions", fx.name), ok, true, cite::FOUR_FAMILIES, Severity::Required);
        matched.push(record_equivalence(&mut cert, fx.name, f, &reps));
    }
    cert.check("printed families lie in the classes", matched.iter().all(Option::is_some), true, cite::FOUR_FAMILIES, Severity::Required);
    let distinct: BTreeSet<usize> = matched.iter().flatten().copied().collect();
    cert.check("printed families match distinct classes", distinct.len(), 4, cite::FOUR_FAMILIES, Severity::Warning);

    // Every class, brought into a frame with L1 = <e1,e2> and L2 = <e3,e4>.
    let mut per_class = Vec::new();
    let mut all = SevenPoint::default();
    for r in &reps {
        let found = SevenPoint::search(&standard_frame(r));
        per_class.push(found.systems);
        all.absorb(found);
    }
    cert.check("(6,7)-sets per class", &per_class, vec![0u64; reps.len()], cite::FAMILIES_EMPTY, Severity::Warning);
    let per_printed: Vec<u64> = families.iter().map(|f| SevenPoint::search(f).systems).collect();
    cert.check("(6,7)-sets per printed family", per_printed, vec![0u64; 4], cite::FAMILIES_EMPTY, Severity::Warning);
    all.record(&mut cert, cite::FAMILIES_EMPTY, cite::FAMILIES_EMPTY);

    cert.sample = Some(resample(opts.sample_rate, opts.seed, reps.iter().map(|r| r.to_text()).collect())?);
    Ok(cert)
}
