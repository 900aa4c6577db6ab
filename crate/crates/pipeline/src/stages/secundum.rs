//! Stage S: five codelines in a secundum.
//!
//! With `L1..L5` spanning the secundum `S = <e1..e6>` and `H = <e1..e7>`, each of the
//! eight remaining codelines meets `H` in a point outside `S`. These points `M` form
//! a (5,8)-set with `L1..L5` whose point sum vanishes, and each remaining line is
//! `<M_i, e8 + c_i>` with `c_i` in `H`.

use rayon::prelude::*;
use stabcert_core::code::LineSystem;
use stabcert_core::geometry::{Point, PointSet};
use stabcert_core::gf2::rref_basis;
use stabcert_core::nmset::{check_strength3, classify, exhaustive_nm_search, NMSet, SearchConstraints};
use stabcert_core::quantum::even_weight_condition;

use super::{cite, embed, RunOptions, StageId};
use crate::certificate::{Certificate, SampleRecord, SearchSpace, Severity};
use crate::completion::{hyperplane_problem, CompletionOutcome};
use crate::error::Result;
use crate::fixtures;
use crate::points::PointCompletion;
use crate::sampling::select;

const E7: u32 = 1 << 6;
const SECUNDUM: u32 = 0x3f;

/// Completes every system and sums the outcomes.
pub(crate) fn complete_all(lines: &NMSet, systems: &[Vec<u32>]) -> CompletionOutcome {
    systems
        .par_iter()
        .map(|m| hyperplane_problem(lines.lines(), m).solve(2))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(CompletionOutcome::default(), |mut acc, o| {
            acc.absorb(o);
            acc
        })
}

pub(crate) fn record_completion(cert: &mut Certificate, out: &CompletionOutcome, systems: usize) {
    cert.info("factor-space solutions", out.factor_solutions);
    cert.info("factor-space solutions with liftable lines", out.factor_valid);
    cert.info("lift nodes", out.lifted);
    cert.search_space.candidates += systems as u64;
    cert.search_space.nodes += out.lifted;
    cert.outcome.count += out.found;
    cert.outcome.witnesses.extend(out.solutions.iter().map(|ls| LineSystem::new(8, ls.clone()).to_text()));
}

/// A seeded selection of systems, recorded with the codelines as reference
/// configurations and re-solved by `resample_systems`.
pub(crate) fn sample_completions(lines: &NMSet, systems: &[Vec<u32>], opts: &RunOptions) -> Result<SampleRecord> {
    let picked = select(systems.len(), opts.sample_rate, opts.seed);
    let reference = picked.iter().map(|&i| super::with_points(lines, &systems[i]).to_text()).collect();
    resample_systems(opts.sample_rate, opts.seed, systems.len() as u64, reference)
}

/// Solves each reference system twice: by one-shot elimination over all
/// orthogonality equations (`found`) and by the main route (`expected_found`).
pub(crate) fn resample_systems(rate: f64, seed: u64, total: u64, reference: Vec<String>) -> Result<SampleRecord> {
    let parsed: Vec<NMSet> = reference.iter().map(|t| NMSet::parse_text(t)).collect::<std::result::Result<_, _>>()?;
    let results: Vec<(u64, u64, u64)> = parsed
        .par_iter()
        .map(|s| {
            if s.ambient_dim() != 7 || s.n_points() != 8 || !check_strength3(s) {
                return (0, 1, 0);
            }
            let p = hyperplane_problem(s.lines(), s.point_vectors());
            let (size, found) = p.oracle_count();
            (size, found, p.solve(0).found)
        })
        .collect();
    Ok(SampleRecord {
        rate,
        seed,
        subtrees_total: total,
        subtrees: select(total as usize, rate, seed).iter().map(|&i| i as u64).collect(),
        nodes: results.iter().map(|r| r.0).sum(),
        found: results.iter().map(|r| r.1).sum(),
        expected_found: results.iter().map(|r| r.2).sum(),
        reference,
    })
}

/// The lines span at most a secundum of the hyperplane and no point lies in their span.
fn lines_in_secundum(s: &NMSet) -> bool {
    let generators = s.lines().iter().flat_map(|l| {
        let (a, b) = l.generators();
        [a, b]
    });
    let basis = rref_basis(generators, s.ambient_dim());
    let mut span = PointSet::new();
    span.insert_span(&basis);
    basis.len() <= 6 && s.point_vectors().iter().all(|&p| !span.contains(p))
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Systems with `M_0 = e7` from the conditions as stated: `w_i` and `w_i + w_j` off
/// the codelines, and even weights in the code generated by `M`.
fn literal_systems(lines: &NMSet) -> Vec<Vec<u32>> {
    let mut on_lines = PointSet::new();
    for l in lines.lines() {
        for p in l.points() {
            on_lines.insert(p);
        }
    }
    let ws: Vec<u32> = (1..=SECUNDUM).filter(|&w| !on_lines.contains(w)).collect();
    fn go(ws: &[u32], on: &PointSet, start: usize, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if chosen.len() == 7 {
            let m: Vec<Point> = std::iter::once(E7)
                .chain(chosen.iter().map(|w| w ^ E7))
                .map(|v| Point::new(v).expect("nonzero"))
                .collect();
            if even_weight_condition(&m, 7) {
                out.push(sorted(m.iter().map(|p| p.vector()).collect()));
            }
            return;
        }
        for i in start..ws.len() {
            let w = ws[i];
            if chosen.iter().all(|&u| !on.contains(u ^ w)) {
                chosen.push(w);
                go(ws, on, i + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&ws, &on_lines, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn run(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::S, cite::S_EMPTY);
    let lines = fixtures::SECUNDUM_LINES.parse_in(7)?;
    let hyperoval = embed(&fixtures::HYPEROVAL.parse()?, 7);
    let first_five = NMSet::from_lines(7, hyperoval.lines()[..5].to_vec());
    cert.check("codelines in S are five hyperoval lines", lines.same_objects(&first_five), true, cite::S_PREFIX, Severity::Required);
    cert.check("span of the five codelines", lines.span_dim(), 6, cite::S_PREFIX, Severity::Required);
    cert.check("five codelines have strength 3", check_strength3(&lines), true, cite::S_PREFIX, Severity::Required);

    let pc = PointCompletion::new(&lines, 8, Some(0)).filter(|p| p & E7 != 0);
    cert.check("e7 is the least candidate point", pc.candidates().first().copied(), Some(E7), cite::TWELVE, Severity::Required);
    let found = pc.run_subtree(0);
    let systems: Vec<Vec<u32>> = found.solutions.iter().map(|m| sorted(m.clone())).collect();
    cert.search_space = SearchSpace { nodes: found.nodes, candidates: 0 };
    cert.info("systems M with M_0 = e7", systems.len());
    let mut ours = systems.clone();
    ours.sort();
    cert.check("systems from the stated conditions", literal_systems(&lines) == ours, true, cite::TWELVE, Severity::Required);

    let sets: Vec<NMSet> = systems.iter().map(|m| super::with_points(&lines, m)).collect();
    let classes = classify(sets);
    cert.check("classes of systems M", classes.len(), 12, cite::TWELVE, Severity::Warning);
    cert.info("class sizes", classes.iter().map(|c| c.multiplicity).collect::<Vec<_>>());
    let generated = exhaustive_nm_search(
        7,
        5,
        8,
        &SearchConstraints::new()
            .hereditary(lines_in_secundum)
            .accept(|s: &NMSet| s.point_vectors().iter().fold(0, |a, p| a ^ p) == 0),
    );
    cert.check("classes by isomorph-free generation", generated.classes.len(), 12, cite::TWELVE, Severity::Warning);
    cert.info("automorphism orders", classes.iter().map(|c| c.aut_order as u64).collect::<Vec<_>>());

    let out = complete_all(&lines, &systems);
    record_completion(&mut cert, &out, systems.len());
    cert.sample = Some(sample_completions(&lines, &systems, opts)?);
    Ok(cert)
}
