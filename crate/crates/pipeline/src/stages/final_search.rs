//! Stage F: five codelines spanning a hyperplane.

use stabcert_core::geometry::{is_cap, secants, span_dim, Point};
use stabcert_core::nmset::{classify, exhaustive_nm_search, extension_points, isomorphism, NMSet, SearchConstraints};
use stabcert_core::quantum::even_weight_condition;

use super::secundum::{complete_all, record_completion, sample_completions};
use super::{cite, record_equivalence, standard_frame, with_points, RunOptions, StageId};
use crate::certificate::{Certificate, Severity};
use crate::completion::CompletionOutcome;
use crate::error::Result;
use crate::fixtures;
use crate::points::PointCompletion;

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Every four of the five lines span the hyperplane.
fn no_four_in_hyperplane(s: &NMSet) -> bool {
    let ls = s.lines();
    (0..ls.len()).all(|skip| span_dim(ls.iter().enumerate().filter(|&(i, _)| i != skip).flat_map(|(_, l)| l.points())) == 7)
}

/// Points on the lines, points in two of the spans of line pairs and points in
/// exactly one of them.
fn forbidden_breakdown(s: &NMSet) -> [usize; 3] {
    let ls = s.lines();
    let mut on_line = 0;
    let mut in_two = 0;
    let mut in_one = 0;
    for p in 1u32..(1 << s.ambient_dim()) {
        if ls.iter().any(|l| l.contains(p)) {
            on_line += 1;
            continue;
        }
        let mut k = 0;
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                if span_dim(ls[i].points().into_iter().chain(ls[j].points()).chain([p])) == 4 {
                    k += 1;
                }
            }
        }
        match k {
            0 => {}
            1 => in_one += 1,
            _ => in_two += 1,
        }
    }
    [on_line, in_two, in_one]
}

/// Eight-point systems from the stated conditions: a cap whose secants miss the
/// codelines and whose code has even weights.
fn literal_systems(lines: &NMSet, candidates: &[u32]) -> Vec<Vec<u32>> {
    fn go(lines: &NMSet, cands: &[u32], start: usize, chosen: &mut Vec<Point>, out: &mut Vec<Vec<u32>>) {
        if chosen.len() == 8 {
            if even_weight_condition(chosen, 7) {
                out.push(sorted(chosen.iter().map(|p| p.vector()).collect()));
            }
            return;
        }
        for i in start..cands.len() {
            chosen.push(Point::new(cands[i]).expect("nonzero"));
            let ok = is_cap(chosen).unwrap_or(false)
                && secants(chosen).iter().all(|sec| lines.lines().iter().all(|l| !sec.meets(l)));
            if ok {
                go(lines, cands, i + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    go(lines, candidates, 0, &mut Vec::new(), &mut out);
    out.sort();
    out
}

struct Systems {
    candidates: usize,
    systems: Vec<Vec<u32>>,
    classes: usize,
    literal_agrees: bool,
    completion: CompletionOutcome,
}

fn search(lines: &NMSet) -> Systems {
    let pc = PointCompletion::new(lines, 8, Some(0));
    let found = pc.run();
    let mut systems: Vec<Vec<u32>> = found.solutions.iter().map(|m| sorted(m.clone())).collect();
    systems.sort();
    let literal_agrees = literal_systems(lines, pc.candidates()) == systems;
    let classes = classify(systems.iter().map(|m| with_points(lines, m))).len();
    let completion = complete_all(lines, &systems);
    Systems { candidates: pc.candidates().len(), systems, classes, literal_agrees, completion }
}

pub fn run(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::F, cite::F_EMPTY);
    let lines = fixtures::HYPERPLANE_LINES.parse_in(7)?;
    cert.check("five codelines have strength 3", stabcert_core::nmset::check_strength3(&lines), true, cite::UNIQUE_FIVE, Severity::Required);
    cert.check("span of the five codelines", lines.span_dim(), 7, cite::UNIQUE_FIVE, Severity::Required);
    cert.check("no four codelines in a hyperplane of H", no_four_in_hyperplane(&lines), true, cite::NO_FOUR, Severity::Required);
    cert.check("extension points", extension_points(&lines).len(), 37, cite::THIRTY_SEVEN, Severity::Required);
    cert.check("points on lines, in two and in one line-pair span", forbidden_breakdown(&lines), [15, 15, 60], cite::NINETY, Severity::Required);

    // The five codelines up to projectivity.
    let five = exhaustive_nm_search(7, 5, 0, &SearchConstraints::new());
    let spanning: Vec<NMSet> = five.classes.iter().map(|c| c.canonical.clone()).filter(|s| s.span_dim() == 7).collect();
    cert.check("classes of five strength-3 lines spanning a hyperplane", spanning.len(), 1, cite::UNIQUE_FIVE, Severity::Warning);
    let idx = record_equivalence(&mut cert, fixtures::HYPERPLANE_LINES.name, &lines, &spanning);
    cert.check("printed lines match a class", idx.is_some(), true, cite::UNIQUE_FIVE, Severity::Required);

    let main = search(&lines);
    cert.info("systems M", main.systems.len());
    cert.info("classes of systems M", main.classes);
    cert.check("systems from the stated conditions", main.literal_agrees, true, cite::F_EMPTY, Severity::Required);
    record_completion(&mut cert, &main.completion, main.systems.len());

    // Classes the uniqueness statement does not account for go through the same search.
    for (k, other) in spanning.iter().enumerate() {
        if Some(k) == idx || isomorphism(other, &lines).is_some() {
            continue;
        }
        let frame = standard_frame(other);
        let extra = search(&frame);
        let label = format!("further class {} ({} extension points)", k, extra.candidates);
        cert.info(&format!("{label}: systems M"), extra.systems.len());
        cert.info(&format!("{label}: classes of systems M"), extra.classes);
        cert.check(&format!("{label}: systems from the stated conditions"), extra.literal_agrees, true, cite::F_EMPTY, Severity::Required);
        cert.check(&format!("{label}: completions"), extra.completion.found, 0u64, cite::F_EMPTY, Severity::Required);
        cert.info(&format!("{label}: lines"), frame.to_text());
        record_completion(&mut cert, &extra.completion, extra.systems.len());
    }

    cert.sample = Some(sample_completions(&lines, &main.systems, opts)?);
    Ok(cert)
}
