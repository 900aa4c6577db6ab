//! Stages W4a and W4b: the two prefixes of six codelines in a hyperplane. The
//! seven-point systems completing them are searched directly and then completed to
//! thirteen codelines.

use rayon::prelude::*;
use stabcert_core::geometry::Line;
use stabcert_core::nmset::{check_strength3, classify, extension_lines, NMSet};
use stabcert_core::quantum::hyperplane_parity;

use super::secundum::{complete_all, record_completion};
use super::{cite, embed, inside, with_points, RunOptions, StageId};
use crate::certificate::{Certificate, SampleRecord, Severity};
use crate::completion::{hyperplane_problem, CompletionOutcome};
use crate::error::Result;
use crate::fixtures;
use crate::points::{PointCompletion, PointSearch};
use crate::sampling::select;

/// The secundum `<e1..e6>` of the hyperplane `<e1..e7>`.
const SECUNDUM: u32 = 0x3f;

/// Hyperplane parity for `n` codelines in the hyperplane and the given points.
fn quantum(s: &NMSet) -> bool {
    hyperplane_parity(&s.points(), s.ambient_dim(), s.n_lines())
}

fn first_lines(s: &NMSet, k: usize) -> NMSet {
    NMSet::from_lines(s.ambient_dim(), s.lines()[..k].to_vec())
}

/// Classes of `base + L` over lines `L` outside the secundum completing `base`.
fn normalization(cert: &mut Certificate, base: &NMSet, citation: &str) -> usize {
    let lines: Vec<_> = extension_lines(base).into_iter().filter(|l| !inside(SECUNDUM)(l)).collect();
    cert.info("extension lines outside the secundum", lines.len());
    let classes = classify(lines.into_iter().map(|l| base.with_line(l)));
    cert.check("classes of the prefix with one line outside the secundum", classes.len(), 1, citation, Severity::Required);
    classes.len()
}

/// Seven-point completions with vanishing sum; each solution is confirmed with the
/// hyperplane parity test.
fn complete(base: &NMSet) -> (PointCompletion, PointSearch, u64) {
    let pc = PointCompletion::new(base, 7, Some(0));
    let out = pc.run();
    let confirmed = out.solutions.iter().filter(|s| quantum(&with_points(base, s))).count() as u64;
    (pc, out, confirmed)
}

fn oracle(pc: &PointCompletion, subtrees: &[usize]) -> (u64, u64, u64) {
    let mut nodes = 0;
    let mut found = 0;
    let mut expected = 0;
    for &i in subtrees {
        let o = pc.oracle_subtree(i, &quantum);
        nodes += o.nodes;
        found += o.solutions.len() as u64;
        expected += pc.run_subtree(i).solutions.len() as u64;
    }
    (nodes, found, expected)
}

/// The oracle on a seeded selection of point subtrees of the weight-3 prefix.
pub(crate) fn resample_weight3(rate: f64, seed: u64) -> Result<SampleRecord> {
    let pc = PointCompletion::new(&fixtures::WEIGHT3_PREFIX.parse()?, 7, Some(0));
    let picked = select(pc.subtree_count(), rate, seed);
    let (nodes, found, expected_found) = oracle(&pc, &picked);
    Ok(SampleRecord {
        rate,
        seed,
        subtrees_total: pc.subtree_count() as u64,
        subtrees: picked.iter().map(|&i| i as u64).collect(),
        nodes,
        found,
        expected_found,
        reference: Vec::new(),
    })
}

/// Choices of the remaining line for the weight-2 prefix.
fn remaining_lines(prefix: &NMSet) -> Vec<Line> {
    extension_lines(prefix).into_iter().filter(|l| !inside(SECUNDUM)(l)).collect()
}

/// The oracle on whole subtrees, one per sampled choice of the remaining line.
pub(crate) fn resample_weight2(rate: f64, seed: u64) -> Result<SampleRecord> {
    let prefix = fixtures::WEIGHT2_PREFIX.parse()?;
    let last = remaining_lines(&prefix);
    let picked = select(last.len(), rate, seed);
    let mut rec = SampleRecord {
        rate,
        seed,
        subtrees_total: last.len() as u64,
        subtrees: picked.iter().map(|&i| i as u64).collect(),
        nodes: 0,
        found: 0,
        expected_found: 0,
        reference: Vec::new(),
    };
    for &i in &picked {
        let pc = PointCompletion::new(&prefix.with_line(last[i]), 7, Some(0));
        let all: Vec<usize> = (0..pc.subtree_count()).collect();
        let (nodes, found, expected) = oracle(&pc, &all);
        rec.nodes += nodes;
        rec.found += found;
        rec.expected_found += expected;
    }
    Ok(rec)
}

/// Seven-point systems completing a six-line prefix, and their completion to
/// thirteen codelines of `PG(7,2)`.
#[derive(Default)]
pub(crate) struct SevenPoint {
    pub systems: u64,
    pub nodes: u64,
    /// Systems passing the hyperplane parity test.
    pub confirmed: u64,
    pub examples: Vec<String>,
    pub completion: CompletionOutcome,
    /// Completions found by one-shot elimination over all orthogonality equations.
    pub eliminated: u64,
}

impl SevenPoint {
    pub fn search(base: &NMSet) -> SevenPoint {
        let (_, out, confirmed) = complete(base);
        let completion = complete_all(base, &out.solutions);
        let eliminated = out.solutions.par_iter().map(|m| hyperplane_problem(base.lines(), m).oracle_count().1).sum();
        SevenPoint {
            systems: out.solutions.len() as u64,
            nodes: out.nodes,
            confirmed,
            examples: out.solutions.iter().take(2).map(|m| with_points(base, m).to_text()).collect(),
            completion,
            eliminated,
        }
    }

    pub fn absorb(&mut self, o: SevenPoint) {
        self.systems += o.systems;
        self.nodes += o.nodes;
        self.confirmed += o.confirmed;
        self.examples.extend(o.examples);
        self.examples.truncate(2);
        self.completion.absorb(o.completion);
        self.eliminated += o.eliminated;
    }

    /// The literal seven-point count is checked against the published claim as a
    /// warning; the completion to a code decides the stage.
    pub fn record(&self, cert: &mut Certificate, literal: &str, empty: &str) {
        cert.check("(6,7)-sets with the quantum condition", self.systems, 0u64, literal, Severity::Warning);
        cert.check("(6,7)-sets confirmed by hyperplane parity", self.confirmed, self.systems, literal, Severity::Required);
        if !self.examples.is_empty() {
            cert.info("example (6,7)-sets", &self.examples);
        }
        cert.search_space.nodes += self.nodes;
        record_completion(cert, &self.completion, self.systems as usize);
        cert.check("completions found by one-shot elimination", self.eliminated, self.completion.found, empty, Severity::Required);
    }
}

pub fn run_weight3(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::W4a, cite::W4A);
    let prefix = fixtures::WEIGHT3_PREFIX.parse()?;
    let hyperoval = embed(&fixtures::HYPEROVAL.parse()?, 7);
    cert.check(
        "prefix starts with five hyperoval lines",
        first_lines(&prefix, 5).same_objects(&first_lines(&hyperoval, 5)),
        true,
        cite::W4A_PREFIX,
        Severity::Required,
    );
    cert.check("sixth line outside the secundum", !inside(SECUNDUM)(&prefix.lines()[5]), true, cite::W4A_PREFIX, Severity::Required);
    cert.check("prefix has strength 3", check_strength3(&prefix), true, cite::W4A_PREFIX, Severity::Required);
    normalization(&mut cert, &first_lines(&prefix, 5), cite::W4A_PREFIX);

    cert.info("candidate points", PointCompletion::new(&prefix, 7, Some(0)).candidates().len());
    SevenPoint::search(&prefix).record(&mut cert, cite::W4A, cite::W4A);

    cert.sample = Some(resample_weight3(opts.sample_rate, opts.seed)?);
    Ok(cert)
}

pub fn run_weight2(opts: &RunOptions) -> Result<Certificate> {
    let mut cert = super::new_certificate(StageId::W4b, cite::W4B);
    let prefix = fixtures::WEIGHT2_PREFIX.parse()?;
    let hyperoval = embed(&fixtures::HYPEROVAL.parse()?, 7);
    cert.check(
        "prefix starts with four hyperoval lines",
        first_lines(&prefix, 4).same_objects(&first_lines(&hyperoval, 4)),
        true,
        cite::W4B_PREFIX,
        Severity::Required,
    );
    cert.check("fifth line outside the secundum", !inside(SECUNDUM)(&prefix.lines()[4]), true, cite::W4B_PREFIX, Severity::Required);
    cert.check("prefix has strength 3", check_strength3(&prefix), true, cite::W4B_PREFIX, Severity::Required);
    normalization(&mut cert, &first_lines(&prefix, 4), cite::W4B_PREFIX);

    let last = remaining_lines(&prefix);
    cert.info("choices for the remaining line", last.len());
    let mut all = SevenPoint::default();
    for &l in &last {
        all.absorb(SevenPoint::search(&prefix.with_line(l)));
    }
    all.record(&mut cert, cite::W4B, cite::W4B);

    cert.sample = Some(resample_weight2(opts.sample_rate, opts.seed)?);
    Ok(cert)
}
