//! The proof stages. Each stage reruns one group of computer searches and returns a
//! certificate with the observed counts next to the published ones.

mod final_search;
mod purity;
mod secundum;
mod weights;
mod weights_families;
mod weights_prefix;

pub use weights::euclidean_self_dual;
pub use weights_families::any_four_span;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use stabcert_core::gf2::SpanBuilder;
use stabcert_core::nmset::{canonical_form, check_strength3, isomorphism, NMSet, Transform};

use crate::certificate::{fingerprint, Certificate, Equivalence, SampleRecord};
use crate::error::{PipelineError, Result};
use crate::fixtures::{self, Fixture};
use crate::sampling::DEFAULT_SEED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageId {
    P,
    W5,
    W4a,
    W4b,
    W4c,
    S,
    F,
}

impl StageId {
    pub const ALL: [StageId; 7] = [StageId::P, StageId::W5, StageId::W4a, StageId::W4b, StageId::W4c, StageId::S, StageId::F];

    pub fn as_str(self) -> &'static str {
        match self {
            StageId::P => "P",
            StageId::W5 => "W5",
            StageId::W4a => "W4a",
            StageId::W4b => "W4b",
            StageId::W4c => "W4c",
            StageId::S => "S",
            StageId::F => "F",
        }
    }

    /// Stages whose results this stage relies on.
    pub fn dependencies(self) -> &'static [StageId] {
        use StageId::*;
        match self {
            P => &[],
            W5 | W4a | W4b | W4c => &[P],
            S => &[P, W5, W4a, W4b, W4c],
            F => &[P, W5, W4a, W4b, W4c, S],
        }
    }

    /// Expected headline count. Every stage counts configurations that would lead to
    /// a code, or a forbidden subconfiguration, so the expectation is always zero.
    pub fn expected_count(self) -> u64 {
        0
    }

    pub fn description(self) -> &'static str {
        match self {
            StageId::P => "strength-3 line sets in PG(4,2), PG(5,2) and PG(6,2) and purity of codeline triples",
            StageId::W5 => "the three (7,0)-sets of PG(6,2), their extension points and the (7,6)-set parity",
            StageId::W4a => "(6,7)-sets with the quantum condition on the weight-3 prefix and their completion to thirteen codelines",
            StageId::W4b => "(6,7)-sets with the quantum condition on the weight-2 prefix and their completion to thirteen codelines",
            StageId::W4c => "six-line families with any four lines spanning PG(6,2), their (6,7)-sets and completion to thirteen codelines",
            StageId::S => "five codelines in a secundum: point systems M and completion of the generator matrix",
            StageId::F => "five codelines in a hyperplane: point systems M and completion of the generator matrix",
        }
    }
}

impl fmt::Display for StageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StageId {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<StageId> {
        StageId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| PipelineError::UnknownStage(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    /// Fraction of subtrees re-searched by the independent route.
    pub sample_rate: f64,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { sample_rate: 0.01, seed: DEFAULT_SEED }
    }
}

pub fn run_stage(id: StageId, opts: &RunOptions) -> Result<Certificate> {
    let start = Instant::now();
    log::info!("stage {id}: {}", id.description());
    let mut cert = match id {
        StageId::P => purity::run(opts)?,
        StageId::W5 => weights::run(opts)?,
        StageId::W4a => weights_prefix::run_weight3(opts)?,
        StageId::W4b => weights_prefix::run_weight2(opts)?,
        StageId::W4c => weights_families::run(opts)?,
        StageId::S => secundum::run(opts)?,
        StageId::F => final_search::run(opts)?,
    };
    cert.input_fingerprint = input_fingerprint(id, opts)?;
    cert.finalize();
    cert.wall_time_ms = start.elapsed().as_millis() as u64;
    log::info!("stage {id}: match = {} in {} ms", cert.matched, cert.wall_time_ms);
    Ok(cert)
}

pub(crate) fn new_certificate(id: StageId, citation: &str) -> Certificate {
    Certificate::new(id.as_str(), id.description(), id.expected_count(), citation)
}

/// Fixtures a stage reads.
pub fn inputs(id: StageId) -> &'static [Fixture] {
    use fixtures::*;
    match id {
        StageId::P => &[HYPEROVAL, TWO_FOUR_SET],
        StageId::W5 => &[SEVENZERO_SELFDUAL, SEVENZERO_EXTENSION_POINTS],
        StageId::W4a => &[WEIGHT3_PREFIX, HYPEROVAL],
        StageId::W4b => &[WEIGHT2_PREFIX, HYPEROVAL],
        StageId::W4c => &SIX_LINE_FAMILIES,
        StageId::S => &[SECUNDUM_LINES, HYPEROVAL],
        StageId::F => &[HYPERPLANE_LINES],
    }
}

/// Hash of the normalized stage inputs and the sampling parameters.
pub fn input_fingerprint(id: StageId, opts: &RunOptions) -> Result<String> {
    let mut parts = vec![id.as_str().to_string()];
    for f in inputs(id) {
        parts.push(f.parse()?.to_text());
    }
    parts.push(format!("rate={} seed={}", opts.sample_rate, opts.seed));
    Ok(fingerprint(&parts))
}

/// Repeats the independent re-search recorded in `rec`. The subtree selection is
/// derived from the rate and seed; reference configurations are taken from `rec`.
pub fn resample(id: StageId, rec: &SampleRecord) -> Result<SampleRecord> {
    let (rate, seed) = (rec.rate, rec.seed);
    match id {
        StageId::P => Ok(purity::resample(rate, seed)),
        StageId::W5 => weights::resample(rate, seed, rec.reference.clone()),
        StageId::W4a => weights_prefix::resample_weight3(rate, seed),
        StageId::W4b => weights_prefix::resample_weight2(rate, seed),
        StageId::W4c => weights_families::resample(rate, seed, rec.reference.clone()),
        StageId::S | StageId::F => secundum::resample_systems(rate, seed, rec.subtrees_total, rec.reference.clone()),
    }
}

/// Canonical codes of reference configurations, each required to pass `valid`.
pub(crate) fn known_classes(reference: &[String], valid: impl Fn(&NMSet) -> bool) -> Result<BTreeSet<Vec<u32>>> {
    let mut known = BTreeSet::new();
    for t in reference {
        let s = NMSet::parse_text(t)?;
        if !valid(&s) || !check_strength3(&s) {
            return Err(PipelineError::InvalidReference(t.clone()));
        }
        known.insert(canonical_form(&s).code);
    }
    Ok(known)
}

/// Citations of the published statements each stage reproduces.
pub(crate) mod cite {
    pub const NO_SEVEN_ZERO: &str = "\"There is no (7,0)-set in PG(5,2) and no (8,0)-set in PG(6,2).\"";
    pub const TWO_FOUR: &str = "\"A (2,m)-set of strength 3 in PG(4,2) has m <= 4. All these sets are embedded in a uniquely determined (2,4)-set.\"";
    pub const HO_UNIQUE: &str = "\"An (n,0)-set in PG(5,2) has n <= 6. For each n it is uniquely determined.\"";
    pub const HO_POINTS: &str = "\"If n=6, then m=0. If n=5, then m <= 2. If n=4, then m <= 4.\"";
    pub const TRANSVERSAL: &str = "\"There are exactly 27 points, the transversal points\"";
    pub const HO_SIX: &str = "\"There remain 6 points each forming a (4,1)-set together with L_1,...,L_4. These are exactly the six points on the remaining lines\"";
    pub const HO_AUT: &str = "\"The automorphism group of the binary hyperoval has order 3 x 6!\"";
    pub const PURE: &str = "\"As C is pure sets of strength 3 play an important role.\"";
    pub const THREE_CLASSES: &str = "\"There are precisely three non-equivalent (7,0)-sets in PG(6,2).\"";
    pub const EUCLIDEAN: &str = "\"Exactly one of them defines a self-dual code with respect to the Euclidean form (the dot product).\"";
    pub const EXT_COUNTS: &str = "\"The number c of points that complete them to a (7,1)-set is c=1, c=2 and c=8, respectively.\"";
    pub const SELF_DUAL_EIGHT: &str = "\"The case of 8 extension points occurs when the code generated by the (7,0)-set is self-dual.\"";
    pub const SEVEN_SEVEN: &str = "\"This (7,0)-set can be extended to a uniquely determined (7,7)-set and to a (7,6)-set which is uniquely determined up to projectivity.\"";
    pub const AUT_42: &str = "\"The (7,0)-set has an automorphism group G of order 42\"";
    pub const CONE: &str = "\"Consider the cone with vertex P_0 consisting of the lines from P_0 to the points L_i cap H. The third points on those lines make up E.\"";
    pub const EIGHT_POINTS: &str = "\"The eight extension points are P_0=(0:0:0:0:0:0:1) and the columns of\"";
    pub const PARITY_76: &str = "\"There is a uniquely determined (7,6)-set in PG(6,2), but it does not satisfy the quantum condition\"";
    pub const W4A: &str = "\"Those 6 lines must be completable to a (6,7)-system in PG(6,2) which satisfies the quantum condition ... A computer search shows that this problem has no solution.\"";
    pub const W4A_PREFIX: &str = "\"we have the lines L_1,...,L_5 corresponding to an oval in PG(2,4) and L_6=<e_1+e_4+e_5+e_6,e_7>\"";
    pub const W4B: &str = "\"It remains to find the one remaining line and the system of 7 points in PG(6,2) completing it to a (6,7)-system that satisfies the quantum condition. A computer search shows that there is no solution.\"";
    pub const W4B_PREFIX: &str = "\"... one of those lines can be chosen as L=<e_1+e_3+e_4+e_6,e_7>.\"";
    pub const FOUR_FAMILIES: &str = "\"there are exactly four families of 6 lines in PG(6,2) satisfying the following\"";
    pub const FAMILIES_EMPTY: &str = "\"cannot be completed by a set S of 7 points in H=PG(6,2) which together with the codelines form a (6,7)-set of strength 3 and such that the quantum condition is satisfied\"";
    pub const TWELVE: &str = "\"A computer search showed that up to equivalence there are 12 systems M satisfying the conditions above.\"";
    pub const S_EMPTY: &str = "\"The computer showed that this completion is impossible.\"";
    pub const S_PREFIX: &str = "\"The codelines in S can be chosen as L_1,...,L_5 ...\"";
    pub const UNIQUE_FIVE: &str = "\"As its dual, a [5,1.5,4]_4-code, is uniquely determined (corresponding to a set of 5 lines in the Fano plane), the same is true of the code itself.\"";
    pub const NO_FOUR: &str = "\"No four of those are on a hyperplane.\"";
    pub const THIRTY_SEVEN: &str = "\"This leaves space for 127-90=37 extension points.\"";
    pub const NINETY: &str = "\"There are 15 points on the lines, 10x3/2=15 in the intersection of the two spaces generated by two lines and 10x6 further points on spaces generated by two lines.\"";
    pub const F_EMPTY: &str = "\"The computer search showed that there are no solutions.\"";
}

/// The lines of `s` in a larger ambient space (same coordinates, extra ones zero).
pub(crate) fn embed(s: &NMSet, dim: usize) -> NMSet {
    NMSet::new(dim, s.lines().to_vec(), s.points()).expect("embedding into a larger space")
}

pub(crate) fn with_points(base: &NMSet, points: &[u32]) -> NMSet {
    points.iter().fold(base.clone(), |s, &p| s.with_point(p))
}

/// Image of `s` under a projectivity taking its first two lines to `<e1,e2>` and
/// `<e3,e4>`; the span of `s` becomes a coordinate subspace.
pub(crate) fn standard_frame(s: &NMSet) -> NMSet {
    let mut span = SpanBuilder::new();
    let mut cols = Vec::new();
    for l in &s.lines()[..2] {
        let (a, b) = l.generators();
        for v in [a, b] {
            span.insert(v);
            cols.push(v);
        }
    }
    for obj in s.lines().iter().flat_map(|l| l.points()).chain(s.point_vectors().iter().copied()) {
        if span.insert(obj) {
            cols.push(obj);
        }
    }
    for i in 0..s.ambient_dim() {
        if span.insert(1 << i) {
            cols.push(1 << i);
        }
    }
    let t = Transform::from_columns(&cols).expect("a basis");
    s.map(&t.inverse())
}

pub(crate) fn transform_columns(t: &Transform) -> Vec<String> {
    t.columns().iter().map(|c| format!("{c:#04x}")).collect()
}

pub fn parse_transform(cols: &[String]) -> Option<Transform> {
    let v: Option<Vec<u32>> = cols.iter().map(|c| u32::from_str_radix(c.trim_start_matches("0x"), 16).ok()).collect();
    Transform::from_columns(&v?).ok()
}

/// Records an explicit projectivity from a printed configuration onto the first
/// equivalent witness; returns the witness index.
pub(crate) fn record_equivalence(cert: &mut Certificate, printed: &str, set: &NMSet, witnesses: &[NMSet]) -> Option<usize> {
    let (idx, t) = witnesses.iter().enumerate().find_map(|(i, w)| isomorphism(set, w).map(|t| (i, t)))?;
    debug_assert!(set.map(&t).same_objects(&witnesses[idx]));
    cert.equivalences.push(Equivalence {
        printed: printed.to_string(),
        witness_index: idx,
        witness: witnesses[idx].to_text(),
        transform: transform_columns(&t),
    });
    Some(idx)
}

/// Lines of `s` contained in the coordinate subspace `mask`.
pub(crate) fn inside(mask: u32) -> impl Fn(&stabcert_core::geometry::Line) -> bool {
    move |l| l.points().iter().all(|&p| p & !mask == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabcert_core::geometry::Line;

    #[test]
    fn stage_ids_parse() {
        for id in StageId::ALL {
            assert_eq!(id.as_str().parse::<StageId>().unwrap(), id);
        }
        assert_eq!("w4A".parse::<StageId>().unwrap(), StageId::W4a);
        assert!("X".parse::<StageId>().is_err());
    }

    #[test]
    fn standard_frame_moves_first_lines() {
        let s = NMSet::from_lines(6, vec![Line::new(0b100001, 0b000110).unwrap(), Line::new(0b011000, 0b010010).unwrap()]);
        let t = standard_frame(&s);
        assert_eq!(t.lines()[0], Line::new(1, 2).unwrap());
        assert_eq!(t.lines()[1], Line::new(4, 8).unwrap());
    }
}
