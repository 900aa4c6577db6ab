//! Isomorph-free level-wise generation of `(n,m)`-sets.
//!
//! Level `k` holds one canonical representative per class of sets with `k` objects.
//! Each representative is extended by every admissible object and the results are
//! reduced by canonical form. Since every strength-3 set arises from one of its
//! subsets with one object fewer, and strength 3 as well as the optional predicate
//! are inherited by subsets, no class is lost.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::canon::{automorphism_order, canonical_form};
use super::{check_strength3, extension_lines, extension_points, NMSet};
use crate::error::{Error, Result};
use crate::geometry::{gl_order, PointSet};

pub type Predicate = Arc<dyn Fn(&NMSet) -> bool + Send + Sync>;

/// Restrictions on the generated sets. Both predicates must be invariant under
/// projectivities; `hereditary` must also hold for every subset of an accepted set.
#[derive(Clone, Default)]
pub struct SearchConstraints {
    pub hereditary: Option<Predicate>,
    pub accept: Option<Predicate>,
    pub base: Option<NMSet>,
}

impl SearchConstraints {
    pub fn new() -> SearchConstraints {
        SearchConstraints::default()
    }

    pub fn hereditary(mut self, p: impl Fn(&NMSet) -> bool + Send + Sync + 'static) -> Self {
        self.hereditary = Some(Arc::new(p));
        self
    }

    pub fn accept(mut self, p: impl Fn(&NMSet) -> bool + Send + Sync + 'static) -> Self {
        self.accept = Some(Arc::new(p));
        self
    }

    /// Only sets containing an image of `base` are generated.
    pub fn containing(mut self, base: NMSet) -> Self {
        self.base = Some(base);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivityClass {
    pub canonical: NMSet,
    pub aut_order: u128,
    pub class_size: u128,
    /// Number of classified inputs falling into this class.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub lines: usize,
    pub points: usize,
    pub candidates: u64,
    pub classes: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub classes: Vec<ProjectivityClass>,
    pub levels: Vec<LevelStats>,
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        self.levels.iter().map(|l| l.classes as u64).sum()
    }

    pub fn candidates(&self) -> u64 {
        self.levels.iter().map(|l| l.candidates).sum()
    }
}

fn make_class(canonical: NMSet, multiplicity: usize) -> ProjectivityClass {
    let aut_order = automorphism_order(&canonical);
    let class_size = gl_order(canonical.ambient_dim()) / aut_order;
    ProjectivityClass { canonical, aut_order, class_size, multiplicity }
}

/// Partition into projectivity classes, ordered by canonical code.
pub fn classify(sets: impl IntoIterator<Item = NMSet>) -> Vec<ProjectivityClass> {
    let mut groups: BTreeMap<Vec<u32>, (NMSet, usize)> = BTreeMap::new();
    for s in sets {
        let c = canonical_form(&s);
        let set = c.set();
        groups.entry(c.code).or_insert((set, 0)).1 += 1;
    }
    groups.into_values().map(|(s, k)| make_class(s, k)).collect()
}

/// Surviving children of one representative, keyed by canonical code, and the
/// number of candidates tried.
type Children = (Vec<(Vec<u32>, NMSet)>, u64);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Line,
    Point,
}

fn extend_level(reps: &[NMSet], step: Step, hereditary: Option<&Predicate>) -> (Vec<NMSet>, u64) {
    let per_rep: Vec<Children> = reps
        .par_iter()
        .map(|rep| {
            let candidates: Vec<NMSet> = match step {
                Step::Line => extension_lines(rep).into_iter().map(|l| rep.with_line(l)).collect(),
                Step::Point => extension_points(rep).into_iter().map(|p| rep.with_point(p.vector())).collect(),
            };
            let tested = candidates.len() as u64;
            let mut seen: BTreeMap<Vec<u32>, NMSet> = BTreeMap::new();
            for s in candidates {
                if hereditary.is_some_and(|h| !h(&s)) {
                    continue;
                }
                let c = canonical_form(&s);
                seen.entry(c.code.clone()).or_insert_with(|| c.set());
            }
            (seen.into_iter().collect(), tested)
        })
        .collect();
    let mut merged: BTreeMap<Vec<u32>, NMSet> = BTreeMap::new();
    let mut tested = 0;
    for (found, t) in per_rep {
        tested += t;
        for (code, s) in found {
            merged.entry(code).or_insert(s);
        }
    }
    (merged.into_values().collect(), tested)
}

/// All `(n,m)`-sets of the ambient space up to projectivity, lines added before points.
pub fn exhaustive_nm_search(ambient_dim: usize, n: usize, m: usize, constraints: &SearchConstraints) -> SearchOutcome {
    let start = constraints.base.clone().unwrap_or_else(|| NMSet::empty(ambient_dim));
    assert_eq!(start.ambient_dim(), ambient_dim, "base lives in the ambient space");
    let mut levels = Vec::new();
    let mut reps = if check_strength3(&start)
        && start.n_lines() <= n
        && start.n_points() <= m
        && constraints.hereditary.as_ref().is_none_or(|h| h(&start))
    {
        vec![canonical_form(&start).set()]
    } else {
        Vec::new()
    };
    levels.push(LevelStats { lines: start.n_lines(), points: start.n_points(), candidates: 1, classes: reps.len() });
    let steps = std::iter::repeat_n(Step::Line, n.saturating_sub(start.n_lines()))
        .chain(std::iter::repeat_n(Step::Point, m.saturating_sub(start.n_points())));
    for step in steps {
        if reps.is_empty() {
            break;
        }
        let (next, tested) = extend_level(&reps, step, constraints.hereditary.as_ref());
        reps = next;
        let (lines, points) = reps.first().map_or((0, 0), |r| (r.n_lines(), r.n_points()));
        log::debug!("level ({lines},{points}): {} classes from {tested} candidates", reps.len());
        levels.push(LevelStats { lines, points, candidates: tested, classes: reps.len() });
    }
    let final_sets: Vec<NMSet> = reps
        .into_iter()
        .filter(|s| s.n_lines() == n && s.n_points() == m)
        .filter(|s| constraints.accept.as_ref().is_none_or(|a| a(s)))
        .collect();
    let classes = final_sets.into_par_iter().map(|s| make_class(s, 1)).collect();
    SearchOutcome { classes, levels }
}

/// Largest `m` such that some `(n,m)`-set exists in the ambient space.
pub fn max_points_given_lines(ambient_dim: usize, n: usize) -> Result<usize> {
    let line_sets = exhaustive_nm_search(ambient_dim, n, 0, &SearchConstraints::new());
    if line_sets.classes.is_empty() {
        return Err(Error::NoLineSystem { lines: n, proj_dim: ambient_dim - 1 });
    }
    Ok(line_sets.classes.par_iter().map(|c| max_cap_extension(&c.canonical)).max().unwrap_or(0))
}

fn max_cap_extension(s: &NMSet) -> usize {
    fn go(s: &NMSet, candidates: &[u32]) -> usize {
        let f: PointSet = s.forbidden_points();
        let open: Vec<u32> = candidates.iter().copied().filter(|&p| !f.contains(p)).collect();
        let mut best = 0;
        for (i, &p) in open.iter().enumerate() {
            best = best.max(1 + go(&s.with_point(p), &open[i + 1..]));
        }
        best
    }
    let all: Vec<u32> = extension_points(s).into_iter().map(|p| p.vector()).collect();
    go(s, &all)
}
