//! Completing a strength-3 configuration by a fixed number of points.
//!
//! A new point `P` keeps strength 3 iff it is an extension point of the base, and
//! two new points `P, Q` are compatible iff `Q` avoids the span of `P` with every
//! base object and with every other new point. The search picks candidates in
//! increasing order and accumulates these exclusions in a point set.

use rayon::prelude::*;
use stabcert_core::geometry::PointSet;
use stabcert_core::nmset::{check_strength3, extension_points, NMSet};

#[derive(Clone, Debug)]
pub struct PointCompletion {
    base: NMSet,
    candidates: Vec<u32>,
    index: Vec<u16>,
    base_vectors: Vec<u32>,
    k: usize,
    target_sum: Option<u32>,
}

/// Solutions of one search together with the number of visited nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointSearch {
    pub solutions: Vec<Vec<u32>>,
    pub nodes: u64,
}

impl PointSearch {
    fn merge(mut self, other: PointSearch) -> PointSearch {
        self.solutions.extend(other.solutions);
        self.nodes += other.nodes;
        self
    }
}

const NONE: u16 = u16::MAX;

impl PointCompletion {
    /// Sets of `k` points completing `base`, optionally with prescribed vector sum.
    pub fn new(base: &NMSet, k: usize, target_sum: Option<u32>) -> PointCompletion {
        assert!(k > 0, "at least one point to add");
        let candidates: Vec<u32> = extension_points(base).into_iter().map(|p| p.vector()).collect();
        let base_vectors = base
            .lines()
            .iter()
            .flat_map(|l| l.points())
            .chain(base.point_vectors().iter().copied())
            .collect();
        let mut pc = PointCompletion {
            base: base.clone(),
            candidates,
            index: Vec::new(),
            base_vectors,
            k,
            target_sum,
        };
        pc.reindex();
        pc
    }

    /// Restricts the candidate points.
    pub fn filter(mut self, keep: impl Fn(u32) -> bool) -> PointCompletion {
        self.candidates.retain(|&p| keep(p));
        self.reindex();
        self
    }

    fn reindex(&mut self) {
        self.index = vec![NONE; 1 << self.base.ambient_dim()];
        for (i, &p) in self.candidates.iter().enumerate() {
            self.index[p as usize] = i as u16;
        }
    }

    pub fn base(&self) -> &NMSet {
        &self.base
    }

    pub fn candidates(&self) -> &[u32] {
        &self.candidates
    }

    /// Subtrees are indexed by the smallest chosen candidate.
    pub fn subtree_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn run_subtree(&self, first: usize) -> PointSearch {
        let mut out = PointSearch::default();
        let p = self.candidates[first];
        let forbidden = self.exclude(PointSet::new(), p, &[]);
        let mut chosen = vec![p];
        self.dfs(first + 1, forbidden, &mut chosen, p, &mut out);
        crate::progress::add(out.nodes);
        out
    }

    pub fn run_subtrees(&self, subtrees: &[usize]) -> PointSearch {
        subtrees
            .par_iter()
            .map(|&i| self.run_subtree(i))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(PointSearch::default(), PointSearch::merge)
    }

    pub fn run(&self) -> PointSearch {
        let all: Vec<usize> = (0..self.subtree_count()).collect();
        self.run_subtrees(&all)
    }

    fn exclude(&self, mut f: PointSet, p: u32, chosen: &[u32]) -> PointSet {
        f.insert(p);
        for &x in &self.base_vectors {
            f.insert(p ^ x);
        }
        for &q in chosen {
            f.insert(p ^ q);
        }
        f
    }

    fn dfs(&self, start: usize, forbidden: PointSet, chosen: &mut Vec<u32>, sum: u32, out: &mut PointSearch) {
        out.nodes += 1;
        let remaining = self.k - chosen.len();
        if remaining == 0 {
            if self.target_sum.is_none_or(|t| t == sum) {
                out.solutions.push(chosen.clone());
            }
            return;
        }
        if let (1, Some(t)) = (remaining, self.target_sum) {
            let p = t ^ sum;
            let i = self.index[p as usize];
            if p != 0 && i != NONE && i as usize >= start && !forbidden.contains(p) {
                chosen.push(p);
                out.nodes += 1;
                out.solutions.push(chosen.clone());
                chosen.pop();
            }
            return;
        }
        for i in start..self.candidates.len() {
            if self.candidates.len() - i < remaining {
                break;
            }
            let p = self.candidates[i];
            if forbidden.contains(p) {
                continue;
            }
            let next = self.exclude(forbidden, p, chosen);
            chosen.push(p);
            self.dfs(i + 1, next, chosen, sum ^ p, out);
            chosen.pop();
        }
    }

    /// Independent route for one subtree: every partial set is tested with the direct
    /// strength-3 check and complete sets with `accept`.
    pub fn oracle_subtree(&self, first: usize, accept: &(dyn Fn(&NMSet) -> bool + Sync)) -> PointSearch {
        fn go(
            pc: &PointCompletion,
            set: &NMSet,
            chosen: &mut Vec<u32>,
            start: usize,
            accept: &(dyn Fn(&NMSet) -> bool + Sync),
            out: &mut PointSearch,
        ) {
            out.nodes += 1;
            if chosen.len() == pc.k {
                if accept(set) {
                    out.solutions.push(chosen.clone());
                }
                return;
            }
            for i in start..pc.candidates.len() {
                let p = pc.candidates[i];
                let next = set.with_point(p);
                if check_strength3(&next) {
                    chosen.push(p);
                    go(pc, &next, chosen, i + 1, accept, out);
                    chosen.pop();
                }
            }
        }
        let mut out = PointSearch::default();
        let p = self.candidates[first];
        let set = self.base.with_point(p);
        if check_strength3(&set) {
            go(self, &set, &mut vec![p], first + 1, accept, &mut out);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabcert_core::geometry::Line;

    fn e(i: u32) -> u32 {
        1 << (i - 1)
    }

    fn two_lines() -> NMSet {
        NMSet::from_lines(5, vec![Line::new(e(1), e(2)).unwrap(), Line::new(e(3), e(4)).unwrap()])
    }

    #[test]
    fn four_points_complete_two_lines() {
        let pc = PointCompletion::new(&two_lines(), 4, None);
        let out = pc.run();
        assert!(!out.solutions.is_empty());
        assert!(PointCompletion::new(&two_lines(), 5, None).run().solutions.is_empty());
        for s in &out.solutions {
            let mut set = two_lines();
            for &p in s {
                set = set.with_point(p);
            }
            assert!(check_strength3(&set));
        }
    }

    #[test]
    fn agrees_with_oracle() {
        for target in [None, Some(0)] {
            let pc = PointCompletion::new(&two_lines(), 3, target);
            let accept = |s: &NMSet| target.is_none_or(|t| s.point_vectors().iter().fold(0, |a, p| a ^ p) == t);
            for i in 0..pc.subtree_count() {
                let mut fast = pc.run_subtree(i).solutions;
                let mut slow = pc.oracle_subtree(i, &accept).solutions;
                fast.sort();
                slow.sort();
                assert_eq!(fast, slow, "subtree {i}, target {target:?}");
            }
        }
    }
}
