//! Reduction-free search for lines completing a strength-3 configuration. Used as
//! the independent route next to the isomorph-free generation.

use rayon::prelude::*;
use stabcert_core::geometry::{Line, PointSet};
use stabcert_core::nmset::{extension_lines, NMSet};

#[derive(Clone, Debug)]
pub struct LineCompletion {
    base: NMSet,
    candidates: Vec<Line>,
    generators: Vec<Vec<u32>>,
    k: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineSearch {
    pub solutions: Vec<Vec<Line>>,
    pub nodes: u64,
}

impl LineCompletion {
    pub fn new(base: &NMSet, k: usize) -> LineCompletion {
        assert!(k > 0, "at least one line to add");
        let generators = base
            .lines()
            .iter()
            .map(|l| {
                let (a, b) = l.generators();
                vec![a, b]
            })
            .chain(base.point_vectors().iter().map(|&p| vec![p]))
            .collect();
        LineCompletion { base: base.clone(), candidates: extension_lines(base), generators, k }
    }

    pub fn candidates(&self) -> &[Line] {
        &self.candidates
    }

    pub fn subtree_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn base(&self) -> &NMSet {
        &self.base
    }

    pub fn run_subtree(&self, first: usize) -> LineSearch {
        let mut out = LineSearch::default();
        let l = self.candidates[first];
        let f = self.exclude(PointSet::new(), &l, &[]);
        self.dfs(first + 1, f, &mut vec![l], &mut out);
        crate::progress::add(out.nodes);
        out
    }

    pub fn run_subtrees(&self, subtrees: &[usize]) -> LineSearch {
        subtrees.par_iter().map(|&i| self.run_subtree(i)).collect::<Vec<_>>().into_iter().fold(
            LineSearch::default(),
            |mut acc, s| {
                acc.nodes += s.nodes;
                acc.solutions.extend(s.solutions);
                acc
            },
        )
    }

    pub fn run(&self) -> LineSearch {
        let all: Vec<usize> = (0..self.subtree_count()).collect();
        self.run_subtrees(&all)
    }

    fn exclude(&self, mut f: PointSet, l: &Line, chosen: &[Line]) -> PointSet {
        let (a, b) = l.generators();
        f.insert_span(&[a, b]);
        for g in &self.generators {
            let mut basis = vec![a, b];
            basis.extend_from_slice(g);
            f.insert_span(&basis);
        }
        for m in chosen {
            let (c, d) = m.generators();
            f.insert_span(&[a, b, c, d]);
        }
        f
    }

    fn dfs(&self, start: usize, f: PointSet, chosen: &mut Vec<Line>, out: &mut LineSearch) {
        out.nodes += 1;
        if chosen.len() == self.k {
            out.solutions.push(chosen.clone());
            return;
        }
        for i in start..self.candidates.len() {
            let l = self.candidates[i];
            if f.contains_line(&l) {
                continue;
            }
            let next = self.exclude(f, &l, chosen);
            chosen.push(l);
            self.dfs(i + 1, next, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabcert_core::nmset::check_strength3;

    #[test]
    fn completions_have_strength3() {
        let base = NMSet::from_lines(6, vec![Line::new(1, 2).unwrap(), Line::new(4, 8).unwrap()]);
        let out = LineCompletion::new(&base, 2).run();
        assert!(!out.solutions.is_empty());
        for s in &out.solutions {
            let mut set = base.clone();
            for &l in s {
                set = set.with_line(l);
            }
            assert!(check_strength3(&set));
        }
        // Six lines at most in PG(5,2), so four more cannot be added to two.
        assert!(LineCompletion::new(&base, 5).run().solutions.is_empty());
    }
}
