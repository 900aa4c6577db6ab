//! Completing fixed codelines by lines with one known point.
//!
//! Each open line is `<a_i, b_i>` with `a_i` known and `b_i = base_i + sum x_{i,k} e_k`
//! over a set of free coordinates. The Plücker vector `a_i ^ b_i` is affine in the
//! unknowns, so self-orthogonality of the full system (Plücker sum zero) is a linear
//! system of 28 equations. It is solved in two phases: first the equations on
//! coordinate pairs inside the factor coordinates, which only involve the unknowns
//! at those coordinates. Both phases assign one line at a time and prune on solvability
//! of the equations still open; factor solutions must project every open line onto a
//! line of the factor space, and lifts must keep strength 3.

use stabcert_core::geometry::{Line, PointSet};
use stabcert_core::gf2::SpanBuilder;
use stabcert_core::nmset::{check_strength3, NMSet};
use stabcert_core::quantum::{plucker_sum, wedge, wedge_index};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenLine {
    pub known: u32,
    pub base: u32,
    /// Free coordinates as 0-based bit positions.
    pub free: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CompletionProblem {
    pub ambient_dim: usize,
    pub fixed: Vec<Line>,
    pub open: Vec<OpenLine>,
    /// Bit mask of the coordinates spanning the factor space; the complementary unit
    /// vectors span the kernel of the projection.
    pub factor_coords: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionOutcome {
    pub factor_solutions: u64,
    pub factor_valid: u64,
    pub lifted: u64,
    pub found: u64,
    /// The first few completions, each as the full list of lines.
    pub solutions: Vec<Vec<Line>>,
}

impl CompletionOutcome {
    pub fn absorb(&mut self, other: CompletionOutcome) {
        self.factor_solutions += other.factor_solutions;
        self.factor_valid += other.factor_valid;
        self.lifted += other.lifted;
        self.found += other.found;
        self.solutions.extend(other.solutions);
    }
}

/// Solution set `particular + span(kernel)` of an affine system over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSpace {
    pub particular: u64,
    pub kernel: Vec<u64>,
}

impl AffineSpace {
    pub fn size(&self) -> u64 {
        1u64 << self.kernel.len()
    }

    /// All members in Gray-code order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let mut x = self.particular;
        (0..self.size()).map(move |i| {
            if i > 0 {
                x ^= self.kernel[i.trailing_zeros() as usize];
            }
            x
        })
    }
}

/// Solves `parity(mask & x) == rhs` for every equation, with `x` supported on `vars`.
pub fn solve_affine(equations: &[(u64, bool)], vars: u64) -> Option<AffineSpace> {
    let mut rows: Vec<(u64, bool)> = Vec::new();
    let mut pivots: Vec<u32> = Vec::new();
    for &(mask, rhs) in equations {
        let (mut m, mut r) = (mask & vars, rhs);
        for (&(pm, pr), &p) in rows.iter().zip(&pivots) {
            if m >> p & 1 == 1 {
                m ^= pm;
                r ^= pr;
            }
        }
        if m == 0 {
            if r {
                return None;
            }
            continue;
        }
        let p = m.trailing_zeros();
        for (row, _) in rows.iter_mut().zip(&pivots) {
            if row.0 >> p & 1 == 1 {
                row.0 ^= m;
                row.1 ^= r;
            }
        }
        rows.push((m, r));
        pivots.push(p);
    }
    let pivot_mask: u64 = pivots.iter().fold(0, |a, &p| a | 1 << p);
    let particular = rows.iter().zip(&pivots).filter(|(row, _)| row.1).fold(0, |a, (_, &p)| a | 1 << p);
    let mut kernel = Vec::new();
    let mut free = vars & !pivot_mask;
    while free != 0 {
        let f = free.trailing_zeros();
        free &= free - 1;
        let mut v = 1u64 << f;
        for (row, &p) in rows.iter().zip(&pivots) {
            if row.0 >> f & 1 == 1 {
                v |= 1 << p;
            }
        }
        kernel.push(v);
    }
    Some(AffineSpace { particular, kernel })
}

struct Variable {
    line: usize,
    coord: usize,
}

impl CompletionProblem {
    fn variables(&self) -> Vec<Variable> {
        self.open
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.free.iter().map(move |&k| Variable { line: i, coord: k }))
            .collect()
    }

    /// Enumerates all completions, keeping at most `keep` of them.
    ///
    /// `factor_solutions` is the number of solutions of the factor-space equations,
    /// `factor_valid` the number of those in which every open line projects onto a line
    /// and has a lift avoiding the fixed lines, and `lifted` the number of nodes of the
    /// line-by-line lift.
    pub fn solve(&self, keep: usize) -> CompletionOutcome {
        let vars = self.variables();
        assert!(vars.len() <= 64, "at most 64 unknowns");
        let constant = self
            .open
            .iter()
            .fold(plucker_sum(&self.fixed), |acc, o| acc ^ wedge(o.known, o.base));
        let columns: Vec<u32> = vars.iter().map(|v| wedge(self.open[v.line].known, 1 << v.coord)).collect();
        let mut factor_pairs = 0u32;
        let mut factor_eqs = Vec::new();
        for s in 1..self.ambient_dim {
            for r in 0..s {
                let w = wedge_index(r, s);
                if self.factor_coords >> r & 1 == 1 && self.factor_coords >> s & 1 == 1 {
                    factor_pairs |= 1 << w;
                    let mask = columns.iter().enumerate().fold(0u64, |a, (v, &c)| a | ((c >> w & 1) as u64) << v);
                    factor_eqs.push((mask, constant >> w & 1 == 1));
                }
            }
        }
        let all: u64 = if vars.len() == 64 { u64::MAX } else { (1u64 << vars.len()) - 1 };
        let factor_vars = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| self.factor_coords >> v.coord & 1 == 1)
            .fold(0u64, |a, (i, _)| a | 1 << i);

        let mut out = CompletionOutcome::default();
        let Some(phase1) = solve_affine(&factor_eqs, factor_vars) else {
            return out;
        };
        out.factor_solutions = phase1.size();
        let base = StrengthBase::new(&self.fixed);
        let patterns: Vec<Vec<Pattern>> = (0..self.open.len())
            .map(|i| self.patterns(i, &vars, &columns, all & !factor_vars, &base))
            .collect();
        if patterns.iter().any(|p| p.is_empty()) {
            return out;
        }
        let mut order: Vec<usize> = (0..self.open.len()).collect();
        order.sort_by_key(|&i| patterns[i].len());
        let mut suffix = vec![SpanBuilder::new(); order.len() + 1];
        for k in (0..order.len()).rev() {
            suffix[k] = suffix[k + 1];
            for (v, var) in vars.iter().enumerate() {
                if var.line == order[k] && factor_vars >> v & 1 == 1 {
                    suffix[k].insert(columns[v] & factor_pairs);
                }
            }
        }
        let search = FactorSearch { problem: self, patterns: &patterns, order: &order, suffix, factor_pairs, base: &base, keep };
        search.dfs(constant, &mut Vec::with_capacity(order.len()), &mut out);
        crate::progress::add(out.lifted);
        out
    }

    /// Independent route: all 28 equations in one elimination, no factor phase, and
    /// every solution whose open lines avoid the fixed configuration is checked with
    /// the direct strength-3 test. Returns the number of linear solutions and of
    /// completions.
    pub fn oracle_count(&self) -> (u64, u64) {
        let vars = self.variables();
        let constant = self.open.iter().fold(plucker_sum(&self.fixed), |acc, o| acc ^ wedge(o.known, o.base));
        let columns: Vec<u32> = vars.iter().map(|v| wedge(self.open[v.line].known, 1 << v.coord)).collect();
        let mut eqs = Vec::new();
        for s in 1..self.ambient_dim {
            for r in 0..s {
                let w = wedge_index(r, s);
                let mask = columns.iter().enumerate().fold(0u64, |a, (v, &c)| a | ((c >> w & 1) as u64) << v);
                eqs.push((mask, constant >> w & 1 == 1));
            }
        }
        let all: u64 = if vars.len() == 64 { u64::MAX } else { (1u64 << vars.len()) - 1 };
        let Some(space) = solve_affine(&eqs, all) else {
            return (0, 0);
        };
        let fixed = NMSet::from_lines(self.ambient_dim, self.fixed.clone());
        let forbidden = fixed.forbidden_points();
        let mut found = 0;
        for x in space.iter() {
            let mut b: Vec<u32> = self.open.iter().map(|o| o.base).collect();
            for (v, var) in vars.iter().enumerate() {
                if x >> v & 1 == 1 {
                    b[var.line] ^= 1 << var.coord;
                }
            }
            let Some(open) = self.open.iter().zip(&b).map(|(o, &bi)| Line::new(o.known, bi).ok()).collect::<Option<Vec<Line>>>() else {
                continue;
            };
            if open.iter().any(|l| forbidden.contains_line(l)) {
                continue;
            }
            let full = open.iter().fold(fixed.clone(), |s, &l| s.with_line(l));
            if check_strength3(&full) && plucker_sum(full.lines()) == 0 {
                found += 1;
            }
        }
        (space.size(), found)
    }

    /// Assignments of the factor unknowns of open line `i` that make it project onto a
    /// line and admit a lift avoiding the fixed lines, each with its lifts.
    fn patterns(&self, i: usize, vars: &[Variable], columns: &[u32], lift_vars: u64, base: &StrengthBase) -> Vec<Pattern> {
        let o = &self.open[i];
        let mine: Vec<usize> = (0..vars.len()).filter(|&v| vars[v].line == i).collect();
        let (fac, lift): (Vec<usize>, Vec<usize>) = mine.into_iter().partition(|&v| lift_vars >> v & 1 == 0);
        let assign = |vs: &[usize], y: u32| {
            vs.iter().enumerate().filter(|&(j, _)| y >> j & 1 == 1).fold((0u32, 0u32), |(b, r), (_, &v)| {
                (b ^ 1 << vars[v].coord, r ^ columns[v])
            })
        };
        let mut out = Vec::new();
        for z in 0u32..1 << fac.len() {
            let (bz, rz) = assign(&fac, z);
            let b = o.base ^ bz;
            let (pa, pb) = (o.known & self.factor_coords, b & self.factor_coords);
            if pa == 0 || pb == 0 || pa == pb {
                continue;
            }
            let lifts: Vec<(Line, u32)> = (0u32..1 << lift.len())
                .filter_map(|y| {
                    let (by, ry) = assign(&lift, y);
                    let line = Line::new(o.known, b ^ by).ok()?;
                    (!base.forbidden.contains_line(&line)).then_some((line, ry))
                })
                .collect();
            if !lifts.is_empty() {
                out.push(Pattern { contribution: rz, lift_columns: lift.iter().map(|&v| columns[v]).collect(), lifts });
            }
        }
        out
    }
}

struct Pattern {
    contribution: u32,
    lift_columns: Vec<u32>,
    lifts: Vec<(Line, u32)>,
}

struct FactorSearch<'a> {
    problem: &'a CompletionProblem,
    patterns: &'a [Vec<Pattern>],
    order: &'a [usize],
    suffix: Vec<SpanBuilder>,
    factor_pairs: u32,
    base: &'a StrengthBase,
    keep: usize,
}

impl FactorSearch<'_> {
    fn dfs(&self, residual: u32, chosen: &mut Vec<usize>, out: &mut CompletionOutcome) {
        let k = chosen.len();
        if k == self.order.len() {
            out.factor_valid += 1;
            self.lift(residual, chosen, out);
            return;
        }
        for (j, p) in self.patterns[self.order[k]].iter().enumerate() {
            let r = residual ^ p.contribution;
            if self.suffix[k + 1].reduce(r & self.factor_pairs) != 0 {
                continue;
            }
            chosen.push(j);
            self.dfs(r, chosen, out);
            chosen.pop();
        }
    }

    fn lift(&self, residual: u32, chosen: &[usize], out: &mut CompletionOutcome) {
        let picked: Vec<&Pattern> = chosen.iter().zip(self.order).map(|(&j, &i)| &self.patterns[i][j]).collect();
        let mut order: Vec<usize> = (0..picked.len()).collect();
        order.sort_by_key(|&k| picked[k].lifts.len());
        let mut suffix = vec![SpanBuilder::new(); order.len() + 1];
        for k in (0..order.len()).rev() {
            suffix[k] = suffix[k + 1];
            for &c in &picked[order[k]].lift_columns {
                suffix[k].insert(c);
            }
        }
        let options: Vec<&[(Line, u32)]> = order.iter().map(|&k| picked[k].lifts.as_slice()).collect();
        let lift = Lift { fixed: &self.problem.fixed, options, suffix, base: self.base, keep: self.keep };
        let mut lines = Vec::with_capacity(order.len());
        lift.dfs(residual, self.base.forbidden, &mut lines, out);
    }
}

struct Lift<'a> {
    fixed: &'a [Line],
    options: Vec<&'a [(Line, u32)]>,
    suffix: Vec<SpanBuilder>,
    base: &'a StrengthBase,
    keep: usize,
}

impl Lift<'_> {
    fn dfs(&self, residual: u32, forbidden: PointSet, chosen: &mut Vec<Line>, out: &mut CompletionOutcome) {
        out.lifted += 1;
        let k = chosen.len();
        if k == self.options.len() {
            debug_assert_eq!(residual, 0);
            out.found += 1;
            if out.solutions.len() < self.keep {
                let mut all = self.fixed.to_vec();
                all.extend_from_slice(chosen);
                out.solutions.push(all);
            }
            return;
        }
        for &(line, contribution) in self.options[k] {
            let r = residual ^ contribution;
            if self.suffix[k + 1].reduce(r) != 0 || forbidden.contains_line(&line) {
                continue;
            }
            let next = self.base.extend(forbidden, &line, chosen);
            chosen.push(line);
            self.dfs(r, next, chosen, out);
            chosen.pop();
        }
    }
}

/// Points excluded for further lines by strength 3, maintained incrementally: every
/// line and the span of every pair of chosen lines.
struct StrengthBase {
    fixed: Vec<Line>,
    forbidden: PointSet,
}

impl StrengthBase {
    fn new(fixed: &[Line]) -> StrengthBase {
        let mut forbidden = PointSet::new();
        for (i, a) in fixed.iter().enumerate() {
            let (a1, a2) = a.generators();
            forbidden.insert_span(&[a1, a2]);
            for b in &fixed[i + 1..] {
                let (b1, b2) = b.generators();
                forbidden.insert_span(&[a1, a2, b1, b2]);
            }
        }
        StrengthBase { fixed: fixed.to_vec(), forbidden }
    }

    /// `f` must not contain a point of `l`, so `l` is independent of each earlier line.
    fn extend(&self, mut f: PointSet, l: &Line, chosen: &[Line]) -> PointSet {
        let (a, b) = l.generators();
        f.insert_span(&[a, b]);
        for m in self.fixed.iter().chain(chosen) {
            let (c, d) = m.generators();
            f.insert_span(&[a, b, c, d]);
        }
        f
    }
}

/// Codelines in the hyperplane `x8 = 0` of an 8-dimensional space together with the
/// points where the remaining codelines meet it. The remaining line through `m_i` is
/// `<m_i, e8 + c_i>` with `c_i` in the hyperplane; adding `m_i` to `c_i` does not change
/// the line, so the coordinate of `c_i` at the top bit of `m_i` is set to zero, and
/// the projectivity `e8 -> e8 + c_0` fixing the hyperplane makes `c_0 = 0`. The
/// kernel of the factor map is spanned by `e1..e4`.
pub fn hyperplane_problem(lines: &[Line], points: &[u32]) -> CompletionProblem {
    let e8 = 1u32 << 7;
    let mut fixed = lines.to_vec();
    fixed.push(Line::new(points[0], e8).expect("point in the hyperplane"));
    let open = points[1..]
        .iter()
        .map(|&m| {
            let top = 31 - m.leading_zeros() as usize;
            OpenLine { known: m, base: e8, free: (0..7).filter(|&k| k != top).collect() }
        })
        .collect();
    CompletionProblem { ambient_dim: 8, fixed, open, factor_coords: 0xF0 }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_solver_matches_brute_force() {
        let eqs = [(0b1011u64, true), (0b0110, false), (0b1101, true)];
        let sp = solve_affine(&eqs, 0b1111).unwrap();
        let mut fast: Vec<u64> = sp.iter().collect();
        fast.sort_unstable();
        let slow: Vec<u64> = (0..16u64)
            .filter(|&x| eqs.iter().all(|&(m, r)| ((m & x).count_ones() % 2 == 1) == r))
            .collect();
        assert_eq!(fast, slow);
        assert!(solve_affine(&[(0b1, true), (0b1, false)], 0b1).is_none());
    }
}
