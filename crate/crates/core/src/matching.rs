//! Minimum-weight assignment and the MEE solvers built on it: a tour in
//! the MEE family is a matching of inserted vertices (plus dummies) to
//! ring edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{MeeChoice, MeeGraph};
use crate::instance::TourSolution;

/// Square weight grid. Row `i` is ring edge `e_i`; column `j` is the
/// inserted vertex `columns[j]`, or a dummy when `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentInstance {
    weights: Vec<Vec<i64>>,
    columns: Vec<Option<usize>>,
}

impl AssignmentInstance {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let n = weights.len();
        if let Some(row) = weights.iter().find(|row| row.len() != n) {
            return Err(Error::ModelMismatch(format!("{n} rows but a row of length {}", row.len())));
        }
        Ok(AssignmentInstance { columns: (0..n).map(Some).collect(), weights })
    }

    /// Insertion weights for edge costs `x`: `v_j` into `e_i` costs
    /// `x(u_i v_j) + x(v_j u_{i+1})`, a dummy keeps `e_i` at `x(e_i)`.
    pub fn mee(g: &MeeGraph, x: &[i64]) -> Result<Self> {
        let m = g.graph().num_edges();
        if x.len() != m {
            return Err(Error::ModelMismatch(format!("{} costs for {m} edges", x.len())));
        }
        let (r, s) = (g.r(), g.s());
        let weights = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if j < s { x[g.spoke(i, j).0] + x[g.spoke(i + 1, j).0] } else { x[g.ring_edge(i).0] })
                    .collect()
            })
            .collect();
        let columns = (0..r).map(|j| (j < s).then_some(j)).collect();
        Ok(AssignmentInstance { weights, columns })
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, row: usize, col: usize) -> i64 {
        self.weights[row][col]
    }

    pub fn column(&self, col: usize) -> Option<usize> {
        self.columns[col]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentSolution {
    pub value: i64,
    /// Column assigned to each row.
    pub matching: Vec<usize>,
}

/// Optimal assignment by shortest augmenting paths with potentials, then
/// moved to the lexicographically smallest optimal matching inside the
/// tight subgraph.
pub fn solve_assignment(inst: &AssignmentInstance) -> AssignmentSolution {
    let n = inst.size();
    if n == 0 {
        return AssignmentSolution { value: 0, matching: Vec::new() };
    }
    let w = &inst.weights;
    // 1-based with row/column 0 as the virtual root
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = w[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_of = vec![0usize; n];
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        row_of[j - 1] = p[j] - 1;
        col_of[p[j] - 1] = j - 1;
    }
    let tight: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| w[i][j] - u[i + 1] - v[j + 1] == 0).collect()).collect();
    lex_smallest(&tight, &mut col_of, &mut row_of);
    let value = (0..n).map(|i| w[i][col_of[i]]).sum();
    AssignmentSolution { value, matching: col_of }
}

/// Every perfect matching of the tight subgraph is optimal; fix rows in
/// order to their smallest reachable column.
fn lex_smallest(tight: &[Vec<bool>], col_of: &mut [usize], row_of: &mut [usize]) {
    let n = tight.len();
    for i in 0..n {
        let target = col_of[i];
        for j in 0..target {
            if !tight[i][j] || row_of[j] < i {
                continue;
            }
            // free `target` for the row that loses `j`
            let mut seen = vec![false; n];
            seen[j] = true;
            let mut path = Vec::new();
            if reroute(tight, row_of[j], target, i, row_of, &mut seen, &mut path) {
                for &(row, col) in path.iter().rev() {
                    col_of[row] = col;
                    row_of[col] = row;
                }
                col_of[i] = j;
                row_of[j] = i;
                break;
            }
        }
    }
}

fn reroute(
    tight: &[Vec<bool>],
    row: usize,
    target: usize,
    fixed: usize,
    row_of: &[usize],
    seen: &mut [bool],
    path: &mut Vec<(usize, usize)>,
) -> bool {
    for col in 0..tight.len() {
        if !tight[row][col] || seen[col] {
            continue;
        }
        seen[col] = true;
        if col == target || (row_of[col] > fixed && reroute(tight, row_of[col], target, fixed, row_of, seen, path)) {
            path.push((row, col));
            return true;
        }
    }
    false
}

fn mee_tour(g: &MeeGraph, inst: &AssignmentInstance, sol: &AssignmentSolution) -> Result<crate::model::Tour> {
    let mut slot = vec![0; g.s()];
    for (i, &col) in sol.matching.iter().enumerate() {
        if let Some(j) = inst.column(col) {
            slot[j] = i;
        }
    }
    g.tour(&MeeChoice { slot })
}

fn tour_sum(g: &MeeGraph, tour: &crate::model::Tour, x: &[i64]) -> Result<i64> {
    Ok(tour.edges(g.graph())?.iter().map(|e| x[e.0]).sum())
}

/// Optimal MEE tour under linear costs `c`.
pub fn solve_linear_mee(g: &MeeGraph, c: &[i64]) -> Result<TourSolution> {
    let inst = AssignmentInstance::mee(g, c)?;
    let sol = solve_assignment(&inst);
    let tour = mee_tour(g, &inst, &sol)?;
    let actual = tour_sum(g, &tour, c)?;
    // subtraction bookkeeping: every ring edge is paid, insertions pay the difference
    let ring: i64 = (0..g.r()).map(|i| c[g.ring_edge(i).0]).sum();
    let extra: i64 = sol
        .matching
        .iter()
        .enumerate()
        .filter(|&(_, &col)| inst.column(col).is_some())
        .map(|(i, &col)| inst.weight(i, col) - c[g.ring_edge(i).0])
        .sum();
    if actual != sol.value || ring + extra != sol.value {
        return Err(Error::Invariant(format!(
            "assignment value {}, tour cost {actual}, offset form {}",
            sol.value,
            ring + extra
        )));
    }
    Ok(TourSolution { value: sol.value, tour })
}

/// Grid points are `num / LAMBDA_DEN`.
const LAMBDA_DEN: i64 = 1 << 24;

/// The λ values tried by [`solve_rank1_mee_fptas`], as numerators over
/// `2^24`, ascending.
pub fn lambda_grid(g: &MeeGraph, a: &[i64], b: &[i64], eps: f64) -> Vec<i64> {
    let nonzero_min = |x: &[i64]| x.iter().copied().filter(|&v| v > 0).min().unwrap_or(1);
    let max = |x: &[i64]| x.iter().copied().max().unwrap_or(0).max(1);
    // a tour has at most 2r edges
    let len = 2.0 * g.r() as f64;
    let lo = nonzero_min(a).max(1) as f64 / (len * max(b) as f64);
    let hi = len * max(a) as f64 / nonzero_min(b).max(1) as f64;
    let step = 1.0 + eps / 3.0;
    let mut out = Vec::new();
    let mut lambda = lo;
    loop {
        let num = ((lambda * LAMBDA_DEN as f64).round() as i64).max(1);
        if out.last() != Some(&num) {
            out.push(num);
        }
        if lambda >= hi {
            break;
        }
        lambda *= step;
    }
    out
}

/// MEE tour with `(Σa)(Σb) <= (1 + eps) OPT` for `a, b >= 0`.
///
/// Each candidate minimizes a weighted sum `a + λ b`; within the grid
/// some λ is at most a factor `1 + eps/3` off `A*/B*` of an optimum, and
/// that candidate's product is at most `(1 + eps/3)` times optimal. The
/// two pure objectives cover optima with a zero factor.
pub fn solve_rank1_mee_fptas(g: &MeeGraph, a: &[i64], b: &[i64], eps: f64) -> Result<TourSolution> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    let m = g.graph().num_edges();
    if a.len() != m || b.len() != m {
        return Err(Error::ModelMismatch(format!("{} and {} costs for {m} edges", a.len(), b.len())));
    }
    if a.iter().chain(b).any(|&x| x < 0) {
        return Err(Error::NegativeWeights);
    }
    let sum_a: i64 = a.iter().sum();
    let sum_b: i64 = b.iter().sum();
    let combine = |wa: i64, wb: i64| -> Vec<i64> { (0..m).map(|e| wa * a[e] + wb * b[e]).collect() };
    let mut weights = vec![combine(sum_b + 1, 1)];
    for num in lambda_grid(g, a, b, eps) {
        weights.push(combine(LAMBDA_DEN, num));
    }
    weights.push(combine(1, sum_a + 1));

    let mut best: Option<TourSolution> = None;
    for x in weights {
        let inst = AssignmentInstance::mee(g, &x)?;
        let tour = mee_tour(g, &inst, &solve_assignment(&inst))?;
        let value = tour_sum(g, &tour, a)? * tour_sum(g, &tour, b)?;
        if best.as_ref().map_or(true, |s| value < s.value) {
            best = Some(TourSolution { value, tour });
        }
    }
    Ok(best.expect("at least the two pure objectives"))
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k == cur.len() {
                out.push(cur.clone());
                return;
            }
            for i in k..cur.len() {
                cur.swap(k, i);
                go(k + 1, cur, out);
                cur.swap(k, i);
            }
        }
        go(0, &mut cur, &mut out);
        out.sort();
        out
    }

    fn brute(w: &[Vec<i64>]) -> (i64, Vec<usize>) {
        permutations(w.len())
            .into_iter()
            .map(|p| (p.iter().enumerate().map(|(i, &j)| w[i][j]).sum::<i64>(), p))
            .min()
            .unwrap()
    }

    #[test]
    fn trivial_grids() {
        let one = AssignmentInstance::new(vec![vec![7]]).unwrap();
        assert_eq!(solve_assignment(&one), AssignmentSolution { value: 7, matching: vec![0] });
        let w: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| (i != j) as i64).collect()).collect();
        let sol = solve_assignment(&AssignmentInstance::new(w).unwrap());
        assert_eq!(sol, AssignmentSolution { value: 0, matching: vec![0, 1, 2, 3] });
        assert!(AssignmentInstance::new(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn ties_resolve_to_lexicographic_matching() {
        let w = vec![vec![0; 4]; 4];
        assert_eq!(solve_assignment(&AssignmentInstance::new(w).unwrap()).matching, vec![0, 1, 2, 3]);
        let w = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(solve_assignment(&AssignmentInstance::new(w).unwrap()).matching, vec![1, 2, 0]);
    }

    #[test]
    fn random_grids_match_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in 1..=6 {
            for _ in 0..(if n == 5 { 200 } else { 30 }) {
                let w: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect()).collect();
                let sol = solve_assignment(&AssignmentInstance::new(w.clone()).unwrap());
                assert_eq!((sol.value, sol.matching), brute(&w));
            }
        }
    }

    fn mee_min(g: &MeeGraph, f: impl Fn(&crate::model::Tour) -> i64) -> i64 {
        g.tours().map(|t| f(&t)).min().unwrap()
    }

    #[test]
    fn linear_mee_matches_enumeration() {
        let g = MeeGraph::new(6, 4).unwrap();
        assert_eq!(solve_linear_mee(&g, &vec![0; g.graph().num_edges()]).unwrap().value, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for (r, s) in [(6, 4), (5, 3), (4, 4), (6, 6)] {
            let g = MeeGraph::new(r, s).unwrap();
            for _ in 0..20 {
                let c: Vec<i64> = (0..g.graph().num_edges()).map(|_| rng.gen_range(-5..=5)).collect();
                let want = mee_min(&g, |t| tour_sum(&g, t, &c).unwrap());
                assert_eq!(solve_linear_mee(&g, &c).unwrap().value, want);
            }
        }
    }

    #[test]
    fn full_insertion_keeps_no_ring_edge() {
        let g = MeeGraph::new(5, 5).unwrap();
        let c: Vec<i64> = (0..g.graph().num_edges()).map(|e| e as i64 % 7).collect();
        let sol = solve_linear_mee(&g, &c).unwrap();
        for e in sol.tour.edges(g.graph()).unwrap() {
            assert!(e.0 >= g.r());
        }
    }

    #[test]
    fn fptas_inputs_are_checked() {
        let g = MeeGraph::new(4, 3).unwrap();
        let m = g.graph().num_edges();
        assert_eq!(solve_rank1_mee_fptas(&g, &vec![1; m], &vec![1; m], 0.0), Err(Error::InvalidEpsilon(0.0)));
        let mut neg = vec![1; m];
        neg[2] = -1;
        assert_eq!(solve_rank1_mee_fptas(&g, &neg, &vec![1; m], 0.1), Err(Error::NegativeWeights));
    }

    #[test]
    fn fptas_degenerate_factors_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let g = MeeGraph::new(5, 3).unwrap();
        let m = g.graph().num_edges();
        for _ in 0..10 {
            let a: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=9)).collect();
            assert_eq!(solve_rank1_mee_fptas(&g, &a, &vec![0; m], 0.1).unwrap().value, 0);
            let want = mee_min(&g, |t| tour_sum(&g, t, &a).unwrap().pow(2));
            assert_eq!(solve_rank1_mee_fptas(&g, &a, &a, 0.1).unwrap().value, want);
        }
    }

    #[test]
    fn fptas_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let g = MeeGraph::new(5, 3).unwrap();
        let m = g.graph().num_edges();
        for _ in 0..30 {
            let a: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=9)).collect();
            let b: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=9)).collect();
            let opt = mee_min(&g, |t| tour_sum(&g, t, &a).unwrap() * tour_sum(&g, t, &b).unwrap());
            let got = solve_rank1_mee_fptas(&g, &a, &b, 0.1).unwrap().value;
            assert!(got >= opt && got as f64 <= 1.1 * opt as f64, "{got} vs {opt}");
        }
    }
}
