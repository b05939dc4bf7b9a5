use super::{finish, Lookup};
use crate::error::Result;
use crate::graphs::{DeeChoice, GStarGraph, Junction};
use crate::instance::TourSolution;
use crate::model::{AdjacentCosts, VertexId};

/// How the tour enters cycle `k`: ring edge `s` is replaced by links from
/// `v_s` to `ps` and from `v_{s+1}` to `ps1` (both `t` on the first cycle).
#[derive(Copy, Clone, Debug)]
struct Entry {
    s: usize,
    ps: VertexId,
    ps1: VertexId,
    /// Cheapest 2-paths centred at `t` and in all earlier cycles.
    val: i64,
    back: usize,
    junction: Option<Junction>,
}

fn argmin(best: &mut (i64, usize), value: i64, idx: usize) {
    if value < best.0 {
        *best = (value, idx);
    }
}

/// Entry states of every cycle. State `(j, s', cross)` of cycle `k + 1`
/// sits at index `(j * r_{k+1} + s') * 2 + cross`.
///
/// Exit `j` and entry `s` of the same cycle either share no vertex, or
/// `j = s + 1`, or `j = s - 1`; each case has its own table so a junction
/// is priced in `O(r)`.
fn levels(g: &GStarGraph, look: &Lookup) -> Vec<Vec<Entry>> {
    let m = g.num_cycles();
    let t = g.tip();
    let r0 = g.cycle_len(0);
    let first: Vec<Entry> = (0..r0)
        .map(|i| Entry {
            s: i,
            ps: t,
            ps1: t,
            val: look.q(g.vertex(0, i), t, g.vertex(0, i + 1)),
            back: usize::MAX,
            junction: None,
        })
        .collect();
    let mut out = vec![first];
    for k in 0..m - 1 {
        let r = g.cycle_len(k);
        let r2 = g.cycle_len(k + 1);
        let v = |i: usize| g.vertex(k, i);
        let w = |i: usize| g.vertex(k + 1, i);
        let cyc: Vec<i64> = (0..r).map(|i| look.q(v(i + r - 1), v(i), v(i + 1))).collect();
        let cy = |i: usize| cyc[i % r];
        let total: i64 = cyc.iter().sum();
        let entries = &out[k];

        let none = (i64::MAX, usize::MAX);
        let mut nb = vec![none; r];
        let mut sp = vec![vec![none; r2]; r];
        let mut sm = vec![vec![none; r2]; r];
        for (idx, e) in entries.iter().enumerate() {
            let s = e.s;
            let left = look.q(v(s + r - 1), v(s), e.ps);
            let right = look.q(e.ps1, v(s + 1), v(s + 2));
            argmin(&mut nb[s], e.val + left + right, idx);
            for x in 0..r2 {
                argmin(&mut sp[s][x], e.val + left + look.q(e.ps1, v(s + 1), w(x)), idx);
                argmin(&mut sm[s][x], e.val + look.q(w(x), v(s), e.ps) + right, idx);
            }
        }
        // nb shifted to carry the interior correction for s
        let nb_adj: Vec<(i64, usize)> = (0..r)
            .map(|s| if nb[s].0 == i64::MAX { nb[s] } else { (nb[s].0 - cy(s) - cy(s + 1), nb[s].1) })
            .collect();

        let mut next = Vec::with_capacity(r * r2 * 2);
        for j in 0..r {
            let mut apart = none;
            for s in 0..r {
                if s != j && s != (j + 1) % r && s != (j + r - 1) % r {
                    argmin(&mut apart, nb_adj[s].0, nb_adj[s].1);
                }
            }
            for s2 in 0..r2 {
                for cross in [false, true] {
                    let (qj, qj1) = if cross { (s2 + 1, s2) } else { (s2, s2 + 1) };
                    let exit_left = look.q(v(j + r - 1), v(j), w(qj));
                    let exit_right = look.q(w(qj1), v(j + 1), v(j + 2));
                    let mut best = none;
                    if apart.0 != i64::MAX {
                        argmin(&mut best, apart.0 + total - cy(j) - cy(j + 1) + exit_left + exit_right, apart.1);
                    }
                    let (c, idx) = sp[(j + r - 1) % r][qj % r2];
                    if c != i64::MAX {
                        argmin(&mut best, c + exit_right + total - cy(j + r - 1) - cy(j) - cy(j + 1), idx);
                    }
                    let (c, idx) = sm[(j + 1) % r][qj1 % r2];
                    if c != i64::MAX {
                        argmin(&mut best, c + exit_left + total - cy(j) - cy(j + 1) - cy(j + 2), idx);
                    }
                    let (ps, ps1) = if cross { (v(j + 1), v(j)) } else { (v(j), v(j + 1)) };
                    next.push(Entry {
                        s: s2,
                        ps,
                        ps1,
                        val: best.0,
                        back: best.1,
                        junction: Some(Junction { exit: j, next_entry: s2, cross }),
                    });
                }
            }
        }
        out.push(next);
    }
    out
}

/// Optimal DEE tour under 2-path costs in `O(n^3)`.
///
/// The state between cycles `k` and `k + 1` is the junction itself; the
/// 2-paths centred in a cycle depend only on its entry and exit junctions,
/// which reach three consecutive cycles when the two ejected edges meet.
pub fn solve_adjacent_dee(g: &GStarGraph, model: &AdjacentCosts) -> Result<TourSolution> {
    let look = Lookup::new(g.graph(), model)?;
    let lv = levels(g, &look);
    let k = g.num_cycles() - 1;
    let r = g.cycle_len(k);
    let v = |i: usize| g.vertex(k, i);
    let cyc: Vec<i64> = (0..r).map(|i| look.q(v(i + r - 1), v(i), v(i + 1))).collect();
    let total: i64 = cyc.iter().sum();
    let mut best = (i64::MAX, usize::MAX);
    for (idx, e) in lv[k].iter().enumerate() {
        let s = e.s;
        let c = e.val + total - cyc[s] - cyc[(s + 1) % r] + look.q(v(s + r - 1), v(s), e.ps) + look.q(e.ps1, v(s + 1), v(s + 2));
        argmin(&mut best, c, idx);
    }
    let mut junctions = Vec::with_capacity(k);
    let mut idx = best.1;
    for level in (1..=k).rev() {
        let e = lv[level][idx];
        junctions.push(e.junction.expect("junction on every later level"));
        idx = e.back;
    }
    junctions.reverse();
    let choice = DeeChoice { first_entry: lv[0][idx].s, junctions };
    finish(g.dee_tour(&choice)?, best.0, model)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::model::eval_adjacent;
    use crate::reductions::generators::random_adjacent;

    fn oracle(g: &GStarGraph, q: &AdjacentCosts) -> i64 {
        g.dee_tours().map(|t| eval_adjacent(&t, q).unwrap()).min().unwrap()
    }

    #[test]
    fn constant_costs() {
        let g = GStarGraph::new(&[3, 4, 3]).unwrap();
        let zero = AdjacentCosts::from_fn(g.graph(), |_, _, _| 0);
        assert_eq!(solve_adjacent_dee(&g, &zero).unwrap().value, 0);
        let one = AdjacentCosts::from_fn(g.graph(), |_, _, _| 1);
        assert_eq!(solve_adjacent_dee(&g, &one).unwrap().value, 11);
    }

    #[test]
    fn unit_costs_grow_by_cycle_size() {
        // with unit costs the expanded cycle through C(k+1) costs exactly
        // r_{k+1} more than the one through C(k)
        let g = GStarGraph::new(&[4, 3, 4]).unwrap();
        let one = AdjacentCosts::from_fn(g.graph(), |_, _, _| 1);
        let lv = levels(&g, &Lookup::new(g.graph(), &one).unwrap());
        assert!(lv[0].iter().all(|e| e.val == 1));
        assert!(lv[1].iter().all(|e| e.val == 1 + 4));
        assert!(lv[2].iter().all(|e| e.val == 1 + 4 + 3));
    }

    #[test]
    fn junction_values_match_prefix_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for cycles in [vec![3, 3, 3], vec![4, 3, 5], vec![5, 4, 3]] {
            let g = GStarGraph::new(&cycles).unwrap();
            let q = random_adjacent(g.graph(), 0, 9, &mut rng);
            let lv = levels(&g, &Lookup::new(g.graph(), &q).unwrap());
            for k in 0..g.num_cycles() - 1 {
                let mut best: HashMap<(usize, usize, bool), i64> = HashMap::new();
                for choice in g.dee_tours().choices() {
                    let tour = g.dee_tour(&choice).unwrap();
                    let prefix: i64 = tour
                        .triples()
                        .filter(|&(_, c, _)| g.locate(c).map_or(true, |(kc, _)| kc <= k))
                        .map(|(a, c, b)| q.get(a, c, b).unwrap())
                        .sum();
                    let jn = choice.junctions[k];
                    let slot = best.entry((jn.exit, jn.next_entry, jn.cross)).or_insert(i64::MAX);
                    *slot = (*slot).min(prefix);
                }
                let r2 = g.cycle_len(k + 1);
                for ((j, s, cross), want) in best {
                    assert_eq!(lv[k + 1][(j * r2 + s) * 2 + cross as usize].val, want, "{cycles:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for cycles in [vec![3, 3], vec![3, 4], vec![4, 4], vec![3, 3, 3], vec![5, 3]] {
            let g = GStarGraph::new(&cycles).unwrap();
            for _ in 0..15 {
                let q = random_adjacent(g.graph(), 0, 9, &mut rng);
                assert_eq!(solve_adjacent_dee(&g, &q).unwrap().value, oracle(&g, &q), "{cycles:?}");
            }
        }
    }
}
