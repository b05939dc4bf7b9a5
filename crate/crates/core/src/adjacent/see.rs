use super::{cyclic_chain, finish, Lookup};
use crate::error::Result;
use crate::graphs::{CyclePass, GStarGraph, SeeChoice};
use crate::instance::TourSolution;
use crate::model::AdjacentCosts;

/// Passage through one cycle with the vertices next to its ends.
#[derive(Copy, Clone, Debug)]
struct Block {
    pass: CyclePass,
    /// Second vertex of the passage.
    after_entry: usize,
    /// Second to last vertex of the passage.
    before_exit: usize,
}

fn blocks(r: usize) -> Vec<Block> {
    let mut out = Vec::with_capacity(2 * r);
    for x in 0..r {
        out.push(Block {
            pass: CyclePass { entry: x, exit: (x + 1) % r },
            after_entry: (x + r - 1) % r,
            before_exit: (x + 2) % r,
        });
        out.push(Block {
            pass: CyclePass { entry: x, exit: (x + r - 1) % r },
            after_entry: (x + 1) % r,
            before_exit: (x + r - 2) % r,
        });
    }
    out
}

/// Optimal SEE tour under 2-path costs.
///
/// The passage through each cycle only interacts with its neighbours, and
/// the last with the first through `t`, so this is a cyclic chain over
/// `2 r_k` states per cycle, cut at the smallest cycle.
pub fn solve_adjacent_see(g: &GStarGraph, model: &AdjacentCosts) -> Result<TourSolution> {
    let look = Lookup::new(g.graph(), model)?;
    let m = g.num_cycles();
    let t = g.tip();
    let v = |k: usize, i: usize| g.vertex(k, i);
    let cyc: Vec<Vec<i64>> = (0..m)
        .map(|k| (0..g.cycle_len(k)).map(|i| look.q(v(k, i + g.cycle_len(k) - 1), v(k, i), v(k, i + 1))).collect())
        .collect();
    let totals: Vec<i64> = cyc.iter().map(|c| c.iter().sum()).collect();
    let states: Vec<Vec<Block>> = (0..m).map(|k| blocks(g.cycle_len(k))).collect();
    let sizes: Vec<usize> = states.iter().map(Vec::len).collect();

    let unary = |k: usize, s: usize| {
        let b = states[k][s];
        let (x, y) = (b.pass.entry, b.pass.exit);
        let mut c = totals[k] - cyc[k][x] - cyc[k][y];
        if k == 0 {
            c += look.q(t, v(k, x), v(k, b.after_entry));
        }
        if k == m - 1 {
            c += look.q(v(k, b.before_exit), v(k, y), t);
        }
        c
    };
    let pair = |k: usize, s: usize, s2: usize| {
        let (b, b2) = (states[k][s], states[(k + 1) % m][s2]);
        if k + 1 < m {
            let (y, x2) = (v(k, b.pass.exit), v(k + 1, b2.pass.entry));
            look.q(v(k, b.before_exit), y, x2) + look.q(y, x2, v(k + 1, b2.after_entry))
        } else {
            look.q(v(k, b.pass.exit), t, v(0, b2.pass.entry))
        }
    };
    let cut = (0..m).min_by_key(|&k| (sizes[k], k)).unwrap_or(0);
    let (value, chosen) = cyclic_chain(&sizes, cut, unary, pair);
    let choice = SeeChoice { passes: chosen.iter().enumerate().map(|(k, &s)| states[k][s].pass).collect() };
    finish(g.see_tour(&choice)?, value, model)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::model::eval_adjacent;
    use crate::reductions::generators::random_adjacent;

    #[test]
    fn constant_costs() {
        let g = GStarGraph::new(&[3, 4, 3]).unwrap();
        let zero = AdjacentCosts::from_fn(g.graph(), |_, _, _| 0);
        assert_eq!(solve_adjacent_see(&g, &zero).unwrap().value, 0);
        let one = AdjacentCosts::from_fn(g.graph(), |_, _, _| 1);
        assert_eq!(solve_adjacent_see(&g, &one).unwrap().value, 11);
    }

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for cycles in [vec![3, 3], vec![4, 3], vec![3, 5, 4], vec![3, 3, 3]] {
            let g = GStarGraph::new(&cycles).unwrap();
            for _ in 0..20 {
                let q = random_adjacent(g.graph(), 0, 9, &mut rng);
                let best = g.see_tours().map(|t| eval_adjacent(&t, &q).unwrap()).min().unwrap();
                assert_eq!(solve_adjacent_see(&g, &q).unwrap().value, best);
            }
        }
    }
}
