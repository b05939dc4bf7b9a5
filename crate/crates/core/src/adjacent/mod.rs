//! Polynomial dynamic programs for adjacent-quadratic costs on SEE, DEE and
//! PV, the linear PV greedy and the PV polytope membership check.

mod dee;
mod pv;
mod see;

pub use dee::solve_adjacent_dee;
pub use pv::{pv_polytope_check, pv_polytope_check_01, solve_adjacent_pv, solve_linear_pv, PolytopeReport};
pub use see::solve_adjacent_see;

use crate::error::{Error, Result};
use crate::instance::TourSolution;
use crate::model::{eval_adjacent, AdjacentCosts, Graph, Tour, VertexId};

/// Total-model lookup; only built after `check_total`.
struct Lookup<'a>(&'a AdjacentCosts);

impl Lookup<'_> {
    fn new<'a>(g: &Graph, q: &'a AdjacentCosts) -> Result<Lookup<'a>> {
        q.check_total(g)?;
        Ok(Lookup(q))
    }

    fn q(&self, u: VertexId, v: VertexId, w: VertexId) -> i64 {
        self.0.get(u, v, w).expect("model checked total")
    }
}

fn finish(tour: Tour, value: i64, q: &AdjacentCosts) -> Result<TourSolution> {
    let actual = eval_adjacent(&tour, q)?;
    if actual != value {
        return Err(Error::Invariant(format!("dynamic program reports {value}, its tour costs {actual}")));
    }
    Ok(TourSolution { value, tour })
}

/// Minimum of `sum_k unary(k, x_k) + sum_k pair(k, x_k, x_{k+1 mod m})`
/// over a cyclic chain, cut at block `cut`. Ties keep the first state in
/// index order.
fn cyclic_chain(
    sizes: &[usize],
    cut: usize,
    unary: impl Fn(usize, usize) -> i64,
    pair: impl Fn(usize, usize, usize) -> i64,
) -> (i64, Vec<usize>) {
    let m = sizes.len();
    let order: Vec<usize> = (0..m).map(|i| (cut + i) % m).collect();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for s0 in 0..sizes[cut] {
        // back[i][x]: predecessor state of block order[i] in state x
        let mut cost: Vec<i64> = (0..sizes[cut]).map(|x| if x == s0 { unary(cut, x) } else { i64::MAX }).collect();
        let mut back: Vec<Vec<usize>> = vec![Vec::new(); m];
        for i in 1..m {
            let (prev, k) = (order[i - 1], order[i]);
            let mut next = vec![i64::MAX; sizes[k]];
            let mut arg = vec![0; sizes[k]];
            for y in 0..sizes[k] {
                let u = unary(k, y);
                for (x, &c) in cost.iter().enumerate() {
                    if c == i64::MAX {
                        continue;
                    }
                    let v = c + pair(prev, x, y) + u;
                    if v < next[y] {
                        next[y] = v;
                        arg[y] = x;
                    }
                }
            }
            cost = next;
            back[i] = arg;
        }
        let last = order[m - 1];
        for (x, &c) in cost.iter().enumerate() {
            if c == i64::MAX {
                continue;
            }
            let total = c + pair(last, x, s0);
            if best.as_ref().map_or(true, |(b, _)| total < *b) {
                let mut states = vec![0; m];
                let mut cur = x;
                for i in (1..m).rev() {
                    states[order[i]] = cur;
                    cur = back[i][cur];
                }
                states[cut] = s0;
                best = Some((total, states));
            }
        }
    }
    best.expect("every block has at least one state")
}
