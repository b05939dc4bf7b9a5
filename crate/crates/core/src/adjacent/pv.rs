use num_rational::Ratio;
use serde::Serialize;

use super::{finish, Lookup};
use crate::error::{Error, Result};
use crate::graphs::{PvChoice, PvGraph};
use crate::instance::TourSolution;
use crate::model::{AdjacentCosts, VertexId};

fn side(g: &PvGraph, k: usize, prime: bool) -> VertexId {
    if prime {
        g.v_prime(k)
    } else {
        g.v(k)
    }
}

/// Cost of the two 2-paths centred in pair `k`, given the gap bits on
/// either side (`None` at the ends, where the pair edge closes the rail).
fn pair_cost(g: &PvGraph, look: &Lookup, k: usize, before: Option<bool>, after: Option<bool>) -> i64 {
    [false, true]
        .into_iter()
        .map(|p| {
            let prev = match before {
                Some(cross) => side(g, k - 1, p ^ cross),
                None => side(g, k, !p),
            };
            let next = match after {
                Some(cross) => side(g, k + 1, p ^ cross),
                None => side(g, k, !p),
            };
            look.q(prev, side(g, k, p), next)
        })
        .sum()
}

/// Optimal PV tour under 2-path costs: a chain over the gap bits, since
/// the 2-paths centred in pair `k` see only gaps `k - 1` and `k`.
pub fn solve_adjacent_pv(g: &PvGraph, model: &AdjacentCosts) -> Result<TourSolution> {
    let look = Lookup::new(g.graph(), model)?;
    let gaps = g.num_gaps();
    let bits = [false, true];
    let last = g.num_pairs() - 1;
    // cost[b]: pairs 0..=k with gap k set to b
    let mut cost: Vec<i64> = bits.iter().map(|&b| pair_cost(g, &look, 0, None, Some(b))).collect();
    let mut back: Vec<[usize; 2]> = Vec::with_capacity(gaps);
    back.push([0, 0]);
    for k in 1..gaps {
        let mut next = [i64::MAX; 2];
        let mut arg = [0; 2];
        for (y, &by) in bits.iter().enumerate() {
            for (x, &bx) in bits.iter().enumerate() {
                let v = cost[x] + pair_cost(g, &look, k, Some(bx), Some(by));
                if v < next[y] {
                    next[y] = v;
                    arg[y] = x;
                }
            }
        }
        cost = next.to_vec();
        back.push(arg);
    }
    let closing: Vec<i64> = bits.iter().enumerate().map(|(x, &b)| cost[x] + pair_cost(g, &look, last, Some(b), None)).collect();
    let mut cur = if closing[1] < closing[0] { 1 } else { 0 };
    let value = closing[cur];
    let mut cross = vec![false; gaps];
    for k in (0..gaps).rev() {
        cross[k] = cur == 1;
        cur = back[k][cur];
    }
    finish(g.tour(&PvChoice { cross })?, value, model)
}

/// Optimal PV tour under linear costs: the cheaper edge pair per gap,
/// straight on ties.
pub fn solve_linear_pv(g: &PvGraph, c: &[i64]) -> Result<TourSolution> {
    if c.len() != g.graph().num_edges() {
        return Err(Error::ModelMismatch(format!("{} costs for {} edges", c.len(), g.graph().num_edges())));
    }
    let cost = |es: [crate::model::EdgeId; 2]| c[es[0].0] + c[es[1].0];
    let mut value = c[g.first_pair_edge().0] + c[g.last_pair_edge().0];
    let mut cross = Vec::with_capacity(g.num_gaps());
    for k in 0..g.num_gaps() {
        let (s, x) = (cost(g.gap_edges(k, false)), cost(g.gap_edges(k, true)));
        cross.push(x < s);
        value += s.min(x);
    }
    let tour = g.tour(&PvChoice { cross })?;
    let actual: i64 = tour.edges(g.graph())?.iter().map(|e| c[e.0]).sum();
    if actual != value {
        return Err(Error::Invariant(format!("greedy reports {value}, its tour costs {actual}")));
    }
    Ok(TourSolution { value, tour })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeReport {
    pub bounds: bool,
    pub pair_edges: bool,
    pub degree_back: bool,
    pub degree_forward: bool,
    pub violations: Vec<String>,
}

impl PolytopeReport {
    pub fn satisfied(&self) -> bool {
        self.bounds && self.pair_edges && self.degree_back && self.degree_forward
    }
}

/// Membership of `x` in the PV polytope: `0 <= x <= 1`, both pair edges at
/// 1, and every vertex sends total weight 1 to each neighbouring pair.
pub fn pv_polytope_check(g: &PvGraph, x: &[Ratio<i64>]) -> Result<PolytopeReport> {
    let m = g.graph().num_edges();
    if x.len() != m {
        return Err(Error::ModelMismatch(format!("vector of length {}, graph has {m} edges", x.len())));
    }
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    let mut violations = Vec::new();
    let mut bounds = true;
    for (e, v) in x.iter().enumerate() {
        if *v < zero || *v > one {
            bounds = false;
            violations.push(format!("x[{e}] = {v} outside [0, 1]"));
        }
    }
    let mut pair_edges = true;
    for e in [g.first_pair_edge(), g.last_pair_edge()] {
        if x[e.0] != one {
            pair_edges = false;
            violations.push(format!("pair edge {e} has x = {}", x[e.0]));
        }
    }
    let mut degree_back = true;
    let mut degree_forward = true;
    for k in 0..g.num_gaps() {
        for p in [false, true] {
            let fwd = x[g.gap_edge(k, p, false).0] + x[g.gap_edge(k, p, true).0];
            if fwd != one {
                degree_forward = false;
                violations.push(format!("{} sends {fwd} to pair {}", side(g, k, p), k + 1));
            }
            let back = x[g.gap_edge(k, false, p).0] + x[g.gap_edge(k, true, p).0];
            if back != one {
                degree_back = false;
                violations.push(format!("{} receives {back} from pair {k}", side(g, k + 1, p)));
            }
        }
    }
    Ok(PolytopeReport { bounds, pair_edges, degree_back, degree_forward, violations })
}

pub fn pv_polytope_check_01(g: &PvGraph, x: &[bool]) -> Result<PolytopeReport> {
    let r: Vec<Ratio<i64>> = x.iter().map(|&b| Ratio::from_integer(b as i64)).collect();
    pv_polytope_check(g, &r)
}
