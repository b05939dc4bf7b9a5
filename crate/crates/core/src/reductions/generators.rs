//! Instances built from PARTITION, UBQP, TSP and odd QAP inputs, plus seeded
//! random instances.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{Family, GStarGraph, MeeGraph, NeighborhoodGraph, PvGraph};
use crate::instance::Instance;
use crate::model::{AdjacentCosts, CostModel, FullQuadratic, Graph, RankP};

/// Rank-1 SEE instance whose optimum is 0 iff `alpha` splits evenly.
///
/// Cycle `k` is `(u, y, w)` in ring order, so `e^k_0 = (u, y)` and
/// `e^k_1 = (y, w)`. Ring weights are `+-2 alpha_k`: a tour entering at
/// `u` or `w` pays an odd `+1` that even ring sums cannot cancel.
pub fn partition_see(alpha: &[i64]) -> Result<Instance> {
    let n = alpha.len();
    if n < 2 {
        return Err(Error::InvalidGraph(format!("need at least 2 numbers, got {n}")));
    }
    let g = GStarGraph::new(&vec![3; n])?;
    let big = 1 + alpha.iter().map(|x| 2 * x.abs()).sum::<i64>();
    let nm = n as i64 * big;
    let (u, y, w) = (0, 1, 2);
    let mut a = vec![0; g.graph().num_edges()];
    for (k, &x) in alpha.iter().enumerate() {
        a[g.ring_edge(k, 0).0] = 2 * x;
        a[g.ring_edge(k, 1).0] = -2 * x;
        if k + 1 < n {
            a[g.cross_edge(k, u, y).0] = -big;
            a[g.cross_edge(k, w, y).0] = -big;
        }
    }
    a[g.first_tip_edge(y).0] = nm;
    a[g.first_tip_edge(u).0] = nm + 1;
    a[g.first_tip_edge(w).0] = nm + 1;
    a[g.last_tip_edge(u).0] = -big;
    a[g.last_tip_edge(w).0] = -big;
    let model = RankP::homogeneous(vec![a.clone()], vec![a])?;
    Instance::new(NeighborhoodGraph::GStar(g), Family::See, CostModel::Rank(model))
}

/// Rank-1 DEE instance whose optimum is 0 iff `alpha` splits evenly.
///
/// One 3-cycle `(u, v, w)` per number with `(u,v) = alpha_k`,
/// `(v,w) = -alpha_k`, `(w,u) = M`, followed by one all-zero cycle; every
/// other edge is 0. A non-final cycle keeps exactly one ring edge, so a
/// zero tour keeps `+-alpha_k` everywhere.
pub fn partition_dee(alpha: &[i64]) -> Result<Instance> {
    let n = alpha.len();
    if n < 1 {
        return Err(Error::InvalidGraph("need at least 1 number".into()));
    }
    let g = GStarGraph::new(&vec![3; n + 1])?;
    let big = 1 + alpha.iter().map(|x| x.abs()).sum::<i64>();
    let mut a = vec![0; g.graph().num_edges()];
    for (k, &x) in alpha.iter().enumerate() {
        a[g.ring_edge(k, 0).0] = x;
        a[g.ring_edge(k, 1).0] = -x;
        a[g.ring_edge(k, 2).0] = big;
    }
    let model = RankP::homogeneous(vec![a.clone()], vec![a])?;
    Instance::new(NeighborhoodGraph::GStar(g), Family::Dee, CostModel::Rank(model))
}

/// Rank-1 PV instance on `n + 1` pairs whose optimum is 0 iff `s` splits
/// evenly.
pub fn partition_pv(s: &[i64]) -> Result<Instance> {
    if s.is_empty() {
        return Err(Error::InvalidGraph("need at least 1 number".into()));
    }
    let g = PvGraph::new(2 * (s.len() + 1))?;
    let mut a = vec![0; g.graph().num_edges()];
    for (k, &x) in s.iter().enumerate() {
        a[g.gap_edge(k, false, false).0] = x;
        a[g.gap_edge(k, false, true).0] = -x;
    }
    let model = RankP::homogeneous(vec![a.clone()], vec![a])?;
    Instance::new(NeighborhoodGraph::Pv(g), Family::Pv, CostModel::Rank(model))
}

fn check_square(q: &[Vec<i64>]) -> Result<usize> {
    let n = q.len();
    if q.iter().any(|row| row.len() != n) {
        return Err(Error::ModelMismatch(format!("matrix must be {n}x{n}")));
    }
    Ok(n)
}

/// SEE instance with optimum `min_x x^T Q x`: one 3-cycle per variable
/// (at least two cycles), `x_i = 1` iff the tour keeps `e^i_0`.
pub fn ubqp_see(q: &[Vec<i64>]) -> Result<Instance> {
    let n = check_square(q)?;
    let g = GStarGraph::new(&vec![3; n.max(2)])?;
    let mut full = FullQuadratic::zeros(g.graph().num_edges());
    for i in 0..n {
        for j in 0..n {
            full.set_q(g.ring_edge(i, 0), g.ring_edge(j, 0), q[i][j]);
        }
    }
    Instance::new(NeighborhoodGraph::GStar(g), Family::See, CostModel::Full(full))
}

/// PV instance on `n + 1` pairs with optimum `min_x x^T Q x`: `x_i = 1` iff
/// gap `i` is straight.
pub fn ubqp_pv(q: &[Vec<i64>]) -> Result<Instance> {
    let n = check_square(q)?;
    let g = PvGraph::new(2 * (n.max(1) + 1))?;
    let mut full = FullQuadratic::zeros(g.graph().num_edges());
    for i in 0..n {
        for j in 0..n {
            full.set_q(g.gap_edge(i, false, false), g.gap_edge(j, false, false), q[i][j]);
        }
    }
    Instance::new(NeighborhoodGraph::Pv(g), Family::Pv, CostModel::Full(full))
}

/// Adjacent MEE instance on `r = s = n` whose tours cost exactly the TSP
/// tours of `c`: the 2-path `v_j - u_i - v_k` costs `c[j][k]`, every other
/// 2-path 0.
pub fn tsp_mee(c: &[Vec<i64>]) -> Result<Instance> {
    let n = check_square(c)?;
    for j in 0..n {
        for k in 0..n {
            if c[j][k] != c[k][j] {
                return Err(Error::ModelMismatch(format!("TSP costs must be symmetric: c[{j}][{k}] != c[{k}][{j}]")));
            }
        }
    }
    let g = MeeGraph::new(n, n)?;
    let costs = AdjacentCosts::from_fn(g.graph(), |a, mid, b| {
        if mid.0 < n && a.0 >= n && b.0 >= n {
            c[a.0 - n][b.0 - n]
        } else {
            0
        }
    });
    Instance::new(NeighborhoodGraph::Mee(g), Family::Mee, CostModel::Adjacent(costs))
}

/// Output of [`qap_to_mee`]: tour costs equal `scale^2` times the matching
/// costs.
#[derive(Clone, Debug, PartialEq)]
pub struct QapEmbedding {
    pub instance: Instance,
    pub scale: i64,
}

/// Solve `x_i + x_{i+1} = rhs_i` around an odd cycle, times `scale`.
fn odd_cycle_solve(rhs: &[i64], scale: i64) -> Vec<i64> {
    let n = rhs.len();
    let alt: i64 = rhs.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x } else { -x }).sum();
    let mut x = vec![0; n];
    x[0] = alt * scale / 2;
    for i in 1..n {
        x[i] = rhs[i - 1] * scale - x[i - 1];
    }
    x
}

/// Odd QAP on `K_{n,n}` with rank-p costs `alpha[h][i][j]`, `beta[h][i][j]`
/// (row `i` a cycle edge, column `j` an inserted vertex) as an MEE instance
/// on `r = s = n`. Spoke weights solve `a_{u_i v_j} + a_{u_{i+1} v_j} =
/// alpha_{ij}`; when some half-sum is odd every factor is doubled.
pub fn qap_to_mee(alpha: &[Vec<Vec<i64>>], beta: &[Vec<Vec<i64>>]) -> Result<QapEmbedding> {
    let p = alpha.len();
    if beta.len() != p || p == 0 {
        return Err(Error::ModelMismatch(format!("{} alpha factors, {} beta factors", p, beta.len())));
    }
    let n = check_square(&alpha[0])?;
    for f in alpha.iter().chain(beta) {
        if check_square(f)? != n {
            return Err(Error::ModelMismatch("factor sizes differ".into()));
        }
    }
    if n % 2 == 0 {
        return Err(Error::Unsupported(format!("the spoke system is only solvable for odd n, got {n}")));
    }
    let g = MeeGraph::new(n, n)?;
    let column = |f: &Vec<Vec<i64>>, j: usize| (0..n).map(|i| f[i][j]).collect::<Vec<i64>>();
    let odd = alpha.iter().chain(beta).any(|f| {
        (0..n).any(|j| {
            let alt: i64 = column(f, j).iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x } else { -x }).sum();
            alt % 2 != 0
        })
    });
    let scale = if odd { 2 } else { 1 };
    let spread = |f: &Vec<Vec<i64>>| {
        let mut w = vec![0; g.graph().num_edges()];
        for j in 0..n {
            for (i, x) in odd_cycle_solve(&column(f, j), scale).into_iter().enumerate() {
                w[g.spoke(i, j).0] = x;
            }
        }
        w
    };
    let a = alpha.iter().map(spread).collect();
    let b = beta.iter().map(spread).collect();
    let model = RankP::homogeneous(a, b)?;
    let instance = Instance::new(NeighborhoodGraph::Mee(g), Family::Mee, CostModel::Rank(model))?;
    Ok(QapEmbedding { instance, scale })
}

fn draw(rng: &mut impl Rng, m: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..m).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Uniform rank-p model; with `linear` the `c` term is drawn too.
pub fn random_rank(g: &Graph, p: usize, lo: i64, hi: i64, linear: bool, rng: &mut impl Rng) -> RankP {
    let m = g.num_edges();
    let a = (0..p).map(|_| draw(rng, m, lo, hi)).collect();
    let b = (0..p).map(|_| draw(rng, m, lo, hi)).collect();
    let c = if linear { draw(rng, m, lo, hi) } else { vec![0; m] };
    RankP::new(a, b, c).expect("sizes agree by construction")
}

pub fn random_linear(g: &Graph, lo: i64, hi: i64, rng: &mut impl Rng) -> RankP {
    RankP::linear(draw(rng, g.num_edges(), lo, hi))
}

/// Uniform `q(u, v, w)` over every 2-path of `g`, drawn in `two_paths` order.
pub fn random_adjacent(g: &Graph, lo: i64, hi: i64, rng: &mut impl Rng) -> AdjacentCosts {
    AdjacentCosts::from_fn(g, |_, _, _| rng.gen_range(lo..=hi))
}

/// Uniform dense `q` and `c`.
pub fn random_full(g: &Graph, lo: i64, hi: i64, rng: &mut impl Rng) -> FullQuadratic {
    let m = g.num_edges();
    let q = (0..m).map(|_| draw(rng, m, lo, hi)).collect();
    FullQuadratic::from_rows(q, draw(rng, m, lo, hi)).expect("square by construction")
}

/// `G*` with `m` cycles of sizes in `[lo, hi]`.
pub fn random_gstar(m: usize, lo: usize, hi: usize, rng: &mut impl Rng) -> Result<GStarGraph> {
    let cycles: Vec<usize> = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
    GStarGraph::new(&cycles)
}
