//! Graphs, tours and the three tour-cost models.
//!
//! Every cost is an `i64`. A [`FullQuadratic`] model sums `q(e, f)` over all
//! *ordered* pairs of tour edges, the diagonal `e = f` included, plus a linear
//! term. A [`RankP`] model is the factored form
//! `sum_h (sum a^h)(sum b^h) + sum c`. An [`AdjacentCosts`] model charges one
//! 2-path cost `q(u, v, w)` per tour vertex `v`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index into an instance's vertex list.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// Index into an instance's canonical edge list.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn key(u: VertexId, v: VertexId) -> (usize, usize) {
    if u.0 <= v.0 {
        (u.0, v.0)
    } else {
        (v.0, u.0)
    }
}

/// Simple undirected graph with a fixed, insertion-ordered edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(VertexId, VertexId)>,
    index: HashMap<(usize, usize), EdgeId>,
    adjacency: Vec<Vec<VertexId>>,
}

impl Graph {
    pub fn with_vertices(n: usize) -> Self {
        Graph {
            edges: Vec::new(),
            index: HashMap::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Append an edge; panics on loops, parallel edges or unknown vertices,
    /// which only a broken family constructor could produce.
    pub(crate) fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        assert!(u != v, "loop at {u}");
        assert!(u.0 < self.adjacency.len() && v.0 < self.adjacency.len());
        let id = EdgeId(self.edges.len());
        let prev = self.index.insert(key(u, v), id);
        assert!(prev.is_none(), "parallel edge {u}-{v}");
        self.edges.push((u, v));
        self.adjacency[u.0].push(v);
        self.adjacency[v.0].push(u);
        id
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.0]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.0]
    }

    /// All 2-paths `u - v - w` with `u < w`, grouped by middle vertex.
    pub fn two_paths(&self) -> impl Iterator<Item = (VertexId, VertexId, VertexId)> + '_ {
        (0..self.num_vertices()).flat_map(move |v| {
            let nb = &self.adjacency[v];
            (0..nb.len()).flat_map(move |i| {
                (i + 1..nb.len()).map(move |j| {
                    let (u, w) = if nb[i] < nb[j] { (nb[i], nb[j]) } else { (nb[j], nb[i]) };
                    (u, VertexId(v), w)
                })
            })
        })
    }
}

/// A Hamiltonian cycle stored in canonical form: it starts at its smallest
/// vertex and continues toward the smaller of that vertex's two neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tour {
    seq: Vec<VertexId>,
}

impl Tour {
    /// Canonicalize a cyclic vertex sequence. Hamiltonicity is not checked
    /// here; see [`crate::instance::validate_tour`].
    pub fn new(seq: Vec<VertexId>) -> Result<Self> {
        if seq.len() < 3 {
            return Err(Error::InvalidTour(format!("{} vertices is too short for a cycle", seq.len())));
        }
        let n = seq.len();
        let start = (0..n).min_by_key(|&i| seq[i]).unwrap_or(0);
        let next = seq[(start + 1) % n];
        let prev = seq[(start + n - 1) % n];
        let canon = if next <= prev {
            (0..n).map(|k| seq[(start + k) % n]).collect()
        } else {
            (0..n).map(|k| seq[(start + n - k) % n]).collect()
        };
        Ok(Tour { seq: canon })
    }

    pub fn from_indices(seq: &[usize]) -> Result<Self> {
        Tour::new(seq.iter().map(|&v| VertexId(v)).collect())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// `(pred, v, succ)` for every position of the cycle.
    pub fn triples(&self) -> impl Iterator<Item = (VertexId, VertexId, VertexId)> + '_ {
        let n = self.seq.len();
        (0..n).map(move |i| (self.seq[(i + n - 1) % n], self.seq[i], self.seq[(i + 1) % n]))
    }

    /// Consecutive vertex pairs, closing pair included.
    pub fn links(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.seq.len();
        (0..n).map(move |i| (self.seq[i], self.seq[(i + 1) % n]))
    }

    /// Edge ids of the tour in traversal order.
    pub fn edges(&self, g: &Graph) -> Result<Vec<EdgeId>> {
        self.links()
            .map(|(u, v)| {
                g.edge_between(u, v)
                    .ok_or_else(|| Error::InvalidTour(format!("{u}-{v} is not an edge")))
            })
            .collect()
    }

    /// 0/1 characteristic vector over the graph's edges.
    pub fn incidence(&self, g: &Graph) -> Result<Vec<bool>> {
        let mut x = vec![false; g.num_edges()];
        for e in self.edges(g)? {
            x[e.0] = true;
        }
        Ok(x)
    }
}

impl fmt::Display for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.seq.iter().map(|v| v.0.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Dense pairwise costs over edge pairs plus a linear term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullQuadratic {
    m: usize,
    q: Vec<i64>,
    c: Vec<i64>,
}

impl FullQuadratic {
    pub fn zeros(m: usize) -> Self {
        FullQuadratic { m, q: vec![0; m * m], c: vec![0; m] }
    }

    pub fn from_rows(q: Vec<Vec<i64>>, c: Vec<i64>) -> Result<Self> {
        let m = c.len();
        if q.len() != m || q.iter().any(|row| row.len() != m) {
            return Err(Error::ModelMismatch(format!("q must be {m}x{m}")));
        }
        Ok(FullQuadratic { m, q: q.into_iter().flatten().collect(), c })
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn q(&self, e: EdgeId, f: EdgeId) -> i64 {
        self.q[e.0 * self.m + f.0]
    }

    pub fn set_q(&mut self, e: EdgeId, f: EdgeId, value: i64) {
        self.q[e.0 * self.m + f.0] = value;
    }

    pub fn c(&self, e: EdgeId) -> i64 {
        self.c[e.0]
    }

    pub fn set_c(&mut self, e: EdgeId, value: i64) {
        self.c[e.0] = value;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.q.chunks(self.m.max(1)).take(self.m).map(|r| r.to_vec()).collect()
    }

    pub fn linear(&self) -> &[i64] {
        &self.c
    }
}

/// Rank-p factored costs. `p = 0` is a purely linear model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankP {
    a: Vec<Vec<i64>>,
    b: Vec<Vec<i64>>,
    c: Vec<i64>,
}

impl RankP {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>, c: Vec<i64>) -> Result<Self> {
        let m = c.len();
        if a.len() != b.len() {
            return Err(Error::ModelMismatch(format!("{} a-factors but {} b-factors", a.len(), b.len())));
        }
        if a.iter().chain(b.iter()).any(|f| f.len() != m) {
            return Err(Error::ModelMismatch(format!("every factor must have length {m}")));
        }
        Ok(RankP { a, b, c })
    }

    /// Homogeneous model (`c = 0`).
    pub fn homogeneous(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Result<Self> {
        let m = a.first().map_or(0, Vec::len);
        RankP::new(a, b, vec![0; m])
    }

    pub fn linear(c: Vec<i64>) -> Self {
        RankP { a: Vec::new(), b: Vec::new(), c }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn num_edges(&self) -> usize {
        self.c.len()
    }

    pub fn a(&self, h: usize) -> &[i64] {
        &self.a[h]
    }

    pub fn b(&self, h: usize) -> &[i64] {
        &self.b[h]
    }

    pub fn c(&self) -> &[i64] {
        &self.c
    }

    pub fn is_homogeneous(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// Fold the linear term into an extra factor pair `(c, 1_S)`, where `S`
    /// is an edge set every tour of the family meets exactly once.
    pub fn homogenized(&self, once_per_tour: &[EdgeId]) -> RankP {
        let m = self.c.len();
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        if !self.is_homogeneous() {
            let mut ind = vec![0; m];
            for e in once_per_tour {
                ind[e.0] = 1;
            }
            a.push(self.c.clone());
            b.push(ind);
        }
        RankP { a, b, c: vec![0; m] }
    }

    /// Dense expansion `q(e, f) = sum_h a^h_e b^h_f`, same linear term.
    pub fn to_full(&self) -> FullQuadratic {
        let m = self.c.len();
        let mut full = FullQuadratic::zeros(m);
        for e in 0..m {
            for f in 0..m {
                let v = (0..self.rank()).map(|h| self.a[h][e] * self.b[h][f]).sum();
                full.q[e * m + f] = v;
            }
        }
        full.c = self.c.clone();
        full
    }

    /// Largest absolute coefficient per factor, `(max|a^h|, max|b^h|)`.
    pub fn magnitudes(&self) -> Vec<(i64, i64)> {
        (0..self.rank())
            .map(|h| {
                let ma = self.a[h].iter().map(|x| x.abs()).max().unwrap_or(0);
                let mb = self.b[h].iter().map(|x| x.abs()).max().unwrap_or(0);
                (ma, mb)
            })
            .collect()
    }
}

/// 2-path costs `q(u, v, w)` keyed by middle vertex; `q(u,v,w) = q(w,v,u)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjacentCosts {
    q: HashMap<(usize, usize, usize), i64>,
}

impl AdjacentCosts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total model over every 2-path of `g`.
    pub fn from_fn(g: &Graph, mut f: impl FnMut(VertexId, VertexId, VertexId) -> i64) -> Self {
        let mut costs = AdjacentCosts::new();
        for (u, v, w) in g.two_paths() {
            let value = f(u, v, w);
            costs.set(u, v, w, value);
        }
        costs
    }

    pub fn set(&mut self, u: VertexId, v: VertexId, w: VertexId, value: i64) {
        let (a, b) = key(u, w);
        self.q.insert((v.0, a, b), value);
    }

    pub fn get(&self, u: VertexId, v: VertexId, w: VertexId) -> Option<i64> {
        let (a, b) = key(u, w);
        self.q.get(&(v.0, a, b)).copied()
    }

    /// Lookup that treats a missing 2-path as an error.
    pub fn cost(&self, u: VertexId, v: VertexId, w: VertexId) -> Result<i64> {
        self.get(u, v, w).ok_or(Error::MissingTriple(u, v, w))
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `(u, v, w, q)` with `u <= w`, sorted by `(v, u, w)`.
    pub fn sorted_entries(&self) -> Vec<(VertexId, VertexId, VertexId, i64)> {
        let mut out: Vec<_> = self
            .q
            .iter()
            .map(|(&(v, u, w), &val)| (VertexId(u), VertexId(v), VertexId(w), val))
            .collect();
        out.sort_by_key(|&(u, v, w, _)| (v, u, w));
        out
    }

    /// Every 2-path of `g` must carry a cost, and no cost may sit outside `g`.
    pub fn check_total(&self, g: &Graph) -> Result<()> {
        let mut seen = 0;
        for (u, v, w) in g.two_paths() {
            self.cost(u, v, w)?;
            seen += 1;
        }
        if seen != self.q.len() {
            return Err(Error::ModelMismatch(format!(
                "{} adjacent costs given but the graph has {seen} 2-paths",
                self.q.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CostModel {
    Full(FullQuadratic),
    Rank(RankP),
    Adjacent(AdjacentCosts),
}

impl CostModel {
    pub fn name(&self) -> &'static str {
        match self {
            CostModel::Full(_) => "full",
            CostModel::Rank(r) if r.rank() == 0 => "linear",
            CostModel::Rank(_) => "rank",
            CostModel::Adjacent(_) => "adjacent",
        }
    }

    /// Check array sizes (and totality for adjacent costs) against `g`.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        let m = g.num_edges();
        match self {
            CostModel::Full(f) if f.num_edges() != m => {
                Err(Error::ModelMismatch(format!("full model over {} edges, graph has {m}", f.num_edges())))
            }
            CostModel::Rank(r) if r.num_edges() != m => {
                Err(Error::ModelMismatch(format!("rank model over {} edges, graph has {m}", r.num_edges())))
            }
            CostModel::Adjacent(q) => q.check_total(g),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, tour: &Tour, g: &Graph) -> Result<i64> {
        match self {
            CostModel::Full(f) => eval_full(tour, g, f),
            CostModel::Rank(r) => eval_rank(tour, g, r),
            CostModel::Adjacent(q) => eval_adjacent(tour, q),
        }
    }
}

pub fn eval_full(tour: &Tour, g: &Graph, model: &FullQuadratic) -> Result<i64> {
    if model.num_edges() != g.num_edges() {
        return Err(Error::ModelMismatch(format!(
            "full model over {} edges, graph has {}",
            model.num_edges(),
            g.num_edges()
        )));
    }
    let edges = tour.edges(g)?;
    let mut total = 0;
    for &e in &edges {
        for &f in &edges {
            total += model.q(e, f);
        }
        total += model.c(e);
    }
    Ok(total)
}

pub fn eval_rank(tour: &Tour, g: &Graph, model: &RankP) -> Result<i64> {
    if model.num_edges() != g.num_edges() {
        return Err(Error::ModelMismatch(format!(
            "rank model over {} edges, graph has {}",
            model.num_edges(),
            g.num_edges()
        )));
    }
    let edges = tour.edges(g)?;
    let sum = |w: &[i64]| edges.iter().map(|e| w[e.0]).sum::<i64>();
    let quad: i64 = (0..model.rank()).map(|h| sum(model.a(h)) * sum(model.b(h))).sum();
    Ok(quad + sum(model.c()))
}

pub fn eval_adjacent(tour: &Tour, model: &AdjacentCosts) -> Result<i64> {
    tour.triples().map(|(u, v, w)| model.cost(u, v, w)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_plus() -> Graph {
        // 4-cycle 0-1-2-3 with chord 0-2
        let mut g = Graph::with_vertices(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)] {
            g.add_edge(VertexId(u), VertexId(v));
        }
        g
    }

    #[test]
    fn canonical_form_is_rotation_and_reversal_invariant() {
        let a = Tour::from_indices(&[2, 3, 0, 1]).unwrap();
        let b = Tour::from_indices(&[1, 0, 3, 2]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices(), &[VertexId(0), VertexId(1), VertexId(2), VertexId(3)]);
        let again = Tour::new(a.vertices().to_vec()).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn full_counts_ordered_pairs() {
        let g = triangle_plus();
        let tour = Tour::from_indices(&[0, 1, 2, 3]).unwrap();
        let mut f = FullQuadratic::zeros(g.num_edges());
        assert_eq!(eval_full(&tour, &g, &f).unwrap(), 0);
        f.set_q(EdgeId(0), EdgeId(1), 3);
        f.set_q(EdgeId(1), EdgeId(0), 3);
        assert_eq!(eval_full(&tour, &g, &f).unwrap(), 6);
        f.set_q(EdgeId(2), EdgeId(2), 5);
        assert_eq!(eval_full(&tour, &g, &f).unwrap(), 11);
        // chord not in the tour
        f.set_q(EdgeId(4), EdgeId(0), 100);
        assert_eq!(eval_full(&tour, &g, &f).unwrap(), 11);
    }

    #[test]
    fn rank_square_of_sum() {
        let g = triangle_plus();
        let tour = Tour::from_indices(&[0, 1, 2, 3]).unwrap();
        let a = vec![1, 2, 3, 4, 50];
        let r = RankP::homogeneous(vec![a.clone()], vec![a]).unwrap();
        assert_eq!(eval_rank(&tour, &g, &r).unwrap(), 100);
        let lin = RankP::new(vec![vec![0; 5]], vec![vec![7; 5]], vec![1, 1, 1, 1, 9]).unwrap();
        assert_eq!(eval_rank(&tour, &g, &lin).unwrap(), 4);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = triangle_plus();
        let tour = Tour::from_indices(&[0, 1, 2, 3]).unwrap();
        assert!(matches!(eval_full(&tour, &g, &FullQuadratic::zeros(3)), Err(Error::ModelMismatch(_))));
        assert!(RankP::new(vec![vec![0; 4]], vec![vec![0; 5]], vec![0; 5]).is_err());
    }

    #[test]
    fn adjacent_missing_triple_is_an_error() {
        let g = triangle_plus();
        let tour = Tour::from_indices(&[0, 1, 2, 3]).unwrap();
        let ones = AdjacentCosts::from_fn(&g, |_, _, _| 1);
        assert_eq!(eval_adjacent(&tour, &ones).unwrap(), 4);
        ones.check_total(&g).unwrap();
        let mut partial = AdjacentCosts::new();
        partial.set(VertexId(3), VertexId(0), VertexId(1), 1);
        assert!(matches!(eval_adjacent(&tour, &partial), Err(Error::MissingTriple(..))));
        assert!(partial.check_total(&g).is_err());
    }

    #[test]
    fn two_paths_cover_every_degree_pair() {
        let g = triangle_plus();
        // degrees 3,2,3,2 -> 3+1+3+1
        assert_eq!(g.two_paths().count(), 8);
    }
}
