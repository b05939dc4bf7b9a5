//! Homogeneous rank-p quadratic shortest path on acyclic multigraphs.
//!
//! Each arc carries `delta = (a^1..a^p, b^1..b^p)`; a path `P` costs
//! `sum_h (sum_P a^h)(sum_P b^h)`. The exact solver keeps, per vertex, every
//! distinct accumulated vector (a label); the approximate solver keeps one
//! label per cell of a geometric grid.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QsppEdge {
    pub tail: usize,
    pub head: usize,
    pub delta: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QsppInstance {
    num_vertices: usize,
    source: usize,
    sink: usize,
    p: usize,
    edges: Vec<QsppEdge>,
}

impl QsppInstance {
    pub fn new(num_vertices: usize, source: usize, sink: usize, p: usize) -> Result<Self> {
        if source >= num_vertices || sink >= num_vertices {
            return Err(Error::InvalidGraph(format!("terminal out of range for {num_vertices} vertices")));
        }
        if source == sink {
            return Err(Error::InvalidGraph("source and sink coincide".into()));
        }
        Ok(QsppInstance { num_vertices, source, sink, p, edges: Vec::new() })
    }

    /// Append an arc; `delta` has length `2p`. Parallel arcs are allowed.
    pub fn add_edge(&mut self, tail: usize, head: usize, delta: Vec<i64>) -> Result<usize> {
        if tail >= self.num_vertices || head >= self.num_vertices {
            return Err(Error::InvalidGraph(format!("arc {tail}->{head} leaves the vertex range")));
        }
        if delta.len() != 2 * self.p {
            return Err(Error::ModelMismatch(format!("arc weight of length {}, expected {}", delta.len(), 2 * self.p)));
        }
        self.edges.push(QsppEdge { tail, head, delta });
        Ok(self.edges.len() - 1)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn rank(&self) -> usize {
        self.p
    }

    pub fn edges(&self) -> &[QsppEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &QsppEdge {
        &self.edges[e]
    }

    pub fn objective_of(&self, d: &[i64]) -> i64 {
        (0..self.p).map(|h| d[h] * d[self.p + h]).sum()
    }

    /// Coordinate sums along `path`; errors unless it is an s-t path.
    pub fn path_sums(&self, path: &[usize]) -> Result<Vec<i64>> {
        let mut at = self.source;
        let mut d = vec![0; 2 * self.p];
        for &e in path {
            let edge = self.edges.get(e).ok_or_else(|| Error::ForeignPath(format!("arc {e} does not exist")))?;
            if edge.tail != at {
                return Err(Error::ForeignPath(format!("arc {e} does not leave vertex {at}")));
            }
            for (x, y) in d.iter_mut().zip(&edge.delta) {
                *x += y;
            }
            at = edge.head;
        }
        if at != self.sink {
            return Err(Error::ForeignPath(format!("path ends at {at}, not at the sink")));
        }
        Ok(d)
    }

    pub fn path_objective(&self, path: &[usize]) -> Result<i64> {
        Ok(self.objective_of(&self.path_sums(path)?))
    }

    /// Kahn order of the whole graph, or `CyclicGraph`.
    fn topological_order(&self) -> Result<Vec<usize>> {
        let mut indeg = vec![0usize; self.num_vertices];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            indeg[e.head] += 1;
            out[e.tail].push(e.head);
        }
        let mut queue: VecDeque<usize> = (0..self.num_vertices).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.num_vertices);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() != self.num_vertices {
            return Err(Error::CyclicGraph);
        }
        Ok(order)
    }

    fn reach(&self, from: usize, forward: bool) -> Vec<bool> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            if forward {
                adj[e.tail].push(e.head);
            } else {
                adj[e.head].push(e.tail);
            }
        }
        let mut seen = vec![false; self.num_vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Number of s-t paths (saturating).
    pub fn count_paths(&self) -> Result<u128> {
        let ordered = prune_and_order(self)?;
        let inst = &ordered.instance;
        let mut ways = vec![0u128; inst.num_vertices];
        ways[inst.source] = 1;
        let mut by_tail: Vec<&QsppEdge> = inst.edges.iter().collect();
        by_tail.sort_by_key(|e| e.tail);
        for e in by_tail {
            ways[e.head] = ways[e.head].saturating_add(ways[e.tail]);
        }
        Ok(ways[inst.sink])
    }

    /// Every s-t path as arc ids, in depth-first order by arc id.
    pub fn enumerate_paths(&self, cap: u128) -> Result<Vec<Vec<usize>>> {
        self.topological_order()?;
        let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices];
        for (id, e) in self.edges.iter().enumerate() {
            out_arcs[e.tail].push(id);
        }
        let mut paths = Vec::new();
        let mut stack: Vec<(usize, usize)> = vec![(self.source, 0)];
        let mut path: Vec<usize> = Vec::new();
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if v == self.sink {
                if paths.len() as u128 >= cap {
                    return Err(Error::CapExceeded { count: paths.len() as u128 + 1, cap });
                }
                paths.push(path.clone());
                stack.pop();
                path.pop();
                continue;
            }
            if *next < out_arcs[v].len() {
                let e = out_arcs[v][*next];
                *next += 1;
                path.push(e);
                stack.push((self.edges[e].head, 0));
            } else {
                stack.pop();
                path.pop();
            }
        }
        Ok(paths)
    }
}

/// Pruned instance with vertices renumbered topologically (source 0, sink
/// last) and arcs kept in their original relative order.
#[derive(Clone, Debug)]
pub struct OrderedQspp {
    pub instance: QsppInstance,
    /// Original id of each kept vertex.
    pub vertex_origin: Vec<usize>,
    /// Original id of each kept arc.
    pub edge_origin: Vec<usize>,
}

pub fn prune_and_order(inst: &QsppInstance) -> Result<OrderedQspp> {
    let order = inst.topological_order()?;
    let from_s = inst.reach(inst.source, true);
    let to_t = inst.reach(inst.sink, false);
    if !from_s[inst.sink] {
        return Err(Error::NoPath);
    }
    let vertex_origin: Vec<usize> = order.into_iter().filter(|&v| from_s[v] && to_t[v]).collect();
    let mut new_id = vec![usize::MAX; inst.num_vertices];
    for (i, &v) in vertex_origin.iter().enumerate() {
        new_id[v] = i;
    }
    let n = vertex_origin.len();
    if new_id[inst.source] != 0 || new_id[inst.sink] != n - 1 {
        return Err(Error::Invariant("terminals are not extreme in the topological order".into()));
    }
    let mut out = QsppInstance { num_vertices: n, source: 0, sink: n - 1, p: inst.p, edges: Vec::new() };
    let mut edge_origin = Vec::new();
    for (id, e) in inst.edges.iter().enumerate() {
        let (a, b) = (new_id[e.tail], new_id[e.head]);
        if a != usize::MAX && b != usize::MAX {
            out.edges.push(QsppEdge { tail: a, head: b, delta: e.delta.clone() });
            edge_origin.push(id);
        }
    }
    Ok(OrderedQspp { instance: out, vertex_origin, edge_origin })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QsppSolution {
    pub value: i64,
    /// Arc ids of the input instance, source to sink.
    pub path: Vec<usize>,
    /// Label sums of the returned path.
    pub label: Vec<i64>,
    /// `|Omega_j|` in topological order of the pruned graph.
    pub label_counts: Vec<usize>,
}

impl QsppSolution {
    pub fn total_labels(&self) -> usize {
        self.label_counts.iter().sum()
    }
}

#[derive(Clone, Debug)]
struct Label {
    d: Vec<i64>,
    /// Arc into this vertex (ordered-instance id), `usize::MAX` at the source.
    edge: usize,
    /// Index of the predecessor label at the arc's tail.
    pred: usize,
}

enum Trim {
    Exact,
    Grid { log_base: f64 },
}

impl Trim {
    fn cell(&self, d: &[i64]) -> Vec<i64> {
        match self {
            Trim::Exact => d.to_vec(),
            Trim::Grid { log_base } => d.iter().map(|&x| ((x as f64 + 1.0).ln() / log_base).floor() as i64).collect(),
        }
    }
}

fn sweep(ordered: &OrderedQspp, trim: &Trim) -> Result<QsppSolution> {
    let inst = &ordered.instance;
    let n = inst.num_vertices;
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, e) in inst.edges.iter().enumerate() {
        incoming[e.head].push(id);
    }
    let mut labels: Vec<Vec<Label>> = vec![Vec::new(); n];
    labels[0].push(Label { d: vec![0; 2 * inst.p], edge: usize::MAX, pred: 0 });
    for j in 1..n {
        let mut cells: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut here: Vec<Label> = Vec::new();
        for &id in &incoming[j] {
            let e = &inst.edges[id];
            for (li, l) in labels[e.tail].iter().enumerate() {
                let d: Vec<i64> = l.d.iter().zip(&e.delta).map(|(x, y)| x + y).collect();
                let key = trim.cell(&d);
                match cells.get(&key) {
                    None => {
                        cells.insert(key, here.len());
                        here.push(Label { d, edge: id, pred: li });
                    }
                    Some(&slot) => {
                        if matches!(trim, Trim::Grid { .. }) {
                            let old: i64 = here[slot].d.iter().sum();
                            if d.iter().sum::<i64>() < old {
                                here[slot] = Label { d, edge: id, pred: li };
                            }
                        }
                    }
                }
            }
        }
        labels[j] = here;
    }
    let sink = &labels[n - 1];
    let best = (0..sink.len())
        .min_by(|&x, &y| {
            let (a, b) = (&sink[x].d, &sink[y].d);
            inst.objective_of(a).cmp(&inst.objective_of(b)).then_with(|| a.cmp(b))
        })
        .ok_or(Error::NoPath)?;
    let label = sink[best].d.clone();
    let mut path = Vec::new();
    let (mut v, mut li) = (n - 1, best);
    while v != 0 {
        let l = &labels[v][li];
        path.push(ordered.edge_origin[l.edge]);
        v = inst.edges[l.edge].tail;
        li = l.pred;
    }
    path.reverse();
    Ok(QsppSolution {
        value: inst.objective_of(&label),
        path,
        label,
        label_counts: labels.iter().map(Vec::len).collect(),
    })
}

/// `prod_h (2(n-1) max|a^h| + 1)(2(n-1) max|b^h| + 1)`, saturating.
pub fn label_ceiling(inst: &QsppInstance) -> u128 {
    let n = inst.num_vertices as u128;
    let mut bound: u128 = 1;
    for h in 0..2 * inst.p {
        let m = inst.edges.iter().map(|e| e.delta[h].unsigned_abs() as u128).max().unwrap_or(0);
        bound = bound.saturating_mul((2 * n.saturating_sub(1)).saturating_mul(m).saturating_add(1));
    }
    bound
}

/// Exact minimum over all s-t paths.
///
/// Asserts `|Omega_t| >= |Omega_j|` for every vertex and the label-count
/// ceiling; a violation is reported as `Error::Invariant`.
pub fn solve_exact(inst: &QsppInstance) -> Result<QsppSolution> {
    let ordered = prune_and_order(inst)?;
    let sol = sweep(&ordered, &Trim::Exact)?;
    let at_sink = *sol.label_counts.last().unwrap_or(&0);
    if let Some((j, &c)) = sol.label_counts.iter().enumerate().find(|&(_, &c)| c > at_sink) {
        return Err(Error::Invariant(format!("vertex {j} holds {c} labels, sink only {at_sink}")));
    }
    let ceiling = label_ceiling(&ordered.instance);
    if let Some(&c) = sol.label_counts.iter().find(|&&c| c as u128 > ceiling) {
        return Err(Error::Invariant(format!("{c} labels exceed the ceiling {ceiling}")));
    }
    Ok(sol)
}

/// Path within factor `1 + eps` of optimal; every arc weight must be `>= 0`.
///
/// Coordinates are bucketed by `floor(log_{1+g}(x + 1))` with
/// `g = min(eps, 1) / (8 p n)`, one label per cell.
pub fn solve_fptas(inst: &QsppInstance, eps: f64) -> Result<QsppSolution> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidEpsilon(eps));
    }
    if inst.edges.iter().any(|e| e.delta.iter().any(|&x| x < 0)) {
        return Err(Error::NegativeWeights);
    }
    let ordered = prune_and_order(inst)?;
    if inst.p == 0 {
        return sweep(&ordered, &Trim::Exact);
    }
    let n = ordered.instance.num_vertices as f64;
    let gamma = eps.min(1.0) / (8.0 * inst.p as f64 * n);
    sweep(&ordered, &Trim::Grid { log_base: gamma.ln_1p() })
}

pub const DEFAULT_PATH_CAP: u128 = 1_000_000;

/// Exhaustive minimum; ties break on the label vector, then on arc ids.
pub fn oracle_paths(inst: &QsppInstance, cap: u128) -> Result<QsppSolution> {
    let paths = inst.enumerate_paths(cap)?;
    let mut best: Option<(i64, Vec<i64>, Vec<usize>)> = None;
    for path in paths {
        let d = inst.path_sums(&path)?;
        let v = inst.objective_of(&d);
        let better = match &best {
            None => true,
            Some((bv, bd, bp)) => (v, &d, &path) < (*bv, bd, bp),
        };
        if better {
            best = Some((v, d, path));
        }
    }
    let (value, label, path) = best.ok_or(Error::NoPath)?;
    Ok(QsppSolution { value, path, label, label_counts: Vec::new() })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn single_arc() {
        let mut q = QsppInstance::new(2, 0, 1, 1).unwrap();
        q.add_edge(0, 1, vec![4, -3]).unwrap();
        let sol = solve_exact(&q).unwrap();
        assert_eq!(sol.value, -12);
        assert_eq!(sol.path, vec![0]);
    }

    #[test]
    fn parallel_tie_goes_to_lower_arc() {
        let mut q = QsppInstance::new(2, 0, 1, 1).unwrap();
        q.add_edge(0, 1, vec![2, 3]).unwrap();
        q.add_edge(0, 1, vec![3, 2]).unwrap();
        let sol = solve_exact(&q).unwrap();
        assert_eq!((sol.value, sol.path), (6, vec![0]));
        assert_eq!(oracle_paths(&q, 10).unwrap().path, vec![0]);
    }

    #[test]
    fn prune_drops_isolated_and_dead_ends() {
        let mut q = QsppInstance::new(5, 0, 3, 1).unwrap();
        q.add_edge(0, 1, vec![1, 1]).unwrap();
        q.add_edge(1, 3, vec![1, 1]).unwrap();
        q.add_edge(1, 4, vec![1, 1]).unwrap();
        let o = prune_and_order(&q).unwrap();
        assert_eq!(o.vertex_origin, vec![0, 1, 3]);
        assert_eq!(o.edge_origin, vec![0, 1]);
    }

    #[test]
    fn cycle_and_disconnection_are_errors() {
        let mut q = QsppInstance::new(3, 0, 2, 1).unwrap();
        q.add_edge(0, 1, vec![0, 0]).unwrap();
        q.add_edge(1, 0, vec![0, 0]).unwrap();
        assert_eq!(solve_exact(&q).unwrap_err(), Error::CyclicGraph);
        let q = QsppInstance::new(3, 0, 2, 1).unwrap();
        assert_eq!(solve_exact(&q).unwrap_err(), Error::NoPath);
    }

    #[test]
    fn fptas_rejects_negative() {
        let mut q = QsppInstance::new(2, 0, 1, 1).unwrap();
        q.add_edge(0, 1, vec![-1, 1]).unwrap();
        assert_eq!(solve_fptas(&q, 0.1).unwrap_err(), Error::NegativeWeights);
        assert!(matches!(solve_fptas(&q, 0.0), Err(Error::InvalidEpsilon(_))));
    }

    #[test]
    fn random_dags_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(2..=8);
            let p = rng.gen_range(1..=2);
            let mut q = QsppInstance::new(n, 0, n - 1, p).unwrap();
            for _ in 0..rng.gen_range(1..=16) {
                let a = rng.gen_range(0..n - 1);
                let b = rng.gen_range(a + 1..n);
                q.add_edge(a, b, (0..2 * p).map(|_| rng.gen_range(-5..=5)).collect()).unwrap();
            }
            match oracle_paths(&q, 100_000) {
                Ok(o) => {
                    let s = solve_exact(&q).unwrap();
                    assert_eq!(s.value, o.value);
                    assert_eq!(q.path_objective(&s.path).unwrap(), s.value);
                    assert_eq!(q.count_paths().unwrap(), q.enumerate_paths(100_000).unwrap().len() as u128);
                }
                Err(e) => assert_eq!(e, Error::NoPath),
            }
        }
    }
}
