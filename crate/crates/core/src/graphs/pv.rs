use serde::Serialize;

use super::Odometer;
use crate::error::{Error, Result};
use crate::model::{EdgeId, Graph, Tour, VertexId};

/// Paired-vertex graph on `n` (even, `>= 4`) vertices.
///
/// Pair `k` (0-based) is `{v_k, v'_k} = {2k, 2k+1}`. Edge 0 is
/// `(v_0, v'_0)`; each gap `k` contributes `(v_k, v_{k+1})`,
/// `(v_k, v'_{k+1})`, `(v'_k, v_{k+1})`, `(v'_k, v'_{k+1})` in that order;
/// the last edge is the final pair's own edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PvGraph {
    n: usize,
    graph: Graph,
}

/// One bit per gap: `true` uses the two cross edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PvChoice {
    pub cross: Vec<bool>,
}

impl PvGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGraph(format!("paired-vertex graph needs an even n >= 4, got {n}")));
        }
        let pairs = n / 2;
        let mut graph = Graph::with_vertices(n);
        let v = |k: usize| VertexId(2 * k);
        let w = |k: usize| VertexId(2 * k + 1);
        graph.add_edge(v(0), w(0));
        for k in 0..pairs - 1 {
            graph.add_edge(v(k), v(k + 1));
            graph.add_edge(v(k), w(k + 1));
            graph.add_edge(w(k), v(k + 1));
            graph.add_edge(w(k), w(k + 1));
        }
        graph.add_edge(v(pairs - 1), w(pairs - 1));
        Ok(PvGraph { n, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_pairs(&self) -> usize {
        self.n / 2
    }

    pub fn num_gaps(&self) -> usize {
        self.n / 2 - 1
    }

    /// `v_k`.
    pub fn v(&self, k: usize) -> VertexId {
        VertexId(2 * k)
    }

    /// `v'_k`.
    pub fn v_prime(&self, k: usize) -> VertexId {
        VertexId(2 * k + 1)
    }

    /// Edge from side `from` of pair `k` to side `to` of pair `k + 1`;
    /// side `false` is `v`, `true` is `v'`.
    pub fn gap_edge(&self, k: usize, from: bool, to: bool) -> EdgeId {
        EdgeId(1 + 4 * k + 2 * from as usize + to as usize)
    }

    pub fn first_pair_edge(&self) -> EdgeId {
        EdgeId(0)
    }

    pub fn last_pair_edge(&self) -> EdgeId {
        EdgeId(self.graph.num_edges() - 1)
    }

    /// The two edges gap `k` uses under the given choice.
    pub fn gap_edges(&self, k: usize, cross: bool) -> [EdgeId; 2] {
        if cross {
            [self.gap_edge(k, false, true), self.gap_edge(k, true, false)]
        } else {
            [self.gap_edge(k, false, false), self.gap_edge(k, true, true)]
        }
    }

    pub fn count(&self) -> u128 {
        1u128 << self.num_gaps()
    }

    pub fn tour(&self, choice: &PvChoice) -> Result<Tour> {
        let gaps = self.num_gaps();
        if choice.cross.len() != gaps {
            return Err(Error::InvalidTour(format!("{} gap bits for {gaps} gaps", choice.cross.len())));
        }
        // follow the rail leaving v_0, come back along the other rail
        let mut rail = false;
        let mut out = vec![self.v(0)];
        let mut back = vec![self.v_prime(0)];
        for (k, &x) in choice.cross.iter().enumerate() {
            if x {
                rail = !rail;
            }
            let (a, b) = if rail { (self.v_prime(k + 1), self.v(k + 1)) } else { (self.v(k + 1), self.v_prime(k + 1)) };
            out.push(a);
            back.push(b);
        }
        out.extend(back.into_iter().rev());
        Tour::new(out)
    }

    /// Lexicographic over gap bits, straight before cross.
    pub fn tours(&self) -> PvTours<'_> {
        PvTours { g: self, digits: Odometer::new(vec![2; self.num_gaps()]) }
    }

    pub fn decode(&self, tour: &Tour) -> Option<PvChoice> {
        if tour.len() != self.n {
            return None;
        }
        let x = tour.incidence(&self.graph).ok()?;
        let cross = (0..self.num_gaps())
            .map(|k| {
                let [s1, s2] = self.gap_edges(k, false);
                let [c1, c2] = self.gap_edges(k, true);
                match (x[s1.0] && x[s2.0], x[c1.0] && x[c2.0]) {
                    (true, false) => Some(false),
                    (false, true) => Some(true),
                    _ => None,
                }
            })
            .collect::<Option<Vec<bool>>>()?;
        let choice = PvChoice { cross };
        match self.tour(&choice) {
            Ok(t) if &t == tour => Some(choice),
            _ => None,
        }
    }
}

pub struct PvTours<'a> {
    g: &'a PvGraph,
    digits: Odometer,
}

impl PvTours<'_> {
    pub fn choices(self) -> impl Iterator<Item = PvChoice> {
        self.digits.map(|d| PvChoice { cross: d.into_iter().map(|b| b == 1).collect() })
    }
}

impl Iterator for PvTours<'_> {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        let d = self.digits.next()?;
        self.g.tour(&PvChoice { cross: d.into_iter().map(|b| b == 1).collect() }).ok()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn rejects_odd_and_small() {
        assert!(PvGraph::new(5).is_err());
        assert!(PvGraph::new(2).is_err());
    }

    #[test]
    fn edge_order() {
        let g = PvGraph::new(6).unwrap();
        assert_eq!(g.graph().num_edges(), 10);
        assert_eq!(g.graph().endpoints(g.gap_edge(1, true, false)), (g.v_prime(1), g.v(2)));
        assert_eq!(g.graph().endpoints(g.last_pair_edge()), (g.v(2), g.v_prime(2)));
        assert_eq!(PvGraph::new(4).unwrap().graph().num_edges(), 6);
    }

    #[test]
    fn counts_and_pair_edges() {
        for n in [4, 6, 8, 12] {
            let g = PvGraph::new(n).unwrap();
            let mut seen = HashSet::new();
            for choice in g.tours().choices() {
                let t = g.tour(&choice).unwrap();
                let x = t.incidence(g.graph()).unwrap();
                assert!(x[g.first_pair_edge().0] && x[g.last_pair_edge().0]);
                assert_eq!(g.decode(&t), Some(choice));
                assert!(seen.insert(t));
            }
            assert_eq!(seen.len() as u128, g.count());
        }
        assert_eq!(PvGraph::new(12).unwrap().count(), 32);
    }
}
