use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EdgeId, Graph, Tour, VertexId};

/// Cycle `u_0 .. u_{r-1}` (vertices `0..r`) plus `s` outer vertices
/// `v_j = r + j` joined to every `u_i`. Edges: ring edges
/// `e_i = (u_i, u_{i+1})`, then `(u_i, v_j)` in `(i, j)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeeGraph {
    r: usize,
    s: usize,
    graph: Graph,
}

/// `slot[j]` is the ring edge that `v_j` is inserted into; slots are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MeeChoice {
    pub slot: Vec<usize>,
}

impl MeeGraph {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if s < 3 || s > r {
            return Err(Error::InvalidGraph(format!("need 3 <= s <= r, got r = {r}, s = {s}")));
        }
        let mut graph = Graph::with_vertices(r + s);
        for i in 0..r {
            graph.add_edge(VertexId(i), VertexId((i + 1) % r));
        }
        for i in 0..r {
            for j in 0..s {
                graph.add_edge(VertexId(i), VertexId(r + j));
            }
        }
        Ok(MeeGraph { r, s, graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn u(&self, i: usize) -> VertexId {
        VertexId(i % self.r)
    }

    pub fn v(&self, j: usize) -> VertexId {
        VertexId(self.r + j)
    }

    pub fn ring_edge(&self, i: usize) -> EdgeId {
        EdgeId(i % self.r)
    }

    pub fn spoke(&self, i: usize, j: usize) -> EdgeId {
        EdgeId(self.r + (i % self.r) * self.s + j)
    }

    /// `r! / (r - s)!`.
    pub fn count(&self) -> u128 {
        ((self.r - self.s + 1)..=self.r).map(|x| x as u128).product()
    }

    pub fn tour(&self, choice: &MeeChoice) -> Result<Tour> {
        if choice.slot.len() != self.s {
            return Err(Error::InvalidTour(format!("{} slots for {} inserted vertices", choice.slot.len(), self.s)));
        }
        let mut filler = vec![None; self.r];
        for (j, &i) in choice.slot.iter().enumerate() {
            if i >= self.r || filler[i].is_some() {
                return Err(Error::InvalidTour(format!("slot {i} out of range or used twice")));
            }
            filler[i] = Some(j);
        }
        let mut seq = Vec::with_capacity(self.r + self.s);
        for (i, f) in filler.iter().enumerate() {
            seq.push(self.u(i));
            if let Some(j) = f {
                seq.push(self.v(*j));
            }
        }
        Tour::new(seq)
    }

    /// Injections in lexicographic order of `slot`.
    pub fn tours(&self) -> MeeTours<'_> {
        MeeTours { g: self, current: Some((0..self.s).collect()) }
    }

    pub fn decode(&self, tour: &Tour) -> Option<MeeChoice> {
        if tour.len() != self.r + self.s {
            return None;
        }
        let seq = tour.vertices();
        let n = seq.len();
        let mut slot = Vec::with_capacity(self.s);
        for j in 0..self.s {
            let p = seq.iter().position(|&x| x == self.v(j))?;
            let (a, b) = (seq[(p + n - 1) % n].0, seq[(p + 1) % n].0);
            if a >= self.r || b >= self.r {
                return None;
            }
            let i = if (a + 1) % self.r == b {
                a
            } else if (b + 1) % self.r == a {
                b
            } else {
                return None;
            };
            slot.push(i);
        }
        let choice = MeeChoice { slot };
        match self.tour(&choice) {
            Ok(t) if &t == tour => Some(choice),
            _ => None,
        }
    }
}

pub struct MeeTours<'a> {
    g: &'a MeeGraph,
    current: Option<Vec<usize>>,
}

/// Lexicographic successor among injections `[0, s) -> [0, r)`.
fn next_injection(cur: &[usize], r: usize) -> Option<Vec<usize>> {
    let s = cur.len();
    for p in (0..s).rev() {
        let used: Vec<bool> = {
            let mut u = vec![false; r];
            for &x in &cur[..p] {
                u[x] = true;
            }
            u
        };
        if let Some(x) = (cur[p] + 1..r).find(|&x| !used[x]) {
            let mut out = cur[..p].to_vec();
            out.push(x);
            let mut u = used;
            u[x] = true;
            for y in 0..r {
                if out.len() == s {
                    break;
                }
                if !u[y] {
                    out.push(y);
                    u[y] = true;
                }
            }
            return Some(out);
        }
    }
    None
}

impl MeeTours<'_> {
    pub fn choices(mut self) -> impl Iterator<Item = MeeChoice> {
        let r = self.g.r;
        std::iter::from_fn(move || {
            let cur = self.current.take()?;
            self.current = next_injection(&cur, r);
            Some(MeeChoice { slot: cur })
        })
    }
}

impl Iterator for MeeTours<'_> {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        let cur = self.current.take()?;
        self.current = next_injection(&cur, self.g.r);
        self.g.tour(&MeeChoice { slot: cur }).ok()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(MeeGraph::new(3, 4).is_err());
        assert!(MeeGraph::new(5, 2).is_err());
    }

    #[test]
    fn counts() {
        for (r, s, want) in [(3, 3, 6), (4, 3, 24), (6, 4, 360), (5, 3, 60)] {
            let g = MeeGraph::new(r, s).unwrap();
            assert_eq!(g.count(), want);
            let mut seen = HashSet::new();
            for choice in g.tours().choices() {
                let t = g.tour(&choice).unwrap();
                assert_eq!(g.decode(&t).as_ref(), Some(&choice));
                assert!(seen.insert(t));
            }
            assert_eq!(seen.len() as u128, want);
        }
    }

    #[test]
    fn injections_are_lexicographic() {
        let g = MeeGraph::new(4, 3).unwrap();
        let all: Vec<_> = g.tours().choices().map(|c| c.slot).collect();
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[2], vec![0, 2, 1]);
        assert_eq!(all.last().unwrap(), &vec![3, 2, 1]);
    }
}
