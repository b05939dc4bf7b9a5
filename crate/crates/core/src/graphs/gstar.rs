use serde::Serialize;

use super::Odometer;
use crate::error::{Error, Result};
use crate::model::{EdgeId, Graph, Tour, VertexId};

/// Layered graph of `m >= 2` cycles `C(1..m)` and a tip vertex `t`.
///
/// Vertex 0 is the tip; `v^k_i` (both indices 0-based here) follows in cycle
/// order. Edges are listed as `t-V^1`, then per cycle its ring edges
/// `e^k_i = (v^k_i, v^k_{i+1})` followed by the complete bipartite edges to
/// the next cycle in `(i, j)` order, and finally `V^m-t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GStarGraph {
    cycles: Vec<usize>,
    vertex_offset: Vec<usize>,
    ring_offset: Vec<usize>,
    cross_offset: Vec<usize>,
    last_tip_offset: usize,
    graph: Graph,
}

/// Passage through one cycle of an SEE tour: enter at `entry`, leave at the
/// ring neighbour `exit`; the ejected edge joins the two.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclePass {
    pub entry: usize,
    pub exit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeeChoice {
    pub passes: Vec<CyclePass>,
}

/// Link between cycle `k` and `k + 1` of a DEE tour: ring edge `exit` of
/// `C(k)` and ring edge `next_entry` of `C(k+1)` are ejected and patched by
/// `(v^k_j, v^{k+1}_s), (v^k_{j+1}, v^{k+1}_{s+1})`, or with `cross` by
/// `(v^k_j, v^{k+1}_{s+1}), (v^k_{j+1}, v^{k+1}_s)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Junction {
    pub exit: usize,
    pub next_entry: usize,
    pub cross: bool,
}

/// A DEE tour: ring edge `first_entry` of `C(1)` is replaced by the two tip
/// edges, then one junction per consecutive cycle pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DeeChoice {
    pub first_entry: usize,
    pub junctions: Vec<Junction>,
}

/// Generated DEE family size next to the published closed form (read with
/// `|V^{k+1}|` in the second product).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeeCountReport {
    pub enumerated: u128,
    pub closed_form: u128,
    pub agrees: bool,
}

impl GStarGraph {
    pub fn new(cycles: &[usize]) -> Result<Self> {
        if cycles.len() < 2 {
            return Err(Error::InvalidGraph(format!("G* needs at least 2 cycles, got {}", cycles.len())));
        }
        if let Some(r) = cycles.iter().find(|&&r| r < 3) {
            return Err(Error::InvalidGraph(format!("cycle of size {r}; every cycle needs at least 3 vertices")));
        }
        let m = cycles.len();
        let mut vertex_offset = Vec::with_capacity(m);
        let mut next = 1;
        for &r in cycles {
            vertex_offset.push(next);
            next += r;
        }
        let mut graph = Graph::with_vertices(next);
        let tip = VertexId(0);
        let v = |k: usize, i: usize| VertexId(vertex_offset[k] + i % cycles[k]);

        for i in 0..cycles[0] {
            graph.add_edge(tip, v(0, i));
        }
        let mut ring_offset = Vec::with_capacity(m);
        let mut cross_offset = Vec::with_capacity(m - 1);
        for k in 0..m {
            ring_offset.push(graph.num_edges());
            for i in 0..cycles[k] {
                graph.add_edge(v(k, i), v(k, i + 1));
            }
            if k + 1 < m {
                cross_offset.push(graph.num_edges());
                for i in 0..cycles[k] {
                    for j in 0..cycles[k + 1] {
                        graph.add_edge(v(k, i), v(k + 1, j));
                    }
                }
            }
        }
        let last_tip_offset = graph.num_edges();
        for i in 0..cycles[m - 1] {
            graph.add_edge(v(m - 1, i), tip);
        }
        Ok(GStarGraph {
            cycles: cycles.to_vec(),
            vertex_offset,
            ring_offset,
            cross_offset,
            last_tip_offset,
            graph,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cycles(&self) -> &[usize] {
        &self.cycles
    }

    pub fn num_cycles(&self) -> usize {
        self.cycles.len()
    }

    pub fn cycle_len(&self, k: usize) -> usize {
        self.cycles[k]
    }

    pub fn tip(&self) -> VertexId {
        VertexId(0)
    }

    /// `v^k_i`, index taken modulo the cycle length.
    pub fn vertex(&self, k: usize, i: usize) -> VertexId {
        VertexId(self.vertex_offset[k] + i % self.cycles[k])
    }

    /// `(k, i)` of a cycle vertex, `None` for the tip.
    pub fn locate(&self, v: VertexId) -> Option<(usize, usize)> {
        if v.0 == 0 || v.0 >= self.graph.num_vertices() {
            return None;
        }
        let k = self.vertex_offset.partition_point(|&off| off <= v.0) - 1;
        Some((k, v.0 - self.vertex_offset[k]))
    }

    /// Ring edge `e^k_i = (v^k_i, v^k_{i+1})`.
    pub fn ring_edge(&self, k: usize, i: usize) -> EdgeId {
        EdgeId(self.ring_offset[k] + i % self.cycles[k])
    }

    /// Edge `(v^k_i, v^{k+1}_j)`.
    pub fn cross_edge(&self, k: usize, i: usize, j: usize) -> EdgeId {
        let (i, j) = (i % self.cycles[k], j % self.cycles[k + 1]);
        EdgeId(self.cross_offset[k] + i * self.cycles[k + 1] + j)
    }

    /// Edge `(t, v^1_i)`.
    pub fn first_tip_edge(&self, i: usize) -> EdgeId {
        EdgeId(i % self.cycles[0])
    }

    /// Edge `(v^m_i, t)`.
    pub fn last_tip_edge(&self, i: usize) -> EdgeId {
        EdgeId(self.last_tip_offset + i % self.cycles[self.cycles.len() - 1])
    }

    /// Ring edges of cycle `k` in ring order.
    pub fn ring_edges(&self, k: usize) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.cycles[k]).map(move |i| self.ring_edge(k, i))
    }

    pub fn see_count(&self) -> u128 {
        self.cycles.iter().map(|&r| 2 * r as u128).product()
    }

    /// Exact size of the DEE family: `r_1` tip choices, then per junction
    /// `(r_k - 1)` exit edges, `r_{k+1}` entry edges and two patchings.
    pub fn dee_count(&self) -> u128 {
        let m = self.cycles.len();
        let mut count = self.cycles[0] as u128;
        for k in 0..m - 1 {
            count *= 2 * (self.cycles[k] as u128 - 1) * self.cycles[k + 1] as u128;
        }
        count
    }

    pub fn dee_count_report(&self) -> DeeCountReport {
        let m = self.cycles.len();
        let all: u128 = self.cycles.iter().map(|&r| r as u128).product();
        let next: u128 = self.cycles[1..].iter().map(|&r| r as u128).product();
        let closed_form = (1u128 << (m - 1)) * all * next;
        let enumerated = self.dee_count();
        DeeCountReport { enumerated, closed_form, agrees: enumerated == closed_form }
    }

    fn check_pass(&self, k: usize, pass: CyclePass) -> Result<()> {
        let r = self.cycles[k];
        let ok = pass.entry < r && pass.exit < r && (pass.exit == (pass.entry + 1) % r || pass.entry == (pass.exit + 1) % r);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTour(format!("cycle {k}: entry {} and exit {} are not ring neighbours", pass.entry, pass.exit)))
        }
    }

    /// Cycle vertices from `entry` to its ring neighbour `exit` the long way.
    pub(crate) fn pass_path(&self, k: usize, pass: CyclePass) -> impl Iterator<Item = VertexId> + '_ {
        let r = self.cycles[k];
        let forward = pass.exit == (pass.entry + 1) % r;
        (0..r).map(move |step| {
            let i = if forward { (pass.entry + r - step) % r } else { (pass.entry + step) % r };
            self.vertex(k, i)
        })
    }

    pub fn see_tour(&self, choice: &SeeChoice) -> Result<Tour> {
        if choice.passes.len() != self.cycles.len() {
            return Err(Error::InvalidTour(format!("{} passes for {} cycles", choice.passes.len(), self.cycles.len())));
        }
        let mut seq = Vec::with_capacity(self.graph.num_vertices());
        seq.push(self.tip());
        for (k, &pass) in choice.passes.iter().enumerate() {
            self.check_pass(k, pass)?;
            seq.extend(self.pass_path(k, pass));
        }
        Tour::new(seq)
    }

    /// Lazy SEE stream; per cycle the options run `(0, fwd), (0, bwd), (1, fwd), ...`.
    pub fn see_tours(&self) -> SeeTours<'_> {
        SeeTours { g: self, digits: Odometer::new(self.cycles.iter().map(|&r| 2 * r).collect()) }
    }

    pub(crate) fn see_choice_from_digits(&self, digits: &[usize]) -> SeeChoice {
        let passes = digits
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                let r = self.cycles[k];
                let entry = d / 2;
                let exit = if d % 2 == 0 { (entry + 1) % r } else { (entry + r - 1) % r };
                CyclePass { entry, exit }
            })
            .collect();
        SeeChoice { passes }
    }

    /// Recover the SEE encoding of `tour`, or `None` if it is not an SEE tour.
    pub fn decode_see(&self, tour: &Tour) -> Option<SeeChoice> {
        if tour.len() != self.graph.num_vertices() {
            return None;
        }
        let seq = tour.vertices();
        let n = seq.len();
        // canonical tours start at the tip; try both directions
        let orders: [Vec<VertexId>; 2] = [seq[1..].to_vec(), seq[1..].iter().rev().copied().collect::<Vec<_>>()];
        for order in orders.iter() {
            if let Some(choice) = self.decode_see_order(order) {
                if self.see_tour(&choice).ok().as_ref() == Some(tour) {
                    return Some(choice);
                }
            }
        }
        debug_assert!(n > 0);
        None
    }

    fn decode_see_order(&self, order: &[VertexId]) -> Option<SeeChoice> {
        let mut passes = Vec::with_capacity(self.cycles.len());
        let mut pos = 0;
        for k in 0..self.cycles.len() {
            let r = self.cycles[k];
            if pos + r > order.len() {
                return None;
            }
            let block = &order[pos..pos + r];
            let (bk, entry) = self.locate(block[0])?;
            let (ek, exit) = self.locate(block[r - 1])?;
            if bk != k || ek != k {
                return None;
            }
            passes.push(CyclePass { entry, exit });
            pos += r;
        }
        if pos != order.len() {
            return None;
        }
        for (k, &p) in passes.iter().enumerate() {
            self.check_pass(k, p).ok()?;
        }
        Some(SeeChoice { passes })
    }

    pub fn dee_tour(&self, choice: &DeeChoice) -> Result<Tour> {
        let m = self.cycles.len();
        let bad = |msg: String| Error::InvalidTour(msg);
        if choice.junctions.len() != m - 1 {
            return Err(bad(format!("{} junctions for {m} cycles", choice.junctions.len())));
        }
        if choice.first_entry >= self.cycles[0] {
            return Err(bad(format!("entry edge {} out of range", choice.first_entry)));
        }
        let nv = self.graph.num_vertices();
        let mut nbrs: Vec<Vec<VertexId>> = vec![Vec::with_capacity(2); nv];
        let mut link = |u: VertexId, v: VertexId| {
            nbrs[u.0].push(v);
            nbrs[v.0].push(u);
        };
        let mut entry = choice.first_entry;
        link(self.tip(), self.vertex(0, entry));
        link(self.tip(), self.vertex(0, entry + 1));
        for k in 0..m {
            let r = self.cycles[k];
            let exit = if k + 1 < m {
                let jn = choice.junctions[k];
                if jn.exit >= r || jn.exit == entry {
                    return Err(bad(format!("cycle {k}: exit edge {} invalid for entry {entry}", jn.exit)));
                }
                if jn.next_entry >= self.cycles[k + 1] {
                    return Err(bad(format!("cycle {}: entry edge {} out of range", k + 1, jn.next_entry)));
                }
                Some(jn)
            } else {
                None
            };
            for i in 0..r {
                if i != entry && exit.map_or(true, |jn| jn.exit != i) {
                    link(self.vertex(k, i), self.vertex(k, i + 1));
                }
            }
            if let Some(jn) = exit {
                let (a, b) = (self.vertex(k, jn.exit), self.vertex(k, jn.exit + 1));
                let (c, d) = (self.vertex(k + 1, jn.next_entry), self.vertex(k + 1, jn.next_entry + 1));
                if jn.cross {
                    link(a, d);
                    link(b, c);
                } else {
                    link(a, c);
                    link(b, d);
                }
                entry = jn.next_entry;
            }
        }
        trace_cycle(&nbrs).map_err(bad).and_then(Tour::new)
    }

    pub fn dee_tours(&self) -> DeeTours<'_> {
        let m = self.cycles.len();
        let mut radices = vec![self.cycles[0]];
        for k in 0..m - 1 {
            radices.push(self.cycles[k] - 1);
            radices.push(self.cycles[k + 1]);
            radices.push(2);
        }
        DeeTours { g: self, digits: Odometer::new(radices) }
    }

    pub(crate) fn dee_choice_from_digits(&self, digits: &[usize]) -> DeeChoice {
        let mut entry = digits[0];
        let mut junctions = Vec::with_capacity(self.cycles.len() - 1);
        for chunk in digits[1..].chunks(3) {
            let exit = if chunk[0] < entry { chunk[0] } else { chunk[0] + 1 };
            let jn = Junction { exit, next_entry: chunk[1], cross: chunk[2] == 1 };
            entry = jn.next_entry;
            junctions.push(jn);
        }
        DeeChoice { first_entry: digits[0], junctions }
    }

    /// Which ring edge of `C(k)` has exactly the endpoints `{a, b}`.
    fn ring_index(&self, k: usize, a: usize, b: usize) -> Option<usize> {
        let r = self.cycles[k];
        if (a + 1) % r == b {
            Some(a)
        } else if (b + 1) % r == a {
            Some(b)
        } else {
            None
        }
    }

    /// Recover the DEE encoding of `tour`, or `None` if it is not a DEE tour.
    pub fn decode_dee(&self, tour: &Tour) -> Option<DeeChoice> {
        let nv = self.graph.num_vertices();
        if tour.len() != nv {
            return None;
        }
        let mut nbrs: Vec<Vec<VertexId>> = vec![Vec::new(); nv];
        for (u, v) in tour.links() {
            nbrs[u.0].push(v);
            nbrs[v.0].push(u);
        }
        let tip_side: Vec<usize> = nbrs[0]
            .iter()
            .map(|&v| self.locate(v).filter(|&(k, _)| k == 0).map(|(_, i)| i))
            .collect::<Option<_>>()?;
        let first_entry = self.ring_index(0, tip_side[0], tip_side[1])?;
        let m = self.cycles.len();
        let mut junctions = Vec::with_capacity(m - 1);
        for k in 0..m - 1 {
            // tour edges between V^k and V^{k+1}
            let mut links = Vec::new();
            for i in 0..self.cycles[k] {
                let u = self.vertex(k, i);
                for &w in &nbrs[u.0] {
                    if let Some((kw, j)) = self.locate(w) {
                        if kw == k + 1 {
                            links.push((i, j));
                        }
                    }
                }
            }
            if links.len() != 2 {
                return None;
            }
            let exit = self.ring_index(k, links[0].0, links[1].0)?;
            let next_entry = self.ring_index(k + 1, links[0].1, links[1].1)?;
            let (lo, _) = if links[0].0 == exit { links[0] } else { links[1] };
            let (_, partner) = if links[0].0 == lo { links[0] } else { links[1] };
            let cross = partner != next_entry;
            junctions.push(Junction { exit, next_entry, cross });
        }
        let choice = DeeChoice { first_entry, junctions };
        match self.dee_tour(&choice) {
            Ok(t) if &t == tour => Some(choice),
            _ => None,
        }
    }
}

/// Walk a 2-regular adjacency structure from vertex 0.
pub(crate) fn trace_cycle(nbrs: &[Vec<VertexId>]) -> std::result::Result<Vec<VertexId>, String> {
    if let Some(v) = nbrs.iter().position(|n| n.len() != 2) {
        return Err(format!("vertex {v} has degree {}", nbrs[v].len()));
    }
    let n = nbrs.len();
    let mut seq = Vec::with_capacity(n);
    let mut prev = VertexId(0);
    let mut cur = VertexId(0);
    loop {
        seq.push(cur);
        let next = if nbrs[cur.0][0] != prev || seq.len() == 1 { nbrs[cur.0][0] } else { nbrs[cur.0][1] };
        prev = cur;
        cur = next;
        if cur == VertexId(0) || seq.len() > n {
            break;
        }
    }
    if seq.len() != n {
        return Err(format!("edges close a cycle of length {} instead of {n}", seq.len()));
    }
    Ok(seq)
}

pub struct SeeTours<'a> {
    g: &'a GStarGraph,
    digits: Odometer,
}

impl Iterator for SeeTours<'_> {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        let d = self.digits.next()?;
        self.g.see_tour(&self.g.see_choice_from_digits(&d)).ok()
    }
}

pub struct DeeTours<'a> {
    g: &'a GStarGraph,
    digits: Odometer,
}

impl Iterator for DeeTours<'_> {
    type Item = Tour;

    fn next(&mut self) -> Option<Tour> {
        let d = self.digits.next()?;
        self.g.dee_tour(&self.g.dee_choice_from_digits(&d)).ok()
    }
}

impl<'a> SeeTours<'a> {
    /// Stream of choices instead of tours.
    pub fn choices(self) -> impl Iterator<Item = SeeChoice> + 'a {
        let g = self.g;
        self.digits.map(move |d| g.see_choice_from_digits(&d))
    }
}

impl<'a> DeeTours<'a> {
    pub fn choices(self) -> impl Iterator<Item = DeeChoice> + 'a {
        let g = self.g;
        self.digits.map(move |d| g.dee_choice_from_digits(&d))
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(GStarGraph::new(&[3]).is_err());
        assert!(GStarGraph::new(&[3, 2]).is_err());
        assert!(GStarGraph::new(&[]).is_err());
    }

    #[test]
    fn canonical_edge_order() {
        let g = GStarGraph::new(&[4, 3, 5]).unwrap();
        assert_eq!(g.graph().num_vertices(), 13);
        assert_eq!(g.graph().num_edges(), 4 + (4 + 12) + (3 + 15) + 5 + 5);
        assert_eq!(g.first_tip_edge(2), EdgeId(2));
        assert_eq!(g.ring_edge(0, 0), EdgeId(4));
        assert_eq!(g.graph().endpoints(g.ring_edge(0, 3)), (g.vertex(0, 3), g.vertex(0, 0)));
        assert_eq!(g.cross_edge(0, 1, 2), EdgeId(8 + 3 + 2));
        assert_eq!(g.graph().endpoints(g.last_tip_edge(4)), (g.vertex(2, 4), g.tip()));
        assert_eq!(g.locate(g.vertex(1, 2)), Some((1, 2)));
        assert_eq!(g.locate(g.tip()), None);
    }

    #[test]
    fn see_counts_match_enumeration() {
        for cycles in [vec![3, 3], vec![4, 3, 5], vec![3, 3, 3], vec![3, 4]] {
            let g = GStarGraph::new(&cycles).unwrap();
            let tours: HashSet<Tour> = g.see_tours().collect();
            assert_eq!(tours.len() as u128, g.see_count(), "{cycles:?}");
            assert_eq!(g.see_tours().count() as u128, g.see_count());
        }
        assert_eq!(GStarGraph::new(&[4, 3, 5]).unwrap().see_count(), 480);
        assert_eq!(GStarGraph::new(&[3, 3, 3]).unwrap().see_count(), 216);
    }

    #[test]
    fn see_decode_roundtrip() {
        let g = GStarGraph::new(&[4, 3, 5]).unwrap();
        for choice in g.see_tours().choices() {
            let tour = g.see_tour(&choice).unwrap();
            assert_eq!(g.decode_see(&tour), Some(choice));
        }
    }

    #[test]
    fn dee_enumeration_is_distinct_and_decodes() {
        for cycles in [vec![3, 3], vec![4, 3], vec![3, 3, 3], vec![3, 4, 3]] {
            let g = GStarGraph::new(&cycles).unwrap();
            let mut seen = HashSet::new();
            for choice in g.dee_tours().choices() {
                let tour = g.dee_tour(&choice).unwrap();
                assert_eq!(g.decode_dee(&tour).as_ref(), Some(&choice));
                assert!(seen.insert(tour));
            }
            assert_eq!(seen.len() as u128, g.dee_count(), "{cycles:?}");
        }
    }

    #[test]
    fn dee_count_disagrees_with_closed_form() {
        let report = GStarGraph::new(&[3, 3]).unwrap().dee_count_report();
        assert_eq!(report.enumerated, 36);
        assert_eq!(report.closed_form, 54);
        assert!(!report.agrees);
    }

    #[test]
    fn see_and_dee_are_disjoint_structures() {
        let g = GStarGraph::new(&[3, 3]).unwrap();
        for t in g.dee_tours() {
            assert!(g.decode_see(&t).is_none());
        }
        for t in g.see_tours() {
            assert!(g.decode_dee(&t).is_none());
        }
    }

    #[test]
    fn figure_tour_is_see() {
        // r = (4,3,5): enter C1 at its 4th vertex from t, leave C3 at its 2nd
        let g = GStarGraph::new(&[4, 3, 5]).unwrap();
        let choice = SeeChoice {
            passes: vec![
                CyclePass { entry: 3, exit: 0 },
                CyclePass { entry: 2, exit: 1 },
                CyclePass { entry: 2, exit: 1 },
            ],
        };
        let tour = g.see_tour(&choice).unwrap();
        assert_eq!(g.decode_see(&tour), Some(choice));
        assert_eq!(tour.len(), 13);
    }
}
