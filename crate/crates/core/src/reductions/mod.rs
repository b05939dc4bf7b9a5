//! Cost-preserving maps from rank-p tour problems to QSPP instances.
//!
//! Every QSPP arc owns a *fragment*: the tour edges it stands for. The
//! fragments along any s-t path partition the edge set of exactly one tour,
//! so arc weights are plain fragment sums and the path objective equals the
//! tour objective. A nonzero linear term adds one coordinate pair: `alpha`
//! is the fragment's `c`-sum and `beta` is 1 on arcs leaving the source.

pub mod generators;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graphs::{CyclePass, DeeChoice, Family, GStarGraph, Junction, NeighborhoodGraph, PvChoice, PvGraph, SeeChoice};
use crate::model::{EdgeId, RankP, Tour};
use crate::qspp::{self, QsppInstance, QsppSolution};

/// What a QSPP arc means in tour terms.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArcRole {
    /// `s -> v^1_i`.
    SeeEnter { vertex: usize },
    /// `v^k_entry -> hat v^k_exit`, ring edge between them ejected.
    SeePass { cycle: usize, pass: CyclePass },
    /// `hat v^k_from -> v^{k+1}_to`.
    SeeLink { cycle: usize, from: usize, to: usize },
    /// `hat v^m_i -> t`.
    SeeLeave { vertex: usize },
    /// `t_1 -> e^1_i`, ring edge `i` of the first cycle replaced by the tip.
    DeeTip { entry: usize },
    /// `e^k_entry -> hat e^k_exit` inside cycle `k`.
    DeeInside { cycle: usize, entry: usize, exit: usize },
    /// `hat e^k_j -> e^{k+1}_s`, straight or crossed patching.
    DeePatch { cycle: usize, junction: Junction },
    /// `e^m_entry -> t_2`.
    DeeSink { entry: usize },
    /// Gap `k -> k + 1` of the paired-vertex graph.
    PvGap { gap: usize, cross: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcInfo {
    pub role: ArcRole,
    pub fragment: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct ReductionMap {
    pub family: Family,
    pub graph: NeighborhoodGraph,
    pub qspp: QsppInstance,
    pub arcs: Vec<ArcInfo>,
    /// Whether the last coordinate pair carries the linear term.
    pub folded_linear: bool,
    by_role: HashMap<ArcRole, usize>,
}

struct Builder {
    nv: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, ArcInfo)>,
}

impl Builder {
    fn new(nv: usize, source: usize, sink: usize) -> Self {
        Builder { nv, source, sink, arcs: Vec::new() }
    }

    fn arc(&mut self, tail: usize, head: usize, role: ArcRole, fragment: Vec<EdgeId>) {
        self.arcs.push((tail, head, ArcInfo { role, fragment }));
    }

    fn finish(self, family: Family, graph: NeighborhoodGraph, model: &RankP) -> Result<ReductionMap> {
        let m = graph.graph().num_edges();
        if model.num_edges() != m {
            return Err(Error::ModelMismatch(format!("rank model over {} edges, graph has {m}", model.num_edges())));
        }
        let folded_linear = !model.is_homogeneous();
        let p = model.rank() + folded_linear as usize;
        let mut q = QsppInstance::new(self.nv, self.source, self.sink, p)?;
        let mut arcs = Vec::with_capacity(self.arcs.len());
        let mut by_role = HashMap::new();
        for (tail, head, info) in self.arcs {
            let sum = |w: &[i64]| info.fragment.iter().map(|e| w[e.0]).sum::<i64>();
            let mut alpha: Vec<i64> = (0..model.rank()).map(|h| sum(model.a(h))).collect();
            let mut beta: Vec<i64> = (0..model.rank()).map(|h| sum(model.b(h))).collect();
            if folded_linear {
                alpha.push(sum(model.c()));
                beta.push((tail == self.source) as i64);
            }
            alpha.extend(beta);
            let id = q.add_edge(tail, head, alpha)?;
            by_role.insert(info.role, id);
            arcs.push(info);
        }
        Ok(ReductionMap { family, graph, qspp: q, arcs, folded_linear, by_role })
    }
}

/// SEE on the layered graph: vertices `s`, then per cycle `V^k` and
/// `hat V^k`, then `t`.
pub fn see_to_qspp(g: &GStarGraph, model: &RankP) -> Result<ReductionMap> {
    let m = g.num_cycles();
    let mut base = Vec::with_capacity(m);
    let mut next = 1;
    for k in 0..m {
        base.push(next);
        next += 2 * g.cycle_len(k);
    }
    let sink = next;
    let plain = |k: usize, i: usize| base[k] + i % g.cycle_len(k);
    let hat = |k: usize, i: usize| base[k] + g.cycle_len(k) + i % g.cycle_len(k);
    let mut b = Builder::new(sink + 1, 0, sink);
    for i in 0..g.cycle_len(0) {
        b.arc(0, plain(0, i), ArcRole::SeeEnter { vertex: i }, vec![g.first_tip_edge(i)]);
    }
    for k in 0..m {
        let r = g.cycle_len(k);
        for i in 0..r {
            let j = (i + 1) % r;
            for pass in [CyclePass { entry: i, exit: j }, CyclePass { entry: j, exit: i }] {
                let fragment = g.ring_edges(k).filter(|&e| e != g.ring_edge(k, i)).collect();
                b.arc(plain(k, pass.entry), hat(k, pass.exit), ArcRole::SeePass { cycle: k, pass }, fragment);
            }
        }
        if k + 1 < m {
            for x in 0..r {
                for y in 0..g.cycle_len(k + 1) {
                    b.arc(hat(k, x), plain(k + 1, y), ArcRole::SeeLink { cycle: k, from: x, to: y }, vec![g.cross_edge(k, x, y)]);
                }
            }
        }
    }
    for i in 0..g.cycle_len(m - 1) {
        b.arc(hat(m - 1, i), sink, ArcRole::SeeLeave { vertex: i }, vec![g.last_tip_edge(i)]);
    }
    b.finish(Family::See, NeighborhoodGraph::GStar(g.clone()), model)
}

/// DEE on the layered graph: vertices `t_1`, per cycle `k < m` the ring
/// edges `E(k)` and their copies `hat E(k)`, the ring edges `E(m)`, `t_2`.
pub fn dee_to_qspp(g: &GStarGraph, model: &RankP) -> Result<ReductionMap> {
    let m = g.num_cycles();
    let mut entry_base = Vec::with_capacity(m);
    let mut exit_base = Vec::with_capacity(m);
    let mut next = 1;
    for k in 0..m {
        entry_base.push(next);
        next += g.cycle_len(k);
        if k + 1 < m {
            exit_base.push(next);
            next += g.cycle_len(k);
        }
    }
    let sink = next;
    let mut b = Builder::new(sink + 1, 0, sink);
    for i in 0..g.cycle_len(0) {
        b.arc(0, entry_base[0] + i, ArcRole::DeeTip { entry: i }, vec![g.first_tip_edge(i), g.first_tip_edge(i + 1)]);
    }
    for k in 0..m - 1 {
        let r = g.cycle_len(k);
        for i in 0..r {
            for j in (0..r).filter(|&j| j != i) {
                let fragment = (0..r).filter(|&x| x != i && x != j).map(|x| g.ring_edge(k, x)).collect();
                b.arc(entry_base[k] + i, exit_base[k] + j, ArcRole::DeeInside { cycle: k, entry: i, exit: j }, fragment);
            }
        }
        for j in 0..r {
            for s in 0..g.cycle_len(k + 1) {
                let straight = vec![g.cross_edge(k, j, s), g.cross_edge(k, j + 1, s + 1)];
                let crossed = vec![g.cross_edge(k, j, s + 1), g.cross_edge(k, j + 1, s)];
                for (cross, fragment) in [(false, straight), (true, crossed)] {
                    let junction = Junction { exit: j, next_entry: s, cross };
                    b.arc(exit_base[k] + j, entry_base[k + 1] + s, ArcRole::DeePatch { cycle: k, junction }, fragment);
                }
            }
        }
    }
    let last = m - 1;
    for s in 0..g.cycle_len(last) {
        let fragment = g.ring_edges(last).filter(|&e| e != g.ring_edge(last, s)).collect();
        b.arc(entry_base[last] + s, sink, ArcRole::DeeSink { entry: s }, fragment);
    }
    b.finish(Family::Dee, NeighborhoodGraph::GStar(g.clone()), model)
}

/// PV as a path on the pairs with a straight and a crossed arc per gap. The
/// first gap also carries `(v_1, v'_1)`, the last gap `(v_{n/2}, v'_{n/2})`.
pub fn pv_to_qspp(g: &PvGraph, model: &RankP) -> Result<ReductionMap> {
    let pairs = g.num_pairs();
    let gaps = g.num_gaps();
    let mut b = Builder::new(pairs, 0, pairs - 1);
    for k in 0..gaps {
        for cross in [false, true] {
            let mut fragment = g.gap_edges(k, cross).to_vec();
            if k == 0 {
                fragment.push(g.first_pair_edge());
            }
            if k + 1 == gaps {
                fragment.push(g.last_pair_edge());
            }
            b.arc(k, k + 1, ArcRole::PvGap { gap: k, cross }, fragment);
        }
    }
    b.finish(Family::Pv, NeighborhoodGraph::Pv(g.clone()), model)
}

/// Dispatch on the family.
pub fn reduce(graph: &NeighborhoodGraph, family: Family, model: &RankP) -> Result<ReductionMap> {
    match (graph, family) {
        (NeighborhoodGraph::GStar(g), Family::See) => see_to_qspp(g, model),
        (NeighborhoodGraph::GStar(g), Family::Dee) => dee_to_qspp(g, model),
        (NeighborhoodGraph::Pv(g), Family::Pv) => pv_to_qspp(g, model),
        _ => Err(Error::Unsupported(format!("no QSPP reduction for family {family}"))),
    }
}

impl ReductionMap {
    fn foreign(msg: &str) -> Error {
        Error::ForeignPath(msg.to_string())
    }

    /// The tour whose fragments make up `path`.
    pub fn path_to_tour(&self, path: &[usize]) -> Result<Tour> {
        self.qspp.path_sums(path)?;
        let roles = path.iter().map(|&e| self.arcs[e].role);
        match &self.graph {
            NeighborhoodGraph::GStar(g) if self.family == Family::See => {
                let passes: Vec<CyclePass> = roles
                    .filter_map(|r| match r {
                        ArcRole::SeePass { pass, .. } => Some(pass),
                        _ => None,
                    })
                    .collect();
                g.see_tour(&SeeChoice { passes })
            }
            NeighborhoodGraph::GStar(g) => {
                let mut first_entry = None;
                let mut junctions = Vec::new();
                for r in roles {
                    match r {
                        ArcRole::DeeTip { entry } => first_entry = Some(entry),
                        ArcRole::DeePatch { junction, .. } => junctions.push(junction),
                        _ => {}
                    }
                }
                let first_entry = first_entry.ok_or_else(|| Self::foreign("no tip arc"))?;
                g.dee_tour(&DeeChoice { first_entry, junctions })
            }
            NeighborhoodGraph::Pv(g) => {
                let cross = roles
                    .map(|r| match r {
                        ArcRole::PvGap { cross, .. } => Ok(cross),
                        _ => Err(Self::foreign("not a gap arc")),
                    })
                    .collect::<Result<_>>()?;
                g.tour(&PvChoice { cross })
            }
            NeighborhoodGraph::Mee(_) => Err(Self::foreign("no MEE reduction")),
        }
    }

    /// The s-t path of `tour`, or `InvalidTour` if it is not in the family.
    pub fn tour_to_path(&self, tour: &Tour) -> Result<Vec<usize>> {
        let not_member = || Error::InvalidTour(format!("not a {} tour of this graph", self.family));
        let mut roles = Vec::new();
        match &self.graph {
            NeighborhoodGraph::GStar(g) if self.family == Family::See => {
                let choice = g.decode_see(tour).ok_or_else(not_member)?;
                let m = choice.passes.len();
                roles.push(ArcRole::SeeEnter { vertex: choice.passes[0].entry });
                for (k, &pass) in choice.passes.iter().enumerate() {
                    roles.push(ArcRole::SeePass { cycle: k, pass });
                    if k + 1 < m {
                        roles.push(ArcRole::SeeLink { cycle: k, from: pass.exit, to: choice.passes[k + 1].entry });
                    }
                }
                roles.push(ArcRole::SeeLeave { vertex: choice.passes[m - 1].exit });
            }
            NeighborhoodGraph::GStar(g) => {
                let choice = g.decode_dee(tour).ok_or_else(not_member)?;
                roles.push(ArcRole::DeeTip { entry: choice.first_entry });
                let mut entry = choice.first_entry;
                for (k, &junction) in choice.junctions.iter().enumerate() {
                    roles.push(ArcRole::DeeInside { cycle: k, entry, exit: junction.exit });
                    roles.push(ArcRole::DeePatch { cycle: k, junction });
                    entry = junction.next_entry;
                }
                roles.push(ArcRole::DeeSink { entry });
            }
            NeighborhoodGraph::Pv(g) => {
                let choice = g.decode(tour).ok_or_else(not_member)?;
                roles.extend(choice.cross.iter().enumerate().map(|(gap, &cross)| ArcRole::PvGap { gap, cross }));
            }
            NeighborhoodGraph::Mee(_) => return Err(not_member()),
        }
        roles
            .into_iter()
            .map(|r| self.by_role.get(&r).copied().ok_or_else(|| Error::Invariant(format!("no arc for {r:?}"))))
            .collect()
    }
}

/// Which QSPP solver to run behind a reduction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum QsppMethod {
    Exact,
    Fptas(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSolution {
    pub value: i64,
    pub tour: Tour,
    pub qspp: QsppSolution,
}

/// Reduce, solve, map back; the tour's own objective must equal the path's.
pub fn solve_rank(graph: &NeighborhoodGraph, family: Family, model: &RankP, method: QsppMethod) -> Result<ReducedSolution> {
    let map = reduce(graph, family, model)?;
    let sol = match method {
        QsppMethod::Exact => qspp::solve_exact(&map.qspp)?,
        QsppMethod::Fptas(eps) => qspp::solve_fptas(&map.qspp, eps)?,
    };
    let tour = map.path_to_tour(&sol.path)?;
    let value = crate::model::eval_rank(&tour, graph.graph(), model)?;
    if value != sol.value {
        return Err(Error::Invariant(format!("tour costs {value}, its path {}", sol.value)));
    }
    Ok(ReducedSolution { value, tour, qspp: sol })
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::model::eval_rank;

    fn random_rank(m: usize, p: usize, linear: bool, rng: &mut ChaCha8Rng) -> RankP {
        let mut f = || (0..m).map(|_| rng.gen_range(-5..=5)).collect::<Vec<i64>>();
        let a = (0..p).map(|_| f()).collect();
        let b = (0..p).map(|_| f()).collect();
        let c = if linear { f() } else { vec![0; m] };
        RankP::new(a, b, c).unwrap()
    }

    fn check_bijection(map: &ReductionMap, model: &RankP) {
        let tours: Vec<Tour> = map.graph.tours(map.family).unwrap().collect();
        let paths = map.qspp.enumerate_paths(1 << 20).unwrap();
        assert_eq!(paths.len(), tours.len());
        let mut image = HashSet::new();
        for path in &paths {
            let t = map.path_to_tour(path).unwrap();
            assert_eq!(&map.tour_to_path(&t).unwrap(), path);
            assert_eq!(map.qspp.path_objective(path).unwrap(), eval_rank(&t, map.graph.graph(), model).unwrap());
            image.insert(t);
        }
        assert_eq!(image.len(), tours.len());
        for t in &tours {
            assert!(image.contains(t));
        }
    }

    #[test]
    fn see_figure_graph_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = GStarGraph::new(&[4, 3, 5]).unwrap();
        let model = random_rank(g.graph().num_edges(), 2, true, &mut rng);
        let map = see_to_qspp(&g, &model).unwrap();
        assert_eq!(map.arcs.iter().filter(|a| matches!(a.role, ArcRole::SeePass { cycle: 1, .. })).count(), 6);
        assert_eq!(qspp::prune_and_order(&map.qspp).unwrap().vertex_origin.len(), map.qspp.num_vertices());
        check_bijection(&map, &model);
    }

    #[test]
    fn dee_bijection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for cycles in [vec![3, 3], vec![4, 3], vec![3, 3, 3]] {
            let g = GStarGraph::new(&cycles).unwrap();
            let model = random_rank(g.graph().num_edges(), 1, true, &mut rng);
            check_bijection(&dee_to_qspp(&g, &model).unwrap(), &model);
        }
    }

    #[test]
    fn pv_shape_and_bijection() {
        let g = PvGraph::new(12).unwrap();
        let map = pv_to_qspp(&g, &RankP::linear(vec![0; g.graph().num_edges()])).unwrap();
        assert_eq!((map.qspp.num_vertices(), map.qspp.num_edges()), (6, 10));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [4, 8] {
            let g = PvGraph::new(n).unwrap();
            let model = random_rank(g.graph().num_edges(), 2, true, &mut rng);
            check_bijection(&pv_to_qspp(&g, &model).unwrap(), &model);
        }
    }

    #[test]
    fn zero_model_gives_zero() {
        let g = GStarGraph::new(&[3, 4]).unwrap();
        let m = g.graph().num_edges();
        let zero = RankP::homogeneous(vec![vec![0; m]], vec![vec![0; m]]).unwrap();
        let map = see_to_qspp(&g, &zero).unwrap();
        for path in map.qspp.enumerate_paths(1 << 20).unwrap() {
            assert_eq!(map.qspp.path_objective(&path).unwrap(), 0);
        }
    }

    #[test]
    fn foreign_path_is_rejected() {
        let g = PvGraph::new(6).unwrap();
        let map = pv_to_qspp(&g, &RankP::linear(vec![1; g.graph().num_edges()])).unwrap();
        assert!(matches!(map.path_to_tour(&[0]), Err(Error::ForeignPath(_))));
        assert!(matches!(map.path_to_tour(&[2, 0]), Err(Error::ForeignPath(_))));
    }
}
