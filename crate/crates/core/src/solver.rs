//! One entry point over every solver, with the `auto` routing table:
//!
//! | costs                  | family        | solver                     |
//! |------------------------|---------------|----------------------------|
//! | linear                 | PV            | greedy                     |
//! | linear                 | MEE           | matching                   |
//! | rank (incl. linear)    | SEE, DEE, PV  | reduction + exact QSPP     |
//! | adjacent               | SEE, DEE, PV  | adjacent dynamic program   |
//! | anything else          | any           | oracle, if under the cap   |
//!
//! `auto` never picks an approximate solver.

use std::str::FromStr;

use serde::Serialize;

use crate::adjacent::{solve_adjacent_dee, solve_adjacent_pv, solve_adjacent_see, solve_linear_pv};
use crate::error::{Error, Result};
use crate::graphs::{Family, NeighborhoodGraph};
use crate::instance::{Instance, TourSolution};
use crate::matching::{solve_linear_mee, solve_rank1_mee_fptas};
use crate::model::{CostModel, RankP};
use crate::oracle::oracle_tour_capped;
use crate::reductions::{solve_rank, QsppMethod};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Auto,
    ExactDp,
    AdjacentDp,
    Matching,
    Fptas,
    Oracle,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Auto => "auto",
            SolverKind::ExactDp => "exact-dp",
            SolverKind::AdjacentDp => "adjacent-dp",
            SolverKind::Matching => "matching",
            SolverKind::Fptas => "fptas",
            SolverKind::Oracle => "oracle",
        }
    }

    pub const ALL: [SolverKind; 6] = [
        SolverKind::Auto,
        SolverKind::ExactDp,
        SolverKind::AdjacentDp,
        SolverKind::Matching,
        SolverKind::Fptas,
        SolverKind::Oracle,
    ];
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown solver {s:?}")))
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solved {
    /// The solver that actually ran (never `auto`).
    pub solver: SolverKind,
    pub value: i64,
    pub tour: crate::model::Tour,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub eps: f64,
    pub oracle_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { eps: 0.1, oracle_cap: crate::oracle::DEFAULT_TOUR_CAP }
    }
}

/// What `auto` would run on `inst`.
pub fn route(inst: &Instance) -> SolverKind {
    let fam = inst.family;
    match &inst.costs {
        CostModel::Rank(r) if r.rank() == 0 && matches!(fam, Family::Pv | Family::Mee) => {
            if fam == Family::Pv {
                SolverKind::ExactDp
            } else {
                SolverKind::Matching
            }
        }
        CostModel::Rank(_) if fam != Family::Mee => SolverKind::ExactDp,
        CostModel::Adjacent(_) if fam != Family::Mee => SolverKind::AdjacentDp,
        _ => SolverKind::Oracle,
    }
}

fn mismatch(kind: SolverKind, inst: &Instance) -> Error {
    Error::Unsupported(format!("solver {kind} does not handle {} costs on {}", inst.costs.name(), inst.family))
}

pub fn solve(inst: &Instance, kind: SolverKind, opts: &SolveOptions) -> Result<Solved> {
    let kind = if kind == SolverKind::Auto { route(inst) } else { kind };
    let g = &inst.graph;
    let fam = inst.family;
    let sol: TourSolution = match (kind, &inst.costs, g) {
        (SolverKind::ExactDp, CostModel::Rank(r), NeighborhoodGraph::Pv(pv)) if r.rank() == 0 => {
            solve_linear_pv(pv, r.c())?
        }
        (SolverKind::ExactDp, CostModel::Rank(r), _) if fam != Family::Mee => rank(g, fam, r, QsppMethod::Exact)?,
        (SolverKind::AdjacentDp, CostModel::Adjacent(q), NeighborhoodGraph::GStar(gs)) => match fam {
            Family::See => solve_adjacent_see(gs, q)?,
            _ => solve_adjacent_dee(gs, q)?,
        },
        (SolverKind::AdjacentDp, CostModel::Adjacent(q), NeighborhoodGraph::Pv(pv)) => solve_adjacent_pv(pv, q)?,
        (SolverKind::Matching, CostModel::Rank(r), NeighborhoodGraph::Mee(mee)) if r.rank() == 0 => {
            solve_linear_mee(mee, r.c())?
        }
        (SolverKind::Fptas, CostModel::Rank(r), NeighborhoodGraph::Mee(mee)) if r.rank() == 1 && r.is_homogeneous() => {
            solve_rank1_mee_fptas(mee, r.a(0), r.b(0), opts.eps)?
        }
        (SolverKind::Fptas, CostModel::Rank(r), _) if fam != Family::Mee => rank(g, fam, r, QsppMethod::Fptas(opts.eps))?,
        (SolverKind::Oracle, _, _) => oracle_tour_capped(inst, opts.oracle_cap)?,
        _ => return Err(mismatch(kind, inst)),
    };
    let actual = inst.eval(&sol.tour)?;
    if actual != sol.value {
        return Err(Error::Invariant(format!("{kind} reports {}, its tour costs {actual}", sol.value)));
    }
    Ok(Solved { solver: kind, value: sol.value, tour: sol.tour })
}

fn rank(g: &NeighborhoodGraph, fam: Family, r: &RankP, method: QsppMethod) -> Result<TourSolution> {
    let s = solve_rank(g, fam, r, method)?;
    Ok(TourSolution { value: s.value, tour: s.tour })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graphs::{GStarGraph, MeeGraph, PvGraph};
    use crate::reductions::generators::{random_adjacent, random_full, random_linear, random_rank};

    #[test]
    fn auto_routes_and_agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let gs = NeighborhoodGraph::GStar(GStarGraph::new(&[3, 4]).unwrap());
        let pv = NeighborhoodGraph::Pv(PvGraph::new(8).unwrap());
        let mee = NeighborhoodGraph::Mee(MeeGraph::new(5, 3).unwrap());
        let cases = [
            (gs.clone(), Family::See, CostModel::Rank(random_rank(gs.graph(), 2, -5, 5, true, &mut rng)), SolverKind::ExactDp),
            (gs.clone(), Family::Dee, CostModel::Adjacent(random_adjacent(gs.graph(), 0, 9, &mut rng)), SolverKind::AdjacentDp),
            (pv.clone(), Family::Pv, CostModel::Rank(random_linear(pv.graph(), -5, 5, &mut rng)), SolverKind::ExactDp),
            (mee.clone(), Family::Mee, CostModel::Rank(random_linear(mee.graph(), -5, 5, &mut rng)), SolverKind::Matching),
            (mee.clone(), Family::Mee, CostModel::Full(random_full(mee.graph(), -5, 5, &mut rng)), SolverKind::Oracle),
        ];
        let opts = SolveOptions::default();
        for (g, fam, costs, want) in cases {
            let inst = Instance::new(g, fam, costs).unwrap();
            assert_eq!(route(&inst), want);
            let got = solve(&inst, SolverKind::Auto, &opts).unwrap();
            assert_eq!(got.solver, want);
            assert_eq!(got.value, solve(&inst, SolverKind::Oracle, &opts).unwrap().value);
        }
    }

    #[test]
    fn incompatible_and_capped() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let g = NeighborhoodGraph::Pv(PvGraph::new(6).unwrap());
        let q = CostModel::Adjacent(random_adjacent(g.graph(), 0, 9, &mut rng));
        let inst = Instance::new(g, Family::Pv, q).unwrap();
        let opts = SolveOptions::default();
        assert!(matches!(solve(&inst, SolverKind::Matching, &opts), Err(Error::Unsupported(_))));
        assert!(matches!(solve(&inst, SolverKind::ExactDp, &opts), Err(Error::Unsupported(_))));
        let tight = SolveOptions { oracle_cap: 1, ..opts };
        assert!(matches!(solve(&inst, SolverKind::Oracle, &tight), Err(Error::CapExceeded { .. })));
        assert_eq!("adjacent-dp".parse::<SolverKind>().unwrap(), SolverKind::AdjacentDp);
    }
}
