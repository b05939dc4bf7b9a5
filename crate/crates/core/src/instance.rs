//! An instance ties a neighborhood graph, the tour family searched over it
//! and a cost model together.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{count_family, Family, NeighborhoodGraph};
use crate::model::{CostModel, Tour};

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: NeighborhoodGraph,
    pub family: Family,
    pub costs: CostModel,
}

impl Instance {
    /// Checks family support and cost-array sizes.
    pub fn new(graph: NeighborhoodGraph, family: Family, costs: CostModel) -> Result<Self> {
        if !graph.supports(family) {
            return Err(Error::ModelMismatch(format!("family {family} is not defined on this graph")));
        }
        costs.check_against(graph.graph())?;
        Ok(Instance { graph, family, costs })
    }

    pub fn eval(&self, tour: &Tour) -> Result<i64> {
        self.costs.eval(tour, self.graph.graph())
    }

    pub fn count(&self) -> Result<u128> {
        count_family(&self.graph, self.family)
    }

    pub fn tours(&self) -> Result<Box<dyn Iterator<Item = Tour> + '_>> {
        self.graph.tours(self.family)
    }
}

/// An optimal (or approximate) tour and its objective value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TourSolution {
    pub value: i64,
    pub tour: Tour,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TourReport {
    pub hamiltonian: bool,
    /// `None` when the tour is not Hamiltonian (membership is then moot).
    pub member: Option<bool>,
    pub family: Family,
    pub problems: Vec<String>,
}

impl TourReport {
    pub fn ok(&self) -> bool {
        self.hamiltonian && self.member == Some(true)
    }
}

/// Hamiltonicity in the instance graph plus structural family membership.
pub fn validate_tour(tour: &Tour, instance: &Instance) -> TourReport {
    let g = instance.graph.graph();
    let n = g.num_vertices();
    let mut problems = Vec::new();
    if tour.len() != n {
        problems.push(format!("tour has {} vertices, graph has {n}", tour.len()));
    }
    let mut seen = vec![false; n];
    for &v in tour.vertices() {
        if v.0 >= n {
            problems.push(format!("vertex {v} is not in the graph"));
        } else if std::mem::replace(&mut seen[v.0], true) {
            problems.push(format!("vertex {v} is visited twice"));
        }
    }
    for (u, v) in tour.links() {
        if u.0 < n && v.0 < n && g.edge_between(u, v).is_none() {
            problems.push(format!("{u}-{v} is not an edge"));
        }
    }
    let hamiltonian = problems.is_empty();
    let member = if hamiltonian {
        let m = instance.graph.is_member(instance.family, tour).unwrap_or(false);
        if !m {
            problems.push(format!("not a {} tour", instance.family));
        }
        Some(m)
    } else {
        None
    };
    TourReport { hamiltonian, member, family: instance.family, problems }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::GStarGraph;
    use crate::model::RankP;

    fn see_instance() -> Instance {
        let g = GStarGraph::new(&[3, 3]).unwrap();
        let m = g.graph().num_edges();
        Instance::new(NeighborhoodGraph::GStar(g), Family::See, CostModel::Rank(RankP::linear(vec![0; m]))).unwrap()
    }

    #[test]
    fn enumerated_tour_is_member() {
        let inst = see_instance();
        let t = inst.tours().unwrap().next().unwrap();
        assert!(validate_tour(&t, &inst).ok());
    }

    #[test]
    fn dee_tour_is_not_see() {
        let inst = see_instance();
        let NeighborhoodGraph::GStar(g) = &inst.graph else { unreachable!() };
        let dee = g.dee_tours().next().unwrap();
        let report = validate_tour(&dee, &inst);
        assert!(report.hamiltonian);
        assert_eq!(report.member, Some(false));
        assert!(!inst.tours().unwrap().any(|t| t == dee));
    }

    #[test]
    fn repeated_vertex_is_not_hamiltonian() {
        let inst = see_instance();
        let t = Tour::from_indices(&[0, 1, 2, 3, 1, 4, 5]).unwrap();
        let report = validate_tour(&t, &inst);
        assert!(!report.hamiltonian);
        assert_eq!(report.member, None);
    }
}
