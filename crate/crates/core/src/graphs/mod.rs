//! The three neighborhood graph families and exhaustive generators for their
//! tour families.
//!
//! Each family exposes a *choice* type (the combinatorial data that pins
//! down one tour), a builder from choices to tours, a structural decoder
//! from tours back to choices, and a lazy stream over all choices in
//! lexicographic order.

mod gstar;
mod mee;
mod pv;

pub use gstar::{CyclePass, DeeChoice, DeeCountReport, DeeTours, GStarGraph, Junction, SeeChoice, SeeTours};
pub use mee::{MeeChoice, MeeGraph, MeeTours};
pub use pv::{PvChoice, PvGraph, PvTours};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Graph, Tour};

/// Tour neighborhood.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    See,
    Dee,
    Pv,
    Mee,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::See => "see",
            Family::Dee => "dee",
            Family::Pv => "pv",
            Family::Mee => "mee",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "see" => Ok(Family::See),
            "dee" => Ok(Family::Dee),
            "pv" => Ok(Family::Pv),
            "mee" => Ok(Family::Mee),
            other => Err(Error::Unsupported(format!("unknown family {other:?}"))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Any of the three special graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeighborhoodGraph {
    GStar(GStarGraph),
    Pv(PvGraph),
    Mee(MeeGraph),
}

impl NeighborhoodGraph {
    pub fn graph(&self) -> &Graph {
        match self {
            NeighborhoodGraph::GStar(g) => g.graph(),
            NeighborhoodGraph::Pv(g) => g.graph(),
            NeighborhoodGraph::Mee(g) => g.graph(),
        }
    }

    /// Whether `family` is defined on this kind of graph.
    pub fn supports(&self, family: Family) -> bool {
        matches!(
            (self, family),
            (NeighborhoodGraph::GStar(_), Family::See)
                | (NeighborhoodGraph::GStar(_), Family::Dee)
                | (NeighborhoodGraph::Pv(_), Family::Pv)
                | (NeighborhoodGraph::Mee(_), Family::Mee)
        )
    }

    /// Lazy stream over every tour of `family`.
    pub fn tours(&self, family: Family) -> Result<Box<dyn Iterator<Item = Tour> + '_>> {
        match (self, family) {
            (NeighborhoodGraph::GStar(g), Family::See) => Ok(Box::new(g.see_tours())),
            (NeighborhoodGraph::GStar(g), Family::Dee) => Ok(Box::new(g.dee_tours())),
            (NeighborhoodGraph::Pv(g), Family::Pv) => Ok(Box::new(g.tours())),
            (NeighborhoodGraph::Mee(g), Family::Mee) => Ok(Box::new(g.tours())),
            _ => Err(mismatch(family)),
        }
    }

    /// Structural family-membership test (no enumeration).
    pub fn is_member(&self, family: Family, tour: &Tour) -> Result<bool> {
        match (self, family) {
            (NeighborhoodGraph::GStar(g), Family::See) => Ok(g.decode_see(tour).is_some()),
            (NeighborhoodGraph::GStar(g), Family::Dee) => Ok(g.decode_dee(tour).is_some()),
            (NeighborhoodGraph::Pv(g), Family::Pv) => Ok(g.decode(tour).is_some()),
            (NeighborhoodGraph::Mee(g), Family::Mee) => Ok(g.decode(tour).is_some()),
            _ => Err(mismatch(family)),
        }
    }
}

fn mismatch(family: Family) -> Error {
    Error::ModelMismatch(format!("family {family} is not defined on this graph"))
}

/// Number of tours of `family` on `g`.
///
/// SEE, PV and MEE use their closed forms. For DEE the count is the exact
/// size of the generated family; see [`GStarGraph::dee_count_report`] for
/// the comparison with the published closed form.
pub fn count_family(g: &NeighborhoodGraph, family: Family) -> Result<u128> {
    match (g, family) {
        (NeighborhoodGraph::GStar(g), Family::See) => Ok(g.see_count()),
        (NeighborhoodGraph::GStar(g), Family::Dee) => Ok(g.dee_count()),
        (NeighborhoodGraph::Pv(g), Family::Pv) => Ok(g.count()),
        (NeighborhoodGraph::Mee(g), Family::Mee) => Ok(g.count()),
        _ => Err(mismatch(family)),
    }
}

/// Mixed-radix counter, most significant digit first.
#[derive(Clone, Debug)]
pub(crate) struct Odometer {
    radices: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Odometer {
    pub(crate) fn new(radices: Vec<usize>) -> Self {
        let current = if radices.iter().any(|&r| r == 0) { None } else { Some(vec![0; radices.len()]) };
        Odometer { radices, current }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let mut digits = out.clone();
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < self.radices[pos] {
                self.current = Some(digits);
                break;
            }
            digits[pos] = 0;
        }
        Some(out)
    }
}
