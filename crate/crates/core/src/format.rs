//! The JSON instance file.
//!
//! ```json
//! {
//!   "costs": {"c": [...], "model": "linear"},
//!   "family": "pv",
//!   "graph": {"pv": {"n": 6}},
//!   "meta": {"seed": 7}
//! }
//! ```
//!
//! Cost arrays follow canonical edge order. Adjacent costs are `[u, v, w,
//! q]` rows with `v` the centre, one per 2-path. Only integers are
//! accepted. Rendering is canonical: keys sorted, one line per member,
//! scalar arrays inline.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graphs::{Family, GStarGraph, MeeGraph, NeighborhoodGraph, PvGraph};
use crate::instance::Instance;
use crate::model::{AdjacentCosts, CostModel, FullQuadratic, RankP, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GraphSpec {
    Gstar { cycles: Vec<usize> },
    Pv { n: usize },
    Mee { r: usize, s: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum CostSpec {
    Full { q: Vec<Vec<i64>>, c: Vec<i64> },
    Rank { a: Vec<Vec<i64>>, b: Vec<Vec<i64>>, c: Vec<i64> },
    Linear { c: Vec<i64> },
    Adjacent { triples: Vec<(usize, usize, usize, i64)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    graph: GraphSpec,
    family: Family,
    costs: CostSpec,
    #[serde(default)]
    meta: Value,
}

/// An instance plus free-form provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub meta: Value,
}

pub fn graph_spec(g: &NeighborhoodGraph) -> GraphSpec {
    match g {
        NeighborhoodGraph::GStar(g) => GraphSpec::Gstar { cycles: g.cycles().to_vec() },
        NeighborhoodGraph::Pv(g) => GraphSpec::Pv { n: g.n() },
        NeighborhoodGraph::Mee(g) => GraphSpec::Mee { r: g.r(), s: g.s() },
    }
}

pub fn build_graph(spec: &GraphSpec) -> Result<NeighborhoodGraph> {
    Ok(match spec {
        GraphSpec::Gstar { cycles } => NeighborhoodGraph::GStar(GStarGraph::new(cycles)?),
        GraphSpec::Pv { n } => NeighborhoodGraph::Pv(PvGraph::new(*n)?),
        GraphSpec::Mee { r, s } => NeighborhoodGraph::Mee(MeeGraph::new(*r, *s)?),
    })
}

pub fn cost_spec(costs: &CostModel) -> CostSpec {
    match costs {
        CostModel::Full(f) => CostSpec::Full { q: f.rows(), c: f.linear().to_vec() },
        CostModel::Rank(r) if r.rank() == 0 => CostSpec::Linear { c: r.c().to_vec() },
        CostModel::Rank(r) => CostSpec::Rank {
            a: (0..r.rank()).map(|h| r.a(h).to_vec()).collect(),
            b: (0..r.rank()).map(|h| r.b(h).to_vec()).collect(),
            c: r.c().to_vec(),
        },
        CostModel::Adjacent(q) => CostSpec::Adjacent {
            triples: q.sorted_entries().into_iter().map(|(u, v, w, x)| (u.0, v.0, w.0, x)).collect(),
        },
    }
}

pub fn build_costs(spec: CostSpec) -> Result<CostModel> {
    Ok(match spec {
        CostSpec::Full { q, c } => CostModel::Full(FullQuadratic::from_rows(q, c)?),
        CostSpec::Rank { a, b, c } => CostModel::Rank(RankP::new(a, b, c)?),
        CostSpec::Linear { c } => CostModel::Rank(RankP::linear(c)),
        CostSpec::Adjacent { triples } => {
            let mut q = AdjacentCosts::new();
            for (u, v, w, x) in triples {
                let (u, v, w) = (VertexId(u), VertexId(v), VertexId(w));
                if q.get(u, v, w).is_some() {
                    return Err(Error::Format(format!("2-path {u}-{v}-{w} given twice")));
                }
                q.set(u, v, w, x);
            }
            CostModel::Adjacent(q)
        }
    })
}

impl InstanceFile {
    pub fn new(instance: Instance, meta: Value) -> Self {
        InstanceFile { instance, meta }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let graph = build_graph(&raw.graph)?;
        let costs = build_costs(raw.costs)?;
        Ok(InstanceFile { instance: Instance::new(graph, raw.family, costs)?, meta: raw.meta })
    }

    pub fn render(&self) -> String {
        let raw = RawFile {
            graph: graph_spec(&self.instance.graph),
            family: self.instance.family,
            costs: cost_spec(&self.instance.costs),
            meta: self.meta.clone(),
        };
        let value = serde_json::to_value(raw).expect("plain data serializes");
        let mut out = String::new();
        write_value(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(m) => m.is_empty(),
        _ => true,
    }
}

/// Pretty printer that keeps arrays of scalars on one line; keeps
/// `q` matrices and triple lists to one line per row.
fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(xs) if is_flat(v) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use serde_json::json;

    use super::*;
    use crate::reductions::generators::{random_adjacent, random_full, random_rank};

    fn roundtrip(inst: Instance) {
        let file = InstanceFile::new(inst, json!({"seed": 3, "source": "test"}));
        let text = file.render();
        let back = InstanceFile::parse(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn every_model_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let gs = GStarGraph::new(&[3, 4]).unwrap();
        let pv = PvGraph::new(6).unwrap();
        let mee = MeeGraph::new(4, 3).unwrap();
        let full = random_full(gs.graph(), -3, 3, &mut rng);
        let rank = random_rank(pv.graph(), 2, -5, 5, true, &mut rng);
        let lin = RankP::linear(vec![1; mee.graph().num_edges()]);
        let adj = random_adjacent(gs.graph(), 0, 9, &mut rng);
        roundtrip(Instance::new(NeighborhoodGraph::GStar(gs.clone()), Family::Dee, CostModel::Full(full)).unwrap());
        roundtrip(Instance::new(NeighborhoodGraph::Pv(pv), Family::Pv, CostModel::Rank(rank)).unwrap());
        roundtrip(Instance::new(NeighborhoodGraph::Mee(mee), Family::Mee, CostModel::Rank(lin)).unwrap());
        roundtrip(Instance::new(NeighborhoodGraph::GStar(gs), Family::See, CostModel::Adjacent(adj)).unwrap());
    }

    #[test]
    fn rejects_bad_files() {
        let ok = r#"{"graph": {"pv": {"n": 4}}, "family": "pv", "costs": {"model": "linear", "c": [1, 2, 3, 4, 5, 6]}}"#;
        assert!(InstanceFile::parse(ok).is_ok());
        let float = ok.replace("[1, 2", "[1.5, 2");
        assert!(matches!(InstanceFile::parse(&float), Err(Error::Format(_))));
        let short = ok.replace(", 6]", "]");
        assert!(matches!(InstanceFile::parse(&short), Err(Error::ModelMismatch(_))));
        let family = ok.replace("\"family\": \"pv\"", "\"family\": \"see\"");
        assert!(InstanceFile::parse(&family).is_err());
        let extra = ok.replace("\"family\"", "\"extra\": 1, \"family\"");
        assert!(InstanceFile::parse(&extra).is_err());
    }

    #[test]
    fn adjacent_must_be_total() {
        let g = GStarGraph::new(&[3, 3]).unwrap();
        let q = AdjacentCosts::from_fn(g.graph(), |_, _, _| 1);
        let inst = Instance::new(NeighborhoodGraph::GStar(g), Family::See, CostModel::Adjacent(q)).unwrap();
        let text = InstanceFile::new(inst, Value::Null).render();
        let mut lines: Vec<&str> = text.lines().collect();
        let i = lines.iter().position(|l| l.trim_start().starts_with('[') && l.contains(", 1]")).unwrap();
        lines.remove(i);
        let broken = lines.join("\n");
        assert!(matches!(InstanceFile::parse(&broken), Err(Error::MissingTriple { .. })));
    }
}
