//! JSON and DOT formats.
//!
//! Maps keyed by vertex or edge id are written in declaration order, so
//! output is byte-stable. Big integers are written as JSON numbers when they
//! fit in 64 bits and as decimal strings otherwise; readers accept both.

use std::fmt::Write as _;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arithmetic::{ComponentGroup, FiberComponent, FiberNode, SpecialFiberDescription};
use crate::bernardi::{Root, SubweightedTree};
use crate::divisor::{Divisor, EquivalenceCertificate};
use crate::error::{Error, Result};
use crate::graph::{Edge, HalfEdge, Vertex, WeightedGraph};
use crate::hat::HatGraph;
use crate::picard::AbelianGroupStructure;

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: String,
    weight: u64,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    ends: [String; 2],
    weight: u64,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ribbon: Option<IndexMap<String, Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct ComponentJson {
    id: String,
    index: u64,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: String,
    ends: [String; 2],
    degree: u64,
}

#[derive(Serialize, Deserialize)]
struct FiberJson {
    components: Vec<ComponentJson>,
    #[serde(default)]
    nodes: Vec<NodeJson>,
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::structural(format!("{n} is not an integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::structural(format!("{s:?} is not an integer"))),
        other => Err(Error::structural(format!("expected an integer, got {other}"))),
    }
}

fn vertex_id(g: &WeightedGraph, id: &str) -> Result<usize> {
    g.vertex_index(id)
        .ok_or_else(|| Error::structural(format!("unknown vertex {id}")))
}

fn edge_id(g: &WeightedGraph, id: &str) -> Result<usize> {
    g.edge_index(id)
        .ok_or_else(|| Error::structural(format!("unknown edge {id}")))
}

// ---------------------------------------------------------------- graphs

/// Reads a graph. Vertices missing from a given ribbon keep the default
/// order; unknown fields (such as `copy_of` on expanded graphs) are ignored.
pub fn graph_from_str(s: &str) -> Result<WeightedGraph> {
    let gj: GraphJson = serde_json::from_str(s)?;
    let vertices: Vec<Vertex> = gj
        .vertices
        .into_iter()
        .map(|v| Vertex {
            label: v.id,
            weight: v.weight,
        })
        .collect();
    let index = |id: &str| {
        vertices
            .iter()
            .position(|v| v.label == id)
            .ok_or_else(|| Error::structural(format!("edge endpoint {id} is not a vertex")))
    };
    let mut edges = Vec::with_capacity(gj.edges.len());
    for e in gj.edges {
        let ends = [index(&e.ends[0])?, index(&e.ends[1])?];
        edges.push(Edge {
            label: e.id,
            ends,
            weight: e.weight,
        });
    }
    let plain = WeightedGraph::new(vertices.clone(), edges.clone(), None)?;
    let Some(rj) = gj.ribbon else {
        return Ok(plain);
    };
    let mut ribbon = plain.ribbons().to_vec();
    for (vid, labels) in rj {
        let v = vertex_id(&plain, &vid)?;
        ribbon[v] = labels
            .iter()
            .map(|l| {
                plain.parse_half_edge(v, l).ok_or_else(|| {
                    Error::structural(format!("ribbon of {vid}: {l} is not a half-edge at {vid}"))
                })
            })
            .collect::<Result<_>>()?;
    }
    WeightedGraph::new(vertices, edges, Some(ribbon))
}

pub fn graph_to_json(g: &WeightedGraph) -> Value {
    let mut ribbon = IndexMap::new();
    for (v, order) in g.ribbons().iter().enumerate() {
        ribbon.insert(
            g.vertex(v).label.clone(),
            order.iter().map(|&h| g.half_edge_label(h)).collect::<Vec<_>>(),
        );
    }
    let gj = GraphJson {
        vertices: g
            .vertices()
            .iter()
            .map(|v| VertexJson {
                id: v.label.clone(),
                weight: v.weight,
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                id: e.label.clone(),
                ends: e.ends.map(|x| g.vertex(x).label.clone()),
                weight: e.weight,
            })
            .collect(),
        ribbon: Some(ribbon),
    };
    serde_json::to_value(gj).expect("graph serializes")
}

/// The expanded graph with `copy_of` mapping each copy to its original edge.
pub fn hat_to_json(g: &WeightedGraph, hat: &HatGraph) -> Value {
    let mut v = graph_to_json(&hat.graph);
    let copy_of: IndexMap<String, Value> = hat
        .copy_of
        .iter()
        .enumerate()
        .map(|(c, &(e, k))| (hat.graph.edge(c).label.clone(), json!([g.edge(e).label, k])))
        .collect();
    v["copy_of"] = json!(copy_of);
    v
}

/// A plain-text graph description for external renderers.
pub fn graph_to_dot(g: &WeightedGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {:?} [label={:?}];", v.label, format!("{} ({})", v.label, v.weight));
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {:?} -- {:?} [label={:?}];",
            g.vertex(e.ends[0]).label,
            g.vertex(e.ends[1]).label,
            format!("{} ({})", e.label, e.weight)
        );
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------- fibers

pub fn fiber_from_str(s: &str) -> Result<SpecialFiberDescription> {
    let fj: FiberJson = serde_json::from_str(s)?;
    Ok(SpecialFiberDescription {
        components: fj
            .components
            .into_iter()
            .map(|c| FiberComponent {
                id: c.id,
                index: c.index,
            })
            .collect(),
        nodes: fj
            .nodes
            .into_iter()
            .map(|p| FiberNode {
                id: p.id,
                ends: p.ends,
                degree: p.degree,
            })
            .collect(),
    })
}

pub fn fiber_to_json(f: &SpecialFiberDescription) -> Value {
    let fj = FiberJson {
        components: f
            .components
            .iter()
            .map(|c| ComponentJson {
                id: c.id.clone(),
                index: c.index,
            })
            .collect(),
        nodes: f
            .nodes
            .iter()
            .map(|p| NodeJson {
                id: p.id.clone(),
                ends: p.ends.clone(),
                degree: p.degree,
            })
            .collect(),
    };
    serde_json::to_value(fj).expect("fiber serializes")
}

pub fn component_group_to_json(cg: &ComponentGroup) -> Value {
    let mut v = json!({
        "group": group_to_json(&cg.group),
        "representatives": cg
            .representatives
            .iter()
            .map(|t| subweighted_tree_to_json(&cg.graph, t))
            .collect::<Vec<_>>(),
        "phi_note": cg.note(),
    });
    if !cg.connected {
        v["warning"] = json!("fiber is disconnected; the group is the direct sum over components");
    }
    v
}

// ---------------------------------------------------------------- divisors

fn coefficients_from(g: &WeightedGraph, v: &Value, key: &str) -> Result<Vec<Value>> {
    let map = v
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| Error::structural(format!("expected an object under \"{key}\"")))?;
    let mut out = vec![json!(0); g.num_vertices()];
    for (id, c) in map {
        out[vertex_id(g, id)?] = c.clone();
    }
    Ok(out)
}

fn coefficients_to<T: Into<Value> + Clone>(g: &WeightedGraph, cs: &[T]) -> Value {
    let map: IndexMap<String, Value> = g
        .vertices()
        .iter()
        .zip(cs)
        .map(|(v, c)| (v.label.clone(), c.clone().into()))
        .collect();
    json!(map)
}

/// Reads `{"coefficients": {...}}`; vertices left out have coefficient 0.
pub fn divisor_from_str(g: &WeightedGraph, s: &str) -> Result<Divisor> {
    divisor_from_json(g, &serde_json::from_str(s)?)
}

pub fn divisor_from_json(g: &WeightedGraph, v: &Value) -> Result<Divisor> {
    coefficients_from(g, v, "coefficients")?
        .iter()
        .map(|c| {
            c.as_i64()
                .ok_or_else(|| Error::structural(format!("coefficient {c} is not a 64-bit integer")))
        })
        .collect::<Result<_>>()
        .map(Divisor::new)
}

pub fn divisor_to_json(g: &WeightedGraph, d: &Divisor) -> Value {
    json!({ "coefficients": coefficients_to(g, d.coefficients()) })
}

pub fn certificate_to_json(g: &WeightedGraph, c: &EquivalenceCertificate) -> Value {
    let cs: Vec<Value> = c.potential.iter().map(|&x| json!(x)).collect();
    json!({ "potential": coefficients_to(g, &cs) })
}

pub fn certificate_from_json(g: &WeightedGraph, v: &Value) -> Result<EquivalenceCertificate> {
    let potential = coefficients_from(g, v, "potential")?
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| Error::structural("potential is not a 64-bit integer")))
        .collect::<Result<_>>()?;
    Ok(EquivalenceCertificate { potential })
}

// ---------------------------------------------------------------- trees

fn start_to_json(g: &WeightedGraph, r: &Root) -> Value {
    match r.start {
        Some(h) => json!(g.half_edge_label(h)),
        None => Value::Null,
    }
}

/// `{"tree", "sigma", "root", "start"}` for a connected graph; a forest on a
/// disconnected graph lists `"roots": [{"vertex", "start"}, ...]` instead.
pub fn subweighted_tree_to_json(g: &WeightedGraph, t: &SubweightedTree) -> Value {
    let tree: Vec<&str> = t.forest.iter().map(|&e| g.edge(e).label.as_str()).collect();
    let sigma: IndexMap<&str, u64> = g
        .edges()
        .iter()
        .zip(&t.sigma)
        .map(|(e, &s)| (e.label.as_str(), s))
        .collect();
    let mut v = json!({ "tree": tree, "sigma": sigma });
    if let [r] = t.roots.as_slice() {
        v["root"] = json!(g.vertex(r.vertex).label);
        v["start"] = start_to_json(g, r);
    } else {
        v["roots"] = t
            .roots
            .iter()
            .map(|r| json!({ "vertex": g.vertex(r.vertex).label, "start": start_to_json(g, r) }))
            .collect();
    }
    v
}

fn root_from_json(g: &WeightedGraph, vertex: &Value, start: Option<&Value>) -> Result<Root> {
    let id = vertex
        .as_str()
        .ok_or_else(|| Error::structural("root must be a vertex id"))?;
    let v = vertex_id(g, id)?;
    let start = match start {
        None | Some(Value::Null) => None,
        Some(Value::String(l)) => Some(parse_start(g, v, l)?),
        Some(other) => return Err(Error::structural(format!("start must be an edge id, got {other}"))),
    };
    Ok(Root { vertex: v, start })
}

/// Resolves a starting half-edge label at the root.
pub fn parse_start(g: &WeightedGraph, v: usize, label: &str) -> Result<HalfEdge> {
    g.parse_half_edge(v, label).ok_or_else(|| {
        Error::structural(format!(
            "{label} is not a half-edge at {}",
            g.vertex(v).label
        ))
    })
}

/// Reads a sub-weighted tree. `sigma` entries left out default to ω(e), and
/// when no root is given each component is rooted at its least vertex.
pub fn subweighted_tree_from_json(g: &WeightedGraph, v: &Value) -> Result<SubweightedTree> {
    let tree = v
        .get("tree")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::structural("expected an edge list under \"tree\""))?;
    let mut forest = tree
        .iter()
        .map(|e| {
            e.as_str()
                .ok_or_else(|| Error::structural("tree edges must be ids"))
                .and_then(|id| edge_id(g, id))
        })
        .collect::<Result<Vec<_>>>()?;
    forest.sort_unstable();
    let mut sigma: Vec<u64> = g.edges().iter().map(|e| e.weight).collect();
    if let Some(map) = v.get("sigma") {
        let map = map
            .as_object()
            .ok_or_else(|| Error::structural("sigma must be an object"))?;
        for (id, s) in map {
            sigma[edge_id(g, id)?] = s
                .as_u64()
                .ok_or_else(|| Error::structural(format!("σ({id}) must be a non-negative integer")))?;
        }
    }
    let roots = if let Some(rs) = v.get("roots") {
        rs.as_array()
            .ok_or_else(|| Error::structural("roots must be a list"))?
            .iter()
            .map(|r| root_from_json(g, r.get("vertex").unwrap_or(&Value::Null), r.get("start")))
            .collect::<Result<_>>()?
    } else if let Some(r) = v.get("root") {
        vec![root_from_json(g, r, v.get("start"))?]
    } else {
        crate::bernardi::default_roots(g)
    };
    let t = SubweightedTree {
        forest,
        sigma,
        roots,
    };
    t.validate(g)?;
    Ok(t)
}

pub fn subweighted_tree_from_str(g: &WeightedGraph, s: &str) -> Result<SubweightedTree> {
    subweighted_tree_from_json(g, &serde_json::from_str(s)?)
}

// ---------------------------------------------------------------- groups

pub fn group_to_json(a: &AbelianGroupStructure) -> Value {
    json!({
        "invariant_factors": a.invariant_factors().iter().map(bigint_to_json).collect::<Vec<_>>(),
        "order": bigint_to_json(&a.order()),
    })
}

pub fn group_from_json(v: &Value) -> Result<AbelianGroupStructure> {
    let fs = v
        .get("invariant_factors")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::structural("expected \"invariant_factors\""))?
        .iter()
        .map(bigint_from_json)
        .collect::<Result<Vec<_>>>()?;
    let a = AbelianGroupStructure::new(fs)?;
    if let Some(o) = v.get("order") {
        if bigint_from_json(o)? != a.order() {
            return Err(Error::structural("order does not match the invariant factors"));
        }
    }
    Ok(a)
}
