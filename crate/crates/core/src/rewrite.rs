//! Graph rewrites that model changes of the dual graph: adding a leaf,
//! splitting an edge into parallel edges, shrinking a vertex weight and
//! splitting a vertex into several lighter copies.
//!
//! Every rewrite checks its precondition up front and returns a fresh,
//! pleasant graph.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Edge, HalfEdge, Vertex, WeightedGraph};

fn fresh_label(base: String, taken: &HashSet<String>) -> String {
    if !taken.contains(&base) {
        return base;
    }
    (2..)
        .map(|k| format!("{base}#{k}"))
        .find(|l| !taken.contains(l))
        .expect("unbounded search")
}

fn check_vertex(g: &WeightedGraph, v: usize) -> Result<()> {
    if v >= g.num_vertices() {
        return Err(Error::precondition(format!("vertex index {v} out of range")));
    }
    Ok(())
}

fn check_edge(g: &WeightedGraph, e: usize) -> Result<()> {
    if e >= g.num_edges() {
        return Err(Error::precondition(format!("edge index {e} out of range")));
    }
    Ok(())
}

/// Attaches a new vertex of weight `leaf_weight` to `v` by an edge of weight
/// `edge_weight`. The new half-edge goes last in the ribbon at `v`.
pub fn add_leaf(
    g: &WeightedGraph,
    v: usize,
    leaf_weight: u64,
    edge_weight: u64,
) -> Result<WeightedGraph> {
    check_vertex(g, v)?;
    if leaf_weight == 0 || edge_weight == 0 {
        return Err(Error::precondition("leaf and edge weights must be positive"));
    }
    if !edge_weight.is_multiple_of(leaf_weight) || !edge_weight.is_multiple_of(g.vertex_weight(v)) {
        return Err(Error::precondition(format!(
            "edge weight {edge_weight} must be divisible by the leaf weight {leaf_weight} and by ω({}) = {}",
            g.vertex(v).label,
            g.vertex_weight(v)
        )));
    }
    let vlabels: HashSet<String> = g.vertices().iter().map(|x| x.label.clone()).collect();
    let elabels: HashSet<String> = g.edges().iter().map(|x| x.label.clone()).collect();

    let leaf = g.num_vertices();
    let edge = g.num_edges();
    let mut vertices = g.vertices().to_vec();
    vertices.push(Vertex {
        label: fresh_label(format!("{}.leaf", g.vertex(v).label), &vlabels),
        weight: leaf_weight,
    });
    let mut edges = g.edges().to_vec();
    edges.push(Edge {
        label: fresh_label(format!("{}.stem", g.vertex(v).label), &elabels),
        ends: [v, leaf],
        weight: edge_weight,
    });
    let mut ribbon = g.ribbons().to_vec();
    ribbon[v].push(HalfEdge::new(edge, 0));
    ribbon.push(vec![HalfEdge::new(edge, 1)]);
    WeightedGraph::new(vertices, edges, Some(ribbon))
}

/// Replaces edge `e` by parallel edges with weights `parts`, consecutive in
/// both endpoint ribbons at the position `e` occupied.
pub fn split_edge(g: &WeightedGraph, e: usize, parts: &[u64]) -> Result<WeightedGraph> {
    check_edge(g, e)?;
    let old = g.edge(e);
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::precondition("parts must be a nonempty list of positive weights"));
    }
    let total: u64 = parts.iter().sum();
    if total != old.weight {
        return Err(Error::precondition(format!(
            "parts sum to {total} but edge {} has weight {}",
            old.label, old.weight
        )));
    }
    for &p in parts {
        for &v in &old.ends {
            if p % g.vertex_weight(v) != 0 {
                return Err(Error::precondition(format!(
                    "part weight {p} is not divisible by ω({}) = {}",
                    g.vertex(v).label,
                    g.vertex_weight(v)
                )));
            }
        }
    }

    let k = parts.len();
    let mut taken: HashSet<String> = g.edges().iter().map(|x| x.label.clone()).collect();
    taken.remove(&old.label);
    let mut edges = Vec::with_capacity(g.num_edges() + k - 1);
    edges.extend_from_slice(&g.edges()[..e]);
    for (i, &w) in parts.iter().enumerate() {
        let label = if k == 1 {
            old.label.clone()
        } else {
            fresh_label(format!("{}.{}", old.label, i + 1), &taken)
        };
        taken.insert(label.clone());
        edges.push(Edge {
            label,
            ends: old.ends,
            weight: w,
        });
    }
    edges.extend_from_slice(&g.edges()[e + 1..]);

    let remap = |h: HalfEdge| -> Vec<HalfEdge> {
        if h.edge < e {
            vec![h]
        } else if h.edge > e {
            vec![HalfEdge::new(h.edge + k - 1, h.side)]
        } else {
            (0..k).map(|i| HalfEdge::new(e + i, h.side)).collect()
        }
    };
    let ribbon = g
        .ribbons()
        .iter()
        .map(|order| order.iter().flat_map(|&h| remap(h)).collect())
        .collect();
    WeightedGraph::new(g.vertices().to_vec(), edges, Some(ribbon))
}

/// Changes ω(v) to a divisor of its current value.
pub fn shrink_vertex_weight(g: &WeightedGraph, v: usize, new_weight: u64) -> Result<WeightedGraph> {
    check_vertex(g, v)?;
    if new_weight == 0 || !g.vertex_weight(v).is_multiple_of(new_weight) {
        return Err(Error::precondition(format!(
            "new weight {new_weight} does not divide ω({}) = {}",
            g.vertex(v).label,
            g.vertex_weight(v)
        )));
    }
    let mut vertices = g.vertices().to_vec();
    vertices[v].weight = new_weight;
    WeightedGraph::new(vertices, g.edges().to_vec(), Some(g.ribbons().to_vec()))
}

/// One of the edges an original edge at the split vertex turns into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPart {
    pub weight: u64,
    /// For each side of the original edge that sits at the split vertex,
    /// the copy (0-based) this part attaches to; `None` on the other side.
    pub at: [Option<usize>; 2],
}

/// How the edges at a split vertex are redistributed over its copies.
/// Keys are original edge indices; every edge at the vertex needs an entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitPlan {
    pub edges: BTreeMap<usize, Vec<SplitPart>>,
}

impl SplitPlan {
    /// Every edge stays whole on copy 0.
    pub fn trivial(g: &WeightedGraph, v: usize) -> Self {
        let mut edges = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            if e.ends.contains(&v) {
                let at = e.ends.map(|x| (x == v).then_some(0));
                edges.insert(i, vec![SplitPart { weight: e.weight, at }]);
            }
        }
        SplitPlan { edges }
    }

    /// Splits each edge at `v` into `r` equal parts, part `j` attached to
    /// copy `j`; a loop's part `j` becomes a loop at copy `j`. This is the
    /// redistribution under which every copy sees `1/r` of each neighbour.
    pub fn symmetric(g: &WeightedGraph, v: usize, r: usize) -> Result<Self> {
        check_vertex(g, v)?;
        if r == 0 {
            return Err(Error::precondition("split count must be positive"));
        }
        let mut edges = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            if !e.ends.contains(&v) {
                continue;
            }
            if e.weight % r as u64 != 0 {
                return Err(Error::precondition(format!(
                    "edge {} of weight {} cannot be split evenly {r} ways",
                    e.label, e.weight
                )));
            }
            let w = e.weight / r as u64;
            let parts = (0..r)
                .map(|j| SplitPart {
                    weight: w,
                    at: e.ends.map(|x| (x == v).then_some(j)),
                })
                .collect();
            edges.insert(i, parts);
        }
        Ok(SplitPlan { edges })
    }
}

/// Records which new vertices replaced each old vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSplitMap {
    /// `new_vertices[old]`: the new vertex indices for `old`, one for an
    /// untouched vertex, `r` for the split one.
    pub new_vertices: Vec<Vec<usize>>,
    pub new_vertex_count: usize,
}

impl VertexSplitMap {
    pub fn identity(n: usize) -> Self {
        VertexSplitMap {
            new_vertices: (0..n).map(|v| vec![v]).collect(),
            new_vertex_count: n,
        }
    }

    pub fn old_vertex_count(&self) -> usize {
        self.new_vertices.len()
    }
}

/// Replaces `v` by `r` copies of weight ω(v)/r, redistributing its edges
/// according to `plan`. Copies take `v`'s place in the vertex order.
pub fn split_vertex(
    g: &WeightedGraph,
    v: usize,
    r: usize,
    plan: &SplitPlan,
) -> Result<(WeightedGraph, VertexSplitMap)> {
    check_vertex(g, v)?;
    let wv = g.vertex_weight(v);
    if r == 0 || !wv.is_multiple_of(r as u64) {
        return Err(Error::precondition(format!(
            "split count {r} does not divide ω({}) = {wv}",
            g.vertex(v).label
        )));
    }
    for (&e, parts) in &plan.edges {
        check_edge(g, e)?;
        let edge = g.edge(e);
        if !edge.ends.contains(&v) {
            return Err(Error::precondition(format!(
                "plan mentions edge {} which is not incident to {}",
                edge.label,
                g.vertex(v).label
            )));
        }
        if parts.is_empty() || parts.iter().any(|p| p.weight == 0) {
            return Err(Error::precondition(format!(
                "edge {} needs at least one part of positive weight",
                edge.label
            )));
        }
        let total: u64 = parts.iter().map(|p| p.weight).sum();
        if total != edge.weight {
            return Err(Error::precondition(format!(
                "parts of edge {} sum to {total}, expected {}",
                edge.label, edge.weight
            )));
        }
        for p in parts {
            for s in 0..2 {
                let ok = match p.at[s] {
                    Some(j) => edge.ends[s] == v && j < r,
                    None => edge.ends[s] != v,
                };
                if !ok {
                    return Err(Error::precondition(format!(
                        "part of edge {} has an invalid copy assignment",
                        edge.label
                    )));
                }
            }
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if e.ends.contains(&v) && !plan.edges.contains_key(&i) {
            return Err(Error::precondition(format!(
                "plan does not cover edge {} at {}",
                e.label,
                g.vertex(v).label
            )));
        }
    }

    let n = g.num_vertices();
    let new_index = |u: usize| if u < v { u } else { u + r - 1 };
    let mut new_vertices_of = Vec::with_capacity(n);
    for u in 0..n {
        if u == v {
            new_vertices_of.push((v..v + r).collect());
        } else {
            new_vertices_of.push(vec![new_index(u)]);
        }
    }

    let old_label = &g.vertex(v).label;
    let mut vlabels: HashSet<String> = g.vertices().iter().map(|x| x.label.clone()).collect();
    vlabels.remove(old_label);
    let mut vertices = Vec::with_capacity(n + r - 1);
    for (u, vert) in g.vertices().iter().enumerate() {
        if u != v {
            vertices.push(vert.clone());
            continue;
        }
        for j in 0..r {
            let label = if r == 1 {
                old_label.clone()
            } else {
                fresh_label(format!("{old_label}.{}", j + 1), &vlabels)
            };
            vlabels.insert(label.clone());
            vertices.push(Vertex {
                label,
                weight: wv / r as u64,
            });
        }
    }

    let mut elabels: HashSet<String> = g.edges().iter().map(|x| x.label.clone()).collect();
    let mut edges = Vec::new();
    // new edge indices produced by each old edge, in part order
    let mut produced: Vec<Vec<usize>> = Vec::with_capacity(g.num_edges());
    for (i, e) in g.edges().iter().enumerate() {
        match plan.edges.get(&i) {
            None => {
                produced.push(vec![edges.len()]);
                edges.push(Edge {
                    label: e.label.clone(),
                    ends: e.ends.map(new_index),
                    weight: e.weight,
                });
            }
            Some(parts) => {
                elabels.remove(&e.label);
                let mut ids = Vec::with_capacity(parts.len());
                for (k, p) in parts.iter().enumerate() {
                    let label = if parts.len() == 1 {
                        e.label.clone()
                    } else {
                        fresh_label(format!("{}.{}", e.label, k + 1), &elabels)
                    };
                    elabels.insert(label.clone());
                    let ends = [0, 1].map(|s| match p.at[s] {
                        Some(j) => v + j,
                        None => new_index(e.ends[s]),
                    });
                    ids.push(edges.len());
                    edges.push(Edge {
                        label,
                        ends,
                        weight: p.weight,
                    });
                }
                produced.push(ids);
            }
        }
    }

    let mut ribbon = vec![Vec::new(); n + r - 1];
    for (u, order) in g.ribbons().iter().enumerate() {
        for &h in order {
            match plan.edges.get(&h.edge) {
                None => ribbon[new_index(u)].push(HalfEdge::new(produced[h.edge][0], h.side)),
                Some(parts) => {
                    for (k, p) in parts.iter().enumerate() {
                        let target = match p.at[h.side] {
                            Some(j) => v + j,
                            None => new_index(u),
                        };
                        ribbon[target].push(HalfEdge::new(produced[h.edge][k], h.side));
                    }
                }
            }
        }
    }

    let out = WeightedGraph::new(vertices, edges, Some(ribbon))?;
    if !out.is_pleasant() {
        return Err(Error::precondition(format!(
            "splitting {} this way leaves a non-pleasant graph",
            old_label
        )));
    }
    Ok((
        out,
        VertexSplitMap {
            new_vertices: new_vertices_of,
            new_vertex_count: n + r - 1,
        },
    ))
}
