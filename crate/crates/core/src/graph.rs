//! Weighted multigraphs with a ribbon structure.
//!
//! A [`WeightedGraph`] carries a positive weight on every vertex and edge,
//! allows loops and parallel edges, and fixes for each vertex a cyclic order
//! of the half-edges incident to it. Every edge has two half-edges, one per
//! side; a loop therefore appears twice in the ribbon of its vertex.
//!
//! Graphs are immutable once built. All rewrites in [`crate::rewrite`] return
//! fresh graphs.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A vertex together with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub weight: u64,
}

/// An edge between two vertex indices. `ends[0] == ends[1]` for a loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub ends: [usize; 2],
    pub weight: u64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to `v`. For a loop this is `v` itself.
    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// One side of an edge. Side `s` of edge `e` sits at vertex `edges[e].ends[s]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub side: usize,
}

impl HalfEdge {
    pub fn new(edge: usize, side: usize) -> Self {
        HalfEdge { edge, side }
    }

    /// The other half of the same edge.
    pub fn twin(self) -> Self {
        HalfEdge {
            edge: self.edge,
            side: 1 - self.side,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    ribbon: Vec<Vec<HalfEdge>>,
    // position of half-edge (e, s) inside the ribbon of its vertex
    ribbon_pos: Vec<[usize; 2]>,
}

/// Result of [`WeightedGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub pleasant: bool,
    pub connected: bool,
    pub issues: Vec<String>,
}

/// Weighted genus of the whole graph and of each connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusReport {
    pub genus: i64,
    pub components: Vec<i64>,
}

impl WeightedGraph {
    /// Builds a graph, checking weights, endpoints, label uniqueness and the
    /// ribbon. When `ribbon` is `None` the default ribbon is used: half-edges
    /// in order of edge declaration, the two halves of a loop adjacent.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        ribbon: Option<Vec<Vec<HalfEdge>>>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if v.weight == 0 {
                return Err(Error::structural(format!(
                    "vertex {} has weight 0; weights must be positive",
                    v.label
                )));
            }
            if seen.insert(v.label.as_str(), i).is_some() {
                return Err(Error::structural(format!("duplicate vertex id {}", v.label)));
            }
        }
        let mut seen = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.weight == 0 {
                return Err(Error::structural(format!(
                    "edge {} has weight 0; weights must be positive",
                    e.label
                )));
            }
            if e.ends.iter().any(|&v| v >= n) {
                return Err(Error::structural(format!(
                    "edge {} has an endpoint outside the vertex set",
                    e.label
                )));
            }
            if seen.insert(e.label.as_str(), i).is_some() {
                return Err(Error::structural(format!("duplicate edge id {}", e.label)));
            }
        }

        let ribbon = match ribbon {
            Some(r) => r,
            None => default_ribbon(n, &edges),
        };
        if ribbon.len() != n {
            return Err(Error::structural(format!(
                "ribbon lists {} vertices but the graph has {}",
                ribbon.len(),
                n
            )));
        }
        const UNSET: usize = usize::MAX;
        let mut ribbon_pos = vec![[UNSET; 2]; edges.len()];
        for (v, order) in ribbon.iter().enumerate() {
            for (pos, h) in order.iter().enumerate() {
                let Some(edge) = edges.get(h.edge) else {
                    return Err(Error::structural(format!(
                        "ribbon at {} names a nonexistent edge",
                        vertices[v].label
                    )));
                };
                if h.side > 1 || edge.ends[h.side] != v {
                    return Err(Error::structural(format!(
                        "ribbon at {} lists a half-edge of {} that is not incident to it",
                        vertices[v].label, edge.label
                    )));
                }
                if ribbon_pos[h.edge][h.side] != UNSET {
                    return Err(Error::structural(format!(
                        "ribbon at {} lists a half-edge of {} twice",
                        vertices[v].label, edge.label
                    )));
                }
                ribbon_pos[h.edge][h.side] = pos;
            }
        }
        for (e, pos) in ribbon_pos.iter().enumerate() {
            if pos.contains(&UNSET) {
                return Err(Error::structural(format!(
                    "ribbon is missing a half-edge of {}",
                    edges[e].label
                )));
            }
        }

        Ok(WeightedGraph {
            vertices,
            edges,
            ribbon,
            ribbon_pos,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_weight(&self, v: usize) -> u64 {
        self.vertices[v].weight
    }

    pub fn edge_weight(&self, e: usize) -> u64 {
        self.edges[e].weight
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// The cyclic order of half-edges around `v`.
    pub fn ribbon(&self, v: usize) -> &[HalfEdge] {
        &self.ribbon[v]
    }

    pub fn ribbons(&self) -> &[Vec<HalfEdge>] {
        &self.ribbon
    }

    /// Vertex at which a half-edge sits.
    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.edges[h.edge].ends[h.side]
    }

    /// Successor of `h` in the cyclic ribbon order at its vertex.
    pub fn next_in_ribbon(&self, h: HalfEdge) -> HalfEdge {
        let order = &self.ribbon[self.vertex_of(h)];
        let pos = self.ribbon_pos[h.edge][h.side];
        order[(pos + 1) % order.len()]
    }

    /// The half-edge of `e` sitting at `v`, preferring side 0 for loops.
    pub fn half_edge_at(&self, e: usize, v: usize) -> Option<HalfEdge> {
        let ends = self.edges[e].ends;
        if ends[0] == v {
            Some(HalfEdge::new(e, 0))
        } else if ends[1] == v {
            Some(HalfEdge::new(e, 1))
        } else {
            None
        }
    }

    /// Component index of every vertex; components are numbered in order of
    /// their least vertex.
    pub fn component_index(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.ends[0]].push(e.ends[1]);
            adj[e.ends[1]].push(e.ends[0]);
        }
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let comp = self.component_index();
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Every vertex weight divides the weight of each edge at that vertex.
    pub fn is_pleasant(&self) -> bool {
        self.edges.iter().all(|e| {
            e.ends
                .iter()
                .all(|&v| e.weight % self.vertices[v].weight == 0)
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        for e in &self.edges {
            let mut ends = e.ends.to_vec();
            ends.dedup();
            for v in ends {
                let vw = self.vertices[v].weight;
                if e.weight % vw != 0 {
                    issues.push(format!(
                        "vertex {} (weight {}) does not divide edge {} (weight {})",
                        self.vertices[v].label, vw, e.label, e.weight
                    ));
                }
            }
        }
        let connected = self.is_connected();
        if !connected {
            issues.push(format!(
                "graph has {} connected components",
                self.components().len()
            ));
        }
        ValidationReport {
            pleasant: self.is_pleasant(),
            connected,
            issues,
        }
    }

    /// Σ ω(e) − Σ ω(v) + 1.
    pub fn weighted_genus(&self) -> i64 {
        let e: i64 = self.edges.iter().map(|e| e.weight as i64).sum();
        let v: i64 = self.vertices.iter().map(|v| v.weight as i64).sum();
        e - v + 1
    }

    /// The genus formula for the whole graph plus the value on each component.
    pub fn genus_report(&self) -> GenusReport {
        let comp = self.component_index();
        let count = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut per = vec![1i64; count];
        for (v, &c) in comp.iter().enumerate() {
            per[c] -= self.vertices[v].weight as i64;
        }
        for e in &self.edges {
            per[comp[e.ends[0]]] += e.weight as i64;
        }
        GenusReport {
            genus: self.weighted_genus(),
            components: per,
        }
    }

    /// ω(G): the gcd of all vertex weights (0 for the empty graph).
    pub fn vertex_weight_gcd(&self) -> u64 {
        self.vertices.iter().fold(0, |g, v| g.gcd(&v.weight))
    }

    /// The weighted Laplacian as a vertex × vertex matrix: weighted degree on
    /// the diagonal, minus the summed weight of edges between distinct
    /// vertices off it. Loops contribute nothing.
    pub fn laplacian_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_vertices();
        let mut m = vec![vec![0i64; n]; n];
        for e in &self.edges {
            let [a, b] = e.ends;
            if a == b {
                continue;
            }
            let w = e.weight as i64;
            m[a][a] += w;
            m[b][b] += w;
            m[a][b] -= w;
            m[b][a] -= w;
        }
        m
    }

    /// Label of a half-edge as used in ribbon files: the edge id, or
    /// `id:side` for a loop.
    pub fn half_edge_label(&self, h: HalfEdge) -> String {
        let e = &self.edges[h.edge];
        if e.is_loop() {
            format!("{}:{}", e.label, h.side)
        } else {
            e.label.clone()
        }
    }

    /// Resolves a half-edge label at vertex `v`.
    pub fn parse_half_edge(&self, v: usize, label: &str) -> Option<HalfEdge> {
        if let Some(e) = self.edge_index(label) {
            return self.half_edge_at(e, v);
        }
        let (name, side) = label.rsplit_once(':')?;
        let e = self.edge_index(name)?;
        let side: usize = side.parse().ok()?;
        (side <= 1 && self.edges[e].ends[side] == v).then_some(HalfEdge::new(e, side))
    }
}

fn default_ribbon(n: usize, edges: &[Edge]) -> Vec<Vec<HalfEdge>> {
    let mut ribbon = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if e.is_loop() {
            ribbon[e.ends[0]].push(HalfEdge::new(i, 0));
            ribbon[e.ends[0]].push(HalfEdge::new(i, 1));
        } else {
            ribbon[e.ends[0]].push(HalfEdge::new(i, 0));
            ribbon[e.ends[1]].push(HalfEdge::new(i, 1));
        }
    }
    ribbon
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{}:{}", v.label, v.weight))
            .collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}={}-{}:{}",
                    e.label, self.vertices[e.ends[0]].label, self.vertices[e.ends[1]].label, e.weight
                )
            })
            .collect();
        write!(f, "V[{}] E[{}]", vs.join(" "), es.join(" "))
    }
}

/// Incremental construction by label.
#[derive(Default, Debug, Clone)]
pub struct GraphBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, label: &str, weight: u64) -> Self {
        self.vertices.push(Vertex {
            label: label.to_string(),
            weight,
        });
        self
    }

    /// Adds an edge between two previously added vertices.
    ///
    /// Panics if either label is unknown; use [`WeightedGraph::new`] for
    /// untrusted input.
    pub fn edge(mut self, label: &str, a: &str, b: &str, weight: u64) -> Self {
        let find = |l: &str| {
            self.vertices
                .iter()
                .position(|v| v.label == l)
                .unwrap_or_else(|| panic!("unknown vertex {l}"))
        };
        let ends = [find(a), find(b)];
        self.edges.push(Edge {
            label: label.to_string(),
            ends,
            weight,
        });
        self
    }

    pub fn build(self) -> Result<WeightedGraph> {
        WeightedGraph::new(self.vertices, self.edges, None)
    }
}
