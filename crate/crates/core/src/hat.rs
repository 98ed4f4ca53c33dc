//! The unweighted expansion Ĝ: every edge `e` becomes ω(e) parallel copies
//! and every vertex weight becomes 1.
//!
//! Copies of `e` occupy consecutive slots, in copy order, exactly where `e`
//! sat in both endpoint ribbons. Loops expand the same way on each side.

use std::ops::Range;

use crate::error::Result;
use crate::graph::{Edge, HalfEdge, Vertex, WeightedGraph};

#[derive(Clone, Debug)]
pub struct HatGraph {
    pub graph: WeightedGraph,
    /// For each hat edge: (original edge, copy index starting at 1).
    pub copy_of: Vec<(usize, usize)>,
    copies: Vec<Range<usize>>,
}

impl HatGraph {
    /// Hat edges that are copies of original edge `e`.
    pub fn copies(&self, e: usize) -> Range<usize> {
        self.copies[e].clone()
    }

    /// The half-edge of the first copy corresponding to an original half-edge.
    pub fn lift(&self, h: HalfEdge) -> HalfEdge {
        HalfEdge::new(self.copies[h.edge].start, h.side)
    }

    pub fn original(&self, hat_edge: usize) -> usize {
        self.copy_of[hat_edge].0
    }
}

pub fn expand_hat(g: &WeightedGraph) -> Result<HatGraph> {
    let vertices = g
        .vertices()
        .iter()
        .map(|v| Vertex {
            label: v.label.clone(),
            weight: 1,
        })
        .collect();

    let mut edges = Vec::new();
    let mut copy_of = Vec::new();
    let mut copies = Vec::with_capacity(g.num_edges());
    for (i, e) in g.edges().iter().enumerate() {
        let start = edges.len();
        for k in 1..=e.weight as usize {
            let label = if e.weight == 1 {
                e.label.clone()
            } else {
                format!("{}.{}", e.label, k)
            };
            edges.push(Edge {
                label,
                ends: e.ends,
                weight: 1,
            });
            copy_of.push((i, k));
        }
        copies.push(start..edges.len());
    }

    let ribbon = g
        .ribbons()
        .iter()
        .map(|order| {
            order
                .iter()
                .flat_map(|h| copies[h.edge].clone().map(move |c| HalfEdge::new(c, h.side)))
                .collect()
        })
        .collect();

    Ok(HatGraph {
        graph: WeightedGraph::new(vertices, edges, Some(ribbon))?,
        copy_of,
        copies,
    })
}
