//! Special-fiber descriptions and the arithmetic component group.
//!
//! A fiber is given as components with their indices and nodes with their
//! residue degrees. Its dual graph weights each vertex by the index of the
//! component and each edge by the residue degree of the node; the
//! arithmetic component group is then Pic_b⁰ of that graph, and the balanced
//! sub-weighted spanning trees form a torsor under it.

use std::collections::HashMap;

use crate::bernardi::{all_subweighted_trees, default_roots, SubweightedTree};
use crate::divisor::{is_balanced, Divisor, PrincipalLattice};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex, WeightedGraph};
use crate::picard::{enumerate_coset_representatives_bruteforce, picb0_structure, AbelianGroupStructure};
pub use crate::rewrite::VertexSplitMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub id: String,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberNode {
    pub id: String,
    pub ends: [String; 2],
    pub degree: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecialFiberDescription {
    pub components: Vec<FiberComponent>,
    pub nodes: Vec<FiberNode>,
}

/// Builds the weighted dual graph. A node on a single component becomes a loop.
pub fn dual_graph(f: &SpecialFiberDescription) -> Result<WeightedGraph> {
    let mut by_id = HashMap::new();
    let mut vertices = Vec::with_capacity(f.components.len());
    for (i, c) in f.components.iter().enumerate() {
        if c.index == 0 {
            return Err(Error::structural(format!("component {} has index 0", c.id)));
        }
        if by_id.insert(c.id.as_str(), i).is_some() {
            return Err(Error::structural(format!("duplicate component id {}", c.id)));
        }
        vertices.push(Vertex {
            label: c.id.clone(),
            weight: c.index,
        });
    }
    let mut edges = Vec::with_capacity(f.nodes.len());
    for p in &f.nodes {
        if p.degree == 0 {
            return Err(Error::structural(format!("node {} has residue degree 0", p.id)));
        }
        let mut ends = [0; 2];
        for (slot, c) in ends.iter_mut().zip(&p.ends) {
            *slot = *by_id.get(c.as_str()).ok_or_else(|| {
                Error::structural(format!("node {} lies on unknown component {c}", p.id))
            })?;
            let index = f.components[*slot].index;
            if p.degree % index != 0 {
                return Err(Error::structural(format!(
                    "index {index} of component {c} does not divide residue degree {} of node {}",
                    p.degree, p.id
                )));
            }
        }
        edges.push(Edge {
            label: p.id.clone(),
            ends,
            weight: p.degree,
        });
    }
    WeightedGraph::new(vertices, edges, None)
}

/// The arithmetic component group of a fiber and its torsor of balanced
/// sub-weighted trees.
#[derive(Clone, Debug)]
pub struct ComponentGroup {
    pub graph: WeightedGraph,
    pub group: AbelianGroupStructure,
    pub representatives: Vec<SubweightedTree>,
    /// False when the fiber is disconnected; results then follow the
    /// component-wise decomposition.
    pub connected: bool,
    /// Every component has index 1, so the group is also Pic⁰ of the graph.
    pub all_index_one: bool,
}

impl ComponentGroup {
    pub fn note(&self) -> &'static str {
        if self.all_index_one {
            "arithmetic component group; all indices are 1, so it equals Pic0 of the dual graph and the geometric component group"
        } else {
            "arithmetic component group; equals the geometric component group when all indices are 1"
        }
    }
}

pub fn component_group(f: &SpecialFiberDescription) -> Result<ComponentGroup> {
    let graph = dual_graph(f)?;
    let group = picb0_structure(&graph)?;
    let representatives = all_subweighted_trees(&graph, &default_roots(&graph), true)?;
    Ok(ComponentGroup {
        connected: graph.is_connected(),
        all_index_one: graph.vertices().iter().all(|v| v.weight == 1),
        graph,
        group,
        representatives,
    })
}

/// Pushes a balanced divisor through a vertex split: the coefficient `c` of
/// a vertex split into `r` copies becomes `c / r` on each copy.
pub fn psi_map(
    old: &WeightedGraph,
    split: &VertexSplitMap,
    d: &Divisor,
) -> Result<Divisor> {
    if d.len() != split.old_vertex_count() || old.num_vertices() != d.len() {
        return Err(Error::structural("divisor does not match the split map"));
    }
    if !is_balanced(old, d) {
        return Err(Error::precondition("ψ is only defined on balanced divisors"));
    }
    let mut out = vec![0i64; split.new_vertex_count];
    for (v, targets) in split.new_vertices.iter().enumerate() {
        let r = targets.len() as i64;
        if d[v] % r != 0 {
            return Err(Error::invariant(format!(
                "coefficient {} at {} is not divisible by the split count {r}",
                d[v],
                old.vertex(v).label
            )));
        }
        for &t in targets {
            out[t] = d[v] / r;
        }
    }
    Ok(Divisor::new(out))
}

/// How the new graph of a base change arose from the old one.
#[derive(Clone, Debug)]
pub enum BaseChange {
    /// Edges split into parallel edges; vertices unchanged.
    EdgeSplit,
    /// Vertex weights shrank; vertices unchanged.
    Shrink,
    VertexSplit(VertexSplitMap),
}

#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub injective: bool,
    pub old_order: usize,
    pub new_order: usize,
    /// Two inequivalent balanced divisors on the old graph whose images are
    /// equivalent on the new one.
    pub witness: Option<(Divisor, Divisor)>,
}

/// Maps representatives of Pic_b⁰(old) into the new graph and checks that
/// their images stay pairwise inequivalent.
pub fn check_base_change_injectivity(
    old: &WeightedGraph,
    new: &WeightedGraph,
    change: &BaseChange,
) -> Result<InjectivityReport> {
    let reps = enumerate_coset_representatives_bruteforce(old, 0, true)?;
    let new_order = enumerate_coset_representatives_bruteforce(new, 0, true)?.len();
    let images: Vec<Divisor> = match change {
        BaseChange::EdgeSplit | BaseChange::Shrink => {
            if old.num_vertices() != new.num_vertices() {
                return Err(Error::precondition("edge splits and shrinks keep the vertex set"));
            }
            reps.clone()
        }
        BaseChange::VertexSplit(map) => {
            if map.new_vertex_count != new.num_vertices() {
                return Err(Error::precondition("split map does not match the new graph"));
            }
            reps.iter().map(|d| psi_map(old, map, d)).collect::<Result<_>>()?
        }
    };
    let lattice = PrincipalLattice::new(new);
    let mut seen = HashMap::new();
    for (i, img) in images.iter().enumerate() {
        if !is_balanced(new, img) {
            return Err(Error::invariant("image of a balanced divisor is not balanced"));
        }
        if let Some(j) = seen.insert(lattice.class_key(img), i) {
            return Ok(InjectivityReport {
                injective: false,
                old_order: reps.len(),
                new_order,
                witness: Some((reps[j].clone(), reps[i].clone())),
            });
        }
    }
    Ok(InjectivityReport {
        injective: true,
        old_order: reps.len(),
        new_order,
        witness: None,
    })
}
