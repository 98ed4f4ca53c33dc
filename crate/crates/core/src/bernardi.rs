//! Tours of spanning trees, edge sub-weightings and the canonical
//! representatives `D_{T,σ}` of divisor classes of degree g − 1.
//!
//! A tour walks around a spanning tree using the ribbon structure: from the
//! current vertex and half-edge it either crosses a tree edge (orienting it
//! away from the current vertex on first use) and continues with the
//! successor of the arriving half-edge, or it orients an unseen non-tree edge
//! towards the current vertex and moves on to the next half-edge at the same
//! vertex. It stops when it comes back to its starting half-edge.
//!
//! Given the tour orientation and a sub-weighting σ,
//!
//! ```text
//! D_{T,σ}(v) = Σ_{e into v} σ(e) + Σ_{e out of v} (ω(e) − σ(e)) − ω(v)
//! ```
//!
//! and the divisors obtained from all (T, σ) form one representative per
//! class of Div^{g−1}(G); the balanced ones cover the balanced classes.
//! [`RepresentativeTable`] indexes them by class so any divisor of the right
//! degree can be reduced to its representative.

use std::collections::{HashMap, VecDeque};

use crate::divisor::{ClassKey, Divisor, EquivalenceCertificate, PrincipalLattice};
use crate::error::{Error, Result};
use crate::graph::{HalfEdge, WeightedGraph};
use crate::hat::HatGraph;
use crate::trees::{enumerate_forests, is_maximal_forest};

/// A direction `(tail, head)` for every edge. Loops have `tail == head`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(arcs: Vec<(usize, usize)>) -> Self {
        Orientation { arcs }
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, e: usize) -> (usize, usize) {
        self.arcs[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.arcs[e].1
    }

    pub fn tail(&self, e: usize) -> usize {
        self.arcs[e].0
    }

    /// Number of edges pointing into each vertex; a loop counts once.
    pub fn indegrees(&self, n: usize) -> Vec<i64> {
        let mut d = vec![0; n];
        for &(_, h) in &self.arcs {
            d[h] += 1;
        }
        d
    }
}

/// Where a tour starts: a vertex and a half-edge at it. `start` may be
/// `None` for an isolated vertex, or to mean the first half-edge in the
/// vertex's ribbon.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub vertex: usize,
    pub start: Option<HalfEdge>,
}

/// One root per component: its least vertex and first ribbon half-edge.
pub fn default_roots(g: &WeightedGraph) -> Vec<Root> {
    g.components()
        .iter()
        .map(|c| Root {
            vertex: c[0],
            start: g.ribbon(c[0]).first().copied(),
        })
        .collect()
}

fn resolve_roots(g: &WeightedGraph, roots: &[Root]) -> Result<Vec<Root>> {
    let comp = g.component_index();
    let count = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut seen = vec![false; count];
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        if r.vertex >= g.num_vertices() {
            return Err(Error::precondition("root vertex out of range"));
        }
        let c = comp[r.vertex];
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::precondition(format!(
                "two roots in the component of {}",
                g.vertex(r.vertex).label
            )));
        }
        let start = match r.start {
            Some(h) => {
                if h.edge >= g.num_edges() || h.side > 1 || g.vertex_of(h) != r.vertex {
                    return Err(Error::precondition(format!(
                        "start half-edge is not incident to root {}",
                        g.vertex(r.vertex).label
                    )));
                }
                Some(h)
            }
            None => g.ribbon(r.vertex).first().copied(),
        };
        out.push(Root {
            vertex: r.vertex,
            start,
        });
    }
    if let Some(c) = seen.iter().position(|s| !s) {
        let v = comp.iter().position(|&x| x == c).expect("component has a vertex");
        return Err(Error::precondition(format!(
            "no root given for the component of {}",
            g.vertex(v).label
        )));
    }
    Ok(out)
}

fn check_forest(g: &WeightedGraph, forest: &[usize]) -> Result<()> {
    if !is_maximal_forest(g, forest) {
        return Err(Error::precondition(
            "edge set is not a spanning tree (maximal spanning forest) of the graph",
        ));
    }
    Ok(())
}

/// The orientation produced by touring `forest` from each root.
pub fn forest_tour(g: &WeightedGraph, forest: &[usize], roots: &[Root]) -> Result<Orientation> {
    check_forest(g, forest)?;
    let roots = resolve_roots(g, roots)?;
    let mut in_tree = vec![false; g.num_edges()];
    for &e in forest {
        in_tree[e] = true;
    }
    let mut arcs: Vec<Option<(usize, usize)>> = vec![None; g.num_edges()];
    let limit = 2 * g.num_edges();
    for root in roots {
        let Some(e0) = root.start else { continue };
        let mut h = e0;
        let mut steps = 0;
        loop {
            let e = h.edge;
            let here = g.vertex_of(h);
            let there = g.vertex_of(h.twin());
            if in_tree[e] {
                arcs[e].get_or_insert((here, there));
                h = g.next_in_ribbon(h.twin());
            } else {
                arcs[e].get_or_insert((there, here));
                h = g.next_in_ribbon(h);
            }
            steps += 1;
            if h == e0 {
                break;
            }
            if steps > limit {
                return Err(Error::invariant("tour did not return to its start"));
            }
        }
    }
    let arcs = arcs
        .into_iter()
        .enumerate()
        .map(|(e, a)| a.ok_or_else(|| Error::invariant(format!("tour left edge {} unoriented", g.edge(e).label))))
        .collect::<Result<_>>()?;
    Ok(Orientation { arcs })
}

/// Tour of a spanning tree of a connected graph from `q`, starting at `e0`.
pub fn tour(g: &WeightedGraph, tree: &[usize], q: usize, e0: HalfEdge) -> Result<Orientation> {
    if !g.is_connected() {
        return Err(Error::precondition("tour needs a connected graph; use forest_tour"));
    }
    forest_tour(
        g,
        tree,
        &[Root {
            vertex: q,
            start: Some(e0),
        }],
    )
}

/// Σ (indeg(v) − 1)[v], counting edges regardless of weight.
pub fn orientation_divisor(g: &WeightedGraph, o: &Orientation) -> Divisor {
    Divisor::new(
        o.indegrees(g.num_vertices())
            .into_iter()
            .map(|d| d - 1)
            .collect(),
    )
}

/// Every vertex is reachable along arcs from some root.
pub fn is_root_connected(g: &WeightedGraph, o: &Orientation, roots: &[usize]) -> bool {
    let n = g.num_vertices();
    let mut out = vec![Vec::new(); n];
    for &(t, h) in o.arcs() {
        out[t].push(h);
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    for &r in roots {
        seen[r] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in &out[v] {
            if !std::mem::replace(&mut seen[w], true) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Maps an outdegree sequence Σ outdeg(v)[v] to the divisor
/// Σ (deg(v) − 1)[v] − Σ outdeg(v)[v], i.e. to Σ (indeg(v) − 1)[v]. This is
/// how outdegree-sequence formulations of the tree bijection line up with
/// the orientation divisors used here. Loops count twice in deg(v).
#[allow(dead_code)]
pub(crate) fn outdegrees_to_orientation_divisor(g: &WeightedGraph, outdeg: &[i64]) -> Divisor {
    Divisor::new(
        (0..g.num_vertices())
            .map(|v| g.ribbon(v).len() as i64 - 1 - outdeg[v])
            .collect(),
    )
}

/// A maximal spanning forest with an edge sub-weighting and the roots
/// fixing its tour.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubweightedTree {
    /// Sorted edge indices.
    pub forest: Vec<usize>,
    /// σ(e) for every edge of the graph.
    pub sigma: Vec<u64>,
    pub roots: Vec<Root>,
}

impl SubweightedTree {
    /// The trivial sub-weighting σ = ω.
    pub fn trivial(g: &WeightedGraph, forest: Vec<usize>, roots: Vec<Root>) -> Self {
        SubweightedTree {
            forest,
            sigma: g.edges().iter().map(|e| e.weight).collect(),
            roots,
        }
    }

    pub fn is_trivial(&self, g: &WeightedGraph) -> bool {
        self.sigma.iter().zip(g.edges()).all(|(&s, e)| s == e.weight)
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        check_forest(g, &self.forest)?;
        if !self.forest.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::precondition("forest edges must be sorted"));
        }
        if self.sigma.len() != g.num_edges() {
            return Err(Error::precondition("sub-weighting must cover every edge"));
        }
        let mut in_tree = vec![false; g.num_edges()];
        for &e in &self.forest {
            in_tree[e] = true;
        }
        for (e, (&s, edge)) in self.sigma.iter().zip(g.edges()).enumerate() {
            let ok = if in_tree[e] {
                (1..=edge.weight).contains(&s)
            } else {
                s == edge.weight
            };
            if !ok {
                return Err(Error::precondition(format!(
                    "σ({}) = {s} is out of range for weight {}",
                    edge.label, edge.weight
                )));
            }
        }
        resolve_roots(g, &self.roots)?;
        Ok(())
    }
}

fn tree_divisor_from(g: &WeightedGraph, o: &Orientation, sigma: &[u64]) -> Divisor {
    let mut d: Vec<i64> = g.vertices().iter().map(|v| -(v.weight as i64)).collect();
    for (e, edge) in g.edges().iter().enumerate() {
        let (tail, head) = o.arc(e);
        d[head] += sigma[e] as i64;
        d[tail] += (edge.weight - sigma[e]) as i64;
    }
    Divisor::new(d)
}

// ω(v) | Σ_{into v} σ − Σ_{out of v} σ for every v
fn sigma_is_balanced(g: &WeightedGraph, o: &Orientation, sigma: &[u64]) -> bool {
    let mut flow = vec![0i64; g.num_vertices()];
    for (e, &s) in sigma.iter().enumerate() {
        let (tail, head) = o.arc(e);
        flow[head] += s as i64;
        flow[tail] -= s as i64;
    }
    flow.iter()
        .enumerate()
        .all(|(v, f)| f.rem_euclid(g.vertex_weight(v) as i64) == 0)
}

/// D_{T,σ} for the tour orientation of `ts`.
pub fn tree_divisor(g: &WeightedGraph, ts: &SubweightedTree) -> Result<Divisor> {
    ts.validate(g)?;
    let o = forest_tour(g, &ts.forest, &ts.roots)?;
    Ok(tree_divisor_from(g, &o, &ts.sigma))
}

/// The σ-side balancedness test for a sub-weighted tree.
pub fn is_balanced_subweighting(g: &WeightedGraph, ts: &SubweightedTree) -> Result<bool> {
    ts.validate(g)?;
    let o = forest_tour(g, &ts.forest, &ts.roots)?;
    Ok(sigma_is_balanced(g, &o, &ts.sigma))
}

/// All sub-weightings of `forest`, σ in lexicographic order over the forest
/// edges. With `balanced_only`, keeps those passing the divisibility test.
pub fn enumerate_subweightings(
    g: &WeightedGraph,
    forest: &[usize],
    roots: &[Root],
    balanced_only: bool,
) -> Result<Vec<SubweightedTree>> {
    let o = forest_tour(g, forest, roots)?;
    let roots = resolve_roots(g, roots)?;
    let mut forest = forest.to_vec();
    forest.sort_unstable();
    Ok(subweightings_with(g, &o, &forest, &roots, balanced_only)
        .into_iter()
        .map(|(ts, _)| ts)
        .collect())
}

fn subweightings_with(
    g: &WeightedGraph,
    o: &Orientation,
    forest: &[usize],
    roots: &[Root],
    balanced_only: bool,
) -> Vec<(SubweightedTree, Divisor)> {
    let mut sigma: Vec<u64> = g.edges().iter().map(|e| e.weight).collect();
    for &e in forest {
        sigma[e] = 1;
    }
    let mut out = Vec::new();
    loop {
        if !balanced_only || sigma_is_balanced(g, o, &sigma) {
            let d = tree_divisor_from(g, o, &sigma);
            out.push((
                SubweightedTree {
                    forest: forest.to_vec(),
                    sigma: sigma.clone(),
                    roots: roots.to_vec(),
                },
                d,
            ));
        }
        let mut i = forest.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            let e = forest[i];
            if sigma[e] < g.edge_weight(e) {
                sigma[e] += 1;
                break;
            }
            sigma[e] = 1;
        }
    }
}

/// All sub-weighted maximal spanning forests, ordered by forest then σ.
pub fn all_subweighted_trees(
    g: &WeightedGraph,
    roots: &[Root],
    balanced_only: bool,
) -> Result<Vec<SubweightedTree>> {
    Ok(all_with_divisors(g, roots, balanced_only)?
        .into_iter()
        .map(|(ts, _)| ts)
        .collect())
}

fn all_with_divisors(
    g: &WeightedGraph,
    roots: &[Root],
    balanced_only: bool,
) -> Result<Vec<(SubweightedTree, Divisor)>> {
    let roots = resolve_roots(g, roots)?;
    let mut out = Vec::new();
    for forest in enumerate_forests(g) {
        let o = forest_tour(g, &forest, &roots)?;
        out.extend(subweightings_with(g, &o, &forest, &roots, balanced_only));
    }
    Ok(out)
}

/// Roots of `g` carried over to its hat graph (start on the first copy).
pub fn lift_roots(hat: &HatGraph, roots: &[Root]) -> Vec<Root> {
    roots
        .iter()
        .map(|r| Root {
            vertex: r.vertex,
            start: r.start.map(|h| hat.lift(h)),
        })
        .collect()
}

/// Turns a spanning tree of Ĝ into a sub-weighted tree of G: `e` is in the
/// tree when one of its copies is, and σ(e) counts the copies of `e` that
/// the hat tour orients like the tree copy.
///
/// All copies of a non-tree edge are expected to share one direction; if
/// they do not, an [`Error::Invariant`] naming the edge is returned.
pub fn hat_tree_to_pair(
    g: &WeightedGraph,
    hat: &HatGraph,
    hat_tree: &[usize],
    roots: &[Root],
) -> Result<SubweightedTree> {
    let roots = resolve_roots(g, roots)?;
    let o = forest_tour(&hat.graph, hat_tree, &lift_roots(hat, &roots))?;
    let mut tree_copy: Vec<Option<usize>> = vec![None; g.num_edges()];
    for &c in hat_tree {
        let e = hat.original(c);
        if tree_copy[e].replace(c).is_some() {
            return Err(Error::invariant("hat tree uses two copies of one edge"));
        }
    }
    let mut sigma: Vec<u64> = g.edges().iter().map(|e| e.weight).collect();
    for (e, copy) in tree_copy.iter().enumerate() {
        let copies = hat.copies(e);
        match copy {
            Some(c) => {
                let dir = o.arc(*c);
                sigma[e] = copies.filter(|&k| o.arc(k) == dir).count() as u64;
            }
            None => {
                let dir = o.arc(copies.start);
                if copies.clone().any(|k| o.arc(k) != dir) {
                    return Err(Error::invariant(format!(
                        "copies of non-tree edge {} are not all oriented alike",
                        g.edge(e).label
                    )));
                }
            }
        }
    }
    let forest = (0..g.num_edges()).filter(|&e| tree_copy[e].is_some()).collect();
    Ok(SubweightedTree {
        forest,
        sigma,
        roots,
    })
}

/// Every sub-weighted tree of a graph indexed by divisor class, for
/// reducing divisors of degree g − 1 to their representative.
#[derive(Clone, Debug)]
pub struct RepresentativeTable {
    roots: Vec<Root>,
    lattice: PrincipalLattice,
    components: Vec<Vec<usize>>,
    component_genus: Vec<i64>,
    entries: Vec<(SubweightedTree, Divisor)>,
    index: HashMap<ClassKey, usize>,
}

impl RepresentativeTable {
    pub fn new(g: &WeightedGraph, roots: &[Root]) -> Result<Self> {
        if !g.is_pleasant() {
            return Err(Error::precondition(
                "representatives are only defined for pleasant weightings",
            ));
        }
        let roots = resolve_roots(g, roots)?;
        let lattice = PrincipalLattice::new(g);
        let entries = all_with_divisors(g, &roots, false)?;
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (ts, d)) in entries.iter().enumerate() {
            if let Some(j) = index.insert(lattice.class_key(d), i) {
                return Err(Error::invariant(format!(
                    "sub-weighted trees {:?} and {:?} give equivalent divisors",
                    entries[j].0.forest, ts.forest
                )));
            }
        }
        Ok(RepresentativeTable {
            roots,
            lattice,
            components: g.components(),
            component_genus: g.genus_report().components,
            entries,
            index,
        })
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn lattice(&self) -> &PrincipalLattice {
        &self.lattice
    }

    /// All (T, σ) with their divisors.
    pub fn entries(&self) -> &[(SubweightedTree, Divisor)] {
        &self.entries
    }

    pub fn balanced_entries<'a>(
        &'a self,
        g: &'a WeightedGraph,
    ) -> impl Iterator<Item = &'a (SubweightedTree, Divisor)> + 'a {
        self.entries
            .iter()
            .filter(move |(_, d)| crate::divisor::is_balanced(g, d))
    }

    fn check_degrees(&self, d: &Divisor) -> Result<()> {
        for (comp, genus) in self.components.iter().zip(&self.component_genus) {
            let expected = genus - 1;
            let got = d.degree_on(comp);
            if got != expected {
                return Err(Error::precondition(format!(
                    "divisor has degree {got} on a component of genus {genus}; g − 1 = {expected} is required"
                )));
            }
        }
        Ok(())
    }

    /// The representative equivalent to `d` (degree g − 1 on every
    /// component) and a potential certifying the equivalence.
    pub fn reduce(&self, d: &Divisor) -> Result<(SubweightedTree, EquivalenceCertificate)> {
        if d.len() != self.lattice_size() {
            return Err(Error::structural("divisor does not match the graph"));
        }
        self.check_degrees(d)?;
        let i = *self
            .index
            .get(&self.lattice.class_key(d))
            .ok_or_else(|| Error::invariant("no representative found for a degree g−1 class"))?;
        let (ts, rep) = &self.entries[i];
        let cert = self
            .lattice
            .certificate(d, rep)?
            .ok_or_else(|| Error::invariant("representative lookup returned an inequivalent divisor"))?;
        Ok((ts.clone(), cert))
    }

    /// `d0 + (T, σ)`: the representative of `d0 + D_{T,σ}`.
    pub fn act(&self, g: &WeightedGraph, d0: &Divisor, ts: &SubweightedTree) -> Result<SubweightedTree> {
        if d0.len() != g.num_vertices() {
            return Err(Error::structural("divisor does not match the graph"));
        }
        if self.components.iter().any(|comp| d0.degree_on(comp) != 0) {
            return Err(Error::precondition(
                "acting divisor must have degree 0 on every component",
            ));
        }
        let rep = match self.entries.iter().find(|(t, _)| t == ts) {
            Some((_, d)) => d.clone(),
            None => tree_divisor(g, ts)?,
        };
        Ok(self.reduce(&(d0 + &rep))?.0)
    }

    fn lattice_size(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }
}

/// Reduces a divisor of degree g − 1 to its sub-weighted tree.
pub fn reduce(
    g: &WeightedGraph,
    d: &Divisor,
    roots: &[Root],
) -> Result<(SubweightedTree, EquivalenceCertificate)> {
    RepresentativeTable::new(g, roots)?.reduce(d)
}

/// The torsor action of a degree-0 divisor on sub-weighted trees.
pub fn torsor_act(g: &WeightedGraph, d0: &Divisor, ts: &SubweightedTree) -> Result<SubweightedTree> {
    ts.validate(g)?;
    RepresentativeTable::new(g, &ts.roots)?.act(g, d0, ts)
}
