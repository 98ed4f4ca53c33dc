//! Exhaustive families of small pleasant multigraphs, one per isomorphism
//! class of weighted multigraph.
//!
//! Vertices are labelled `v1, v2, ...` and edges `e1, e2, ...` in canonical
//! order; ribbons are the default ones.

use std::collections::HashSet;

use crate::arithmetic::{FiberComponent, FiberNode, SpecialFiberDescription};
use crate::graph::{Edge, Vertex, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_weight: u64,
    pub connected_only: bool,
}

impl Default for FamilyBounds {
    fn default() -> Self {
        FamilyBounds {
            max_vertices: 4,
            max_edges: 5,
            max_weight: 3,
            connected_only: true,
        }
    }
}

// (u, v, weight) with u <= v
type EdgeType = (usize, usize, u64);

/// All pleasant graphs within `bounds`, in a deterministic order: by vertex
/// count, then vertex weights, then edge multiset.
pub fn pleasant_graphs(bounds: FamilyBounds) -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for n in 1..=bounds.max_vertices {
        let perms = permutations(n);
        let mut seen = HashSet::new();
        let mut weights = Vec::new();
        nondecreasing(n, bounds.max_weight, &mut Vec::new(), &mut weights);
        for ws in weights {
            let mut types = Vec::new();
            for u in 0..n {
                for v in u..n {
                    let l = lcm(ws[u], ws[v]);
                    types.extend((1..=bounds.max_weight).filter(|w| w % l == 0).map(|w| (u, v, w)));
                }
            }
            let mut chosen = Vec::new();
            multisets(&types, 0, bounds.max_edges, &mut chosen, &mut |edges| {
                if bounds.connected_only && !connected(n, edges) {
                    return;
                }
                let key = canonical(&ws, edges, &perms);
                if seen.insert(key.clone()) {
                    out.push(build(&key.0, &key.1));
                }
            });
        }
    }
    out
}

/// The fiber whose dual graph is `g`: components of index ω(v), nodes of
/// residue degree ω(e).
pub fn fiber_of(g: &WeightedGraph) -> SpecialFiberDescription {
    SpecialFiberDescription {
        components: g
            .vertices()
            .iter()
            .map(|v| FiberComponent {
                id: v.label.clone(),
                index: v.weight,
            })
            .collect(),
        nodes: g
            .edges()
            .iter()
            .map(|e| FiberNode {
                id: e.label.clone(),
                ends: e.ends.map(|x| g.vertex(x).label.clone()),
                degree: e.weight,
            })
            .collect(),
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

fn nondecreasing(n: usize, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let lo = cur.last().copied().unwrap_or(1);
    for w in lo..=max {
        cur.push(w);
        nondecreasing(n, max, cur, out);
        cur.pop();
    }
}

fn multisets(
    types: &[EdgeType],
    from: usize,
    room: usize,
    cur: &mut Vec<EdgeType>,
    visit: &mut dyn FnMut(&[EdgeType]),
) {
    visit(cur);
    if room == 0 {
        return;
    }
    for i in from..types.len() {
        cur.push(types[i]);
        multisets(types, i, room - 1, cur, visit);
        cur.pop();
    }
}

fn connected(n: usize, edges: &[EdgeType]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for &(u, v, _) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            parts -= 1;
        }
    }
    parts == 1
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

// least relabelling, comparing vertex weights first, then sorted edges
fn canonical(ws: &[u64], edges: &[EdgeType], perms: &[Vec<usize>]) -> (Vec<u64>, Vec<EdgeType>) {
    perms
        .iter()
        .map(|p| {
            let mut pw = vec![0; ws.len()];
            for (v, &w) in ws.iter().enumerate() {
                pw[p[v]] = w;
            }
            let mut pe: Vec<EdgeType> = edges
                .iter()
                .map(|&(u, v, w)| {
                    let (a, b) = (p[u], p[v]);
                    (a.min(b), a.max(b), w)
                })
                .collect();
            pe.sort_unstable();
            (pw, pe)
        })
        .min()
        .expect("at least one permutation")
}

fn build(ws: &[u64], edges: &[EdgeType]) -> WeightedGraph {
    let vertices = ws
        .iter()
        .enumerate()
        .map(|(i, &w)| Vertex {
            label: format!("v{}", i + 1),
            weight: w,
        })
        .collect();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v, w))| Edge {
            label: format!("e{}", i + 1),
            ends: [u, v],
            weight: w,
        })
        .collect();
    WeightedGraph::new(vertices, edges, None).expect("generated graphs are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(v: usize, e: usize, w: u64, connected_only: bool) -> Vec<WeightedGraph> {
        pleasant_graphs(FamilyBounds {
            max_vertices: v,
            max_edges: e,
            max_weight: w,
            connected_only,
        })
    }

    #[test]
    fn unweighted_counts() {
        // one vertex with 0..=2 loops; two vertices joined by 1 or 2 edges
        // plus loops
        assert_eq!(small(1, 2, 1, true).len(), 3);
        // two vertices, ≤2 edges, connected: {p}, {p,p}, {p, loop}
        assert_eq!(small(2, 2, 1, true).len(), 3 + 3);
        // ≤2 vertices, ≤1 edge, any connectivity:
        // one vertex: 0 or 1 loop; two: empty, one edge, loop at one vertex
        assert_eq!(small(2, 1, 1, false).len(), 2 + 3);
    }

    #[test]
    fn weighted_counts_and_pleasantness() {
        // one vertex, ≤1 loop, weights ≤2: ω(v)=1 with no loop or loops of
        // weight 1, 2; ω(v)=2 with no loop or a loop of weight 2
        assert_eq!(small(1, 1, 2, true).len(), 5);
        for g in small(3, 3, 3, false) {
            assert!(g.is_pleasant(), "{g}");
        }
    }

    #[test]
    fn no_isomorphic_duplicates() {
        let gs = small(3, 3, 2, true);
        let keys: HashSet<_> = gs
            .iter()
            .map(|g| {
                let ws: Vec<u64> = g.vertices().iter().map(|v| v.weight).collect();
                let es: Vec<EdgeType> = g.edges().iter().map(|e| (e.ends[0], e.ends[1], e.weight)).collect();
                canonical(&ws, &es, &permutations(ws.len()))
            })
            .collect();
        assert_eq!(keys.len(), gs.len());
        assert!(gs.iter().all(|g| g.is_connected()));
    }

    #[test]
    fn fiber_round_trip() {
        for g in small(3, 2, 2, true) {
            let f = fiber_of(&g);
            assert_eq!(crate::arithmetic::dual_graph(&f).unwrap(), g);
        }
    }
}
