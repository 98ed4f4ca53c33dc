//! Spanning tree and maximal spanning forest enumeration.
//!
//! Backtracking over edges in declaration order with a union-find that can
//! undo its last union. Edge sets come out sorted, in lexicographic order.

use crate::graph::WeightedGraph;

/// Union-find without path compression so unions can be rolled back.
#[derive(Debug, Clone)]
pub(crate) struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<usize>>,
}

impl RollbackUnionFind {
    pub(crate) fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    pub(crate) fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already merged.
    /// Every call pushes one history entry, so it can be undone.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push(Some(rb));
        true
    }

    pub(crate) fn undo(&mut self) {
        if let Some(Some(rb)) = self.history.pop() {
            let ra = self.parent[rb];
            self.parent[rb] = rb;
            self.size[ra] -= self.size[rb];
        }
    }
}

/// Number of edges in a maximal spanning forest: |V| − #components.
pub fn forest_rank(g: &WeightedGraph) -> usize {
    g.num_vertices() - g.components().len()
}

/// All maximal spanning forests (one spanning tree per component).
pub fn enumerate_forests(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let rank = forest_rank(g);
    let mut out = Vec::new();
    let mut uf = RollbackUnionFind::new(g.num_vertices());
    let mut chosen = Vec::with_capacity(rank);
    backtrack(g, 0, rank, &mut uf, &mut chosen, &mut out);
    out
}

/// All spanning trees; empty when `g` is disconnected.
pub fn enumerate_trees(g: &WeightedGraph) -> Vec<Vec<usize>> {
    if g.is_connected() {
        enumerate_forests(g)
    } else {
        Vec::new()
    }
}

fn backtrack(
    g: &WeightedGraph,
    next: usize,
    rank: usize,
    uf: &mut RollbackUnionFind,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == rank {
        out.push(chosen.clone());
        return;
    }
    if next == g.num_edges() || chosen.len() + (g.num_edges() - next) < rank {
        return;
    }
    let [a, b] = g.edge(next).ends;
    if uf.union(a, b) {
        chosen.push(next);
        backtrack(g, next + 1, rank, uf, chosen, out);
        chosen.pop();
    }
    uf.undo();
    backtrack(g, next + 1, rank, uf, chosen, out);
}

/// True if `edges` is a maximal spanning forest of `g`.
pub fn is_maximal_forest(g: &WeightedGraph, edges: &[usize]) -> bool {
    if edges.len() != forest_rank(g) {
        return false;
    }
    let mut uf = RollbackUnionFind::new(g.num_vertices());
    let mut seen = vec![false; g.num_edges()];
    for &e in edges {
        if e >= g.num_edges() || seen[e] {
            return false;
        }
        seen[e] = true;
        let [a, b] = g.edge(e).ends;
        if !uf.union(a, b) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn triangle() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("v1", 1)
            .vertex("v2", 1)
            .vertex("v3", 1)
            .edge("a", "v1", "v2", 1)
            .edge("b", "v1", "v3", 1)
            .edge("c", "v2", "v3", 1)
            .build()
            .unwrap()
    }

    #[test]
    fn triangle_has_three_trees_in_lex_order() {
        assert_eq!(enumerate_trees(&triangle()), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn a_tree_has_only_itself() {
        let g = GraphBuilder::new()
            .vertex("a", 1)
            .vertex("b", 1)
            .vertex("c", 1)
            .edge("x", "a", "b", 1)
            .edge("y", "b", "c", 1)
            .build()
            .unwrap();
        assert_eq!(enumerate_trees(&g), vec![vec![0, 1]]);
    }

    #[test]
    fn two_triangles_have_nine_forests() {
        let mut b = GraphBuilder::new();
        for v in ["a1", "a2", "a3", "b1", "b2", "b3"] {
            b = b.vertex(v, 1);
        }
        let g = b
            .edge("x1", "a1", "a2", 1)
            .edge("x2", "a2", "a3", 1)
            .edge("x3", "a3", "a1", 1)
            .edge("y1", "b1", "b2", 1)
            .edge("y2", "b2", "b3", 1)
            .edge("y3", "b3", "b1", 1)
            .build()
            .unwrap();
        assert_eq!(enumerate_forests(&g).len(), 9);
        assert!(enumerate_trees(&g).is_empty());
    }

    #[test]
    fn loops_and_parallel_edges() {
        let g = GraphBuilder::new()
            .vertex("a", 1)
            .vertex("b", 1)
            .edge("l", "a", "a", 1)
            .edge("p", "a", "b", 1)
            .edge("q", "a", "b", 1)
            .build()
            .unwrap();
        assert_eq!(enumerate_trees(&g), vec![vec![1], vec![2]]);
        assert!(is_maximal_forest(&g, &[2]));
        assert!(!is_maximal_forest(&g, &[0]));
    }

    #[test]
    fn single_vertex_has_the_empty_tree() {
        let g = GraphBuilder::new().vertex("a", 3).build().unwrap();
        assert_eq!(enumerate_trees(&g), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn union_find_rollback() {
        let mut uf = RollbackUnionFind::new(3);
        assert!(uf.union(0, 1));
        assert!(!uf.union(1, 0));
        uf.undo();
        assert_eq!(uf.find(0), uf.find(1));
        uf.undo();
        assert_ne!(uf.find(0), uf.find(1));
    }
}
