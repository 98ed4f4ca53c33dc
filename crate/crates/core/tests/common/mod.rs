//! Independent oracles for integration tests.
//!
//! Divisor classes are decided by solving the reduced Laplacian system over
//! the rationals: for a connected graph and divisors of equal degree,
//! D ~ D' iff L_q⁻¹(D − D') restricted to V∖q is integral. Nothing here uses
//! the crate's lattice code.

#![allow(dead_code)]

use std::collections::HashSet;

use num_rational::Ratio;
use wchip::graph::{HalfEdge, WeightedGraph};

pub type Q = Ratio<i128>;

pub struct ClassOracle {
    q: usize,
    others: Vec<usize>,
    inverse: Vec<Vec<Q>>,
    pub det: i128,
}

/// The weighted Laplacian, built straight from the edge list.
pub fn laplacian(g: &WeightedGraph) -> Vec<Vec<i128>> {
    let n = g.num_vertices();
    let mut l = vec![vec![0i128; n]; n];
    for e in g.edges() {
        let [a, b] = e.ends;
        if a == b {
            continue;
        }
        let w = e.weight as i128;
        l[a][a] += w;
        l[b][b] += w;
        l[a][b] -= w;
        l[b][a] -= w;
    }
    l
}

impl ClassOracle {
    /// Needs a connected graph.
    pub fn new(g: &WeightedGraph) -> Self {
        let l = laplacian(g);
        let q = 0;
        let others: Vec<usize> = (0..g.num_vertices()).filter(|&v| v != q).collect();
        let k = others.len();
        // Gauss–Jordan on [L_q | I]
        let mut a: Vec<Vec<Q>> = others
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut row: Vec<Q> = others.iter().map(|&c| Q::from(l[r][c])).collect();
                row.extend((0..k).map(|j| Q::from((i == j) as i128)));
                row
            })
            .collect();
        let mut det = Q::from(1);
        for col in 0..k {
            let p = (col..k)
                .find(|&r| a[r][col] != Q::from(0))
                .expect("reduced Laplacian of a connected graph is invertible");
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col];
            det *= pivot;
            for x in a[col].iter_mut() {
                *x /= pivot;
            }
            for r in 0..k {
                if r != col && a[r][col] != Q::from(0) {
                    let f = a[r][col];
                    let src = a[col].clone();
                    for (x, s) in a[r].iter_mut().zip(src) {
                        *x -= f * s;
                    }
                }
            }
        }
        assert!(det.is_integer());
        let inverse = a.into_iter().map(|row| row[k..].to_vec()).collect();
        ClassOracle {
            q,
            others,
            inverse,
            det: det.to_integer().abs(),
        }
    }

    /// Equal keys ⇔ equivalent, for divisors of equal degree.
    pub fn key(&self, d: &[i64]) -> Vec<Q> {
        self.inverse
            .iter()
            .map(|row| {
                let x: Q = row
                    .iter()
                    .zip(&self.others)
                    .map(|(c, &v)| *c * Q::from(d[v] as i128))
                    .sum();
                x - x.floor()
            })
            .collect()
    }

    pub fn root(&self) -> usize {
        self.q
    }

    /// Order of the subgroup of Pic⁰ generated by the given degree-0 divisors.
    pub fn generated_order(&self, gens: &[Vec<i64>]) -> usize {
        let gen_keys: Vec<Vec<Q>> = gens.iter().map(|d| self.key(d)).collect();
        let zero = vec![Q::from(0); self.others.len()];
        let mut seen: HashSet<Vec<Q>> = HashSet::from([zero.clone()]);
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            for gk in &gen_keys {
                let y: Vec<Q> = x
                    .iter()
                    .zip(gk)
                    .map(|(a, b)| {
                        let s = *a + *b;
                        s - s.floor()
                    })
                    .collect();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.len()
    }
}

/// |Pic⁰|, |Pic_b⁰| of a connected graph by closure of generators.
pub fn group_orders(g: &WeightedGraph, oracle: &ClassOracle) -> (usize, usize) {
    let n = g.num_vertices();
    let unit = |i: usize, j: usize, k: i64| {
        let mut d = vec![0i64; n];
        d[i] += k;
        d[j] -= k;
        d
    };
    let all: Vec<Vec<i64>> = (1..n).map(|v| unit(v, 0, 1)).collect();
    // the kernel of y ↦ Σ ω(v)·y(v) is spanned by the pairwise relations
    let mut balanced = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let l = num_integer::lcm(g.vertex_weight(i), g.vertex_weight(j)) as i64;
            balanced.push(unit(i, j, l));
        }
    }
    (oracle.generated_order(&all), oracle.generated_order(&balanced))
}

pub fn is_balanced(g: &WeightedGraph, d: &[i64]) -> bool {
    d.iter()
        .enumerate()
        .all(|(v, c)| c.rem_euclid(g.vertex_weight(v) as i64) == 0)
}

/// The tour orientation as (tail, head) per edge: tree edges leave the
/// current vertex and the walk crosses them; other edges point at it and
/// the walk turns to the next half-edge.
pub fn tour(g: &WeightedGraph, tree: &[usize], start: Option<HalfEdge>) -> Vec<(usize, usize)> {
    let mut in_tree = vec![false; g.num_edges()];
    for &e in tree {
        in_tree[e] = true;
    }
    let mut arcs: Vec<Option<(usize, usize)>> = vec![None; g.num_edges()];
    if let Some(e0) = start {
        let mut h = e0;
        loop {
            let edge = g.edge(h.edge);
            let here = edge.ends[h.side];
            let there = edge.ends[1 - h.side];
            if in_tree[h.edge] {
                arcs[h.edge].get_or_insert((here, there));
                h = g.next_in_ribbon(h.twin());
            } else {
                arcs[h.edge].get_or_insert((there, here));
                h = g.next_in_ribbon(h);
            }
            if h == e0 {
                break;
            }
        }
    }
    arcs.into_iter()
        .map(|a| a.expect("every edge is reached by the tour"))
        .collect()
}

/// Σ_into σ + Σ_out (ω − σ) − ω(v).
pub fn tree_divisor(g: &WeightedGraph, arcs: &[(usize, usize)], sigma: &[u64]) -> Vec<i64> {
    let mut d: Vec<i64> = g.vertices().iter().map(|v| -(v.weight as i64)).collect();
    for (e, &(tail, head)) in arcs.iter().enumerate() {
        d[head] += sigma[e] as i64;
        d[tail] += (g.edge_weight(e) - sigma[e]) as i64;
    }
    d
}

pub fn indegree_divisor(n: usize, arcs: &[(usize, usize)]) -> Vec<i64> {
    let mut d = vec![-1i64; n];
    for &(_, head) in arcs {
        d[head] += 1;
    }
    d
}
