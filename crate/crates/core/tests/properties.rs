mod common;

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use proptest::prelude::*;
use wchip::arithmetic::{component_group, dual_graph, psi_map, FiberComponent, FiberNode, SpecialFiberDescription};
use wchip::bernardi::{default_roots, hat_tree_to_pair, tour, RepresentativeTable};
use wchip::divisor::{chip_fire, is_balanced, laplacian, unbalancing_class, Divisor, PrincipalLattice};
use wchip::family::{pleasant_graphs, FamilyBounds};
use wchip::graph::{Edge, GraphBuilder, Vertex, WeightedGraph};
use wchip::hat::expand_hat;
use wchip::io;
use wchip::picard::{count_pic0, count_picb0, pic0_structure, picb0_structure, AbelianGroupStructure};
use wchip::rewrite::{add_leaf, shrink_vertex_weight, split_edge, split_vertex, SplitPlan};
use wchip::trees::enumerate_trees;

/// A pleasant graph with up to `n` vertices and `m` edges, weights ≤ 3.
fn pleasant_graph(n: usize, m: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=n)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(1u64..=3, n),
                prop::collection::vec((0..n, 0..n, 1u64..=2), 0..=m),
            )
        })
        .prop_map(|(ws, es)| {
            let vertices = ws
                .iter()
                .enumerate()
                .map(|(i, &w)| Vertex {
                    label: format!("v{}", i + 1),
                    weight: w,
                })
                .collect();
            let edges = es
                .iter()
                .enumerate()
                .map(|(i, &(a, b, k))| Edge {
                    label: format!("e{}", i + 1),
                    ends: [a, b],
                    weight: num_integer::lcm(ws[a], ws[b]) * k,
                })
                .collect();
            WeightedGraph::new(vertices, edges, None).unwrap()
        })
}

fn connected_graph(n: usize, m: usize) -> impl Strategy<Value = WeightedGraph> {
    pleasant_graph(n, m).prop_filter("connected", |g| g.is_connected())
}

fn small_family() -> Vec<WeightedGraph> {
    pleasant_graphs(FamilyBounds {
        max_vertices: 3,
        max_edges: 4,
        max_weight: 3,
        connected_only: true,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hat_is_unweighted_with_shifted_genus(g in pleasant_graph(4, 5)) {
        let hat = expand_hat(&g).unwrap();
        prop_assert!(hat.graph.validate().pleasant);
        prop_assert!(hat.graph.vertices().iter().all(|v| v.weight == 1));
        let shift: i64 = g.vertices().iter().map(|v| v.weight as i64 - 1).sum();
        prop_assert_eq!(hat.graph.weighted_genus(), g.weighted_genus() + shift);
    }

    #[test]
    fn rewrites_stay_pleasant(g in pleasant_graph(4, 4), pick in any::<prop::sample::Index>()) {
        let v = pick.index(g.num_vertices());
        let w = g.vertex_weight(v);
        prop_assert!(add_leaf(&g, v, w, 2 * w).unwrap().validate().pleasant);
        for d in (1..=w).filter(|d| w % d == 0) {
            prop_assert!(shrink_vertex_weight(&g, v, d).unwrap().validate().pleasant);
        }
        if let Ok(plan) = SplitPlan::symmetric(&g, v, w as usize) {
            match split_vertex(&g, v, w as usize, &plan) {
                Ok((h, _)) => prop_assert!(h.validate().pleasant),
                Err(e) => prop_assert!(e.is_precondition()),
            }
        }
        if g.num_edges() > 0 {
            let e = pick.index(g.num_edges());
            let [a, b] = g.edge(e).ends;
            let unit = num_integer::lcm(g.vertex_weight(a), g.vertex_weight(b));
            let parts = vec![unit; (g.edge_weight(e) / unit) as usize];
            let h = split_edge(&g, e, &parts).unwrap();
            prop_assert!(h.validate().pleasant);
            prop_assert_eq!(h.laplacian_matrix(), g.laplacian_matrix());
        }
    }

    #[test]
    fn principal_divisors(g in pleasant_graph(4, 5), f in prop::collection::vec(-5i64..=5, 4)) {
        let f = &f[..g.num_vertices()];
        let d = laplacian(&g, f);
        prop_assert_eq!(d.degree(), 0);
        prop_assert!(is_balanced(&g, &d));
        for v in 0..g.num_vertices() {
            let mut ind = vec![0; g.num_vertices()];
            ind[v] = 1;
            prop_assert_eq!(chip_fire(&g, v), laplacian(&g, &ind));
        }
    }

    #[test]
    fn group_order_ratio(g in connected_graph(4, 5)) {
        let prod: u64 = g.vertices().iter().map(|v| v.weight).product();
        let ratio = BigInt::from(prod / g.vertex_weight_gcd());
        prop_assert_eq!(count_pic0(&g), count_picb0(&g).unwrap() * ratio);
        prop_assert_eq!(pic0_structure(&g).order(), count_pic0(&g));
        prop_assert_eq!(picb0_structure(&g).unwrap().order(), count_picb0(&g).unwrap());
    }

    #[test]
    fn reduce_inverts_tree_divisor(g in connected_graph(3, 4)) {
        let table = RepresentativeTable::new(&g, &default_roots(&g)).unwrap();
        for (ts, d) in table.entries() {
            let (back, cert) = table.reduce(d).unwrap();
            prop_assert_eq!(&back, ts);
            prop_assert!(cert.potential.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn reduction_agrees_with_oracle(g in connected_graph(4, 5), c in prop::collection::vec(-6i64..=6, 4)) {
        let oracle = common::ClassOracle::new(&g);
        let table = RepresentativeTable::new(&g, &default_roots(&g)).unwrap();
        let mut c = c[..g.num_vertices()].to_vec();
        c[0] += g.weighted_genus() - 1 - c.iter().sum::<i64>();
        let d = Divisor::new(c);
        let (ts, cert) = table.reduce(&d).unwrap();
        let rep = table.entries().iter().find(|(t, _)| *t == ts).unwrap().1.clone();
        prop_assert_eq!(oracle.key(d.coefficients()), oracle.key(rep.coefficients()));
        prop_assert_eq!(laplacian(&g, &cert.potential), &d - &rep);
    }

    #[test]
    fn fibers_ingest_as_pleasant_graphs(
        idx in prop::collection::vec(1u64..=3, 1..=4),
        nodes in prop::collection::vec((0usize..4, 0usize..4, 1u64..=6), 0..=4),
    ) {
        let f = SpecialFiberDescription {
            components: idx.iter().enumerate().map(|(i, &index)| FiberComponent { id: format!("C{i}"), index }).collect(),
            nodes: nodes
                .iter()
                .enumerate()
                .map(|(i, &(a, b, degree))| FiberNode {
                    id: format!("p{i}"),
                    ends: [format!("C{}", a % idx.len()), format!("C{}", b % idx.len())],
                    degree,
                })
                .collect(),
        };
        match dual_graph(&f) {
            Ok(g) => {
                prop_assert!(g.validate().pleasant);
                let cg = component_group(&f).unwrap();
                if g.is_connected() {
                    prop_assert_eq!(BigInt::from(cg.representatives.len()), count_picb0(&g).unwrap());
                }
                prop_assert_eq!(cg.connected, g.is_connected());
            }
            Err(e) => prop_assert!(e.to_string().contains("does not divide")),
        }
    }

    #[test]
    fn graph_json_round_trips(g in pleasant_graph(4, 5)) {
        let s = io::graph_to_json(&g).to_string();
        let back = io::graph_from_str(&s).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(io::graph_to_json(&back).to_string(), s);
    }

    #[test]
    fn divisor_json_round_trips(g in pleasant_graph(4, 2), c in prop::collection::vec(any::<i64>(), 4)) {
        let d = Divisor::new(c[..g.num_vertices()].to_vec());
        let v = io::divisor_to_json(&g, &d);
        prop_assert_eq!(io::divisor_from_json(&g, &v).unwrap(), d);
    }
}

#[test]
fn subweighted_tree_and_group_json_round_trip() {
    for g in small_family().iter().step_by(7) {
        let table = RepresentativeTable::new(g, &default_roots(g)).unwrap();
        for (ts, _) in table.entries() {
            let v = io::subweighted_tree_to_json(g, ts);
            assert_eq!(&io::subweighted_tree_from_json(g, &v).unwrap(), ts);
        }
        let a = pic0_structure(g);
        assert_eq!(io::group_from_json(&io::group_to_json(&a)).unwrap(), a);
    }
}

#[test]
fn degree_zero_unbalancing_classes() {
    // depends only on the vertex weights
    for n in 1..=4u32 {
        for code in 0..3u64.pow(n) {
            let ws: Vec<u64> = (0..n).map(|i| code / 3u64.pow(i) % 3 + 1).collect();
            let vertices = ws
                .iter()
                .enumerate()
                .map(|(i, &w)| Vertex { label: format!("v{i}"), weight: w })
                .collect();
            let g = WeightedGraph::new(vertices, vec![], None).unwrap();
            let l = ws.iter().copied().fold(1, num_integer::lcm) as i64;
            let mut classes = BTreeSet::new();
            let rest = ws.len() - 1;
            for code in 0..(l as u64).pow(rest as u32) {
                let mut c: Vec<i64> = (0..rest).map(|i| (code / (l as u64).pow(i as u32) % l as u64) as i64).collect();
                c.insert(0, -c.iter().sum::<i64>());
                classes.insert(unbalancing_class(&g, &Divisor::new(c)));
            }
            let expected = ws.iter().product::<u64>() / g.vertex_weight_gcd();
            assert_eq!(classes.len() as u64, expected, "weights {ws:?}");
        }
    }
}

#[test]
fn disconnected_graphs_are_direct_sums() {
    let family = pleasant_graphs(FamilyBounds {
        max_vertices: 4,
        max_edges: 4,
        max_weight: 3,
        connected_only: false,
    });
    let mut checked = 0;
    for g in family.iter().filter(|g| !g.is_connected()) {
        let parts: Vec<WeightedGraph> = g.components().iter().map(|c| induced(g, c)).collect();
        let pic0: Vec<_> = parts.iter().map(pic0_structure).collect();
        let picb0: Vec<_> = parts.iter().map(|h| picb0_structure(h).unwrap()).collect();
        assert_eq!(pic0_structure(g), AbelianGroupStructure::direct_sum(&pic0), "{g}");
        assert_eq!(picb0_structure(g).unwrap(), AbelianGroupStructure::direct_sum(&picb0), "{g}");
        let counts: BigInt = parts.iter().map(count_pic0).product();
        assert_eq!(count_pic0(g), counts);
        let table = RepresentativeTable::new(g, &default_roots(g)).unwrap();
        assert_eq!(BigInt::from(table.entries().len()), counts);
        checked += 1;
    }
    assert!(checked > 100);
}

fn induced(g: &WeightedGraph, comp: &[usize]) -> WeightedGraph {
    let mut b = GraphBuilder::new();
    for &v in comp {
        b = b.vertex(&g.vertex(v).label, g.vertex_weight(v));
    }
    for e in g.edges().iter().filter(|e| comp.contains(&e.ends[0])) {
        b = b.edge(&e.label, &g.vertex(e.ends[0]).label, &g.vertex(e.ends[1]).label, e.weight);
    }
    b.build().unwrap()
}

#[test]
fn tree_copies_cover_every_sigma_value() {
    for g in small_family() {
        let hat = expand_hat(&g).unwrap();
        let roots = default_roots(&g);
        for t in enumerate_trees(&hat.graph) {
            let base = hat_tree_to_pair(&g, &hat, &t, &roots).unwrap();
            for (slot, &c) in t.iter().enumerate() {
                let e = hat.original(c);
                let mut seen = Vec::new();
                for copy in hat.copies(e) {
                    let mut t2 = t.clone();
                    t2[slot] = copy;
                    t2.sort_unstable();
                    let pair = hat_tree_to_pair(&g, &hat, &t2, &roots).unwrap();
                    assert_eq!(pair.forest, base.forest);
                    for f in (0..g.num_edges()).filter(|&f| f != e) {
                        assert_eq!(pair.sigma[f], base.sigma[f], "{g}");
                    }
                    seen.push(pair.sigma[e]);
                }
                seen.sort_unstable();
                let want: Vec<u64> = (1..=g.edge_weight(e)).collect();
                assert_eq!(seen, want, "{g}: edge {}", g.edge(e).label);
            }
        }
    }
}

#[test]
fn tours_orient_every_edge_and_reach_everything() {
    for g in small_family() {
        let q = 0;
        let Some(&e0) = g.ribbon(q).first() else { continue };
        for t in enumerate_trees(&g) {
            let o = tour(&g, &t, q, e0).unwrap();
            assert_eq!(o.arcs(), common::tour(&g, &t, Some(e0)).as_slice(), "{g}");
            let mut reached = vec![false; g.num_vertices()];
            reached[q] = true;
            let mut stack = vec![q];
            while let Some(v) = stack.pop() {
                for &(tail, head) in o.arcs() {
                    if tail == v && !reached[head] {
                        reached[head] = true;
                        stack.push(head);
                    }
                }
            }
            assert!(reached.iter().all(|&r| r), "{g}");
        }
    }
}

#[test]
fn triangle_orientable_divisors_exhaust_the_jacobian() {
    let g = GraphBuilder::new()
        .vertex("v1", 1)
        .vertex("v2", 1)
        .vertex("v3", 1)
        .edge("v1v2", "v1", "v2", 1)
        .edge("v1v3", "v1", "v3", 1)
        .edge("v2v3", "v2", "v3", 1)
        .build()
        .unwrap();
    let q = 1;
    let e0 = g.half_edge_at(0, q).unwrap();
    let found: HashSet<Vec<i64>> = enumerate_trees(&g)
        .iter()
        .map(|t| common::indegree_divisor(3, tour(&g, t, q, e0).unwrap().arcs()))
        .collect();
    let expected: HashSet<Vec<i64>> = [vec![0, -1, 1], vec![1, -1, 0], vec![0, 0, 0]].into_iter().collect();
    assert_eq!(found, expected);
    let lattice = PrincipalLattice::new(&g);
    let keys: HashSet<_> = found.iter().map(|d| lattice.class_key(&Divisor::new(d.clone()))).collect();
    assert_eq!(keys.len(), 3);
    assert_eq!(count_pic0(&g), BigInt::from(3));
}

#[test]
fn psi_preserves_principal_divisors() {
    let mut splits = 0;
    for g in small_family() {
        for v in 0..g.num_vertices() {
            let w = g.vertex_weight(v) as usize;
            for r in (2..=w).filter(|r| w.is_multiple_of(*r)) {
                let Ok(plan) = SplitPlan::symmetric(&g, v, r) else { continue };
                let Ok((h, map)) = split_vertex(&g, v, r, &plan) else { continue };
                let lattice = PrincipalLattice::new(&h);
                for u in 0..g.num_vertices() {
                    let p = psi_map(&g, &map, &chip_fire(&g, u)).unwrap();
                    assert!(lattice.is_principal(&p), "{g}: firing {u}");
                }
                splits += 1;
            }
        }
    }
    assert!(splits > 50);
}
