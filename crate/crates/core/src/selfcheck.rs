//! Cross-validation of the whole toolkit on an exhaustive graph family.
//!
//! Every check compares two independent routes to the same answer (Smith
//! form against forest sums against brute-force cosets, trees of Ĝ against
//! sub-weighted trees of G, and so on). Random sampling is driven by a seed.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arithmetic::{check_base_change_injectivity, component_group, BaseChange};
use crate::bernardi::{
    default_roots, forest_tour, hat_tree_to_pair, is_balanced_subweighting, is_root_connected,
    lift_roots, tree_divisor, RepresentativeTable,
};
use crate::divisor::{is_balanced, laplacian, Divisor};
use crate::family::{fiber_of, pleasant_graphs, FamilyBounds};
use crate::graph::WeightedGraph;
use crate::hat::expand_hat;
use crate::picard::{
    count_pic0, count_picb0, enumerate_coset_representatives_bruteforce, pic0_structure,
    picb0_structure, reduced_laplacian_determinant,
};
use crate::rewrite::{add_leaf, shrink_vertex_weight, split_edge, split_vertex, SplitPlan};
use crate::trees::enumerate_trees;

#[derive(Clone, Copy, Debug)]
pub struct SelfCheckOptions {
    pub bounds: FamilyBounds,
    pub seed: u64,
    /// Random divisors tried per graph by the sampling checks.
    pub samples: usize,
}

impl Default for SelfCheckOptions {
    fn default() -> Self {
        SelfCheckOptions {
            bounds: FamilyBounds::default(),
            seed: 0,
            samples: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const CHECKS: [&str; 8] = [
    "matrix-tree counts",
    "representatives",
    "hat correspondence",
    "tour orientations",
    "reduction certificates",
    "torsor action",
    "rewrite invariance",
    "index-one collapse",
];

const MAX_REPORTED: usize = 5;

pub fn run(opts: &SelfCheckOptions) -> Vec<CheckOutcome> {
    let mut outcomes: Vec<CheckOutcome> = CHECKS
        .iter()
        .map(|&name| CheckOutcome {
            name,
            cases: 0,
            failures: Vec::new(),
        })
        .collect();
    let mut rng = StdRng::seed_from_u64(opts.seed);
    for g in pleasant_graphs(opts.bounds).iter().filter(|g| g.is_connected()) {
        let results: [Option<Result<(), String>>; 8] = [
            Some(matrix_tree(g)),
            Some(representatives(g)),
            Some(hat_correspondence(g)),
            Some(tours(g)),
            Some(reductions(g, opts.samples, &mut rng)),
            Some(torsor(g, opts.samples, &mut rng)),
            Some(rewrites(g)),
            g.vertices().iter().all(|v| v.weight == 1).then(|| index_one(g)),
        ];
        for (out, r) in outcomes.iter_mut().zip(results) {
            let Some(r) = r else { continue };
            out.cases += 1;
            if let Err(msg) = r {
                if out.failures.len() < MAX_REPORTED {
                    out.failures.push(format!("{g}: {msg}"));
                }
            }
        }
    }
    outcomes
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn matrix_tree(g: &WeightedGraph) -> Result<(), String> {
    let count = count_pic0(g);
    let det = reduced_laplacian_determinant(g);
    let smith = pic0_structure(g).order();
    let brute = enumerate_coset_representatives_bruteforce(g, 0, false).map_err(|e| e.to_string())?;
    ensure(
        count == det && det == smith && smith == BigInt::from(brute.len()),
        || format!("Pic0: forests {count}, det {det}, smith {smith}, brute {}", brute.len()),
    )?;
    let countb = count_picb0(g).map_err(|e| e.to_string())?;
    let smithb = picb0_structure(g).map_err(|e| e.to_string())?.order();
    let bruteb = enumerate_coset_representatives_bruteforce(g, 0, true).map_err(|e| e.to_string())?;
    ensure(
        countb == smithb && smithb == BigInt::from(bruteb.len()),
        || format!("Picb0: formula {countb}, smith {smithb}, brute {}", bruteb.len()),
    )
}

fn representatives(g: &WeightedGraph) -> Result<(), String> {
    let table = RepresentativeTable::new(g, &default_roots(g)).map_err(|e| e.to_string())?;
    let n = table.entries().len();
    ensure(BigInt::from(n) == count_pic0(g), || {
        format!("{n} sub-weighted trees, |Pic0| = {}", count_pic0(g))
    })?;
    let nb = table.balanced_entries(g).count();
    let pb = count_picb0(g).map_err(|e| e.to_string())?;
    ensure(BigInt::from(nb) == pb, || format!("{nb} balanced trees, |Picb0| = {pb}"))?;
    let target = g.weighted_genus() - 1;
    for (ts, d) in table.entries() {
        ensure(d.degree() == target, || format!("deg D = {} for {:?}", d.degree(), ts.forest))?;
        let by_sigma = is_balanced_subweighting(g, ts).map_err(|e| e.to_string())?;
        ensure(by_sigma == is_balanced(g, d), || {
            format!("balanced tests disagree on {:?} σ={:?}", ts.forest, ts.sigma)
        })?;
    }
    Ok(())
}

fn hat_correspondence(g: &WeightedGraph) -> Result<(), String> {
    let hat = expand_hat(g).map_err(|e| e.to_string())?;
    let roots = default_roots(g);
    let hat_roots = lift_roots(&hat, &roots);
    let table = RepresentativeTable::new(g, &roots).map_err(|e| e.to_string())?;
    let mut seen = std::collections::HashSet::new();
    let hat_trees = enumerate_trees(&hat.graph);
    for t in &hat_trees {
        let pair = hat_tree_to_pair(g, &hat, t, &roots).map_err(|e| e.to_string())?;
        let d = tree_divisor(g, &pair).map_err(|e| e.to_string())?;
        let o = forest_tour(&hat.graph, t, &hat_roots).map_err(|e| e.to_string())?;
        let mut expected: Vec<i64> = o.indegrees(g.num_vertices()).iter().map(|x| x - 1).collect();
        for (v, c) in expected.iter_mut().enumerate() {
            *c -= g.vertex_weight(v) as i64 - 1;
        }
        ensure(d == Divisor::new(expected.clone()), || {
            format!("hat tree {t:?}: D = {d}, hat identity gives {}", Divisor::new(expected))
        })?;
        ensure(seen.insert(pair), || format!("hat tree {t:?} collides"))?;
    }
    ensure(seen.len() == table.entries().len(), || {
        format!("{} hat trees, {} sub-weighted trees", seen.len(), table.entries().len())
    })
}

fn tours(g: &WeightedGraph) -> Result<(), String> {
    let roots = default_roots(g);
    let q: Vec<usize> = roots.iter().map(|r| r.vertex).collect();
    for t in enumerate_trees(g) {
        let o = forest_tour(g, &t, &roots).map_err(|e| e.to_string())?;
        ensure(is_root_connected(g, &o, &q), || format!("tour of {t:?} is not root-connected"))?;
    }
    Ok(())
}

fn random_divisor(g: &WeightedGraph, degree: i64, rng: &mut StdRng) -> Divisor {
    let mut c: Vec<i64> = (0..g.num_vertices()).map(|_| rng.gen_range(-4..=4)).collect();
    let s: i64 = c.iter().sum();
    c[0] += degree - s;
    Divisor::new(c)
}

fn reductions(g: &WeightedGraph, samples: usize, rng: &mut StdRng) -> Result<(), String> {
    let table = RepresentativeTable::new(g, &default_roots(g)).map_err(|e| e.to_string())?;
    let target = g.weighted_genus() - 1;
    for _ in 0..samples {
        let d = random_divisor(g, target, rng);
        let (ts, cert) = table.reduce(&d).map_err(|e| e.to_string())?;
        let rep = tree_divisor(g, &ts).map_err(|e| e.to_string())?;
        let delta = laplacian(g, &cert.potential);
        ensure(delta == &d - &rep, || format!("certificate for {d} does not verify"))?;
    }
    Ok(())
}

// A balanced divisor of degree 0 with random coefficients.
fn random_balanced(g: &WeightedGraph, rng: &mut StdRng) -> Divisor {
    let n = g.num_vertices();
    let gcd = g.vertex_weight_gcd() as i64;
    let mut c = vec![0i64; n];
    for _ in 0..3 {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        // ω(u)·ω(v)/gcd moved from v to u keeps both balanced
        let amount = g.vertex_weight(u) as i64 * g.vertex_weight(v) as i64 / gcd * rng.gen_range(-2..=2);
        c[u] += amount;
        c[v] -= amount;
    }
    Divisor::new(c)
}

fn torsor(g: &WeightedGraph, samples: usize, rng: &mut StdRng) -> Result<(), String> {
    let table = RepresentativeTable::new(g, &default_roots(g)).map_err(|e| e.to_string())?;
    let reps: Vec<_> = table.balanced_entries(g).map(|(t, _)| t.clone()).collect();
    let group = enumerate_coset_representatives_bruteforce(g, 0, true).map_err(|e| e.to_string())?;
    let zero = Divisor::zero(g.num_vertices());
    for t in &reps {
        let same = table.act(g, &zero, t).map_err(|e| e.to_string())?;
        ensure(&same == t, || "identity moves a representative".into())?;
    }
    let base = &reps[0];
    let mut orbit = std::collections::HashSet::new();
    for d in &group {
        orbit.insert(table.act(g, d, base).map_err(|e| e.to_string())?);
    }
    ensure(orbit.len() == reps.len(), || {
        format!("orbit has {} of {} representatives", orbit.len(), reps.len())
    })?;
    for _ in 0..samples {
        let (d1, d2) = (random_balanced(g, rng), random_balanced(g, rng));
        let t = &reps[rng.gen_range(0..reps.len())];
        let a = table.act(g, &(&d1 + &d2), t).map_err(|e| e.to_string())?;
        let step = table.act(g, &d2, t).map_err(|e| e.to_string())?;
        let b = table.act(g, &d1, &step).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("acting by {d1} + {d2} is not compatible"))?;
    }
    Ok(())
}

fn rewrites(g: &WeightedGraph) -> Result<(), String> {
    let pic0 = pic0_structure(g);
    let picb0 = picb0_structure(g).map_err(|e| e.to_string())?;
    for v in 0..g.num_vertices() {
        let w = g.vertex_weight(v);
        if w == 1 {
            let h = add_leaf(g, v, 1, 1).map_err(|e| e.to_string())?;
            ensure(pic0_structure(&h) == pic0, || format!("unit leaf at {} changes Pic0", g.vertex(v).label))?;
        }
        let h = add_leaf(g, v, w, w).map_err(|e| e.to_string())?;
        ensure(picb0_structure(&h).map_err(|e| e.to_string())? == picb0, || {
            format!("leaf of weight {w} at {} changes Picb0", g.vertex(v).label)
        })?;
        for d in (1..w).filter(|d| w.is_multiple_of(*d)) {
            let h = shrink_vertex_weight(g, v, d).map_err(|e| e.to_string())?;
            injective(g, &h, &BaseChange::Shrink)?;
        }
        for r in (2..=w as usize).filter(|r| w.is_multiple_of(*r as u64)) {
            let Ok(plan) = SplitPlan::symmetric(g, v, r) else { continue };
            let Ok((h, map)) = split_vertex(g, v, r, &plan) else { continue };
            if h.is_connected() {
                injective(g, &h, &BaseChange::VertexSplit(map))?;
            }
        }
    }
    for e in 0..g.num_edges() {
        let w = g.edge_weight(e);
        let [a, b] = g.edge(e).ends;
        let unit = num_integer::lcm(g.vertex_weight(a), g.vertex_weight(b));
        for k in (unit..w).step_by(unit as usize) {
            let h = split_edge(g, e, &[k, w - k]).map_err(|e| e.to_string())?;
            ensure(h.laplacian_matrix() == g.laplacian_matrix(), || "split changes the Laplacian".into())?;
            ensure(pic0_structure(&h) == pic0, || format!("splitting {} changes Pic0", g.edge(e).label))?;
            injective(g, &h, &BaseChange::EdgeSplit)?;
        }
    }
    Ok(())
}

fn injective(g: &WeightedGraph, h: &WeightedGraph, change: &BaseChange) -> Result<(), String> {
    let r = check_base_change_injectivity(g, h, change).map_err(|e| e.to_string())?;
    ensure(r.injective, || {
        match &r.witness {
            Some((a, b)) => format!("{change:?} into {h} identifies {a} and {b}"),
            None => format!("{change:?} into {h} is not injective"),
        }
    })
}

fn index_one(g: &WeightedGraph) -> Result<(), String> {
    let cg = component_group(&fiber_of(g)).map_err(|e| e.to_string())?;
    let pic0 = pic0_structure(g);
    ensure(cg.group == pic0, || format!("component group {} but Pic0 {pic0}", cg.group))?;
    ensure(BigInt::from(cg.representatives.len()) == pic0.order(), || {
        format!("{} representatives for a group of order {}", cg.representatives.len(), pic0.order())
    })
}
