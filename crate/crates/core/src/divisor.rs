//! Divisors on weighted graphs: degree, balancedness, the weighted
//! Laplacian and exact chip-firing equivalence.
//!
//! Equivalence is decided by linear algebra rather than by searching over
//! chip-firing moves. [`PrincipalLattice`] keeps a Smith normal form
//! `U · L · V = S` of the weighted Laplacian `L`; two divisors are equivalent
//! exactly when `U · (D₁ − D₂)` is divisible by the diagonal of `S` (and
//! vanishes past its rank), and then `V · S⁻¹ · U · (D₁ − D₂)` is a potential
//! certifying it.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lattice::{smith_normal_form, IntMatrix, SmithForm};

/// An integer on every vertex, indexed like the vertices of its graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(coefficients: Vec<i64>) -> Self {
        Divisor(coefficients)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// `[v]`.
    pub fn point(n: usize, v: usize) -> Self {
        let mut d = Self::zero(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coefficients(self) -> Vec<i64> {
        self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Degree restricted to a vertex subset.
    pub fn degree_on(&self, vertices: &[usize]) -> i64 {
        vertices.iter().map(|&v| self.0[v]).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor(self.0.iter().map(|c| c * k).collect())
    }
}

impl Index<usize> for Divisor {
    type Output = i64;
    fn index(&self, v: usize) -> &i64 {
        &self.0[v]
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different vertex sets");
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.len(), rhs.len(), "divisors on different vertex sets");
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Residue of each coefficient modulo its vertex weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnbalancingClass(pub Vec<u64>);

impl UnbalancingClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }
}

/// A potential `f` with `Δ(f) = D₁ − D₂`, zero at the least vertex of every
/// connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub potential: Vec<i64>,
}

fn check_len(g: &WeightedGraph, d: &Divisor) -> Result<()> {
    if d.len() != g.num_vertices() {
        return Err(Error::structural(format!(
            "divisor has {} coefficients but the graph has {} vertices",
            d.len(),
            g.num_vertices()
        )));
    }
    Ok(())
}

pub fn is_balanced(g: &WeightedGraph, d: &Divisor) -> bool {
    d.0.iter()
        .enumerate()
        .all(|(v, c)| c.rem_euclid(g.vertex_weight(v) as i64) == 0)
}

pub fn unbalancing_class(g: &WeightedGraph, d: &Divisor) -> UnbalancingClass {
    UnbalancingClass(
        d.0.iter()
            .enumerate()
            .map(|(v, c)| c.rem_euclid(g.vertex_weight(v) as i64) as u64)
            .collect(),
    )
}

/// Δ(f)(v) = Σ over edges {v,w} of ω(e)·(f(v) − f(w)). Loops cancel out.
pub fn laplacian(g: &WeightedGraph, f: &[i64]) -> Divisor {
    assert_eq!(f.len(), g.num_vertices(), "potential must cover every vertex");
    let mut out = vec![0i64; g.num_vertices()];
    for e in g.edges() {
        let [a, b] = e.ends;
        let flow = e.weight as i64 * (f[a] - f[b]);
        out[a] += flow;
        out[b] -= flow;
    }
    Divisor(out)
}

/// The principal divisor obtained by firing vertex `v`.
pub fn chip_fire(g: &WeightedGraph, v: usize) -> Divisor {
    let mut f = vec![0; g.num_vertices()];
    f[v] = 1;
    laplacian(g, &f)
}

/// Key identifying a class in Div(G)/Prin(G). Equal keys ⇔ equivalent divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(Vec<BigInt>);

/// The lattice Prin(G) ⊂ ℤ^V with a retained Smith decomposition.
#[derive(Clone, Debug)]
pub struct PrincipalLattice {
    smith: SmithForm,
    component: Vec<usize>,
    component_root: Vec<usize>,
}

impl PrincipalLattice {
    pub fn new(g: &WeightedGraph) -> Self {
        let smith = smith_normal_form(&IntMatrix::from_rows(&g.laplacian_matrix()));
        let component = g.component_index();
        let component_root = g.components().iter().map(|c| c[0]).collect();
        PrincipalLattice {
            smith,
            component,
            component_root,
        }
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    fn transformed(&self, d: &Divisor) -> Vec<BigInt> {
        let x: Vec<BigInt> = d.0.iter().map(|&c| BigInt::from(c)).collect();
        self.smith.left.mul_vec(&x)
    }

    pub fn class_key(&self, d: &Divisor) -> ClassKey {
        let mut y = self.transformed(d);
        for (yi, di) in y.iter_mut().zip(self.smith.factors()) {
            *yi = yi.mod_floor(di);
        }
        ClassKey(y)
    }

    pub fn is_principal(&self, d: &Divisor) -> bool {
        self.solve(d).is_some()
    }

    /// Finds `f` with `Δ(f) = d`, normalized to vanish at the least vertex
    /// of each component, or `None` if `d` is not principal.
    pub fn solve(&self, d: &Divisor) -> Option<Vec<BigInt>> {
        let y = self.transformed(d);
        let rank = self.smith.rank;
        let mut z = vec![BigInt::zero(); y.len()];
        for (i, yi) in y.iter().enumerate() {
            if i < rank {
                let (q, r) = yi.div_mod_floor(&self.smith.diagonal[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        let mut f = self.smith.right.mul_vec(&z);
        let offsets: Vec<BigInt> = self
            .component_root
            .iter()
            .map(|&r| f[r].clone())
            .collect();
        for (v, fv) in f.iter_mut().enumerate() {
            *fv -= &offsets[self.component[v]];
        }
        Some(f)
    }

    /// A certificate that `d1 ~ d2`, if they are equivalent.
    pub fn certificate(&self, d1: &Divisor, d2: &Divisor) -> Result<Option<EquivalenceCertificate>> {
        let Some(f) = self.solve(&(d1 - d2)) else {
            return Ok(None);
        };
        let potential = f
            .iter()
            .map(|x| {
                x.to_i64()
                    .ok_or_else(|| Error::Overflow(format!("potential value {x} exceeds 64 bits")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(EquivalenceCertificate { potential }))
    }
}

/// Decides chip-firing equivalence, returning a certificate when it holds.
/// Divisors of different degree are simply not equivalent.
pub fn equivalent(
    g: &WeightedGraph,
    d1: &Divisor,
    d2: &Divisor,
) -> Result<Option<EquivalenceCertificate>> {
    check_len(g, d1)?;
    check_len(g, d2)?;
    if d1.degree() != d2.degree() {
        return Ok(None);
    }
    PrincipalLattice::new(g).certificate(d1, d2)
}
