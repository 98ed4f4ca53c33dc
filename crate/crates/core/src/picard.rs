//! Group structure and order of Pic⁰(G) and of its balanced subgroup
//! Pic_b⁰(G), the weighted tree-sum counts, and a brute-force coset oracle.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::divisor::{is_balanced, Divisor, PrincipalLattice};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::lattice::{determinant, hermite_lower, smith_normal_form, IntMatrix};
use crate::trees::enumerate_forests;

/// A finite abelian group ℤ/d₁ ⊕ … ⊕ ℤ/d_k with d₁ | d₂ | … and every dᵢ ≥ 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Validates the divisibility chain.
    pub fn new(invariant_factors: Vec<BigInt>) -> Result<Self> {
        if invariant_factors.iter().any(|d| *d < BigInt::from(2)) {
            return Err(Error::structural("invariant factors must be at least 2"));
        }
        if invariant_factors
            .windows(2)
            .any(|w| !w[1].is_multiple_of(&w[0]))
        {
            return Err(Error::structural("invariant factors must form a divisibility chain"));
        }
        Ok(AbelianGroupStructure { invariant_factors })
    }

    /// Builds the structure from arbitrary Smith diagonal entries, dropping
    /// units and zeros.
    pub(crate) fn from_smith_factors(factors: &[BigInt]) -> Self {
        AbelianGroupStructure {
            invariant_factors: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Re-normalizes a direct sum of cyclic groups into invariant factors.
    pub fn direct_sum(parts: &[AbelianGroupStructure]) -> Self {
        let cyclic: Vec<BigInt> = parts
            .iter()
            .flat_map(|p| p.invariant_factors.iter().cloned())
            .collect();
        let k = cyclic.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, d) in cyclic.into_iter().enumerate() {
            m[(i, i)] = d;
        }
        Self::from_smith_factors(smith_normal_form(&m).factors())
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Pic⁰(G): torsion of ℤ^V / Δ(ℤ^V). For a disconnected graph this is the
/// direct sum of the per-component Jacobians.
pub fn pic0_structure(g: &WeightedGraph) -> AbelianGroupStructure {
    let l = IntMatrix::from_rows(&g.laplacian_matrix());
    AbelianGroupStructure::from_smith_factors(smith_normal_form(&l).factors())
}

/// Pic_b⁰(G) = Div_b⁰(G)/Prin(G).
///
/// Writing balanced divisors as `W·y` with `W = diag(ω(v))`, the principal
/// lattice becomes the image of `W⁻¹·L`, which is integral exactly when the
/// weighting is pleasant.
pub fn picb0_structure(g: &WeightedGraph) -> Result<AbelianGroupStructure> {
    require_pleasant(g)?;
    let mut rows = g.laplacian_matrix();
    for (v, row) in rows.iter_mut().enumerate() {
        let w = g.vertex_weight(v) as i64;
        for x in row.iter_mut() {
            debug_assert_eq!(*x % w, 0);
            *x /= w;
        }
    }
    let m = IntMatrix::from_rows(&rows);
    Ok(AbelianGroupStructure::from_smith_factors(
        smith_normal_form(&m).factors(),
    ))
}

fn require_pleasant(g: &WeightedGraph) -> Result<()> {
    if g.is_pleasant() {
        Ok(())
    } else {
        Err(Error::precondition(
            "graph is not pleasant: principal divisors need not be balanced",
        ))
    }
}

/// Σ over maximal spanning forests of Π ω(e), the order of Pic⁰(G).
pub fn count_pic0(g: &WeightedGraph) -> BigInt {
    enumerate_forests(g)
        .iter()
        .map(|t| {
            t.iter()
                .map(|&e| BigInt::from(g.edge_weight(e)))
                .product::<BigInt>()
        })
        .sum()
}

/// (ω(G) / Π ω(v)) · count_pic0, taken per component.
pub fn count_picb0(g: &WeightedGraph) -> Result<BigInt> {
    require_pleasant(g)?;
    let mut numerator = count_pic0(g);
    let mut denominator = BigInt::one();
    for comp in g.components() {
        let gcd = comp
            .iter()
            .fold(0u64, |acc, &v| acc.gcd(&g.vertex_weight(v)));
        numerator *= gcd;
        for &v in &comp {
            denominator *= g.vertex_weight(v);
        }
    }
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::invariant(format!(
            "balanced count {numerator}/{denominator} is not an integer"
        )));
    }
    Ok(q)
}

/// Product over components of the determinant of the Laplacian with the
/// row and column of the component's least vertex removed.
pub fn reduced_laplacian_determinant(g: &WeightedGraph) -> BigInt {
    let full = g.laplacian_matrix();
    g.components()
        .iter()
        .map(|comp| {
            let rows: Vec<Vec<i64>> = comp[1..]
                .iter()
                .map(|&i| comp[1..].iter().map(|&j| full[i][j]).collect())
                .collect();
            if rows.is_empty() {
                BigInt::one()
            } else {
                determinant(&IntMatrix::from_rows(&rows))
            }
        })
        .product()
}

/// One representative per Prin(G)-coset of Div^d(G) (or of the balanced
/// divisors of degree `d`), in lexicographic order of the search box.
///
/// The box comes from the lower Hermite form `H` of the reduced Laplacian:
/// coordinates at the non-root vertices range over `0..H[i][i]`, the root
/// absorbs the degree. That box meets every class; each candidate is then
/// deduplicated by explicit equivalence testing.
pub fn enumerate_coset_representatives_bruteforce(
    g: &WeightedGraph,
    degree: i64,
    balanced_only: bool,
) -> Result<Vec<Divisor>> {
    if !g.is_connected() {
        return Err(Error::precondition("coset enumeration needs a connected graph"));
    }
    if balanced_only {
        require_pleasant(g)?;
    }
    let n = g.num_vertices();
    let reduced = IntMatrix::from_rows(&g.laplacian_matrix()).minor(0, 0);
    let bounds: Vec<i64> = if n == 1 {
        Vec::new()
    } else {
        let h = hermite_lower(&reduced)
            .ok_or_else(|| Error::invariant("reduced Laplacian of a connected graph is singular"))?;
        (0..n - 1)
            .map(|i| {
                h[(i, i)]
                    .to_i64()
                    .ok_or_else(|| Error::Overflow("search box exceeds 64 bits".into()))
            })
            .collect::<Result<_>>()?
    };

    let lattice = PrincipalLattice::new(g);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut coords = vec![0i64; n - 1];
    loop {
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(degree - coords.iter().sum::<i64>());
        coeffs.extend_from_slice(&coords);
        let d = Divisor::new(coeffs);
        if (!balanced_only || is_balanced(g, &d)) && seen.insert(lattice.class_key(&d)) {
            out.push(d);
        }
        // odometer, last coordinate fastest
        let mut i = coords.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < bounds[i] {
                break;
            }
            coords[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn tw() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("v2", 1)
            .vertex("v1", 2)
            .vertex("v3", 1)
            .edge("a", "v1", "v2", 2)
            .edge("b", "v1", "v3", 2)
            .edge("c", "v2", "v3", 1)
            .build()
            .unwrap()
    }

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

    fn fig1() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("v1", 2)
            .vertex("v2", 1)
            .vertex("v3", 1)
            .edge("e1", "v1", "v2", 2)
            .edge("e2", "v1", "v3", 2)
            .edge("e3", "v2", "v3", 2)
            .edge("e4", "v2", "v3", 1)
            .build()
            .unwrap()
    }

    fn two_vertex_double() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("u", 2)
            .vertex("w", 1)
            .edge("p", "u", "w", 2)
            .edge("q", "u", "w", 2)
            .build()
            .unwrap()
    }

    fn factors(s: &AbelianGroupStructure) -> Vec<i64> {
        s.invariant_factors().iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn pic0_examples() {
        assert_eq!(factors(&pic0_structure(&triangle())), vec![3]);
        assert_eq!(factors(&pic0_structure(&tw())), vec![8]);
        let single = GraphBuilder::new().vertex("v", 5).build().unwrap();
        assert!(pic0_structure(&single).is_trivial());
    }

    #[test]
    fn picb0_examples() {
        assert_eq!(factors(&picb0_structure(&tw()).unwrap()), vec![4]);
        assert_eq!(picb0_structure(&triangle()).unwrap(), pic0_structure(&triangle()));
        assert_eq!(factors(&picb0_structure(&two_vertex_double()).unwrap()), vec![2]);
    }

    #[test]
    fn picb0_rejects_unpleasant() {
        let g = GraphBuilder::new()
            .vertex("a", 2)
            .vertex("b", 1)
            .edge("x", "a", "b", 1)
            .build()
            .unwrap();
        assert!(picb0_structure(&g).unwrap_err().is_precondition());
        assert!(count_picb0(&g).unwrap_err().is_precondition());
    }

    #[test]
    fn counts() {
        assert_eq!(count_pic0(&tw()), BigInt::from(8));
        assert_eq!(count_pic0(&triangle()), BigInt::from(3));
        assert_eq!(count_pic0(&fig1()), BigInt::from(16));
        assert_eq!(count_picb0(&tw()).unwrap(), BigInt::from(4));
        assert_eq!(count_picb0(&triangle()).unwrap(), BigInt::from(3));
        assert_eq!(count_picb0(&fig1()).unwrap(), BigInt::from(8));
        assert_eq!(reduced_laplacian_determinant(&tw()), BigInt::from(8));
    }

    #[test]
    fn bruteforce_representatives() {
        let reps = enumerate_coset_representatives_bruteforce(&tw(), 1, true).unwrap();
        assert_eq!(reps.len(), 4);
        let all = enumerate_coset_representatives_bruteforce(&tw(), 0, false).unwrap();
        assert_eq!(all.len(), 8);
        let single = GraphBuilder::new().vertex("v", 3).build().unwrap();
        assert_eq!(
            enumerate_coset_representatives_bruteforce(&single, 0, false).unwrap(),
            vec![Divisor::new(vec![0])]
        );
    }

    #[test]
    fn direct_sum_renormalizes() {
        let a = AbelianGroupStructure::new(vec![BigInt::from(2)]).unwrap();
        let b = AbelianGroupStructure::new(vec![BigInt::from(3)]).unwrap();
        let s = AbelianGroupStructure::direct_sum(&[a.clone(), b]);
        assert_eq!(factors(&s), vec![6]);
        let s = AbelianGroupStructure::direct_sum(&[a.clone(), a]);
        assert_eq!(factors(&s), vec![2, 2]);
        assert!(AbelianGroupStructure::new(vec![BigInt::from(4), BigInt::from(6)]).is_err());
    }
}
