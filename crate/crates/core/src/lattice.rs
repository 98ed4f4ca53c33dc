//! Exact integer linear algebra: Smith and Hermite normal forms and
//! fraction-free determinants over arbitrary-precision integers.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() {
                        acc += &self[(i, j)] * xj;
                    }
                }
                acc
            })
            .collect()
    }

    /// Same matrix without row `r` and column `c`.
    pub fn minor(&self, r: usize, c: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows - 1, self.cols - 1);
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                let (oi, oj) = (i - usize::from(i > r), j - usize::from(j > c));
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = &self[(src, j)] * k;
            self[(dst, j)] += t;
        }
    }

    // col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = &self[(i, src)] * k;
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let t = -&self[(r, j)];
            self[(r, j)] = t;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let t = -&self[(i, c)];
            self[(i, c)] = t;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diag(diagonal)` with `left`, `right` unimodular and
/// `diagonal[0] | diagonal[1] | …`, the first `rank` entries positive and the
/// rest zero.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries.
    pub fn factors(&self) -> &[BigInt] {
        &self.diagonal[..self.rank]
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    let mut t = 0;

    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&s, t..m, t..n) else {
            break;
        };
        s.swap_rows(t, pi);
        left.swap_rows(t, pi);
        s.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &q);
                left.add_row(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &q);
                right.add_col(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                // a smaller remainder appeared in row or column t; make it the pivot
                let col_best = min_abs_entry(&s, t..m, t..t + 1);
                let row_best = min_abs_entry(&s, t..t + 1, t..n);
                let best = match (col_best, row_best) {
                    (Some(c), Some(r)) => {
                        if s[c].abs() <= s[r].abs() {
                            c
                        } else {
                            r
                        }
                    }
                    (Some(c), None) => c,
                    (None, Some(r)) => r,
                    (None, None) => unreachable!("pivot row and column cannot both vanish"),
                };
                s.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
                s.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
                continue;
            }
            // row and column are clear; enforce divisibility of the remaining block
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&ij| !s[ij].is_multiple_of(&s[(t, t)]));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row(t, i, &one);
                    left.add_row(t, i, &one);
                }
                None => break,
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..m.min(n)).map(|i| s[(i, i)].clone()).collect();
    let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
    SmithForm {
        diagonal,
        left,
        right,
        rank,
    }
}

fn min_abs_entry(
    s: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if s[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|b| s[(i, j)].abs() < s[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Lower-triangular column Hermite form `H = A · U` of a nonsingular square
/// matrix: positive diagonal, and `0 <= H[i][j] < H[i][i]` for `j < i`.
/// Returns `None` when `A` is singular.
pub fn hermite_lower(a: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows, a.cols, "hermite_lower expects a square matrix");
    let n = a.rows;
    let mut h = a.clone();
    for i in 0..n {
        // gather the gcd of row i (columns i..n) into column i
        loop {
            let (_, j) = min_abs_entry(&h, i..i + 1, i..n)?;
            h.swap_cols(i, j);
            let mut done = true;
            for j in i + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(i, i)]);
                h.add_col(j, i, &q);
                done &= h[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(i, i)].is_negative() {
            h.negate_col(i);
        }
        for j in 0..i {
            let q = -h[(i, j)].div_floor(&h[(i, i)]);
            if !q.is_zero() {
                h.add_col(j, i, &q);
            }
        }
    }
    Some(h)
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant expects a square matrix");
    let n = a.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}
