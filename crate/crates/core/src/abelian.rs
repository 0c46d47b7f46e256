//! Exact integer linear algebra.
//!
//! Everything in this module works over arbitrary-precision integers. The
//! central routine is the Smith normal form, from which the structure of
//! finitely generated abelian groups given by generators and relations is
//! read off. Lattice bases handed back to callers are always in column
//! Hermite normal form, so two computations of the same lattice compare
//! equal structurally.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::TorusError;

/// Dense integer matrix, stored row-major.
///
/// Matrices with zero rows or zero columns are valid and stand for maps
/// between trivial or free groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
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

    /// Builds a matrix from row-major data. Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from small integer rows. All rows must have equal length.
    pub fn from_rows<const N: usize>(rows: &[[i64; N]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self::from_vec(rows.len(), N, data)
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self::from_vec(n, cols, data)
    }

    /// Builds an `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column has wrong length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &IntMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        let data = range.clone().flat_map(|i| self.row(i).to_vec()).collect();
        IntMatrix {
            rows: range.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// The determinant of a 0x0 matrix is 1.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.cols - kernel_lattice(self).cols()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] -= c * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = c * &self[(source, j)];
            self[(target, j)] -= delta;
        }
    }

    /// col[target] -= c * col[source]
    fn sub_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = c * &self[(i, source)];
            self[(i, target)] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut m = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] += a * b;
                    }
                }
            }
        }
        m
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;

    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;

    fn neg(self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1, ..., d_min(m,n)`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `(k, k)`.
fn min_abs_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                let one = a.is_one();
                best = Some(((i, j), a));
                if one {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smith normal form with transformation matrices.
///
/// The pivot is always the entry of least absolute value in the remaining
/// block; the diagonal does not depend on that choice.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_abs_pivot(&d, k) else {
                return SnfDecomposition { u, d, v };
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = d[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&pivot);
                d.sub_row_multiple(i, k, &q);
                u.sub_row_multiple(i, k, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&pivot);
                d.sub_col_multiple(j, k, &q);
                v.sub_col_multiple(j, k, &q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the whole remaining block.
            let offender = (k + 1..m)
                .find(|&i| (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.sub_row_multiple(k, i, &minus_one);
                    u.sub_row_multiple(k, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }
    SnfDecomposition { u, d, v }
}

/// Row Hermite normal form of the row span: nonzero rows only, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows(), h.cols());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let p = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()));
            let Some(p) = p else { break };
            h.swap_rows(r, p);
            let pivot = h[(r, c)].clone();
            let mut done = true;
            for i in r + 1..m {
                if !h[(i, c)].is_zero() {
                    let q = h[(i, c)].div_floor(&pivot);
                    h.sub_row_multiple(i, r, &q);
                    done &= h[(i, c)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&pivot);
            h.sub_row_multiple(i, r, &q);
        }
        r += 1;
    }
    h.select_rows(0..r)
}

/// Canonical basis (column Hermite normal form) of the lattice spanned by
/// the columns of `generators`. The result has full column rank.
pub fn column_hnf(generators: &IntMatrix) -> IntMatrix {
    row_hnf(&generators.transpose()).transpose()
}

/// Canonical `Z`-basis of `{x : A x = 0}`, as columns.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let mut v = IntMatrix::identity(n);
    let mut active: Vec<usize> = (0..n).collect();

    for i in 0..a.rows() {
        if active.is_empty() {
            break;
        }
        // row i of A V, on the active columns only
        let row = a.row(i);
        let mut w: Vec<BigInt> = active
            .iter()
            .map(|&j| {
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| x * &v[(k, j)])
                    .sum()
            })
            .collect();
        loop {
            let nonzero: Vec<usize> = (0..active.len()).filter(|&t| !w[t].is_zero()).collect();
            let Some(&p) = nonzero.iter().min_by(|&&x, &&y| w[x].abs().cmp(&w[y].abs())) else {
                break;
            };
            if nonzero.len() == 1 {
                active.remove(p);
                break;
            }
            let pivot = w[p].clone();
            for &t in &nonzero {
                if t != p {
                    let q = w[t].div_floor(&pivot);
                    w[t] -= &q * &pivot;
                    v.sub_col_multiple(active[t], active[p], &q);
                }
            }
        }
    }
    column_hnf(&v.select_columns(&active))
}

/// Solves `B c = T` column by column over the integers.
///
/// Returns `None` when some column of `T` is not in the column lattice of `B`.
/// `B` need not have full column rank; the returned solution is one of many
/// in that case.
pub fn solve_integer(b: &IntMatrix, t: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(b.rows(), t.rows(), "solve_integer dimension mismatch");
    let snf = smith_normal_form(b);
    let diag = snf.diagonal();
    let y = &snf.u * t;
    let k = b.cols();
    let mut z = IntMatrix::zeros(k, t.cols());
    for col in 0..t.cols() {
        for i in 0..b.rows() {
            let yi = &y[(i, col)];
            match diag.get(i) {
                Some(di) if !di.is_zero() => {
                    let (q, r) = yi.div_rem(di);
                    if !r.is_zero() {
                        return None;
                    }
                    z[(i, col)] = q;
                }
                _ => {
                    if !yi.is_zero() {
                        return None;
                    }
                }
            }
        }
    }
    Some(&snf.v * &z)
}

/// Finitely generated abelian group `Z^r + Z/d_1 + ... + Z/d_k` with
/// `1 < d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Normalizes an arbitrary list of cyclic orders (0 meaning `Z`, 1 ignored)
    /// into invariant-factor form.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let diag: Vec<BigInt> = orders.iter().map(|x| x.abs()).collect();
        cokernel_structure(&IntMatrix::diagonal(&diag)).with_extra_free(free_rank)
    }

    fn with_extra_free(mut self, r: usize) -> Self {
        self.free_rank += r;
        self
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_cyclic_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for FinAbGroup {
    /// `ℤ^r ⊕ ℤ/d₁ ⊕ ...`; the trivial group prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("ℤ/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Structure of `Z^m / (column span of A)`.
pub fn cokernel_structure(a: &IntMatrix) -> FinAbGroup {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    FinAbGroup {
        free_rank: a.rows() - rank,
        invariant_factors: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
    }
}

/// Structure of `(span(generators) + R) / R` where `R` is the column span of
/// `relations`. Both matrices live in `Z^m`.
pub fn subgroup_structure_in_quotient(relations: &IntMatrix, generators: &IntMatrix) -> FinAbGroup {
    assert_eq!(
        relations.rows(),
        generators.rows(),
        "relations and generators must live in the same Z^m"
    );
    let basis = column_hnf(&generators.hstack(relations));
    let coords = solve_integer(&basis, relations)
        .expect("relations lie in the lattice they help span");
    cokernel_structure(&coords)
}

/// Structure of `{x + R : M x ∈ R} / R`, the kernel of the endomorphism of
/// `Z^m / R` induced by `M`.
pub fn kernel_of_endomorphism_on_quotient(
    relations: &IntMatrix,
    m: &IntMatrix,
) -> Result<FinAbGroup, TorusError> {
    let dim = relations.rows();
    if m.rows() != dim || m.cols() != dim {
        return Err(TorusError::NotWellDefined(format!(
            "endomorphism is {}x{}, quotient lives in Z^{dim}",
            m.rows(),
            m.cols()
        )));
    }
    if solve_integer(relations, &(m * relations)).is_none() {
        return Err(TorusError::NotWellDefined(
            "endomorphism does not preserve the relation lattice".into(),
        ));
    }
    // x with M x = R y for some y
    let joint = kernel_lattice(&m.hstack(&-relations));
    let preimage = joint.select_rows(0..dim);
    Ok(subgroup_structure_in_quotient(relations, &preimage))
}
