//! Exact integer and rational matrices.
//!
//! `IntMat` carries the lattice machinery: Hermite and Smith normal forms
//! with unimodular transformations, saturated integer kernels and exact
//! determinants. `RatMat` carries the rational side: inverses, congruence
//! diagonalization of symmetric forms. Dimensions are fixed at construction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must match dimensions");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self::new(r, c, data)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Symmetric constructor; checks symmetry.
    pub fn symmetric(n: usize, data: Vec<BigInt>) -> Result<Self> {
        let m = Self::new(n, n, data);
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .map(|x| BigRational::from(x.clone()))
                .collect(),
        )
    }

    /// Entrywise reduction into `[0, m)` plus an all-zero flag.
    pub fn reduce_mod(&self, m: &BigInt) -> (IntMat, bool) {
        assert!(m >= &BigInt::from(2), "modulus must be at least 2");
        let data: Vec<BigInt> = self.data.iter().map(|x| x.mod_floor(m)).collect();
        let is_zero = data.iter().all(Zero::is_zero);
        (IntMat::new(self.rows, self.cols, data), is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&a, k, k).is_zero() {
                // Pivot search below row k.
                let Some(p) = (k + 1..n).find(|&i| !at(&a, i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&a, k, k) * at(&a, i, j) - at(&a, i, k) * at(&a, k, j);
                    a[i * n + j] = num / &prev;
                }
            }
            prev = at(&a, k, k);
        }
        sign * at(&a, n - 1, n - 1)
    }

    /// Row Hermite normal form.
    ///
    /// Returns `(H, U)` with `H = U * self`, `U` unimodular, pivots positive
    /// and entries above each pivot reduced into `[0, pivot)`. Pivot rows are
    /// chosen by minimal absolute value to limit coefficient growth.
    pub fn hnf(&self) -> (IntMat, IntMat) {
        let mut h = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut pivot_row = 0usize;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // Repeated gcd elimination in this column.
            loop {
                let mut best: Option<usize> = None;
                for i in pivot_row..self.rows {
                    if h[(i, col)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some(i),
                        Some(b) => {
                            if h[(i, col)].abs() < h[(b, col)].abs() {
                                best = Some(i);
                            }
                        }
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(pivot_row, b);
                u.swap_rows(pivot_row, b);
                if h[(pivot_row, col)].is_negative() {
                    h.negate_row(pivot_row);
                    u.negate_row(pivot_row);
                }
                let mut done = true;
                let pivot = h[(pivot_row, col)].clone();
                for i in pivot_row + 1..self.rows {
                    if h[(i, col)].is_zero() {
                        continue;
                    }
                    let q = h[(i, col)].div_floor(&pivot);
                    h.row_sub_mul(i, pivot_row, &q);
                    u.row_sub_mul(i, pivot_row, &q);
                    if !h[(i, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    // Reduce the entries above the pivot into [0, pivot).
                    for i in 0..pivot_row {
                        let q = h[(i, col)].div_floor(&pivot);
                        if !q.is_zero() {
                            h.row_sub_mul(i, pivot_row, &q);
                            u.row_sub_mul(i, pivot_row, &q);
                        }
                    }
                    pivot_row += 1;
                    break;
                }
            }
        }
        (h, u)
    }

    /// Basis of the saturated integer kernel `{v : self * v = 0}`, one basis
    /// vector per row. The kernel lattice is a direct summand of `Z^cols`
    /// because the basis comes out of a unimodular transformation.
    pub fn kernel_basis(&self) -> IntMat {
        let (h, u) = self.transpose().hnf();
        let mut rows = Vec::new();
        for i in 0..h.rows() {
            if h.row(i).iter().all(Zero::is_zero) {
                rows.push(u.row(i).to_vec());
            }
        }
        if rows.is_empty() {
            IntMat::zero(0, self.cols)
        } else {
            IntMat::from_rows(rows)
        }
    }

    /// Smith normal form: `(D, U, V)` with `D = U * self * V` diagonal,
    /// nonnegative, each entry dividing the next, and `U`, `V` unimodular.
    pub fn smith_normal_form(&self) -> (IntMat, IntMat, IntMat) {
        let mut d = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut v = IntMat::identity(self.cols);
        let n = self.rows.min(self.cols);

        for k in 0..n {
            'pivot: loop {
                // Smallest nonzero entry of the trailing block becomes the pivot.
                let mut best: Option<(usize, usize)> = None;
                for i in k..d.rows {
                    for j in k..d.cols {
                        if d[(i, j)].is_zero() {
                            continue;
                        }
                        match best {
                            None => best = Some((i, j)),
                            Some((bi, bj)) => {
                                if d[(i, j)].abs() < d[(bi, bj)].abs() {
                                    best = Some((i, j));
                                }
                            }
                        }
                    }
                }
                let Some((bi, bj)) = best else { break };
                d.swap_rows(k, bi);
                u.swap_rows(k, bi);
                d.swap_cols(k, bj);
                v.swap_cols(k, bj);
                if d[(k, k)].is_negative() {
                    d.negate_row(k);
                    u.negate_row(k);
                }
                let pivot = d[(k, k)].clone();
                let mut clean = true;
                for i in k + 1..d.rows {
                    let q = d[(i, k)].div_floor(&pivot);
                    if !q.is_zero() {
                        d.row_sub_mul(i, k, &q);
                        u.row_sub_mul(i, k, &q);
                    }
                    if !d[(i, k)].is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..d.cols {
                    let q = d[(k, j)].div_floor(&pivot);
                    if !q.is_zero() {
                        d.col_sub_mul(j, k, &q);
                        v.col_sub_mul(j, k, &q);
                    }
                    if !d[(k, j)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break 'pivot;
                }
            }
        }

        // Divisibility chain: fold each later diagonal entry into the pivot
        // until d_k | d_j for all j > k.
        for k in 0..n {
            if d[(k, k)].is_zero() {
                continue;
            }
            for j in k + 1..n {
                if d[(j, j)].is_zero() || (&d[(j, j)] % &d[(k, k)]).is_zero() {
                    continue;
                }
                // Add column j to column k, then re-eliminate the 2x2 corner.
                d.col_add(k, j);
                v.col_add(k, j);
                loop {
                    let (a, b) = (d[(k, k)].clone(), d[(j, k)].clone());
                    if b.is_zero() {
                        break;
                    }
                    if a.is_zero() || b.abs() < a.abs() {
                        d.swap_rows(k, j);
                        u.swap_rows(k, j);
                        continue;
                    }
                    let q = b.div_floor(&a);
                    d.row_sub_mul(j, k, &q);
                    u.row_sub_mul(j, k, &q);
                }
                if d[(k, k)].is_negative() {
                    d.negate_row(k);
                    u.negate_row(k);
                }
                let pivot = d[(k, k)].clone();
                let q = d[(k, j)].div_floor(&pivot);
                if !q.is_zero() {
                    d.col_sub_mul(j, k, &q);
                    v.col_sub_mul(j, k, &q);
                }
                // The corner may have ruined later entries in row k / col k;
                // they are re-cleared by construction: only column j changed.
                if d[(j, j)].is_negative() {
                    d.negate_row(j);
                    u.negate_row(j);
                }
                debug_assert!(d[(k, j)].is_zero() && d[(j, k)].is_zero());
            }
        }
        (d, u, v)
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

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -self[(i, j)].clone();
            self[(i, j)] = t;
        }
    }

    /// row_i -= q * row_k
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(i, j)] - q * &self[(k, j)];
            self[(i, j)] = t;
        }
    }

    /// col_j -= q * col_k
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, j)] - q * &self[(i, k)];
            self[(i, j)] = t;
        }
    }

    /// col_j += col_k
    fn col_add(&mut self, j: usize, k: usize) {
        for i in 0..self.rows {
            let t = &self[(i, j)] + &self[(i, k)];
            self[(i, j)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Display for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(rows * cols, data.len(), "entry count must match dimensions");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Integer-matrix view; requires every denominator to be 1.
    pub fn to_int(&self) -> Result<IntMat> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            if !x.is_integer() {
                return Err(Error::NotIntegral);
            }
            data.push(x.to_integer());
        }
        Ok(IntMat::new(self.rows, self.cols, data))
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_row_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        // v (as a row) * self
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| &v[i] * &self[(i, j)])
                    .sum::<BigRational>()
            })
            .collect()
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a[i * n + k].is_zero());
            let Some(p) = pivot else {
                return BigRational::zero();
            };
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pv = a[k * n + k].clone();
            det *= &pv;
            for i in k + 1..n {
                if a[i * n + k].is_zero() {
                    continue;
                }
                let factor = &a[i * n + k] / &pv;
                for j in k..n {
                    let t = &a[i * n + j] - &factor * &a[k * n + j];
                    a[i * n + j] = t;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero())?;
            if p != k {
                for j in 0..n {
                    let t1 = a[(k, j)].clone();
                    a[(k, j)] = a[(p, j)].clone();
                    a[(p, j)] = t1;
                    let t2 = inv[(k, j)].clone();
                    inv[(k, j)] = inv[(p, j)].clone();
                    inv[(p, j)] = t2;
                }
            }
            let pv = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] /= pv.clone();
                inv[(k, j)] /= pv.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let t = &a[(i, j)] - &f * &a[(k, j)];
                    a[(i, j)] = t;
                    let t = &inv[(i, j)] - &f * &inv[(k, j)];
                    inv[(i, j)] = t;
                }
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of congruence-diagonalizing a symmetric rational matrix.
pub struct Diagonalization {
    /// Diagonal entries of `T^t * G * T` in computation order.
    pub diagonal: Vec<BigRational>,
    /// The congruence transform `T`.
    pub transform: RatMat,
    /// Indices of zero diagonal entries (nonempty only for degenerate forms).
    pub zero_positions: Vec<usize>,
}

/// Symmetric Gaussian congruence reduction `T^t G T = diag`.
///
/// A zero pivot with a nonzero off-diagonal partner `G[i][j]` is repaired by
/// the basis move `e_i <- e_i + e_j`. Degenerate directions are kept as
/// explicit zero entries and reported.
pub fn diagonalize_symmetric(g: &RatMat) -> Result<Diagonalization> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut t = RatMat::identity(n);

    for i in 0..n {
        if a[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) {
                // e_i <- e_i + s*e_j; at least one sign gives a nonzero pivot
                // since a[j][j] + 2a[i][j] and a[j][j] - 2a[i][j] cannot both
                // vanish when a[i][j] != 0.
                let two = BigRational::from(BigInt::from(2));
                let plus = &a[(j, j)] + &two * &a[(i, j)];
                let s = if plus.is_zero() {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                for k in 0..n {
                    let add = &s * &a[(j, k)];
                    a[(i, k)] += add;
                }
                for k in 0..n {
                    let add = &s * &a[(k, j)];
                    a[(k, i)] += add;
                }
                for k in 0..n {
                    let add = &s * &t[(k, j)];
                    t[(k, i)] += add;
                }
            }
        }
        if a[(i, i)].is_zero() {
            continue;
        }
        let pivot = a[(i, i)].clone();
        for j in i + 1..n {
            if a[(i, j)].is_zero() {
                continue;
            }
            let coef = &a[(i, j)] / &pivot;
            // e_j <- e_j - coef * e_i, applied to rows, columns and T.
            for k in 0..n {
                let sub = &coef * &a[(i, k)];
                let t2 = &a[(j, k)] - sub;
                a[(j, k)] = t2;
            }
            for k in 0..n {
                let sub = &coef * &a[(k, i)];
                let t2 = &a[(k, j)] - sub;
                a[(k, j)] = t2;
            }
            for k in 0..n {
                let sub = &coef * &t[(k, i)];
                let t2 = &t[(k, j)] - sub;
                t[(k, j)] = t2;
            }
        }
    }

    let diagonal: Vec<BigRational> = (0..n).map(|i| a[(i, i)].clone()).collect();
    let zero_positions = diagonal
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_zero())
        .map(|(i, _)| i)
        .collect();
    Ok(Diagonalization {
        diagonal,
        transform: t,
        zero_positions,
    })
}
