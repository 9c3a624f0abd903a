//! Number fields from defining polynomials.
//!
//! `field_from_poly` accepts any irreducible integer polynomial (non-monic
//! inputs are rescaled through the leading coefficient), certifies
//! irreducibility through mod-p data, and computes the maximal order by the
//! Round-2 enlargement: at each prime whose square divides the polynomial
//! discriminant, the p-radical of the current order is the kernel of an
//! iterated Frobenius, and the ring of multipliers of that radical either
//! grows the order or certifies p-maximality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::CoreConfig;
use crate::error::{Error, Result};
use crate::intfactor::{factor_integer, primes_up_to, PrimeFactorization};
use crate::matrix::{IntMat, RatMat};
use crate::modp;
use crate::poly::{poly_discriminant, sturm_real_roots, QPoly};

/// A number field together with its maximal order.
#[derive(Debug, Clone)]
pub struct NumberField {
    /// Monic integral defining polynomial, irreducible over Q.
    min_poly: QPoly,
    degree: usize,
    /// Rows are the integral basis elements in power-basis coordinates;
    /// the first row is 1. Determinant is +-1/index.
    basis: RatMat,
    basis_inv: RatMat,
    disc: BigInt,
    disc_factors: PrimeFactorization,
    /// [O_K : Z[theta]]
    index: BigInt,
    signature: (usize, usize),
    /// tr(theta^k) for k = 0..degree-1 (Newton power sums).
    power_traces: Vec<BigRational>,
}

/// Splitting data of a rational prime: the multiset of (ramification index,
/// residue degree) pairs, sorted by (f, e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSplit {
    pub p: BigInt,
    pub pairs: Vec<(u32, u32)>,
}

impl PrimeSplit {
    /// Residue degrees only, sorted.
    pub fn residue_degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.pairs.iter().map(|&(_, f)| f).collect();
        v.sort_unstable();
        v
    }

    pub fn is_unramified(&self) -> bool {
        self.pairs.iter().all(|&(e, _)| e == 1)
    }
}

impl std::fmt::Display for PrimeSplit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: ", self.p)?;
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|(e, fd)| format!("(e={},f={})", e, fd))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tameness {
    Unramified,
    Tame,
    Wild,
    Undetermined,
}

/// Convention used by `is_fundamental_disc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FundamentalConvention {
    /// Squarefree, or 4m with m squarefree and m = 2, 3 mod 4.
    #[default]
    QuadraticStyle,
    /// Squarefree only.
    StrictSquarefree,
}

impl NumberField {
    pub fn min_poly(&self) -> &QPoly {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn disc_factors(&self) -> &PrimeFactorization {
        &self.disc_factors
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// (real embeddings, conjugate complex pairs)
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_totally_real(&self) -> bool {
        self.signature.1 == 0
    }

    /// Ramified primes = primes dividing the field discriminant.
    pub fn ramified_primes(&self) -> Vec<BigInt> {
        self.disc_factors.primes().cloned().collect()
    }

    /// The i-th integral basis element as a polynomial in theta.
    pub fn basis_element(&self, i: usize) -> QPoly {
        QPoly::new(self.basis.row(i).to_vec())
    }

    /// Reduce a polynomial in theta modulo the defining polynomial.
    pub fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.min_poly)
    }

    pub fn mul_mod(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    /// Trace of an element given in power-basis coordinates (degree < n).
    pub fn trace_of(&self, a: &QPoly) -> BigRational {
        debug_assert!(a.degree().map_or(true, |d| d < self.degree));
        a.coeffs()
            .iter()
            .zip(&self.power_traces)
            .map(|(c, t)| c * t)
            .sum()
    }

    /// Coordinates of an element (power basis, degree < n) in the integral
    /// basis; rational in general, integral exactly when the element lies in
    /// the maximal order.
    pub fn to_basis_coords(&self, a: &QPoly) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = a.coeffs().to_vec();
        v.resize(self.degree, BigRational::zero());
        // coords = v * basis^{-1} since basis rows are the basis elements.
        self.basis_inv.mul_row_vec(&v)
    }

    /// Element of the field from integral-basis coordinates.
    pub fn from_basis_coords(&self, coords: &[BigInt]) -> QPoly {
        let mut acc = QPoly::zero();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&self.basis_element(i).scale(&BigRational::from(c.clone())));
        }
        acc
    }

    /// Splitting type of p read off the factorization of the defining
    /// polynomial mod p; requires p not to divide the index.
    pub fn splitting_type(&self, p: u64) -> Result<PrimeSplit> {
        let pb = BigInt::from(p);
        if (&self.index % &pb).is_zero() {
            return Err(Error::IndexObstruction(pb));
        }
        let (_, factors) = modp::factor_mod_p(&self.min_poly, p)?;
        let mut pairs: Vec<(u32, u32)> = factors
            .iter()
            .map(|(g, m)| (*m as u32, g.degree().unwrap() as u32))
            .collect();
        pairs.sort_by_key(|&(e, f)| (f, e));
        debug_assert_eq!(
            pairs.iter().map(|&(e, f)| (e * f) as usize).sum::<usize>(),
            self.degree
        );
        Ok(PrimeSplit { p: pb, pairs })
    }

    /// Tameness of p, decided without ideal factorization at index primes.
    pub fn tameness_at(&self, p: &BigInt) -> Tameness {
        let vp = self.disc_factors.valuation(p);
        if vp == 0 {
            return Tameness::Unramified;
        }
        if *p > BigInt::from(self.degree) {
            // Every ramification index is at most n < p.
            return Tameness::Tame;
        }
        if !(&self.index % p).is_zero() {
            let pu = p.to_u64().expect("small prime");
            if let Ok(split) = self.splitting_type(pu) {
                let wild = split
                    .pairs
                    .iter()
                    .any(|&(e, _)| BigInt::from(e).mod_floor(p).is_zero());
                return if wild { Tameness::Wild } else { Tameness::Tame };
            }
            return Tameness::Undetermined;
        }
        // Tame ramification forces v_p(disc) = sum (e_i - 1) f_i <= n - 1.
        if vp as usize > self.degree - 1 {
            return Tameness::Wild;
        }
        Tameness::Undetermined
    }
}

/// Build a number field from integer coefficients (constant first).
///
/// Non-monic polynomials with leading coefficient a are rescaled through
/// theta' = a * theta, which keeps the field and makes the model monic
/// integral.
pub fn field_from_poly(coeffs: &[BigInt], cfg: &CoreConfig) -> Result<NumberField> {
    let f = QPoly::from_int_coeffs(coeffs);
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    let monic = monic_integral_model(&f);
    debug_assert!(monic.is_monic() && monic.is_integral());

    if n == 1 {
        return degree_one_field(monic);
    }

    certify_irreducible(&monic, cfg)?;

    let poly_disc = poly_discriminant(&monic)?.to_integer();
    let disc_factors_poly = factor_integer(&poly_disc, cfg)?;

    // Round-2 at every prime whose square divides the polynomial
    // discriminant; elsewhere Z[theta] is already p-maximal.
    let mut order = OrderBasis::power_basis(n);
    for (p, e) in &disc_factors_poly.factors {
        if *e >= 2 {
            let pu = p
                .to_u64()
                .ok_or_else(|| Error::Precondition(format!("prime {p} too large")))?;
            order = p_maximalize(order, pu, &monic)?;
        }
    }

    let basis = order.to_rat();
    let basis_inv = basis
        .inverse()
        .expect("order basis is invertible");
    let det = basis.det();
    // det = +-1/index
    let index = det.recip().abs().to_integer();
    debug_assert!((&poly_disc % (&index * &index)).is_zero());
    let disc = &poly_disc / (&index * &index);

    // Field discriminant factorization by exponent arithmetic.
    let mut disc_factors = disc_factors_poly.clone();
    for (p, e) in disc_factors.factors.iter_mut() {
        let mut v_index = 0u32;
        let mut m = index.clone();
        while (&m % &*p).is_zero() {
            m /= &*p;
            v_index += 1;
        }
        *e -= 2 * v_index;
    }
    disc_factors.factors.retain(|(_, e)| *e > 0);
    debug_assert_eq!(disc_factors.reconstruct(), disc);

    let r = sturm_real_roots(&monic)?;
    debug_assert_eq!((n - r) % 2, 0);
    let signature = (r, (n - r) / 2);
    debug_assert_eq!(
        disc.is_negative(),
        signature.1 % 2 == 1,
        "sign(disc) must be (-1)^s"
    );

    let power_traces = newton_power_traces(&monic, n);

    let field = NumberField {
        min_poly: monic,
        degree: n,
        basis,
        basis_inv,
        disc,
        disc_factors,
        index,
        signature,
        power_traces,
    };
    debug_assert!(field.basis_element(0).eq(&QPoly::one()));
    Ok(field)
}

pub fn field_from_i64(coeffs: &[i64], cfg: &CoreConfig) -> Result<NumberField> {
    let v: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    field_from_poly(&v, cfg)
}

/// Maximal order of a monic integral irreducible polynomial: integral basis
/// (rows in power coordinates), field discriminant and index.
pub fn maximal_order(f: &QPoly, cfg: &CoreConfig) -> Result<(RatMat, BigInt, BigInt)> {
    if !f.is_monic() || !f.is_integral() {
        return Err(Error::NotMonicIntegral);
    }
    let coeffs = f.to_int_coeffs().expect("integral");
    let field = field_from_poly(&coeffs, cfg)?;
    Ok((
        field.basis().clone(),
        field.disc().clone(),
        field.index().clone(),
    ))
}

fn degree_one_field(monic: QPoly) -> Result<NumberField> {
    Ok(NumberField {
        min_poly: monic,
        degree: 1,
        basis: RatMat::identity(1),
        basis_inv: RatMat::identity(1),
        disc: BigInt::one(),
        disc_factors: PrimeFactorization::one(),
        index: BigInt::one(),
        signature: (1, 0),
        power_traces: vec![BigRational::one()],
    })
}

/// theta' = lc * theta: maps sum a_i x^i of degree n to the monic integer
/// polynomial sum a_i lc^(n-1-i) y^i.
pub fn monic_integral_model(f: &QPoly) -> QPoly {
    let n = f.degree().expect("nonzero");
    let lc = f.leading();
    if lc.is_one() && f.is_integral() {
        return f.clone();
    }
    // Coefficient of y^i in lc^(n-1) * f(y/lc) is a_i * lc^(n-1-i).
    let coeffs: Vec<BigRational> = (0..=n)
        .map(|i| {
            if i == n {
                return BigRational::one();
            }
            let mut acc = f.coeff(i);
            for _ in 0..(n - 1 - i) {
                acc *= &lc;
            }
            acc
        })
        .collect();
    QPoly::new(coeffs)
}

/// Newton's identities: power sums tr(theta^k), k = 0..count-1, from the
/// coefficients of the monic defining polynomial.
fn newton_power_traces(f: &QPoly, count: usize) -> Vec<BigRational> {
    let n = f.degree().unwrap();
    // e_k = (-1)^k a_{n-k}
    let e = |k: usize| -> BigRational {
        if k > n {
            return BigRational::zero();
        }
        let a = f.coeff(n - k);
        if k % 2 == 0 {
            a
        } else {
            -a
        }
    };
    let mut p = Vec::with_capacity(count);
    p.push(BigRational::from(BigInt::from(n)));
    for k in 1..count {
        let mut acc = BigRational::zero();
        for i in 1..k {
            let term = e(i) * &p[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = e(k) * BigRational::from(BigInt::from(k));
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        p.push(acc);
    }
    p
}

/// Irreducibility certification over Q via mod-p factorization data.
fn certify_irreducible(f: &QPoly, cfg: &CoreConfig) -> Result<()> {
    let n = f.degree().unwrap();
    if n == 1 {
        return Ok(());
    }
    if !f.is_squarefree() {
        return Err(Error::Reducible("repeated factor (gcd with derivative)".into()));
    }
    // Rational roots of a monic integer polynomial are integers dividing the
    // constant term.
    let c0 = f.coeff(0).to_integer();
    if c0.is_zero() {
        return Err(Error::Reducible("root at 0".into()));
    }
    for r in -24i64..=24 {
        if r == 0 {
            continue;
        }
        if f.eval_int(&BigInt::from(r)).is_zero() {
            return Err(Error::Reducible(format!("rational root {r}")));
        }
    }
    if let Ok(fact) = factor_integer(&c0, cfg) {
        for d in divisors_capped(&fact, 4096) {
            for cand in [d.clone(), -d] {
                if f.eval_int(&cand).is_zero() {
                    return Err(Error::Reducible(format!("rational root {cand}")));
                }
            }
        }
    }

    // Single-prime certificate: irreducible mod p for a prime of good
    // reduction.
    let mut good_seen = 0usize;
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    for &p in primes_up_to(20_000).iter() {
        if good_seen >= 100 {
            break;
        }
        if !modp::good_reduction(f, p) {
            continue;
        }
        good_seen += 1;
        if modp::is_irreducible_mod_p(f, p)? {
            return Ok(());
        }
        if patterns.len() < 25 {
            let degs = modp::factor_degrees(f, p)?
                .iter()
                .map(|&(d, _)| d)
                .collect::<Vec<_>>();
            patterns.push(degs);
        }
    }

    // Degree-pattern proof: a proper factor over Q would reduce mod every
    // good prime to a sub-multiset with the same total degree.
    if !patterns.is_empty() {
        let mut possible = vec![true; n + 1];
        for degs in &patterns {
            let reachable = subset_sums(degs, n);
            for d in 0..=n {
                if !reachable[d] {
                    possible[d] = false;
                }
            }
        }
        let proper = (1..n).any(|d| possible[d]);
        if !proper {
            return Ok(());
        }
    }
    Err(Error::IrreducibilityUndetermined)
}

fn subset_sums(items: &[usize], cap: usize) -> Vec<bool> {
    let mut reach = vec![false; cap + 1];
    reach[0] = true;
    for &it in items {
        for d in (it..=cap).rev() {
            if reach[d - it] {
                reach[d] = true;
            }
        }
    }
    reach
}

fn divisors_capped(fact: &PrimeFactorization, cap: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in &fact.factors {
        let mut next = Vec::new();
        for d in &out {
            let mut pw = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pw);
                if next.len() > cap {
                    return out;
                }
                pw *= p;
            }
        }
        out = next;
    }
    out
}

/// Fundamental discriminant test under the chosen convention.
pub fn is_fundamental_disc(
    d: &BigInt,
    convention: FundamentalConvention,
    cfg: &CoreConfig,
) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    let fact = factor_integer(d, cfg)?;
    if fact.is_squarefree() {
        return Ok(true);
    }
    if convention == FundamentalConvention::StrictSquarefree {
        return Ok(false);
    }
    let four = BigInt::from(4);
    if (d % &four).is_zero() {
        let m = d / &four;
        let mfact = factor_integer(&m, cfg)?;
        if mfact.is_squarefree() {
            let res = m.mod_floor(&four).to_u32().unwrap();
            return Ok(res == 2 || res == 3);
        }
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// Round-2
// ---------------------------------------------------------------------------

/// Order given by a row-HNF basis over the power basis, scaled by a common
/// denominator: basis element i = mat.row(i) / den.
#[derive(Debug, Clone)]
struct OrderBasis {
    mat: IntMat,
    den: BigInt,
}

impl OrderBasis {
    fn power_basis(n: usize) -> Self {
        Self {
            mat: IntMat::identity(n),
            den: BigInt::one(),
        }
    }

    fn to_rat(&self) -> RatMat {
        let n = self.mat.rows();
        let mut out = RatMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = BigRational::new(self.mat[(i, j)].clone(), self.den.clone());
            }
        }
        out
    }

    fn normalize(self) -> Self {
        let h = lower_hnf(&self.mat);
        let mut g = self.den.clone();
        for i in 0..h.rows() {
            for j in 0..h.cols() {
                g = g.gcd(&h[(i, j)]);
                if g.is_one() {
                    return Self { mat: h, den: self.den };
                }
            }
        }
        let n = h.rows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(&h[(i, j)] / &g);
            }
        }
        Self {
            mat: IntMat::new(n, n, data),
            den: &self.den / &g,
        }
    }
}

/// Lower-triangular HNF basis of the row lattice of a full-rank square
/// integer matrix: reverse the column order, take the row HNF, map back and
/// flip the row order. The resulting basis starts with the shortest vector
/// supported on the first coordinate alone, which for an order lattice is
/// the element 1.
fn lower_hnf(m: &IntMat) -> IntMat {
    let n = m.rows();
    debug_assert_eq!(n, m.cols());
    let rev = |mat: &IntMat| -> IntMat {
        let mut out = IntMat::zero(mat.rows(), mat.cols());
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                out[(i, j)] = mat[(i, mat.cols() - 1 - j)].clone();
            }
        }
        out
    };
    let (h, _) = rev(m).hnf();
    let back = rev(&h);
    IntMat::from_rows((0..n).rev().map(|i| back.row(i).to_vec()).collect())
}

/// Exact structure constants of the order: table[i][j] = integer coordinates
/// of b_i * b_j in the order basis.
fn structure_constants(order: &OrderBasis, f: &QPoly) -> Result<Vec<Vec<Vec<BigInt>>>> {
    let n = order.mat.rows();
    let basis = order.to_rat();
    let binv = basis.inverse().expect("order basis invertible");
    let elems: Vec<QPoly> = (0..n).map(|i| QPoly::new(basis.row(i).to_vec())).collect();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let prod = elems[i].mul(&elems[j]).rem(f);
            let mut v: Vec<BigRational> = prod.coeffs().to_vec();
            v.resize(n, BigRational::zero());
            let coords = binv.mul_row_vec(&v);
            let mut ints = Vec::with_capacity(n);
            for c in &coords {
                if !c.is_integer() {
                    return Err(Error::NotIntegral);
                }
                ints.push(c.to_integer());
            }
            table[i][j] = ints.clone();
            table[j][i] = ints;
        }
    }
    Ok(table)
}

fn table_mod_p(table: &[Vec<Vec<BigInt>>], p: u64) -> Vec<Vec<Vec<u64>>> {
    table
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|x| modp::reduce_bigint(x, p)).collect())
                .collect()
        })
        .collect()
}

fn algebra_mul(x: &[u64], y: &[u64], table: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    let n = x.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let coef = ((x[i] as u128 * y[j] as u128) % p as u128) as u64;
            if coef == 0 {
                continue;
            }
            for (k, t) in table[i][j].iter().enumerate() {
                if *t != 0 {
                    out[k] = ((out[k] as u128 + coef as u128 * *t as u128) % p as u128) as u64;
                }
            }
        }
    }
    out
}

fn algebra_pow(x: &[u64], e: u64, table: &[Vec<Vec<u64>>], p: u64, one: &[u64]) -> Vec<u64> {
    let mut acc = one.to_vec();
    let mut base = x.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = algebra_mul(&acc, &base, table, p);
        }
        base = algebra_mul(&base, &base, table, p);
        e >>= 1;
    }
    acc
}

/// Kernel of an m x n matrix over F_p; returns basis vectors of length n.
fn fp_kernel(mat: &[Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let m = mat.len();
    let mut a: Vec<Vec<u64>> = mat.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = modp::invm(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = ((*x as u128 * inv as u128) % p as u128) as u64;
        }
        for r in 0..m {
            if r != row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..n {
                    let sub = (factor as u128 * a[row][c] as u128) % p as u128;
                    a[r][c] = ((a[r][c] as u128 + p as u128 - sub % p as u128) % p as u128) as u64;
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let pivot_cols: std::collections::HashSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            // pivot value is 1; solve pc coordinate.
            let val = a[r][free];
            if val != 0 {
                v[pc] = p - val;
            }
        }
        kernel.push(v);
    }
    kernel
}

/// Enlarge `order` until it is p-maximal.
fn p_maximalize(mut order: OrderBasis, p: u64, f: &QPoly) -> Result<OrderBasis> {
    let n = f.degree().unwrap();
    let pb = BigInt::from(p);
    // k minimal with p^k >= n
    let mut k = 0u32;
    let mut pk = 1u64;
    while (pk as usize) < n {
        pk = pk.saturating_mul(p);
        k += 1;
    }

    loop {
        let exact_table = structure_constants(&order, f)?;
        let table = table_mod_p(&exact_table, p);
        let one_coords = {
            let basis = order.to_rat();
            let binv = basis.inverse().expect("invertible");
            let mut v = vec![BigRational::zero(); n];
            v[0] = BigRational::one();
            let coords = binv.mul_row_vec(&v);
            coords
                .iter()
                .map(|c| {
                    debug_assert!(c.is_integer());
                    modp::reduce_bigint(&c.to_integer(), p)
                })
                .collect::<Vec<u64>>()
        };

        // Frobenius matrix: rows = phi(b_i) = b_i^p in O/pO. The map is
        // F_p-linear, so coordinates transform as row vector times matrix.
        let mut frob: Vec<Vec<u64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0u64; n];
            e[i] = 1;
            frob.push(algebra_pow(&e, p, &table, p, &one_coords));
        }
        let mut mk = frob.clone();
        for _ in 1..k {
            mk = mat_mul_mod(&mk, &frob, p);
        }
        // Radical of O/pO = left kernel of the iterated Frobenius.
        let mkt = transpose_u64(&mk, n);
        let rad_kernel = fp_kernel(&mkt, n, p);

        // Radical lattice I in order coordinates (contains pO).
        let mut rows: Vec<Vec<BigInt>> = rad_kernel
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = pb.clone();
            rows.push(r);
        }
        let (h, _) = IntMat::from_rows(rows).hnf();
        let rad = IntMat::from_rows((0..n).map(|i| h.row(i).to_vec()).collect());
        let rad_rat = rad.to_rat();
        let rad_inv = rad_rat.inverse().expect("radical basis invertible");

        // Multiplier condition y * I in p * I, expressed in the radical
        // basis. The products b_i * m_j must be exact integer vectors here:
        // the radical-basis inverse has p-power denominators, so a mod-p
        // table would corrupt the coordinates.
        let mut phi_rows: Vec<Vec<u64>> = vec![vec![0u64; n]; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut w = vec![BigInt::zero(); n];
                for kk in 0..n {
                    let c = &rad[(j, kk)];
                    if c.is_zero() {
                        continue;
                    }
                    for (t, tv) in exact_table[i][kk].iter().enumerate() {
                        if !tv.is_zero() {
                            w[t] += c * tv;
                        }
                    }
                }
                let wr: Vec<BigRational> =
                    w.iter().map(|x| BigRational::from(x.clone())).collect();
                let coords = rad_inv.mul_row_vec(&wr);
                for (t, c) in coords.iter().enumerate() {
                    if !c.is_integer() {
                        return Err(Error::NotIntegral);
                    }
                    phi_rows[j * n + t][i] = modp::reduce_bigint(&c.to_integer(), p);
                }
            }
        }
        let mult_kernel = fp_kernel(&phi_rows, n, p);
        if mult_kernel.is_empty() {
            return Ok(order);
        }

        // O' = (1/p) * (kernel lifts + pO), in order coordinates.
        let mut rows: Vec<Vec<BigInt>> = mult_kernel
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = pb.clone();
            rows.push(r);
        }
        let (h, _) = IntMat::from_rows(rows).hnf();
        let hp = IntMat::from_rows((0..n).map(|i| h.row(i).to_vec()).collect());
        let new_mat = hp.mul(&order.mat);
        order = OrderBasis {
            mat: new_mat,
            den: &order.den * &pb,
        }
        .normalize();
    }
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for kk in 0..n {
            if a[i][kk] == 0 {
                continue;
            }
            for j in 0..n {
                let t = (a[i][kk] as u128 * b[kk][j] as u128) % p as u128;
                out[i][j] = ((out[i][j] as u128 + t) % p as u128) as u64;
            }
        }
    }
    out
}

fn transpose_u64(a: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; a.len()]; n];
    for (i, row) in a.iter().enumerate() {
        for j in 0..n {
            out[j][i] = row[j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CoreConfig {
        CoreConfig::default()
    }

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn quadratic_field_sqrt5() {
        let k = field_from_i64(&[-5, 0, 1], &cfg()).unwrap();
        assert_eq!(k.degree(), 2);
        assert_eq!(*k.disc(), bi(5));
        assert_eq!(*k.index(), bi(2));
        assert_eq!(k.signature(), (2, 0));
        // Integral basis {1, (1+theta)/2} up to HNF normalization.
        let b1 = k.basis_element(1);
        let half = BigRational::new(bi(1), bi(2));
        assert_eq!(b1.coeff(1), half);
    }

    #[test]
    fn cubic_with_prime_discriminant() {
        let k = field_from_i64(&[11, 2, 0, 1], &cfg()).unwrap();
        assert_eq!(*k.disc(), bi(-3299));
        assert_eq!(*k.index(), bi(1));
        assert_eq!(k.signature(), (1, 1));
    }

    #[test]
    fn octic_field_disc_and_index() {
        let k = field_from_i64(&[15, 0, 0, 0, 0, 0, 0, 0, 1], &cfg()).unwrap();
        let expect: BigInt = bi(2).pow(10) * bi(3).pow(7) * bi(5).pow(7);
        assert_eq!(*k.disc(), expect);
        assert_eq!(*k.index(), bi(2).pow(7));
        assert_eq!(k.signature(), (0, 4));
        // Largest basis denominator is 8.
        let max_den = (0..8)
            .flat_map(|i| k.basis().row(i).iter().map(|c| c.denom().clone()).collect::<Vec<_>>())
            .max()
            .unwrap();
        assert_eq!(max_den, bi(8));
    }

    #[test]
    fn octic_partner_field() {
        let k = field_from_i64(&[240, 0, 0, 0, 0, 0, 0, 0, 1], &cfg()).unwrap();
        let expect: BigInt = bi(2).pow(10) * bi(3).pow(7) * bi(5).pow(7);
        assert_eq!(*k.disc(), expect);
        assert_eq!(*k.index(), bi(2).pow(21));
        assert_eq!(k.signature(), (0, 4));
    }

    #[test]
    fn non_monic_rescaling() {
        let f = QPoly::from_i64_coeffs(&[1, 0, -10, -1, 19]);
        let m = monic_integral_model(&f);
        assert_eq!(
            m,
            QPoly::from_i64_coeffs(&[6859, 0, -190, -1, 1])
        );
    }

    #[test]
    fn multiplicative_closure_of_integral_basis() {
        for coeffs in [
            vec![15i64, 0, 0, 0, 0, 0, 0, 0, 1],
            vec![-5, 0, 1],
            vec![11, 2, 0, 1],
            vec![2, 0, 0, 1],
        ] {
            let k = field_from_i64(&coeffs, &cfg()).unwrap();
            let n = k.degree();
            for i in 0..n {
                for j in 0..n {
                    let prod = k.mul_mod(&k.basis_element(i), &k.basis_element(j));
                    for c in k.to_basis_coords(&prod) {
                        assert!(c.is_integer(), "structure constants must be integral");
                    }
                }
            }
        }
    }

    #[test]
    fn poly_disc_equals_index_squared_times_disc() {
        for coeffs in [
            vec![15i64, 0, 0, 0, 0, 0, 0, 0, 1],
            vec![240, 0, 0, 0, 0, 0, 0, 0, 1],
            vec![-5, 0, 1],
            vec![11, 2, 0, 1],
            vec![1, 1, 1, 1, 1], // cyclotomic Phi_5
        ] {
            let k = field_from_i64(&coeffs, &cfg()).unwrap();
            let pd = poly_discriminant(k.min_poly()).unwrap().to_integer();
            assert_eq!(pd, k.index() * k.index() * k.disc());
        }
    }

    #[test]
    fn splitting_types_of_gaussian_field() {
        let k = field_from_i64(&[1, 0, 1], &cfg()).unwrap();
        assert_eq!(k.splitting_type(5).unwrap().pairs, vec![(1, 1), (1, 1)]);
        assert_eq!(k.splitting_type(2).unwrap().pairs, vec![(2, 1)]);
        assert_eq!(k.splitting_type(3).unwrap().pairs, vec![(1, 2)]);
    }

    #[test]
    fn tameness_classification() {
        let sqrt5 = field_from_i64(&[-5, 0, 1], &cfg()).unwrap();
        assert_eq!(sqrt5.tameness_at(&bi(5)), Tameness::Tame);
        assert_eq!(sqrt5.tameness_at(&bi(7)), Tameness::Unramified);
        let gauss = field_from_i64(&[1, 0, 1], &cfg()).unwrap();
        assert_eq!(gauss.tameness_at(&bi(2)), Tameness::Wild);
        let octic = field_from_i64(&[15, 0, 0, 0, 0, 0, 0, 0, 1], &cfg()).unwrap();
        assert_eq!(octic.tameness_at(&bi(2)), Tameness::Wild);
        assert_eq!(octic.tameness_at(&bi(3)), Tameness::Tame);
        assert_eq!(octic.tameness_at(&bi(5)), Tameness::Tame);
    }

    #[test]
    fn fundamental_disc_convention() {
        let c = cfg();
        let q = FundamentalConvention::QuadraticStyle;
        let s = FundamentalConvention::StrictSquarefree;
        assert!(is_fundamental_disc(&bi(-3299), q, &c).unwrap());
        assert!(is_fundamental_disc(&bi(12), q, &c).unwrap()); // 4*3, 3 = 3 mod 4
        assert!(!is_fundamental_disc(&bi(18), q, &c).unwrap());
        assert!(!is_fundamental_disc(&bi(12), s, &c).unwrap());
        assert!(is_fundamental_disc(&bi(5), s, &c).unwrap());
        assert!(is_fundamental_disc(&bi(-4), q, &c).unwrap()); // 4*(-1), -1 = 3 mod 4
        assert!(!is_fundamental_disc(&bi(16), q, &c).unwrap());
    }

    #[test]
    fn reducible_inputs_rejected() {
        assert!(matches!(
            field_from_i64(&[1, 2, 1], &cfg()),
            Err(Error::Reducible(_))
        ));
        assert!(matches!(
            field_from_i64(&[-1, 0, 1], &cfg()),
            Err(Error::Reducible(_))
        ));
        assert!(matches!(
            field_from_i64(&[0, 1, 1], &cfg()),
            Err(Error::Reducible(_))
        ));
    }

    #[test]
    fn degree_one_field_works() {
        let k = field_from_i64(&[-7, 1], &cfg()).unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(*k.disc(), bi(1));
        assert_eq!(k.signature(), (1, 0));
    }

    #[test]
    fn cyclotomic_discriminants() {
        // Q(zeta_5): x^4+x^3+x^2+x+1, disc 125; Q(zeta_7): x^6+...+1,
        // disc -16807 = -7^5.
        let z5 = field_from_i64(&[1, 1, 1, 1, 1], &cfg()).unwrap();
        assert_eq!(*z5.disc(), bi(125));
        assert_eq!(z5.signature(), (0, 2));
        let z7 = field_from_i64(&[1, 1, 1, 1, 1, 1, 1], &cfg()).unwrap();
        assert_eq!(*z7.disc(), bi(-16807));
        assert_eq!(z7.signature(), (0, 3));
    }

    #[test]
    fn known_certification_boundary() {
        // x^4+1 is irreducible over Q but splits mod every prime, so the
        // mod-p strategy must come back undetermined rather than wrong.
        assert!(matches!(
            field_from_i64(&[1, 0, 0, 0, 1], &cfg()),
            Err(Error::IrreducibilityUndetermined)
        ));
    }

    #[test]
    fn newton_traces_match_direct_multiplication_matrix() {
        let k = field_from_i64(&[11, 2, 0, 1], &cfg()).unwrap();
        // tr(theta^0) = 3, tr(theta) = 0, tr(theta^2) = -2*2 = -4
        assert_eq!(k.power_traces[0], BigRational::from(bi(3)));
        assert_eq!(k.power_traces[1], BigRational::from(bi(0)));
        assert_eq!(k.power_traces[2], BigRational::from(bi(-4)));
    }
}
