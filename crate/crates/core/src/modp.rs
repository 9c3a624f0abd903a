//! Polynomial arithmetic and factorization over prime fields F_p.
//!
//! Factorization is the classical three-stage pipeline: squarefree
//! decomposition, distinct-degree splitting, then equal-degree splitting
//! with a seeded random source so runs are reproducible. Primes must fit in
//! 62 bits, which covers every prime this crate ever reduces at.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::rng::SplitMix64;

pub const MAX_PRIME: u64 = 1 << 62;

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse mod p for 0 < a < p.
pub fn invm(a: u64, p: u64) -> u64 {
    // Extended Euclid on signed 128-bit accumulators.
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "input not invertible");
    t0.rem_euclid(p as i128) as u64
}

/// Reduce a big integer into `[0, p)`.
pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("fits after reduction")
}

/// Residue of a rational with denominator prime to p.
pub fn reduce_rational(num: &BigInt, den: &BigInt, p: u64) -> Result<u64> {
    let d = reduce_bigint(den, p);
    if d == 0 {
        return Err(Error::BadReduction(BigInt::from(p)));
    }
    Ok(mulm(reduce_bigint(num, p), invm(d, p), p))
}

/// Dense polynomial over F_p, constant-first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        assert!(p >= 2 && p < MAX_PRIME);
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { p, c }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        let inv = invm(self.lc(), self.p);
        FpPoly::new(self.p, self.c.iter().map(|&x| mulm(x, inv, self.p)).collect())
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| {
                    addm(
                        self.c.get(i).copied().unwrap_or(0),
                        o.c.get(i).copied().unwrap_or(0),
                        self.p,
                    )
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| {
                    subm(
                        self.c.get(i).copied().unwrap_or(0),
                        o.c.get(i).copied().unwrap_or(0),
                        self.p,
                    )
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, self.p), self.p);
            }
        }
        FpPoly::new(self.p, out)
    }

    pub fn rem(&self, m: &FpPoly) -> FpPoly {
        assert!(!m.is_zero());
        let dm = m.degree().unwrap();
        let lead_inv = invm(m.lc(), self.p);
        let mut r = self.c.clone();
        while r.len() > dm {
            let k = r.len() - 1;
            let q = mulm(r[k], lead_inv, self.p);
            if q != 0 {
                for i in 0..=dm {
                    r[k - dm + i] = subm(r[k - dm + i], mulm(q, m.c[i], self.p), self.p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
        }
        FpPoly::new(self.p, r)
    }

    pub fn div_exact(&self, m: &FpPoly) -> FpPoly {
        let (q, r) = self.divmod(m);
        debug_assert!(r.is_zero());
        q
    }

    pub fn divmod(&self, m: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!m.is_zero());
        let dm = m.degree().unwrap();
        let lead_inv = invm(m.lc(), self.p);
        let mut r = self.c.clone();
        if r.len() <= dm {
            return (FpPoly::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dm];
        while r.len() > dm {
            let k = r.len() - 1;
            let qc = mulm(r[k], lead_inv, self.p);
            if qc != 0 {
                q[k - dm] = qc;
                for i in 0..=dm {
                    r[k - dm + i] = subm(r[k - dm + i], mulm(qc, m.c[i], self.p), self.p);
                }
            }
            r.pop();
        }
        (FpPoly::new(self.p, q), FpPoly::new(self.p, r))
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        if self.c.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        FpPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &x)| mulm(x, (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    /// self^e mod m with a big-integer exponent.
    pub fn pow_mod_big(&self, e: &BigInt, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p);
        let mut base = self.rem(m);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn pow_mod(&self, e: u64, m: &FpPoly) -> FpPoly {
        self.pow_mod_big(&BigInt::from(e), m)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = addm(mulm(acc, x, self.p), c, self.p);
        }
        acc
    }

    /// Substitute x -> x^(1/p): inverse of the Frobenius on exponents.
    /// Requires every exponent with nonzero coefficient to be divisible by p.
    fn pth_root_exponents(&self) -> FpPoly {
        let p = self.p as usize;
        let mut out = vec![0u64; self.c.len() / p + 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x != 0 {
                debug_assert_eq!(i % p, 0);
                // In F_p the coefficient's p-th root is itself.
                out[i / p] = x;
            }
        }
        FpPoly::new(self.p, out)
    }
}

/// Reduce a rational polynomial mod p; the leading coefficient must stay
/// nonzero and every denominator must be prime to p.
pub fn reduce_poly(f: &QPoly, p: u64) -> Result<FpPoly> {
    let mut c = Vec::with_capacity(f.coeffs().len());
    for co in f.coeffs() {
        c.push(reduce_rational(co.numer(), co.denom(), p)?);
    }
    let out = FpPoly::new(p, c);
    match (f.degree(), out.degree()) {
        (Some(df), Some(dg)) if df == dg => Ok(out),
        (None, None) => Ok(out),
        _ => Err(Error::BadReduction(BigInt::from(p))),
    }
}

/// One irreducible factor with its multiplicity.
pub type FpFactor = (FpPoly, usize);

/// Complete factorization over F_p into monic irreducibles.
///
/// The unit `lc` times the product of `factor^multiplicity` reconstructs the
/// input. Randomness for the equal-degree stage comes from `seed`.
pub fn factor_mod_p_seeded(f: &QPoly, p: u64, seed: u64) -> Result<(u64, Vec<FpFactor>)> {
    let fp = reduce_poly(f, p)?;
    Ok(factor_fp_poly(&fp, seed))
}

pub fn factor_mod_p(f: &QPoly, p: u64) -> Result<(u64, Vec<FpFactor>)> {
    factor_mod_p_seeded(f, p, crate::rng::DEFAULT_SEED ^ p)
}

pub fn factor_fp_poly(fp: &FpPoly, seed: u64) -> (u64, Vec<FpFactor>) {
    let unit = fp.lc();
    let monic = fp.monic();
    let mut rng = SplitMix64::new(seed);
    let mut factors: Vec<FpFactor> = Vec::new();
    squarefree_decompose(&monic, 1, &mut factors, &mut rng);
    factors.sort_by(|a, b| (a.0.c.len(), &a.0.c).cmp(&(b.0.c.len(), &b.0.c)));
    (unit, factors)
}

/// Yun-style squarefree decomposition, recursing into p-th powers.
fn squarefree_decompose(f: &FpPoly, mult: usize, out: &mut Vec<FpFactor>, rng: &mut SplitMix64) {
    if f.degree().map_or(true, |d| d == 0) {
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g(x^p) = g(x)^p over F_p.
        let g = f.pth_root_exponents();
        squarefree_decompose(&g, mult * f.p as usize, out, rng);
        return;
    }
    let mut g = f.gcd(&d);
    let mut w = f.div_exact(&g);
    // w carries each squarefree-part factor once; peel multiplicities.
    let mut i = 1usize;
    while !w.is_one() {
        let y = w.gcd(&g);
        let fac = w.div_exact(&y);
        if fac.degree().is_some_and(|d| d > 0) {
            for (irr, e) in distinct_degree_then_split(&fac, rng) {
                merge_factor(out, irr, e * i * mult);
            }
        }
        w = y.clone();
        if !y.is_zero() {
            g = g.div_exact(&y);
        }
        i += 1;
    }
    if g.degree().is_some_and(|d| d > 0) {
        // Remaining part is a p-th power.
        let root = g.pth_root_exponents();
        squarefree_decompose(&root, mult * f.p as usize, out, rng);
    }
}

fn merge_factor(out: &mut Vec<FpFactor>, irr: FpPoly, e: usize) {
    for (g, m) in out.iter_mut() {
        if *g == irr {
            *m += e;
            return;
        }
    }
    out.push((irr, e));
}

/// Distinct-degree then equal-degree splitting of a squarefree monic input.
fn distinct_degree_then_split(f: &FpPoly, rng: &mut SplitMix64) -> Vec<FpFactor> {
    let p = f.p;
    let mut rest = f.clone();
    let mut result = Vec::new();
    let mut h = FpPoly::x(p); // x^(p^d) mod rest, updated per degree
    let mut d = 0usize;
    while rest.degree().is_some_and(|deg| deg > 0) {
        d += 1;
        if 2 * d > rest.degree().unwrap() {
            // What is left is irreducible.
            result.push((rest.monic(), 1));
            break;
        }
        h = h.pow_mod(p, &rest);
        let probe = h.sub(&FpPoly::x(p));
        let g = rest.gcd(&probe);
        if g.degree().is_some_and(|deg| deg > 0) {
            for irr in equal_degree_split(&g, d, rng) {
                result.push((irr, 1));
            }
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
        }
    }
    result
}

/// Cantor-Zassenhaus equal-degree splitting: every irreducible factor of `f`
/// has degree `d`.
fn equal_degree_split(f: &FpPoly, d: usize, rng: &mut SplitMix64) -> Vec<FpPoly> {
    let deg = f.degree().unwrap();
    if deg == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let r = random_poly(p, deg, rng);
        if r.degree().map_or(true, |dr| dr == 0) {
            continue;
        }
        let splitter = if p == 2 {
            // Trace map T(r) = r + r^2 + ... + r^(2^(d-1)) mod f.
            let mut acc = FpPoly::zero(p);
            let mut term = r.rem(f);
            for _ in 0..d {
                acc = acc.add(&term).rem(f);
                term = term.mul(&term).rem(f);
            }
            acc
        } else {
            // r^((p^d - 1)/2) - 1 mod f.
            let e = (BigInt::from(p).pow(d as u32) - 1) / 2;
            let s = r.pow_mod_big(&e, f);
            s.sub(&FpPoly::one(p))
        };
        let g = f.gcd(&splitter);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < deg {
                let mut left = equal_degree_split(&g, d, rng);
                let right = equal_degree_split(&f.div_exact(&g), d, rng);
                left.extend(right);
                return left;
            }
        }
    }
}

fn random_poly(p: u64, below_degree: usize, rng: &mut SplitMix64) -> FpPoly {
    let c: Vec<u64> = (0..below_degree).map(|_| rng.below(p)).collect();
    FpPoly::new(p, c)
}

/// Degree multiset of the irreducible factors (with multiplicity).
pub fn factor_degrees(f: &QPoly, p: u64) -> Result<Vec<(usize, usize)>> {
    let (_, factors) = factor_mod_p(f, p)?;
    Ok(factors
        .iter()
        .map(|(g, m)| (g.degree().unwrap(), *m))
        .collect())
}

/// True when the reduction mod p is squarefree of full degree.
pub fn good_reduction(f: &QPoly, p: u64) -> bool {
    match reduce_poly(f, p) {
        Ok(fp) => {
            if fp.degree() != f.degree() {
                return false;
            }
            fp.gcd(&fp.derivative()).degree() == Some(0)
        }
        Err(_) => false,
    }
}

/// Irreducibility over F_p by distinct-degree sieving (no splitting needed).
pub fn is_irreducible_mod_p(f: &QPoly, p: u64) -> Result<bool> {
    let fp = reduce_poly(f, p)?;
    let n = match fp.degree() {
        None | Some(0) => return Ok(false),
        Some(n) => n,
    };
    if fp.gcd(&fp.derivative()).degree() != Some(0) {
        return Ok(false);
    }
    let mut h = FpPoly::x(p);
    for _ in 0..n / 2 {
        h = h.pow_mod(p, &fp);
        let g = fp.gcd(&h.sub(&FpPoly::x(p)));
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiply out a factorization for verification.
pub fn reconstruct(unit: u64, factors: &[FpFactor], p: u64) -> FpPoly {
    let mut acc = FpPoly::new(p, vec![unit]);
    for (g, m) in factors {
        for _ in 0..*m {
            acc = acc.mul(g);
        }
    }
    acc
}

/// Count roots of `f` in F_p by brute force; test oracle for small p.
pub fn brute_force_roots(f: &FpPoly) -> Vec<u64> {
    (0..f.p).filter(|&x| f.eval(x) == 0).collect()
}
