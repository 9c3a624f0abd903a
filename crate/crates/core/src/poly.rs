//! Exact univariate polynomials over the rationals.
//!
//! Coefficients are stored constant-first with no trailing zeros; the zero
//! polynomial is the empty list. Resultants go through the subresultant PRS
//! on integer models, so no intermediate fraction blow-up occurs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_int_coeffs(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| BigRational::from(c.clone()))
                .collect(),
        )
    }

    pub fn from_i64_coeffs(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn to_int_coeffs(&self) -> Option<Vec<BigInt>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().map(BigRational::to_integer).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigRational {
        self.eval(&BigRational::from(x.clone()))
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn divmod(&self, other: &QPoly) -> (QPoly, QPoly) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let d = other.degree().unwrap();
        let lc = other.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        while rem.len() > d {
            let k = rem.len() - 1;
            let q = &rem[k] / &lc;
            if !q.is_zero() {
                quot[k - d] = q.clone();
                for i in 0..=d {
                    let t = &rem[k - d + i] - &q * &other.coeffs[i];
                    rem[k - d + i] = t;
                }
            }
            rem.pop();
        }
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, other: &QPoly) -> QPoly {
        self.divmod(other).1
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic normalization of the gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lc = a.leading();
        a.scale(&lc.recip())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Writes `self = (num/den) * primitive` with `primitive` a primitive
    /// integer polynomial whose leading coefficient is positive.
    pub fn primitive_part(&self) -> (BigRational, Vec<BigInt>) {
        if self.is_zero() {
            return (BigRational::zero(), Vec::new());
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        (BigRational::new(content, den_lcm), prim)
    }

    /// Squarefree check via gcd with the derivative.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Number of sign variations in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for c in &self.coeffs {
            let s = rational_sign(c);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if i >= 1 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

fn rational_sign(c: &BigRational) -> i8 {
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

/// Resultant of two rational polynomials.
///
/// Both inputs are split into content times primitive integer polynomial and
/// the integer resultant is computed by the subresultant PRS, so coefficient
/// growth stays polynomial.
pub fn resultant(f: &QPoly, g: &QPoly) -> BigRational {
    match (f.degree(), g.degree()) {
        (None, _) | (_, None) => {
            // res(f, 0) = 0 unless both are constants.
            return BigRational::zero();
        }
        (Some(0), Some(0)) => return BigRational::one(),
        (Some(0), Some(m)) => return pow_rat(&f.leading(), m as u32),
        (Some(n), Some(0)) => return pow_rat(&g.leading(), n as u32),
        _ => {}
    }
    let n = f.degree().unwrap();
    let m = g.degree().unwrap();
    let (cf, pf) = f.primitive_part();
    let (cg, pg) = g.primitive_part();
    let res_prim = int_resultant(&pf, &pg);
    pow_rat(&cf, m as u32) * pow_rat(&cg, n as u32) * BigRational::from(res_prim)
}

fn pow_rat(b: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

fn int_degree(p: &[BigInt]) -> usize {
    p.len() - 1
}

/// Pseudo-remainder of `a` by `b`, scaled to exactly `lc(b)^(da-db+1) * a mod b`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = int_degree(a);
    let db = int_degree(b);
    let lc = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    let mut scalings = 0u32;
    while r.len() > db {
        let k = r.len() - 1;
        let coef = r[k].clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        scalings += 1;
        for i in 0..=db {
            let t = &r[k - db + i] - &coef * &b[i];
            r[k - db + i] = t;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.is_empty() {
            return r;
        }
    }
    // Top up missing powers of lc(b) when intermediate cancellation skipped
    // degrees, keeping the classical delta+1 scaling.
    let want = (da - db + 1) as u32;
    for _ in scalings..want {
        for c in r.iter_mut() {
            *c *= &lc;
        }
    }
    r
}

/// Resultant of two nonzero primitive integer polynomials by the
/// subresultant polynomial remainder sequence.
fn int_resultant(fa: &[BigInt], fb: &[BigInt]) -> BigInt {
    let mut a = fa.to_vec();
    let mut b = fb.to_vec();
    let mut sign = BigInt::one();
    if int_degree(&a) < int_degree(&b) {
        if int_degree(&a) % 2 == 1 && int_degree(&b) % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if int_degree(&b) == 0 {
        return sign * pow_int(&b[0], int_degree(&a) as u32);
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = int_degree(&a);
        let db = int_degree(&b);
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        a = b;
        let divisor = &g * pow_int(&h, delta);
        b = r.iter().map(|c| c / &divisor).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            pow_int(&g, delta) / pow_int(&h, delta - 1)
        };
        if int_degree(&b) == 0 {
            let da = int_degree(&a) as u32;
            let res = if da == 0 {
                h.clone()
            } else {
                pow_int(&b[0], da) / pow_int(&h, da - 1)
            };
            return sign * res;
        }
    }
}

fn pow_int(b: &BigInt, e: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Discriminant `(-1)^(n(n-1)/2) * res(f, f') / lc(f)`.
pub fn poly_discriminant(f: &QPoly) -> Result<BigRational> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    let r = resultant(f, &f.derivative());
    let sign = if (n * (n - 1) / 2) % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    Ok(sign * r / f.leading())
}

/// Exact count of distinct real roots of a squarefree polynomial via the
/// Sturm sequence evaluated at minus and plus infinity.
pub fn sturm_real_roots(f: &QPoly) -> Result<usize> {
    match f.degree() {
        None => return Err(Error::ZeroInput),
        Some(0) => return Ok(0),
        Some(_) => {}
    }
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let k = seq.len();
        if seq[k - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[k - 2].rem(&seq[k - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }

    // Sign of p at +inf is sign(lc); at -inf it is sign(lc) * (-1)^deg.
    let variations = |at_minus: bool| -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &seq {
            let d = p.degree().unwrap();
            let mut s = rational_sign(&p.leading());
            if at_minus && d % 2 == 1 {
                s = -s;
            }
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    };
    Ok(variations(true) - variations(false))
}

/// Taylor shift: returns `f(x + a)`.
pub fn shift(f: &QPoly, a: &BigRational) -> QPoly {
    let mut acc = QPoly::zero();
    let xa = QPoly::new(vec![a.clone(), BigRational::one()]);
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(&xa).add(&QPoly::constant(c.clone()));
    }
    acc
}

/// Returns `f(c * x)`.
pub fn scale_arg(f: &QPoly, c: &BigRational) -> QPoly {
    let mut out = Vec::with_capacity(f.coeffs().len());
    let mut p = BigRational::one();
    for a in f.coeffs() {
        out.push(a * &p);
        p *= c;
    }
    QPoly::new(out)
}

/// Coefficient reversal: `x^deg * f(1/x)`.
pub fn reverse(f: &QPoly) -> QPoly {
    let mut c = f.coeffs().to_vec();
    c.reverse();
    QPoly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    /// Rational-Euclid resultant, used as an independent oracle for the
    /// subresultant implementation.
    fn resultant_euclid(f: &QPoly, g: &QPoly) -> BigRational {
        match (f.degree(), g.degree()) {
            (None, _) | (_, None) => BigRational::zero(),
            (Some(0), Some(0)) => BigRational::one(),
            (Some(0), Some(m)) => pow_rat(&f.leading(), m as u32),
            (Some(n), Some(0)) => pow_rat(&g.leading(), n as u32),
            (Some(n), Some(m)) => {
                if n < m {
                    let s = if n % 2 == 1 && m % 2 == 1 { -1 } else { 1 };
                    return q(s) * resultant_euclid(g, f);
                }
                let r = f.rem(g);
                if r.is_zero() {
                    return BigRational::zero();
                }
                let d = r.degree().unwrap();
                let s = if n % 2 == 1 && m % 2 == 1 { -1 } else { 1 };
                q(s) * pow_rat(&g.leading(), (n - d) as u32) * resultant_euclid(g, &r)
            }
        }
    }

    #[test]
    fn resultant_matches_euclid_oracle() {
        let mut rng = crate::rng::SplitMix64::new(42);
        for _ in 0..300 {
            let df = 1 + (rng.below(5) as usize);
            let dg = 1 + (rng.below(5) as usize);
            let f =
                QPoly::from_i64_coeffs(&(0..=df).map(|_| rng.signed(8)).collect::<Vec<_>>());
            let g =
                QPoly::from_i64_coeffs(&(0..=dg).map(|_| rng.signed(8)).collect::<Vec<_>>());
            if f.degree().map_or(true, |d| d == 0) || g.degree().map_or(true, |d| d == 0) {
                continue;
            }
            assert_eq!(resultant(&f, &g), resultant_euclid(&f, &g), "f={f} g={g}");
        }
    }

    #[test]
    fn resultant_zero_iff_common_factor() {
        let mut rng = crate::rng::SplitMix64::new(7);
        for _ in 0..100 {
            let f = QPoly::from_i64_coeffs(&[
                rng.signed(6),
                rng.signed(6),
                1 + rng.below(5) as i64,
            ]);
            let g = QPoly::from_i64_coeffs(&[
                rng.signed(6),
                rng.signed(6),
                1 + rng.below(5) as i64,
            ]);
            let gcd_nontrivial = f.gcd(&g).degree().is_some_and(|d| d > 0);
            assert_eq!(resultant(&f, &g).is_zero(), gcd_nontrivial, "f={f} g={g}");
        }
    }

    #[test]
    fn discriminant_examples() {
        // -4p^3 - 27q^2 oracle for depressed cubics.
        let f = QPoly::from_i64_coeffs(&[11, 2, 0, 1]);
        assert_eq!(poly_discriminant(&f).unwrap(), q(-3299));
        // Closed form 4d for x^2 - d.
        for d in [5i64, 13, -7] {
            let f = QPoly::from_i64_coeffs(&[-d, 0, 1]);
            assert_eq!(poly_discriminant(&f).unwrap(), q(4 * d));
        }
        // Closed form n^n a^(n-1) with sign (-1)^(n(n-1)/2) for x^n + a.
        let f = QPoly::from_i64_coeffs(&[15, 0, 0, 0, 0, 0, 0, 0, 1]);
        let expect: BigInt = BigInt::from(8).pow(8) * BigInt::from(15).pow(7);
        assert_eq!(poly_discriminant(&f).unwrap(), BigRational::from(expect));
    }

    #[test]
    fn discriminant_rejects_constants() {
        assert!(poly_discriminant(&QPoly::from_i64_coeffs(&[3])).is_err());
    }

    #[test]
    fn sturm_examples() {
        assert_eq!(sturm_real_roots(&QPoly::from_i64_coeffs(&[-5, 0, 1])).unwrap(), 2);
        let octic = QPoly::from_i64_coeffs(&[15, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(sturm_real_roots(&octic).unwrap(), 0);
        assert_eq!(sturm_real_roots(&QPoly::from_i64_coeffs(&[11, 2, 0, 1])).unwrap(), 1);
    }

    #[test]
    fn sturm_rejects_repeated_roots() {
        let sq = QPoly::from_i64_coeffs(&[1, 2, 1]); // (x+1)^2
        assert_eq!(sturm_real_roots(&sq), Err(Error::NotSquarefree));
    }

    #[test]
    fn shift_and_scale() {
        let f = QPoly::from_i64_coeffs(&[0, 0, 1]); // x^2
        let g = shift(&f, &q(1)); // (x+1)^2
        assert_eq!(g, QPoly::from_i64_coeffs(&[1, 2, 1]));
        let h = scale_arg(&f, &q(3)); // 9x^2
        assert_eq!(h, QPoly::from_i64_coeffs(&[0, 0, 9]));
    }

    #[test]
    fn division_round_trip() {
        let f = QPoly::from_i64_coeffs(&[3, -2, 0, 5, 1]);
        let g = QPoly::from_i64_coeffs(&[1, 1, 2]);
        let (qq, r) = f.divmod(&g);
        assert_eq!(qq.mul(&g).add(&r), f);
        assert!(r.degree().unwrap() < g.degree().unwrap());
    }
}
