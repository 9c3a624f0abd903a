//! Certified integer factorization.
//!
//! Trial division by a sieve up to 10^6, then Pollard rho with Brent cycle
//! detection for the cofactor. Primality is certified by the deterministic
//! Miller-Rabin witness set {2,...,37}, valid below 3.317e24; larger inputs
//! are rejected rather than probabilistically accepted.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::CoreConfig;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

const TRIAL_BOUND: u64 = 1_000_000;

/// Witnesses proving primality for every n below 3.317e24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mr_validity_bound() -> &'static BigInt {
    static BOUND: OnceLock<BigInt> = OnceLock::new();
    BOUND.get_or_init(|| "3317044064679887385961981".parse().unwrap())
}

/// Sign and sorted prime-power decomposition of a nonzero integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub sign: i8,
    /// Strictly increasing primes with positive exponents.
    pub factors: Vec<(BigInt, u32)>,
}

impl PrimeFactorization {
    pub fn one() -> Self {
        Self { sign: 1, factors: Vec::new() }
    }

    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc *= p;
            }
        }
        acc
    }

    pub fn valuation(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Squarefree part: product of primes with odd exponent, carrying the sign.
    pub fn squarefree_part(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                acc *= p;
            }
        }
        acc
    }
}

impl std::fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{}", p)?;
            } else {
                write!(f, "{}^{}", p, e)?;
            }
        }
        Ok(())
    }
}

/// Primes up to at least `bound`, cached for the common small range.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    static SMALL: OnceLock<Vec<u64>> = OnceLock::new();
    let small = SMALL.get_or_init(|| sieve(TRIAL_BOUND));
    if bound <= TRIAL_BOUND {
        let cut = small.partition_point(|&p| p <= bound);
        return small[..cut].to_vec();
    }
    sieve(bound)
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Deterministic Miller-Rabin; errors above the certified range.
pub fn is_prime(n: &BigInt) -> Result<bool> {
    if n.is_negative() {
        return is_prime(&-n);
    }
    if n >= mr_validity_bound() {
        return Err(Error::PrimalityRangeExceeded);
    }
    let two = BigInt::from(2);
    if n < &two {
        return Ok(false);
    }
    for w in MR_WITNESSES {
        let wb = BigInt::from(w);
        if *n == wb {
            return Ok(true);
        }
        if (n % &wb).is_zero() {
            return Ok(false);
        }
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for w in MR_WITNESSES {
        let mut x = BigInt::from(w).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n)).expect("u64 is inside the certified range")
}

/// Complete certified factorization of a nonzero integer.
pub fn factor_integer(n: &BigInt, cfg: &CoreConfig) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();

    // Fast path: peel small primes in u64 arithmetic while the cofactor fits.
    if let Some(mut m) = rest.to_u64() {
        for &p in primes_up_to(TRIAL_BOUND).iter() {
            if p.checked_mul(p).map_or(true, |pp| pp > m) {
                break;
            }
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((BigInt::from(p), e));
            }
        }
        if m > 1 && is_prime_u64(m) {
            factors.push((BigInt::from(m), 1));
            m = 1;
        }
        rest = BigInt::from(m);
    } else {
        for &p in primes_up_to(TRIAL_BOUND).iter() {
            if rest.is_one() {
                break;
            }
            let pb = BigInt::from(p);
            if (&pb * &pb) > rest {
                break;
            }
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pb, e));
            }
        }
    }

    if !rest.is_one() {
        let mut stack = vec![rest];
        let mut rng = SplitMix64::new(cfg.seed ^ 0x9D5F);
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if is_prime(&m)? {
                push_prime(&mut factors, m);
                continue;
            }
            let d = pollard_rho_brent(&m, cfg.rho_max_iters, &mut rng)
                .ok_or(Error::FactorizationTimeout)?;
            let q = &m / &d;
            stack.push(d);
            stack.push(q);
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    // Merge equal primes produced by different rho branches.
    let mut merged: Vec<(BigInt, u32)> = Vec::new();
    for (p, e) in factors {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    let out = PrimeFactorization { sign, factors: merged };
    debug_assert_eq!(out.reconstruct(), *n);
    Ok(out)
}

fn push_prime(factors: &mut Vec<(BigInt, u32)>, p: BigInt) {
    for (q, e) in factors.iter_mut() {
        if *q == p {
            *e += 1;
            return;
        }
    }
    factors.push((p, 1));
}

/// Pollard rho with Brent cycle detection; returns a nontrivial divisor.
fn pollard_rho_brent(n: &BigInt, max_iters: u64, rng: &mut SplitMix64) -> Option<BigInt> {
    let one = BigInt::one();
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let mut spent = 0u64;
    loop {
        let c = BigInt::from(rng.below(1 << 31) + 1);
        let mut y = BigInt::from(rng.below(1 << 31) + 2);
        let m = 128u64;
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &c) % n;
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = m.min(r - k);
                for _ in 0..lim {
                    y = (&y * &y + &c) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += lim;
                if spent > max_iters {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &c) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
                spent += 1;
                if spent > max_iters {
                    return None;
                }
            }
        }
        if g != *n && g > one {
            return Some(g);
        }
        // Unlucky constant; retry with a fresh one.
        if spent > max_iters {
            return None;
        }
    }
}
