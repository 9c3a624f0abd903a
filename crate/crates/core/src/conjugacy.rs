//! Conjugacy of number fields: fast negative certificates and a p-adic
//! embedding search for the positive direction.
//!
//! Negative path: degree, discriminant, signature, then splitting types at
//! every prime below a bound (excluding index-dividing primes): the first
//! disagreement is a machine-checkable certificate.
//!
//! Positive path: pick a prime p at which both defining polynomials split
//! completely, Hensel-lift all roots of both to Z_p at doubling precision,
//! and solve for power-basis coordinates of a root of f inside L through the
//! Vandermonde system of the lifted embeddings. The unknown matching of
//! p-adic roots to embeddings is a permutation; wrong permutations die at
//! the first coordinate because an index-scaled true coordinate is a small
//! balanced residue while a mismatched one is uniform mod p^k. Every
//! candidate witness is verified exactly in the field before acceptance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::config::CoreConfig;
use crate::intfactor::primes_up_to;
use crate::modp::{self, FpPoly};
use crate::numfield::NumberField;
use crate::poly::{poly_discriminant, QPoly};

#[derive(Debug, Clone)]
pub enum NonConjugacyCertificate {
    DegreeMismatch(usize, usize),
    DiscMismatch(BigInt, BigInt),
    SignatureMismatch((usize, usize), (usize, usize)),
    SplittingMismatch {
        p: u64,
        left: Vec<(u32, u32)>,
        right: Vec<(u32, u32)>,
    },
}

impl std::fmt::Display for NonConjugacyCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonConjugacyCertificate::DegreeMismatch(a, b) => write!(f, "degree {a} vs {b}"),
            NonConjugacyCertificate::DiscMismatch(a, b) => {
                write!(f, "discriminant {a} vs {b}")
            }
            NonConjugacyCertificate::SignatureMismatch(a, b) => {
                write!(f, "signature {a:?} vs {b:?}")
            }
            NonConjugacyCertificate::SplittingMismatch { p, left, right } => {
                write!(f, "splitting at {p}: {left:?} vs {right:?}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum ConjugacyOutcome {
    /// Root of the first field's polynomial inside the second field,
    /// verified exactly; the identity embedding is the polynomial `x`.
    Conjugate { witness: QPoly },
    NotConjugate { certificate: NonConjugacyCertificate },
    Undetermined { reason: String },
}

impl ConjugacyOutcome {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, ConjugacyOutcome::Conjugate { .. })
    }

    pub fn short(&self) -> &'static str {
        match self {
            ConjugacyOutcome::Conjugate { .. } => "conjugate",
            ConjugacyOutcome::NotConjugate { .. } => "not-conjugate",
            ConjugacyOutcome::Undetermined { .. } => "undetermined",
        }
    }
}

/// Everything the conjugacy decision needs from a field; lets callers run
/// the test from cached summaries without rebuilding maximal orders.
#[derive(Debug, Clone)]
pub struct FieldView {
    pub min_poly: QPoly,
    pub disc: BigInt,
    pub signature: (usize, usize),
    pub index: BigInt,
}

impl FieldView {
    pub fn of(field: &NumberField) -> Self {
        Self {
            min_poly: field.min_poly().clone(),
            disc: field.disc().clone(),
            signature: field.signature(),
            index: field.index().clone(),
        }
    }

    fn degree(&self) -> usize {
        self.min_poly.degree().unwrap()
    }

    /// Dedekind splitting pairs at p (requires p prime to the index).
    fn split_pairs(&self, p: u64) -> Option<Vec<(u32, u32)>> {
        if (&self.index % BigInt::from(p)).is_zero() {
            return None;
        }
        let (_, factors) = modp::factor_mod_p(&self.min_poly, p).ok()?;
        let mut pairs: Vec<(u32, u32)> = factors
            .iter()
            .map(|(g, m)| (*m as u32, g.degree().unwrap() as u32))
            .collect();
        pairs.sort_unstable_by_key(|&(e, f)| (f, e));
        Some(pairs)
    }
}

pub fn are_conjugate(f: &NumberField, l: &NumberField, cfg: &CoreConfig) -> ConjugacyOutcome {
    are_conjugate_views(&FieldView::of(f), &FieldView::of(l), cfg)
}

pub fn are_conjugate_views(f: &FieldView, l: &FieldView, cfg: &CoreConfig) -> ConjugacyOutcome {
    if f.degree() != l.degree() {
        return ConjugacyOutcome::NotConjugate {
            certificate: NonConjugacyCertificate::DegreeMismatch(f.degree(), l.degree()),
        };
    }
    if f.min_poly == l.min_poly {
        return ConjugacyOutcome::Conjugate { witness: QPoly::x() };
    }
    if f.degree() == 1 {
        // Both fields are Q; the root of x - a is the constant a.
        return ConjugacyOutcome::Conjugate {
            witness: QPoly::constant(-f.min_poly.coeff(0)),
        };
    }
    if f.disc != l.disc {
        return ConjugacyOutcome::NotConjugate {
            certificate: NonConjugacyCertificate::DiscMismatch(f.disc.clone(), l.disc.clone()),
        };
    }
    if f.signature != l.signature {
        return ConjugacyOutcome::NotConjugate {
            certificate: NonConjugacyCertificate::SignatureMismatch(f.signature, l.signature),
        };
    }

    // Splitting certificates below the configured bound.
    for &p in primes_up_to(cfg.certificate_prime_bound).iter() {
        let (Some(a), Some(b)) = (f.split_pairs(p), l.split_pairs(p)) else {
            continue;
        };
        if a != b {
            return ConjugacyOutcome::NotConjugate {
                certificate: NonConjugacyCertificate::SplittingMismatch { p, left: a, right: b },
            };
        }
    }

    embedding_search(f, l, cfg)
}

/// Positive search: find a root of f.min_poly in L by lifting at a
/// completely split prime and matching embeddings.
fn embedding_search(f: &FieldView, l: &FieldView, cfg: &CoreConfig) -> ConjugacyOutcome {
    let n = f.degree();
    let fpoly = &f.min_poly;
    let gpoly = &l.min_poly;
    let pd_f = poly_discriminant(fpoly).expect("nonconstant");
    let pd_g = poly_discriminant(gpoly).expect("nonconstant");
    let bad = pd_f.to_integer() * pd_g.to_integer();

    // Smallest usable prime > 50 at which g splits completely.
    let mut chosen: Option<(u64, Vec<u64>, Vec<u64>)> = None;
    for &p in primes_up_to(cfg.conjugacy_prime_bound).iter() {
        if p <= 50 {
            continue;
        }
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        let Some(groots) = roots_if_split(gpoly, p) else { continue };
        match roots_if_split(fpoly, p) {
            Some(froots) => {
                chosen = Some((p, froots, groots));
                break;
            }
            None => {
                // g splits completely but f does not: splitting types differ.
                let left = f.split_pairs(p);
                let right = l.split_pairs(p);
                if let (Some(a), Some(b)) = (left, right) {
                    debug_assert_ne!(a, b);
                    return ConjugacyOutcome::NotConjugate {
                        certificate: NonConjugacyCertificate::SplittingMismatch {
                            p,
                            left: a,
                            right: b,
                        },
                    };
                }
                return ConjugacyOutcome::Undetermined {
                    reason: format!("inconsistent splitting data at {p}"),
                };
            }
        }
    }
    let Some((p, froots, groots)) = chosen else {
        return ConjugacyOutcome::Undetermined {
            reason: format!(
                "no completely split prime in (50, {}]",
                cfg.conjugacy_prime_bound
            ),
        };
    };

    let f_int: Vec<BigInt> = fpoly.to_int_coeffs().expect("monic integral");
    let g_int: Vec<BigInt> = gpoly.to_int_coeffs().expect("monic integral");
    let pb = BigInt::from(p);

    // Precision doubles until the budget runs out.
    let mut k = 4u32;
    loop {
        let modulus = pb.pow(k);
        if modulus.bits() > cfg.conjugacy_max_bits {
            return ConjugacyOutcome::Undetermined {
                reason: format!("precision budget exhausted at {p}^{k}"),
            };
        }
        let alphas: Vec<BigInt> = froots
            .iter()
            .map(|&r| hensel_lift(&f_int, BigInt::from(r), &pb, k))
            .collect();
        let betas: Vec<BigInt> = groots
            .iter()
            .map(|&r| hensel_lift(&g_int, BigInt::from(r), &pb, k))
            .collect();

        // Vandermonde in the betas, inverted mod p^k.
        let v: Vec<Vec<BigInt>> = betas
            .iter()
            .map(|b| {
                let mut row = Vec::with_capacity(n);
                let mut acc = BigInt::one();
                for _ in 0..n {
                    row.push(acc.clone());
                    acc = (&acc * b).mod_floor(&modulus);
                }
                row
            })
            .collect();
        let Some(vinv) = invert_mod(&v, &modulus, &pb) else {
            return ConjugacyOutcome::Undetermined {
                reason: format!("Vandermonde not invertible mod {p}^{k}"),
            };
        };

        if let Some(witness) = match_permutations(
            fpoly, gpoly, &l.index, &alphas, &vinv, &modulus, n,
        ) {
            return ConjugacyOutcome::Conjugate { witness };
        }
        k *= 2;
    }
}

/// All roots when the polynomial splits into distinct linear factors mod p.
fn roots_if_split(f: &QPoly, p: u64) -> Option<Vec<u64>> {
    let fp = modp::reduce_poly(f, p).ok()?;
    let n = fp.degree()?;
    if fp.gcd(&fp.derivative()).degree() != Some(0) {
        return None;
    }
    // x^p mod f == x exactly when every irreducible factor is linear.
    let xp = FpPoly::x(p).pow_mod(p, &fp);
    if xp != FpPoly::x(p).rem(&fp) {
        return None;
    }
    // Roots are the negated constant terms of the linear factors.
    let (_, factors) = modp::factor_fp_poly(&fp, crate::rng::DEFAULT_SEED ^ p);
    let mut roots = Vec::with_capacity(n);
    for (g, m) in &factors {
        if g.degree() != Some(1) || *m != 1 {
            return None;
        }
        let c = g.c[0];
        let lead_inv = modp::invm(g.c[1], p);
        roots.push(((p - c) % p * lead_inv as u64 % p) as u64);
    }
    (roots.len() == n).then_some(roots)
}

/// Newton lifting of a simple root to precision p^k.
fn hensel_lift(f: &[BigInt], mut root: BigInt, p: &BigInt, k: u32) -> BigInt {
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let modulus = p.pow(prec);
        let fv = eval_mod(f, &root, &modulus);
        let dv = eval_deriv_mod(f, &root, &modulus);
        let dinv = modular_inverse(&dv, &modulus).expect("simple root stays simple");
        root = (&root - fv * dinv).mod_floor(&modulus);
    }
    root
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn eval_deriv_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for (i, c) in f.iter().enumerate().skip(1).rev() {
        acc = (acc * x + c * BigInt::from(i)).mod_floor(m);
    }
    acc
}

fn modular_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Gauss-Jordan inverse mod p^k; pivots must be units mod p.
fn invert_mod(mat: &[Vec<BigInt>], modulus: &BigInt, p: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut inv: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::one();
            r
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !(&a[r][col] % p).is_zero())?;
        a.swap(col, pr);
        inv.swap(col, pr);
        let piv_inv = modular_inverse(&a[col][col], modulus)?;
        for j in 0..n {
            a[col][j] = (&a[col][j] * &piv_inv).mod_floor(modulus);
            inv[col][j] = (&inv[col][j] * &piv_inv).mod_floor(modulus);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = (&a[r][j] - &factor * &a[col][j]).mod_floor(modulus);
                a[r][j] = t;
                let t = (&inv[r][j] - &factor * &inv[col][j]).mod_floor(modulus);
                inv[r][j] = t;
            }
        }
    }
    Some(inv)
}

fn balanced(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Try every matching of f-roots to embeddings; reject at the first
/// coordinate whose index-scaled balanced lift exceeds the safety margin.
fn match_permutations(
    fpoly: &QPoly,
    gpoly: &QPoly,
    index_l: &BigInt,
    alphas: &[BigInt],
    vinv: &[Vec<BigInt>],
    modulus: &BigInt,
    n: usize,
) -> Option<QPoly> {
    let margin: BigInt = modulus / 4;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut witness: Option<QPoly> = None;
    permute(&mut perm, 0, &mut |sigma: &[usize]| {
        if witness.is_some() {
            return;
        }
        // Coordinate j of the candidate: row j of V^{-1} dot alpha_sigma.
        let mut coords = Vec::with_capacity(n);
        for j in (0..n).rev() {
            let mut acc = BigInt::zero();
            for i in 0..n {
                acc += &vinv[j][i] * &alphas[sigma[i]];
            }
            let w = balanced(&(acc * index_l), modulus);
            if w.abs() > margin {
                return; // wrong matching or insufficient precision
            }
            coords.push(w);
        }
        coords.reverse();
        let cand = QPoly::new(
            coords
                .iter()
                .map(|w| BigRational::new(w.clone(), index_l.clone()))
                .collect(),
        );
        // Exact verification: f(cand) = 0 in Q[y]/(g).
        let mut acc = QPoly::zero();
        for c in fpoly.coeffs().iter().rev() {
            acc = acc.mul(&cand).add(&QPoly::constant(c.clone())).rem(gpoly);
        }
        if acc.is_zero() {
            witness = Some(cand);
        }
    });
    witness
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    if k == n {
        visit(items);
        return;
    }
    for i in k..n {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::field_from_i64;

    fn cfg() -> CoreConfig {
        CoreConfig::default()
    }

    #[test]
    fn reflexive_identity_witness() {
        let k = field_from_i64(&[11, 2, 0, 1], &cfg()).unwrap();
        match are_conjugate(&k, &k, &cfg()) {
            ConjugacyOutcome::Conjugate { witness } => assert_eq!(witness, QPoly::x()),
            other => panic!("expected conjugate, got {}", other.short()),
        }
    }

    #[test]
    fn golden_ratio_field_equals_sqrt5() {
        let a = field_from_i64(&[-5, 0, 1], &cfg()).unwrap();
        let b = field_from_i64(&[-1, -1, 1], &cfg()).unwrap(); // y^2 - y - 1
        match are_conjugate(&a, &b, &cfg()) {
            ConjugacyOutcome::Conjugate { witness } => {
                // witness^2 = 5 in Q[y]/(y^2 - y - 1): witness = +-(2y - 1).
                let sq = witness.mul(&witness).rem(b.min_poly());
                assert_eq!(sq, QPoly::from_i64_coeffs(&[5]));
            }
            other => panic!("expected conjugate, got {}", other.short()),
        }
        // And symmetrically.
        assert!(are_conjugate(&b, &a, &cfg()).is_conjugate());
    }

    #[test]
    fn septic_pair_not_conjugate() {
        let a = field_from_i64(&[1, -1, -4, 1, 4, 0, -3, 1], &cfg()).unwrap();
        let b = field_from_i64(&[-1, -1, -2, -3, 4, 2, -3, 1], &cfg()).unwrap();
        match are_conjugate(&a, &b, &cfg()) {
            ConjugacyOutcome::NotConjugate { certificate } => match certificate {
                NonConjugacyCertificate::SplittingMismatch { p, .. } => {
                    assert_eq!(p, 2741);
                }
                other => panic!("expected splitting certificate, got {other}"),
            },
            other => panic!("expected not-conjugate, got {}", other.short()),
        }
    }

    #[test]
    fn distinct_quadratics() {
        let a = field_from_i64(&[-5, 0, 1], &cfg()).unwrap();
        let b = field_from_i64(&[-13, 0, 1], &cfg()).unwrap();
        match are_conjugate(&a, &b, &cfg()) {
            ConjugacyOutcome::NotConjugate { certificate } => {
                assert!(matches!(certificate, NonConjugacyCertificate::DiscMismatch(_, _)));
            }
            other => panic!("expected not-conjugate, got {}", other.short()),
        }
    }

    #[test]
    fn shifted_cubic_is_conjugate() {
        // y = x + 1 transports x^3 + 2x + 11 to another model of the field.
        let a = field_from_i64(&[11, 2, 0, 1], &cfg()).unwrap();
        // (y-1)^3 + 2(y-1) + 11 = y^3 - 3y^2 + 5y + 8
        let b = field_from_i64(&[8, 5, -3, 1], &cfg()).unwrap();
        assert_eq!(a.disc(), b.disc());
        match are_conjugate(&a, &b, &cfg()) {
            ConjugacyOutcome::Conjugate { witness } => {
                let mut acc = QPoly::zero();
                for c in a.min_poly().coeffs().iter().rev() {
                    acc = acc
                        .mul(&witness)
                        .add(&QPoly::constant(c.clone()))
                        .rem(b.min_poly());
                }
                assert!(acc.is_zero());
            }
            other => panic!("expected conjugate, got {}", other.short()),
        }
    }

    #[test]
    fn symmetry_and_reflexivity_on_random_fields() {
        let c = cfg();
        let mut rng = crate::rng::SplitMix64::new(404);
        let mut fields = Vec::new();
        while fields.len() < 12 {
            let deg = 2 + rng.below(3) as usize;
            let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.signed(7)).collect();
            coeffs.push(1);
            if let Ok(k) = field_from_i64(&coeffs, &c) {
                fields.push(k);
            }
        }
        for k in &fields {
            assert!(are_conjugate(k, k, &c).is_conjugate());
        }
        for i in 0..fields.len() {
            for j in i + 1..fields.len() {
                let ab = are_conjugate(&fields[i], &fields[j], &c);
                let ba = are_conjugate(&fields[j], &fields[i], &c);
                assert_eq!(ab.short(), ba.short(), "{} vs {}", i, j);
            }
        }
    }
}
