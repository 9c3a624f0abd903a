//! Cross-module property tests and independent oracles that are too heavy
//! for inline unit tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use traceform_core::config::CoreConfig;
use traceform_core::conjugacy::are_conjugate;
use traceform_core::genus::genus_symbol;
use traceform_core::hilbert::rationally_equivalent;
use traceform_core::intfactor::factor_integer;
use traceform_core::isometry::{automorphism_count, random_unimodular};
use traceform_core::matrix::{diagonalize_symmetric, IntMat};
use traceform_core::numfield::field_from_i64;
use traceform_core::poly::{poly_discriminant, reverse, shift, sturm_real_roots, QPoly};
use traceform_core::rng::SplitMix64;
use traceform_core::spectra::{compare_spectra, SpectrumComparison};
use traceform_core::traceform::{trace_gram, QuadLattice};

fn cfg() -> CoreConfig {
    CoreConfig::default()
}

// ---------------------------------------------------------------------------
// Descartes / bisection real-root isolator: an oracle independent of Sturm.
// ---------------------------------------------------------------------------

/// Upper bound for the number of roots of p in the open interval (0, 1),
/// exact when it returns 0 or 1: sign variations of (x+1)^n p(1/(x+1)).
fn descartes_01_bound(p: &QPoly) -> usize {
    let rev = reverse(p);
    shift(&rev, &BigRational::one()).sign_variations()
}

/// Count roots of a squarefree polynomial strictly inside (0, 1).
fn count_roots_01(p: &QPoly, depth: usize) -> usize {
    assert!(depth < 80, "bisection depth blew up; input not squarefree?");
    match descartes_01_bound(p) {
        0 => 0,
        1 => 1,
        _ => {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            // Left half (0, 1/2) maps through x -> x/2; right half through
            // x -> (x+1)/2.
            let left = traceform_core::poly::scale_arg(p, &half);
            let right = shift(&left, &BigRational::one());
            let at_half = p.eval(&half).is_zero() as usize;
            count_roots_01(&left, depth + 1) + at_half + count_roots_01(&right, depth + 1)
        }
    }
}

/// Total count of distinct real roots by interval bisection.
fn bisection_real_roots(f: &QPoly) -> usize {
    let n = f.degree().expect("nonzero");
    if n == 0 {
        return 0;
    }
    let mut count = 0;
    let mut g = f.clone();
    if g.coeff(0).is_zero() {
        count += 1; // simple root at 0 (squarefree input)
        let coeffs = g.coeffs()[1..].to_vec();
        g = QPoly::new(coeffs);
    }
    // Cauchy bound: all real roots lie in (-M, M).
    let lc = g.leading().abs();
    let maxc = g
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .fold(BigRational::zero(), |a, b| if a > b { a } else { b });
    let m = (maxc / lc + BigRational::one()).ceil();
    let pos = traceform_core::poly::scale_arg(&g, &m);
    let neg = traceform_core::poly::scale_arg(&g, &(-m.clone()));
    count += count_roots_01(&pos, 0) + count_roots_01(&neg, 0);
    count
}

#[test]
fn sturm_matches_bisection_isolator() {
    let mut rng = SplitMix64::new(8080);
    let mut done = 0;
    while done < 200 {
        let deg = 1 + rng.below(8) as usize;
        let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.signed(50)).collect();
        if coeffs[deg] == 0 {
            coeffs[deg] = 1;
        }
        let f = QPoly::from_i64_coeffs(&coeffs);
        if f.degree() != Some(deg) || !f.is_squarefree() {
            continue;
        }
        done += 1;
        let sturm = sturm_real_roots(&f).unwrap();
        let bisect = bisection_real_roots(&f);
        assert_eq!(sturm, bisect, "f = {f}");
    }
}

// ---------------------------------------------------------------------------
// Diagonalization square-class identity.
// ---------------------------------------------------------------------------

#[test]
fn diagonal_product_is_det_up_to_squares() {
    let mut rng = SplitMix64::new(515);
    for _ in 0..100 {
        let n = 1 + rng.below(4) as usize;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = BigInt::from(rng.signed(9));
                data[i * n + j] = v.clone();
                data[j * n + i] = v;
            }
        }
        let g = IntMat::new(n, n, data).to_rat();
        let det = g.det();
        if det.is_zero() {
            continue;
        }
        let d = diagonalize_symmetric(&g).unwrap();
        let prod: BigRational = d.diagonal.iter().product();
        // det / prod must be a nonzero rational square.
        let ratio = det / prod;
        assert!(ratio.is_positive());
        let num = ratio.numer() * ratio.denom();
        let root = num.sqrt();
        assert_eq!(&root * &root, num, "ratio {ratio} is not a square");
    }
}

// ---------------------------------------------------------------------------
// Rational equivalence is an equivalence relation on the fixture forms.
// ---------------------------------------------------------------------------

#[test]
fn rational_equivalence_relation_spot_checks() {
    let c = cfg();
    let forms: Vec<QuadLattice> = [
        vec![11i64, 2, 0, 1],
        vec![27, -16, 0, 1],
        vec![-8, 9, -1, 1],
        vec![-5, 0, 1],
        vec![-13, 0, 1],
    ]
    .iter()
    .map(|coeffs| trace_gram(&field_from_i64(coeffs, &c).unwrap()))
    .collect();
    for (i, a) in forms.iter().enumerate() {
        assert!(rationally_equivalent(a, a, &c).unwrap().equivalent, "reflexive {i}");
        for b in forms.iter().skip(i + 1) {
            let ab = rationally_equivalent(a, b, &c).unwrap().equivalent;
            let ba = rationally_equivalent(b, a, &c).unwrap().equivalent;
            assert_eq!(ab, ba, "symmetric");
        }
    }
    // Transitivity on the three cubic forms (all equivalent).
    let ab = rationally_equivalent(&forms[0], &forms[1], &c).unwrap().equivalent;
    let bc = rationally_equivalent(&forms[1], &forms[2], &c).unwrap().equivalent;
    let ac = rationally_equivalent(&forms[0], &forms[2], &c).unwrap().equivalent;
    assert!(ab && bc && ac);
}

// ---------------------------------------------------------------------------
// Conjugacy is reflexive and symmetric on a 50-field random set.
// ---------------------------------------------------------------------------

#[test]
fn conjugacy_reflexive_symmetric_50_fields() {
    let c = cfg();
    let mut rng = SplitMix64::new(4242);
    let mut fields = Vec::new();
    while fields.len() < 50 {
        let deg = 2 + rng.below(3) as usize;
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.signed(6)).collect();
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
            assert_eq!(ab.short(), ba.short());
        }
    }
}

// ---------------------------------------------------------------------------
// Conjugate fields have consistent spectra at every bound.
// ---------------------------------------------------------------------------

#[test]
fn conjugate_fields_have_consistent_spectra() {
    let c = cfg();
    let a = field_from_i64(&[-5, 0, 1], &c).unwrap();
    let b = field_from_i64(&[-1, -1, 1], &c).unwrap();
    assert!(are_conjugate(&a, &b, &c).is_conjugate());
    for bound in [50u64, 500, 2000] {
        assert_eq!(
            compare_spectra(&a, &b, bound).unwrap(),
            SpectrumComparison::Consistent
        );
    }
}

// ---------------------------------------------------------------------------
// Automorphism counts of scaled identity lattices divide 2^n n!.
// ---------------------------------------------------------------------------

#[test]
fn automorphism_count_divides_signed_permutations() {
    let c = cfg();
    for n in 1..=4usize {
        for scale in [1i64, 3] {
            let mut rows = vec![vec![0i64; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = scale;
            }
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let lat = QuadLattice::from_i64_rows(&refs, "scaled identity").unwrap();
            let count = automorphism_count(&lat, &c).unwrap();
            let full = (1u64 << n) * (1..=n as u64).product::<u64>();
            assert_eq!(full % count, 0, "n={n} count={count}");
            assert_eq!(count, full, "scaled identity has the full signed permutation group");
        }
    }
}

// ---------------------------------------------------------------------------
// Odd-prime genus symbols are invariant under unimodular changes (second
// dimension beyond the unit test).
// ---------------------------------------------------------------------------

#[test]
fn genus_symbol_unimodular_invariance_dim3() {
    let c = cfg();
    let _ = c;
    let mut rng = SplitMix64::new(99);
    let base = QuadLattice::from_i64_rows(&[&[3, 1, 0], &[1, 9, 2], &[0, 2, 15]], "g").unwrap();
    let p = BigInt::from(3);
    let g0 = genus_symbol(&base, &p).unwrap();
    for _ in 0..50 {
        let u = random_unimodular(3, 2, &mut rng);
        let twisted = base.transformed(&u).unwrap();
        assert_eq!(genus_symbol(&twisted, &p).unwrap(), g0);
    }
}

// ---------------------------------------------------------------------------
// proptest invariants for the exact linear algebra layer.
// ---------------------------------------------------------------------------

fn small_matrix() -> impl Strategy<Value = IntMat> {
    (1usize..4, 1usize..4)
        .prop_flat_map(|(r, c)| {
            proptest::collection::vec(-20i64..=20, r * c).prop_map(move |data| {
                IntMat::new(r, c, data.into_iter().map(BigInt::from).collect())
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hnf_reconstruction(m in small_matrix()) {
        let (h, u) = m.hnf();
        prop_assert_eq!(u.mul(&m), h);
        prop_assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn kernel_saturation(m in small_matrix()) {
        let k = m.kernel_basis();
        // Every kernel vector is annihilated.
        for i in 0..k.rows() {
            let v = k.row(i).to_vec();
            let prod = m.mul_vec(&v);
            prop_assert!(prod.iter().all(|x| x.is_zero()));
        }
        if k.rows() > 0 {
            let (d, _, _) = k.smith_normal_form();
            for i in 0..k.rows() {
                prop_assert_eq!(&d[(i, i)], &BigInt::one());
            }
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in proptest::collection::vec(-8i64..=8, 3..5),
        b in proptest::collection::vec(-8i64..=8, 3..5),
    ) {
        let f = QPoly::from_i64_coeffs(&a);
        let g = QPoly::from_i64_coeffs(&b);
        prop_assume!(f.degree().is_some_and(|d| d >= 1));
        prop_assume!(g.degree().is_some_and(|d| d >= 1));
        let r = traceform_core::poly::resultant(&f, &g);
        let common = f.gcd(&g).degree().is_some_and(|d| d > 0);
        prop_assert_eq!(r.is_zero(), common);
    }
}

// ---------------------------------------------------------------------------
// Discriminant sign convention on every fixture field.
// ---------------------------------------------------------------------------

#[test]
fn disc_sign_matches_signature() {
    let c = cfg();
    for coeffs in [
        vec![15i64, 0, 0, 0, 0, 0, 0, 0, 1],
        vec![240, 0, 0, 0, 0, 0, 0, 0, 1],
        vec![11, 2, 0, 1],
        vec![5, -4, 5, -1, 1],
        vec![-1, -2, -1, 2, 0, 1],
        vec![1, -1, -4, 1, 4, 0, -3, 1],
        vec![102, 11, -30, -2, 1],
    ] {
        let k = field_from_i64(&coeffs, &c).unwrap();
        let (_, s) = k.signature();
        assert_eq!(k.disc().is_negative(), s % 2 == 1);
        // And the defining-polynomial identity.
        let pd = poly_discriminant(k.min_poly()).unwrap().to_integer();
        let lhs = factor_integer(&pd, &c).unwrap().reconstruct();
        assert_eq!(lhs, k.index() * k.index() * k.disc());
    }
}
