//! p-adic genus symbols via Jordan decomposition.
//!
//! At odd p the symbol (scale, dimension, Legendre class of the unit
//! determinant per Jordan constituent) is a complete and canonical local
//! invariant. At p = 2 the recorded data (scale, dimension, determinant
//! mod 8, type, oddity) is complete but NOT canonicalized: inequivalent
//! symbols can describe the same lattice. Comparisons at 2 therefore come
//! in three values: raw-equal symbols mean the same local class, mismatches
//! in the scale/dimension/type skeleton mean different classes, and
//! anything else is reported as undetermined rather than guessed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::CoreConfig;
use crate::error::{Error, Result};
use crate::hilbert::legendre;
use crate::intfactor::factor_integer;
use crate::matrix::RatMat;
use crate::traceform::QuadLattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoBlockData {
    /// Unit determinant residue mod 8 (in {1,3,5,7}).
    pub det_mod8: u8,
    /// Even type: no odd diagonal entry at this scale.
    pub is_even: bool,
    /// Sum of odd diagonal units mod 8 (0 for even blocks).
    pub oddity: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanBlock {
    pub scale: u32,
    pub dim: usize,
    /// Legendre class of the unit determinant, odd p only (0 at p = 2).
    pub det_class: i8,
    pub two: Option<TwoBlockData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Exact,
    PartialAtTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusSymbol {
    pub p: BigInt,
    pub blocks: Vec<JordanBlock>,
    pub completeness: Completeness,
}

impl std::fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "p={}:", self.p)?;
        for b in &self.blocks {
            match &b.two {
                None => write!(
                    f,
                    " ({}^{} {})",
                    self.p,
                    b.scale,
                    if b.det_class > 0 { "+" } else { "-" }
                )?,
                Some(t) => write!(
                    f,
                    " (2^{} dim {} det {} {} odt {})",
                    b.scale,
                    b.dim,
                    t.det_mod8,
                    if t.is_even { "even" } else { "odd" },
                    t.oddity
                )?,
            }
        }
        Ok(())
    }
}

fn val_rat(x: &BigRational, p: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0i64;
    let mut n = x.numer().clone();
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    let mut d = x.denom().clone();
    while (&d % p).is_zero() {
        d /= p;
        v -= 1;
    }
    Some(v)
}

fn unit_part(x: &BigRational, p: &BigInt, v: i64) -> BigRational {
    let mut pw = BigInt::one();
    for _ in 0..v.unsigned_abs() {
        pw *= p;
    }
    if v >= 0 {
        x * BigRational::new(BigInt::one(), pw)
    } else {
        x * BigRational::from(pw)
    }
}

/// Residue mod 8 of a rational with odd denominator.
fn residue_mod8(x: &BigRational) -> u8 {
    let m = BigInt::from(8);
    let num = x.numer().mod_floor(&m).to_u8().unwrap();
    let den = x.denom().mod_floor(&m).to_u8().unwrap();
    // odd^2 = 1 mod 8, so the denominator is its own inverse.
    ((num as u16 * den as u16) % 8) as u8
}

enum Constituent {
    /// scale, unit (diagonal entry / p^scale)
    Single(i64, BigRational),
    /// scale, unit 2x2 block entries (a, b, c) already divided by 2^scale
    Block(i64, BigRational, BigRational, BigRational),
}

/// p-adic Jordan decomposition by valuation-pivoted congruence reduction
/// over Z_(p) (transformations keep p-integral coefficients throughout).
fn jordan_constituents(lat: &QuadLattice, p: &BigInt) -> Result<Vec<Constituent>> {
    if !lat.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let n = lat.dim();
    let mut a = lat.gram().to_rat();
    let mut active: Vec<usize> = (0..n).collect();
    let two = p == &BigInt::from(2);
    let mut out = Vec::new();

    while !active.is_empty() {
        // Minimal valuation over the active block.
        let mut min_v: Option<i64> = None;
        let mut arg_diag: Option<usize> = None;
        let mut arg_off: Option<(usize, usize)> = None;
        for (ai, &i) in active.iter().enumerate() {
            for &j in active.iter().skip(ai) {
                if let Some(v) = val_rat(&a[(i, j)], p) {
                    if min_v.map_or(true, |m| v < m) {
                        min_v = Some(v);
                        arg_diag = None;
                        arg_off = None;
                        if i == j {
                            arg_diag = Some(i);
                        } else {
                            arg_off = Some((i, j));
                        }
                    } else if Some(v) == min_v {
                        if i == j && arg_diag.is_none() {
                            arg_diag = Some(i);
                        } else if i != j && arg_off.is_none() {
                            arg_off = Some((i, j));
                        }
                    }
                }
            }
        }
        let m = min_v.expect("nondegenerate block has a nonzero entry");

        if let Some(i) = arg_diag {
            eliminate_with_diagonal(&mut a, &active, i);
            let u = unit_part(&a[(i, i)], p, m);
            out.push(Constituent::Single(m, u));
            active.retain(|&x| x != i);
            continue;
        }
        let (i, j) = arg_off.expect("some minimal entry exists");
        if !two {
            // e_i += e_j lifts the minimal valuation onto the diagonal.
            let n_all = a.rows();
            for k in 0..n_all {
                let t = &a[(i, k)] + &a[(j, k)];
                a[(i, k)] = t;
            }
            for k in 0..n_all {
                let t = &a[(k, i)] + &a[(k, j)];
                a[(k, i)] = t;
            }
            debug_assert_eq!(val_rat(&a[(i, i)], p), Some(m));
            continue;
        }
        // p = 2: keep the even 2x2 block.
        eliminate_with_block(&mut a, &active, i, j);
        let ai = unit_part(&a[(i, i)], p, m);
        let b = unit_part(&a[(i, j)], p, m);
        let c = unit_part(&a[(j, j)], p, m);
        out.push(Constituent::Block(m, ai, b, c));
        active.retain(|&x| x != i && x != j);
    }
    Ok(out)
}

/// Clear row/column `i` against the diagonal pivot (i, i); coefficients
/// A_ki / A_ii are p-integral because the pivot has minimal valuation.
fn eliminate_with_diagonal(a: &mut RatMat, active: &[usize], i: usize) {
    let n = a.rows();
    let pivot = a[(i, i)].clone();
    for &k in active {
        if k == i || a[(i, k)].is_zero() {
            continue;
        }
        let coef = &a[(i, k)] / &pivot;
        for l in 0..n {
            let t = &a[(k, l)] - &coef * &a[(i, l)];
            a[(k, l)] = t;
        }
        for l in 0..n {
            let t = &a[(l, k)] - &coef * &a[(l, i)];
            a[(l, k)] = t;
        }
    }
}

/// Clear all other rows/columns against the 2x2 block at (i, j); the block
/// determinant has exactly twice the minimal valuation, so the solved
/// coefficients stay 2-integral.
fn eliminate_with_block(a: &mut RatMat, active: &[usize], i: usize, j: usize) {
    let n = a.rows();
    let det = &a[(i, i)] * &a[(j, j)] - &a[(i, j)] * &a[(i, j)];
    debug_assert!(!det.is_zero());
    let targets: Vec<usize> = active.iter().copied().filter(|&k| k != i && k != j).collect();
    for k in targets {
        let ri = a[(i, k)].clone();
        let rj = a[(j, k)].clone();
        if ri.is_zero() && rj.is_zero() {
            continue;
        }
        // Solve (x, y): x*A_ii + y*A_ij = ri ; x*A_ij + y*A_jj = rj.
        let x = (&ri * &a[(j, j)] - &rj * &a[(i, j)]) / &det;
        let y = (&rj * &a[(i, i)] - &ri * &a[(i, j)]) / &det;
        for l in 0..n {
            let t = &a[(k, l)] - &x * &a[(i, l)] - &y * &a[(j, l)];
            a[(k, l)] = t;
        }
        for l in 0..n {
            let t = &a[(l, k)] - &x * &a[(l, i)] - &y * &a[(l, j)];
            a[(l, k)] = t;
        }
    }
}

/// Genus symbol of an integral lattice at p.
pub fn genus_symbol(lat: &QuadLattice, p: &BigInt) -> Result<GenusSymbol> {
    let constituents = jordan_constituents(lat, p)?;
    let two = p == &BigInt::from(2);
    // Group by scale.
    let mut scales: std::collections::BTreeMap<i64, Vec<&Constituent>> = Default::default();
    for c in &constituents {
        let s = match c {
            Constituent::Single(s, _) => *s,
            Constituent::Block(s, _, _, _) => *s,
        };
        scales.entry(s).or_default().push(c);
    }
    let mut blocks = Vec::new();
    for (scale, cs) in &scales {
        debug_assert!(*scale >= 0, "integral lattice has nonnegative scales");
        let scale_u = *scale as u32;
        if !two {
            let mut dim = 0usize;
            let mut unit_prod = BigRational::one();
            for c in cs {
                match c {
                    Constituent::Single(_, u) => {
                        dim += 1;
                        unit_prod *= u;
                    }
                    Constituent::Block(..) => unreachable!("odd p diagonalizes"),
                }
            }
            let rep = unit_prod.numer() * unit_prod.denom();
            let det_class = legendre(&rep, p);
            debug_assert!(det_class != 0);
            blocks.push(JordanBlock { scale: scale_u, dim, det_class, two: None });
        } else {
            let mut dim = 0usize;
            let mut det_unit = BigRational::one();
            let mut oddity = 0u16;
            let mut has_odd = false;
            for c in cs {
                match c {
                    Constituent::Single(_, u) => {
                        dim += 1;
                        det_unit *= u;
                        oddity = (oddity + residue_mod8(u) as u16) % 8;
                        has_odd = true;
                    }
                    Constituent::Block(_, a, b, c2) => {
                        dim += 2;
                        let block_det = a * c2 - b * b;
                        det_unit *= &block_det;
                    }
                }
            }
            blocks.push(JordanBlock {
                scale: scale_u,
                dim,
                det_class: 0,
                two: Some(TwoBlockData {
                    det_mod8: residue_mod8(&det_unit),
                    is_even: !has_odd,
                    oddity: (oddity % 8) as u8,
                }),
            });
        }
    }
    Ok(GenusSymbol {
        p: p.clone(),
        blocks,
        completeness: if two { Completeness::PartialAtTwo } else { Completeness::Exact },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenusComparison {
    Same,
    Different { reason: String },
    UndeterminedAtTwo,
}

/// Compare genera of two integral lattices across all relevant places.
///
/// Sound three-valued answer: `Same` and `Different` are proved; mismatches
/// at 2 that only involve canonicalization-sensitive data (determinants and
/// oddities per block) come back `UndeterminedAtTwo`.
pub fn same_genus(l1: &QuadLattice, l2: &QuadLattice, cfg: &CoreConfig) -> Result<GenusComparison> {
    if l1.dim() != l2.dim() {
        return Ok(GenusComparison::Different {
            reason: format!("dimension {} vs {}", l1.dim(), l2.dim()),
        });
    }
    if l1.det() != l2.det() {
        return Ok(GenusComparison::Different {
            reason: format!("determinant {} vs {}", l1.det(), l2.det()),
        });
    }
    let s1 = crate::traceform::form_signature(l1)?;
    let s2 = crate::traceform::form_signature(l2)?;
    if s1 != s2 {
        return Ok(GenusComparison::Different {
            reason: format!("signature {s1:?} vs {s2:?}"),
        });
    }
    // Primes dividing 2 * det cover every place with a nontrivial symbol.
    let det_fact = factor_integer(l1.det(), cfg)?;
    let mut primes: Vec<BigInt> = vec![BigInt::from(2)];
    for p in det_fact.primes() {
        if !primes.contains(p) {
            primes.push(p.clone());
        }
    }
    primes.sort();

    let mut undetermined = false;
    for p in &primes {
        let g1 = genus_symbol(l1, p)?;
        let g2 = genus_symbol(l2, p)?;
        if g1 == g2 {
            continue;
        }
        if p == &BigInt::from(2) {
            // Scale/dimension/type skeletons are canonical invariants of the
            // 2-adic Jordan splitting; determinants and oddities are not.
            let skel = |g: &GenusSymbol| -> Vec<(u32, usize, bool)> {
                g.blocks
                    .iter()
                    .map(|b| (b.scale, b.dim, b.two.as_ref().map(|t| t.is_even).unwrap_or(false)))
                    .collect()
            };
            if skel(&g1) != skel(&g2) {
                return Ok(GenusComparison::Different {
                    reason: format!("2-adic Jordan skeleton: {g1} vs {g2}"),
                });
            }
            undetermined = true;
        } else {
            return Ok(GenusComparison::Different {
                reason: format!("{g1} vs {g2}"),
            });
        }
    }
    if undetermined {
        Ok(GenusComparison::UndeterminedAtTwo)
    } else {
        Ok(GenusComparison::Same)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::random_unimodular;
    use crate::rng::SplitMix64;

    fn cfg() -> CoreConfig {
        CoreConfig::default()
    }

    fn lat(rows: &[&[i64]]) -> QuadLattice {
        QuadLattice::from_i64_rows(rows, "test").unwrap()
    }

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn diag_1_5_at_5() {
        // Brute-force expected: unimodular part <1> at scale 0, <5>/5 = <1>
        // at scale 1, both with Legendre class +1.
        let l = lat(&[&[1, 0], &[0, 5]]);
        let g = genus_symbol(&l, &bi(5)).unwrap();
        assert_eq!(g.blocks.len(), 2);
        assert_eq!((g.blocks[0].scale, g.blocks[0].dim, g.blocks[0].det_class), (0, 1, 1));
        assert_eq!((g.blocks[1].scale, g.blocks[1].dim, g.blocks[1].det_class), (1, 1, 1));
    }

    #[test]
    fn unimodular_at_3() {
        let l = lat(&[&[1, 0], &[0, 1]]);
        let g = genus_symbol(&l, &bi(3)).unwrap();
        assert_eq!(g.blocks.len(), 1);
        assert_eq!((g.blocks[0].scale, g.blocks[0].dim, g.blocks[0].det_class), (0, 2, 1));
        assert_eq!(g.completeness, Completeness::Exact);
    }

    #[test]
    fn hyperbolic_even_block_at_2() {
        let l = lat(&[&[0, 1], &[1, 0]]);
        // Degenerate? no: det = -1.
        let g = genus_symbol(&l, &bi(2)).unwrap();
        assert_eq!(g.blocks.len(), 1);
        let b = &g.blocks[0];
        assert_eq!((b.scale, b.dim), (0, 2));
        let t = b.two.as_ref().unwrap();
        assert!(t.is_even);
        assert_eq!(t.det_mod8, 7); // det -1
        assert_eq!(t.oddity, 0);
        assert_eq!(g.completeness, Completeness::PartialAtTwo);
    }

    #[test]
    fn same_genus_reflexive_and_invariant() {
        let mut rng = SplitMix64::new(31);
        let l = lat(&[&[2, 1, 0], &[1, 4, 1], &[0, 1, 6]]);
        assert_eq!(same_genus(&l, &l, &cfg()).unwrap(), GenusComparison::Same);
        for _ in 0..10 {
            let u = random_unimodular(3, 2, &mut rng);
            let l2 = l.transformed(&u).unwrap();
            let out = same_genus(&l, &l2, &cfg()).unwrap();
            assert!(
                out == GenusComparison::Same || out == GenusComparison::UndeterminedAtTwo,
                "genus must not separate equivalent lattices: {out:?}"
            );
        }
    }

    #[test]
    fn odd_symbol_invariant_under_basis_change() {
        let mut rng = SplitMix64::new(77);
        let l = lat(&[&[2, 1], &[1, 18]]);
        let g0 = genus_symbol(&l, &bi(5)).unwrap();
        for _ in 0..50 {
            let u = random_unimodular(2, 3, &mut rng);
            let l2 = l.transformed(&u).unwrap();
            assert_eq!(genus_symbol(&l2, &bi(5)).unwrap(), g0);
        }
    }

    #[test]
    fn same_genus_different_class_pair() {
        // The classic det-11 pair: one genus, two isometry classes.
        let a = lat(&[&[1, 0], &[0, 11]]);
        let b = lat(&[&[3, 1], &[1, 4]]);
        let out = same_genus(&a, &b, &cfg()).unwrap();
        assert!(
            out == GenusComparison::Same || out == GenusComparison::UndeterminedAtTwo,
            "{out:?}"
        );
    }

    #[test]
    fn different_genus_detected() {
        // <1, 9> vs <3, 3>: same determinant, different 3-adic Jordan scales.
        let a = lat(&[&[1, 0], &[0, 9]]);
        let b = lat(&[&[3, 0], &[0, 3]]);
        let out = same_genus(&a, &b, &cfg()).unwrap();
        assert!(matches!(out, GenusComparison::Different { .. }), "{out:?}");
    }
}
