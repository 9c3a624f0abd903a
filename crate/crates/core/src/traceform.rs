//! Integral trace forms and trace-zero forms as integer Gram lattices.
//!
//! The trace pairing (x, y) -> tr(xy) restricted to the maximal order gives
//! an integer symmetric matrix over any integral basis; its determinant is
//! exactly the field discriminant. The trace-zero form is the restriction to
//! the rank n-1 sublattice of trace-zero integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{diagonalize_symmetric, IntMat};
use crate::numfield::NumberField;
use crate::poly::QPoly;

/// Which construction produced a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    FullTrace { field: String },
    TraceZero { field: String },
    External { label: String },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::FullTrace { field } => write!(f, "trace({field})"),
            Provenance::TraceZero { field } => write!(f, "trace-zero({field})"),
            Provenance::External { label } => write!(f, "{label}"),
        }
    }
}

/// Symmetric integer Gram matrix with provenance and cached determinant.
///
/// Equality is literal matrix equality (provenance is a label, not part of
/// the value); equivalence questions are answered by the invariant and
/// isometry layers.
#[derive(Debug, Clone)]
pub struct QuadLattice {
    gram: IntMat,
    det: BigInt,
    provenance: Provenance,
}

impl PartialEq for QuadLattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for QuadLattice {}

impl QuadLattice {
    pub fn new(gram: IntMat, provenance: Provenance) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let det = gram.det();
        Ok(Self { gram, det, provenance })
    }

    pub fn external(gram: IntMat, label: &str) -> Result<Self> {
        Self::new(gram, Provenance::External { label: label.to_string() })
    }

    pub fn from_i64_rows(rows: &[&[i64]], label: &str) -> Result<Self> {
        Self::external(IntMat::from_i64_rows(rows), label)
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det.is_zero()
    }

    /// Entrywise reduction mod m with an all-zero flag.
    pub fn gram_mod(&self, m: &BigInt) -> (IntMat, bool) {
        self.gram.reduce_mod(m)
    }

    /// Evaluate the quadratic form at an integer vector.
    pub fn norm_of(&self, v: &[BigInt]) -> BigInt {
        let gv = self.gram.mul_vec(v);
        v.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    /// Inner product of two integer vectors under the Gram matrix.
    pub fn inner(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let gw = self.gram.mul_vec(w);
        v.iter().zip(&gw).map(|(a, b)| a * b).sum()
    }

    /// Pull the lattice back along a basis change: U * G * U^t.
    pub fn transformed(&self, u: &IntMat) -> Result<Self> {
        let g = u.mul(&self.gram).mul(&u.transpose());
        Self::new(g, self.provenance.clone())
    }
}

/// Gram matrix of the trace pairing over the integral basis.
pub fn trace_gram(field: &NumberField) -> QuadLattice {
    let gram = trace_gram_on_rows(
        field,
        &(0..field.degree())
            .map(|i| field.basis_element(i))
            .collect::<Vec<_>>(),
    );
    let lat = QuadLattice::new(
        gram,
        Provenance::FullTrace { field: field.min_poly().to_string() },
    )
    .expect("trace gram is symmetric");
    debug_assert_eq!(lat.det, *field.disc());
    lat
}

/// Gram matrix of the trace pairing over an arbitrary list of elements given
/// as polynomials in theta. Entries must come out integral.
pub fn trace_gram_on_rows(field: &NumberField, elems: &[QPoly]) -> IntMat {
    let n = elems.len();
    let mut data = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let prod = field.mul_mod(&elems[i], &elems[j]);
            let t = field.trace_of(&prod);
            assert!(t.is_integer(), "trace pairing of order elements is integral");
            data[i * n + j] = t.to_integer();
            data[j * n + i] = data[i * n + j].clone();
        }
    }
    IntMat::new(n, n, data)
}

/// Coordinates (in the integral basis) of a basis of the trace-zero module,
/// the saturated rank n-1 kernel of the trace functional.
pub fn trace_zero_coords(field: &NumberField) -> IntMat {
    let n = field.degree();
    let mut row = Vec::with_capacity(n);
    for i in 0..n {
        let t = field.trace_of(&field.basis_element(i));
        debug_assert!(t.is_integer());
        row.push(t.to_integer());
    }
    let m = IntMat::from_rows(vec![row]);
    let k = m.kernel_basis();
    debug_assert_eq!(k.rows(), n - 1);
    k
}

/// Trace-zero basis as field elements.
pub fn trace_zero_basis(field: &NumberField) -> Vec<QPoly> {
    if field.degree() == 1 {
        return Vec::new();
    }
    let coords = trace_zero_coords(field);
    (0..coords.rows())
        .map(|i| field.from_basis_coords(coords.row(i)))
        .collect()
}

/// Gram matrix of the trace pairing restricted to the trace-zero module.
pub fn trace_zero_gram(field: &NumberField) -> Result<QuadLattice> {
    if field.degree() < 2 {
        return Err(Error::DegreeOne);
    }
    let elems = trace_zero_basis(field);
    let gram = trace_gram_on_rows(field, &elems);
    let lat = QuadLattice::new(
        gram,
        Provenance::TraceZero { field: field.min_poly().to_string() },
    )?;
    debug_assert!(!lat.det().is_zero());
    Ok(lat)
}

/// Signature (positive count, negative count) of a nondegenerate lattice.
pub fn form_signature(lat: &QuadLattice) -> Result<(usize, usize)> {
    if !lat.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let d = diagonalize_symmetric(&lat.gram.to_rat())?;
    let pos = d.diagonal.iter().filter(|x| x.is_positive()).count();
    let neg = d.diagonal.iter().filter(|x| x.is_negative()).count();
    debug_assert_eq!(pos + neg, lat.dim());
    Ok((pos, neg))
}

/// Rational diagonal of the form, for the local invariant layer.
pub fn rational_diagonal(lat: &QuadLattice) -> Result<Vec<BigRational>> {
    if !lat.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let d = diagonalize_symmetric(&lat.gram.to_rat())?;
    debug_assert!(d.zero_positions.is_empty());
    Ok(d.diagonal)
}
