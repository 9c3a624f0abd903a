//! Exact-arithmetic toolkit for integral trace forms of number fields.
//!
//! Everything in this crate is computed over arbitrary-precision integers and
//! rationals; there is no floating point anywhere. The layers build on each
//! other roughly bottom-up:
//!
//! * [`matrix`], [`poly`], [`modp`], [`intfactor`]: exact linear algebra,
//!   univariate polynomial arithmetic, factorization over prime fields and
//!   over the integers.
//! * [`numfield`]: number fields from defining polynomials; maximal orders,
//!   discriminants, signatures, splitting of primes, tameness, conjugacy.
//! * [`traceform`]: the integral trace form and the trace-zero form as
//!   integer Gram lattices.
//! * [`hilbert`], [`genus`], [`decide`]: local invariants of rational
//!   quadratic forms, p-adic genus symbols and the equivalence decision
//!   pipeline for trace forms.
//! * [`isometry`]: integral equivalence of positive-definite lattices with
//!   exact witnesses.
//! * [`spectra`]: splitting-type spectra and non-conjugacy certificates.
//!
//! With the default `parallel` feature the batch operations (spectra, bulk
//! field construction, pairwise scans) fan out over a rayon pool; disabling
//! the feature leaves sequential equivalents with identical results.

pub mod config;
pub mod conjugacy;
pub mod decide;
pub mod error;
pub mod genus;
pub mod hilbert;
pub mod intfactor;
pub mod isometry;
pub mod matrix;
pub mod modp;
pub mod numfield;
pub mod par;
pub mod poly;
pub mod rng;
pub mod spectra;
pub mod traceform;

pub use config::CoreConfig;
pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
