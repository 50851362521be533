//! Definite Hermitian determinantal representations of hyperbolic plane
//! curves.
//!
//! Given a real ternary form `f` that is hyperbolic with respect to a point
//! `e`, [`dixon_represent`] returns Hermitian matrices `M0, M1, M2` with
//! `det(x M0 + y M1 + z M2) = f` and `M(e)` positive definite. The
//! surrounding modules certify hyperbolicity and interlacing by sampling,
//! compute intersection divisors, and export the hyperbolicity cone as a
//! linear matrix inequality.

pub mod dixon;
pub mod error;
pub mod fixtures;
pub mod hyperbolic;
pub mod intersect;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod polymatrix;
pub mod sampling;
pub mod uniroots;

pub use dixon::{dixon_represent, dixon_represent_with, perturb_smooth, DixonOptions, DixonReport, Representation};
pub use error::{Error, Result};
pub use hyperbolic::{Certificate, Verdict};
pub use intersect::{Divisor, DivisorEntry, ProjPoint};
pub use pencil::{HermitianPencil, SymPencil};
pub use poly::HomogPoly3;
pub use polymatrix::PolyMatrix;
pub use uniroots::{RootList, UniPoly};

pub use num_complex::Complex64;
