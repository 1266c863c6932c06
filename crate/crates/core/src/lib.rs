//! Exact computations with matrix factorizations, Koszul modules over
//! Landau–Ginzburg pairs, and their singularity categories.

pub mod error;
pub mod koszul;
pub mod mf;
pub mod orlov;
pub mod poly;
pub mod sing;

pub use error::{Error, Resource, Result};
pub use koszul::KoszulModule;
pub use mf::{GradedHom, LGPair, MatrixFactorization, Parity, StableDims};
pub use poly::{Dim, Field, Limits, MonomialOrder, Poly, PolyMatrix, RingCtx};
