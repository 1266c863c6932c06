//! Exact polynomial arithmetic over Q and F_p, with Gröbner-based linear
//! algebra over polynomial rings.

pub mod dense;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod polynomial;
pub mod ring;

pub use dense::DenseMatrix;
pub use field::{Field, Scalar};
pub use groebner::{groebner_ideal, groebner_module, GroebnerBasis, Limits};
pub use linalg::{homology, kernel, quotient_k_dim, solve_linear, solve_matrix, Dim, Homology, Lifter};
pub use matrix::PolyMatrix;
pub use parse::parse_poly;
pub use polynomial::Poly;
pub use ring::{Monomial, MonomialOrder, RingCtx};

/// Normal form of a column against a Gröbner basis.
pub fn normal_form(v: &[Poly], gb: &GroebnerBasis) -> error::Result<Vec<Poly>> {
    gb.normal_form(v)
}

use crate::error;
