//! Benchmark fixtures.

use mfsing_core::koszul::residue_representative;
use mfsing_core::mf::new_mf;
use mfsing_core::poly::parse_poly;
use mfsing_core::{KoszulModule, LGPair, MatrixFactorization, Poly, PolyMatrix, RingCtx};

pub fn lg(f: &str, vars: &[&str]) -> LGPair {
    LGPair::new(parse_poly(f, &RingCtx::rational(vars)).unwrap())
}

/// `(x^a | x^(n-a))` over `(Q[x], x^n)`.
pub fn monomial_mf(n: u32, a: u32) -> MatrixFactorization {
    let l = lg(&format!("x^{n}"), &["x"]);
    let d0 = PolyMatrix::from_strs(l.ctx(), &[&[&format!("x^{a}")]]).unwrap();
    let d1 = PolyMatrix::from_strs(l.ctx(), &[&[&format!("x^{}", n - a)]]).unwrap();
    new_mf(&l, d0, d1).unwrap()
}

/// Rank two factorization of `x^2 + y^3`.
pub fn cusp_mf() -> MatrixFactorization {
    let l = lg("x^2 + y^3", &["x", "y"]);
    let d0 = PolyMatrix::from_strs(l.ctx(), &[&["x", "y"], &["-y^2", "x"]]).unwrap();
    let d1 = PolyMatrix::from_strs(l.ctx(), &[&["x", "-y"], &["y^2", "x"]]).unwrap();
    new_mf(&l, d0, d1).unwrap()
}

/// The residue field representative over `(Q[x], x^n)`.
pub fn residue_rep(n: u32) -> KoszulModule {
    let l = lg(&format!("x^{n}"), &["x"]);
    let x = Poly::var(l.ctx(), "x").unwrap();
    residue_representative(&l, &x, &x.pow(n - 1)).unwrap()
}

/// Presentation of the residue field of `Q[x, y]` over the potential `x*y`.
pub fn residue_presentation() -> (LGPair, PolyMatrix) {
    let l = lg("x*y", &["x", "y"]);
    let p = PolyMatrix::from_strs(l.ctx(), &[&["x", "y"]]).unwrap();
    (l, p)
}
