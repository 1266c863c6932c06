//! Matrix factorizations `(d0 | d1)` of a potential `f`, their 2-periodic
//! Hom complexes, cones, shifts, box products and base change.
//!
//! A factorization has an even piece `E0 = B^rank0` and an odd piece
//! `E1 = B^rank1`, with `d0: E0 -> E1` and `d1: E1 -> E0`. Homs follow the
//! Koszul sign rule: `d(t) = t∘δ - (-1)^|t| δ∘t`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{homology, solve_linear, Dim, Homology, Limits, Poly, PolyMatrix, RingCtx};

/// A ring together with a potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LGPair {
    ctx: Arc<RingCtx>,
    f: Poly,
}

impl LGPair {
    pub fn new(f: Poly) -> LGPair {
        LGPair { ctx: f.ctx().clone(), f }
    }

    /// The pair `(ctx, 0)`.
    pub fn zero(ctx: &Arc<RingCtx>) -> LGPair {
        LGPair { ctx: ctx.clone(), f: Poly::zero(ctx) }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn potential(&self) -> &Poly {
        &self.f
    }

    /// `f ⊞ g` on the tensor ring (variables of `self` first).
    pub fn boxplus(&self, other: &LGPair) -> Result<LGPair> {
        let ctx = self.ctx.tensor(&other.ctx)?;
        let f = &self.f.embed(&ctx, 0) + &other.f.embed(&ctx, self.ctx.nvars());
        Ok(LGPair { ctx, f })
    }
}

impl fmt::Display for LGPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ctx, self.f)
    }
}

/// Checks `lhs == rhs` entrywise, reporting the first offending entry.
pub(crate) fn check_identity(name: &str, degree: Option<i64>, lhs: &PolyMatrix, rhs: &PolyMatrix) -> Result<()> {
    if lhs.shape() != rhs.shape() {
        return Err(Error::Shape(format!("{name}: {:?} vs {:?}", lhs.shape(), rhs.shape())));
    }
    match lhs.first_difference(rhs) {
        None => Ok(()),
        Some((row, col, d)) => Err(Error::IdentityViolation {
            identity: name.to_string(),
            degree,
            row,
            col,
            difference: d.to_string(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFactorization {
    lg: LGPair,
    d0: PolyMatrix,
    d1: PolyMatrix,
}

/// Validates `d1·d0 = f·Id` and `d0·d1 = f·Id`.
pub fn new_mf(lg: &LGPair, d0: PolyMatrix, d1: PolyMatrix) -> Result<MatrixFactorization> {
    let ctx = lg.ctx();
    if d0.ctx() != ctx || d1.ctx() != ctx {
        return Err(Error::ContextMismatch(format!("matrices not over {ctx}")));
    }
    let (r1, r0) = d0.shape();
    if d1.shape() != (r0, r1) {
        return Err(Error::Shape(format!("d0 is {r1}x{r0} but d1 is {}x{}", d1.rows(), d1.cols())));
    }
    check_identity("d1*d0 = f*Id", None, &d1.mul(&d0)?, &PolyMatrix::scalar(ctx, r0, &lg.f))?;
    check_identity("d0*d1 = f*Id", None, &d0.mul(&d1)?, &PolyMatrix::scalar(ctx, r1, &lg.f))?;
    Ok(MatrixFactorization { lg: lg.clone(), d0, d1 })
}

/// The unit `(B, 0)`: rank one in even degree, nothing odd.
pub fn unit_mf(ctx: &Arc<RingCtx>) -> MatrixFactorization {
    MatrixFactorization { lg: LGPair::zero(ctx), d0: PolyMatrix::zeros(ctx, 0, 1), d1: PolyMatrix::zeros(ctx, 1, 0) }
}

/// Swaps the pieces and negates both differentials.
pub fn shift_mf(e: &MatrixFactorization) -> MatrixFactorization {
    MatrixFactorization { lg: e.lg.clone(), d0: e.d1.neg(), d1: e.d0.neg() }
}

impl MatrixFactorization {
    pub fn lg(&self) -> &LGPair {
        &self.lg
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        self.lg.ctx()
    }

    pub fn potential(&self) -> &Poly {
        self.lg.potential()
    }

    pub fn rank0(&self) -> usize {
        self.d0.cols()
    }

    pub fn rank1(&self) -> usize {
        self.d0.rows()
    }

    pub fn d0(&self) -> &PolyMatrix {
        &self.d0
    }

    pub fn d1(&self) -> &PolyMatrix {
        &self.d1
    }

    /// Re-runs validation.
    pub fn validate(&self) -> Result<()> {
        new_mf(&self.lg, self.d0.clone(), self.d1.clone()).map(|_| ())
    }
}

impl fmt::Display for MatrixFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {}) over {}", self.d0, self.d1, self.lg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A homogeneous element of `Hom(E, F)`.
///
/// Even: `m0 = t0: E0 -> F0`, `m1 = t1: E1 -> F1`.
/// Odd: `m0 = s0: E0 -> F1`, `m1 = s1: E1 -> F0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedHom {
    source: MatrixFactorization,
    target: MatrixFactorization,
    parity: Parity,
    m0: PolyMatrix,
    m1: PolyMatrix,
}

fn expected_shapes(e: &MatrixFactorization, f: &MatrixFactorization, parity: Parity) -> ((usize, usize), (usize, usize)) {
    match parity {
        Parity::Even => ((f.rank0(), e.rank0()), (f.rank1(), e.rank1())),
        Parity::Odd => ((f.rank1(), e.rank0()), (f.rank0(), e.rank1())),
    }
}

impl GradedHom {
    pub fn new(
        source: &MatrixFactorization,
        target: &MatrixFactorization,
        parity: Parity,
        m0: PolyMatrix,
        m1: PolyMatrix,
    ) -> Result<GradedHom> {
        if source.lg != target.lg {
            return Err(Error::ContextMismatch(format!("Hom from {} to {}", source.lg, target.lg)));
        }
        if m0.ctx() != source.ctx() || m1.ctx() != source.ctx() {
            return Err(Error::ContextMismatch(format!("hom components not over {}", source.ctx())));
        }
        let (s0, s1) = expected_shapes(source, target, parity);
        if m0.shape() != s0 || m1.shape() != s1 {
            return Err(Error::Shape(format!(
                "{parity} hom components {:?}, {:?}; expected {s0:?}, {s1:?}",
                m0.shape(),
                m1.shape()
            )));
        }
        Ok(GradedHom { source: source.clone(), target: target.clone(), parity, m0, m1 })
    }

    pub fn zero(source: &MatrixFactorization, target: &MatrixFactorization, parity: Parity) -> Result<GradedHom> {
        let ((a, b), (c, d)) = expected_shapes(source, target, parity);
        let ctx = source.ctx();
        GradedHom::new(source, target, parity, PolyMatrix::zeros(ctx, a, b), PolyMatrix::zeros(ctx, c, d))
    }

    pub fn identity(e: &MatrixFactorization) -> GradedHom {
        let ctx = e.ctx();
        GradedHom {
            source: e.clone(),
            target: e.clone(),
            parity: Parity::Even,
            m0: PolyMatrix::identity(ctx, e.rank0()),
            m1: PolyMatrix::identity(ctx, e.rank1()),
        }
    }

    /// `δ` itself, as an odd endomorphism.
    pub fn delta(e: &MatrixFactorization) -> GradedHom {
        GradedHom { source: e.clone(), target: e.clone(), parity: Parity::Odd, m0: e.d0.clone(), m1: e.d1.clone() }
    }

    pub fn source(&self) -> &MatrixFactorization {
        &self.source
    }

    pub fn target(&self) -> &MatrixFactorization {
        &self.target
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn m0(&self) -> &PolyMatrix {
        &self.m0
    }

    pub fn m1(&self) -> &PolyMatrix {
        &self.m1
    }

    pub fn is_zero(&self) -> bool {
        self.m0.is_zero() && self.m1.is_zero()
    }

    fn same_space(&self, rhs: &GradedHom) -> Result<()> {
        if self.parity != rhs.parity || self.source != rhs.source || self.target != rhs.target {
            return Err(Error::Shape("homs live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &GradedHom) -> Result<GradedHom> {
        self.same_space(rhs)?;
        Ok(GradedHom { m0: self.m0.add(&rhs.m0)?, m1: self.m1.add(&rhs.m1)?, ..self.clone() })
    }

    pub fn sub(&self, rhs: &GradedHom) -> Result<GradedHom> {
        self.same_space(rhs)?;
        Ok(GradedHom { m0: self.m0.sub(&rhs.m0)?, m1: self.m1.sub(&rhs.m1)?, ..self.clone() })
    }

    pub fn scale_poly(&self, p: &Poly) -> GradedHom {
        GradedHom { m0: self.m0.scale_poly(p), m1: self.m1.scale_poly(p), ..self.clone() }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedHom) -> Result<GradedHom> {
        if first.target != self.source {
            return Err(Error::Shape("composition of non-composable homs".into()));
        }
        let (m0, m1) = match (self.parity, first.parity) {
            (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Even) => {
                (self.m0.mul(&first.m0)?, self.m1.mul(&first.m1)?)
            }
            (Parity::Even, Parity::Odd) => (self.m1.mul(&first.m0)?, self.m0.mul(&first.m1)?),
            (Parity::Odd, Parity::Odd) => (self.m1.mul(&first.m0)?, self.m0.mul(&first.m1)?),
        };
        let parity = if self.parity == first.parity { Parity::Even } else { Parity::Odd };
        GradedHom::new(&first.source, &self.target, parity, m0, m1)
    }
}

/// The commutator differential `d(t) = t∘δ - (-1)^|t| δ∘t`.
pub fn hom_diff(t: &GradedHom) -> Result<GradedHom> {
    let (e, f) = (&t.source, &t.target);
    let (m0, m1) = match t.parity {
        Parity::Even => (
            t.m1.mul(&e.d0)?.sub(&f.d0.mul(&t.m0)?)?,
            t.m0.mul(&e.d1)?.sub(&f.d1.mul(&t.m1)?)?,
        ),
        Parity::Odd => (
            t.m1.mul(&e.d0)?.add(&f.d1.mul(&t.m0)?)?,
            t.m0.mul(&e.d1)?.add(&f.d0.mul(&t.m1)?)?,
        ),
    };
    GradedHom::new(e, f, t.parity.flip(), m0, m1)
}

pub fn is_closed(t: &GradedHom) -> Result<bool> {
    Ok(hom_diff(t)?.is_zero())
}

/// Cone of a closed even morphism `t: E -> F`: pieces `F0 ⊕ E1`, `F1 ⊕ E0`.
pub fn cone_mf(t: &GradedHom) -> Result<MatrixFactorization> {
    if t.parity != Parity::Even || !is_closed(t)? {
        return Err(Error::NotClosed);
    }
    let (e, f) = (&t.source, &t.target);
    let ctx = e.ctx();
    let nd1e = e.d1.neg();
    let nd0e = e.d0.neg();
    let d0 = PolyMatrix::from_blocks(
        ctx,
        &[f.rank1(), e.rank0()],
        &[f.rank0(), e.rank1()],
        &[vec![Some(&f.d0), Some(&t.m1)], vec![None, Some(&nd1e)]],
    )?;
    let d1 = PolyMatrix::from_blocks(
        ctx,
        &[f.rank0(), e.rank1()],
        &[f.rank1(), e.rank0()],
        &[vec![Some(&f.d1), Some(&t.m0)], vec![None, Some(&nd0e)]],
    )?;
    new_mf(&f.lg, d0, d1)
}

/// The matrices of the 2-periodic complex `Hom(E, F)`, with homs
/// vectorized as `vec(m0)` followed by `vec(m1)`, both row-major.
#[derive(Debug, Clone)]
pub struct HomComplex {
    source: MatrixFactorization,
    target: MatrixFactorization,
    /// `d: Hom^even -> Hom^odd`.
    pub d_even: PolyMatrix,
    /// `d: Hom^odd -> Hom^even`.
    pub d_odd: PolyMatrix,
}

impl HomComplex {
    pub fn new(e: &MatrixFactorization, f: &MatrixFactorization) -> Result<HomComplex> {
        let d_even = Self::diff_matrix(e, f, Parity::Even)?;
        let d_odd = Self::diff_matrix(e, f, Parity::Odd)?;
        Ok(HomComplex { source: e.clone(), target: f.clone(), d_even, d_odd })
    }

    fn dim_of(e: &MatrixFactorization, f: &MatrixFactorization, parity: Parity) -> usize {
        let ((a, b), (c, d)) = expected_shapes(e, f, parity);
        a * b + c * d
    }

    fn diff_matrix(e: &MatrixFactorization, f: &MatrixFactorization, parity: Parity) -> Result<PolyMatrix> {
        let ctx = e.ctx();
        let n = Self::dim_of(e, f, parity);
        let m = Self::dim_of(e, f, parity.flip());
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut unit = vec![Poly::zero(ctx); n];
            unit[k] = Poly::one(ctx);
            let t = Self::unvec(e, f, parity, &unit)?;
            cols.push(Self::vec_of(&hom_diff(&t)?));
        }
        PolyMatrix::from_cols(ctx, m, &cols)
    }

    fn vec_of(t: &GradedHom) -> Vec<Poly> {
        t.m0.entries().iter().chain(t.m1.entries()).cloned().collect()
    }

    fn unvec(e: &MatrixFactorization, f: &MatrixFactorization, parity: Parity, v: &[Poly]) -> Result<GradedHom> {
        let ((a, b), (c, d)) = expected_shapes(e, f, parity);
        let ctx = e.ctx();
        let rows = |off: usize, r: usize, cc: usize| -> Vec<Vec<Poly>> {
            (0..r).map(|i| v[off + i * cc..off + (i + 1) * cc].to_vec()).collect()
        };
        let m0 = PolyMatrix::from_rows(ctx, rows(0, a, b), b)?;
        let m1 = PolyMatrix::from_rows(ctx, rows(a * b, c, d), d)?;
        GradedHom::new(e, f, parity, m0, m1)
    }

    pub fn vectorize(&self, t: &GradedHom) -> Vec<Poly> {
        Self::vec_of(t)
    }

    pub fn devectorize(&self, parity: Parity, v: &[Poly]) -> Result<GradedHom> {
        if v.len() != Self::dim_of(&self.source, &self.target, parity) {
            return Err(Error::Shape(format!("vector of length {} for {parity} homs", v.len())));
        }
        Self::unvec(&self.source, &self.target, parity, v)
    }

    /// Cohomology in the given parity.
    pub fn cohomology(&self, parity: Parity, limits: &Limits) -> Result<Homology> {
        match parity {
            Parity::Even => homology(&self.d_odd, &self.d_even, limits),
            Parity::Odd => homology(&self.d_even, &self.d_odd, limits),
        }
    }
}

/// Field dimensions of even and odd cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StableDims {
    pub even: Dim,
    pub odd: Dim,
}

impl StableDims {
    pub fn finite(even: u64, odd: u64) -> StableDims {
        StableDims { even: Dim::Finite(even), odd: Dim::Finite(odd) }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// The Z/2-graded tensor count: `even = ee' + oo'`, `odd = eo' + oe'`.
    pub fn kunneth(&self, other: &StableDims) -> StableDims {
        fn mul(a: Dim, b: Dim) -> Dim {
            match (a, b) {
                (Dim::Finite(0), _) | (_, Dim::Finite(0)) => Dim::Finite(0),
                (Dim::Finite(x), Dim::Finite(y)) => Dim::Finite(x * y),
                _ => Dim::Infinite,
            }
        }
        fn add(a: Dim, b: Dim) -> Dim {
            match (a, b) {
                (Dim::Finite(x), Dim::Finite(y)) => Dim::Finite(x + y),
                _ => Dim::Infinite,
            }
        }
        StableDims {
            even: add(mul(self.even, other.even), mul(self.odd, other.odd)),
            odd: add(mul(self.even, other.odd), mul(self.odd, other.even)),
        }
    }
}

impl fmt::Display for StableDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.even, self.odd)
    }
}

pub fn hom_cohomology_dims(e: &MatrixFactorization, f: &MatrixFactorization, limits: &Limits) -> Result<StableDims> {
    let hc = HomComplex::new(e, f)?;
    Ok(StableDims { even: hc.cohomology(Parity::Even, limits)?.dim, odd: hc.cohomology(Parity::Odd, limits)?.dim })
}

/// Searches for `s` with `d(s) = t`. `None` proves `t` is not a boundary.
pub fn is_null_homotopic(t: &GradedHom, limits: &Limits) -> Result<Option<GradedHom>> {
    if !is_closed(t)? {
        return Err(Error::NotClosed);
    }
    let hc = HomComplex::new(&t.source, &t.target)?;
    let m = match t.parity {
        Parity::Even => &hc.d_odd,
        Parity::Odd => &hc.d_even,
    };
    match solve_linear(m, &hc.vectorize(t), limits)? {
        Some(x) => {
            let s = hc.devectorize(t.parity.flip(), &x)?;
            if hom_diff(&s)? != *t {
                return Err(Error::Internal("null-homotopy witness fails d(s) = t".into()));
            }
            Ok(Some(s))
        }
        None => Ok(None),
    }
}

/// Box product over the tensor ring, with pieces
/// `even = E0F0 ⊕ E1F1` and `odd = E1F0 ⊕ E0F1`.
pub fn box_product(e: &MatrixFactorization, f: &MatrixFactorization) -> Result<MatrixFactorization> {
    let lg = e.lg.boxplus(&f.lg)?;
    let ctx = lg.ctx().clone();
    let off = e.ctx().nvars();
    let (ed0, ed1) = (e.d0.embed(&ctx, 0), e.d1.embed(&ctx, 0));
    let (fd0, fd1) = (f.d0.embed(&ctx, off), f.d1.embed(&ctx, off));
    let id = |n: usize| PolyMatrix::identity(&ctx, n);
    let (e0, e1, f0, f1) = (e.rank0(), e.rank1(), f.rank0(), f.rank1());

    let a = ed0.kron(&id(f0))?;
    let b = id(e1).kron(&fd1)?.neg();
    let c = id(e0).kron(&fd0)?;
    let d = ed1.kron(&id(f1))?;
    let d0 = PolyMatrix::from_blocks(
        &ctx,
        &[e1 * f0, e0 * f1],
        &[e0 * f0, e1 * f1],
        &[vec![Some(&a), Some(&b)], vec![Some(&c), Some(&d)]],
    )?;

    let a = ed1.kron(&id(f0))?;
    let b = id(e0).kron(&fd1)?;
    let c = id(e1).kron(&fd0)?.neg();
    let d = ed0.kron(&id(f1))?;
    let d1 = PolyMatrix::from_blocks(
        &ctx,
        &[e0 * f0, e1 * f1],
        &[e1 * f0, e0 * f1],
        &[vec![Some(&a), Some(&b)], vec![Some(&c), Some(&d)]],
    )?;
    new_mf(&lg, d0, d1)
}

/// Entrywise substitution `x ↦ images[x]` into `target`.
pub fn base_change_mf(
    e: &MatrixFactorization,
    target: &Arc<RingCtx>,
    images: &BTreeMap<String, Poly>,
) -> Result<MatrixFactorization> {
    let imgs: Vec<Option<Poly>> = e.ctx().vars().iter().map(|v| images.get(v).cloned()).collect();
    let sub = |p: &Poly| p.substitute_indexed(&imgs, target);
    let lg = LGPair::new(sub(e.potential())?);
    let d0 = e.d0.try_map_into(target, sub)?;
    let d1 = e.d1.try_map_into(target, sub)?;
    new_mf(&lg, d0, d1)
}
