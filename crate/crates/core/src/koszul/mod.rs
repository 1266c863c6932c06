//! Strict dg-modules over the Koszul algebra `K(B, f)`: bounded complexes
//! of free modules `(E, d)` with an operator `h` of degree `-1` such that
//! `dh + hd = f`, `d² = 0` and `h² = 0`.
//!
//! Grading is cohomological: `d` raises degree by one, `h` lowers it by one.

mod convolve;
mod telescope;
mod twisted;

use std::fmt;
use std::sync::Arc;

pub use convolve::{act_point, convolve_ext, pull_push, pull_push_comparison, ConvolutionLabels};
pub use telescope::telescope;
pub use twisted::{
    au_tensor, rhom_trivial_dims, twisted_e, twisted_monoidality_check, u_cone_check, AuModule, GenLabel, UConeReport,
};

use crate::error::{Error, Result};
use crate::mf::{check_identity, LGPair};
use crate::poly::{Field, Poly, PolyMatrix, RingCtx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulModule {
    lg: LGPair,
    lo: i64,
    ranks: Vec<usize>,
    /// `d[k]`: degree `lo + k` to `lo + k + 1`, for consecutive degrees in the window.
    d: Vec<PolyMatrix>,
    /// `h[k]`: degree `lo + k + 1` to `lo + k`.
    h: Vec<PolyMatrix>,
}

/// Validates shapes and the three identities `d² = 0`, `h² = 0`,
/// `dh + hd = f`.
///
/// `d` and `h` list the maps between consecutive degrees of the window:
/// `d[k]: E^(lo+k) -> E^(lo+k+1)` and `h[k]: E^(lo+k+1) -> E^(lo+k)`.
pub fn new_koszul(lg: &LGPair, lo: i64, ranks: Vec<usize>, d: Vec<PolyMatrix>, h: Vec<PolyMatrix>) -> Result<KoszulModule> {
    let ctx = lg.ctx();
    let gaps = ranks.len().saturating_sub(1);
    if d.len() != gaps || h.len() != gaps {
        return Err(Error::Shape(format!(
            "{} degrees need {gaps} maps each for d and h; got {} and {}",
            ranks.len(),
            d.len(),
            h.len()
        )));
    }
    for k in 0..gaps {
        let deg = lo + k as i64;
        if d[k].shape() != (ranks[k + 1], ranks[k]) {
            return Err(Error::Shape(format!("d at degree {deg} is {:?}, expected {:?}", d[k].shape(), (ranks[k + 1], ranks[k]))));
        }
        if h[k].shape() != (ranks[k], ranks[k + 1]) {
            return Err(Error::Shape(format!(
                "h at degree {} is {:?}, expected {:?}",
                deg + 1,
                h[k].shape(),
                (ranks[k], ranks[k + 1])
            )));
        }
        if d[k].ctx() != ctx || h[k].ctx() != ctx {
            return Err(Error::ContextMismatch(format!("maps at degree {deg} are not over {ctx}")));
        }
    }
    let m = KoszulModule { lg: lg.clone(), lo, ranks, d, h };
    m.validate()?;
    Ok(m)
}

impl KoszulModule {
    /// Checks the defining identities degree by degree.
    pub fn validate(&self) -> Result<()> {
        let ctx = self.ctx();
        for i in self.degrees() {
            let r = self.rank(i);
            let zero = PolyMatrix::zeros(ctx, self.rank(i + 2), r);
            check_identity("d*d = 0", Some(i), &self.d_at(i + 1).mul(&self.d_at(i))?, &zero)?;
            let zero = PolyMatrix::zeros(ctx, self.rank(i - 2), r);
            check_identity("h*h = 0", Some(i), &self.h_at(i - 1).mul(&self.h_at(i))?, &zero)?;
            let comm = self.d_at(i - 1).mul(&self.h_at(i))?.add(&self.h_at(i + 1).mul(&self.d_at(i))?)?;
            check_identity("d*h + h*d = f*Id", Some(i), &comm, &PolyMatrix::scalar(ctx, r, self.lg.potential()))?;
        }
        Ok(())
    }

    pub fn lg(&self) -> &LGPair {
        &self.lg
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        self.lg.ctx()
    }

    pub fn potential(&self) -> &Poly {
        self.lg.potential()
    }

    /// Lowest degree of the window.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest degree of the window (`lo - 1` for the empty module).
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    /// Number of degrees in the window.
    pub fn width(&self) -> usize {
        self.ranks.len()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank in degree `i`, zero outside the window.
    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    /// `d: E^i -> E^(i+1)`, a zero-shaped matrix outside the window.
    pub fn d_at(&self, i: i64) -> PolyMatrix {
        if i >= self.lo && i < self.hi() {
            self.d[(i - self.lo) as usize].clone()
        } else {
            PolyMatrix::zeros(self.ctx(), self.rank(i + 1), self.rank(i))
        }
    }

    /// `h: E^i -> E^(i-1)`.
    pub fn h_at(&self, i: i64) -> PolyMatrix {
        if i > self.lo && i <= self.hi() {
            self.h[(i - self.lo - 1) as usize].clone()
        } else {
            PolyMatrix::zeros(self.ctx(), self.rank(i - 1), self.rank(i))
        }
    }

    pub fn d_maps(&self) -> &[PolyMatrix] {
        &self.d
    }

    pub fn h_maps(&self) -> &[PolyMatrix] {
        &self.h
    }

    /// Builds from per-degree closures without the window bookkeeping.
    pub(crate) fn from_fns(
        lg: &LGPair,
        lo: i64,
        ranks: Vec<usize>,
        d: impl Fn(i64) -> Result<PolyMatrix>,
        h: impl Fn(i64) -> Result<PolyMatrix>,
    ) -> Result<KoszulModule> {
        let n = ranks.len() as i64;
        let ds = (0..n - 1).map(|k| d(lo + k)).collect::<Result<Vec<_>>>()?;
        let hs = (0..n - 1).map(|k| h(lo + k + 1)).collect::<Result<Vec<_>>>()?;
        new_koszul(lg, lo, ranks, ds, hs)
    }
}

impl fmt::Display for KoszulModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Koszul module over {} in degrees [{}, {}] with ranks {:?}", self.lg, self.lo, self.hi(), self.ranks)
    }
}

/// `K(B, f)`: `B·ε -> B` in degrees `[-1, 0]`, `d = f`, `h = 1`.
pub fn koszul_algebra(lg: &LGPair) -> KoszulModule {
    let ctx = lg.ctx();
    KoszulModule {
        lg: lg.clone(),
        lo: -1,
        ranks: vec![1, 1],
        d: vec![PolyMatrix::scalar(ctx, 1, lg.potential())],
        h: vec![PolyMatrix::identity(ctx, 1)],
    }
}

/// The field in degree zero over `(field, 0)`.
pub fn trivial_module(field: Field) -> KoszulModule {
    let ctx = RingCtx::point(field);
    KoszulModule { lg: LGPair::zero(&ctx), lo: 0, ranks: vec![1], d: Vec::new(), h: Vec::new() }
}

/// The rank-one two-term module `B --x--> B` with `h = f/x`, in degrees
/// `[-1, 0]`. It represents the residue field over `(Q[x], x^n)`.
pub fn residue_representative(lg: &LGPair, d: &Poly, h: &Poly) -> Result<KoszulModule> {
    let ctx = lg.ctx();
    new_koszul(
        lg,
        -1,
        vec![1, 1],
        vec![PolyMatrix::scalar(ctx, 1, d)],
        vec![PolyMatrix::scalar(ctx, 1, h)],
    )
}

/// Restriction along `B -> K(B, f)`: keeps `d`, drops `h`, potential `0`.
pub fn forget(m: &KoszulModule) -> KoszulModule {
    let ctx = m.ctx();
    KoszulModule {
        lg: LGPair::zero(ctx),
        lo: m.lo,
        ranks: m.ranks.clone(),
        d: m.d.clone(),
        h: m.h.iter().map(|x| PolyMatrix::zeros(ctx, x.rows(), x.cols())).collect(),
    }
}

/// `M[1]`: degrees move down by one and both `d` and `h` change sign.
pub fn shift(m: &KoszulModule) -> KoszulModule {
    KoszulModule {
        lg: m.lg.clone(),
        lo: m.lo - 1,
        ranks: m.ranks.clone(),
        d: m.d.iter().map(PolyMatrix::neg).collect(),
        h: m.h.iter().map(PolyMatrix::neg).collect(),
    }
}

/// A degree-preserving map commuting with `d` and `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulMorphism {
    source: KoszulModule,
    target: KoszulModule,
    /// Component at each degree of the source window.
    maps: Vec<PolyMatrix>,
}

impl KoszulMorphism {
    /// `maps[k]` is the component at degree `source.lo() + k`; degrees of
    /// the source outside the target window must map to zero.
    pub fn new(source: &KoszulModule, target: &KoszulModule, maps: Vec<PolyMatrix>) -> Result<KoszulMorphism> {
        if source.lg != target.lg {
            return Err(Error::ContextMismatch(format!("morphism from {} to {}", source.lg, target.lg)));
        }
        if maps.len() != source.width() {
            return Err(Error::Shape(format!("{} components for {} degrees", maps.len(), source.width())));
        }
        for (k, m) in maps.iter().enumerate() {
            let i = source.lo + k as i64;
            if m.shape() != (target.rank(i), source.rank(i)) {
                return Err(Error::Shape(format!("component at degree {i} is {:?}", m.shape())));
            }
        }
        let phi = KoszulMorphism { source: source.clone(), target: target.clone(), maps };
        for i in source.degrees() {
            let lhs = target.d_at(i).mul(&phi.at(i))?;
            let rhs = phi.at(i + 1).mul(&source.d_at(i))?;
            check_identity("d*phi = phi*d", Some(i), &lhs, &rhs)?;
            let lhs = target.h_at(i).mul(&phi.at(i))?;
            let rhs = phi.at(i - 1).mul(&source.h_at(i))?;
            check_identity("h*phi = phi*h", Some(i), &lhs, &rhs)?;
        }
        Ok(phi)
    }

    pub fn identity(m: &KoszulModule) -> KoszulMorphism {
        let maps = m.ranks.iter().map(|&r| PolyMatrix::identity(m.ctx(), r)).collect();
        KoszulMorphism { source: m.clone(), target: m.clone(), maps }
    }

    pub fn source(&self) -> &KoszulModule {
        &self.source
    }

    pub fn target(&self) -> &KoszulModule {
        &self.target
    }

    /// Component at degree `i`.
    pub fn at(&self, i: i64) -> PolyMatrix {
        if i >= self.source.lo && i <= self.source.hi() {
            self.maps[(i - self.source.lo) as usize].clone()
        } else {
            PolyMatrix::zeros(self.source.ctx(), self.target.rank(i), self.source.rank(i))
        }
    }
}

/// Cone `N ⊕ M[1]` of `φ: M -> N`: degree `i` is `N^i ⊕ M^(i+1)`,
/// `d = [[d_N, φ], [0, -d_M]]`, `h = diag(h_N, -h_M)`.
pub fn cone_koszul(phi: &KoszulMorphism) -> Result<KoszulModule> {
    let (m, n) = (&phi.source, &phi.target);
    let ctx = m.ctx().clone();
    let lo = n.lo.min(m.lo - 1);
    let hi = n.hi().max(m.hi() - 1);
    let ranks: Vec<usize> = (lo..=hi).map(|i| n.rank(i) + m.rank(i + 1)).collect();
    KoszulModule::from_fns(
        &n.lg,
        lo,
        ranks,
        |i| {
            let phi_i = phi.at(i + 1);
            PolyMatrix::from_blocks(
                &ctx,
                &[n.rank(i + 1), m.rank(i + 2)],
                &[n.rank(i), m.rank(i + 1)],
                &[vec![Some(&n.d_at(i)), Some(&phi_i)], vec![None, Some(&m.d_at(i + 1).neg())]],
            )
        },
        |i| {
            PolyMatrix::from_blocks(
                &ctx,
                &[n.rank(i - 1), m.rank(i)],
                &[n.rank(i), m.rank(i + 1)],
                &[vec![Some(&n.h_at(i)), None], vec![None, Some(&m.h_at(i + 1).neg())]],
            )
        },
    )
}

/// The cone of `id_M` together with its canonical contraction
/// `k(n, m) = (0, n)`, listed per degree of the cone window.
pub fn identity_cone_with_contraction(m: &KoszulModule) -> Result<(KoszulModule, Vec<PolyMatrix>)> {
    let c = cone_koszul(&KoszulMorphism::identity(m))?;
    let ctx = m.ctx();
    let k = c
        .degrees()
        .map(|i| {
            // k: C^i = M^i ⊕ M^(i+1) -> C^(i-1) = M^(i-1) ⊕ M^i
            let mut out = PolyMatrix::zeros(ctx, c.rank(i - 1), c.rank(i));
            let id = PolyMatrix::identity(ctx, m.rank(i));
            out.set_block(m.rank(i - 1), 0, &id);
            out
        })
        .collect();
    Ok((c, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn x2() -> LGPair {
        let ctx = RingCtx::rational(&["x"]);
        LGPair::new(parse_poly("x^2", &ctx).unwrap())
    }

    #[test]
    fn validation_examples() {
        assert!(trivial_module(Field::Rational).validate().is_ok());
        let lg = x2();
        let x = Poly::var(lg.ctx(), "x").unwrap();
        assert!(residue_representative(&lg, &x, &x).is_ok());
        let one = Poly::one(lg.ctx());
        match residue_representative(&lg, &x, &one) {
            Err(Error::IdentityViolation { identity, .. }) => assert_eq!(identity, "d*h + h*d = f*Id"),
            other => panic!("{other:?}"),
        }
        assert!(koszul_algebra(&lg).validate().is_ok());
    }

    #[test]
    fn forget_and_shift() {
        let lg = x2();
        let k = koszul_algebra(&lg);
        let f = forget(&k);
        assert!(f.validate().is_ok());
        assert_eq!(f.d_at(-1).get(0, 0).to_string(), "x^2");
        assert!(f.h_at(0).is_zero());
        let s = shift(&k);
        assert!(s.validate().is_ok());
        assert_eq!(s.lo(), -2);
    }

    #[test]
    fn cone_of_identity_is_valid() {
        let lg = x2();
        let x = Poly::var(lg.ctx(), "x").unwrap();
        let m = residue_representative(&lg, &x, &x).unwrap();
        let (c, k) = identity_cone_with_contraction(&m).unwrap();
        assert_eq!(c.ranks(), &[1, 2, 1]);
        assert_eq!(k.len(), 3);
    }
}
