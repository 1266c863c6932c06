//! Tensor products of Koszul modules.
//!
//! In `M ⊠ N` the degree-`n` piece is `⊕ M^a ⊗ N^b` over `a + b = n`,
//! summands ordered by increasing `a`, and inside a summand basis element
//! `(i, j)` sits at `i * rank(N^b) + j`. Both `d` and `h` follow the Koszul
//! rule: `D(x ⊗ y) = Dx ⊗ y + (-1)^a x ⊗ Dy`.

use crate::error::{Error, Result};
use crate::koszul::{koszul_algebra, KoszulModule};
use crate::mf::LGPair;
use crate::poly::{Poly, PolyMatrix, RingCtx};

/// Basis bookkeeping of a convolution: for each degree, the summands
/// `(a, b, offset)`.
#[derive(Debug, Clone)]
pub struct ConvolutionLabels {
    lo_m: i64,
    hi_m: i64,
    lo_n: i64,
    hi_n: i64,
    ranks_m: Vec<usize>,
    ranks_n: Vec<usize>,
}

impl ConvolutionLabels {
    pub fn new(m: &KoszulModule, n: &KoszulModule) -> ConvolutionLabels {
        ConvolutionLabels {
            lo_m: m.lo(),
            hi_m: m.hi(),
            lo_n: n.lo(),
            hi_n: n.hi(),
            ranks_m: m.ranks().to_vec(),
            ranks_n: n.ranks().to_vec(),
        }
    }

    fn rank_m(&self, a: i64) -> usize {
        if a < self.lo_m || a > self.hi_m { 0 } else { self.ranks_m[(a - self.lo_m) as usize] }
    }

    fn rank_n(&self, b: i64) -> usize {
        if b < self.lo_n || b > self.hi_n { 0 } else { self.ranks_n[(b - self.lo_n) as usize] }
    }

    pub fn is_empty(&self) -> bool {
        self.ranks_m.is_empty() || self.ranks_n.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo_m + self.lo_n
    }

    pub fn hi(&self) -> i64 {
        if self.is_empty() { self.lo() - 1 } else { self.hi_m + self.hi_n }
    }

    /// Summands `(a, b, offset)` of degree `n`.
    pub fn summands(&self, n: i64) -> Vec<(i64, i64, usize)> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut off = 0;
        for a in self.lo_m.max(n - self.hi_n)..=self.hi_m.min(n - self.lo_n) {
            let b = n - a;
            out.push((a, b, off));
            off += self.rank_m(a) * self.rank_n(b);
        }
        out
    }

    pub fn rank(&self, n: i64) -> usize {
        self.summands(n).iter().map(|&(a, b, _)| self.rank_m(a) * self.rank_n(b)).sum()
    }

    fn offset(&self, n: i64, a: i64) -> Option<usize> {
        self.summands(n).into_iter().find(|s| s.0 == a).map(|s| s.2)
    }

    /// `(a, i, b, j)` for each basis element of degree `n`, in basis order.
    pub fn labels(&self, n: i64) -> Vec<(i64, usize, i64, usize)> {
        let mut out = Vec::new();
        for (a, b, _) in self.summands(n) {
            for i in 0..self.rank_m(a) {
                for j in 0..self.rank_n(b) {
                    out.push((a, i, b, j));
                }
            }
        }
        out
    }
}

/// `M ⊠ N` over `(B ⊗ C, f ⊞ g)`.
pub fn convolve_ext(m: &KoszulModule, n: &KoszulModule) -> Result<KoszulModule> {
    let lg = m.lg().boxplus(n.lg())?;
    let ctx = lg.ctx().clone();
    let off = m.ctx().nvars();
    let lab = ConvolutionLabels::new(m, n);
    let ranks: Vec<usize> = (lab.lo()..=lab.hi()).map(|k| lab.rank(k)).collect();
    let id = |r: usize| PolyMatrix::identity(&ctx, r);
    let sign = |a: i64| if a.rem_euclid(2) == 0 { Poly::one(&ctx) } else { Poly::from_int(&ctx, -1) };

    // `step = 1` assembles d, `step = -1` assembles h.
    let assemble = |deg: i64, step: i64| -> Result<PolyMatrix> {
        let mut out = PolyMatrix::zeros(&ctx, lab.rank(deg + step), lab.rank(deg));
        for (a, b, o) in lab.summands(deg) {
            let (ma, nb) = if step == 1 {
                (m.d_at(a).embed(&ctx, 0), n.d_at(b).embed(&ctx, off))
            } else {
                (m.h_at(a).embed(&ctx, 0), n.h_at(b).embed(&ctx, off))
            };
            if let Some(t) = lab.offset(deg + step, a + step) {
                out.set_block(t, o, &ma.kron(&id(lab.rank_n(b)))?);
            }
            if let Some(t) = lab.offset(deg + step, a) {
                out.set_block(t, o, &id(lab.rank_m(a)).kron(&nb)?.scale_poly(&sign(a)));
            }
        }
        Ok(out)
    };
    KoszulModule::from_fns(&lg, lab.lo(), ranks, |i| assemble(i, 1), |i| assemble(i, -1))
}

/// The action of a module over `(field, 0)` on `M`: `F ⊠ M` over the ring of `M`.
pub fn act_point(f: &KoszulModule, m: &KoszulModule) -> Result<KoszulModule> {
    if f.ctx().nvars() != 0 || !f.potential().is_zero() {
        return Err(Error::NotPointCase(format!("acting module lives over {}", f.lg())));
    }
    convolve_ext(f, m)
}

/// `K(B, f) ⊗_B M` with the differential of the tensor product of the
/// underlying complexes and `h` given by multiplication by `ε` alone.
///
/// Degree `n` is `ε·M^(n+1) ⊕ 1·M^n`:
/// `d(ε⊗m) = f·(1⊗m) - ε⊗dm`, `d(1⊗m) = 1⊗dm`, `h(1⊗m) = ε⊗m`, `h(ε⊗m) = 0`.
pub fn pull_push(m: &KoszulModule) -> Result<KoszulModule> {
    let ctx = m.ctx().clone();
    let f = m.potential();
    let lo = m.lo() - 1;
    let ranks: Vec<usize> = (lo..=m.hi()).map(|n| m.rank(n + 1) + m.rank(n)).collect();
    KoszulModule::from_fns(
        m.lg(),
        lo,
        ranks,
        |n| {
            let fid = PolyMatrix::scalar(&ctx, m.rank(n + 1), f);
            PolyMatrix::from_blocks(
                &ctx,
                &[m.rank(n + 2), m.rank(n + 1)],
                &[m.rank(n + 1), m.rank(n)],
                &[vec![Some(&m.d_at(n + 1).neg()), None], vec![Some(&fid), Some(&m.d_at(n))]],
            )
        },
        |n| {
            let id = PolyMatrix::identity(&ctx, m.rank(n));
            PolyMatrix::from_blocks(
                &ctx,
                &[m.rank(n), m.rank(n - 1)],
                &[m.rank(n + 1), m.rank(n)],
                &[vec![None, Some(&id)], vec![None, None]],
            )
        },
    )
}

/// Compares `act_point(K(field, 0), M)` with `pull_push(M)`.
///
/// Both have degree-`n` pieces `ε·M^(n+1) ⊕ 1·M^n` in the same order. They
/// are isomorphic through `ψ(1⊗m) = 1⊗m`, `ψ(ε⊗m) = ε⊗m - 1⊗hm`; this
/// checks `ψ d = d ψ` and `ψ h = h ψ` exactly, degree by degree, and
/// returns the first failing degree if any.
pub fn pull_push_comparison(m: &KoszulModule) -> Result<Option<i64>> {
    let point = RingCtx::point(m.ctx().field());
    let k = koszul_algebra(&LGPair::zero(&point));
    let a = act_point(&k, m)?;
    let p = pull_push(m)?;
    if a.lo() != p.lo() || a.ranks() != p.ranks() {
        return Ok(Some(a.lo().min(p.lo())));
    }
    let ctx = m.ctx().clone();
    let psi = |n: i64| -> Result<PolyMatrix> {
        let (e, o) = (m.rank(n + 1), m.rank(n));
        PolyMatrix::from_blocks(
            &ctx,
            &[e, o],
            &[e, o],
            &[
                vec![Some(&PolyMatrix::identity(&ctx, e)), None],
                vec![Some(&m.h_at(n + 1).neg()), Some(&PolyMatrix::identity(&ctx, o))],
            ],
        )
    };
    for n in a.degrees() {
        if p.d_at(n).mul(&psi(n)?)? != psi(n + 1)?.mul(&a.d_at(n))? {
            return Ok(Some(n));
        }
        if p.h_at(n).mul(&psi(n)?)? != psi(n - 1)?.mul(&a.h_at(n))? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::{trivial_module, residue_representative};
    use crate::poly::{parse_poly, Field};

    fn over(var: &str, f: &str) -> LGPair {
        let ctx = RingCtx::rational(&[var]);
        LGPair::new(parse_poly(f, &ctx).unwrap())
    }

    #[test]
    fn convolution_of_koszul_algebras() {
        let k1 = koszul_algebra(&over("x", "x^2"));
        let k2 = koszul_algebra(&over("y", "y^3"));
        let c = convolve_ext(&k1, &k2).unwrap();
        assert_eq!(c.ranks(), &[1, 2, 1]);
        assert_eq!(c.potential().to_string(), "y^3 + x^2");
    }

    #[test]
    fn unit_acts_trivially() {
        let lg = over("x", "x^2");
        let x = Poly::var(lg.ctx(), "x").unwrap();
        let m = residue_representative(&lg, &x, &x).unwrap();
        assert_eq!(act_point(&trivial_module(Field::Rational), &m).unwrap(), m);
    }

    #[test]
    fn pull_push_matches_action_up_to_shear() {
        let lg = over("x", "x^2");
        let k = koszul_algebra(&lg);
        assert_eq!(pull_push(&k).unwrap().ranks(), &[1, 2, 1]);
        assert_eq!(pull_push_comparison(&k).unwrap(), None);
        let t = trivial_module(Field::Rational);
        assert_eq!(pull_push(&t).unwrap(), koszul_algebra(t.lg()));
    }
}
