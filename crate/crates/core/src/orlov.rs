//! Folding Koszul modules into matrix factorizations, and the inverse
//! direction by stabilizing free resolutions over `B/(f)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::koszul::{convolve_ext, ConvolutionLabels, KoszulModule};
use crate::mf::{box_product, hom_diff, new_mf, GradedHom, HomComplex, LGPair, MatrixFactorization, Parity};
use crate::poly::{
    groebner_ideal, groebner_module, kernel, solve_matrix, Dim, Limits, Poly, PolyMatrix, RingCtx,
};

/// Basis bookkeeping of a fold: `(degree, offset)` of each degree within
/// its parity piece, plus piece sizes.
struct FoldLayout {
    pos: Vec<(i64, usize, usize)>,
    r0: usize,
    r1: usize,
}

impl FoldLayout {
    fn new(m: &KoszulModule) -> FoldLayout {
        let (mut r0, mut r1) = (0, 0);
        let mut pos = Vec::new();
        for i in m.degrees() {
            let piece = if i.rem_euclid(2) == 0 { &mut r0 } else { &mut r1 };
            pos.push((i, *piece, m.rank(i)));
            *piece += m.rank(i);
        }
        FoldLayout { pos, r0, r1 }
    }

    /// Offset of degree `i` in the total space `E0 ⊕ E1`.
    fn total(&self, i: i64) -> Option<usize> {
        self.pos.iter().find(|p| p.0 == i).map(|&(d, off, _)| if d.rem_euclid(2) == 0 { off } else { self.r0 + off })
    }
}

/// Total matrix on `E0 ⊕ E1` of a family `φ_i: M^i -> M^(i+step)`.
fn total_matrix(m: &KoszulModule, lay: &FoldLayout, step: i64, map: impl Fn(i64) -> PolyMatrix) -> PolyMatrix {
    let n = lay.r0 + lay.r1;
    let mut out = PolyMatrix::zeros(m.ctx(), n, n);
    for i in m.degrees() {
        if let (Some(c), Some(r)) = (lay.total(i), lay.total(i + step)) {
            out.set_block(r, c, &map(i));
        }
    }
    out
}

/// `ψ(M)`: even piece = even degrees ascending, odd piece = odd degrees
/// ascending, `δ = d + h`.
pub fn fold(m: &KoszulModule) -> Result<MatrixFactorization> {
    let lay = FoldLayout::new(m);
    let delta = total_matrix(m, &lay, 1, |i| m.d_at(i)).add(&total_matrix(m, &lay, -1, |i| m.h_at(i)))?;
    let d0 = delta.block(lay.r0, 0, lay.r1, lay.r0);
    let d1 = delta.block(0, lay.r0, lay.r0, lay.r1);
    new_mf(m.lg(), d0, d1).map_err(|e| Error::Internal(format!("fold of a valid module failed validation: {e}")))
}

fn sorting_permutation<T: Ord>(labels: &[T]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..labels.len()).collect();
    p.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    p
}

type Label = (i64, usize, i64, usize);

/// Compares `ψ(M ⊠ N)` with `ψ(M) ⊠ ψ(N)` after sorting the basis of each
/// parity piece by `(a, i, b, j)`: degree and index in `M`, then in `N`.
/// Returns whether the matrices agree exactly.
pub fn fold_monoidality_check(m: &KoszulModule, n: &KoszulModule) -> Result<bool> {
    let left = fold(&convolve_ext(m, n)?)?;
    let right = box_product(&fold(m)?, &fold(n)?)?;
    let lab = ConvolutionLabels::new(m, n);
    let (mut l_even, mut l_odd): (Vec<Label>, Vec<Label>) = (Vec::new(), Vec::new());
    for deg in lab.lo()..=lab.hi() {
        let target = if deg.rem_euclid(2) == 0 { &mut l_even } else { &mut l_odd };
        target.extend(lab.labels(deg));
    }
    let pieces = |k: &KoszulModule, parity: i64| -> Vec<(i64, usize)> {
        k.degrees().filter(|i| i.rem_euclid(2) == parity).flat_map(|i| (0..k.rank(i)).map(move |j| (i, j))).collect()
    };
    let pair = |a: &[(i64, usize)], b: &[(i64, usize)]| -> Vec<Label> {
        a.iter().flat_map(|&(x, i)| b.iter().map(move |&(y, j)| (x, i, y, j))).collect()
    };
    let (m0, m1, n0, n1) = (pieces(m, 0), pieces(m, 1), pieces(n, 0), pieces(n, 1));
    let r_even: Vec<Label> = pair(&m0, &n0).into_iter().chain(pair(&m1, &n1)).collect();
    let r_odd: Vec<Label> = pair(&m1, &n0).into_iter().chain(pair(&m0, &n1)).collect();

    let (le, lo) = (sorting_permutation(&l_even), sorting_permutation(&l_odd));
    let (re, ro) = (sorting_permutation(&r_even), sorting_permutation(&r_odd));
    let sorted = |v: &[Label], p: &[usize]| -> Vec<Label> { p.iter().map(|&k| v[k]).collect() };
    if sorted(&l_even, &le) != sorted(&r_even, &re) || sorted(&l_odd, &lo) != sorted(&r_odd, &ro) {
        return Ok(false);
    }
    if left.potential() != right.potential() {
        return Ok(false);
    }
    Ok(left.d0().permute(&lo, &le) == right.d0().permute(&ro, &re)
        && left.d1().permute(&le, &lo) == right.d1().permute(&re, &ro))
}

/// An explicit contracting homotopy of `ψ(M)` built from a contraction of `M`.
#[derive(Debug, Clone)]
pub struct ContractionCertificate {
    /// Odd `H` with `δH + Hδ = Id`.
    pub homotopy: GradedHom,
    /// Least `n` with `(hk + kh)^n = 0`.
    pub nilpotence: u32,
}

/// Given `k` of degree `-1` with `dk + kd = Id` (listed per degree of the
/// window, `k[j]: M^(lo+j) -> M^(lo+j-1)`), returns
/// `H = ψ(k) ∘ Σ_{i<n} (-u)^i` with `u = hk + kh`, checked to satisfy
/// `δH + Hδ = Id` exactly.
pub fn contraction_witness(m: &KoszulModule, k: &[PolyMatrix]) -> Result<ContractionCertificate> {
    if k.len() != m.width() {
        return Err(Error::Shape(format!("{} contraction components for {} degrees", k.len(), m.width())));
    }
    let ctx = m.ctx();
    let k_at = |i: i64| -> PolyMatrix {
        if i >= m.lo() && i <= m.hi() {
            k[(i - m.lo()) as usize].clone()
        } else {
            PolyMatrix::zeros(ctx, m.rank(i - 1), m.rank(i))
        }
    };
    for i in m.degrees() {
        let km = k_at(i);
        if km.shape() != (m.rank(i - 1), m.rank(i)) {
            return Err(Error::Shape(format!("contraction at degree {i} is {:?}", km.shape())));
        }
        let lhs = m.d_at(i - 1).mul(&km)?.add(&k_at(i + 1).mul(&m.d_at(i))?)?;
        if lhs != PolyMatrix::identity(ctx, m.rank(i)) {
            return Err(Error::ContractionInvalid { degree: i });
        }
    }
    let lay = FoldLayout::new(m);
    let total = lay.r0 + lay.r1;
    let kk = total_matrix(m, &lay, -1, k_at);
    let hh = total_matrix(m, &lay, -1, |i| m.h_at(i));
    let dd = total_matrix(m, &lay, 1, |i| m.d_at(i));
    let u = hh.mul(&kk)?.add(&kk.mul(&hh)?)?;

    let id = PolyMatrix::identity(ctx, total);
    let mut power = id.clone();
    let mut series = PolyMatrix::zeros(ctx, total, total);
    let mut n = 0u32;
    let neg_u = u.neg();
    while !power.is_zero() {
        if n as usize > m.width() + 1 {
            return Err(Error::Internal("hk + kh is not nilpotent on a bounded module".into()));
        }
        series = series.add(&power)?;
        power = power.mul(&neg_u)?;
        n += 1;
    }
    let h_total = kk.mul(&series)?;
    let delta = dd.add(&hh)?;
    if delta.mul(&h_total)?.add(&h_total.mul(&delta)?)? != id {
        return Err(Error::Internal("contraction certificate fails δH + Hδ = Id".into()));
    }
    let e = fold(m)?;
    let s0 = h_total.block(lay.r0, 0, lay.r1, lay.r0);
    let s1 = h_total.block(0, lay.r0, lay.r0, lay.r1);
    let homotopy = GradedHom::new(&e, &e, Parity::Odd, s0, s1)?;
    if hom_diff(&homotopy)? != GradedHom::identity(&e) {
        return Err(Error::Internal("contraction certificate fails d(H) = id".into()));
    }
    Ok(ContractionCertificate { homotopy, nilpotence: n })
}

/// Default bound on resolution steps for [`stabilize`].
pub fn default_stabilize_cap(ctx: &RingCtx) -> usize {
    2 * ctx.nvars() + 4
}

#[derive(Debug, Clone)]
pub struct Stabilization {
    pub mf: MatrixFactorization,
    /// Index of the resolution differential that closed up (1 = presentation).
    pub step: usize,
}

fn reduce_mod(m: &PolyMatrix, f_gb: &crate::poly::GroebnerBasis) -> Result<PolyMatrix> {
    m.try_map_into(m.ctx(), |p| f_gb.reduce_poly(p))
}

/// Removes a unit entry by a Schur complement, keeping the cokernel.
fn prune_units(a: &PolyMatrix) -> Result<PolyMatrix> {
    let mut a = a.clone();
    loop {
        let unit = (0..a.rows())
            .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
            .find(|&(r, c)| a.get(r, c).constant_value().map(|v| !num_traits::Zero::is_zero(&v)).unwrap_or(false));
        let Some((r, c)) = unit else { return Ok(a) };
        let field = a.ctx().field();
        let inv = field.inv(&a.get(r, c).constant_value().unwrap()).unwrap();
        let rows: Vec<usize> = (0..a.rows()).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..a.cols()).filter(|&j| j != c).collect();
        let mut out = PolyMatrix::zeros(a.ctx(), rows.len(), cols.len());
        for (ii, &i) in rows.iter().enumerate() {
            for (jj, &j) in cols.iter().enumerate() {
                let corr = (a.get(i, c) * a.get(r, j)).scale(&inv);
                out.set(ii, jj, a.get(i, j) - &corr);
            }
        }
        a = out;
    }
}

/// Drops columns lying in the span of the other columns plus `f·B^rows`.
fn minimize_columns(a: &PolyMatrix, f: &Poly, limits: &Limits) -> Result<PolyMatrix> {
    let ctx = a.ctx();
    let rows = a.rows();
    let f_cols: Vec<Vec<Poly>> = (0..rows)
        .map(|i| (0..rows).map(|k| if k == i { f.clone() } else { Poly::zero(ctx) }).collect())
        .collect();
    let mut cols: Vec<Vec<Poly>> = a.columns().into_iter().filter(|c| c.iter().any(|p| !p.is_zero())).collect();
    let mut j = cols.len();
    while j > 0 {
        j -= 1;
        let others: Vec<Vec<Poly>> =
            cols.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, c)| c.clone()).chain(f_cols.iter().cloned()).collect();
        let gb = groebner_module(&others, rows, ctx, limits)?;
        if gb.contains(&cols[j])? {
            cols.remove(j);
        }
    }
    PolyMatrix::from_cols(ctx, rows, &cols)
}

/// Next differential of the resolution over `B/(f)`: generators of
/// `{x : A x ∈ f·B^m}` modulo `f`, minimized.
fn next_syzygy(a: &PolyMatrix, f: &Poly, f_gb: &crate::poly::GroebnerBasis, limits: &Limits) -> Result<PolyMatrix> {
    let ctx = a.ctx();
    let (m, n) = a.shape();
    let fi = PolyMatrix::scalar(ctx, m, f);
    let big = PolyMatrix::from_blocks(ctx, &[m], &[n, m], &[vec![Some(a), Some(&fi)]])?;
    let syz: Vec<Vec<Poly>> = kernel(&big, limits)?.into_iter().map(|c| c[..n].to_vec()).collect();
    let raw = reduce_mod(&PolyMatrix::from_cols(ctx, n, &syz)?, f_gb)?;
    minimize_columns(&raw, f, limits)
}

/// Follows the free resolution of `coker(presentation)` over `B/(f)` until
/// a square differential `Ã` admits `Ψ` with `Ã Ψ = f·Id`, and returns the
/// factorization `(Ã | Ψ)`.
pub fn stabilize(lg: &LGPair, presentation: &PolyMatrix, cap: Option<usize>, limits: &Limits) -> Result<Stabilization> {
    let f = lg.potential();
    if f.is_zero() {
        return Err(Error::InvalidRing("stabilization needs a nonzero potential".into()));
    }
    if presentation.ctx() != lg.ctx() {
        return Err(Error::ContextMismatch(format!("presentation over {} but potential over {}", presentation.ctx(), lg.ctx())));
    }
    let cap = cap.unwrap_or_else(|| default_stabilize_cap(lg.ctx()));
    let f_gb = groebner_ideal(std::slice::from_ref(f), lg.ctx(), limits)?;
    let mut a = minimize_columns(&reduce_mod(&prune_units(presentation)?, &f_gb)?, f, limits)?;
    for step in 1..=cap {
        if a.is_square() {
            let fid = PolyMatrix::scalar(lg.ctx(), a.rows(), f);
            if let Some(psi) = solve_matrix(&a, &fid, limits)? {
                if let Ok(mf) = new_mf(lg, a.clone(), psi) {
                    return Ok(Stabilization { mf, step });
                }
            }
        }
        a = next_syzygy(&a, f, &f_gb, limits)?;
    }
    Err(Error::PeriodicityNotReached(cap))
}

/// Outcome of searching for mutually inverse closed morphisms.
#[derive(Debug, Clone)]
pub enum EquivalenceSearch {
    /// `φ: S -> T` and `ψ: T -> S` with `ψφ ~ id` and `φψ ~ id`.
    Found { phi: GradedHom, psi: GradedHom },
    /// Every pair of classes was tried.
    Exhausted,
}

/// Normal-form data for composites in the stable Hom spaces.
struct StableHoms {
    reps: Vec<GradedHom>,
}

fn even_reps(s: &MatrixFactorization, t: &MatrixFactorization, limits: &Limits) -> Result<StableHoms> {
    let hc = HomComplex::new(s, t)?;
    let h = hc.cohomology(Parity::Even, limits)?;
    let reps = match h.representatives {
        Some(r) => r,
        None => return Err(Error::ResourceCap(crate::error::Resource::SearchSpace)),
    };
    let reps = reps.iter().map(|v| hc.devectorize(Parity::Even, v)).collect::<Result<Vec<_>>>()?;
    Ok(StableHoms { reps })
}

/// Boundary Gröbner basis of `End(E)` in even degree and the normal form of `id`.
struct EndBoundaries {
    hc: HomComplex,
    gb: crate::poly::GroebnerBasis,
}

impl EndBoundaries {
    fn new(e: &MatrixFactorization, limits: &Limits) -> Result<EndBoundaries> {
        let hc = HomComplex::new(e, e)?;
        let gb = groebner_module(&hc.d_odd.columns(), hc.d_odd.rows(), e.ctx(), limits)?;
        Ok(EndBoundaries { hc, gb })
    }

    fn nf(&self, t: &GradedHom) -> Result<Vec<Poly>> {
        self.gb.normal_form(&self.hc.vectorize(t))
    }
}

/// Exhaustive search over a prime field for classes `φ ∈ H^0(S, T)`,
/// `ψ ∈ H^0(T, S)` with `ψφ ~ id_S` and `φψ ~ id_T`.
///
/// Normal forms modulo boundaries are linear, so the composites of basis
/// classes are reduced once and every candidate pair is tested by field
/// arithmetic on those normal forms.
pub fn search_equivalence(s: &MatrixFactorization, t: &MatrixFactorization, limits: &Limits) -> Result<EquivalenceSearch> {
    let field = s.ctx().field();
    let p = match field.elements() {
        Some(_) => field.characteristic() as u64,
        None => return Err(Error::InvalidRing("closed-inverse search needs a prime field".into())),
    };
    let st = even_reps(s, t, limits)?;
    let ts = even_reps(t, s, limits)?;
    let (a, b) = (st.reps.len() as u32, ts.reps.len() as u32);
    let space = (p as f64).powi((a + b) as i32);
    if space > limits.max_search as f64 {
        return Err(Error::ResourceCap(crate::error::Resource::SearchSpace));
    }
    let ends = EndBoundaries::new(s, limits)?;
    let endt = EndBoundaries::new(t, limits)?;
    // nf(ψ_j φ_i) in End(S) and nf(φ_i ψ_j) in End(T)
    let mut on_s = vec![vec![Vec::new(); a as usize]; b as usize];
    let mut on_t = vec![vec![Vec::new(); a as usize]; b as usize];
    for j in 0..b as usize {
        for i in 0..a as usize {
            on_s[j][i] = ends.nf(&ts.reps[j].compose(&st.reps[i])?)?;
            on_t[j][i] = endt.nf(&st.reps[i].compose(&ts.reps[j])?)?;
        }
    }
    let id_s = ends.nf(&GradedHom::identity(s))?;
    let id_t = endt.nf(&GradedHom::identity(t))?;

    let elems: Vec<crate::poly::Scalar> = field.elements().unwrap().collect();
    let combos = |len: u32| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out.into_iter().flat_map(|v| (0..p as usize).map(move |e| {
                let mut w = v.clone();
                w.push(e);
                w
            })).collect();
        }
        out
    };
    let ctx = s.ctx();
    let check = |table: &Vec<Vec<Vec<Poly>>>, id: &[Poly], x: &[usize], y: &[usize]| -> bool {
        let mut acc: Vec<Poly> = id.iter().map(|q| -q).collect();
        for (j, &yj) in y.iter().enumerate() {
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 || yj == 0 {
                    continue;
                }
                let c = field.mul(&elems[xi], &elems[yj]);
                let cp = Poly::constant(ctx, c);
                for (k, q) in table[j][i].iter().enumerate() {
                    acc[k] = &acc[k] + &(q * &cp);
                }
            }
        }
        acc.iter().all(Poly::is_zero)
    };
    let xs = combos(a);
    let ys = combos(b);
    for x in &xs {
        for y in &ys {
            if check(&on_s, &id_s, x, y) && check(&on_t, &id_t, x, y) {
                let lin = |reps: &[GradedHom], coeffs: &[usize], src: &MatrixFactorization, tgt: &MatrixFactorization| -> Result<GradedHom> {
                    let mut acc = GradedHom::zero(src, tgt, Parity::Even)?;
                    for (r, &c) in reps.iter().zip(coeffs) {
                        acc = acc.add(&r.scale_poly(&Poly::constant(ctx, elems[c].clone())))?;
                    }
                    Ok(acc)
                };
                return Ok(EquivalenceSearch::Found { phi: lin(&st.reps, x, s, t)?, psi: lin(&ts.reps, y, t, s)? });
            }
        }
    }
    Ok(EquivalenceSearch::Exhausted)
}

/// Maps the entries of `m` into `target`, a ring on the same variables over
/// another field. Fails when a denominator vanishes there.
pub fn reduce_presentation(m: &PolyMatrix, target: &Arc<RingCtx>) -> Result<PolyMatrix> {
    m.try_map_into(target, |p| {
        let terms = p.terms().iter().map(|(mono, c)| {
            let v = target.field().fraction(c.numer().clone(), c.denom().clone())?;
            Ok((mono.clone(), v))
        });
        Ok(Poly::from_terms(target, terms.collect::<Result<Vec<_>>>()?))
    })
}

/// The same factorization with coefficients reduced into `field`.
pub fn reduce_mf(e: &MatrixFactorization, field: crate::poly::Field) -> Result<MatrixFactorization> {
    let src = e.ctx();
    let target = RingCtx::new(field, src.vars(), src.order())?;
    let f = reduce_presentation(&PolyMatrix::scalar(src, 1, e.potential()), &target)?;
    let lg = LGPair::new(f.get(0, 0).clone());
    new_mf(&lg, reduce_presentation(e.d0(), &target)?, reduce_presentation(e.d1(), &target)?)
}

/// Whether all four stable Hom dimension pairs between `s` and `t` agree
/// with the endomorphism dimensions of each side.
pub fn stable_dims_match(s: &MatrixFactorization, t: &MatrixFactorization, limits: &Limits) -> Result<bool> {
    use crate::mf::hom_cohomology_dims as dims;
    let ss = dims(s, s, limits)?;
    let tt = dims(t, t, limits)?;
    let st = dims(s, t, limits)?;
    let ts = dims(t, s, limits)?;
    Ok(ss == tt && tt == st && st == ts && ss.even != Dim::Infinite)
}
