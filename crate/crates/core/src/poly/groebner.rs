//! Buchberger's algorithm for submodules of free modules `B^r`.
//!
//! Module terms are compared position-over-term: position `0` is the
//! largest, and within one position the ring's monomial order decides.
//! Placing the components of interest at low positions therefore makes the
//! order eliminate them first, which is what the syzygy and lifting
//! routines in [`super::linalg`] rely on.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Resource, Result};
use crate::poly::field::Scalar;
use crate::poly::linalg::Dim;
use crate::poly::polynomial::Poly;
use crate::poly::ring::{degree, divides, mono_div, mono_lcm, mono_mul, Monomial, MonomialOrder, RingCtx};

/// Explicit budgets for the exact algorithms. Exceeding one is a
/// deterministic [`Error::ResourceCap`], never a truncated answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_spairs: usize,
    pub max_basis: usize,
    /// Bound on enumerations (standard monomials, inverse searches).
    pub max_search: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_spairs: 200_000, max_basis: 10_000, max_search: 20_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MTerm {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: Scalar,
}

/// Sparse free-module element, terms strictly decreasing in POT order.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ModVec {
    pub terms: Vec<MTerm>,
}

fn pot_cmp(order: MonomialOrder, a_pos: usize, a: &[u32], b_pos: usize, b: &[u32]) -> Ordering {
    b_pos.cmp(&a_pos).then_with(|| order.cmp(a, b))
}

impl ModVec {
    pub fn from_column(col: &[Poly]) -> ModVec {
        let terms = col
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms().iter().map(move |(m, c)| MTerm { pos, mono: m.clone(), coeff: c.clone() })
            })
            .collect();
        ModVec { terms }
    }

    pub fn to_column(&self, ctx: &Arc<RingCtx>, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.pos].push((t.mono.clone(), t.coeff.clone()));
        }
        buckets.into_iter().map(|b| Poly::from_terms(ctx, b)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&MTerm> {
        self.terms.first()
    }

    /// `self - c * mono * other`, with both inputs sorted.
    fn sub_scaled(&self, from: usize, c: &Scalar, mono: &[u32], other: &ModVec, ctx: &RingCtx) -> ModVec {
        let field = ctx.field();
        let order = ctx.order();
        let a = &self.terms[from..];
        let b = &other.terms;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut scaled: Option<MTerm> = None;
        loop {
            if scaled.is_none() && j < b.len() {
                let t = &b[j];
                scaled = Some(MTerm { pos: t.pos, mono: mono_mul(&t.mono, mono), coeff: field.mul(&t.coeff, c) });
                j += 1;
            }
            match (a.get(i), scaled.as_ref()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    let y = scaled.take().unwrap();
                    out.push(MTerm { coeff: field.neg(&y.coeff), ..y });
                }
                (Some(x), Some(y)) => match pot_cmp(order, x.pos, &x.mono, y.pos, &y.mono) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        let y = scaled.take().unwrap();
                        out.push(MTerm { coeff: field.neg(&y.coeff), ..y });
                    }
                    Ordering::Equal => {
                        let c = field.sub(&x.coeff, &y.coeff);
                        if !c.is_zero() {
                            out.push(MTerm { pos: x.pos, mono: x.mono.clone(), coeff: c });
                        }
                        i += 1;
                        scaled = None;
                    }
                },
            }
        }
        ModVec { terms: out }
    }

    fn scale(&mut self, c: &Scalar, ctx: &RingCtx) {
        let field = ctx.field();
        for t in &mut self.terms {
            t.coeff = field.mul(&t.coeff, c);
        }
    }

    fn make_monic(&mut self, ctx: &RingCtx) {
        if let Some(lc) = self.lead().map(|t| t.coeff.clone()) {
            let inv = ctx.field().inv(&lc).expect("nonzero leading coefficient");
            self.scale(&inv, ctx);
        }
    }
}

/// Full reduction of `v` modulo `basis` (leading coefficients of `basis` need not be 1).
pub(crate) fn reduce(v: &ModVec, basis: &[ModVec], ctx: &RingCtx) -> ModVec {
    let field = ctx.field();
    let mut rem: Vec<MTerm> = Vec::new();
    let mut p = v.clone();
    let mut start = 0;
    while start < p.terms.len() {
        let lt = &p.terms[start];
        let divisor = basis.iter().find(|b| {
            let bl = b.lead().expect("basis elements are nonzero");
            bl.pos == lt.pos && divides(&bl.mono, &lt.mono)
        });
        match divisor {
            Some(b) => {
                let bl = b.lead().unwrap();
                let c = field.div(&lt.coeff, &bl.coeff).unwrap();
                let m = mono_div(&lt.mono, &bl.mono);
                p = p.sub_scaled(start, &c, &m, b, ctx);
                start = 0;
            }
            None => {
                rem.push(lt.clone());
                start += 1;
            }
        }
    }
    ModVec { terms: rem }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub(crate) fn buchberger(gens: Vec<ModVec>, ctx: &RingCtx, rank: usize, limits: &Limits) -> Result<Vec<ModVec>> {
    let order = ctx.order();
    let mut basis: Vec<ModVec> = Vec::new();
    for mut g in gens.into_iter().filter(|g| !g.is_zero()) {
        g.make_monic(ctx);
        if !basis.contains(&g) {
            basis.push(g);
        }
    }
    if basis.len() > limits.max_basis {
        return Err(Error::ResourceCap(Resource::BasisSize));
    }

    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let add_pairs = |basis: &[ModVec], pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>, j: usize| {
        let lj = basis[j].lead().unwrap();
        for (i, b) in basis.iter().enumerate().take(j) {
            let li = b.lead().unwrap();
            if li.pos != lj.pos {
                continue;
            }
            // coprime leads only commute away in rank one
            if rank == 1 && li.mono.iter().zip(&lj.mono).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            pairs.push(Pair { i, j, lcm: mono_lcm(&li.mono, &lj.mono) });
            pending.insert((i, j));
        }
    };
    for j in 0..basis.len() {
        add_pairs(&basis, &mut pairs, &mut pending, j);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                degree(&a.lcm)
                    .cmp(&degree(&b.lcm))
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)))
            })
            .unwrap();
        let Pair { i, j, lcm } = pairs.swap_remove(best);
        pending.remove(&(i, j));

        let pos = basis[i].lead().unwrap().pos;
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lk = basis[k].lead().unwrap();
            lk.pos == pos
                && divides(&lk.mono, &lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        processed += 1;
        if processed > limits.max_spairs {
            return Err(Error::ResourceCap(Resource::SPairs));
        }
        let li = basis[i].lead().unwrap();
        let lj = basis[j].lead().unwrap();
        let mi = mono_div(&lcm, &li.mono);
        let mj = mono_div(&lcm, &lj.mono);
        let one = ctx.field().one();
        let left = ModVec { terms: Vec::new() }.sub_scaled(0, &ctx.field().neg(&one), &mi, &basis[i], ctx);
        let s = left.sub_scaled(0, &one, &mj, &basis[j], ctx);
        let mut r = reduce(&s, &basis, ctx);
        if !r.is_zero() {
            r.make_monic(ctx);
            basis.push(r);
            if basis.len() > limits.max_basis {
                return Err(Error::ResourceCap(Resource::BasisSize));
            }
            add_pairs(&basis, &mut pairs, &mut pending, basis.len() - 1);
        }
    }

    Ok(interreduce(basis, ctx))
}

/// Minimalizes and tail-reduces a Gröbner basis, then sorts it by leading term.
fn interreduce(basis: Vec<ModVec>, ctx: &RingCtx) -> Vec<ModVec> {
    let order = ctx.order();
    let mut keep: Vec<ModVec> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let lh = h.lead().unwrap();
            l != k && lh.pos == lg.pos && divides(&lh.mono, &lg.mono) && (lh.mono != lg.mono || l < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let lead = keep[k].terms[0].clone();
        let others: Vec<ModVec> = keep.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
        let tail = ModVec { terms: keep[k].terms[1..].to_vec() };
        let mut reduced = reduce(&tail, &others, ctx);
        reduced.terms.insert(0, lead);
        reduced.make_monic(ctx);
        out.push(reduced);
    }
    out.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        pot_cmp(order, lb.pos, &lb.mono, la.pos, &la.mono)
    });
    out
}

/// A reduced Gröbner basis of a submodule of `B^rank`, position-over-term.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ctx: Arc<RingCtx>,
    rank: usize,
    elems: Vec<ModVec>,
}

/// Computes the reduced Gröbner basis of the submodule generated by the
/// given columns (each of length `rank`).
pub fn groebner_module(gens: &[Vec<Poly>], rank: usize, ctx: &Arc<RingCtx>, limits: &Limits) -> Result<GroebnerBasis> {
    for (j, g) in gens.iter().enumerate() {
        if g.len() != rank {
            return Err(Error::Shape(format!("generator {j} has rank {}, expected {rank}", g.len())));
        }
        if let Some(p) = g.iter().find(|p| p.ctx() != ctx) {
            return Err(Error::ContextMismatch(format!("generator {j} lives in {}", p.ctx())));
        }
    }
    let vecs = gens.iter().map(|g| ModVec::from_column(g)).collect();
    let elems = buchberger(vecs, ctx, rank, limits)?;
    Ok(GroebnerBasis { ctx: ctx.clone(), rank, elems })
}

/// Gröbner basis of an ideal given by generators.
pub fn groebner_ideal(gens: &[Poly], ctx: &Arc<RingCtx>, limits: &Limits) -> Result<GroebnerBasis> {
    let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    groebner_module(&cols, 1, ctx, limits)
}

impl GroebnerBasis {
    pub(crate) fn from_parts(ctx: &Arc<RingCtx>, rank: usize, elems: Vec<ModVec>) -> GroebnerBasis {
        GroebnerBasis { ctx: ctx.clone(), rank, elems }
    }

    pub(crate) fn elems(&self) -> &[ModVec] {
        &self.elems
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn generators(&self) -> Vec<Vec<Poly>> {
        self.elems.iter().map(|e| e.to_column(&self.ctx, self.rank)).collect()
    }

    /// `(position, monomial)` of each leading term.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| {
            let l = e.lead().unwrap();
            (l.pos, l.mono.clone())
        }).collect()
    }

    fn check_rank(&self, v: &[Poly]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::Shape(format!("vector of rank {} against a basis of rank {}", v.len(), self.rank)));
        }
        if let Some(p) = v.iter().find(|p| p.ctx() != &self.ctx) {
            return Err(Error::ContextMismatch(format!("{} vs {}", p.ctx(), self.ctx)));
        }
        Ok(())
    }

    /// Remainder of multivariate division; zero iff `v` lies in the submodule.
    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        self.check_rank(v)?;
        let r = reduce(&ModVec::from_column(v), &self.elems, &self.ctx);
        Ok(r.to_column(&self.ctx, self.rank))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(Poly::is_zero))
    }

    /// Normal form of a polynomial against an ideal basis.
    pub fn reduce_poly(&self, p: &Poly) -> Result<Poly> {
        Ok(self.normal_form(std::slice::from_ref(p))?.remove(0))
    }

    /// Standard monomials `(position, monomial)` of `B^rank / U`, if finitely many.
    pub fn standard_monomials(&self, limits: &Limits) -> Result<Option<Vec<(usize, Monomial)>>> {
        let n = self.ctx.nvars();
        let leads = self.leading_terms();
        let mut out = Vec::new();
        for pos in 0..self.rank {
            let here: Vec<&Monomial> = leads.iter().filter(|(p, _)| *p == pos).map(|(_, m)| m).collect();
            if here.iter().any(|m| m.iter().all(|&e| e == 0)) {
                continue;
            }
            let mut bounds = Vec::with_capacity(n);
            for i in 0..n {
                let pure = here
                    .iter()
                    .filter(|m| m.iter().enumerate().all(|(k, &e)| k == i || e == 0) && m[i] > 0)
                    .map(|m| m[i])
                    .min();
                match pure {
                    Some(b) => bounds.push(b),
                    None => return Ok(None),
                }
            }
            let box_size: u64 = bounds.iter().map(|&b| b as u64).product();
            if box_size > limits.max_search {
                return Err(Error::ResourceCap(Resource::SearchSpace));
            }
            let mut mono = vec![0u32; n];
            loop {
                if !here.iter().any(|l| divides(l, &mono)) {
                    out.push((pos, mono.clone()));
                }
                // odometer over the box
                let mut k = 0;
                while k < n {
                    mono[k] += 1;
                    if mono[k] < bounds[k] {
                        break;
                    }
                    mono[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        Ok(Some(out))
    }

    /// Field dimension of `B^rank / U`.
    pub fn quotient_dim(&self, limits: &Limits) -> Result<Dim> {
        Ok(match self.standard_monomials(limits)? {
            Some(s) => Dim::Finite(s.len() as u64),
            None => Dim::Infinite,
        })
    }
}
