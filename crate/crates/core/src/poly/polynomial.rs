use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::field::Scalar;
use crate::poly::ring::{degree, divides, mono_mul, Monomial, RingCtx};

/// Sparse polynomial; terms are kept strictly decreasing in the ring's
/// monomial order and never carry a zero coefficient.
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<RingCtx>,
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(ctx: &Arc<RingCtx>) -> Poly {
        Poly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Poly {
        Poly::constant(ctx, ctx.field().one())
    }

    pub fn constant(ctx: &Arc<RingCtx>, c: Scalar) -> Poly {
        Poly::term(ctx, ctx.one_monomial(), c)
    }

    pub fn from_int(ctx: &Arc<RingCtx>, n: i64) -> Poly {
        Poly::constant(ctx, ctx.field().from_int(n))
    }

    pub fn term(ctx: &Arc<RingCtx>, mono: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(mono.len(), ctx.nvars());
        let c = ctx.field().reduce(c);
        let terms = if c.is_zero() { Vec::new() } else { vec![(mono, c)] };
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn var(ctx: &Arc<RingCtx>, name: &str) -> Result<Poly> {
        let i = ctx
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable { name: name.to_string(), pos: 0 })?;
        Ok(Poly::var_at(ctx, i))
    }

    pub fn var_at(ctx: &Arc<RingCtx>, i: usize) -> Poly {
        let mut m = ctx.one_monomial();
        m[i] = 1;
        Poly::term(ctx, m, ctx.field().one())
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms(ctx: &Arc<RingCtx>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let field = ctx.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.len(), ctx.nvars());
            let c = field.reduce(c);
            match acc.get_mut(&m) {
                Some(e) => *e = field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly::from_map(ctx, acc)
    }

    fn from_map(ctx: &Arc<RingCtx>, acc: HashMap<Monomial, Scalar>) -> Poly {
        let order = ctx.order();
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c == self.ctx.field().one())
    }

    /// The value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| degree(m)).max()
    }

    /// Largest exponent of any variable in any term.
    pub fn max_exponent(&self) -> u32 {
        self.terms.iter().flat_map(|(m, _)| m.iter().copied()).max().unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ctx.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let field = self.ctx.field();
        let c = field.reduce(c.clone());
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, &c))).collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    /// `c * mono * self`; the term order is preserved by multiplication.
    pub fn mul_term(&self, mono: &[u32], c: &Scalar) -> Poly {
        let field = self.ctx.field();
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (mono_mul(m, mono), field.mul(a, c)))
            .collect();
        Poly { ctx: self.ctx.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let field = self.ctx.field();
        let terms = self.terms.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| {
            let mut m2 = m.clone();
            m2[i] -= 1;
            (m2, field.mul(c, &field.from_int(m[i] as i64)))
        });
        Poly::from_terms(&self.ctx, terms)
    }

    /// Ring-homomorphism evaluation `x_i ↦ images[i]`. All images must live
    /// in one target ring; the result lives there too.
    pub fn substitute_indexed(&self, images: &[Option<Poly>], target: &Arc<RingCtx>) -> Result<Poly> {
        if images.len() != self.ctx.nvars() {
            return Err(Error::Shape(format!(
                "{} images for {} variables",
                images.len(),
                self.ctx.nvars()
            )));
        }
        let field = target.field();
        if field != self.ctx.field() {
            return Err(Error::ContextMismatch(format!(
                "substitution from {} into {}",
                self.ctx.field(),
                field
            )));
        }
        for img in images.iter().flatten() {
            if img.ctx != *target {
                return Err(Error::ContextMismatch(format!(
                    "image in {} but target is {}",
                    img.ctx, target
                )));
            }
        }
        // cache powers of images
        let mut powers: HashMap<(usize, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[i]
                    .as_ref()
                    .ok_or_else(|| Error::MissingImage(self.ctx.vars()[i].clone()))?;
                let p = powers.entry((i, e)).or_insert_with(|| img.pow(e));
                t = &t * p;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitution by variable name.
    pub fn substitute(&self, images: &BTreeMap<String, Poly>) -> Result<Poly> {
        let target = match images.values().next() {
            Some(p) => p.ctx.clone(),
            None => {
                if let Some(i) = self.used_vars().first() {
                    return Err(Error::MissingImage(self.ctx.vars()[*i].clone()));
                }
                // constants stay in their own ring when nothing is substituted
                return Ok(self.clone());
            }
        };
        let imgs: Vec<Option<Poly>> = self.ctx.vars().iter().map(|v| images.get(v).cloned()).collect();
        self.substitute_indexed(&imgs, &target)
    }

    /// Re-homes the polynomial into `target`, placing variable `i` at `offset + i`.
    pub fn embed(&self, target: &Arc<RingCtx>, offset: usize) -> Poly {
        assert!(offset + self.ctx.nvars() <= target.nvars());
        assert_eq!(self.ctx.field(), target.field());
        let terms = self.terms.iter().map(|(m, c)| {
            let mut m2 = target.one_monomial();
            m2[offset..offset + m.len()].copy_from_slice(m);
            (m2, c.clone())
        });
        if target.order() == self.ctx.order() && offset == 0 && target.nvars() == self.ctx.nvars() {
            return Poly { ctx: target.clone(), terms: terms.collect() };
        }
        Poly::from_terms(target, terms)
    }

    /// Whether some term is divisible by `m`.
    pub fn has_term_divisible_by(&self, m: &[u32]) -> bool {
        self.terms.iter().any(|(t, _)| divides(m, t))
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        debug_assert!(self.ctx == other.ctx, "ring mismatch: {} vs {}", self.ctx, other.ctx);
        let field = self.ctx.field();
        let order = self.ctx.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                order.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate_other { field.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        field.sub(&a[i].1, &b[j].1)
                    } else {
                        field.add(&a[i].1, &b[j].1)
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { ctx: self.ctx.clone(), terms: out }
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ctx.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = &self.ctx.vars()[i];
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            let is_unit = abs == field.one();
            match (factors.is_empty(), is_unit) {
                (true, _) => write!(f, "{}", field.format(&abs))?,
                (false, true) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{}*{}", field.format(&abs), factors.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let field = self.ctx.field();
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect();
        Poly { ctx: self.ctx.clone(), terms }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert!(self.ctx == rhs.ctx, "ring mismatch: {} vs {}", self.ctx, rhs.ctx);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_term(m, c);
        }
        let field = self.ctx.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono_mul(ma, mb);
                let c = field.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = field.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(&self.ctx, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
