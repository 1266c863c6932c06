use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::field::Field;

/// Exponent vector, one entry per ring variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    DegLex,
    #[default]
    DegRevLex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegLex => degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)),
            MonomialOrder::DegRevLex => degree(a).cmp(&degree(b)).then_with(|| {
                for (x, y) in a.iter().zip(b).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegLex => "deglex",
            MonomialOrder::DegRevLex => "degrevlex",
        }
    }
}

impl FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lex" | "plex" => Ok(MonomialOrder::Lex),
            "deglex" | "grlex" => Ok(MonomialOrder::DegLex),
            "degrevlex" | "grevlex" | "drl" => Ok(MonomialOrder::DegRevLex),
            other => Err(Error::InvalidRing(format!("unknown monomial order `{other}`"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `b / a`, assuming `a | b`.
pub fn mono_div(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// A polynomial ring `field[vars]` with a monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingCtx {
    field: Field,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl RingCtx {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S], order: MonomialOrder) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &vars {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("`{v}` is not a valid variable name")));
            }
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let Field::Prime(p) = field {
            Field::prime(p)?;
        }
        Ok(Arc::new(RingCtx { field, vars, order }))
    }

    /// `Q[vars]` with degrevlex.
    pub fn rational<S: AsRef<str>>(vars: &[S]) -> Arc<Self> {
        Self::new(Field::Rational, vars, MonomialOrder::DegRevLex).expect("valid variable names")
    }

    /// The coefficient field itself, as a ring without variables.
    pub fn point(field: Field) -> Arc<Self> {
        Self::new::<&str>(field, &[], MonomialOrder::DegRevLex).expect("valid point ring")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn one_monomial(&self) -> Monomial {
        vec![0; self.vars.len()]
    }

    /// The ring `self ⊗ other`: variables of `self` followed by those of `other`.
    pub fn tensor(&self, other: &RingCtx) -> Result<Arc<RingCtx>> {
        if self.field != other.field {
            return Err(Error::ContextMismatch(format!(
                "fields {} and {} differ",
                self.field, other.field
            )));
        }
        if self.order != other.order {
            return Err(Error::ContextMismatch(format!(
                "monomial orders {} and {} differ",
                self.order, other.order
            )));
        }
        if let Some(v) = self.vars.iter().find(|v| other.vars.contains(v)) {
            return Err(Error::VariableCollision(v.clone()));
        }
        let vars: Vec<&String> = self.vars.iter().chain(&other.vars).collect();
        RingCtx::new(self.field, &vars, self.order)
    }

    /// Same variables and order over another field.
    pub fn with_field(&self, field: Field) -> Result<Arc<RingCtx>> {
        RingCtx::new(field, &self.vars, self.order)
    }
}

impl fmt::Display for RingCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks that two contexts are the same ring.
pub(crate) fn same_ring(a: &RingCtx, b: &RingCtx) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!("{a} vs {b}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_order() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 > x > y > 1 in Q[x, y]
        let seq = [[2, 0], [1, 1], [0, 2], [1, 0], [0, 1], [0, 0]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?} vs {:?}", w[0], w[1]);
        }
        // x y^2 z^0 vs x^0 y^0 z^3 ... degrevlex prefers smaller last exponent
        assert_eq!(o.cmp(&[1, 1, 1], &[0, 3, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[2, 0, 1], &[1, 2, 0]), Ordering::Less);
    }

    #[test]
    fn ring_validation() {
        assert!(RingCtx::new(Field::Rational, &["x", "x"], MonomialOrder::Lex).is_err());
        assert!(RingCtx::new(Field::Rational, &["1x"], MonomialOrder::Lex).is_err());
        assert!(RingCtx::new(Field::Prime(4), &["x"], MonomialOrder::Lex).is_err());
        let a = RingCtx::rational(&["x"]);
        let b = RingCtx::rational(&["x", "y"]);
        assert!(matches!(a.tensor(&b), Err(Error::VariableCollision(_))));
        let c = RingCtx::rational(&["y"]);
        assert_eq!(a.tensor(&c).unwrap().vars(), &["x", "y"]);
    }
}
