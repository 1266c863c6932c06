//! Exact coefficient fields.
//!
//! Every coefficient is stored as a [`BigRational`]. Over a prime field the
//! stored value is always the canonical integer representative in `[0, p)`,
//! so equality of scalars is plain structural equality in both cases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Builds `F_p`, rejecting composite moduli and characteristic 2.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::InvalidRing(
                "characteristic 2 is not supported (homotopy witnesses divide by 2)".into(),
            ));
        }
        if p as u64 >= 1 << 31 {
            return Err(Error::InvalidRing(format!("modulus {p} exceeds 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(&self, n: BigInt) -> Scalar {
        self.reduce(Scalar::from_integer(n))
    }

    /// Interprets `num / den`; fails when `den` vanishes in the field.
    pub fn fraction(&self, num: BigInt, den: BigInt) -> Result<Scalar> {
        let unrepresentable = || Error::Unrepresentable {
            literal: format!("{num}/{den}"),
            field: self.to_string(),
        };
        if den.is_zero() {
            return Err(unrepresentable());
        }
        if let Field::Prime(p) = self {
            if (&den % BigInt::from(*p)).is_zero() {
                return Err(unrepresentable());
            }
        }
        Ok(self.reduce(Scalar::new(num.clone(), den.clone())))
    }

    /// Maps an arbitrary rational into canonical form for this field.
    pub fn reduce(&self, a: Scalar) -> Scalar {
        match self {
            Field::Rational => a,
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let num = a.numer().mod_floor(&p);
                let den = a.denom().mod_floor(&p);
                let inv = mod_inverse(&den, &p).expect("denominator invertible mod p");
                Scalar::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a + b,
            Field::Prime(p) => {
                let s = a.numer() + b.numer();
                let p = BigInt::from(*p);
                Scalar::from_integer(if s >= p { s - p } else { s })
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a - b,
            Field::Prime(p) => {
                let s = a.numer() - b.numer();
                Scalar::from_integer(if s.is_negative() { s + BigInt::from(*p) } else { s })
            }
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Field::Rational => -a,
            Field::Prime(p) => {
                if a.is_zero() {
                    a.clone()
                } else {
                    Scalar::from_integer(BigInt::from(*p) - a.numer())
                }
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a * b,
            Field::Prime(p) => {
                Scalar::from_integer((a.numer() * b.numer()).mod_floor(&BigInt::from(*p)))
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rational => Some(a.recip()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                mod_inverse(a.numer(), &p).map(Scalar::from_integer)
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Printable form that the polynomial parser reads back to the same value.
    pub fn format(&self, a: &Scalar) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    /// Enumerates the elements of a prime field, `0..p`.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..*p).map(|k| Scalar::from_integer(BigInt::from(k)))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(p);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(p))
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Small exact integer value of a scalar, if it has one.
pub fn scalar_to_i64(a: &Scalar) -> Option<i64> {
    if a.is_integer() {
        a.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_int(5);
        let b = f.from_int(4);
        assert_eq!(f.add(&a, &b), f.from_int(2));
        assert_eq!(f.sub(&b, &a), f.from_int(6));
        assert_eq!(f.mul(&a, &b), f.from_int(6));
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        assert_eq!(f.from_int(-1), f.from_int(6));
    }

    #[test]
    fn fractions() {
        let f = Field::prime(101).unwrap();
        let half = f.fraction(1.into(), 2.into()).unwrap();
        assert_eq!(f.mul(&half, &f.from_int(2)), f.one());
        assert!(f.fraction(1.into(), 101.into()).is_err());
        assert!(Field::Rational.fraction(1.into(), 0.into()).is_err());
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(101).is_ok());
    }
}
