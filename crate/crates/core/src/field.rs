//! Exact scalars over the rationals and prime fields.
//!
//! Every other module computes with [`Scalar`] values tagged by the
//! [`FieldSpec`] they belong to. Rationals are unbounded and always stored
//! gcd-reduced with a positive denominator; prime residues are always reduced
//! into `[0, p)`. Equal scalars therefore have identical representations,
//! which lets subspaces and tables be compared and hashed directly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different fields: {0} and {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// The ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// A prime field. Fails if `p` is not prime; `p = 2` is allowed here.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    /// Characteristic of the field (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime { p } => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime { p } => Scalar::Prime {
                residue: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// The fraction `num/den`, reduced into this field.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.checked_div(&d)
    }

    /// Field-checked arithmetic on two scalars.
    pub fn arith(&self, a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, FieldError> {
        for s in [a, b] {
            if s.field() != *self {
                return Err(FieldError::FieldMismatch(*self, s.field()));
            }
        }
        match op {
            ArithOp::Add => Ok(a + b),
            ArithOp::Sub => Ok(a - b),
            ArithOp::Mul => Ok(a * b),
            ArithOp::Div => a.checked_div(b),
        }
    }

    /// Parses the JSON scalar encoding: `"num/den"` (or a bare integer) for
    /// rationals, an integer residue for prime fields.
    pub fn parse_scalar(&self, v: &serde_json::Value) -> Result<Scalar, FieldError> {
        let bad = || FieldError::Parse(v.to_string());
        match (self, v) {
            (FieldSpec::Rational, serde_json::Value::String(s)) => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let num = BigInt::from_str(num).map_err(|_| bad())?;
                let den = BigInt::from_str(den).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            (FieldSpec::Rational, serde_json::Value::Number(n)) => {
                n.as_i64().map(|n| self.from_i64(n)).ok_or_else(bad)
            }
            (FieldSpec::Prime { .. }, serde_json::Value::Number(n)) => {
                n.as_i64().map(|n| self.from_i64(n)).ok_or_else(bad)
            }
            (FieldSpec::Prime { .. }, serde_json::Value::String(s)) => {
                // tolerate "k" or "a/b" strings for prime fields too
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let num: i64 = num.parse().map_err(|_| bad())?;
                let den: i64 = den.parse().map_err(|_| bad())?;
                self.fraction(num, den)
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact field element.
///
/// The `std::ops` impls panic when the operands come from different fields;
/// use [`FieldSpec::arith`] for a checked variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { modulus, .. } => FieldSpec::Prime { p: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
        }
    }

    pub fn inverse(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { residue, modulus } => {
                let inv = (*residue as i64).extended_gcd(&(*modulus as i64)).x;
                Scalar::Prime {
                    residue: inv.rem_euclid(*modulus as i64) as u64,
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        if self.field() != other.field() {
            return Err(FieldError::FieldMismatch(self.field(), other.field()));
        }
        Ok(self * &other.inverse()?)
    }

    /// JSON encoding: `"num/den"` for rationals, the residue for primes.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Rational(r) => serde_json::Value::String(format!("{}/{}", r.numer(), r.denom())),
            Scalar::Prime { residue, .. } => serde_json::Value::from(*residue),
        }
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime { residue: (a + b) % p, modulus: *p }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime { residue: (a + p - b) % p, modulus: *p }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime {
                    residue: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_sum() {
        let q = FieldSpec::Rational;
        let a = q.fraction(1, 2).unwrap();
        let b = q.fraction(1, 3).unwrap();
        assert_eq!(q.arith(&a, &b, ArithOp::Add).unwrap(), q.fraction(5, 6).unwrap());
    }

    #[test]
    fn prime_product() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = f5.arith(&f5.from_i64(3), &f5.from_i64(4), ArithOp::Mul).unwrap();
        assert_eq!(r, f5.from_i64(2));
        assert_eq!(r.to_json(), serde_json::json!(2));
    }

    #[test]
    fn errors() {
        let q = FieldSpec::Rational;
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            q.arith(&q.one(), &q.zero(), ArithOp::Div),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            q.arith(&q.one(), &f3.one(), ArithOp::Add),
            Err(FieldError::FieldMismatch(..))
        ));
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert!(FieldSpec::prime(2).is_ok());
    }

    #[test]
    fn canonical_rational_form() {
        let q = FieldSpec::Rational;
        let a = q.fraction(2, -4).unwrap();
        let b = q.fraction(-1, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), serde_json::json!("-1/2"));
        assert_eq!(q.parse_scalar(&serde_json::json!("6/-12")).unwrap(), b);
        assert_eq!(q.parse_scalar(&serde_json::json!("3")).unwrap(), q.from_i64(3));
    }

    #[test]
    fn prime_inverse() {
        let f7 = FieldSpec::prime(7).unwrap();
        for k in 1..7 {
            let x = f7.from_i64(k);
            assert!((&x * &x.inverse().unwrap()).is_one());
        }
    }

    fn fields() -> impl Strategy<Value = FieldSpec> {
        prop_oneof![
            Just(FieldSpec::Rational),
            Just(FieldSpec::Prime { p: 2 }),
            Just(FieldSpec::Prime { p: 5 }),
            Just(FieldSpec::Prime { p: 101 }),
        ]
    }

    fn triple() -> impl Strategy<Value = (FieldSpec, Scalar, Scalar, Scalar)> {
        (fields(), -50i64..50, 1i64..9, -50i64..50, 1i64..9, -50i64..50, 1i64..9).prop_filter_map(
            "denominator vanishes in F_p",
            |(f, a, ad, b, bd, c, cd)| {
                Some((f, f.fraction(a, ad).ok()?, f.fraction(b, bd).ok()?, f.fraction(c, cd).ok()?))
            },
        )
    }

    proptest! {
        #[test]
        fn field_axioms((_f, a, b, c) in triple()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn json_round_trip((f, a, _b, _c) in triple()) {
            prop_assert_eq!(f.parse_scalar(&a.to_json()).unwrap(), a);
        }
    }
}
