//! Exact scalars over the rationals and over prime fields.
//!
//! A [`FieldSpec`] names the coefficient domain and a [`Scalar`] carries
//! enough information to know which domain it lives in. Operator impls
//! (`&a + &b`, ...) panic when the operands come from different fields;
//! the `try_*` methods report that as [`Error::FieldMismatch`] instead.
//! Matrix code checks fields once up front and then uses the operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest modulus accepted for a prime field. Residue products stay in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// Coefficient domain: `Q` or `F_p` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    // 0 encodes the rationals
    modulus: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { modulus: 0 };

    pub fn rationals() -> Self {
        Self::RATIONALS
    }

    /// `F_p`. Primality is checked by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { modulus: p })
    }

    pub fn kind(&self) -> FieldKind {
        if self.modulus == 0 {
            FieldKind::Rationals
        } else {
            FieldKind::PrimeField
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus
    }

    pub fn is_rationals(&self) -> bool {
        self.modulus == 0
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.modulus {
            0 => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            p => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self.modulus {
            0 => Scalar::Rational(BigRational::from_integer(v.clone())),
            p => {
                let r = ((v % p) + p) % p;
                Scalar::Residue {
                    value: u64::try_from(r).expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// `num / den` in this field.
    pub fn ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// Parses the text encoding: `a/b` or `a` over `Q`, a decimal residue over `F_p`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match self.modulus {
            0 => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s, "1"),
                };
                let num = BigInt::from_str(num)
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                let den = BigInt::from_str(den)
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            _ => {
                let v =
                    BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad residue {s:?}")))?;
                Ok(self.from_bigint(&v))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "q"),
            p => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "q" | "Q" => Ok(FieldSpec::RATIONALS),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| {
                        Error::Parse(format!("unknown field {other:?}, expected q or fp:<p>"))
                    })?;
                FieldSpec::prime(p)
            }
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element in canonical form: rationals in lowest terms with a
/// positive denominator, residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::RATIONALS,
            Scalar::Residue { modulus, .. } => FieldSpec { modulus: *modulus },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Rebuilds the value from its parts; the identity on canonical scalars.
    pub fn canonicalize(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                Scalar::Rational(BigRational::new(r.numer().clone(), r.denom().clone()))
            }
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: value % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar> {
        match op {
            ArithOp::Add => self.try_add(other),
            ArithOp::Sub => self.try_sub(other),
            ArithOp::Mul => self.try_mul(other),
            ArithOp::Div => self.try_div(other),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $res:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            #[allow(clippy::suspicious_arithmetic_impl)]
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($rat(a, b)),
                    (
                        Scalar::Residue {
                            value: a,
                            modulus: p,
                        },
                        Scalar::Residue {
                            value: b,
                            modulus: q,
                        },
                    ) if p == q => Scalar::Residue {
                        value: $res(*a, *b, *p),
                        modulus: *p,
                    },
                    _ => panic!("field mismatch: {} vs {}", self.field(), rhs.field()),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: &BigRational, b: &BigRational| a + b,
    |a, b, p| (a + b) % p
);
binop!(
    Sub,
    sub,
    |a: &BigRational, b: &BigRational| a - b,
    |a, b, p| (a + p - b) % p
);
binop!(
    Mul,
    mul,
    |a: &BigRational, b: &BigRational| a * b,
    |a, b, p| a * b % p
);

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Scalar {
        FieldSpec::RATIONALS.parse_scalar(s).unwrap()
    }

    #[test]
    fn rational_addition() {
        assert_eq!(&q("1/2") + &q("1/3"), q("5/6"));
        assert_eq!((&q("1/2") + &q("1/3")).to_string(), "5/6");
    }

    #[test]
    fn residue_product() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = f5.from_i64(3).arith(&f5.from_i64(4), ArithOp::Mul).unwrap();
        assert_eq!(r, f5.from_i64(2));
        assert_eq!(r.to_string(), "2");
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(q("2/4").to_string(), "1/2");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert_eq!(q("0/7").to_string(), "0");
        match q("0/7") {
            Scalar::Rational(r) => assert!(r.denom().is_one()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn characteristic() {
        assert_eq!(FieldSpec::rationals().characteristic(), 0);
        assert_eq!(FieldSpec::prime(7).unwrap().characteristic(), 7);
        assert_eq!(FieldSpec::prime(2).unwrap().characteristic(), 2);
    }

    #[test]
    fn rejects_composite_moduli() {
        assert_eq!(FieldSpec::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
        assert!(FieldSpec::prime(MAX_MODULUS + 11).is_err());
    }

    #[test]
    fn division_errors() {
        assert_eq!(q("1").try_div(&q("0")), Err(Error::DivisionByZero));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.one().try_div(&f7.zero()), Err(Error::DivisionByZero));
        assert!(matches!(
            q("1").try_add(&f7.one()),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn field_text_round_trip() {
        for s in ["q", "fp:2", "fp:65521"] {
            assert_eq!(s.parse::<FieldSpec>().unwrap().to_string(), s);
        }
        assert!("fp:15".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn residue_parse_reduces() {
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse_scalar("-1").unwrap().to_string(), "6");
        assert!(f7.parse_scalar("1/2").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Scalar> {
        (-1000i64..1000, 1i64..1000).prop_map(|(a, b)| FieldSpec::RATIONALS.ratio(a, b).unwrap())
    }

    fn arb_residue() -> impl Strategy<Value = Scalar> {
        let f = FieldSpec::prime(65521).unwrap();
        (0i64..65521).prop_map(move |a| f.from_i64(a))
    }

    fn axioms(a: Scalar, b: Scalar, c: Scalar) -> std::result::Result<(), TestCaseError> {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.canonicalize(), a);
        Ok(())
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            axioms(a, b, c)?;
        }

        #[test]
        fn prime_field_axioms(a in arb_residue(), b in arb_residue(), c in arb_residue()) {
            axioms(a, b, c)?;
        }
    }
}
