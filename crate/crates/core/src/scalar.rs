//! Exact scalars over the rationals or a prime field.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field every matrix entry lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScalarField {
    Rationals,
    /// GF(p) with `2 <= p < 2^31`, `p` prime.
    Prime(u32),
}

impl ScalarField {
    /// Builds GF(p), rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) {
            return Err(Error::Parse(format!("modulus {p} outside [2, 2^31)")));
        }
        if !is_prime(p) {
            return Err(Error::Parse(format!("modulus {p} is not prime")));
        }
        Ok(ScalarField::Prime(p as u32))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            ScalarField::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            ScalarField::Prime(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Parses the text form `[+-]digits[/digits]` into this field.
    ///
    /// In GF(p) a fraction is accepted when its denominator is invertible mod p.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("malformed scalar {text:?}"));
        let (num_text, den_text) = match text.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (text, None),
        };
        let unsigned = num_text.strip_prefix(['+', '-']).unwrap_or(num_text);
        if unsigned.is_empty() || !unsigned.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num = BigInt::from_str(num_text).map_err(|_| bad())?;
        let den = match den_text {
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                let den = BigInt::from_str(d).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {text:?}")));
                }
                den
            }
            None => BigInt::one(),
        };
        match self {
            ScalarField::Rationals => Ok(Scalar::Rational(BigRational::new(num, den))),
            ScalarField::Prime(p) => {
                let reduce = |x: &BigInt| {
                    let r = x % BigInt::from(p);
                    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                    r.to_u32().expect("residue fits in u32")
                };
                let d = reduce(&den);
                if d == 0 {
                    return Err(Error::Parse(format!("{text:?} is not an element of GF({p})")));
                }
                let n = Scalar::Residue { value: reduce(&num), modulus: p };
                let d = Scalar::Residue { value: d, modulus: p };
                Ok(&n * &d.inv())
            }
        }
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Rationals => write!(f, "Q"),
            ScalarField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// One exact field element.
///
/// Rationals are kept in lowest terms with a positive denominator, so
/// structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> ScalarField {
        match self {
            Scalar::Rational(_) => ScalarField::Rationals,
            Scalar::Residue { modulus, .. } => ScalarField::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident, $p:ident| $res:expr, $qop:tt) => {
        impl<'a> std::ops::$trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x $qop y),
                    (
                        Scalar::Residue { value: x, modulus: m1 },
                        Scalar::Residue { value: y, modulus: m2 },
                    ) if m1 == m2 => {
                        let ($a, $b, $p) = (*x as u64, *y as u64, *m1 as u64);
                        Scalar::Residue { value: ($res) as u32, modulus: *m1 }
                    }
                    (x, y) => panic!("field mismatch: {} vs {}", x.field(), y.field()),
                }
            }
        }
    };
}

binop!(Add, add, |a, b, p| (a + b) % p, +);
binop!(Sub, sub, |a, b, p| (a + p - b) % p, -);
binop!(Mul, mul, |a, b, p| a * b % p, *);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GF7: ScalarField = ScalarField::Prime(7);

    #[test]
    fn rational_text_is_canonical() {
        let q = ScalarField::Rationals;
        assert_eq!(q.parse_scalar("4/6").unwrap().to_string(), "2/3");
        assert_eq!(q.parse_scalar("-3/7").unwrap().to_string(), "-3/7");
        assert_eq!(q.parse_scalar("0/5").unwrap().to_string(), "0");
        assert_eq!(q.parse_scalar("+4").unwrap().to_string(), "4");
    }

    #[test]
    fn malformed_scalars_rejected() {
        let q = ScalarField::Rationals;
        for bad in ["", "1/0", "a", "1/", "/2", "1/-2", "--1", "1.5", " 1"] {
            assert!(q.parse_scalar(bad).is_err(), "{bad:?} accepted");
        }
        assert!(GF7.parse_scalar("1/7").is_err());
    }

    #[test]
    fn prime_field_residues() {
        assert_eq!(GF7.parse_scalar("-1").unwrap().to_string(), "6");
        assert_eq!(GF7.parse_scalar("1/2").unwrap().to_string(), "4");
        assert_eq!(GF7.parse_scalar("15").unwrap().to_string(), "1");
    }

    #[test]
    fn prime_constructor_checks_primality() {
        assert!(ScalarField::prime(7).is_ok());
        assert!(ScalarField::prime(2).is_ok());
        assert!(ScalarField::prime(2_147_483_647).is_ok());
        assert!(ScalarField::prime(1).is_err());
        assert!(ScalarField::prime(9).is_err());
        assert!(ScalarField::prime(1 << 31).is_err());
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| {
            Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
        })
    }

    proptest! {
        #[test]
        fn rational_add_sub_roundtrip(a in rational(), b in rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn residue_inverse(p in prop::sample::select(vec![2u32, 3, 7, 101, 65_521, 2_147_483_647]), a in 1u64..u32::MAX as u64) {
            let x = ScalarField::Prime(p).from_i64(a as i64);
            prop_assume!(!x.is_zero());
            prop_assert!((&x * &x.inv()).is_one());
        }

        #[test]
        fn residue_add_sub_roundtrip(a in -50i64..50, b in -50i64..50) {
            let (x, y) = (GF7.from_i64(a), GF7.from_i64(b));
            prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
