//! Exact scalar fields.
//!
//! Everything in this crate computes exactly: structure constants, potentials
//! and right equivalences live over the rationals, while representations may
//! also live over the small prime fields F_2, F_3 and F_5, where subspace
//! lattices are finite and can be enumerated.
//!
//! Algorithms that work over any field are written against the [`Field`]
//! trait and dispatched on a [`FieldKind`] at the call site.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational numbers, used for every coefficient in the crate.
pub type Rational = BigRational;

/// The rational number `n`.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// The rational number `num / den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse `"3"`, `"-2/5"` or `"0"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// Render a rational as `"n"` or `"n/d"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A field with exactly computable arithmetic.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Image of a rational number, `None` when its denominator vanishes in the field.
    fn embed(&self, q: &Rational) -> Option<Self::Elem>;
    /// Canonical rational representative (for prime fields: the integer in `0..p`).
    fn lift(&self, a: &Self::Elem) -> Rational;
    fn from_i64(&self, n: i64) -> Self::Elem;
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn embed(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }
    fn lift(&self, a: &Rational) -> Rational {
        a.clone()
    }
    fn from_i64(&self, n: i64) -> Rational {
        rat(n)
    }
}

/// The prime field F_p for a small prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Panics unless `p` is a prime below 2^16.
    pub fn new(p: u32) -> Self {
        assert!(is_small_prime(p), "{p} is not a supported prime");
        PrimeField { p: p as u64 }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = n % &p;
        if r.is_negative() {
            r += &p;
        }
        r.to_u64().expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

fn is_small_prime(p: u32) -> bool {
    (2..1 << 16).contains(&p) && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
    fn embed(&self, q: &Rational) -> Option<u64> {
        let n = self.reduce_bigint(q.numer());
        let d = self.reduce_bigint(q.denom());
        self.inv(&d).map(|dinv| n * dinv % self.p)
    }
    fn lift(&self, a: &u64) -> Rational {
        rat(*a as i64)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

/// Which field a representation lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    Prime(u32),
}

/// Prime fields accepted in representation files.
pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];

impl FieldKind {
    pub fn is_finite(&self) -> bool {
        matches!(self, FieldKind::Prime(_))
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldKind::Rationals => None,
            FieldKind::Prime(p) => Some(*p as u64),
        }
    }

    /// Canonical representative of `q` in this field, as a rational.
    pub fn normalize(&self, q: &Rational) -> Option<Rational> {
        match self {
            FieldKind::Rationals => Some(q.clone()),
            FieldKind::Prime(p) => {
                let f = PrimeField::new(*p);
                f.embed(q).map(|e| f.lift(&e))
            }
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Q" {
            return Ok(FieldKind::Rationals);
        }
        let p =
            s.strip_prefix('F').and_then(|p| p.parse::<u32>().ok()).ok_or_else(|| format!("unknown field {s:?}"))?;
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(format!("unsupported prime field {s:?} (use F2, F3 or F5)"))
        }
    }
}

impl Serialize for FieldKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5);
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.neg(&1), 4);
        assert_eq!(f.embed(&ratio(1, 2)), Some(3));
        assert_eq!(f.embed(&ratio(1, 5)), None);
        assert_eq!(f.from_i64(-7), 3);
    }

    #[test]
    fn rational_round_trip_through_text() {
        for s in ["0", "3", "-2/5", "7/3"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
        assert_eq!(parse_rational("4/2"), Some(rat(2)));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn field_kind_names() {
        assert_eq!("F3".parse::<FieldKind>(), Ok(FieldKind::Prime(3)));
        assert_eq!("Q".parse::<FieldKind>(), Ok(FieldKind::Rationals));
        assert!("F7".parse::<FieldKind>().is_err());
        assert_eq!(FieldKind::Prime(2).normalize(&rat(-1)), Some(rat(1)));
    }
}
