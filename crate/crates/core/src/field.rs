//! Exact scalar fields.
//!
//! Every computation in the crate is generic over [`Field`]. Two concrete
//! fields ship with the crate: the rationals ([`Rational`]) and prime fields
//! ([`Fp`]). There is no floating-point implementation; equality is exact.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field.
///
/// `zero()`/`one()` come from `num_traits`, so generic code can build identity
/// and zero matrices without a field context.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Image of an integer under the unique ring map from the integers.
    fn from_i64(n: i64) -> Self;

    /// Parse an element written as an integer or `p/q`, in the field described
    /// by `ctx` (used by prime fields to bind the modulus).
    fn parse_in(text: &str, ctx: &Self) -> Result<Self, ParseScalarError>;

    /// A representative element carrying the field context (modulus).
    fn context_one(&self) -> Self {
        Self::one()
    }

    fn is_minus_one(&self) -> bool {
        (self.clone() + Self::one()).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{text}` as a scalar: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: String,
}

impl ParseScalarError {
    fn new(text: &str, reason: impl Into<String>) -> Self {
        ParseScalarError { text: text.to_string(), reason: reason.into() }
    }
}

/// Rational numbers in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn from_i64(n: i64) -> Self {
        Rational::integer(n)
    }

    fn parse_in(text: &str, _ctx: &Self) -> Result<Self, ParseScalarError> {
        text.parse()
    }

    fn is_minus_one(&self) -> bool {
        self.0.is_negative() && self.0.is_integer() && self.0.numer() == &BigInt::from(-1)
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| ParseScalarError::new(text, "bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| ParseScalarError::new(text, "bad denominator"))?;
        if den.is_zero() {
            return Err(ParseScalarError::new(text, "zero denominator"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

/// A residue modulo a prime.
///
/// The modulus travels with the value. Constants produced without a field
/// context (`zero()`, `one()`, `from_i64`) are *unbound* integers (modulus 0)
/// and are reduced as soon as they meet a bound residue. Binary operations
/// between residues of different moduli panic: all scalars of one computation
/// live in one field.
#[derive(Clone, Copy)]
pub struct Fp {
    value: i64,
    modulus: u32,
}

impl Fp {
    /// `value mod p`. `p` must be prime (checked).
    pub fn new(value: i64, p: u32) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        Fp { value: value.rem_euclid(p as i64), modulus: p }
    }

    pub fn modulus(&self) -> Option<u32> {
        (self.modulus != 0).then_some(self.modulus)
    }

    /// Canonical representative in `0..p` (or the raw integer when unbound).
    pub fn value(&self) -> i64 {
        self.value
    }

    fn common_modulus(a: &Fp, b: &Fp) -> u32 {
        match (a.modulus, b.modulus) {
            (0, m) | (m, 0) => m,
            (m, n) if m == n => m,
            (m, n) => panic!("mixing residues modulo {m} and {n}"),
        }
    }

    fn reduced(value: i64, modulus: u32) -> Fp {
        if modulus == 0 {
            Fp { value, modulus }
        } else {
            Fp { value: value.rem_euclid(modulus as i64), modulus }
        }
    }

    fn lift(&self, modulus: u32) -> i64 {
        if modulus == 0 {
            self.value
        } else {
            self.value.rem_euclid(modulus as i64)
        }
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PartialEq for Fp {
    fn eq(&self, other: &Fp) -> bool {
        let m = Fp::common_modulus(self, other);
        self.lift(m) == other.lift(m)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            0 => write!(f, "{}", self.value),
            m => write!(f, "{} (mod {m})", self.value),
        }
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { value: 0, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { value: 1, modulus: 0 }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let m = Fp::common_modulus(&self, &rhs);
        let sum = self.lift(m).checked_add(rhs.lift(m)).expect("unbound integer overflow");
        Fp::reduced(sum, m)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let m = Fp::common_modulus(&self, &rhs);
        let diff = self.lift(m).checked_sub(rhs.lift(m)).expect("unbound integer overflow");
        Fp::reduced(diff, m)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let m = Fp::common_modulus(&self, &rhs);
        let prod = self.lift(m).checked_mul(rhs.lift(m)).expect("unbound integer overflow");
        Fp::reduced(prod, m)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::reduced(-self.value, self.modulus)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.modulus == 0 {
            // only the units of the integers are invertible before binding
            return match self.value {
                1 | -1 => Some(*self),
                v => panic!("cannot invert the unbound integer {v}; bind it to a prime field first"),
            };
        }
        let p = self.modulus as i64;
        // Fermat: a^(p-2)
        let mut base = self.value;
        let mut exp = p - 2;
        let mut acc = 1i64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(Fp { value: acc, modulus: self.modulus })
    }

    fn from_i64(n: i64) -> Self {
        Fp { value: n, modulus: 0 }
    }

    fn parse_in(text: &str, ctx: &Self) -> Result<Self, ParseScalarError> {
        let m = ctx.modulus;
        if m == 0 {
            return Err(ParseScalarError::new(text, "no prime modulus in scope"));
        }
        let q: Rational = text.parse()?;
        let num = q.0.numer() % BigInt::from(m);
        let den = q.0.denom() % BigInt::from(m);
        let num = Fp::new(i64::try_from(num).expect("reduced residue fits"), m);
        let den = Fp::new(i64::try_from(den).expect("reduced residue fits"), m);
        let den_inv = den
            .inv()
            .ok_or_else(|| ParseScalarError::new(text, format!("denominator divisible by {m}")))?;
        Ok(num * den_inv)
    }

    fn context_one(&self) -> Self {
        Fp::reduced(1, self.modulus)
    }
}

impl PartialOrd for Fp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let m = Fp::common_modulus(self, other);
        Some(self.lift(m).cmp(&other.lift(m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_display() {
        let q: Rational = "6/-4".parse().unwrap();
        assert_eq!(q, Rational::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rational::integer(5).to_string(), "5");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn rational_minus_one() {
        assert!(Rational::integer(-1).is_minus_one());
        assert!(!Rational::new(-1, 2).is_minus_one());
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(3, 7);
        let b = Fp::new(5, 7);
        assert_eq!(a + b, Fp::new(1, 7));
        assert_eq!(a * b, Fp::new(1, 7));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(-a, Fp::new(4, 7));
        // 2 is a primitive cube root of unity mod 7
        let w = Fp::new(2, 7);
        assert_eq!(w * w * w, Fp::one());
        assert_ne!(w, Fp::one());
    }

    #[test]
    fn fp_unbound_constants_bind() {
        let a = Fp::new(6, 7);
        assert_eq!(a + Fp::one(), Fp::zero());
        assert!(a.is_minus_one());
        assert_eq!(Fp::from_i64(9), Fp::new(2, 7));
        assert_eq!(Fp::parse_in("1/2", &a).unwrap(), Fp::new(4, 7));
        assert!(Fp::parse_in("1/7", &a).is_err());
    }

    #[test]
    #[should_panic(expected = "mixing residues")]
    fn fp_mixed_moduli_panic() {
        let _ = Fp::new(1, 5) + Fp::new(1, 7);
    }

    #[test]
    fn primes() {
        let ps: Vec<u32> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
