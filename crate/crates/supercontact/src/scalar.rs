//! Exact rational scalars.
//!
//! A [`Scalar`] is an arbitrary-precision rational number with a fast path:
//! values whose reduced numerator and denominator fit in `i64` are stored
//! inline, and arithmetic on them runs through `i128` intermediates (which
//! cannot overflow for reduced `i64` operands). Results that no longer fit
//! are promoted to a heap-allocated big rational, and every big result that
//! fits back into the inline form is demoted, so representation is canonical
//! and `Eq`/`Ord`/`Hash` are structural.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced fraction, denominator > 0.
    Small(i64, i64),
    /// Reduced fraction too large for the inline form.
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Reduce `n/d` (with `d != 0`) and store inline when possible.
fn reduce128(mut n: i128, mut d: i128) -> Scalar {
    debug_assert!(d != 0, "zero denominator");
    if n == 0 {
        return Scalar(Repr::Small(0, 1));
    }
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = gcd128(n, d);
    n /= g;
    d /= g;
    if let (Ok(ns), Ok(ds)) = (i64::try_from(n), i64::try_from(d)) {
        Scalar(Repr::Small(ns, ds))
    } else {
        Scalar(Repr::Big(Box::new(BigRational::new(n.into(), d.into()))))
    }
}

/// Demote a big rational to the inline form when it fits.
fn canonical_big(r: BigRational) -> Scalar {
    if let (Ok(n), Ok(d)) = (i64::try_from(r.numer().clone()), i64::try_from(r.denom().clone())) {
        Scalar(Repr::Small(n, d))
    } else {
        Scalar(Repr::Big(Box::new(r)))
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar(Repr::Small(0, 1));
    pub const ONE: Scalar = Scalar(Repr::Small(1, 1));

    /// The integer `n`.
    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Small(n, 1))
    }

    /// The fraction `n/d`. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        reduce128(n as i128, d as i128)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    /// The value as an `i64`, when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    /// Exact conversion to a big rational (used by tests and parsing).
    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        canonical_big(r)
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        match &self.0 {
            Repr::Small(n, d) => reduce128(*d as i128, *n as i128),
            Repr::Big(r) => canonical_big(r.recip()),
        }
    }

    /// Integer power; negative exponents invert (panics on zero base then).
    pub fn pow(&self, e: i32) -> Self {
        if e == 0 {
            return Scalar::ONE;
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Scalar::ONE;
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                // Cross-multiply in i128; denominators are positive.
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => reduce128(-(*n as i128), *d as i128),
            Repr::Big(r) => canonical_big(-(**r).clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                // |n| <= (2^63-1)^2 * 2 < 2^127-1, so i128 cannot overflow.
                let n = *an as i128 * *bd as i128 + *bn as i128 * *ad as i128;
                let d = *ad as i128 * *bd as i128;
                reduce128(n, d)
            }
            _ => canonical_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                reduce128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128)
            }
            _ => canonical_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)] // division is multiplication by the reciprocal
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.recip()
    }
}

macro_rules! forward_binop {
    ($Op:ident, $method:ident) => {
        impl $Op<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $Op<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::ZERO
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::ONE
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl fmt::Display for Scalar {
    /// Canonical form: `n` for integers, `n/d` otherwise, `d > 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

/// Error from parsing a `Scalar` out of a `n` or `n/d` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(pub String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {}", self.0)
    }
}

impl std::error::Error for ParseScalarError {}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num_str).map_err(|_| ParseScalarError(s.to_string()))?;
        let d = BigInt::from_str(den_str).map_err(|_| ParseScalarError(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseScalarError(s.to_string()));
        }
        Ok(canonical_big(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Binomial coefficient as an exact scalar (`n choose k`, zero for `k > n`).
pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return Scalar::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    canonical_big(BigRational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(Scalar::new(2, 4), Scalar::new(1, 2));
        assert_eq!(Scalar::new(-2, -4), Scalar::new(1, 2));
        assert_eq!(Scalar::new(2, -4), Scalar::new(-1, 2));
        assert_eq!(Scalar::new(0, -7), Scalar::ZERO);
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in [
            Scalar::new(-3, 7),
            Scalar::from_int(5),
            Scalar::ZERO,
            Scalar::new(22, 4),
        ] {
            let text = s.to_string();
            let back: Scalar = text.parse().unwrap();
            assert_eq!(back, s, "round trip through {text:?}");
        }
        assert_eq!("  -6/8 ".parse::<Scalar>().unwrap(), Scalar::new(-3, 4));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn overflow_promotes_then_demotes() {
        let big = Scalar::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_big(), {
            let b = BigRational::from_integer(BigInt::from(i64::MAX));
            &b * &b
        });
        // Dividing back down must land in the inline form again.
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(_, _)));
    }

    #[test]
    fn ordering_matches_rationals() {
        assert!(Scalar::new(1, 3) < Scalar::new(1, 2));
        assert!(Scalar::new(-1, 2) < Scalar::new(-1, 3));
        assert!(Scalar::from_int(2) > Scalar::new(3, 2));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Scalar::from_int(10));
        assert_eq!(binomial(0, 0), Scalar::ONE);
        assert_eq!(binomial(3, 5), Scalar::ZERO);
        assert_eq!(binomial(40, 20), "137846528820".parse().unwrap());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (any::<i64>(), 1..=i64::MAX).prop_map(|(n, d)| Scalar::new(n, d))
    }

    proptest! {
        #[test]
        fn field_ops_match_big_rationals(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
            prop_assert_eq!((&a * &b).to_big(), a.to_big() * b.to_big());
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), a.to_big() / b.to_big());
            }
        }

        #[test]
        fn canonical_form_is_stable(a in arb_scalar(), b in arb_scalar()) {
            // Equal values must have equal representations (Hash/Eq contract).
            let lhs = &a * &b;
            let rhs = &b * &a;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
