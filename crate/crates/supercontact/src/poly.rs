//! Sparse univariate polynomials over [`Scalar`].
//!
//! The zero polynomial stores no terms; nonzero coefficients are keyed by
//! exponent in a `BTreeMap`, so equal polynomials are structurally equal and
//! iteration order is deterministic. The text form (used by `Display`,
//! `FromStr`, and serde) lists terms in decreasing exponent order, e.g.
//! `x^2 - 3/2*x + 1`.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// A polynomial in the even variable `x` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<u32, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::monomial(c, 0)
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::ONE)
    }

    /// The monomial `c * x^e`.
    pub fn monomial(c: Scalar, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    /// The monomial `x^e`.
    pub fn x_pow(e: u32) -> Self {
        Poly::monomial(Scalar::ONE, e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of the polynomial; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `x^e` (zero when absent).
    pub fn coeff(&self, e: u32) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or(Scalar::ZERO)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.degree() {
            None => Some(Scalar::ZERO),
            Some(0) => Some(self.coeff(0)),
            Some(_) => None,
        }
    }

    /// Iterate `(exponent, coefficient)` in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn add_term(&mut self, e: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in self.iter() {
            for (eb, cb) in rhs.iter() {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }

    /// d/dx.
    pub fn derivative(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in self.iter() {
            if e > 0 {
                out.add_term(e - 1, &(c * &Scalar::from_int(e as i64)));
            }
        }
        out
    }

    /// n-th derivative.
    pub fn derivative_n(&self, n: u32) -> Poly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// The antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in self.iter() {
            out.add_term(e + 1, &(c / &Scalar::from_int((e + 1) as i64)));
        }
        out
    }

    /// Evaluate at a scalar point.
    pub fn eval(&self, at: &Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        for (e, c) in self.iter() {
            acc += c * &at.pow(e as i32);
        }
        acc
    }
}

impl FromIterator<(u32, Scalar)> for Poly {
    fn from_iter<I: IntoIterator<Item = (u32, Scalar)>>(iter: I) -> Self {
        let mut out = Poly::zero();
        for (e, c) in iter {
            out.add_term(e, &c);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = if neg { -c } else { c.clone() };
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{e}")?,
                (_, false) => write!(f, "{mag}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Error from parsing a polynomial literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePolyError(pub String);

impl fmt::Display for ParsePolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid polynomial literal: {}", self.0)
    }
}

impl std::error::Error for ParsePolyError {}

impl FromStr for Poly {
    type Err = ParsePolyError;

    /// Parses the `Display` format: signed terms `c`, `c*x`, `c*x^e`, `x`,
    /// `x^e` joined by `+`/`-`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParsePolyError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        if compact == "0" {
            return Ok(Poly::zero());
        }
        // Split into signed terms; a sign right after '^', '*', or '/' never
        // occurs in valid input, so every '+'/'-' past position 0 separates.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut cur_neg = false;
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                if cur.is_empty() {
                    return Err(err());
                }
                terms.push((cur_neg, std::mem::take(&mut cur)));
                cur_neg = ch == '-';
            } else if ch == '-' {
                cur_neg = true;
            } else if ch != '+' {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((cur_neg, cur));

        let mut out = Poly::zero();
        for (neg, term) in terms {
            let (coeff_str, exp): (&str, u32) = match term.find('x') {
                None => (term.as_str(), 0),
                Some(pos) => {
                    let left = &term[..pos];
                    let right = &term[pos + 1..];
                    let exp = if right.is_empty() {
                        1
                    } else {
                        right
                            .strip_prefix('^')
                            .and_then(|e| e.parse::<u32>().ok())
                            .ok_or_else(err)?
                    };
                    let left = left.strip_suffix('*').unwrap_or(left);
                    (left, exp)
                }
            };
            let mut c: Scalar = if coeff_str.is_empty() {
                Scalar::ONE
            } else {
                coeff_str.parse().map_err(|_| err())?
            };
            if neg {
                c = -c;
            }
            out.add_term(exp, &c);
        }
        Ok(out)
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
