//! Superfunctions on the superline with two odd variables.
//!
//! A [`SuperFunction`] is a polynomial in one even variable `x` and two odd
//! (anticommuting, square-zero) variables `t1`, `t2`, stored as four ordinary
//! polynomial components
//!
//! ```text
//! F = a(x) + b(x) t1 + c(x) t2 + d(x) t1 t2 .
//! ```
//!
//! The module provides the graded product, the left odd derivations
//! `d/dt_i`, and the right-invariant odd derivations `eta_i = d/dt_i - t_i d/dx`,
//! which satisfy `eta_i^2 = -d/dx` and anticommute with each other.

use crate::poly::Poly;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Parity (Z/2 grading) of a homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Sum of gradings: even unless exactly one input is odd.
    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^{parity}` as an exact scalar.
    pub fn sign(self) -> Scalar {
        match self {
            Parity::Even => Scalar::ONE,
            Parity::Odd => Scalar::from_int(-1),
        }
    }
}

/// A Grassmann-polynomial function of `(x, t1, t2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SuperFunction {
    /// Coefficient of `1`.
    #[serde(rename = "1")]
    pub c_1: Poly,
    /// Coefficient of `t1`.
    #[serde(rename = "t1")]
    pub c_t1: Poly,
    /// Coefficient of `t2`.
    #[serde(rename = "t2")]
    pub c_t2: Poly,
    /// Coefficient of `t1*t2`.
    #[serde(rename = "t12")]
    pub c_t12: Poly,
}

impl SuperFunction {
    pub fn zero() -> Self {
        SuperFunction::default()
    }

    pub fn from_poly(p: Poly) -> Self {
        SuperFunction {
            c_1: p,
            ..Default::default()
        }
    }

    pub fn constant(c: Scalar) -> Self {
        SuperFunction::from_poly(Poly::constant(c))
    }

    pub fn one() -> Self {
        SuperFunction::constant(Scalar::ONE)
    }

    pub fn x() -> Self {
        SuperFunction::from_poly(Poly::x_pow(1))
    }

    pub fn theta1() -> Self {
        SuperFunction {
            c_t1: Poly::one(),
            ..Default::default()
        }
    }

    pub fn theta2() -> Self {
        SuperFunction {
            c_t2: Poly::one(),
            ..Default::default()
        }
    }

    pub fn theta12() -> Self {
        SuperFunction {
            c_t12: Poly::one(),
            ..Default::default()
        }
    }

    /// The monomial `c * x^e * t1^{a} * t2^{b}` with `a, b` in `{0, 1}`.
    pub fn monomial(c: Scalar, e: u32, t1: bool, t2: bool) -> Self {
        let p = Poly::monomial(c, e);
        let mut out = SuperFunction::zero();
        match (t1, t2) {
            (false, false) => out.c_1 = p,
            (true, false) => out.c_t1 = p,
            (false, true) => out.c_t2 = p,
            (true, true) => out.c_t12 = p,
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.c_1.is_zero() && self.c_t1.is_zero() && self.c_t2.is_zero() && self.c_t12.is_zero()
    }

    /// True when the function does not involve `t2` (neither `t2` nor `t1*t2`).
    pub fn is_theta2_free(&self) -> bool {
        self.c_t2.is_zero() && self.c_t12.is_zero()
    }

    /// Splits `F = F1 + F2 * t2` into the pair `(F1, F2)` of `t2`-free parts.
    ///
    /// Note `F2 = c + d*t1` when `F = a + b*t1 + c*t2 + d*t1*t2`: the odd
    /// variable is factored to the right without a derivation sign.
    pub fn theta2_components(&self) -> (SuperFunction, SuperFunction) {
        let f1 = SuperFunction {
            c_1: self.c_1.clone(),
            c_t1: self.c_t1.clone(),
            ..Default::default()
        };
        let f2 = SuperFunction {
            c_1: self.c_t2.clone(),
            c_t1: self.c_t12.clone(),
            ..Default::default()
        };
        (f1, f2)
    }

    /// Inverse of [`theta2_components`](Self::theta2_components):
    /// `F1 + F2 * t2` for `t2`-free inputs.
    pub fn from_theta2_components(f1: &SuperFunction, f2: &SuperFunction) -> SuperFunction {
        debug_assert!(f1.is_theta2_free() && f2.is_theta2_free());
        SuperFunction {
            c_1: f1.c_1.clone(),
            c_t1: f1.c_t1.clone(),
            c_t2: f2.c_1.clone(),
            c_t12: f2.c_t1.clone(),
        }
    }

    /// Flips the sign of every term containing `t1`.
    ///
    /// This is the multiplicative involution implementing
    /// `t2 * W = flip_theta1(W) * t2` for `t2`-free `W`, and the parity
    /// involution of the one-theta world.
    pub fn flip_theta1(&self) -> SuperFunction {
        SuperFunction {
            c_1: self.c_1.clone(),
            c_t1: self.c_t1.neg(),
            c_t2: self.c_t2.clone(),
            c_t12: self.c_t12.neg(),
        }
    }

    pub fn add(&self, rhs: &SuperFunction) -> SuperFunction {
        SuperFunction {
            c_1: self.c_1.add(&rhs.c_1),
            c_t1: self.c_t1.add(&rhs.c_t1),
            c_t2: self.c_t2.add(&rhs.c_t2),
            c_t12: self.c_t12.add(&rhs.c_t12),
        }
    }

    pub fn sub(&self, rhs: &SuperFunction) -> SuperFunction {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SuperFunction {
        SuperFunction {
            c_1: self.c_1.neg(),
            c_t1: self.c_t1.neg(),
            c_t2: self.c_t2.neg(),
            c_t12: self.c_t12.neg(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> SuperFunction {
        SuperFunction {
            c_1: self.c_1.scale(s),
            c_t1: self.c_t1.scale(s),
            c_t2: self.c_t2.scale(s),
            c_t12: self.c_t12.scale(s),
        }
    }

    pub fn mul(&self, rhs: &SuperFunction) -> SuperFunction {
        sf_mul(self, rhs)
    }

    /// Largest `x`-exponent appearing in any component; `None` for zero.
    pub fn x_degree(&self) -> Option<u32> {
        [&self.c_1, &self.c_t1, &self.c_t2, &self.c_t12]
            .into_iter()
            .filter_map(|p| p.degree())
            .max()
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, tag) in [
            (&self.c_1, ""),
            (&self.c_t1, "*t1"),
            (&self.c_t2, "*t2"),
            (&self.c_t12, "*t1*t2"),
        ] {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p}){tag}")?;
        }
        Ok(())
    }
}

/// Graded product of superfunctions.
pub fn sf_mul(lhs: &SuperFunction, rhs: &SuperFunction) -> SuperFunction {
    let (a, b, c, d) = (&lhs.c_1, &lhs.c_t1, &lhs.c_t2, &lhs.c_t12);
    let (e, f, g, h) = (&rhs.c_1, &rhs.c_t1, &rhs.c_t2, &rhs.c_t12);
    SuperFunction {
        c_1: a.mul(e),
        c_t1: a.mul(f).add(&b.mul(e)),
        c_t2: a.mul(g).add(&c.mul(e)),
        // t1 t2: from 1*t12, t12*1, t1*t2, and t2*t1 (which reorders with a sign).
        c_t12: a.mul(h).add(&d.mul(e)).add(&b.mul(g)).sub(&c.mul(f)),
    }
}

/// Partial derivative in the even variable `x`.
pub fn partial_x(f: &SuperFunction) -> SuperFunction {
    SuperFunction {
        c_1: f.c_1.derivative(),
        c_t1: f.c_t1.derivative(),
        c_t2: f.c_t2.derivative(),
        c_t12: f.c_t12.derivative(),
    }
}

/// Left partial derivative in the odd variable `t_i` (`i` is 1 or 2).
pub fn partial_theta(f: &SuperFunction, i: u8) -> SuperFunction {
    match i {
        // d/dt1: t1 -> 1, t1 t2 -> t2.
        1 => SuperFunction {
            c_1: f.c_t1.clone(),
            c_t2: f.c_t12.clone(),
            ..Default::default()
        },
        // d/dt2: t2 -> 1, t1 t2 -> -t1 (t1 is moved past the derivation).
        2 => SuperFunction {
            c_1: f.c_t2.clone(),
            c_t1: f.c_t12.neg(),
            ..Default::default()
        },
        _ => panic!("odd variable index must be 1 or 2, got {i}"),
    }
}

/// The odd derivation `eta_i = d/dt_i - t_i d/dx` (`i` is 1 or 2).
///
/// These generate the kernel of the contact form: `eta_i^2 = -d/dx` and
/// `eta_1 eta_2 + eta_2 eta_1 = 0`.
pub fn eta_bar(f: &SuperFunction, i: u8) -> SuperFunction {
    let (a, b, c, d) = (&f.c_1, &f.c_t1, &f.c_t2, &f.c_t12);
    match i {
        1 => SuperFunction {
            c_1: b.clone(),
            c_t1: a.derivative().neg(),
            c_t2: d.clone(),
            c_t12: c.derivative().neg(),
        },
        2 => SuperFunction {
            c_1: c.clone(),
            c_t1: d.neg(),
            c_t2: a.derivative().neg(),
            c_t12: b.derivative(),
        },
        _ => panic!("odd variable index must be 1 or 2, got {i}"),
    }
}

/// Parity of a superfunction: `Even` for `a + d*t1*t2` shapes (including
/// zero), `Odd` for `b*t1 + c*t2` shapes, `None` when both parts are nonzero.
pub fn parity_of(f: &SuperFunction) -> Option<Parity> {
    let even = !f.c_1.is_zero() || !f.c_t12.is_zero();
    let odd = !f.c_t1.is_zero() || !f.c_t2.is_zero();
    match (even, odd) {
        (true, true) => None,
        (false, true) => Some(Parity::Odd),
        _ => Some(Parity::Even),
    }
}
