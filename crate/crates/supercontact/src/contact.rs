//! Contact vector fields and weighted densities.
//!
//! Every superfunction `F` determines a contact vector field
//!
//! ```text
//! X_F = F d/dx - (1/2)(-1)^{|F|} sum_i eta_i(F) eta_i ,
//! ```
//!
//! and these close under the commutator: `[X_F, X_G] = X_{{F,G}}` with the
//! contact bracket
//!
//! ```text
//! {F,G} = F G' - F' G - (1/2)(-1)^{|F|} sum_i eta_i(F) eta_i(G) .
//! ```
//!
//! Functions with coefficients of `x`-degree at most two form a finite
//! dimensional subalgebra; its distinguished bases are enumerated by
//! [`Algebra`] and [`GeneratorId`]. A weight parameter `lambda` deforms the
//! action on functions to the action on densities of weight `lambda`:
//! `F . G = X_F(G) + lambda F' G`.
//!
//! The same formulas, restricted to functions free of the second odd
//! variable, give the calculus of the superline with a single odd variable;
//! [`Variables`] records which world a value lives in.

use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::superfield::{eta_bar, parity_of, partial_x, sf_mul, Parity, SuperFunction};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which superline a value lives on: one odd variable or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variables {
    /// Functions of `(x, t1)` only.
    OneTheta,
    /// Functions of `(x, t1, t2)`.
    TwoTheta,
}

impl Variables {
    /// Error unless `f` is expressible in this variable set.
    pub fn check(&self, f: &SuperFunction, what: &str) -> Result<()> {
        if *self == Variables::OneTheta && !f.is_theta2_free() {
            return Err(Error::VariableMismatch(format!(
                "{what} involves t2 but the one-theta world was requested"
            )));
        }
        Ok(())
    }
}

/// The eight contact fields with polynomial generators of degree at most two.
///
/// The enum order is the canonical tie-breaking order used throughout.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum GeneratorId {
    /// `X_1`
    #[serde(rename = "1")]
    X1,
    /// `X_x`
    #[serde(rename = "x")]
    Xx,
    /// `X_{x^2}`
    #[serde(rename = "x^2")]
    Xx2,
    /// `X_{t1}`
    #[serde(rename = "t1")]
    Xt1,
    /// `X_{t2}`
    #[serde(rename = "t2")]
    Xt2,
    /// `X_{x t1}`
    #[serde(rename = "x*t1")]
    Xxt1,
    /// `X_{x t2}`
    #[serde(rename = "x*t2")]
    Xxt2,
    /// `X_{t1 t2}`
    #[serde(rename = "t1*t2")]
    Xt1t2,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 8] = [
        GeneratorId::X1,
        GeneratorId::Xx,
        GeneratorId::Xx2,
        GeneratorId::Xt1,
        GeneratorId::Xt2,
        GeneratorId::Xxt1,
        GeneratorId::Xxt2,
        GeneratorId::Xt1t2,
    ];

    /// The generating superfunction.
    pub fn function(self) -> SuperFunction {
        let m = SuperFunction::monomial;
        match self {
            GeneratorId::X1 => SuperFunction::one(),
            GeneratorId::Xx => SuperFunction::x(),
            GeneratorId::Xx2 => m(Scalar::ONE, 2, false, false),
            GeneratorId::Xt1 => SuperFunction::theta1(),
            GeneratorId::Xt2 => SuperFunction::theta2(),
            GeneratorId::Xxt1 => m(Scalar::ONE, 1, true, false),
            GeneratorId::Xxt2 => m(Scalar::ONE, 1, false, true),
            GeneratorId::Xt1t2 => SuperFunction::theta12(),
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            GeneratorId::X1 | GeneratorId::Xx | GeneratorId::Xx2 | GeneratorId::Xt1t2 => {
                Parity::Even
            }
            _ => Parity::Odd,
        }
    }

    /// Eigenvalue of the bracket with `X_x` (the Euler weight).
    pub fn weight(self) -> Scalar {
        match self {
            GeneratorId::X1 => Scalar::from_int(-1),
            GeneratorId::Xx | GeneratorId::Xt1t2 => Scalar::ZERO,
            GeneratorId::Xx2 => Scalar::ONE,
            GeneratorId::Xt1 | GeneratorId::Xt2 => Scalar::new(-1, 2),
            GeneratorId::Xxt1 | GeneratorId::Xxt2 => Scalar::new(1, 2),
        }
    }

    /// True when the generating function is free of `t2`.
    pub fn is_theta2_free(self) -> bool {
        !matches!(
            self,
            GeneratorId::Xt2 | GeneratorId::Xxt2 | GeneratorId::Xt1t2
        )
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GeneratorId::X1 => "X_1",
            GeneratorId::Xx => "X_x",
            GeneratorId::Xx2 => "X_x^2",
            GeneratorId::Xt1 => "X_t1",
            GeneratorId::Xt2 => "X_t2",
            GeneratorId::Xxt1 => "X_xt1",
            GeneratorId::Xxt2 => "X_xt2",
            GeneratorId::Xt1t2 => "X_t1t2",
        };
        write!(f, "{name}")
    }
}

/// Distinguished spans of low-degree contact fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algebra {
    /// All eight generators: the maximal finite subalgebra in two odd
    /// variables.
    Osp22,
    /// The five `t2`-free generators.
    Osp12,
    /// The three even generators `1, x, x^2`.
    Sl2,
    /// The complement of [`Algebra::Osp12`] inside [`Algebra::Osp22`]:
    /// `t2, x t2, t1 t2`. Not a subalgebra.
    PiH,
}

/// Basis of the span, in presentation order.
pub fn basis_of(a: Algebra) -> Vec<GeneratorId> {
    use GeneratorId::*;
    match a {
        Algebra::Osp22 => vec![X1, Xx, Xx2, Xxt1, Xxt2, Xt1, Xt2, Xt1t2],
        Algebra::Osp12 => vec![X1, Xx, Xx2, Xxt1, Xt1],
        Algebra::Sl2 => vec![X1, Xx, Xx2],
        Algebra::PiH => vec![Xt2, Xxt2, Xt1t2],
    }
}

/// Abstract basis vectors of the coefficient space used by the invariant
/// bilinear classifier: the span of `1`, `x`, and `t1` in the one-theta
/// world, realized inside [`Algebra::PiH`] by pairing with `t2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HBasisElement {
    One,
    X,
    Theta1,
}

impl HBasisElement {
    /// The one-theta superfunction this element stands for.
    pub fn body(self) -> SuperFunction {
        match self {
            HBasisElement::One => SuperFunction::one(),
            HBasisElement::X => SuperFunction::x(),
            HBasisElement::Theta1 => SuperFunction::theta1(),
        }
    }

    /// The corresponding generator of [`Algebra::PiH`] (body times `t2`).
    pub fn realization(self) -> GeneratorId {
        match self {
            HBasisElement::One => GeneratorId::Xt2,
            HBasisElement::X => GeneratorId::Xxt2,
            HBasisElement::Theta1 => GeneratorId::Xt1t2,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            HBasisElement::Theta1 => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

/// Sub-bases of the classifier coefficient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HKind {
    /// `{1, x}` (even part).
    H0,
    /// `{t1}` (odd part).
    H1,
    /// `{1, x, t1}`.
    Full,
}

impl HKind {
    pub fn elements(self) -> Vec<HBasisElement> {
        match self {
            HKind::H0 => vec![HBasisElement::One, HBasisElement::X],
            HKind::H1 => vec![HBasisElement::Theta1],
            HKind::Full => vec![
                HBasisElement::One,
                HBasisElement::X,
                HBasisElement::Theta1,
            ],
        }
    }
}

/// A contact vector field, named by its homogeneous generating function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactField {
    generator: SuperFunction,
    parity: Parity,
    variables: Variables,
}

impl ContactField {
    pub fn new(generator: SuperFunction, variables: Variables) -> Result<Self> {
        let parity = parity_of(&generator).ok_or_else(|| {
            Error::MixedParity(format!("contact field generator {generator}"))
        })?;
        variables.check(&generator, "contact field generator")?;
        Ok(ContactField {
            generator,
            parity,
            variables,
        })
    }

    pub fn from_id(id: GeneratorId, variables: Variables) -> Result<Self> {
        ContactField::new(id.function(), variables)
    }

    pub fn generator(&self) -> &SuperFunction {
        &self.generator
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn variables(&self) -> Variables {
        self.variables
    }

    /// Applies the field to a function (the weight-zero action).
    pub fn apply(&self, t: &SuperFunction) -> Result<SuperFunction> {
        self.variables.check(t, "field argument")?;
        field_apply(&self.generator, t)
    }
}

/// `X_F(T)` for homogeneous `F`.
///
/// For `t2`-free `F` and `T` the second summand of the `eta` sum vanishes
/// identically, so the same formula computes the one-theta field action.
pub fn field_apply(f: &SuperFunction, t: &SuperFunction) -> Result<SuperFunction> {
    let pf = parity_of(f)
        .ok_or_else(|| Error::MixedParity(format!("contact field generator {f}")))?;
    let half_sign = &Scalar::new(-1, 2) * &pf.sign();
    let mut out = sf_mul(f, &partial_x(t));
    for i in [1u8, 2] {
        out = out.add(&sf_mul(&eta_bar(f, i), &eta_bar(t, i)).scale(&half_sign));
    }
    Ok(out)
}

/// The contact bracket `{F,G}` for homogeneous `F`.
pub fn contact_bracket(f: &SuperFunction, g: &SuperFunction) -> Result<SuperFunction> {
    // {F,G} = X_F(G) - F' G.
    Ok(field_apply(f, g)?.sub(&sf_mul(&partial_x(f), g)))
}

/// Action of `X_F` on a weight-`lambda` density body:
/// `X_F(G) + lambda F' G`.
pub fn weighted_action(
    f: &SuperFunction,
    lambda: &Scalar,
    g: &SuperFunction,
) -> Result<SuperFunction> {
    Ok(field_apply(f, g)?.add(&sf_mul(&partial_x(f), g).scale(lambda)))
}

/// A density: a function times the formal weight-`lambda` power of the
/// contact volume form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Density {
    pub body: SuperFunction,
    pub weight: Scalar,
    pub variables: Variables,
}

impl Density {
    pub fn new(body: SuperFunction, weight: Scalar, variables: Variables) -> Result<Self> {
        variables.check(&body, "density body")?;
        Ok(Density {
            body,
            weight,
            variables,
        })
    }

    /// The action of a contact field, staying at the same weight.
    pub fn apply_field(&self, field: &ContactField) -> Result<Density> {
        if field.variables() != self.variables {
            return Err(Error::VariableMismatch(
                "field and density live on different superlines".into(),
            ));
        }
        Ok(Density {
            body: weighted_action(field.generator(), &self.weight, &self.body)?,
            weight: self.weight.clone(),
            variables: self.variables,
        })
    }
}

/// Expands a superfunction in the monomial basis named by `basis`.
///
/// Fails with [`Error::SpanEscape`] when any monomial of `f` is not the
/// generating function of a listed basis element.
pub fn expand_in_basis(
    f: &SuperFunction,
    basis: &[GeneratorId],
) -> Result<Vec<(GeneratorId, Scalar)>> {
    // Monomial shape -> basis id, for the listed ids only.
    let mut shape_to_id: BTreeMap<(u32, bool, bool), GeneratorId> = BTreeMap::new();
    for id in basis {
        let shape = match id {
            GeneratorId::X1 => (0, false, false),
            GeneratorId::Xx => (1, false, false),
            GeneratorId::Xx2 => (2, false, false),
            GeneratorId::Xt1 => (0, true, false),
            GeneratorId::Xt2 => (0, false, true),
            GeneratorId::Xxt1 => (1, true, false),
            GeneratorId::Xxt2 => (1, false, true),
            GeneratorId::Xt1t2 => (0, true, true),
        };
        shape_to_id.insert(shape, *id);
    }
    let mut out: BTreeMap<GeneratorId, Scalar> = BTreeMap::new();
    let comps: [(&Poly, bool, bool); 4] = [
        (&f.c_1, false, false),
        (&f.c_t1, true, false),
        (&f.c_t2, false, true),
        (&f.c_t12, true, true),
    ];
    for (poly, t1, t2) in comps {
        for (e, c) in poly.iter() {
            match shape_to_id.get(&(e, t1, t2)) {
                Some(id) => {
                    *out.entry(*id).or_default() += c;
                }
                None => {
                    return Err(Error::SpanEscape(format!(
                        "monomial x^{e} t1^{} t2^{} of {f} is outside the basis",
                        t1 as u8, t2 as u8
                    )))
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out.into_iter().collect())
}

/// All brackets of basis pairs, expanded in the same basis.
///
/// Keys run over ordered pairs (diagonal included: odd generators have
/// nonvanishing self-brackets). Fails with [`Error::SpanEscape`] when the
/// span is not closed under the bracket, as happens for [`Algebra::PiH`].
pub type StructureConstants = BTreeMap<(GeneratorId, GeneratorId), Vec<(GeneratorId, Scalar)>>;

pub fn structure_constants(a: Algebra) -> Result<StructureConstants> {
    let basis = basis_of(a);
    let mut out = StructureConstants::new();
    for &g in &basis {
        for &h in &basis {
            let bracket = contact_bracket(&g.function(), &h.function())?;
            out.insert((g, h), expand_in_basis(&bracket, &basis)?);
        }
    }
    Ok(out)
}
