//! Differential operators between density modules, in normal form.
//!
//! An operator is stored as a sum of terms
//!
//! ```text
//! c(x, t1, t2) . eta_1^{e1} eta_2^{e2} (d/dx)^j ,     e1, e2 in {0, 1},
//! ```
//!
//! keyed by [`OpKey`]. The relations `eta_i^2 = -d/dx` and
//! `eta_1 eta_2 = -eta_2 eta_1` make this spanning set a basis, so equality
//! of normal forms is equality of operators. The term order of a key is
//! `2j + e1 + e2`; keys sort by `(j, e1, e2)`.
//!
//! The module provides application, composition (by normal-ordering the
//! product), the contact-field action on operators viewed as maps between
//! density modules of weights `lambda` and `mu`, Euler-weight inspection,
//! reconstruction of an operator from its action, and the transport
//! isomorphisms between the two-theta operator modules and quadruples of
//! one-theta operator modules.

use crate::contact::{ContactField, Density, Variables};
use crate::poly::Poly;
use crate::scalar::{binomial, Scalar};
use crate::superfield::{eta_bar, parity_of, partial_x, sf_mul, Parity, SuperFunction};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Key of one normal-form term: `eta_1^{eps1} eta_2^{eps2} (d/dx)^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpKey {
    pub eps1: u8,
    pub eps2: u8,
    pub j: u32,
}

impl OpKey {
    pub fn new(eps1: u8, eps2: u8, j: u32) -> Self {
        assert!(eps1 <= 1 && eps2 <= 1, "eta exponents are 0 or 1");
        OpKey { eps1, eps2, j }
    }

    /// Order of the term as a differential operator: `2j + eps1 + eps2`.
    pub fn order(self) -> u32 {
        2 * self.j + u32::from(self.eps1) + u32::from(self.eps2)
    }
}

impl Ord for OpKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.j, self.eps1, self.eps2).cmp(&(other.j, other.eps1, other.eps2))
    }
}

impl PartialOrd for OpKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OpKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps1 == 1 {
            write!(f, "e1*")?;
        }
        if self.eps2 == 1 {
            write!(f, "e2*")?;
        }
        write!(f, "dx^{}", self.j)
    }
}

/// Marks whether a value is read through the parity-reversal functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityShiftTag {
    Plain,
    Shifted,
}

/// A differential operator from weight-`lambda` densities to weight-`mu`
/// densities, in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OpRepr", into = "OpRepr")]
pub struct SuperDiffOp {
    terms: BTreeMap<OpKey, SuperFunction>,
    lambda: Scalar,
    mu: Scalar,
    variables: Variables,
}

#[derive(Serialize, Deserialize, Clone)]
struct TermRepr {
    eps1: u8,
    eps2: u8,
    j: u32,
    coeff: SuperFunction,
}

#[derive(Serialize, Deserialize, Clone)]
struct OpRepr {
    lambda: Scalar,
    mu: Scalar,
    variables: Variables,
    terms: Vec<TermRepr>,
}

impl From<SuperDiffOp> for OpRepr {
    fn from(op: SuperDiffOp) -> OpRepr {
        OpRepr {
            lambda: op.lambda.clone(),
            mu: op.mu.clone(),
            variables: op.variables,
            terms: op
                .terms
                .into_iter()
                .map(|(k, coeff)| TermRepr {
                    eps1: k.eps1,
                    eps2: k.eps2,
                    j: k.j,
                    coeff,
                })
                .collect(),
        }
    }
}

impl TryFrom<OpRepr> for SuperDiffOp {
    type Error = Error;
    fn try_from(r: OpRepr) -> Result<SuperDiffOp> {
        SuperDiffOp::from_terms(
            r.terms
                .into_iter()
                .map(|t| (OpKey::new(t.eps1, t.eps2, t.j), t.coeff)),
            r.lambda,
            r.mu,
            r.variables,
        )
    }
}

impl SuperDiffOp {
    pub fn zero(lambda: Scalar, mu: Scalar, variables: Variables) -> Self {
        SuperDiffOp {
            terms: BTreeMap::new(),
            lambda,
            mu,
            variables,
        }
    }

    /// Builds an operator from `(key, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (OpKey, SuperFunction)>,
        lambda: Scalar,
        mu: Scalar,
        variables: Variables,
    ) -> Result<Self> {
        let mut op = SuperDiffOp::zero(lambda, mu, variables);
        for (key, coeff) in terms {
            op.accumulate(key, &coeff)?;
        }
        Ok(op)
    }

    /// The multiplication operator by `c`.
    pub fn multiplication(
        c: SuperFunction,
        lambda: Scalar,
        mu: Scalar,
        variables: Variables,
    ) -> Result<Self> {
        SuperDiffOp::from_terms([(OpKey::new(0, 0, 0), c)], lambda, mu, variables)
    }

    /// A single term `eta_1^{e1} eta_2^{e2} (d/dx)^j` with unit coefficient.
    pub fn word(key: OpKey, lambda: Scalar, mu: Scalar, variables: Variables) -> Result<Self> {
        SuperDiffOp::from_terms(
            [(key, SuperFunction::one())],
            lambda,
            mu,
            variables,
        )
    }

    fn accumulate(&mut self, key: OpKey, coeff: &SuperFunction) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        if self.variables == Variables::OneTheta {
            if key.eps2 != 0 {
                return Err(Error::VariableMismatch(
                    "eta_2 term in a one-theta operator".into(),
                ));
            }
            self.variables.check(coeff, "operator coefficient")?;
        }
        let slot = self
            .terms
            .entry(key)
            .or_insert_with(SuperFunction::zero);
        *slot = slot.add(coeff);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<OpKey, SuperFunction> {
        &self.terms
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn mu(&self) -> &Scalar {
        &self.mu
    }

    pub fn variables(&self) -> Variables {
        self.variables
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal term order `2j + e1 + e2` (zero for the zero operator).
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|k| k.order()).max().unwrap_or(0)
    }

    /// Maximal `x`-degree over all coefficients.
    pub fn x_degree(&self) -> u32 {
        self.terms
            .values()
            .filter_map(SuperFunction::x_degree)
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, rhs: &SuperDiffOp, what: &str) -> Result<()> {
        if self.lambda != rhs.lambda || self.mu != rhs.mu {
            return Err(Error::WeightMismatch(format!(
                "{what}: ({}, {}) vs ({}, {})",
                self.lambda, self.mu, rhs.lambda, rhs.mu
            )));
        }
        if self.variables != rhs.variables {
            return Err(Error::VariableMismatch(format!(
                "{what}: operators live on different superlines"
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &SuperDiffOp) -> Result<SuperDiffOp> {
        self.check_compatible(rhs, "operator sum")?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(*k, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SuperDiffOp) -> Result<SuperDiffOp> {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> SuperDiffOp {
        if s.is_zero() {
            return SuperDiffOp::zero(self.lambda.clone(), self.mu.clone(), self.variables);
        }
        SuperDiffOp {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.scale(s)))
                .collect(),
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            variables: self.variables,
        }
    }

    /// Parity of the operator as a map (coefficient parity plus the number
    /// of `eta` factors); `None` when terms disagree.
    pub fn parity(&self) -> Option<Parity> {
        let mut result: Option<Parity> = None;
        for (k, c) in &self.terms {
            let pc = parity_of(c)?;
            let word = if (k.eps1 + k.eps2) % 2 == 1 {
                Parity::Odd
            } else {
                Parity::Even
            };
            let p = pc.compose(word);
            match result {
                None => result = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(result.unwrap_or(Parity::Even))
    }

    /// Splits into (even part, odd part) as maps.
    pub fn parity_split(&self) -> (SuperDiffOp, SuperDiffOp) {
        let mut even = SuperDiffOp::zero(self.lambda.clone(), self.mu.clone(), self.variables);
        let mut odd = even.clone();
        for (k, c) in &self.terms {
            let word_odd = (k.eps1 + k.eps2) % 2 == 1;
            // Split the coefficient by parity; combine with the word parity.
            let c_even = SuperFunction {
                c_1: c.c_1.clone(),
                c_t12: c.c_t12.clone(),
                ..Default::default()
            };
            let c_odd = SuperFunction {
                c_t1: c.c_t1.clone(),
                c_t2: c.c_t2.clone(),
                ..Default::default()
            };
            let (to_even, to_odd) = if word_odd {
                (c_odd, c_even)
            } else {
                (c_even, c_odd)
            };
            even.accumulate(*k, &to_even).expect("same variables");
            odd.accumulate(*k, &to_odd).expect("same variables");
        }
        (even, odd)
    }

    /// Changes the weight labels without touching the terms.
    pub fn with_weights(&self, lambda: Scalar, mu: Scalar) -> SuperDiffOp {
        SuperDiffOp {
            terms: self.terms.clone(),
            lambda,
            mu,
            variables: self.variables,
        }
    }

    /// Reinterprets a one-theta operator as a two-theta operator with the
    /// same terms.
    pub fn embed_two_theta(&self) -> SuperDiffOp {
        debug_assert_eq!(self.variables, Variables::OneTheta);
        SuperDiffOp {
            terms: self.terms.clone(),
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            variables: Variables::TwoTheta,
        }
    }

    /// Derivative of every coefficient (the action of `X_1`).
    pub fn coefficient_derivative(&self) -> SuperDiffOp {
        SuperDiffOp {
            terms: self
                .terms
                .iter()
                .filter_map(|(k, c)| {
                    let d = partial_x(c);
                    (!d.is_zero()).then_some((*k, d))
                })
                .collect(),
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            variables: self.variables,
        }
    }
}

impl fmt::Display for SuperDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{k}")?;
        }
        Ok(())
    }
}

/// Applies the word `eta_1^{e1} eta_2^{e2} (d/dx)^j` to a function
/// (rightmost factor acts first).
fn word_apply(key: OpKey, g: &SuperFunction) -> SuperFunction {
    let mut out = g.clone();
    for _ in 0..key.j {
        out = partial_x(&out);
    }
    if key.eps2 == 1 {
        out = eta_bar(&out, 2);
    }
    if key.eps1 == 1 {
        out = eta_bar(&out, 1);
    }
    out
}

/// Applies an operator to a density body.
pub fn op_apply(op: &SuperDiffOp, g: &SuperFunction) -> Result<SuperFunction> {
    op.variables.check(g, "operator argument")?;
    let mut out = SuperFunction::zero();
    for (k, c) in &op.terms {
        out = out.add(&sf_mul(c, &word_apply(*k, g)));
    }
    Ok(out)
}

/// Applies an operator to a density, producing the target-weight density.
pub fn op_apply_density(op: &SuperDiffOp, d: &Density) -> Result<Density> {
    if d.weight != *op.lambda() {
        return Err(Error::WeightMismatch(format!(
            "operator expects weight {} but the density has weight {}",
            op.lambda(),
            d.weight
        )));
    }
    if d.variables != op.variables() {
        return Err(Error::VariableMismatch(
            "operator and density live on different superlines".into(),
        ));
    }
    Density::new(op_apply(op, &d.body)?, op.mu().clone(), op.variables())
}

/// Product of two normal-form words, as `(sign, key)`.
///
/// `d/dx` commutes with both `eta_i`; `eta_2 eta_1 = -eta_1 eta_2`; and
/// `eta_i^2 = -d/dx` folds a repeated factor into the derivative order.
fn word_mul(a: OpKey, b: OpKey) -> (Scalar, OpKey) {
    let mut sign = if a.eps2 == 1 && b.eps1 == 1 {
        Scalar::from_int(-1)
    } else {
        Scalar::ONE
    };
    let mut e1 = a.eps1 + b.eps1;
    let mut e2 = a.eps2 + b.eps2;
    let mut j = a.j + b.j;
    if e1 == 2 {
        e1 = 0;
        j += 1;
        sign = -sign;
    }
    if e2 == 2 {
        e2 = 0;
        j += 1;
        sign = -sign;
    }
    (sign, OpKey::new(e1, e2, j))
}

/// Normal-orders `word . (c .)` for a parity-homogeneous coefficient `c`,
/// returning pairs `(c_k, word_k)` with `word . (c .) = sum_k (c_k .) word_k`.
fn push_word_past_coeff(key: OpKey, c: &SuperFunction) -> Vec<(SuperFunction, OpKey)> {
    debug_assert!(parity_of(c).is_some(), "coefficient must be homogeneous");
    // (d/dx)^j (c .) = sum_r binom(j,r) (c^{(r)} .) (d/dx)^{j-r}.
    let mut acc: Vec<(SuperFunction, OpKey)> = Vec::new();
    let mut deriv = c.clone();
    for r in 0..=key.j {
        if !deriv.is_zero() {
            acc.push((
                deriv.scale(&binomial(key.j, r)),
                OpKey::new(0, 0, key.j - r),
            ));
        }
        deriv = partial_x(&deriv);
    }
    // eta_i (c .) = (eta_i(c) .) + (-1)^{|c|} (c .) eta_i ; eta_2 first
    // because it sits closer to the coefficient in the word.
    for i in [2u8, 1] {
        let eps = if i == 1 { key.eps1 } else { key.eps2 };
        if eps == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * 2);
        for (ck, wk) in acc {
            let sign = parity_of(&ck).expect("homogeneity is preserved").sign();
            let derived = eta_bar(&ck, i);
            if !derived.is_zero() {
                next.push((derived, wk));
            }
            let moved = ck.scale(&sign);
            let new_key = if i == 1 {
                OpKey::new(1, wk.eps2, wk.j)
            } else {
                OpKey::new(wk.eps1, 1, wk.j)
            };
            next.push((moved, new_key));
        }
        acc = next;
    }
    acc
}

/// Composition `outer . inner` (apply `inner` first).
pub fn op_compose(outer: &SuperDiffOp, inner: &SuperDiffOp) -> Result<SuperDiffOp> {
    if outer.variables != inner.variables {
        return Err(Error::VariableMismatch(
            "composition of operators on different superlines".into(),
        ));
    }
    if *outer.lambda() != *inner.mu() {
        return Err(Error::WeightMismatch(format!(
            "composition: outer source weight {} differs from inner target weight {}",
            outer.lambda(),
            inner.mu()
        )));
    }
    let mut out = SuperDiffOp::zero(
        inner.lambda().clone(),
        outer.mu().clone(),
        outer.variables,
    );
    for (ka, ca) in &outer.terms {
        for (kb, cb) in &inner.terms {
            // Split the inner coefficient by parity before pushing the word.
            let (cb_even, cb_odd) = {
                let even = SuperFunction {
                    c_1: cb.c_1.clone(),
                    c_t12: cb.c_t12.clone(),
                    ..Default::default()
                };
                let odd = SuperFunction {
                    c_t1: cb.c_t1.clone(),
                    c_t2: cb.c_t2.clone(),
                    ..Default::default()
                };
                (even, odd)
            };
            for part in [cb_even, cb_odd] {
                if part.is_zero() {
                    continue;
                }
                for (c_mid, k_mid) in push_word_past_coeff(*ka, &part) {
                    let (sign, k_final) = word_mul(k_mid, *kb);
                    let coeff = sf_mul(ca, &c_mid).scale(&sign);
                    out.accumulate(k_final, &coeff)?;
                }
            }
        }
    }
    Ok(out)
}

/// The operator by which a contact field acts on weight-`lambda` densities:
///
/// ```text
/// F (d/dx) - (1/2)(-1)^{|F|} sum_i eta_i(F) eta_i + lambda F' ,
/// ```
///
/// with the `eta_2` summand present only in the two-theta world.
pub fn lie_derivative(
    f: &SuperFunction,
    lambda: &Scalar,
    variables: Variables,
) -> Result<SuperDiffOp> {
    variables.check(f, "contact field generator")?;
    let pf = parity_of(f)
        .ok_or_else(|| Error::MixedParity(format!("contact field generator {f}")))?;
    let half_sign = &Scalar::new(-1, 2) * &pf.sign();
    let mut terms: Vec<(OpKey, SuperFunction)> = vec![
        (OpKey::new(0, 0, 1), f.clone()),
        (OpKey::new(1, 0, 0), eta_bar(f, 1).scale(&half_sign)),
        (OpKey::new(0, 0, 0), partial_x(f).scale(lambda)),
    ];
    if variables == Variables::TwoTheta {
        terms.push((OpKey::new(0, 1, 0), eta_bar(f, 2).scale(&half_sign)));
    }
    SuperDiffOp::from_terms(terms, lambda.clone(), lambda.clone(), variables)
}

/// Action of a contact field on an operator between density modules:
/// the graded commutator through the weighted actions on source and target,
///
/// ```text
/// X . A = L^mu_X . A - (-1)^{|A||X|} A . L^lambda_X .
/// ```
pub fn module_action(field: &ContactField, a: &SuperDiffOp) -> Result<SuperDiffOp> {
    if field.variables() != a.variables() {
        return Err(Error::VariableMismatch(
            "field and operator live on different superlines".into(),
        ));
    }
    let l_target = lie_derivative(field.generator(), a.mu(), a.variables())?;
    let l_source = lie_derivative(field.generator(), a.lambda(), a.variables())?;
    let mut out = SuperDiffOp::zero(a.lambda().clone(), a.mu().clone(), a.variables());
    let (a_even, a_odd) = a.parity_split();
    for (part, part_parity) in [(a_even, Parity::Even), (a_odd, Parity::Odd)] {
        if part.is_zero() {
            continue;
        }
        let sign = if part_parity.is_odd() && field.parity().is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let left = op_compose(&l_target, &part)?;
        let right = op_compose(&part, &l_source)?.scale(&sign);
        out = out.add(&left.sub(&right)?)?;
    }
    Ok(out)
}

/// Euler weight of one coefficient monomial `x^d t1^a t2^b` under key `k`,
/// for an operator between weights `lambda` and `mu`:
/// `(mu - lambda) + d + (a + b - e1 - e2)/2 - j`.
pub(crate) fn term_weight(
    lambda: &Scalar,
    mu: &Scalar,
    key: OpKey,
    xdeg: u32,
    t1: bool,
    t2: bool,
) -> Scalar {
    let theta = i64::from(t1) + i64::from(t2) - i64::from(key.eps1) - i64::from(key.eps2);
    &(mu - lambda)
        + &(&Scalar::from_int(xdeg as i64)
            + &(&Scalar::new(theta, 2) - &Scalar::from_int(key.j as i64)))
}

/// Euler weight of an operator with `x`-independent coefficients.
///
/// Errors with [`Error::XDependence`] when a coefficient involves `x`, and
/// with [`Error::WeightInhomogeneous`] when the terms are not a common
/// eigenvector of the action of `X_x` (including the zero operator).
pub fn weight_of(op: &SuperDiffOp) -> Result<Scalar> {
    let mut result: Option<Scalar> = None;
    for (k, c) in op.terms() {
        let comps: [(&Poly, bool, bool); 4] = [
            (&c.c_1, false, false),
            (&c.c_t1, true, false),
            (&c.c_t2, false, true),
            (&c.c_t12, true, true),
        ];
        for (poly, t1, t2) in comps {
            if poly.is_zero() {
                continue;
            }
            if poly.degree() != Some(0) {
                return Err(Error::XDependence(format!(
                    "coefficient {c} of {k} involves x"
                )));
            }
            let w = term_weight(op.lambda(), op.mu(), *k, 0, t1, t2);
            match &result {
                None => result = Some(w),
                Some(prev) if *prev != w => {
                    return Err(Error::WeightInhomogeneous(format!(
                        "terms of weight {prev} and {w} coexist"
                    )))
                }
                _ => {}
            }
        }
    }
    result.ok_or_else(|| {
        Error::WeightInhomogeneous("the zero operator has every weight".into())
    })
}

/// Reconstructs the normal form of a linear map known to be a differential
/// operator with `(d/dx)`-order at most `max_j` and polynomial coefficients.
///
/// The probes `x^j/j! . M` over the four theta monomials `M` determine the
/// coefficients level by level. Errors with [`Error::ParameterRange`] when
/// the reconstruction fails to reproduce the action one level beyond
/// `max_j`, which happens exactly when the bound is too small.
pub fn from_action(
    action: &mut dyn FnMut(&SuperFunction) -> Result<SuperFunction>,
    lambda: Scalar,
    mu: Scalar,
    variables: Variables,
    max_j: u32,
) -> Result<SuperDiffOp> {
    let thetas: &[(bool, bool)] = match variables {
        Variables::OneTheta => &[(false, false), (true, false)],
        Variables::TwoTheta => &[(false, false), (true, false), (false, true), (true, true)],
    };
    let mut op = SuperDiffOp::zero(lambda, mu, variables);
    for level in 0..=max_j {
        // x^level / level!
        let factorial_inv = (1..=level as i64)
            .fold(Scalar::ONE, |acc, n| &acc * &Scalar::from_int(n))
            .recip();
        for &(t1, t2) in thetas {
            let probe = SuperFunction::monomial(factorial_inv.clone(), level, t1, t2);
            let residual = action(&probe)?.sub(&op_apply(&op, &probe)?);
            if residual.is_zero() {
                continue;
            }
            let (eps1, eps2) = (u8::from(t1), u8::from(t2));
            // Probing with t1 t2 picks up the eta_1 eta_2 term with sign -1.
            let coeff = if t1 && t2 { residual.neg() } else { residual };
            op.accumulate(OpKey::new(eps1, eps2, level), &coeff)?;
        }
    }
    // One level beyond the bound must now be reproduced exactly.
    for &(t1, t2) in thetas {
        let probe = SuperFunction::monomial(Scalar::ONE, max_j + 1, t1, t2);
        if action(&probe)? != op_apply(&op, &probe)? {
            return Err(Error::ParameterRange(format!(
                "action is not an operator of derivative order <= {max_j}"
            )));
        }
    }
    Ok(op)
}

/// Splits a two-theta density into its one-theta components:
/// `F = F1 + F2 t2` becomes the weight-`lambda` density `F1` and the
/// weight-`lambda + 1/2` density `F2`, the second read through the parity
/// reversal. Both transform component-wise under every `t2`-free contact
/// field, with no extra signs.
pub fn phi_split(d: &Density) -> Result<(Density, Density)> {
    if d.variables != Variables::TwoTheta {
        return Err(Error::VariableMismatch(
            "only a two-theta density splits".into(),
        ));
    }
    let (f1, f2) = d.body.theta2_components();
    Ok((
        Density::new(f1, d.weight.clone(), Variables::OneTheta)?,
        Density::new(f2, &d.weight + &Scalar::new(1, 2), Variables::OneTheta)?,
    ))
}

/// Inverse of [`phi_split`]: reassembles `F1 + F2 t2` at the weight of the
/// first component.
pub fn phi_join(plain: &Density, shifted: &Density) -> Result<Density> {
    if plain.variables != Variables::OneTheta || shifted.variables != Variables::OneTheta {
        return Err(Error::VariableMismatch(
            "phi_join expects one-theta densities".into(),
        ));
    }
    if shifted.weight != &plain.weight + &Scalar::new(1, 2) {
        return Err(Error::WeightMismatch(format!(
            "components of weights {} and {} do not assemble",
            plain.weight, shifted.weight
        )));
    }
    Density::new(
        SuperFunction::from_theta2_components(&plain.body, &shifted.body),
        plain.weight.clone(),
        Variables::TwoTheta,
    )
}

/// The sign flip of all `t1`-terms, `1 - 2 t1 eta_1`, as an operator.
fn op_flip(weight: Scalar, variables: Variables) -> SuperDiffOp {
    SuperDiffOp::from_terms(
        [
            (OpKey::new(0, 0, 0), SuperFunction::one()),
            (
                OpKey::new(1, 0, 0),
                SuperFunction::theta1().scale(&Scalar::from_int(-2)),
            ),
        ],
        weight.clone(),
        weight,
        variables,
    )
    .expect("valid in both worlds")
}

/// `1 - t2 eta_2`: projection onto the `t2`-free component.
fn op_project_first(weight: Scalar) -> SuperDiffOp {
    SuperDiffOp::from_terms(
        [
            (OpKey::new(0, 0, 0), SuperFunction::one()),
            (OpKey::new(0, 1, 0), SuperFunction::theta2().neg()),
        ],
        weight.clone(),
        weight,
        Variables::TwoTheta,
    )
    .expect("two-theta terms")
}

/// Extraction of the second component `F -> F2`, with target weight raised
/// by one half: the flip composed with `d/dt2 = eta_2 + t2 d/dx`.
fn op_extract_second(lambda: &Scalar) -> SuperDiffOp {
    let d2 = SuperDiffOp::from_terms(
        [
            (OpKey::new(0, 1, 0), SuperFunction::one()),
            (OpKey::new(0, 0, 1), SuperFunction::theta2()),
        ],
        lambda.clone(),
        lambda + &Scalar::new(1, 2),
        Variables::TwoTheta,
    )
    .expect("two-theta terms");
    let flip = op_flip(lambda + &Scalar::new(1, 2), Variables::TwoTheta);
    op_compose(&flip, &d2).expect("weights agree")
}

/// Embedding of a `t2`-free value as a second component `G -> G t2`, with
/// target weight lowered by one half: multiplication by `t2` composed with
/// the flip.
fn op_embed_second(mu_shifted: &Scalar) -> SuperDiffOp {
    let mu = mu_shifted - &Scalar::new(1, 2);
    let mult = SuperDiffOp::multiplication(
        SuperFunction::theta2(),
        mu_shifted.clone(),
        mu,
        Variables::TwoTheta,
    )
    .expect("two-theta term");
    let flip = op_flip(mu_shifted.clone(), Variables::TwoTheta);
    op_compose(&mult, &flip).expect("weights agree")
}

/// Assembles a two-theta operator from its four one-theta blocks.
///
/// For source weight `lambda` and target weight `mu`, the blocks act
/// between the split components as
///
/// * `a`: weights `(lambda, mu)`, first component to first;
/// * `b`: weights `(lambda + 1/2, mu + 1/2)`, second to second;
/// * `c`: weights `(lambda, mu + 1/2)`, first to second;
/// * `d`: weights `(lambda + 1/2, mu)`, second to first.
pub fn psi_transport(
    a: &SuperDiffOp,
    b: &SuperDiffOp,
    c: &SuperDiffOp,
    d: &SuperDiffOp,
) -> Result<SuperDiffOp> {
    for (name, op) in [("a", a), ("b", b), ("c", c), ("d", d)] {
        if op.variables() != Variables::OneTheta {
            return Err(Error::VariableMismatch(format!(
                "block {name} must be a one-theta operator"
            )));
        }
    }
    let lambda = a.lambda().clone();
    let mu = a.mu().clone();
    let half = Scalar::new(1, 2);
    let expect = [
        ("b", b, &lambda + &half, &mu + &half),
        ("c", c, lambda.clone(), &mu + &half),
        ("d", d, &lambda + &half, mu.clone()),
    ];
    for (name, op, want_l, want_m) in expect {
        if *op.lambda() != want_l || *op.mu() != want_m {
            return Err(Error::WeightMismatch(format!(
                "block {name} has weights ({}, {}), expected ({want_l}, {want_m})",
                op.lambda(),
                op.mu()
            )));
        }
    }

    let project = op_project_first(lambda.clone());
    let extract = op_extract_second(&lambda);

    // First component to first: act after projecting.
    let lift_a = op_compose(&a.embed_two_theta(), &project)?;
    // Second to second: extract, act, re-embed.
    let lift_b = op_compose(
        &op_embed_second(&(&mu + &half)),
        &op_compose(&b.embed_two_theta(), &extract)?,
    )?;
    // First to second: project, act, re-embed.
    let lift_c = op_compose(
        &op_embed_second(&(&mu + &half)),
        &op_compose(&c.embed_two_theta(), &project)?,
    )?;
    // Second to first: extract, act.
    let lift_d = op_compose(&d.embed_two_theta(), &extract)?;

    lift_a.add(&lift_b)?.add(&lift_c)?.add(&lift_d)
}

/// Inverse of [`psi_transport`]: recovers the four one-theta blocks of a
/// two-theta operator by probing split components.
pub fn psi_components(
    op: &SuperDiffOp,
) -> Result<(SuperDiffOp, SuperDiffOp, SuperDiffOp, SuperDiffOp)> {
    if op.variables() != Variables::TwoTheta {
        return Err(Error::VariableMismatch(
            "only a two-theta operator has blocks".into(),
        ));
    }
    let lambda = op.lambda().clone();
    let mu = op.mu().clone();
    let half = Scalar::new(1, 2);
    let max_j = op.terms().keys().map(|k| k.j).max().unwrap_or(0) + 2;
    let theta2 = SuperFunction::theta2();

    let run = |use_t2_probe: bool, second_out: bool, l: Scalar, m: Scalar| -> Result<SuperDiffOp> {
        from_action(
            &mut |h: &SuperFunction| {
                let input = if use_t2_probe { sf_mul(h, &theta2) } else { h.clone() };
                let image = op_apply(op, &input)?;
                let (first, second) = image.theta2_components();
                Ok(if second_out { second } else { first })
            },
            l,
            m,
            Variables::OneTheta,
            max_j,
        )
    };

    let block_a = run(false, false, lambda.clone(), mu.clone())?;
    let block_b = run(true, true, &lambda + &half, &mu + &half)?;
    let block_c = run(false, true, lambda.clone(), &mu + &half)?;
    let block_d = run(true, false, &lambda + &half, mu.clone())?;
    Ok((block_a, block_b, block_c, block_d))
}

/// Conjugation of a one-theta operator by the parity involution of its
/// world (the sign flip of all `t1`-terms). This is how an operator reads
/// after both its source and target are parity-reversed.
pub fn pi_twist(op: &SuperDiffOp) -> Result<SuperDiffOp> {
    if op.variables() != Variables::OneTheta {
        return Err(Error::VariableMismatch(
            "the parity twist acts on one-theta operators".into(),
        ));
    }
    let flip_src = op_flip(op.lambda().clone(), Variables::OneTheta);
    let flip_dst = op_flip(op.mu().clone(), Variables::OneTheta);
    op_compose(&flip_dst, &op_compose(op, &flip_src)?)
}
