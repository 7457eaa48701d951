//! Classification of invariant bilinear differential operators on the
//! one-theta superline.
//!
//! A bilinear operator here eats a pair `(H, F)` — `H` from a fixed
//! finite-dimensional coefficient space, `F` a weighted density — and
//! returns a density of a shifted weight.  Three coefficient spaces are
//! supported, named by [`HKind`]:
//!
//! * [`HKind::H0`]: the span of `{1, x}`, transforming through weight
//!   `-1/2`.  Together with [`Algebra::Sl2`] this is a purely classical
//!   (theta-free) one-variable problem.
//! * [`HKind::H1`]: a one-dimensional trivial module, realized by the
//!   constant function at weight `0`.  Also classical, and only
//!   meaningful over [`Algebra::Sl2`].
//! * [`HKind::Full`]: the span of `{1, x, t1}` inside the weight `-1/2`
//!   one-theta densities.  This is the genuinely super problem, posed
//!   over [`Algebra::Sl2`] or [`Algebra::Osp12`].
//!
//! The target weight is `lambda + k - 1/2` under [`MuRule::HalfStep`]
//! and `lambda + k` under [`MuRule::IntegerStep`]; the two rules carry
//! even and odd operators respectively.  Solutions are returned as
//! [`BilinearOp`] values whose terms pair a derivative word on the
//! `H`-slot with an operator monomial on the `F`-slot.
//!
//! The linear system is exact and exhaustive.  Invariance under the
//! constant field forces all slot operators to have coefficients of
//! `x`-degree at most one (the value on `x` is an `x`-antiderivative of
//! the value on `1`), and invariance under the Euler field pins the
//! grading weight of each slot operator to the grading weight of its
//! coefficient-space element.  Both constraints leave finitely many
//! monomial candidates per slot, all of which are enumerated below; the
//! remaining generators contribute the honest equations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cohomology::op_entries;
use crate::contact::{basis_of, Algebra, ContactField, HBasisElement, HKind, Variables};
use crate::diffop::{lie_derivative, module_action, op_apply, OpKey, SuperDiffOp};
use crate::linalg::{coeff_at, solve_with_certificate, sparse_from_entries, RrefSystem};
use crate::scalar::Scalar;
use crate::superfield::{eta_bar, parity_of, partial_x, Parity, SuperFunction};
use crate::{Error, Result};

/// How the target weight is derived from the source weight and the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuRule {
    /// Target weight `lambda + k - 1/2`; carries even operators.
    HalfStep,
    /// Target weight `lambda + k`; carries odd operators.
    IntegerStep,
}

impl MuRule {
    /// The target weight for source weight `lambda` and order `k`.
    pub fn target_weight(self, lambda: &Scalar, k: u32) -> Scalar {
        match self {
            MuRule::HalfStep => lambda + &Scalar::new(2 * i64::from(k) - 1, 2),
            MuRule::IntegerStep => lambda + &Scalar::from_int(i64::from(k)),
        }
    }

    /// The parity of the bilinear maps classified under this rule.
    pub fn map_parity(self) -> Parity {
        match self {
            MuRule::HalfStep => Parity::Even,
            MuRule::IntegerStep => Parity::Odd,
        }
    }
}

/// A derivative word applied to the coefficient slot: `eta_bar_1^eta (d/dx)^dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HWord {
    pub eta: u8,
    pub dx: u32,
}

/// An operator monomial applied to the density slot:
/// `(t1 .)^theta eta_bar_1^eta (d/dx)^dx`, rightmost factor first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FWord {
    pub theta: bool,
    pub eta: u8,
    pub dx: u32,
}

impl FWord {
    fn parity(self) -> Parity {
        if (u8::from(self.theta) + self.eta) % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// One term of a bilinear operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearTerm {
    pub h_word: HWord,
    pub f_word: FWord,
    pub coeff: Scalar,
}

/// A bilinear differential operator from a coefficient space tensor a
/// weighted density space into a shifted density space.
///
/// A term `(W_h, W_f) -> c` contributes
///
/// ```text
/// c * (-1)^{|W_f| |H|} (W_h H) (W_f F)
/// ```
///
/// on parity-homogeneous `H`: the sign is the usual cost of carrying the
/// density-slot word past the coefficient argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearOp {
    source: HKind,
    lambda: Scalar,
    mu: Scalar,
    parity: Parity,
    terms: Vec<BilinearTerm>,
}

impl BilinearOp {
    fn from_term_map(
        source: HKind,
        lambda: Scalar,
        mu: Scalar,
        parity: Parity,
        map: BTreeMap<(HWord, FWord), Scalar>,
    ) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((h_word, f_word), coeff)| BilinearTerm { h_word, f_word, coeff })
            .collect();
        BilinearOp { source, lambda, mu, parity, terms }
    }

    pub fn source(&self) -> HKind {
        self.source
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn mu(&self) -> &Scalar {
        &self.mu
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn terms(&self) -> &[BilinearTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn term_map(&self) -> BTreeMap<(HWord, FWord), Scalar> {
        self.terms
            .iter()
            .map(|t| ((t.h_word, t.f_word), t.coeff.clone()))
            .collect()
    }

    /// Evaluates the operator on a parity-homogeneous coefficient `h` and
    /// a density body `f`, both one-theta superfunctions.
    pub fn apply(&self, h: &SuperFunction, f: &SuperFunction) -> Result<SuperFunction> {
        Variables::OneTheta.check(h, "bilinear coefficient argument")?;
        Variables::OneTheta.check(f, "bilinear density argument")?;
        let hp = parity_of(h).ok_or_else(|| {
            Error::MixedParity("bilinear coefficient argument".into())
        })?;
        let mut out = SuperFunction::zero();
        for t in &self.terms {
            let mut wh = h.clone();
            for _ in 0..t.h_word.dx {
                wh = partial_x(&wh);
            }
            if t.h_word.eta == 1 {
                wh = eta_bar(&wh, 1);
            }
            if wh.is_zero() {
                continue;
            }
            let mut wf = f.clone();
            for _ in 0..t.f_word.dx {
                wf = partial_x(&wf);
            }
            if t.f_word.eta == 1 {
                wf = eta_bar(&wf, 1);
            }
            if t.f_word.theta {
                wf = SuperFunction::theta1().mul(&wf);
            }
            let mut c = t.coeff.clone();
            if t.f_word.parity().is_odd() && hp.is_odd() {
                c = -&c;
            }
            out = out.add(&wh.mul(&wf).scale(&c));
        }
        Ok(out)
    }
}

/// The outcome of one classification run: the exact solution basis of the
/// invariance system, together with the closed-form obstruction value that
/// is expected to vanish exactly when the basis is nonempty.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub algebra: Algebra,
    pub source: HKind,
    pub rule: MuRule,
    pub lambda: Scalar,
    pub mu: Scalar,
    pub k: u32,
    pub solution_basis: Vec<BilinearOp>,
    pub constraint_evaluation: Option<Scalar>,
}

impl ClassificationResult {
    pub fn dimension(&self) -> usize {
        self.solution_basis.len()
    }
}

/// One cell of a constraint-variety scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietyCell {
    pub algebra: Algebra,
    pub source: HKind,
    pub rule: MuRule,
    pub lambda: Scalar,
    pub mu: Scalar,
    pub k: u32,
    pub dimension: usize,
    pub constraint_evaluation: Scalar,
    pub matches_constraint: bool,
}

/// The obstruction polynomial whose zero set carries the invariant
/// operators, evaluated at `(lambda, k)`.  Returns `None` for the
/// combinations without a distinguished closed form (the full coefficient
/// space over the even subalgebra alone).
pub fn constraint_polynomial(
    algebra: Algebra,
    source: HKind,
    rule: MuRule,
    lambda: &Scalar,
    k: u32,
) -> Option<Scalar> {
    let kk = Scalar::from_int(i64::from(k));
    let two_l = &Scalar::from_int(2) * lambda;
    let lin = |shift: i64| -> Scalar { &(&two_l + &kk) + &Scalar::from_int(shift) };
    match (algebra, source, rule) {
        (Algebra::Sl2, HKind::H0, MuRule::HalfStep) => Some(
            &(&kk * &(&kk - &Scalar::ONE)) * &(&lin(-1) * &lin(-2)),
        ),
        (Algebra::Sl2, HKind::H1, MuRule::IntegerStep) => Some(&kk * &lin(-1)),
        (Algebra::Osp12, HKind::Full, MuRule::HalfStep) => {
            Some(&(&kk * &(&kk - &Scalar::ONE)) * &lin(-1))
        }
        (Algebra::Osp12, HKind::Full, MuRule::IntegerStep) => {
            Some(&kk * &(&lin(0) * &lin(-1)))
        }
        _ => None,
    }
}

/// The distinguished solution at a nonempty cell, in closed form.
pub fn closed_form(
    algebra: Algebra,
    source: HKind,
    rule: MuRule,
    lambda: &Scalar,
    k: u32,
) -> Result<BilinearOp> {
    let rule = resolve_rule(algebra, source, Some(rule))?;
    if algebra == Algebra::Sl2 && source == HKind::Full {
        return Err(Error::ParameterRange(
            "the full coefficient space over the even subalgebra has no distinguished closed form"
                .into(),
        ));
    }
    let mu = rule.target_weight(lambda, k);
    let classical = algebra == Algebra::Sl2;
    let parity = if classical { Parity::Even } else { rule.map_parity() };
    let kk = Scalar::from_int(i64::from(k));
    let two_l = &Scalar::from_int(2) * lambda;
    let lin = |shift: i64| -> Scalar { &(&two_l + &kk) + &Scalar::from_int(shift) };
    let mut map: BTreeMap<(HWord, FWord), Scalar> = BTreeMap::new();
    let mut put = |he: u8, hd: u32, ft: bool, fe: u8, fd: u32, c: Scalar| {
        if !c.is_zero() {
            map.insert(
                (HWord { eta: he, dx: hd }, FWord { theta: ft, eta: fe, dx: fd }),
                c,
            );
        }
    };
    match (source, rule) {
        (HKind::H0, MuRule::HalfStep) => {
            put(0, 0, false, 0, k, Scalar::ONE);
            if k >= 1 {
                put(0, 1, false, 0, k - 1, &kk * &lin(-1));
            }
        }
        (HKind::H1, MuRule::IntegerStep) => {
            put(0, 0, false, 0, k, Scalar::ONE);
        }
        (HKind::Full, MuRule::HalfStep) => {
            put(0, 0, false, 0, k, Scalar::ONE);
            if k >= 1 {
                put(0, 1, false, 0, k - 1, &kk * &lin(-1));
                put(1, 0, false, 1, k - 1, -&kk);
            }
        }
        (HKind::Full, MuRule::IntegerStep) => {
            put(0, 0, false, 1, k, Scalar::ONE);
            put(1, 0, false, 0, k, lin(0));
            if k >= 1 {
                put(0, 1, false, 1, k - 1, &kk * &lin(0));
            }
        }
        _ => unreachable!("resolve_rule pins the rule to the source"),
    }
    Ok(BilinearOp::from_term_map(source, lambda.clone(), mu, parity, map))
}

/// One coefficient-space direction, with its realization and grading data.
struct Slot {
    name: HBasisElement,
    body: SuperFunction,
    parity: Parity,
    /// Density weight of the space the element lives in; this drives the
    /// action of the algebra on the slot.
    space_weight: Scalar,
    /// Euler eigenvalue of the element itself (`x`-degree plus half the
    /// theta-degree plus the space weight); this pins the grading weight
    /// of the slot operator.
    grading_weight: Scalar,
    /// `(x-exponent, theta-flag)` of the body, used to read expansion
    /// coefficients back off a superfunction.
    read_key: (u32, bool),
}

fn slots_for(source: HKind) -> Vec<Slot> {
    let half = Scalar::new(-1, 2);
    let one_slot = || Slot {
        name: HBasisElement::One,
        body: SuperFunction::one(),
        parity: Parity::Even,
        space_weight: half.clone(),
        grading_weight: half.clone(),
        read_key: (0, false),
    };
    let x_slot = || Slot {
        name: HBasisElement::X,
        body: SuperFunction::x(),
        parity: Parity::Even,
        space_weight: half.clone(),
        grading_weight: Scalar::new(1, 2),
        read_key: (1, false),
    };
    match source {
        HKind::H0 => vec![one_slot(), x_slot()],
        // The odd direction enters the classical problems through its
        // parity-shifted avatar: the trivial one-dimensional module at
        // weight zero, realized by the constant function.
        HKind::H1 => vec![Slot {
            name: HBasisElement::Theta1,
            body: SuperFunction::one(),
            parity: Parity::Even,
            space_weight: Scalar::ZERO,
            grading_weight: Scalar::ZERO,
            read_key: (0, false),
        }],
        HKind::Full => vec![
            one_slot(),
            x_slot(),
            Slot {
                name: HBasisElement::Theta1,
                body: SuperFunction::theta1(),
                parity: Parity::Odd,
                space_weight: half,
                grading_weight: Scalar::ZERO,
                read_key: (0, true),
            },
        ],
    }
}

fn resolve_rule(algebra: Algebra, source: HKind, rule: Option<MuRule>) -> Result<MuRule> {
    if !matches!(algebra, Algebra::Sl2 | Algebra::Osp12) {
        return Err(Error::ParameterRange(
            "bilinear classification runs over sl2 or osp12".into(),
        ));
    }
    if algebra == Algebra::Osp12 && source != HKind::Full {
        return Err(Error::UnstableSource(
            "the classical coefficient spaces do not carry the odd generators; \
             use the full span or the even subalgebra"
                .into(),
        ));
    }
    match (source, rule) {
        (HKind::H0, None | Some(MuRule::HalfStep)) => Ok(MuRule::HalfStep),
        (HKind::H0, Some(MuRule::IntegerStep)) => Err(Error::ParameterRange(
            "the {1, x} coefficient space shifts weights by a half-integer".into(),
        )),
        (HKind::H1, None | Some(MuRule::IntegerStep)) => Ok(MuRule::IntegerStep),
        (HKind::H1, Some(MuRule::HalfStep)) => Err(Error::ParameterRange(
            "the trivial coefficient space shifts weights by an integer".into(),
        )),
        (HKind::Full, Some(r)) => Ok(r),
        (HKind::Full, None) => Err(Error::ParameterRange(
            "the full coefficient space needs an explicit target-weight rule".into(),
        )),
    }
}

/// Monomial slot candidates of the pinned grading weight, with
/// `x`-exponent at most one.  For the classical problems only theta-free
/// pure derivative words qualify.
fn pinned_candidates(
    lambda: &Scalar,
    mu: &Scalar,
    slot: &Slot,
    map_parity: Parity,
    classical: bool,
) -> Result<Vec<SuperDiffOp>> {
    let need = map_parity.compose(slot.parity);
    let diff = mu - lambda;
    let mut out = Vec::new();
    let shapes: &[(u8, u8)] = if classical {
        &[(0, 0)]
    } else {
        &[(0, 0), (1, 0), (0, 1), (1, 1)]
    };
    for d in 0..=1u32 {
        for &(t1, eps) in shapes {
            let word_parity = if (t1 + eps) % 2 == 1 { Parity::Odd } else { Parity::Even };
            if word_parity != need {
                continue;
            }
            // Grading weight of x^d t1^{t1} eta^{eps} (d/dx)^j between the
            // weights (lambda, mu) is (mu - lambda) + d + (t1 - eps)/2 - j;
            // setting it to the slot weight pins j.
            let mut js = &diff + &Scalar::from_int(i64::from(d));
            js = &js - &slot.grading_weight;
            if t1 != eps {
                js = &js + &Scalar::new(i64::from(t1) - i64::from(eps), 2);
            }
            let Some(j) = js.to_i64() else { continue };
            if j < 0 {
                continue;
            }
            let coeff = SuperFunction::monomial(Scalar::ONE, d, t1 == 1, false);
            out.push(SuperDiffOp::from_terms(
                [(OpKey::new(eps, 0, j as u32), coeff)],
                lambda.clone(),
                mu.clone(),
                Variables::OneTheta,
            )?);
        }
    }
    Ok(out)
}

/// Expands a superfunction over the slot bodies; any remainder means the
/// coefficient space is not stable under the requested algebra.
fn expand_over_slots(image: &SuperFunction, slots: &[Slot], gen: &str) -> Result<Vec<Scalar>> {
    let mut gamma = Vec::with_capacity(slots.len());
    let mut rest = image.clone();
    for s in slots {
        let (e, t1) = s.read_key;
        let c = if t1 { rest.c_t1.coeff(e) } else { rest.c_1.coeff(e) };
        if !c.is_zero() {
            rest = rest.sub(&s.body.scale(&c));
        }
        gamma.push(c);
    }
    if !rest.is_zero() {
        return Err(Error::UnstableSource(format!(
            "the action of {gen} leaves the coefficient space (remainder {rest})"
        )));
    }
    Ok(gamma)
}

/// Left-multiplies every coefficient of an operator by a fixed function.
fn coeff_mul(op: &SuperDiffOp, f: &SuperFunction) -> Result<SuperDiffOp> {
    SuperDiffOp::from_terms(
        op.terms().iter().map(|(k, c)| (*k, f.mul(c))),
        op.lambda().clone(),
        op.mu().clone(),
        op.variables(),
    )
}

/// The operator monomial named by an `F`-slot word.
fn word_op(fw: FWord, lambda: &Scalar, mu: &Scalar) -> Result<SuperDiffOp> {
    SuperDiffOp::from_terms(
        [(
            OpKey::new(fw.eta, 0, fw.dx),
            SuperFunction::monomial(Scalar::ONE, 0, fw.theta, false),
        )],
        lambda.clone(),
        mu.clone(),
        Variables::OneTheta,
    )
}

/// Reads an `x`-free one-theta operator as a map from `F`-slot words to
/// coefficients.
fn expand_xfree(op: &SuperDiffOp) -> Result<BTreeMap<FWord, Scalar>> {
    let mut out = BTreeMap::new();
    for (key, mask, xexp, v) in op_entries(op) {
        if xexp != 0 {
            return Err(Error::XDependence(
                "slot operator is not translation-reduced".into(),
            ));
        }
        if key.eps2 != 0 || mask >= 2 {
            return Err(Error::VariableMismatch(
                "slot operator is not a one-theta operator".into(),
            ));
        }
        out.insert(FWord { theta: mask == 1, eta: key.eps1, dx: key.j }, v);
    }
    Ok(out)
}

/// Rewrites solved slot operators as a bilinear term list.  The term
/// basis evaluates on the slot bodies triangularly (the value on `1`
/// determines the identity words, the value on `t1` then fixes the
/// `eta`-words, and the value on `x` the derivative words), so the
/// extraction below is a back-substitution.
fn bilinear_from_slots(
    source: HKind,
    slots: &[Slot],
    slot_ops: &[SuperDiffOp],
    lambda: &Scalar,
    mu: &Scalar,
    parity: Parity,
) -> Result<BilinearOp> {
    let mut map: BTreeMap<(HWord, FWord), Scalar> = BTreeMap::new();
    match source {
        HKind::H1 => {
            for (fw, c) in expand_xfree(&slot_ops[0])? {
                map.insert((HWord { eta: 0, dx: 0 }, fw), c);
            }
        }
        HKind::H0 => {
            let id_part = expand_xfree(&slot_ops[0])?;
            for (fw, c) in &id_part {
                map.insert((HWord { eta: 0, dx: 0 }, *fw), c.clone());
            }
            let rx = slot_ops[1].sub(&coeff_mul(&slot_ops[0], &SuperFunction::x())?)?;
            for (fw, c) in expand_xfree(&rx)? {
                map.insert((HWord { eta: 0, dx: 1 }, fw), c);
            }
        }
        HKind::Full => {
            let id_part = expand_xfree(&slot_ops[0])?;
            for (fw, c) in &id_part {
                map.insert((HWord { eta: 0, dx: 0 }, *fw), c.clone());
            }
            // Identity words contribute (-1)^{|W_f|} (t1 .) W_f to the
            // value on t1; what remains there belongs to the eta-words.
            let mut rth = slot_ops[2].clone();
            for (fw, c) in &id_part {
                if fw.theta {
                    continue;
                }
                let lifted = word_op(FWord { theta: true, ..*fw }, lambda, mu)?;
                let signed = if fw.parity().is_odd() { -c } else { c.clone() };
                rth = rth.sub(&lifted.scale(&signed))?;
            }
            let mut eta_part: BTreeMap<FWord, Scalar> = BTreeMap::new();
            for (fw, c) in expand_xfree(&rth)? {
                let signed = if fw.parity().is_odd() { -&c } else { c };
                eta_part.insert(fw, signed.clone());
                map.insert((HWord { eta: 1, dx: 0 }, fw), signed);
            }
            // Eta-words contribute -(t1 .) W_f to the value on x (the
            // eta of x is minus t1); add that back before reading the
            // derivative words.
            let mut rx = slot_ops[1].sub(&coeff_mul(&slot_ops[0], &SuperFunction::x())?)?;
            for (fw, c) in &eta_part {
                if fw.theta {
                    continue;
                }
                let lifted = word_op(FWord { theta: true, ..*fw }, lambda, mu)?;
                rx = rx.add(&lifted.scale(c))?;
            }
            for (fw, c) in expand_xfree(&rx)? {
                map.insert((HWord { eta: 0, dx: 1 }, fw), c);
            }
        }
    }
    let op = BilinearOp::from_term_map(source, lambda.clone(), mu.clone(), parity, map);
    // Guard the back-substitution: the term list must reproduce every
    // slot operator it was read from.
    for (slot, expected) in slots.iter().zip(slot_ops) {
        let rebuilt = slot_value(&op, slot)?;
        if !rebuilt.sub(expected)?.is_zero() {
            return Err(Error::ParameterRange(format!(
                "bilinear term extraction failed to reproduce the value on {:?}",
                slot.name
            )));
        }
    }
    Ok(op)
}

/// The slot operator a bilinear term list induces on one coefficient
/// direction.
fn slot_value(op: &BilinearOp, slot: &Slot) -> Result<SuperDiffOp> {
    let mut out = SuperDiffOp::zero(op.lambda.clone(), op.mu.clone(), Variables::OneTheta);
    for t in &op.terms {
        let mut wh = slot.body.clone();
        for _ in 0..t.h_word.dx {
            wh = partial_x(&wh);
        }
        if t.h_word.eta == 1 {
            wh = eta_bar(&wh, 1);
        }
        if wh.is_zero() {
            continue;
        }
        let mut c = t.coeff.clone();
        if t.f_word.parity().is_odd() && slot.parity.is_odd() {
            c = -&c;
        }
        if t.f_word.theta {
            wh = wh.mul(&SuperFunction::theta1());
        }
        let term = SuperDiffOp::from_terms(
            [(OpKey::new(t.f_word.eta, 0, t.f_word.dx), wh.scale(&c))],
            op.lambda.clone(),
            op.mu.clone(),
            Variables::OneTheta,
        )?;
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Classifies the invariant bilinear operators for one algebra, one
/// coefficient space, one source weight and one order.
///
/// The rule argument is required for [`HKind::Full`] and optional (but
/// checked) for the classical coefficient spaces, whose weight shift is
/// forced.
pub fn classify(
    algebra: Algebra,
    source: HKind,
    lambda: &Scalar,
    k: u32,
    rule: Option<MuRule>,
) -> Result<ClassificationResult> {
    let rule = resolve_rule(algebra, source, rule)?;
    let classical = algebra == Algebra::Sl2 && source != HKind::Full;
    let mu = rule.target_weight(lambda, k);
    let map_parity = if classical { Parity::Even } else { rule.map_parity() };
    let slots = slots_for(source);

    let mut unknowns: Vec<(usize, SuperDiffOp)> = Vec::new();
    for (si, slot) in slots.iter().enumerate() {
        for cand in pinned_candidates(lambda, &mu, slot, map_parity, classical)? {
            unknowns.push((si, cand));
        }
    }

    let gens = basis_of(algebra);
    // gammas[gi][si][ti]: the action of generator gi sends slot si to the
    // combination sum_t gamma * slot_t.
    let mut gammas: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(gens.len());
    let mut fields = Vec::with_capacity(gens.len());
    for g in &gens {
        let field = ContactField::from_id(*g, Variables::OneTheta)?;
        let mut per_slot = Vec::with_capacity(slots.len());
        for slot in &slots {
            let l = lie_derivative(field.generator(), &slot.space_weight, Variables::OneTheta)?;
            let image = op_apply(&l, &slot.body)?;
            per_slot.push(expand_over_slots(&image, &slots, &format!("{g:?}"))?);
        }
        gammas.push(per_slot);
        fields.push(field);
    }

    // Equation rows, indexed by (generator, slot, operator coordinate).
    type EqKey = (usize, usize, OpKey, u8, u32);
    let mut rows: BTreeMap<EqKey, BTreeMap<u32, Scalar>> = BTreeMap::new();
    let mut push = |eq: EqKey, ui: u32, v: Scalar, classical: bool| {
        if classical && ((eq.2).eps1 != 0 || eq.3 != 0) {
            return;
        }
        let cell = rows.entry(eq).or_default().entry(ui).or_insert(Scalar::ZERO);
        *cell += &v;
    };
    for (ui, (us, cand)) in unknowns.iter().enumerate() {
        let cand_entries = op_entries(cand);
        for (gi, field) in fields.iter().enumerate() {
            let sign_a = if map_parity.is_odd() && field.parity().is_odd() {
                Scalar::from_int(-1)
            } else {
                Scalar::ONE
            };
            // The outer part of the defect: target action through the
            // candidate minus the signed candidate through the source
            // action, in the slot the candidate lives in.
            let ma = module_action(field, cand)?;
            for (key, mask, xexp, v) in op_entries(&ma) {
                push((gi, *us, key, mask, xexp), ui as u32, v, classical);
            }
            // The inner part: minus the value on the transported slot
            // element, distributed over every slot the action reaches.
            for (si, gamma_row) in gammas[gi].iter().enumerate().take(slots.len()) {
                let gcoef = &gamma_row[*us];
                if gcoef.is_zero() {
                    continue;
                }
                let scale = -&(&sign_a * gcoef);
                for (key, mask, xexp, v) in &cand_entries {
                    push((gi, si, *key, *mask, *xexp), ui as u32, &scale * v, classical);
                }
            }
        }
    }

    let mut sys = RrefSystem::new();
    for (i, entries) in rows.into_values().enumerate() {
        let coeffs = sparse_from_entries(entries.into_iter().filter(|(_, v)| !v.is_zero()));
        sys.add_equation(i as u32, coeffs, Scalar::ZERO)
            .expect("homogeneous equations are always feasible");
    }

    let mut solution_basis = Vec::new();
    for v in sys.nullspace(unknowns.len() as u32) {
        let mut slot_ops =
            vec![SuperDiffOp::zero(lambda.clone(), mu.clone(), Variables::OneTheta); slots.len()];
        for (ui, (us, cand)) in unknowns.iter().enumerate() {
            let c = coeff_at(&v, ui as u32);
            if !c.is_zero() {
                slot_ops[*us] = slot_ops[*us].add(&cand.scale(&c))?;
            }
        }
        solution_basis.push(bilinear_from_slots(
            source, &slots, &slot_ops, lambda, &mu, map_parity,
        )?);
    }

    Ok(ClassificationResult {
        algebra,
        source,
        rule,
        lambda: lambda.clone(),
        mu,
        k,
        solution_basis,
        constraint_evaluation: constraint_polynomial(algebra, source, rule, lambda, k),
    })
}

/// Scans a weight grid and all orders up to `k_max`, recording for each
/// cell the exact solution dimension and whether it is positive precisely
/// on the zero set of the obstruction polynomial.
pub fn scan_constraint_variety(
    algebra: Algebra,
    source: HKind,
    lambda_grid: &[Scalar],
    k_max: u32,
) -> Result<Vec<VarietyCell>> {
    let rules: &[MuRule] = match (algebra, source) {
        (Algebra::Sl2, HKind::H0) => &[MuRule::HalfStep],
        (Algebra::Sl2, HKind::H1) => &[MuRule::IntegerStep],
        (Algebra::Osp12, HKind::Full) => &[MuRule::HalfStep, MuRule::IntegerStep],
        _ => {
            return Err(Error::ParameterRange(
                "variety scans cover the classical spaces over sl2 and the full space over osp12"
                    .into(),
            ))
        }
    };
    let mut out = Vec::new();
    for &rule in rules {
        for lambda in lambda_grid {
            for k in 0..=k_max {
                let r = classify(algebra, source, lambda, k, Some(rule))?;
                let constraint_evaluation = r
                    .constraint_evaluation
                    .clone()
                    .expect("scanned combinations always carry a constraint polynomial");
                let matches_constraint = (r.dimension() > 0) == constraint_evaluation.is_zero();
                out.push(VarietyCell {
                    algebra,
                    source,
                    rule,
                    lambda: lambda.clone(),
                    mu: r.mu.clone(),
                    k,
                    dimension: r.dimension(),
                    constraint_evaluation,
                    matches_constraint,
                });
            }
        }
    }
    Ok(out)
}

/// Whether the solution basis matches the distinguished closed form:
/// proportionality for a one-dimensional basis, span membership otherwise.
pub fn check_closed_form(result: &ClassificationResult) -> Result<bool> {
    if result.solution_basis.is_empty() {
        return Err(Error::ParameterRange(
            "an empty solution basis has nothing to compare against".into(),
        ));
    }
    let closed = closed_form(result.algebra, result.source, result.rule, &result.lambda, result.k)?;
    if closed.is_zero() {
        return Ok(false);
    }
    if result.solution_basis.len() == 1 {
        return Ok(proportional(&result.solution_basis[0], &closed));
    }
    // Span membership: solve for the closed form over the basis, one
    // equation per term coordinate.
    let maps: Vec<BTreeMap<(HWord, FWord), Scalar>> =
        result.solution_basis.iter().map(BilinearOp::term_map).collect();
    let target = closed.term_map();
    let mut keys: BTreeSet<(HWord, FWord)> = BTreeSet::new();
    for m in &maps {
        keys.extend(m.keys().copied());
    }
    keys.extend(target.keys().copied());
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for key in keys {
        rows.push(sparse_from_entries(maps.iter().enumerate().filter_map(
            |(i, m)| m.get(&key).map(|c| (i as u32, c.clone())),
        )));
        rhs.push(target.get(&key).cloned().unwrap_or(Scalar::ZERO));
    }
    Ok(solve_with_certificate(&rows, &rhs).is_ok())
}

fn proportional(a: &BilinearOp, b: &BilinearOp) -> bool {
    let ma = a.term_map();
    let mb = b.term_map();
    if ma.len() != mb.len() || ma.is_empty() {
        return ma.len() == mb.len();
    }
    let Some((k0, ca)) = ma.iter().next() else {
        return false;
    };
    let Some(cb) = mb.get(k0) else {
        return false;
    };
    let ratio = ca / cb;
    ma.iter().all(|(k, ca)| mb.get(k).is_some_and(|cb| *ca == &ratio * cb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scl(n: i64, d: i64) -> Scalar {
        Scalar::new(n, d)
    }

    #[test]
    fn order_zero_multiplication_survives_at_every_weight() {
        let r = classify(Algebra::Sl2, HKind::H0, &Scalar::ONE, 0, None).unwrap();
        assert_eq!(r.dimension(), 1);
        assert_eq!(r.constraint_evaluation, Some(Scalar::ZERO));
        assert!(check_closed_form(&r).unwrap());
        // The basis element is, up to scale, plain multiplication.
        let sol = &r.solution_basis[0];
        assert_eq!(sol.terms().len(), 1);
        let t = &sol.terms()[0];
        assert_eq!((t.h_word, t.f_word), (
            HWord { eta: 0, dx: 0 },
            FWord { theta: false, eta: 0, dx: 0 }
        ));
    }

    #[test]
    fn a_generic_weight_carries_no_second_order_map() {
        let r = classify(Algebra::Sl2, HKind::H0, &scl(1, 4), 2, None).unwrap();
        assert_eq!(r.dimension(), 0);
        assert_eq!(r.constraint_evaluation, Some(scl(3, 2)));
    }

    #[test]
    fn the_odd_rule_at_weight_zero_order_one_matches_its_closed_form() {
        let r = classify(
            Algebra::Osp12,
            HKind::Full,
            &Scalar::ZERO,
            1,
            Some(MuRule::IntegerStep),
        )
        .unwrap();
        assert_eq!(r.dimension(), 1);
        assert_eq!(r.solution_basis[0].parity(), Parity::Odd);
        assert!(check_closed_form(&r).unwrap());
    }

    #[test]
    fn ill_posed_requests_are_rejected() {
        assert!(matches!(
            classify(Algebra::Osp12, HKind::H0, &Scalar::ONE, 1, None),
            Err(Error::UnstableSource(_))
        ));
        assert!(matches!(
            classify(Algebra::Osp12, HKind::Full, &Scalar::ONE, 1, None),
            Err(Error::ParameterRange(_))
        ));
        assert!(matches!(
            classify(Algebra::Sl2, HKind::H0, &Scalar::ONE, 1, Some(MuRule::IntegerStep)),
            Err(Error::ParameterRange(_))
        ));
        assert!(matches!(
            classify(Algebra::Osp22, HKind::Full, &Scalar::ONE, 1, Some(MuRule::HalfStep)),
            Err(Error::ParameterRange(_))
        ));
    }

    #[test]
    fn solutions_evaluate_consistently_with_their_slot_operators() {
        let r = classify(
            Algebra::Osp12,
            HKind::Full,
            &scl(-1, 2),
            2,
            Some(MuRule::HalfStep),
        )
        .unwrap();
        assert_eq!(r.dimension(), 1);
        let sol = &r.solution_basis[0];
        // Evaluate on a coefficient and a density and compare against the
        // slot operator route.
        for slot in slots_for(HKind::Full) {
            let op = slot_value(sol, &slot).unwrap();
            let f = SuperFunction::monomial(scl(3, 1), 2, false, false)
                .add(&SuperFunction::monomial(scl(1, 2), 1, true, false));
            let via_terms = sol.apply(&slot.body, &f).unwrap();
            let via_op = op_apply(&op, &f).unwrap();
            assert_eq!(via_terms, via_op);
        }
    }
}
