//! Chevalley-Eilenberg cohomology in degrees zero and one for the contact
//! algebras acting on operator modules, over exact rational arithmetic.
//!
//! A 1-cochain assigns to each basis generator an operator between two
//! fixed density modules. The differential in degree zero is the module
//! action; in degree one it is the usual alternating sum twisted by the
//! super signs. Everything is graded by the Euler weight (the eigenvalue
//! of the action of `X_x`), which splits all computations into small
//! independent blocks:
//!
//! * in nonzero weight every cocycle is a coboundary (its primitive is the
//!   `X_x`-value divided by the weight), so those blocks contribute equal
//!   cocycle and coboundary dimensions;
//! * weight zero is handled by exact sparse Gaussian elimination.
//!
//! Dimensions are reported relative to a truncation window (maximal
//! operator order and coefficient degree); a plateau flag records whether
//! enlarging the window changes the answer. Coboundary solving is exact
//! and untruncated: the solution space is pinned down by the `X_1`-slot
//! (which forces the primitive up to an `x`-free remainder) and the weight
//! grading (which confines the remainder to finitely many monomials), so
//! a failed solve yields a finite certificate that multiplies back.

use crate::contact::{basis_of, structure_constants, Algebra, ContactField, GeneratorId, Variables};
use crate::diffop::{module_action, term_weight, OpKey, SuperDiffOp};
use crate::linalg::{sparse_from_entries, Eliminator, RrefSystem, SparseVec};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::superfield::{Parity, SuperFunction};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Truncation window for dimension reports: maximal operator order
/// `2j + e1 + e2` and maximal coefficient `x`-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub order: u32,
    pub degree: u32,
}

/// A 1-cochain: an assignment of operators to the basis generators of a
/// contact algebra, linear over the omitted generators (missing = zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cochain1 {
    values: BTreeMap<GeneratorId, SuperDiffOp>,
    lambda: Scalar,
    mu: Scalar,
    /// Parity of the cochain as a map: the value on `g` has operator
    /// parity `parity + |g|`.
    parity: Parity,
    scope: Algebra,
    variables: Variables,
}

impl Cochain1 {
    pub fn new(
        values: BTreeMap<GeneratorId, SuperDiffOp>,
        lambda: Scalar,
        mu: Scalar,
        parity: Parity,
        scope: Algebra,
        variables: Variables,
    ) -> Result<Self> {
        let basis = basis_of(scope);
        let mut kept = BTreeMap::new();
        for (g, op) in values {
            if !basis.contains(&g) {
                return Err(Error::ParameterRange(format!(
                    "generator {g} is outside the {scope:?} basis"
                )));
            }
            if op.is_zero() {
                continue;
            }
            if *op.lambda() != lambda || *op.mu() != mu {
                return Err(Error::WeightMismatch(format!(
                    "value on {g} has weights ({}, {}), cochain has ({lambda}, {mu})",
                    op.lambda(),
                    op.mu()
                )));
            }
            if op.variables() != variables {
                return Err(Error::VariableMismatch(format!(
                    "value on {g} disagrees with the cochain's variable set"
                )));
            }
            match op.parity() {
                Some(p) if p == parity.compose(g.parity()) => {}
                Some(_) => {
                    return Err(Error::MixedParity(format!(
                        "value on {g} has the wrong parity for a {parity:?} cochain"
                    )))
                }
                None => {
                    return Err(Error::MixedParity(format!(
                        "value on {g} is not parity-homogeneous"
                    )))
                }
            }
            kept.insert(g, op);
        }
        Ok(Cochain1 {
            values: kept,
            lambda,
            mu,
            parity,
            scope,
            variables,
        })
    }

    pub fn zero(
        lambda: Scalar,
        mu: Scalar,
        parity: Parity,
        scope: Algebra,
        variables: Variables,
    ) -> Self {
        Cochain1 {
            values: BTreeMap::new(),
            lambda,
            mu,
            parity,
            scope,
            variables,
        }
    }

    /// The value on one generator (zero when unset).
    pub fn value(&self, g: GeneratorId) -> SuperDiffOp {
        self.values.get(&g).cloned().unwrap_or_else(|| {
            SuperDiffOp::zero(self.lambda.clone(), self.mu.clone(), self.variables)
        })
    }

    pub fn values(&self) -> &BTreeMap<GeneratorId, SuperDiffOp> {
        &self.values
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

    pub fn scope(&self) -> Algebra {
        self.scope
    }

    pub fn variables(&self) -> Variables {
        self.variables
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn check_compatible(&self, rhs: &Cochain1) -> Result<()> {
        if self.lambda != rhs.lambda
            || self.mu != rhs.mu
            || self.parity != rhs.parity
            || self.scope != rhs.scope
            || self.variables != rhs.variables
        {
            return Err(Error::WeightMismatch(
                "cochains live in different spaces".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Cochain1) -> Result<Cochain1> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (g, op) in &rhs.values {
            let merged = out.value(*g).add(op)?;
            if merged.is_zero() {
                out.values.remove(g);
            } else {
                out.values.insert(*g, merged);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Cochain1) -> Result<Cochain1> {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Cochain1 {
        if s.is_zero() {
            return Cochain1::zero(
                self.lambda.clone(),
                self.mu.clone(),
                self.parity,
                self.scope,
                self.variables,
            );
        }
        Cochain1 {
            values: self.values.iter().map(|(g, op)| (*g, op.scale(s))).collect(),
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            parity: self.parity,
            scope: self.scope,
            variables: self.variables,
        }
    }
}

/// A 2-cochain, stored on the unordered generator pairs `(g, h)` with
/// `g <= h`; diagonal pairs appear for odd generators only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    values: BTreeMap<(GeneratorId, GeneratorId), SuperDiffOp>,
    lambda: Scalar,
    mu: Scalar,
    parity: Parity,
    scope: Algebra,
    variables: Variables,
}

impl Cochain2 {
    pub fn values(&self) -> &BTreeMap<(GeneratorId, GeneratorId), SuperDiffOp> {
        &self.values
    }

    pub fn value(&self, g: GeneratorId, h: GeneratorId) -> SuperDiffOp {
        let key = if g <= h { (g, h) } else { (h, g) };
        self.values.get(&key).cloned().unwrap_or_else(|| {
            SuperDiffOp::zero(self.lambda.clone(), self.mu.clone(), self.variables)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }
}

/// The evaluation pairs of the degree-one differential for a scope:
/// all `g <= h` with diagonal entries only for odd generators.
pub fn cochain2_pairs(scope: Algebra) -> Vec<(GeneratorId, GeneratorId)> {
    let basis = basis_of(scope);
    let mut pairs = Vec::new();
    for (i, &g) in basis.iter().enumerate() {
        for &h in &basis[i..] {
            if g == h && !g.parity().is_odd() {
                continue;
            }
            pairs.push((g, h));
        }
    }
    pairs
}

/// Degree-zero differential: `(delta A)(g) = (-1)^{|g||A|} g . A`.
pub fn delta0(a: &SuperDiffOp, scope: Algebra) -> Result<Cochain1> {
    let parity = a
        .parity()
        .ok_or_else(|| Error::MixedParity("degree-zero cochain".into()))?;
    let mut values = BTreeMap::new();
    for g in basis_of(scope) {
        let field = ContactField::from_id(g, a.variables())?;
        let sign = if g.parity().is_odd() && parity.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let v = module_action(&field, a)?.scale(&sign);
        if !v.is_zero() {
            values.insert(g, v);
        }
    }
    Cochain1::new(
        values,
        a.lambda().clone(),
        a.mu().clone(),
        parity,
        scope,
        a.variables(),
    )
}

/// Evaluates a cochain on an arbitrary algebra element given as a linear
/// combination of basis generators.
fn eval_on_combination(c: &Cochain1, combo: &[(GeneratorId, Scalar)]) -> Result<SuperDiffOp> {
    let mut out = SuperDiffOp::zero(c.lambda().clone(), c.mu().clone(), c.variables());
    for (g, coeff) in combo {
        out = out.add(&c.value(*g).scale(coeff))?;
    }
    Ok(out)
}

/// Degree-one differential:
///
/// ```text
/// (delta c)(g, h) = (-1)^{|g||c|} g . c(h)
///                 - (-1)^{|h|(|g| + |c|)} h . c(g)
///                 - c([g, h]) .
/// ```
pub fn delta1(c: &Cochain1) -> Result<Cochain2> {
    let consts = structure_constants(c.scope())?;
    let mut values = BTreeMap::new();
    for (g, h) in cochain2_pairs(c.scope()) {
        let fg = ContactField::from_id(g, c.variables())?;
        let fh = ContactField::from_id(h, c.variables())?;
        let sign_g = if g.parity().is_odd() && c.parity().is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let exp_h = h.parity().is_odd() && g.parity().compose(c.parity()).is_odd();
        let sign_h = if exp_h { Scalar::from_int(-1) } else { Scalar::ONE };
        let term1 = module_action(&fg, &c.value(h))?.scale(&sign_g);
        let term2 = module_action(&fh, &c.value(g))?.scale(&sign_h);
        let term3 = eval_on_combination(c, &consts[&(g, h)])?;
        let v = term1.sub(&term2)?.sub(&term3)?;
        if !v.is_zero() {
            values.insert((g, h), v);
        }
    }
    Ok(Cochain2 {
        values,
        lambda: c.lambda().clone(),
        mu: c.mu().clone(),
        parity: c.parity(),
        scope: c.scope(),
        variables: c.variables(),
    })
}

/// Result of a cocycle test, with the first failing pair when negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleCheck {
    pub ok: bool,
    pub failing_pair: Option<(GeneratorId, GeneratorId)>,
}

pub fn cocycle_check(c: &Cochain1) -> Result<CocycleCheck> {
    let d = delta1(c)?;
    match d.values().keys().next() {
        None => Ok(CocycleCheck {
            ok: true,
            failing_pair: None,
        }),
        Some(&pair) => Ok(CocycleCheck {
            ok: false,
            failing_pair: Some(pair),
        }),
    }
}

pub fn is_cocycle(c: &Cochain1) -> Result<bool> {
    Ok(cocycle_check(c)?.ok)
}

/// Tests membership in the relative complex: the cochain must vanish on
/// the five-generator subalgebra and be annihilated by its action, which
/// for a 1-cochain vanishing there means the degree-one differential has
/// no component on pairs meeting the subalgebra.
pub fn is_relative_cochain(c: &Cochain1) -> Result<bool> {
    if c.scope() != Algebra::Osp22 {
        return Err(Error::ParameterRange(
            "relative cochains live on the eight-generator algebra".into(),
        ));
    }
    let sub = basis_of(Algebra::Osp12);
    for &g in &sub {
        if !c.value(g).is_zero() {
            return Ok(false);
        }
    }
    let d = delta1(c)?;
    for ((g, h), v) in d.values() {
        if (sub.contains(g) || sub.contains(h)) && !v.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Monomial bookkeeping.

/// One monomial operator `x^d t1^{a} t2^{b} . eta-word . (d/dx)^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct MonOp {
    key: OpKey,
    xexp: u32,
    t1: bool,
    t2: bool,
}

impl MonOp {
    fn weight(&self, lambda: &Scalar, mu: &Scalar) -> Scalar {
        term_weight(lambda, mu, self.key, self.xexp, self.t1, self.t2)
    }

    fn parity(&self) -> Parity {
        let n = u8::from(self.t1) + u8::from(self.t2) + self.key.eps1 + self.key.eps2;
        if n % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn to_op(self, lambda: &Scalar, mu: &Scalar, variables: Variables) -> SuperDiffOp {
        SuperDiffOp::from_terms(
            [(
                self.key,
                SuperFunction::monomial(Scalar::ONE, self.xexp, self.t1, self.t2),
            )],
            lambda.clone(),
            mu.clone(),
            variables,
        )
        .expect("monomial respects the variable set")
    }
}

fn theta_combos(variables: Variables) -> &'static [(bool, bool)] {
    match variables {
        Variables::OneTheta => &[(false, false), (true, false)],
        Variables::TwoTheta => &[(false, false), (true, false), (false, true), (true, true)],
    }
}

fn op_keys(variables: Variables, max_order: u32) -> Vec<OpKey> {
    let mut keys = Vec::new();
    for e1 in 0..2u8 {
        for e2 in 0..2u8 {
            if variables == Variables::OneTheta && e2 == 1 {
                continue;
            }
            let base = u32::from(e1) + u32::from(e2);
            if base > max_order {
                continue;
            }
            for j in 0..=(max_order - base) / 2 {
                keys.push(OpKey::new(e1, e2, j));
            }
        }
    }
    keys
}

/// Every monomial inside the window.
fn window_monomials(variables: Variables, trunc: Truncation) -> Vec<MonOp> {
    let mut out = Vec::new();
    for key in op_keys(variables, trunc.order) {
        for &(t1, t2) in theta_combos(variables) {
            for xexp in 0..=trunc.degree {
                out.push(MonOp { key, xexp, t1, t2 });
            }
        }
    }
    out
}

/// Monomials of a prescribed Euler weight and parity with `x`-degree at
/// most `max_deg`; the derivative order `j` is determined by the weight.
fn weight_candidates(
    lambda: &Scalar,
    mu: &Scalar,
    variables: Variables,
    w: &Scalar,
    parity: Parity,
    max_deg: u32,
) -> Vec<MonOp> {
    let mut out = Vec::new();
    for &(t1, t2) in theta_combos(variables) {
        for e1 in 0..2u8 {
            for e2 in 0..2u8 {
                if variables == Variables::OneTheta && e2 == 1 {
                    continue;
                }
                let eta_parity = (u8::from(t1) + u8::from(t2) + e1 + e2) % 2;
                if (eta_parity == 1) != parity.is_odd() {
                    continue;
                }
                for d in 0..=max_deg {
                    // w = (mu - lambda) + d + (a + b - e1 - e2)/2 - j
                    let theta = i64::from(t1) + i64::from(t2) - i64::from(e1) - i64::from(e2);
                    let j = &(&(mu - lambda) + &Scalar::from_int(d as i64))
                        + &(&Scalar::new(theta, 2) - w);
                    if !j.is_integer() || j.is_negative() {
                        continue;
                    }
                    let j = j.to_i64().expect("small integer") as u32;
                    out.push(MonOp {
                        key: OpKey::new(e1, e2, j),
                        xexp: d,
                        t1,
                        t2,
                    });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Coordinate of one scalar entry in a value assigned to a slot (a
/// generator for 1-cochains, a pair index for 2-cochains).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Coord {
    slot: u32,
    key: OpKey,
    mask: u8,
    xexp: u32,
}

#[derive(Default)]
struct CoordIndex {
    map: BTreeMap<Coord, u32>,
    coords: Vec<Coord>,
}

impl CoordIndex {
    fn intern(&mut self, c: Coord) -> u32 {
        if let Some(&i) = self.map.get(&c) {
            return i;
        }
        let i = self.coords.len() as u32;
        self.map.insert(c, i);
        self.coords.push(c);
        i
    }
}

/// Flattens an operator into `(key, theta-mask, x-exponent, value)` rows.
pub(crate) fn op_entries(op: &SuperDiffOp) -> Vec<(OpKey, u8, u32, Scalar)> {
    let mut out = Vec::new();
    for (k, c) in op.terms() {
        let comps: [(&Poly, u8); 4] = [(&c.c_1, 0), (&c.c_t1, 1), (&c.c_t2, 2), (&c.c_t12, 3)];
        for (poly, mask) in comps {
            for (exp, v) in poly.iter() {
                out.push((*k, mask, exp, v.clone()));
            }
        }
    }
    out
}

fn cochain1_vector(c: &Cochain1, basis: &[GeneratorId], index: &mut CoordIndex) -> SparseVec {
    let mut entries = Vec::new();
    for (g, op) in c.values() {
        let slot = basis.iter().position(|b| b == g).expect("basis member") as u32;
        for (key, mask, xexp, v) in op_entries(op) {
            entries.push((index.intern(Coord { slot, key, mask, xexp }), v));
        }
    }
    sparse_from_entries(entries)
}

fn cochain2_vector(
    c: &Cochain2,
    pairs: &[(GeneratorId, GeneratorId)],
    index: &mut CoordIndex,
) -> SparseVec {
    let mut entries = Vec::new();
    for (pair, op) in c.values() {
        let slot = pairs.iter().position(|p| p == pair).expect("scope pair") as u32;
        for (key, mask, xexp, v) in op_entries(op) {
            entries.push((index.intern(Coord { slot, key, mask, xexp }), v));
        }
    }
    sparse_from_entries(entries)
}

/// `dim(span V  intersect  window)` by the rank difference
/// `rank(V) - rank(V restricted to out-of-window coordinates)`.
fn dim_span_inside_window(vectors: &[SparseVec], index: &CoordIndex, trunc: Truncation) -> u32 {
    let full = crate::linalg::rank_of(vectors.iter().cloned());
    let mut outside = Eliminator::new();
    for v in vectors {
        let restricted: SparseVec = v
            .iter()
            .filter(|(i, _)| {
                let c = index.coords[*i as usize];
                c.key.order() > trunc.order || c.xexp > trunc.degree
            })
            .cloned()
            .collect();
        outside.insert(restricted);
    }
    (full - outside.rank()) as u32
}

/// Basis of monomial 1-cochains inside the window with the given stored
/// parity (every value's operator parity is `parity + |g|`).
pub fn cochain_basis(
    lambda: &Scalar,
    mu: &Scalar,
    parity: Parity,
    scope: Algebra,
    variables: Variables,
    trunc: Truncation,
) -> Result<Vec<Cochain1>> {
    let mut out = Vec::new();
    for g in basis_of(scope) {
        for m in window_monomials(variables, trunc) {
            if m.parity() != parity.compose(g.parity()) {
                continue;
            }
            let mut values = BTreeMap::new();
            values.insert(g, m.to_op(lambda, mu, variables));
            out.push(Cochain1::new(
                values,
                lambda.clone(),
                mu.clone(),
                parity,
                scope,
                variables,
            )?);
        }
    }
    Ok(out)
}

/// Truncated dimension report for first cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Report {
    pub lambda: Scalar,
    pub mu: Scalar,
    pub relative: bool,
    pub z1_dim: u32,
    pub b1_dim: u32,
    pub h1_dim: u32,
    /// Even part of `h1_dim`. Not part of the serialized report.
    #[serde(skip)]
    pub h1_even_dim: u32,
    /// Odd part of `h1_dim`. Not part of the serialized report.
    #[serde(skip)]
    pub h1_odd_dim: u32,
    pub truncation: Truncation,
    pub plateau: bool,
}

fn ceil_to_u32(s: &Scalar) -> u32 {
    if s.is_negative() || s.is_zero() {
        return 0;
    }
    let big = s.to_big();
    let c = big.ceil().to_integer();
    u32::try_from(&c).unwrap_or(u32::MAX)
}

/// Default window: order `2|mu - lambda| + 6` (rounded up), degree 4.
pub fn default_truncation(lambda: &Scalar, mu: &Scalar) -> Truncation {
    let diff = mu - lambda;
    let twice = if diff.is_negative() {
        &Scalar::from_int(-2) * &diff
    } else {
        &Scalar::from_int(2) * &diff
    };
    Truncation {
        order: ceil_to_u32(&twice) + 6,
        degree: 4,
    }
}

struct BlockDims {
    z1: u32,
    b1: u32,
    h1_even: u32,
    h1_odd: u32,
}

/// Dimension data for one truncation window (absolute cohomology).
///
/// Buckets of nonzero weight contribute equal cocycle and coboundary
/// dimensions, hence nothing to `h1`; `h1_only` skips them (used for the
/// plateau re-run, which compares the `h1` fields only).
fn absolute_dims(
    lambda: &Scalar,
    mu: &Scalar,
    scope: Algebra,
    variables: Variables,
    trunc: Truncation,
    h1_only: bool,
) -> Result<BlockDims> {
    let basis = basis_of(scope);
    let pairs = cochain2_pairs(scope);

    // Bucket window cochain monomials by (cochain weight, stored parity).
    let mut buckets: BTreeMap<(Scalar, Parity), Vec<(GeneratorId, MonOp)>> = BTreeMap::new();
    for &g in &basis {
        for m in window_monomials(variables, trunc) {
            let w = &m.weight(lambda, mu) - &g.weight();
            let p = m.parity().compose(g.parity());
            buckets.entry((w, p)).or_default().push((g, m));
        }
    }

    let mut dims = BlockDims {
        z1: 0,
        b1: 0,
        h1_even: 0,
        h1_odd: 0,
    };

    for ((w, p), cols) in buckets {
        if !w.is_zero() {
            if h1_only {
                continue;
            }
            // Every window cocycle of nonzero weight is the coboundary of
            // its X_x-value over the weight, which the window also contains,
            // so Z^1 and B^1 agree: both equal the part of delta0(A-window)
            // that lands inside the window.
            let mut index = CoordIndex::default();
            let mut images = Vec::new();
            for a in weight_candidates(lambda, mu, variables, &w, p, trunc.degree) {
                if a.key.order() > trunc.order {
                    continue;
                }
                let c = delta0(&a.to_op(lambda, mu, variables), scope)?;
                images.push(cochain1_vector(&c, &basis, &mut index));
            }
            let dim = dim_span_inside_window(&images, &index, trunc);
            dims.z1 += dim;
            dims.b1 += dim;
            continue;
        }

        // Weight zero: kernel of the degree-one differential on the block...
        let mut index2 = CoordIndex::default();
        let mut rank1 = Eliminator::new();
        for (g, m) in &cols {
            let mut values = BTreeMap::new();
            values.insert(*g, m.to_op(lambda, mu, variables));
            let c = Cochain1::new(values, lambda.clone(), mu.clone(), p, scope, variables)?;
            let d = delta1(&c)?;
            rank1.insert(cochain2_vector(&d, &pairs, &mut index2));
        }
        let z = cols.len() as u32 - rank1.rank() as u32;

        // ... and coboundaries from the finitely many weight-zero module
        // monomials (derivative order is pinned by the weight equation).
        let mut index0 = CoordIndex::default();
        let mut images = Vec::new();
        for a in weight_candidates(lambda, mu, variables, &Scalar::ZERO, p, trunc.degree + 2) {
            let c = delta0(&a.to_op(lambda, mu, variables), scope)?;
            images.push(cochain1_vector(&c, &basis, &mut index0));
        }
        let b = dim_span_inside_window(&images, &index0, trunc);

        dims.z1 += z;
        dims.b1 += b;
        match p {
            Parity::Even => dims.h1_even += z - b,
            Parity::Odd => dims.h1_odd += z - b,
        }
    }
    Ok(dims)
}

/// Basis of the subalgebra-invariant module elements (all of weight zero
/// with `x`-free coefficients), as explicit operators.
pub fn invariant_module_elements(
    lambda: &Scalar,
    mu: &Scalar,
    variables: Variables,
) -> Result<Vec<SuperDiffOp>> {
    let sub = match variables {
        Variables::TwoTheta => Algebra::Osp12,
        Variables::OneTheta => Algebra::Osp12,
    };
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let cands = weight_candidates(lambda, mu, variables, &Scalar::ZERO, parity, 0);
        if cands.is_empty() {
            continue;
        }
        // Rows: coordinates of g . A over the subalgebra generators.
        let mut index = CoordIndex::default();
        let mut sys = RrefSystem::new();
        let mut rows: BTreeMap<u32, SparseVec> = BTreeMap::new();
        for (ci, a) in cands.iter().enumerate() {
            let op = a.to_op(lambda, mu, variables);
            for (slot, g) in basis_of(sub).into_iter().enumerate() {
                let field = ContactField::from_id(g, variables)?;
                let acted = module_action(&field, &op)?;
                for (key, mask, xexp, v) in op_entries(&acted) {
                    let coord = index.intern(Coord {
                        slot: slot as u32,
                        key,
                        mask,
                        xexp,
                    });
                    rows.entry(coord).or_default().push((ci as u32, v));
                }
            }
        }
        for (i, (_, row)) in rows.into_iter().enumerate() {
            sys.add_equation(i as u32, sparse_from_entries(row), Scalar::ZERO)
                .expect("homogeneous system");
        }
        for combo in sys.nullspace(cands.len() as u32) {
            let mut op = SuperDiffOp::zero(lambda.clone(), mu.clone(), variables);
            for (ci, s) in combo {
                op = op.add(&cands[ci as usize].to_op(lambda, mu, variables).scale(&s))?;
            }
            out.push(op);
        }
    }
    Ok(out)
}

/// Dimension data for one truncation window (cohomology relative to the
/// five-generator subalgebra; scope is the eight-generator algebra).
fn relative_dims(
    lambda: &Scalar,
    mu: &Scalar,
    variables: Variables,
    trunc: Truncation,
) -> Result<BlockDims> {
    let scope = Algebra::Osp22;
    let basis = basis_of(scope);
    let pairs = cochain2_pairs(scope);
    let sub = basis_of(Algebra::Osp12);
    let complement: Vec<GeneratorId> = basis
        .iter()
        .copied()
        .filter(|g| !sub.contains(g))
        .collect();

    let invariants = invariant_module_elements(lambda, mu, variables)?;

    let mut dims = BlockDims {
        z1: 0,
        b1: 0,
        h1_even: 0,
        h1_odd: 0,
    };

    for parity in [Parity::Even, Parity::Odd] {
        // Relative cocycles: supported on the complement, concentrated in
        // cochain weight zero, killed by the full degree-one differential.
        let mut cols = Vec::new();
        for &g in &complement {
            for m in window_monomials(variables, trunc) {
                if m.parity() != parity.compose(g.parity()) {
                    continue;
                }
                if &m.weight(lambda, mu) - &g.weight() != Scalar::ZERO {
                    continue;
                }
                cols.push((g, m));
            }
        }
        let mut index2 = CoordIndex::default();
        let mut rank1 = Eliminator::new();
        for (g, m) in &cols {
            let mut values = BTreeMap::new();
            values.insert(*g, m.to_op(lambda, mu, variables));
            let c = Cochain1::new(values, lambda.clone(), mu.clone(), parity, scope, variables)?;
            let d = delta1(&c)?;
            rank1.insert(cochain2_vector(&d, &pairs, &mut index2));
        }
        let z = cols.len() as u32 - rank1.rank() as u32;

        // Relative coboundaries come from the invariant module elements.
        let mut index0 = CoordIndex::default();
        let mut images = Vec::new();
        for a in &invariants {
            if a.parity() != Some(parity) && !a.is_zero() {
                continue;
            }
            let c = delta0(a, scope)?;
            images.push(cochain1_vector(&c, &basis, &mut index0));
        }
        let b = dim_span_inside_window(&images, &index0, trunc);

        dims.z1 += z;
        dims.b1 += b;
        match parity {
            Parity::Even => dims.h1_even += z - b,
            Parity::Odd => dims.h1_odd += z - b,
        }
    }
    Ok(dims)
}

/// Truncated dimension of first cohomology, with a plateau check at the
/// next window size.
pub fn h1_dimension(
    lambda: &Scalar,
    mu: &Scalar,
    scope: Algebra,
    variables: Variables,
    relative: bool,
    trunc: Option<Truncation>,
) -> Result<H1Report> {
    if relative && scope != Algebra::Osp22 {
        return Err(Error::ParameterRange(
            "relative cohomology is taken in the eight-generator algebra".into(),
        ));
    }
    let base = trunc.unwrap_or_else(|| default_truncation(lambda, mu));
    let next = Truncation {
        order: base.order + 1,
        degree: base.degree + 1,
    };
    let run = |t: Truncation, h1_only: bool| -> Result<BlockDims> {
        if relative {
            relative_dims(lambda, mu, variables, t)
        } else {
            absolute_dims(lambda, mu, scope, variables, t, h1_only)
        }
    };
    let at_base = run(base, false)?;
    let at_next = run(next, true)?;
    Ok(H1Report {
        lambda: lambda.clone(),
        mu: mu.clone(),
        relative,
        z1_dim: at_base.z1,
        b1_dim: at_base.b1,
        h1_dim: at_base.h1_even + at_base.h1_odd,
        h1_even_dim: at_base.h1_even,
        h1_odd_dim: at_base.h1_odd,
        truncation: base,
        plateau: at_base.h1_even == at_next.h1_even && at_base.h1_odd == at_next.h1_odd,
    })
}

// ---------------------------------------------------------------------------
// Exact coboundary solving with certificates.

/// Coordinate of one scalar equation in the coboundary system: the
/// coefficient of `x^{x_exp}` times the theta monomial selected by
/// `theta_mask` (bit 0 = `t1`, bit 1 = `t2`) in the normal-form term
/// `eps1, eps2, j` of the value on `generator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EquationCoord {
    pub generator: GeneratorId,
    pub eps1: u8,
    pub eps2: u8,
    pub j: u32,
    pub theta_mask: u8,
    pub x_exp: u32,
}

/// A linear functional on cochain coordinates that annihilates every
/// coboundary (verified over the exhaustive primitive-candidate space)
/// yet pairs nontrivially with the cochain at hand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NontrivialityCertificate {
    pub functional: Vec<(EquationCoord, Scalar)>,
    /// The nonzero pairing of the functional with the cochain.
    pub pairing: Scalar,
}

/// Outcome of an exact coboundary solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoboundaryOutcome {
    /// `delta(primitive) = cochain`, verified by re-substitution.
    Primitive(SuperDiffOp),
    /// No primitive exists; the certificate proves it.
    Obstructed(NontrivialityCertificate),
}

/// Outcome of a joint nontriviality test for several cocycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanOutcome {
    /// No nonzero combination is a coboundary. One certificate per input;
    /// the pairing matrix `functional_i(cochain_j)` is invertible.
    Independent {
        functionals: Vec<Vec<(EquationCoord, Scalar)>>,
        pairings: Vec<Vec<Scalar>>,
    },
    /// An explicit nonzero combination with an explicit primitive.
    Combination {
        coefficients: Vec<Scalar>,
        primitive: SuperDiffOp,
    },
}

fn sf_antiderivative(f: &SuperFunction) -> SuperFunction {
    SuperFunction {
        c_1: f.c_1.antiderivative(),
        c_t1: f.c_t1.antiderivative(),
        c_t2: f.c_t2.antiderivative(),
        c_t12: f.c_t12.antiderivative(),
    }
}

/// Antiderivative in `x` of every coefficient (a right inverse of the
/// `X_1`-action).
fn op_antiderivative(op: &SuperDiffOp) -> SuperDiffOp {
    SuperDiffOp::from_terms(
        op.terms()
            .iter()
            .map(|(k, c)| (*k, sf_antiderivative(c))),
        op.lambda().clone(),
        op.mu().clone(),
        op.variables(),
    )
    .expect("antiderivative keeps the variable set")
}

/// The weights of the cochain's monomial components (value weight minus
/// generator weight).
fn cochain_weights(c: &Cochain1) -> BTreeSet<Scalar> {
    let mut out = BTreeSet::new();
    for (g, op) in c.values() {
        for (key, mask, xexp, _) in op_entries(op) {
            let w = term_weight(
                c.lambda(),
                c.mu(),
                key,
                xexp,
                mask & 1 == 1,
                mask & 2 == 2,
            );
            out.insert(&w - &g.weight());
        }
    }
    out
}

/// The exhaustive candidate space for primitives beyond the forced
/// antiderivative part: `x`-free monomials of the cochain's parity whose
/// weight occurs in the residual cochains (plus weight zero).
fn primitive_candidates(
    lambda: &Scalar,
    mu: &Scalar,
    variables: Variables,
    parity: Parity,
    weights: &BTreeSet<Scalar>,
) -> Vec<MonOp> {
    let mut out = Vec::new();
    let mut all = weights.clone();
    all.insert(Scalar::ZERO);
    for w in all {
        out.extend(weight_candidates(lambda, mu, variables, &w, parity, 0));
    }
    out.sort();
    out.dedup();
    out
}

struct SpanProblem {
    /// Candidate monomials `K_i`.
    candidates: Vec<MonOp>,
    /// Image coordinate vectors `delta(K_i)`.
    images: Vec<SparseVec>,
    /// Residuals `c_j - delta(A0_j)` as coordinate vectors.
    residuals: Vec<SparseVec>,
    /// Forced parts `A0_j`.
    forced: Vec<SuperDiffOp>,
    index: CoordIndex,
    basis: Vec<GeneratorId>,
}

fn build_span_problem(cochains: &[&Cochain1]) -> Result<SpanProblem> {
    let first = cochains
        .first()
        .ok_or_else(|| Error::ParameterRange("no cochains supplied".into()))?;
    for c in cochains {
        first.check_compatible_pub(c)?;
    }
    let basis = basis_of(first.scope());
    let x1 = GeneratorId::X1;

    let mut weights = BTreeSet::new();
    let mut forced = Vec::new();
    let mut residual_cochains = Vec::new();
    for c in cochains {
        // delta(A)(X_1) = A' pins the primitive up to an x-free remainder.
        let a0 = op_antiderivative(&c.value(x1));
        let r = if a0.is_zero() {
            (*c).clone()
        } else {
            c.sub(&delta0(&a0, c.scope())?)?
        };
        weights.extend(cochain_weights(&r));
        forced.push(a0);
        residual_cochains.push(r);
    }

    let candidates = primitive_candidates(
        first.lambda(),
        first.mu(),
        first.variables(),
        first.parity(),
        &weights,
    );

    let mut index = CoordIndex::default();
    let mut images = Vec::new();
    for k in &candidates {
        let dk = delta0(
            &k.to_op(first.lambda(), first.mu(), first.variables()),
            first.scope(),
        )?;
        images.push(cochain1_vector(&dk, &basis, &mut index));
    }
    let mut residuals = Vec::new();
    for r in &residual_cochains {
        residuals.push(cochain1_vector(r, &basis, &mut index));
    }
    Ok(SpanProblem {
        candidates,
        images,
        residuals,
        forced,
        index,
        basis,
    })
}

fn coord_to_equation(c: Coord, basis: &[GeneratorId]) -> EquationCoord {
    EquationCoord {
        generator: basis[c.slot as usize],
        eps1: c.key.eps1,
        eps2: c.key.eps2,
        j: c.key.j,
        theta_mask: c.mask,
        x_exp: c.xexp,
    }
}

/// Decides whether any nonzero combination of the cochains is a
/// coboundary, returning machine-checkable evidence either way.
///
/// The search space for primitives is exhaustive: the `X_1`-slot forces
/// the primitive up to an `x`-free remainder, the `X_x`-slot confines
/// that remainder to the weights present in the residual, and in each
/// weight the derivative order of an `x`-free monomial is determined.
pub fn certify_span(cochains: &[&Cochain1]) -> Result<SpanOutcome> {
    let problem = build_span_problem(cochains)?;
    let n_cands = problem.candidates.len() as u32;
    let n_coch = cochains.len() as u32;

    // Unknowns: kappa_0..kappa_{m-1}, then alpha_0..alpha_{n-1}.
    // For each coordinate xi: sum_i kappa_i delta(K_i)[xi] = sum_j alpha_j r_j[xi].
    let mut per_coord: BTreeMap<u32, SparseVec> = BTreeMap::new();
    for (i, img) in problem.images.iter().enumerate() {
        for (xi, v) in img {
            per_coord.entry(*xi).or_default().push((i as u32, v.clone()));
        }
    }
    for (j, res) in problem.residuals.iter().enumerate() {
        for (xi, v) in res {
            per_coord
                .entry(*xi)
                .or_default()
                .push((n_cands + j as u32, -v));
        }
    }

    let mut sys = RrefSystem::new();
    let mut coord_of_eq: Vec<u32> = Vec::new();
    for (xi, row) in per_coord {
        let eq_index = coord_of_eq.len() as u32;
        coord_of_eq.push(xi);
        sys.add_equation(eq_index, sparse_from_entries(row), Scalar::ZERO)
            .expect("homogeneous system");
    }

    // Rows whose pivot lies in the alpha range involve no kappa unknowns:
    // their traces are functionals annihilating every delta(K_i).
    let mut alpha_rows: Vec<(SparseVec, SparseVec)> = Vec::new(); // (alpha coeffs, trace)
    for (pivot, coeffs, _, trace) in sys.rows() {
        if pivot >= n_cands {
            let alpha_part: SparseVec = coeffs
                .iter()
                .map(|(c, v)| (c - n_cands, v.clone()))
                .collect();
            alpha_rows.push((alpha_part, trace.clone()));
        }
    }

    if alpha_rows.len() as u32 == n_coch {
        // Full rank on alpha: only the zero combination is a coboundary.
        let mut functionals = Vec::new();
        let mut pairings = Vec::new();
        for (alpha_part, trace) in &alpha_rows {
            let functional: Vec<(EquationCoord, Scalar)> = trace
                .iter()
                .map(|(eq, s)| {
                    let coord = problem.index.coords[coord_of_eq[*eq as usize] as usize];
                    (coord_to_equation(coord, &problem.basis), s.clone())
                })
                .collect();
            // The eliminated row says sum_j (-phi(r_j)) alpha_j = 0 up to
            // sign bookkeeping: coefficient on alpha_j is -phi(r_j).
            let mut row_pair = vec![Scalar::ZERO; n_coch as usize];
            for (aj, v) in alpha_part {
                row_pair[*aj as usize] = -v;
            }
            functionals.push(functional);
            pairings.push(row_pair);
        }
        return Ok(SpanOutcome::Independent {
            functionals,
            pairings,
        });
    }

    // The alpha projection of the solution set is the kernel of the
    // alpha rows: pick a nonzero member and solve for the kappas.
    let mut alpha_sys = RrefSystem::new();
    for (i, (alpha_part, _)) in alpha_rows.iter().enumerate() {
        alpha_sys
            .add_equation(i as u32, alpha_part.clone(), Scalar::ZERO)
            .expect("homogeneous system");
    }
    let kernel = alpha_sys.nullspace(n_coch);
    let alpha_vec = kernel.first().expect("rank deficit implies a kernel");
    let mut coefficients = vec![Scalar::ZERO; n_coch as usize];
    for (j, v) in alpha_vec {
        coefficients[*j as usize] = v.clone();
    }

    // Solve sum_i kappa_i delta(K_i) = sum_j alpha_j r_j exactly.
    let mut rhs_vec: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (j, res) in problem.residuals.iter().enumerate() {
        for (xi, v) in res {
            let acc = rhs_vec.entry(*xi).or_insert(Scalar::ZERO);
            *acc = &*acc + &(v * &coefficients[j]);
        }
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    for (i, img) in problem.images.iter().enumerate() {
        for (xi, _) in img {
            seen.insert(*xi);
        }
        let _ = i;
    }
    seen.extend(rhs_vec.keys().copied());
    for xi in seen {
        let mut row = Vec::new();
        for (i, img) in problem.images.iter().enumerate() {
            let v = crate::linalg::coeff_at(img, xi);
            if !v.is_zero() {
                row.push((i as u32, v));
            }
        }
        rows.push(sparse_from_entries(row));
        rhs.push(rhs_vec.get(&xi).cloned().unwrap_or(Scalar::ZERO));
    }
    let kappa = crate::linalg::solve_with_certificate(&rows, &rhs)
        .expect("alpha kernel membership guarantees feasibility");

    let first = cochains[0];
    let mut primitive = SuperDiffOp::zero(
        first.lambda().clone(),
        first.mu().clone(),
        first.variables(),
    );
    for (j, a0) in problem.forced.iter().enumerate() {
        primitive = primitive.add(&a0.scale(&coefficients[j]))?;
    }
    for (i, s) in &kappa {
        let k = problem.candidates[*i as usize].to_op(
            first.lambda(),
            first.mu(),
            first.variables(),
        );
        primitive = primitive.add(&k.scale(s))?;
    }

    // Exact verification: delta(primitive) equals the combination.
    let mut target = Cochain1::zero(
        first.lambda().clone(),
        first.mu().clone(),
        first.parity(),
        first.scope(),
        first.variables(),
    );
    for (j, c) in cochains.iter().enumerate() {
        target = target.add(&c.scale(&coefficients[j]))?;
    }
    let check = if primitive.is_zero() {
        Cochain1::zero(
            first.lambda().clone(),
            first.mu().clone(),
            first.parity(),
            first.scope(),
            first.variables(),
        )
    } else {
        delta0(&primitive, first.scope())?
    };
    if check.values() != target.values() {
        return Err(Error::ParameterRange(
            "internal error: solved primitive failed re-substitution".into(),
        ));
    }
    Ok(SpanOutcome::Combination {
        coefficients,
        primitive,
    })
}

/// Exact coboundary solve for a single cochain.
pub fn coboundary_solve(c: &Cochain1) -> Result<CoboundaryOutcome> {
    match certify_span(&[c])? {
        SpanOutcome::Combination {
            coefficients,
            primitive,
        } => {
            let inv = coefficients[0].recip();
            Ok(CoboundaryOutcome::Primitive(primitive.scale(&inv)))
        }
        SpanOutcome::Independent {
            functionals,
            pairings,
        } => Ok(CoboundaryOutcome::Obstructed(NontrivialityCertificate {
            functional: functionals.into_iter().next().expect("one certificate"),
            pairing: pairings[0][0].clone(),
        })),
    }
}

impl NontrivialityCertificate {
    /// Re-verifies the certificate against a cochain from scratch: the
    /// functional must annihilate the image of every candidate primitive
    /// and pair with the cochain to the recorded nonzero value.
    pub fn verify(&self, c: &Cochain1) -> Result<bool> {
        if self.pairing.is_zero() {
            return Ok(false);
        }
        let problem = build_span_problem(&[c])?;
        let mut dense: BTreeMap<Coord, Scalar> = BTreeMap::new();
        for (eq, s) in &self.functional {
            let coord = Coord {
                slot: match problem.basis.iter().position(|g| *g == eq.generator) {
                    Some(i) => i as u32,
                    None => return Ok(false),
                },
                key: OpKey::new(eq.eps1, eq.eps2, eq.j),
                mask: eq.theta_mask,
                xexp: eq.x_exp,
            };
            let acc = dense.entry(coord).or_insert(Scalar::ZERO);
            *acc = &*acc + s;
        }
        let eval = |vec: &SparseVec| -> Scalar {
            let mut acc = Scalar::ZERO;
            for (xi, v) in vec {
                let coord = problem.index.coords[*xi as usize];
                if let Some(s) = dense.get(&coord) {
                    acc += s * v;
                }
            }
            acc
        };
        for img in &problem.images {
            if !eval(img).is_zero() {
                return Ok(false);
            }
        }
        Ok(eval(&problem.residuals[0]) == self.pairing)
    }
}

impl Cochain1 {
    fn check_compatible_pub(&self, rhs: &Cochain1) -> Result<()> {
        self.check_compatible(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_homogeneous_op(seed: u64) -> SuperDiffOp {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let parity_pick = r.gen_range(0..2);
        let mut op = SuperDiffOp::zero(Scalar::new(-1, 2), Scalar::new(1, 2), Variables::TwoTheta);
        for _ in 0..4 {
            let e1 = r.gen_range(0..2) as u8;
            let e2 = r.gen_range(0..2) as u8;
            let j = r.gen_range(0..2);
            // Match overall parity.
            let want_odd = parity_pick == 1;
            let eta_odd = (e1 + e2) % 2 == 1;
            let (t1, t2) = if want_odd != eta_odd {
                if r.gen_range(0..2) == 0 {
                    (true, false)
                } else {
                    (false, true)
                }
            } else if r.gen_range(0..3) == 0 {
                (true, true)
            } else {
                (false, false)
            };
            let c = Scalar::new(r.gen_range(-3..=3), r.gen_range(1..=2));
            let m = SuperFunction::monomial(c, r.gen_range(0..2), t1, t2);
            op = op
                .add(
                    &SuperDiffOp::from_terms(
                        [(OpKey::new(e1, e2, j), m)],
                        Scalar::new(-1, 2),
                        Scalar::new(1, 2),
                        Variables::TwoTheta,
                    )
                    .unwrap(),
                )
                .unwrap();
        }
        op
    }

    #[test]
    fn delta_squares_to_zero() {
        for seed in 0..12u64 {
            let a = random_homogeneous_op(seed);
            if a.parity().is_none() {
                continue;
            }
            let c = delta0(&a, Algebra::Osp22).unwrap();
            let d = delta1(&c).unwrap();
            assert!(d.is_zero(), "seed {seed}");
        }
    }

    #[test]
    fn coboundaries_solve_back() {
        for seed in 0..8u64 {
            let a = random_homogeneous_op(seed);
            if a.parity().is_none() || a.is_zero() {
                continue;
            }
            let c = delta0(&a, Algebra::Osp22).unwrap();
            if c.is_zero() {
                continue;
            }
            match coboundary_solve(&c).unwrap() {
                CoboundaryOutcome::Primitive(p) => {
                    assert_eq!(delta0(&p, Algebra::Osp22).unwrap(), c, "seed {seed}");
                }
                CoboundaryOutcome::Obstructed(_) => {
                    panic!("seed {seed}: genuine coboundary reported obstructed")
                }
            }
        }
    }

    #[test]
    fn windows_and_weights_enumerate_consistently() {
        let lam = Scalar::new(-1, 2);
        let mu = Scalar::new(1, 2);
        let trunc = Truncation {
            order: 4,
            degree: 2,
        };
        for m in window_monomials(Variables::TwoTheta, trunc) {
            let w = m.weight(&lam, &mu);
            let found = weight_candidates(&lam, &mu, Variables::TwoTheta, &w, m.parity(), 2);
            assert!(found.contains(&m), "{m:?} missing from its weight class");
        }
    }

    #[test]
    fn invariant_elements_are_invariant() {
        let lam = Scalar::new(1, 2);
        for mu_num in [1i64, 2, 3] {
            let mu = Scalar::new(mu_num, 2);
            for a in invariant_module_elements(&lam, &mu, Variables::TwoTheta).unwrap() {
                for g in basis_of(Algebra::Osp12) {
                    let field = ContactField::from_id(g, Variables::TwoTheta).unwrap();
                    assert!(module_action(&field, &a).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn relative_requires_full_scope() {
        let r = h1_dimension(
            &Scalar::ZERO,
            &Scalar::ZERO,
            Algebra::Osp12,
            Variables::OneTheta,
            true,
            None,
        );
        assert!(r.is_err());
    }
}
