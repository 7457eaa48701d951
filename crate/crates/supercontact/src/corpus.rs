//! Seeded pseudo-random corpora of superfunctions and operators.
//!
//! The verification suite and the command-line reports draw their sample
//! inputs from here, so every run over the same seed exercises byte-identical
//! cases. Coefficients are small rationals to keep exact arithmetic readable
//! in witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::Variables;
use crate::diffop::{OpKey, SuperDiffOp};
use crate::scalar::Scalar;
use crate::superfield::{Parity, SuperFunction};

/// Deterministic stream cipher RNG for reproducible corpora.
pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small random rational, numerator in `-6..=6`, denominator in `{1,2,3,4}`.
pub fn random_scalar(r: &mut ChaCha8Rng) -> Scalar {
    let n = r.gen_range(-6i64..=6);
    let d = *[1i64, 1, 1, 2, 2, 3, 4].get(r.gen_range(0..7)).unwrap();
    Scalar::new(n, d)
}

fn theta_flags(variables: Variables, parity: Parity) -> &'static [(bool, bool)] {
    match (variables, parity) {
        (Variables::TwoTheta, Parity::Even) => &[(false, false), (true, true)],
        (Variables::TwoTheta, Parity::Odd) => &[(true, false), (false, true)],
        (Variables::OneTheta, Parity::Even) => &[(false, false)],
        (Variables::OneTheta, Parity::Odd) => &[(true, false)],
    }
}

/// Random nonzero parity-homogeneous superfunction with x-degree at most
/// `max_deg`, supported on the given variable set.
pub fn random_homogeneous(
    r: &mut ChaCha8Rng,
    variables: Variables,
    parity: Parity,
    max_deg: u32,
) -> SuperFunction {
    loop {
        let mut f = SuperFunction::zero();
        for &(t1, t2) in theta_flags(variables, parity) {
            for e in 0..=max_deg {
                if r.gen_bool(0.45) {
                    f = f.add(&SuperFunction::monomial(random_scalar(r), e, t1, t2));
                }
            }
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random nonzero superfunction with no parity constraint (even, odd, or a
/// genuine mix, with equal probability).
pub fn random_mixed(r: &mut ChaCha8Rng, variables: Variables, max_deg: u32) -> SuperFunction {
    let even = random_homogeneous(r, variables, Parity::Even, max_deg);
    let odd = random_homogeneous(r, variables, Parity::Odd, max_deg);
    match r.gen_range(0..3) {
        0 => even,
        1 => odd,
        _ => even.add(&odd),
    }
}

/// Random nonzero parity-homogeneous differential operator between the
/// given weights, with derivative order at most `max_order` and coefficient
/// x-degree at most `max_deg`.
pub fn random_operator(
    r: &mut ChaCha8Rng,
    lambda: &Scalar,
    mu: &Scalar,
    variables: Variables,
    parity: Parity,
    max_order: u32,
    max_deg: u32,
) -> SuperDiffOp {
    let eps: &[(u8, u8)] = match variables {
        Variables::TwoTheta => &[(0, 0), (1, 0), (0, 1), (1, 1)],
        Variables::OneTheta => &[(0, 0), (1, 0)],
    };
    loop {
        let mut terms = Vec::new();
        for &(e1, e2) in eps {
            let word_parity = if (e1 + e2) % 2 == 1 {
                Parity::Odd
            } else {
                Parity::Even
            };
            let coeff_parity = parity.compose(word_parity);
            for j in 0..=max_order {
                if r.gen_bool(0.4) {
                    terms.push((
                        OpKey::new(e1, e2, j),
                        random_homogeneous(r, variables, coeff_parity, max_deg),
                    ));
                }
            }
        }
        let op = SuperDiffOp::from_terms(terms, lambda.clone(), mu.clone(), variables)
            .expect("corpus terms respect the variable set");
        if !op.is_zero() {
            return op;
        }
    }
}
