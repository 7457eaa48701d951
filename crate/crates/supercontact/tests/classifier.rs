//! Classification of invariant bilinear operators on weighted densities:
//! frozen hand values, closed-form agreement at every solvable cell, the
//! constraint-variety scans, functional invariance on seeded corpora, and
//! the block/embedding structure of the solution spaces.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{random_one_theta, random_one_theta_any, rng};
use supercontact::linalg::{solve_with_certificate, sparse_from_entries, SparseVec};
use supercontact::{
    basis_of, check_closed_form, classify, closed_form, constraint_polynomial,
    scan_constraint_variety, weighted_action, Algebra, BilinearOp, ContactField, FWord, HKind,
    HWord, MuRule, Parity, Scalar, SuperFunction, Variables,
};

type TermMap = BTreeMap<(HWord, FWord), Scalar>;

fn term_map(op: &BilinearOp) -> TermMap {
    op.terms()
        .iter()
        .map(|t| ((t.h_word, t.f_word), t.coeff.clone()))
        .collect()
}

fn hw(eta: u8, dx: u32) -> HWord {
    HWord { eta, dx }
}

fn fw(theta: bool, eta: u8, dx: u32) -> FWord {
    FWord { theta, eta, dx }
}

/// `a` and `b` are nonzero scalar multiples of each other.
fn proportional(a: &TermMap, b: &TermMap) -> bool {
    if !a.keys().eq(b.keys()) {
        return false;
    }
    let Some(first) = a.keys().next() else {
        return true;
    };
    let ratio = &b[first] / &a[first];
    !ratio.is_zero() && a.iter().all(|(key, v)| v * &ratio == b[key])
}

fn quarter_grid() -> Vec<Scalar> {
    (-8..=8).map(|n| Scalar::new(n, 4)).collect()
}

/// The basis elements of the coefficient space, with the density weight of
/// the space each one is realized in.
fn coefficient_basis(source: HKind) -> Vec<(SuperFunction, Scalar, Parity)> {
    let half = Scalar::new(-1, 2);
    match source {
        HKind::H0 => vec![
            (SuperFunction::one(), half.clone(), Parity::Even),
            (SuperFunction::x(), half, Parity::Even),
        ],
        HKind::H1 => vec![(SuperFunction::one(), Scalar::ZERO, Parity::Even)],
        HKind::Full => vec![
            (SuperFunction::one(), half.clone(), Parity::Even),
            (SuperFunction::x(), half.clone(), Parity::Even),
            (SuperFunction::theta1(), half, Parity::Odd),
        ],
    }
}

/// Checks the exact invariance identity of `op` on the argument pair
/// `(h, f)` against every generator of `algebra`:
/// the action on the value equals the signed sum of the values on the
/// transported arguments.
fn assert_exactly_invariant(
    algebra: Algebra,
    op: &BilinearOp,
    h: &SuperFunction,
    omega: &Scalar,
    hp: Parity,
    f: &SuperFunction,
    label: &str,
) {
    let value = op.apply(h, f).unwrap();
    for g in basis_of(algebra) {
        let field = ContactField::from_id(g, Variables::OneTheta).unwrap();
        let xp = field.parity();
        let lhs = weighted_action(field.generator(), op.mu(), &value).unwrap();
        let xh = weighted_action(field.generator(), omega, h).unwrap();
        let xf = weighted_action(field.generator(), op.lambda(), f).unwrap();
        let mut s_a = Scalar::ONE;
        if op.parity().is_odd() && xp.is_odd() {
            s_a = -&s_a;
        }
        let mut s_b = s_a.clone();
        if xp.is_odd() && hp.is_odd() {
            s_b = -&s_b;
        }
        let rhs = op
            .apply(&xh, f)
            .unwrap()
            .scale(&s_a)
            .add(&op.apply(h, &xf).unwrap().scale(&s_b));
        assert!(
            lhs.sub(&rhs).is_zero(),
            "invariance defect of {label} under generator {g:?}"
        );
    }
}

#[test]
fn low_order_solutions_match_hand_values() {
    // Order zero, even half-step rule: multiplication, at a generic weight.
    let third = Scalar::new(1, 3);
    let r = classify(Algebra::Sl2, HKind::H0, &third, 0, None).unwrap();
    assert_eq!(r.dimension(), 1);
    assert_eq!(r.mu, Scalar::new(-1, 6));
    let sol = &r.solution_basis[0];
    assert_eq!(sol.parity(), Parity::Even);
    assert_eq!(sol.source(), HKind::H0);
    let expect: TermMap = [((hw(0, 0), fw(false, 0, 0)), Scalar::ONE)].into();
    assert!(proportional(&term_map(sol), &expect));
    let x = SuperFunction::x();
    let x2 = x.mul(&x);
    let x3 = x2.mul(&x);
    let c = &term_map(sol)[&(hw(0, 0), fw(false, 0, 0))];
    assert!(sol.apply(&x, &x2).unwrap().sub(&x3.scale(c)).is_zero());

    // Order one, even half-step rule.
    let lam = Scalar::new(3, 4);
    let r = classify(Algebra::Sl2, HKind::H0, &lam, 1, None).unwrap();
    assert_eq!(r.dimension(), 1);
    let cf = closed_form(Algebra::Sl2, HKind::H0, MuRule::HalfStep, &lam, 1).unwrap();
    let expect: TermMap = [
        ((hw(0, 0), fw(false, 0, 1)), Scalar::ONE),
        ((hw(0, 1), fw(false, 0, 0)), Scalar::new(3, 2)),
    ]
    .into();
    assert_eq!(term_map(&cf), expect);
    assert!(proportional(&term_map(&r.solution_basis[0]), &expect));
    // Value on (x, x): x * 1 + 3/2 * 1 * x.
    let got = cf.apply(&x, &x).unwrap();
    assert!(got.sub(&x.scale(&Scalar::new(5, 2))).is_zero());

    // The parity-shifted one-dimensional source at order zero:
    // multiplication again, for every weight.
    let r = classify(Algebra::Sl2, HKind::H1, &Scalar::new(2, 5), 0, None).unwrap();
    assert_eq!(r.dimension(), 1);
    assert_eq!(r.mu, Scalar::new(2, 5));
    assert!(proportional(
        &term_map(&r.solution_basis[0]),
        &[((hw(0, 0), fw(false, 0, 0)), Scalar::ONE)].into()
    ));

    // Odd integer-step rule at order zero, generic weight.
    let one = Scalar::ONE;
    let r = classify(Algebra::Osp12, HKind::Full, &one, 0, Some(MuRule::IntegerStep)).unwrap();
    assert_eq!(r.dimension(), 1);
    let sol = &r.solution_basis[0];
    assert_eq!(sol.parity(), Parity::Odd);
    let expect: TermMap = [
        ((hw(0, 0), fw(false, 1, 0)), Scalar::ONE),
        ((hw(1, 0), fw(false, 0, 0)), Scalar::from_int(2)),
    ]
    .into();
    assert!(proportional(&term_map(sol), &expect));

    // Odd integer-step rule at order one, weight zero: value on (x, x t1).
    let zero = Scalar::ZERO;
    let cf = closed_form(Algebra::Osp12, HKind::Full, MuRule::IntegerStep, &zero, 1).unwrap();
    let xt1 = x.mul(&SuperFunction::theta1());
    let got = cf.apply(&x, &xt1).unwrap();
    assert!(got.sub(&x.scale(&Scalar::from_int(2))).is_zero());
    let r = classify(Algebra::Osp12, HKind::Full, &zero, 1, Some(MuRule::IntegerStep)).unwrap();
    assert_eq!(r.dimension(), 1);
    assert!(proportional(&term_map(&r.solution_basis[0]), &term_map(&cf)));

    // Even half-step rule at order two, weight -1/2: value on (t1, x^2).
    let mhalf = Scalar::new(-1, 2);
    let cf = closed_form(Algebra::Osp12, HKind::Full, MuRule::HalfStep, &mhalf, 2).unwrap();
    let got = cf.apply(&SuperFunction::theta1(), &x2).unwrap();
    let want = SuperFunction::theta1().scale(&Scalar::from_int(-2));
    assert!(got.sub(&want).is_zero());
    let r = classify(Algebra::Osp12, HKind::Full, &mhalf, 2, Some(MuRule::HalfStep)).unwrap();
    assert_eq!(r.dimension(), 1);
    assert_eq!(r.mu, Scalar::ONE);
    assert!(proportional(&term_map(&r.solution_basis[0]), &term_map(&cf)));
}

#[test]
fn closed_forms_agree_at_every_solvable_cell_and_only_there() {
    let problems = [
        (Algebra::Sl2, HKind::H0, MuRule::HalfStep),
        (Algebra::Sl2, HKind::H1, MuRule::IntegerStep),
        (Algebra::Osp12, HKind::Full, MuRule::HalfStep),
        (Algebra::Osp12, HKind::Full, MuRule::IntegerStep),
    ];
    for (algebra, source, rule) in problems {
        for lam in quarter_grid() {
            for k in 0..=4u32 {
                let r = classify(algebra, source, &lam, k, Some(rule)).unwrap();
                let obstruction = constraint_polynomial(algebra, source, rule, &lam, k)
                    .expect("the four named problems all carry a constraint polynomial");
                assert_eq!(r.constraint_evaluation, Some(obstruction.clone()));
                if obstruction.is_zero() {
                    assert_eq!(
                        r.dimension(),
                        1,
                        "expected a line of solutions at {algebra:?}/{source:?}/{rule:?} \
                         lambda={lam} k={k}"
                    );
                    check_closed_form(&r).unwrap();
                } else {
                    assert_eq!(
                        r.dimension(),
                        0,
                        "expected no solutions at {algebra:?}/{source:?}/{rule:?} \
                         lambda={lam} k={k}"
                    );
                }
            }
        }
    }
}

#[test]
fn constraint_variety_scans_match_their_polynomials() {
    let grid = quarter_grid();

    let count = |cells: &[supercontact::VarietyCell], rule: MuRule| {
        cells
            .iter()
            .filter(|c| c.rule == rule && c.dimension > 0)
            .count()
    };

    let cells = scan_constraint_variety(Algebra::Sl2, HKind::H0, &grid, 4).unwrap();
    assert_eq!(cells.len(), 85);
    assert!(cells.iter().all(|c| c.matches_constraint));
    assert_eq!(count(&cells, MuRule::HalfStep), 40);

    let cells = scan_constraint_variety(Algebra::Sl2, HKind::H1, &grid, 4).unwrap();
    assert_eq!(cells.len(), 85);
    assert!(cells.iter().all(|c| c.matches_constraint));
    assert_eq!(count(&cells, MuRule::IntegerStep), 21);

    let cells = scan_constraint_variety(Algebra::Osp12, HKind::Full, &grid, 4).unwrap();
    assert_eq!(cells.len(), 170);
    assert!(cells.iter().all(|c| c.matches_constraint));
    assert_eq!(count(&cells, MuRule::HalfStep), 37);
    assert_eq!(count(&cells, MuRule::IntegerStep), 25);

    // The splitting of the half-step zero set: classically both roots of
    // the quadratic factor carry solutions, while over the larger algebra
    // the second root is obstructed at every order >= 2.
    for k in 2..=4u32 {
        let second_root = Scalar::new(2 - i64::from(k), 2);
        let classical =
            classify(Algebra::Sl2, HKind::H0, &second_root, k, None).unwrap();
        assert_eq!(classical.dimension(), 1);
        let full = classify(
            Algebra::Osp12,
            HKind::Full,
            &second_root,
            k,
            Some(MuRule::HalfStep),
        )
        .unwrap();
        assert_eq!(full.dimension(), 0);
    }
}

#[test]
fn solutions_are_exactly_invariant_on_a_seeded_corpus() {
    let mut r = rng(0x1a5c_90de);
    let cells: Vec<(Algebra, HKind, Option<MuRule>, Scalar, u32)> = vec![
        (Algebra::Sl2, HKind::H0, None, Scalar::new(5, 4), 0),
        (Algebra::Sl2, HKind::H0, None, Scalar::new(-1, 2), 2),
        (Algebra::Sl2, HKind::H0, None, Scalar::ZERO, 2),
        (Algebra::Sl2, HKind::H0, None, Scalar::from_int(-1), 3),
        (Algebra::Sl2, HKind::H1, None, Scalar::ZERO, 1),
        (Algebra::Sl2, HKind::H1, None, Scalar::new(-1, 2), 2),
        (Algebra::Sl2, HKind::H1, None, Scalar::new(7, 4), 0),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::HalfStep),
            Scalar::new(-1, 4),
            1,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::HalfStep),
            Scalar::new(-1, 2),
            2,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::HalfStep),
            Scalar::from_int(-1),
            3,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::HalfStep),
            Scalar::from_int(2),
            0,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::IntegerStep),
            Scalar::ZERO,
            1,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::IntegerStep),
            Scalar::new(-1, 2),
            1,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::IntegerStep),
            Scalar::from_int(-1),
            2,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::IntegerStep),
            Scalar::new(-3, 2),
            3,
        ),
        (
            Algebra::Osp12,
            HKind::Full,
            Some(MuRule::IntegerStep),
            Scalar::ONE,
            0,
        ),
    ];
    for (algebra, source, rule, lam, k) in cells {
        let result = classify(algebra, source, &lam, k, rule).unwrap();
        assert!(
            result.dimension() > 0,
            "corpus cell {algebra:?}/{source:?} lambda={lam} k={k} \
             unexpectedly has no solutions"
        );
        let classical = algebra == Algebra::Sl2;
        for (bi, op) in result.solution_basis.iter().enumerate() {
            for trial in 0..3 {
                let f = if classical {
                    random_one_theta(&mut r, Parity::Even, 4).to_superfunction()
                } else {
                    random_one_theta_any(&mut r, 4).to_superfunction()
                };
                for (h, omega, hp) in coefficient_basis(source) {
                    let label = format!(
                        "{algebra:?}/{source:?} lambda={lam} k={k} basis #{bi} trial {trial}"
                    );
                    assert_exactly_invariant(algebra, op, &h, &omega, hp, &f, &label);
                }
            }
        }
    }
}

#[test]
fn super_solution_spaces_embed_into_the_sl2_solution_spaces() {
    for rule in [MuRule::HalfStep, MuRule::IntegerStep] {
        for lam in quarter_grid() {
            for k in 0..=4u32 {
                let full = classify(Algebra::Osp12, HKind::Full, &lam, k, Some(rule)).unwrap();
                if full.dimension() == 0 {
                    continue;
                }
                let ambient = classify(Algebra::Sl2, HKind::Full, &lam, k, Some(rule)).unwrap();
                assert!(
                    ambient.dimension() >= full.dimension(),
                    "restricting the equations cannot shrink the solution space \
                     (lambda={lam} k={k} rule={rule:?})"
                );
                let basis: Vec<TermMap> =
                    ambient.solution_basis.iter().map(term_map).collect();
                for op in &full.solution_basis {
                    let target = term_map(op);
                    let mut keys: BTreeSet<(HWord, FWord)> = target.keys().copied().collect();
                    for b in &basis {
                        keys.extend(b.keys().copied());
                    }
                    let mut rows: Vec<SparseVec> = Vec::new();
                    let mut rhs: Vec<Scalar> = Vec::new();
                    for key in &keys {
                        rows.push(sparse_from_entries(basis.iter().enumerate().filter_map(
                            |(i, b)| b.get(key).map(|c| (i as u32, c.clone())),
                        )));
                        rhs.push(target.get(key).cloned().unwrap_or(Scalar::ZERO));
                    }
                    solve_with_certificate(&rows, &rhs).unwrap_or_else(|_| {
                        panic!(
                            "solution at lambda={lam} k={k} rule={rule:?} escapes the \
                             span of the sl2-invariant space"
                        )
                    });
                }
            }
        }
    }
}

#[test]
fn half_step_solutions_restrict_to_the_classical_block_formula() {
    for lam in quarter_grid() {
        for k in 0..=4u32 {
            let full =
                classify(Algebra::Osp12, HKind::Full, &lam, k, Some(MuRule::HalfStep)).unwrap();
            if full.dimension() == 0 {
                continue;
            }
            let classical = closed_form(Algebra::Sl2, HKind::H0, MuRule::HalfStep, &lam, k)
                .unwrap();
            for op in &full.solution_basis {
                let block: TermMap = term_map(op)
                    .into_iter()
                    .filter(|((h, f), _)| h.eta == 0 && f.eta == 0 && !f.theta)
                    .collect();
                assert!(
                    proportional(&block, &term_map(&classical)),
                    "theta-free block at lambda={lam} k={k} does not match the \
                     classical formula"
                );
            }
        }
    }
}

#[test]
fn ill_posed_requests_are_rejected_at_the_api_surface() {
    // Wrong algebra for the problem.
    assert!(classify(Algebra::Osp22, HKind::Full, &Scalar::ZERO, 1, Some(MuRule::HalfStep))
        .is_err());
    assert!(classify(Algebra::PiH, HKind::H0, &Scalar::ZERO, 1, None).is_err());
    // The classical sources only make sense under the smaller algebra.
    assert!(classify(Algebra::Osp12, HKind::H0, &Scalar::ZERO, 1, None).is_err());
    assert!(classify(Algebra::Osp12, HKind::H1, &Scalar::ZERO, 1, None).is_err());
    // The full source needs an explicit weight-shift rule.
    assert!(classify(Algebra::Osp12, HKind::Full, &Scalar::ZERO, 1, None).is_err());
    // The classical sources each force their rule.
    assert!(classify(Algebra::Sl2, HKind::H0, &Scalar::ZERO, 1, Some(MuRule::IntegerStep))
        .is_err());
    assert!(classify(Algebra::Sl2, HKind::H1, &Scalar::ZERO, 1, Some(MuRule::HalfStep))
        .is_err());
    // Scans only cover the four named problems.
    assert!(scan_constraint_variety(Algebra::Sl2, HKind::Full, &[Scalar::ZERO], 1).is_err());
    assert!(scan_constraint_variety(Algebra::Osp12, HKind::H0, &[Scalar::ZERO], 1).is_err());
}
