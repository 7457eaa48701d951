//! Differential-operator layer checked against the independent oracle
//! engine and against structural identities of the module action.

mod common;

use common::*;
use rand::Rng;
use supercontact::diffop::{
    from_action, lie_derivative, module_action, op_apply, op_compose, phi_split, psi_components,
    psi_transport, weight_of, OpKey, SuperDiffOp,
};
use supercontact::{
    basis_of, contact_bracket, Algebra, ContactField, Density, Parity, Scalar, SuperFunction,
    Variables,
};

fn random_parity(r: &mut rand_chacha::ChaCha8Rng) -> Parity {
    if r.gen_range(0..2) == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// A random normal-form operator together with its oracle-side rows.
fn random_op_with_rows(
    r: &mut rand_chacha::ChaCha8Rng,
    lambda: Scalar,
    mu: Scalar,
) -> (SuperDiffOp, Vec<(u8, u8, u32, OFn)>) {
    let mut terms = Vec::new();
    let mut rows = Vec::new();
    for _ in 0..r.gen_range(1..=4) {
        let e1 = r.gen_range(0..2) as u8;
        let e2 = r.gen_range(0..2) as u8;
        let j = r.gen_range(0..3);
        let coeff = random_any(r, 2);
        rows.push((e1, e2, j, coeff.clone()));
        terms.push((OpKey::new(e1, e2, j), coeff.to_superfunction()));
    }
    let op = SuperDiffOp::from_terms(terms, lambda, mu, Variables::TwoTheta).unwrap();
    (op, rows)
}

#[test]
fn operator_application_matches_oracle() {
    let mut r = rng(9001);
    for case in 0..120 {
        let (op, rows) = random_op_with_rows(&mut r, Scalar::new(-1, 2), Scalar::new(1, 4));
        let g = random_any(&mut r, 3);
        let via_lib = op_apply(&op, &g.to_superfunction()).unwrap();
        let via_oracle = oracle_op_apply(&rows, &g).to_superfunction();
        assert_eq!(via_lib, via_oracle, "case {case}");
    }
}

#[test]
fn composition_matches_oracle_application() {
    let mut r = rng(9002);
    for case in 0..60 {
        let (outer, rows_a) = random_op_with_rows(&mut r, Scalar::new(1, 2), Scalar::from_int(1));
        let (inner, rows_b) = random_op_with_rows(&mut r, Scalar::new(-1, 2), Scalar::new(1, 2));
        let composed = op_compose(&outer, &inner).unwrap();
        let g = random_any(&mut r, 3);
        let via_lib = op_apply(&composed, &g.to_superfunction()).unwrap();
        let via_oracle = oracle_op_apply(&rows_a, &oracle_op_apply(&rows_b, &g)).to_superfunction();
        assert_eq!(via_lib, via_oracle, "case {case}");
    }
}

#[test]
fn weighted_action_operator_matches_oracle() {
    let mut r = rng(9003);
    for case in 0..80 {
        let pf = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3);
        let lambda = random_scalar(&mut r);
        let op = lie_derivative(&f.to_superfunction(), &lambda, Variables::TwoTheta).unwrap();
        let g = random_any(&mut r, 3);
        assert_eq!(
            op_apply(&op, &g.to_superfunction()).unwrap(),
            oracle_weighted_action(&f, &lambda, &g).to_superfunction(),
            "case {case}"
        );
    }
}

#[test]
fn module_action_represents_the_bracket() {
    // X_F . (X_G . A) - (-1)^{|F||G|} X_G . (X_F . A) = [X_F, X_G] . A
    // over random homogeneous generators and random operators.
    let mut r = rng(9004);
    for case in 0..40 {
        let pf = random_parity(&mut r);
        let pg = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 2);
        let g = random_homogeneous(&mut r, pg, 2);
        let (a, _) = random_op_with_rows(&mut r, Scalar::new(-3, 4), Scalar::new(1, 2));
        let xf = ContactField::new(f.to_superfunction(), Variables::TwoTheta).unwrap();
        let xg = ContactField::new(g.to_superfunction(), Variables::TwoTheta).unwrap();
        let fg = contact_bracket(&f.to_superfunction(), &g.to_superfunction()).unwrap();
        let lhs_sign = if pf.is_odd() && pg.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let lhs = module_action(&xf, &module_action(&xg, &a).unwrap())
            .unwrap()
            .sub(
                &module_action(&xg, &module_action(&xf, &a).unwrap())
                    .unwrap()
                    .scale(&lhs_sign),
            )
            .unwrap();
        let rhs = if fg.is_zero() {
            SuperDiffOp::zero(a.lambda().clone(), a.mu().clone(), Variables::TwoTheta)
        } else {
            let xfg = ContactField::new(fg, Variables::TwoTheta).unwrap();
            module_action(&xfg, &a).unwrap()
        };
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn module_action_is_a_derivation_for_composition() {
    // X . (A . B) = (X . A) . B + (-1)^{|X||A|} A . (X . B)
    // for homogeneous A.
    let mut r = rng(9005);
    for case in 0..40 {
        let pf = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 2);
        let x = ContactField::new(f.to_superfunction(), Variables::TwoTheta).unwrap();
        let (a_raw, _) = random_op_with_rows(&mut r, Scalar::new(1, 2), Scalar::from_int(1));
        let (a_even, a_odd) = a_raw.parity_split();
        let (a, pa) = if case % 2 == 0 && !a_even.is_zero() {
            (a_even, Parity::Even)
        } else if !a_odd.is_zero() {
            (a_odd, Parity::Odd)
        } else {
            (a_even, Parity::Even)
        };
        let (b, _) = random_op_with_rows(&mut r, Scalar::new(-1, 2), Scalar::new(1, 2));
        let lhs = module_action(&x, &op_compose(&a, &b).unwrap()).unwrap();
        let sign = if pf.is_odd() && pa.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let rhs = op_compose(&module_action(&x, &a).unwrap(), &b)
            .unwrap()
            .add(&op_compose(&a, &module_action(&x, &b).unwrap())
                .unwrap()
                .scale(&sign))
            .unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn weights_add_under_composition() {
    let mut r = rng(9006);
    for _ in 0..40 {
        let e1 = r.gen_range(0..2) as u8;
        let e2 = r.gen_range(0..2) as u8;
        let j = r.gen_range(0..3);
        let (t1, t2) = (r.gen_range(0..2) == 1, r.gen_range(0..2) == 1);
        let a = SuperDiffOp::from_terms(
            [(
                OpKey::new(e1, e2, j),
                SuperFunction::monomial(Scalar::ONE, 0, t1, t2),
            )],
            Scalar::new(1, 2),
            Scalar::from_int(1),
            Variables::TwoTheta,
        )
        .unwrap();
        let f1 = r.gen_range(0..2) as u8;
        let f2 = r.gen_range(0..2) as u8;
        let i = r.gen_range(0..3);
        let (s1, s2) = (r.gen_range(0..2) == 1, r.gen_range(0..2) == 1);
        let b = SuperDiffOp::from_terms(
            [(
                OpKey::new(f1, f2, i),
                SuperFunction::monomial(Scalar::ONE, 0, s1, s2),
            )],
            Scalar::new(-1, 2),
            Scalar::new(1, 2),
            Variables::TwoTheta,
        )
        .unwrap();
        let composed = op_compose(&a, &b).unwrap();
        if composed.is_zero() {
            continue;
        }
        assert_eq!(
            weight_of(&composed).unwrap(),
            &weight_of(&a).unwrap() + &weight_of(&b).unwrap()
        );
    }
}

#[test]
fn density_split_intertwines_spanning_fields() {
    // The component split respects the weighted action of every t2-free
    // field, with the second component at weight raised by one half.
    let mut r = rng(9007);
    for case in 0..50 {
        let lambda = random_scalar(&mut r);
        let body = random_any(&mut r, 3).to_superfunction();
        let d = Density::new(body, lambda.clone(), Variables::TwoTheta).unwrap();
        for id in basis_of(Algebra::Osp12) {
            let two = ContactField::from_id(id, Variables::TwoTheta).unwrap();
            let one = ContactField::from_id(id, Variables::OneTheta).unwrap();
            let (p1, p2) = phi_split(&d.apply_field(&two).unwrap()).unwrap();
            let (q1, q2) = phi_split(&d).unwrap();
            assert_eq!(p1, q1.apply_field(&one).unwrap(), "case {case} {id} first");
            assert_eq!(p2, q2.apply_field(&one).unwrap(), "case {case} {id} second");
        }
    }
}

#[test]
fn transport_respects_application_on_split_components() {
    // A transported block quadruple applied to F = F1 + F2 t2 produces
    // exactly (a F1 + d F2) + (c F1 + b F2) t2.
    let mut r = rng(9008);
    let lam = Scalar::new(-1, 2);
    let mu = Scalar::new(1, 2);
    let half = Scalar::new(1, 2);
    for case in 0..30 {
        let mk = |r: &mut rand_chacha::ChaCha8Rng, l: Scalar, m: Scalar| {
            let mut terms = Vec::new();
            for _ in 0..r.gen_range(1..=3) {
                let e1 = r.gen_range(0..2) as u8;
                let j = r.gen_range(0..3);
                let t1 = r.gen_range(0..2) == 1;
                let c = Scalar::new(r.gen_range(-3..=3), r.gen_range(1..=2));
                terms.push((
                    OpKey::new(e1, 0, j),
                    SuperFunction::monomial(c, r.gen_range(0..2), t1, false),
                ));
            }
            SuperDiffOp::from_terms(terms, l, m, Variables::OneTheta).unwrap()
        };
        let a = mk(&mut r, lam.clone(), mu.clone());
        let b = mk(&mut r, &lam + &half, &mu + &half);
        let c = mk(&mut r, lam.clone(), &mu + &half);
        let d = mk(&mut r, &lam + &half, mu.clone());
        let lifted = psi_transport(&a, &b, &c, &d).unwrap();

        let f = random_any(&mut r, 3).to_superfunction();
        let (f1, f2) = f.theta2_components();
        let image = op_apply(&lifted, &f).unwrap();
        let (g1, g2) = image.theta2_components();
        let want1 = op_apply(&a, &f1).unwrap().add(&op_apply(&d, &f2).unwrap());
        let want2 = op_apply(&c, &f1).unwrap().add(&op_apply(&b, &f2).unwrap());
        assert_eq!(g1, want1, "case {case} first component");
        assert_eq!(g2, want2, "case {case} second component");

        // And the block decomposition recovers the quadruple.
        let (a2, b2, c2, d2) = psi_components(&lifted).unwrap();
        assert_eq!((a2, b2, c2, d2), (a, b, c, d), "case {case} round trip");
    }
}

#[test]
fn reconstruction_from_action_is_exact() {
    let mut r = rng(9009);
    for case in 0..30 {
        let (op, _) = random_op_with_rows(&mut r, Scalar::new(2, 3), Scalar::new(-1, 3));
        let max_j = op.terms().keys().map(|k| k.j).max().unwrap_or(0);
        let rebuilt = from_action(
            &mut |g| op_apply(&op, g),
            op.lambda().clone(),
            op.mu().clone(),
            Variables::TwoTheta,
            max_j + 1,
        )
        .unwrap();
        assert_eq!(rebuilt, op, "case {case}");
    }
}
