//! Bracket and density-action checks against the independent oracle.

mod common;

use common::{
    oracle_bracket, oracle_field_apply, oracle_weighted_action, random_any, random_homogeneous,
    rng,
};
use rand::Rng;
use supercontact::{
    contact_bracket, field_apply, weighted_action, Parity, Scalar, SuperFunction,
};

fn random_parity(r: &mut rand_chacha::ChaCha8Rng) -> Parity {
    if r.gen_range(0..2) == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

#[test]
fn bracket_matches_oracle_on_random_pairs() {
    let mut r = rng(0xc0de_0001);
    for _ in 0..150 {
        let pf = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3);
        let g = random_any(&mut r, 3);
        let lib = contact_bracket(&f.to_superfunction(), &g.to_superfunction()).unwrap();
        assert_eq!(lib, oracle_bracket(&f, &g).to_superfunction());
    }
}

#[test]
fn field_application_matches_oracle() {
    let mut r = rng(0xc0de_0002);
    for _ in 0..150 {
        let pf = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3);
        let t = random_any(&mut r, 4);
        let lib = field_apply(&f.to_superfunction(), &t.to_superfunction()).unwrap();
        assert_eq!(lib, oracle_field_apply(&f, &t).to_superfunction());
    }
}

#[test]
fn fields_represent_the_bracket() {
    // [X_F, X_G] T = X_{{F,G}} T on random data.
    let mut r = rng(0xc0de_0003);
    for _ in 0..60 {
        let pf = random_parity(&mut r);
        let pg = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3).to_superfunction();
        let g = random_homogeneous(&mut r, pg, 3).to_superfunction();
        let t = random_any(&mut r, 4).to_superfunction();
        let sign = if pf.is_odd() && pg.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        }; // (-1)^{|F||G|}
        let fg_t = field_apply(&f, &field_apply(&g, &t).unwrap()).unwrap();
        let gf_t = field_apply(&g, &field_apply(&f, &t).unwrap()).unwrap();
        let commutator = fg_t.sub(&gf_t.scale(&sign));
        let bracket_action = field_apply(&contact_bracket(&f, &g).unwrap(), &t).unwrap();
        assert_eq!(commutator, bracket_action);
    }
}

#[test]
fn bracket_satisfies_graded_jacobi() {
    // {F,{G,H}} = {{F,G},H} + (-1)^{|F||G|} {G,{F,H}}.
    let mut r = rng(0xc0de_0004);
    for _ in 0..60 {
        let pf = random_parity(&mut r);
        let pg = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 2).to_superfunction();
        let g = random_homogeneous(&mut r, pg, 2).to_superfunction();
        let h = random_any(&mut r, 2).to_superfunction();
        let sign = if pf.is_odd() && pg.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let lhs = contact_bracket(&f, &contact_bracket(&g, &h).unwrap()).unwrap();
        let rhs = contact_bracket(&contact_bracket(&f, &g).unwrap(), &h)
            .unwrap()
            .add(&contact_bracket(&g, &contact_bracket(&f, &h).unwrap()).unwrap().scale(&sign));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn bracket_is_graded_antisymmetric() {
    // {F,G} = -(-1)^{|F||G|} {G,F}.
    let mut r = rng(0xc0de_0005);
    for _ in 0..100 {
        let pf = random_parity(&mut r);
        let pg = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3).to_superfunction();
        let g = random_homogeneous(&mut r, pg, 3).to_superfunction();
        let sign = if pf.is_odd() && pg.is_odd() {
            Scalar::ONE
        } else {
            Scalar::from_int(-1)
        };
        assert_eq!(
            contact_bracket(&f, &g).unwrap(),
            contact_bracket(&g, &f).unwrap().scale(&sign)
        );
    }
}

#[test]
fn weighted_action_matches_oracle_and_represents_bracket() {
    let mut r = rng(0xc0de_0006);
    let weights = [
        Scalar::ZERO,
        Scalar::new(1, 2),
        Scalar::new(-1, 2),
        Scalar::ONE,
        Scalar::from_int(-2),
        Scalar::new(3, 4),
    ];
    for _ in 0..60 {
        let pf = random_parity(&mut r);
        let pg = random_parity(&mut r);
        let f = random_homogeneous(&mut r, pf, 3);
        let g = random_homogeneous(&mut r, pg, 3);
        let t = random_any(&mut r, 3);
        let lam = &weights[r.gen_range(0..weights.len())];

        let flib = f.to_superfunction();
        let glib = g.to_superfunction();
        let tlib = t.to_superfunction();

        // Oracle agreement.
        assert_eq!(
            weighted_action(&flib, lam, &tlib).unwrap(),
            oracle_weighted_action(&f, lam, &t).to_superfunction()
        );

        // The weighted action is a representation of the bracket.
        let sign = if pf.is_odd() && pg.is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::ONE
        };
        let fg = weighted_action(&flib, lam, &weighted_action(&glib, lam, &tlib).unwrap()).unwrap();
        let gf = weighted_action(&glib, lam, &weighted_action(&flib, lam, &tlib).unwrap()).unwrap();
        let commutator = fg.sub(&gf.scale(&sign));
        let via_bracket =
            weighted_action(&contact_bracket(&flib, &glib).unwrap(), lam, &tlib).unwrap();
        assert_eq!(commutator, via_bracket);
    }
}

#[test]
fn theta2_free_inputs_stay_theta2_free() {
    // The restriction to the one-theta world is well defined: brackets and
    // actions of t2-free data are t2-free.
    let mut r = rng(0xc0de_0007);
    for _ in 0..80 {
        let f = strip_t2(&random_any(&mut r, 3).to_superfunction());
        let g = strip_t2(&random_any(&mut r, 3).to_superfunction());
        if supercontact::parity_of(&f).is_none() {
            continue;
        }
        assert!(contact_bracket(&f, &g).unwrap().is_theta2_free());
        assert!(field_apply(&f, &g).unwrap().is_theta2_free());
    }
}

fn strip_t2(f: &SuperFunction) -> SuperFunction {
    let (f1, _) = f.theta2_components();
    f1
}
