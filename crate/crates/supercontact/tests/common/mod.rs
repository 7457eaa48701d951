//! Independent oracle engine for the integration tests.
//!
//! Superfunctions are modeled here as flat lists of monomials with explicit
//! anticommuting-variable lists; products sort the variable lists with a
//! transposition count and derivations use the graded Leibniz rule term by
//! term. Nothing is shared with the library's component-table representation,
//! so agreement between the two is meaningful evidence.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use supercontact::{Parity, Poly, Scalar, SuperFunction};

/// One monomial: `coeff * x^xexp * prod(thetas)`, thetas strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OTerm {
    pub coeff: Scalar,
    pub xexp: u32,
    pub thetas: Vec<u8>,
}

/// A superfunction as a normalized monomial list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OFn(pub Vec<OTerm>);

/// Sorts a theta word, returning the transposition sign, or `None` when a
/// variable repeats (the monomial vanishes).
fn sort_thetas(mut thetas: Vec<u8>) -> Option<(Vec<u8>, Scalar)> {
    let mut swaps = 0u32;
    // Bubble sort, counting adjacent transpositions of odd symbols.
    for i in 0..thetas.len() {
        for j in (i + 1..thetas.len()).rev() {
            if thetas[j - 1] > thetas[j] {
                thetas.swap(j - 1, j);
                swaps += 1;
            }
        }
    }
    if thetas.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let sign = if swaps.is_multiple_of(2) {
        Scalar::ONE
    } else {
        Scalar::from_int(-1)
    };
    Some((thetas, sign))
}

impl OFn {
    pub fn zero() -> Self {
        OFn::default()
    }

    pub fn term(coeff: Scalar, xexp: u32, thetas: &[u8]) -> Self {
        OFn(vec![OTerm {
            coeff,
            xexp,
            thetas: thetas.to_vec(),
        }])
        .normalized()
    }

    pub fn normalized(self) -> Self {
        let mut acc: Vec<OTerm> = Vec::new();
        for t in self.0 {
            if t.coeff.is_zero() {
                continue;
            }
            let Some((thetas, sign)) = sort_thetas(t.thetas) else {
                continue;
            };
            let coeff = &t.coeff * &sign;
            match acc
                .iter_mut()
                .find(|u| u.xexp == t.xexp && u.thetas == thetas)
            {
                Some(u) => u.coeff += &coeff,
                None => acc.push(OTerm {
                    coeff,
                    xexp: t.xexp,
                    thetas,
                }),
            }
        }
        acc.retain(|t| !t.coeff.is_zero());
        acc.sort_by(|a, b| (a.xexp, &a.thetas).cmp(&(b.xexp, &b.thetas)));
        OFn(acc)
    }

    pub fn add(&self, rhs: &OFn) -> OFn {
        let mut terms = self.0.clone();
        terms.extend(rhs.0.iter().cloned());
        OFn(terms).normalized()
    }

    pub fn neg(&self) -> OFn {
        OFn(self
            .0
            .iter()
            .map(|t| OTerm {
                coeff: -&t.coeff,
                ..t.clone()
            })
            .collect())
    }

    pub fn sub(&self, rhs: &OFn) -> OFn {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Scalar) -> OFn {
        OFn(self
            .0
            .iter()
            .map(|t| OTerm {
                coeff: &t.coeff * s,
                ..t.clone()
            })
            .collect())
        .normalized()
    }

    pub fn mul(&self, rhs: &OFn) -> OFn {
        let mut terms = Vec::new();
        for a in &self.0 {
            for b in &rhs.0 {
                let mut thetas = a.thetas.clone();
                thetas.extend_from_slice(&b.thetas);
                terms.push(OTerm {
                    coeff: &a.coeff * &b.coeff,
                    xexp: a.xexp + b.xexp,
                    thetas,
                });
            }
        }
        OFn(terms).normalized()
    }

    pub fn partial_x(&self) -> OFn {
        OFn(self
            .0
            .iter()
            .filter(|t| t.xexp > 0)
            .map(|t| OTerm {
                coeff: &t.coeff * &Scalar::from_int(t.xexp as i64),
                xexp: t.xexp - 1,
                thetas: t.thetas.clone(),
            })
            .collect())
        .normalized()
    }

    /// Left derivative in theta_i by the graded Leibniz rule: remove the
    /// variable, signed by the number of odd symbols passed over.
    pub fn partial_theta(&self, i: u8) -> OFn {
        let mut terms = Vec::new();
        for t in &self.0 {
            if let Some(pos) = t.thetas.iter().position(|&v| v == i) {
                let sign = if pos % 2 == 0 {
                    Scalar::ONE
                } else {
                    Scalar::from_int(-1)
                };
                let mut thetas = t.thetas.clone();
                thetas.remove(pos);
                terms.push(OTerm {
                    coeff: &t.coeff * &sign,
                    xexp: t.xexp,
                    thetas,
                });
            }
        }
        OFn(terms).normalized()
    }

    /// `eta_i = d/dtheta_i - theta_i d/dx`, assembled from the primitives.
    pub fn eta(&self, i: u8) -> OFn {
        let theta_i = OFn::term(Scalar::ONE, 0, &[i]);
        self.partial_theta(i).sub(&theta_i.mul(&self.partial_x()))
    }

    /// Parity by theta count; `None` when terms disagree.
    pub fn parity(&self) -> Option<Parity> {
        let mut result: Option<Parity> = None;
        for t in &self.0 {
            let p = if t.thetas.len() % 2 == 0 {
                Parity::Even
            } else {
                Parity::Odd
            };
            match result {
                None => result = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(result.unwrap_or(Parity::Even))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_superfunction(&self) -> SuperFunction {
        let mut out = SuperFunction::zero();
        for t in &self.0 {
            let (t1, t2) = (t.thetas.contains(&1), t.thetas.contains(&2));
            out = out.add(&SuperFunction::monomial(t.coeff.clone(), t.xexp, t1, t2));
        }
        out
    }

    pub fn from_superfunction(f: &SuperFunction) -> OFn {
        let mut terms = Vec::new();
        let comps: [(&Poly, &[u8]); 4] = [
            (&f.c_1, &[]),
            (&f.c_t1, &[1]),
            (&f.c_t2, &[2]),
            (&f.c_t12, &[1, 2]),
        ];
        for (poly, thetas) in comps {
            for (e, c) in poly.iter() {
                terms.push(OTerm {
                    coeff: c.clone(),
                    xexp: e,
                    thetas: thetas.to_vec(),
                });
            }
        }
        OFn(terms).normalized()
    }
}

/// Oracle contact bracket of homogeneous superfunctions:
/// `{F,G} = F G' - F' G - (1/2)(-1)^{|F|} sum_i eta_i(F) eta_i(G)`.
pub fn oracle_bracket(f: &OFn, g: &OFn) -> OFn {
    let pf = f.parity().expect("bracket inputs must be homogeneous");
    let half_sign = &Scalar::new(-1, 2) * &pf.sign();
    let mut out = f.mul(&g.partial_x()).sub(&f.partial_x().mul(g));
    for i in [1u8, 2] {
        out = out.add(&f.eta(i).mul(&g.eta(i)).scale(&half_sign));
    }
    out
}

/// Oracle action of the contact field of `F` on a plain superfunction:
/// `X_F(T) = F T' - (1/2)(-1)^{|F|} sum_i eta_i(F) eta_i(T)`.
pub fn oracle_field_apply(f: &OFn, t: &OFn) -> OFn {
    let pf = f.parity().expect("field generator must be homogeneous");
    let half_sign = &Scalar::new(-1, 2) * &pf.sign();
    let mut out = f.mul(&t.partial_x());
    for i in [1u8, 2] {
        out = out.add(&f.eta(i).mul(&t.eta(i)).scale(&half_sign));
    }
    out
}

/// Oracle weighted action on a density body:
/// `X_F(T) + lambda F' T`.
pub fn oracle_weighted_action(f: &OFn, lambda: &Scalar, t: &OFn) -> OFn {
    oracle_field_apply(f, t).add(&f.partial_x().mul(t).scale(lambda))
}

/// Deterministic RNG for test corpora.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(r: &mut ChaCha8Rng) -> Scalar {
    // Small numerators/denominators keep intermediate sizes readable.
    let n = r.gen_range(-6i64..=6);
    let d = *[1i64, 1, 1, 2, 2, 3, 4].get(r.gen_range(0..7)).unwrap();
    Scalar::new(n, d)
}

/// Random superfunction of the given parity with x-degree at most `max_deg`,
/// guaranteed nonzero.
pub fn random_homogeneous(r: &mut ChaCha8Rng, parity: Parity, max_deg: u32) -> OFn {
    loop {
        let mut terms = Vec::new();
        let theta_sets: &[&[u8]] = match parity {
            Parity::Even => &[&[], &[1, 2]],
            Parity::Odd => &[&[1], &[2]],
        };
        for thetas in theta_sets {
            for e in 0..=max_deg {
                if r.gen_bool(0.45) {
                    terms.push(OTerm {
                        coeff: random_scalar(r),
                        xexp: e,
                        thetas: thetas.to_vec(),
                    });
                }
            }
        }
        let f = OFn(terms).normalized();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random superfunction with no parity constraint, possibly mixed.
pub fn random_any(r: &mut ChaCha8Rng, max_deg: u32) -> OFn {
    let even = random_homogeneous(r, Parity::Even, max_deg);
    let odd = random_homogeneous(r, Parity::Odd, max_deg);
    match r.gen_range(0..3) {
        0 => even,
        1 => odd,
        _ => even.add(&odd),
    }
}

/// Applies the word `eta_1^{e1} eta_2^{e2} (d/dx)^j` oracle-side
/// (rightmost factor first).
pub fn oracle_word_apply(e1: u8, e2: u8, j: u32, g: &OFn) -> OFn {
    let mut out = g.clone();
    for _ in 0..j {
        out = out.partial_x();
    }
    if e2 == 1 {
        out = out.eta(2);
    }
    if e1 == 1 {
        out = out.eta(1);
    }
    out
}

/// Oracle-side application of a normal-form operator given as
/// `(e1, e2, j, coefficient)` rows.
pub fn oracle_op_apply(terms: &[(u8, u8, u32, OFn)], g: &OFn) -> OFn {
    let mut out = OFn::zero();
    for (e1, e2, j, c) in terms {
        out = out.add(&c.mul(&oracle_word_apply(*e1, *e2, *j, g)));
    }
    out
}

/// Random nonzero parity-homogeneous superfunction in the single-theta
/// variable set (even means theta-free there).
pub fn random_one_theta(r: &mut ChaCha8Rng, parity: Parity, max_deg: u32) -> OFn {
    loop {
        let mut terms = Vec::new();
        let theta_sets: &[&[u8]] = match parity {
            Parity::Even => &[&[]],
            Parity::Odd => &[&[1]],
        };
        for thetas in theta_sets {
            for e in 0..=max_deg {
                if r.gen_bool(0.55) {
                    terms.push(OTerm {
                        coeff: random_scalar(r),
                        xexp: e,
                        thetas: thetas.to_vec(),
                    });
                }
            }
        }
        let f = OFn(terms).normalized();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random single-theta superfunction with both parity components present.
pub fn random_one_theta_any(r: &mut ChaCha8Rng, max_deg: u32) -> OFn {
    random_one_theta(r, Parity::Even, max_deg).add(&random_one_theta(r, Parity::Odd, max_deg))
}
