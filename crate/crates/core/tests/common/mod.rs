#![allow(dead_code)]

pub mod laws;
pub mod oracle;

use invcurve_core::algebra::{MultiPoly, Monomial, Poly, RatFunc, Rational, Scalar};
use invcurve_core::forms::DForm;
use invcurve_core::vectorfield::VectorField;
use invcurve_core::Symbol;
use proptest::prelude::*;

pub fn xyz() -> Vec<Symbol> {
    ["x", "y", "z"].iter().map(|n| Symbol::new(n)).collect()
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Sparse polynomial of total degree <= `deg` in `names`.
pub fn poly_in(names: &'static [&'static str], deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=deg, names.len()), small_rational());
    prop::collection::vec(term, 1..=max_terms).prop_map(move |terms| {
        Poly::from_terms(terms.into_iter().filter_map(|(exps, c)| {
            if exps.iter().sum::<u32>() > deg {
                return None;
            }
            let m = Monomial::from_pairs(names.iter().zip(exps).map(|(n, e)| (Symbol::new(n), e)));
            Some((m, c))
        }))
    })
}

fn nonzero(p: Poly) -> Poly {
    if p.is_zero() {
        Poly::one()
    } else {
        p
    }
}

/// Element of Q(p, q).
pub fn scalar() -> impl Strategy<Value = Scalar> {
    (poly_in(&["p", "q"], 2, 3), poly_in(&["p", "q"], 1, 2), any::<bool>()).prop_map(|(n, d, plain)| {
        if plain {
            Scalar::from_poly(n)
        } else {
            Scalar::from_parts(n, nonzero(d)).unwrap()
        }
    })
}

/// Rational function in x, y, z with one parameter p; denominators stay small.
pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly_in(&["x", "y", "z", "p"], 2, 4), poly_in(&["x", "y"], 1, 2), 0..3u8).prop_map(|(n, d, k)| {
        if k == 0 {
            RatFunc::from_parts(n, nonzero(d)).unwrap()
        } else {
            RatFunc::from_poly(n)
        }
    })
}

fn index_sets(arity: usize) -> Vec<Vec<usize>> {
    match arity {
        0 => vec![vec![]],
        1 => vec![vec![0], vec![1], vec![2]],
        2 => vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        3 => vec![vec![0, 1, 2]],
        _ => vec![],
    }
}

/// Form of the given arity on (x, y, z).
pub fn form(arity: usize) -> impl Strategy<Value = DForm> {
    let n = index_sets(arity).len();
    prop::collection::vec(prop::option::weighted(0.85, ratfunc()), n).prop_map(move |coeffs| {
        let coords = xyz();
        let mut out = DForm::zero(&coords, arity);
        for (idx, c) in index_sets(arity).into_iter().zip(coeffs) {
            if let Some(c) = c {
                let dirs: Vec<Symbol> = idx.iter().map(|&i| coords[i]).collect();
                out = out.add(&DForm::monomial(&coords, c, &dirs).unwrap());
            }
        }
        out
    })
}

/// Polynomial field on (x, y, z) with quadratic components.
pub fn field() -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly_in(&["x", "y", "z", "p"], 2, 4), 3).prop_map(|cs| {
        VectorField::new(xyz(), cs.into_iter().map(RatFunc::from_poly).collect(), vec![]).unwrap()
    })
}

/// Polynomial in x, y over Q(p).
pub fn multipoly() -> impl Strategy<Value = MultiPoly> {
    poly_in(&["x", "y", "p"], 2, 4).prop_map(|p| {
        let vs: Vec<Symbol> = ["x", "y"].iter().map(|n| Symbol::new(n)).collect();
        MultiPoly::from_poly(&vs, p)
    })
}

/// Pinned seed so every run draws the same cases and takes the same time.
pub fn pinned(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_c0de),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
