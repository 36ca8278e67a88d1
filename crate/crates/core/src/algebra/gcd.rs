//! Multivariate gcd over Q: a heuristic evaluation gcd checked by division,
//! falling back to recursive primitive remainder sequences.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, Zero};

use super::poly::{Monomial, Poly, Rational};
use crate::symbol::Symbol;

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.len() == 1 {
        return gcd_with_monomial(a.leading_term().unwrap().0, b);
    }
    if b.len() == 1 {
        return gcd_with_monomial(b.leading_term().unwrap().0, a);
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.monic();
    }
    let sa = a.symbols();
    let sb = b.symbols();
    let vars: Vec<Symbol> = sa.union(&sb).copied().collect();
    if let Some(g) = heuristic_gcd(&a.integer_primitive(), &b.integer_primitive(), &vars) {
        return g.monic();
    }
    if let Some(&v) = sa.difference(&sb).next() {
        return gcd_with_coefficients(b, a, v);
    }
    if let Some(&v) = sb.difference(&sa).next() {
        return gcd_with_coefficients(a, b, v);
    }
    let v = *sa
        .iter()
        .min_by_key(|&&s| (a.degree_in(s).max(b.degree_in(s)), s.name()))
        .unwrap();
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_gcd(pa.integer_primitive(), pb.integer_primitive(), v);
    (&gcd(&ca, &cb) * &g).monic()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

/// gcd of `base` with `other`, where `v` occurs in `other` but not in `base`.
fn gcd_with_coefficients(base: &Poly, other: &Poly, v: Symbol) -> Poly {
    let mut g = base.clone();
    for c in other.coefficients_in(v).iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

fn gcd_with_monomial(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (pm, _) in p.terms() {
        g = g.gcd(pm);
        if g.is_one() {
            break;
        }
    }
    Poly::term(g, num_traits::One::one())
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &Poly, v: Symbol) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(v).iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

pub fn primitive_part(p: &Poly, v: Symbol) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

/// gcd of two polynomials that are primitive in `v`.
fn primitive_gcd(a: Poly, b: Poly, v: Symbol) -> Poly {
    let (mut f, mut g) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if g.degree_in(v) == 0 {
            // g is primitive and free of v, hence a unit.
            return Poly::one();
        }
        let r = f.pseudo_rem(&g, v);
        if r.is_zero() {
            return g.monic();
        }
        if r.degree_in(v) == 0 {
            return Poly::one();
        }
        f = g;
        // Dropping the rational content too keeps coefficient growth in check.
        g = primitive_part(&r, v).integer_primitive();
    }
}

fn integer_content(p: &Poly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// Evaluation gcd of integer polynomials: substitute a large integer for the
/// first variable, recurse, and rebuild the candidate from its balanced
/// digits. Every candidate is checked by exact division; `None` means give up.
fn heuristic_gcd(f: &Poly, g: &Poly, vars: &[Symbol]) -> Option<Poly> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let common = integer_content(f).gcd(&integer_content(g));
    let Some((&v, rest)) = vars.split_first() else {
        return Some(Poly::constant(Rational::from_integer(common)));
    };
    let scale = Rational::from_integer(common.clone()).recip();
    let (f, g) = (f.scale(&scale), g.scale(&scale));
    let mut xi: BigInt = BigInt::from(2) * max_norm(&f).min(max_norm(&g)) + 29;
    for _ in 0..6 {
        let at = HashMap::from([(v, Rational::from_integer(xi.clone()))]);
        let (fe, ge) = (f.evaluate(&at), g.evaluate(&at));
        if let Some(h) = heuristic_gcd(&fe, &ge, rest) {
            let cand = balanced_expansion(&h, &xi, v).integer_primitive();
            if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                return Some(cand.scale(&Rational::from_integer(common)));
            }
        }
        xi = &xi * 73794 * Roots::sqrt(&Roots::sqrt(&xi)) / 27011;
    }
    None
}

/// Read each integer coefficient of `h` as balanced base-`xi` digits of a polynomial in `v`.
fn balanced_expansion(h: &Poly, xi: &BigInt, v: Symbol) -> Poly {
    let half = xi / 2;
    let mut out = Poly::zero();
    for (m, c) in h.terms() {
        let mut a = c.numer().clone();
        let mut k = 0;
        while !a.is_zero() {
            let mut r = a.mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                out.add_term(m.mul(&Monomial::pow(v, k)), Rational::from_integer(r.clone()));
            }
            a = (a - r) / xi;
            k += 1;
        }
    }
    out
}
