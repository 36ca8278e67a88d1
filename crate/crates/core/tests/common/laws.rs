//! Algebraic laws shared by the property suites and the acceptance run.

use super::*;
use invcurve_core::algebra::gcd::gcd;
use invcurve_core::algebra::{exact_divides, poly_divrem, MultiPoly, Poly, RatFunc, Rational, Scalar};
use invcurve_core::forms::{rosenlicht_normalize, BasisElement, DForm, LogCombination};
use invcurve_core::vectorfield::VectorField;
use invcurve_core::Symbol;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

type Outcome = Result<(), TestCaseError>;

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn signed(w: &DForm, s: i64) -> DForm {
    if s < 0 {
        w.neg()
    } else {
        w.clone()
    }
}

/// Forms (α, β) with arities k + l ≤ 3.
pub fn form_pair() -> impl Strategy<Value = (DForm, DForm)> {
    (0usize..=3)
        .prop_flat_map(|k| (Just(k), 0..=3 - k))
        .prop_flat_map(|(k, l)| (form(k), form(l)))
}

pub fn additive_group(a: &Scalar, b: &Scalar, c: &Scalar) -> Outcome {
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(a + &Scalar::zero(), a.clone());
    prop_assert!((a + &(-a)).is_zero());
    prop_assert_eq!(&(a - b) + b, a.clone());
    Ok(())
}

pub fn multiplicative_monoid(a: &Scalar, b: &Scalar, c: &Scalar) -> Outcome {
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &Scalar::one(), a.clone());
    Ok(())
}

pub fn distributive(a: &Scalar, b: &Scalar, c: &Scalar) -> Outcome {
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    Ok(())
}

pub fn inverses(a: &Scalar, b: &Scalar) -> Outcome {
    if a.is_zero() {
        prop_assert!(b.checked_div(a).is_err());
        return Ok(());
    }
    prop_assert!((a * &a.inv().unwrap()).is_one());
    prop_assert_eq!(&(b / a) * a, b.clone());
    Ok(())
}

pub fn partial_leibniz(f: &RatFunc, g: &RatFunc) -> Outcome {
    for v in ["x", "y", "p"] {
        let v = Symbol::new(v);
        let lhs = (f * g).derivative(v);
        let rhs = &(&f.derivative(v) * g) + &(f * &g.derivative(v));
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn field_leibniz(s: &VectorField, f: &RatFunc, g: &RatFunc) -> Outcome {
    let lhs = s.lie_derivative_rat(&(f * g));
    let rhs = &(&s.lie_derivative_rat(f) * g) + &(f * &s.lie_derivative_rat(g));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn d_squared(w: &DForm) -> Outcome {
    prop_assert!(w.exterior_derivative().exterior_derivative().is_zero());
    Ok(())
}

pub fn graded_leibniz(a: &DForm, b: &DForm) -> Outcome {
    let lhs = a.wedge(b).exterior_derivative();
    let rhs = a
        .exterior_derivative()
        .wedge(b)
        .add(&signed(&a.wedge(&b.exterior_derivative()), sign(a.arity())));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn graded_commutative(a: &DForm, b: &DForm) -> Outcome {
    prop_assert_eq!(a.wedge(b), signed(&b.wedge(a), sign(a.arity() * b.arity())));
    if a.arity() == 1 {
        prop_assert!(a.wedge(a).is_zero());
    }
    Ok(())
}

pub fn interior_antiderivation(s: &VectorField, a: &DForm, b: &DForm) -> Outcome {
    if a.arity() + b.arity() == 0 {
        return Ok(());
    }
    let lhs = a.wedge(b).interior_product(s).unwrap();
    let mut rhs = DForm::zero(a.coords(), a.arity() + b.arity() - 1);
    if a.arity() > 0 {
        rhs = rhs.add(&a.interior_product(s).unwrap().wedge(b));
    }
    if b.arity() > 0 {
        rhs = rhs.add(&signed(&a.wedge(&b.interior_product(s).unwrap()), sign(a.arity())));
    }
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// Cartan's formula on functions and exact 1-forms against direct expansions.
pub fn cartan_base_case(s: &VectorField, f: &RatFunc, g: &RatFunc) -> Outcome {
    let coords = xyz();
    let on_function = DForm::function(&coords, f.clone()).lie_derivative(s).unwrap();
    prop_assert_eq!(on_function, DForm::function(&coords, s.lie_derivative_rat(f)));
    // L(f dg) = L(f) dg + f d(L g).
    let dg = DForm::function(&coords, g.clone()).exterior_derivative();
    let direct = dg
        .scale(&s.lie_derivative_rat(f))
        .add(&DForm::function(&coords, s.lie_derivative_rat(g)).exterior_derivative().scale(f));
    prop_assert_eq!(dg.scale(f).lie_derivative(s).unwrap(), direct);
    Ok(())
}

pub fn lie_commutes_with_d(s: &VectorField, w: &DForm) -> Outcome {
    let lhs = w.exterior_derivative().lie_derivative(s).unwrap();
    let rhs = w.lie_derivative(s).unwrap().exterior_derivative();
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn divrem_reconstructs(num: &MultiPoly, den: &MultiPoly) -> Outcome {
    if den.is_zero() {
        return Ok(());
    }
    let x = Symbol::new("x");
    match poly_divrem(num, den, x) {
        Ok((q, r)) => {
            prop_assert_eq!(&(&q * den) + &r, num.clone());
            prop_assert!(r.is_zero() || r.degree_in(x) < den.degree_in(x));
        }
        Err(_) => {
            // Only a leading coefficient that still involves y is refused.
            let lc = den.numer().coefficient_of_power(x, den.degree_in(x));
            prop_assert!(lc.contains(Symbol::new("y")));
        }
    }
    Ok(())
}

pub fn exact_division(a: &MultiPoly, b: &MultiPoly) -> Outcome {
    if b.is_zero() {
        return Ok(());
    }
    let prod = a * b;
    prop_assert_eq!(exact_divides(b, &prod), Some(a.clone()));
    let bumped = &prod + &MultiPoly::one(prod.vars());
    if let Some(q) = exact_divides(b, &bumped) {
        prop_assert_eq!(&q * b, bumped);
    }
    Ok(())
}

/// `gcd(ac, bc)` is a common divisor, a multiple of `c`, and leaves coprime cofactors.
pub fn gcd_is_greatest(a: &Poly, b: &Poly, c: &Poly) -> Outcome {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(());
    }
    let (ac, bc) = (a * c, b * c);
    let g = gcd(&ac, &bc);
    prop_assert!(g.div_exact(c).is_some(), "{} misses {}", g, c);
    let (ra, rb) = (ac.div_exact(&g), bc.div_exact(&g));
    prop_assert!(ra.is_some() && rb.is_some());
    prop_assert!(gcd(&ra.unwrap(), &rb.unwrap()).is_one());
    Ok(())
}

const FACTORS: [&str; 6] = ["x", "y", "x + 1", "x - y", "x*y + 2", "y^2 - 3"];

fn factor(i: usize) -> RatFunc {
    let x = RatFunc::var("x");
    let y = RatFunc::var("y");
    let one = RatFunc::one();
    match FACTORS[i] {
        "x" => x,
        "y" => y,
        "x + 1" => &x + &one,
        "x - y" => &x - &y,
        "x*y + 2" => &(&x * &y) + &RatFunc::from_int(2),
        _ => &(&y * &y) - &RatFunc::from_int(3),
    }
}

/// Up to four log terms with arguments built from a shared pool of factors, so
/// that dependent coefficients and shared factors are common.
pub fn log_combination(with_parameter: bool) -> impl Strategy<Value = LogCombination> {
    // Denominators 1 or 2 keep the exponents of the normalized arguments small.
    let rational = || {
        (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=2).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    };
    let coeff = (rational(), -3i64..=3, any::<bool>());
    let argument = prop::collection::vec((0..FACTORS.len(), prop_oneof![Just(-1i32), Just(1)]), 1..=2);
    (prop::collection::vec((coeff, argument), 1..=4), ratfunc()).prop_map(move |(terms, exact)| {
        let p = Scalar::var("p");
        let basis = if with_parameter {
            vec![BasisElement::One, BasisElement::Symbol(Symbol::new("p"))]
        } else {
            vec![BasisElement::One]
        };
        let log_terms = terms
            .into_iter()
            .map(|((r, s, use_p), arg)| {
                // With the parameter present, integer coordinates keep the exponents bounded.
                let mut c = if with_parameter {
                    Scalar::from_int(r.round().to_integer().try_into().unwrap_or(1))
                } else {
                    Scalar::from_rational(r)
                };
                if with_parameter && use_p {
                    c = &c + &(&p * &Scalar::from_int(s));
                }
                let v = arg
                    .into_iter()
                    .fold(RatFunc::one(), |acc, (i, e)| &acc * &factor(i).pow(e).unwrap());
                (c, v)
            })
            .collect();
        LogCombination::new(basis, exact, log_terms)
    })
}

pub fn rosenlicht_round_trip(lc: &LogCombination) -> Outcome {
    let coords = [Symbol::new("x"), Symbol::new("y")];
    let out = rosenlicht_normalize(lc).unwrap();
    prop_assert_eq!(out.to_form(&coords).unwrap(), lc.to_form(&coords).unwrap());
    prop_assert!(out.coefficients_independent().unwrap());
    prop_assert!(out.log_terms.len() <= lc.log_terms.len());
    Ok(())
}
