//! Polynomials in declared geometric variables with coefficients in Q(params).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::frac::Frac;
use super::gcd::gcd;
use super::poly::{Monomial, Poly, Rational};
use super::scalar::{RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// Exponent vector aligned with a variable list.
pub type Exponents = Vec<u32>;

/// Graded lexicographic comparison with the declared variable order.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// A polynomial in `vars` whose coefficients are Scalars.
///
/// Stored as one fraction whose denominator is free of the variables.
/// Equality ignores the variable list and compares the polynomial itself.
#[derive(Clone)]
pub struct MultiPoly {
    vars: Vec<Symbol>,
    value: Frac,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for MultiPoly {}

impl Hash for MultiPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

fn merge_vars(a: &[Symbol], b: &[Symbol]) -> Vec<Symbol> {
    if a == b {
        return a.to_vec();
    }
    let mut out = a.to_vec();
    for s in b {
        if !out.contains(s) {
            out.push(*s);
        }
    }
    out
}

impl MultiPoly {
    pub fn new(vars: Vec<Symbol>, value: Frac) -> Result<Self> {
        if let Some(v) = vars.iter().find(|v| value.denom().contains(**v)) {
            return Err(Error::UnknownVariable(format!(
                "{v} occurs in a denominator; not a polynomial"
            )));
        }
        Ok(MultiPoly { vars, value })
    }

    pub fn zero(vars: &[Symbol]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            value: Frac::zero(),
        }
    }

    pub fn one(vars: &[Symbol]) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn constant(vars: &[Symbol], c: Scalar) -> Self {
        assert!(
            !vars.iter().any(|v| c.contains(*v)),
            "a constant may not mention a variable"
        );
        MultiPoly {
            vars: vars.to_vec(),
            value: c.0,
        }
    }

    pub fn var(vars: &[Symbol], name: &str) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            value: Frac::from_poly(Poly::symbol(Symbol::new(name))),
        }
    }

    pub fn symbol(vars: &[Symbol], s: Symbol) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            value: Frac::from_poly(Poly::symbol(s)),
        }
    }

    pub fn from_poly(vars: &[Symbol], p: Poly) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            value: Frac::from_poly(p),
        }
    }

    pub fn from_ratfunc(vars: &[Symbol], r: &RatFunc) -> Option<Self> {
        Self::new(vars.to_vec(), r.0.clone()).ok()
    }

    pub fn from_coefficients(vars: &[Symbol], coeffs: &BTreeMap<Exponents, Scalar>) -> Self {
        let mut acc = Frac::zero();
        for (e, c) in coeffs {
            let m = Monomial::from_pairs(vars.iter().copied().zip(e.iter().copied()));
            acc = acc.add(&c.0.mul(&Frac::from_poly(Poly::term(m, Rational::one()))));
        }
        MultiPoly {
            vars: vars.to_vec(),
            value: acc,
        }
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn with_vars(&self, vars: &[Symbol]) -> Result<Self> {
        Self::new(vars.to_vec(), self.value.clone())
    }

    pub fn value(&self) -> &Frac {
        &self.value
    }

    pub fn numer(&self) -> &Poly {
        self.value.numer()
    }

    pub fn denom(&self) -> &Poly {
        self.value.denom()
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc(self.value.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        !self.vars.iter().any(|v| self.value.numer().contains(*v))
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        self.is_constant().then(|| Scalar(self.value.clone()))
    }

    pub fn degree(&self) -> u32 {
        self.numer()
            .terms()
            .map(|(m, _)| self.vars.iter().map(|v| m.exponent(*v)).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Symbol) -> u32 {
        self.numer().degree_in(v)
    }

    fn split_numer(&self) -> BTreeMap<Exponents, Poly> {
        let mut out: BTreeMap<Exponents, Poly> = BTreeMap::new();
        for (m, c) in self.numer().terms() {
            let key: Exponents = self.vars.iter().map(|v| m.exponent(*v)).collect();
            let rest = Monomial::from_pairs(m.pairs().iter().copied().filter(|p| !self.vars.contains(&p.0)));
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Nonzero coefficients keyed by exponent vectors.
    pub fn coefficients(&self) -> BTreeMap<Exponents, Scalar> {
        self.split_numer()
            .into_iter()
            .map(|(k, p)| {
                let c = Frac::new(p, self.denom().clone()).expect("denominator is nonzero");
                (k, Scalar(c))
            })
            .collect()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.coefficients().remove(e).unwrap_or_else(Scalar::zero)
    }

    /// Terms in descending graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(Exponents, Scalar)> {
        let mut v: Vec<_> = self.coefficients().into_iter().collect();
        v.sort_by(|a, b| grlex(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self) -> Option<(Exponents, Scalar)> {
        self.sorted_terms().into_iter().next()
    }

    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        let mut p = Poly::zero();
        for (m, c) in self.numer().terms() {
            let d: u32 = self.vars.iter().map(|v| m.exponent(*v)).sum();
            if d == k {
                p.add_term(m.clone(), c.clone());
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            value: Frac::new(p, self.denom().clone()).expect("nonzero denominator"),
        }
    }

    pub fn derivative(&self, v: Symbol) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            value: self.value.derivative(v),
        }
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            value: self.value.mul(&c.0),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            value: self.value.pow(e as i32).expect("nonnegative power"),
        }
    }

    /// Substitute Scalars for all variables.
    pub fn evaluate_at(&self, point: &[Scalar]) -> Scalar {
        let map: HashMap<Symbol, Frac> = self
            .vars
            .iter()
            .copied()
            .zip(point.iter().map(|s| s.0.clone()))
            .collect();
        Scalar(self.value.substitute(&map).expect("polynomial has no poles"))
    }

    /// Substitute fractions for arbitrary symbols; the result must stay polynomial in `vars`.
    pub fn substitute(&self, values: &HashMap<Symbol, Frac>) -> Result<MultiPoly> {
        Self::new(self.vars.clone(), self.value.substitute(values)?)
    }

    pub fn evaluate_params(&self, values: &HashMap<Symbol, Rational>) -> Result<MultiPoly> {
        Self::new(self.vars.clone(), self.value.evaluate(values)?)
    }

    /// Content of the numerator over Q[params], i.e. the gcd of its coefficients.
    fn numer_content(&self) -> Poly {
        let mut g = Poly::zero();
        for p in self.split_numer().values() {
            g = gcd(&g, p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part in Q[params][vars]: the coefficients share no factor.
    pub fn primitive_numer(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.numer_content();
        self.numer().div_exact(&c).expect("content divides")
    }

    /// Canonical associate: primitive over Q[params], integer coefficients with
    /// no common factor, and the leading coefficient's leading term positive.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.primitive_numer();
        let tmp = MultiPoly::from_poly(&self.vars, p.clone());
        let (_, lead) = tmp.leading_term().expect("nonzero");
        let mut k = p.rational_content();
        if lead.numer().leading_coefficient().is_negative() {
            k = -k;
        }
        MultiPoly::from_poly(&self.vars, p.scale(&k.recip()))
    }

    /// `q / self` in Q(params)[vars], when it exists.
    pub fn divides(&self, q: &MultiPoly) -> Option<MultiPoly> {
        exact_divides(self, q)
    }
}

/// `q/p` when `p` divides `q` in Q(params)[vars].
pub fn exact_divides(p: &MultiPoly, q: &MultiPoly) -> Option<MultiPoly> {
    if p.is_zero() {
        return None;
    }
    let vars = merge_vars(p.vars(), q.vars());
    if q.is_zero() {
        return Some(MultiPoly::zero(&vars));
    }
    // p = c * pp / den with c free of the variables; pp | q.numer decides divisibility.
    let pp = p.primitive_numer();
    let quotient = q.numer().div_exact(&pp)?;
    let c = p.numer().div_exact(&pp).expect("primitive part divides");
    let scalar = Frac::new(p.denom().clone(), c)
        .expect("content is nonzero")
        .mul(&Frac::new(Poly::one(), q.denom().clone()).expect("nonzero"));
    Some(MultiPoly {
        vars,
        value: Frac::from_poly(quotient).mul(&scalar),
    })
}

/// Normalized gcd in Q(params)[vars]; `gcd(p, 0)` is the normalized `p`.
pub fn multivariate_gcd(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let vars = merge_vars(p.vars(), q.vars());
    if p.is_zero() {
        return q.with_vars(&vars).expect("same polynomial").normalized();
    }
    if q.is_zero() {
        return p.with_vars(&vars).expect("same polynomial").normalized();
    }
    let g = gcd(&p.primitive_numer(), &q.primitive_numer());
    MultiPoly::from_poly(&vars, g).normalized()
}

/// Division with remainder as polynomials in `v`.
pub fn poly_divrem(num: &MultiPoly, den: &MultiPoly, v: Symbol) -> Result<(MultiPoly, MultiPoly)> {
    if den.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let vars = merge_vars(num.vars(), den.vars());
    let dd = den.degree_in(v);
    let lc = coefficient_in(den, v, dd);
    if vars.iter().any(|w| lc.numer().contains(*w)) {
        return Err(Error::NonInvertibleLeadingCoefficient(v.to_string()));
    }
    let lc_inv = lc.value.inv()?;
    let mut r = num.with_vars(&vars)?;
    let mut q = MultiPoly::zero(&vars);
    while !r.is_zero() && r.degree_in(v) >= dd {
        let dr = r.degree_in(v);
        let lr = coefficient_in(&r, v, dr);
        let shift = Frac::from_poly(Poly::term(Monomial::pow(v, dr - dd), Rational::one()));
        let t = MultiPoly {
            vars: vars.clone(),
            value: lr.value.mul(&lc_inv).mul(&shift),
        };
        r = &r - &(&t * den);
        q = &q + &t;
    }
    Ok((q, r))
}

fn coefficient_in(p: &MultiPoly, v: Symbol, k: u32) -> MultiPoly {
    MultiPoly {
        vars: p.vars.clone(),
        value: Frac::new(p.numer().coefficient_of_power(v, k), p.denom().clone()).expect("nonzero"),
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly {
            vars: merge_vars(&self.vars, &o.vars),
            value: self.value.add(&o.value),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly {
            vars: merge_vars(&self.vars, &o.vars),
            value: self.value.sub(&o.value),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        MultiPoly {
            vars: merge_vars(&self.vars, &o.vars),
            value: self.value.mul(&o.value),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            value: self.value.neg(),
        }
    }
}

forward_ref_binops!(MultiPoly, Add::add, Sub::sub, Mul::mul);
forward_neg!(MultiPoly);

pub(crate) fn monomial_string(vars: &[Symbol], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|p| *p.1 > 0)
        .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Sum of `coefficient*monomial` terms with the sign of simple coefficients folded in.
pub(crate) fn format_terms(terms: &[(String, Scalar)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (mono, c)) in terms.iter().enumerate() {
        let simple = c.denom().is_one() && c.numer().len() == 1;
        let neg = simple && c.numer().leading_coefficient().is_negative();
        let body = if neg { (-c).to_string() } else { c.to_string() };
        let coef = if simple { body } else { format!("({body})") };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono == "1" {
            out.push_str(&coef);
        } else if coef == "1" {
            out.push_str(mono);
        } else {
            out.push_str(&coef);
            out.push('*');
            out.push_str(mono);
        }
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Scalar)> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| (monomial_string(&self.vars, &e), c))
            .collect();
        f.write_str(&format_terms(&terms))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<Symbol> {
        vec![Symbol::new("X"), Symbol::new("Y")]
    }
    fn x() -> MultiPoly {
        MultiPoly::var(&vars(), "X")
    }
    fn y() -> MultiPoly {
        MultiPoly::var(&vars(), "Y")
    }
    fn param(n: &str) -> MultiPoly {
        MultiPoly::constant(&vars(), Scalar::var(n))
    }

    #[test]
    fn divrem_examples() {
        let xs = Symbol::new("X");
        let ys = Symbol::new("Y");
        let (q, r) = poly_divrem(&(&(&x() * &x()) - &(&y() * &y())), &(&x() - &y()), xs).unwrap();
        assert_eq!(q, &x() + &y());
        assert!(r.is_zero());
        let (q, r) = poly_divrem(&x(), &y(), ys).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, x());
        let b = param("b");
        let (q, r) = poly_divrem(&(&b * &(&x() - &y())), &(&x() - &y()), xs).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
        assert_eq!(
            poly_divrem(&x(), &MultiPoly::zero(&vars()), xs),
            Err(Error::ZeroDivisor)
        );
    }

    #[test]
    fn exact_divides_examples() {
        let b = param("b");
        let xy = &x() - &y();
        assert_eq!(exact_divides(&xy, &(&b * &xy)), Some(b.clone()));
        assert_eq!(exact_divides(&x(), &y()), None);
        let lam = param("lambda");
        let d = param("d");
        let p = &(&x() - &y()) - &lam;
        let q = &(&d * &y()) - &(&b * &x());
        assert_eq!(exact_divides(&p, &q), None);
        // Division by a polynomial with parametric content.
        let bx = &b * &x();
        assert_eq!(exact_divides(&bx, &(&x() * &y())), Some(y().mul_scalar(&Scalar::var("b").inv().unwrap())));
    }

    #[test]
    fn gcd_examples() {
        let g = multivariate_gcd(&(&(&x() * &x()) - &(&y() * &y())), &(&x() - &y()));
        assert_eq!(g, &x() - &y());
        assert!(multivariate_gcd(&x(), &y()).numer().is_one());
        let b = param("b");
        let f = &(&x() * &y()) + &(&b * &x());
        let g = &(&x() * &y()) + &(&b * &y());
        assert!(multivariate_gcd(&f, &g).numer().is_one());
        assert_eq!(multivariate_gcd(&(&x() * &b), &MultiPoly::zero(&vars())), x());
    }

    #[test]
    fn normalization_and_display() {
        let a = param("a");
        let c = param("c");
        let p = &(&a * &y()) - &(&c * &x());
        assert_eq!(p.normalized().to_string(), "c*X - a*Y");
        let q = (&x() - &y()).mul_scalar(&Scalar::ratio(-3, 2));
        assert_eq!(q.normalized().to_string(), "X - Y");
        let b = param("b");
        let d = param("d");
        let r = &(&(&b - &d) * &x()) + &MultiPoly::one(&vars());
        assert_eq!(r.to_string(), "(b - d)*X + 1");
    }

    #[test]
    fn coefficient_extraction() {
        let b = param("b");
        let p = &(&(&b * &x()) * &y()) + &(&x() * &x());
        let cs = p.coefficients();
        assert_eq!(cs[&vec![1, 1]], Scalar::var("b"));
        assert_eq!(cs[&vec![2, 0]], Scalar::one());
        assert_eq!(p.degree(), 2);
        assert_eq!(p.homogeneous_part(2), p);
        let back = MultiPoly::from_coefficients(&vars(), &cs);
        assert_eq!(back, p);
    }
}
