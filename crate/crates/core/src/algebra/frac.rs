//! Reduced fractions of polynomials; the shared representation of `Scalar` and `RatFunc`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Poly, Rational};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// `num/den` with gcd(num, den) = 1 and den monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn zero() -> Self {
        Frac {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Frac::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Frac {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// Build from parts already known to be coprime; only the denominator is normalized.
    fn coprime(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Frac { num, den }
        } else {
            let inv = lc.recip();
            Frac {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Frac::zero();
        }
        if den.is_constant() {
            return Self::coprime(num, den);
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            Self::coprime(num, den)
        } else {
            Self::coprime(
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return Frac::from_poly(&self.num + &o.num);
        }
        if self.den == o.den {
            return Self::reduce(&self.num + &o.num, self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            // gcd(num, d1 d2) = 1 when d1, d2 are coprime and each fraction is reduced.
            return Self::coprime(num, &self.den * &o.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = o.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&o.num * &d1);
        if num.is_zero() {
            return Frac::zero();
        }
        let g2 = gcd(&num, &g);
        let num = num.div_exact(&g2).expect("gcd divides");
        let rest = g.div_exact(&g2).expect("gcd divides");
        Self::coprime(num, &(&d1 * &d2) * &rest)
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Frac::from_poly(&self.num * &o.num);
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::coprime(&n1 * &n2, &d1 * &d2)
    }

    pub fn scale(&self, c: &Rational) -> Frac {
        if c.is_zero() {
            return Frac::zero();
        }
        Frac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Frac> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::coprime(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Frac) -> Result<Frac> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Frac> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Frac {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn derivative(&self, s: Symbol) -> Frac {
        if !self.den.contains(s) {
            return Self::coprime(self.num.derivative(s), self.den.clone()).normalize_zero();
        }
        let n = &(&self.num.derivative(s) * &self.den) - &(&self.num * &self.den.derivative(s));
        Self::reduce(n, &self.den * &self.den)
    }

    fn normalize_zero(self) -> Frac {
        if self.num.is_zero() {
            Frac::zero()
        } else {
            self
        }
    }

    /// Simultaneous substitution of symbols by fractions.
    pub fn substitute(&self, values: &HashMap<Symbol, Frac>) -> Result<Frac> {
        if values.is_empty() {
            return Ok(self.clone());
        }
        let n = substitute_poly(&self.num, values);
        let d = substitute_poly(&self.den, values);
        n.div(&d)
    }

    pub fn evaluate(&self, values: &HashMap<Symbol, Rational>) -> Result<Frac> {
        Frac::new(self.num.evaluate(values), self.den.evaluate(values))
    }
}

/// Evaluate a polynomial at fractions with a single final reduction.
pub fn substitute_poly(p: &Poly, values: &HashMap<Symbol, Frac>) -> Frac {
    let mut max_deg: HashMap<Symbol, u32> = HashMap::new();
    for (m, _) in p.terms() {
        for &(s, e) in m.pairs() {
            if values.contains_key(&s) {
                let slot = max_deg.entry(s).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
    }
    if max_deg.is_empty() {
        return Frac::from_poly(p.clone());
    }
    let mut pow_cache: HashMap<(Symbol, bool, u32), Poly> = HashMap::new();
    let mut power = |s: Symbol, numer: bool, e: u32| -> Poly {
        pow_cache
            .entry((s, numer, e))
            .or_insert_with(|| {
                let f = &values[&s];
                if numer {
                    f.num.pow(e)
                } else {
                    f.den.pow(e)
                }
            })
            .clone()
    };
    let mut common_den = Poly::one();
    for (&s, &e) in &max_deg {
        common_den = &common_den * &power(s, false, e);
    }
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut t = Poly::one().scale(c);
        let mut rest = Vec::new();
        for &(s, e) in m.pairs() {
            if values.contains_key(&s) {
                t = &t * &power(s, true, e);
                let k = max_deg[&s] - e;
                if k > 0 {
                    t = &t * &power(s, false, k);
                }
            } else {
                rest.push((s, e));
            }
        }
        for (s, &e) in &max_deg {
            if m.exponent(*s) == 0 {
                t = &t * &power(*s, false, e);
            }
        }
        num = &num + &t.mul_term(&super::poly::Monomial::from_pairs(rest), &Rational::one());
    }
    Frac::reduce(num, common_den)
}

fn wrap(p: &Poly) -> String {
    let text = p.to_string();
    if text.contains(' ') || text.contains('*') {
        format!("({text})")
    } else {
        text
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // A single-term numerator with a leading minus still needs grouping before `/`.
        let n = if self.num.len() > 1 || self.num.leading_coefficient() < Rational::zero() {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{}/{}", n, wrap(&self.den))
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
