//! `Scalar` (elements of Q(params)) and `RatFunc` (reduced rational functions).

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::frac::Frac;
use super::poly::{rat, Poly, Rational};
use crate::error::Result;
use crate::symbol::Symbol;

macro_rules! frac_newtype {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Hash)]
        pub struct $name(pub(crate) Frac);

        impl $name {
            pub fn zero() -> Self {
                $name(Frac::zero())
            }
            pub fn one() -> Self {
                $name(Frac::one())
            }
            pub fn from_int(n: i64) -> Self {
                $name(Frac::from_poly(Poly::from_int(n)))
            }
            pub fn from_rational(q: Rational) -> Self {
                $name(Frac::from_poly(Poly::constant(q)))
            }
            pub fn symbol(s: Symbol) -> Self {
                $name(Frac::from_poly(Poly::symbol(s)))
            }
            pub fn var(name: &str) -> Self {
                Self::symbol(Symbol::new(name))
            }
            pub fn from_poly(p: Poly) -> Self {
                $name(Frac::from_poly(p))
            }
            pub fn from_parts(num: Poly, den: Poly) -> Result<Self> {
                Ok($name(Frac::new(num, den)?))
            }
            pub fn frac(&self) -> &Frac {
                &self.0
            }
            pub fn numer(&self) -> &Poly {
                self.0.numer()
            }
            pub fn denom(&self) -> &Poly {
                self.0.denom()
            }
            pub fn is_zero(&self) -> bool {
                self.0.is_zero()
            }
            pub fn is_one(&self) -> bool {
                self.0.is_one()
            }
            pub fn as_rational(&self) -> Option<Rational> {
                self.0.as_constant()
            }
            pub fn is_rational(&self) -> bool {
                self.0.as_constant().is_some()
            }
            pub fn symbols(&self) -> BTreeSet<Symbol> {
                self.0.symbols()
            }
            pub fn contains(&self, s: Symbol) -> bool {
                self.0.contains(s)
            }
            pub fn checked_div(&self, o: &Self) -> Result<Self> {
                Ok($name(self.0.div(&o.0)?))
            }
            pub fn inv(&self) -> Result<Self> {
                Ok($name(self.0.inv()?))
            }
            pub fn pow(&self, e: i32) -> Result<Self> {
                Ok($name(self.0.pow(e)?))
            }
            pub fn scale(&self, c: &Rational) -> Self {
                $name(self.0.scale(c))
            }
            pub fn derivative(&self, s: Symbol) -> Self {
                $name(self.0.derivative(s))
            }
            pub fn substitute(&self, values: &HashMap<Symbol, Frac>) -> Result<Self> {
                Ok($name(self.0.substitute(values)?))
            }
            pub fn evaluate(&self, values: &HashMap<Symbol, Rational>) -> Result<Self> {
                Ok($name(self.0.evaluate(values)?))
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, o: &$name) -> $name {
                $name(self.0.add(&o.0))
            }
        }
        impl Sub for &$name {
            type Output = $name;
            fn sub(self, o: &$name) -> $name {
                $name(self.0.sub(&o.0))
            }
        }
        impl Mul for &$name {
            type Output = $name;
            fn mul(self, o: &$name) -> $name {
                $name(self.0.mul(&o.0))
            }
        }
        /// Panics on a zero divisor, like integer division; use `checked_div` otherwise.
        impl std::ops::Div for &$name {
            type Output = $name;
            fn div(self, o: &$name) -> $name {
                self.checked_div(o).expect("division by zero")
            }
        }
        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.neg())
            }
        }
        forward_ref_binops!($name, Add::add, Sub::sub, Mul::mul, Div::div);
        forward_neg!($name);

        impl From<i64> for $name {
            fn from(n: i64) -> Self {
                $name::from_int(n)
            }
        }
        impl From<Symbol> for $name {
            fn from(s: Symbol) -> Self {
                $name::symbol(s)
            }
        }
        impl From<Rational> for $name {
            fn from(q: Rational) -> Self {
                $name::from_rational(q)
            }
        }
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }
        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }
    };
}

frac_newtype!(
    /// Exact element of Q(p1, ..., pk).
    Scalar
);

frac_newtype!(
    /// Reduced rational function in variables and parameters.
    RatFunc
);

impl Scalar {
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(super::poly::ratio(n, d))
    }

    /// Square root inside Q(params), when one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let prod = self.numer() * self.denom();
        let r = prod.sqrt()?;
        Scalar::from_parts(r, self.denom().clone()).ok()
    }

    /// A nonzero rational, or the sign could depend on parameters.
    pub fn is_nonzero_constant(&self) -> bool {
        self.as_rational().is_some_and(|q| !q.is_zero())
    }
}

impl From<Scalar> for RatFunc {
    fn from(s: Scalar) -> Self {
        RatFunc(s.0)
    }
}

impl From<&Scalar> for RatFunc {
    fn from(s: &Scalar) -> Self {
        RatFunc(s.0.clone())
    }
}

impl RatFunc {
    /// Reinterpret as a Scalar if none of `vars` occur.
    pub fn to_scalar(&self, vars: &[Symbol]) -> Option<Scalar> {
        if vars.iter().any(|v| self.contains(*v)) {
            None
        } else {
            Some(Scalar(self.0.clone()))
        }
    }
}

/// `scalar_arith` as an explicit operation; division reports `DivisionByZero`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(lhs: &Scalar, rhs: &Scalar, op: ArithOp) -> Result<Scalar> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_rational(rat(n))
}
