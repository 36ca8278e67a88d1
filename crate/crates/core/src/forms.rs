//! Rational differential forms on affine space: d, wedge, interior product,
//! Lie derivative by Cartan's formula, and normalization of logarithmic
//! combinations du + Σ cᵢ dvᵢ/vᵢ.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::linalg::row_reduce;
use crate::algebra::{Rational, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::vectorfield::VectorField;

/// A homogeneous m-form Σ f_I dx_I with I strictly increasing indices into `coords`.
#[derive(Clone, Debug, PartialEq)]
pub struct DForm {
    coords: Vec<Symbol>,
    arity: usize,
    terms: BTreeMap<Vec<usize>, RatFunc>,
}

/// Sign of the permutation sorting `idx`, or None on a repeated index.
fn sort_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl DForm {
    pub fn zero(coords: &[Symbol], arity: usize) -> Self {
        DForm {
            coords: coords.to_vec(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The 0-form f.
    pub fn function(coords: &[Symbol], f: RatFunc) -> Self {
        let mut w = Self::zero(coords, 0);
        w.add_term(vec![], f);
        w
    }

    /// dx for a coordinate x.
    pub fn differential(coords: &[Symbol], x: Symbol) -> Result<Self> {
        let i = coords
            .iter()
            .position(|c| *c == x)
            .ok_or_else(|| Error::UnknownVariable(x.to_string()))?;
        let mut w = Self::zero(coords, 1);
        w.add_term(vec![i], RatFunc::one());
        Ok(w)
    }

    /// f · dx_{i₁} ∧ … ∧ dx_{iₘ} for coordinates given by name, in any order.
    pub fn monomial(coords: &[Symbol], f: RatFunc, dirs: &[Symbol]) -> Result<Self> {
        let mut acc = Self::function(coords, f);
        for &x in dirs {
            acc = acc.wedge(&Self::differential(coords, x)?);
        }
        Ok(acc)
    }

    fn add_term(&mut self, idx: Vec<usize>, f: RatFunc) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&idx) {
            Some(old) => &old + &f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &RatFunc)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of dx_{dirs} (dirs in any order; the sign is applied).
    pub fn coefficient(&self, dirs: &[Symbol]) -> Result<RatFunc> {
        let mut idx = dirs
            .iter()
            .map(|x| {
                self.coords
                    .iter()
                    .position(|c| c == x)
                    .ok_or_else(|| Error::UnknownVariable(x.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let Some(sign) = sort_sign(&mut idx) else {
            return Ok(RatFunc::zero());
        };
        let c = self.terms.get(&idx).cloned().unwrap_or_else(RatFunc::zero);
        Ok(if sign < 0 { -c } else { c })
    }

    fn same_space(&self, other: &DForm) {
        assert_eq!(self.coords, other.coords, "forms live on different coordinate systems");
    }

    pub fn add(&self, other: &DForm) -> DForm {
        self.same_space(other);
        assert_eq!(self.arity, other.arity, "adding forms of different arity");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> DForm {
        self.scale(&-RatFunc::one())
    }

    pub fn sub(&self, other: &DForm) -> DForm {
        self.add(&other.neg())
    }

    /// Multiply by a function.
    pub fn scale(&self, f: &RatFunc) -> DForm {
        let mut out = Self::zero(&self.coords, self.arity);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * f);
        }
        out
    }

    pub fn wedge(&self, other: &DForm) -> DForm {
        self.same_space(other);
        let mut out = Self::zero(&self.coords, self.arity + other.arity);
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                let mut idx: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some(sign) = sort_sign(&mut idx) {
                    let c = f * g;
                    out.add_term(idx, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn exterior_derivative(&self) -> DForm {
        let mut out = Self::zero(&self.coords, self.arity + 1);
        for (idx, f) in &self.terms {
            for (k, &x) in self.coords.iter().enumerate() {
                if idx.contains(&k) || !f.contains(x) {
                    continue;
                }
                let mut full = vec![k];
                full.extend(idx);
                let sign = sort_sign(&mut full).expect("distinct indices");
                let c = f.derivative(x);
                out.add_term(full, if sign < 0 { -c } else { c });
            }
        }
        out
    }

    /// Contraction with the field: every coordinate needs a prescribed derivative.
    pub fn interior_product(&self, s: &VectorField) -> Result<DForm> {
        if self.arity == 0 {
            return Err(Error::ArityZero);
        }
        let velocity = self
            .coords
            .iter()
            .map(|&x| s.derivative_of(x).ok_or_else(|| Error::UnknownVariable(x.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::zero(&self.coords, self.arity - 1);
        for (idx, f) in &self.terms {
            for (pos, &k) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = f * &velocity[k];
                out.add_term(rest, if pos % 2 == 1 { -c } else { c });
            }
        }
        Ok(out)
    }

    /// L_s ω = i_s(dω) + d(i_s ω).
    pub fn lie_derivative(&self, s: &VectorField) -> Result<DForm> {
        let first = self.exterior_derivative().interior_product(s)?;
        if self.arity == 0 {
            return Ok(first);
        }
        Ok(first.add(&self.interior_product(s)?.exterior_derivative()))
    }

    /// L_s ω = 0.
    pub fn is_invariant(&self, s: &VectorField) -> Result<bool> {
        Ok(self.lie_derivative(s)?.is_zero())
    }
}

pub fn exterior_derivative(w: &DForm) -> DForm {
    w.exterior_derivative()
}

pub fn wedge(a: &DForm, b: &DForm) -> DForm {
    a.wedge(b)
}

pub fn interior_product(s: &VectorField, w: &DForm) -> Result<DForm> {
    w.interior_product(s)
}

pub fn lie_derivative_form(s: &VectorField, w: &DForm) -> Result<DForm> {
    w.lie_derivative(s)
}

impl fmt::Display for DForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let dirs: Vec<String> = idx.iter().map(|&i| format!("d{}", self.coords[i])).collect();
            let dirs = dirs.join("^");
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(' ') => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if n > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let body = if body.contains(' ') { format!("({body})") } else { body };
            match (dirs.is_empty(), body == "1") {
                (true, _) => write!(f, "{body}")?,
                (false, true) => write!(f, "{dirs}")?,
                (false, false) => write!(f, "{body}*{dirs}")?,
            }
        }
        Ok(())
    }
}

/// One element of the Q-basis in which log coefficients are written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    One,
    Symbol(Symbol),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::One => f.write_str("1"),
            BasisElement::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// du + Σ cᵢ dvᵢ/vᵢ, with each cᵢ a Q-combination of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCombination {
    pub basis: Vec<BasisElement>,
    pub exact_part: RatFunc,
    pub log_terms: Vec<(Scalar, RatFunc)>,
}

impl LogCombination {
    pub fn new(basis: Vec<BasisElement>, exact_part: RatFunc, log_terms: Vec<(Scalar, RatFunc)>) -> Self {
        LogCombination {
            basis,
            exact_part,
            log_terms,
        }
    }

    /// Coordinates of `c` over the basis.
    pub fn coordinates_of(&self, c: &Scalar) -> Result<Vec<Rational>> {
        let bad = || Error::NonRepresentableCoefficient(c.to_string());
        let den = c.denom().as_constant().ok_or_else(bad)?;
        let mut out = vec![Rational::zero(); self.basis.len()];
        for (m, q) in c.numer().terms() {
            let slot = match m.pairs() {
                [] => BasisElement::One,
                [(s, 1)] => BasisElement::Symbol(*s),
                _ => return Err(bad()),
            };
            let i = self.basis.iter().position(|b| *b == slot).ok_or_else(bad)?;
            out[i] = q / &den;
        }
        Ok(out)
    }

    /// The 1-form du + Σ cᵢ dvᵢ/vᵢ on `coords`.
    pub fn to_form(&self, coords: &[Symbol]) -> Result<DForm> {
        let mut acc = DForm::function(coords, self.exact_part.clone()).exterior_derivative();
        for (c, v) in &self.log_terms {
            let dv = DForm::function(coords, v.clone()).exterior_derivative();
            acc = acc.add(&dv.scale(&(&RatFunc::from(c) * &v.inv()?)));
        }
        Ok(acc)
    }

    /// Whether the log coefficients are Q-linearly independent over the basis.
    pub fn coefficients_independent(&self) -> Result<bool> {
        let vectors = self
            .log_terms
            .iter()
            .map(|(c, _)| self.coordinates_of(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(rank(&vectors) == vectors.len())
    }
}

fn rank(vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Scalar>> = vectors
        .iter()
        .map(|v| v.iter().cloned().map(Scalar::from_rational).collect())
        .collect();
    let n = rows[0].len();
    row_reduce(rows, n, None).rank()
}

/// Rewrite the log part with Q-independent coefficients eⱼ/N and arguments
/// wⱼ = Π vᵢ^γᵢⱼ (γ integral), leaving the exact part alone.
pub fn rosenlicht_normalize(lc: &LogCombination) -> Result<LogCombination> {
    let vectors = lc
        .log_terms
        .iter()
        .map(|(c, _)| lc.coordinates_of(c))
        .collect::<Result<Vec<_>>>()?;
    // Greedy maximal independent subset, in input order.
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..vectors.len() {
        let mut trial: Vec<Vec<Rational>> = chosen.iter().map(|&j| vectors[j].clone()).collect();
        trial.push(vectors[i].clone());
        if rank(&trial) == trial.len() {
            chosen.push(i);
        }
    }
    // λᵢⱼ with cᵢ = Σⱼ λᵢⱼ c_chosen(j): solve [chosen | cᵢ] and read the kernel vector.
    let mut lambdas: Vec<Vec<Rational>> = Vec::new();
    for v in &vectors {
        let k = lc.basis.len();
        let rows: Vec<Vec<Scalar>> = (0..k)
            .map(|r| {
                chosen
                    .iter()
                    .map(|&j| Scalar::from_rational(vectors[j][r].clone()))
                    .chain(std::iter::once(Scalar::from_rational(v[r].clone())))
                    .collect()
            })
            .collect();
        let ns = row_reduce(rows, chosen.len() + 1, None).nullspace();
        let kernel = ns
            .iter()
            .find(|w| !w[chosen.len()].is_zero())
            .expect("every coefficient lies in the span of the chosen ones");
        let last = kernel[chosen.len()].as_rational().expect("rational");
        lambdas.push(
            kernel[..chosen.len()]
                .iter()
                .map(|x| -x.as_rational().expect("rational") / &last)
                .collect(),
        );
    }
    let n = lambdas
        .iter()
        .flatten()
        .fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let n_rat = Rational::from_integer(n);
    let mut log_terms = Vec::new();
    for (jpos, &j) in chosen.iter().enumerate() {
        let mut w = RatFunc::one();
        for (i, (_, v)) in lc.log_terms.iter().enumerate() {
            let g = &lambdas[i][jpos] * &n_rat;
            debug_assert!(g.is_integer());
            if g.is_zero() {
                continue;
            }
            let e = g.to_integer().to_i32().ok_or_else(|| {
                Error::InvalidArgument(format!("exponent {g} is too large"))
            })?;
            w = &w * &v.pow(e)?;
        }
        let coeff = lc.log_terms[j].0.scale(&(Rational::one() / &n_rat));
        log_terms.push((coeff, w));
    }
    Ok(LogCombination {
        basis: lc.basis.clone(),
        exact_part: lc.exact_part.clone(),
        log_terms,
    })
}
