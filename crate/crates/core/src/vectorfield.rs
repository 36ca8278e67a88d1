//! Rational vector fields with differential parameters, Lie derivatives and singular points.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::frac::substitute_poly;
use crate::algebra::gcd::gcd;
use crate::algebra::resultant::resultant;
use crate::algebra::roots::roots_in_field;
use crate::algebra::{exact_divides, Frac, MultiPoly, Poly, RatFunc, Rational, Scalar};
use crate::error::{Error, Result};
use crate::symbol::Symbol;

/// How a differential parameter differentiates.
#[derive(Clone, Debug, PartialEq)]
pub enum DerivativeLaw {
    /// z' = c·z
    Log(Scalar),
    /// z' = c
    Const(Scalar),
}

/// A symbol with a prescribed derivative, standing for a solution of z' = c·z or z' = c.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffParam {
    pub name: Symbol,
    pub law: DerivativeLaw,
}

impl DiffParam {
    pub fn log(name: &str, c: Scalar) -> Self {
        DiffParam {
            name: Symbol::new(name),
            law: DerivativeLaw::Log(c),
        }
    }

    pub fn constant(name: &str, c: Scalar) -> Self {
        DiffParam {
            name: Symbol::new(name),
            law: DerivativeLaw::Const(c),
        }
    }

    pub fn derivative(&self) -> RatFunc {
        match &self.law {
            DerivativeLaw::Log(c) => RatFunc::from(c) * RatFunc::symbol(self.name),
            DerivativeLaw::Const(c) => RatFunc::from(c),
        }
    }

    fn coefficient(&self) -> &Scalar {
        match &self.law {
            DerivativeLaw::Log(c) | DerivativeLaw::Const(c) => c,
        }
    }
}

/// X_i' = components[i], plus the derivation on differential parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    vars: Vec<Symbol>,
    components: Vec<RatFunc>,
    diff_params: Vec<DiffParam>,
    degrees: Vec<Option<u32>>,
}

impl VectorField {
    pub fn new(vars: Vec<Symbol>, components: Vec<RatFunc>, diff_params: Vec<DiffParam>) -> Result<Self> {
        if vars.len() != components.len() {
            return Err(Error::InvalidArgument(format!(
                "{} variables but {} components",
                vars.len(),
                components.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("variable {v} declared twice")));
            }
        }
        for (i, z) in diff_params.iter().enumerate() {
            if vars.contains(&z.name) || diff_params[..i].iter().any(|w| w.name == z.name) {
                return Err(Error::InvalidArgument(format!(
                    "differential parameter {} clashes with another name",
                    z.name
                )));
            }
            let c = z.coefficient();
            if vars.iter().any(|v| c.contains(*v)) || diff_params.iter().any(|w| c.contains(w.name)) {
                return Err(Error::InvalidArgument(format!(
                    "derivative of {} must be a constant multiple of itself or a constant",
                    z.name
                )));
            }
        }
        let degrees = components
            .iter()
            .map(|c| MultiPoly::from_ratfunc(&vars, c).map(|p| p.degree()))
            .collect();
        Ok(VectorField {
            vars,
            components,
            diff_params,
            degrees,
        })
    }

    /// A polynomial field on the variables of the components.
    pub fn polynomial(vars: &[Symbol], components: Vec<MultiPoly>) -> Result<Self> {
        Self::new(
            vars.to_vec(),
            components.iter().map(MultiPoly::to_ratfunc).collect(),
            Vec::new(),
        )
    }

    pub fn with_diff_params(&self, diff_params: Vec<DiffParam>) -> Result<Self> {
        Self::new(self.vars.clone(), self.components.clone(), diff_params)
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    pub fn diff_params(&self) -> &[DiffParam] {
        &self.diff_params
    }

    /// Variables followed by differential parameters: the coordinates forms live on.
    pub fn coordinates(&self) -> Vec<Symbol> {
        let mut c = self.vars.clone();
        c.extend(self.diff_params.iter().map(|z| z.name));
        c
    }

    /// The derivation's value on a coordinate, if the symbol is one.
    pub fn derivative_of(&self, s: Symbol) -> Option<RatFunc> {
        if let Some(i) = self.vars.iter().position(|v| *v == s) {
            return Some(self.components[i].clone());
        }
        self.diff_params.iter().find(|z| z.name == s).map(DiffParam::derivative)
    }

    pub fn is_polynomial(&self) -> bool {
        self.degrees.iter().all(Option::is_some)
    }

    pub fn polynomial_components(&self) -> Option<Vec<MultiPoly>> {
        self.components
            .iter()
            .map(|c| MultiPoly::from_ratfunc(&self.vars, c))
            .collect()
    }

    /// Cached total degree of each polynomial component.
    pub fn component_degrees(&self) -> &[Option<u32>] {
        &self.degrees
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.iter().copied().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Lie derivative of a rational function.
    pub fn lie_derivative_rat(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (v, c) in self.vars.iter().zip(&self.components) {
            if f.contains(*v) {
                acc = &acc + &(c * &f.derivative(*v));
            }
        }
        for z in &self.diff_params {
            if f.contains(z.name) {
                acc = &acc + &(&z.derivative() * &f.derivative(z.name));
            }
        }
        acc
    }

    /// Substitute rational values for parameters in components and derivative laws.
    pub fn specialize(&self, values: &HashMap<Symbol, Rational>) -> Result<VectorField> {
        let comps = self
            .components
            .iter()
            .map(|c| c.evaluate(values))
            .collect::<Result<Vec<_>>>()?;
        let dps = self
            .diff_params
            .iter()
            .map(|z| {
                let law = match &z.law {
                    DerivativeLaw::Log(c) => DerivativeLaw::Log(c.evaluate(values)?),
                    DerivativeLaw::Const(c) => DerivativeLaw::Const(c.evaluate(values)?),
                };
                Ok(DiffParam { name: z.name, law })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.vars.clone(), comps, dps)
    }

    /// Substitute Scalars for parameters.
    pub fn substitute_params(&self, values: &HashMap<Symbol, Scalar>) -> Result<VectorField> {
        let map: HashMap<Symbol, Frac> = values.iter().map(|(k, v)| (*k, v.0.clone())).collect();
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&map))
            .collect::<Result<Vec<_>>>()?;
        let dps = self
            .diff_params
            .iter()
            .map(|z| {
                let law = match &z.law {
                    DerivativeLaw::Log(c) => DerivativeLaw::Log(c.substitute(&map)?),
                    DerivativeLaw::Const(c) => DerivativeLaw::Const(c.substitute(&map)?),
                };
                Ok(DiffParam { name: z.name, law })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.vars.clone(), comps, dps)
    }

    /// Symbols other than variables and differential parameters.
    pub fn parameters(&self) -> Vec<Symbol> {
        let coords = self.coordinates();
        let mut out = std::collections::BTreeSet::new();
        for c in &self.components {
            out.extend(c.symbols());
        }
        for z in &self.diff_params {
            out.extend(z.coefficient().symbols());
        }
        out.into_iter().filter(|s| !coords.contains(s)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.components)
            .map(|(v, c)| match MultiPoly::from_ratfunc(&self.vars, c) {
                Some(p) => format!("{v}' = {p}"),
                None => format!("{v}' = {c}"),
            })
            .chain(self.diff_params.iter().map(|z| format!("{}' = {}", z.name, z.derivative())))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// L_s(p) = Σ componentᵢ ∂p/∂Xᵢ + p^δ.
pub fn lie_derivative(s: &VectorField, p: &MultiPoly) -> Result<MultiPoly> {
    let coords = s.coordinates();
    if let Some(v) = p.vars().iter().find(|v| !coords.contains(v)) {
        return Err(Error::UnknownVariable(v.to_string()));
    }
    let r = s.lie_derivative_rat(&p.to_ratfunc());
    MultiPoly::from_ratfunc(s.vars(), &r).ok_or(Error::NotPolynomial)
}

/// The cofactor L_s(p)/p when p is invariant.
pub fn is_invariant(s: &VectorField, p: &MultiPoly) -> Result<Option<MultiPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !s.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let p = p.with_vars(s.vars())?;
    let l = lie_derivative(s, &p)?;
    Ok(exact_divides(&p, &l).map(|k| k.with_vars(s.vars()).expect("cofactor is polynomial")))
}

/// An equilibrium with coordinates in Q(params).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularPoint {
    pub coordinates: Vec<Scalar>,
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coordinates.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The singular points found and whether anything was left out.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub points: Vec<SingularPoint>,
    /// Some common zeros have coordinates outside Q(params) and are not listed.
    pub discarded_nonrational: bool,
    /// Some factor could not be decided; listed points may be incomplete.
    pub uncertain: bool,
}

/// Common zeros of a planar field of degree ≤ 2 with coordinates in Q(params).
pub fn singular_points(s: &VectorField) -> Result<SingularLocus> {
    if s.dimension() != 2 {
        return Err(Error::UnsupportedDegree(format!(
            "singular points need a planar field, got dimension {}",
            s.dimension()
        )));
    }
    let comps = s.polynomial_components().ok_or(Error::NotPolynomial)?;
    if comps.iter().any(|c| c.degree() > 2) {
        return Err(Error::UnsupportedDegree(
            "singular points are computed for components of degree at most 2".into(),
        ));
    }
    let (x, y) = (s.vars()[0], s.vars()[1]);
    if let Some(i) = comps.iter().position(MultiPoly::is_zero) {
        return Err(Error::PositiveDimensionalSingularLocus(format!(
            "component {} is identically zero",
            s.vars()[i]
        )));
    }
    let f = comps[0].primitive_numer();
    let g = comps[1].primitive_numer();
    let common = gcd(&f, &g);
    if common.contains(x) || common.contains(y) {
        return Err(Error::PositiveDimensionalSingularLocus(
            MultiPoly::from_poly(s.vars(), common).normalized().to_string(),
        ));
    }
    let mut locus = SingularLocus {
        points: Vec::new(),
        discarded_nonrational: false,
        uncertain: false,
    };
    let r = resultant(&f, &g, y);
    if r.is_zero() {
        return Err(Error::PositiveDimensionalSingularLocus("resultant vanishes".into()));
    }
    let xs = roots_in_field(&r, x);
    locus.discarded_nonrational |= xs.discarded();
    locus.uncertain |= !xs.certain;
    for x0 in &xs.roots {
        let at = HashMap::from([(x, x0.0.clone())]);
        let fy = substitute_poly(&f, &at);
        let gy = substitute_poly(&g, &at);
        let h = gcd(fy.numer(), gy.numer());
        if !h.contains(y) {
            continue;
        }
        let ys = roots_in_field(&h, y);
        locus.discarded_nonrational |= ys.discarded();
        locus.uncertain |= !ys.certain;
        for y0 in ys.roots {
            locus.points.push(SingularPoint {
                coordinates: vec![x0.clone(), y0],
            });
        }
    }
    locus.points.sort_by_key(|p| p.to_string());
    locus.points.dedup();
    for p in &locus.points {
        debug_assert!(comps.iter().all(|c| c.evaluate_at(&p.coordinates).is_zero()));
    }
    Ok(locus)
}

/// Jacobian matrix of the polynomial components at a point.
pub fn jacobian_at(s: &VectorField, point: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    let comps = s.polynomial_components().ok_or(Error::NotPolynomial)?;
    Ok(comps
        .iter()
        .map(|c| s.vars().iter().map(|v| c.derivative(*v).evaluate_at(point)).collect())
        .collect())
}

/// Helper for building polynomials over a field's variables.
pub fn poly_in(s: &VectorField, p: Poly) -> MultiPoly {
    MultiPoly::from_poly(s.vars(), p)
}
