//! Search for invariant algebraic curves (Darboux polynomials) of planar polynomial fields.
//!
//! The bilinear system L(P) = K·P is reduced to finitely many linear problems:
//! the top-degree part of K comes from the invariant factors of X·G₂ − Y·F₂,
//! and the constant part from eigenvalue sums of the linearization at a
//! rational singular point (or, lacking one, from a determinant in a pencil
//! parameter). Each candidate K then leaves a nullspace computation for P.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::algebra::gcd::{content, gcd};
use crate::algebra::linalg::row_reduce;
use crate::algebra::roots::{roots_in_field, RootSet};
use crate::algebra::{exact_divides, Exponents, MultiPoly, Poly, Scalar};
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::vectorfield::{
    is_invariant, jacobian_at, lie_derivative, singular_points, DiffParam, SingularPoint, VectorField,
};

/// Where the coefficients of an invariant polynomial live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefinitionField {
    Constants,
    DiffParam(Symbol),
}

impl fmt::Display for DefinitionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefinitionField::Constants => f.write_str("CONSTANTS"),
            DefinitionField::DiffParam(z) => write!(f, "DIFF_PARAM({z})"),
        }
    }
}

/// An invariant polynomial with its cofactor: L(poly) = cofactor·poly.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCurve {
    pub poly: MultiPoly,
    pub cofactor: MultiPoly,
    pub definition_field: DefinitionField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    CompleteUpToBound,
    Partial,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::CompleteUpToBound => "COMPLETE_UP_TO_BOUND",
            Completeness::Partial => "PARTIAL",
        })
    }
}

/// Infinitely many invariant curves sharing one cofactor: every nonzero
/// combination of `basis` (plus an arbitrary constant when the cofactor is 0).
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantFamily {
    pub cofactor: MultiPoly,
    pub basis: Vec<MultiPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxReport {
    pub degree_bound: u32,
    pub curves: Vec<InvariantCurve>,
    pub completeness: Completeness,
    /// Parameter polynomials whose vanishing may change the answer (each means "= 0").
    pub branching_conditions: Vec<Scalar>,
    pub families: Vec<InvariantFamily>,
    pub notes: Vec<String>,
}

/// Linearization data at a singular point with coordinates in the coefficient field.
#[derive(Clone, Debug)]
struct PointData {
    point: Vec<Scalar>,
    trace: Scalar,
    det: Scalar,
    /// Eigenvalues, when the discriminant is a square in the field.
    eigen: Option<(Scalar, Scalar)>,
}

impl PointData {
    fn new(s: &VectorField, p: &SingularPoint) -> Result<Self> {
        let j = jacobian_at(s, &p.coordinates)?;
        Ok(Self::from_matrix(p.coordinates.clone(), &j))
    }

    fn from_matrix(point: Vec<Scalar>, j: &[Vec<Scalar>]) -> Self {
        let trace = &j[0][0] + &j[1][1];
        let det = &(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]);
        let disc = &(&trace * &trace) - &(&Scalar::from_int(4) * &det);
        let eigen = disc.sqrt().map(|r| {
            let half = Scalar::ratio(1, 2);
            (&(&trace + &r) * &half, &(&trace - &r) * &half)
        });
        PointData {
            point,
            trace,
            det,
            eigen,
        }
    }

    /// {iλ₁ + jλ₂} lying in the field, over i+j ≤ n (or = n when `exact`).
    fn eigen_sums(&self, n: u32, exact: bool) -> Vec<Scalar> {
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n - i {
                if exact && i + j != n {
                    continue;
                }
                let v = match &self.eigen {
                    Some((l1, l2)) => &(l1 * &Scalar::from_int(i as i64)) + &(l2 * &Scalar::from_int(j as i64)),
                    None if i == j => &self.trace * &Scalar::from_int(i as i64),
                    None => continue,
                };
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

enum Membership {
    Member,
    NotMember,
    /// Not a member for generic parameters; the listed values vanish on the exceptions.
    Generic(Vec<Scalar>),
}

/// Is `t` one of the sums iλ₁ + jλ₂ (i+j ≤ n) at this point? Decided without eigenvalues,
/// through products of conjugate pairs.
fn eigen_sum_membership(t: &Scalar, pd: &PointData, n: u32) -> Membership {
    let tr = &pd.trace;
    let det = &pd.det;
    let tr2 = tr * tr;
    let mut generic = Vec::new();
    for i in 0..=n {
        for j in i..=n - i {
            let k = |v: u32| Scalar::from_int(v as i64);
            let v = if i == j {
                t - &(tr * &k(i))
            } else {
                let lin = &(tr * &k(i + j)) * t;
                let c = &(&k(i * j) * &(&tr2 - &(det * &k(2)))) + &(det * &k(i * i + j * j));
                &(&(t * t) - &lin) + &c
            };
            if v.is_zero() {
                return Membership::Member;
            }
            if !v.is_rational() {
                generic.push(v);
            }
        }
    }
    if generic.is_empty() {
        Membership::NotMember
    } else {
        Membership::Generic(generic)
    }
}

struct Context {
    vars: Vec<Symbol>,
    f: MultiPoly,
    g: MultiPoly,
    degree: u32,
    points: Vec<PointData>,
    /// L(X^i Y^j) for all i + j ≤ bound.
    images: HashMap<Exponents, MultiPoly>,
}

#[derive(Default)]
struct Log {
    partial: bool,
    conditions: Vec<Scalar>,
    notes: Vec<String>,
}

impl Log {
    fn condition(&mut self, c: &Scalar) {
        for factor in condition_factors(c) {
            if !self.conditions.contains(&factor) {
                self.conditions.push(factor);
            }
        }
    }

    fn note(&mut self, s: String) {
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }
}

/// Split the numerator of a condition into normalized factors grouped by support.
fn condition_factors(c: &Scalar) -> Vec<Scalar> {
    let mut work = vec![c.numer().clone()];
    let mut out = Vec::new();
    while let Some(p) = work.pop() {
        if p.is_constant() {
            continue;
        }
        let mut split = None;
        for s in p.symbols() {
            let k = content(&p, s);
            if !k.is_constant() {
                split = Some((p.div_exact(&k).expect("content divides"), k));
                break;
            }
            let g = gcd(&p, &p.derivative(s));
            if !g.is_constant() {
                split = Some((p.div_exact(&g).expect("gcd divides"), g));
                break;
            }
        }
        match split {
            Some((a, b)) => {
                work.push(a);
                work.push(b);
            }
            None => {
                let f = Scalar::from_poly(p.integer_primitive());
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
    }
    out
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, t: T) {
    if !v.contains(&t) {
        v.push(t);
    }
}

fn monomials_up_to(n: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for d in (0..=n).rev() {
        for i in (0..=d).rev() {
            out.push(vec![i, d - i]);
        }
    }
    out
}

fn monomial(vars: &[Symbol], e: &[u32]) -> MultiPoly {
    let mut m = BTreeMap::new();
    m.insert(e.to_vec(), Scalar::one());
    MultiPoly::from_coefficients(vars, &m)
}

impl Context {
    fn new(field: &VectorField, bound: u32, log: &mut Log) -> Result<Self> {
        let comps = field.polynomial_components().ok_or(Error::NotPolynomial)?;
        let vars = field.vars().to_vec();
        let degree = comps.iter().map(MultiPoly::degree).max().unwrap_or(0);
        let mut points = Vec::new();
        if degree == 2 {
            match singular_points(field) {
                Ok(locus) => {
                    for p in &locus.points {
                        points.push(PointData::new(field, p)?);
                    }
                }
                Err(Error::PositiveDimensionalSingularLocus(w)) => {
                    log.note(format!("singular locus is a curve ({w}); cofactors found by elimination"));
                }
                Err(e) => return Err(e),
            }
            // Prefer a point whose eigenvalues lie in the field: it yields every eigen-sum explicitly.
            points.sort_by_key(|p| p.eigen.is_none());
        }
        let mut images = HashMap::new();
        for e in monomials_up_to(bound) {
            images.insert(e.clone(), lie_derivative(field, &monomial(&vars, &e))?);
        }
        Ok(Context {
            vars,
            f: comps[0].clone(),
            g: comps[1].clone(),
            degree,
            points,
            images,
        })
    }

    fn constant(&self, s: Scalar) -> MultiPoly {
        MultiPoly::constant(&self.vars, s)
    }

    /// Candidate cofactors for curves of degree exactly n.
    fn cofactor_candidates(&self, n: u32, log: &mut Log) -> Vec<MultiPoly> {
        let mut out: Vec<MultiPoly> = Vec::new();
        match self.degree {
            0 => push_unique(&mut out, MultiPoly::zero(&self.vars)),
            1 => {
                let lin = |p: &MultiPoly, e: [u32; 2]| p.coefficient(&e);
                let j = vec![
                    vec![lin(&self.f, [1, 0]), lin(&self.f, [0, 1])],
                    vec![lin(&self.g, [1, 0]), lin(&self.g, [0, 1])],
                ];
                let pd = PointData::from_matrix(vec![], &j);
                for k in pd.eigen_sums(n, true) {
                    push_unique(&mut out, self.constant(k));
                }
            }
            _ => {
                for k1 in self.top_cofactors(n, log) {
                    for k in self.constant_parts(&k1, n, log) {
                        push_unique(&mut out, k);
                    }
                }
            }
        }
        out
    }

    /// Possible degree-1 parts of the cofactor, from invariant factors of X·G₂ − Y·F₂.
    fn top_cofactors(&self, n: u32, log: &mut Log) -> Vec<MultiPoly> {
        let x = MultiPoly::symbol(&self.vars, self.vars[0]);
        let y = MultiPoly::symbol(&self.vars, self.vars[1]);
        let f2 = self.f.homogeneous_part(2);
        let g2 = self.g.homogeneous_part(2);
        let c3 = &(&x * &g2) - &(&y * &f2);
        if c3.is_zero() {
            // F₂ = X·h, G₂ = Y·h: every homogeneous polynomial is invariant for the top part.
            let h = if f2.is_zero() {
                exact_divides(&y, &g2)
            } else {
                exact_divides(&x, &f2)
            }
            .expect("radial top part");
            return vec![h.mul_scalar(&Scalar::from_int(n as i64))];
        }
        let (factors, certain) = homogeneous_factors(&c3, self.vars[0], self.vars[1]);
        if !certain {
            log.partial = true;
            log.note("could not decide the splitting of X*G2 - Y*F2 over the parameter field".into());
        }
        let top = |q: &MultiPoly| -> MultiPoly {
            let l2 = &(&f2 * &q.derivative(self.vars[0])) + &(&g2 * &q.derivative(self.vars[1]));
            exact_divides(q, &l2).expect("factors of X*G2 - Y*F2 are invariant for the top part")
        };
        let kappas: Vec<(u32, MultiPoly)> = factors.iter().map(|q| (q.degree(), top(q))).collect();
        let mut out = Vec::new();
        fn rec(
            kappas: &[(u32, MultiPoly)],
            left: u32,
            acc: MultiPoly,
            sink: &mut dyn FnMut(MultiPoly),
        ) {
            match kappas.split_first() {
                None => {
                    if left == 0 {
                        sink(acc)
                    }
                }
                Some(((d, k), rest)) => {
                    let mut e = 0;
                    while e * d <= left {
                        let next = &acc + &k.mul_scalar(&Scalar::from_int(e as i64));
                        rec(rest, left - e * d, next, sink);
                        e += 1;
                    }
                }
            }
        }
        rec(&kappas, n, MultiPoly::zero(&self.vars), &mut |k| push_unique(&mut out, k));
        out
    }

    /// Full cofactors K₁ + K₀ compatible with the linearizations at singular points.
    fn constant_parts(&self, k1: &MultiPoly, n: u32, log: &mut Log) -> Vec<MultiPoly> {
        let Some(first) = self.points.first() else {
            return self.pencil_constants(k1, n, log);
        };
        let mut out = Vec::new();
        'cand: for sum in first.eigen_sums(n, false) {
            let k0 = &sum - &k1.evaluate_at(&first.point);
            let k = k1 + &self.constant(k0);
            for other in &self.points[1..] {
                match eigen_sum_membership(&k.evaluate_at(&other.point), other, n) {
                    Membership::Member => {}
                    Membership::NotMember => continue 'cand,
                    Membership::Generic(conds) => {
                        for c in &conds {
                            log.condition(c);
                        }
                        continue 'cand;
                    }
                }
            }
            out.push(k);
        }
        out
    }

    /// Without a rational singular point: K₀ = λ is a root of a determinant in λ.
    fn pencil_constants(&self, k1: &MultiPoly, n: u32, log: &mut Log) -> Vec<MultiPoly> {
        let lambda = Symbol::fresh("pencil");
        let k = k1 + &MultiPoly::constant(&self.vars, Scalar::symbol(lambda));
        let (matrix, ncols) = self.system(n, &k, false);
        let ech = row_reduce(matrix, ncols, Some(lambda));
        if ech.rank() < ncols {
            log.partial = true;
            log.note(format!(
                "degree {n}: invariant curves exist for every constant cofactor part; search is partial"
            ));
            return Vec::new();
        }
        let det = ech.pivot_product.numer().clone();
        let RootSet { roots, certain, .. } = roots_in_field(&det, lambda);
        if !certain {
            log.partial = true;
            log.note(format!("degree {n}: could not decide all cofactor constants"));
        }
        roots
            .into_iter()
            .map(|r| k1 + &MultiPoly::constant(&self.vars, r))
            .collect()
    }

    /// Matrix of P ↦ L(P) − K·P on polynomials of degree ≤ n.
    fn system(&self, n: u32, k: &MultiPoly, drop_constant: bool) -> (Vec<Vec<Scalar>>, usize) {
        let cols: Vec<Exponents> = monomials_up_to(n)
            .into_iter()
            .filter(|e| !(drop_constant && e.iter().all(|&x| x == 0)))
            .collect();
        let images: Vec<BTreeMap<Exponents, Scalar>> = cols
            .iter()
            .map(|e| (&self.images[e] - &(k * &monomial(&self.vars, e))).coefficients())
            .collect();
        let mut rows: Vec<Exponents> = images.iter().flat_map(|m| m.keys().cloned()).collect();
        rows.sort();
        rows.dedup();
        let matrix = rows
            .iter()
            .map(|r| {
                images
                    .iter()
                    .map(|m| m.get(r).cloned().unwrap_or_else(Scalar::zero))
                    .collect()
            })
            .collect();
        (matrix, cols.len())
    }

    fn solve(&self, n: u32, k: &MultiPoly) -> Solved {
        let drop_constant = k.is_zero();
        let cols: Vec<Exponents> = monomials_up_to(n)
            .into_iter()
            .filter(|e| !(drop_constant && e.iter().all(|&x| x == 0)))
            .collect();
        let (matrix, ncols) = self.system(n, k, drop_constant);
        let ech = row_reduce(matrix, ncols, None);
        let basis: Vec<MultiPoly> = ech
            .nullspace()
            .into_iter()
            .map(|v| {
                let coeffs: BTreeMap<Exponents, Scalar> = cols
                    .iter()
                    .cloned()
                    .zip(v)
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                MultiPoly::from_coefficients(&self.vars, &coeffs).normalized()
            })
            .collect();
        Solved {
            cofactor: k.clone(),
            basis,
            conditions: ech.conditions,
        }
    }
}

struct Solved {
    cofactor: MultiPoly,
    basis: Vec<MultiPoly>,
    conditions: Vec<Scalar>,
}

/// Distinct invariant factors of a nonzero binary form of degree 3 over the coefficient field.
/// Returns the factors and whether the splitting was fully decided.
fn homogeneous_factors(c3: &MultiPoly, x: Symbol, y: Symbol) -> (Vec<MultiPoly>, bool) {
    let vars = c3.vars().to_vec();
    let flat = c3.primitive_numer();
    let u = flat.substitute(y, &Poly::one());
    let du = u.degree_in(x);
    let mut factors = Vec::new();
    if du < flat.total_degree_in(&[x, y]) {
        factors.push(MultiPoly::symbol(&vars, y));
    }
    let rs = roots_in_field(&u, x);
    let prim = u.div_exact(&content(&u, x)).expect("content divides");
    let mut rest = prim
        .div_exact(&gcd(&prim, &prim.derivative(x)))
        .expect("gcd divides");
    for r in &rs.roots {
        let line = &(&Poly::symbol(x) * r.denom()) - r.numer();
        rest = rest.div_exact(&line).expect("root gives a factor");
        let hom = &(&Poly::symbol(x) * r.denom()) - &(r.numer() * &Poly::symbol(y));
        factors.push(MultiPoly::from_poly(&vars, hom).normalized());
    }
    if rest.degree_in(x) > 0 {
        let d = rest.degree_in(x);
        let mut hom = Poly::zero();
        for (k, c) in rest.coefficients_in(x).into_iter().enumerate() {
            let m = &Poly::symbol(x).pow(k as u32) * &Poly::symbol(y).pow(d - k as u32);
            hom = &hom + &(&c * &m);
        }
        factors.push(MultiPoly::from_poly(&vars, hom).normalized());
    }
    (factors, rs.certain)
}

impl Poly {
    fn total_degree_in(&self, vars: &[Symbol]) -> u32 {
        self.terms()
            .map(|(m, _)| vars.iter().map(|v| m.exponent(*v)).sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

/// All invariant polynomials of degree ≤ `max_degree` with their cofactors.
pub fn darboux_search(s: &VectorField, max_degree: u32) -> Result<DarbouxReport> {
    if s.dimension() != 2 {
        return Err(Error::UnsupportedDegree(format!(
            "the curve search needs a planar field, got dimension {}",
            s.dimension()
        )));
    }
    if max_degree == 0 {
        return Err(Error::InvalidArgument("max_degree must be at least 1".into()));
    }
    let m = s.max_degree().ok_or(Error::NotPolynomial)?;
    if m > 2 {
        return Err(Error::UnsupportedDegree(format!(
            "the curve search handles components of degree at most 2, got {m}"
        )));
    }
    let mut log = Log::default();
    let ctx = Context::new(s, max_degree, &mut log)?;
    let mut found: Vec<(MultiPoly, MultiPoly)> = Vec::new();
    let mut families = Vec::new();
    for n in 1..=max_degree {
        let candidates = ctx.cofactor_candidates(n, &mut log);
        let solved: Vec<Solved> = candidates.par_iter().map(|k| ctx.solve(n, k)).collect();
        for sol in solved {
            for c in &sol.conditions {
                log.condition(c);
            }
            let first_integral = sol.cofactor.is_zero();
            if sol.basis.is_empty() {
                continue;
            }
            if sol.basis.len() > 1 || first_integral {
                let fam = InvariantFamily {
                    cofactor: sol.cofactor.clone(),
                    basis: sol.basis.clone(),
                };
                if !families.contains(&fam) {
                    families.push(fam);
                }
                continue;
            }
            let p = sol.basis[0].clone();
            if !found.iter().any(|(q, _)| *q == p) {
                found.push((p, sol.cofactor));
            }
        }
    }
    found.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.to_string().cmp(&b.0.to_string()))
    });
    let mut accepted: Vec<(MultiPoly, MultiPoly)> = Vec::new();
    for (p, k) in found {
        if !is_product_of(&p, accepted.iter().map(|c| &c.0)) {
            accepted.push((p, k));
        }
    }
    families.sort_by_key(|f| f.cofactor.to_string());
    let curves = accepted
        .into_iter()
        .map(|(poly, cofactor)| InvariantCurve {
            poly,
            cofactor,
            definition_field: DefinitionField::Constants,
        })
        .collect();
    let mut conditions = log.conditions;
    conditions.sort_by_key(|c| (c.numer().total_degree(), c.to_string()));
    Ok(DarbouxReport {
        degree_bound: max_degree,
        curves,
        completeness: if log.partial {
            Completeness::Partial
        } else {
            Completeness::CompleteUpToBound
        },
        branching_conditions: conditions,
        families,
        notes: log.notes,
    })
}

/// Whether `p` is a product of members of `found` (with repetition), up to a constant.
fn is_product_of<'a, I: Iterator<Item = &'a MultiPoly> + Clone>(p: &MultiPoly, found: I) -> bool {
    let mut q = p.clone();
    loop {
        if q.is_constant() {
            return true;
        }
        let mut progressed = false;
        for a in found.clone() {
            if let Some(r) = exact_divides(a, &q) {
                q = r;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return false;
        }
    }
}

/// The curve c·X − a·Y − z, where z' = b·z, invariant for X' = X(aY + b), Y' = Y(cX + b).
pub fn invariant_family_b_eq_d(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<InvariantCurve> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if v.is_zero() {
            return Err(Error::DegenerateParameters(format!("{name} must be nonzero")));
        }
    }
    let vars = [Symbol::new("X"), Symbol::new("Y")];
    let x = MultiPoly::symbol(&vars, vars[0]);
    let y = MultiPoly::symbol(&vars, vars[1]);
    let k = |s: &Scalar| MultiPoly::constant(&vars, s.clone());
    let field = VectorField::polynomial(
        &vars,
        vec![&x * &(&y.mul_scalar(a) + &k(b)), &y * &(&x.mul_scalar(c) + &k(b))],
    )?;
    let param = DiffParam::log("z", b.clone());
    let z = param.name;
    let field = field.with_diff_params(vec![param])?;
    let poly = &(&x.mul_scalar(c) - &y.mul_scalar(a)) - &MultiPoly::symbol(&vars, z);
    let cofactor = is_invariant(&field, &poly)?
        .ok_or_else(|| Error::InvalidArgument("c*X - a*Y - z failed the invariance check".into()))?;
    Ok(InvariantCurve {
        poly,
        cofactor,
        definition_field: DefinitionField::DiffParam(z),
    })
}

/// Re-expand the cofactor identity of every reported curve.
pub fn verify_report(s: &VectorField, report: &DarbouxReport) -> Result<bool> {
    for c in &report.curves {
        if lie_derivative(s, &c.poly)? != &c.cofactor * &c.poly {
            return Ok(false);
        }
    }
    Ok(true)
}
