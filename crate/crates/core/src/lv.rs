//! Lotka-Volterra systems X' = X(aY + b), Y' = Y(cX + d) and the 2d variant
//! Y' = Y(cX + dY): normalizing transforms, the reduction to a single
//! second-order equation in Z = X − Y, the orthogonality coefficient system,
//! and the closed-form solution family for b = d.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::algebra::{Frac, MultiPoly, RatFunc, Scalar};
use crate::error::{Error, Result};
use crate::forms::DForm;
use crate::symbol::Symbol;
use crate::vectorfield::{lie_derivative, SingularPoint, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Classical,
    TwoD,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LVSystem {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub variant: Variant,
}

fn plane() -> [Symbol; 2] {
    [Symbol::new("X"), Symbol::new("Y")]
}

impl LVSystem {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar, variant: Variant) -> Result<Self> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            if v.is_zero() {
                return Err(Error::DegenerateParameters(format!("{name} must be nonzero")));
            }
        }
        Ok(LVSystem { a, b, c, d, variant })
    }

    pub fn classical(a: impl Into<Scalar>, b: impl Into<Scalar>, c: impl Into<Scalar>, d: impl Into<Scalar>) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into(), Variant::Classical)
    }

    pub fn two_d(a: impl Into<Scalar>, b: impl Into<Scalar>, c: impl Into<Scalar>, d: impl Into<Scalar>) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into(), Variant::TwoD)
    }

    pub fn field(&self) -> VectorField {
        let vars = plane();
        let x = MultiPoly::symbol(&vars, vars[0]);
        let y = MultiPoly::symbol(&vars, vars[1]);
        let k = |s: &Scalar| MultiPoly::constant(&vars, s.clone());
        let fx = &x * &(&y.mul_scalar(&self.a) + &k(&self.b));
        let fy = match self.variant {
            Variant::Classical => &y * &(&x.mul_scalar(&self.c) + &k(&self.d)),
            Variant::TwoD => &y * &(&x.mul_scalar(&self.c) + &y.mul_scalar(&self.d)),
        };
        VectorField::polynomial(&vars, vec![fx, fy]).expect("two components on two variables")
    }

    /// Equilibria in closed form.
    pub fn singular_points(&self) -> Vec<SingularPoint> {
        let origin = SingularPoint {
            coordinates: vec![Scalar::zero(), Scalar::zero()],
        };
        let y = -&(&self.b / &self.a);
        let x = match self.variant {
            Variant::Classical => -&(&self.d / &self.c),
            Variant::TwoD => &(&self.d * &self.b) / &(&self.c * &self.a),
        };
        vec![origin, SingularPoint { coordinates: vec![x, y] }]
    }

    fn require_classical(&self) -> Result<()> {
        match self.variant {
            Variant::Classical => Ok(()),
            Variant::TwoD => Err(Error::InvalidArgument("operation needs the classical system".into())),
        }
    }
}

impl fmt::Display for LVSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.variant {
            Variant::Classical => "LV",
            Variant::TwoD => "LV2d",
        };
        write!(f, "{tag}[{}, {}, {}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// The linear change of variables X ↦ x_factor·X, Y ↦ y_factor·Y.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleMap {
    pub x_factor: Scalar,
    pub y_factor: Scalar,
}

impl ScaleMap {
    /// The field satisfied by (x_factor·X, y_factor·Y) when (X, Y) solves `s`.
    pub fn push_forward(&self, s: &VectorField) -> Result<VectorField> {
        let comps = s.polynomial_components().ok_or(Error::NotPolynomial)?;
        let vars = s.vars().to_vec();
        let factors = [&self.x_factor, &self.y_factor];
        let back: HashMap<Symbol, Frac> = vars
            .iter()
            .zip(factors)
            .map(|(&v, k)| Ok((v, (RatFunc::symbol(v).checked_div(&RatFunc::from(k))?).0)))
            .collect::<Result<_>>()?;
        let pushed = comps
            .iter()
            .zip(factors)
            .map(|(p, k)| Ok(p.substitute(&back)?.mul_scalar(k)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::polynomial(&vars, pushed)
    }
}

/// LV[a,b,c,d] → LV[1,b,1,d] through X ↦ cX, Y ↦ aY.
pub fn lv_scale_transform(sys: &LVSystem) -> Result<(LVSystem, ScaleMap)> {
    sys.require_classical()?;
    let target = LVSystem::new(Scalar::one(), sys.b.clone(), Scalar::one(), sys.d.clone(), Variant::Classical)?;
    Ok((
        target,
        ScaleMap {
            x_factor: sys.c.clone(),
            y_factor: sys.a.clone(),
        },
    ))
}

/// LV[1,b,1,d] → LV[1,d,1,b] by exchanging X and Y.
pub fn lv_swap_transform(sys: &LVSystem) -> Result<LVSystem> {
    sys.require_classical()?;
    if !sys.a.is_one() || !sys.c.is_one() {
        return Err(Error::NotNormalized);
    }
    LVSystem::new(Scalar::one(), sys.d.clone(), Scalar::one(), sys.b.clone(), Variant::Classical)
}

/// F(Z)' = Σ cᵢ Gᵢ(Z)'/Gᵢ(Z) with F, Gᵢ polynomial in (Z, Z').
#[derive(Clone, Debug, PartialEq)]
pub struct BrestovskiSystem {
    pub vars: [Symbol; 2],
    pub f: MultiPoly,
    pub terms: Vec<(Scalar, MultiPoly)>,
}

impl BrestovskiSystem {
    /// Z'' as a rational function of (Z, Z'), solved from the equation.
    pub fn second_derivative(&self) -> Result<RatFunc> {
        let [z, w] = self.vars;
        let rf = |p: &MultiPoly| p.to_ratfunc();
        let wr = RatFunc::symbol(w);
        let mut num = -&(&rf(&self.f.derivative(z)) * &wr);
        let mut den = rf(&self.f.derivative(w));
        for (c, g) in &self.terms {
            let cg = RatFunc::from(c).checked_div(&rf(g))?;
            num = &num + &(&(&cg * &rf(&g.derivative(z))) * &wr);
            den = &den - &(&cg * &rf(&g.derivative(w)));
        }
        num.checked_div(&den)
    }

    /// The phase-plane field Z ↦ Z', Z' ↦ Z''.
    pub fn field(&self) -> Result<VectorField> {
        VectorField::new(
            self.vars.to_vec(),
            vec![RatFunc::symbol(self.vars[1]), self.second_derivative()?],
            vec![],
        )
    }
}

/// Reduction of LV[1,b,1,d] through Z = X − Y, with the maps back to (X, Y).
#[derive(Clone, Debug, PartialEq)]
pub struct BrestovskiReduction {
    pub system: BrestovskiSystem,
    /// X = (Z' − dZ)/(b − d).
    pub x: MultiPoly,
    /// Y = (Z' − bZ)/(b − d).
    pub y: MultiPoly,
}

pub fn brestovski_reduce(b: &Scalar, d: &Scalar) -> Result<BrestovskiReduction> {
    let gap = b - d;
    if gap.is_zero() {
        return Err(Error::DegenerateParameters("the reduction needs b != d".into()));
    }
    let vars = [Symbol::new("Z"), Symbol::new("Z'")];
    let z = MultiPoly::symbol(&vars, vars[0]);
    let w = MultiPoly::symbol(&vars, vars[1]);
    let gb = &w - &z.mul_scalar(b);
    let gd = &w - &z.mul_scalar(d);
    let inv = gap.inv()?;
    Ok(BrestovskiReduction {
        x: gd.mul_scalar(&inv),
        y: gb.mul_scalar(&inv),
        system: BrestovskiSystem {
            vars,
            f: z,
            terms: vec![(b.clone(), gb), (-d, gd)],
        },
    })
}

/// ω₁ = dF/F' ∧ Σ cᵢ dGᵢ/Gᵢ on the (Z, Z') plane.
pub fn omega1_form(sys: &BrestovskiSystem) -> Result<DForm> {
    let coords = sys.vars.to_vec();
    if sys.terms.is_empty() {
        return Ok(DForm::zero(&coords, 2));
    }
    let s = sys.field()?;
    let f = sys.f.to_ratfunc();
    let f_dot = s.lie_derivative_rat(&f);
    let df = DForm::function(&coords, f).exterior_derivative().scale(&f_dot.inv()?);
    let mut logs = DForm::zero(&coords, 1);
    for (c, g) in &sys.terms {
        let g = g.to_ratfunc();
        let dg = DForm::function(&coords, g.clone()).exterior_derivative();
        logs = logs.add(&dg.scale(&RatFunc::from(c).checked_div(&g)?));
    }
    Ok(df.wedge(&logs))
}

/// A, B, C, D, G in X = A·U + B·V + d₁G, Y = C·U + D·V + b₁G.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformCoefficients {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
    pub g: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthoSystem {
    pub coefficients: TransformCoefficients,
    /// X' computed from LV[1,b₁,1,d₁] minus X' computed through (U, V); must vanish identically.
    pub poly: MultiPoly,
}

fn check_gaps(b1: &Scalar, d1: &Scalar, b2: &Scalar, d2: &Scalar) -> Result<Scalar> {
    if b1 == d1 || b2 == d2 {
        return Err(Error::DegenerateParameters("need b1 != d1 and b2 != d2".into()));
    }
    Ok(b1 - d1)
}

pub fn transform_coefficients(
    b1: &Scalar,
    d1: &Scalar,
    b2: &Scalar,
    d2: &Scalar,
    e: &Scalar,
    f: &Scalar,
) -> Result<TransformCoefficients> {
    let gap = check_gaps(b1, d1, b2, d2)?;
    let r = |n: Scalar| &(&n * e) / &gap;
    Ok(TransformCoefficients {
        a: r(b2 - d1),
        b: r(d1 - d2),
        c: r(b2 - b1),
        d: r(b1 - d2),
        g: -&(f / &gap),
    })
}

/// Derive the polynomial in (U, V) from X − Y = e(U − V) + f by computing X' two ways.
pub fn ortho_coefficient_system(
    b1: &Scalar,
    d1: &Scalar,
    b2: &Scalar,
    d2: &Scalar,
    e: &Scalar,
    f: &Scalar,
) -> Result<OrthoSystem> {
    let k = transform_coefficients(b1, d1, b2, d2, e, f)?;
    let vars = [Symbol::new("u"), Symbol::new("v")];
    let u = MultiPoly::symbol(&vars, vars[0]);
    let v = MultiPoly::symbol(&vars, vars[1]);
    let c = |s: &Scalar| MultiPoly::constant(&vars, s.clone());
    let x = &(&u.mul_scalar(&k.a) + &v.mul_scalar(&k.b)) + &c(&(d1 * &k.g));
    let y = &(&u.mul_scalar(&k.c) + &v.mul_scalar(&k.d)) + &c(&(b1 * &k.g));
    let uv_field = VectorField::polynomial(
        &vars,
        vec![&u * &(&v + &c(b2)), &v * &(&u + &c(d2))],
    )?;
    let poly = &(&x * &(&y + &c(b1))) - &lie_derivative(&uv_field, &x)?;
    Ok(OrthoSystem { coefficients: k, poly })
}

/// The coefficient polynomial as printed, term by term, for cross-checking the derivation.
pub fn displayed_coefficient_polynomial(k: &TransformCoefficients, b1: &Scalar, d1: &Scalar, b2: &Scalar, d2: &Scalar) -> MultiPoly {
    let vars = [Symbol::new("u"), Symbol::new("v")];
    let u = MultiPoly::symbol(&vars, vars[0]);
    let v = MultiPoly::symbol(&vars, vars[1]);
    let TransformCoefficients { a, b, c, d, g } = k;
    let uu = a * c;
    let vv = b * d;
    let uvc = &(&(&(a * d) + &(c * b)) - a) - b;
    let uc = &(&(&(&(b1 * a) * g) + &(&(d1 * c) * g)) + &(b1 * a)) - &(b2 * a);
    let vc = &(&(&(&(d1 * g) * d) + &(&(b1 * g) * b)) + &(b1 * b)) - &(d2 * b);
    let cc = &(&(b1 * d1) * &(g * g)) + &(&(b1 * d1) * g);
    let terms = [
        (u.pow(2), uu),
        (v.pow(2), vv),
        (&u * &v, uvc),
        (u.clone(), uc),
        (v.clone(), vc),
        (MultiPoly::one(&vars), cc),
    ];
    terms
        .iter()
        .fold(MultiPoly::zero(&vars), |acc, (m, s)| &acc + &m.mul_scalar(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Direct,
    Swapped,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Direct => "DIRECT",
            CaseTag::Swapped => "SWAPPED",
        })
    }
}

/// X − Y = e(U − V) + f, with the parameter equations the case rests on.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformSolution {
    pub case_tag: CaseTag,
    pub e: Scalar,
    pub f: Scalar,
    pub constraints: Vec<String>,
}

/// Walk the case tree of the coefficient system: u², v², uv, then u, v and the constant term.
pub fn enumerate_transform_solutions(b1: &Scalar, d1: &Scalar, b2: &Scalar, d2: &Scalar) -> Result<Vec<TransformSolution>> {
    let gap = check_gaps(b1, d1, b2, d2)?;
    for (name, v) in [("b1", b1), ("d1", d1), ("b2", b2), ("d2", d2)] {
        if v.is_zero() {
            return Err(Error::DegenerateParameters(format!("{name} must be nonzero")));
        }
    }
    // A = αA·e etc.
    let (aa, ab, ac, ad) = (
        &(b2 - d1) / &gap,
        &(d1 - d2) / &gap,
        &(b2 - b1) / &gap,
        &(b1 - d2) / &gap,
    );
    // e ≠ 0, so u² and v² force αA·αC = 0 and αB·αD = 0.
    if !(&aa * &ac).is_zero() || !(&ab * &ad).is_zero() {
        return Ok(vec![]);
    }
    let (case_tag, constraints) = if ac.is_zero() && ab.is_zero() {
        (CaseTag::Direct, vec!["b2 = b1".to_string(), "d2 = d1".to_string()])
    } else if aa.is_zero() && ad.is_zero() {
        (CaseTag::Swapped, vec!["b2 = d1".to_string(), "d2 = b1".to_string()])
    } else {
        return Ok(vec![]);
    };
    // uv: (αAαD + αBαC)e² − (αA + αB)e = 0.
    let quad = &(&aa * &ad) + &(&ab * &ac);
    let lin = &aa + &ab;
    if quad.is_zero() {
        return Err(Error::DegenerateParameters("the uv coefficient leaves e undetermined".into()));
    }
    let e = &lin / &quad;
    if e.is_zero() {
        return Ok(vec![]);
    }
    // u and v are linear in G; the constant term b₁d₁G(G + 1) is quadratic.
    let lin_u = (&(&(b1 * &aa) + &(d1 * &ac)) * &e, &(&(b1 - b2) * &aa) * &e);
    let lin_v = (&(&(d1 * &ad) + &(b1 * &ab)) * &e, &(&(b1 - d2) * &ab) * &e);
    let mut g_candidates = Vec::new();
    for (slope, off) in [&lin_u, &lin_v] {
        if !slope.is_zero() {
            g_candidates.push(-&(off / slope));
        }
    }
    if g_candidates.is_empty() {
        g_candidates = vec![Scalar::zero(), Scalar::from_int(-1)];
    }
    g_candidates.dedup();
    let mut out = Vec::new();
    for g in g_candidates {
        let holds = |(s, o): &(Scalar, Scalar)| (&(s * &g) + o).is_zero();
        let constant = &(&(b1 * d1) * &g) * &(&g + &Scalar::one());
        if holds(&lin_u) && holds(&lin_v) && constant.is_zero() {
            let f = -&(&g * &gap);
            let sol = TransformSolution {
                case_tag,
                e: e.clone(),
                f,
                constraints: constraints.clone(),
            };
            if !out.contains(&sol) {
                out.push(sol);
            }
        }
    }
    Ok(out)
}

fn to_f64(s: &Scalar, name: &str) -> Result<f64> {
    s.as_rational()
        .and_then(|q| q.to_f64())
        .ok_or_else(|| Error::UnspecializedParameter(name.into()))
}

/// Numeric a, b, c of a classical system with b = d.
fn equal_rate_constants(sys: &LVSystem) -> Result<(f64, f64, f64)> {
    sys.require_classical()?;
    if sys.b != sys.d {
        return Err(Error::InvalidArgument("the closed form needs b = d".into()));
    }
    Ok((to_f64(&sys.a, "a")?, to_f64(&sys.b, "b")?, to_f64(&sys.c, "c")?))
}

/// Closed-form solution for b = d:
/// x = αe^{bt}/(c(1 − E)), y = αe^{bt}·E/(a(1 − E)), E = exp((αe^{bt} − β)/b).
pub fn varma_solution(sys: &LVSystem, alpha: f64, beta: f64, t: f64) -> Result<(f64, f64)> {
    let (a, b, c) = equal_rate_constants(sys)?;
    let w = alpha * (b * t).exp();
    let e = ((w - beta) / b).exp();
    let gap = 1.0 - e;
    if !gap.is_finite() || gap.abs() <= 1e-12 * e.abs().max(1.0) {
        return Err(Error::PoleEncountered(t));
    }
    let (x, y) = (w / (c * gap), w * e / (a * gap));
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::PoleEncountered(t));
    }
    Ok((x, y))
}

/// Centered-difference residuals of the closed form at t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarmaResiduals {
    /// |x' − x(ay + b)|
    pub x: f64,
    /// |y' − y(cx + b)|
    pub y: f64,
    /// |(cx − ay)' − b(cx − ay)|
    pub diagonal: f64,
}

pub fn varma_residuals(sys: &LVSystem, alpha: f64, beta: f64, t: f64, h: f64) -> Result<VarmaResiduals> {
    let (a, b, c) = equal_rate_constants(sys)?;
    let (x, y) = varma_solution(sys, alpha, beta, t)?;
    let (xp, yp) = varma_solution(sys, alpha, beta, t + h)?;
    let (xm, ym) = varma_solution(sys, alpha, beta, t - h)?;
    let dx = (xp - xm) / (2.0 * h);
    let dy = (yp - ym) / (2.0 * h);
    Ok(VarmaResiduals {
        x: (dx - x * (a * y + b)).abs(),
        y: (dy - y * (c * x + b)).abs(),
        diagonal: ((c * dx - a * dy) - b * (c * x - a * y)).abs(),
    })
}
