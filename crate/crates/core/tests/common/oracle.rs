//! Brute-force enumeration of invariant curves of a planar quadratic field over Q.
//!
//! For each exact degree n, the top-degree block of L(P) − K·P = 0 involves only
//! the linear part of K; its maximal minors must vanish. Their common rational
//! zeros come from resultants. The constant part of K then comes from the roots of
//! a randomly projected determinant. Every candidate is settled by an exact
//! nullspace computation over Q. Nothing here consults singular points.

use std::collections::BTreeMap;

use invcurve_core::algebra::gcd::gcd;
use invcurve_core::algebra::resultant::{determinant, resultant};
use invcurve_core::algebra::roots::rational_roots;
use invcurve_core::algebra::{exact_divides, Monomial, MultiPoly, Poly, Rational};
use invcurve_core::Symbol;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub struct OracleOutput {
    /// (normalized curve, cofactor) as canonical strings, sorted.
    pub curves: Vec<(String, String)>,
    /// cofactor → dimension of the span of all family members with that cofactor.
    pub families: BTreeMap<String, usize>,
}

#[derive(Debug)]
pub struct Degenerate(pub String);

struct Setup {
    x: Symbol,
    y: Symbol,
    k: [Symbol; 3],
    f: Poly,
    g: Poly,
}

fn mono(x: Symbol, y: Symbol, i: u32, j: u32) -> Poly {
    Poly::term(Monomial::from_pairs([(x, i), (y, j)]), Rational::one())
}

fn monomials(n: u32, exact: bool) -> Vec<(u32, u32)> {
    let lo = if exact { n } else { 0 };
    (lo..=n).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect()
}

impl Setup {
    fn cofactor(&self) -> Poly {
        let [k0, k1, k2] = self.k;
        &(&Poly::symbol(k0) + &(&Poly::symbol(k1) * &Poly::symbol(self.x))) + &(&Poly::symbol(k2) * &Poly::symbol(self.y))
    }

    /// L(m) − K·m for a monomial m, with K symbolic.
    fn image(&self, i: u32, j: u32) -> Poly {
        let m = mono(self.x, self.y, i, j);
        let lie = &(&self.f * &m.derivative(self.x)) + &(&self.g * &m.derivative(self.y));
        &lie - &(&self.cofactor() * &m)
    }

    fn coefficient(&self, p: &Poly, i: u32, j: u32) -> Poly {
        p.coefficient_of_power(self.x, i).coefficient_of_power(self.y, j)
    }

    fn matrix(&self, rows: &[(u32, u32)], cols: &[(u32, u32)]) -> Vec<Vec<Poly>> {
        let images: Vec<Poly> = cols.iter().map(|&(i, j)| self.image(i, j)).collect();
        rows.iter()
            .map(|&(a, b)| images.iter().map(|im| self.coefficient(im, a, b)).collect())
            .collect()
    }
}

fn substitute(p: &Poly, s: Symbol, v: &Rational) -> Poly {
    p.substitute(s, &Poly::constant(v.clone()))
}

fn roots_of(p: &Poly, v: Symbol) -> Vec<Rational> {
    let sqf = p.div_exact(&gcd(p, &p.derivative(v))).expect("gcd divides");
    let coeffs: Vec<Rational> = sqf
        .coefficients_in(v)
        .into_iter()
        .map(|c| c.as_constant().expect("univariate"))
        .collect();
    rational_roots(&coeffs)
}

fn gcd_all(ps: &[Poly]) -> Poly {
    ps.iter().fold(Poly::zero(), |acc, p| gcd(&acc, p))
}

/// Common rational zeros (k1, k2) of bivariate polynomials with no common factor.
fn common_zeros(ps: &[Poly], k1: Symbol, k2: Symbol) -> Result<Vec<(Rational, Rational)>, Degenerate> {
    let ps: Vec<Poly> = ps.iter().filter(|p| !p.is_zero()).cloned().collect();
    if ps.is_empty() {
        return Err(Degenerate("top block is identically singular".into()));
    }
    if !gcd_all(&ps).is_constant() {
        return Err(Degenerate("top minors share a factor".into()));
    }
    // Every common zero projects to a root of each k2-free minor and each pairwise resultant.
    let mut eliminants: Vec<Poly> = ps.iter().filter(|p| !p.contains(k2)).cloned().collect();
    for (a, p) in ps.iter().enumerate() {
        for q in &ps[a + 1..] {
            if p.contains(k2) && q.contains(k2) {
                eliminants.push(resultant(p, q, k2));
            }
        }
    }
    let r = gcd_all(&eliminants);
    if r.is_zero() {
        return Err(Degenerate("cannot eliminate the y-coefficient".into()));
    }
    let mut out = Vec::new();
    for a in roots_of(&r, k1) {
        let fibre: Vec<Poly> = ps.iter().map(|p| substitute(p, k1, &a)).collect();
        let h = gcd_all(&fibre);
        if h.is_zero() {
            return Err(Degenerate("a line of top cofactors".into()));
        }
        for b in roots_of(&h, k2) {
            out.push((a.clone(), b));
        }
    }
    Ok(out)
}

/// Nullspace basis of a rational matrix by Gauss-Jordan elimination.
#[allow(clippy::needless_range_loop)]
pub fn nullspace(mut m: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in 0..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: Vec<Vec<Rational>>, ncols: usize) -> usize {
    ncols - nullspace(m, ncols).len()
}

fn is_product_of(p: &MultiPoly, found: &[MultiPoly]) -> bool {
    let mut q = p.clone();
    while !q.is_constant() {
        match found.iter().find_map(|a| exact_divides(a, &q)) {
            Some(r) => q = r,
            None => return false,
        }
    }
    true
}

/// Enumerate invariant curves of x' = f, y' = g up to `max_degree`.
pub fn enumerate(f: &Poly, g: &Poly, x: Symbol, y: Symbol, max_degree: u32, rng: &mut StdRng) -> Result<OracleOutput, Degenerate> {
    let k = [Symbol::new("oracle_k0"), Symbol::new("oracle_k1"), Symbol::new("oracle_k2")];
    let st = Setup { x, y, k, f: f.clone(), g: g.clone() };
    let vars = [x, y];
    let mut found: Vec<(MultiPoly, MultiPoly)> = Vec::new();
    let mut family_members: BTreeMap<String, Vec<MultiPoly>> = BTreeMap::new();

    for n in 1..=max_degree {
        let top = st.matrix(&monomials(n + 1, true), &monomials(n, true));
        let ncols_top = top[0].len();
        let minors: Vec<Poly> = (0..top.len())
            .map(|skip| {
                let sub: Vec<Vec<Poly>> = top.iter().enumerate().filter(|(r, _)| *r != skip).map(|(_, row)| row.clone()).collect();
                assert_eq!(sub.len(), ncols_top);
                determinant(sub)
            })
            .collect();
        let rows = monomials(n + 1, false);
        let cols = monomials(n, false);
        for (a, b) in common_zeros(&minors, k[1], k[2])? {
            let fixed: Vec<Vec<Poly>> = st
                .matrix(&rows, &cols)
                .into_iter()
                .map(|r| r.iter().map(|e| substitute(&substitute(e, k[1], &a), k[2], &b)).collect())
                .collect();
            let mut constants = None;
            for _ in 0..4 {
                let proj: Vec<Vec<Rational>> = (0..cols.len())
                    .map(|_| (0..rows.len()).map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into())).collect())
                    .collect();
                let square: Vec<Vec<Poly>> = proj
                    .iter()
                    .map(|pr| {
                        (0..cols.len())
                            .map(|c| {
                                pr.iter().zip(&fixed).fold(Poly::zero(), |acc, (w, row)| &acc + &row[c].scale(w))
                            })
                            .collect()
                    })
                    .collect();
                let det = determinant(square);
                if !det.is_zero() {
                    constants = Some(roots_of(&det, k[0]));
                    break;
                }
            }
            let constants = constants.ok_or_else(|| Degenerate("singular for every constant part".into()))?;
            for c in constants {
                let is_zero_cofactor = c.is_zero() && a.is_zero() && b.is_zero();
                let used: Vec<usize> = (0..cols.len()).filter(|&i| !(is_zero_cofactor && cols[i] == (0, 0))).collect();
                let numeric: Vec<Vec<Rational>> = fixed
                    .iter()
                    .map(|row| {
                        used.iter()
                            .map(|&i| substitute(&row[i], k[0], &c).as_constant().expect("numeric entry"))
                            .collect()
                    })
                    .collect();
                let basis: Vec<MultiPoly> = nullspace(numeric, used.len())
                    .into_iter()
                    .map(|v| {
                        let p = used.iter().zip(&v).fold(Poly::zero(), |acc, (&i, w)| {
                            &acc + &mono(x, y, cols[i].0, cols[i].1).scale(w)
                        });
                        MultiPoly::from_poly(&vars, p).normalized()
                    })
                    .collect();
                if basis.is_empty() {
                    continue;
                }
                let cofactor = MultiPoly::from_poly(
                    &vars,
                    &(&Poly::constant(c.clone()) + &Poly::symbol(x).scale(&a)) + &Poly::symbol(y).scale(&b),
                );
                if basis.len() > 1 || is_zero_cofactor {
                    family_members.entry(cofactor.to_string()).or_default().extend(basis);
                } else if !found.iter().any(|(q, _)| *q == basis[0]) {
                    found.push((basis[0].clone(), cofactor));
                }
            }
        }
    }

    found.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.to_string().cmp(&b.0.to_string())));
    let mut accepted: Vec<MultiPoly> = Vec::new();
    let mut curves = Vec::new();
    for (p, k) in found {
        if !is_product_of(&p, &accepted) {
            curves.push((p.to_string(), k.to_string()));
            accepted.push(p);
        }
    }
    curves.sort();
    let families = family_members
        .into_iter()
        .map(|(k, members)| (k, span_dimension(&members, max_degree)))
        .collect();
    Ok(OracleOutput { curves, families })
}

/// Dimension of the Q-span of polynomials in x, y of degree ≤ `n`.
pub fn span_dimension(ps: &[MultiPoly], n: u32) -> usize {
    let cols = monomials(n, false);
    let m: Vec<Vec<Rational>> = ps
        .iter()
        .map(|p| {
            cols.iter()
                .map(|&(i, j)| p.coefficient(&[i, j]).as_rational().expect("rational coefficient"))
                .collect()
        })
        .collect();
    // Row rank = rank of the transpose.
    let t: Vec<Vec<Rational>> = (0..cols.len()).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect();
    rank(t, ps.len())
}

/// Small rational: numerator in [-3, 3], denominator 1 or 2.
pub fn small(rng: &mut StdRng) -> Rational {
    Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into())
}

pub fn random_poly(rng: &mut StdRng, x: Symbol, y: Symbol, deg: u32) -> Poly {
    monomials(deg, false)
        .into_iter()
        .fold(Poly::zero(), |acc, (i, j)| &acc + &mono(x, y, i, j).scale(&small(rng)))
}

/// Quadratic field with `planted` (0, 1 or 2) prescribed invariant lines.
pub fn planted_field(rng: &mut StdRng, x: Symbol, y: Symbol, planted: usize) -> (Poly, Poly) {
    let line = |rng: &mut StdRng| -> (Rational, Rational, Poly) {
        loop {
            let (a, b) = (small(rng), small(rng));
            if !a.is_zero() && !b.is_zero() {
                let l = &(&Poly::symbol(x).scale(&a) + &Poly::symbol(y).scale(&b)) + &Poly::constant(small(rng));
                return (a, b, l);
            }
        }
    };
    match planted {
        0 => (random_poly(rng, x, y, 2), random_poly(rng, x, y, 2)),
        1 => {
            let (a, b, l) = line(rng);
            let k = random_poly(rng, x, y, 1);
            let g = random_poly(rng, x, y, 2);
            let f = (&(&k * &l) - &g.scale(&b)).scale(&a.recip());
            (f, g)
        }
        _ => loop {
            let (a1, b1, l1) = line(rng);
            let (a2, b2, l2) = line(rng);
            let det = &a1 * &b2 - &a2 * &b1;
            if det.is_zero() {
                continue;
            }
            let r1 = &random_poly(rng, x, y, 1) * &l1;
            let r2 = &random_poly(rng, x, y, 1) * &l2;
            let inv = det.recip();
            let f = (&r1.scale(&b2) - &r2.scale(&b1)).scale(&inv);
            let g = (&r2.scale(&a1) - &r1.scale(&a2)).scale(&inv);
            return (f, g);
        },
    }
}

pub struct CaseResult {
    pub seed: u64,
    pub field: String,
    pub oracle: OracleOutput,
    pub search: OracleOutput,
    pub complete: bool,
}

impl CaseResult {
    pub fn agrees(&self) -> bool {
        self.oracle.curves == self.search.curves && self.oracle.families == self.search.families
    }
}

/// Run the search and the oracle on `count` random quadratic fields, skipping degenerate draws.
pub fn agreement_cases(count: usize, max_degree: u32) -> Vec<CaseResult> {
    agreement_cases_with(count, max_degree, |rng, x, y, seed| planted_field(rng, x, y, (seed % 3) as usize))
}

pub fn agreement_cases_with(
    count: usize,
    max_degree: u32,
    draw: impl Fn(&mut StdRng, Symbol, Symbol, u64) -> (Poly, Poly),
) -> Vec<CaseResult> {
    use invcurve_core::darboux::{darboux_search, Completeness};
    use invcurve_core::vectorfield::VectorField;
    use rand::SeedableRng;

    let (x, y) = (Symbol::new("x"), Symbol::new("y"));
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        seed += 1;
        let mut rng = StdRng::seed_from_u64(seed);
        let (f, g) = draw(&mut rng, x, y, seed);
        if f.total_degree().max(g.total_degree()) != 2 {
            continue;
        }
        let Ok(oracle) = enumerate(&f, &g, x, y, max_degree, &mut rng) else {
            continue;
        };
        let field = VectorField::polynomial(&[x, y], vec![MultiPoly::from_poly(&[x, y], f), MultiPoly::from_poly(&[x, y], g)])
            .expect("planar polynomial field");
        let report = darboux_search(&field, max_degree).expect("quadratic field");
        let mut curves: Vec<(String, String)> = report
            .curves
            .iter()
            .map(|c| (c.poly.to_string(), c.cofactor.to_string()))
            .collect();
        curves.sort();
        let mut grouped: BTreeMap<String, Vec<MultiPoly>> = BTreeMap::new();
        for fam in &report.families {
            grouped.entry(fam.cofactor.to_string()).or_default().extend(fam.basis.iter().cloned());
        }
        let families = grouped
            .into_iter()
            .map(|(k, members)| (k, span_dimension(&members, max_degree)))
            .collect();
        out.push(CaseResult {
            seed,
            field: field.to_string(),
            oracle,
            search: OracleOutput { curves, families },
            complete: report.completeness == Completeness::CompleteUpToBound,
        });
    }
    out
}

/// Quadratic field x' = −r·∂C/∂y + a·C, y' = r·∂C/∂x + b·C keeping a random conic C invariant.
pub fn planted_conic_field(rng: &mut StdRng, x: Symbol, y: Symbol) -> (Poly, Poly) {
    let c = loop {
        let c = random_poly(rng, x, y, 2);
        if c.total_degree() == 2 {
            break c;
        }
    };
    let (r, a, b) = (small(rng), small(rng), small(rng));
    let f = &c.derivative(y).scale(&-r.clone()) + &c.scale(&a);
    let g = &c.derivative(x).scale(&r) + &c.scale(&b);
    (f, g)
}
