//! Roots in Q(params) of univariate polynomials with parametric coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::gcd::{content, gcd};
use super::poly::{Poly, Rational};
use super::scalar::Scalar;
use crate::symbol::Symbol;

/// Outcome of a root search in the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    /// Distinct roots lying in Q(params), in canonical order.
    pub roots: Vec<Scalar>,
    /// Degree of the square-free part not accounted for by `roots`.
    pub other_degree: usize,
    /// False when some factor could not be decided; `other_degree` may then hide field roots.
    pub certain: bool,
}

impl RootSet {
    pub fn discarded(&self) -> bool {
        self.other_degree > 0
    }
}

/// All roots of `p` in `x` that lie in the field of the remaining symbols.
pub fn roots_in_field(p: &Poly, x: Symbol) -> RootSet {
    let mut out = RootSet {
        roots: Vec::new(),
        other_degree: 0,
        certain: true,
    };
    if p.is_zero() || p.degree_in(x) == 0 {
        return out;
    }
    let prim = p.div_exact(&content(p, x)).expect("content divides");
    let g = gcd(&prim, &prim.derivative(x));
    let sqfree = prim.div_exact(&g).expect("gcd divides");
    for piece in split_by_support(sqfree) {
        let deg = piece.degree_in(x) as usize;
        if deg == 0 {
            continue;
        }
        let c = piece.coefficients_in(x);
        let scalar = |k: usize| Scalar::from_poly(c[k].clone());
        match deg {
            1 => out.roots.push(&(-&scalar(0)) / &scalar(1)),
            2 => {
                let (a, b, cc) = (scalar(2), scalar(1), scalar(0));
                let disc = &(&b * &b) - &(&Scalar::from_int(4) * &(&a * &cc));
                match disc.sqrt() {
                    Some(r) => {
                        let two_a = &Scalar::from_int(2) * &a;
                        out.roots.push(&(&(-&b) + &r) / &two_a);
                        out.roots.push(&(&(-&b) - &r) / &two_a);
                    }
                    None => out.other_degree += 2,
                }
            }
            _ => {
                if piece.symbols().len() == 1 {
                    let coeffs: Vec<Rational> = c
                        .iter()
                        .map(|k| k.as_constant().expect("univariate piece"))
                        .collect();
                    let rs = rational_roots(&coeffs);
                    out.other_degree += deg - rs.len();
                    out.roots.extend(rs.into_iter().map(Scalar::from_rational));
                } else {
                    // Linear and primitive in some parameter means irreducible, so no linear factor in x.
                    let irreducible = piece
                        .symbols()
                        .into_iter()
                        .any(|s| s != x && piece.degree_in(s) == 1);
                    if !irreducible {
                        out.certain = false;
                    }
                    out.other_degree += deg;
                }
            }
        }
    }
    out.roots.sort_by_key(|r| r.to_string());
    out.roots.dedup();
    out
}

/// Split a square-free polynomial into factors grouped by which symbols they involve.
fn split_by_support(p: Poly) -> Vec<Poly> {
    let mut work = vec![p];
    let mut done = Vec::new();
    while let Some(q) = work.pop() {
        if q.is_constant() {
            continue;
        }
        let mut split = None;
        for s in q.symbols() {
            let c = content(&q, s);
            if !c.is_constant() {
                split = Some((q.div_exact(&c).expect("content divides"), c));
                break;
            }
            // Factors free of s divide both q and its s-derivative.
            let g = gcd(&q, &q.derivative(s));
            if !g.is_constant() {
                split = Some((q.div_exact(&g).expect("gcd divides"), g));
                break;
            }
        }
        match split {
            Some((a, b)) => {
                work.push(a);
                work.push(b);
            }
            None => done.push(q),
        }
    }
    done
}

type Dense = Vec<Rational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval(p: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

fn rem(a: &[Rational], b: &[Rational]) -> Dense {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1;
        let f = &r[k] / &lb;
        for j in 0..=db {
            let delta = &f * &b[j];
            r[k - db + j] -= delta;
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

/// Positive integer multiple of a rational polynomial.
fn integer_multiple(p: &[Rational]) -> Vec<BigInt> {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect()
}

/// Sign variations of the chain at k + 1/2.
fn sign_changes(chain: &[Vec<BigInt>], k: &BigInt) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = sign_at_half(p, k);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Sign of 2^n·q(k + 1/2), in integer arithmetic.
fn sign_at_half(q: &[BigInt], k: &BigInt) -> i8 {
    let t = BigInt::from(2) * k + BigInt::one();
    let mut acc = BigInt::zero();
    let mut scale = BigInt::one();
    // Horner in t with coefficients q_i·2^(n−i), built from the top.
    for (i, c) in q.iter().enumerate().rev() {
        acc = acc * &t + c * &scale;
        if i > 0 {
            scale *= 2;
        }
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// The integer root of q in (lo + 1/2, hi + 1/2), given exactly one simple real root
/// there and nonzero signs at both ends.
fn isolate_integer(q: &[BigInt], mut lo: BigInt, mut hi: BigInt) -> Option<BigInt> {
    let s_lo = sign_at_half(q, &lo);
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let s = sign_at_half(q, &mid);
        if s == 0 {
            // A root at a half-integer is not an integer.
            return None;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut acc = BigInt::zero();
    for c in q.iter().rev() {
        acc = acc * &hi + c;
    }
    acc.is_zero().then_some(hi)
}

/// Rational roots of a square-free univariate polynomial (coefficients by ascending power).
///
/// Complete: the substitution y = |lc|·x turns every rational root into an integer,
/// and Sturm sequences isolate those integers between half-integer endpoints.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let p = trim(coeffs.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut den = BigInt::one();
    for c in &p {
        den = den.lcm(c.denom());
    }
    let mut a: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    while a[0].is_zero() {
        a.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    let n = a.len() - 1;
    if n == 0 {
        return roots;
    }
    let lead = a[n].abs();
    // q(y) = |lc|^(n-1) p(y/|lc|) has integer coefficients and leading coefficient ±1.
    let mut q: Dense = Vec::with_capacity(n + 1);
    for (k, ak) in a.iter().enumerate() {
        let v = if k == n {
            Rational::from_integer(if ak.is_negative() { -BigInt::one() } else { BigInt::one() })
        } else {
            Rational::from_integer(ak * num_traits::pow(lead.clone(), n - 1 - k))
        };
        q.push(v);
    }
    let lq = q[n].abs();
    let bound: BigInt = q[..n]
        .iter()
        .map(|c| (c.abs() / &lq).ceil().to_integer())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();
    let mut chain = vec![q.clone()];
    let dq: Dense = (1..=n).map(|k| &q[k] * Rational::from_integer(BigInt::from(k))).collect();
    chain.push(dq);
    loop {
        let len = chain.len();
        let r = rem(&chain[len - 2], &chain[len - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    // Positive rescaling keeps every sign, so the chain can be evaluated in integers.
    let chain: Vec<Vec<BigInt>> = chain.iter().map(|p| integer_multiple(p)).collect();
    let mut stack = vec![(-&bound - BigInt::one(), bound.clone())];
    let int_q: Vec<BigInt> = q.iter().map(|c| c.to_integer()).collect();
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &lo) - sign_changes(&chain, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 && sign_at_half(&int_q, &lo) != 0 && sign_at_half(&int_q, &hi) != 0 {
            // One simple root: bisect on the sign of q alone.
            if let Some(y) = isolate_integer(&int_q, lo, hi) {
                roots.push(Rational::from_integer(y) / Rational::from_integer(lead.clone()));
            }
            continue;
        }
        if &hi - &lo == BigInt::one() {
            let y = Rational::from_integer(hi.clone());
            if eval(&q, &y).is_zero() {
                roots.push(y / Rational::from_integer(lead.clone()));
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots
}
