//! Sylvester resultants via fraction-free (Bareiss) elimination.

use super::frac::Frac;
use super::multipoly::MultiPoly;
use super::poly::Poly;
use crate::symbol::Symbol;

/// Determinant of a square matrix of polynomials.
pub fn determinant(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].len());
        let Some(r) = pivot else {
            return Poly::zero();
        };
        if r != k {
            a.swap(r, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Res_v(p, q); a nonzero constant argument raised to the other's degree.
pub fn resultant(p: &Poly, q: &Poly, v: Symbol) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero();
    }
    let m = p.degree_in(v) as usize;
    let n = q.degree_in(v) as usize;
    if m == 0 {
        return p.pow(n as u32);
    }
    if n == 0 {
        return q.pow(m as u32);
    }
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let size = m + n;
    let mut rows = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            rows[i][i + j] = pc[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            rows[n + i][i + j] = qc[n - j].clone();
        }
    }
    determinant(rows)
}

/// Resultant of polynomials with Scalar coefficients.
pub fn resultant_multi(p: &MultiPoly, q: &MultiPoly, v: Symbol) -> MultiPoly {
    let m = p.degree_in(v) as i32;
    let n = q.degree_in(v) as i32;
    let r = resultant(p.numer(), q.numer(), v);
    let scale = Frac::from_poly(p.denom().pow(n as u32))
        .mul(&Frac::from_poly(q.denom().pow(m as u32)))
        .inv()
        .expect("denominators are nonzero");
    let vars: Vec<Symbol> = p.vars().iter().copied().filter(|s| *s != v).collect();
    MultiPoly::new(vars, Frac::from_poly(r).mul(&scale)).expect("denominator free of variables")
}
