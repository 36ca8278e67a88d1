//! Gauss-Jordan elimination over Q(params).

use super::scalar::Scalar;
use crate::symbol::Symbol;

/// Reduced row echelon form together with the pivots used to reach it.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Scalar>>,
    pub pivot_cols: Vec<usize>,
    /// Product of the pivots as found; equals ± the determinant of the pivot rows restricted to pivot columns.
    pub pivot_product: Scalar,
    /// Pivots that are not plain rationals; the elimination is only valid where they are nonzero.
    pub conditions: Vec<Scalar>,
    pub ncols: usize,
}

fn pivot_score(s: &Scalar, avoid: Option<Symbol>) -> (u8, usize) {
    let class = if s.is_rational() {
        0
    } else if avoid.is_some_and(|v| s.contains(v)) {
        2
    } else {
        1
    };
    (class, s.numer().len() + s.denom().len())
}

/// Row reduce; pivots mentioning `avoid` are used only when nothing else is available.
pub fn row_reduce(mut m: Vec<Vec<Scalar>>, ncols: usize, avoid: Option<Symbol>) -> Echelon {
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    let mut product = Scalar::one();
    let mut conditions = Vec::new();
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        let best = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| pivot_score(&m[r][col], avoid));
        let Some(r) = best else { continue };
        m.swap(rank, r);
        let pivot = m[rank][col].clone();
        if !pivot.is_rational() {
            conditions.push(pivot.clone());
        }
        product = &product * &pivot;
        let inv = pivot.inv().expect("pivot is nonzero");
        let row: Vec<Scalar> = m[rank].iter().map(|e| e * &inv).collect();
        for (i, other) in m.iter_mut().enumerate() {
            if i == rank || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (j, e) in other.iter_mut().enumerate() {
                if !row[j].is_zero() {
                    *e = &*e - &(&f * &row[j]);
                }
            }
        }
        m[rank] = row;
        pivot_cols.push(col);
        rank += 1;
    }
    m.truncate(rank);
    Echelon {
        rows: m,
        pivot_cols,
        pivot_product: product,
        conditions,
        ncols,
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivot_cols.contains(c)) {
            let mut v = vec![Scalar::zero(); self.ncols];
            v[free] = Scalar::one();
            for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
                v[pc] = -&row[free];
            }
            basis.push(v);
        }
        basis
    }
}
