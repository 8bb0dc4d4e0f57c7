//! Matrices with polynomial entries and fraction-free determinants.
//!
//! Resultant computations need exact determinants of matrices whose entries
//! are polynomials; Bareiss elimination keeps every intermediate value a
//! polynomial (no rational functions) by dividing out the previous pivot,
//! which is exact by Sylvester's identity.

use crate::field::{Coeff, Fq};
use crate::poly::MultiPoly;

/// Rectangular matrix of polynomials, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C: Coeff> {
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly<C>>,
}

impl<C: Coeff> PolyMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<MultiPoly<C>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &MultiPoly<C> {
        &self.entries[i * self.cols + j]
    }
}

/// The 4x4 matrix of second partial derivatives.
pub fn hessian_matrix<C: Coeff>(p: &MultiPoly<C>) -> PolyMatrix<C> {
    hessian_matrix_in(p, &[0, 1, 2, 3])
}

/// The matrix of second partials restricted to a subset of the variables
/// (entry `(i, j)` differentiates by `vars[i]` then `vars[j]`).
pub fn hessian_matrix_in<C: Coeff>(p: &MultiPoly<C>, vars: &[usize]) -> PolyMatrix<C> {
    let grads: Vec<MultiPoly<C>> = vars.iter().map(|&v| p.derivative(v)).collect();
    PolyMatrix::from_rows(
        grads
            .iter()
            .map(|g| vars.iter().map(|&v| g.derivative(v)).collect())
            .collect(),
    )
}

/// Fraction-free determinant (Bareiss) over any [`Coeff`] ring with exact
/// division — fields, surd rationals, or polynomial rings alike. The matrix
/// must be square and non-empty.
pub fn bareiss_det_in_ring<C: Coeff>(rows: Vec<Vec<C>>) -> C {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let unit = rows
        .first()
        .and_then(|r| r.first())
        .expect("determinant of an empty matrix")
        .one_like();
    let mut w = rows;
    let mut negate = false;
    let mut prev = unit.clone();
    for k in 0..n.saturating_sub(1) {
        if w[k][k].is_zero() {
            match (k + 1..n).find(|&i| !w[i][k].is_zero()) {
                Some(i) => {
                    w.swap(k, i);
                    negate = !negate;
                }
                None => return unit.zero_like(),
            }
        }
        let pivot = w[k][k].clone();
        let (upper, lower) = w.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = pivot.mul(&row[j]).sub(&lead.mul(&pivot_row[j]));
                row[j] = num.div_exact_coeff(&prev).expect("Bareiss division is exact");
            }
            row[k] = unit.zero_like();
        }
        prev = pivot;
    }
    let det = w[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// [`bareiss_det_in_ring`] for a matrix of polynomial entries.
pub fn bareiss_det<C: Coeff>(m: &PolyMatrix<C>) -> MultiPoly<C> {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let rows: Vec<Vec<MultiPoly<C>>> =
        (0..m.rows).map(|i| (0..m.cols).map(|j| m.at(i, j).clone()).collect()).collect();
    bareiss_det_in_ring(rows)
}

/// Determinant after evaluating every entry at a point: a cheap independent
/// check of [`bareiss_det`] (evaluation and determinant commute).
pub fn det_by_evaluation(m: &PolyMatrix<Fq>, pt: &[Fq; 4]) -> Fq {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let field = pt[0].field();
    let mut a: Vec<Fq> = m.entries.iter().map(|e| e.eval(pt)).collect();
    let mut det = field.one();
    for k in 0..n {
        let pivot_row = match (k..n).find(|&i| !a[i * n + k].is_zero()) {
            Some(i) => i,
            None => return field.zero(),
        };
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            det = det.neg();
        }
        let pivot = a[k * n + k];
        det = det.mul(&pivot);
        let inv = pivot.inv();
        for i in k + 1..n {
            let factor = a[i * n + k].mul(&inv);
            for j in k..n {
                let sub = factor.mul(&a[k * n + j]);
                a[i * n + j] = a[i * n + j].sub(&sub);
            }
        }
    }
    det
}

/// Solve `A v = b` over a field by Gaussian elimination. Returns one
/// solution with free variables set to zero, or `None` when inconsistent.
pub fn solve_linear<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let zero = match b.first() {
        Some(c) => c.zero_like(),
        None => return Some(Vec::new()),
    };
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged system");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].try_inv().expect("field coefficient");
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        let base = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (dst, b) in row.iter_mut().zip(&base) {
                    *dst = dst.sub(&f.mul(b));
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    if m.iter().skip(rank).any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut v = vec![zero; cols];
    for (r, c) in pivots {
        v[c] = m[r][cols].clone();
    }
    Some(v)
}

/// Basis of the right nullspace of the `rows x cols` system `A v = 0` over a
/// field. `unit` fixes the coefficient ring; rows may be fewer than `cols`.
pub fn nullspace<C: Coeff>(a: &[Vec<C>], cols: usize, unit: &C) -> Vec<Vec<C>> {
    let zero = unit.zero_like();
    let mut m: Vec<Vec<C>> = a
        .iter()
        .map(|row| {
            assert_eq!(row.len(), cols, "ragged system");
            row.clone()
        })
        .collect();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].try_inv().expect("field coefficient");
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        let base = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (dst, b) in row.iter_mut().zip(&base) {
                    *dst = dst.sub(&f.mul(b));
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![zero.clone(); cols];
        v[free] = unit.one_like();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = m[r][free].neg();
        }
        basis.push(v);
    }
    basis
}
