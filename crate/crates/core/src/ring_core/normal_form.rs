use thiserror::Error;

use super::matrix::Matrix;
use super::ring::Ring;

/// `u * m * v == d` with `u`, `v` unimodular and `d` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<E> {
    pub u: Matrix<E>,
    pub d: Matrix<E>,
    pub v: Matrix<E>,
    pub rank: usize,
}

impl<E: Clone> SmithForm<E> {
    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<E> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinearError {
    #[error("map is not surjective")]
    NotSurjective,
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// Smith normal form by Euclidean elimination.
///
/// The pivot at each stage is the nonzero entry of least Euclidean size in
/// the remaining block, ties broken by `(row, col)`; the resulting diagonal
/// entries are canonical associates with `d_1 | d_2 | ...`.
pub fn smith_normal_form<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> SmithForm<R::Elem> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = Matrix::identity(ring, rows);
    let mut v = Matrix::identity(ring, cols);
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pi, pj)) = least_entry(ring, &a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut leftover = false;
            for i in t + 1..rows {
                if ring.is_zero(a.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(a.get(i, t), a.get(t, t));
                let c = ring.neg(&q);
                a.add_row_multiple(ring, i, t, &c);
                u.add_row_multiple(ring, i, t, &c);
                leftover |= !ring.is_zero(&r);
            }
            for j in t + 1..cols {
                if ring.is_zero(a.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(a.get(t, j), a.get(t, t));
                let c = ring.neg(&q);
                a.add_col_multiple(ring, j, t, &c);
                v.add_col_multiple(ring, j, t, &c);
                leftover |= !ring.is_zero(&r);
            }
            if leftover {
                // a smaller remainder now sits in row t or column t
                let candidates = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = least_entry(ring, &a, candidates).expect("pivot remains nonzero");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !ring.divides(a.get(t, t), a.get(i, j)));
            match offender {
                Some((i, _)) => {
                    let one = ring.one();
                    a.add_row_multiple(ring, t, i, &one);
                    u.add_row_multiple(ring, t, i, &one);
                }
                None => break,
            }
        }

        let (_, unit) = ring.normalize(a.get(t, t));
        a.scale_row(ring, t, &unit);
        u.scale_row(ring, t, &unit);
        t += 1;
    }

    SmithForm { u, d: a, v, rank: t }
}

fn least_entry<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    positions: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), num_bigint::BigUint)> = None;
    for (i, j) in positions {
        let e = a.get(i, j);
        if ring.is_zero(e) {
            continue;
        }
        let size = ring.size(e);
        let better = match &best {
            None => true,
            Some((pos, s)) => size < *s || (size == *s && (i, j) < *pos),
        };
        if better {
            best = Some(((i, j), size));
        }
    }
    best.map(|(pos, _)| pos)
}

/// Canonical basis of the column span: column-style Hermite form over the
/// integers, reduced column echelon form over fields. Zero columns are
/// dropped, so two matrices span the same submodule iff the outputs agree.
pub fn hermite_column_basis<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut k = 0;
    for row in 0..rows {
        if k == cols {
            break;
        }
        for j in k + 1..cols {
            if ring.is_zero(a.get(row, j)) {
                continue;
            }
            if ring.is_zero(a.get(row, k)) {
                a.swap_cols(k, j);
                continue;
            }
            let x = a.get(row, k).clone();
            let y = a.get(row, j).clone();
            let (g, s, t) = ring.xgcd(&x, &y);
            let xg = ring.exact_div(&x, &g).expect("gcd divides");
            let yg = ring.exact_div(&y, &g).expect("gcd divides");
            a.combine_cols(ring, k, j, [&s, &t, &ring.neg(&yg), &xg]);
        }
        if ring.is_zero(a.get(row, k)) {
            continue;
        }
        let (_, unit) = ring.normalize(a.get(row, k));
        a.scale_col(ring, k, &unit);
        for j in 0..k {
            let (q, _) = ring.div_rem(a.get(row, j), a.get(row, k));
            a.add_col_multiple(ring, j, k, &ring.neg(&q));
        }
        k += 1;
    }
    a.select_columns(0..k)
}

/// Canonical basis of `{x : m x = 0}`.
pub fn kernel_basis<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let snf = smith_normal_form(ring, m);
    let free = snf.v.select_columns(snf.rank..m.cols());
    hermite_column_basis(ring, &free)
}

/// Some `x` with `m x = b`, or `None`. The solution is read off the Smith
/// form with free coordinates set to zero.
pub fn solve<R: Ring>(ring: &R, m: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Option<Matrix<R::Elem>> {
    assert_eq!(m.rows(), b.rows(), "solve needs matching row counts");
    solve_with(ring, &smith_normal_form(ring, m), b)
}

/// As [`solve`] but reusing a precomputed Smith form of `m`.
pub fn solve_with<R: Ring>(ring: &R, snf: &SmithForm<R::Elem>, b: &Matrix<R::Elem>) -> Option<Matrix<R::Elem>> {
    let c = snf.u.mul(ring, b);
    let n = snf.v.rows();
    let mut y = Matrix::zeros(ring, n, b.cols());
    for col in 0..b.cols() {
        for i in 0..c.rows() {
            let ci = c.get(i, col);
            if i < snf.rank {
                y.set(i, col, ring.exact_div(ci, snf.d.get(i, i))?);
            } else if !ring.is_zero(ci) {
                return None;
            }
        }
    }
    Some(snf.v.mul(ring, &y))
}

/// A right inverse of a surjective `pi`.
pub fn split_surjection<R: Ring>(ring: &R, pi: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>, LinearError> {
    if !is_surjective(ring, pi) {
        return Err(LinearError::NotSurjective);
    }
    Ok(solve(ring, pi, &Matrix::identity(ring, pi.rows())).expect("surjective maps split"))
}

pub fn rank<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> usize {
    smith_normal_form(ring, m).rank
}

pub fn is_injective<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    rank(ring, m) == m.cols()
}

/// Surjective over the ring, not merely after tensoring with the fraction
/// field: every invariant factor is a unit and there are `rows` of them.
pub fn is_surjective<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    let snf = smith_normal_form(ring, m);
    snf.rank == m.rows() && (0..snf.rank).all(|i| ring.is_unit(snf.d.get(i, i)))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> R::Elem {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = ring.one();
    let mut prev = ring.one();
    for k in 0..n {
        if ring.is_zero(a.get(k, k)) {
            match (k + 1..n).find(|&i| !ring.is_zero(a.get(i, k))) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = ring.neg(&sign);
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(&ring.mul(a.get(k, k), a.get(i, j)), &ring.mul(a.get(i, k), a.get(k, j)));
                a.set(i, j, ring.exact_div(&num, &prev).expect("Bareiss division is exact"));
            }
        }
        prev = a.get(k, k).clone();
    }
    if n == 0 {
        return ring.one();
    }
    ring.mul(&sign, a.get(n - 1, n - 1))
}

pub fn is_invertible<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> bool {
    m.is_square() && ring.is_unit(&determinant(ring, m))
}

pub fn inverse<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>, LinearError> {
    if !is_invertible(ring, m) {
        return Err(LinearError::NotInvertible);
    }
    Ok(solve(ring, m, &Matrix::identity(ring, m.rows())).expect("invertible matrices solve"))
}

/// Whether every column of `inner` lies in the column span of `outer`.
pub fn span_contains<R: Ring>(ring: &R, outer: &Matrix<R::Elem>, inner: &Matrix<R::Elem>) -> bool {
    solve(ring, outer, inner).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::ring::{Integers, PrimeField, Rationals};

    fn z(rows: &[[i64; 2]]) -> Matrix<num_bigint::BigInt> {
        Matrix::from_i64(&Integers, rows)
    }

    #[test]
    fn smith_of_two_by_two() {
        let r = Integers;
        let m = z(&[[2, 4], [6, 8]]);
        let snf = smith_normal_form(&r, &m);
        assert_eq!(snf.d, z(&[[2, 0], [0, 4]]));
        assert_eq!(snf.u.mul(&r, &m).mul(&r, &snf.v), snf.d);
        assert!(is_invertible(&r, &snf.u) && is_invertible(&r, &snf.v));
    }

    #[test]
    fn smith_of_identity_and_zero() {
        let r = Integers;
        let id = Matrix::identity(&r, 3);
        let snf = smith_normal_form(&r, &id);
        assert_eq!(snf.d, id);
        assert_eq!(snf.u, id);
        assert_eq!(snf.v, id);
        let zero = Matrix::zeros(&r, 2, 3);
        let snf = smith_normal_form(&r, &zero);
        assert_eq!(snf.rank, 0);
        assert!(snf.d.is_zero(&r));
    }

    #[test]
    fn smith_on_degenerate_shapes() {
        let r = Integers;
        for (rows, cols) in [(0, 0), (0, 3), (3, 0)] {
            let m = Matrix::zeros(&r, rows, cols);
            let snf = smith_normal_form(&r, &m);
            assert_eq!(snf.u.shape(), (rows, rows));
            assert_eq!(snf.v.shape(), (cols, cols));
            assert_eq!(snf.rank, 0);
        }
    }

    #[test]
    fn smith_needs_divisibility_fix() {
        // diag(2, 3) is diagonal but not in Smith form
        let r = Integers;
        let m = z(&[[2, 0], [0, 3]]);
        let snf = smith_normal_form(&r, &m);
        assert_eq!(snf.d, z(&[[1, 0], [0, 6]]));
        assert_eq!(snf.u.mul(&r, &m).mul(&r, &snf.v), snf.d);
    }

    #[test]
    fn hermite_identifies_spans() {
        let r = Integers;
        let a = Matrix::from_i64(&r, &[[2], [0]]);
        let b = Matrix::from_i64(&r, &[[2, 4], [0, 0]]);
        assert_eq!(hermite_column_basis(&r, &a), a);
        assert_eq!(hermite_column_basis(&r, &b), a);
        let id = Matrix::identity(&r, 3);
        assert_eq!(hermite_column_basis(&r, &id), id);
        assert_eq!(hermite_column_basis(&r, &Matrix::zeros(&r, 3, 2)).shape(), (3, 0));
    }

    #[test]
    fn hermite_reduces_off_pivot_entries() {
        let r = Integers;
        // span of (1,5) and (0,3) has the canonical basis (1,2), (0,3)
        let m = z(&[[1, 0], [5, 3]]);
        assert_eq!(hermite_column_basis(&r, &m), z(&[[1, 0], [2, 3]]));
        let m = z(&[[4, 6], [0, 2]]);
        // lattice generated by (4,0),(6,2): pivot gcd(4,6)=2
        let h = hermite_column_basis(&r, &m);
        assert_eq!(h, z(&[[2, 0], [2, 4]]));
    }

    #[test]
    fn kernels() {
        let r = Integers;
        assert_eq!(kernel_basis(&r, &z(&[[0, 1], [0, 0]])), Matrix::from_i64(&r, &[[1], [0]]));
        assert_eq!(kernel_basis(&r, &z(&[[2, 1], [1, 1]])).cols(), 0);
        let k = kernel_basis(&r, &z(&[[1, 1], [1, 1]]));
        assert_eq!(k, Matrix::from_i64(&r, &[[1], [-1]]));
    }

    #[test]
    fn solving() {
        let r = Integers;
        let two = Matrix::scalar(&r, 2, &r.from_i64(2));
        let b = Matrix::from_i64(&r, &[[4], [6]]);
        assert_eq!(solve(&r, &two, &b), Some(Matrix::from_i64(&r, &[[2], [3]])));
        assert_eq!(solve(&r, &two, &Matrix::from_i64(&r, &[[1], [0]])), None);
        let m = z(&[[2, 4], [6, 8]]);
        let x = solve(&r, &m, &Matrix::from_i64(&r, &[[2], [6]])).unwrap();
        assert_eq!(x, Matrix::from_i64(&r, &[[1], [0]]));
    }

    #[test]
    fn sections() {
        let r = Integers;
        let id = Matrix::identity(&r, 2);
        assert_eq!(split_surjection(&r, &id).unwrap(), id);
        let proj = Matrix::from_i64(&r, &[[1, 0]]);
        assert_eq!(split_surjection(&r, &proj).unwrap(), Matrix::from_i64(&r, &[[1], [0]]));
        let pi = Matrix::from_i64(&r, &[[2, 1]]);
        let s = split_surjection(&r, &pi).unwrap();
        assert!(pi.mul(&r, &s).is_identity(&r));
        assert_eq!(split_surjection(&r, &Matrix::from_i64(&r, &[[2, 4]])), Err(LinearError::NotSurjective));
    }

    #[test]
    fn determinants_over_each_ring() {
        let m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]];
        assert_eq!(determinant(&Integers, &Matrix::from_i64(&Integers, &m)), 18.into());
        let f = PrimeField::new(5).unwrap();
        assert_eq!(determinant(&f, &Matrix::from_i64(&f, &m)), 3);
        let q = Rationals;
        assert_eq!(determinant(&q, &Matrix::from_i64(&q, &m)), q.from_i64(18));
        assert_eq!(determinant(&Integers, &Matrix::zeros(&Integers, 0, 0)), 1.into());
    }

    #[test]
    fn field_smith_has_unit_diagonal() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f, &[[2, 4], [1, 2]]);
        let snf = smith_normal_form(&f, &m);
        assert_eq!(snf.rank, 1);
        assert_eq!(*snf.d.get(0, 0), 1);
    }
}
