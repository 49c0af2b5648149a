use std::fmt;

use super::ring::Ring;

/// Dense row-major matrix. A map `R^a -> R^b` is a `b x a` matrix acting on
/// column vectors; either dimension may be zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e:?}")?;
            }
        }
        write!(f, "]")
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<E>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix { rows, cols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: E) {
        assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &E> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn select_columns(&self, cols: impl IntoIterator<Item = usize>) -> Self {
        let cols: Vec<usize> = cols.into_iter().collect();
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: impl IntoIterator<Item = usize>) -> Self {
        let rows: Vec<usize> = rows.into_iter().collect();
        Matrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Matrix::from_vec(self.rows + other.rows, self.cols, entries)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![ring.zero(); rows * cols])
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn scalar<R: Ring<Elem = E>>(ring: &R, n: usize, c: &E) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { c.clone() } else { ring.zero() })
    }

    /// Convenience constructor from small integer literals.
    pub fn from_i64<R: Ring<Elem = E>, Row: AsRef<[i64]>>(ring: &R, rows: &[Row]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Matrix::from_fn(rows.len(), cols, |i, j| ring.from_i64(rows[i].as_ref()[j]))
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.entries.iter().all(|e| ring.is_zero(e))
    }

    pub fn is_identity<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.is_square() && *self == Matrix::identity(ring, self.rows)
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "cannot multiply {}x{} by {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Matrix::zeros(ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = ring.add(&out.entries[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "cannot add matrices of different shape");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| ring.add(a, b)).collect();
        Matrix::from_vec(self.rows, self.cols, entries)
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "cannot subtract matrices of different shape");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| ring.sub(a, b)).collect();
        Matrix::from_vec(self.rows, self.cols, entries)
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        Matrix::from_vec(self.rows, self.cols, self.entries.iter().map(|a| ring.neg(a)).collect())
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        Matrix::from_vec(self.rows, self.cols, self.entries.iter().map(|a| ring.mul(c, a)).collect())
    }

    pub fn pow<R: Ring<Elem = E>>(&self, ring: &R, k: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Matrix::identity(ring, self.rows);
        for _ in 0..k {
            acc = acc.mul(ring, self);
        }
        acc
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        Matrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| match (i < self.rows, j < self.cols) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - self.rows, j - self.cols).clone(),
            _ => ring.zero(),
        })
    }

    /// Kronecker product; row index of `a ⊗ b` is `i_a * rows(b) + i_b`.
    pub fn kronecker<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let a = self.get(i / other.rows.max(1), j / other.cols.max(1));
            let b = other.get(i % other.rows.max(1), j % other.cols.max(1));
            ring.mul(a, b)
        })
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(src, j));
            let idx = dst * self.cols + j;
            self.entries[idx] = ring.add(&self.entries[idx], &v);
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let v = ring.mul(c, self.get(i, src));
            let idx = i * self.cols + dst;
            self.entries[idx] = ring.add(&self.entries[idx], &v);
        }
    }

    pub fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, i: usize, c: &E) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = ring.mul(c, &self.entries[idx]);
        }
    }

    pub fn scale_col<R: Ring<Elem = E>>(&mut self, ring: &R, j: usize, c: &E) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.entries[idx] = ring.mul(c, &self.entries[idx]);
        }
    }

    /// Replaces columns `(a, b)` by `(s*a + t*b, u*a + v*b)`.
    pub fn combine_cols<R: Ring<Elem = E>>(&mut self, ring: &R, a: usize, b: usize, [s, t, u, v]: [&E; 4]) {
        for i in 0..self.rows {
            let x = self.get(i, a).clone();
            let y = self.get(i, b).clone();
            let ia = i * self.cols + a;
            let ib = i * self.cols + b;
            self.entries[ia] = ring.add(&ring.mul(s, &x), &ring.mul(t, &y));
            self.entries[ib] = ring.add(&ring.mul(u, &x), &ring.mul(v, &y));
        }
    }
}
