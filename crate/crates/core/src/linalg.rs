//! Dense exact linear algebra over a [`Field`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Elem, Field};

pub type Vector = Vec<Elem>;

pub fn zero_vec(field: &Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vec(field: &Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Elem]) -> bool {
    v.iter().all(Elem::is_zero)
}

/// acc += c * v
pub fn axpy(acc: &mut [Elem], c: &Elem, v: &[Elem]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

pub fn scale(v: &[Elem], c: &Elem) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn add(u: &[Elem], v: &[Elem]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[Elem], v: &[Elem]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn dot(field: &Field, u: &[Elem], v: &[Elem]) -> Elem {
    let mut acc = field.zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = &acc + &(a * b);
        }
    }
    acc
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<alloc::string::String> = self.row(r).iter().map(|e| alloc::format!("{e}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vector>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension { expected: cols, got: bad.len() });
        }
        let n = rows.len();
        Ok(Matrix { field: field.clone(), rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(field: &Field, rows: usize, cols: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension { expected: rows, got: c.len() });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|x| field.from_i64(*x)).collect()).collect();
        Self::from_rows(field, v).expect("rectangular literal")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + &(a * b);
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|r| dot(&self.field, self.row(r), v)).collect())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Elem) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn trace(&self) -> Elem {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            let pivot_row: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = -m.get(i, c);
                    let start = i * m.cols;
                    axpy(&mut m.data[start + c..start + m.cols], &f, &pivot_row[c..]);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : M x = 0}.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for p in &pivots {
            is_pivot[*p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !is_pivot[*c]) {
            let mut v = zero_vec(&self.field, self.cols);
            v[free] = self.field.one();
            for (row, p) in pivots.iter().enumerate() {
                v[*p] = -r.get(row, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Some x with M x = b, if one exists.
    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension { expected: self.rows, got: b.len() });
        }
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vec(&self.field, self.cols);
        for (row, p) in pivots.iter().enumerate() {
            x[*p] = red.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Elem {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            let pivot_row: Vector = m.row(c).to_vec();
            for i in c + 1..n {
                if !m.get(i, c).is_zero() {
                    let f = -(m.get(i, c) * &inv);
                    let start = i * n;
                    axpy(&mut m.data[start + c..start + n], &f, &pivot_row[c..]);
                }
            }
        }
        det
    }
}

/// Incrementally built row-echelon basis of a subspace, used for membership
/// tests, coordinates and reduction modulo a span.
///
/// Rows are kept fully reduced against each other; `order` gives the
/// priority of coordinates as pivots (earlier entries are eliminated first).
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    order: Vec<usize>,
    rank_of: Vec<usize>,
    rows: Vec<Vector>,
    pivot_of_row: Vec<usize>,
    row_of_pivot: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: &Field, dim: usize) -> Self {
        Self::with_order(field, dim, (0..dim).collect())
    }

    /// `order[0]` is the most preferred pivot coordinate.
    pub fn with_order(field: &Field, dim: usize, order: Vec<usize>) -> Self {
        let mut rank_of = vec![0; dim];
        for (r, c) in order.iter().enumerate() {
            rank_of[*c] = r;
        }
        Echelon {
            field: field.clone(),
            dim,
            order,
            rank_of,
            rows: Vec::new(),
            pivot_of_row: Vec::new(),
            row_of_pivot: vec![None; dim],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivot_of_row
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.row_of_pivot[c].is_some()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    /// Remainder of v modulo the span: supported off pivot coordinates.
    pub fn reduce(&self, v: &[Elem]) -> Vector {
        let mut v = v.to_vec();
        for (row, p) in self.rows.iter().zip(&self.pivot_of_row) {
            if !v[*p].is_zero() {
                let c = -v[*p].clone();
                axpy(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds v to the span; returns true if the rank grew.
    pub fn insert(&mut self, v: &[Elem]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = self.order.iter().copied().find(|c| !r[*c].is_zero()) else {
            return false;
        };
        let inv = r[p].inv().unwrap();
        r = scale(&r, &inv);
        for (row, _) in self.rows.iter_mut().zip(&self.pivot_of_row) {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &r);
            }
        }
        self.row_of_pivot[p] = Some(self.rows.len());
        self.rows.push(r);
        self.pivot_of_row.push(p);
        true
    }

    /// Pivot rank of a coordinate in the preference order.
    pub fn priority(&self, c: usize) -> usize {
        self.rank_of[c]
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Coordinates with respect to a fixed basis of a subspace.
#[derive(Clone, Debug)]
pub struct Coordinates {
    rows: Vec<usize>,
    inv: Matrix,
    basis: Vec<Vector>,
}

impl Coordinates {
    pub fn new(field: &Field, dim: usize, basis: &[Vector]) -> Result<Self> {
        let m = basis.len();
        let p = Matrix::from_cols(field, dim, basis)?;
        let (_, rows) = p.transpose().rref();
        if rows.len() != m {
            return Err(crate::error::invalid!("basis vectors are dependent"));
        }
        let sub = Matrix::from_rows(field, rows.iter().map(|r| p.row(*r).to_vec()).collect())?;
        let inv = if m == 0 { sub } else { sub.inverse().expect("independent rows") };
        Ok(Coordinates { rows, inv, basis: basis.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// None when v is outside the span.
    pub fn coords(&self, v: &[Elem]) -> Option<Vector> {
        if self.basis.is_empty() {
            return if is_zero_vec(v) { Some(Vec::new()) } else { None };
        }
        let w: Vector = self.rows.iter().map(|r| v[*r].clone()).collect();
        let c = self.inv.mul_vec(&w).ok()?;
        let mut back = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            axpy(&mut back, &-ci.clone(), b);
        }
        if is_zero_vec(&back) {
            Some(c)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
        }
        let b = vec![q.from_i64(1), q.from_i64(2)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
        assert!(m.solve(&[q.from_i64(1), q.from_i64(3)]).unwrap().is_none());
    }

    #[test]
    fn inverse_and_determinant() {
        let q = Field::rationals();
        let m = Matrix::from_i64(&q, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), q.from_i64(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&q, 2));
        let f2 = Field::prime_field(2).unwrap();
        let s = Matrix::from_i64(&f2, &[&[1, 1], &[1, 1]]);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn echelon_membership() {
        let q = Field::rationals();
        let mut e = Echelon::new(&q, 3);
        assert!(e.insert(&[q.from_i64(1), q.from_i64(1), q.from_i64(0)]));
        assert!(e.insert(&[q.from_i64(0), q.from_i64(1), q.from_i64(1)]));
        assert!(!e.insert(&[q.from_i64(1), q.from_i64(2), q.from_i64(1)]));
        assert!(e.contains(&[q.from_i64(1), q.from_i64(0), q.from_i64(-1)]));
        assert!(!e.contains(&[q.from_i64(0), q.from_i64(0), q.from_i64(1)]));
    }
}
