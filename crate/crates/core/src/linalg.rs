//! Dense exact matrices and Gaussian elimination over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// `Some(λ)` when the matrix equals `λ·Id`.
    pub fn as_scalar(&self) -> Option<F> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(F::zero());
        }
        let lambda = self[(0, 0)].clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { lambda.clone() } else { F::zero() };
                if self[(i, j)] != want {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inverse().expect("non-zero pivot");
            for j in c..self.cols {
                let v = self[(r, j)].clone() * inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    let v = self[(i, j)].clone() - factor.clone() * self[(r, j)].clone();
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// One solution of `self · x = b`, free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shapes");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shapes");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

/// Row-major text: one line per row, entries separated by single spaces.
impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};

    #[test]
    fn rank_and_solve() {
        let m: Matrix<Rational> = Matrix::from_rows(vec![
            vec![qi(1), qi(2), qi(3)],
            vec![qi(2), qi(4), qi(6)],
            vec![qi(0), qi(1), q(1, 2)],
        ]);
        assert_eq!(m.rank(), 2);
        let x = m.solve(&[qi(1), qi(2), qi(1)]).unwrap();
        let b: Vec<Rational> = (0..3)
            .map(|i| (0..3).map(|j| &m[(i, j)] * &x[j]).sum())
            .collect();
        assert_eq!(b, vec![qi(1), qi(2), qi(1)]);
        assert!(m.solve(&[qi(1), qi(3), qi(0)]).is_none());
    }

    #[test]
    fn scalar_detection() {
        let m: Matrix<Rational> = Matrix::identity(3).scale(&q(-3, 4));
        assert_eq!(m.as_scalar(), Some(q(-3, 4)));
        let mut n = m.clone();
        n[(0, 1)] = qi(1);
        assert_eq!(n.as_scalar(), None);
    }
}
