//! Dense complex matrices in row-major storage.
//!
//! The sizes in play (dimensions up to a few hundred) do not justify a
//! BLAS dependency; a plain `Vec<Complex64>` keeps the whole crate
//! deterministic across platforms.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub type C64 = Complex64;

/// Dense `rows x cols` complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square matrix with the given real numbers on the diagonal.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Mat::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Build from column vectors; all columns must share a length.
    pub fn from_cols(cols: &[Vec<C64>]) -> Self {
        let ncols = cols.len();
        let nrows = if ncols == 0 { 0 } else { cols[0].len() };
        let mut m = Mat::zeros(nrows, ncols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "ragged column set");
            for i in 0..nrows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    /// Build from row slices of real numbers (test convenience).
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        Mat::from_fn(nrows, ncols, |i, j| C64::new(rows[i][j], 0.0))
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

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[C64]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Mat {
        self.scale_c(C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Mat {
        let mut m = self.clone();
        for z in &mut m.data {
            *z *= s;
        }
        m
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn trace_re(&self) -> f64 {
        self.trace().re
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `A = A*`.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square(), "symmetry defect of a non-square matrix");
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}

/// Inner product `x* y`, conjugate-linear in the first slot.
pub fn vdot(x: &[C64], y: &[C64]) -> C64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vnorm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_is_neutral() {
        let a = Mat::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, (i as f64) - 1.0));
        let e = Mat::identity(3);
        assert_eq!(&a * &e, a);
        assert_eq!(&e * &a, a);
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = Mat::from_fn(2, 3, |i, j| c(i as f64 + 1.0, j as f64));
        let b = Mat::from_fn(3, 2, |i, j| c(j as f64 - 1.0, i as f64 * 0.5));
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!((&lhs - &rhs).max_abs() < 1e-14);
    }

    #[test]
    fn trace_and_fro_norm() {
        let a = Mat::from_real_rows(&[&[3.0, 4.0], &[0.0, 1.0]]);
        assert_eq!(a.trace(), c(4.0, 0.0));
        assert!((a.fro_norm() - 26.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hermitian_defect_detects_asymmetry() {
        let mut a = Mat::identity(2);
        a[(0, 1)] = c(0.0, 1.0);
        a[(1, 0)] = c(0.0, 1.0); // conjugate would be -i
        assert!(a.hermitian_defect() > 1.9);
        a[(1, 0)] = c(0.0, -1.0);
        assert_eq!(a.hermitian_defect(), 0.0);
    }

    #[test]
    fn column_round_trip() {
        let mut a = Mat::zeros(3, 2);
        a.set_col(1, &[c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0)]);
        assert_eq!(a.col(1), vec![c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0)]);
        assert_eq!(a.col(0), vec![c(0.0, 0.0); 3]);
        a.swap_cols(0, 1);
        assert_eq!(a.col(0)[2], c(5.0, 6.0));
    }

    #[test]
    fn vdot_is_conjugate_linear_in_first_slot() {
        let x = vec![c(0.0, 1.0), c(1.0, 0.0)];
        let y = vec![c(1.0, 0.0), c(0.0, 1.0)];
        // conj(i)*1 + conj(1)*i = -i + i = 0
        assert_eq!(vdot(&x, &y), c(0.0, 0.0));
        assert!((vnorm(&x) - 2.0f64.sqrt()).abs() < 1e-15);
    }
}
