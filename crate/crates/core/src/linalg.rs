//! Dense complex matrices, LU factorization with partial pivoting, and a small
//! real solver for the regularized normal equations.
//!
//! System sizes here are a few hundred up to ~1000 unknowns, so a
//! straightforward row-major implementation is sufficient.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// self + other, elementwise.
    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    /// self + alpha * other.
    pub fn add_scaled(&self, alpha: Complex64, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        out
    }

    pub fn scale(&mut self, alpha: Complex64) {
        for a in &mut self.data {
            *a *= alpha;
        }
    }

    /// Add alpha to the diagonal.
    pub fn add_diag(&mut self, alpha: Complex64) {
        let n = self.rows.min(self.cols);
        for i in 0..n {
            self.data[i * self.cols + i] += alpha;
        }
    }

    /// Scale row i by alpha.
    pub fn scale_row(&mut self, i: usize, alpha: Complex64) {
        for v in self.data[i * self.cols..(i + 1) * self.cols].iter_mut() {
            *v *= alpha;
        }
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, b) in self.row(i).iter().zip(x) {
                    acc += a * b;
                }
                acc
            })
            .collect()
    }

    /// Product with a real matrix on the left: out = d * self, d row-major n x n.
    pub fn real_mul_left(&self, d: &[f64], n: usize) -> CMat {
        assert_eq!(self.rows, n);
        let mut out = CMat::zeros(n, self.cols);
        for i in 0..n {
            let drow = &d[i * n..(i + 1) * n];
            for (k, &dik) in drow.iter().enumerate() {
                if dik == 0.0 {
                    continue;
                }
                let srow = self.row(k);
                let orow = &mut out.data[i * self.cols..(i + 1) * self.cols];
                for (o, s) in orow.iter_mut().zip(srow) {
                    *o += dik * s;
                }
            }
        }
        out
    }

    /// Product with a real matrix on the right: out = self * d, d row-major n x n.
    pub fn real_mul_right(&self, d: &[f64], n: usize) -> CMat {
        assert_eq!(self.cols, n);
        let mut out = CMat::zeros(self.rows, n);
        for i in 0..self.rows {
            let srow = self.row(i);
            let orow = &mut out.data[i * n..(i + 1) * n];
            for (k, &sik) in srow.iter().enumerate() {
                if sik.re == 0.0 && sik.im == 0.0 {
                    continue;
                }
                let drow = &d[k * n..(k + 1) * n];
                for (o, &dv) in orow.iter_mut().zip(drow) {
                    *o += sik * dv;
                }
            }
        }
        out
    }
}

/// LU factorization with partial pivoting, retained for repeated solves.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    piv: Vec<usize>,
}

impl LuFactors {
    /// Factor a square matrix, consuming it.
    pub fn factor(mut a: CMat) -> Result<Self> {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut piv = vec![0usize; n];
        // scale reference for the singularity test
        let mut max_abs = 0.0f64;
        for v in &a.data {
            max_abs = max_abs.max(v.norm_sqr());
        }
        let tol = max_abs.sqrt() * 1e-14 * (n as f64);

        for col in 0..n {
            let mut p = col;
            let mut best = a.at(col, col).norm_sqr();
            for r in col + 1..n {
                let v = a.at(r, col).norm_sqr();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best.sqrt() <= tol {
                return Err(Error::SingularSystem(format!(
                    "pivot {:.3e} at column {col} of {n}",
                    best.sqrt()
                )));
            }
            piv[col] = p;
            if p != col {
                for j in 0..n {
                    let tmp = a.at(col, j);
                    *a.at_mut(col, j) = a.at(p, j);
                    *a.at_mut(p, j) = tmp;
                }
            }
            let inv_pivot = Complex64::new(1.0, 0.0) / a.at(col, col);
            for r in col + 1..n {
                let factor = a.at(r, col) * inv_pivot;
                *a.at_mut(r, col) = factor;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                let (head, tail) = a.data.split_at_mut(r * n);
                let src = &head[col * n + col + 1..col * n + n];
                let dst = &mut tail[col + 1..n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= factor * s;
                }
            }
        }
        Ok(Self { n, lu: a.data, piv })
    }

    /// Solve A x = b, returning x.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x = b.to_vec();
        for i in 0..n {
            x.swap(i, self.piv[i]);
        }
        // forward: L y = Pb (unit lower triangular)
        for i in 1..n {
            let mut acc = x[i];
            let row = &self.lu[i * n..i * n + i];
            for (j, l) in row.iter().enumerate() {
                acc -= l * x[j];
            }
            x[i] = acc;
        }
        // backward: U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            for (off, u) in row.iter().enumerate() {
                acc -= u * x[i + 1 + off];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Solve a dense real symmetric positive-definite-ish system in place by LU
/// with partial pivoting. Used for the (2M+4)-sized normal equations.
pub fn solve_real(a: &mut [f64], n: usize, b: &mut [f64]) -> Result<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut scale = 0.0f64;
    for v in a.iter() {
        scale = scale.max(v.abs());
    }
    let tol = scale * 1e-14 * (n as f64);
    for col in 0..n {
        let mut p = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best <= tol {
            return Err(Error::SingularSystem(format!(
                "real pivot {best:.3e} at column {col} of {n}"
            )));
        }
        if p != col {
            for j in 0..n {
                a.swap(col * n + j, p * n + j);
            }
            b.swap(col, p);
        }
        let inv_pivot = 1.0 / a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] * inv_pivot;
            if f == 0.0 {
                continue;
            }
            a[r * n + col] = 0.0;
            for j in col + 1..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
    Ok(())
}
