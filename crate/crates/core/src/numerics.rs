//! Complex scalars and small dense complex matrices.
//!
//! Every matrix is row-major and immutable once built; all operations return
//! new values. Sizes in this crate stay small (N <= 8), so nothing here tries
//! to be clever about blocking or sparsity.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// The imaginary unit.
pub const I: ComplexScalar = Complex64::new(0.0, 1.0);

/// Relative threshold below which a determinant marks a matrix as singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> ComplexScalar {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> ComplexScalar {
    Complex64::new(re, 0.0)
}

/// Principal square root: non-negative real part, and a non-negative
/// imaginary part on the negative real axis regardless of the sign of zero.
pub fn principal_sqrt(z: ComplexScalar) -> ComplexScalar {
    let (x, y) = (z.re, z.im);
    if x == 0.0 && y == 0.0 {
        return c(0.0, 0.0);
    }
    if y == 0.0 {
        return if x > 0.0 {
            c(x.sqrt(), 0.0)
        } else {
            c(0.0, (-x).sqrt())
        };
    }
    let r = x.hypot(y);
    if x >= 0.0 {
        let t = ((r + x) / 2.0).sqrt();
        c(t, y / (2.0 * t))
    } else {
        let t = ((r - x) / 2.0).sqrt();
        c(y.abs() / (2.0 * t), t.copysign(y))
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexScalar>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for DenseMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let data = repr.entries.iter().map(|&[re, im]| c(re, im)).collect();
        DenseMatrix::new(repr.rows, repr.cols, data)
    }
}

impl From<DenseMatrix> for MatrixRepr {
    fn from(m: DenseMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::shape("new", format!("empty matrix {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::shape(
                "new",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[ComplexScalar]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n_cols) {
            return Err(Error::shape("from_rows", "ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        DenseMatrix::new(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix");
        DenseMatrix {
            rows,
            cols,
            data: vec![c(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = c(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[ComplexScalar]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::shape("diag", "no diagonal entries"));
        }
        let mut data = vec![c(0.0, 0.0); n * n];
        for (k, &v) in values.iter().enumerate() {
            data[k * n + k] = v;
        }
        DenseMatrix::new(n, n, data)
    }

    /// Real diagonal matrix, e.g. a parity `diag(1, -1)`.
    pub fn real_diag(values: &[f64]) -> Result<Self> {
        let v: Vec<_> = values.iter().map(|&x| real(x)).collect();
        DenseMatrix::diag(&v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Option<ComplexScalar> {
        (row < self.rows && col < self.cols).then(|| self.data[row * self.cols + col])
    }

    pub fn row(&self, r: usize) -> &[ComplexScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn map(&self, f: impl Fn(ComplexScalar) -> ComplexScalar) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::shape(
                op,
                format!("expected a square matrix, got {}x{}", self.rows, self.cols),
            ))
        }
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape(
                "matmul",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &DenseMatrix,
        op: &'static str,
        f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
    ) -> Result<DenseMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::shape(
                op,
                format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            ));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, "add", |x, y| x + y)
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(rhs, "sub", |x, y| x - y)
    }

    pub fn scale(&self, k: ComplexScalar) -> DenseMatrix {
        self.map(|z| z * k)
    }

    /// Entrywise complex conjugate: the action of time reversal on a matrix.
    pub fn conj(&self) -> DenseMatrix {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Result<ComplexScalar> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|k| self.data[k * n + k]).sum())
    }

    pub fn det(&self) -> Result<ComplexScalar> {
        let n = self.require_square("det")?;
        let a = &self.data;
        match n {
            1 => Ok(a[0]),
            2 => Ok(a[0] * a[3] - a[1] * a[2]),
            _ => {
                // LU with partial pivoting.
                let mut lu = a.clone();
                let mut det = c(1.0, 0.0);
                for k in 0..n {
                    let p = (k..n)
                        .max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))
                        .unwrap();
                    if lu[p * n + k].norm() == 0.0 {
                        return Ok(c(0.0, 0.0));
                    }
                    if p != k {
                        for j in 0..n {
                            lu.swap(k * n + j, p * n + j);
                        }
                        det = -det;
                    }
                    let pivot = lu[k * n + k];
                    det *= pivot;
                    for i in k + 1..n {
                        let f = lu[i * n + k] / pivot;
                        for j in k + 1..n {
                            let v = lu[k * n + j];
                            lu[i * n + j] -= f * v;
                        }
                    }
                }
                Ok(det)
            }
        }
    }

    /// Threshold on |det| below which `inverse` reports a singular matrix.
    pub fn singularity_threshold(&self) -> f64 {
        SINGULARITY_TOL * self.frobenius_norm().powi(2).max(1.0)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.require_square("inverse")?;
        let det = self.det()?;
        let threshold = self.singularity_threshold();
        if det.norm() <= threshold {
            return Err(Error::Singular {
                det_abs: det.norm(),
                threshold,
            });
        }
        if n == 1 {
            return DenseMatrix::new(1, 1, vec![det.inv()]);
        }
        if n == 2 {
            let a = &self.data;
            return DenseMatrix::new(2, 2, vec![a[3] / det, -a[1] / det, -a[2] / det, a[0] / det]);
        }
        // Gauss-Jordan with partial pivoting on [A | I].
        let mut work = self.data.clone();
        let mut inv = DenseMatrix::identity(n).data;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| work[i * n + k].norm().total_cmp(&work[j * n + k].norm()))
                .unwrap();
            if work[p * n + k].norm() == 0.0 {
                return Err(Error::Singular {
                    det_abs: 0.0,
                    threshold,
                });
            }
            if p != k {
                for j in 0..n {
                    work.swap(k * n + j, p * n + j);
                    inv.swap(k * n + j, p * n + j);
                }
            }
            let pivot_inv = work[k * n + k].inv();
            for j in 0..n {
                work[k * n + j] *= pivot_inv;
                inv[k * n + j] *= pivot_inv;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = work[i * n + k];
                if f == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let (wk, ik) = (work[k * n + j], inv[k * n + j]);
                    work[i * n + j] -= f * wk;
                    inv[i * n + j] -= f * ik;
                }
            }
        }
        DenseMatrix::new(n, n, inv)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        if v.len() != self.cols {
            return Err(Error::shape(
                "apply",
                format!("vector of length {} for {} columns", v.len(), self.cols),
            ));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect())
    }

    /// Copy with signed zeros normalised to +0, for bitwise comparisons.
    pub fn normalized_zeros(&self) -> DenseMatrix {
        let fix = |x: f64| if x == 0.0 { 0.0 } else { x };
        self.map(|z| c(fix(z.re), fix(z.im)))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = ComplexScalar;

    fn index(&self, (r, c): (usize, usize)) -> &ComplexScalar {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|z| format!("{z}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
