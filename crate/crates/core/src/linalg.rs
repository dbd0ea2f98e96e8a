//! Small dense square matrices: Jacobians and homology actions.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// Residual target for the power-iteration operator norm.
pub const POWER_ITERATION_RESIDUAL: f64 = 1e-10;
const POWER_ITERATION_MAX_STEPS: usize = 20_000;

/// Row-major square matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

/// Operator norm together with the certificate that backs it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpNorm {
    pub value: f64,
    /// `|A^T A v - mu v|` relative to `mu` for the power-iteration path, zero
    /// for the closed form used in dimension two.
    pub residual: f64,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        Matrix { n, data }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// The 2x2 lower shear `[[1, 0], [c, 1]]`.
    pub fn shear2(c: f64) -> Self {
        Matrix { n: 2, data: vec![1.0, 0.0, c, 1.0] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest entrywise difference, scaled by `max(1, |a|)` per entry.
    pub fn max_rel_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Determinant. In dimension two this is Kahan's fused-multiply-add
    /// formula, accurate to a few ulps of the result even when `ad` and `bc`
    /// are huge and nearly equal (powers of hyperbolic integer matrices).
    pub fn det(&self) -> f64 {
        match self.n {
            0 => 1.0,
            1 => self.data[0],
            2 => {
                let (a, b, c, d) = (self.data[0], self.data[1], self.data[2], self.data[3]);
                let w = b * c;
                let e = (-b).mul_add(c, w);
                let f = a.mul_add(d, -w);
                f + e
            }
            _ => self.det_lu(),
        }
    }

    fn det_lu(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
                .unwrap();
            if a[pivot * n + k] == 0.0 {
                return 0.0;
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let akk = a[k * n + k];
            det *= akk;
            for i in k + 1..n {
                let l = a[i * n + k] / akk;
                for j in k..n {
                    a[i * n + j] -= l * a[k * n + j];
                }
            }
        }
        det
    }

    /// Operator norm with respect to the Euclidean norm.
    ///
    /// Dimension two uses the closed-form largest singular value
    /// `(sqrt((a+d)^2 + (c-b)^2) + sqrt((a-d)^2 + (b+c)^2)) / 2`. Larger
    /// matrices use power iteration on `A^T A`, started from the heaviest
    /// column, and report the eigen-residual as certificate.
    pub fn op_norm(&self) -> OpNorm {
        match self.n {
            0 => OpNorm { value: 0.0, residual: 0.0 },
            1 => OpNorm { value: self.data[0].abs(), residual: 0.0 },
            2 => {
                let (a, b, c, d) = (self.data[0], self.data[1], self.data[2], self.data[3]);
                let s = (a + d).hypot(c - b);
                let t = (a - d).hypot(b + c);
                OpNorm { value: 0.5 * (s + t), residual: 0.0 }
            }
            _ => self.op_norm_power(),
        }
    }

    fn op_norm_power(&self) -> OpNorm {
        let n = self.n;
        let scale = self.max_abs_entry();
        if scale == 0.0 {
            return OpNorm { value: 0.0, residual: 0.0 };
        }
        // Work with A / scale to keep A^T A finite.
        let a: Vec<f64> = self.data.iter().map(|x| x / scale).collect();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                gram[i * n + j] = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum();
            }
        }
        let heaviest = (0..n).max_by(|&i, &j| gram[i * n + i].total_cmp(&gram[j * n + j])).unwrap();
        let mut v: Vec<f64> = (0..n).map(|i| if i == heaviest { 1.0 } else { 1e-3 * (1.0 + i as f64) }).collect();
        normalize(&mut v);
        let mut mu = 0.0;
        let mut residual = f64::INFINITY;
        for _ in 0..POWER_ITERATION_MAX_STEPS {
            let w = sym_apply(&gram, n, &v);
            mu = dot(&v, &w);
            residual = w.iter().zip(&v).map(|(wi, vi)| (wi - mu * vi).powi(2)).sum::<f64>().sqrt();
            if mu > 0.0 && residual <= POWER_ITERATION_RESIDUAL * mu {
                break;
            }
            v = w;
            if normalize(&mut v) == 0.0 {
                break;
            }
        }
        let rel = if mu > 0.0 { residual / mu } else { 0.0 };
        OpNorm { value: scale * mu.max(0.0).sqrt(), residual: rel }
    }

    /// `max |A^T Omega A - Omega|` for the standard form in (p1, q1, p2, q2, ...)
    /// ordering.
    pub fn symplectic_defect(&self) -> f64 {
        let n = self.n;
        assert!(n % 2 == 0, "symplectic defect needs even dimension");
        let omega = standard_form(n);
        let lhs = &(&self.transpose() * &omega) * self;
        lhs.max_abs_diff(&omega)
    }
}

/// The standard symplectic Gram matrix in (p1, q1, ..., pn, qn) ordering:
/// `omega(e_{p_j}, e_{q_j}) = 1`.
pub fn standard_form(dim: usize) -> Matrix {
    let mut m = Matrix::zeros(dim);
    for j in 0..dim / 2 {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

fn sym_apply(m: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        if n == 2 {
            let (a, b) = (&self.data, &rhs.data);
            return Matrix {
                n,
                data: vec![
                    a[0] * b[0] + a[1] * b[2],
                    a[0] * b[1] + a[1] * b[3],
                    a[2] * b[0] + a[3] * b[2],
                    a[2] * b[1] + a[3] * b[3],
                ],
            };
        }
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n)).finish()
    }
}

/// Integer square matrix, used for lattice actions and linear torus maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix(pub Vec<Vec<i64>>);

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        IntMatrix((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        IntMatrix((0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_square(&self) -> bool {
        self.0.iter().all(|r| r.len() == self.0.len())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows: Vec<Vec<f64>> = self.0.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().map(|r| r.iter().zip(v).map(|(&a, b)| a as f64 * b).sum()).collect()
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        self.0.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        let n = self.dim();
        let mut a: Vec<Vec<i128>> = self.0.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * a[n - 1][n - 1]
        }
    }

    /// Exact inverse for unimodular matrices (adjugate via cofactors).
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        let n = self.dim();
        let mut inv = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor = IntMatrix(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != j)
                        .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, &x)| x).collect())
                        .collect(),
                );
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                inv[i][j] = (sign * minor.det() * d) as i64;
            }
        }
        Some(IntMatrix(inv))
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim();
        IntMatrix(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.0[i][k] * other.0[k][j]).sum()).collect())
                .collect(),
        )
    }
}
