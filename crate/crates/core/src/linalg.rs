//! Dense numeric primitives: a real-symmetric eigensolver and 4×4 complex
//! matrix algebra for two-qubit propagators.

use num_complex::Complex64;
use thiserror::Error;

use crate::units::HBAR;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows} rows, {len} entries")]
    NotSquare { rows: usize, len: usize },
    #[error("matrix dimension {0} outside supported range 1..=4096")]
    Dimension(usize),
    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
    #[error("matrix is not hermitian: |h[{i}][{j}] - conj(h[{j}][{i}])| = {diff:e}")]
    NotHermitian { i: usize, j: usize, diff: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("QL iteration failed to converge for eigenvalue {0}")]
    NoConvergence(usize),
}

/// Dense real matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(LinalgError::NotSquare { rows: n, len: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Bilinear form uᵀ·A·v.
    pub fn quad_form(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter().zip(self.mul_vec(v)).map(|(a, b)| a * b).sum()
    }
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

/// Eigendecomposition of a real-symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

const SYMMETRY_TOL: f64 = 1e-10;

/// Diagonalizes a real-symmetric matrix by Householder reduction to
/// tridiagonal form followed by implicit QL iteration.
pub fn eigh(a: &Matrix) -> Result<SymEigen, LinalgError> {
    let n = a.n;
    if n == 0 || n > 4096 {
        return Err(LinalgError::Dimension(n));
    }
    if a.data.iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..i {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if diff > SYMMETRY_TOL * scale {
                return Err(LinalgError::NotSymmetric { i, j, diff });
            }
        }
    }

    // w is the transpose of the accumulated transformation: its rows end up
    // holding the eigenvectors, which keeps every rotation on contiguous memory.
    let mut w: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 0.5 * (a[(i, j)] + a[(j, i)])).collect()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut w, &mut d, &mut e);
    ql_implicit(&mut w, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| d[p].total_cmp(&d[q]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order.iter().map(|&k| std::mem::take(&mut w[k])).collect();
    Ok(SymEigen { values, vectors })
}

/// Householder reduction to tridiagonal form (EISPACK tred2 ordering), with
/// `w[col][row]` addressing so inner loops run along rows.
fn tridiagonalize(w: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = w[j][n - 1];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[j][i - 1];
                w[j][i] = 0.0;
                w[i][j] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                f = d[j];
                w[i][j] = f;
                let col = &w[j];
                g = e[j] + col[j] * f;
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut w[j];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = col[i - 1];
                col[i] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate the Householder reflections.
    for i in 0..n - 1 {
        w[i][n - 1] = w[i][i];
        w[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = w[i + 1][k] / h;
            }
            for j in 0..=i {
                let g: f64 = w[i + 1][..=i].iter().zip(&w[j][..=i]).map(|(x, y)| x * y).sum();
                for (x, dk) in w[j][..=i].iter_mut().zip(&d[..=i]) {
                    *x -= g * dk;
                }
            }
        }
        w[i + 1][..=i].iter_mut().for_each(|x| *x = 0.0);
    }
    for j in 0..n {
        d[j] = w[j][n - 1];
        w[j][n - 1] = 0.0;
    }
    w[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

fn rotate_rows(w: &mut [Vec<f64>], i: usize, c: f64, s: f64) {
    let (lo, hi) = w.split_at_mut(i + 1);
    for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
        let h = *b;
        *b = s * *a + c * h;
        *a = c * *a - s * h;
    }
}

fn ql_implicit(w: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(LinalgError::NoConvergence(l));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d.iter_mut().skip(l + 2) {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    rotate_rows(w, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// A 4-component complex vector over the two-qubit computational basis.
pub type CVec4 = [Complex64; 4];

/// A 4×4 complex matrix, row-major.
pub type CMat4 = [[Complex64; 4]; 4];

pub fn cmat_zero() -> CMat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn cmat_identity() -> CMat4 {
    let mut m = cmat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmat_mul(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn cmat_apply(a: &CMat4, v: &CVec4) -> CVec4 {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row.iter().zip(v).map(|(x, y)| x * y).sum();
    }
    out
}

pub fn cmat_adjoint(a: &CMat4) -> CMat4 {
    let mut out = cmat_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

/// Largest entry modulus of `a - b`.
pub fn cmat_max_diff(a: &CMat4, b: &CMat4) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// ⟨u|v⟩ with the first argument conjugated.
pub fn cdot(u: &CVec4, v: &CVec4) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn cnorm(v: &CVec4) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_hermitian(h: &CMat4) -> Result<(), LinalgError> {
    let mut scale: f64 = 0.0;
    for row in h {
        for x in row {
            if !x.re.is_finite() || !x.im.is_finite() {
                return Err(LinalgError::NonFinite);
            }
            scale = scale.max(x.norm());
        }
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    for i in 0..4 {
        for j in 0..=i {
            let diff = (h[i][j] - h[j][i].conj()).norm();
            if diff > SYMMETRY_TOL * scale {
                return Err(LinalgError::NotHermitian { i, j, diff });
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a hermitian 4×4 matrix.
///
/// Uses the real symmetric 8×8 representation [[Re H, −Im H], [Im H, Re H]]:
/// each of its eigenvectors (a; b) maps to the complex eigenvector a + ib of H.
/// Every eigenvalue of H appears twice, so the complex candidates are reduced
/// to an orthonormal set by Gram–Schmidt.
pub fn eigh_hermitian4(h: &CMat4) -> Result<([f64; 4], [CVec4; 4]), LinalgError> {
    check_hermitian(h)?;
    let mut m = Matrix::zeros(8);
    for i in 0..4 {
        for j in 0..4 {
            let z = 0.5 * (h[i][j] + h[j][i].conj());
            m[(i, j)] = z.re;
            m[(i + 4, j + 4)] = z.re;
            m[(i, j + 4)] = -z.im;
            m[(i + 4, j)] = z.im;
        }
    }
    let eig = eigh(&m)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut basis: Vec<CVec4> = Vec::with_capacity(4);
    for v in &eig.vectors {
        let mut z = [zero; 4];
        for k in 0..4 {
            z[k] = Complex64::new(v[k], v[k + 4]);
        }
        for b in &basis {
            let proj = cdot(b, &z);
            for k in 0..4 {
                z[k] -= proj * b[k];
            }
        }
        let norm = cnorm(&z);
        if norm > 0.5 {
            z.iter_mut().for_each(|x| *x /= norm);
            basis.push(z);
            if basis.len() == 4 {
                break;
            }
        }
    }
    debug_assert_eq!(basis.len(), 4);
    let mut values = [0.0; 4];
    for (val, z) in values.iter_mut().zip(&basis) {
        *val = cdot(z, &cmat_apply(h, z)).re;
    }
    Ok((values, [basis[0], basis[1], basis[2], basis[3]]))
}

/// Propagator U = exp(−iHt/ħ) for a hermitian 4×4 `h` (meV) and time `t` (ps),
/// built from the spectral decomposition of `h`.
pub fn expm_i_h_t(h: &CMat4, t: f64) -> Result<CMat4, LinalgError> {
    if !t.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let (values, vectors) = eigh_hermitian4(h)?;
    let mut u = cmat_zero();
    for (lambda, z) in values.iter().zip(&vectors) {
        let phase = Complex64::from_polar(1.0, -lambda * t / HBAR);
        for i in 0..4 {
            for j in 0..4 {
                u[i][j] += phase * z[i] * z[j].conj();
            }
        }
    }
    Ok(u)
}
