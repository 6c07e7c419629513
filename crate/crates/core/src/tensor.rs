//! Dense complex linear algebra over multipartite Hilbert spaces.
//!
//! Everything here is written for the small dimensions this crate actually
//! meets (≤ 64 for operators, ≤ 4096 for vectorized superoperators): dense
//! row-major storage, a cyclic Jacobi eigensolver for Hermitian matrices,
//! and a scaling-and-squaring Padé matrix exponential.

use crate::tolerances::{HERMITIAN_TOL, JACOBI_TOL};
use crate::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, Mul, Sub};

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParam("matrix dimensions must be >= 1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix with the given real diagonal.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = cr(e);
        }
        m
    }

    pub fn diag_complex(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// Column vector from a slice.
    pub fn col_vector(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Outer product v·w† as a square matrix.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(cr(s))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[p * m..(p + 1) * m];
                let dst = &mut out[i * m..(i + 1) * m];
                for j in 0..m {
                    dst[j] += a * row[j];
                }
            }
        }
        Self {
            rows: n,
            cols: m,
            data: out,
        }
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermitian symmetry, ‖m − m†‖_max.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_deviation() <= tol
    }

    /// (m + m†)/2, used to scrub round-off after long evolutions.
    pub fn hermitize(&self) -> Self {
        debug_assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * cr(0.5)
        })
    }

    /// Kronecker product, left factor on the slower index.
    pub fn kron(&self, other: &Self) -> Self {
        let (ar, ac, br, bc) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Self::zeros(ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        out.data[(i * br + k) * (ac * bc) + (j * bc + l)] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.cols, rhs.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Ordered subsystem dimensions of a tensor-product space.
///
/// Party 0 is the slowest-varying index of the computational basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParam("empty dimension list".into()));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParam(format!(
                "subsystem dimensions must be >= 2, got {:?}",
                dims
            )));
        }
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n])
    }

    pub fn single(d: usize) -> Self {
        Self(vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Checks that a square matrix of side `side` lives on this space.
    pub fn check_side(&self, side: usize) -> Result<()> {
        if self.total() != side {
            return Err(Error::DimMismatch(format!(
                "dims {:?} give total {} but matrix side is {}",
                self.0,
                self.total(),
                side
            )));
        }
        Ok(())
    }

    /// Row-major strides of the multi-index.
    fn strides(&self) -> Vec<usize> {
        let n = self.0.len();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.0[k + 1];
        }
        s
    }
}

/// Pauli matrices in the (|0⟩, |1⟩) basis.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
}

/// Kronecker product of a slice of factors, left to right.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    assert!(!factors.is_empty());
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kron(f);
    }
    acc
}

/// Reduced matrix over the kept subsystems; trace over the rest.
///
/// `keep` holds subsystem indices (0-based, order-preserving). The reduced
/// matrix keeps the relative ordering of the retained parties.
pub fn partial_trace(m: &ComplexMatrix, dims: &DimList, keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimMismatch("partial trace needs a square matrix".into()));
    }
    dims.check_side(m.rows())?;
    if keep.is_empty() {
        return Err(Error::InvalidParam("empty keep set in partial trace".into()));
    }
    let n = dims.len();
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::InvalidParam(format!(
            "keep index out of range: {:?} for {} subsystems",
            keep, n
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();

    let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
    let strides = dims.strides();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims.dims()[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims.dims()[k]).collect();
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    // Mixed-radix enumeration of kept row/col indices and the traced diagonal.
    let unrank = |rank: usize, radices: &[usize]| -> Vec<usize> {
        let mut digits = vec![0usize; radices.len()];
        let mut r = rank;
        for k in (0..radices.len()).rev() {
            digits[k] = r % radices[k];
            r /= radices[k];
        }
        digits
    };

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for row_r in 0..out_dim {
        let row_digits = unrank(row_r, &kept_dims);
        for col_r in 0..out_dim {
            let col_digits = unrank(col_r, &kept_dims);
            let mut acc = ZERO;
            for t in 0..traced_total {
                let t_digits = unrank(t, &traced_dims);
                let mut full_row = 0usize;
                let mut full_col = 0usize;
                for (pos, &sub) in keep_sorted.iter().enumerate() {
                    full_row += row_digits[pos] * strides[sub];
                    full_col += col_digits[pos] * strides[sub];
                }
                for (pos, &sub) in traced.iter().enumerate() {
                    full_row += t_digits[pos] * strides[sub];
                    full_col += t_digits[pos] * strides[sub];
                }
                acc += m.get(full_row, full_col);
            }
            out.set(row_r, col_r, acc);
        }
    }
    Ok(out)
}

/// Transpose applied only to the chosen subsystem's indices.
pub fn partial_transpose(m: &ComplexMatrix, dims: &DimList, party: usize) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimMismatch("partial transpose needs a square matrix".into()));
    }
    dims.check_side(m.rows())?;
    if party >= dims.len() {
        return Err(Error::InvalidParam(format!(
            "party {} out of range for {} subsystems",
            party,
            dims.len()
        )));
    }
    let stride = dims.strides()[party];
    let d_party = dims.dims()[party];
    let side = m.rows();
    let mut out = ComplexMatrix::zeros(side, side);
    for row in 0..side {
        let r_digit = (row / stride) % d_party;
        let r_rest = row - r_digit * stride;
        for col in 0..side {
            let c_digit = (col / stride) % d_party;
            let c_rest = col - c_digit * stride;
            // swap the party's row/col digits
            let new_row = r_rest + c_digit * stride;
            let new_col = c_rest + r_digit * stride;
            out.set(new_row, new_col, m.get(row, col));
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted descending and the matching unitary of column
/// eigenvectors, so that `V Λ V† = m` up to round-off. The sweep order is
/// fixed (row-major pivots) for reproducibility.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::DimMismatch("eigensolver needs a square matrix".into()));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian { dev });
    }
    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm_frobenius().max(1.0);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _sweep in 0..100 {
        if off(&a) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g = apq.norm();
                if g <= f64::MIN_POSITIVE * 16.0 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let phase = apq / cr(g); // e^{i φ}
                // rotation angle: tan(2θ) = 2g/(app − aqq), smaller root
                let zeta = (app - aqq) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                // J differs from identity in entries:
                //   J[p][p] = c, J[p][q] = −s e^{iφ}, J[q][p] = s e^{−iφ}, J[q][q] = c
                let s_f = cr(sth) * phase; // s e^{iφ}

                // A ← J† A J: rows p,q then columns p,q
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, cr(cth) * apj + s_f * aqj);
                    a.set(q, j, -s_f.conj() * apj + cr(cth) * aqj);
                }
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, cr(cth) * aip + s_f.conj() * aiq);
                    a.set(i, q, -s_f * aip + cr(cth) * aiq);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, cr(cth) * vip + s_f.conj() * viq);
                    v.set(i, q, -s_f * vip + cr(cth) * viq);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let eigenvalues: Vec<f64> = pairs.iter().map(|(e, _)| *e).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, pairs[j].1));
    Ok((eigenvalues, vectors))
}

/// Just the eigenvalues, descending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eig_hermitian(m).map(|(e, _)| e)
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Negative round-off eigenvalues are clamped to zero (tiny positive ones
/// must survive: they carry real weight, e.g. doubly-damped populations
/// ∝ γ⁴); anything below `-1e-8` is rejected.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (eigs, v) = eig_hermitian(m)?;
    let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -1e-8 {
        return Err(Error::NotPsd { min_eig: min });
    }
    let roots: Vec<Complex64> = eigs.iter().map(|&e| cr(e.max(0.0).sqrt())).collect();
    let lam = ComplexMatrix::diag_complex(&roots);
    Ok(&(&v * &lam) * &v.dagger())
}

/// Rebuild `V f(Λ) V†` from an eigendecomposition.
pub fn spectral_apply(eigs: &[f64], v: &ComplexMatrix, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
    let lam = ComplexMatrix::diag_complex(&eigs.iter().map(|&e| f(e)).collect::<Vec<_>>());
    &(v * &lam) * &v.dagger()
}

/// Matrix exponential by scaling and squaring with a [7/7] Padé approximant.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimMismatch("expm needs a square matrix".into()));
    }
    let n = m.rows();
    let norm = m.norm_one();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = m.scale_re(1.0 / f64::powi(2.0, s as i32));

    // Padé [7/7]: exp(a) ≈ (V − U)⁻¹ (V + U), U odd part, V even part.
    let mut coef = [0.0f64; 8];
    coef[0] = 1.0;
    for k in 1..8 {
        coef[k] = coef[k - 1] * (8.0 - k as f64) / (k as f64 * (15.0 - k as f64));
    }
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let id = ComplexMatrix::identity(n);
    let odd = &(&(&a6.scale_re(coef[7]) + &a4.scale_re(coef[5])) + &a2.scale_re(coef[3]))
        + &id.scale_re(coef[1]);
    let u = &a * &odd;
    let v = &(&(&a6.scale_re(coef[6]) + &a4.scale_re(coef[4])) + &a2.scale_re(coef[2]))
        + &id.scale_re(coef[0]);

    let num = &v + &u;
    let den = &v - &u;
    let mut x = solve(&den, &num)?;
    for _ in 0..s {
        x = &x * &x;
    }
    Ok(x)
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::DimMismatch("solve shape mismatch".into()));
    }
    let n = a.rows();
    let m = b.cols();
    let mut lu = a.clone();
    let mut x = b.clone();
    for k in 0..n {
        let (mut piv, mut piv_mag) = (k, lu.get(k, k).norm());
        for i in (k + 1)..n {
            let mag = lu.get(i, k).norm();
            if mag > piv_mag {
                piv = i;
                piv_mag = mag;
            }
        }
        if piv_mag == 0.0 {
            return Err(Error::Numerical("singular matrix in solve".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = lu.get(k, j);
                lu.set(k, j, lu.get(piv, j));
                lu.set(piv, j, t);
            }
            for j in 0..m {
                let t = x.get(k, j);
                x.set(k, j, x.get(piv, j));
                x.set(piv, j, t);
            }
        }
        let inv = ONE / lu.get(k, k);
        for i in (k + 1)..n {
            let factor = lu.get(i, k) * inv;
            if factor == ZERO {
                continue;
            }
            for j in k..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
            for j in 0..m {
                let v = x.get(i, j) - factor * x.get(k, j);
                x.set(i, j, v);
            }
        }
    }
    // back substitution
    for k in (0..n).rev() {
        let inv = ONE / lu.get(k, k);
        for j in 0..m {
            let mut acc = x.get(k, j);
            for p in (k + 1)..n {
                acc -= lu.get(k, p) * x.get(p, j);
            }
            x.set(k, j, acc * inv);
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{rng, random_hermitian, random_unit_vector};
    use rand::Rng;

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));

        let zz = sigma_z().kron(&sigma_z());
        let expect = ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]);
        assert!(zz.max_abs_diff(&expect) == 0.0);
    }

    #[test]
    fn kron_matches_index_formula() {
        let mut r = rng(7);
        let a = ComplexMatrix::from_fn(2, 2, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
        let b = ComplexMatrix::from_fn(3, 3, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
        let k = a.kron(&b);
        for i in 0..6 {
            for j in 0..6 {
                let expect = a.get(i / 3, j / 3) * b.get(i % 3, j % 3);
                assert!((k.get(i, j) - expect).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_associative() {
        let mut r = rng(11);
        let rand2 = |r: &mut rand::rngs::StdRng| {
            ComplexMatrix::from_fn(2, 2, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5))
        };
        let (a, b, cm) = (rand2(&mut r), rand2(&mut r), rand2(&mut r));
        let lhs = a.kron(&b).kron(&cm);
        let rhs = a.kron(&b.kron(&cm));
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn partial_trace_product_state() {
        let mut r = rng(3);
        let a = random_hermitian(&mut r, 2);
        let b = random_hermitian(&mut r, 3);
        let joint = a.kron(&b);
        let dims = DimList::new(vec![2, 3]).unwrap();
        let red = partial_trace(&joint, &dims, &[0]).unwrap();
        let expect = a.scale(b.trace());
        assert!(red.max_abs_diff(&expect) <= 1e-12);
    }

    #[test]
    fn partial_trace_brute_force() {
        // random 2⊗3 matrix against an explicit double-index sum
        let mut r = rng(5);
        let m = ComplexMatrix::from_fn(6, 6, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
        let dims = DimList::new(vec![2, 3]).unwrap();
        let red_b = partial_trace(&m, &dims, &[1]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = ZERO;
                for k in 0..2 {
                    acc += m.get(k * 3 + i, k * 3 + j);
                }
                assert!((red_b.get(i, j) - acc).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(6);
        let dims = DimList::new(vec![2, 3]).unwrap();
        assert!(partial_trace(&m, &dims, &[]).is_err());
        let bad = DimList::new(vec![2, 2]).unwrap();
        assert!(partial_trace(&m, &bad, &[0]).is_err());
    }

    #[test]
    fn partial_transpose_involutive_and_trace_preserving() {
        let mut r = rng(13);
        let m = ComplexMatrix::from_fn(6, 6, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
        let dims = DimList::new(vec![2, 3]).unwrap();
        let pt = partial_transpose(&m, &dims, 1).unwrap();
        let ptpt = partial_transpose(&pt, &dims, 1).unwrap();
        assert!(ptpt.max_abs_diff(&m) == 0.0);
        assert!((pt.trace() - m.trace()).norm() == 0.0);
    }

    #[test]
    fn partial_transpose_bell_min_eigenvalue() {
        // PT of the maximally entangled two-qubit projector has min eigenvalue −1/2
        let v = [cr(1.0 / 2f64.sqrt()), ZERO, ZERO, cr(1.0 / 2f64.sqrt())];
        let proj = ComplexMatrix::outer(&v, &v);
        let dims = DimList::qubits(2);
        let pt = partial_transpose(&proj, &dims, 0).unwrap();
        let eigs = eigvals_hermitian(&pt).unwrap();
        assert!((eigs.last().unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn eig_diagonal_and_pauli() {
        let (eigs, _) = eig_hermitian(&ComplexMatrix::diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eigs.len(), 3);
        assert!((eigs[0] - 3.0).abs() < 1e-14);
        assert!((eigs[1] - 2.0).abs() < 1e-14);
        assert!((eigs[2] - 1.0).abs() < 1e-14);

        let (eigs, _) = eig_hermitian(&sigma_x()).unwrap();
        assert!((eigs[0] - 1.0).abs() < 1e-14 && (eigs[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstruction_and_trace() {
        let mut r = rng(17);
        let m = random_hermitian(&mut r, 8);
        let (eigs, v) = eig_hermitian(&m).unwrap();
        let rebuilt = spectral_apply(&eigs, &v, cr);
        assert!(rebuilt.max_abs_diff(&m) <= 1e-9);
        let tr: f64 = eigs.iter().sum();
        assert!((tr - m.trace().re).abs() <= 1e-10);
        // unitary eigenvectors
        let vv = &v.dagger() * &v;
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(8)) <= 1e-10);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_psd_cases() {
        let id = ComplexMatrix::identity(3);
        assert!(sqrt_psd(&id).unwrap().max_abs_diff(&id) <= 1e-12);

        let m = ComplexMatrix::diag(&[4.0, 9.0]);
        let r = sqrt_psd(&m).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diag(&[2.0, 3.0])) <= 1e-12);

        let mut g = rng(23);
        let h = random_hermitian(&mut g, 6);
        let psd = &h * &h.dagger(); // PSD by construction
        let root = sqrt_psd(&psd).unwrap();
        assert!((&root * &root).max_abs_diff(&psd) <= 1e-9);

        let neg = ComplexMatrix::diag(&[1.0, -0.5]);
        assert!(matches!(sqrt_psd(&neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn expm_zero_and_diagonal() {
        let z = ComplexMatrix::zeros(3, 3);
        assert!(expm(&z).unwrap().max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-14);

        let theta = 0.7;
        let m = sigma_z().scale(c(0.0, theta));
        let e = expm(&m).unwrap();
        let expect = ComplexMatrix::diag_complex(&[c(0.0, theta).exp(), c(0.0, -theta).exp()]);
        assert!(e.max_abs_diff(&expect) <= 1e-12);
    }

    #[test]
    fn expm_unitary_for_hermitian_generator() {
        let mut r = rng(29);
        for _ in 0..5 {
            let h = random_hermitian(&mut r, 5);
            let u = expm(&h.scale(c(0.0, -1.0))).unwrap();
            let uu = &u.dagger() * &u;
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(5)) <= 1e-10);
        }
    }

    #[test]
    fn expm_matches_taylor_on_random_matrix() {
        let mut r = rng(31);
        let m = ComplexMatrix::from_fn(4, 4, |_, _| {
            c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5)
        })
        .scale_re(2.0);
        let e = expm(&m).unwrap();
        // plain Taylor with many terms as the oracle
        let mut acc = ComplexMatrix::identity(4);
        let mut term = ComplexMatrix::identity(4);
        for k in 1..60 {
            term = term.matmul(&m).scale_re(1.0 / k as f64);
            acc = &acc + &term;
        }
        assert!(e.max_abs_diff(&acc) <= 1e-10);
    }

    #[test]
    fn psd_eigenvalues_stay_above_clamp() {
        let mut r = rng(37);
        for _ in 0..10 {
            let v = random_unit_vector(&mut r, 8);
            let proj = ComplexMatrix::outer(&v, &v);
            let eigs = eigvals_hermitian(&proj).unwrap();
            assert!(eigs.iter().all(|&e| e >= -1e-10));
        }
    }
}
