//! Dense complex hermitian matrices with subsystem metadata.
//!
//! Everything downstream works on [`HermitianMatrix`]: spectra, trace and
//! operator norms, functional calculus restricted to supports, tensor
//! products and partial traces. Subsystems are listed in the order they
//! appear in the tensor product, so a matrix on `K ⊗ H` has dims `[dK, dH]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative asymmetry above which strict construction refuses a matrix.
pub const STRICT_ASYMMETRY: f64 = 1e-8;

/// Relative eigenvalue cutoff used for supports and pseudo-inverses.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

const EIG_MAX_ITER: usize = 100_000;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A hermitian matrix, stored exactly hermitized.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
    dims: Vec<usize>,
}

/// Eigendecomposition `x = U diag(λ) U*` with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    /// Rebuilds `U f(Λ) U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let u = &self.eigenvectors;
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let col = u.column(k);
            for j in 0..n {
                let cj = col[j].conj() * w;
                for i in 0..n {
                    out[(i, j)] += col[i] * cj;
                }
            }
        }
        HermitianMatrix::from_parts(out, Vec::new())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|l| l)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Absolute cutoff `1e-10 · max(1, λ_max)` used for supports.
    pub fn cutoff(&self) -> f64 {
        SUPPORT_CUTOFF * self.max().abs().max(1.0)
    }
}

impl HermitianMatrix {
    fn from_parts(mut data: DMatrix<Complex64>, dims: Vec<usize>) -> Self {
        hermitize_in_place(&mut data);
        HermitianMatrix { data, dims }
    }

    /// Hermitizes `m` as `(m + m*)/2`. Fails only on a non-square input.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self::from_parts(m, Vec::new()))
    }

    /// Like [`from_matrix`](Self::from_matrix) but rejects inputs whose
    /// asymmetry exceeds [`STRICT_ASYMMETRY`] relative to the largest entry.
    pub fn from_matrix_strict(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let asym = asymmetry(&m);
        let limit = STRICT_ASYMMETRY * scale;
        if asym > limit {
            return Err(Error::NotHermitian {
                asymmetry: asym,
                limit,
            });
        }
        Ok(Self::from_parts(m, Vec::new()))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("rows must form a square matrix".into()));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| c(rows[i][j], 0.0)))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            data: DMatrix::zeros(n, n),
            dims: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix {
            data: DMatrix::identity(n, n),
            dims: Vec::new(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            data[(i, i)] = c(v, 0.0);
        }
        HermitianMatrix {
            data,
            dims: Vec::new(),
        }
    }

    /// The rank-one operator `|v⟩⟨v|` (no normalization).
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        let data = DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj());
        Self::from_parts(data, Vec::new())
    }

    /// Attaches subsystem dimensions; their product must equal `dim`.
    pub fn with_dims(mut self, dims: &[usize]) -> Result<Self> {
        check_dims(self.dim(), dims)?;
        self.dims = dims.to_vec();
        Ok(self)
    }


    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Subsystem dimensions; empty for a single unstructured system.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Subsystem dimensions with the single-system case made explicit.
    pub fn effective_dims(&self) -> Vec<usize> {
        if self.dims.is_empty() {
            vec![self.dim()]
        } else {
            self.dims.clone()
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].re).sum()
    }

    /// Trace inner product `Tr(x y)`.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner(self).max(0.0).sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix {
            data: &self.data * c(s, 0.0),
            dims: self.dims.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianMatrix {
            data: &self.data + &other.data,
            dims: merge_dims(&self.dims, &other.dims),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianMatrix {
            data: &self.data - &other.data,
            dims: merge_dims(&self.dims, &other.dims),
        }
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        HermitianMatrix {
            data: &self.data + &other.data * c(s, 0.0),
            dims: merge_dims(&self.dims, &other.dims),
        }
    }

    /// Plain matrix product; the result is generally not hermitian.
    pub fn mul(&self, other: &Self) -> DMatrix<Complex64> {
        &self.data * &other.data
    }

    /// `a x a*` for an arbitrary (possibly rectangular) `a`.
    pub fn congruence(&self, a: &DMatrix<Complex64>) -> Self {
        Self::from_parts(a * &self.data * a.adjoint(), Vec::new())
    }

    /// `s x s` for hermitian `s`, keeping the subsystem structure.
    pub fn sandwich(&self, s: &HermitianMatrix) -> Self {
        let mut out = Self::from_parts(&s.data * &self.data * &s.data, Vec::new());
        out.dims = self.dims.clone();
        out
    }

    pub fn eig(&self) -> Result<Spectrum> {
        let n = self.dim();
        if n == 0 {
            return Ok(Spectrum {
                eigenvalues: Vec::new(),
                eigenvectors: DMatrix::zeros(0, 0),
            });
        }
        let se = self
            .data
            .clone()
            .try_symmetric_eigen(f64::EPSILON, EIG_MAX_ITER)
            .ok_or_else(|| {
                Error::NumericalFailure(format!(
                    "hermitian eigensolver did not converge (n = {n})"
                ))
            })?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
        let eigenvalues = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
        Ok(Spectrum {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig()?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.min())
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.max())
    }

    /// `Tr |x|`.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues.iter().map(|l| l.abs()).sum())
    }

    /// Largest absolute eigenvalue.
    pub fn op_norm(&self) -> Result<f64> {
        let s = self.eig()?;
        Ok(s.max().abs().max(s.min().abs()))
    }

    /// True iff `λ_min ≥ −tol·(1 + ‖x‖)`.
    pub fn psd_check(&self, tol: f64) -> Result<bool> {
        let s = self.eig()?;
        let norm = s.max().abs().max(s.min().abs());
        Ok(s.min() >= -tol * (1.0 + norm))
    }

    /// Orthogonal projection onto eigenspaces with eigenvalue above the
    /// default cutoff `1e-10 · max(1, λ_max)`.
    pub fn support_projection(&self) -> Result<Self> {
        let s = self.eig()?;
        let cut = s.cutoff();
        Ok(self.keep_dims(s.map(|l| if l > cut { 1.0 } else { 0.0 })))
    }

    pub fn support_projection_with_cutoff(&self, cutoff: f64) -> Result<Self> {
        let s = self.eig()?;
        Ok(self.keep_dims(s.map(|l| if l > cutoff { 1.0 } else { 0.0 })))
    }

    /// Orthonormal basis (columns) of the support.
    pub fn support_frame(&self) -> Result<DMatrix<Complex64>> {
        let s = self.eig()?;
        let cut = s.cutoff();
        let k = s.eigenvalues.iter().filter(|&&l| l > cut).count();
        Ok(s.eigenvectors.columns(0, k).into_owned())
    }

    /// `(|x|, x₊, x₋)` with `x = x₊ − x₋`, `|x| = x₊ + x₋` and `x₊x₋ = 0`.
    pub fn abs_pos_neg(&self) -> Result<(Self, Self, Self)> {
        let s = self.eig()?;
        Ok((
            self.keep_dims(s.map(f64::abs)),
            self.keep_dims(s.map(|l| l.max(0.0))),
            self.keep_dims(s.map(|l| (-l).max(0.0))),
        ))
    }

    /// Square root of a PSD matrix. Eigenvalues in `[−tol, 0)` are clipped;
    /// anything more negative is a domain error.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let s = self.eig()?;
        self.check_psd_spectrum(&s)?;
        Ok(self.keep_dims(s.map(|l| l.max(0.0).sqrt())))
    }

    /// Pseudo-inverse square root: `λ^{-1/2}` on the support, zero elsewhere.
    pub fn pinv_sqrt(&self) -> Result<Self> {
        let s = self.eig()?;
        self.check_psd_spectrum(&s)?;
        let cut = s.cutoff();
        Ok(self.keep_dims(s.map(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 })))
    }

    /// Moore–Penrose pseudo-inverse with the default support cutoff.
    pub fn pinv(&self) -> Result<Self> {
        let s = self.eig()?;
        let cut = s.cutoff();
        Ok(self.keep_dims(s.map(|l| if l.abs() > cut { 1.0 / l } else { 0.0 })))
    }

    fn check_psd_spectrum(&self, s: &Spectrum) -> Result<()> {
        let norm = s.max().abs().max(s.min().abs());
        let tol = 1e-9 * (1.0 + norm);
        if s.min() < -tol {
            return Err(Error::Domain(format!(
                "matrix is not positive semidefinite (min eigenvalue {:.3e})",
                s.min()
            )));
        }
        Ok(())
    }

    fn keep_dims(&self, mut m: Self) -> Self {
        m.dims = self.dims.clone();
        m
    }

    /// Kronecker product `x ⊗ y`; subsystem lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.effective_dims();
        dims.extend(other.effective_dims());
        HermitianMatrix {
            data: self.data.kronecker(&other.data),
            dims,
        }
    }

    /// Traces out subsystem `index` of `dims()`.
    pub fn partial_trace(&self, index: usize) -> Result<Self> {
        if self.dims.is_empty() {
            return Err(Error::Shape(
                "partial trace needs subsystem dimensions".into(),
            ));
        }
        if index >= self.dims.len() {
            return Err(Error::Shape(format!(
                "subsystem index {index} out of range for dims {:?}",
                self.dims
            )));
        }
        let left: usize = self.dims[..index].iter().product();
        let mid = self.dims[index];
        let right: usize = self.dims[index + 1..].iter().product();
        let n = left * right;
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for l1 in 0..left {
            for r1 in 0..right {
                let row = l1 * right + r1;
                for l2 in 0..left {
                    for r2 in 0..right {
                        let col = l2 * right + r2;
                        let mut acc = c(0.0, 0.0);
                        for m in 0..mid {
                            acc += self.data[((l1 * mid + m) * right + r1, (l2 * mid + m) * right + r2)];
                        }
                        out[(row, col)] = acc;
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(index);
        if dims.len() == 1 {
            dims.clear();
        }
        Ok(Self::from_parts(out, dims))
    }

    /// Reorders subsystems: new subsystem `i` is old subsystem `perm[i]`.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let dims = self.effective_dims();
        let k = dims.len();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Shape(format!(
                "{perm:?} is not a permutation of {k} subsystems"
            )));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
        let n = self.dim();
        // old linear index for every new linear index
        let mut map = vec![0usize; n];
        let mut old_strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            old_strides[i] = old_strides[i + 1] * dims[i + 1];
        }
        let mut digits = vec![0usize; k];
        for (idx, slot) in map.iter_mut().enumerate() {
            let mut rem = idx;
            for i in (0..k).rev() {
                digits[i] = rem % new_dims[i];
                rem /= new_dims[i];
            }
            *slot = (0..k).map(|i| digits[i] * old_strides[perm[i]]).sum();
        }
        let data = DMatrix::from_fn(n, n, |i, j| self.data[(map[i], map[j])]);
        Ok(HermitianMatrix {
            data,
            dims: new_dims,
        })
    }

    /// Entrywise transpose in the computational basis.
    pub fn transpose(&self) -> Self {
        HermitianMatrix {
            data: self.data.transpose(),
            dims: self.dims.clone(),
        }
    }

    /// Real coordinates in which the trace inner product is Euclidean:
    /// diagonal entries, then `√2·Re` and `√2·Im` of each upper entry.
    pub fn to_svec(&self) -> Vec<f64> {
        let n = self.dim();
        let mut v = Vec::with_capacity(n * n);
        svec_into(&self.data, &mut v);
        v
    }

    pub fn from_svec(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != n * n {
            return Err(Error::Shape(format!(
                "svec of length {} does not describe a {n}x{n} matrix",
                v.len()
            )));
        }
        Ok(HermitianMatrix {
            data: smat(n, v),
            dims: Vec::new(),
        })
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            dims: self.dims.clone(),
            matrix: (0..self.dim())
                .map(|i| {
                    (0..self.dim())
                        .map(|j| {
                            let z = self.data[(i, j)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Parses the JSON matrix record. With `strict`, asymmetric input is
    /// rejected rather than hermitized.
    pub fn from_record(record: &MatrixRecord, strict: bool) -> Result<Self> {
        let n = record.matrix.len();
        if record.matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Input(
                "field \"matrix\": rows must form a square matrix".into(),
            ));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = record.matrix[i][j];
            c(re, im)
        });
        let h = if strict {
            Self::from_matrix_strict(m)?
        } else {
            Self::from_matrix(m)?
        };
        if record.dims.is_empty() {
            Ok(h)
        } else {
            h.with_dims(&record.dims)
                .map_err(|e| Error::Input(format!("field \"dims\": {e}")))
        }
    }
}

/// On-disk matrix format: `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    #[serde(default)]
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl Serialize for HermitianMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let record = MatrixRecord::deserialize(deserializer)?;
        HermitianMatrix::from_record(&record, true).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn svec_into(m: &DMatrix<Complex64>, out: &mut Vec<f64>) {
    let n = m.nrows();
    out.clear();
    for i in 0..n {
        out.push(m[(i, i)].re);
    }
    let r2 = std::f64::consts::SQRT_2;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m[(i, j)];
            out.push(r2 * z.re);
            out.push(r2 * z.im);
        }
    }
}

pub(crate) fn smat(n: usize, v: &[f64]) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c(v[i], 0.0);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = c(h * v[k], h * v[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

fn hermitize_in_place(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = c(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
}

fn asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_dims(dim: usize, dims: &[usize]) -> Result<()> {
    if dims.iter().any(|&d| d == 0) {
        return Err(Error::Shape(format!("subsystem dims {dims:?} contain zero")));
    }
    if !dims.is_empty() && dims.iter().product::<usize>() != dim {
        return Err(Error::Shape(format!(
            "subsystem dims {dims:?} do not multiply to {dim}"
        )));
    }
    Ok(())
}

fn merge_dims(a: &[usize], b: &[usize]) -> Vec<usize> {
    if a.is_empty() {
        b.to_vec()
    } else {
        a.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn plus() -> HermitianMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        HermitianMatrix::projector(&[c(h, 0.0), c(h, 0.0)])
    }

    fn zero_minus_plus() -> HermitianMatrix {
        HermitianMatrix::diag(&[1.0, 0.0]).sub(&plus())
    }

    #[test]
    fn eig_identity_and_diagonal() {
        assert_eq!(HermitianMatrix::identity(2).eigenvalues().unwrap(), vec![1.0, 1.0]);
        let ev = HermitianMatrix::diag(&[3.0, -1.0]).eigenvalues().unwrap();
        assert_abs_diff_eq!(ev[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn eig_of_zero_minus_plus_matches_characteristic_polynomial() {
        // [[1/2, -1/2], [-1/2, -1/2]]: λ² − 1/2 = 0
        let ev = zero_minus_plus().eigenvalues().unwrap();
        let r = 0.5_f64.sqrt();
        assert_abs_diff_eq!(ev[0], r, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], -r, epsilon = 1e-14);
    }

    #[test]
    fn norms_on_small_cases() {
        assert_abs_diff_eq!(HermitianMatrix::identity(3).trace_norm().unwrap(), 3.0, epsilon = 1e-14);
        assert_eq!(HermitianMatrix::zeros(3).trace_norm().unwrap(), 0.0);
        assert_abs_diff_eq!(zero_minus_plus().trace_norm().unwrap(), 2.0_f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(HermitianMatrix::identity(2).op_norm().unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(HermitianMatrix::diag(&[2.0, -5.0]).op_norm().unwrap(), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(zero_minus_plus().op_norm().unwrap(), 0.5_f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn positive_and_negative_parts() {
        assert!(HermitianMatrix::identity(4).psd_check(1e-12).unwrap());
        assert!(!HermitianMatrix::diag(&[1.0, -1e-3]).psd_check(1e-12).unwrap());
        let (abs, pos, neg) = HermitianMatrix::diag(&[2.0, -3.0]).abs_pos_neg().unwrap();
        assert!(abs.sub(&HermitianMatrix::diag(&[2.0, 3.0])).max_abs_entry() < 1e-14);
        assert!(pos.sub(&HermitianMatrix::diag(&[2.0, 0.0])).max_abs_entry() < 1e-14);
        assert!(neg.sub(&HermitianMatrix::diag(&[0.0, 3.0])).max_abs_entry() < 1e-14);
    }

    #[test]
    fn support_projection_respects_cutoff() {
        let p = HermitianMatrix::diag(&[1.0, 0.0, 1e-14]).support_projection().unwrap();
        assert!(p.sub(&HermitianMatrix::diag(&[1.0, 0.0, 0.0])).max_abs_entry() < 1e-14);
    }

    #[test]
    fn square_roots() {
        let r = HermitianMatrix::identity(2).scale(4.0).sqrt_psd().unwrap();
        assert!(r.sub(&HermitianMatrix::identity(2).scale(2.0)).max_abs_entry() < 1e-14);
        let p = HermitianMatrix::diag(&[4.0, 0.0]).pinv_sqrt().unwrap();
        assert!(p.sub(&HermitianMatrix::diag(&[0.5, 0.0])).max_abs_entry() < 1e-14);
        let s = plus().sqrt_psd().unwrap();
        assert!(s.sub(&plus()).max_abs_entry() < 1e-12);
        assert!(matches!(
            HermitianMatrix::diag(&[1.0, -0.5]).sqrt_psd(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn partial_traces() {
        let eye = HermitianMatrix::identity(6).with_dims(&[3, 2]).unwrap();
        let h = eye.partial_trace(0).unwrap();
        assert!(h.sub(&HermitianMatrix::identity(2).scale(3.0)).max_abs_entry() < 1e-14);

        // Σ_ij |i⟩⟨j| ⊗ |i⟩⟨j|
        let psi = HermitianMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .with_dims(&[2, 2])
            .unwrap();
        let r = psi.partial_trace(0).unwrap();
        assert!(r.sub(&HermitianMatrix::identity(2)).max_abs_entry() < 1e-14);

        assert!(matches!(
            HermitianMatrix::identity(4).partial_trace(0),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn transpose_is_entrywise() {
        let y = HermitianMatrix::from_matrix(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let t = y.transpose();
        assert_eq!(t.get(0, 1), c(0.0, 1.0));
        assert_eq!(t.get(1, 0), c(0.0, -1.0));
    }

    #[test]
    fn strict_mode_rejects_asymmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.4, 0.0), c(1.0, 0.0)]);
        assert!(HermitianMatrix::from_matrix_strict(m.clone()).is_err());
        let h = HermitianMatrix::from_matrix(m).unwrap();
        assert_abs_diff_eq!(h.get(0, 1).re, 0.45, epsilon = 1e-15);
    }

    #[test]
    fn svec_preserves_inner_product() {
        let a = zero_minus_plus();
        let b = HermitianMatrix::from_matrix(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.1, 0.7), c(0.1, -0.7), c(-2.0, 0.0)],
        ))
        .unwrap();
        let dot: f64 = a.to_svec().iter().zip(b.to_svec()).map(|(x, y)| x * y).sum();
        assert_abs_diff_eq!(dot, a.inner(&b), epsilon = 1e-14);
        let back = HermitianMatrix::from_svec(2, &b.to_svec()).unwrap();
        assert!(back.sub(&b).max_abs_entry() < 1e-15);
    }

    #[test]
    fn permutation_swaps_tensor_factors() {
        let a = HermitianMatrix::diag(&[1.0, 2.0]);
        let b = HermitianMatrix::diag(&[3.0, 5.0, 7.0]);
        let ab = a.tensor(&b);
        let ba = ab.permute_subsystems(&[1, 0]).unwrap();
        assert!(ba.sub(&b.tensor(&a)).max_abs_entry() < 1e-15);
        assert_eq!(ba.dims(), &[3, 2]);
    }

    #[test]
    fn json_record_round_trip() {
        let x = zero_minus_plus().with_dims(&[2]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        let y: HermitianMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
