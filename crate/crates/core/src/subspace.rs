//! Real subspaces of `svec` coordinates stored as matrices with orthonormal
//! columns.

use nalgebra::{DMatrix, DVector};

/// Relative drop tolerance for linearly dependent input vectors.
pub const DROP_TOL: f64 = 1e-9;

/// Orthonormal basis of `span(existing ∪ vectors)` that extends `existing`
/// (assumed orthonormal). Vectors whose residual after two Gram–Schmidt
/// passes falls below `DROP_TOL` times their norm are dropped.
pub fn extend_orthonormal(
    existing: &DMatrix<f64>,
    vectors: impl IntoIterator<Item = DVector<f64>>,
) -> DMatrix<f64> {
    let n = existing.nrows();
    let mut cols: Vec<DVector<f64>> = existing.column_iter().map(|c| c.into_owned()).collect();
    for mut v in vectors {
        assert_eq!(v.len(), n, "vector length mismatch");
        let norm0 = v.norm();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &cols {
                let d = q.dot(&v);
                v.axpy(-d, q, 1.0);
            }
        }
        let norm = v.norm();
        if norm > DROP_TOL * norm0 {
            cols.push(v / norm);
        }
    }
    from_columns(n, &cols)
}

pub fn orthonormalize(n: usize, vectors: impl IntoIterator<Item = DVector<f64>>) -> DMatrix<f64> {
    extend_orthonormal(&DMatrix::zeros(n, 0), vectors)
}

pub fn from_columns(n: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Orthonormal basis of the orthogonal complement of the column space of
/// `q` (orthonormal columns), read off a full Householder QR.
pub fn complement(q: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = q.shape();
    if m == 0 {
        return DMatrix::identity(n, n);
    }
    if m >= n {
        return DMatrix::zeros(n, 0);
    }
    let qr = q.clone().qr();
    let mut full_t = DMatrix::<f64>::identity(n, n);
    qr.q_tr_mul(&mut full_t);
    // rows m.. of Qᵀ are the complement directions
    full_t.rows(m, n - m).transpose()
}

/// Coordinates of the orthogonal projection of `v` onto `span(q)`.
pub fn coefficients(q: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    q.tr_mul(v)
}

pub fn project(q: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    q * q.tr_mul(v)
}

/// Orthonormal basis of `span(q) ∩ g^⊥`.
pub fn restrict_orthogonal(q: &DMatrix<f64>, g: &DVector<f64>) -> DMatrix<f64> {
    let m = q.ncols();
    let a = coefficients(q, g);
    let norm = a.norm();
    if norm == 0.0 {
        return q.clone();
    }
    let a1 = DMatrix::from_column_slice(m, 1, (a / norm).as_slice());
    q * complement(&a1)
}

/// Null space of `a` (right singular vectors with negligible singular
/// values), as orthonormal columns.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // work on the n×n Gram matrix so that short-wide inputs still yield
    // all n right singular vectors
    let g = a.tr_mul(a);
    let eig = g.symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let cut = (rel_tol * rel_tol) * max.max(1e-300);
    let cols: Vec<DVector<f64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| **l <= cut)
        .map(|(j, _)| eig.eigenvectors.column(j).into_owned())
        .collect();
    orthonormalize(n, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthogonal() {
        let v = DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]);
        let q = orthonormalize(4, [v]);
        let c = complement(&q);
        assert_eq!(c.ncols(), 3);
        assert!((q.tr_mul(&c)).norm() < 1e-14);
        assert!((c.tr_mul(&c) - DMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn dependent_vectors_are_dropped() {
        let a = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let b = DVector::from_vec(vec![2.0, 4.0, 6.0 + 1e-13]);
        let q = orthonormalize(3, [a, b]);
        assert_eq!(q.ncols(), 1);
    }

    #[test]
    fn restriction_removes_one_direction() {
        let q = DMatrix::<f64>::identity(3, 3);
        let g = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        let r = restrict_orthogonal(&q, &g);
        assert_eq!(r.ncols(), 2);
        assert!(r.tr_mul(&g).norm() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_one() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 1.0]);
        let n = null_space(&a, 1e-9);
        assert_eq!(n.ncols(), 2);
        assert!((&a * &n).norm() < 1e-12);
    }
}
