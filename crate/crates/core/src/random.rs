//! Seeded random generators for matrices, states and channels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::choi::KrausMap;
use crate::hermitian::{c, HermitianMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` of `seed`; the same `(seed, index)` always
/// reproduces the same draws regardless of how many other streams exist.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng), gaussian(rng)))
}

/// Hermitian matrix with Gaussian entries (GUE up to scaling).
pub fn hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_matrix(ginibre(rng, n, n)).expect("square")
}

/// Hermitian matrix with unit Frobenius norm.
pub fn unit_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let h = hermitian(rng, n);
    let f = h.frobenius_norm();
    h.scale(1.0 / f)
}

/// Full-rank Wishart-type PSD matrix `G G*`.
pub fn psd(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let g = ginibre(rng, n, n);
    HermitianMatrix::from_matrix(&g * g.adjoint()).expect("square")
}

/// Random density matrix of the given rank.
pub fn density_with_rank(rng: &mut impl Rng, n: usize, rank: usize) -> HermitianMatrix {
    let g = ginibre(rng, n, rank.max(1));
    let w = HermitianMatrix::from_matrix(&g * g.adjoint()).expect("square");
    let t = w.trace();
    w.scale(1.0 / t)
}

pub fn density(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    density_with_rank(rng, n, n)
}

/// Unit vector drawn uniformly from the sphere.
pub fn pure_state(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-distributed unitary via QR of a Ginibre matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> DMatrix<Complex64> {
    let g = ginibre(rng, n, n);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Random channel `B(C^din) → B(C^dout)` with `count` Kraus operators,
/// obtained by cutting a random isometry into blocks.
pub fn channel(rng: &mut impl Rng, din: usize, dout: usize, count: usize) -> KrausMap {
    // fewer than ⌈din/dout⌉ operators cannot be trace preserving
    let count = count.max(din.div_ceil(dout));
    let g = ginibre(rng, count * dout, din);
    let gram = HermitianMatrix::from_matrix(g.adjoint() * &g).expect("square");
    let inv_sqrt = gram.pinv_sqrt().expect("gram matrix is PSD");
    let v = g * inv_sqrt.matrix();
    let ops = (0..count)
        .map(|k| v.rows(k * dout, dout).into_owned())
        .collect();
    KrausMap::new(ops).expect("consistent shapes")
}

/// Random completely positive map with no trace condition.
pub fn cp_map(rng: &mut impl Rng, din: usize, dout: usize, count: usize) -> KrausMap {
    KrausMap::new((0..count).map(|_| ginibre(rng, dout, din) * c(0.5, 0.0)).collect())
        .expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::choi_of_kraus;

    #[test]
    fn channels_are_trace_preserving_even_with_few_operators() {
        let mut r = rng(0);
        for (din, dout) in [(3, 1), (4, 1), (5, 2), (2, 3)] {
            let x = choi_of_kraus(&channel(&mut r, din, dout, 1));
            assert!(x.is_channel(1e-10).unwrap(), "{din}→{dout}");
        }
    }
}
