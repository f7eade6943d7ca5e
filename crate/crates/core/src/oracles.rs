//! Reference computations that avoid the conic solver: random members of a
//! section, sandwich bounds for base norms, and a Bloch-ball scan for the
//! conditional min-entropy of a qubit input.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{c, HermitianMatrix};
use crate::norms::{self, ExtendedReal};
use crate::random;
use crate::section::Section;

const WALK_STEPS: usize = 4;

#[derive(Debug, Clone)]
pub struct SampleSet {
    pub section: Section,
    pub points: Vec<HermitianMatrix>,
    pub seed: u64,
}

/// Largest `τ ≥ 0` with `x + τh ⪰ 0` for positive definite `x`, computed
/// from the spectrum of `x^{-1/2} h x^{-1/2}`.
fn chord(x: &HermitianMatrix, h: &HermitianMatrix) -> Result<(f64, f64)> {
    let w = x.pinv_sqrt()?;
    let ev = h.sandwich(&w).eigenvalues()?;
    let (hi, lo) = (ev[0], ev[ev.len() - 1]);
    let forward = if lo < 0.0 { -1.0 / lo } else { f64::INFINITY };
    let backward = if hi > 0.0 { 1.0 / hi } else { f64::INFINITY };
    Ok((backward, forward))
}

/// `n` members of `B` by a short hit-and-run walk from the anchor along
/// random directions in `J ∩ b̃^⊥`. Sample `i` depends only on `(seed, i)`.
pub fn sample_section(section: &Section, n: usize, seed: u64) -> Result<SampleSet> {
    let dim = section.working_dim();
    let tangent = section.tangent_svec();
    let anchor = section.anchor().clone();
    let points = (0..n)
        .map(|i| {
            let mut r = random::stream(seed, i as u64);
            let mut x = anchor.clone();
            if tangent.ncols() == 0 {
                return Ok(section.expand(&x));
            }
            for _ in 0..WALK_STEPS {
                let g = DVector::from_fn(tangent.ncols(), |_, _| random::gaussian(&mut r));
                let v = &tangent * g;
                let h = HermitianMatrix::from_svec(dim, v.as_slice())?;
                let (back, fwd) = chord(&x, &h)?;
                if !back.is_finite() || !fwd.is_finite() {
                    return Err(Error::NumericalFailure("section is unbounded along a direction".into()));
                }
                // stay strictly inside so that later steps keep a PD start
                let u: f64 = r.random_range(0.0..1.0);
                let tau = -back + u * (back + fwd);
                let shrink = 1.0 - 1e-9;
                x = x.axpy(tau * shrink, &h);
            }
            Ok(section.expand(&x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleSet {
        section: section.clone(),
        points,
        seed,
    })
}

/// `max_{b̃} ‖b̃^{1/2} x b̃^{1/2}‖₁` over sampled points of the dual section.
pub fn norm_lower_bound(x: &HermitianMatrix, dual_samples: &SampleSet) -> Result<f64> {
    let mut best = 0.0_f64;
    for bt in &dual_samples.points {
        best = best.max(norms::base_norm_singleton(bt, x)?);
    }
    Ok(best)
}

/// `min_b ‖b^{-1/2} x b^{-1/2}‖` over sampled points of the section; may be
/// `+∞` when no sample covers the support of `x`.
pub fn norm_upper_bound(x: &HermitianMatrix, samples: &SampleSet) -> Result<f64> {
    let mut best = f64::INFINITY;
    for b in &samples.points {
        if let ExtendedReal::Finite(v) = norms::order_unit_norm_singleton(b, x)? {
            best = best.min(v);
        }
    }
    Ok(best)
}

/// `inv_sqrt(ρ)` for a qubit Bloch vector strictly inside the ball.
fn qubit_inv_sqrt(v: [f64; 3]) -> DMatrix<Complex64> {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (lp, lm) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
    let (ap, am) = (lp.powf(-0.5), lm.powf(-0.5));
    // ρ^{-1/2} = ½(ap + am) I + ½(ap − am) n̂·σ
    let s = 0.5 * (ap + am);
    let t = if r > 0.0 { 0.5 * (ap - am) / r } else { 0.0 };
    DMatrix::from_row_slice(
        2,
        2,
        &[
            c(s + t * v[2], 0.0),
            c(t * v[0], -t * v[1]),
            c(t * v[0], t * v[1]),
            c(s - t * v[2], 0.0),
        ],
    )
}

fn qubit_state(v: [f64; 3]) -> HermitianMatrix {
    HermitianMatrix::from_matrix(DMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 * (1.0 + v[2]), 0.0),
            c(0.5 * v[0], -0.5 * v[1]),
            c(0.5 * v[0], 0.5 * v[1]),
            c(0.5 * (1.0 - v[2]), 0.0),
        ],
    ))
    .expect("square")
}

/// `H_min(K|H)_σ` by scanning `ρ` over the grid `{−1 + 2i/r}³` inside the
/// Bloch ball (`dH = 2`): `−log₂ min_ρ min{λ : σ ⪯ λ I ⊗ ρ}`. Approaches the
/// true value from below as `resolution` grows.
pub fn grid_hmin(sigma: &HermitianMatrix, dim_k: usize, resolution: usize) -> Result<f64> {
    if sigma.dim() != 2 * dim_k {
        return Err(Error::Shape("grid scan supports a qubit H only (σ on K ⊗ C²)".into()));
    }
    if resolution == 0 {
        return Err(Error::Input("resolution must be positive".into()));
    }
    let step = 2.0 / resolution as f64;
    let coords: Vec<f64> = (0..=resolution).map(|i| -1.0 + step * i as f64).collect();
    let ik = HermitianMatrix::identity(dim_k);
    let best = coords
        .par_iter()
        .map(|&x| {
            let mut best = f64::INFINITY;
            for &y in &coords {
                for &z in &coords {
                    let r2 = x * x + y * y + z * z;
                    if r2 > 1.0 + 1e-12 {
                        continue;
                    }
                    let v = [x, y, z];
                    let lambda = if r2 < 1.0 - 1e-12 {
                        let w = qubit_inv_sqrt(v);
                        let big = kron_identity(dim_k, &w);
                        let m = &big * sigma.matrix() * &big;
                        m.symmetric_eigenvalues().iter().fold(f64::NEG_INFINITY, |a, &l| a.max(l))
                    } else {
                        let b = ik.tensor(&qubit_state(v));
                        match norms::order_unit_norm_singleton(&b, sigma) {
                            Ok(ExtendedReal::Finite(l)) => l,
                            _ => f64::INFINITY,
                        }
                    };
                    best = best.min(lambda);
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NumericalFailure("no grid point dominates σ".into()));
    }
    Ok(-best.log2())
}

fn kron_identity(d: usize, w: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = w.nrows();
    let mut out = DMatrix::zeros(d * n, d * n);
    for k in 0..d {
        out.view_mut((k * n, k * n), (n, n)).copy_from(w);
    }
    out
}
