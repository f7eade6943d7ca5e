//! Choi correspondence between linear maps `B(H) → B(K)` and matrices on
//! `K ⊗ H`.
//!
//! The Choi matrix is `X = (Φ ⊗ id)(Ψ)` with the unnormalized
//! `Ψ = |ψ⟩⟨ψ|`, `|ψ⟩ = Σ_i |i⟩⊗|i⟩`, and the map is recovered as
//! `Φ(a) = Tr_H[(I_K ⊗ aᵀ) X]`. Transposes are taken in the computational
//! basis.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{c, HermitianMatrix};

/// Choi matrix of a hermitian map, with subsystems ordered `[dK, dH]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: HermitianMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiMatrix {
    /// Wraps `x` as the Choi matrix of a map from dimension `dim_in` to
    /// `dim_out`.
    pub fn new(x: HermitianMatrix, dim_out: usize, dim_in: usize) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 || x.dim() != dim_in * dim_out {
            return Err(Error::Shape(format!(
                "a {}x{} matrix is not a Choi matrix for dims (out {dim_out}, in {dim_in})",
                x.dim(),
                x.dim()
            )));
        }
        let matrix = x.with_dims(&[dim_out, dim_in])?;
        Ok(ChoiMatrix {
            matrix,
            dim_in,
            dim_out,
        })
    }

    /// Reads dimensions from the matrix's own two-entry subsystem list.
    pub fn from_matrix(x: HermitianMatrix) -> Result<Self> {
        match *x.dims() {
            [dk, dh] => Self::new(x, dk, dh),
            _ => Err(Error::Shape(format!(
                "Choi matrix needs dims [dK, dH], got {:?}",
                x.dims()
            ))),
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `Tr_K X`; equals the identity exactly for trace-preserving maps.
    pub fn input_marginal(&self) -> HermitianMatrix {
        self.matrix.partial_trace(0).expect("dims are set")
    }

    /// PSD with `Tr_K X = I` (the Choi characterization of channels).
    pub fn is_channel(&self, tol: f64) -> Result<bool> {
        if !self.matrix.psd_check(tol)? {
            return Ok(false);
        }
        let m = self.input_marginal();
        Ok(m.sub(&HermitianMatrix::identity(self.dim_in)).max_abs_entry() <= tol)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::new(self.matrix.sub(&other.matrix), self.dim_out, self.dim_in)
    }

    /// `s·self + t·other`.
    pub fn combine(&self, s: f64, other: &Self, t: f64) -> Result<Self> {
        self.check_same(other)?;
        Self::new(
            self.matrix.scale(s).axpy(t, &other.matrix),
            self.dim_out,
            self.dim_in,
        )
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::Shape("Choi matrices have different dimensions".into()));
        }
        Ok(())
    }
}

/// A completely positive map in Kraus form `a ↦ Σ_i V_i a V_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    operators: Vec<DMatrix<Complex64>>,
}

impl KrausMap {
    pub fn new(operators: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Shape("a Kraus map needs at least one operator".into()))?;
        let shape = first.shape();
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::Shape("Kraus operators must be nonempty".into()));
        }
        if let Some(bad) = operators.iter().find(|v| v.shape() != shape) {
            return Err(Error::Shape(format!(
                "Kraus operators have inconsistent shapes {:?} and {:?}",
                shape,
                bad.shape()
            )));
        }
        Ok(KrausMap { operators })
    }

    pub fn unitary(u: DMatrix<Complex64>) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn operators(&self) -> &[DMatrix<Complex64>] {
        &self.operators
    }

    pub fn dim_in(&self) -> usize {
        self.operators[0].ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Direct application `Σ V_i a V_i*`.
    pub fn apply(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        if a.dim() != self.dim_in() {
            return Err(Error::Shape(format!(
                "input has dimension {}, map expects {}",
                a.dim(),
                self.dim_in()
            )));
        }
        let n = self.dim_out();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for v in &self.operators {
            acc += v * a.matrix() * v.adjoint();
        }
        HermitianMatrix::from_matrix(acc)
    }

    /// `Σ V_i* V_i`.
    pub fn gram(&self) -> HermitianMatrix {
        let n = self.dim_in();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for v in &self.operators {
            acc += v.adjoint() * v;
        }
        HermitianMatrix::from_matrix(acc).expect("square")
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.gram()
            .sub(&HermitianMatrix::identity(self.dim_in()))
            .max_abs_entry()
            <= tol
    }
}

/// Serialized as a list of complex matrices `[[[re, im], ...], ...]`.
impl Serialize for KrausMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ops: Vec<Vec<Vec<[f64; 2]>>> = self
            .operators
            .iter()
            .map(|v| {
                (0..v.nrows())
                    .map(|i| (0..v.ncols()).map(|j| [v[(i, j)].re, v[(i, j)].im]).collect())
                    .collect()
            })
            .collect();
        ops.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KrausMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ops: Vec<Vec<Vec<[f64; 2]>>> = Vec::deserialize(d)?;
        let mut mats = Vec::with_capacity(ops.len());
        for (k, rows) in ops.iter().enumerate() {
            let r = rows.len();
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != cols) {
                return Err(serde::de::Error::custom(format!(
                    "Kraus operator {k}: ragged rows"
                )));
            }
            mats.push(DMatrix::from_fn(r, cols, |i, j| c(rows[i][j][0], rows[i][j][1])));
        }
        KrausMap::new(mats).map_err(serde::de::Error::custom)
    }
}

/// `X = Σ_i vec(V_i) vec(V_i)*`, i.e. `(Φ ⊗ id)(Ψ)`.
pub fn choi_of_kraus(m: &KrausMap) -> ChoiMatrix {
    let (dk, dh) = (m.dim_out(), m.dim_in());
    let n = dk * dh;
    let mut x = DMatrix::<Complex64>::zeros(n, n);
    for v in m.operators() {
        // (V ⊗ I)|ψ⟩ has entry V[k, i] at index k·dH + i
        let vec: Vec<Complex64> = (0..n).map(|idx| v[(idx / dh, idx % dh)]).collect();
        for a in 0..n {
            for b in 0..n {
                x[(a, b)] += vec[a] * vec[b].conj();
            }
        }
    }
    let h = HermitianMatrix::from_matrix(x).expect("square");
    ChoiMatrix::new(h, dk, dh).expect("dimensions match by construction")
}

pub fn choi_of_unitary(u: &DMatrix<Complex64>) -> Result<ChoiMatrix> {
    Ok(choi_of_kraus(&KrausMap::unitary(u.clone())?))
}

/// `Φ_X(a) = Tr_H[(I_K ⊗ aᵀ) X]`.
pub fn apply_choi(x: &ChoiMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (dk, dh) = (x.dim_out, x.dim_in);
    if a.dim() != dh {
        return Err(Error::Shape(format!(
            "input has dimension {}, Choi matrix expects {dh}",
            a.dim()
        )));
    }
    let xm = x.matrix.matrix();
    let am = a.matrix();
    let mut out = DMatrix::<Complex64>::zeros(dk, dk);
    for k in 0..dk {
        for kp in 0..dk {
            let mut acc = c(0.0, 0.0);
            for i in 0..dh {
                for j in 0..dh {
                    acc += am[(j, i)] * xm[(k * dh + j, kp * dh + i)];
                }
            }
            out[(k, kp)] = acc;
        }
    }
    HermitianMatrix::from_matrix(out)
}

/// `(Φ ⊗ id_L)(σ)` for `σ` on `H ⊗ L`, evaluated with the Choi matrix of
/// `Φ ⊗ id_L`.
pub fn apply_choi_tensor_id(
    x: &ChoiMatrix,
    ancilla_dim: usize,
    sigma: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    let (dk, dh, dl) = (x.dim_out, x.dim_in, ancilla_dim);
    if ancilla_dim == 0 || sigma.dim() != dh * dl {
        return Err(Error::Shape(format!(
            "input has dimension {}, expected {dh}·{dl}",
            sigma.dim()
        )));
    }
    // X ⊗ Ψ_L lives on K ⊗ H ⊗ L ⊗ L; reorder to (K ⊗ L) ⊗ (H ⊗ L)
    let big = x
        .matrix
        .tensor(&max_entangled_projector(dl))
        .permute_subsystems(&[0, 2, 1, 3])?;
    let big = ChoiMatrix::new(big, dk * dl, dh * dl)?;
    let out = apply_choi(&big, sigma)?;
    if dk > 1 && dl > 1 {
        out.with_dims(&[dk, dl])
    } else {
        Ok(out)
    }
}

/// Unnormalized `|ψ⟩ = Σ_i |i⟩ ⊗ |i⟩` (squared norm `d`).
pub fn max_entangled_vector(d: usize) -> Vec<Complex64> {
    let mut v = vec![c(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = c(1.0, 0.0);
    }
    v
}

/// Unnormalized `Ψ = |ψ⟩⟨ψ|` on `H ⊗ H`.
pub fn max_entangled_projector(d: usize) -> HermitianMatrix {
    let p = HermitianMatrix::projector(&max_entangled_vector(d));
    if d > 1 {
        p.with_dims(&[d, d]).expect("d·d")
    } else {
        p
    }
}

/// The density matrix `Ψ / d`.
pub fn max_entangled_state(d: usize) -> HermitianMatrix {
    max_entangled_projector(d).scale(1.0 / d as f64)
}

/// Pauli matrices and Hadamard used throughout tests and examples.
pub mod gates {
    use super::*;

    pub fn identity(d: usize) -> DMatrix<Complex64> {
        DMatrix::identity(d, d)
    }

    pub fn pauli_x() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn pauli_y() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn pauli_z() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    pub fn hadamard() -> DMatrix<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
    }

    /// Amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> KrausMap {
        let k0 = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - gamma).sqrt(), 0.0)],
        );
        let k1 = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(gamma.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        KrausMap::new(vec![k0, k1]).expect("2x2 operators")
    }

    /// `a ↦ Tr(a)·I/d`, Kraus operators `|i⟩⟨j|/√d`.
    pub fn completely_depolarizing(d: usize) -> KrausMap {
        let s = 1.0 / (d as f64).sqrt();
        let ops = (0..d)
            .flat_map(|i| {
                (0..d).map(move |j| {
                    let mut m = DMatrix::zeros(d, d);
                    m[(i, j)] = c(s, 0.0);
                    m
                })
            })
            .collect();
        KrausMap::new(ops).expect("d x d operators")
    }
}
