//! Faithful sections `B = J ∩ S_b̃` of bases of the PSD cone.
//!
//! A section is stored as an orthonormal basis of its real span `J` (in
//! `svec` coordinates), a positive definite normalizer `b̃` with
//! `Tr(b b̃) = 1` on `B`, and one positive definite element of `B` (the
//! anchor). Sections whose elements are all singular are compressed onto
//! the common support; the isometry is kept as `frame` and every query
//! translates between ambient and support coordinates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::solver::{self, ConeProgram, SolverSettings, Term};
use crate::subspace;

/// Threshold (relative to the operator norm of the interior candidate)
/// below which the best minimum eigenvalue counts as zero.
pub const FAITHFUL_TOL: f64 = 1e-6;

const SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionLabel {
    States,
    Singleton,
    Channels { dim_in: usize, dim_out: usize },
    Combs { dims: Vec<usize> },
    Generalized { base: Box<SectionLabel>, dim_out: usize },
    Povm { base: Box<SectionLabel>, outcomes: usize },
    IdentityTensor { base: Box<SectionLabel>, dim: usize },
    Dual { base: Box<SectionLabel> },
    Custom,
}

impl std::fmt::Display for SectionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectionLabel::States => write!(f, "states"),
            SectionLabel::Singleton => write!(f, "singleton"),
            SectionLabel::Channels { dim_in, dim_out } => write!(f, "channels({dim_in},{dim_out})"),
            SectionLabel::Combs { dims } => write!(f, "combs{dims:?}"),
            SectionLabel::Generalized { base, dim_out } => write!(f, "generalized({base},{dim_out})"),
            SectionLabel::Povm { base, outcomes } => write!(f, "povm({base},{outcomes})"),
            SectionLabel::IdentityTensor { base, dim } => write!(f, "I{dim}⊗{base}"),
            SectionLabel::Dual { base } => write!(f, "dual({base})"),
            SectionLabel::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Section {
    ambient: usize,
    dims: Vec<usize>,
    frame: Option<DMatrix<Complex64>>,
    n: usize,
    basis: DMatrix<f64>,
    normalizer: HermitianMatrix,
    anchor: HermitianMatrix,
    label: SectionLabel,
}

/// The dual section in affine form: `B̃ = (b̃ + J^⊥) ∩ B(H)⁺`.
#[derive(Debug, Clone)]
pub struct DualSectionView {
    pub base_point: HermitianMatrix,
    pub orth_basis: Vec<HermitianMatrix>,
}

impl DualSectionView {
    pub fn contains(&self, y: &HermitianMatrix, tol: f64) -> Result<bool> {
        let d = y.sub(&self.base_point);
        let mut rest = d.to_svec();
        for e in &self.orth_basis {
            let c = e.inner(&d);
            for (r, v) in rest.iter_mut().zip(e.to_svec()) {
                *r -= c * v;
            }
        }
        let res = rest.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(res <= tol * (1.0 + y.frobenius_norm()) && y.psd_check(tol)?)
    }
}

fn svec_vector(x: &HermitianMatrix) -> DVector<f64> {
    DVector::from_vec(x.to_svec())
}

fn unsvec(n: usize, v: &[f64]) -> HermitianMatrix {
    HermitianMatrix::from_svec(n, v).expect("svec length")
}

fn transposed_tensor(left: &HermitianMatrix, right: &HermitianMatrix) -> HermitianMatrix {
    left.tensor(&right.transpose())
}

impl Section {
    fn from_parts(
        dims: Vec<usize>,
        basis: DMatrix<f64>,
        normalizer: HermitianMatrix,
        anchor: HermitianMatrix,
        label: SectionLabel,
    ) -> Self {
        let n = normalizer.dim();
        Section {
            ambient: n,
            dims,
            frame: None,
            n,
            basis,
            normalizer,
            anchor,
            label,
        }
    }

    /// All density matrices on `C^d`.
    pub fn states(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        Ok(Self::from_parts(
            Vec::new(),
            DMatrix::identity(d * d, d * d),
            HermitianMatrix::identity(d),
            HermitianMatrix::identity(d).scale(1.0 / d as f64),
            SectionLabel::States,
        ))
    }

    /// The one-point section `{b}`; compressed to `supp b` when `b` is
    /// singular.
    pub fn singleton(b: &HermitianMatrix) -> Result<Self> {
        if !b.psd_check(1e-9)? {
            return Err(Error::Domain("singleton element must be PSD".into()));
        }
        if b.trace() <= 0.0 {
            return Err(Error::Domain("singleton element must be nonzero".into()));
        }
        let frame = b.support_frame()?;
        let r = frame.ncols();
        let (work, frame) = if r < b.dim() {
            (b.congruence(&frame.adjoint()), Some(frame))
        } else {
            (b.clone(), None)
        };
        let normalizer = work.pinv()?.scale(1.0 / r as f64);
        let basis = DMatrix::from_column_slice(r * r, 1, work.scale(1.0 / work.frobenius_norm()).to_svec().as_slice());
        let mut s = Self::from_parts(b.dims().to_vec(), basis, normalizer, work, SectionLabel::Singleton);
        if let Some(f) = frame {
            s.ambient = b.dim();
            s.frame = Some(f);
        }
        Ok(s)
    }

    /// Choi matrices of channels `B(C^dim_in) → B(C^dim_out)`, with
    /// subsystem order `[dim_out, dim_in]`.
    pub fn channels(dim_in: usize, dim_out: usize) -> Result<Self> {
        let mut s = Self::generalized(&Self::states(dim_in)?, dim_out)?;
        s.label = SectionLabel::Channels { dim_in, dim_out };
        Ok(s)
    }

    /// Choi matrices of deterministic combs (supermaps) on
    /// `H₀, H₁, …, Hₙ`, subsystem order `[dₙ, …, d₀]`.
    pub fn comb(dims: &[usize]) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::Shape("comb needs at least two positive dimensions".into()));
        }
        let mut s = Self::channels(dims[0], dims[1])?;
        for &d in &dims[2..] {
            s = Self::generalized(&s, d)?;
        }
        s.label = SectionLabel::Combs { dims: dims.to_vec() };
        Ok(s)
    }

    /// Generalized channels with respect to `base` with output dimension
    /// `dim_out`: `{X ⪰ 0 : Tr_K X ∈ B̃ᵀ}` on `K ⊗ H`.
    pub fn generalized(base: &Section, dim_out: usize) -> Result<Self> {
        base.require_unrestricted("generalized channels")?;
        if dim_out == 0 {
            return Err(Error::Shape("output dimension must be positive".into()));
        }
        let perp = base.generalized_complement(dim_out);
        let basis = subspace::complement(&perp);
        let ik = HermitianMatrix::identity(dim_out);
        let normalizer = transposed_tensor(&ik, &base.anchor_with_dims());
        let anchor = transposed_tensor(&ik.scale(1.0 / dim_out as f64), &base.normalizer_with_dims());
        let dims = normalizer.dims().to_vec();
        Ok(Self::from_parts(
            dims,
            basis,
            normalizer,
            anchor,
            SectionLabel::Generalized {
                base: Box::new(base.label.clone()),
                dim_out,
            },
        ))
    }

    /// Block-diagonal generalized channels `Σ_d |d⟩⟨d| ⊗ M_dᵀ` whose blocks
    /// form a generalized POVM of `base`.
    pub fn povm(base: &Section, outcomes: usize) -> Result<Self> {
        base.require_unrestricted("generalized POVMs")?;
        if outcomes == 0 {
            return Err(Error::Shape("outcome count must be positive".into()));
        }
        let n = base.n;
        let total = outcomes * n;
        let perp = base.generalized_complement(outcomes);
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut off = Vec::new();
        for d in 0..outcomes {
            for e in d + 1..outcomes {
                for i in 0..n {
                    for j in 0..n {
                        for phase in [Complex64::new(s2, 0.0), Complex64::new(0.0, s2)] {
                            let mut m = DMatrix::<Complex64>::zeros(total, total);
                            m[(d * n + i, e * n + j)] = phase;
                            m[(e * n + j, d * n + i)] = phase.conj();
                            off.push(svec_vector(&HermitianMatrix::from_matrix(m)?));
                        }
                    }
                }
            }
        }
        let perp = subspace::extend_orthonormal(&perp, off);
        let basis = subspace::complement(&perp);
        let id = HermitianMatrix::identity(outcomes);
        let normalizer = transposed_tensor(&id, &base.anchor_with_dims());
        let anchor = transposed_tensor(&id.scale(1.0 / outcomes as f64), &base.normalizer_with_dims());
        let dims = normalizer.dims().to_vec();
        Ok(Self::from_parts(
            dims,
            basis,
            normalizer,
            anchor,
            SectionLabel::Povm {
                base: Box::new(base.label.clone()),
                outcomes,
            },
        ))
    }

    /// `I_D ⊗ B = {I_D ⊗ b : b ∈ B}`.
    pub fn identity_tensor(dim: usize, base: &Section) -> Result<Self> {
        base.require_unrestricted("identity tensor sections")?;
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        let id = HermitianMatrix::identity(dim);
        let scale = 1.0 / (dim as f64).sqrt();
        let n = base.n;
        let cols: Vec<DVector<f64>> = base
            .basis
            .column_iter()
            .map(|c| svec_vector(&id.tensor(&unsvec(n, c.as_slice())).scale(scale)))
            .collect();
        let basis = subspace::from_columns(dim * dim * n * n, &cols);
        let normalizer = id.scale(1.0 / dim as f64).tensor(&base.normalizer_with_dims());
        let anchor = id.tensor(&base.anchor_with_dims());
        let dims = normalizer.dims().to_vec();
        Ok(Self::from_parts(
            dims,
            basis,
            normalizer,
            anchor,
            SectionLabel::IdentityTensor {
                base: Box::new(base.label.clone()),
                dim,
            },
        ))
    }

    /// Section spanned by `basis` with normalizing functional `Tr(· b̃)`.
    /// The basis is orthonormalized (dependent elements dropped); if no
    /// element is positive definite the section is compressed to the
    /// support of a relative-interior point.
    pub fn custom(basis: &[HermitianMatrix], normalizer: &HermitianMatrix) -> Result<Self> {
        let n = normalizer.dim();
        if basis.iter().any(|b| b.dim() != n) {
            return Err(Error::Shape("basis and normalizer dimensions differ".into()));
        }
        if normalizer.min_eigenvalue()? <= 0.0 {
            return Err(Error::Domain("normalizer must be positive definite".into()));
        }
        let j = subspace::orthonormalize(n * n, basis.iter().map(svec_vector));
        if j.ncols() == 0 {
            return Err(Error::Infeasible("section span is empty".into()));
        }
        let mut s = Section {
            ambient: n,
            dims: normalizer.dims().to_vec(),
            frame: None,
            n,
            basis: j,
            normalizer: normalizer.clone(),
            anchor: HermitianMatrix::zeros(n),
            label: SectionLabel::Custom,
        };
        let settings = SolverSettings::new(1e-9, 50_000);
        for _ in 0..n {
            let (b, t) = s.interior_candidate(settings)?;
            let scale = b.op_norm()?.max(f64::MIN_POSITIVE);
            if t < -FAITHFUL_TOL * scale {
                return Err(Error::Infeasible("section contains no PSD element".into()));
            }
            let spectrum = b.eig()?;
            let cut = FAITHFUL_TOL * spectrum.max();
            let r = spectrum.eigenvalues.iter().filter(|l| **l > cut).count();
            if t > FAITHFUL_TOL * scale || r == s.n {
                s.anchor = b;
                return Ok(s);
            }
            let v = spectrum.eigenvectors.columns(0, r).into_owned();
            s = s.compress_to(&v)?;
        }
        Err(Error::NumericalFailure("support restriction did not terminate".into()))
    }

    /// Like [`Section::custom`], with a known positive definite member
    /// supplied instead of computed.
    pub fn custom_with_anchor(
        basis: &[HermitianMatrix],
        normalizer: &HermitianMatrix,
        anchor: &HermitianMatrix,
    ) -> Result<Self> {
        let n = normalizer.dim();
        if basis.iter().any(|b| b.dim() != n) || anchor.dim() != n {
            return Err(Error::Shape("basis, normalizer and anchor dimensions differ".into()));
        }
        if normalizer.min_eigenvalue()? <= 0.0 {
            return Err(Error::Domain("normalizer must be positive definite".into()));
        }
        if anchor.min_eigenvalue()? <= 0.0 {
            return Err(Error::Domain("anchor must be positive definite".into()));
        }
        let j = subspace::orthonormalize(n * n, basis.iter().map(svec_vector));
        let s = Section {
            ambient: n,
            dims: normalizer.dims().to_vec(),
            frame: None,
            n,
            basis: j,
            normalizer: normalizer.clone(),
            anchor: anchor.clone(),
            label: SectionLabel::Custom,
        };
        if !s.contains(anchor, 1e-8)? {
            return Err(Error::Domain("anchor is not a member of the section".into()));
        }
        Ok(s)
    }

    /// Restricts to operators supported on the range of the isometry `v`
    /// (working coordinates).
    fn compress_to(&self, v: &DMatrix<Complex64>) -> Result<Section> {
        let n = self.n;
        let r = v.ncols();
        let p = v * v.adjoint();
        // J ∩ pB_h p: null space of j ↦ j − pjp on span coordinates
        let mut leak = DMatrix::<f64>::zeros(n * n, self.basis.ncols());
        for (k, col) in self.basis.column_iter().enumerate() {
            let jk = unsvec(n, col.as_slice());
            let pjp = HermitianMatrix::from_matrix(&p * jk.matrix() * &p)?;
            leak.set_column(k, &svec_vector(&jk.sub(&pjp)));
        }
        let kernel = subspace::null_space(&leak, 1e-7);
        let cols: Vec<DVector<f64>> = (0..kernel.ncols())
            .map(|k| {
                let v_svec = &self.basis * kernel.column(k);
                svec_vector(&unsvec(n, v_svec.as_slice()).congruence(&v.adjoint()))
            })
            .collect();
        let basis = subspace::orthonormalize(r * r, cols);
        if basis.ncols() == 0 {
            return Err(Error::Infeasible("section is empty after support restriction".into()));
        }
        let frame = match &self.frame {
            Some(f) => f * v,
            None => v.clone(),
        };
        Ok(Section {
            ambient: self.ambient,
            dims: self.dims.clone(),
            frame: Some(frame),
            n: r,
            basis,
            normalizer: self.normalizer.congruence(&v.adjoint()),
            anchor: HermitianMatrix::zeros(r),
            label: self.label.clone(),
        })
    }

    /// `B̃`, spanned by `P_J(b̃)` and `J^⊥`, normalized by the anchor of `B`.
    pub fn dual(&self) -> Result<Section> {
        let g = self.functional_svec();
        let g = &g / g.norm();
        let perp = self.complement_svec();
        let first = DMatrix::from_column_slice(g.len(), 1, g.as_slice());
        let basis = subspace::extend_orthonormal(&first, perp.column_iter().map(|c| c.into_owned()));
        Ok(Section {
            ambient: self.ambient,
            dims: self.dims.clone(),
            frame: self.frame.clone(),
            n: self.n,
            basis,
            normalizer: self.anchor.clone(),
            anchor: self.normalizer.clone(),
            label: SectionLabel::Dual {
                base: Box::new(self.label.clone()),
            },
        })
    }

    pub fn dual_view(&self) -> DualSectionView {
        let n = self.n;
        DualSectionView {
            base_point: self.expand(&self.normalizer),
            orth_basis: self
                .complement_svec()
                .column_iter()
                .map(|c| self.expand(&unsvec(n, c.as_slice())))
                .collect(),
        }
    }

    fn require_unrestricted(&self, what: &str) -> Result<()> {
        if self.frame.is_some() {
            return Err(Error::Domain(format!(
                "{what} need a faithful base; this section was restricted to a support"
            )));
        }
        Ok(())
    }

    /// svec basis of `{I_K ⊗ zᵀ : z ∈ J ∩ b̃^⊥}` (orthonormal).
    fn generalized_complement(&self, dim_out: usize) -> DMatrix<f64> {
        let n = self.n;
        let ik = HermitianMatrix::identity(dim_out);
        let scale = 1.0 / (dim_out as f64).sqrt();
        let z = self.tangent_svec();
        let cols: Vec<DVector<f64>> = z
            .column_iter()
            .map(|c| svec_vector(&transposed_tensor(&ik, &unsvec(n, c.as_slice())).scale(scale)))
            .collect();
        subspace::from_columns(dim_out * dim_out * n * n, &cols)
    }

    fn normalizer_with_dims(&self) -> HermitianMatrix {
        with_dims_or_plain(&self.normalizer, &self.dims)
    }

    fn anchor_with_dims(&self) -> HermitianMatrix {
        with_dims_or_plain(&self.anchor, &self.dims)
    }

    pub fn label(&self) -> &SectionLabel {
        &self.label
    }

    /// Ambient dimension of `H`.
    pub fn dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the space the section lives in (the support dimension
    /// when restricted).
    pub fn working_dim(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_restricted(&self) -> bool {
        self.frame.is_some()
    }

    pub fn frame(&self) -> Option<&DMatrix<Complex64>> {
        self.frame.as_ref()
    }

    pub fn span_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal `svec` basis of `J` (columns), working coordinates.
    pub fn basis_svec(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis(&self) -> Vec<HermitianMatrix> {
        self.basis.column_iter().map(|c| unsvec(self.n, c.as_slice())).collect()
    }

    /// Positive definite normalizer `b̃` (working coordinates).
    pub fn normalizer(&self) -> &HermitianMatrix {
        &self.normalizer
    }

    /// A positive definite element of `B` (working coordinates).
    pub fn anchor(&self) -> &HermitianMatrix {
        &self.anchor
    }

    fn functional_svec(&self) -> DVector<f64> {
        subspace::project(&self.basis, &svec_vector(&self.normalizer))
    }

    /// Representative of the normalizing functional inside `J`: the
    /// trace-orthogonal projection `P_J(b̃)`.
    pub fn functional(&self) -> HermitianMatrix {
        unsvec(self.n, self.functional_svec().as_slice())
    }

    /// Orthonormal basis of `J^⊥` (columns).
    pub fn complement_svec(&self) -> DMatrix<f64> {
        subspace::complement(&self.basis)
    }

    /// Orthonormal basis of the directions `J ∩ b̃^⊥` (columns).
    pub fn tangent_svec(&self) -> DMatrix<f64> {
        subspace::restrict_orthogonal(&self.basis, &svec_vector(&self.normalizer))
    }

    /// Maps an ambient operator into working coordinates; fails when `x`
    /// is not supported on the section's support.
    pub fn compress(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        if x.dim() != self.ambient {
            return Err(Error::Shape(format!(
                "operator has dimension {} but the section lives in dimension {}",
                x.dim(),
                self.ambient
            )));
        }
        match &self.frame {
            None => Ok(x.clone()),
            Some(v) => {
                let c = x.congruence(&v.adjoint());
                let back = c.congruence(v);
                let leak = x.sub(&back).frobenius_norm();
                if leak > SUPPORT_TOL * (1.0 + x.frobenius_norm()) {
                    return Err(Error::Domain(format!(
                        "operator is not supported on the section's support (leak {leak:.2e})"
                    )));
                }
                Ok(c)
            }
        }
    }

    /// Inverse of [`Section::compress`] on working coordinates.
    pub fn expand(&self, y: &HermitianMatrix) -> HermitianMatrix {
        match &self.frame {
            None => with_dims_or_plain(y, &self.dims),
            Some(v) => y.congruence(v),
        }
    }

    /// Orthogonal projection onto `J` (working coordinates).
    pub fn project(&self, x: &HermitianMatrix) -> HermitianMatrix {
        unsvec(self.n, subspace::project(&self.basis, &svec_vector(x)).as_slice())
    }

    /// Frobenius distance of `x` (working coordinates) from `J`.
    pub fn span_residual(&self, x: &HermitianMatrix) -> f64 {
        x.sub(&self.project(x)).frobenius_norm()
    }

    /// Membership test: `x ∈ J`, `Tr(x b̃) = 1`, `x ⪰ 0`, each up to `tol`.
    pub fn contains(&self, x: &HermitianMatrix, tol: f64) -> Result<bool> {
        let w = match self.compress(x) {
            Ok(w) => w,
            Err(Error::Domain(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        if self.span_residual(&w) > tol * (1.0 + w.frobenius_norm()) {
            return Ok(false);
        }
        if (w.inner(&self.normalizer) - 1.0).abs() > tol {
            return Ok(false);
        }
        w.psd_check(tol)
    }

    /// Solves `max t` over `b ∈ B` with `b ⪰ tI`; returns `(b, t)` in
    /// working coordinates.
    fn interior_candidate(&self, settings: SolverSettings) -> Result<(HermitianMatrix, f64)> {
        let n = self.n;
        let m = self.basis.ncols();
        let mut p = ConeProgram::new("interior element: max t s.t. Jα − tI ⪰ 0, Tr(Jα b̃) = 1");
        let alpha = p.add_free(m);
        let t = p.add_free(1);
        let pos = p.add_psd(n);
        p.add_objective(t, &[-1.0]);
        let neg_j = -&self.basis;
        let id = solver::svec_column(&HermitianMatrix::identity(n));
        p.add_equation(
            &[Term::Identity(pos, 1.0), Term::Map(alpha, &neg_j), Term::Map(t, &id)],
            &vec![0.0; n * n],
        );
        let g = self.basis.tr_mul(&svec_vector(&self.normalizer));
        let g = DMatrix::from_row_slice(1, m, g.as_slice());
        p.add_equation(&[Term::Map(alpha, &g)], &[1.0]);
        let sol = solver::solve(&p, settings)?;
        let sol = match sol.status {
            solver::Status::Infeasible => {
                return Err(Error::Infeasible("section is empty".into()));
            }
            _ => sol.require_optimal()?,
        };
        let a = DVector::from_column_slice(sol.primal_block(alpha));
        let b = unsvec(n, (&self.basis * a).as_slice());
        Ok((b, sol.primal_block(t)[0]))
    }

    /// Maximizer of the minimum eigenvalue over `B` (ambient coordinates).
    pub fn interior_element(&self, settings: SolverSettings) -> Result<HermitianMatrix> {
        let (b, _) = self.interior_candidate(settings)?;
        Ok(self.expand(&b))
    }

    /// True when both sections describe the same set: equal spans and equal
    /// normalizing functionals on them.
    pub fn equivalent(&self, other: &Section, tol: f64) -> bool {
        if self.ambient != other.ambient || self.n != other.n || self.span_dim() != other.span_dim() {
            return false;
        }
        let cross = other.basis.tr_mul(&self.basis);
        let lost = (&self.basis - &other.basis * &cross).norm();
        let f = self.functional_svec();
        let g = other.functional_svec();
        lost <= tol && (&f - &g).norm() <= tol * (1.0 + f.norm())
    }
}

fn with_dims_or_plain(x: &HermitianMatrix, dims: &[usize]) -> HermitianMatrix {
    if dims.is_empty() || x.dims() == dims {
        x.clone()
    } else {
        x.clone().with_dims(dims).unwrap_or_else(|_| x.clone())
    }
}
