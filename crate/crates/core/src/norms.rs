//! Base norms, order-unit norms and D_max on sections of the PSD cone.
//!
//! Conic computations go through one block program over a section `B`:
//!
//! ```text
//!   maximize   Σ_d Tr(ξ_d Y_d)   over Y_d ⪰ 0 with Σ_d Y_d ∈ B̃
//!   minimize   Tr(q b̃)          over q ∈ J with q ⪰ ξ_d for all d
//! ```
//!
//! The two are dual to each other. With blocks `(x, −x)` the value is
//! `‖x‖_B`; with one PSD block `a` it is `‖a‖_B = sup_{B̃} Tr(a ·)`; with
//! payoff operators it is the maximal average payoff.

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::choi::ChoiMatrix;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::section::Section;
use crate::solver::{self, ConeProgram, SolverSettings, Status, Term};

/// Extended reals for norms that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// As an IEEE double (`±inf` for the infinite variants).
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedReal::NegInfinity => write!(f, "-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInfinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::PosInfinity => s.serialize_str("inf"),
            ExtendedReal::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Conic,
}

#[derive(Debug, Clone, Copy)]
pub struct NormOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Skip closed forms even when the section admits one.
    pub force_conic: bool,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: solver::DEFAULT_TOL,
            max_iter: solver::DEFAULT_MAX_ITER,
            force_conic: false,
        }
    }
}

impl NormOptions {
    pub fn with_tol(tol: f64) -> Self {
        NormOptions {
            tol,
            ..Default::default()
        }
    }

    pub fn conic(mut self) -> Self {
        self.force_conic = true;
        self
    }

    pub(crate) fn settings(&self) -> SolverSettings {
        SolverSettings::new(self.tol, self.max_iter)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverStats {
    pub status: Status,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub relative_gap: f64,
}

impl SolverStats {
    fn from_solution(s: &solver::ConeSolution) -> Self {
        SolverStats {
            status: s.status,
            iterations: s.iterations,
            primal_residual: s.primal_residual,
            dual_residual: s.dual_residual,
            relative_gap: s.gap,
        }
    }
}

/// A norm value with witnesses for both the infimum and the supremum.
///
/// `primal_witness` is `q ∈ Q` with `−q ⪯ x ⪯ q` and `Tr(q b̃) = primal`;
/// `dual_witness` is `(y₁, y₂)` PSD with `y₁ + y₂ ∈ B̃` and
/// `Tr x(y₁ − y₂) = dual`. Both are in ambient coordinates.
#[derive(Debug, Clone)]
pub struct NormResult {
    pub value: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    pub primal_witness: HermitianMatrix,
    pub dual_witness: (HermitianMatrix, HermitianMatrix),
    pub gap: f64,
    pub method: Method,
    pub stats: Option<SolverStats>,
}

impl NormResult {
    fn closed(value: f64, q: HermitianMatrix, y: (HermitianMatrix, HermitianMatrix)) -> Self {
        NormResult {
            value,
            primal_value: value,
            dual_value: value,
            primal_witness: q,
            dual_witness: y,
            gap: 0.0,
            method: Method::ClosedForm,
            stats: None,
        }
    }
}

/// Outcome of the block program in working coordinates.
#[derive(Debug, Clone)]
pub(crate) struct BlockSolution {
    /// `Σ_d Tr(ξ_d Y_d)` at the returned `Y`.
    pub y_value: f64,
    /// `Tr(q b̃)` side of the duality.
    pub q_value: f64,
    pub effects: Vec<HermitianMatrix>,
    pub q: HermitianMatrix,
    pub stats: SolverStats,
}

/// Optimizes `Σ_d Tr(ξ_d Y_d)` over `Y_d ⪰ 0`, `Σ_d Y_d ∈ B̃` (working
/// coordinates). When `maximize` the returned `q` dominates every `ξ_d`;
/// otherwise it is dominated by every `ξ_d`.
pub(crate) fn block_program(
    section: &Section,
    xis: &[HermitianMatrix],
    maximize: bool,
    settings: SolverSettings,
) -> Result<BlockSolution> {
    let n = section.working_dim();
    let j = section.basis_svec();
    let sign = if maximize { -1.0 } else { 1.0 };
    let mut p = ConeProgram::new(format!(
        "{} Σ Tr(ξ_d Y_d) over Y_d ⪰ 0, Σ Y_d ∈ dual of {} ({} blocks)",
        if maximize { "maximize" } else { "minimize" },
        section.label(),
        xis.len()
    ));
    let blocks: Vec<_> = xis.iter().map(|_| p.add_psd(n)).collect();
    for (b, xi) in blocks.iter().zip(xis) {
        if xi.dim() != n {
            return Err(Error::Shape("operator dimension does not match the section".into()));
        }
        p.add_objective(*b, &xi.scale(sign).to_svec());
    }
    let jt = j.transpose();
    let rhs = jt.clone() * DVector::from_vec(section.normalizer().to_svec());
    let terms: Vec<Term> = blocks.iter().map(|b| Term::Map(*b, &jt)).collect();
    p.add_equation(&terms, rhs.as_slice());
    let sol = solver::solve(&p, settings)?.require_optimal()?;

    let effects: Vec<HermitianMatrix> = blocks.iter().map(|b| sol.primal_matrix(*b)).collect();
    // s_d = sign·ξ_d − J y, so ±J y is recovered from every block
    let mut acc = HermitianMatrix::zeros(n);
    for (b, xi) in blocks.iter().zip(xis) {
        let s = sol.dual_matrix(*b);
        let q = if maximize { s.add(xi) } else { xi.sub(&s) };
        acc = acc.add(&q);
    }
    let q = section.project(&acc.scale(1.0 / xis.len().max(1) as f64));
    Ok(BlockSolution {
        y_value: sign * sol.primal_value,
        q_value: sign * sol.dual_value,
        effects,
        q,
        stats: SolverStats::from_solution(&sol),
    })
}

fn require_psd(b: &HermitianMatrix, what: &str) -> Result<()> {
    if !b.psd_check(1e-9)? {
        return Err(Error::Domain(format!("{what} must be PSD")));
    }
    Ok(())
}

/// `‖x‖_{S_b} = ‖b^{1/2} x b^{1/2}‖₁`, the base norm of `S_b = {y ⪰ 0 :
/// Tr(y b) = 1}`.
pub fn base_norm_singleton(b: &HermitianMatrix, x: &HermitianMatrix) -> Result<f64> {
    require_psd(b, "b")?;
    shape_match(b, x)?;
    let s = b.sqrt_psd()?;
    x.sandwich(&s).trace_norm()
}

/// `‖x‖_b = ‖b^{-1/2} x b^{-1/2}‖`, infinite unless `x` lives on `supp b`.
pub fn order_unit_norm_singleton(b: &HermitianMatrix, x: &HermitianMatrix) -> Result<ExtendedReal> {
    require_psd(b, "b")?;
    shape_match(b, x)?;
    let p = b.support_projection()?;
    let inside = x.sandwich(&p);
    if x.sub(&inside).frobenius_norm() > 1e-9 * (1.0 + x.frobenius_norm()) {
        return Ok(ExtendedReal::PosInfinity);
    }
    let w = b.pinv_sqrt()?;
    Ok(ExtendedReal::Finite(x.sandwich(&w).op_norm()?))
}

/// `D_max(a‖b) = log₂ inf{λ : a ⪯ λ b}`.
pub fn dmax(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<ExtendedReal> {
    require_psd(a, "a")?;
    Ok(match order_unit_norm_singleton(b, a)? {
        ExtendedReal::Finite(v) if v > 0.0 => ExtendedReal::Finite(v.log2()),
        ExtendedReal::Finite(_) => ExtendedReal::NegInfinity,
        other => other,
    })
}

fn shape_match(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!("dimensions {} and {} differ", a.dim(), b.dim())));
    }
    Ok(())
}

/// Closed form on `S_b̃` (span is everything): trace norm after the
/// congruence by `b̃^{1/2}`.
fn full_span_closed_form(section: &Section, x: &HermitianMatrix) -> Result<NormResult> {
    let bt = section.normalizer();
    let s = bt.sqrt_psd()?;
    let si = bt.pinv_sqrt()?;
    let z = x.sandwich(&s);
    let spec = z.eig()?;
    let abs = spec.map(f64::abs);
    let pos = spec.map(|l| if l >= 0.0 { 1.0 } else { 0.0 });
    let neg = spec.map(|l| if l < 0.0 { 1.0 } else { 0.0 });
    let value = abs.trace();
    let q = abs.sandwich(&si);
    let y1 = pos.sandwich(&s);
    let y2 = neg.sandwich(&s);
    Ok(NormResult::closed(
        value,
        section.expand(&q),
        (section.expand(&y1), section.expand(&y2)),
    ))
}

/// Closed form on a one-point section `{b}`: the order-unit norm of `b`.
fn one_point_closed_form(section: &Section, x: &HermitianMatrix) -> Result<NormResult> {
    let j0 = &section.basis()[0];
    let b = j0.scale(1.0 / j0.inner(section.normalizer()));
    let w = b.pinv_sqrt()?;
    let spec = x.sandwich(&w).eig()?;
    let (imax, lmax) = spec
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, l)| (i, l.abs()))
        .fold((0, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
    let mu = lmax.max(0.0);
    let v: Vec<_> = spec.eigenvectors.column(imax).iter().cloned().collect();
    let y = HermitianMatrix::projector(&v).sandwich(&w);
    let zero = HermitianMatrix::zeros(b.dim());
    let pair = if spec.eigenvalues[imax] >= 0.0 { (y, zero) } else { (zero, y) };
    Ok(NormResult::closed(
        mu,
        section.expand(&b.scale(mu)),
        (section.expand(&pair.0), section.expand(&pair.1)),
    ))
}

fn conic_result(section: &Section, sol: BlockSolution, pair: bool) -> NormResult {
    let (y1, y2) = if pair {
        (sol.effects[0].clone(), sol.effects[1].clone())
    } else {
        (sol.effects[0].clone(), HermitianMatrix::zeros(section.working_dim()))
    };
    NormResult {
        value: sol.q_value,
        primal_value: sol.q_value,
        dual_value: sol.y_value,
        primal_witness: section.expand(&sol.q),
        dual_witness: (section.expand(&y1), section.expand(&y2)),
        gap: (sol.q_value - sol.y_value).abs(),
        method: Method::Conic,
        stats: Some(sol.stats),
    }
}

/// `‖x‖_B = inf{Tr(q b̃) : q ∈ J, −q ⪯ x ⪯ q} = sup{Tr x(y₁ − y₂) :
/// yᵢ ⪰ 0, y₁ + y₂ ∈ B̃}`.
pub fn base_norm(section: &Section, x: &HermitianMatrix, opts: NormOptions) -> Result<NormResult> {
    let w = section.compress(x)?;
    let n = section.working_dim();
    if !opts.force_conic {
        if section.span_dim() == n * n {
            return full_span_closed_form(section, &w);
        }
        if section.span_dim() == 1 {
            return one_point_closed_form(section, &w);
        }
    }
    let sol = block_program(section, &[w.clone(), w.scale(-1.0)], true, opts.settings())?;
    Ok(conic_result(section, sol, true))
}

/// The dual norm, `‖x‖_B̃`.
pub fn dual_base_norm(section: &Section, x: &HermitianMatrix, opts: NormOptions) -> Result<NormResult> {
    base_norm(&section.dual()?, x, opts)
}

/// `‖a‖_B = sup_{b̃ ∈ B̃} Tr(a b̃)` for PSD `a`; the dual witness is
/// `(b̃*, 0)`.
pub fn base_norm_psd(section: &Section, a: &HermitianMatrix, opts: NormOptions) -> Result<NormResult> {
    require_psd(a, "a")?;
    let w = section.compress(a)?;
    let n = section.working_dim();
    if !opts.force_conic {
        if section.span_dim() == n * n {
            return full_span_closed_form(section, &w);
        }
        if section.span_dim() == 1 {
            return one_point_closed_form(section, &w);
        }
    }
    let sol = block_program(section, std::slice::from_ref(&w), true, opts.settings())?;
    Ok(conic_result(section, sol, false))
}

/// `‖Φ‖_⋄` as the base norm over channel Choi matrices.
pub fn diamond_norm(x: &ChoiMatrix, opts: NormOptions) -> Result<NormResult> {
    let section = Section::channels(x.dim_in(), x.dim_out())?;
    base_norm(&section, x.matrix(), opts)
}

/// Base norm over the comb section on `H₀, …, Hₙ`.
pub fn ncomb_norm(dims: &[usize], x: &HermitianMatrix, opts: NormOptions) -> Result<NormResult> {
    let section = Section::comb(dims)?;
    if dims.iter().product::<usize>() != x.dim() {
        return Err(Error::Shape("product of comb dimensions does not match the matrix".into()));
    }
    base_norm(&section, x, opts)
}

/// Conditional min-entropy `H_min(K|H)_σ` for `σ` on `K ⊗ H` (order
/// `[dK, dH]`), with the underlying norm result.
pub fn hmin(sigma: &HermitianMatrix, dim_k: usize, dim_h: usize, opts: NormOptions) -> Result<(f64, NormResult)> {
    if dim_k * dim_h != sigma.dim() {
        return Err(Error::Shape("σ must act on K ⊗ H".into()));
    }
    let section = Section::channels(dim_h, dim_k)?.dual()?;
    let r = base_norm_psd(&section, sigma, opts)?;
    Ok((-r.value.log2(), r))
}

#[derive(Debug, Clone)]
pub enum ExtremalCandidate {
    /// A maximizer candidate `b̃₀ ∈ B̃` of `Tr(a ·)`.
    Dual(HermitianMatrix),
    /// A minimizer candidate `b₀ ∈ B` of `D_max(a‖·)`.
    Primal(HermitianMatrix),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalCertificate {
    pub feasible: bool,
    /// `‖a‖_B` minus the value attained by the candidate (absolute).
    pub deficit: f64,
    /// `q` for dual candidates, `t·b₀` for primal ones.
    #[serde(skip)]
    pub witness: HermitianMatrix,
    /// The partner `b̃₀` for primal candidates.
    #[serde(skip)]
    pub partner: Option<HermitianMatrix>,
    /// `‖(q − a) b̃₀‖` in Frobenius norm.
    pub residual: f64,
}

/// Checks the extremality conditions for `‖a‖_B`: a dual candidate `b̃₀` is
/// optimal iff some `q ∈ Q` has `a ⪯ q` and `(q − a) b̃₀ = 0`; a primal
/// candidate `b₀` iff some `t`, `b̃₀ ∈ B̃` have `a ⪯ t b₀` and
/// `(t b₀ − a) b̃₀ = 0`.
pub fn certify_extremal_psd(
    section: &Section,
    a: &HermitianMatrix,
    candidate: &ExtremalCandidate,
    opts: NormOptions,
) -> Result<ExtremalCertificate> {
    require_psd(a, "a")?;
    let aw = section.compress(a)?;
    match candidate {
        ExtremalCandidate::Dual(bt0) => {
            let bt0w = section.compress(bt0)?;
            if !section.dual_view().contains(bt0, 1e-6)? {
                return Err(Error::Validation("candidate is not in the dual section".into()));
            }
            let r = base_norm_psd(section, a, opts)?;
            let attained = aw.inner(&bt0w);
            let q = section.compress(&r.primal_witness)?;
            let deficit = r.primal_value - attained;
            let residual = frob(&(q.sub(&aw).mul(&bt0w)));
            Ok(ExtremalCertificate {
                feasible: deficit <= 10.0 * opts.tol * (1.0 + r.value.abs()),
                deficit,
                witness: section.expand(&q),
                partner: None,
                residual,
            })
        }
        ExtremalCandidate::Primal(b0) => {
            if !section.contains(b0, 1e-6)? {
                return Err(Error::Validation("candidate is not in the section".into()));
            }
            let t = order_unit_norm_singleton(b0, a)?;
            let t = match t {
                ExtendedReal::Finite(t) => t,
                _ => {
                    return Ok(ExtremalCertificate {
                        feasible: false,
                        deficit: f64::INFINITY,
                        witness: b0.clone(),
                        partner: None,
                        residual: f64::INFINITY,
                    })
                }
            };
            let r = base_norm_psd(section, a, opts)?;
            let bt0 = section.compress(&r.dual_witness.0)?;
            let tb = section.compress(b0)?.scale(t);
            let residual = frob(&(tb.sub(&aw).mul(&bt0)));
            let deficit = t - r.dual_value;
            Ok(ExtremalCertificate {
                feasible: deficit <= 10.0 * opts.tol * (1.0 + r.value.abs()),
                deficit,
                witness: section.expand(&tb),
                partner: Some(section.expand(&bt0)),
                residual,
            })
        }
    }
}

pub(crate) fn frob(m: &DMatrix<num_complex::Complex64>) -> f64 {
    m.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{self, gates};
    use crate::random;

    fn tight() -> NormOptions {
        NormOptions::with_tol(1e-9)
    }

    #[test]
    fn singleton_closed_forms() {
        let b = HermitianMatrix::identity(2).scale(0.5);
        let x = HermitianMatrix::diag(&[1.0, -1.0]);
        assert!((base_norm_singleton(&b, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((order_unit_norm_singleton(&b, &x).unwrap().to_f64() - 2.0).abs() < 1e-12);
        let p = HermitianMatrix::diag(&[1.0, 0.0]);
        let q = HermitianMatrix::diag(&[0.0, 1.0]);
        assert_eq!(order_unit_norm_singleton(&p, &q).unwrap(), ExtendedReal::PosInfinity);
    }

    #[test]
    fn dmax_values() {
        let mut r = random::rng(2);
        let a = random::density(&mut r, 3);
        assert!(dmax(&a, &a).unwrap().to_f64().abs() < 1e-9);
        assert!((dmax(&a.scale(2.0), &a).unwrap().to_f64() - 1.0).abs() < 1e-9);
        let zero = HermitianMatrix::diag(&[1.0, 0.0]);
        let half = HermitianMatrix::identity(2).scale(0.5);
        assert!((dmax(&zero, &half).unwrap().to_f64() - 1.0).abs() < 1e-12);
        assert_eq!(dmax(&half, &zero).unwrap(), ExtendedReal::PosInfinity);
    }

    #[test]
    fn states_norm_is_trace_norm_both_paths() {
        let s = Section::states(3).unwrap();
        let mut r = random::rng(5);
        for _ in 0..5 {
            let x = random::unit_hermitian(&mut r, 3);
            let t = x.trace_norm().unwrap();
            let closed = base_norm(&s, &x, NormOptions::default()).unwrap();
            assert_eq!(closed.method, Method::ClosedForm);
            assert!((closed.value - t).abs() < 1e-12);
            let conic = base_norm(&s, &x, tight().conic()).unwrap();
            assert_eq!(conic.method, Method::Conic);
            assert!((conic.value - t).abs() < 1e-6, "{} vs {t}", conic.value);
            assert!(conic.gap < 1e-6);
        }
    }

    #[test]
    fn dual_of_states_gives_operator_norm() {
        let s = Section::states(3).unwrap();
        let mut r = random::rng(6);
        let x = random::unit_hermitian(&mut r, 3);
        let v = dual_base_norm(&s, &x, NormOptions::default()).unwrap();
        assert!((v.value - x.op_norm().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn closed_form_witnesses_are_valid() {
        let s = Section::states(2).unwrap();
        let x = HermitianMatrix::diag(&[0.3, -0.7]);
        let r = base_norm(&s, &x, NormOptions::default()).unwrap();
        let q = &r.primal_witness;
        assert!(q.sub(&x).psd_check(1e-12).unwrap());
        assert!(q.add(&x).psd_check(1e-12).unwrap());
        let (y1, y2) = &r.dual_witness;
        assert!(y1.add(y2).sub(&HermitianMatrix::identity(2)).frobenius_norm() < 1e-12);
        assert!((x.inner(&y1.sub(y2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn member_has_norm_one() {
        let s = Section::channels(2, 2).unwrap();
        let x = choi::choi_of_kraus(&gates::amplitude_damping(0.3));
        let r = base_norm(&s, x.matrix(), tight()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn psd_norm_matches_general() {
        let s = Section::channels(2, 2).unwrap();
        let mut r = random::rng(9);
        let a = random::psd(&mut r, 4).scale(0.1);
        let g = base_norm(&s, &a, tight()).unwrap();
        let p = base_norm_psd(&s, &a, tight()).unwrap();
        assert!((g.value - p.value).abs() < 1e-6);
    }

    #[test]
    fn diamond_norm_of_unitary_difference() {
        let x0 = choi::choi_of_unitary(&gates::identity(2)).unwrap();
        let x1 = choi::choi_of_unitary(&gates::pauli_z()).unwrap();
        let d = x0.sub(&x1).unwrap();
        let r = diamond_norm(&d, tight()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5, "{}", r.value);
    }

    #[test]
    fn hmin_examples() {
        let phi = choi::max_entangled_state(2);
        let (h, _) = hmin(&phi, 2, 2, tight()).unwrap();
        assert!((h + 1.0).abs() < 1e-5, "{h}");
        let mixed = HermitianMatrix::identity(4).scale(0.25);
        let (h, _) = hmin(&mixed, 2, 2, tight()).unwrap();
        assert!((h - 1.0).abs() < 1e-5, "{h}");
    }

    #[test]
    fn extremal_certificates() {
        let s = Section::states(2).unwrap();
        let mut r = random::rng(12);
        let a = random::density(&mut r, 2);
        let c = certify_extremal_psd(&s, &a, &ExtremalCandidate::Dual(HermitianMatrix::identity(2)), NormOptions::default()).unwrap();
        assert!(c.feasible);
        let c = certify_extremal_psd(&s, &a, &ExtremalCandidate::Primal(a.clone()), NormOptions::default()).unwrap();
        assert!(c.feasible);
        assert!(c.residual < 1e-9);
    }

    #[test]
    fn restricted_singleton_norm() {
        let b = HermitianMatrix::diag(&[0.5, 0.0]);
        let s = Section::singleton(&b).unwrap();
        let x = HermitianMatrix::diag(&[-1.0, 0.0]);
        let r = base_norm(&s, &x, NormOptions::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let off = HermitianMatrix::diag(&[0.0, 1.0]);
        assert!(base_norm(&s, &off, NormOptions::default()).is_err());
    }
}
