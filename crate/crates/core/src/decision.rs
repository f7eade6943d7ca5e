//! Generalized experiments, decision problems and optimal procedures.
//!
//! An experiment is a family `{b_θ}` in a section `B` with a prior `λ`. A
//! decision problem supplies payoffs: a table `w(θ, d)` (classical) or
//! operators `0 ⪯ W_θ ⪯ I` on `𝒟` (quantum). The maximal average payoff is
//! `‖ξ‖_{I⊗B}` with `ξ = Σ_θ λ_θ W_θᵀ ⊗ b_θ`, attained by a generalized
//! channel `X ∈ C_B(H, 𝒟)` (or a generalized POVM in the classical case).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::norms::{self, block_program, Method, NormOptions, NormResult, SolverStats};
use crate::section::Section;

const MEMBERSHIP_TOL: f64 = 1e-6;
const PRIOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Experiment {
    section: Section,
    family: Vec<HermitianMatrix>,
    prior: Vec<f64>,
}

impl Experiment {
    pub fn new(section: Section, family: Vec<HermitianMatrix>, prior: Vec<f64>) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::Input("experiment needs at least one element".into()));
        }
        if family.len() != prior.len() {
            return Err(Error::Input(format!(
                "family has {} elements but prior has {} entries",
                family.len(),
                prior.len()
            )));
        }
        if prior.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Input("prior entries must be nonnegative".into()));
        }
        let total: f64 = prior.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOL * prior.len() as f64 + f64::EPSILON {
            return Err(Error::Input(format!("prior sums to {total}, not 1")));
        }
        for (i, b) in family.iter().enumerate() {
            if !section.contains(b, MEMBERSHIP_TOL)? {
                return Err(Error::Validation(format!(
                    "family element {i} is not a member of the section {}",
                    section.label()
                )));
            }
        }
        Ok(Experiment { section, family, prior })
    }

    /// Uniform prior.
    pub fn uniform(section: Section, family: Vec<HermitianMatrix>) -> Result<Self> {
        let k = family.len().max(1);
        Self::new(section, family, vec![1.0 / k as f64; k])
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn family(&self) -> &[HermitianMatrix] {
        &self.family
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }
}

#[derive(Debug, Clone)]
pub enum DecisionProblem {
    /// `table[θ][d] = w(θ, d) ∈ [0, 1]`.
    Classical { table: Vec<Vec<f64>> },
    /// `operators[θ] = W_θ` on `𝒟`.
    Quantum { operators: Vec<HermitianMatrix> },
}

impl DecisionProblem {
    pub fn classical(table: Vec<Vec<f64>>) -> Result<Self> {
        let d = table.first().map(|r| r.len()).unwrap_or(0);
        if d == 0 {
            return Err(Error::Input("payoff table must be nonempty".into()));
        }
        for row in &table {
            if row.len() != d {
                return Err(Error::Input("payoff table rows differ in length".into()));
            }
            if row.iter().any(|w| !(0.0..=1.0).contains(w)) {
                return Err(Error::Input("payoff table entries must lie in [0, 1]".into()));
            }
        }
        Ok(DecisionProblem::Classical { table })
    }

    pub fn quantum(operators: Vec<HermitianMatrix>) -> Result<Self> {
        let d = operators.first().map(|w| w.dim()).unwrap_or(0);
        if d == 0 {
            return Err(Error::Input("payoff operators must be nonempty".into()));
        }
        for w in &operators {
            if w.dim() != d {
                return Err(Error::Input("payoff operators differ in dimension".into()));
            }
            if !w.psd_check(1e-10)? || w.op_norm()? > 1.0 + 1e-10 {
                return Err(Error::Input("payoff operators must satisfy 0 ⪯ W ⪯ I".into()));
            }
        }
        Ok(DecisionProblem::Quantum { operators })
    }

    /// Guessing problem `w(θ, d) = δ_{θd}` with `k` hypotheses.
    pub fn guessing(k: usize) -> Self {
        let table = (0..k)
            .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        DecisionProblem::Classical { table }
    }

    /// `1 − w` or `I − W`.
    pub fn complement(&self) -> Self {
        match self {
            DecisionProblem::Classical { table } => DecisionProblem::Classical {
                table: table.iter().map(|r| r.iter().map(|w| 1.0 - w).collect()).collect(),
            },
            DecisionProblem::Quantum { operators } => DecisionProblem::Quantum {
                operators: operators
                    .iter()
                    .map(|w| HermitianMatrix::identity(w.dim()).sub(w))
                    .collect(),
            },
        }
    }

    /// Diagonal embedding `W_θ = Σ_d w(θ, d) |d⟩⟨d|` of a table.
    pub fn to_quantum(&self) -> Self {
        match self {
            DecisionProblem::Classical { table } => DecisionProblem::Quantum {
                operators: table.iter().map(|r| HermitianMatrix::diag(r)).collect(),
            },
            q => q.clone(),
        }
    }

    /// Number of outcomes `|D|` or `dim 𝒟`.
    pub fn outcome_dim(&self) -> usize {
        match self {
            DecisionProblem::Classical { table } => table[0].len(),
            DecisionProblem::Quantum { operators } => operators[0].dim(),
        }
    }

    fn hypotheses(&self) -> usize {
        match self {
            DecisionProblem::Classical { table } => table.len(),
            DecisionProblem::Quantum { operators } => operators.len(),
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, DecisionProblem::Classical { .. })
    }
}

/// Effects `{M_d}` with `M_d ⪰ 0` and `Σ_d M_d ∈ B̃`.
#[derive(Debug, Clone)]
pub struct GeneralizedPOVM {
    section: Section,
    effects: Vec<HermitianMatrix>,
}

impl GeneralizedPOVM {
    pub fn new(section: Section, effects: Vec<HermitianMatrix>, tol: f64) -> Result<Self> {
        let m = GeneralizedPOVM { section, effects };
        m.validate(tol)?;
        Ok(m)
    }

    /// Skips validation; for optimizers whose feasibility is within solver
    /// tolerance by construction.
    pub(crate) fn unchecked(section: Section, effects: Vec<HermitianMatrix>) -> Self {
        GeneralizedPOVM { section, effects }
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.effects.is_empty() {
            return Err(Error::Validation("POVM has no effects".into()));
        }
        for (d, m) in self.effects.iter().enumerate() {
            if m.dim() != self.section.dim() {
                return Err(Error::Shape(format!("effect {d} has the wrong dimension")));
            }
            if !m.psd_check(tol)? {
                return Err(Error::Validation(format!("effect {d} is not PSD")));
            }
        }
        if !self.section.dual_view().contains(&self.total(), tol)? {
            return Err(Error::Validation(
                "effects do not sum to an element of the dual section".into(),
            ));
        }
        Ok(())
    }

    pub fn section(&self) -> &Section {
        &self.section
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn total(&self) -> HermitianMatrix {
        let n = self.section.dim();
        self.effects.iter().fold(HermitianMatrix::zeros(n), |a, m| a.add(m))
    }

    /// Outcome probabilities `Tr(M_d b)` for `b ∈ B`.
    pub fn probabilities(&self, b: &HermitianMatrix) -> Vec<f64> {
        self.effects.iter().map(|m| m.inner(b)).collect()
    }

    /// The block-diagonal generalized channel `Σ_d |d⟩⟨d| ⊗ M_dᵀ`.
    pub fn to_choi(&self) -> HermitianMatrix {
        let k = self.effects.len();
        let mut x: Option<HermitianMatrix> = None;
        for (d, m) in self.effects.iter().enumerate() {
            let mut e = vec![0.0; k];
            e[d] = 1.0;
            let term = HermitianMatrix::diag(&e).tensor(&m.transpose());
            x = Some(match x {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        x.expect("nonempty")
    }
}

/// Maximal payoff with the optimal procedure.
#[derive(Debug, Clone)]
pub struct PayoffResult {
    pub value: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub method: Method,
    pub stats: Option<SolverStats>,
    /// Choi matrix `X ∈ C_B(H, 𝒟)` of the optimal procedure.
    pub procedure: HermitianMatrix,
    /// Classical problems: the optimal generalized POVM.
    pub povm: Option<GeneralizedPOVM>,
    /// `q ∈ Q` with `I ⊗ q ⪰ ξ` and `Tr(q b̃) = primal_value`.
    pub witness_q: HermitianMatrix,
}

fn check_dims(e: &Experiment, p: &DecisionProblem) -> Result<()> {
    if p.hypotheses() != e.family.len() {
        return Err(Error::Shape(format!(
            "decision problem has {} hypotheses but the experiment has {}",
            p.hypotheses(),
            e.family.len()
        )));
    }
    Ok(())
}

/// `ξ_d = Σ_θ λ_θ w(θ, d) b_θ` for classical problems.
pub fn classical_blocks(e: &Experiment, table: &[Vec<f64>]) -> Vec<HermitianMatrix> {
    let n = e.section.dim();
    let dcount = table[0].len();
    (0..dcount)
        .map(|d| {
            e.family
                .iter()
                .zip(&e.prior)
                .zip(table)
                .fold(HermitianMatrix::zeros(n), |acc, ((b, l), row)| acc.axpy(l * row[d], b))
        })
        .collect()
}

/// `ξ = Σ_θ λ_θ W_θᵀ ⊗ b_θ` on `𝒟 ⊗ H`.
pub fn build_xi(e: &Experiment, p: &DecisionProblem) -> Result<HermitianMatrix> {
    check_dims(e, p)?;
    let ops = match p.to_quantum() {
        DecisionProblem::Quantum { operators } => operators,
        DecisionProblem::Classical { .. } => unreachable!(),
    };
    let dd = ops[0].dim();
    let n = e.section.dim();
    let mut xi = HermitianMatrix::zeros(dd * n);
    for ((w, b), l) in ops.iter().zip(&e.family).zip(&e.prior) {
        xi = xi.axpy(*l, &w.transpose().tensor(b));
    }
    let mut dims = vec![dd];
    dims.extend(e.family[0].effective_dims());
    xi.with_dims(&dims)
}

fn classical_optimum(e: &Experiment, table: &[Vec<f64>], maximize: bool, opts: NormOptions) -> Result<PayoffResult> {
    let s = &e.section;
    let blocks = classical_blocks(e, table);
    let work: Vec<HermitianMatrix> = blocks.iter().map(|b| s.compress(b)).collect::<Result<_>>()?;
    let sol = block_program(s, &work, maximize, opts.settings())?;
    let effects: Vec<HermitianMatrix> = sol.effects.iter().map(|m| s.expand(m)).collect();
    let povm = GeneralizedPOVM::unchecked(s.clone(), effects);
    Ok(PayoffResult {
        value: sol.q_value,
        primal_value: sol.q_value,
        dual_value: sol.y_value,
        gap: (sol.q_value - sol.y_value).abs(),
        method: Method::Conic,
        stats: Some(sol.stats),
        procedure: povm.to_choi(),
        povm: Some(povm),
        witness_q: s.expand(&sol.q),
    })
}

fn quantum_optimum(e: &Experiment, p: &DecisionProblem, maximize: bool, opts: NormOptions) -> Result<PayoffResult> {
    let xi = build_xi(e, p)?;
    let dd = p.outcome_dim();
    let lifted = Section::identity_tensor(dd, &e.section)?;
    let sol = block_program(&lifted, std::slice::from_ref(&xi), maximize, opts.settings())?;
    let y = lifted.expand(&sol.effects[0]);
    // Q = I ⊗ q, recover q by a partial trace
    let big_q = lifted.expand(&sol.q);
    let q = partial_trace_first(&big_q, dd)?.scale(1.0 / dd as f64);
    Ok(PayoffResult {
        value: sol.q_value,
        primal_value: sol.q_value,
        dual_value: sol.y_value,
        gap: (sol.q_value - sol.y_value).abs(),
        method: Method::Conic,
        stats: Some(sol.stats),
        procedure: y.transpose(),
        povm: None,
        witness_q: q,
    })
}

fn partial_trace_first(x: &HermitianMatrix, d: usize) -> Result<HermitianMatrix> {
    let n = x.dim() / d;
    x.clone().with_dims(&[d, n])?.partial_trace(0)
}

/// Maximal average payoff `‖ξ‖_{I⊗B}` and an optimal procedure.
pub fn max_payoff(e: &Experiment, p: &DecisionProblem, opts: NormOptions) -> Result<PayoffResult> {
    check_dims(e, p)?;
    match p {
        DecisionProblem::Classical { table } => classical_optimum(e, table, true, opts),
        DecisionProblem::Quantum { .. } => quantum_optimum(e, p, true, opts),
    }
}

/// Minimal average loss when the problem's payoffs are read as losses.
pub fn min_loss(e: &Experiment, p: &DecisionProblem, opts: NormOptions) -> Result<PayoffResult> {
    check_dims(e, p)?;
    match p {
        DecisionProblem::Classical { table } => classical_optimum(e, table, false, opts),
        DecisionProblem::Quantum { .. } => quantum_optimum(e, p, false, opts),
    }
}

#[derive(Debug, Clone)]
pub struct BinaryTest {
    pub error: f64,
    pub povm: GeneralizedPOVM,
    pub norm: NormResult,
}

/// `Π_λ(b₀, b₁) = ½(1 − ‖λb₀ − (1−λ)b₁‖_B)` with an optimal test.
pub fn bayes_error(
    section: &Section,
    b0: &HermitianMatrix,
    b1: &HermitianMatrix,
    lambda: f64,
    opts: NormOptions,
) -> Result<BinaryTest> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Input("λ must lie in [0, 1]".into()));
    }
    for (i, b) in [b0, b1].into_iter().enumerate() {
        if !section.contains(b, MEMBERSHIP_TOL)? {
            return Err(Error::Validation(format!("b{i} is not a member of the section")));
        }
    }
    let x = b0.scale(lambda).axpy(-(1.0 - lambda), b1);
    let norm = norms::base_norm(section, &x, opts)?;
    let (y1, y2) = norm.dual_witness.clone();
    Ok(BinaryTest {
        error: 0.5 * (1.0 - norm.value),
        povm: GeneralizedPOVM::unchecked(section.clone(), vec![y1, y2]),
        norm,
    })
}

/// `1 − max payoff` of the guessing problem.
pub fn multi_hypothesis_error(
    section: &Section,
    family: &[HermitianMatrix],
    prior: &[f64],
    opts: NormOptions,
) -> Result<(f64, GeneralizedPOVM, PayoffResult)> {
    let e = Experiment::new(section.clone(), family.to_vec(), prior.to_vec())?;
    let r = max_payoff(&e, &DecisionProblem::guessing(family.len()), opts)?;
    let povm = r.povm.clone().expect("classical problem yields a POVM");
    Ok((1.0 - r.value, povm, r))
}

/// Closed-form binary discrimination of density matrices. Outcome 0 is the
/// support of `(λρ₀ − (1−λ)ρ₁)₊`; the kernel goes to outcome 1.
pub fn helstrom(rho0: &HermitianMatrix, rho1: &HermitianMatrix, lambda: f64) -> Result<(f64, GeneralizedPOVM)> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::Shape("states differ in dimension".into()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Input("λ must lie in [0, 1]".into()));
    }
    let n = rho0.dim();
    let delta = rho0.scale(lambda).axpy(-(1.0 - lambda), rho1);
    let spec = delta.eig()?;
    let cut = spec.cutoff();
    let m0 = spec.map(|l| if l > cut { 1.0 } else { 0.0 });
    let m1 = HermitianMatrix::identity(n).sub(&m0);
    let error = 0.5 - 0.5 * delta.trace_norm()?;
    Ok((error, GeneralizedPOVM::unchecked(Section::states(n)?, vec![m0, m1])))
}

/// A candidate decision procedure.
#[derive(Debug, Clone)]
pub enum Candidate {
    /// Choi matrix of a generalized channel in `C_B(H, 𝒟)`.
    Channel(HermitianMatrix),
    /// A generalized POVM (classical problems).
    Povm(Vec<HermitianMatrix>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub feasible: bool,
    #[serde(skip)]
    pub witness_q: Option<HermitianMatrix>,
    /// `max payoff − payoff of the candidate`; zero iff the slackness
    /// condition can be met.
    pub deficit: f64,
    /// Largest violation of `ξ ⪯ I ⊗ q` (negative eigenvalue magnitude).
    pub dominance_residual: f64,
    /// `‖((I ⊗ q) − ξ) Xᵀ‖` in Frobenius norm.
    pub slackness_residual: f64,
    pub payoff_candidate: f64,
    pub payoff_at_optimum: f64,
}

/// Residuals of the optimality conditions `ξ_d ⪯ q`, `(q − ξ_d) M_d = 0`
/// for a given `q` and POVM.
pub fn povm_slackness(q: &HermitianMatrix, xis: &[HermitianMatrix], effects: &[HermitianMatrix]) -> Result<(f64, f64)> {
    let mut dom = 0.0_f64;
    let mut slack = 0.0_f64;
    for (xi, m) in xis.iter().zip(effects) {
        let gap = q.sub(xi);
        dom = dom.max((-gap.min_eigenvalue()?).max(0.0));
        slack += gap.mul(m).norm_squared();
    }
    Ok((dom, slack.sqrt()))
}

/// Residuals of `ξ ⪯ I ⊗ q`, `((I ⊗ q) − ξ) Xᵀ = 0`.
pub fn channel_slackness(q: &HermitianMatrix, xi: &HermitianMatrix, x: &HermitianMatrix) -> Result<(f64, f64)> {
    let dd = xi.dim() / q.dim();
    let gap = HermitianMatrix::identity(dd).tensor(q).sub(xi);
    let dom = (-gap.min_eigenvalue()?).max(0.0);
    let slack = gap.mul(&x.transpose()).norm();
    Ok((dom, slack))
}

/// Decides optimality of a candidate via the complementary-slackness
/// conditions. The witness `q` is the optimal dominating element of `Q`;
/// the candidate is optimal iff `Tr((I ⊗ q − ξ) Xᵀ)`, which equals the payoff
/// deficit, vanishes.
pub fn certify_optimal(
    candidate: &Candidate,
    e: &Experiment,
    p: &DecisionProblem,
    opts: NormOptions,
) -> Result<Certificate> {
    check_dims(e, p)?;
    let s = &e.section;
    let threshold = 100.0 * opts.tol;
    match candidate {
        Candidate::Povm(effects) => {
            let table = match p {
                DecisionProblem::Classical { table } => table.clone(),
                DecisionProblem::Quantum { .. } => {
                    let m = GeneralizedPOVM::new(s.clone(), effects.clone(), MEMBERSHIP_TOL)?;
                    return certify_optimal(&Candidate::Channel(m.to_choi()), e, p, opts);
                }
            };
            if effects.len() != table[0].len() {
                return Err(Error::Shape("POVM has the wrong number of outcomes".into()));
            }
            GeneralizedPOVM::new(s.clone(), effects.clone(), MEMBERSHIP_TOL)?;
            let xis = classical_blocks(e, &table);
            let payoff: f64 = xis.iter().zip(effects).map(|(x, m)| x.inner(m)).sum();
            let opt = max_payoff(e, p, opts)?;
            let (dom, slack) = povm_slackness(&opt.witness_q, &xis, effects)?;
            let deficit = opt.value - payoff;
            Ok(Certificate {
                feasible: deficit <= threshold * (1.0 + opt.value.abs()),
                witness_q: Some(opt.witness_q),
                deficit,
                dominance_residual: dom,
                slackness_residual: slack,
                payoff_candidate: payoff,
                payoff_at_optimum: opt.value,
            })
        }
        Candidate::Channel(x) => {
            let xi = build_xi(e, p)?;
            if x.dim() != xi.dim() {
                return Err(Error::Shape("candidate has the wrong dimension".into()));
            }
            let dd = p.outcome_dim();
            let cb = Section::generalized(s, dd)?;
            if !cb.contains(x, MEMBERSHIP_TOL)? {
                return Err(Error::Validation("candidate is not a generalized channel of the section".into()));
            }
            let payoff = xi.inner(&x.transpose());
            let opt = max_payoff(e, &p.to_quantum(), opts)?;
            let (dom, slack) = channel_slackness(&opt.witness_q, &xi, x)?;
            let deficit = opt.value - payoff;
            Ok(Certificate {
                feasible: deficit <= threshold * (1.0 + opt.value.abs()),
                witness_q: Some(opt.witness_q),
                deficit,
                dominance_residual: dom,
                slackness_residual: slack,
                payoff_candidate: payoff,
                payoff_at_optimum: opt.value,
            })
        }
    }
}

/// `M = Λ ∘ χ_c`: `c = Σ_d M_d` and `Λ_d = c^{-1/2} M_d c^{-1/2}` on
/// `supp c`.
pub fn decompose_povm(m: &GeneralizedPOVM) -> Result<(HermitianMatrix, Vec<HermitianMatrix>)> {
    let c = m.total();
    let w = c.pinv_sqrt()?;
    let lambda = m.effects.iter().map(|e| e.sandwich(&w)).collect();
    Ok((c, lambda))
}

/// Whether an optimal 1-tester with maximally entangled input exists for
/// discriminating two channels: `Δ = Tr_K |λX₀ − (1−λ)X₁|` must be a
/// multiple of `I_H`. Returns the relative deviation as residual; `Δ = 0`
/// counts as existing with residual 0.
pub fn max_entangled_tester_exists(
    x0: &crate::choi::ChoiMatrix,
    x1: &crate::choi::ChoiMatrix,
    lambda: f64,
    tol: f64,
) -> Result<(bool, f64)> {
    if x0.dim_in() != x1.dim_in() || x0.dim_out() != x1.dim_out() {
        return Err(Error::Shape("channels act on different spaces".into()));
    }
    for (i, x) in [x0, x1].into_iter().enumerate() {
        if !x.is_channel(1e-8)? {
            return Err(Error::Validation(format!("X{i} is not the Choi matrix of a channel")));
        }
    }
    let diff = x0.combine(lambda, x1, -(1.0 - lambda))?;
    let (abs, _, _) = diff.matrix().abs_pos_neg()?;
    let delta = abs.with_dims(&[x0.dim_out(), x0.dim_in()])?.partial_trace(0)?;
    let dh = x0.dim_in();
    let m = delta.trace() / dh as f64;
    if m <= 1e-14 {
        return Ok((true, 0.0));
    }
    let residual = delta.sub(&HermitianMatrix::identity(dh).scale(m)).op_norm()? / m;
    Ok((residual <= tol, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::{self, gates};
    use crate::random;

    fn ket0() -> HermitianMatrix {
        HermitianMatrix::diag(&[1.0, 0.0])
    }

    fn ketplus() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap()
    }

    fn tight() -> NormOptions {
        NormOptions::with_tol(1e-9)
    }

    #[test]
    fn xi_examples() {
        let s = Section::states(2).unwrap();
        let e = Experiment::new(s.clone(), vec![ket0()], vec![1.0]).unwrap();
        let p = DecisionProblem::quantum(vec![HermitianMatrix::identity(2)]).unwrap();
        let xi = build_xi(&e, &p).unwrap();
        assert!(xi.sub(&HermitianMatrix::identity(2).tensor(&ket0())).frobenius_norm() < 1e-15);
        let zero = DecisionProblem::classical(vec![vec![0.0, 0.0]]).unwrap();
        assert!(build_xi(&e, &zero).unwrap().frobenius_norm() == 0.0);
    }

    #[test]
    fn helstrom_desk_value() {
        let (err, m) = helstrom(&ket0(), &ketplus(), 0.5).unwrap();
        let expect = (1.0 - std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        assert!((err - expect).abs() < 1e-12);
        let r = bayes_error(&Section::states(2).unwrap(), &ket0(), &ketplus(), 0.5, tight().conic()).unwrap();
        assert!((r.error - expect).abs() < 1e-6);
        assert_eq!(m.effects().len(), 2);
    }

    #[test]
    fn helstrom_kernel_goes_to_outcome_one() {
        let (_, m) = helstrom(&ket0(), &ket0(), 0.5).unwrap();
        assert!(m.effects()[0].frobenius_norm() < 1e-12);
        assert!(m.effects()[1].sub(&HermitianMatrix::identity(2)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn perfect_discrimination() {
        let s = Section::states(2).unwrap();
        let e = Experiment::uniform(s, vec![ket0(), HermitianMatrix::diag(&[0.0, 1.0])]).unwrap();
        let r = max_payoff(&e, &DecisionProblem::guessing(2), tight()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn quantum_payoff_matches_classical_for_diagonal_w() {
        let s = Section::states(2).unwrap();
        let e = Experiment::uniform(s, vec![ket0(), ketplus()]).unwrap();
        let p = DecisionProblem::guessing(2);
        let cl = max_payoff(&e, &p, tight()).unwrap();
        let qu = max_payoff(&e, &p.to_quantum(), tight()).unwrap();
        assert!((cl.value - qu.value).abs() < 1e-6);
        assert!((cl.value - (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0).abs() < 1e-6);
    }

    #[test]
    fn certify_helstrom_and_reject_uniform() {
        let s = Section::states(2).unwrap();
        let e = Experiment::uniform(s, vec![ket0(), ketplus()]).unwrap();
        let p = DecisionProblem::guessing(2);
        let (_, m) = helstrom(&ket0(), &ketplus(), 0.5).unwrap();
        let cert = certify_optimal(&Candidate::Povm(m.effects().to_vec()), &e, &p, NormOptions::default()).unwrap();
        assert!(cert.feasible, "{cert:?}");
        let half = HermitianMatrix::identity(2).scale(0.5);
        let cert = certify_optimal(&Candidate::Povm(vec![half.clone(), half]), &e, &p, NormOptions::default()).unwrap();
        assert!(!cert.feasible);
        assert!(cert.deficit > 0.1);
    }

    #[test]
    fn any_povm_is_optimal_for_identical_states() {
        let s = Section::states(2).unwrap();
        let e = Experiment::uniform(s, vec![ket0(), ket0()]).unwrap();
        let p = DecisionProblem::guessing(2);
        let m0 = ketplus();
        let m1 = HermitianMatrix::identity(2).sub(&m0);
        let cert = certify_optimal(&Candidate::Povm(vec![m0, m1]), &e, &p, NormOptions::default()).unwrap();
        assert!(cert.feasible);
    }

    #[test]
    fn decompose_ordinary_povm() {
        let s = Section::states(2).unwrap();
        let m = GeneralizedPOVM::new(s, vec![ketplus(), HermitianMatrix::identity(2).sub(&ketplus())], 1e-9).unwrap();
        let (cc, l) = decompose_povm(&m).unwrap();
        assert!(cc.sub(&HermitianMatrix::identity(2)).frobenius_norm() < 1e-12);
        assert!(l[0].sub(&ketplus()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn tester_criterion_examples() {
        let x0 = choi::choi_of_unitary(&gates::identity(2)).unwrap();
        let x1 = choi::choi_of_unitary(&gates::pauli_z()).unwrap();
        let (ok, res) = max_entangled_tester_exists(&x0, &x1, 0.5, 1e-7).unwrap();
        assert!(ok && res < 1e-12);
        let (ok, res) = max_entangled_tester_exists(&x0, &x0, 0.5, 1e-7).unwrap();
        assert!(ok && res == 0.0);
    }

    #[test]
    fn tester_section_sums() {
        let s = Section::channels(2, 2).unwrap();
        let mut r = random::rng(3);
        let k0 = random::channel(&mut r, 2, 2, 2);
        let k1 = random::channel(&mut r, 2, 2, 2);
        let b0 = choi::choi_of_kraus(&k0).into_matrix();
        let b1 = choi::choi_of_kraus(&k1).into_matrix();
        let t = bayes_error(&s, &b0, &b1, 0.4, tight()).unwrap();
        let total = t.povm.total();
        // ΣM = I ⊗ σ
        let sigma = total.clone().with_dims(&[2, 2]).unwrap().partial_trace(0).unwrap().scale(0.5);
        let rebuilt = HermitianMatrix::identity(2).tensor(&sigma);
        assert!(total.sub(&rebuilt).frobenius_norm() < 1e-5);
        assert!((sigma.trace() - 1.0).abs() < 1e-6);
    }
}
