//! First-order solver for conic programs over products of PSD cones.
//!
//! Standard form:
//!
//! ```text
//!   minimize    cᵀx
//!   subject to  A x = b,   x ∈ K = K₁ × … × K_p
//! ```
//!
//! where each `K_i` is either the cone of `n×n` PSD hermitian matrices (in
//! the real `svec` parametrization of [`HermitianMatrix::to_svec`], so the
//! trace inner product is the Euclidean one) or a free block `R^m`. The dual
//! is `maximize bᵀy` subject to `s = c − Aᵀy ∈ K*`; the dual point reported
//! per block is the slack `s`.
//!
//! The method is ADMM on the splitting `x ∈ {Ax = b}`, `z ∈ K`, `x = z`,
//! with over-relaxation and residual-balanced step size. The constraint rows
//! are orthonormalized once (Gram–Schmidt with reorthogonalization), which
//! factors the Gram matrix `AAᵀ` and turns the affine projection into two
//! matrix–vector products. Dependent rows are dropped after a consistency
//! check; inconsistent rows are reported as infeasibility.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hermitian::{svec_into, HermitianMatrix};

/// Default stopping tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 50_000;

const RELAXATION: f64 = 1.5;
const STALL_WINDOW: usize = 5_000;
const DIVERGENCE: f64 = 1e12;
const CERTIFICATE_TOL: f64 = 1e-6;
const CHECK_EVERY: usize = 10;
const ADAPT_EVERY: usize = 50;
const ROW_DROP_TOL: f64 = 1e-9;
const ROW_CONSISTENCY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cone {
    /// Hermitian `n×n` PSD matrices, `n²` real coordinates.
    Psd(usize),
    /// Unconstrained real block.
    Free(usize),
}

impl Cone {
    pub fn len(&self) -> usize {
        match *self {
            Cone::Psd(n) => n * n,
            Cone::Free(m) => m,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Handle to a variable block of a [`ConeProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockId(usize);

/// One term of a vector-valued linear equation: block contributions are
/// summed and set equal to a right-hand side.
pub enum Term<'a> {
    /// `scale · x_block` (block length must equal the equation length).
    Identity(BlockId, f64),
    /// `map · x_block` with `map` of shape `equation length × block length`.
    Map(BlockId, &'a DMatrix<f64>),
}

#[derive(Debug, Clone)]
pub struct ConeProgram {
    description: String,
    blocks: Vec<Cone>,
    offsets: Vec<usize>,
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl ConeProgram {
    pub fn new(description: impl Into<String>) -> Self {
        ConeProgram {
            description: description.into(),
            blocks: Vec::new(),
            offsets: Vec::new(),
            objective: Vec::new(),
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    fn add_block(&mut self, cone: Cone) -> BlockId {
        let off = self.objective.len();
        self.blocks.push(cone);
        self.offsets.push(off);
        self.objective.resize(off + cone.len(), 0.0);
        BlockId(self.blocks.len() - 1)
    }

    pub fn add_psd(&mut self, n: usize) -> BlockId {
        self.add_block(Cone::Psd(n))
    }

    pub fn add_free(&mut self, m: usize) -> BlockId {
        self.add_block(Cone::Free(m))
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn blocks(&self) -> &[Cone] {
        &self.blocks
    }

    pub fn block_range(&self, id: BlockId) -> std::ops::Range<usize> {
        let off = self.offsets[id.0];
        off..off + self.blocks[id.0].len()
    }

    /// Adds `coeffs` to the objective restricted to `block`.
    pub fn add_objective(&mut self, block: BlockId, coeffs: &[f64]) {
        let r = self.block_range(block);
        assert_eq!(coeffs.len(), r.len(), "objective length mismatch");
        for (o, c) in self.objective[r].iter_mut().zip(coeffs) {
            *o += c;
        }
    }

    /// Objective term `Tr(c · X)` for a PSD block.
    pub fn add_objective_matrix(&mut self, block: BlockId, c: &HermitianMatrix) {
        self.add_objective(block, &c.to_svec());
    }

    /// Adds the scalar equation `Σ coeff·x[col] = rhs` (columns are global).
    pub fn add_row(&mut self, entries: Vec<(usize, f64)>, rhs: f64) {
        self.rows.push(entries);
        self.rhs.push(rhs);
    }

    /// Adds the vector equation `Σ terms = rhs`, one scalar row per entry.
    pub fn add_equation(&mut self, terms: &[Term<'_>], rhs: &[f64]) {
        let len = rhs.len();
        for (i, &r) in rhs.iter().enumerate() {
            let mut row = Vec::new();
            for term in terms {
                match *term {
                    Term::Identity(id, s) => {
                        let range = self.block_range(id);
                        assert_eq!(range.len(), len, "identity term length mismatch");
                        if s != 0.0 {
                            row.push((range.start + i, s));
                        }
                    }
                    Term::Map(id, map) => {
                        let range = self.block_range(id);
                        assert_eq!(map.nrows(), len, "map rows mismatch");
                        assert_eq!(map.ncols(), range.len(), "map cols mismatch");
                        for j in 0..map.ncols() {
                            let v = map[(i, j)];
                            if v != 0.0 {
                                row.push((range.start + j, v));
                            }
                        }
                    }
                }
            }
            self.add_row(row, r);
        }
    }

    /// Text dump (objective, then `row col value` triplets and right-hand
    /// sides) for cross-checking against external solvers. Not a stable
    /// format.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.description);
        let _ = writeln!(s, "vars {} constraints {}", self.num_vars(), self.num_constraints());
        for (b, (cone, off)) in self.blocks.iter().zip(&self.offsets).enumerate() {
            let _ = writeln!(s, "block {b} {cone:?} offset {off}");
        }
        let _ = writeln!(s, "objective");
        for (j, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                let _ = writeln!(s, "{j} {c:e}");
            }
        }
        let _ = writeln!(s, "constraints");
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                let _ = writeln!(s, "{i} {j} {v:e}");
            }
        }
        let _ = writeln!(s, "rhs");
        for (i, b) in self.rhs.iter().enumerate() {
            let _ = writeln!(s, "{i} {b:e}");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    MaxIter,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl SolverSettings {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        SolverSettings { tol, max_iter }
    }
}

/// Solver output. Residuals are relative: the primal residual is the
/// distance of `x` to the affine set over `1 + ‖b‖`, the dual residual the
/// analogous quantity for `s`, and the gap is `|p − d| / (1 + |p| + |d|)`.
#[derive(Debug, Clone)]
pub struct ConeSolution {
    pub status: Status,
    pub primal_value: f64,
    pub dual_value: f64,
    pub primal_point: Vec<f64>,
    pub dual_point: Vec<f64>,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
    pub iterations: usize,
    offsets: Vec<usize>,
    blocks: Vec<Cone>,
}

impl ConeSolution {
    fn range(&self, id: BlockId) -> std::ops::Range<usize> {
        let off = self.offsets[id.0];
        off..off + self.blocks[id.0].len()
    }

    pub fn primal_block(&self, id: BlockId) -> &[f64] {
        &self.primal_point[self.range(id)]
    }

    pub fn dual_block(&self, id: BlockId) -> &[f64] {
        &self.dual_point[self.range(id)]
    }

    pub fn primal_matrix(&self, id: BlockId) -> HermitianMatrix {
        self.block_matrix(id, &self.primal_point)
    }

    pub fn dual_matrix(&self, id: BlockId) -> HermitianMatrix {
        self.block_matrix(id, &self.dual_point)
    }

    fn block_matrix(&self, id: BlockId, v: &[f64]) -> HermitianMatrix {
        match self.blocks[id.0] {
            Cone::Psd(n) => HermitianMatrix::from_svec(n, &v[self.range(id)]).expect("block length"),
            Cone::Free(_) => panic!("block {} is not a PSD block", id.0),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    /// Largest of the three convergence measures.
    pub fn accuracy(&self) -> f64 {
        self.primal_residual.max(self.dual_residual).max(self.gap)
    }

    /// Converts a non-optimal status into an error carrying the best bounds.
    pub fn require_optimal(self) -> Result<Self> {
        match self.status {
            Status::Optimal => Ok(self),
            Status::Infeasible => Err(Error::Infeasible("conic program is infeasible".into())),
            Status::Unbounded => Err(Error::Infeasible("conic program is unbounded".into())),
            Status::MaxIter => Err(Error::SolverFailure {
                reason: format!(
                    "stopped after {} iterations at accuracy {:.2e}",
                    self.iterations,
                    self.accuracy()
                ),
                lower: self.dual_value.min(self.primal_value),
                upper: self.dual_value.max(self.primal_value),
            }),
        }
    }
}

/// Euclidean projection onto the PSD cone, `x ↦ x₊`.
pub fn project_psd(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    let s = x.eig()?;
    let mut p = s.map(|l| l.max(0.0));
    if !x.dims().is_empty() {
        p = p.with_dims(x.dims())?;
    }
    Ok(p)
}

/// Orthonormalized equality constraints: `Qᵀx = b'` with orthonormal
/// columns `Q` spanning the row space of `A`.
struct AffineProjector {
    q: DMatrix<f64>,
    b: DVector<f64>,
}

impl AffineProjector {
    fn new(program: &ConeProgram) -> Result<Self> {
        let n = program.num_vars();
        let mut basis: Vec<DVector<f64>> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();
        let mut coeffs = Vec::new();
        for (row, &bi) in program.rows.iter().zip(&program.rhs) {
            let mut a = DVector::<f64>::zeros(n);
            for &(j, v) in row {
                a[j] += v;
            }
            let norm0 = a.norm();
            let mut beta = bi;
            if norm0 == 0.0 {
                if bi.abs() > ROW_CONSISTENCY_TOL {
                    return Err(Error::Infeasible(format!(
                        "constraint 0 = {bi} cannot hold"
                    )));
                }
                continue;
            }
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                coeffs.clear();
                coeffs.extend(basis.iter().map(|q| q.dot(&a)));
                for ((q, &cf), &bq) in basis.iter().zip(&coeffs).zip(&rhs) {
                    a.axpy(-cf, q, 1.0);
                    beta -= cf * bq;
                }
            }
            let norm = a.norm();
            if norm <= ROW_DROP_TOL * norm0 {
                if beta.abs() > ROW_CONSISTENCY_TOL * (1.0 + bi.abs()) * norm0.max(1.0) {
                    return Err(Error::Infeasible(format!(
                        "equality constraints are inconsistent (residual {beta:.3e})"
                    )));
                }
                continue;
            }
            basis.push(a / norm);
            rhs.push(beta / norm);
        }
        let r = basis.len();
        let mut q = DMatrix::<f64>::zeros(n, r);
        for (j, v) in basis.iter().enumerate() {
            q.set_column(j, v);
        }
        Ok(AffineProjector {
            q,
            b: DVector::from_vec(rhs),
        })
    }
}

fn project_cone(blocks: &[Cone], offsets: &[usize], v: &mut DVector<f64>, scratch: &mut Vec<f64>) -> Result<()> {
    for (cone, &off) in blocks.iter().zip(offsets) {
        if let Cone::Psd(n) = *cone {
            if n == 0 {
                continue;
            }
            let len = n * n;
            let slice = &v.as_slice()[off..off + len];
            let m = HermitianMatrix::from_svec(n, slice)?;
            let s = m.eig()?;
            if s.min() >= 0.0 {
                continue;
            }
            let p = s.map(|l| l.max(0.0));
            svec_into(p.matrix(), scratch);
            v.as_mut_slice()[off..off + len].copy_from_slice(scratch);
        }
    }
    Ok(())
}

/// Distance of `g` to `K` (`dual = false`) or to `K*` (`dual = true`).
/// PSD blocks are self-dual; the dual of a free block is `{0}`.
fn cone_distance(
    g: &DVector<f64>,
    blocks: &[Cone],
    offsets: &[usize],
    dual: bool,
) -> Result<f64> {
    let mut d2 = 0.0;
    for (cone, &off) in blocks.iter().zip(offsets) {
        match *cone {
            Cone::Psd(n) => {
                if n == 0 {
                    continue;
                }
                let m = HermitianMatrix::from_svec(n, &g.as_slice()[off..off + n * n])?;
                d2 += m
                    .eigenvalues()?
                    .iter()
                    .filter(|l| **l < 0.0)
                    .map(|l| l * l)
                    .sum::<f64>();
            }
            Cone::Free(m) if dual => {
                d2 += g.as_slice()[off..off + m].iter().map(|v| v * v).sum::<f64>();
            }
            Cone::Free(_) => {}
        }
    }
    Ok(d2.sqrt())
}

/// Farkas test on the dual increment: `−Aᵀd ∈ K*` and `bᵀd > 0`.
fn primal_infeasible(
    q: &DMatrix<f64>,
    b: &DVector<f64>,
    dy: &DVector<f64>,
    blocks: &[Cone],
    offsets: &[usize],
) -> Result<bool> {
    let norm = dy.norm();
    if norm < 1e-12 {
        return Ok(false);
    }
    let d = dy / norm;
    let bd = b.dot(&d);
    if bd <= CERTIFICATE_TOL {
        return Ok(false);
    }
    let g = -(q * &d);
    Ok(cone_distance(&g, blocks, offsets, true)? <= CERTIFICATE_TOL * bd)
}

/// Recession direction test on the primal increment: `e ∈ K`, `Ae = 0`,
/// `cᵀe < 0`.
fn dual_infeasible(
    q: &DMatrix<f64>,
    c: &DVector<f64>,
    dz: &DVector<f64>,
    blocks: &[Cone],
    offsets: &[usize],
) -> Result<bool> {
    let norm = dz.norm();
    if norm < 1e-12 {
        return Ok(false);
    }
    let e = dz / norm;
    let ce = -c.dot(&e);
    if ce <= CERTIFICATE_TOL {
        return Ok(false);
    }
    let ae = q.tr_mul(&e).norm();
    Ok(ae <= CERTIFICATE_TOL * ce && cone_distance(&e, blocks, offsets, false)? <= CERTIFICATE_TOL * ce)
}

/// Solves `p` to relative accuracy `settings.tol`.
pub fn solve(p: &ConeProgram, settings: SolverSettings) -> Result<ConeSolution> {
    let n = p.num_vars();
    let blank = |status: Status| ConeSolution {
        status,
        primal_value: f64::NAN,
        dual_value: f64::NAN,
        primal_point: vec![0.0; n],
        dual_point: vec![0.0; n],
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        gap: f64::INFINITY,
        iterations: 0,
        offsets: p.offsets.clone(),
        blocks: p.blocks.clone(),
    };
    let proj = match AffineProjector::new(p) {
        Ok(proj) => proj,
        Err(Error::Infeasible(_)) => return Ok(blank(Status::Infeasible)),
        Err(e) => return Err(e),
    };
    let q = &proj.q;
    let c = DVector::from_column_slice(&p.objective);

    // scale objective and right-hand side to unit size
    let c_norm = c.norm();
    let b_norm = proj.b.norm();
    let sc = if c_norm > 0.0 { c_norm } else { 1.0 };
    let sb = if b_norm > 0.0 { b_norm } else { 1.0 };
    let ch = &c / sc;
    let bh = &proj.b / sb;

    let mut z = DVector::<f64>::zeros(n);
    let mut u = DVector::<f64>::zeros(n);
    let mut x = DVector::<f64>::zeros(n);
    let mut v = DVector::<f64>::zeros(n);
    let mut w = DVector::<f64>::zeros(q.ncols());
    let mut scratch = Vec::new();
    let mut rho = 1.0_f64;

    struct Snapshot {
        z: DVector<f64>,
        s: DVector<f64>,
        pobj: f64,
        dobj: f64,
        pres: f64,
        dres: f64,
        gap: f64,
        merit: f64,
        iter: usize,
    }
    let mut best: Option<Snapshot> = None;
    let mut last_improvement = 0usize;
    let mut status = Status::MaxIter;
    let mut iter = 0usize;
    let mut prev: Option<(DVector<f64>, DVector<f64>)> = None;

    while iter < settings.max_iter {
        iter += 1;
        // x = Π_affine(z − u − ĉ/ρ)
        v.copy_from(&z);
        v -= &u;
        v.axpy(-1.0 / rho, &ch, 1.0);
        w.gemv_tr(1.0, q, &v, 0.0);
        w -= &bh;
        x.copy_from(&v);
        x.gemv(-1.0, q, &w, 1.0);

        // relaxed z-update and dual update
        let z_old = z.clone();
        let mut xr = &x * RELAXATION + &z_old * (1.0 - RELAXATION);
        xr += &u;
        project_cone(&p.blocks, &p.offsets, &mut xr, &mut scratch)?;
        z = xr;
        u += &x * RELAXATION + &z_old * (1.0 - RELAXATION);
        u -= &z;

        if iter % CHECK_EVERY != 0 && iter != settings.max_iter {
            continue;
        }

        // ŷ = −ρw, ŝ = −ρu ∈ K*; dual residual ‖ĉ − Qŷ − ŝ‖
        let yh = &w * (-rho);
        let sh = &u * (-rho);
        let mut rd = ch.clone();
        rd.gemv(-1.0, q, &yh, 1.0);
        rd -= &sh;
        let mut rp = DVector::<f64>::zeros(q.ncols());
        rp.gemv_tr(1.0, q, &z, 0.0);
        rp -= &bh;

        let pobj = sc * sb * ch.dot(&z);
        let dobj = sc * sb * bh.dot(&yh);
        let pres = sb * rp.norm() / (1.0 + b_norm);
        let dres = sc * rd.norm() / (1.0 + c_norm);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let merit = pres.max(dres).max(gap);

        if !merit.is_finite() {
            return Err(Error::NumericalFailure("solver iterates became non-finite".into()));
        }
        let improved = best.as_ref().is_none_or(|b| merit < b.merit);
        if improved {
            best = Some(Snapshot {
                z: z.clone(),
                s: sh.clone(),
                pobj,
                dobj,
                pres,
                dres,
                gap,
                merit,
                iter,
            });
            last_improvement = iter;
        }
        if merit <= settings.tol {
            status = Status::Optimal;
            break;
        }
        if let Some((y0, z0)) = &prev {
            if primal_infeasible(q, &bh, &(&yh - y0), &p.blocks, &p.offsets)? {
                status = Status::Infeasible;
                break;
            }
            if dual_infeasible(q, &ch, &(&z - z0), &p.blocks, &p.offsets)? {
                status = Status::Unbounded;
                break;
            }
        }
        if yh.norm() > DIVERGENCE || z.norm() > DIVERGENCE {
            return Err(Error::NumericalFailure(
                "solver iterates diverged without an infeasibility certificate".into(),
            ));
        }
        prev = Some((yh.clone(), z.clone()));
        if iter - last_improvement >= STALL_WINDOW {
            break;
        }

        if iter % ADAPT_EVERY == 0 {
            let pr = rp.norm() / (1.0 + bh.norm());
            let dr = rd.norm() / (1.0 + ch.norm());
            if pr > 0.0 && dr > 0.0 {
                let ratio = (pr / dr).sqrt();
                if !(0.2..=5.0).contains(&ratio) {
                    let new_rho = (rho * ratio).clamp(1e-6, 1e6);
                    u *= rho / new_rho;
                    rho = new_rho;
                }
            }
        }
    }

    let snap = if status == Status::Optimal {
        best.filter(|b| b.iter == iter).expect("optimal iterate was recorded")
    } else {
        match best {
            Some(b) => b,
            None => return Ok(blank(status)),
        }
    };
    Ok(ConeSolution {
        status,
        primal_value: snap.pobj,
        dual_value: snap.dobj,
        primal_point: (snap.z * sb).data.into(),
        dual_point: (snap.s * sc).data.into(),
        primal_residual: snap.pres,
        dual_residual: snap.dres,
        gap: snap.gap,
        iterations: iter,
        offsets: p.offsets.clone(),
        blocks: p.blocks.clone(),
    })
}

/// `svec` coordinates of `x` as a dense column.
pub fn svec_column(x: &HermitianMatrix) -> DMatrix<f64> {
    let v = x.to_svec();
    DMatrix::from_column_slice(v.len(), 1, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn trace_norm_program(x: &HermitianMatrix) -> (ConeProgram, BlockId, BlockId) {
        // ‖x‖₁ = min Tr(P + N) s.t. P − N = x, P, N ⪰ 0
        let n = x.dim();
        let mut p = ConeProgram::new("trace norm");
        let a = p.add_psd(n);
        let b = p.add_psd(n);
        let id = HermitianMatrix::identity(n);
        p.add_objective_matrix(a, &id);
        p.add_objective_matrix(b, &id);
        p.add_equation(&[Term::Identity(a, 1.0), Term::Identity(b, -1.0)], &x.to_svec());
        (p, a, b)
    }

    #[test]
    fn trace_norm_of_diagonal() {
        let x = HermitianMatrix::diag(&[1.0, -2.0, 0.5]);
        let (p, a, b) = trace_norm_program(&x);
        let s = solve(&p, SolverSettings::new(1e-9, 50_000)).unwrap();
        assert_eq!(s.status, Status::Optimal);
        assert!((s.primal_value - 3.5).abs() < 1e-7, "{}", s.primal_value);
        assert!((s.dual_value - 3.5).abs() < 1e-7);
        let pp = s.primal_matrix(a);
        let nn = s.primal_matrix(b);
        assert!((pp.trace() - 1.5).abs() < 1e-6);
        assert!((nn.trace() - 2.0).abs() < 1e-6);
        // dual slacks are PSD
        assert!(s.dual_matrix(a).min_eigenvalue().unwrap() > -1e-9);
    }

    #[test]
    fn op_norm_program() {
        // ‖x‖ = min t s.t. tI − x ⪰ 0, tI + x ⪰ 0
        let mut r = random::rng(3);
        let x = random::hermitian(&mut r, 4);
        let n = 4;
        let mut p = ConeProgram::new("operator norm");
        let t = p.add_free(1);
        let a = p.add_psd(n);
        let b = p.add_psd(n);
        p.add_objective(t, &[1.0]);
        let id = -svec_column(&HermitianMatrix::identity(n));
        p.add_equation(&[Term::Identity(a, 1.0), Term::Map(t, &id)], &x.scale(-1.0).to_svec());
        p.add_equation(&[Term::Identity(b, 1.0), Term::Map(t, &id)], &x.to_svec());
        let s = solve(&p, SolverSettings::new(1e-9, 50_000)).unwrap();
        assert!(s.is_optimal());
        let expect = x.op_norm().unwrap();
        assert!((s.primal_value - expect).abs() < 1e-6 * (1.0 + expect));
    }

    #[test]
    fn inconsistent_equations_are_infeasible() {
        let mut p = ConeProgram::new("inconsistent");
        let t = p.add_free(1);
        p.add_objective(t, &[1.0]);
        let r = p.block_range(t).start;
        p.add_row(vec![(r, 1.0)], 1.0);
        p.add_row(vec![(r, 2.0)], 3.0);
        let s = solve(&p, SolverSettings::default()).unwrap();
        assert_eq!(s.status, Status::Infeasible);
    }

    #[test]
    fn psd_infeasibility_is_detected() {
        // X ⪰ 0 with Tr X = −1
        let mut p = ConeProgram::new("negative trace");
        let a = p.add_psd(2);
        let id = HermitianMatrix::identity(2).to_svec();
        let row = p
            .block_range(a)
            .zip(id)
            .filter(|(_, v)| *v != 0.0)
            .collect::<Vec<_>>();
        p.add_row(row, -1.0);
        let s = solve(&p, SolverSettings::default()).unwrap();
        assert_eq!(s.status, Status::Infeasible);
    }

    #[test]
    fn unbounded_is_detected() {
        // minimize −t with no constraints on a free variable
        let mut p = ConeProgram::new("unbounded");
        let t = p.add_free(1);
        let a = p.add_psd(1);
        p.add_objective(t, &[-1.0]);
        let ra = p.block_range(a).start;
        p.add_row(vec![(ra, 1.0)], 1.0);
        let s = solve(&p, SolverSettings::default()).unwrap();
        assert_eq!(s.status, Status::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let x = HermitianMatrix::diag(&[1.0, -1.0]);
        let (mut p, a, b) = trace_norm_program(&x);
        // duplicate every equation with a factor
        let rows = p.rows.clone();
        let rhs = p.rhs.clone();
        for (row, r) in rows.into_iter().zip(rhs) {
            p.add_row(row.into_iter().map(|(j, v)| (j, 2.0 * v)).collect(), 2.0 * r);
        }
        let _ = (a, b);
        let s = solve(&p, SolverSettings::new(1e-8, 50_000)).unwrap();
        assert!(s.is_optimal());
        assert!((s.primal_value - 2.0).abs() < 1e-6);
    }

    #[test]
    fn random_trace_norms() {
        for seed in 0..100 {
            let mut r = random::rng(1000 + seed);
            let n = 2 + (seed as usize % 3);
            let x = random::unit_hermitian(&mut r, n);
            let (p, _, _) = trace_norm_program(&x);
            let s = solve(&p, SolverSettings::new(1e-8, 50_000)).unwrap();
            assert!(s.is_optimal(), "seed {seed}: {:?}", s.status);
            let exact = x.trace_norm().unwrap();
            assert!((s.primal_value - exact).abs() < 1e-6, "seed {seed}");
            assert!(s.dual_value <= s.primal_value + 1e-7);
        }
    }

    #[test]
    fn dump_lists_all_rows() {
        let x = HermitianMatrix::diag(&[1.0, 2.0]);
        let (p, _, _) = trace_norm_program(&x);
        let d = p.dump();
        assert!(d.starts_with("# trace norm"));
        assert!(d.contains("vars 8 constraints 4"));
    }

    #[test]
    fn projection_clips_negative_part() {
        let x = HermitianMatrix::diag(&[2.0, -1.0]);
        let p = project_psd(&x).unwrap();
        assert!((p.get(0, 0).re - 2.0).abs() < 1e-12);
        assert!(p.get(1, 1).re.abs() < 1e-12);
    }

    #[test]
    fn feasibility_finds_a_density_matrix() {
        let mut p = ConeProgram::new("feasibility");
        let a = p.add_psd(3);
        let id = HermitianMatrix::identity(3).to_svec();
        let row = p.block_range(a).zip(id).filter(|(_, v)| *v != 0.0).collect();
        p.add_row(row, 1.0);
        let s = solve(&p, SolverSettings::default()).unwrap();
        assert_eq!(s.status, Status::Optimal);
        let rho = s.primal_matrix(a);
        assert!((rho.trace() - 1.0).abs() < 1e-6);
        assert!(rho.min_eigenvalue().unwrap() > -1e-8);
    }

    #[test]
    fn scaling_the_data_scales_the_value() {
        let mut r = random::rng(17);
        let x = random::hermitian(&mut r, 3);
        let base = solve(&trace_norm_program(&x).0, SolverSettings::new(1e-9, 50_000)).unwrap();
        for k in [1e-3, 0.5, 7.0, 1e3] {
            let s = solve(&trace_norm_program(&x.scale(k)).0, SolverSettings::new(1e-9, 50_000)).unwrap();
            assert!(s.is_optimal());
            assert!((s.primal_value - k * base.primal_value).abs() < 1e-6 * k * base.primal_value, "k = {k}");
        }
    }

    #[test]
    fn trace_norms_across_dimensions() {
        let mut r = random::rng(23);
        for n in 2..=6 {
            let x = random::hermitian(&mut r, n);
            let s = solve(&trace_norm_program(&x).0, SolverSettings::new(1e-9, 50_000)).unwrap();
            let exact = x.trace_norm().unwrap();
            assert!((s.primal_value - exact).abs() < 1e-6 * (1.0 + exact), "n = {n}");
        }
    }

    #[test]
    fn projection_is_idempotent_and_fixes_psd() {
        let mut r = random::rng(29);
        for i in 0..50 {
            let x = random::hermitian(&mut r, 2 + i % 4);
            let p = project_psd(&x).unwrap();
            let pp = project_psd(&p).unwrap();
            assert!(p.sub(&pp).frobenius_norm() < 1e-12);
            assert!(p.min_eigenvalue().unwrap() > -1e-12);
        }
        let y = random::psd(&mut r, 3);
        assert!(project_psd(&y).unwrap().sub(&y).frobenius_norm() < 1e-12);
    }
}
