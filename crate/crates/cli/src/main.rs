use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gnorm_core::decision::{self, Candidate};
use gnorm_core::io::{self, ExperimentDescriptor, SectionDescriptor};
use gnorm_core::norms::{self, SolverStats};
use gnorm_core::{ChoiMatrix, Error, HermitianMatrix, Method, NormOptions, NormResult, Section};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const TOL_ENV: &str = "GNORM_DEFAULT_TOL";

#[derive(Parser)]
#[command(name = "gnorm", version, about = "Base norms on sections of the PSD cone, with discrimination and decision tools")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Solver tolerance (default: $GNORM_DEFAULT_TOL, else 1e-7)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Iteration cap for the conic solver
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Always use the conic program, even when a closed form exists
    #[arg(long, global = true)]
    conic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// ‖x‖ for the base norm of a section (or its dual order-unit norm)
    Norm {
        section: PathBuf,
        matrix: PathBuf,
        #[arg(long)]
        dual: bool,
        /// Directory for the q and (y₁, y₂) witnesses
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// log₂ inf{λ : a ⪯ λb}
    Dmax { a: PathBuf, b: PathBuf },
    /// Minimal error of discriminating two density matrices
    Helstrom {
        rho0: PathBuf,
        rho1: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
    /// Diamond norm of X₀ − X₁, or of λX₀ − (1−λ)X₁ with the Bayes error
    Diamond {
        choi0: PathBuf,
        choi1: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Strategy norm on the comb section over the given dimensions
    CombNorm {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        matrix: PathBuf,
    },
    /// Conditional min-entropy H_min(K|H) of a state on K ⊗ H
    Hmin {
        state: PathBuf,
        /// dK,dH
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Decide whether a candidate procedure is optimal for an experiment
    Certify { candidate: PathBuf, experiment: PathBuf },
    /// Whether a maximally entangled tester discriminates two channels optimally
    TesterCheck {
        choi0: PathBuf,
        choi1: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
    },
}

#[derive(Serialize)]
struct Report {
    command: String,
    version: &'static str,
    inputs_digest: String,
    values: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<SolverStats>,
    tolerance_requested: f64,
    /// Largest of the residuals and relative gap actually reached.
    tolerance_achieved: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    witnesses: Vec<String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum CandidateFile {
    Povm { effects: Vec<HermitianMatrix> },
    Channel { matrix: HermitianMatrix },
}

struct Run {
    opts: NormOptions,
    hasher: Sha256,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>, Error> {
        let bytes = std::fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(&bytes);
        Ok(bytes)
    }

    fn json<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> Result<T, Error> {
        let bytes = self.read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        io::parse(&text, &path.display().to_string())
    }

    fn matrix(&mut self, path: &Path) -> Result<HermitianMatrix, Error> {
        self.json(path)
    }

    fn choi(&mut self, path: &Path) -> Result<ChoiMatrix, Error> {
        let m = self.matrix(path)?;
        ChoiMatrix::from_matrix(m).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }

    fn flag(&mut self, name: &str, value: impl std::fmt::Display) {
        self.hasher.update(format!("{name}={value};").as_bytes());
    }

    fn report(self, command: &str, values: Value) -> Report {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            inputs_digest: hex::encode(self.hasher.finalize()),
            values,
            gap: None,
            method: None,
            solver: None,
            tolerance_requested: self.opts.tol,
            tolerance_achieved: 0.0,
            witnesses: Vec::new(),
        }
    }
}

fn with_norm(mut r: Report, n: &NormResult) -> Report {
    r.gap = Some(n.gap);
    r.method = Some(n.method);
    r.tolerance_achieved = n
        .stats
        .as_ref()
        .map_or(0.0, |s| s.primal_residual.max(s.dual_residual).max(s.relative_gap));
    r.solver = n.stats.clone();
    r
}

fn norm_values(n: &NormResult) -> Value {
    json!({"value": n.value, "primal_value": n.primal_value, "dual_value": n.dual_value})
}

fn write_witness(dir: &Path, name: &str, m: &HermitianMatrix) -> Result<String, Error> {
    let path = dir.join(name);
    io::write_matrix(&path, m)?;
    Ok(path.display().to_string())
}

fn default_tol() -> Result<f64, Error> {
    match std::env::var(TOL_ENV) {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| Error::Input(format!("{TOL_ENV}: expected a positive number, got {s:?}"))),
        Err(_) => Ok(NormOptions::default().tol),
    }
}

fn options(c: &Common) -> Result<NormOptions, Error> {
    let mut opts = NormOptions::with_tol(match c.tol {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(Error::Input(format!("--tol: expected a positive number, got {t}"))),
        None => default_tol()?,
    });
    if let Some(m) = c.max_iter {
        opts.max_iter = m;
    }
    opts.force_conic = c.conic;
    Ok(opts)
}

fn execute(cli: &Cli) -> Result<(Report, ExitCode), Error> {
    let opts = options(&cli.common)?;
    let mut run = Run {
        opts,
        hasher: Sha256::new(),
    };
    run.flag("tol", opts.tol);
    run.flag("max_iter", opts.max_iter);
    run.flag("conic", opts.force_conic);
    let ok = ExitCode::SUCCESS;
    match &cli.command {
        Command::Norm {
            section,
            matrix,
            dual,
            witness_out,
        } => {
            let desc: SectionDescriptor = run.json(section)?;
            let x = run.matrix(matrix)?;
            run.flag("dual", dual);
            let s = desc.build()?;
            let n = if *dual {
                norms::dual_base_norm(&s, &x, opts)?
            } else {
                norms::base_norm(&s, &x, opts)?
            };
            let mut values = norm_values(&n);
            values["section"] = json!(s.label().to_string());
            let mut r = with_norm(run.report("norm", values), &n);
            if let Some(dir) = witness_out {
                std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
                r.witnesses = vec![
                    write_witness(dir, "q.json", &n.primal_witness)?,
                    write_witness(dir, "y_plus.json", &n.dual_witness.0)?,
                    write_witness(dir, "y_minus.json", &n.dual_witness.1)?,
                ];
            }
            Ok((r, ok))
        }
        Command::Dmax { a, b } => {
            let a = run.matrix(a)?;
            let b = run.matrix(b)?;
            let v = norms::dmax(&a, &b)?;
            Ok((run.report("dmax", json!({ "value": v })), ok))
        }
        Command::Helstrom { rho0, rho1, lambda } => {
            let r0 = run.matrix(rho0)?;
            let r1 = run.matrix(rho1)?;
            run.flag("lambda", lambda);
            if opts.force_conic {
                let s = Section::states(r0.dim())?;
                let t = decision::bayes_error(&s, &r0, &r1, *lambda, opts)?;
                let r = with_norm(run.report("helstrom", json!({ "error": t.error, "norm": t.norm.value })), &t.norm);
                Ok((r, ok))
            } else {
                let (err, _) = decision::helstrom(&r0, &r1, *lambda)?;
                let mut r = run.report("helstrom", json!({ "error": err }));
                r.method = Some(Method::ClosedForm);
                Ok((r, ok))
            }
        }
        Command::Diamond { choi0, choi1, lambda } => {
            let x0 = run.choi(choi0)?;
            let x1 = run.choi(choi1)?;
            let l = lambda.unwrap_or(1.0);
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::Input(format!("--lambda: {l} is outside [0, 1]")));
            }
            run.flag("lambda", l);
            // without λ the plain difference X₀ − X₁ is used
            let (a, b) = if lambda.is_some() { (l, 1.0 - l) } else { (1.0, 1.0) };
            let diff = x0.combine(a, &x1, -b)?;
            let n = norms::diamond_norm(&diff, opts)?;
            let mut values = norm_values(&n);
            if lambda.is_some() {
                values["error"] = json!(0.5 * (1.0 - n.value));
            }
            Ok((with_norm(run.report("diamond", values), &n), ok))
        }
        Command::CombNorm { dims, matrix } => {
            let x = run.matrix(matrix)?;
            run.flag("dims", format!("{dims:?}"));
            let n = norms::ncomb_norm(dims, &x, opts)?;
            Ok((with_norm(run.report("comb-norm", norm_values(&n)), &n), ok))
        }
        Command::Hmin { state, dims } => {
            let sigma = run.matrix(state)?;
            run.flag("dims", format!("{dims:?}"));
            let [dk, dh] = dims[..] else {
                return Err(Error::Input(format!("--dims: expected dK,dH, got {dims:?}")));
            };
            let (h, n) = norms::hmin(&sigma, dk, dh, opts)?;
            let values = json!({"value": h, "norm": n.value, "primal_value": n.primal_value, "dual_value": n.dual_value});
            Ok((with_norm(run.report("hmin", values), &n), ok))
        }
        Command::Certify { candidate, experiment } => {
            let cand: CandidateFile = run.json(candidate)?;
            let desc: ExperimentDescriptor = run.json(experiment)?;
            let (e, p) = desc.build()?;
            let cand = match cand {
                CandidateFile::Povm { effects } => Candidate::Povm(effects),
                CandidateFile::Channel { matrix } => Candidate::Channel(matrix),
            };
            let cert = decision::certify_optimal(&cand, &e, &p, opts)?;
            let code = if cert.feasible { ok } else { ExitCode::from(3) };
            let mut r = run.report("certify", serde_json::to_value(&cert)?);
            r.tolerance_achieved = cert.dominance_residual;
            Ok((r, code))
        }
        Command::TesterCheck { choi0, choi1, lambda } => {
            let x0 = run.choi(choi0)?;
            let x1 = run.choi(choi1)?;
            run.flag("lambda", lambda);
            let (exists, residual) = decision::max_entangled_tester_exists(&x0, &x1, *lambda, opts.tol)?;
            let mut r = run.report("tester-check", json!({ "exists": exists, "residual": residual }));
            r.tolerance_achieved = residual;
            Ok((r, ok))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Json(_) | Error::Shape(_) | Error::NotHermitian { .. } => 1,
        Error::SolverFailure { .. } | Error::NumericalFailure(_) => 2,
        Error::Infeasible(_) | Error::Validation(_) | Error::Domain(_) => 3,
    }
}

fn summary(r: &Report) -> String {
    let mut s = format!("{}:", r.command);
    if let Value::Object(map) = &r.values {
        for (k, v) in map {
            s.push_str(&format!(" {k}={v}"));
        }
    }
    if let Some(g) = r.gap {
        s.push_str(&format!(" gap={g:.3e}"));
    }
    if let Some(m) = r.method {
        s.push_str(&format!(" method={}", serde_json::to_value(m).unwrap_or(Value::Null)));
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((report, code)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            eprintln!("{}", summary(&report));
            code
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if let Error::SolverFailure { lower, upper, .. } = &e {
                println!("{}", json!({"error": e.to_string(), "lower": lower, "upper": upper}));
            }
            ExitCode::from(code)
        }
    }
}
