//! JSON descriptors for sections and experiments, and file helpers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decision::{DecisionProblem, Experiment};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MatrixRecord};
use crate::section::Section;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MatrixRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<MatrixRecord>,
    /// Inner section for `generalized`, `povm` and `dual`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<SectionDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<usize>,
}

fn field<T>(v: Option<T>, name: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| Error::Input(format!("field \"{name}\" is required for kind \"{kind}\"")))
}

fn matrix(record: &MatrixRecord, name: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::from_record(record, true).map_err(|e| Error::Input(format!("field \"{name}\": {e}")))
}

fn dims_exact(d: &SectionDescriptor, n: usize) -> Result<()> {
    if d.dims.len() != n || d.dims.contains(&0) {
        return Err(Error::Input(format!(
            "field \"dims\": kind \"{}\" expects {n} positive entries, got {:?}",
            d.kind, d.dims
        )));
    }
    Ok(())
}

impl SectionDescriptor {
    pub fn build(&self) -> Result<Section> {
        let kind = self.kind.as_str();
        match kind {
            "states" => {
                if self.dims.is_empty() || self.dims.contains(&0) {
                    return Err(Error::Input("field \"dims\": states needs positive dimensions".into()));
                }
                Section::states(self.dims.iter().product())
            }
            "singleton" => Section::singleton(&matrix(field(self.matrix.as_ref(), "matrix", kind)?, "matrix")?),
            "channels" => {
                dims_exact(self, 2)?;
                Section::channels(self.dims[0], self.dims[1])
            }
            "combs" => {
                if self.dims.len() < 2 || self.dims.contains(&0) {
                    return Err(Error::Input("field \"dims\": combs needs at least two positive dimensions".into()));
                }
                Section::comb(&self.dims)
            }
            "generalized" => {
                dims_exact(self, 1)?;
                let base = field(self.base.as_ref(), "base", kind)?.build()?;
                Section::generalized(&base, self.dims[0])
            }
            "povm" => {
                let base = field(self.base.as_ref(), "base", kind)?.build()?;
                Section::povm(&base, field(self.outcomes, "outcomes", kind)?)
            }
            "dual" => field(self.base.as_ref(), "base", kind)?.build()?.dual(),
            "custom" => {
                let basis = field(self.basis.as_ref(), "basis", kind)?
                    .iter()
                    .enumerate()
                    .map(|(i, r)| matrix(r, &format!("basis[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let normalizer = matrix(field(self.normalizer.as_ref(), "normalizer", kind)?, "normalizer")?;
                Section::custom(&basis, &normalizer)
            }
            other => Err(Error::Input(format!("field \"kind\": unknown section kind \"{other}\""))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PayoffDescriptor {
    Classical { table: Vec<Vec<f64>> },
    Quantum { operators: Vec<MatrixRecord> },
}

impl PayoffDescriptor {
    pub fn build(&self) -> Result<DecisionProblem> {
        match self {
            PayoffDescriptor::Classical { table } => DecisionProblem::classical(table.clone())
                .map_err(|e| Error::Input(format!("field \"payoff.table\": {e}"))),
            PayoffDescriptor::Quantum { operators } => {
                let ops = operators
                    .iter()
                    .enumerate()
                    .map(|(i, r)| matrix(r, &format!("payoff.operators[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                DecisionProblem::quantum(ops)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDescriptor {
    pub section: SectionDescriptor,
    pub family: Vec<MatrixRecord>,
    #[serde(default)]
    pub prior: Vec<f64>,
    pub payoff: PayoffDescriptor,
}

impl ExperimentDescriptor {
    /// An empty prior means uniform.
    pub fn build(&self) -> Result<(Experiment, DecisionProblem)> {
        let section = self.section.build()?;
        let family = self
            .family
            .iter()
            .enumerate()
            .map(|(i, r)| matrix(r, &format!("family[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let experiment = if self.prior.is_empty() {
            Experiment::uniform(section, family)?
        } else {
            Experiment::new(section, family, self.prior.clone())?
        };
        Ok((experiment, self.payoff.build()?))
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    parse(&read_to_string(path)?, &path.display().to_string())
}

pub fn read_matrix(path: &Path) -> Result<HermitianMatrix> {
    let record: MatrixRecord = read_json(path)?;
    HermitianMatrix::from_record(&record, true)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write_matrix(path: &Path, m: &HermitianMatrix) -> Result<()> {
    let text = serde_json::to_string(&m.to_record())?;
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}
