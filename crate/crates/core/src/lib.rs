pub mod choi;
pub mod decision;
pub mod error;
pub mod hermitian;
pub mod io;
pub mod norms;
pub mod oracles;
pub mod random;
pub mod section;
pub mod solver;
pub mod subspace;

pub use choi::{ChoiMatrix, KrausMap};
pub use error::{Error, Result};
pub use hermitian::{HermitianMatrix, MatrixRecord, Spectrum};
pub use section::{DualSectionView, Section, SectionLabel};
pub use solver::{ConeProgram, ConeSolution, SolverSettings, Status};
pub use norms::{ExtendedReal, Method, NormOptions, NormResult};
pub use decision::{Certificate, DecisionProblem, Experiment, GeneralizedPOVM};
