use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |ρ - ρ†| = {0:e}")]
    NotHermitian(f64),
    #[error("matrix does not have unit trace: |Tr ρ - 1| = {0:e}")]
    NotUnitTrace(f64),
    #[error("matrix is not positive semidefinite: min eigenvalue = {0:e}")]
    NotPositive(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not unitary: max |UU† - I| = {0:e}")]
    NotUnitary(f64),
    #[error("Gell-Mann index {0} out of range 1..=15")]
    GellMannIndex(usize),
    #[error("generator {0} has no closed-form exponential (supported: 2, 3, 5, 8, 10, 15)")]
    UnsupportedGenerator(usize),
    #[error("angle component {component} = {value} outside [{lower}, {upper}]")]
    AngleOutOfBounds {
        component: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("parameter {what} = {value} outside the domain of {family}")]
    Domain {
        family: String,
        what: String,
        value: f64,
    },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("all measurement branches have probability below {0:e}")]
    EmptyOutcome(f64),
    #[error("no closed-form CNOT result for family {family} at N = {iterations}")]
    UnsupportedOracle { family: String, iterations: usize },
    #[error("unknown {kind} identifier `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate ensemble: {dropped} of {total} samples lost their kept branch")]
    Degeneracy { dropped: usize, total: usize },
}
