use num_complex::Complex64;
use thiserror::Error;

/// A lattice point `-(k_1 a_1 + ... + k_M a_M)` of `Γ_M(·|a)` together with
/// the number of index tuples that land on it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PoleReport {
    pub location: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    OnCut(Complex64),

    #[error("argument {arg} is within pole tolerance of the lattice point {} (multiplicity {})", pole.location, pole.multiplicity)]
    NearPole { arg: Complex64, pole: PoleReport },

    #[error("quadrature did not reach tolerance: estimate {estimate:e}, error {error:e} after {evaluations} evaluations")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("requested order {requested} exceeds the coefficient budget {budget}")]
    BudgetExceeded { requested: usize, budget: usize },

    #[error("lattice sum only valid for Re(s) > {bound}, got Re(s) = {re_s}")]
    OutOfOracleRegime { re_s: f64, bound: f64 },

    #[error("|arg(w)| must be below pi for the asymptotic expansion, got w = {0}")]
    ArgOutOfRange(Complex64),

    #[error("subset {subset:?} (argument {arg}) failed: {source}")]
    Subset {
        subset: Vec<usize>,
        arg: Complex64,
        #[source]
        source: Box<Error>,
    },

    #[error("method domain violated: {0}")]
    MethodDomain(String),

    #[error("M = N: the law is not compound Poisson and has no atom")]
    NotCompoundPoisson,

    #[error("assertion failed: {0}")]
    AssertionFailure(String),

    #[error("negative moment requires k a_i < b_0 (k a_i = {ka}, b_0 = {b0})")]
    MomentDomain { ka: f64, b0: f64 },

    #[error("series or product did not converge: {0}")]
    NonConvergence(String),

    #[error("b_j / a_i = {ratio} is not a positive integer within tolerance")]
    NotMultiple { ratio: f64 },

    #[error("operation requires probabilistic mode: {0}")]
    ModeError(String),

    #[error("sampler configuration: {0}")]
    ConfigError(String),

    #[error("Selberg parameter domain: {0}")]
    ParamDomain(String),

    #[error("Mellin transform requires Re(q) < tau = {tau}, got q = {q}")]
    MellinDomain { q: Complex64, tau: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach the subset identity to an evaluation failure inside an `S_N` sum.
    pub(crate) fn in_subset(self, subset: &[usize], arg: Complex64) -> Error {
        Error::Subset {
            subset: subset.to_vec(),
            arg,
            source: Box::new(self),
        }
    }

    /// Strip `Subset` wrappers and return the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::Subset { source, .. } => source.root(),
            other => other,
        }
    }
}
