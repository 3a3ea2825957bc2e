use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("unknown catalog lattice {0:?}")]
    UnknownLattice(String),
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric at entry ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("Gram matrix is not even: diagonal entry {index} equals {value}")]
    NotEven { index: usize, value: i64 },
    #[error("Gram matrix is not positive definite: leading minor of size {0} is not positive")]
    NotPositiveDefinite(usize),
    #[error("image leaves the tube domain (y1 = {y1:.3e}, Q0[y] = {q0:.3e}, |j| = {j_abs:.3e})")]
    DomainExit { y1: f64, q0: f64, j_abs: f64 },
    #[error("point is not in the tube domain (y1 = {y1:.3e}, Q0[y] = {q0:.3e})")]
    NotInDomain { y1: f64, q0: f64 },
    #[error("transport residual {0:.3e} exceeds 1e-7")]
    TransportFailure(f64),
    #[error("reflection vector is isotropic")]
    IsotropicReflectionVector,
    #[error("matrix does not have rank 2")]
    RankDeficient,
    #[error("enumeration needs about {needed} candidates but the budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("Re(s) = {re} is not above the convergence bound {bound}")]
    ConvergenceGuard { re: f64, bound: f64 },
    #[error("CZ + D is singular")]
    SingularDenominator,
    #[error("operator needs an X-independent input")]
    XDependentInput,
    #[error("pole at s = {at} (residue {residue:?})")]
    PoleAt { at: f64, residue: Option<f64> },
    #[error("quadrature did not reach tolerance within budget (estimate {0:.3e})")]
    QuadratureBudget(f64),
    #[error("Jacobi element has non-integral parameters")]
    NonIntegralEmbed,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
