use thiserror::Error;

/// Errors raised while building models or solving the scattering problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("phi = {0} is outside the open interval (0, pi) guard band")]
    InvalidPhi(f64),

    #[error("invalid lattice convention: {0}")]
    InvalidLattice(String),

    #[error("invalid interaction window: {0}")]
    InvalidWindow(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The matching system has no usable pivot, or a nearest-neighbour hopping
    /// of a tridiagonal Hamiltonian vanishes and cuts the chain.
    #[error("singular matching system: {0}")]
    SingularSystem(String),

    #[error("zero total hopping between sites {from} and {to}")]
    ZeroHopping { from: i64, to: i64 },

    #[error("window entry ({i}, {j}) is beyond nearest-neighbour range")]
    NotTridiagonal { i: i64, j: i64 },

    #[error("closed form is singular: {0}")]
    SingularCoupling(String),

    #[error("no closed form is available for {0}")]
    NoClosedForm(String),
}

impl Error {
    /// True for errors that mark a singular point of a model rather than bad input.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            Error::SingularSystem(_) | Error::ZeroHopping { .. } | Error::SingularCoupling(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
