use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group closure exceeded the bound of {limit} elements")]
    ClosureExceeded { limit: usize },

    #[error("generator {generator} does not preserve the state space: {detail}")]
    InvalidTransformation { generator: usize, detail: String },

    #[error("invalid vertex list: {0}")]
    InvalidVertexList(String),

    #[error("orbit escaped the state set: {0}")]
    OrbitEscape(String),

    #[error("unsupported number of parties {0} (supported: 2..=4)")]
    UnsupportedArity(usize),

    #[error("state is not an exchange eigenstate (symmetric weight {sym_weight:.3e}, antisymmetric weight {anti_weight:.3e})")]
    NotExchangeEigenstate { sym_weight: f64, anti_weight: f64 },

    #[error("not a swap-invariant density matrix: {0}")]
    NotSymmetricState(String),

    #[error("map is not idempotent (residual {residual})")]
    NotIdempotent { residual: String },

    #[error("idempotent is not permutation invariant")]
    NotSymmetrisation,

    #[error("could not separate central projections after {attempts} samples")]
    DegenerateCenter { attempts: usize },

    #[error("unknown theory '{0}'")]
    UnknownTheory(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("theory file: {0}")]
    Schema(String),

    #[error("theory validation failed: {0}")]
    Validation(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ClosureExceeded { .. } => 3,
            Error::BadParams(_) | Error::UnsupportedArity(_) => 4,
            Error::UnknownTheory(_) => 4,
            Error::InvalidTransformation { .. }
            | Error::InvalidVertexList(_)
            | Error::OrbitEscape(_)
            | Error::Schema(_)
            | Error::Validation(_)
            | Error::DimensionMismatch(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable tag, emitted in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ClosureExceeded { .. } => "closure_exceeded",
            Error::InvalidTransformation { .. } => "invalid_transformation",
            Error::InvalidVertexList(_) => "invalid_vertex_list",
            Error::OrbitEscape(_) => "orbit_escape",
            Error::UnsupportedArity(_) => "unsupported_arity",
            Error::NotExchangeEigenstate { .. } => "not_exchange_eigenstate",
            Error::NotSymmetricState(_) => "not_symmetric_state",
            Error::NotIdempotent { .. } => "not_idempotent",
            Error::NotSymmetrisation => "not_symmetrisation",
            Error::DegenerateCenter { .. } => "degenerate_center",
            Error::UnknownTheory(_) => "unknown_theory",
            Error::BadParams(_) => "bad_params",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Schema(_) => "schema",
            Error::Validation(_) => "validation",
        }
    }
}
