use thiserror::Error;

use crate::dsl::ParseDiagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    NoModes,

    #[error("basis would hold {states} states, above the limit of {limit}")]
    BasisTooLarge { states: u128, limit: usize },

    #[error("occupation total {total} exceeds the basis cutoff {cutoff}")]
    CutoffExceeded { total: u32, cutoff: u32 },

    #[error("operands live on different bases")]
    BasisMismatch,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("element references mode {mode} more than once")]
    DuplicateMode { mode: usize },

    #[error("reflectivity {value} outside [0, 1]")]
    ReflectivityOutOfRange { value: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("not a permutation of the mode indices")]
    InvalidPermutation,

    #[error("invalid signal/ancilla mode partition: {0}")]
    ModePartition(String),

    #[error("photon total {photons} above the supported limit {limit}")]
    PhotonLimitExceeded { photons: u32, limit: u32 },

    #[error("input state has squared norm {norm_squared}, not 1 within tolerance")]
    Unnormalized { norm_squared: f64 },

    #[error("occupation {0} is not a state of this operator")]
    UnknownState(String),

    #[error("cannot interpret input state {0:?}")]
    BadInputState(String),

    #[error("cutoff {cutoff} below the minimum {minimum} required by `{name}`")]
    CutoffTooSmall {
        name: String,
        cutoff: u32,
        minimum: u32,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{} parse error(s) in circuit source", .0.iter().filter(|d| d.is_error()).count())]
    Parse(Vec<ParseDiagnostic>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
