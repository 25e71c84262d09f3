use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("rank {rank} out of range for S_{n}")]
    RankOutOfRange { rank: usize, n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("degree {n} outside supported range {min}..={max}")]
    UnsupportedDegree { n: usize, min: usize, max: usize },

    #[error("partition {partition} does not label an irrep of S_{n}")]
    ShapeMismatch { partition: String, n: usize },

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("spectral function is missing block {0}")]
    MissingBlock(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid mode list: {0}")]
    InvalidModes(String),

    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),

    #[error("sector {sector} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { sector: String, min_eigenvalue: f64 },

    #[error("input state has vanishing norm ({0:e})")]
    VanishingNorm(f64),

    #[error("phase profile requires the Fourier unitary")]
    NotFourier,

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
