use thiserror::Error;

/// Everything that can go wrong while building states or evaluating
/// entropy operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDim(usize),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error(
        "truncation too small: tail mass {tail:.3e} exceeds {tol:.1e} \
         (amplitude {amplitude:.4}, dim {dim}; try dim >= {suggested})"
    )]
    Truncation {
        tail: f64,
        tol: f64,
        amplitude: f64,
        dim: usize,
        suggested: usize,
    },

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operator is not Hermitian: max |M - M^dag| = {deviation:.3e} > {tol:.1e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("state is numerically pure (1/2 - eps = {gap:.3e}); the entropy operator is unbounded there")]
    NearPure { gap: f64 },

    #[error("operator has a negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),

    #[error("operator has a nontrivial kernel ({0} eigenvalues below cutoff)")]
    Kernel(usize),

    #[error("Wigner series did not converge: tail term {term:.3e} > {tol:.1e}")]
    SeriesTail { term: f64, tol: f64 },

    #[error("Wigner series value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),

    #[error("closed-form Wigner function requires real beta (got imaginary part {0})")]
    ComplexBeta(f64),

    #[error("eigensolver failed to converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures caused by a numerical guard (truncation or a
    /// degenerate, numerically pure state) rather than bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. } | Error::NearPure { .. } | Error::SeriesTail { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
