use thiserror::Error;

use crate::cyclo::CycloError;
use crate::invariants::InvariantError;
use crate::laplace::LaplaceError;
use crate::laurent::LaurentError;
use crate::qkit::QkitError;
use crate::wrt::WrtError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Qkit(#[from] QkitError),
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error(transparent)]
    Wrt(#[from] WrtError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// 1 verification failure, 2 bad input, 3 inadmissible or excluded case.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Json(_) | Error::Io(_) => 2,
            Error::Laurent(LaurentError::Parse(_)) => 2,
            Error::Cyclo(e) => cyclo_code(e),
            Error::Laplace(e) => laplace_code(e),
            Error::Wrt(e) => wrt_code(e),
            Error::Invariant(e) => match e {
                InvariantError::Parse(_) | InvariantError::UnknownBuiltin(_) => 2,
                InvariantError::BadFraming(_)
                | InvariantError::InadmissibleOrder(_)
                | InvariantError::Refinement(_)
                | InvariantError::ZeroNormalizer => 3,
                InvariantError::TruncationTooShort { .. } => 2,
                InvariantError::Laplace(e) => laplace_code(e),
                InvariantError::Cyclo(e) => cyclo_code(e),
                InvariantError::Wrt(e) => wrt_code(e),
                InvariantError::Internal(_) => 1,
            },
            _ => 1,
        }
    }
}

fn cyclo_code(e: &CycloError) -> i32 {
    match e {
        CycloError::NotPrimitive { .. } | CycloError::Parse(_) => 2,
        CycloError::InadmissibleOrder(_) => 3,
        _ => 1,
    }
}

fn laplace_code(e: &LaplaceError) -> i32 {
    match e {
        LaplaceError::CaseExcluded { .. }
        | LaplaceError::NotCoprime { .. }
        | LaplaceError::UnsupportedFraming(_)
        | LaplaceError::ZeroGaussSum { .. } => 3,
        LaplaceError::ZeroFraming => 2,
        _ => 1,
    }
}

fn wrt_code(e: &WrtError) -> i32 {
    match e {
        WrtError::Variant(_) | WrtError::ZeroDenominator | WrtError::ZeroNormalizer => 3,
        WrtError::BadColor => 2,
        WrtError::Laplace(e) => laplace_code(e),
        WrtError::Cyclo(e) => cyclo_code(e),
        _ => 1,
    }
}
