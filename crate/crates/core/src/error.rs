use thiserror::Error;

use crate::arcoracle::OracleError;
use crate::covers::CoverError;
use crate::grothring::GrothError;
use crate::ratfunc::RatError;
use crate::resolution::ResolutionError;
use crate::toric::ToricError;

/// Any error the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Groth(#[from] GrothError),
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
