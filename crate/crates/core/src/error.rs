use thiserror::Error;

use crate::lattice::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorusError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(Violation),

    #[error("invalid local data: {0}")]
    InvalidLocalData(String),

    #[error("invalid global data: {0}")]
    InvalidGlobalData(String),

    #[error("map is not well defined on the quotient: {0}")]
    NotWellDefined(String),

    #[error("matrix 1 - h(F)/q^s is singular")]
    SingularMatrix,

    #[error("torus does not have good reduction (inertia acts nontrivially)")]
    NotGoodReduction,

    #[error("lattices are defined over different groups")]
    GroupMismatch,

    #[error("element {0} does not generate the group")]
    NotCyclic(usize),

    #[error("cross-check failure: {0}")]
    CrossCheckFailure(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("place {label}: {source}")]
    AtPlace {
        label: String,
        #[source]
        source: Box<TorusError>,
    },
}

impl TorusError {
    /// True for errors that indicate a failed self-consistency check rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            TorusError::CrossCheckFailure(_) | TorusError::Internal(_) => true,
            TorusError::AtPlace { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}
