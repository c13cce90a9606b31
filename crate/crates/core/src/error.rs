use thiserror::Error;

use crate::spaces::SpaceClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe size must be between 1 and {max}, got {size}")]
    InvalidUniverse { size: usize, max: usize },

    #[error("point {point} is outside a universe of {size} points")]
    PointOutOfRange { point: usize, size: usize },

    #[error("subset bit pattern {bits:#b} has bits outside a universe of {size} points")]
    MaskOutOfRange { bits: u32, size: usize },

    #[error("operation requires a nonempty collection")]
    EmptyCollection,

    #[error("operation requires a nonempty subset")]
    EmptySubset,

    #[error("universe mismatch: expected {expected} points, found {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("function table has length {len}, expected {expected}")]
    FunctionArity { len: usize, expected: usize },

    #[error(
        "function value {value} at position {position} is outside a codomain of {size} points"
    )]
    FunctionValue {
        position: usize,
        value: usize,
        size: usize,
    },

    #[error("{what} limit exceeded: requested {requested}, limit is {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("witness colors must be pairwise distinct points of the codomain")]
    NonDistinctColors,

    #[error("codomain needs at least {needed} points, got {size}")]
    CodomainTooSmall { needed: usize, size: usize },

    #[error("collection violates F0: some finite intersection of members is empty")]
    NotF0,

    #[error("centering violated at point {point}: {set} does not contain it")]
    CenteringViolation { point: usize, set: String },

    #[error("structure at point {point} is not a filterbase, so germs do not exist there")]
    NotFilterbase { point: usize },

    #[error("function is not centered at point {point}")]
    NotCenteredAt { point: usize },

    #[error("structure at point {point} is not a filter")]
    NotFilter { point: usize },

    #[error("space is not in category {class}")]
    NotInCategory { class: SpaceClass },

    #[error("cone leg {leg} does not lie in category {class}")]
    LegOutsideCategory { leg: usize, class: SpaceClass },

    #[error("no {kind} from {from} into {into}")]
    UnsupportedArrow {
        kind: &'static str,
        from: SpaceClass,
        into: SpaceClass,
    },

    #[error("point {point} has an empty collection, which has no reflection into {into}")]
    NoReflection { point: usize, into: SpaceClass },

    #[error("sequence cycle must be nonempty")]
    EmptyCycle,
}
