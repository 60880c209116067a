use thiserror::Error;

use crate::curve::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid curve: {}", render_violations(.0))]
    InvalidCurve(Vec<Violation>),

    #[error("invalid invariant: {0}")]
    InvalidInvariant(String),

    #[error("invalid line bundle class: {0}")]
    InvalidLine(String),

    #[error("twist {twist} at point '{label}' is outside [0, {order})")]
    TwistOutOfRange {
        label: String,
        twist: String,
        order: u32,
    },

    #[error("inputs live on different curves")]
    MixedCurves,

    #[error("empty linear combination has no curve")]
    EmptyCombination,

    #[error("{0} must have positive rank")]
    NonPositiveRank(&'static str),

    #[error("{0} is not a positive invariant")]
    NotPositive(&'static str),

    #[error("stability parameter is not generating")]
    NotGenerating,

    #[error("stability parameter is not orthogonal to the target invariant (pairing = {0})")]
    NotOrthogonal(String),

    #[error("degenerate segment: both endpoints are the same parameter")]
    DegenerateSegment,

    #[error("rank of the stability parameter is not positive along the whole segment")]
    RankNotPositiveOnSegment,

    #[error("invalid degree window: {0}")]
    InvalidWindow(String),

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("malformed document: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by ill-formed input (as opposed to
    /// well-formed input on which an operation is undefined).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidCurve(_)
                | Error::InvalidInvariant(_)
                | Error::InvalidLine(_)
                | Error::TwistOutOfRange { .. }
                | Error::MixedCurves
                | Error::EmptyCombination
                | Error::InvalidWindow(_)
                | Error::Malformed(_)
        )
    }
}

fn render_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
