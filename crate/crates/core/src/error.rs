use thiserror::Error;

use crate::gls::{Digit, SpecIssue};
use crate::rat::{fmt_rat, Rat};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid GLS table: {}", join_issues(.0))]
    InvalidSpec(Vec<SpecIssue>),

    #[error("digit {0} is not in the digit set")]
    InvalidDigit(Digit),

    #[error("digit {digit} at position {position} is not in the digit set")]
    DigitAt { position: u64, digit: Digit },

    #[error("{0} is outside [0, 1]")]
    OutOfUnitInterval(String),

    /// The orbit reached a point not covered by any branch (0 for the Lüroth families).
    #[error("expansion terminates at {}", fmt_rat(.0))]
    Terminal(Rat),

    #[error("cannot resolve digit: enclosure still straddles a branch boundary at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("constant is rational; an irrational rotation is required")]
    RationalConstant,

    #[error("sequence has no element at index {0}")]
    SequenceExhausted(u64),

    #[error("approximate points are not allowed in exact mode")]
    ApproximateInExactMode,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("{what}: cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: u64 },

    #[error(
        "no cutoff for level {level} within {cap} columns (smallest failing discrepancy {})",
        fmt_rat(.best)
    )]
    CutoffSearchExhausted { level: usize, cap: u64, best: Rat },

    #[error("schedule rejected: row {row} at n = {n} does not stay below 1/{level}")]
    ScheduleRejected { level: usize, row: usize, n: u64 },

    #[error("column {0} lies beyond the cutoff schedule; extend the schedule")]
    ScheduleExhausted(u64),

    #[error("digit position {0} lies beyond the emitted range")]
    PositionOutOfRange(u64),

    #[error("block of length {r} does not fit in {n} digits")]
    BlockTooLong { r: usize, n: usize },

    #[error("orbit not periodic within {0} steps")]
    Undecided(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_issues(issues: &[SpecIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// `true` for errors caused by a configured resource limit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::CutoffSearchExhausted { .. }
                | Error::PrecisionExhausted { .. }
                | Error::Undecided(_)
        )
    }
}
