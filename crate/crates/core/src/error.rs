use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed board document: {0}")]
    MalformedBoard(String),

    #[error("board size must be at least {min} for the {policy} overshoot policy, got {size}")]
    BoardTooSmall {
        size: usize,
        min: usize,
        policy: &'static str,
    },

    #[error("redirect {from} -> {to} is out of range for a board of size {size}")]
    RedirectOutOfRange { from: usize, to: usize, size: usize },

    #[error("square {0} redirects to itself")]
    SelfRedirect(usize),

    #[error("square {0} has more than one redirect")]
    DuplicateRedirect(usize),

    #[error("redirect cycle through square {0}")]
    RedirectCycle(usize),

    #[error("flat-track overshoot entry at position {position} is {found}, reflection gives {expected}")]
    OvershootMismatch {
        position: usize,
        found: usize,
        expected: usize,
    },

    #[error("unknown bundled board {0:?}")]
    UnknownBundledBoard(String),

    #[error("square {square} is outside 0..={size}")]
    SquareOutOfRange { square: usize, size: usize },

    #[error("square {0} is a redirect source and never a resting position")]
    NotResting(usize),

    #[error("square {0} is the finish square")]
    FinishState(usize),

    #[error("the finish square is unreachable from square {0}")]
    Unreachable(usize),

    #[error("game from square {start} did not finish within {cap} steps")]
    StepCapExceeded { start: usize, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no duration samples for square {0}")]
    EmptyHistogram(usize),

    #[error("invalid die {label:?}: {reason}")]
    InvalidDie { label: String, reason: String },

    #[error("a cycle needs at least 3 dice, got {0}")]
    TooFewDice(usize),

    #[error("malformed dice document: {0}")]
    MalformedDice(String),
}
