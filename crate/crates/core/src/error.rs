use thiserror::Error;

use crate::ternary::Family;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown generator family `{family}` for algebra `{algebra}`")]
    UnknownFamily { algebra: String, family: Family },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("q must be nonzero (q = 0 gives the zero ternary algebra)")]
    ZeroQ,

    #[error("cannot raise numeric q to the non-constant exponent `{0}`")]
    NonConstantQPower(String),

    #[error("cannot invert `{0}` in the coefficient ring")]
    NotInvertible(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("map is not an endomorphism: violation on pattern {pattern}")]
    NotEndomorphism { pattern: String },

    #[error("twist cannot be untwisted: {reason}")]
    NotUntwistable {
        reason: String,
        nilpotent_order: Option<u32>,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
