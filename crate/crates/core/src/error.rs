use thiserror::Error;

use crate::token::{Token, TokenSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("E_SYNTAX at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("E_UNKNOWN_TOKEN: {0}")]
    UnknownToken(String),
    #[error("E_ENT_DOMAIN: {0}")]
    EntDomain(String),
    #[error("E_DUP: {0}")]
    Dup(String),
    #[error("E_RESERVED: {0}")]
    Reserved(String),
    #[error("E_EMPTY: {0}")]
    Empty(String),
    #[error("E_BOUND: {0}")]
    Bound(String),
    #[error("E_NO_TRUTH: {0}")]
    NoTruth(String),
    #[error("E_TYPE: {0}")]
    Type(String),
    #[error("E_STAGE: {0}")]
    Stage(String),
    #[error("E_TABLE: {0}")]
    Table(String),
    #[error("E_INTERP_FAIL: no v with M < v < x for M = {m}, x = {x}")]
    InterpFail { m: TokenSet, x: Token },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "E_SYNTAX",
            Error::UnknownToken(_) => "E_UNKNOWN_TOKEN",
            Error::EntDomain(_) => "E_ENT_DOMAIN",
            Error::Dup(_) => "E_DUP",
            Error::Reserved(_) => "E_RESERVED",
            Error::Empty(_) => "E_EMPTY",
            Error::Bound(_) => "E_BOUND",
            Error::NoTruth(_) => "E_NO_TRUTH",
            Error::Type(_) => "E_TYPE",
            Error::Stage(_) => "E_STAGE",
            Error::Table(_) => "E_TABLE",
            Error::InterpFail { .. } => "E_INTERP_FAIL",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
