use std::fmt;

use thiserror::Error;

/// Stable rule / failure identifiers surfaced to users and scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    Prox,
    Smooth,
    Incidence,
    Range,
    Parse,
    Mcv,
    McvInvalid,
    Dim,
    NotApplicable,
    Singular,
    Lemma41,
    Dual,
    NotNpi,
    Closed,
    Nef,
    Realize,
    Empty,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Prox => "E_PROX",
            Code::Smooth => "E_SMOOTH",
            Code::Incidence => "E_INCIDENCE",
            Code::Range => "E_RANGE",
            Code::Parse => "E_PARSE",
            Code::Mcv => "E_MCV",
            Code::McvInvalid => "E_MCV_INVALID",
            Code::Dim => "E_DIM",
            Code::NotApplicable => "E_NA",
            Code::Singular => "E_SINGULAR",
            Code::Lemma41 => "E_LEMMA41",
            Code::Dual => "E_DUAL",
            Code::NotNpi => "E_NOT_NPI",
            Code::Closed => "E_CLOSED",
            Code::Nef => "E_NEF",
            Code::Realize => "E_REALIZE",
            Code::Empty => "E_EMPTY",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One violated configuration rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: Code,
    pub message: String,
}

impl Violation {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid configuration: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("{code}: {message}")]
    Failed { code: Code, message: String },
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Error::Failed {
            code,
            message: message.into(),
        }
    }

    /// All rule identifiers carried by this error, deduplicated and sorted.
    pub fn codes(&self) -> Vec<Code> {
        let mut out: Vec<Code> = match self {
            Error::Invalid(v) => v.iter().map(|x| x.code).collect(),
            Error::Failed { code, .. } => vec![*code],
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn has(&self, code: Code) -> bool {
        self.codes().contains(&code)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
