//! Batch front end: config parsing, pipeline commands and report rendering.

pub mod commands;
pub mod config;

use std::fmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or invalid configuration.
    Config {
        line: Option<usize>,
        field: String,
        message: String,
    },
    /// A numerical invariant or structural assumption failed.
    Invariant { invariant: String, detail: String },
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io(_) => EXIT_CONFIG,
            CliError::Invariant { .. } => EXIT_INVARIANT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { line: Some(l), field, message } => {
                write!(f, "config error at line {l}, field `{field}`: {message}")
            }
            CliError::Config { line: None, field, message } => write!(f, "config error in field `{field}`: {message}"),
            CliError::Invariant { invariant, detail } => write!(f, "invariant `{invariant}` failed: {detail}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<sobolev_core::Error> for CliError {
    fn from(e: sobolev_core::Error) -> Self {
        use sobolev_core::Error as E;
        let invariant = match &e {
            E::StructureError { invariant, .. } => invariant.clone(),
            E::AssumptionViolated { pole, .. } => format!("simple pole at {pole}"),
            E::ZerosNotSimple(_) => "zeros real and simple".into(),
            E::SingularSystem { .. } | E::InternalContradiction(_) => "kernel system solvable".into(),
            E::SingularConfiguration(_) => "distinct configuration".into(),
            E::EigenFailure { .. } => "eigensolver convergence".into(),
            E::DegenerateDivisor | E::DegenerateInput(_) => "nondegenerate input".into(),
            E::NotApplicable(_) => "applicable degree".into(),
            E::InvalidMeasure(_) | E::InvalidMassPoint(_) | E::Parse(_) => {
                return CliError::Config {
                    line: None,
                    field: "<product>".into(),
                    message: e.to_string(),
                }
            }
        };
        CliError::Invariant {
            invariant,
            detail: e.to_string(),
        }
    }
}
