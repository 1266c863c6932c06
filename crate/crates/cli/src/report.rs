//! The JSON report printed by every command.

use mfsing_core::{Dim, Error, MatrixFactorization, StableDims};
use serde::Serialize;
use serde_json::{json, Value};

use crate::problem::LoadError;

pub const SCHEMA: &str = "mfsing-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Indeterminate,
    Violation,
    ParseError,
    ResourceCap,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Indeterminate => 0,
            Status::Violation => 1,
            Status::ParseError => 2,
            Status::ResourceCap => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub rank0: usize,
    pub rank1: usize,
    pub potential: String,
    pub d0: Vec<Vec<String>>,
    pub d1: Vec<Vec<String>>,
}

impl From<&MatrixFactorization> for FactorizationReport {
    fn from(e: &MatrixFactorization) -> Self {
        FactorizationReport {
            rank0: e.rank0(),
            rank1: e.rank1(),
            potential: e.potential().to_string(),
            d0: e.d0().to_strings(),
            d1: e.d1().to_strings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_present: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfect: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub milnor: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            status: Status::Ok,
            dims: None,
            order: None,
            witness_present: None,
            perfect: None,
            milnor: None,
            factorization: None,
            location: None,
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn fail(mut self, status: Status, location: Option<String>, msg: impl Into<String>) -> Report {
        self.status = status;
        self.location = location;
        self.notes.push(msg.into());
        self
    }

    pub fn from_error(self, location: Option<String>, e: &Error) -> Report {
        let location = match (location, e) {
            (loc, Error::IdentityViolation { row, col, degree, .. }) => {
                let deg = degree.map(|d| format!(" at degree {d}")).unwrap_or_default();
                Some(format!("{}entry ({row}, {col}){deg}", loc.map(|l| format!("{l}, ")).unwrap_or_default()))
            }
            (loc, Error::Syntax { pos, .. }) => Some(format!("{}position {pos}", loc.map(|l| format!("{l}, ")).unwrap_or_default())),
            (loc, _) => loc,
        };
        self.fail(status_of(e), location, e.to_string())
    }

    pub fn from_load_error(self, e: &LoadError) -> Report {
        match e {
            LoadError::Format(msg) => self.fail(Status::ParseError, None, msg.clone()),
            LoadError::Math { location, error } => self.from_error(Some(location.clone()), error),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Exit status of a library error.
pub fn status_of(e: &Error) -> Status {
    match e {
        Error::Syntax { .. }
        | Error::UnknownVariable { .. }
        | Error::Unrepresentable { .. }
        | Error::InvalidRing(_)
        | Error::ContextMismatch(_)
        | Error::VariableCollision(_)
        | Error::MissingImage(_)
        | Error::Shape(_)
        | Error::NotPointCase(_)
        | Error::CharacteristicTooSmall { .. } => Status::ParseError,
        Error::IdentityViolation { .. }
        | Error::NotClosed
        | Error::ContractionInvalid { .. }
        | Error::NonIsolated(_)
        | Error::Internal(_) => Status::Violation,
        Error::ResourceCap(_) | Error::PeriodicityNotReached(_) | Error::WindowTooSmall(_) => Status::ResourceCap,
    }
}

pub fn dim_value(d: Dim) -> Value {
    match d {
        Dim::Finite(n) => json!(n),
        Dim::Infinite => json!("INFINITE"),
    }
}

pub fn stable_dims_value(d: &StableDims) -> Value {
    json!({ "even": dim_value(d.even), "odd": dim_value(d.odd) })
}

pub fn degree_dims_value<'a>(dims: impl IntoIterator<Item = (&'a i64, &'a usize)>) -> Value {
    Value::Array(dims.into_iter().map(|(n, d)| json!({ "degree": n, "dim": d })).collect())
}
