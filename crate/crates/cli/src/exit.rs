use std::fmt;

use sperner_core::map::ParseError;
use sperner_core::Error;

pub const USAGE: i32 = 2;
pub const PARSE: i32 = 3;
pub const RANGE: i32 = 4;
pub const REFINEMENT_EXHAUSTED: i32 = 5;
pub const RESOURCE_CAP: i32 = 6;
pub const VALIDATION: i32 = 7;
pub const IO: i32 = 8;
pub const INTERNAL: i32 = 9;

/// A check requested on the command line did not hold.
#[derive(Debug)]
pub struct ValidationFailed(pub String);

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ValidationFailed {}

/// A map file failed to parse; carries the file name for the diagnostic.
#[derive(Debug)]
pub struct MapFileError {
    pub path: String,
    pub source: ParseError,
}

impl fmt::Display for MapFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.path, self.source)
    }
}

impl std::error::Error for MapFileError {}

pub fn code_for(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<ValidationFailed>().is_some() {
        return VALIDATION;
    }
    if err.downcast_ref::<MapFileError>().is_some() {
        return PARSE;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return IO;
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return VALIDATION;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Parse(_)) => PARSE,
        Some(Error::MapRange(_) | Error::DivisionByZero { .. } | Error::NonFinite { .. }) => RANGE,
        Some(Error::RefinementExhausted(_)) => REFINEMENT_EXHAUSTED,
        Some(Error::ResourceCap { .. }) => RESOURCE_CAP,
        Some(Error::Internal(_)) => INTERNAL,
        Some(
            Error::InvalidParameter(_) | Error::InvalidPoint(_) | Error::Precondition(_) | Error::UnknownBuiltin(_),
        ) => USAGE,
        None => INTERNAL,
    }
}
