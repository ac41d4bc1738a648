//! Decimal rendering used by every structured output: reals are written as
//! JSON numbers with 17 significant digits, which round-trips any `f64`.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Renders `x` in scientific notation with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no literal for these; callers never emit them for valid data.
        "null".to_string()
    }
}

/// Newtype that serializes an `f64` at 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub(crate) fn sig17<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    Sig17(*x).serialize(serializer)
}

pub(crate) fn sig17_opt<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    x.map(Sig17).serialize(serializer)
}
