use thiserror::Error;

/// Errors raised by model constructors and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A scalar argument fell outside its admissible domain.
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Two sequences that must agree in length did not.
    #[error("{what}: expected length {expected}, got {actual}")]
    Length {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// An objective returned NaN or an infinity.
    #[error("objective evaluated to a non-finite value at u = {at}")]
    NonFinite { at: f64 },

    /// A configuration violated one of its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

pub(crate) fn check_unit<T: crate::Scalar>(name: &'static str, value: T) -> Result<T> {
    if value.in_unit_interval() {
        Ok(value)
    } else {
        Err(ModelError::Domain {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1]",
        })
    }
}
