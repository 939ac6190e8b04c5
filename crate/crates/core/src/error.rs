use thiserror::Error;

pub type Result<T> = std::result::Result<T, BarnError>;

/// Errors raised by the geometry, solver, oracle and field layers.
///
/// `name` is always the short parameter name used across the API
/// (`W`, `L`, `H`, `V`, `F`, `alpha`, `resolution`, ...) so that front ends
/// can point at the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BarnError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("parameter {name} = {value} is outside the supported domain [{min}, {max}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solver failed: {0}")]
    SolverFailure(String),
    #[error("element {index}: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<BarnError>,
    },
}

impl BarnError {
    /// Name of the offending parameter, if the error refers to one.
    pub fn parameter(&self) -> Option<&'static str> {
        match self {
            BarnError::InvalidParameter { name, .. } | BarnError::OutOfDomain { name, .. } => {
                Some(name)
            }
            BarnError::AtIndex { source, .. } => source.parameter(),
            _ => None,
        }
    }

    /// Like `Display`, but slope values are shown in degrees for front ends
    /// that take `alpha_deg`.
    pub fn describe_in_degrees(&self) -> String {
        match self {
            BarnError::InvalidParameter { name: "alpha", value, reason } => {
                format!("invalid parameter alpha_deg = {}: {reason}", round_degrees(*value))
            }
            BarnError::OutOfDomain { name: "alpha", value, min, max } => format!(
                "parameter alpha_deg = {} is outside the supported domain [{}, {}]",
                round_degrees(*value),
                round_degrees(*min),
                round_degrees(*max)
            ),
            BarnError::AtIndex { index, source } => {
                format!("element {index}: {}", source.describe_in_degrees())
            }
            other => other.to_string(),
        }
    }
}

/// Degrees with conversion noise removed, for messages only.
fn round_degrees(rad: f64) -> f64 {
    (rad.to_degrees() * 1e9).round() / 1e9
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BarnError::InvalidParameter {
            name,
            value,
            reason: "must be a finite positive number",
        })
    }
}
