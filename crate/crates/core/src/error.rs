use thiserror::Error;

/// Failures of the collision-cone and velocity-obstacle geometry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("vehicle and obstacle centers coincide")]
    CoincidentPositions,
    #[error("separation already violated: d = {d} < d_min = {d_min}")]
    SeparationViolated { d: f64, d_min: f64 },
    #[error("relative velocity is zero, approach angle undefined")]
    ZeroRelativeVelocity,
    #[error("vehicle speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
}

/// Failures when evaluating barrier functions or their rates.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BarrierError {
    #[error("velocity obstacle edge {0:?} is undefined at the current speed")]
    UndefinedEdge(crate::geometry::Sign),
    #[error("steering rate is singular on edge {0:?} (sqrt(v^2 - v_i^2 sin^2 phi) below floor)")]
    SingularRate(crate::geometry::Sign),
}

/// Failures of the closed-loop simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("time step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("vehicle speed left the admissible range: v = {0}")]
    SpeedInvariant(f64),
}

/// Scenario loading and validation failures, each naming the offending field.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl ScenarioError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}
