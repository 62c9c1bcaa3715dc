//! Unicycle vehicle state and its forward-Euler update.

use crate::error::SimError;
use crate::geometry::{wrap_to_pi, Vec2};
use serde::{Deserialize, Serialize};

/// Pose, heading and forward speed of the vehicle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub x: f64,
    pub y: f64,
    /// Heading in (−π, π].
    pub psi: f64,
    /// Forward speed, kept in (0, v_max] by the closed loop.
    pub v: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, psi: f64, v: f64) -> Self {
        Self {
            x,
            y,
            psi: wrap_to_pi(psi),
            v,
        }
    }

    pub fn position(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn velocity(&self) -> Vec2 {
        Vec2::from_polar(self.v, self.psi)
    }
}

/// Turning rate `r` (rad/s) and forward acceleration `a` (m/s²).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlInput {
    pub r: f64,
    pub a: f64,
}

/// One explicit Euler step of the unicycle kinematics.
///
/// The right-hand side uses the state before the update. A non-positive
/// resulting speed is reported as an invariant breach.
pub fn step_vehicle(
    state: &VehicleState,
    input: ControlInput,
    dt: f64,
) -> Result<VehicleState, SimError> {
    if !(dt > 0.0) {
        return Err(SimError::NonPositiveStep(dt));
    }
    let (s, c) = state.psi.sin_cos();
    let next = VehicleState {
        x: state.x + state.v * c * dt,
        y: state.y + state.v * s * dt,
        psi: wrap_to_pi(state.psi + input.r * dt),
        v: state.v + input.a * dt,
    };
    if !(next.v > 0.0) {
        return Err(SimError::SpeedInvariant(next.v));
    }
    Ok(next)
}
