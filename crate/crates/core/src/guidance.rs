//! Nominal pure-pursuit guidance toward a target point.

use crate::geometry::{wrap_to_pi, Vec2};
use crate::vehicle::{ControlInput, VehicleState};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GuidanceConfig {
    pub target: Vec2,
    /// Desired cruise speed, in (0, v_max].
    pub v_d: f64,
    pub k_r: f64,
    pub k_a: f64,
    /// Acceptance radius around the target.
    pub d_acc: f64,
}

/// Heading that points straight at `target`, or `None` when already on it.
pub fn desired_heading(p: Vec2, target: Vec2) -> Option<f64> {
    let diff = target - p;
    (diff != Vec2::ZERO).then(|| diff.angle())
}

/// Guidance law with a remembered heading for the singular point `p = target`.
#[derive(Debug, Clone)]
pub struct Guidance {
    pub config: GuidanceConfig,
    last_heading: Option<f64>,
}

impl Guidance {
    pub fn new(config: GuidanceConfig) -> Self {
        Self {
            config,
            last_heading: None,
        }
    }

    /// Desired (r_d, a_d), unclamped. On the target itself the previous
    /// desired heading is held (or the current heading if there is none).
    pub fn nominal_inputs(&mut self, state: &VehicleState) -> ControlInput {
        let psi_d = desired_heading(state.position(), self.config.target)
            .or(self.last_heading)
            .unwrap_or(state.psi);
        self.last_heading = Some(psi_d);
        nominal_for_heading(state, psi_d, &self.config)
    }
}

/// r_d = −K_r·wrap(ψ − ψ_d), a_d = −K_a·(v − v_d).
pub fn nominal_for_heading(
    state: &VehicleState,
    psi_d: f64,
    config: &GuidanceConfig,
) -> ControlInput {
    ControlInput {
        r: -config.k_r * wrap_to_pi(state.psi - psi_d),
        a: -config.k_a * (state.v - config.v_d),
    }
}

/// Stateless form of [`Guidance::nominal_inputs`]; holds the current heading
/// when the vehicle sits exactly on the target.
pub fn nominal_inputs(state: &VehicleState, config: &GuidanceConfig) -> ControlInput {
    let psi_d = desired_heading(state.position(), config.target).unwrap_or(state.psi);
    nominal_for_heading(state, psi_d, config)
}

pub fn target_reached(p: Vec2, config: &GuidanceConfig) -> bool {
    (p - config.target).norm() <= config.d_acc
}
