//! Scenario files: JSON schema mirror, defaults and field-level validation.

use crate::error::ScenarioError;
use crate::geometry::wrap_to_pi;
use crate::guidance::GuidanceConfig;
use crate::obstacle::{check_obstacle_bounds, Obstacle, ObstacleBounds, ObstacleModel};
use crate::safety_filter::SafetyParams;
use crate::vehicle::VehicleState;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_MAX: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartState {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
    pub v: f64,
}

impl StartState {
    pub fn state(&self) -> VehicleState {
        VehicleState::new(self.x, self.y, self.psi, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfig {
    pub start: StartState,
    pub r_max: f64,
    pub a_max: f64,
    pub v_max: f64,
    /// Vehicle radius R; d_min,i defaults to R + R_i.
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SafetyConfig {
    pub kappa_min: f64,
    pub delta_min: f64,
    pub eps_v: f64,
    pub eps_psi: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// d_v,i − d_min,i.
    pub d_v_margin: f64,
    /// d_ψ,i − d_min,i.
    pub d_psi_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleConfig {
    /// Obstacle radius R_i.
    pub radius: f64,
    pub motion: ObstacleModel,
    pub bounds: ObstacleBounds,
    /// Optional override of R + R_i; may only enlarge it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            t_max: DEFAULT_T_MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vehicle: VehicleConfig,
    pub guidance: GuidanceConfig,
    pub safety: SafetyConfig,
    #[serde(default)]
    pub obstacles: Vec<ObstacleConfig>,
    #[serde(default)]
    pub sim: SimConfig,
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}
fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

/// A parsed scenario plus any warnings raised while applying defaults.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub config: ScenarioConfig,
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn safety_params(&self) -> SafetyParams {
        SafetyParams {
            kappa_min: self.safety.kappa_min,
            delta_min: self.safety.delta_min,
            eps_v: self.safety.eps_v,
            eps_psi: self.safety.eps_psi,
            gamma: self.safety.gamma,
            r_max: self.vehicle.r_max,
            a_max: self.vehicle.a_max,
            v_max: self.vehicle.v_max,
        }
    }

    pub fn d_min(&self, i: usize) -> f64 {
        let o = &self.obstacles[i];
        o.d_min.unwrap_or(self.vehicle.radius + o.radius)
    }

    /// Obstacles with d_min, d_ψ = d_psi_margin + d_min and
    /// d_v = d_ψ + (d_v_margin − d_psi_margin).
    pub fn resolved_obstacles(&self) -> Vec<Obstacle> {
        (0..self.obstacles.len())
            .map(|i| {
                let d_min = self.d_min(i);
                let d_psi = self.safety.d_psi_margin + d_min;
                Obstacle {
                    model: self.obstacles[i].motion.clone(),
                    bounds: self.obstacles[i].bounds,
                    d_min,
                    d_psi,
                    d_v: d_psi + (self.safety.d_v_margin - self.safety.d_psi_margin),
                }
            })
            .collect()
    }

    pub fn obstacle_bounds(&self) -> Vec<ObstacleBounds> {
        self.obstacles.iter().map(|o| o.bounds).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Field-level checks of every invariant the simulator relies on.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let finite = |field: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::invalid(
                    field,
                    format!("must be finite, got {x}"),
                ))
            }
        };
        let positive = |field: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::invalid(
                    field,
                    format!("must be positive, got {x}"),
                ))
            }
        };

        let v = &self.vehicle;
        positive("vehicle.r_max", v.r_max)?;
        positive("vehicle.a_max", v.a_max)?;
        positive("vehicle.v_max", v.v_max)?;
        positive("vehicle.radius", v.radius)?;
        finite("vehicle.start.x", v.start.x)?;
        finite("vehicle.start.y", v.start.y)?;
        finite("vehicle.start.psi", v.start.psi)?;
        if !(v.start.v > 0.0 && v.start.v <= v.v_max) {
            return Err(ScenarioError::invalid(
                "vehicle.start.v",
                format!("must lie in (0, v_max = {}], got {}", v.v_max, v.start.v),
            ));
        }

        let g = &self.guidance;
        finite("guidance.target.x", g.target.x)?;
        finite("guidance.target.y", g.target.y)?;
        if !(g.v_d > 0.0 && g.v_d <= v.v_max) {
            return Err(ScenarioError::invalid(
                "guidance.v_d",
                format!("must lie in (0, v_max = {}], got {}", v.v_max, g.v_d),
            ));
        }
        positive("guidance.k_r", g.k_r)?;
        positive("guidance.k_a", g.k_a)?;
        positive("guidance.d_acc", g.d_acc)?;

        self.safety_params()
            .validate()
            .map_err(|(field, msg)| ScenarioError::invalid(format!("safety.{field}"), msg))?;
        positive("safety.d_psi_margin", self.safety.d_psi_margin)?;
        finite("safety.d_v_margin", self.safety.d_v_margin)?;
        if self.safety.d_psi_margin >= self.safety.d_v_margin {
            return Err(ScenarioError::invalid(
                "safety.d_psi_margin",
                format!(
                    "steering activation margin {} must be below the speed margin {}",
                    self.safety.d_psi_margin, self.safety.d_v_margin
                ),
            ));
        }

        positive("sim.dt", self.sim.dt)?;
        positive("sim.t_max", self.sim.t_max)?;

        for (i, o) in self.obstacles.iter().enumerate() {
            let field = |name: &str| format!("obstacles[{i}].{name}");
            positive(&field("radius"), o.radius)?;
            if let Some(d) = o.d_min {
                let combined = v.radius + o.radius;
                if !(d >= combined && d.is_finite()) {
                    return Err(ScenarioError::invalid(
                        field("d_min"),
                        format!("override {d} must be at least R + R_i = {combined}"),
                    ));
                }
            }
            for (name, b) in [
                ("bounds.v_max", o.bounds.v_max),
                ("bounds.a_max", o.bounds.a_max),
                ("bounds.r_max", o.bounds.r_max),
            ] {
                if !(b >= 0.0 && b.is_finite()) {
                    return Err(ScenarioError::invalid(
                        field(name),
                        format!("must be non-negative, got {b}"),
                    ));
                }
            }
            validate_motion(&o.motion, &field)?;
            if !check_obstacle_bounds(&o.motion, &o.bounds, self.sim.t_max) {
                return Err(ScenarioError::invalid(
                    field("bounds"),
                    "declared bounds are exceeded by the motion model",
                ));
            }
        }
        Ok(())
    }
}

fn validate_motion(
    model: &ObstacleModel,
    field: &dyn Fn(&str) -> String,
) -> Result<(), ScenarioError> {
    let check = |name: &str, ok: bool, value: f64| {
        if ok {
            Ok(())
        } else {
            Err(ScenarioError::invalid(
                field(&format!("motion.{name}")),
                format!("invalid value {value}"),
            ))
        }
    };
    match *model {
        ObstacleModel::ConstantVelocity { p0, velocity } => {
            check("p0", p0.is_finite(), p0.x)?;
            check("velocity", velocity.is_finite(), velocity.x)
        }
        ObstacleModel::LinePatrol {
            x0,
            y0,
            axis_speed,
            bound,
            turn_accel,
            phase,
        } => {
            check("x0", x0.is_finite(), x0)?;
            check("y0", y0.is_finite(), y0)?;
            check(
                "axis_speed",
                axis_speed > 0.0 && axis_speed.is_finite(),
                axis_speed,
            )?;
            check("bound", bound > 0.0 && bound.is_finite(), bound)?;
            check(
                "turn_accel",
                turn_accel > 0.0 && turn_accel.is_finite(),
                turn_accel,
            )?;
            check("phase", (0.0..4.0 * bound).contains(&phase), phase)
        }
        ObstacleModel::CircularOrbit {
            center,
            radius,
            angular_rate,
            phase,
        } => {
            check("center", center.is_finite(), center.x)?;
            check("radius", radius > 0.0 && radius.is_finite(), radius)?;
            check("angular_rate", angular_rate.is_finite(), angular_rate)?;
            check("phase", phase.is_finite(), phase)
        }
    }
}

/// Parses and validates a scenario from JSON text.
pub fn parse_scenario(text: &str) -> Result<LoadedScenario, ScenarioError> {
    let raw: serde_json::Value = serde_json::from_str(text)?;
    let mut warnings = Vec::new();
    let has_gamma = raw.get("safety").and_then(|s| s.get("gamma")).is_some();
    if !has_gamma {
        warnings.push(format!(
            "safety.gamma missing, defaulting to {DEFAULT_GAMMA}"
        ));
    }
    let mut config: ScenarioConfig = serde_json::from_value(raw)?;
    config.vehicle.start.psi = wrap_to_pi(config.vehicle.start.psi);
    config.validate()?;
    Ok(LoadedScenario { config, warnings })
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<LoadedScenario, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}
