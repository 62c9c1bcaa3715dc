//! Cascaded scalar safety filters.
//!
//! The acceleration is filtered first against the speed barriers of every
//! obstacle within its `d_v`. The turning rate is filtered second against the
//! steering barriers of every obstacle within its `d_psi`, using the
//! acceleration already committed. Each filter is a one-variable QP
//! `min (u − u_d)²` subject to `slope·u ≥ rhs` rows and a box, solved in
//! closed form by interval projection.
//!
//! Two rows not present in the barrier conditions keep the vehicle inside its
//! operating envelope over one discrete step: `a ≤ (v_max − v)/dt` and
//! `a ≥ (κ_min − v)/dt`.

use crate::barriers::{
    eval_speed_barrier, eval_steering_barrier, speed_rate_affine, steering_rate_affine, AffineRate,
    SpeedBarrierEval, SteeringBarrierEval, STEERING_RATE_FLOOR,
};
use crate::geometry::Sign;
use crate::obstacle::{ObstacleBounds, ObstacleView};
use crate::vehicle::{ControlInput, VehicleState};
use crate::vo_geometry::{vo_cone_clamped, VoCone};
use serde::{Deserialize, Serialize};

/// Barrier and input-limit parameters shared by all obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SafetyParams {
    pub kappa_min: f64,
    pub delta_min: f64,
    pub eps_v: f64,
    pub eps_psi: f64,
    /// Slope of the linear class-K function α(h) = γ·h.
    pub gamma: f64,
    pub r_max: f64,
    pub a_max: f64,
    pub v_max: f64,
}

impl SafetyParams {
    /// The values used for both reference scenarios.
    pub fn reference() -> Self {
        Self {
            kappa_min: 0.05,
            delta_min: 0.05,
            eps_v: 0.05,
            eps_psi: 0.05,
            gamma: 0.5,
            r_max: 0.5,
            a_max: 0.25,
            v_max: 0.7,
        }
    }

    /// Checks sign constraints and `eps_v ≥ kappa_min` (otherwise the speed
    /// barrier's almost-active set is always empty). Returns the offending
    /// field and a message.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let positive = [
            ("kappa_min", self.kappa_min),
            ("eps_v", self.eps_v),
            ("eps_psi", self.eps_psi),
            ("gamma", self.gamma),
            ("r_max", self.r_max),
            ("a_max", self.a_max),
            ("v_max", self.v_max),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err((name, format!("must be positive and finite, got {value}")));
            }
        }
        if !(self.delta_min >= 0.0 && self.delta_min < std::f64::consts::FRAC_PI_2) {
            return Err((
                "delta_min",
                format!("must lie in [0, pi/2), got {}", self.delta_min),
            ));
        }
        if self.eps_v < self.kappa_min {
            return Err((
                "eps_v",
                format!(
                    "eps_v = {} < kappa_min = {} leaves the almost-active set empty",
                    self.eps_v, self.kappa_min
                ),
            ));
        }
        Ok(())
    }

    /// α(h) = γ·h.
    pub fn alpha(&self, h: f64) -> f64 {
        self.gamma * h
    }
}

/// `slope·u ≥ lower_rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarConstraint {
    pub slope: f64,
    pub lower_rhs: f64,
}

impl ScalarConstraint {
    /// The barrier condition ḣ(u) ≥ −α(h) for an affine rate.
    pub fn from_rate(rate: AffineRate, h: f64, params: &SafetyParams) -> Self {
        Self {
            slope: rate.slope,
            lower_rhs: -params.alpha(h) - rate.intercept,
        }
    }

    /// Amount by which `u` violates the row (0 when satisfied).
    pub fn violation(&self, u: f64) -> f64 {
        (self.lower_rhs - self.slope * u).max(0.0)
    }

    pub fn slack(&self, u: f64) -> f64 {
        self.slope * u - self.lower_rhs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QpStatus {
    /// The desired input was returned unchanged.
    Inactive,
    /// A constraint row moved the input.
    Modified,
    /// Only the box moved the input.
    SaturatedFeasible,
    /// No input satisfies every row within the box.
    InfeasibleBestEffort,
}

impl QpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            QpStatus::Inactive => "inactive",
            QpStatus::Modified => "modified",
            QpStatus::SaturatedFeasible => "saturated_feasible",
            QpStatus::InfeasibleBestEffort => "infeasible_best_effort",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "inactive" => Some(QpStatus::Inactive),
            "modified" => Some(QpStatus::Modified),
            "saturated_feasible" => Some(QpStatus::SaturatedFeasible),
            "infeasible_best_effort" => Some(QpStatus::InfeasibleBestEffort),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterOutcome {
    pub value: f64,
    pub status: QpStatus,
    /// Slack of the tightest row at `value`; +∞ without rows.
    pub margin: f64,
}

/// Exact minimizer of (u − desired)² over `[-bound, bound]` subject to the rows.
///
/// Rows with slope > 0 are lower bounds, rows with slope < 0 upper bounds.
/// When the feasible interval is empty, returns the box endpoint with the
/// smaller worst-case violation (ties go to the endpoint nearer `desired`).
pub fn solve_scalar_qp(
    desired: f64,
    bound: f64,
    constraints: &[ScalarConstraint],
) -> FilterOutcome {
    debug_assert!(bound > 0.0);
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for c in constraints {
        if c.slope > 0.0 {
            lower = lower.max(c.lower_rhs / c.slope);
        } else if c.slope < 0.0 {
            upper = upper.min(c.lower_rhs / c.slope);
        } else if c.lower_rhs > 0.0 {
            // 0 ≥ rhs > 0 cannot hold anywhere
            lower = f64::INFINITY;
        }
    }
    let margin_at = |u: f64| {
        constraints
            .iter()
            .map(|c| c.slack(u))
            .fold(f64::INFINITY, f64::min)
    };
    let lo = lower.max(-bound);
    let hi = upper.min(bound);
    if lo <= hi {
        let value = desired.clamp(lo, hi);
        let status = if value == desired {
            QpStatus::Inactive
        } else if value == lower || value == upper {
            QpStatus::Modified
        } else {
            QpStatus::SaturatedFeasible
        };
        return FilterOutcome {
            value,
            status,
            margin: margin_at(value),
        };
    }
    let worst = |u: f64| {
        constraints
            .iter()
            .map(|c| c.violation(u))
            .fold(0.0, f64::max)
    };
    let (wl, wh) = (worst(-bound), worst(bound));
    let value = if wl < wh {
        -bound
    } else if wh < wl {
        bound
    } else if (desired + bound).abs() < (desired - bound).abs() {
        -bound
    } else {
        bound
    };
    FilterOutcome {
        value,
        status: QpStatus::InfeasibleBestEffort,
        margin: margin_at(value),
    }
}

/// Rows keeping v within [κ_min, v_max] after one Euler step of length `dt`.
pub fn speed_envelope_rows(v: f64, params: &SafetyParams, dt: f64) -> [ScalarConstraint; 2] {
    [
        ScalarConstraint {
            slope: -1.0,
            lower_rhs: -(params.v_max - v) / dt,
        },
        ScalarConstraint {
            slope: 1.0,
            lower_rhs: (params.kappa_min - v) / dt,
        },
    ]
}

/// The speed-barrier rows for one gated obstacle: one per almost-active (k, j).
pub fn speed_constraints(
    obstacle: &ObstacleView,
    cone: &VoCone,
    eval: &SpeedBarrierEval,
    params: &SafetyParams,
) -> Vec<ScalarConstraint> {
    eval.almost_active
        .iter()
        .map(|&(k, j)| {
            ScalarConstraint::from_rate(speed_rate_affine(obstacle, cone, k, j), eval.h_v, params)
        })
        .collect()
}

/// Acceleration filter over obstacles already gated by `d ≤ d_v`.
pub fn acceleration_filter(
    state: &VehicleState,
    obstacles: &[(ObstacleView, VoCone, SpeedBarrierEval)],
    a_desired: f64,
    params: &SafetyParams,
    dt_hint: f64,
) -> FilterOutcome {
    let mut rows: Vec<ScalarConstraint> = obstacles
        .iter()
        .flat_map(|(obs, cone, eval)| speed_constraints(obs, cone, eval, params))
        .collect();
    rows.extend(speed_envelope_rows(state.v, params, dt_hint));
    solve_scalar_qp(a_desired, params.a_max, &rows)
}

/// Steering filter over obstacles already gated by `d ≤ d_psi`, with the
/// acceleration fixed at `u2`. Returns the outcome and the indices (into
/// `obstacles`) skipped because a steering rate was singular.
pub fn steering_filter(
    state: &VehicleState,
    obstacles: &[(ObstacleView, VoCone, SteeringBarrierEval)],
    u2: f64,
    r_desired: f64,
    params: &SafetyParams,
) -> (FilterOutcome, Vec<usize>) {
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    'obstacles: for (i, (obs, cone, eval)) in obstacles.iter().enumerate() {
        let mut own = Vec::with_capacity(2);
        for &j in &eval.almost_active {
            match steering_rate_affine(state.v, obs, cone, u2, j) {
                Ok(rate) => own.push(ScalarConstraint::from_rate(rate, eval.h_psi, params)),
                Err(_) => {
                    skipped.push(i);
                    continue 'obstacles;
                }
            }
        }
        rows.extend(own);
    }
    (solve_scalar_qp(r_desired, params.r_max, &rows), skipped)
}

/// Whether the steering barrier and its rates are well defined: both VO edges
/// exist, at least one meets the speed circle on its forward ray, and
/// √(v² − v_i² sin² φ) clears the singularity floor on both.
pub fn steering_defined(v: f64, obstacle: &ObstacleView, cone: &VoCone) -> bool {
    !cone.misses_speed_circle()
        && Sign::BOTH.into_iter().all(|j| {
            let edge = cone.edge(j);
            let s = edge.phi.sin();
            let disc = v * v - obstacle.v_i * obstacle.v_i * s * s;
            edge.is_defined() && disc > 0.0 && disc.sqrt() > STEERING_RATE_FLOOR
        })
}

/// Per-obstacle record of one control step.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleDiagnostics {
    pub d: f64,
    pub h_v: f64,
    /// `None` when the steering barrier is undefined at this state.
    pub h_psi: Option<f64>,
    pub gate_v: bool,
    pub gate_psi: bool,
    /// d < d_min.
    pub violation: bool,
    /// Gated for steering but skipped because the barrier is undefined.
    pub edge_undefined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepDiagnostics {
    pub accel: FilterOutcome,
    pub turn: FilterOutcome,
    pub obstacles: Vec<ObstacleDiagnostics>,
}

/// One controller evaluation: gates, acceleration filter, then steering filter.
///
/// `nominal` holds the desired turning rate and acceleration. The returned
/// input always lies in the input box.
pub fn control_step(
    state: &VehicleState,
    all_obstacles: &[ObstacleView],
    nominal: ControlInput,
    params: &SafetyParams,
    dt_hint: f64,
) -> (ControlInput, StepDiagnostics) {
    let mut speed_set = Vec::new();
    let mut steer_set = Vec::new();
    let mut steer_owner = Vec::new();
    let mut diags = Vec::with_capacity(all_obstacles.len());

    for obs in all_obstacles {
        let cone = match vo_cone_clamped(state, obs, obs.d_min) {
            Ok(c) => c,
            Err(_) => {
                // coincident centers: nothing meaningful to constrain
                diags.push(ObstacleDiagnostics {
                    d: 0.0,
                    h_v: f64::NAN,
                    h_psi: None,
                    gate_v: true,
                    gate_psi: true,
                    violation: true,
                    edge_undefined: true,
                });
                continue;
            }
        };
        let d = cone.relative.d;
        let speed = eval_speed_barrier(state.v, obs, &cone, params);
        let steering = if steering_defined(state.v, obs, &cone) {
            eval_steering_barrier(state.psi, &cone, params).ok()
        } else {
            None
        };
        let gate_v = d <= obs.d_v;
        let gate_psi = d <= obs.d_psi;
        let diag = ObstacleDiagnostics {
            d,
            h_v: speed.h_v,
            h_psi: steering.as_ref().map(|s| s.h_psi),
            gate_v,
            gate_psi,
            violation: d < obs.d_min,
            edge_undefined: gate_psi && steering.is_none(),
        };
        if gate_v {
            speed_set.push((*obs, cone, speed));
        }
        if gate_psi {
            if let Some(s) = steering {
                steer_owner.push(diags.len());
                steer_set.push((*obs, cone, s));
            }
        }
        diags.push(diag);
    }

    let accel = acceleration_filter(state, &speed_set, nominal.a, params, dt_hint);
    let (turn, skipped) = steering_filter(state, &steer_set, accel.value, nominal.r, params);
    for i in skipped {
        diags[steer_owner[i]].edge_undefined = true;
    }
    (
        ControlInput {
            r: turn.value,
            a: accel.value,
        },
        StepDiagnostics {
            accel,
            turn,
            obstacles: diags,
        },
    )
}

/// Per-obstacle check of the sufficient conditions for forward invariance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstacleCheck {
    /// v_max ≥ v_max,i + κ_min.
    pub speed_ok: bool,
    /// a_max ≥ a_max,i.
    pub accel_ok: bool,
    /// r_max,i + (a_max,i + a_max)/κ_min, the conservative turn-rate bound.
    pub required_r_max: f64,
    /// r_max meets the conservative bound (advisory only).
    pub turn_rate_ok: bool,
}

impl ObstacleCheck {
    pub fn hard_pass(&self) -> bool {
        self.speed_ok && self.accel_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub obstacles: Vec<ObstacleCheck>,
}

impl ValidationReport {
    pub fn hard_pass(&self) -> bool {
        self.obstacles.iter().all(ObstacleCheck::hard_pass)
    }

    pub fn warnings(&self) -> usize {
        self.obstacles.iter().filter(|c| !c.turn_rate_ok).count()
    }
}

pub fn check_sufficient_conditions(
    params: &SafetyParams,
    obstacle_bounds: &[ObstacleBounds],
) -> ValidationReport {
    let obstacles = obstacle_bounds
        .iter()
        .map(|b| {
            let required_r_max = b.r_max + (b.a_max + params.a_max) / params.kappa_min;
            ObstacleCheck {
                speed_ok: params.v_max >= b.v_max + params.kappa_min,
                accel_ok: params.a_max >= b.a_max,
                required_r_max,
                turn_rate_ok: params.r_max >= required_r_max,
            }
        })
        .collect();
    ValidationReport { obstacles }
}
