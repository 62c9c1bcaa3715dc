//! Closed-loop simulation: obstacle views, guidance, safety filter, Euler step.

use crate::error::SimError;
use crate::guidance::{target_reached, Guidance};
use crate::obstacle::{obstacle_state_at, Obstacle, ObstacleView};
use crate::output::{summarize, SummaryMetrics};
use crate::safety_filter::{control_step, QpStatus, SafetyParams};
use crate::scenario::ScenarioConfig;
use crate::vehicle::{step_vehicle, ControlInput, VehicleState};
use serde::Serialize;

/// Per-obstacle columns of one log row.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleRecord {
    pub d: f64,
    pub h_v: f64,
    pub h_psi: Option<f64>,
    pub gate_v: bool,
    pub gate_psi: bool,
}

/// State at time `t` and the input commanded from it.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub state: VehicleState,
    pub input: ControlInput,
    pub a_status: QpStatus,
    pub r_status: QpStatus,
    pub obstacles: Vec<ObstacleRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Violation,
    InfeasibleAccel,
    InfeasibleTurn,
    EdgeUndefined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub obstacle: Option<usize>,
}

/// Fixed-step record of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub records: Vec<StepRecord>,
    pub events: Vec<Event>,
}

/// Everything the loop needs, resolved from a scenario file.
#[derive(Debug, Clone)]
pub struct SimSetup {
    pub start: VehicleState,
    pub params: SafetyParams,
    pub guidance: Guidance,
    pub obstacles: Vec<Obstacle>,
    pub dt: f64,
    pub t_max: f64,
}

impl SimSetup {
    pub fn from_config(config: &ScenarioConfig) -> Self {
        Self {
            start: config.vehicle.start.state(),
            params: config.safety_params(),
            guidance: Guidance::new(config.guidance),
            obstacles: config.resolved_obstacles(),
            dt: config.sim.dt,
            t_max: config.sim.t_max,
        }
    }

    pub fn views_at(&self, t: f64) -> Vec<ObstacleView> {
        self.obstacles
            .iter()
            .map(|o| obstacle_state_at(o, t))
            .collect()
    }
}

/// Runs the loop until the target is reached or `t_max` passes.
pub fn simulate(mut setup: SimSetup) -> Result<TrajectoryLog, SimError> {
    if !(setup.dt > 0.0) {
        return Err(SimError::NonPositiveStep(setup.dt));
    }
    let mut log = TrajectoryLog {
        dt: setup.dt,
        ..Default::default()
    };
    let mut state = setup.start;
    let mut k: u64 = 0;
    loop {
        let t = k as f64 * setup.dt;
        if t > setup.t_max {
            break;
        }
        let views = setup.views_at(t);
        let nominal = setup.guidance.nominal_inputs(&state);
        let (input, diag) = control_step(&state, &views, nominal, &setup.params, setup.dt);

        for (i, o) in diag.obstacles.iter().enumerate() {
            if o.violation {
                log.events.push(Event {
                    t,
                    kind: EventKind::Violation,
                    obstacle: Some(i),
                });
            }
            if o.edge_undefined {
                log.events.push(Event {
                    t,
                    kind: EventKind::EdgeUndefined,
                    obstacle: Some(i),
                });
            }
        }
        if diag.accel.status == QpStatus::InfeasibleBestEffort {
            log.events.push(Event {
                t,
                kind: EventKind::InfeasibleAccel,
                obstacle: None,
            });
        }
        if diag.turn.status == QpStatus::InfeasibleBestEffort {
            log.events.push(Event {
                t,
                kind: EventKind::InfeasibleTurn,
                obstacle: None,
            });
        }
        log.records.push(StepRecord {
            t,
            state,
            input,
            a_status: diag.accel.status,
            r_status: diag.turn.status,
            obstacles: diag
                .obstacles
                .iter()
                .map(|o| ObstacleRecord {
                    d: o.d,
                    h_v: o.h_v,
                    h_psi: o.h_psi,
                    gate_v: o.gate_v,
                    gate_psi: o.gate_psi,
                })
                .collect(),
        });

        if target_reached(state.position(), &setup.guidance.config) {
            break;
        }
        state = step_vehicle(&state, input, setup.dt)?;
        k += 1;
    }
    Ok(log)
}

/// Runs a validated scenario and summarizes it.
pub fn run_scenario(config: &ScenarioConfig) -> Result<(TrajectoryLog, SummaryMetrics), SimError> {
    let log = simulate(SimSetup::from_config(config))?;
    let summary = summarize(&log, config);
    Ok((log, summary))
}
