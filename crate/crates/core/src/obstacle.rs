//! Moving-obstacle motion models and the per-step view the controller sees.

use crate::geometry::{wrap_to_pi, Vec2};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Declared bounds on an obstacle's motion: speed, |v̇_i| and |ψ̇_i|.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObstacleBounds {
    pub v_max: f64,
    pub a_max: f64,
    pub r_max: f64,
}

/// Exact kinematics of an obstacle at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSample {
    pub p: Vec2,
    /// Speed ‖v_i‖ ≥ 0.
    pub speed: f64,
    /// Course angle ∠v_i (0 when the obstacle is at rest and has no direction).
    pub course: f64,
    pub speed_rate: f64,
    pub course_rate: f64,
}

/// One obstacle as seen by the safety filter at a given instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleView {
    pub p: Vec2,
    pub v_i: f64,
    pub psi_i: f64,
    pub v_i_dot: f64,
    pub psi_i_dot: f64,
    /// Minimum center-to-center distance to keep.
    pub d_min: f64,
    /// Activation distance of the speed barrier.
    pub d_v: f64,
    /// Activation distance of the steering barrier (< d_v).
    pub d_psi: f64,
    pub bounds: ObstacleBounds,
}

impl ObstacleView {
    pub fn velocity(&self) -> Vec2 {
        Vec2::from_polar(self.v_i, self.psi_i)
    }

    /// A stationary obstacle with activation distances set to infinity.
    pub fn stationary(p: Vec2, d_min: f64) -> Self {
        Self {
            p,
            v_i: 0.0,
            psi_i: 0.0,
            v_i_dot: 0.0,
            psi_i_dot: 0.0,
            d_min,
            d_v: f64::INFINITY,
            d_psi: f64::INFINITY,
            bounds: ObstacleBounds::default(),
        }
    }

    /// An obstacle moving at constant velocity, activation distances infinite.
    pub fn moving(p: Vec2, v_i: f64, psi_i: f64, d_min: f64) -> Self {
        Self {
            v_i,
            psi_i,
            bounds: ObstacleBounds {
                v_max: v_i,
                a_max: 0.0,
                r_max: 0.0,
            },
            ..Self::stationary(p, d_min)
        }
    }
}

/// Motion law of an obstacle. Every variant has closed-form kinematics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObstacleModel {
    ConstantVelocity {
        p0: Vec2,
        velocity: Vec2,
    },
    /// Back-and-forth motion parallel to the y axis on `x = x0`, between
    /// `y0 - bound` and `y0 + bound`. Cruises at `axis_speed` and reverses
    /// with a symmetric trapezoid at `turn_accel`, coming to rest exactly at
    /// each end. `phase` is the initial arc length (m) along the loop,
    /// measured from the lower end going up, in `[0, 4·bound)`.
    LinePatrol {
        x0: f64,
        y0: f64,
        axis_speed: f64,
        bound: f64,
        turn_accel: f64,
        phase: f64,
    },
    /// Uniform motion on a circle; negative `angular_rate` is clockwise.
    /// `phase` is the initial polar angle about `center`.
    CircularOrbit {
        center: Vec2,
        radius: f64,
        angular_rate: f64,
        phase: f64,
    },
}

/// One leg of a patrol: from rest at one end to rest at the other.
struct PatrolLeg {
    length: f64,
    accel: f64,
    peak: f64,
    ramp_time: f64,
    ramp_dist: f64,
    cruise_time: f64,
}

impl PatrolLeg {
    fn new(bound: f64, cruise: f64, accel: f64) -> Self {
        let length = 2.0 * bound;
        let ramp_dist = (cruise * cruise / (2.0 * accel)).min(bound);
        let peak = (2.0 * accel * ramp_dist).sqrt();
        let ramp_time = peak / accel;
        let cruise_time = (length - 2.0 * ramp_dist) / peak;
        Self {
            length,
            accel,
            peak,
            ramp_time,
            ramp_dist,
            cruise_time,
        }
    }

    fn duration(&self) -> f64 {
        2.0 * self.ramp_time + self.cruise_time
    }

    /// (distance along leg, speed, speed rate) at time `tau` into the leg.
    fn at(&self, tau: f64) -> (f64, f64, f64) {
        let total = self.duration();
        if tau < self.ramp_time {
            (0.5 * self.accel * tau * tau, self.accel * tau, self.accel)
        } else if tau < self.ramp_time + self.cruise_time {
            (
                self.ramp_dist + self.peak * (tau - self.ramp_time),
                self.peak,
                0.0,
            )
        } else {
            let rem = (total - tau).max(0.0);
            (
                self.length - 0.5 * self.accel * rem * rem,
                self.accel * rem,
                -self.accel,
            )
        }
    }

    /// Time into the leg at which the distance `s` is reached.
    fn time_of(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.length);
        if s < self.ramp_dist {
            (2.0 * s / self.accel).sqrt()
        } else if s <= self.length - self.ramp_dist {
            self.ramp_time + (s - self.ramp_dist) / self.peak
        } else {
            self.duration() - (2.0 * (self.length - s) / self.accel).sqrt()
        }
    }
}

impl ObstacleModel {
    /// Closed-form kinematics at time `t ≥ 0`.
    pub fn sample(&self, t: f64) -> MotionSample {
        match *self {
            ObstacleModel::ConstantVelocity { p0, velocity } => {
                let speed = velocity.norm();
                MotionSample {
                    p: p0 + velocity * t,
                    speed,
                    course: if speed > 0.0 { velocity.angle() } else { 0.0 },
                    speed_rate: 0.0,
                    course_rate: 0.0,
                }
            }
            ObstacleModel::LinePatrol {
                x0,
                y0,
                axis_speed,
                bound,
                turn_accel,
                phase,
            } => {
                let leg = PatrolLeg::new(bound, axis_speed, turn_accel);
                let leg_time = leg.duration();
                let loop_len = 2.0 * leg.length;
                let phase = phase.rem_euclid(loop_len);
                let t0 = if phase < leg.length {
                    leg.time_of(phase)
                } else {
                    leg_time + leg.time_of(phase - leg.length)
                };
                let tc = (t0 + t).rem_euclid(2.0 * leg_time);
                let (going_up, tau) = if tc < leg_time {
                    (true, tc)
                } else {
                    (false, tc - leg_time)
                };
                let (s, speed, speed_rate) = leg.at(tau);
                let (y, course) = if going_up {
                    (y0 - bound + s, FRAC_PI_2)
                } else {
                    (y0 + bound - s, -FRAC_PI_2)
                };
                MotionSample {
                    p: Vec2::new(x0, y),
                    speed,
                    course,
                    speed_rate,
                    // the heading flip happens at rest and is not a rate
                    course_rate: 0.0,
                }
            }
            ObstacleModel::CircularOrbit {
                center,
                radius,
                angular_rate,
                phase,
            } => {
                let theta = phase + angular_rate * t;
                let tangent = if angular_rate >= 0.0 {
                    theta + FRAC_PI_2
                } else {
                    theta - FRAC_PI_2
                };
                MotionSample {
                    p: center + Vec2::from_polar(radius, theta),
                    speed: radius * angular_rate.abs(),
                    course: wrap_to_pi(tangent),
                    speed_rate: 0.0,
                    course_rate: angular_rate,
                }
            }
        }
    }

    /// Bounds implied by the model's parameters.
    pub fn natural_bounds(&self) -> ObstacleBounds {
        match *self {
            ObstacleModel::ConstantVelocity { velocity, .. } => ObstacleBounds {
                v_max: velocity.norm(),
                a_max: 0.0,
                r_max: 0.0,
            },
            ObstacleModel::LinePatrol {
                axis_speed,
                turn_accel,
                ..
            } => ObstacleBounds {
                v_max: axis_speed,
                a_max: turn_accel,
                r_max: 0.0,
            },
            ObstacleModel::CircularOrbit {
                radius,
                angular_rate,
                ..
            } => ObstacleBounds {
                v_max: radius * angular_rate.abs(),
                a_max: 0.0,
                r_max: angular_rate.abs(),
            },
        }
    }
}

/// An obstacle in a scenario: its motion law, declared bounds and the
/// distances the controller uses for it.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub model: ObstacleModel,
    pub bounds: ObstacleBounds,
    pub d_min: f64,
    pub d_v: f64,
    pub d_psi: f64,
}

/// The controller's view of `obstacle` at time `t`.
pub fn obstacle_state_at(obstacle: &Obstacle, t: f64) -> ObstacleView {
    let m = obstacle.model.sample(t);
    ObstacleView {
        p: m.p,
        v_i: m.speed,
        psi_i: m.course,
        v_i_dot: m.speed_rate,
        psi_i_dot: m.course_rate,
        d_min: obstacle.d_min,
        d_v: obstacle.d_v,
        d_psi: obstacle.d_psi,
        bounds: obstacle.bounds,
    }
}

/// Samples the model every 10 ms over `[0, horizon]` and checks that the
/// declared bounds are never exceeded.
pub fn check_obstacle_bounds(model: &ObstacleModel, bounds: &ObstacleBounds, horizon: f64) -> bool {
    const STEP: f64 = 1e-2;
    const TOL: f64 = 1e-9;
    let n = (horizon / STEP).ceil() as usize;
    (0..=n).all(|k| {
        let m = model.sample(k as f64 * STEP);
        m.speed <= bounds.v_max + TOL
            && m.speed_rate.abs() <= bounds.a_max + TOL
            && m.course_rate.abs() <= bounds.r_max + TOL
    })
}
