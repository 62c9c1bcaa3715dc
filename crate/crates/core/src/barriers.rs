//! Nonsmooth speed and steering barriers built from the velocity obstacle.
//!
//! The speed barrier `h_v` is the minimum of four smooth components
//! `h^{k,j} = v + k·v_i·sin φ^j` minus `κ_min`. The steering barrier `h_ψ` is
//! the angular distance to the nearest VO edge minus `δ_min`. Each smooth
//! component has a time derivative that is affine in the single input its QP
//! decides on, represented by [`AffineRate`].

use crate::error::BarrierError;
use crate::geometry::Sign;
use crate::obstacle::ObstacleView;
use crate::safety_filter::SafetyParams;
use crate::vo_geometry::{edge_deltas, VoCone};

/// Floor on √(v² − v_i² sin² φ) below which the steering rate is singular.
pub const STEERING_RATE_FLOOR: f64 = 1e-6;

/// ḣ(u) = slope·u + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineRate {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineRate {
    pub fn at(&self, u: f64) -> f64 {
        self.slope * u + self.intercept
    }
}

/// Index of a speed component: (k, j).
pub type SpeedIndex = (Sign, Sign);

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedBarrierEval {
    /// `components[k][j]`, with index 0 = `+` and 1 = `−`.
    pub components: [[f64; 2]; 2],
    pub h_v: f64,
    pub almost_active: Vec<SpeedIndex>,
}

impl SpeedBarrierEval {
    pub fn component(&self, k: Sign, j: Sign) -> f64 {
        self.components[idx(k)][idx(j)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteeringBarrierEval {
    pub delta_plus: f64,
    pub delta_minus: f64,
    pub delta_vo: f64,
    pub h_psi: f64,
    pub almost_active: Vec<Sign>,
}

impl SteeringBarrierEval {
    pub fn delta(&self, j: Sign) -> f64 {
        match j {
            Sign::Plus => self.delta_plus,
            Sign::Minus => self.delta_minus,
        }
    }

    /// The smooth component h^j_ψ = δ^j − δ_min.
    pub fn component(&self, j: Sign, delta_min: f64) -> f64 {
        self.delta(j) - delta_min
    }
}

fn idx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// h^{k,j}_v = v + k·v_i·sin φ^j.
pub fn speed_component(v: f64, obstacle: &ObstacleView, cone: &VoCone, k: Sign, j: Sign) -> f64 {
    v + k.value() * obstacle.v_i * cone.edge(j).phi.sin()
}

pub fn eval_speed_barrier(
    v: f64,
    obstacle: &ObstacleView,
    cone: &VoCone,
    params: &SafetyParams,
) -> SpeedBarrierEval {
    let mut components = [[0.0; 2]; 2];
    for k in Sign::BOTH {
        for j in Sign::BOTH {
            components[idx(k)][idx(j)] = speed_component(v, obstacle, cone, k, j);
        }
    }
    let min = components
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let h_v = min - params.kappa_min;
    // |h^{k,j} − h_v| = (h^{k,j} − min) + κ_min, evaluated in that order so the
    // minimizer gives exactly κ_min
    let mut almost_active = Vec::with_capacity(4);
    for k in Sign::BOTH {
        for j in Sign::BOTH {
            if (components[idx(k)][idx(j)] - min) + params.kappa_min <= params.eps_v {
                almost_active.push((k, j));
            }
        }
    }
    SpeedBarrierEval {
        components,
        h_v,
        almost_active,
    }
}

/// Time derivative of h^{k,j}_v as an affine function of the acceleration.
pub fn speed_rate_affine(obstacle: &ObstacleView, cone: &VoCone, k: Sign, j: Sign) -> AffineRate {
    let edge = cone.edge(j);
    let (s, c) = edge.phi.sin_cos();
    let phi_rate = -obstacle.psi_i_dot + edge.psi_cc_rate;
    AffineRate {
        slope: 1.0,
        intercept: k.value() * (obstacle.v_i_dot * s + obstacle.v_i * c * phi_rate),
    }
}

pub fn eval_steering_barrier(
    psi: f64,
    cone: &VoCone,
    params: &SafetyParams,
) -> Result<SteeringBarrierEval, BarrierError> {
    for j in Sign::BOTH {
        if !cone.edge(j).is_defined() {
            return Err(BarrierError::UndefinedEdge(j));
        }
    }
    let (delta_plus, delta_minus) =
        edge_deltas(psi, cone).expect("both edges checked defined above");
    let delta_vo = if delta_plus.abs() < delta_minus.abs() {
        delta_plus
    } else {
        delta_minus
    };
    let h_psi = delta_vo - params.delta_min;
    let almost_active = Sign::BOTH
        .into_iter()
        .filter(|&j| {
            let delta = if j == Sign::Plus {
                delta_plus
            } else {
                delta_minus
            };
            (delta - delta_vo).abs() <= params.eps_psi
        })
        .collect();
    Ok(SteeringBarrierEval {
        delta_plus,
        delta_minus,
        delta_vo,
        h_psi,
        almost_active,
    })
}

/// Time derivative of the VO edge offset ϑ^j, given the acceleration `u2`.
pub fn theta_rate(
    v: f64,
    obstacle: &ObstacleView,
    cone: &VoCone,
    u2: f64,
    j: Sign,
) -> Result<f64, BarrierError> {
    let edge = cone.edge(j);
    let (s, c) = edge.phi.sin_cos();
    let disc = v * v - obstacle.v_i * obstacle.v_i * s * s;
    if !(disc > 0.0) || disc.sqrt() <= STEERING_RATE_FLOOR {
        return Err(BarrierError::SingularRate(j));
    }
    let root = disc.sqrt();
    let phi_rate = -obstacle.psi_i_dot + edge.psi_cc_rate;
    Ok(phi_rate * obstacle.v_i * c / root
        + (v * obstacle.v_i_dot - obstacle.v_i * u2) * s / (v * root))
}

/// Time derivative of h^j_ψ as an affine function of the turning rate, with
/// the acceleration already fixed at `u2`.
pub fn steering_rate_affine(
    v: f64,
    obstacle: &ObstacleView,
    cone: &VoCone,
    u2: f64,
    j: Sign,
) -> Result<AffineRate, BarrierError> {
    let vo_rate = cone.edge(j).psi_cc_rate + theta_rate(v, obstacle, cone, u2, j)?;
    // δ⁺ = ψ − ψ_vo⁺, δ⁻ = ψ_vo⁻ − ψ
    let sign = j.value();
    Ok(AffineRate {
        slope: sign,
        intercept: -sign * vo_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::vehicle::VehicleState;
    use crate::vo_geometry::vo_cone;
    use std::f64::consts::FRAC_PI_2;

    fn params() -> SafetyParams {
        SafetyParams::reference()
    }

    fn crossing() -> (VehicleState, ObstacleView, VoCone) {
        let veh = VehicleState::new(0.0, 0.0, 0.0, 0.7);
        let obs = ObstacleView::moving(Vec2::new(20.0, 0.0), 0.5, FRAC_PI_2, 10.0);
        let cone = vo_cone(&veh, &obs, 10.0).unwrap();
        (veh, obs, cone)
    }

    #[test]
    fn stationary_speed_barrier() {
        let veh = VehicleState::new(0.0, 0.0, 0.3, 0.4);
        let obs = ObstacleView::stationary(Vec2::new(25.0, 3.0), 10.0);
        let cone = vo_cone(&veh, &obs, 10.0).unwrap();
        let eval = eval_speed_barrier(veh.v, &obs, &cone, &params());
        assert!(eval.components.iter().flatten().all(|&c| c == 0.4));
        assert!((eval.h_v - 0.35).abs() < 1e-15);
        let rate = speed_rate_affine(&obs, &cone, Sign::Plus, Sign::Minus);
        assert_eq!(
            rate,
            AffineRate {
                slope: 1.0,
                intercept: 0.0
            }
        );
    }

    #[test]
    fn crossing_speed_barrier_value() {
        let (veh, obs, cone) = crossing();
        let eval = eval_speed_barrier(veh.v, &obs, &cone, &params());
        let expected_min = 0.7 - 0.5 * 3f64.sqrt() / 2.0;
        assert!((expected_min - 0.2670).abs() < 1e-4);
        assert!((eval.h_v - (expected_min - 0.05)).abs() < 1e-12);
        assert!((eval.h_v - 0.2170).abs() < 1e-4);
        // sin φ⁺ = sin φ⁻, so both (−, j) components tie for the minimum
        assert_eq!(
            eval.almost_active,
            vec![(Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)]
        );
    }

    #[test]
    fn boundary_speed_barrier_is_zero() {
        let (_, obs, cone) = crossing();
        let worst = cone.plus.phi.sin().abs().max(cone.minus.phi.sin().abs());
        let v = obs.v_i * worst + 0.05;
        let eval = eval_speed_barrier(v, &obs, &cone, &params());
        assert!(eval.h_v.abs() < 1e-15);
    }

    #[test]
    fn steering_barrier_on_right_edge() {
        let (_, _, cone) = crossing();
        let p = params();
        let psi = cone.minus.psi_vo.unwrap();
        let eval = eval_steering_barrier(psi, &cone, &p).unwrap();
        assert_eq!(eval.delta_minus, 0.0);
        assert_eq!(eval.delta_vo, 0.0);
        assert!((eval.h_psi + p.delta_min).abs() < 1e-15);
    }

    #[test]
    fn steering_barrier_crossing_values() {
        let (_, _, cone) = crossing();
        let eval = eval_steering_barrier(0.0, &cone, &params()).unwrap();
        assert!((eval.delta_plus + 1.1905).abs() < 5e-5);
        assert!((eval.delta_minus - 0.1433).abs() < 5e-5);
        assert_eq!(eval.delta_vo, eval.delta_minus);
        assert!((eval.h_psi - 0.0933).abs() < 5e-5);
        assert_eq!(eval.almost_active, vec![Sign::Minus]);
        // inside the cone, both distances are negative
        let mid = 0.5 * (cone.plus.psi_vo.unwrap() + cone.minus.psi_vo.unwrap());
        let inside = eval_steering_barrier(mid, &cone, &params()).unwrap();
        assert!(inside.delta_plus < 0.0 && inside.delta_minus < 0.0);
        assert!(inside.h_psi < 0.0);
    }

    #[test]
    fn steering_tie_picks_minus_and_keeps_both_active() {
        let veh = VehicleState::new(0.0, 0.0, 0.0, 0.5);
        let obs = ObstacleView::stationary(Vec2::new(20.0, 0.0), 10.0);
        let cone = vo_cone(&veh, &obs, 10.0).unwrap();
        let eval = eval_steering_barrier(0.0, &cone, &params()).unwrap();
        assert_eq!(eval.delta_vo, eval.delta_minus);
        assert_eq!(eval.almost_active, vec![Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn undefined_edge_is_an_error() {
        let veh = VehicleState::new(0.0, 0.0, 0.0, 0.4);
        let obs = ObstacleView::moving(
            Vec2::new(20.0, 0.0),
            0.5,
            2.0 * std::f64::consts::FRAC_PI_3,
            10.0,
        );
        let cone = vo_cone(&veh, &obs, 10.0).unwrap();
        assert!(matches!(
            eval_steering_barrier(0.0, &cone, &params()),
            Err(BarrierError::UndefinedEdge(_))
        ));
    }

    #[test]
    fn steering_rate_static_obstacle() {
        let veh = VehicleState::new(0.0, 0.0, 0.2, 0.4);
        let obs = ObstacleView::stationary(Vec2::new(20.0, 5.0), 10.0);
        let cone = vo_cone(&veh, &obs, 10.0).unwrap();
        let plus = steering_rate_affine(veh.v, &obs, &cone, 0.1, Sign::Plus).unwrap();
        let minus = steering_rate_affine(veh.v, &obs, &cone, 0.1, Sign::Minus).unwrap();
        assert_eq!(plus.slope, 1.0);
        assert_eq!(minus.slope, -1.0);
        assert_eq!(plus.intercept, -cone.plus.psi_cc_rate);
        assert_eq!(minus.intercept, cone.minus.psi_cc_rate);
    }

    #[test]
    fn steering_rate_singular_at_edge_speed() {
        let (_, obs, cone) = crossing();
        let v = obs.v_i * cone.plus.phi.sin().abs();
        assert!(matches!(
            steering_rate_affine(v, &obs, &cone, 0.0, Sign::Plus),
            Err(BarrierError::SingularRate(Sign::Plus))
        ));
    }
}
