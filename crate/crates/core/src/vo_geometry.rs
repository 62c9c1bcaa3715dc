//! Collision cone and velocity obstacle geometry for one vehicle–obstacle pair.
//!
//! Angles follow the convention of the cone figure: `+` is the left edge,
//! `−` the right edge, both measured as absolute headings in (−π, π].

use crate::error::GeometryError;
use crate::geometry::{wrap_to_pi, Sign, Vec2};
use crate::obstacle::ObstacleView;
use crate::vehicle::VehicleState;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Below this ratio d / d_min the cone is flagged as near tangency.
pub const NEAR_TANGENCY_RATIO: f64 = 1.001;

/// Relative position and velocity of an obstacle with respect to the vehicle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeGeometry {
    /// r = p_i − p.
    pub r_vec: Vec2,
    pub d: f64,
    /// ∠r in (−π, π].
    pub bearing: f64,
    /// v − v_i.
    pub v_rel: Vec2,
    /// ḋ = −(r · v_rel) / d.
    pub d_dot: f64,
}

pub fn relative_geometry(
    vehicle: &VehicleState,
    obstacle: &ObstacleView,
) -> Result<RelativeGeometry, GeometryError> {
    let r_vec = obstacle.p - vehicle.position();
    let d = (r_vec.x * r_vec.x + r_vec.y * r_vec.y).sqrt();
    if d == 0.0 {
        return Err(GeometryError::CoincidentPositions);
    }
    let v_rel = vehicle.velocity() - obstacle.velocity();
    Ok(RelativeGeometry {
        r_vec,
        d,
        bearing: r_vec.angle(),
        v_rel,
        d_dot: -r_vec.dot(v_rel) / d,
    })
}

/// β = arcsin(d_min / d), in (0, π/2].
pub fn collision_cone_half_angle(d: f64, d_min: f64) -> Result<f64, GeometryError> {
    if d < d_min {
        return Err(GeometryError::SeparationViolated { d, d_min });
    }
    Ok((d_min / d).asin())
}

/// Angle λ ∈ [0, π] between the relative velocity and the line of sight.
pub fn approach_angle(v_rel: Vec2, r_vec: Vec2) -> Result<f64, GeometryError> {
    let vn = v_rel.norm();
    let rn = r_vec.norm();
    if vn == 0.0 {
        return Err(GeometryError::ZeroRelativeVelocity);
    }
    if rn == 0.0 {
        return Err(GeometryError::CoincidentPositions);
    }
    Ok((v_rel.dot(r_vec) / (vn * rn)).clamp(-1.0, 1.0).acos())
}

/// One edge (left `+` or right `−`) of the collision and velocity obstacle cones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeEdge {
    /// ψ_cc = ∠r ± β.
    pub psi_cc: f64,
    /// ψ̇_cc = d∠r/dt ± β̇.
    pub psi_cc_rate: f64,
    /// φ = π − ψ_i + ψ_cc.
    pub phi: f64,
    /// ϑ = arcsin((v_i / v) sin φ); `None` when the argument leaves [−1, 1].
    pub theta: Option<f64>,
    /// ψ_vo = ψ_cc + ϑ; `None` exactly when `theta` is.
    pub psi_vo: Option<f64>,
    /// The point v·(cos ψ_vo, sin ψ_vo) lies on the edge ray itself rather than
    /// on its backward extension: v cos ϑ + v_i cos φ ≥ 0. Always true for v ≥ v_i.
    pub on_ray: bool,
}

impl ConeEdge {
    pub fn is_defined(&self) -> bool {
        self.theta.is_some()
    }
}

/// Cone geometry for one vehicle–obstacle pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoCone {
    pub relative: RelativeGeometry,
    pub beta: f64,
    pub beta_rate: f64,
    pub bearing_rate: f64,
    pub plus: ConeEdge,
    pub minus: ConeEdge,
    /// d < 1.001·d_min: β̇ is large and ill-conditioned.
    pub near_tangency: bool,
    /// The pair is inside d_min and β was clamped to π/2 (β̇ set to 0).
    pub clamped: bool,
}

impl VoCone {
    pub fn edge(&self, sign: Sign) -> &ConeEdge {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn both_edges_defined(&self) -> bool {
        self.plus.is_defined() && self.minus.is_defined()
    }

    /// Both edges are defined but each arcsine solution sits behind the cone
    /// apex. The speed circle then never meets the cone boundary, and since it
    /// crosses the backward edge lines it lies wholly outside the VO: every
    /// heading is collision-free under straight-line extrapolation.
    pub fn misses_speed_circle(&self) -> bool {
        self.both_edges_defined() && !self.plus.on_ray && !self.minus.on_ray
    }
}

/// Builds the collision cone and velocity obstacle for the pair.
///
/// Requires d ≥ d_min and v > 0. Edges whose ϑ does not exist at the current
/// speed are reported as undefined, never clamped.
pub fn vo_cone(
    vehicle: &VehicleState,
    obstacle: &ObstacleView,
    d_min: f64,
) -> Result<VoCone, GeometryError> {
    let rel = relative_geometry(vehicle, obstacle)?;
    let beta = collision_cone_half_angle(rel.d, d_min)?;
    let slack = rel.d * rel.d - d_min * d_min;
    let beta_rate = if slack > 0.0 {
        -d_min * rel.d_dot / (rel.d * slack.sqrt())
    } else {
        // exact tangency: β̇ is unbounded, report the one-sided limit sign
        if rel.d_dot < 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    build_cone(vehicle, obstacle, rel, d_min, beta, beta_rate, false)
}

/// Same as [`vo_cone`] but accepts d < d_min by clamping β to π/2 with β̇ = 0.
/// Used as graceful degradation once separation is already lost.
pub fn vo_cone_clamped(
    vehicle: &VehicleState,
    obstacle: &ObstacleView,
    d_min: f64,
) -> Result<VoCone, GeometryError> {
    let rel = relative_geometry(vehicle, obstacle)?;
    if rel.d >= d_min {
        return vo_cone(vehicle, obstacle, d_min);
    }
    build_cone(vehicle, obstacle, rel, d_min, FRAC_PI_2, 0.0, true)
}

fn build_cone(
    vehicle: &VehicleState,
    obstacle: &ObstacleView,
    rel: RelativeGeometry,
    d_min: f64,
    beta: f64,
    beta_rate: f64,
    clamped: bool,
) -> Result<VoCone, GeometryError> {
    if !(vehicle.v > 0.0) {
        return Err(GeometryError::NonPositiveSpeed(vehicle.v));
    }
    // ṙ = v_i − v = −v_rel
    let r_dot = -rel.v_rel;
    let bearing_rate = rel.r_vec.cross(r_dot) / (rel.d * rel.d);
    let edge = |sign: Sign| {
        let s = sign.value();
        let psi_cc = wrap_to_pi(rel.bearing + s * beta);
        let phi = wrap_to_pi(PI - obstacle.psi_i + psi_cc);
        let arg = obstacle.v_i / vehicle.v * phi.sin();
        let theta = (arg.abs() <= 1.0).then(|| arg.asin());
        let on_ray = theta.is_some_and(|th| vehicle.v * th.cos() + obstacle.v_i * phi.cos() >= 0.0);
        ConeEdge {
            psi_cc,
            psi_cc_rate: bearing_rate + s * beta_rate,
            phi,
            theta,
            psi_vo: theta.map(|th| wrap_to_pi(psi_cc + th)),
            on_ray,
        }
    };
    Ok(VoCone {
        relative: rel,
        beta,
        beta_rate,
        bearing_rate,
        plus: edge(Sign::Plus),
        minus: edge(Sign::Minus),
        near_tangency: rel.d < NEAR_TANGENCY_RATIO * d_min || clamped,
        clamped,
    })
}

/// Signed angular distances (δ⁺, δ⁻) of heading `psi` to the left and right
/// VO edges, wrapped to (−π, π]. Both are negative inside the cone.
pub fn edge_deltas(psi: f64, cone: &VoCone) -> Option<(f64, f64)> {
    let plus = cone.plus.psi_vo?;
    let minus = cone.minus.psi_vo?;
    Some((wrap_to_pi(psi - plus), wrap_to_pi(minus - psi)))
}

/// Membership of heading `psi` in the VO by the angle test: strictly inside
/// the counter-clockwise arc from ψ_vo⁻ to ψ_vo⁺. Same as "δ⁺ < 0 and δ⁻ < 0"
/// while the arc is shorter than π, and still correct when it is wider.
/// Always false when the cone misses the speed circle.
pub fn heading_inside_vo(psi: f64, cone: &VoCone) -> Option<bool> {
    let plus = cone.plus.psi_vo?;
    let minus = cone.minus.psi_vo?;
    if cone.misses_speed_circle() {
        return Some(false);
    }
    let offset = (psi - minus).rem_euclid(TAU);
    Some(offset > 0.0 && offset < (plus - minus).rem_euclid(TAU))
}

/// Minimum future distance when both objects hold their current velocities.
pub fn min_predicted_distance(vehicle: &VehicleState, obstacle: &ObstacleView) -> f64 {
    let r = obstacle.p - vehicle.position();
    let w = obstacle.velocity() - vehicle.velocity();
    let ww = w.norm_squared();
    if ww == 0.0 || r.dot(w) >= 0.0 {
        return r.norm();
    }
    r.cross(w).abs() / ww.sqrt()
}

/// Brute-force VO membership: does straight-line extrapolation bring the
/// centers closer than `d_min`? Independent of the cone angles.
pub fn vo_membership_oracle(vehicle: &VehicleState, obstacle: &ObstacleView, d_min: f64) -> bool {
    min_predicted_distance(vehicle, obstacle) < d_min
}
