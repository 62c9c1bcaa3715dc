//! Velocity-obstacle control barrier functions for a unicycle vehicle
//! moving among bounded-acceleration obstacles.
//!
//! The pipeline per step is: obstacle views, nominal guidance, speed and
//! steering barrier filters, Euler integration.

pub mod barriers;
pub mod error;
pub mod geometry;
pub mod guidance;
pub mod obstacle;
pub mod output;
pub mod safety_filter;
pub mod scenario;
pub mod simulator;
pub mod vehicle;
pub mod vo_geometry;

pub use error::{BarrierError, GeometryError, ScenarioError, SimError};
pub use geometry::{wrap_to_pi, Sign, Vec2};
pub use guidance::{Guidance, GuidanceConfig};
pub use obstacle::{Obstacle, ObstacleBounds, ObstacleModel, ObstacleView};
pub use output::SummaryMetrics;
pub use safety_filter::{control_step, QpStatus, SafetyParams};
pub use scenario::{load_scenario, ScenarioConfig};
pub use simulator::{run_scenario, TrajectoryLog};
pub use vehicle::{step_vehicle, ControlInput, VehicleState};
