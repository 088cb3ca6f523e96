//! Point objects sliding on the surface under gravity, viscous friction and
//! the normal reaction.
//!
//! On a cell with pitch `theta` and roll `phi` the planar equations of
//! motion are
//!
//! ```text
//! x'' =  g cos(theta) cos(phi)^2 sin(theta) - b x'
//! y'' = -g cos(theta) cos(phi) sin(phi)     - b y'
//! ```
//!
//! The vertical coordinate is slaved to the surface and never integrated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{ActuatorGrid, CellOrientation, OrientationField, SurfaceConfig};

pub const DEFAULT_GRAVITY: f64 = 9.81;

/// Planar state of one transported object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub mass: f64,
}

impl ObjectState {
    pub fn at_rest(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            vx: 0.0,
            vy: 0.0,
            mass: 1.0,
        }
    }

    pub fn with_velocity(mut self, vx: f64, vy: f64) -> Self {
        self.vx = vx;
        self.vy = vy;
        self
    }

    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
    /// Viscous friction coefficient `b`, 1/s.
    pub friction: f64,
    /// Actuator time constant, seconds. Zero means ideal actuators.
    pub tau: f64,
    /// Integration step, seconds.
    pub dt: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self {
            gravity: DEFAULT_GRAVITY,
            friction: 0.1,
            tau: 0.0,
            dt: 1e-3,
        }
    }
}

impl PhysicsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gravity.is_finite() && self.gravity > 0.0) {
            return Err(Error::InvalidPhysics(format!(
                "g must be positive, got {}",
                self.gravity
            )));
        }
        if !(self.friction.is_finite() && self.friction >= 0.0) {
            return Err(Error::InvalidPhysics(format!(
                "b must be non-negative, got {}",
                self.friction
            )));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidPhysics(format!(
                "tau must be non-negative, got {}",
                self.tau
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidPhysics(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Cell `(I, J)` occupied by an object, 1-based. Points on an interior cell
/// boundary belong to the higher-index cell.
pub fn locate_cell(s: &ObjectState, cfg: &SurfaceConfig) -> Result<(usize, usize)> {
    locate_xy(s.x, s.y, cfg)
}

pub(crate) fn locate_xy(x: f64, y: f64, cfg: &SurfaceConfig) -> Result<(usize, usize)> {
    if !(x >= 0.0 && x <= cfg.extent_x() && y >= 0.0 && y <= cfg.extent_y()) {
        return Err(Error::OutsideWorkspace { x, y });
    }
    let i = ((x / cfg.width).floor() as usize + 1).min(cfg.n);
    let j = ((y / cfg.length).floor() as usize + 1).min(cfg.m);
    Ok((i, j))
}

/// Surface height under the object: the plane through the occupied cell's
/// corners evaluated at `(x, y)`.
pub fn height_at(s: &ObjectState, grid: &ActuatorGrid, cfg: &SurfaceConfig) -> Result<f64> {
    let (i, j) = locate_cell(s, cfg)?;
    let [z1, z2, _, z4] = grid.cell_corners(i, j);
    let u = s.x / cfg.width - (i - 1) as f64;
    let v = s.y / cfg.length - (j - 1) as f64;
    Ok(z1 + (z2 - z1) * u + (z4 - z1) * v)
}

/// Slope `(dz/dx, dz/dy)` of the occupied cell.
pub fn surface_slope(
    s: &ObjectState,
    grid: &ActuatorGrid,
    cfg: &SurfaceConfig,
) -> Result<(f64, f64)> {
    let (i, j) = locate_cell(s, cfg)?;
    let [z1, z2, _, z4] = grid.cell_corners(i, j);
    Ok(((z2 - z1) / cfg.width, (z4 - z1) / cfg.length))
}

/// Gravity-driven part of the planar acceleration on a cell.
pub fn gravity_drive(o: CellOrientation, gravity: f64) -> (f64, f64) {
    let (st, ct) = o.theta.sin_cos();
    let (sp, cp) = o.phi.sin_cos();
    (gravity * ct * cp * cp * st, -gravity * ct * cp * sp)
}

pub fn acceleration(o: CellOrientation, vx: f64, vy: f64, p: &PhysicsParams) -> (f64, f64) {
    let (gx, gy) = gravity_drive(o, p.gravity);
    (gx - p.friction * vx, gy - p.friction * vy)
}

/// Terminal speed `(g / b) cos(theta) cos(phi) sin(theta)` on a constant
/// pitch slope.
pub fn steady_speed(o: CellOrientation, p: &PhysicsParams) -> Result<f64> {
    if p.friction == 0.0 {
        return Err(Error::NoFriction);
    }
    Ok(p.gravity / p.friction * o.theta.cos() * o.phi.cos() * o.theta.sin())
}

/// Terminal velocity `(vx, vy)` on a constant slope: the gravity drive
/// divided by the friction coefficient.
pub fn steady_velocity(o: CellOrientation, p: &PhysicsParams) -> Result<(f64, f64)> {
    if p.friction == 0.0 {
        return Err(Error::NoFriction);
    }
    let (gx, gy) = gravity_drive(o, p.gravity);
    Ok((gx / p.friction, gy / p.friction))
}

/// Mechanical energy `m (|v|^2 / 2 + g z)` of an object on a static grid.
/// The kinetic term includes the vertical velocity implied by the slope of
/// the occupied cell.
pub fn mechanical_energy(
    s: &ObjectState,
    grid: &ActuatorGrid,
    cfg: &SurfaceConfig,
    gravity: f64,
) -> Result<f64> {
    let z = height_at(s, grid, cfg)?;
    let (sx, sy) = surface_slope(s, grid, cfg)?;
    let vz = sx * s.vx + sy * s.vy;
    let kinetic = 0.5 * (s.vx * s.vx + s.vy * s.vy + vz * vz);
    Ok(s.mass * (kinetic + gravity * z))
}

/// Result of advancing one object by one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: ObjectState,
    /// Whether the object bounced off an exterior wall during the step.
    pub reflected: bool,
}

/// Semi-implicit Euler update with no walls: velocity first, then position
/// with the new velocity.
pub fn advance_unbounded(s: &ObjectState, drive: (f64, f64), p: &PhysicsParams) -> ObjectState {
    let vx = s.vx + (drive.0 - p.friction * s.vx) * p.dt;
    let vy = s.vy + (drive.1 - p.friction * s.vy) * p.dt;
    ObjectState {
        x: s.x + vx * p.dt,
        y: s.y + vy * p.dt,
        vx,
        vy,
        mass: s.mass,
    }
}

/// Mirror a coordinate back into `[0, extent]`, negating the velocity on
/// every bounce. Returns whether any bounce happened.
fn reflect_axis(pos: &mut f64, vel: &mut f64, extent: f64) -> bool {
    let mut bounced = false;
    loop {
        if *pos < 0.0 {
            *pos = -*pos;
        } else if *pos > extent {
            *pos = 2.0 * extent - *pos;
        } else {
            return bounced;
        }
        *vel = -*vel;
        bounced = true;
    }
}

/// Advance one object with a precomputed per-cell gravity drive.
pub fn step_object_with_drive(
    s: &ObjectState,
    drive: &GravityDrive,
    p: &PhysicsParams,
    cfg: &SurfaceConfig,
) -> Result<StepOutcome> {
    let (i, j) = locate_cell(s, cfg)?;
    let mut next = advance_unbounded(s, drive.get(i, j), p);
    let bx = reflect_axis(&mut next.x, &mut next.vx, cfg.extent_x());
    let by = reflect_axis(&mut next.y, &mut next.vy, cfg.extent_y());
    Ok(StepOutcome {
        state: next,
        reflected: bx || by,
    })
}

pub fn step_object(
    s: &ObjectState,
    field: &OrientationField,
    p: &PhysicsParams,
    cfg: &SurfaceConfig,
) -> Result<StepOutcome> {
    step_object_with_drive(s, &GravityDrive::new(field, p.gravity), p, cfg)
}

/// Advance every object by `dt`. Objects do not interact; walls at the
/// workspace margins reflect elastically.
pub fn step(
    objects: &[ObjectState],
    field: &OrientationField,
    p: &PhysicsParams,
    cfg: &SurfaceConfig,
) -> Result<Vec<ObjectState>> {
    let drive = GravityDrive::new(field, p.gravity);
    objects
        .iter()
        .map(|s| step_object_with_drive(s, &drive, p, cfg).map(|o| o.state))
        .collect()
}

/// Per-cell gravity acceleration, cached between surface updates.
#[derive(Debug, Clone, PartialEq)]
pub struct GravityDrive {
    n: usize,
    cells: Vec<(f64, f64)>,
}

impl GravityDrive {
    pub fn new(field: &OrientationField, gravity: f64) -> Self {
        let (n, _) = field.dims();
        Self {
            n,
            cells: field
                .cells()
                .iter()
                .map(|o| gravity_drive(*o, gravity))
                .collect(),
        }
    }

    pub fn get(&self, column: usize, row: usize) -> (f64, f64) {
        self.cells[(column - 1) + (row - 1) * self.n]
    }
}

/// First-order actuator response over one step: exact solution of
/// `tau z' + z = z_com` with the command held constant.
pub fn actuator_response(z: f64, z_com: f64, p: &PhysicsParams) -> f64 {
    if p.tau == 0.0 {
        return z_com;
    }
    z + (z_com - z) * (1.0 - (-p.dt / p.tau).exp())
}

/// Apply [`actuator_response`] to both separable components of a grid.
/// The response is linear, so the actual heights stay separable.
pub fn grid_response(
    actual: &ActuatorGrid,
    commanded: &ActuatorGrid,
    p: &PhysicsParams,
) -> ActuatorGrid {
    let relax = |a: &[f64], c: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(c)
            .map(|(&z, &zc)| actuator_response(z, zc, p))
            .collect()
    };
    ActuatorGrid {
        za_i: relax(&actual.za_i, &commanded.za_i),
        za_j: relax(&actual.za_j, &commanded.za_j),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn s54() -> SurfaceConfig {
        SurfaceConfig::new(5, 4, 2.0, 2.0, 1.0, (3, 1)).unwrap()
    }

    #[test]
    fn locate_examples() {
        let cfg = s54();
        let w = cfg.width;
        let l = cfg.length;
        assert_eq!(
            locate_cell(&ObjectState::at_rest(0.5 * w, 0.5 * l), &cfg).unwrap(),
            (1, 1)
        );
        assert_eq!(
            locate_cell(&ObjectState::at_rest(w, 0.5 * l), &cfg).unwrap(),
            (2, 1)
        );
        assert_eq!(
            locate_cell(&ObjectState::at_rest(4.5 * w, 3.2 * l), &cfg).unwrap(),
            (5, 4)
        );
        assert_eq!(
            locate_cell(&ObjectState::at_rest(5.0 * w, 4.0 * l), &cfg).unwrap(),
            (5, 4)
        );
        assert_eq!(
            locate_cell(&ObjectState::at_rest(0.0, 0.0), &cfg).unwrap(),
            (1, 1)
        );
        assert!(matches!(
            locate_cell(&ObjectState::at_rest(-0.1, 1.0), &cfg),
            Err(Error::OutsideWorkspace { .. })
        ));
        assert!(locate_cell(&ObjectState::at_rest(1.0, 8.01), &cfg).is_err());
    }

    #[test]
    fn height_on_flat_and_ramp() {
        let cfg = SurfaceConfig::new(1, 1, 1.0, 1.0, 200.0, (1, 1)).unwrap();
        let flat = ActuatorGrid {
            za_i: vec![30.0, 30.0],
            za_j: vec![0.0, 0.0],
        };
        assert_eq!(
            height_at(&ObjectState::at_rest(0.3, 0.7), &flat, &cfg).unwrap(),
            30.0
        );
        // Corners (0, 0, 100, 100): north edge raised.
        let ramp = ActuatorGrid {
            za_i: vec![0.0, 0.0],
            za_j: vec![0.0, 100.0],
        };
        assert_eq!(
            height_at(&ObjectState::at_rest(0.2, 0.5), &ramp, &cfg).unwrap(),
            50.0
        );
    }

    #[test]
    fn acceleration_examples() {
        let p = PhysicsParams::default();
        assert_eq!(
            acceleration(CellOrientation::LEVEL, 0.0, 0.0, &p),
            (0.0, 0.0)
        );
        let (ax, ay) = acceleration(CellOrientation::new(FRAC_PI_6, 0.0), 0.0, 0.0, &p);
        // g sin(30) cos(30) = 9.81 * sqrt(3) / 4.
        assert_abs_diff_eq!(ax, 9.81 * 3f64.sqrt() / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ax, 4.247_854_605_6, epsilon = 1e-9);
        assert_abs_diff_eq!(ay, 0.0);
        let (ax, ay) = acceleration(CellOrientation::new(0.0, -FRAC_PI_4), 0.0, 0.0, &p);
        assert_abs_diff_eq!(ax, 0.0);
        assert_abs_diff_eq!(ay, 4.905, epsilon = 1e-12);
    }

    #[test]
    fn steady_speed_examples() {
        let p = PhysicsParams::default();
        assert_eq!(steady_speed(CellOrientation::LEVEL, &p).unwrap(), 0.0);
        let v = steady_speed(CellOrientation::new(FRAC_PI_4, 0.0), &p).unwrap();
        assert_abs_diff_eq!(v, 49.05, epsilon = 1e-10);
        let doubled = PhysicsParams { friction: 0.2, ..p };
        assert_abs_diff_eq!(
            steady_speed(CellOrientation::new(FRAC_PI_4, 0.0), &doubled).unwrap(),
            v / 2.0,
            epsilon = 1e-12
        );
        let frictionless = PhysicsParams { friction: 0.0, ..p };
        assert!(matches!(
            steady_speed(CellOrientation::LEVEL, &frictionless),
            Err(Error::NoFriction)
        ));
    }

    #[test]
    fn steady_velocity_matches_pitch_and_roll_forms() {
        let p = PhysicsParams::default();
        let (vx, vy) = steady_velocity(CellOrientation::new(FRAC_PI_4, 0.0), &p).unwrap();
        assert_abs_diff_eq!(vx, 49.05, epsilon = 1e-10);
        assert_abs_diff_eq!(vy, 0.0, epsilon = 1e-12);
        // Pure roll of slope 1/2: |v| = (g / b) cos(phi) sin(phi) = 98.1 * 0.4.
        let phi = -(0.5f64).atan();
        let (vx, vy) = steady_velocity(CellOrientation::new(0.0, phi), &p).unwrap();
        assert_abs_diff_eq!(vx, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vy, 98.1 * 0.4, epsilon = 1e-10);
    }

    #[test]
    fn at_rest_on_level_cell_stays() {
        let cfg = s54();
        let p = PhysicsParams::default();
        let field = OrientationField::level(5, 4);
        let mut objs = vec![
            ObjectState::at_rest(3.0, 1.0),
            ObjectState::at_rest(9.5, 7.5),
        ];
        for _ in 0..1000 {
            objs = step(&objs, &field, &p, &cfg).unwrap();
        }
        assert_eq!(objs[0], ObjectState::at_rest(3.0, 1.0));
        assert_eq!(objs[1], ObjectState::at_rest(9.5, 7.5));
    }

    #[test]
    fn wall_reflection_preserves_speed() {
        let cfg = s54();
        let p = PhysicsParams {
            friction: 0.0,
            ..PhysicsParams::default()
        };
        let field = OrientationField::level(5, 4);
        let s = ObjectState::at_rest(0.0005, 1.0).with_velocity(-1.0, 0.3);
        let out = step_object(&s, &field, &p, &cfg).unwrap();
        assert!(out.reflected);
        assert_eq!(out.state.vx, 1.0);
        assert_eq!(out.state.vy, 0.3);
        assert_abs_diff_eq!(out.state.x, 0.0005, epsilon = 1e-15);
        assert_eq!(out.state.speed(), s.speed());
    }

    #[test]
    fn actuator_response_examples() {
        let ideal = PhysicsParams::default();
        assert_eq!(actuator_response(3.0, 42.0, &ideal), 42.0);
        let p = PhysicsParams {
            tau: 0.5,
            dt: 1e-3,
            ..ideal
        };
        assert_eq!(actuator_response(0.7, 0.7, &p), 0.7);
        let mut z = 0.0;
        for _ in 0..500 {
            z = actuator_response(z, 1.0, &p);
        }
        assert_abs_diff_eq!(z, 1.0 - (-1f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(PhysicsParams::default().validate().is_ok());
        let bad = PhysicsParams {
            dt: 0.0,
            ..PhysicsParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = PhysicsParams {
            friction: -0.1,
            ..PhysicsParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
