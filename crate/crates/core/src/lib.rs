//! Simulation and control of a morphing surface: a grid of vertical linear
//! actuators whose tips form planar cells, tilted to slide point objects
//! toward a reference cell.
//!
//! - [`surface`]: grid geometry, cell orientations, grid reconstruction from
//!   the `n + m` independent control inputs.
//! - [`constraints`]: feasibility reports for raw grids and the numeric rank
//!   of the orientation constraints.
//! - [`dynamics`]: object equations of motion, integrator, elastic walls,
//!   actuator lag.
//! - [`control`]: distributed allocation, wave, static funnel and the
//!   single-cell feedback law.
//! - [`sim`]: run orchestration, traces, convergence metrics and batches.
//! - [`io`]: scenario files, CSV traces, grid files and metrics documents.
//! - [`cli`]: the `run`, `compare` and `validate` commands.

// `!(x <= tol)` is used on purpose so that NaN counts as a violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constraints;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod sim;
pub mod surface;

pub use constraints::{validate_grid, ConstraintReport, GridHeights, RawGrid, Tolerances};
pub use control::{
    control_tick, distributed_allocation, occupancy_sets, single_cell_feedback, static_funnel,
    wave, AxisSplit, Command, ControlMode, ControlParams, Controller, OccupancySets,
    SingleCellGains,
};
pub use dynamics::{
    acceleration, actuator_response, height_at, locate_cell, steady_speed, steady_velocity, step,
    ObjectState, PhysicsParams,
};
pub use error::{Error, Result};
pub use sim::{
    batch, convergence_time, run, run_to_t_max, InitialObjects, RunMetrics, Scenario, SimTrace,
};
pub use surface::{
    cell_orientation, dof_count, planar_completion, reconstruct_actuator_grid, rotation_matrix,
    surface_orientation_field, ActuatorGrid, CellOrientation, ControlInput, OrientationField,
    SurfaceConfig,
};
