//! Grid geometry of the morphing surface.
//!
//! A surface `S(n, m)` has `n` columns and `m` rows of planar cells carried
//! by an `(n + 1) x (m + 1)` array of vertical actuators. Cells, columns and
//! rows are numbered from 1 in every public API; cell `(I, J)` spans
//! `x in [(I-1)W, IW]`, `y in [(J-1)L, JL]` and its corners are enumerated
//! counter-clockwise from the south-west tip:
//!
//! ```text
//!   P4 (I, J+1) ------ P3 (I+1, J+1)
//!       |                   |
//!   P1 (I, J)   ------ P2 (I+1, J)
//! ```
//!
//! The surface has `n + m` degrees of freedom: one pitch height difference
//! per column and one roll height difference per row. Grids are therefore
//! stored in separable form, `z(Ia, Ja) = za_i[Ia] + za_j[Ja]`, which makes
//! every cell planar and every inter-cell constraint hold by construction.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance (meters) used when checking constructed grids against
/// the actuator stroke.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Dimensions and metrics of an `S(n, m)` surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    /// Column count.
    pub n: usize,
    /// Row count.
    pub m: usize,
    /// Cell width `W` along x, meters.
    pub width: f64,
    /// Cell length `L` along y, meters.
    pub length: f64,
    /// Actuator stroke `l`, meters.
    pub stroke: f64,
    /// Reference cell `(I_r, J_r)`, 1-based.
    pub reference: (usize, usize),
}

impl SurfaceConfig {
    pub fn new(
        n: usize,
        m: usize,
        width: f64,
        length: f64,
        stroke: f64,
        reference: (usize, usize),
    ) -> Result<Self> {
        let cfg = Self {
            n,
            m,
            width,
            length,
            stroke,
            reference,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < 1 {
            return Err(Error::InvalidConfig(format!(
                "grid must have at least one column and row, got S({}, {})",
                self.n, self.m
            )));
        }
        for (name, v) in [("W", self.width), ("L", self.length), ("l", self.stroke)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let (ir, jr) = self.reference;
        if !(1..=self.n).contains(&ir) || !(1..=self.m).contains(&jr) {
            return Err(Error::InvalidConfig(format!(
                "reference cell ({ir}, {jr}) outside S({}, {})",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// Same surface with a different reference cell.
    pub fn with_reference(&self, reference: (usize, usize)) -> Result<Self> {
        let mut cfg = *self;
        cfg.reference = reference;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Extent of the workspace along x, `n * W`.
    pub fn extent_x(&self) -> f64 {
        self.n as f64 * self.width
    }

    /// Extent of the workspace along y, `m * L`.
    pub fn extent_y(&self) -> f64 {
        self.m as f64 * self.length
    }

    pub fn cell_center(&self, cell: (usize, usize)) -> (f64, f64) {
        (
            (cell.0 as f64 - 0.5) * self.width,
            (cell.1 as f64 - 0.5) * self.length,
        )
    }

    pub fn reference_center(&self) -> (f64, f64) {
        self.cell_center(self.reference)
    }

    /// Whether `(x, y)` lies in the closed rectangle of the reference cell.
    pub fn in_reference_cell(&self, x: f64, y: f64) -> bool {
        let (ir, jr) = self.reference;
        let x0 = (ir - 1) as f64 * self.width;
        let y0 = (jr - 1) as f64 * self.length;
        x >= x0 && x <= x0 + self.width && y >= y0 && y <= y0 + self.length
    }
}

/// Independent control inputs of a surface: one pitch height difference
/// `dz1[I] = Z1 - Z2` per column, one roll height difference
/// `dz2[J] = Z1 - Z4` per row, and the stroke split `a + b = 1` between the
/// two axes. Vectors are stored 0-based (`dz1[0]` is column 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlInput {
    pub dz1: Vec<f64>,
    pub dz2: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl ControlInput {
    /// Level surface for `cfg`.
    pub fn zeros(cfg: &SurfaceConfig, a: f64, b: f64) -> Self {
        Self {
            dz1: vec![0.0; cfg.n],
            dz2: vec![0.0; cfg.m],
            a,
            b,
        }
    }

    pub fn check_dims(&self, cfg: &SurfaceConfig) -> Result<()> {
        if self.dz1.len() != cfg.n {
            return Err(Error::DimensionMismatch {
                what: "dz1 (one entry per column)",
                expected: cfg.n,
                found: self.dz1.len(),
            });
        }
        if self.dz2.len() != cfg.m {
            return Err(Error::DimensionMismatch {
                what: "dz2 (one entry per row)",
                expected: cfg.m,
                found: self.dz2.len(),
            });
        }
        Ok(())
    }
}

/// Pitch and roll of one cell. Yaw is identically zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CellOrientation {
    /// Pitch, rotation about the inertial y axis, radians.
    pub theta: f64,
    /// Roll, rotation about the inertial x axis, radians.
    pub phi: f64,
}

impl CellOrientation {
    pub const LEVEL: Self = Self {
        theta: 0.0,
        phi: 0.0,
    };

    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// `tan(phi) / cos(theta)`, the quantity shared by horizontally adjacent
    /// cells.
    pub fn roll_ratio(&self) -> f64 {
        self.phi.tan() / self.theta.cos()
    }
}

/// Height of the fourth corner of a planar cell given the other three.
pub fn planar_completion(z1: f64, z2: f64, z4: f64) -> f64 {
    -z1 + z2 + z4
}

/// Orientation of a cell from its two height differences.
///
/// `tan(theta) = dz1 / W` and `-sin(phi) = (dz2 / L) cos(theta) cos(phi)`.
/// A positive `dz1` (west side high) gives `theta > 0`; a positive `dz2`
/// (south side high) gives `phi < 0`. Both angles stay in `(-pi/2, pi/2)`.
pub fn cell_orientation(dz1: f64, dz2: f64, cfg: &SurfaceConfig) -> CellOrientation {
    let theta = dz1.atan2(cfg.width);
    let phi = (-theta.cos() * dz2).atan2(cfg.length);
    CellOrientation { theta, phi }
}

/// Rotation from the cell frame to the inertial frame (roll, then pitch,
/// zero yaw). Columns are the cell basis vectors in inertial coordinates.
pub fn rotation_matrix(o: CellOrientation) -> Matrix3<f64> {
    let (st, ct) = o.theta.sin_cos();
    let (sp, cp) = o.phi.sin_cos();
    Matrix3::new(
        ct,
        st * sp,
        cp * st, //
        0.0,
        cp,
        -sp, //
        -st,
        ct * sp,
        ct * cp,
    )
}

/// Per-cell orientations of a whole surface.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationField {
    n: usize,
    m: usize,
    cells: Vec<CellOrientation>,
}

impl OrientationField {
    pub fn level(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            cells: vec![CellOrientation::LEVEL; n * m],
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// Orientation of cell `(I, J)`, 1-based.
    pub fn get(&self, column: usize, row: usize) -> CellOrientation {
        self.cells[self.index(column, row)]
    }

    pub fn set(&mut self, column: usize, row: usize, o: CellOrientation) {
        let idx = self.index(column, row);
        self.cells[idx] = o;
    }

    /// Cells in column-fastest order: `(1,1), (2,1), ..., (n,1), (1,2), ...`.
    pub fn cells(&self) -> &[CellOrientation] {
        &self.cells
    }

    fn index(&self, column: usize, row: usize) -> usize {
        debug_assert!((1..=self.n).contains(&column) && (1..=self.m).contains(&row));
        (column - 1) + (row - 1) * self.n
    }
}

/// Orientation of every cell from the `n + m` control inputs.
///
/// Each column shares the pitch `Theta_I = atan(dz1[I] / W)`. The roll of
/// column 1 in row `J`, `Phi_J`, follows from `dz2[J]`; every other cell of
/// the row is obtained through the roll relation
/// `tan(phi_IJ) = (cos Theta_I / cos Theta_1) tan Phi_J`.
pub fn surface_orientation_field(
    u: &ControlInput,
    cfg: &SurfaceConfig,
) -> Result<OrientationField> {
    u.check_dims(cfg)?;
    let pitch: Vec<f64> = u.dz1.iter().map(|dz| dz.atan2(cfg.width)).collect();
    let base_cos = pitch[0].cos();
    let mut field = OrientationField::level(cfg.n, cfg.m);
    for (j, &dz2) in u.dz2.iter().enumerate() {
        let roll_first = cell_orientation(u.dz1[0], dz2, cfg).phi;
        let tan_first = roll_first.tan();
        for (i, &theta) in pitch.iter().enumerate() {
            let phi = (theta.cos() / base_cos * tan_first).atan();
            field.set(i + 1, j + 1, CellOrientation { theta, phi });
        }
    }
    Ok(field)
}

/// Actuator heights in separable form, `z(Ia, Ja) = za_i[Ia] + za_j[Ja]`.
/// Vectors are 0-based: `za_i[0]` is actuator column 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActuatorGrid {
    pub za_i: Vec<f64>,
    pub za_j: Vec<f64>,
}

impl ActuatorGrid {
    /// Fully retracted grid for `cfg`.
    pub fn retracted(cfg: &SurfaceConfig) -> Self {
        Self {
            za_i: vec![0.0; cfg.n + 1],
            za_j: vec![0.0; cfg.m + 1],
        }
    }

    /// Number of cell columns and rows spanned by the grid.
    pub fn dims(&self) -> (usize, usize) {
        (self.za_i.len() - 1, self.za_j.len() - 1)
    }

    /// Height of actuator `(Ia, Ja)`, 1-based.
    pub fn height(&self, column: usize, row: usize) -> f64 {
        self.za_i[column - 1] + self.za_j[row - 1]
    }

    /// Corner heights `[Z1, Z2, Z3, Z4]` of cell `(I, J)`.
    pub fn cell_corners(&self, column: usize, row: usize) -> [f64; 4] {
        [
            self.height(column, row),
            self.height(column + 1, row),
            self.height(column + 1, row + 1),
            self.height(column, row + 1),
        ]
    }

    /// Recover the control inputs `(dz1, dz2)` carried by the grid.
    pub fn height_differences(&self) -> (Vec<f64>, Vec<f64>) {
        let dz1 = self.za_i.windows(2).map(|w| w[0] - w[1]).collect();
        let dz2 = self.za_j.windows(2).map(|w| w[0] - w[1]).collect();
        (dz1, dz2)
    }

    /// Orientation field of the surface formed by this grid.
    pub fn orientation_field(&self, cfg: &SurfaceConfig) -> Result<OrientationField> {
        let (dz1, dz2) = self.height_differences();
        let u = ControlInput {
            dz1,
            dz2,
            a: 0.5,
            b: 0.5,
        };
        surface_orientation_field(&u, cfg)
    }

    pub fn check_dims(&self, cfg: &SurfaceConfig) -> Result<()> {
        if self.za_i.len() != cfg.n + 1 {
            return Err(Error::DimensionMismatch {
                what: "za_i (one entry per actuator column)",
                expected: cfg.n + 1,
                found: self.za_i.len(),
            });
        }
        if self.za_j.len() != cfg.m + 1 {
            return Err(Error::DimensionMismatch {
                what: "za_j (one entry per actuator row)",
                expected: cfg.m + 1,
                found: self.za_j.len(),
            });
        }
        Ok(())
    }

    /// First actuator outside `[-tol, l + tol]`, if any.
    pub fn first_out_of_bounds(&self, stroke: f64, tol: f64) -> Option<(usize, usize, f64)> {
        for (jb, zj) in self.za_j.iter().enumerate() {
            for (ib, zi) in self.za_i.iter().enumerate() {
                let z = zi + zj;
                if z < -tol || z > stroke + tol || !z.is_finite() {
                    return Some((ib + 1, jb + 1, z));
                }
            }
        }
        None
    }
}

/// Build the actuator grid realising `u`, with the reference cell leveled
/// at zero.
///
/// Column components follow the cumulative sums
/// `za_i[Ia] = sum_{k=Ia}^{I_r} dz1[k]` for `Ia <= I_r` and
/// `za_i[Ia] = -sum_{k=I_r+1}^{Ia-1} dz1[k]` beyond it; rows likewise.
pub fn reconstruct_actuator_grid(u: &ControlInput, cfg: &SurfaceConfig) -> Result<ActuatorGrid> {
    u.check_dims(cfg)?;
    let za_i = cumulative_components(&u.dz1, cfg.reference.0);
    let za_j = cumulative_components(&u.dz2, cfg.reference.1);
    let grid = ActuatorGrid { za_i, za_j };
    if let Some((column, row, height)) = grid.first_out_of_bounds(cfg.stroke, FEASIBILITY_TOL) {
        return Err(Error::InfeasibleInput {
            column,
            row,
            height,
            stroke: cfg.stroke,
        });
    }
    Ok(grid)
}

fn cumulative_components(diffs: &[f64], reference: usize) -> Vec<f64> {
    let count = diffs.len();
    let mut out = vec![0.0; count + 1];
    // Ia <= I_r: walk west from the reference column.
    let mut acc = 0.0;
    for ia in (1..=reference).rev() {
        acc += diffs[ia - 1];
        out[ia - 1] = acc;
    }
    // Ia >= I_r + 1: walk east; out[I_r] (actuator I_r + 1) stays zero.
    let mut acc = 0.0;
    for ia in (reference + 2)..=(count + 1) {
        acc -= diffs[ia - 2];
        out[ia - 1] = acc;
    }
    out
}

/// Generalized coordinates, rotational constraints and degrees of freedom
/// of an `S(n, m)` surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DofCount {
    pub coordinates: usize,
    pub constraints: usize,
    pub dof: usize,
}

pub fn dof_count(cfg: &SurfaceConfig) -> DofCount {
    let coordinates = 2 * cfg.n * cfg.m;
    DofCount {
        coordinates,
        constraints: coordinates - cfg.n - cfg.m,
        dof: cfg.n + cfg.m,
    }
}
