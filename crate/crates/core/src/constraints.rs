//! Feasibility checks for measured or hand-written actuator grids, and the
//! numeric rank of the orientation constraints.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{cell_orientation, ActuatorGrid, OrientationField, SurfaceConfig};

/// Anything that can report actuator heights on an `(n + 1) x (m + 1)` grid.
pub trait GridHeights {
    /// Cell columns and rows spanned by the grid.
    fn cell_dims(&self) -> (usize, usize);
    /// Height of actuator `(Ia, Ja)`, 1-based.
    fn height_at(&self, column: usize, row: usize) -> f64;
}

impl GridHeights for ActuatorGrid {
    fn cell_dims(&self) -> (usize, usize) {
        self.dims()
    }

    fn height_at(&self, column: usize, row: usize) -> f64 {
        self.height(column, row)
    }
}

/// Unconstrained actuator heights, row-major by actuator row (`Ja`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawGrid {
    n: usize,
    m: usize,
    heights: Vec<f64>,
}

impl RawGrid {
    /// Build from `m + 1` rows of `n + 1` heights each (`rows[Ja-1][Ia-1]`).
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidConfig(
                "a raw grid needs at least two actuator rows".into(),
            ));
        }
        let width = rows[0].len();
        if width < 2 {
            return Err(Error::InvalidConfig(
                "a raw grid needs at least two actuator columns".into(),
            ));
        }
        for row in &rows {
            if row.len() != width {
                return Err(Error::DimensionMismatch {
                    what: "raw grid row",
                    expected: width,
                    found: row.len(),
                });
            }
        }
        Ok(Self {
            n: width - 1,
            m: rows.len() - 1,
            heights: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.heights
            .chunks(self.n + 1)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn set(&mut self, column: usize, row: usize, z: f64) {
        let idx = (column - 1) + (row - 1) * (self.n + 1);
        self.heights[idx] = z;
    }
}

impl GridHeights for RawGrid {
    fn cell_dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    fn height_at(&self, column: usize, row: usize) -> f64 {
        self.heights[(column - 1) + (row - 1) * (self.n + 1)]
    }
}

impl From<&ActuatorGrid> for RawGrid {
    fn from(g: &ActuatorGrid) -> Self {
        let (n, m) = g.dims();
        let mut heights = Vec::with_capacity((n + 1) * (m + 1));
        for row in 1..=m + 1 {
            for column in 1..=n + 1 {
                heights.push(g.height(column, row));
            }
        }
        Self { n, m, heights }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Height tolerance, meters.
    pub height: f64,
    /// Angle tolerance, radians.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            height: 1e-9,
            angle: 1e-9,
        }
    }
}

/// Every constraint violated by a grid. Empty lists mean feasible.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConstraintReport {
    /// `(cell, |Z3 + Z1 - Z2 - Z4|)`.
    pub planarity: Vec<((usize, usize), f64)>,
    /// `(column, max_J |theta_IJ - theta_I1|)`.
    pub pitch: Vec<(usize, f64)>,
    /// `(cell, |rho_IJ - rho_{I-1,J}|)` with `rho = tan(phi) / cos(theta)`.
    pub roll: Vec<((usize, usize), f64)>,
    /// `(actuator, height)` outside `[0, l]`.
    pub bounds: Vec<((usize, usize), f64)>,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.planarity.is_empty()
            && self.pitch.is_empty()
            && self.roll.is_empty()
            && self.bounds.is_empty()
    }
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_feasible() {
            return writeln!(f, "feasible: no constraint violations");
        }
        for ((i, j), r) in &self.planarity {
            writeln!(f, "planarity  cell ({i}, {j})  residual {r:.6e} m")?;
        }
        for (i, r) in &self.pitch {
            writeln!(f, "pitch      column {i}  max deviation {r:.6e} rad")?;
        }
        for ((i, j), r) in &self.roll {
            writeln!(f, "roll       cell ({i}, {j})  residual {r:.6e}")?;
        }
        for ((i, j), z) in &self.bounds {
            writeln!(f, "bounds     actuator ({i}, {j})  height {z:.6e} m")?;
        }
        Ok(())
    }
}

/// Check planarity, shared column pitch, the row roll relation and actuator
/// stroke limits. Infeasibility is reported, not raised; only a dimension
/// mismatch is an error.
///
/// Cell orientations are taken from the plane through `P1`, `P2`, `P4`.
pub fn validate_grid<G: GridHeights + ?Sized>(
    grid: &G,
    cfg: &SurfaceConfig,
    tol: Tolerances,
) -> Result<ConstraintReport> {
    let (n, m) = grid.cell_dims();
    if n != cfg.n {
        return Err(Error::DimensionMismatch {
            what: "grid columns",
            expected: cfg.n,
            found: n,
        });
    }
    if m != cfg.m {
        return Err(Error::DimensionMismatch {
            what: "grid rows",
            expected: cfg.m,
            found: m,
        });
    }

    let mut report = ConstraintReport::default();
    let mut field = OrientationField::level(n, m);
    for j in 1..=m {
        for i in 1..=n {
            let z1 = grid.height_at(i, j);
            let z2 = grid.height_at(i + 1, j);
            let z3 = grid.height_at(i + 1, j + 1);
            let z4 = grid.height_at(i, j + 1);
            let residual = (z3 + z1 - z2 - z4).abs();
            if !(residual <= tol.height) {
                report.planarity.push(((i, j), residual));
            }
            field.set(i, j, cell_orientation(z1 - z2, z1 - z4, cfg));
        }
    }

    for i in 1..=n {
        let base = field.get(i, 1).theta;
        let worst = (1..=m)
            .map(|j| (field.get(i, j).theta - base).abs())
            .fold(0.0, f64::max);
        if !(worst <= tol.angle) {
            report.pitch.push((i, worst));
        }
    }

    for j in 1..=m {
        for i in 2..=n {
            let residual = (field.get(i, j).roll_ratio() - field.get(i - 1, j).roll_ratio()).abs();
            if !(residual <= tol.angle) {
                report.roll.push(((i, j), residual));
            }
        }
    }

    for j in 1..=m + 1 {
        for i in 1..=n + 1 {
            let z = grid.height_at(i, j);
            if !(z >= -tol.height && z <= cfg.stroke + tol.height) {
                report.bounds.push(((i, j), z));
            }
        }
    }
    Ok(report)
}

/// Stack an orientation field into the `2nm` generalized coordinates
/// `[theta_11, ..., theta_nm, phi_11, ..., phi_nm]` (column-fastest).
pub fn orientation_coordinates(field: &OrientationField) -> Vec<f64> {
    let cells = field.cells();
    cells
        .iter()
        .map(|o| o.theta)
        .chain(cells.iter().map(|o| o.phi))
        .collect()
}

/// Residuals of the rotational constraints of an `S(n, m)` surface over the
/// `2nm` orientation coordinates: `theta_{I,J} - theta_{I,J+1}` for every
/// vertical neighbour pair, then
/// `tan(phi_{I,J}) / cos(theta_{I,J}) - tan(phi_{I+1,J}) / cos(theta_{I+1,J})`
/// for every horizontal pair.
pub fn orientation_constraints(n: usize, m: usize, coords: &[f64]) -> Vec<f64> {
    let cells = n * m;
    assert_eq!(coords.len(), 2 * cells, "expected 2nm coordinates");
    let theta = |i: usize, j: usize| coords[(i - 1) + (j - 1) * n];
    let phi = |i: usize, j: usize| coords[cells + (i - 1) + (j - 1) * n];
    let ratio = |i: usize, j: usize| phi(i, j).tan() / theta(i, j).cos();

    let mut out = Vec::with_capacity(2 * cells - n - m);
    for i in 1..=n {
        for j in 1..m {
            out.push(theta(i, j) - theta(i, j + 1));
        }
    }
    for j in 1..=m {
        for i in 1..n {
            out.push(ratio(i, j) - ratio(i + 1, j));
        }
    }
    out
}

/// Central finite-difference Jacobian of [`orientation_constraints`].
pub fn constraint_jacobian(n: usize, m: usize, coords: &[f64], step: f64) -> DMatrix<f64> {
    let rows = 2 * n * m - n - m;
    let cols = coords.len();
    let mut jac = DMatrix::zeros(rows, cols);
    let mut probe = coords.to_vec();
    for c in 0..cols {
        let x0 = probe[c];
        probe[c] = x0 + step;
        let plus = orientation_constraints(n, m, &probe);
        probe[c] = x0 - step;
        let minus = orientation_constraints(n, m, &probe);
        probe[c] = x0;
        for r in 0..rows {
            jac[(r, c)] = (plus[r] - minus[r]) / (2.0 * step);
        }
    }
    jac
}

/// Numeric rank: singular values above `rel_tol * sigma_max`.
pub fn numeric_rank(matrix: &DMatrix<f64>, rel_tol: f64) -> usize {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return 0;
    }
    let sv = matrix.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}
