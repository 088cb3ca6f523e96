//! Surface controllers: distributed allocation, wave, static funnel and the
//! single-cell saturated feedback law.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{locate_cell, ObjectState};
use crate::error::{Error, Result};
use crate::surface::{reconstruct_actuator_grid, ActuatorGrid, ControlInput, SurfaceConfig};

/// Columns and rows, on either side of the reference cell, that contain at
/// least one object. All indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OccupancySets {
    /// Occupied columns west of the reference (`I < I_r`).
    pub cl: BTreeSet<usize>,
    /// Occupied columns east of the reference (`I > I_r`).
    pub cr: BTreeSet<usize>,
    /// Occupied rows south of the reference (`J < J_r`).
    pub rd: BTreeSet<usize>,
    /// Occupied rows north of the reference (`J > J_r`).
    pub ru: BTreeSet<usize>,
}

impl OccupancySets {
    pub fn is_empty(&self) -> bool {
        self.cl.is_empty() && self.cr.is_empty() && self.rd.is_empty() && self.ru.is_empty()
    }

    /// Every column and row except the reference ones.
    pub fn full(cfg: &SurfaceConfig) -> Self {
        let (ir, jr) = cfg.reference;
        Self {
            cl: (1..ir).collect(),
            cr: (ir + 1..=cfg.n).collect(),
            rd: (1..jr).collect(),
            ru: (jr + 1..=cfg.m).collect(),
        }
    }
}

pub fn occupancy_sets(objects: &[ObjectState], cfg: &SurfaceConfig) -> Result<OccupancySets> {
    let (ir, jr) = cfg.reference;
    let mut sets = OccupancySets::default();
    for s in objects {
        let (i, j) = locate_cell(s, cfg)?;
        if i < ir {
            sets.cl.insert(i);
        } else if i > ir {
            sets.cr.insert(i);
        }
        if j < jr {
            sets.rd.insert(j);
        } else if j > jr {
            sets.ru.insert(j);
        }
    }
    Ok(sets)
}

/// Share of the actuator stroke given to the pitch (`a`) and roll (`b`)
/// axes; `a + b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSplit {
    a: f64,
    b: f64,
}

impl AxisSplit {
    pub const EVEN: Self = Self { a: 0.5, b: 0.5 };
    pub const PITCH_ONLY: Self = Self { a: 1.0, b: 0.0 };
    pub const ROLL_ONLY: Self = Self { a: 0.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidControl(format!(
                "control.a and control.b must lie in [0, 1], got a = {a}, b = {b}"
            )));
        }
        if (a + b - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidControl(format!(
                "control.a + control.b must equal 1, got {a} + {b} = {}",
                a + b
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Spread the stroke evenly over the occupied columns and rows between the
/// reference cell and the boundary.
pub fn distributed_allocation(
    s: &OccupancySets,
    split: AxisSplit,
    cfg: &SurfaceConfig,
) -> ControlInput {
    let mut u = ControlInput::zeros(cfg, split.a, split.b);
    let pitch = split.a * cfg.stroke;
    let roll = split.b * cfg.stroke;
    for &i in &s.cl {
        u.dz1[i - 1] = pitch / s.cl.len() as f64;
    }
    for &i in &s.cr {
        u.dz1[i - 1] = -pitch / s.cr.len() as f64;
    }
    for &j in &s.rd {
        u.dz2[j - 1] = roll / s.rd.len() as f64;
    }
    for &j in &s.ru {
        u.dz2[j - 1] = -roll / s.ru.len() as f64;
    }
    u
}

/// Put the whole stroke on the outermost occupied column and row on each
/// side of the reference.
pub fn wave(s: &OccupancySets, split: AxisSplit, cfg: &SurfaceConfig) -> ControlInput {
    let mut u = ControlInput::zeros(cfg, split.a, split.b);
    if let Some(&i) = s.cl.first() {
        u.dz1[i - 1] = split.a * cfg.stroke;
    }
    if let Some(&i) = s.cr.last() {
        u.dz1[i - 1] = -split.a * cfg.stroke;
    }
    if let Some(&j) = s.rd.first() {
        u.dz2[j - 1] = split.b * cfg.stroke;
    }
    if let Some(&j) = s.ru.last() {
        u.dz2[j - 1] = -split.b * cfg.stroke;
    }
    u
}

/// Time-invariant bowl: distributed allocation with every column and row
/// counted as occupied.
pub fn static_funnel(split: AxisSplit, cfg: &SurfaceConfig) -> ControlInput {
    distributed_allocation(&OccupancySets::full(cfg), split, cfg)
}

/// Gains of the single-cell feedback law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleCellGains {
    /// Position gain along x, at most `l / (2W)`.
    pub kx: f64,
    /// Position gain along y, at most `l / (2L)`.
    pub ky: f64,
    /// Saturation bound of the x error, meters. Defaults to `W`.
    #[serde(default)]
    pub mx: Option<f64>,
    /// Saturation bound of the y error, meters. Defaults to `L`.
    #[serde(default)]
    pub my: Option<f64>,
    /// Velocity feedback gain along x, seconds.
    #[serde(default)]
    pub kvx: f64,
    /// Velocity feedback gain along y, seconds.
    #[serde(default)]
    pub kvy: f64,
}

impl SingleCellGains {
    /// Largest admissible position gains for `cfg`, no velocity feedback.
    pub fn max_for(cfg: &SurfaceConfig) -> Self {
        Self {
            kx: cfg.stroke / (2.0 * cfg.width),
            ky: cfg.stroke / (2.0 * cfg.length),
            mx: None,
            my: None,
            kvx: 0.0,
            kvy: 0.0,
        }
    }

    pub fn with_damping(mut self, kvx: f64, kvy: f64) -> Self {
        self.kvx = kvx;
        self.kvy = kvy;
        self
    }

    pub fn validate(&self, cfg: &SurfaceConfig) -> Result<()> {
        let kx_max = cfg.stroke / (2.0 * cfg.width);
        let ky_max = cfg.stroke / (2.0 * cfg.length);
        // Small slack so the exact bound computed elsewhere is accepted.
        if !(self.kx > 0.0 && self.kx <= kx_max * (1.0 + 1e-12)) {
            return Err(Error::InvalidControl(format!(
                "gains.kx must lie in (0, l/(2W)] = (0, {kx_max}], got {}",
                self.kx
            )));
        }
        if !(self.ky > 0.0 && self.ky <= ky_max * (1.0 + 1e-12)) {
            return Err(Error::InvalidControl(format!(
                "gains.ky must lie in (0, l/(2L)] = (0, {ky_max}], got {}",
                self.ky
            )));
        }
        for (name, v) in [("gains.mx", self.mx), ("gains.my", self.my)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidControl(format!(
                        "{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if !(self.kvx >= 0.0 && self.kvy >= 0.0) {
            return Err(Error::InvalidControl(
                "gains.kvx and gains.kvy must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// `sat_M(x)`: identity on `[-M, M]`, clipped outside.
pub fn saturate(x: f64, bound: f64) -> f64 {
    x.clamp(-bound, bound)
}

/// Output of the single-cell law: the two height differences and the four
/// corner heights `[Z1, Z2, Z3, Z4]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCellCommand {
    pub dz1: f64,
    pub dz2: f64,
    pub corners: [f64; 4],
}

impl SingleCellCommand {
    /// The same command in separable form on an `S(1, 1)` grid.
    pub fn to_grid(&self, cfg: &SurfaceConfig) -> ActuatorGrid {
        let q = cfg.stroke / 4.0;
        ActuatorGrid {
            za_i: vec![q + self.dz1 / 2.0, q - self.dz1 / 2.0],
            za_j: vec![q + self.dz2 / 2.0, q - self.dz2 / 2.0],
        }
    }
}

/// Saturated negative feedback of the position error `e = p - p_ref`, with
/// optional velocity damping, tilting the cell about its midlines.
///
/// `dz1 = -sat_{l/2}(kx sat_W(e_x) + kvx vx)` and likewise for `dz2`. With
/// `kvx = 0` and admissible gains the outer clamp never engages.
pub fn single_cell_feedback(
    error: (f64, f64),
    velocity: (f64, f64),
    gains: &SingleCellGains,
    cfg: &SurfaceConfig,
) -> SingleCellCommand {
    let half = cfg.stroke / 2.0;
    let mx = gains.mx.unwrap_or(cfg.width);
    let my = gains.my.unwrap_or(cfg.length);
    let dz1 = -saturate(
        gains.kx * saturate(error.0, mx) + gains.kvx * velocity.0,
        half,
    );
    let dz2 = -saturate(
        gains.ky * saturate(error.1, my) + gains.kvy * velocity.1,
        half,
    );
    let corners = [
        half + dz1 / 2.0 + dz2 / 2.0,
        half - dz1 / 2.0 + dz2 / 2.0,
        half - dz1 / 2.0 - dz2 / 2.0,
        half + dz1 / 2.0 - dz2 / 2.0,
    ];
    SingleCellCommand { dz1, dz2, corners }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    Distributed,
    Wave,
    Funnel,
    SingleCell,
}

impl ControlMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ControlMode::Distributed => "distributed",
            ControlMode::Wave => "wave",
            ControlMode::Funnel => "funnel",
            ControlMode::SingleCell => "single_cell",
        }
    }
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ControlMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "distributed" => Ok(ControlMode::Distributed),
            "wave" => Ok(ControlMode::Wave),
            "funnel" => Ok(ControlMode::Funnel),
            "single_cell" | "single-cell" => Ok(ControlMode::SingleCell),
            other => Err(Error::InvalidControl(format!(
                "unknown control mode '{other}' (expected distributed, wave, funnel or single_cell)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlParams {
    pub mode: ControlMode,
    pub split: AxisSplit,
    pub gains: Option<SingleCellGains>,
    /// Per tick, give the full stroke to whichever axis carries more
    /// remaining error (`(a, b)` becomes `(1, 0)` or `(0, 1)`).
    pub axis_switching: bool,
}

impl ControlParams {
    pub fn new(mode: ControlMode, split: AxisSplit) -> Self {
        Self {
            mode,
            split,
            gains: None,
            axis_switching: false,
        }
    }

    pub fn validate(&self, cfg: &SurfaceConfig) -> Result<()> {
        if self.mode == ControlMode::SingleCell {
            if (cfg.n, cfg.m) != (1, 1) {
                return Err(Error::InvalidControl(format!(
                    "single_cell mode needs an S(1, 1) surface, got S({}, {})",
                    cfg.n, cfg.m
                )));
            }
            match &self.gains {
                Some(g) => g.validate(cfg)?,
                None => {
                    return Err(Error::InvalidControl(
                        "single_cell mode needs control.gains".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// A commanded surface: the control inputs and the grid realising them.
#[derive(Debug, Clone, PartialEq)]
pub struct Command {
    pub input: ControlInput,
    pub grid: ActuatorGrid,
}

/// Pick `(1, 0)` or `(0, 1)` by comparing the summed distance of the
/// objects outside the reference column (resp. row) to the reference
/// center along each axis. Ties go to the pitch axis.
pub fn switched_split(objects: &[ObjectState], cfg: &SurfaceConfig) -> Result<AxisSplit> {
    let (ir, jr) = cfg.reference;
    let (xr, yr) = cfg.reference_center();
    let (mut ex, mut ey) = (0.0, 0.0);
    for s in objects {
        let (i, j) = locate_cell(s, cfg)?;
        if i != ir {
            ex += (s.x - xr).abs();
        }
        if j != jr {
            ey += (s.y - yr).abs();
        }
    }
    Ok(if ey > ex {
        AxisSplit::ROLL_ONLY
    } else {
        AxisSplit::PITCH_ONLY
    })
}

/// Stateless control tick: occupancy sets, the chosen controller, then grid
/// reconstruction.
pub fn control_tick(
    objects: &[ObjectState],
    params: &ControlParams,
    cfg: &SurfaceConfig,
) -> Result<ActuatorGrid> {
    Controller::new(*params, *cfg)?
        .tick(objects, cfg)
        .map(|c| c.grid)
}

/// Controller with the per-run state the funnel needs: its input is
/// computed once per reference cell and then held.
#[derive(Debug, Clone)]
pub struct Controller {
    params: ControlParams,
    funnel: Option<((usize, usize), ControlInput)>,
}

impl Controller {
    pub fn new(params: ControlParams, cfg: SurfaceConfig) -> Result<Self> {
        params.validate(&cfg)?;
        Ok(Self {
            params,
            funnel: None,
        })
    }

    pub fn params(&self) -> &ControlParams {
        &self.params
    }

    pub fn tick(&mut self, objects: &[ObjectState], cfg: &SurfaceConfig) -> Result<Command> {
        let split = if self.params.axis_switching && self.params.mode != ControlMode::Funnel {
            switched_split(objects, cfg)?
        } else {
            self.params.split
        };
        let input = match self.params.mode {
            ControlMode::Distributed => {
                distributed_allocation(&occupancy_sets(objects, cfg)?, split, cfg)
            }
            ControlMode::Wave => wave(&occupancy_sets(objects, cfg)?, split, cfg),
            ControlMode::Funnel => match &self.funnel {
                Some((r, u)) if *r == cfg.reference => u.clone(),
                _ => {
                    let u = static_funnel(split, cfg);
                    self.funnel = Some((cfg.reference, u.clone()));
                    u
                }
            },
            ControlMode::SingleCell => return self.single_cell(objects, cfg),
        };
        let grid = reconstruct_actuator_grid(&input, cfg)?;
        Ok(Command { input, grid })
    }

    fn single_cell(&self, objects: &[ObjectState], cfg: &SurfaceConfig) -> Result<Command> {
        let gains = self
            .params
            .gains
            .ok_or_else(|| Error::InvalidControl("single_cell mode needs control.gains".into()))?;
        let (xr, yr) = cfg.reference_center();
        let count = objects.len().max(1) as f64;
        let mean = |f: fn(&ObjectState) -> f64| objects.iter().map(f).sum::<f64>() / count;
        let error = if objects.is_empty() {
            (0.0, 0.0)
        } else {
            (mean(|s| s.x) - xr, mean(|s| s.y) - yr)
        };
        let velocity = (mean(|s| s.vx), mean(|s| s.vy));
        let cmd = single_cell_feedback(error, velocity, &gains, cfg);
        Ok(Command {
            input: ControlInput {
                dz1: vec![cmd.dz1],
                dz2: vec![cmd.dz2],
                a: self.params.split.a,
                b: self.params.split.b,
            },
            grid: cmd.to_grid(cfg),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::planar_completion;
    use approx::assert_abs_diff_eq;

    fn s54() -> SurfaceConfig {
        SurfaceConfig::new(5, 4, 2.0, 2.0, 100.0, (3, 1)).unwrap()
    }

    fn in_cell(cfg: &SurfaceConfig, i: usize, j: usize) -> ObjectState {
        let (x, y) = cfg.cell_center((i, j));
        ObjectState::at_rest(x, y)
    }

    fn example_objects(cfg: &SurfaceConfig) -> Vec<ObjectState> {
        [(1, 2), (2, 4), (5, 3), (4, 1)]
            .iter()
            .map(|&(i, j)| in_cell(cfg, i, j))
            .collect()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn occupancy_examples() {
        let cfg = s54();
        assert!(occupancy_sets(&[], &cfg).unwrap().is_empty());
        assert!(occupancy_sets(&[in_cell(&cfg, 3, 1)], &cfg)
            .unwrap()
            .is_empty());
        let s = occupancy_sets(&example_objects(&cfg), &cfg).unwrap();
        assert_eq!(s.cl, set(&[1, 2]));
        assert_eq!(s.cr, set(&[4, 5]));
        assert!(s.rd.is_empty());
        assert_eq!(s.ru, set(&[2, 3, 4]));
        let s = occupancy_sets(&[in_cell(&cfg, 3, 2)], &cfg).unwrap();
        assert!(s.cl.is_empty() && s.cr.is_empty() && s.rd.is_empty());
        assert_eq!(s.ru, set(&[2]));
    }

    #[test]
    fn distributed_example() {
        let cfg = s54();
        let s = occupancy_sets(&example_objects(&cfg), &cfg).unwrap();
        let u = distributed_allocation(&s, AxisSplit::EVEN, &cfg);
        assert_eq!(u.dz1, vec![25.0, 25.0, 0.0, -25.0, -25.0]);
        assert_eq!(u.dz2[0], 0.0);
        for &v in &u.dz2[1..] {
            assert_abs_diff_eq!(v, -50.0 / 3.0, epsilon = 1e-12);
        }
        let empty = distributed_allocation(&OccupancySets::default(), AxisSplit::EVEN, &cfg);
        assert_eq!(empty, ControlInput::zeros(&cfg, 0.5, 0.5));
    }

    #[test]
    fn wave_example() {
        let cfg = s54();
        let s = occupancy_sets(&example_objects(&cfg), &cfg).unwrap();
        let u = wave(&s, AxisSplit::EVEN, &cfg);
        assert_eq!(u.dz1, vec![50.0, 0.0, 0.0, 0.0, -50.0]);
        assert_eq!(u.dz2, vec![0.0, 0.0, 0.0, -50.0]);
        assert_eq!(
            wave(&OccupancySets::default(), AxisSplit::EVEN, &cfg),
            ControlInput::zeros(&cfg, 0.5, 0.5)
        );
        let corner = occupancy_sets(&[in_cell(&cfg, 5, 4)], &cfg).unwrap();
        let u = wave(&corner, AxisSplit::EVEN, &cfg);
        assert_eq!(u.dz1.iter().filter(|v| **v != 0.0).count(), 1);
        assert_eq!(u.dz2.iter().filter(|v| **v != 0.0).count(), 1);
        assert_eq!(u.dz1[4], -50.0);
        assert_eq!(u.dz2[3], -50.0);
    }

    #[test]
    fn funnel_examples() {
        let cfg = s54();
        let u = static_funnel(AxisSplit::EVEN, &cfg);
        assert_eq!(u.dz1, vec![25.0, 25.0, 0.0, -25.0, -25.0]);
        assert_eq!(u.dz2[0], 0.0);
        for &v in &u.dz2[1..] {
            assert_abs_diff_eq!(v, -50.0 / 3.0, epsilon = 1e-12);
        }
        let one = SurfaceConfig::new(1, 1, 2.0, 2.0, 1.0, (1, 1)).unwrap();
        assert_eq!(
            static_funnel(AxisSplit::EVEN, &one),
            ControlInput::zeros(&one, 0.5, 0.5)
        );
        let track = SurfaceConfig::new(1, 10, 2.0, 2.0, 1.0, (1, 10)).unwrap();
        let u = static_funnel(AxisSplit::EVEN, &track);
        for j in 0..9 {
            assert_abs_diff_eq!(u.dz2[j], 0.5 / 9.0, epsilon = 1e-15);
        }
        assert_eq!(u.dz2[9], 0.0);
    }

    #[test]
    fn axis_split_validation() {
        assert!(AxisSplit::new(0.5, 0.5).is_ok());
        assert!(AxisSplit::new(1.0, 0.0).is_ok());
        let err = AxisSplit::new(0.6, 0.6).unwrap_err().to_string();
        assert!(err.contains("a + control.b must equal 1"), "{err}");
        assert!(AxisSplit::new(-0.5, 1.5).is_err());
    }

    #[test]
    fn single_cell_examples() {
        let cfg = SurfaceConfig::new(1, 1, 2.0, 2.0, 1.0, (1, 1)).unwrap();
        let gains = SingleCellGains::max_for(&cfg);
        let c = single_cell_feedback((0.0, 0.0), (0.0, 0.0), &gains, &cfg);
        assert_eq!((c.dz1, c.dz2), (0.0, 0.0));
        assert_eq!(c.corners, [0.5; 4]);
        let c = single_cell_feedback((10.0 * cfg.width, 0.0), (0.0, 0.0), &gains, &cfg);
        assert_abs_diff_eq!(c.dz1, -cfg.stroke / 2.0);
        let c = single_cell_feedback((0.3, -1.7), (0.2, 0.1), &gains.with_damping(0.4, 0.4), &cfg);
        let [z1, z2, z3, z4] = c.corners;
        assert_abs_diff_eq!(planar_completion(z1, z2, z4), z3, epsilon = 1e-15);
        assert_abs_diff_eq!(z1 - z2, c.dz1, epsilon = 1e-15);
        assert_abs_diff_eq!(z1 - z4, c.dz2, epsilon = 1e-15);
        let g = c.to_grid(&cfg);
        assert_eq!(g.cell_corners(1, 1), c.corners);
    }

    #[test]
    fn gain_bounds_enforced() {
        let cfg = SurfaceConfig::new(1, 1, 2.0, 2.0, 1.0, (1, 1)).unwrap();
        assert!(SingleCellGains::max_for(&cfg).validate(&cfg).is_ok());
        let too_big = SingleCellGains {
            kx: 0.3,
            ..SingleCellGains::max_for(&cfg)
        };
        assert!(too_big.validate(&cfg).is_err());
    }

    #[test]
    fn control_tick_examples() {
        let cfg = s54();
        let level = control_tick(
            &[in_cell(&cfg, 3, 1)],
            &ControlParams::new(ControlMode::Wave, AxisSplit::EVEN),
            &cfg,
        )
        .unwrap();
        assert_eq!(level, ActuatorGrid::retracted(&cfg));
        let g = control_tick(
            &example_objects(&cfg),
            &ControlParams::new(ControlMode::Wave, AxisSplit::EVEN),
            &cfg,
        )
        .unwrap();
        assert_eq!(g.za_i, vec![50.0, 0.0, 0.0, 0.0, 0.0, 50.0]);
        assert_eq!(g.za_j, vec![0.0, 0.0, 0.0, 0.0, 50.0]);
    }

    #[test]
    fn funnel_is_held_across_ticks() {
        let cfg = s54();
        let mut ctl = Controller::new(
            ControlParams::new(ControlMode::Funnel, AxisSplit::EVEN),
            cfg,
        )
        .unwrap();
        let first = ctl.tick(&example_objects(&cfg), &cfg).unwrap();
        let second = ctl.tick(&[in_cell(&cfg, 3, 1)], &cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn single_cell_mode_requires_s11() {
        let cfg = s54();
        let mut p = ControlParams::new(ControlMode::SingleCell, AxisSplit::EVEN);
        p.gains = Some(SingleCellGains::max_for(&cfg));
        assert!(Controller::new(p, cfg).is_err());
    }

    #[test]
    fn switched_split_prefers_larger_error() {
        let cfg = s54();
        let far_east = [in_cell(&cfg, 5, 1)];
        assert_eq!(
            switched_split(&far_east, &cfg).unwrap(),
            AxisSplit::PITCH_ONLY
        );
        let far_north = [in_cell(&cfg, 3, 4)];
        assert_eq!(
            switched_split(&far_north, &cfg).unwrap(),
            AxisSplit::ROLL_ONLY
        );
    }
}
