//! Run orchestration: control ticks, actuator response, dynamics substeps,
//! traces and convergence metrics.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::{ControlMode, ControlParams, Controller};
use crate::dynamics::{
    grid_response, step_object_with_drive, GravityDrive, ObjectState, PhysicsParams,
};
use crate::error::{Error, Result};
use crate::surface::{ActuatorGrid, ControlInput, SurfaceConfig};

/// Speed below which an object in the reference cell counts as settled, m/s.
pub const SETTLE_SPEED: f64 = 1e-3;

/// Environment variable capping the number of threads used by [`batch`].
pub const THREADS_ENV: &str = "MORPHSURF_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialObjects {
    Explicit(Vec<ObjectState>),
    /// `count` objects at rest, uniform over the workspace, drawn from the
    /// scenario seed.
    Random {
        count: usize,
        mass: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceChange {
    pub time: f64,
    pub reference: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub surface: SurfaceConfig,
    pub physics: PhysicsParams,
    pub control: ControlParams,
    pub objects: InitialObjects,
    /// Control update rate, Hz.
    pub control_rate: f64,
    pub t_max: f64,
    pub seed: u64,
    pub reference_schedule: Vec<ReferenceChange>,
}

impl Scenario {
    pub fn control_period(&self) -> f64 {
        1.0 / self.control_rate
    }

    /// Integration substeps per control period.
    pub fn substeps(&self) -> usize {
        (self.control_period() / self.physics.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        self.surface.validate()?;
        self.physics.validate()?;
        self.control.validate(&self.surface)?;
        if !(self.control_rate.is_finite() && self.control_rate > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "control.rate must be positive, got {}",
                self.control_rate
            )));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        let period = self.control_period();
        let k = self.substeps();
        if k == 0 || ((k as f64) * self.physics.dt - period).abs() > 1e-6 * period {
            return Err(Error::InvalidScenario(format!(
                "physics.dt = {} must divide the control period {period} s",
                self.physics.dt
            )));
        }
        let mut last = f64::NEG_INFINITY;
        for change in &self.reference_schedule {
            if !(change.time >= 0.0 && change.time >= last) {
                return Err(Error::InvalidScenario(
                    "reference_schedule times must be non-negative and non-decreasing".into(),
                ));
            }
            last = change.time;
            self.surface.with_reference(change.reference)?;
        }
        match &self.objects {
            InitialObjects::Explicit(objs) => {
                for (k, s) in objs.iter().enumerate() {
                    let inside = s.x >= 0.0
                        && s.x <= self.surface.extent_x()
                        && s.y >= 0.0
                        && s.y <= self.surface.extent_y();
                    if !inside {
                        return Err(Error::InvalidScenario(format!(
                            "objects[{k}] at ({}, {}) lies outside the workspace",
                            s.x, s.y
                        )));
                    }
                    if !(s.mass > 0.0) {
                        return Err(Error::InvalidScenario(format!(
                            "objects[{k}].mass must be positive"
                        )));
                    }
                }
            }
            InitialObjects::Random { mass, .. } => {
                if !(*mass > 0.0) {
                    return Err(Error::InvalidScenario(
                        "objects_random.mass must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Initial object states; random placements depend only on the seed.
    pub fn initial_objects(&self) -> Vec<ObjectState> {
        match &self.objects {
            InitialObjects::Explicit(objs) => objs.clone(),
            InitialObjects::Random { count, mass } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..*count)
                    .map(|_| {
                        let x = rng.gen::<f64>() * self.surface.extent_x();
                        let y = rng.gen::<f64>() * self.surface.extent_y();
                        ObjectState {
                            mass: *mass,
                            ..ObjectState::at_rest(x, y)
                        }
                    })
                    .collect()
            }
        }
    }

    /// Surface configuration with the last scheduled reference applied.
    pub fn final_surface(&self) -> SurfaceConfig {
        let mut cfg = self.surface;
        if let Some(last) = self.reference_schedule.last() {
            cfg.reference = last.reference;
        }
        cfg
    }

    pub fn with_mode(&self, mode: ControlMode) -> Self {
        let mut sc = self.clone();
        sc.control.mode = mode;
        sc
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut sc = self.clone();
        sc.seed = seed;
        sc
    }
}

/// One trace row, recorded at every control tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub objects: Vec<ObjectState>,
    pub input: ControlInput,
    pub grid: ActuatorGrid,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimTrace {
    pub rows: Vec<TraceRow>,
}

impl SimTrace {
    pub fn object_count(&self) -> usize {
        self.rows.first().map_or(0, |r| r.objects.len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub mode: ControlMode,
    pub seed: u64,
    /// Whether every object settled in the reference cell before `t_max`.
    pub converged: bool,
    /// Earliest time after which all objects stay in the reference cell.
    pub convergence_time: Option<f64>,
    /// Per object: earliest time after which it stays in the reference cell.
    pub arrival_times: Vec<Option<f64>>,
    /// Distance travelled by each object in the plane, meters.
    pub path_lengths: Vec<f64>,
    /// Simulated time at which the run stopped.
    pub final_time: f64,
    pub wall_clock_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trace: SimTrace,
    pub metrics: RunMetrics,
}

fn all_settled(objects: &[ObjectState], cfg: &SurfaceConfig) -> bool {
    objects
        .iter()
        .all(|s| cfg.in_reference_cell(s.x, s.y) && s.speed() < SETTLE_SPEED)
}

/// Simulate a scenario until every object has settled in the reference
/// cell for one full control period, or until `t_max`.
pub fn run(sc: &Scenario) -> Result<RunOutput> {
    simulate(sc, true)
}

/// Simulate a scenario up to `t_max` without stopping at convergence. The
/// metrics still report whether and when the objects converged.
pub fn run_to_t_max(sc: &Scenario) -> Result<RunOutput> {
    simulate(sc, false)
}

fn simulate(sc: &Scenario, stop_when_settled: bool) -> Result<RunOutput> {
    sc.validate()?;
    let started = Instant::now();
    let p = sc.physics;
    let period = sc.control_period();
    let substeps = sc.substeps();
    let last_tick = (sc.t_max / period + 1e-9).floor() as usize;

    let mut cfg = sc.surface;
    let mut schedule = sc.reference_schedule.iter().peekable();
    let mut controller = Controller::new(sc.control, cfg)?;
    let mut objects = sc.initial_objects();
    let mut path_lengths = vec![0.0; objects.len()];
    let mut actual = ActuatorGrid::retracted(&cfg);
    let mut trace = SimTrace::default();
    let mut settled_period = false;
    let mut converged = false;

    for tick in 0..=last_tick {
        let t = tick as f64 * period;
        while let Some(change) = schedule.next_if(|c| c.time <= t + 1e-9) {
            cfg = cfg.with_reference(change.reference)?;
            settled_period = false;
        }

        let command = controller.tick(&objects, &cfg)?;
        if p.tau == 0.0 {
            actual = command.grid.clone();
        }
        trace.rows.push(TraceRow {
            t,
            objects: objects.clone(),
            input: command.input.clone(),
            grid: actual.clone(),
        });

        if tick > 0 && settled_period && schedule.peek().is_none() {
            converged = true;
            if stop_when_settled {
                break;
            }
        }
        if tick == last_tick {
            break;
        }

        settled_period = all_settled(&objects, &cfg);
        let mut drive = GravityDrive::new(&actual.orientation_field(&cfg)?, p.gravity);
        for _ in 0..substeps {
            if p.tau > 0.0 {
                actual = grid_response(&actual, &command.grid, &p);
                drive = GravityDrive::new(&actual.orientation_field(&cfg)?, p.gravity);
            }
            for (s, len) in objects.iter_mut().zip(path_lengths.iter_mut()) {
                let next = step_object_with_drive(s, &drive, &p, &cfg)?.state;
                *len += (next.x - s.x).hypot(next.y - s.y);
                *s = next;
            }
            settled_period = settled_period && all_settled(&objects, &cfg);
        }
    }

    let final_cfg = cfg;
    let arrival_times = arrival_times(&trace, &final_cfg);
    let convergence_time = if converged {
        convergence_time(&trace, &final_cfg, period)
    } else {
        None
    };
    // Past the first settled period an object may still leave again.
    let converged = convergence_time.is_some();
    let metrics = RunMetrics {
        mode: sc.control.mode,
        seed: sc.seed,
        converged,
        convergence_time,
        arrival_times,
        path_lengths,
        final_time: trace.rows.last().map_or(0.0, |r| r.t),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { trace, metrics })
}

/// Per object, the earliest trace time from which it stays inside the
/// reference cell until the end of the trace.
pub fn arrival_times(trace: &SimTrace, cfg: &SurfaceConfig) -> Vec<Option<f64>> {
    let count = trace.object_count();
    (0..count)
        .map(|k| {
            let mut arrival = None;
            for row in trace.rows.iter().rev() {
                let s = &row.objects[k];
                if cfg.in_reference_cell(s.x, s.y) {
                    arrival = Some(row.t);
                } else {
                    break;
                }
            }
            arrival
        })
        .collect()
}

/// Earliest trace time after which every object remains inside the
/// reference cell until the end of the trace, provided that stretch lasts at
/// least `settle` seconds.
pub fn convergence_time(trace: &SimTrace, cfg: &SurfaceConfig, settle: f64) -> Option<f64> {
    let end = trace.rows.last()?.t;
    let latest = arrival_times(trace, cfg)
        .into_iter()
        .try_fold(trace.rows.first()?.t, |acc, a| a.map(|t| acc.max(t)))?;
    // Allow for the rounding of tick times.
    (end - latest >= settle - 1e-9).then_some(latest)
}

/// Metrics of one batch entry, tagged with its position in the input.
pub type BatchResult = Result<RunMetrics>;

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Run scenarios independently, in parallel, keeping input order. A failed
/// run is reported in its slot without stopping the others.
pub fn batch(scenarios: &[Scenario]) -> Vec<BatchResult> {
    let work = || -> Vec<BatchResult> {
        scenarios
            .par_iter()
            .map(|sc| run(sc).map(|out| out.metrics))
            .collect()
    };
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

/// One scenario under several controllers and seeds. Every mode sees the
/// same initial objects for a given seed.
pub fn compare_modes(
    base: &Scenario,
    modes: &[ControlMode],
    seeds: &[u64],
) -> Vec<(ControlMode, u64, BatchResult)> {
    let plan: Vec<(ControlMode, u64)> = modes
        .iter()
        .flat_map(|&mode| seeds.iter().map(move |&seed| (mode, seed)))
        .collect();
    let scenarios: Vec<Scenario> = plan
        .iter()
        .map(|&(mode, seed)| base.with_mode(mode).with_seed(seed))
        .collect();
    plan.into_iter()
        .zip(batch(&scenarios))
        .map(|((mode, seed), res)| (mode, seed, res))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: ControlMode,
    pub runs: usize,
    pub converged: usize,
    pub failed: usize,
    pub median: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

/// Median, minimum and maximum convergence time per mode, in the order the
/// modes first appear. Non-converged runs count toward `runs` only.
pub fn summarize(results: &[(ControlMode, u64, BatchResult)]) -> Vec<ModeSummary> {
    let mut modes: Vec<ControlMode> = Vec::new();
    for (mode, _, _) in results {
        if !modes.contains(mode) {
            modes.push(*mode);
        }
    }
    modes
        .into_iter()
        .map(|mode| {
            let entries: Vec<&BatchResult> = results
                .iter()
                .filter(|(m, _, _)| *m == mode)
                .map(|(_, _, r)| r)
                .collect();
            let times: Vec<f64> = entries
                .iter()
                .filter_map(|r| r.as_ref().ok().and_then(|m| m.convergence_time))
                .collect();
            ModeSummary {
                mode,
                runs: entries.len(),
                converged: times.len(),
                failed: entries.iter().filter(|r| r.is_err()).count(),
                median: median(&times),
                min: times.iter().cloned().reduce(f64::min),
                max: times.iter().cloned().reduce(f64::max),
            }
        })
        .collect()
}
