//! File formats: JSON scenario files, CSV traces, CSV height grids and JSON
//! metrics documents.
//!
//! Scenario file keys (SI units):
//!
//! ```text
//! surface            { n, m, W, L, l, ref: [I, J] }
//! physics            { g, b, tau, dt }                     optional
//! control            { mode, a, b, rate, gains, axis_switching }
//! objects            [ { x, y, vx, vy, mass } ]            or
//! objects_random     { count, seed, mass }
//! t_max              seconds
//! reference_schedule [ { t, ref: [I, J] } ]                optional
//! ```
//!
//! Unknown keys are rejected.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constraints::RawGrid;
use crate::control::{AxisSplit, ControlMode, ControlParams, SingleCellGains};
use crate::dynamics::{ObjectState, PhysicsParams, DEFAULT_GRAVITY};
use crate::error::{Error, Result};
use crate::sim::{InitialObjects, ReferenceChange, RunMetrics, Scenario, SimTrace, TraceRow};
use crate::surface::{ActuatorGrid, ControlInput, SurfaceConfig};

/// Default control rate, Hz.
pub const DEFAULT_CONTROL_RATE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub surface: SurfaceSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    pub control: ControlSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<ObjectSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects_random: Option<RandomObjects>,
    pub t_max: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reference_schedule: Vec<ScheduleEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W")]
    pub width: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "l")]
    pub stroke: f64,
    #[serde(rename = "ref")]
    pub reference: [usize; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    #[serde(default = "default_gravity")]
    pub g: f64,
    #[serde(default = "default_friction")]
    pub b: f64,
    #[serde(default)]
    pub tau: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        PhysicsParams::default().into()
    }
}

impl From<PhysicsParams> for PhysicsSection {
    fn from(p: PhysicsParams) -> Self {
        Self {
            g: p.gravity,
            b: p.friction,
            tau: p.tau,
            dt: p.dt,
        }
    }
}

fn default_gravity() -> f64 {
    DEFAULT_GRAVITY
}

fn default_friction() -> f64 {
    PhysicsParams::default().friction
}

fn default_dt() -> f64 {
    PhysicsParams::default().dt
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSection {
    pub mode: ControlMode,
    #[serde(default = "half")]
    pub a: f64,
    #[serde(default = "half")]
    pub b: f64,
    #[serde(default = "default_rate")]
    pub rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gains: Option<SingleCellGains>,
    #[serde(default)]
    pub axis_switching: bool,
}

fn half() -> f64 {
    0.5
}

fn default_rate() -> f64 {
    DEFAULT_CONTROL_RATE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
    #[serde(default = "unit_mass")]
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomObjects {
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "unit_mass")]
    pub mass: f64,
}

fn unit_mass() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub t: f64,
    #[serde(rename = "ref")]
    pub reference: [usize; 2],
}

/// Wraps an error so the message starts with the offending key.
fn at_key(key: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::InvalidScenario(format!("{key}: {e}"))
}

impl ScenarioFile {
    /// Checks every section and builds the simulation scenario.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let s = &self.surface;
        let surface = SurfaceConfig::new(
            s.n,
            s.m,
            s.width,
            s.length,
            s.stroke,
            (s.reference[0], s.reference[1]),
        )
        .map_err(at_key("surface"))?;
        let physics = PhysicsParams {
            gravity: self.physics.g,
            friction: self.physics.b,
            tau: self.physics.tau,
            dt: self.physics.dt,
        };
        physics.validate().map_err(at_key("physics"))?;
        let split = AxisSplit::new(self.control.a, self.control.b).map_err(at_key("control"))?;
        let control = ControlParams {
            mode: self.control.mode,
            split,
            gains: self.control.gains,
            axis_switching: self.control.axis_switching,
        };
        let (objects, seed) = match (&self.objects, &self.objects_random) {
            (Some(list), None) => (
                InitialObjects::Explicit(
                    list.iter()
                        .map(|o| ObjectState {
                            x: o.x,
                            y: o.y,
                            vx: o.vx,
                            vy: o.vy,
                            mass: o.mass,
                        })
                        .collect(),
                ),
                0,
            ),
            (None, Some(r)) => (
                InitialObjects::Random {
                    count: r.count,
                    mass: r.mass,
                },
                r.seed,
            ),
            _ => {
                return Err(Error::InvalidScenario(
                    "exactly one of `objects` or `objects_random` must be given".into(),
                ))
            }
        };
        let sc = Scenario {
            surface,
            physics,
            control,
            objects,
            control_rate: self.control.rate,
            t_max: self.t_max,
            seed,
            reference_schedule: self
                .reference_schedule
                .iter()
                .map(|e| ReferenceChange {
                    time: e.t,
                    reference: (e.reference[0], e.reference[1]),
                })
                .collect(),
        };
        sc.validate()?;
        Ok(sc)
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(sc: &Scenario) -> Self {
        let c = &sc.surface;
        let (objects, objects_random) = match &sc.objects {
            InitialObjects::Explicit(list) => (
                Some(
                    list.iter()
                        .map(|o| ObjectSpec {
                            x: o.x,
                            y: o.y,
                            vx: o.vx,
                            vy: o.vy,
                            mass: o.mass,
                        })
                        .collect(),
                ),
                None,
            ),
            InitialObjects::Random { count, mass } => (
                None,
                Some(RandomObjects {
                    count: *count,
                    seed: sc.seed,
                    mass: *mass,
                }),
            ),
        };
        Self {
            surface: SurfaceSection {
                n: c.n,
                m: c.m,
                width: c.width,
                length: c.length,
                stroke: c.stroke,
                reference: [c.reference.0, c.reference.1],
            },
            physics: sc.physics.into(),
            control: ControlSection {
                mode: sc.control.mode,
                a: sc.control.split.a(),
                b: sc.control.split.b(),
                rate: sc.control_rate,
                gains: sc.control.gains,
                axis_switching: sc.control.axis_switching,
            },
            objects,
            objects_random,
            t_max: sc.t_max,
            reference_schedule: sc
                .reference_schedule
                .iter()
                .map(|r| ScheduleEntry {
                    t: r.time,
                    reference: [r.reference.0, r.reference.1],
                })
                .collect(),
        }
    }
}

/// Parses and checks a scenario document. `source_name` labels diagnostics.
pub fn parse_scenario(text: &str, source_name: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        message: e.to_string(),
    })?;
    file.to_scenario()
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)?;
    parse_scenario(&text, &path.display().to_string())
}

/// Pretty JSON for a scenario, in the scenario file format.
pub fn scenario_to_json(sc: &Scenario) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ScenarioFile::from(sc))?)
}

/// Fixed-width scientific notation; 17 significant digits round-trip f64.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trace CSV header for `objects` objects on an S(n, m) surface.
pub fn trace_header(objects: usize, n: usize, m: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for k in 1..=objects {
        for field in ["x", "y", "vx", "vy"] {
            h.push(format!("obj{k}.{field}"));
        }
    }
    h.extend((1..=n).map(|i| format!("dz1[{i}]")));
    h.extend((1..=m).map(|j| format!("dz2[{j}]")));
    h.extend((1..=n + 1).map(|i| format!("za_i[{i}]")));
    h.extend((1..=m + 1).map(|j| format!("za_j[{j}]")));
    h
}

pub fn write_trace<W: Write>(trace: &SimTrace, cfg: &SurfaceConfig, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trace_header(trace.object_count(), cfg.n, cfg.m))?;
    for row in &trace.rows {
        let mut rec = vec![num(row.t)];
        for s in &row.objects {
            rec.extend([num(s.x), num(s.y), num(s.vx), num(s.vy)]);
        }
        rec.extend(row.input.dz1.iter().map(|&v| num(v)));
        rec.extend(row.input.dz2.iter().map(|&v| num(v)));
        rec.extend(row.grid.za_i.iter().map(|&v| num(v)));
        rec.extend(row.grid.za_j.iter().map(|&v| num(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_trace(trace: &SimTrace, cfg: &SurfaceConfig, path: &Path) -> Result<()> {
    write_trace(trace, cfg, fs::File::create(path)?)
}

/// Layout of a trace file deduced from its header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceLayout {
    pub objects: usize,
    pub n: usize,
    pub m: usize,
}

impl TraceLayout {
    pub fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            source_name: "trace header".into(),
            message,
        };
        let count = |prefix: &str| header.iter().filter(|h| h.starts_with(prefix)).count();
        let objects = count("obj") / 4;
        let n = count("dz1[");
        let m = count("dz2[");
        let layout = Self { objects, n, m };
        let expected = trace_header(objects, n, m);
        if header.iter().ne(expected.iter().map(String::as_str)) {
            return Err(bad(format!(
                "columns do not match the layout of {objects} objects on S({n}, {m})"
            )));
        }
        Ok(layout)
    }
}

/// Reads a trace CSV. Object masses and the control split are not stored
/// in the file; they come back as 1 kg and `(0, 0)`.
pub fn read_trace<R: Read>(input: R) -> Result<(TraceLayout, SimTrace)> {
    let mut r = csv::Reader::from_reader(input);
    let layout = TraceLayout::from_header(r.headers()?)?;
    let TraceLayout { objects, n, m } = layout;
    let mut trace = SimTrace::default();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .enumerate()
            .map(|(col, s)| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse {
                    source_name: "trace".into(),
                    message: format!("row {}, column {}: {e}", line + 2, col + 1),
                })
            })
            .collect::<Result<_>>()?;
        let mut it = vals.into_iter();
        let mut take = |k: usize| -> Vec<f64> { it.by_ref().take(k).collect() };
        let t = take(1)[0];
        let objs = take(4 * objects)
            .chunks(4)
            .map(|c| ObjectState {
                x: c[0],
                y: c[1],
                vx: c[2],
                vy: c[3],
                mass: 1.0,
            })
            .collect();
        let input = ControlInput {
            dz1: take(n),
            dz2: take(m),
            a: 0.0,
            b: 0.0,
        };
        let grid = ActuatorGrid {
            za_i: take(n + 1),
            za_j: take(m + 1),
        };
        trace.rows.push(TraceRow {
            t,
            objects: objs,
            input,
            grid,
        });
    }
    Ok((layout, trace))
}

pub fn load_trace(path: &Path) -> Result<(TraceLayout, SimTrace)> {
    read_trace(fs::File::open(path)?)
}

/// Metadata carried by a grid file's `#` comment lines.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridMeta {
    pub width: Option<f64>,
    pub length: Option<f64>,
    pub stroke: Option<f64>,
}

/// Writes actuator heights, one CSV line per actuator row, preceded by a
/// `# W=.. L=.. l=..` comment.
pub fn write_grid<W: Write>(grid: &RawGrid, cfg: &SurfaceConfig, mut out: W) -> Result<()> {
    writeln!(out, "# W={} L={} l={}", cfg.width, cfg.length, cfg.stroke)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for row in grid.rows() {
        w.write_record(row.iter().map(|&v| num(v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_grid<R: Read>(mut input: R) -> Result<(GridMeta, RawGrid)> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut meta = GridMeta::default();
    for line in text.lines().filter_map(|l| l.trim().strip_prefix('#')) {
        for pair in line.split_whitespace() {
            let Some((key, value)) = pair.split_once('=') else {
                continue;
            };
            let value: f64 = value.parse().map_err(|_| Error::Parse {
                source_name: "grid metadata".into(),
                message: format!("`{pair}` is not a number"),
            })?;
            match key {
                "W" => meta.width = Some(value),
                "L" => meta.length = Some(value),
                "l" => meta.stroke = Some(value),
                _ => {}
            }
        }
    }
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    source_name: "grid".into(),
                    message: format!("data row {}: `{s}`: {e}", line + 1),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((meta, RawGrid::from_rows(rows)?))
}

/// Everything `run` reports, plus the scenario that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDocument {
    #[serde(flatten)]
    pub metrics: RunMetrics,
    /// Settle window used for the convergence time, seconds.
    pub settle_window: f64,
    pub parameters: ScenarioFile,
}

impl MetricsDocument {
    pub fn new(metrics: RunMetrics, sc: &Scenario) -> Self {
        Self {
            metrics,
            settle_window: sc.control_period(),
            parameters: ScenarioFile::from(sc),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            source_name: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// CSV summary table, one line per mode.
pub fn summary_csv(summaries: &[crate::sim::ModeSummary]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v}"));
    let mut s = String::from("mode,runs,converged,failed,median,min,max\n");
    for m in summaries {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            m.mode,
            m.runs,
            m.converged,
            m.failed,
            opt(m.median),
            opt(m.min),
            opt(m.max)
        );
    }
    s
}
