//! Build a scenario in code, save it as JSON, load it back, run it and
//! write the trace and metrics the way `morphsurf run` does.

use morphsurf::io::{parse_scenario, save_trace, scenario_to_json, MetricsDocument};
use morphsurf::{
    run, AxisSplit, ControlMode, ControlParams, InitialObjects, PhysicsParams, Scenario,
    SurfaceConfig,
};

fn main() -> morphsurf::Result<()> {
    let sc = Scenario {
        surface: SurfaceConfig::new(4, 4, 1.0, 1.0, 0.5, (4, 4))?,
        physics: PhysicsParams {
            friction: 1.0,
            ..PhysicsParams::default()
        },
        control: ControlParams::new(ControlMode::Distributed, AxisSplit::EVEN),
        objects: InitialObjects::Random {
            count: 6,
            mass: 1.0,
        },
        control_rate: 10.0,
        t_max: 120.0,
        seed: 42,
        reference_schedule: vec![],
    };
    let json = scenario_to_json(&sc)?;
    println!("{json}");
    let loaded = parse_scenario(&json, "generated")?;
    assert_eq!(loaded.initial_objects(), sc.initial_objects());

    let out = run(&loaded)?;
    let dir = std::env::temp_dir().join("morphsurf-scenario-file");
    std::fs::create_dir_all(&dir)?;
    save_trace(&out.trace, &loaded.final_surface(), &dir.join("trace.csv"))?;
    let doc = MetricsDocument::new(out.metrics, &loaded);
    std::fs::write(dir.join("metrics.json"), doc.to_json()?)?;
    println!(
        "converged: {}, convergence time: {:?} s, {} trace rows written to {}",
        doc.metrics.converged,
        doc.metrics.convergence_time,
        out.trace.rows.len(),
        dir.display()
    );
    Ok(())
}
