//! The S(1, 10) track with one object per cell under each controller.
//! Prints convergence times and each object's peak speed against the
//! terminal speed of the wave slope.

use std::path::Path;

use morphsurf::io::load_scenario;
use morphsurf::{
    run, steady_velocity, surface_orientation_field, wave, ControlMode, OccupancySets,
};

fn main() -> morphsurf::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper-s1x10.json");
    let sc = load_scenario(&path)?;
    for mode in [
        ControlMode::Wave,
        ControlMode::Distributed,
        ControlMode::Funnel,
    ] {
        let out = run(&sc.with_mode(mode))?;
        match out.metrics.convergence_time {
            Some(t) => println!("{:>12}: converged at {t:7.1} s", mode.as_str()),
            None => println!("{:>12}: no convergence by {} s", mode.as_str(), sc.t_max),
        }
    }

    // Steepest slope the wave applies to a single row.
    let cfg = sc.surface;
    let full = OccupancySets::full(&cfg);
    let u = wave(&full, sc.control.split, &cfg);
    let o = surface_orientation_field(&u, &cfg)?.get(1, 1);
    let (_, plateau) = steady_velocity(o, &sc.physics)?;
    println!(
        "\nwave terminal speed on the track: {:.4} m/s",
        plateau.abs()
    );
    let out = run(&sc.with_mode(ControlMode::Wave))?;
    for k in 0..out.trace.object_count() {
        let peak = out
            .trace
            .rows
            .iter()
            .map(|r| r.objects[k].speed())
            .fold(0.0, f64::max);
        println!(
            "  object {:2}: peak {:.4} m/s ({:.3} of terminal)",
            k + 1,
            peak,
            peak / plateau.abs()
        );
    }
    Ok(())
}
