//! A single object steered around a U-shaped path on S(3, 3) by moving the
//! reference cell at scheduled times.

use std::path::Path;

use morphsurf::io::load_scenario;
use morphsurf::{locate_cell, run};

fn main() -> morphsurf::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/uturn.json");
    let sc = load_scenario(&path)?;
    for change in &sc.reference_schedule {
        println!(
            "t = {:5.1} s: reference moves to {:?}",
            change.time, change.reference
        );
    }
    let out = run(&sc)?;
    let mut last = None;
    for row in &out.trace.rows {
        let cell = locate_cell(&row.objects[0], &sc.surface)?;
        if last != Some(cell) {
            println!("t = {:5.1} s: object enters cell {cell:?}", row.t);
            last = Some(cell);
        }
    }
    match out.metrics.convergence_time {
        Some(t) => println!("converged at {t:.1} s"),
        None => println!("no convergence by {} s", sc.t_max),
    }
    Ok(())
}
