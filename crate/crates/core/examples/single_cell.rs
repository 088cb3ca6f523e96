//! Saturated feedback on a single cell: an object starting near a corner is
//! driven to the cell center, with and without friction.

use morphsurf::{
    run_to_t_max, AxisSplit, ControlMode, ControlParams, InitialObjects, ObjectState,
    PhysicsParams, Scenario, SingleCellGains, SurfaceConfig,
};

fn main() -> morphsurf::Result<()> {
    let cfg = SurfaceConfig::new(1, 1, 2.0, 2.0, 1.0, (1, 1))?;
    let gains = SingleCellGains::max_for(&cfg).with_damping(0.6, 0.6);
    for friction in [0.0, 0.1] {
        let mut control = ControlParams::new(ControlMode::SingleCell, AxisSplit::EVEN);
        control.gains = Some(gains);
        let sc = Scenario {
            surface: cfg,
            physics: PhysicsParams {
                friction,
                ..PhysicsParams::default()
            },
            control,
            objects: InitialObjects::Explicit(vec![ObjectState::at_rest(0.2, 1.7)]),
            control_rate: 10.0,
            t_max: 30.0,
            seed: 0,
            reference_schedule: vec![],
        };
        let out = run_to_t_max(&sc)?;
        let (xc, yc) = cfg.reference_center();
        println!("b = {friction}:");
        for row in out.trace.rows.iter().step_by(50) {
            let s = row.objects[0];
            println!(
                "  t = {:5.1} s  x = {:.4}  y = {:.4}  distance to center {:.2e} m",
                row.t,
                s.x,
                s.y,
                (s.x - xc).hypot(s.y - yc)
            );
        }
    }
    Ok(())
}
