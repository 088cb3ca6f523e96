//! One object on a fixed incline: speed approaches the terminal value
//! (g / b) cos(theta) sin(theta), and on a level surface it decays as e^(-bt).

use morphsurf::dynamics::{advance_unbounded, gravity_drive};
use morphsurf::{steady_speed, CellOrientation, ObjectState, PhysicsParams};

fn main() -> morphsurf::Result<()> {
    let p = PhysicsParams::default();
    let o = CellOrientation::new(14f64.to_radians(), 0.0);
    let drive = gravity_drive(o, p.gravity);
    let terminal = steady_speed(o, &p)?;
    println!(
        "14 deg pitch, b = {}: terminal speed {terminal:.4} m/s",
        p.friction
    );
    let mut s = ObjectState::at_rest(0.0, 0.0);
    let steps_per_report = (5.0 / p.dt) as usize;
    for k in 1..=12 {
        for _ in 0..steps_per_report {
            s = advance_unbounded(&s, drive, &p);
        }
        println!(
            "  t = {:5.1} s  v = {:8.4} m/s  ({:5.1}% of terminal)",
            k as f64 * 5.0,
            s.vx,
            100.0 * s.vx / terminal
        );
    }

    println!("\nlevel surface, initial speed 1 m/s:");
    let mut s = ObjectState::at_rest(0.0, 0.0).with_velocity(1.0, 0.0);
    for k in 1..=5 {
        for _ in 0..(10.0 / p.dt) as usize {
            s = advance_unbounded(&s, (0.0, 0.0), &p);
        }
        let t = k as f64 * 10.0;
        println!(
            "  t = {t:4.0} s  v = {:.5}  e^(-bt) = {:.5}",
            s.vx,
            (-p.friction * t).exp()
        );
    }
    Ok(())
}
