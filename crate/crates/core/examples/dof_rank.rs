//! Count degrees of freedom of S(n, m) surfaces and confirm the count from
//! the numeric rank of the orientation constraint Jacobian.

use morphsurf::constraints::{constraint_jacobian, numeric_rank, orientation_coordinates};
use morphsurf::{dof_count, surface_orientation_field, ControlInput, SurfaceConfig};

fn main() -> morphsurf::Result<()> {
    println!("  n  m   coords  constraints  rank  dof");
    for n in 1..=4 {
        for m in 1..=4 {
            let cfg = SurfaceConfig::new(n, m, 2.0, 2.0, 1.0, (n, m))?;
            // A generic tilted configuration; the datum sits past the reference.
            let u = ControlInput {
                dz1: (1..=n).map(|i| 0.4 * i as f64 / (n * n) as f64).collect(),
                dz2: (1..=m).map(|j| 0.3 * j as f64 / (m * m) as f64).collect(),
                a: 0.5,
                b: 0.5,
            };
            let field = surface_orientation_field(&u, &cfg)?;
            let jac = constraint_jacobian(n, m, &orientation_coordinates(&field), 1e-6);
            let d = dof_count(&cfg);
            println!(
                "  {n}  {m}   {:6}  {:11}  {:4}  {:3}",
                d.coordinates,
                d.constraints,
                numeric_rank(&jac, 1e-8),
                d.dof
            );
        }
    }
    Ok(())
}
