//! Reconstruct an S(3, 4) actuator grid from its seven independent inputs
//! and print heights and per-cell orientations.

use morphsurf::{
    reconstruct_actuator_grid, rotation_matrix, surface_orientation_field, validate_grid,
    ControlInput, RawGrid, SurfaceConfig, Tolerances,
};

fn main() -> morphsurf::Result<()> {
    let cfg = SurfaceConfig::new(3, 4, 2.0, 2.0, 1.0, (2, 2))?;
    // Columns left of the reference slope down toward it, right of it up.
    let u = ControlInput {
        dz1: vec![0.3, 0.0, -0.2],
        dz2: vec![0.25, 0.0, -0.1, -0.15],
        a: 0.5,
        b: 0.5,
    };
    let grid = reconstruct_actuator_grid(&u, &cfg)?;
    println!("column heights za_i: {:?}", grid.za_i);
    println!("row heights    za_j: {:?}", grid.za_j);
    println!("\nactuator heights (rows j = 1..{}):", cfg.m + 1);
    for j in 1..=cfg.m + 1 {
        let row: Vec<String> = (1..=cfg.n + 1)
            .map(|i| format!("{:6.3}", grid.height(i, j)))
            .collect();
        println!("  {}", row.join(" "));
    }

    let field = surface_orientation_field(&u, &cfg)?;
    println!("\ncell (i, j)   theta [deg]   phi [deg]");
    for j in 1..=cfg.m {
        for i in 1..=cfg.n {
            let o = field.get(i, j);
            println!(
                "  ({i}, {j})   {:10.4}   {:9.4}",
                o.theta.to_degrees(),
                o.phi.to_degrees()
            );
        }
    }
    let r = rotation_matrix(field.get(1, 1));
    println!("\nrotation of cell (1, 1):{r}");

    let report = validate_grid(&RawGrid::from(&grid), &cfg, Tolerances::default())?;
    print!("constraint check: {report}");
    Ok(())
}
