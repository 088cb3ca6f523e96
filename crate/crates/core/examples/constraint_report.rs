//! Check raw actuator grids against the planarity, pitch, roll and stroke
//! constraints.

use morphsurf::{
    reconstruct_actuator_grid, validate_grid, ControlInput, RawGrid, SurfaceConfig, Tolerances,
};

fn main() -> morphsurf::Result<()> {
    let cfg = SurfaceConfig::new(3, 3, 2.0, 2.0, 1.0, (2, 2))?;
    let u = ControlInput {
        dz1: vec![0.2, 0.0, -0.2],
        dz2: vec![0.1, 0.0, -0.3],
        a: 0.5,
        b: 0.5,
    };
    let good = RawGrid::from(&reconstruct_actuator_grid(&u, &cfg)?);
    print!(
        "reconstructed grid: {}",
        validate_grid(&good, &cfg, Tolerances::default())?
    );

    let mut bumped = good.clone();
    bumped.set(2, 2, good.rows()[1][1] + 0.05);
    print!(
        "\none actuator raised 5 cm:\n{}",
        validate_grid(&bumped, &cfg, Tolerances::default())?
    );

    let mut high = good.clone();
    for i in 1..=cfg.n + 1 {
        let z = high.rows()[0][i - 1];
        high.set(i, 1, z + 0.8);
    }
    print!(
        "\nfirst actuator row raised 80 cm:\n{}",
        validate_grid(&high, &cfg, Tolerances::default())?
    );
    Ok(())
}
