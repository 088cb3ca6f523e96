//! Wave, distributed allocation and static funnel on S(5, 6) with random
//! object placements. Usage: `cargo run --release --example compare_algorithms [seeds]`.

use std::path::Path;

use morphsurf::io::{load_scenario, summary_csv};
use morphsurf::sim::{compare_modes, summarize};
use morphsurf::ControlMode;

fn main() -> morphsurf::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/paper-s5x6.json");
    let base = load_scenario(&path)?;
    let modes = [
        ControlMode::Wave,
        ControlMode::Distributed,
        ControlMode::Funnel,
    ];
    let seed_list: Vec<u64> = (1..=seeds).collect();
    let results = compare_modes(&base, &modes, &seed_list);

    println!("seed      wave  distributed    funnel");
    for &seed in &seed_list {
        let time = |mode: ControlMode| {
            results
                .iter()
                .find(|(m, s, _)| *m == mode && *s == seed)
                .and_then(|(_, _, r)| r.as_ref().ok())
                .and_then(|m| m.convergence_time)
                .map_or("-".to_string(), |t| format!("{t:.1}"))
        };
        println!(
            "{seed:4} {:>9} {:>12} {:>9}",
            time(modes[0]),
            time(modes[1]),
            time(modes[2])
        );
    }
    println!();
    print!("{}", summary_csv(&summarize(&results)));
    Ok(())
}
