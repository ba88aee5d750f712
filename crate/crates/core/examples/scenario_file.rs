//! Loads a scenario from TOML, runs it with mood coupled to the concept
//! map, and prints a day-by-day trace for the first agent.
//!
//! Run with `cargo run --example scenario_file -- crates/core/assets/scenarios/tiny_team.toml`.

use std::path::PathBuf;

use smart_agile::scenario::load_scenario;
use smart_agile::simulation::run;

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets/scenarios/tiny_team.toml"));
    let config = match load_scenario(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let result = run(&config).expect("scenario passed validation");
    println!("day arrivals done pending(a0) mood(a0) utility");
    for d in &result.days {
        println!(
            "{:>3} {:>8} {:>4} {:>12.1} {:>8.3} {:>7.1}",
            d.day, d.arrivals, d.completions, d.pending_workload[0], d.mood[0], d.utility
        );
    }
    let t = &result.totals;
    println!(
        "\n{} of {} tasks done, {} high quality, utility {:.1}",
        t.completed, t.arrived, t.high_quality, t.global_utility
    );
}
