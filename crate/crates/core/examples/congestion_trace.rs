//! Steps a preset simulation day by day and prints how the most competent
//! agent's pending workload evolves under each allocator.
//!
//! Run with `cargo run --example congestion_trace -- S-I`.

use smart_agile::metrics::queue_boundedness;
use smart_agile::model::Allocator;
use smart_agile::scenario::preset;
use smart_agile::simulation::SimState;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "S-I".to_string());
    let config = preset(&name).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    for allocator in [Allocator::Smart, Allocator::Awr] {
        let mut state = SimState::new(config.clone().with_allocator(allocator), config.seed).expect("valid preset");
        let mut peaks = Vec::new();
        while !state.is_finished() {
            let day = state.tick().expect("invariants hold");
            peaks.push(day.pending_workload[0]);
        }
        let every_tenth: Vec<String> = peaks.iter().step_by(10).map(|p| format!("{p:.0}")).collect();
        println!("{allocator:>5}: agent a0 pending workload every 10 days: {}", every_tenth.join(" "));
    }

    let result = smart_agile::simulation::run(&config).expect("valid preset");
    let unbounded = queue_boundedness(&result).into_iter().filter(|b| !b.bounded()).count();
    println!("\nSMART agents whose queue grew beyond the bound: {unbounded}");
}
