//! Compares SMART with the accept-when-requested baseline on one preset
//! team, reporting utility, delays and how work was spread across agents.
//!
//! Run with `cargo run --release --example smart_vs_awr -- M-M`.

use smart_agile::metrics::allocation_proportion;
use smart_agile::model::Allocator;
use smart_agile::scenario::preset;
use smart_agile::simulation::run_repeated;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "S-M".to_string());
    let config = match preset(&name) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!(
        "{name}: {} agents, {} tasks over {} days",
        config.team.head_count(),
        config.total_tasks(),
        config.horizon_days
    );

    for allocator in [Allocator::Smart, Allocator::Awr] {
        let rep = run_repeated(&config.clone().with_allocator(allocator)).expect("presets are valid");
        let s = &rep.summary;
        println!(
            "\n{allocator}: utility {:.1} ± {:.1}, completed {:.1}, delayed {:.1}",
            s.global_utility.mean, s.global_utility.std_dev, s.completed.mean, s.delayed.mean
        );
        if let Ok(p) = allocation_proportion(&rep.runs) {
            for (category, share) in &p.per_category {
                println!("  {category} share {:.1}%", share * 100.0);
            }
        }
    }
}
