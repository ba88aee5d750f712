//! Iterates the bundled developer mood maps: first a normal working
//! scenario, then the same developers facing a difficult task.
//!
//! Run with `cargo run --example fcm_mood_dynamics`.

use smart_agile::fcm::{bundled_map, StateVector, Terminal, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};

fn settle(map_name: &str, initial: Vec<f64>) -> Vec<f64> {
    let map = bundled_map(map_name).expect("bundled map");
    let traj = map.run(&StateVector::initial(initial), DEFAULT_MAX_ITER, DEFAULT_TOLERANCE).expect("dimensions match");
    print!("{}", traj.to_csv(map.labels()));
    match traj.terminal {
        Terminal::FixedPoint { iteration } => println!("-> settles at iteration {iteration}\n"),
        other => println!("-> {other:?}\n"),
    }
    traj.last().values.clone()
}

fn main() {
    for dev in ["michael", "grace"] {
        println!("== {dev}, routine work ==");
        let calm = settle(&format!("{dev}_scenario1"), vec![0.5, 0.0, 0.0]);

        println!("== {dev}, a hard task arrives ==");
        let mut start = calm;
        start.push(1.0);
        settle(&format!("{dev}_scenario2"), start);
    }
}
