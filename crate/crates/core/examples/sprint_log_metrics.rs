//! Computes per-developer competence and productivity from a small sprint
//! activity log and correlates them with end-of-sprint mood.
//!
//! Run with `cargo run --example sprint_log_metrics`.

use smart_agile::metrics::{agent_profiles, correlate_profiles, delay_percentage, read_log};

const LOG: &str = "\
task_id,assignee_id,sprint_index,difficulty,priority,confidence,estimated_days,actual_days,quality,collaborators,mood_begin,mood_end
t1,ana,1,8,7,8,3,3,8,1,4,5
t2,ana,1,4,5,7,2,2,7,1,4,4
t3,ana,2,6,6,8,2,3,6,2,3,4
t4,ben,1,3,4,5,2,4,4,1,3,2
t5,ben,2,5,6,4,3,5,5,1,2,2
t6,ben,2,2,3,6,1,1,7,1,3,3
t7,cho,1,9,9,9,4,4,9,2,4,5
t8,cho,2,7,8,8,3,3,8,1,5,5
";

fn main() {
    let records = read_log(LOG.as_bytes()).expect("well-formed log");
    println!("{:<5} {:>6} {:>11} {:>13} {:>6}", "who", "tasks", "competence", "productivity", "delay");
    let profiles = agent_profiles(&records);
    for p in &profiles {
        println!(
            "{:<5} {:>6} {:>11.3} {:>13.2} {:>5.0}%",
            p.assignee_id,
            p.tasks,
            p.competence,
            p.productivity,
            p.delay * 100.0
        );
    }
    println!("\noverall delay {:.1}%", delay_percentage(&records).expect("log has records") * 100.0);
    for (x, y) in [("competence", "mood_end"), ("productivity", "confidence")] {
        match correlate_profiles(&profiles, x, y) {
            Ok(r) => println!("pearson({x}, {y}) = {r:.3}"),
            Err(e) => println!("pearson({x}, {y}) undefined: {e}"),
        }
    }
}
