//! One developer's SMART acceptance decision for a single day.
//!
//! Run with `cargo run --example smart_plan`.

use std::collections::BTreeMap;

use smart_agile::allocation::{smart_plan, TypeEconomics};
use smart_agile::model::{AgentId, AgentState, Category, TaskTypeSpec};

fn main() {
    let mut agent = AgentState::new(AgentId(0), Category::Mca, 0.7, 15.0);
    agent.mood = 0.8;

    let types = [
        TaskTypeSpec::new("feature", 3.0, 10.0, 10.0),
        TaskTypeSpec::new("bugfix", 2.0, 5.0, 5.0),
        TaskTypeSpec::new("chore", 1.0, 1.0, 1.0),
    ];
    // completions of each type yesterday, the agent's recent service rate
    let recent = [0.0, 1.0, 3.0];
    let economics: Vec<TypeEconomics> =
        types.iter().zip(recent).map(|(t, mu)| TypeEconomics::evaluate(t, &agent, mu, 1.0)).collect();
    let incoming = BTreeMap::from([("feature".to_string(), 2), ("bugfix".to_string(), 3), ("chore".to_string(), 4)]);

    println!("{:<8} {:>8} {:>8} {:>8}", "type", "u·C·M", "μ", "score");
    for e in &economics {
        println!(
            "{:<8} {:>8.2} {:>8.2} {:>8.2}",
            e.type_id, e.expected_utility, e.recent_service_rate, e.availability_score
        );
    }

    let plan = smart_plan(&agent, &incoming, &economics).expect("all incoming types are known");
    println!();
    for (ty, alpha) in &plan.accepted {
        println!("{ty:<8} accepted {alpha}, rejected {}", plan.rejected[ty]);
    }
    println!("effort used {:.1} of {:.1}", plan.accepted_effort(&economics), agent.max_effort);
}
