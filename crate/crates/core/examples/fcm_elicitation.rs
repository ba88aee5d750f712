//! Builds a concept map from questionnaire answers and compares the three
//! transfer functions on it.
//!
//! Run with `cargo run --example fcm_elicitation`.

use smart_agile::fcm::{elicit_weights, Answer, ConceptMap, Likert, Sign, StateVector, Transform};

fn main() {
    let labels: Vec<String> = ["Mood", "Progress", "Quality"].iter().map(|s| s.to_string()).collect();
    let answers = [
        Answer::new("Mood", "Progress", Sign::Positive, Likert::Mostly),
        Answer::new("Mood", "Quality", Sign::Positive, Likert::Moderately),
        Answer::new("Progress", "Mood", Sign::Positive, Likert::ALittle),
        Answer::new("Quality", "Mood", Sign::Positive, Likert::Completely),
        Answer::new("Progress", "Quality", Sign::Negative, Likert::ALittle),
    ];
    let weights = elicit_weights(&labels, &answers).expect("answers name known concepts");
    for (label, row) in labels.iter().zip(&weights) {
        println!("{label:>9} -> {row:?}");
    }

    for transform in [Transform::Sigmoid { c: 5.0 }, Transform::Trivalent, Transform::Bivalent] {
        let map = ConceptMap::new(labels.clone(), weights.clone(), transform).expect("valid matrix");
        let traj = map.run(&StateVector::initial(vec![0.5, 0.0, 0.0]), 50, 1e-6).expect("three values");
        println!("\n{}: {:?} after {} steps", transform.name(), traj.terminal, traj.states.len() - 1);
        println!("  final state {:?}", traj.last().values);
    }
}
