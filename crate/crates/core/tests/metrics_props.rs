//! Properties of the competence, correlation and congestion measures.

use proptest::prelude::*;
use smart_agile::metrics::{competence, congestion, pearson, shares, technical_productivity, SprintRecord};

fn record(agent: &str, sprint: u32, difficulty: f64, late: bool, quality: f64) -> SprintRecord {
    SprintRecord {
        task_id: format!("{agent}-{sprint}-{difficulty}-{quality}"),
        assignee_id: agent.into(),
        sprint_index: sprint,
        difficulty,
        priority: 5.0,
        confidence: 5.0,
        estimated_days: 2.0,
        actual_days: if late { 3.0 } else { 2.0 },
        quality,
        collaborators: 1,
        mood_begin: 3.0,
        mood_end: 3.0,
        workload: None,
        final_score: None,
        team_score: None,
    }
}

fn any_record() -> impl Strategy<Value = SprintRecord> {
    (prop_oneof![Just("a"), Just("b")], 1u32..5, 0.0..=10.0f64, any::<bool>(), 0.0..=10.0f64)
        .prop_map(|(agent, sprint, d, late, q)| record(agent, sprint, d, late, q))
}

#[test]
fn hand_evaluated_competence() {
    assert_eq!(competence(&[], "a"), 0.5);
    let one = [record("a", 1, 8.0, false, 7.0)];
    assert!((competence(&one, "a") - 0.9).abs() < 1e-12);
    let two = [record("a", 1, 8.0, false, 7.0), record("a", 1, 4.0, true, 9.0)];
    assert!((competence(&two, "a") - 9.0 / 14.0).abs() < 1e-12);
    // quality of exactly 5 is not satisfactory
    let borderline = [record("a", 1, 8.0, false, 5.0)];
    assert!((competence(&borderline, "a") - 0.1).abs() < 1e-12);
}

#[test]
fn productivity_examples() {
    let one_sprint = [record("a", 1, 8.0, false, 7.0), record("a", 1, 5.0, true, 2.0)];
    assert_eq!(technical_productivity(&one_sprint, "a"), 13.0);
    let two = [record("a", 1, 8.0, false, 7.0), record("a", 1, 5.0, false, 7.0), record("a", 2, 7.0, false, 7.0)];
    assert_eq!(technical_productivity(&two, "a"), 10.0);
    assert_eq!(technical_productivity(&two, "z"), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn competence_is_monotone(history in prop::collection::vec(any_record(), 0..30), d in 0.01..=10.0f64, q_good in 5.01..=10.0f64, q_bad in 0.0..=5.0f64) {
        let base = competence(&history, "a");
        prop_assert!(base > 0.0 && base < 1.0);

        let mut better = history.clone();
        better.push(record("a", 9, d, false, q_good));
        prop_assert!(competence(&better, "a") > base);

        let mut late = history.clone();
        late.push(record("a", 9, d, true, q_good));
        prop_assert!(competence(&late, "a") < base);

        let mut poor = history.clone();
        poor.push(record("a", 9, d, false, q_bad));
        prop_assert!(competence(&poor, "a") < base);

        // someone else's record leaves this agent untouched
        let mut other = history;
        other.push(record("z", 9, d, false, q_good));
        prop_assert_eq!(competence(&other, "a"), base);
    }

    #[test]
    fn pearson_symmetry_and_scale_invariance(
        pairs in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 2..40),
        a in 0.1..10.0f64,
        b in -50.0..50.0f64,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(r) = pearson(&x, &y) else { return Ok(()) };
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((pearson(&y, &x).unwrap() - r).abs() < 1e-12);
        let scaled: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        if let Ok(rs) = pearson(&scaled, &y) {
            prop_assert!((rs - r).abs() < 1e-9, "{rs} vs {r}");
        }
    }

    #[test]
    fn shares_sum_to_one(workloads in prop::collection::vec(0.0..100.0f64, 1..50)) {
        if let Ok(s) = shares(&workloads) {
            prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(s.iter().all(|v| (0.0..=1.0).contains(v)));
        } else {
            prop_assert!(workloads.iter().all(|&w| w == 0.0));
        }
    }

    #[test]
    fn congestion_permutation_invariant(mut sizes in prop::collection::vec(0u32..50, 0..30)) {
        let l = congestion(sizes.iter().copied());
        prop_assert_eq!(l == 0.0, sizes.iter().all(|&q| q == 0));
        sizes.reverse();
        prop_assert_eq!(congestion(sizes.iter().copied()), l);
    }
}

#[test]
fn pearson_examples() {
    assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-12);
    assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
    assert!(pearson(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]).is_err());
}
