//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Run with
//! `cargo test -p smart-agile --test acceptance`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smart_agile::allocation::{smart_plan, TypeEconomics};
use smart_agile::fcm::{bundled_map, StateVector, Terminal, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE};
use smart_agile::goalnet::{build_goal_net, bundled_corpus, export, import, validate_net, ExportFormat};
use smart_agile::metrics::{competence, queue_boundedness, SprintRecord};
use smart_agile::model::{AgentId, AgentState, Allocator, Category};
use smart_agile::scenario::{all_presets, preset};
use smart_agile::simulation::{run_repeated, RunResult};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// --- mood maps ---------------------------------------------------------------

const TABLE_TOL: f64 = 1e-5;

fn golden(name: &str) -> Vec<Vec<f64>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets/golden").join(format!("{name}.csv"));
    let mut rdr = csv::Reader::from_path(path).expect("golden file");
    rdr.records().map(|r| r.expect("golden row").iter().skip(1).map(|v| v.parse().expect("number")).collect()).collect()
}

fn replay(name: &str) -> Result<f64, String> {
    let rows = golden(name);
    check(rows.len() == 20, format!("{name}: expected 20 reference rows"))?;
    let map = bundled_map(name).map_err(|e| e.to_string())?;
    let states = map.iterate(&StateVector::initial(rows[0].clone()), 19).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (row, s) in rows.iter().zip(&states) {
        for (want, got) in row.iter().zip(&s.values) {
            worst = worst.max((want - got).abs());
        }
    }
    check(worst <= TABLE_TOL, format!("{name}: max deviation {worst:.2e}"))?;
    Ok(worst)
}

fn settle(name: &str, initial: &[f64]) -> Result<(Vec<f64>, usize), String> {
    let traj = bundled_map(name)
        .and_then(|m| m.run(&StateVector::initial(initial.to_vec()), DEFAULT_MAX_ITER, DEFAULT_TOLERANCE))
        .map_err(|e| e.to_string())?;
    match traj.terminal {
        Terminal::FixedPoint { iteration } => Ok((traj.last().values.clone(), iteration)),
        other => Err(format!("{name} ended with {other:?}")),
    }
}

fn near(got: &[f64], want: &[f64]) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= TABLE_TOL)
}

fn fcm_scenario_one() -> Outcome {
    let dev = replay("michael_scenario1")?;
    let (m, mi) = settle("michael_scenario1", &[0.5, 0.0, 0.0])?;
    check(near(&m, &[0.920580, 0.846519, 0.786979]), format!("michael equilibrium {m:?}"))?;
    check(mi <= 16, format!("michael settled at iteration {mi}"))?;
    let (g, gi) = settle("grace_scenario1", &[0.5, 0.0, 0.0])?;
    check(near(&g, &[0.994717, 0.987922, 0.922728]), format!("grace equilibrium {g:?}"))?;
    check(gi <= 9, format!("grace settled at iteration {gi}"))?;
    Ok(format!("table max dev {dev:.1e}; michael settles at {mi}, grace at {gi}"))
}

fn fcm_scenario_two() -> Outcome {
    let dm = replay("michael_scenario2")?;
    let dg = replay("grace_scenario2")?;
    let m0 = [0.920580, 0.846519, 0.786979];
    let g0 = [0.994717, 0.987922, 0.922728];
    let (m, _) = settle("michael_scenario2", &[m0[0], m0[1], m0[2], 1.0])?;
    check(near(&m, &[0.843095, 0.700016, 0.754279, 0.5]), format!("michael equilibrium {m:?}"))?;
    let (g, _) = settle("grace_scenario2", &[g0[0], g0[1], g0[2], 1.0])?;
    check(near(&g, &[0.960145, 0.97148, 0.917715, 0.5]), format!("grace equilibrium {g:?}"))?;
    for (name, s) in [("michael_scenario2", m0), ("grace_scenario2", g0)] {
        for d in [0.0, 0.5] {
            let traj = bundled_map(name)
                .and_then(|map| {
                    map.run(&StateVector::initial(vec![s[0], s[1], s[2], d]), DEFAULT_MAX_ITER, DEFAULT_TOLERANCE)
                })
                .map_err(|e| e.to_string())?;
            check(matches!(traj.terminal, Terminal::FixedPoint { .. }), format!("{name} d={d} did not converge"))?;
            check(
                traj.states[1..].iter().all(|st| st.values[3] == 0.5),
                format!("{name} d={d}: difficulty not pinned"),
            )?;
        }
    }
    Ok(format!("table max dev {:.1e}; sensitivity runs converge with difficulty 0.5", dm.max(dg)))
}

// --- simulation ----------------------------------------------------------------

fn mean_utility(runs: &[RunResult]) -> f64 {
    runs.iter().map(|r| r.totals.global_utility).sum::<f64>() / runs.len() as f64
}

fn smart_vs_awr() -> Outcome {
    let started = Instant::now();
    let mut margins = Vec::new();
    for p in all_presets() {
        let smart = run_repeated(&p.clone().with_allocator(Allocator::Smart)).map_err(|e| e.to_string())?;
        let awr = run_repeated(&p.clone().with_allocator(Allocator::Awr)).map_err(|e| e.to_string())?;
        check(smart.runs.len() == 10, "expected 10 repetitions")?;
        let (s, a) = (mean_utility(&smart.runs), mean_utility(&awr.runs));
        check(s > a, format!("{}: SMART {s:.1} ≤ AWR {a:.1}", p.name))?;
        margins.push(format!("{} +{:.0}", p.name, s - a));
    }
    let elapsed = started.elapsed();
    check(elapsed < Duration::from_secs(60), format!("sweep took {elapsed:?}"))?;
    Ok(format!("{} in {:.1}s", margins.join(", "), elapsed.as_secs_f64()))
}

fn first_hca(r: &RunResult) -> usize {
    r.agents.iter().position(|a| a.category == Category::Hca).expect("presets include an HCA agent")
}

fn mean_peak(runs: &[RunResult]) -> f64 {
    runs.iter().map(|r| r.peak_pending_workload(first_hca(r))).sum::<f64>() / runs.len() as f64
}

fn queue_boundedness_monitor() -> Outcome {
    let mut checked = 0;
    for p in all_presets() {
        let rep = run_repeated(&p.clone().with_allocator(Allocator::Smart)).map_err(|e| e.to_string())?;
        for r in &rep.runs {
            for b in queue_boundedness(r) {
                check(
                    b.bounded(),
                    format!(
                        "{} seed {} agent {}: second half {:.1} > first half {:.1} + {:.1}",
                        p.name, r.seed, b.agent_id, b.second_half_max, b.first_half_max, b.allowance
                    ),
                )?;
                checked += 1;
            }
        }
    }
    let mut wins = 0;
    let mut detail = Vec::new();
    for name in ["S-I", "M-I", "L-I"] {
        for base in [0u64, 1000, 2000] {
            let cfg = preset(name).map_err(|e| e.to_string())?.with_seed(base);
            let smart = run_repeated(&cfg.clone().with_allocator(Allocator::Smart)).map_err(|e| e.to_string())?;
            let awr = run_repeated(&cfg.with_allocator(Allocator::Awr)).map_err(|e| e.to_string())?;
            let (s, a) = (mean_peak(&smart.runs), mean_peak(&awr.runs));
            if a > s {
                wins += 1;
            }
            detail.push(format!("{name}/{base}: {a:.0} vs {s:.0}"));
        }
    }
    check(wins >= 8, format!("AWR HCA peak above SMART in only {wins}/9 ({})", detail.join(", ")))?;
    Ok(format!("{checked} SMART agent-runs bounded; AWR HCA peak higher in {wins}/9 aggregates"))
}

// --- allocation -------------------------------------------------------------------

struct Instance {
    max_effort: f64,
    lambdas: Vec<u32>,
    scores: Vec<f64>,
    efforts: Vec<f64>,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=6);
    Instance {
        // quarter units keep all effort sums exact
        max_effort: f64::from(rng.gen_range(0..=200u32)) / 4.0,
        lambdas: (0..n).map(|_| rng.gen_range(0..12)).collect(),
        scores: (0..n)
            .map(|_| match rng.gen_range(0..5) {
                0 => 0.0,
                1 => -rng.gen_range(0.0..10.0),
                _ => rng.gen_range(-5.0..10.0),
            })
            .collect(),
        efforts: (0..n).map(|_| f64::from(rng.gen_range(1..=48u32)) / 4.0).collect(),
    }
}

fn plan(inst: &Instance) -> Result<(Vec<u32>, f64), String> {
    let agent = AgentState::new(AgentId(0), Category::Hca, 0.9, inst.max_effort);
    let economics: Vec<TypeEconomics> = (0..inst.scores.len())
        .map(|k| TypeEconomics {
            type_id: format!("T{k}"),
            effort: inst.efforts[k],
            expected_utility: 0.0,
            availability_score: inst.scores[k],
            recent_service_rate: 0.0,
        })
        .collect();
    let incoming: BTreeMap<String, u32> = inst.lambdas.iter().enumerate().map(|(k, &l)| (format!("T{k}"), l)).collect();
    let p = smart_plan(&agent, &incoming, &economics).map_err(|e| e.to_string())?;
    Ok(((0..inst.scores.len()).map(|k| p.accepted[&format!("T{k}")]).collect(), p.leftover_effort))
}

/// Independent re-trace: repeated arg-max scan, tasks admitted one by one.
fn retrace(inst: &Instance) -> (Vec<u32>, f64) {
    let n = inst.scores.len();
    let mut done = vec![false; n];
    let mut alphas = vec![0; n];
    let mut left = inst.max_effort;
    for _ in 0..n {
        let k = (0..n).filter(|&k| !done[k]).fold(None, |best: Option<usize>, k| match best {
            Some(b) if inst.scores[k] <= inst.scores[b] => Some(b),
            _ => Some(k),
        });
        let k = k.expect("unvisited type");
        done[k] = true;
        while inst.scores[k] > 0.0 && alphas[k] < inst.lambdas[k] && left >= inst.efforts[k] {
            left -= inst.efforts[k];
            alphas[k] += 1;
        }
    }
    (alphas, left)
}

fn algorithm_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let inst = random_instance(&mut rng);
        let (alphas, leftover) = plan(&inst)?;
        let spent: f64 = alphas.iter().zip(&inst.efforts).map(|(&a, &e)| f64::from(a) * e).sum();
        check(spent <= inst.max_effort, format!("instance {i}: spent {spent} > {}", inst.max_effort))?;
        check(leftover == inst.max_effort - spent, format!("instance {i}: leftover mismatch"))?;
        for ((&alpha, &lambda), &score) in alphas.iter().zip(&inst.lambdas).zip(&inst.scores) {
            check(alpha <= lambda, format!("instance {i}: α > λ"))?;
            check(score > 0.0 || alpha == 0, format!("instance {i}: non-positive score admitted"))?;
        }
        if i < 100 {
            check(plan(&inst)? == retrace(&inst), format!("instance {i}: differs from re-trace"))?;
        }
    }
    Ok("1000 instances feasible, 100 match the re-trace, no admission at score ≤ 0".into())
}

// --- competence -------------------------------------------------------------------

fn record(agent: &str, d: f64, late: bool, quality: f64) -> SprintRecord {
    SprintRecord {
        task_id: format!("{agent}-{d}"),
        assignee_id: agent.into(),
        sprint_index: 1,
        difficulty: d,
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

fn competence_metric() -> Outcome {
    check(competence(&[], "a") == 0.5, "empty history is not 0.5")?;
    let one = competence(&[record("a", 8.0, false, 7.0)], "a");
    check((one - 0.9).abs() < 1e-12, format!("single success gave {one}"))?;
    let two = competence(&[record("a", 8.0, false, 7.0), record("a", 4.0, true, 7.0)], "a");
    check((two - 9.0 / 14.0).abs() < 1e-12, format!("success plus late task gave {two}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for i in 0..1000 {
        let history: Vec<SprintRecord> = (0..rng.gen_range(0..25))
            .map(|_| record("a", rng.gen_range(0.0..=10.0), rng.gen_bool(0.3), rng.gen_range(0.0..=10.0)))
            .collect();
        let base = competence(&history, "a");
        let d = rng.gen_range(0.01..=10.0);
        let mut good = history.clone();
        good.push(record("a", d, false, rng.gen_range(5.01..=10.0)));
        let mut bad = history;
        bad.push(record("a", d, rng.gen_bool(0.5), rng.gen_range(0.0..=5.0)));
        check(base > 0.0 && base < 1.0, format!("set {i}: {base} outside (0,1)"))?;
        check(competence(&good, "a") > base, format!("set {i}: success did not raise competence"))?;
        check(competence(&bad, "a") < base, format!("set {i}: failure did not lower competence"))?;
    }
    Ok(format!("0.5, {one:.12}, {two:.12}; monotone over 1000 random sets"))
}

// --- CLI determinism ----------------------------------------------------------------

fn simulate_into(dir: &Path, args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_smart-agile"))
        .arg("simulate")
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    check(status.status.success(), format!("simulate {args:?} failed: {}", String::from_utf8_lossy(&status.stderr)))
}

fn determinism() -> Outcome {
    let scenario = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets/scenarios/tiny_team.toml");
    let scenario = scenario.to_str().expect("utf-8 path").to_string();
    let invocations: [Vec<&str>; 3] = [
        vec!["--preset", "S-I", "--seed", "7"],
        vec!["--preset", "M-C", "--compare", "--seed", "3"],
        vec!["--scenario", &scenario],
    ];
    let mut files = 0;
    for args in &invocations {
        let a = tempfile::tempdir().map_err(|e| e.to_string())?;
        let b = tempfile::tempdir().map_err(|e| e.to_string())?;
        simulate_into(a.path(), args)?;
        simulate_into(b.path(), args)?;
        for f in ["utility.csv", "allocation.csv", "queues.csv", "summary.csv"] {
            let x = std::fs::read(a.path().join(f)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.path().join(f)).map_err(|e| e.to_string())?;
            check(x == y, format!("{f} differs for {args:?}"))?;
            files += 1;
        }
    }
    Ok(format!("{files} CSV files byte-identical across repeated invocations"))
}

// --- Goal Net ------------------------------------------------------------------------

fn goal_net() -> Outcome {
    let (stories, spec) = bundled_corpus();
    check(stories.len() == 9, format!("parsed {} stories", stories.len()))?;
    let top = stories.iter().filter(|s| s.parent.is_none()).count();
    check(top == 3, format!("{top} top-level stories"))?;
    let net = build_goal_net(&stories, &spec).map_err(|e| e.to_string())?;
    validate_net(&net).map_err(|v| format!("{v:?}"))?;
    check(net.depth() == 4, format!("net has {} levels", net.depth()))?;
    let back = import(&export(&net, ExportFormat::Json)).map_err(|e| e.to_string())?;
    check(back == net, "JSON round-trip changed the net")?;
    Ok(format!("{} stories, {} nodes, 4 levels, valid, lossless round-trip", stories.len(), net.nodes.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("FCM golden replay, scenario I", fcm_scenario_one),
        ("FCM golden replay, scenario II", fcm_scenario_two),
        ("SMART beats AWR in all nine presets", smart_vs_awr),
        ("Queue-boundedness monitor", queue_boundedness_monitor),
        ("Algorithm 1 property suite", algorithm_properties),
        ("Competence metric", competence_metric),
        ("Simulate determinism", determinism),
        ("Goal Net corpus", goal_net),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
