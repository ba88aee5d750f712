//! Scenario catalog, validation and scenario files.
//!
//! The nine presets cover three team sizes (S = 20, M = 50, L = 160 heads)
//! crossed with three compositions (I = mostly incompetent, M = balanced,
//! C = mostly competent). Every preset runs 100 days, 10 repetitions and the
//! same five task types with utility equal to effort.
//!
//! The published large-team tables for L-M and L-C repeat the 20-person
//! rosters under a 160-person heading. They are rebuilt at 160 heads: L-M is
//! the balanced 40/40/40/40 split and L-C mirrors L-I (70 HCA, 40 MCA,
//! 40 MIA, 10 HIA).

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::model::{
    Allocator, Category, CategorySpec, MoodMode, ScenarioConfig, TaskMixEntry, TaskTypeSpec, TeamConfig,
};

pub const PRESET_NAMES: [&str; 9] = ["S-I", "S-M", "S-C", "M-I", "M-M", "M-C", "L-I", "L-M", "L-C"];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown preset `{0}` (expected one of S-I, S-M, S-C, M-I, M-M, M-C, L-I, L-M, L-C)")]
    UnknownPreset(String),
    #[error("cannot read scenario file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse scenario file {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid scenario: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One failed invariant, located by a field path such as `team[2].competence`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// (count, competence, E^max) per category, in HCA, MCA, MIA, HIA order.
type Roster = [(usize, f64, f64); 4];

const fn roster(hca: usize, mca: usize, mia: usize, hia: usize) -> Roster {
    [(hca, 0.9, 20.0), (mca, 0.7, 15.0), (mia, 0.3, 15.0), (hia, 0.1, 10.0)]
}

fn team(r: Roster) -> TeamConfig {
    TeamConfig {
        categories: Category::ALL
            .iter()
            .zip(r)
            .map(|(&category, (count, competence, max_effort))| CategorySpec {
                category,
                count,
                competence,
                max_effort,
            })
            .collect(),
    }
}

/// Five task types T1..T5 with utility = effort ∈ {10, 8, 5, 3, 1}.
pub fn standard_task_mix(per_type: usize) -> Vec<TaskMixEntry> {
    [(10.0, 5.0), (8.0, 4.0), (5.0, 3.0), (3.0, 2.0), (1.0, 1.0)]
        .iter()
        .enumerate()
        .map(|(i, &(value, priority))| TaskMixEntry {
            spec: TaskTypeSpec::new(format!("T{}", i + 1), priority, value, value),
            count: per_type,
        })
        .collect()
}

pub fn preset(name: &str) -> Result<ScenarioConfig, ScenarioError> {
    let (r, per_type) = match name {
        "S-I" => (roster(1, 5, 5, 9), 100),
        "S-M" => (roster(5, 5, 5, 5), 100),
        "S-C" => (roster(9, 5, 5, 1), 100),
        "M-I" => (roster(2, 13, 13, 22), 300),
        "M-M" => (roster(12, 13, 13, 12), 300),
        "M-C" => (roster(22, 13, 13, 2), 300),
        "L-I" => (roster(10, 40, 40, 70), 1000),
        "L-M" => (roster(40, 40, 40, 40), 1000),
        "L-C" => (roster(70, 40, 40, 10), 1000),
        other => return Err(ScenarioError::UnknownPreset(other.to_string())),
    };
    Ok(ScenarioConfig {
        name: name.to_string(),
        team: team(r),
        task_mix: standard_task_mix(per_type),
        horizon_days: 100,
        repetitions: 10,
        seed: 0,
        psi: 1.0,
        allocator: Allocator::Smart,
        mood_mode: MoodMode::default(),
        service_rate_window: 1,
    })
}

pub fn all_presets() -> Vec<ScenarioConfig> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("catalog name")).collect()
}

/// Checks every invariant of the config and its nested types.
pub fn validate(config: ScenarioConfig) -> Result<ScenarioConfig, Vec<Violation>> {
    let violations = violations(&config);
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(violations)
    }
}

pub fn violations(config: &ScenarioConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |path: String, message: &str| out.push(Violation { path, message: message.to_string() });

    if config.horizon_days < 1 {
        push("horizon_days".into(), "horizon_days ≥ 1");
    }
    if config.repetitions < 1 {
        push("repetitions".into(), "repetitions ≥ 1");
    }
    if !(config.psi >= 0.0) {
        push("psi".into(), "psi ≥ 0");
    }
    if config.service_rate_window < 1 {
        push("service_rate_window".into(), "service_rate_window ≥ 1");
    }
    if let MoodMode::Constant { value } = config.mood_mode {
        if !(0.0..=1.0).contains(&value) {
            push("mood_mode.value".into(), "mood ∈ [0,1]");
        }
    }

    if config.team.head_count() == 0 {
        push("team".into(), "total head-count > 0");
    }
    for (i, c) in config.team.categories.iter().enumerate() {
        if !(0.0..=1.0).contains(&c.competence) {
            push(format!("team[{i}].competence"), "competence ∈ [0,1]");
        } else if c.competence == 0.0 {
            push(format!("team[{i}].competence"), "competence > 0");
        }
        if !(c.max_effort > 0.0) {
            push(format!("team[{i}].max_effort"), "max_effort > 0");
        }
    }

    if config.total_tasks() == 0 {
        push("tasks".into(), "Σ task counts > 0");
    }
    for (i, e) in config.task_mix.iter().enumerate() {
        if !(e.spec.utility >= 0.0) {
            push(format!("tasks[{i}].utility"), "utility ≥ 0");
        }
        if !(e.spec.effort > 0.0) {
            push(format!("tasks[{i}].effort"), "effort > 0");
        }
        if !(e.spec.priority >= 0.0) {
            push(format!("tasks[{i}].priority"), "priority ≥ 0");
        }
        if config.task_mix[..i].iter().any(|p| p.spec.type_id == e.spec.type_id) {
            push(format!("tasks[{i}].type_id"), "type_id must be unique");
        }
    }
    out
}

/// Reads a scenario document; `.json` files are JSON, anything else TOML.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: display.clone(), source })?;
    let config =
        parse_scenario(&text, is_json(path)).map_err(|message| ScenarioError::Parse { path: display, message })?;
    validate(config).map_err(ScenarioError::Invalid)
}

pub fn parse_scenario(text: &str, json: bool) -> Result<ScenarioConfig, String> {
    if json {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

pub fn scenario_to_toml(config: &ScenarioConfig) -> String {
    toml::to_string(config).expect("scenario configs are always TOML-representable")
}

pub(crate) fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}
