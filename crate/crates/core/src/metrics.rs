//! Measurements over simulation runs and sprint activity logs.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AgentId, Category};
use crate::simulation::RunResult;

/// A completed task needs a quality rating strictly above this to count as
/// satisfactory.
pub const SATISFACTORY_QUALITY: f64 = 5.0;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("no allocations")]
    NoAllocations,
    #[error("no completed tasks")]
    NoCompletions,
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least two observations, got {0}")]
    TooShort(usize),
    #[error("zero variance: correlation undefined")]
    ZeroVariance,
    #[error("unknown agent metric `{0}`")]
    UnknownMetric(String),
    #[error("series `{0}` is not indexed in increasing order")]
    NonMonotone(String),
}

/// One task as logged over a sprint. Column names in the activity-log CSV
/// are exactly these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SprintRecord {
    pub task_id: String,
    pub assignee_id: String,
    pub sprint_index: u32,
    /// D_τ, 0 (extremely easy) to 10 (extremely hard).
    pub difficulty: f64,
    pub priority: f64,
    /// Assignee's confidence of finishing with satisfactory quality, 0–10.
    pub confidence: f64,
    pub estimated_days: f64,
    pub actual_days: f64,
    /// Mean peer-review rating, 0–10.
    pub quality: f64,
    pub collaborators: u32,
    /// Mood at sprint planning, 1–5.
    pub mood_begin: f64,
    /// Mood at sprint review, 1–5.
    pub mood_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workload: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub team_score: Option<f64>,
}

impl SprintRecord {
    pub fn on_time(&self) -> bool {
        self.actual_days - self.estimated_days <= 0.0
    }

    /// Counts towards α in the competence estimate.
    pub fn is_success(&self) -> bool {
        self.on_time() && self.quality > SATISFACTORY_QUALITY
    }

    fn range_errors(&self) -> Vec<(&'static str, f64, &'static str)> {
        let mut out = Vec::new();
        let mut check = |field, value: f64, lo: f64, hi: f64, label| {
            if !(lo..=hi).contains(&value) {
                out.push((field, value, label));
            }
        };
        check("difficulty", self.difficulty, 0.0, 10.0, "[0,10]");
        check("priority", self.priority, 0.0, 10.0, "[0,10]");
        check("confidence", self.confidence, 0.0, 10.0, "[0,10]");
        check("quality", self.quality, 0.0, 10.0, "[0,10]");
        check("mood_begin", self.mood_begin, 1.0, 5.0, "[1,5]");
        check("mood_end", self.mood_end, 1.0, 5.0, "[1,5]");
        check("estimated_days", self.estimated_days, 0.0, f64::INFINITY, "≥ 0");
        check("actual_days", self.actual_days, 0.0, f64::INFINITY, "≥ 0");
        check("collaborators", f64::from(self.collaborators), 1.0, f64::INFINITY, "≥ 1");
        out
    }
}

/// Beta-reputation competence with Laplace smoothing:
/// `(α+1) / ((α+1) + (β+1))`, where α sums the difficulty of on-time,
/// satisfactory tasks and β the difficulty of all others.
pub fn competence(records: &[SprintRecord], agent: &str) -> f64 {
    let (alpha, beta) = records.iter().filter(|r| r.assignee_id == agent).fold((0.0, 0.0), |(a, b), r| {
        if r.is_success() {
            (a + r.difficulty, b)
        } else {
            (a, b + r.difficulty)
        }
    });
    (alpha + 1.0) / ((alpha + 1.0) + (beta + 1.0))
}

/// Mean over the agent's sprints of the total difficulty completed in each.
pub fn technical_productivity(records: &[SprintRecord], agent: &str) -> f64 {
    let mut per_sprint: BTreeMap<u32, f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.assignee_id == agent) {
        *per_sprint.entry(r.sprint_index).or_default() += r.difficulty;
    }
    if per_sprint.is_empty() {
        return 0.0;
    }
    per_sprint.values().sum::<f64>() / per_sprint.len() as f64
}

/// Lyapunov congestion: the sum of squared queue lengths.
pub fn congestion<I>(queue_sizes: I) -> f64
where
    I: IntoIterator,
    I::Item: Into<u64>,
{
    queue_sizes.into_iter().map(|q| (q.into() as f64).powi(2)).sum()
}

/// Normalizes workloads into shares summing to 1.
pub fn shares(workloads: &[f64]) -> Result<Vec<f64>, MetricsError> {
    let total: f64 = workloads.iter().sum();
    if !(total > 0.0) {
        return Err(MetricsError::NoAllocations);
    }
    Ok(workloads.iter().map(|w| w / total).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentShare {
    pub agent_id: AgentId,
    pub category: Category,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationProportion {
    pub per_agent: Vec<AgentShare>,
    pub per_category: BTreeMap<Category, f64>,
}

/// Each agent's share of all effort assigned over the given runs.
pub fn allocation_proportion(runs: &[RunResult]) -> Result<AllocationProportion, MetricsError> {
    let first = runs.first().ok_or(MetricsError::NoAllocations)?;
    let mut workload = vec![0.0; first.agents.len()];
    for r in runs {
        for (w, a) in workload.iter_mut().zip(r.assigned_workload()) {
            *w += a;
        }
    }
    let shares = shares(&workload)?;
    let per_agent: Vec<AgentShare> = first
        .agents
        .iter()
        .zip(shares)
        .map(|(a, share)| AgentShare { agent_id: a.agent_id, category: a.category, share })
        .collect();
    let mut per_category = BTreeMap::new();
    for s in &per_agent {
        *per_category.entry(s.category).or_insert(0.0) += s.share;
    }
    Ok(AllocationProportion { per_agent, per_category })
}

/// Fraction of logged tasks that took longer than estimated.
pub fn delay_percentage(records: &[SprintRecord]) -> Result<f64, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::NoCompletions);
    }
    let late = records.iter().filter(|r| !r.on_time()).count();
    Ok(late as f64 / records.len() as f64)
}

/// Fraction of completed simulated tasks that finished later than the
/// assignee's nominal duration ⌈e^τ / E^max⌉ days after arrival.
pub fn sim_delay_percentage(result: &RunResult) -> Result<f64, MetricsError> {
    if result.totals.completed == 0 {
        return Err(MetricsError::NoCompletions);
    }
    Ok(f64::from(result.totals.delayed) / f64::from(result.totals.completed))
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MetricsError::TooShort(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Sample variance of the logged confidence values, `None` below two records.
pub fn confidence_variance(records: &[SprintRecord]) -> Option<f64> {
    if records.len() < 2 {
        return None;
    }
    let n = records.len() as f64;
    let mean = records.iter().map(|r| r.confidence).sum::<f64>() / n;
    Some(records.iter().map(|r| (r.confidence - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Per-assignee summary of an activity log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentProfile {
    pub assignee_id: String,
    pub tasks: usize,
    pub competence: f64,
    pub productivity: f64,
    pub delay: f64,
    pub confidence: f64,
    pub mood_begin: f64,
    pub mood_end: f64,
}

impl AgentProfile {
    pub const METRICS: [&'static str; 6] =
        ["competence", "productivity", "delay", "confidence", "mood_begin", "mood_end"];

    pub fn metric(&self, name: &str) -> Result<f64, MetricsError> {
        Ok(match name {
            "competence" => self.competence,
            "productivity" => self.productivity,
            "delay" => self.delay,
            "confidence" => self.confidence,
            "mood_begin" => self.mood_begin,
            "mood_end" => self.mood_end,
            other => return Err(MetricsError::UnknownMetric(other.to_string())),
        })
    }
}

/// Profiles for every assignee, ordered by id.
pub fn agent_profiles(records: &[SprintRecord]) -> Vec<AgentProfile> {
    let mut by_agent: BTreeMap<&str, Vec<&SprintRecord>> = BTreeMap::new();
    for r in records {
        by_agent.entry(&r.assignee_id).or_default().push(r);
    }
    by_agent
        .into_iter()
        .map(|(id, rs)| {
            let n = rs.len() as f64;
            let mean = |f: fn(&SprintRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / n;
            AgentProfile {
                assignee_id: id.to_string(),
                tasks: rs.len(),
                competence: competence(records, id),
                productivity: technical_productivity(records, id),
                delay: rs.iter().filter(|r| !r.on_time()).count() as f64 / n,
                confidence: mean(|r| r.confidence),
                mood_begin: mean(|r| r.mood_begin),
                mood_end: mean(|r| r.mood_end),
            }
        })
        .collect()
}

/// Pearson correlation of two profile metrics across assignees.
pub fn correlate_profiles(profiles: &[AgentProfile], x: &str, y: &str) -> Result<f64, MetricsError> {
    let xs = profiles.iter().map(|p| p.metric(x)).collect::<Result<Vec<_>, _>>()?;
    let ys = profiles.iter().map(|p| p.metric(y)).collect::<Result<Vec<_>, _>>()?;
    pearson(&xs, &ys)
}

/// A named series indexed by day or sprint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSeries {
    pub name: String,
    pub unit: String,
    pub points: Vec<(u32, f64)>,
}

impl MetricSeries {
    pub fn new(name: &str, unit: &str, points: Vec<(u32, f64)>) -> Result<Self, MetricsError> {
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(MetricsError::NonMonotone(name.to_string()));
        }
        Ok(Self { name: name.to_string(), unit: unit.to_string(), points })
    }

    pub fn daily(name: &str, unit: &str, values: impl IntoIterator<Item = f64>) -> Self {
        Self {
            name: name.to_string(),
            unit: unit.to_string(),
            points: values.into_iter().enumerate().map(|(d, v)| (d as u32, v)).collect(),
        }
    }
}

/// Second-half vs first-half peak of one agent's pending workload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueueBound {
    pub agent_id: AgentId,
    pub first_half_max: f64,
    pub second_half_max: f64,
    /// Largest single-day arrival workload of the run.
    pub allowance: f64,
}

impl QueueBound {
    pub fn bounded(&self) -> bool {
        self.second_half_max <= self.first_half_max + self.allowance
    }
}

/// Operational boundedness monitor over per-agent pending workload.
pub fn queue_boundedness(result: &RunResult) -> Vec<QueueBound> {
    let half = result.days.len() / 2;
    let allowance = result.days.iter().map(|d| d.arrival_workload).fold(0.0, f64::max);
    result
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let peak =
                |days: &[crate::simulation::DayRecord]| days.iter().map(|d| d.pending_workload[i]).fold(0.0, f64::max);
            QueueBound {
                agent_id: a.agent_id,
                first_half_max: peak(&result.days[..half]),
                second_half_max: peak(&result.days[half..]),
                allowance,
            }
        })
        .collect()
}

// --- activity-log ingestion ---------------------------------------------

pub const LOG_COLUMNS: [&str; 12] = [
    "task_id",
    "assignee_id",
    "sprint_index",
    "difficulty",
    "priority",
    "confidence",
    "estimated_days",
    "actual_days",
    "quality",
    "collaborators",
    "mood_begin",
    "mood_end",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// 1-based line in the file; the header is line 1.
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read log {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("missing columns: {}", .0.join(", "))]
    MissingColumns(Vec<String>),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("{} invalid row(s): {}", .0.len(), .0.iter().map(|e| format!("line {}: {}", e.line, e.message)).collect::<Vec<_>>().join("; "))]
    Rows(Vec<RowError>),
}

pub fn ingest_log(path: &Path) -> Result<Vec<SprintRecord>, IngestError> {
    let file =
        std::fs::File::open(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    read_log(file)
}

/// Parses and range-checks an activity log. Every bad row is reported.
pub fn read_log<R: Read>(reader: R) -> Result<Vec<SprintRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| IngestError::Csv(e.to_string()))?.clone();
    // an empty file has no header at all
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    let missing: Vec<String> =
        LOG_COLUMNS.iter().filter(|c| !headers.iter().any(|h| h == **c)).map(|c| c.to_string()).collect();
    if !missing.is_empty() {
        return Err(IngestError::MissingColumns(missing));
    }

    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, row) in rdr.deserialize::<SprintRecord>().enumerate() {
        let line = i as u64 + 2;
        match row {
            Ok(r) => {
                let bad = r.range_errors();
                if bad.is_empty() {
                    records.push(r);
                } else {
                    for (field, value, range) in bad {
                        errors.push(RowError { line, message: format!("{field} = {value} outside {range}") });
                    }
                }
            }
            Err(e) => errors.push(RowError { line, message: e.to_string() }),
        }
    }
    if errors.is_empty() {
        Ok(records)
    } else {
        Err(IngestError::Rows(errors))
    }
}
