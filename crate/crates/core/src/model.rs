//! Domain types shared by the allocation, simulation and metrics modules.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a task type, e.g. `"T1"`.
pub type TypeId = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskId(pub usize);

/// Behavioural category of a developer agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    /// Highly competent.
    #[serde(rename = "HCA")]
    Hca,
    /// Moderately competent.
    #[serde(rename = "MCA")]
    Mca,
    /// Moderately incompetent.
    #[serde(rename = "MIA")]
    Mia,
    /// Highly incompetent.
    #[serde(rename = "HIA")]
    Hia,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Hca, Category::Mca, Category::Mia, Category::Hia];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Hca => "HCA",
            Category::Mca => "MCA",
            Category::Mia => "MIA",
            Category::Hia => "HIA",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The ⟨priority, utility, effort⟩ triple shared by every task of one type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskTypeSpec {
    pub type_id: TypeId,
    /// Higher ranks sit closer to the head of the common queue.
    pub priority: f64,
    pub utility: f64,
    pub effort: f64,
}

impl TaskTypeSpec {
    pub fn new(type_id: impl Into<TypeId>, priority: f64, utility: f64, effort: f64) -> Self {
        Self { type_id: type_id.into(), priority, utility, effort }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TaskStatus {
    /// Waiting in the common queue.
    Queued,
    Assigned {
        agent: AgentId,
    },
    Completed {
        agent: AgentId,
        day: u32,
        high_quality: bool,
    },
}

/// Runtime state of one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub task_id: TaskId,
    /// Index into the scenario's task-type list.
    pub type_index: usize,
    pub arrival_day: u32,
    pub remaining_effort: f64,
    pub status: TaskStatus,
}

impl TaskInstance {
    pub fn assignee(&self) -> Option<AgentId> {
        match self.status {
            TaskStatus::Queued => None,
            TaskStatus::Assigned { agent } | TaskStatus::Completed { agent, .. } => Some(agent),
        }
    }

    pub fn completion_day(&self) -> Option<u32> {
        match self.status {
            TaskStatus::Completed { day, .. } => Some(day),
            _ => None,
        }
    }

    pub fn quality_success(&self) -> Option<bool> {
        match self.status {
            TaskStatus::Completed { high_quality, .. } => Some(high_quality),
            _ => None,
        }
    }
}

/// Competence C_i^τ: one scalar, optionally refined per task type.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Competence {
    pub base: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub per_type: BTreeMap<TypeId, f64>,
}

impl Competence {
    pub fn uniform(value: f64) -> Self {
        Self { base: value, per_type: BTreeMap::new() }
    }

    pub fn for_type(&self, type_id: &str) -> f64 {
        self.per_type.get(type_id).copied().unwrap_or(self.base)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.base).chain(self.per_type.values().copied())
    }
}

/// A task waiting in (or being served from) an agent's personal queue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendingTask {
    pub task_id: TaskId,
    pub type_index: usize,
    pub remaining_effort: f64,
}

/// A developer's internal context ⟨M, C, E^max⟩ plus its pending work.
///
/// Pending tasks are kept in a single FIFO because service order is FIFO
/// across types; the per-type queue lengths Q_i^τ are derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub agent_id: AgentId,
    pub category: Category,
    pub competence: Competence,
    pub mood: f64,
    pub max_effort: f64,
    pub pending: VecDeque<PendingTask>,
}

impl AgentState {
    pub fn new(agent_id: AgentId, category: Category, competence: f64, max_effort: f64) -> Self {
        Self {
            agent_id,
            category,
            competence: Competence::uniform(competence),
            mood: 1.0,
            max_effort,
            pending: VecDeque::new(),
        }
    }

    /// Q_i^τ for the type at `type_index`.
    pub fn queue_len(&self, type_index: usize) -> usize {
        self.pending.iter().filter(|t| t.type_index == type_index).count()
    }

    /// Queue lengths for types `0..n_types`.
    pub fn queue_lengths(&self, n_types: usize) -> Vec<usize> {
        let mut out = vec![0; n_types];
        for t in &self.pending {
            if t.type_index < n_types {
                out[t.type_index] += 1;
            }
        }
        out
    }

    pub fn pending_workload(&self) -> f64 {
        self.pending.iter().map(|t| t.remaining_effort).sum()
    }

    /// Effort already spent on the task at the head of the queue.
    pub fn carryover_effort(&self, types: &[TaskTypeSpec]) -> f64 {
        self.pending.front().map(|t| types[t.type_index].effort - t.remaining_effort).unwrap_or(0.0)
    }
}

/// Head-count, competence and daily effort for one category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub category: Category,
    pub count: usize,
    pub competence: f64,
    pub max_effort: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TeamConfig {
    pub categories: Vec<CategorySpec>,
}

impl TeamConfig {
    pub fn head_count(&self) -> usize {
        self.categories.iter().map(|c| c.count).sum()
    }

    pub fn count(&self, category: Category) -> usize {
        self.categories.iter().filter(|c| c.category == category).map(|c| c.count).sum()
    }

    /// Agents in category order, ids assigned sequentially from 0.
    pub fn instantiate(&self, initial_mood: f64) -> Vec<AgentState> {
        let mut agents = Vec::with_capacity(self.head_count());
        for spec in &self.categories {
            for _ in 0..spec.count {
                let mut agent = AgentState::new(AgentId(agents.len()), spec.category, spec.competence, spec.max_effort);
                agent.mood = initial_mood;
                agents.push(agent);
            }
        }
        agents
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskMixEntry {
    #[serde(flatten)]
    pub spec: TaskTypeSpec,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Allocator {
    Smart,
    Awr,
}

impl fmt::Display for Allocator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Allocator::Smart => "SMART",
            Allocator::Awr => "AWR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum MoodMode {
    Constant { value: f64 },
    FcmCoupled,
}

impl Default for MoodMode {
    fn default() -> Self {
        MoodMode::Constant { value: 1.0 }
    }
}

fn default_horizon() -> u32 {
    100
}

fn default_repetitions() -> u32 {
    10
}

fn default_psi() -> f64 {
    1.0
}

fn default_window() -> u32 {
    1
}

fn default_allocator() -> Allocator {
    Allocator::Smart
}

/// A complete simulation setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub team: TeamConfig,
    #[serde(rename = "tasks")]
    pub task_mix: Vec<TaskMixEntry>,
    #[serde(default = "default_horizon")]
    pub horizon_days: u32,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_psi")]
    pub psi: f64,
    #[serde(default = "default_allocator")]
    pub allocator: Allocator,
    #[serde(default)]
    pub mood_mode: MoodMode,
    /// Trailing window (days) for the recent service rate μ_i^τ.
    #[serde(default = "default_window")]
    pub service_rate_window: u32,
}

impl ScenarioConfig {
    pub fn task_types(&self) -> Vec<TaskTypeSpec> {
        self.task_mix.iter().map(|e| e.spec.clone()).collect()
    }

    pub fn total_tasks(&self) -> usize {
        self.task_mix.iter().map(|e| e.count).sum()
    }

    pub fn with_allocator(mut self, allocator: Allocator) -> Self {
        self.allocator = allocator;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
