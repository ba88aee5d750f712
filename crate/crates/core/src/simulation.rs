//! Discrete-time team simulation.
//!
//! Each day runs, in order: admission of the day's arrivals to the common
//! queue, allocation (SMART pull or AWR push), effort-based FIFO service with
//! partial work carried across days, a Bernoulli(competence) quality draw for
//! every completion, the mood update, and metric recording.
//!
//! Two independent ChaCha streams are derived from the run seed: stream 0
//! drives the arrival schedule, stream 1 the quality draws. Switching the
//! allocator therefore never changes which tasks arrive when.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::allocation::{self, AllocationError};
use crate::fcm::{self, ConceptMap, StateVector};
use crate::model::{
    AgentId, AgentState, Allocator, Category, MoodMode, PendingTask, ScenarioConfig, TaskId, TaskInstance, TaskStatus,
    TaskTypeSpec,
};
use crate::scenario::{self, Violation};

const ARRIVAL_STREAM: u64 = 0;
const QUALITY_STREAM: u64 = 1;
const EFFORT_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("invariant breach on day {day}: {detail}")]
    InvariantBreach { day: u32, detail: String },
    #[error(transparent)]
    Allocation(#[from] AllocationError),
    #[error("horizon reached")]
    Finished,
}

/// Tasks in arrival order with their arrival days.
///
/// Per-type tasks are interleaved proportionally and split into ⌊N/T⌋ or
/// ⌈N/T⌉ tasks per day (the first `N mod T` days take the extra task); the
/// order inside a day is shuffled.
pub fn generate_arrivals(config: &ScenarioConfig, seed: u64) -> Vec<TaskInstance> {
    let mut keyed: Vec<(f64, usize)> = Vec::with_capacity(config.total_tasks());
    for (type_index, entry) in config.task_mix.iter().enumerate() {
        let n = entry.count as f64;
        keyed.extend((0..entry.count).map(|k| ((k as f64 + 0.5) / n, type_index)));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ARRIVAL_STREAM);

    let horizon = config.horizon_days.max(1) as usize;
    let (base, extra) = (keyed.len() / horizon, keyed.len() % horizon);
    let mut tasks = Vec::with_capacity(keyed.len());
    let mut cursor = 0;
    for day in 0..horizon {
        let take = base + usize::from(day < extra);
        let mut batch: Vec<usize> = keyed[cursor..cursor + take].iter().map(|&(_, t)| t).collect();
        cursor += take;
        batch.shuffle(&mut rng);
        for type_index in batch {
            tasks.push(TaskInstance {
                task_id: TaskId(tasks.len()),
                type_index,
                arrival_day: day as u32,
                remaining_effort: config.task_mix[type_index].spec.effort,
                status: TaskStatus::Queued,
            });
        }
    }
    tasks
}

/// The shared backlog: one FIFO per task type, read in descending priority.
#[derive(Debug, Clone, Default)]
pub struct CommonQueue {
    per_type: Vec<VecDeque<TaskId>>,
    priority_order: Vec<usize>,
}

impl CommonQueue {
    fn new(types: &[TaskTypeSpec]) -> Self {
        let mut priority_order: Vec<usize> = (0..types.len()).collect();
        priority_order.sort_by(|&a, &b| types[b].priority.total_cmp(&types[a].priority).then(a.cmp(&b)));
        Self { per_type: vec![VecDeque::new(); types.len()], priority_order }
    }

    pub fn len(&self) -> usize {
        self.per_type.iter().map(VecDeque::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.per_type.iter().all(VecDeque::is_empty)
    }

    pub fn len_of(&self, type_index: usize) -> usize {
        self.per_type[type_index].len()
    }

    /// Task ids by priority, then arrival.
    pub fn iter(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.priority_order.iter().flat_map(move |&k| self.per_type[k].iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentInfo {
    pub agent_id: AgentId,
    pub category: Category,
    pub competence: f64,
    pub max_effort: f64,
}

/// Everything measured on one simulated day.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DayRecord {
    pub day: u32,
    pub arrivals: usize,
    pub arrival_workload: f64,
    /// Effort newly assigned to each agent today.
    pub assigned_effort: Vec<f64>,
    /// Effort each agent spent today.
    pub busy_effort: Vec<f64>,
    /// Remaining effort in each agent's queue after allocation, before service.
    pub pending_workload: Vec<f64>,
    /// Remaining effort in each agent's queue at the end of the day.
    pub backlog_workload: Vec<f64>,
    /// Per-agent queue length (tasks) at the end of the day.
    pub queue_sizes: Vec<usize>,
    pub common_queue: usize,
    /// L(t) over every agent/type queue at the end of the day.
    pub congestion: f64,
    pub completions: u32,
    pub high_quality: u32,
    pub delayed: u32,
    pub utility: f64,
    /// Mood of each agent after today's update.
    pub mood: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Totals {
    pub arrived: usize,
    pub completed: u32,
    pub high_quality: u32,
    pub delayed: u32,
    pub global_utility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub scenario: String,
    pub allocator: Allocator,
    pub seed: u64,
    pub agents: Vec<AgentInfo>,
    pub days: Vec<DayRecord>,
    pub totals: Totals,
    /// (arrival day, type index) of every task, in task-id order.
    pub arrivals: Vec<(u32, usize)>,
}

impl RunResult {
    pub fn cumulative_utility(&self) -> Vec<f64> {
        self.days
            .iter()
            .scan(0.0, |acc, d| {
                *acc += d.utility;
                Some(*acc)
            })
            .collect()
    }

    /// Total effort assigned to each agent over the run.
    pub fn assigned_workload(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.agents.len()];
        for d in &self.days {
            for (o, a) in out.iter_mut().zip(&d.assigned_effort) {
                *o += a;
            }
        }
        out
    }

    pub fn peak_pending_workload(&self, agent: usize) -> f64 {
        self.days.iter().map(|d| d.pending_workload[agent]).fold(0.0, f64::max)
    }
}

struct MoodCoupling {
    map: ConceptMap,
    /// Last observed (progress, quality) per agent.
    observed: Vec<(f64, f64)>,
}

/// One run's full state: tasks, queues, agents and generators.
pub struct SimState {
    pub day: u32,
    pub tasks: Vec<TaskInstance>,
    pub common_queue: CommonQueue,
    pub agents: Vec<AgentState>,
    pub completed: Vec<TaskId>,
    config: ScenarioConfig,
    types: Vec<TaskTypeSpec>,
    next_arrival: usize,
    quality_rng: ChaCha8Rng,
    /// Per agent: completions per type for each of the last `window` days.
    service_history: Vec<VecDeque<Vec<u32>>>,
    mood: Option<MoodCoupling>,
}

impl SimState {
    pub fn new(config: ScenarioConfig, seed: u64) -> Result<Self, SimError> {
        // An empty workload is a legal (if dull) run: every metric is zero.
        let violations: Vec<Violation> =
            scenario::violations(&config).into_iter().filter(|v| v.path != "tasks").collect();
        if !violations.is_empty() {
            return Err(SimError::Invalid(violations));
        }
        let types = config.task_types();
        let initial_mood = match config.mood_mode {
            MoodMode::Constant { value } => value,
            MoodMode::FcmCoupled => 1.0,
        };
        let agents = config.team.instantiate(initial_mood);
        let mood = match config.mood_mode {
            MoodMode::Constant { .. } => None,
            MoodMode::FcmCoupled => Some(MoodCoupling {
                map: fcm::bundled_map("michael_scenario1").expect("bundled map"),
                observed: vec![(1.0, 1.0); agents.len()],
            }),
        };
        let mut quality_rng = ChaCha8Rng::seed_from_u64(seed);
        quality_rng.set_stream(QUALITY_STREAM);
        Ok(Self {
            day: 0,
            tasks: generate_arrivals(&config, seed),
            common_queue: CommonQueue::new(&types),
            service_history: vec![VecDeque::new(); agents.len()],
            agents,
            completed: Vec::new(),
            types,
            next_arrival: 0,
            quality_rng,
            mood,
            config,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn arrived(&self) -> usize {
        self.next_arrival
    }

    pub fn is_finished(&self) -> bool {
        self.day >= self.config.horizon_days
    }

    /// Advances one day.
    pub fn tick(&mut self) -> Result<DayRecord, SimError> {
        if self.is_finished() {
            return Err(SimError::Finished);
        }
        let n_agents = self.agents.len();
        let (arrivals, arrival_workload) = self.admit_arrivals();

        let mut assigned_effort = vec![0.0; n_agents];
        match self.config.allocator {
            Allocator::Smart => self.allocate_smart(&mut assigned_effort),
            Allocator::Awr => self.allocate_awr(&mut assigned_effort)?,
        }
        let pending_workload: Vec<f64> = self.agents.iter().map(AgentState::pending_workload).collect();

        let mut record = DayRecord {
            day: self.day,
            arrivals,
            arrival_workload,
            assigned_effort,
            busy_effort: vec![0.0; n_agents],
            pending_workload,
            backlog_workload: Vec::new(),
            queue_sizes: Vec::new(),
            common_queue: 0,
            congestion: 0.0,
            completions: 0,
            high_quality: 0,
            delayed: 0,
            utility: 0.0,
            mood: Vec::new(),
        };
        let outcomes = self.serve(&mut record);
        self.update_mood(&outcomes);

        let n_types = self.types.len();
        record.backlog_workload = self.agents.iter().map(AgentState::pending_workload).collect();
        record.queue_sizes = self.agents.iter().map(|a| a.pending.len()).collect();
        record.common_queue = self.common_queue.len();
        record.congestion = self.agents.iter().flat_map(|a| a.queue_lengths(n_types)).map(|q| (q * q) as f64).sum();
        record.mood = self.agents.iter().map(|a| a.mood).collect();

        self.check_invariants(&record)?;
        self.day += 1;
        Ok(record)
    }

    fn admit_arrivals(&mut self) -> (usize, f64) {
        let start = self.next_arrival;
        while self.next_arrival < self.tasks.len() && self.tasks[self.next_arrival].arrival_day == self.day {
            let t = &self.tasks[self.next_arrival];
            self.common_queue.per_type[t.type_index].push_back(t.task_id);
            self.next_arrival += 1;
        }
        let workload = self.tasks[start..self.next_arrival].iter().map(|t| self.types[t.type_index].effort).sum();
        (self.next_arrival - start, workload)
    }

    fn recent_service_rate(&self, agent: usize, type_index: usize) -> f64 {
        self.service_history[agent].iter().map(|day| day[type_index]).sum::<u32>() as f64
    }

    fn assign(&mut self, task_id: TaskId, agent: usize, assigned_effort: &mut [f64]) {
        let task = &mut self.tasks[task_id.0];
        task.status = TaskStatus::Assigned { agent: AgentId(agent) };
        assigned_effort[agent] += task.remaining_effort;
        self.agents[agent].pending.push_back(PendingTask {
            task_id,
            type_index: task.type_index,
            remaining_effort: task.remaining_effort,
        });
    }

    /// Agents pull in id order; whatever nobody accepts waits for tomorrow.
    fn allocate_smart(&mut self, assigned_effort: &mut [f64]) {
        let efforts: Vec<f64> = self.types.iter().map(|t| t.effort).collect();
        for i in 0..self.agents.len() {
            if self.common_queue.is_empty() {
                break;
            }
            let lambdas: Vec<u32> = (0..self.types.len()).map(|k| self.common_queue.len_of(k) as u32).collect();
            let agent = &self.agents[i];
            let scores: Vec<f64> = self
                .types
                .iter()
                .enumerate()
                .map(|(k, spec)| {
                    allocation::availability_score(
                        self.config.psi,
                        spec.utility,
                        agent.competence.for_type(&spec.type_id),
                        agent.mood,
                        self.recent_service_rate(i, k),
                    )
                })
                .collect();
            let (alphas, _) = allocation::plan_counts(agent.max_effort, &lambdas, &scores, &efforts);
            for (k, &alpha) in alphas.iter().enumerate() {
                for _ in 0..alpha {
                    let id = self.common_queue.per_type[k].pop_front().expect("α ≤ λ");
                    self.assign(id, i, assigned_effort);
                }
            }
        }
    }

    fn allocate_awr(&mut self, assigned_effort: &mut [f64]) -> Result<(), SimError> {
        let queued: Vec<TaskId> = self.common_queue.iter().collect();
        for q in &mut self.common_queue.per_type {
            q.clear();
        }
        for id in queued {
            let type_id = &self.types[self.tasks[id.0].type_index].type_id;
            let target = allocation::awr_assign(type_id, &self.agents)?;
            self.assign(id, target.0, assigned_effort);
        }
        Ok(())
    }

    /// FIFO service; returns per-agent (completions, on-time, high-quality).
    #[allow(clippy::needless_range_loop)] // the body borrows several fields of self by index
    fn serve(&mut self, record: &mut DayRecord) -> Vec<(u32, u32, u32)> {
        let n_types = self.types.len();
        let mut outcomes = vec![(0, 0, 0); self.agents.len()];
        for i in 0..self.agents.len() {
            let mut completed_types = vec![0u32; n_types];
            let mut budget = self.agents[i].max_effort;
            while budget > EFFORT_EPS {
                let Some(head) = self.agents[i].pending.front_mut() else { break };
                let spend = budget.min(head.remaining_effort);
                head.remaining_effort -= spend;
                budget -= spend;
                record.busy_effort[i] += spend;
                let done = head.remaining_effort <= EFFORT_EPS;
                let head = *head;
                self.tasks[head.task_id.0].remaining_effort = head.remaining_effort.max(0.0);
                if !done {
                    break;
                }
                self.agents[i].pending.pop_front();
                let agent = &self.agents[i];
                let spec = &self.types[head.type_index];
                let high_quality = self.quality_rng.gen_bool(agent.competence.for_type(&spec.type_id));
                let task = &mut self.tasks[head.task_id.0];
                task.remaining_effort = 0.0;
                task.status = TaskStatus::Completed { agent: AgentId(i), day: self.day, high_quality };
                let elapsed = self.day - task.arrival_day + 1;
                let nominal = (spec.effort / agent.max_effort).ceil() as u32;
                let late = elapsed > nominal;
                self.completed.push(head.task_id);
                completed_types[head.type_index] += 1;

                record.completions += 1;
                outcomes[i].0 += 1;
                if late {
                    record.delayed += 1;
                } else {
                    outcomes[i].1 += 1;
                }
                if high_quality {
                    record.high_quality += 1;
                    record.utility += spec.utility;
                    outcomes[i].2 += 1;
                }
            }
            let history = &mut self.service_history[i];
            history.push_back(completed_types);
            while history.len() > self.config.service_rate_window as usize {
                history.pop_front();
            }
        }
        outcomes
    }

    fn update_mood(&mut self, outcomes: &[(u32, u32, u32)]) {
        let Some(coupling) = self.mood.as_mut() else { return };
        for (i, &(done, on_time, good)) in outcomes.iter().enumerate() {
            if done > 0 {
                coupling.observed[i] = (f64::from(on_time) / f64::from(done), f64::from(good) / f64::from(done));
            }
            let (progress, quality) = coupling.observed[i];
            let state = StateVector::initial(vec![self.agents[i].mood, progress, quality]);
            let next = coupling.map.step(&state).expect("three-node map");
            self.agents[i].mood = next.values[0];
        }
    }

    fn check_invariants(&self, record: &DayRecord) -> Result<(), SimError> {
        let in_agents: usize = self.agents.iter().map(|a| a.pending.len()).sum();
        let accounted = self.common_queue.len() + in_agents + self.completed.len();
        if accounted != self.next_arrival {
            return Err(SimError::InvariantBreach {
                day: self.day,
                detail: format!("{accounted} tasks accounted for, {} arrived", self.next_arrival),
            });
        }
        for (agent, (&busy, a)) in record.busy_effort.iter().zip(&self.agents).enumerate() {
            if busy > a.max_effort + EFFORT_EPS {
                return Err(SimError::InvariantBreach {
                    day: self.day,
                    detail: format!("agent {agent} spent {busy} > E^max {}", a.max_effort),
                });
            }
        }
        Ok(())
    }

    fn agent_info(&self) -> Vec<AgentInfo> {
        self.agents
            .iter()
            .map(|a| AgentInfo {
                agent_id: a.agent_id,
                category: a.category,
                competence: a.competence.base,
                max_effort: a.max_effort,
            })
            .collect()
    }
}

/// Runs the whole horizon from an empty state with the config's seed.
pub fn run(config: &ScenarioConfig) -> Result<RunResult, SimError> {
    run_seeded(config, config.seed)
}

pub fn run_seeded(config: &ScenarioConfig, seed: u64) -> Result<RunResult, SimError> {
    let mut state = SimState::new(config.clone(), seed)?;
    let mut days = Vec::with_capacity(config.horizon_days as usize);
    while !state.is_finished() {
        days.push(state.tick()?);
    }
    let totals = Totals {
        arrived: state.arrived(),
        completed: days.iter().map(|d| d.completions).sum(),
        high_quality: days.iter().map(|d| d.high_quality).sum(),
        delayed: days.iter().map(|d| d.delayed).sum(),
        global_utility: days.iter().map(|d| d.utility).sum(),
    };
    Ok(RunResult {
        scenario: config.name.clone(),
        allocator: config.allocator,
        seed,
        agents: state.agent_info(),
        arrivals: state.tasks.iter().map(|t| (t.arrival_day, t.type_index)).collect(),
        days,
        totals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std_dev: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        if values.is_empty() {
            return Self { mean: 0.0, std_dev: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n;
        let std_dev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std_dev }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatedSummary {
    pub global_utility: Aggregate,
    pub completed: Aggregate,
    pub high_quality: Aggregate,
    pub delayed: Aggregate,
    pub peak_congestion: Aggregate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedResult {
    pub runs: Vec<RunResult>,
    pub summary: RepeatedSummary,
}

/// `repetitions` runs with seeds `seed, seed+1, …`, executed in parallel.
pub fn run_repeated(config: &ScenarioConfig) -> Result<RepeatedResult, SimError> {
    let seeds: Vec<u64> = (0..u64::from(config.repetitions)).map(|r| config.seed.wrapping_add(r)).collect();
    let runs = seeds.par_iter().map(|&s| run_seeded(config, s)).collect::<Result<Vec<_>, _>>()?;
    let summary = summarize(&runs);
    Ok(RepeatedResult { runs, summary })
}

pub fn summarize(runs: &[RunResult]) -> RepeatedSummary {
    let metric = |f: &dyn Fn(&RunResult) -> f64| Aggregate::of(&runs.iter().map(f).collect::<Vec<_>>());
    RepeatedSummary {
        global_utility: metric(&|r| r.totals.global_utility),
        completed: metric(&|r| f64::from(r.totals.completed)),
        high_quality: metric(&|r| f64::from(r.totals.high_quality)),
        delayed: metric(&|r| f64::from(r.totals.delayed)),
        peak_congestion: metric(&|r| r.days.iter().map(|d| d.congestion).fold(0.0, f64::max)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CategorySpec, TaskMixEntry, TeamConfig};
    use crate::scenario::preset;

    fn tiny(competence: f64, max_effort: f64, effort: f64, count: usize, horizon: u32) -> ScenarioConfig {
        ScenarioConfig {
            name: "tiny".into(),
            team: TeamConfig {
                categories: vec![CategorySpec { category: Category::Hca, count: 1, competence, max_effort }],
            },
            task_mix: vec![TaskMixEntry { spec: TaskTypeSpec::new("T1", 1.0, effort, effort), count }],
            horizon_days: horizon,
            repetitions: 1,
            seed: 3,
            psi: 1.0,
            allocator: Allocator::Smart,
            mood_mode: MoodMode::default(),
            service_rate_window: 1,
        }
    }

    #[test]
    fn arrivals_are_paced_uniformly() {
        let c = preset("S-M").unwrap();
        let tasks = generate_arrivals(&c, 11);
        assert_eq!(tasks.len(), 500);
        for day in 0..100 {
            let today: Vec<_> = tasks.iter().filter(|t| t.arrival_day == day).collect();
            assert_eq!(today.len(), 5);
        }
        for k in 0..5 {
            assert_eq!(tasks.iter().filter(|t| t.type_index == k).count(), 100);
        }
        let m = generate_arrivals(&preset("M-M").unwrap(), 11);
        assert_eq!(m.len(), 1500);
        assert!((0..100).all(|d| m.iter().filter(|t| t.arrival_day == d).count() == 15));
    }

    #[test]
    fn arrivals_depend_only_on_seed() {
        let c = preset("S-I").unwrap();
        assert_eq!(generate_arrivals(&c, 5), generate_arrivals(&c, 5));
        let awr = c.clone().with_allocator(Allocator::Awr);
        assert_eq!(generate_arrivals(&c, 5), generate_arrivals(&awr, 5));
        assert_ne!(generate_arrivals(&c, 5), generate_arrivals(&c, 6));
    }

    #[test]
    fn single_day_horizon() {
        let c = tiny(1.0, 10.0, 1.0, 5, 1);
        let tasks = generate_arrivals(&c, 0);
        assert_eq!(tasks.len(), 5);
        assert!(tasks.iter().all(|t| t.arrival_day == 0));
    }

    #[test]
    fn one_task_completes_same_day() {
        let c = tiny(1.0, 10.0, 10.0, 1, 1);
        let mut s = SimState::new(c, 0).unwrap();
        let rec = s.tick().unwrap();
        assert_eq!(rec.completions, 1);
        assert_eq!(rec.high_quality, 1);
        let t = &s.tasks[0];
        assert_eq!(t.completion_day(), Some(0));
        assert_eq!(t.quality_success(), Some(true));
    }

    #[test]
    fn partial_effort_carries_over() {
        // SMART never admits a task larger than a day's capacity, AWR does
        let c = tiny(1.0, 3.0, 10.0, 1, 5).with_allocator(Allocator::Awr);
        let r = run(&c).unwrap();
        let busy: Vec<f64> = r.days.iter().map(|d| d.busy_effort[0]).collect();
        assert_eq!(busy, vec![3.0, 3.0, 3.0, 1.0, 0.0]);
        assert_eq!(r.days[3].completions, 1);
        // nominal duration ⌈10/3⌉ = 4 days, so not late
        assert_eq!(r.totals.delayed, 0);
    }

    #[test]
    fn carryover_is_visible_on_the_agent() {
        let c = tiny(1.0, 3.0, 10.0, 1, 5).with_allocator(Allocator::Awr);
        let mut s = SimState::new(c, 0).unwrap();
        s.tick().unwrap();
        let types = s.config().task_types();
        assert_eq!(s.agents[0].carryover_effort(&types), 3.0);
        assert_eq!(s.tasks[0].remaining_effort, 7.0);
    }

    #[test]
    fn zero_mood_agent_takes_nothing() {
        let mut c = tiny(1.0, 10.0, 1.0, 3, 3);
        c.mood_mode = MoodMode::Constant { value: 0.0 };
        let r = run(&c).unwrap();
        assert_eq!(r.totals.completed, 0);
        assert_eq!(r.days.last().unwrap().common_queue, 3);
    }

    #[test]
    fn zero_task_scenario_has_zero_metrics() {
        let r = run(&tiny(1.0, 10.0, 1.0, 0, 4)).unwrap();
        assert_eq!(r.days.len(), 4);
        assert_eq!(r.totals, Totals::default());
        assert!(r.days.iter().all(|d| d.congestion == 0.0 && d.busy_effort == vec![0.0]));
    }

    #[test]
    fn other_violations_still_reject() {
        let c = tiny(1.3, 10.0, 1.0, 1, 4);
        assert!(matches!(run(&c), Err(SimError::Invalid(v)) if v[0].path == "team[0].competence"));
    }

    #[test]
    fn ticking_past_horizon_is_an_error() {
        let mut s = SimState::new(tiny(1.0, 10.0, 1.0, 1, 1), 0).unwrap();
        s.tick().unwrap();
        assert!(matches!(s.tick(), Err(SimError::Finished)));
    }

    #[test]
    fn totals_match_series() {
        let r = run(&preset("S-I").unwrap()).unwrap();
        assert_eq!(r.days.len(), 100);
        assert_eq!(r.totals.completed, r.days.iter().map(|d| d.completions).sum::<u32>());
        assert_eq!(r.totals.global_utility, r.cumulative_utility().last().copied().unwrap());
        assert_eq!(r.totals.arrived, 500);
    }

    #[test]
    fn awr_sends_everything_to_first_hca() {
        let c = preset("S-C").unwrap().with_allocator(Allocator::Awr);
        let r = run(&c).unwrap();
        let w = r.assigned_workload();
        assert_eq!(w[0], 2700.0);
        assert!(w[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn fcm_coupled_mood_stays_in_unit_interval() {
        let mut c = preset("S-M").unwrap();
        c.mood_mode = MoodMode::FcmCoupled;
        let r = run(&c).unwrap();
        assert!(r.days.iter().flat_map(|d| &d.mood).all(|&m| m > 0.0 && m < 1.0));
        assert!(r.totals.global_utility > 0.0);
    }

    #[test]
    fn aggregate_statistics() {
        let a = Aggregate::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(a.mean, 2.5);
        assert!((a.std_dev - 1.2909944487358056).abs() < 1e-12);
        assert_eq!(Aggregate::of(&[7.0]).std_dev, 0.0);
    }
}
