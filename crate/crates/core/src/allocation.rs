//! Task acceptance: the SMART greedy planner, the accept-when-requested
//! (AWR) baseline, and the quality/drift terms that score decisions.
//!
//! For an agent `i` and task type `τ` the availability score is
//!
//! ```text
//! score = ψ · u^τ · C_i^τ · M_i − μ_i^τ
//! ```
//!
//! SMART visits the agent's task types in descending score and, for every
//! type with a strictly positive score, accepts as many incoming tasks as
//! the remaining daily effort allows. The visit key is the score; ordering by
//! the acceptance count itself would be circular since that count is the
//! output of the pass.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{AgentId, AgentState, TaskTypeSpec, TypeId};

#[derive(Debug, Error, PartialEq)]
pub enum AllocationError {
    #[error("incoming tasks reference unknown type `{0}`")]
    UnknownType(TypeId),
    #[error("no agents to assign to")]
    NoAgents,
}

/// Expected utility of letting an agent perform one task: `u · C · M`.
pub fn expected_utility(utility: f64, competence: f64, mood: f64) -> f64 {
    utility * competence * mood
}

/// Queue length after admitting `alpha` and serving `mu` tasks; never negative.
pub fn queue_update(queue: u64, alpha: u64, mu: u64) -> u64 {
    (queue + alpha).saturating_sub(mu)
}

pub fn drift(alpha: u64, mu: u64) -> f64 {
    (alpha * mu) as f64
}

/// `α · utility`: the expected quality of accepting `alpha` tasks.
pub fn quality(alpha: u64, utility: f64) -> f64 {
    alpha as f64 * utility
}

pub fn availability_score(psi: f64, utility: f64, competence: f64, mood: f64, service_rate: f64) -> f64 {
    psi * expected_utility(utility, competence, mood) - service_rate
}

/// Per-type inputs to one agent's acceptance decision.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeEconomics {
    pub type_id: TypeId,
    /// e^τ, needed to debit the agent's daily effort.
    pub effort: f64,
    pub expected_utility: f64,
    pub availability_score: f64,
    pub recent_service_rate: f64,
}

impl TypeEconomics {
    pub fn evaluate(spec: &TaskTypeSpec, agent: &AgentState, recent_service_rate: f64, psi: f64) -> Self {
        let competence = agent.competence.for_type(&spec.type_id);
        Self {
            type_id: spec.type_id.clone(),
            effort: spec.effort,
            expected_utility: expected_utility(spec.utility, competence, agent.mood),
            availability_score: availability_score(psi, spec.utility, competence, agent.mood, recent_service_rate),
            recent_service_rate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AllocationPlan {
    pub accepted: BTreeMap<TypeId, u32>,
    pub leftover_effort: f64,
    /// λ − α per type; these go back to the common queue.
    pub rejected: BTreeMap<TypeId, u32>,
}

impl AllocationPlan {
    pub fn accepted_effort(&self, economics: &[TypeEconomics]) -> f64 {
        economics.iter().map(|e| *self.accepted.get(&e.type_id).unwrap_or(&0) as f64 * e.effort).sum()
    }
}

/// Indices of `scores` in SMART visit order: descending score, ties by position.
pub fn visit_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Index-based core of [`smart_plan`]. Returns α per position and the
/// unspent effort.
pub(crate) fn plan_counts(max_effort: f64, incoming: &[u32], scores: &[f64], efforts: &[f64]) -> (Vec<u32>, f64) {
    let mut budget = max_effort;
    let mut accepted = vec![0u32; incoming.len()];
    for k in visit_order(scores) {
        if !(scores[k] > 0.0) {
            continue;
        }
        let lambda = incoming[k];
        let effort = efforts[k];
        let mut alpha =
            if f64::from(lambda) * effort <= budget { lambda } else { (budget / effort).floor().max(0.0) as u32 };
        // guard against a quotient that rounded up past the budget
        while alpha > 0 && f64::from(alpha) * effort > budget {
            alpha -= 1;
        }
        accepted[k] = alpha;
        budget -= f64::from(alpha) * effort;
    }
    (accepted, budget)
}

/// One agent's SMART acceptance plan for the day.
///
/// `incoming` holds λ^τ per type; types present in `economics` but absent from
/// `incoming` are treated as λ = 0. Ties in score keep the order of
/// `economics`.
pub fn smart_plan(
    agent: &AgentState,
    incoming: &BTreeMap<TypeId, u32>,
    economics: &[TypeEconomics],
) -> Result<AllocationPlan, AllocationError> {
    if let Some(unknown) = incoming.keys().find(|k| !economics.iter().any(|e| &e.type_id == *k)) {
        return Err(AllocationError::UnknownType(unknown.clone()));
    }
    let lambdas: Vec<u32> = economics.iter().map(|e| *incoming.get(&e.type_id).unwrap_or(&0)).collect();
    let scores: Vec<f64> = economics.iter().map(|e| e.availability_score).collect();
    let efforts: Vec<f64> = economics.iter().map(|e| e.effort).collect();
    let (alphas, leftover) = plan_counts(agent.max_effort, &lambdas, &scores, &efforts);

    let mut plan = AllocationPlan { leftover_effort: leftover, ..Default::default() };
    for ((e, &alpha), &lambda) in economics.iter().zip(&alphas).zip(&lambdas) {
        plan.accepted.insert(e.type_id.clone(), alpha);
        plan.rejected.insert(e.type_id.clone(), lambda - alpha);
    }
    Ok(plan)
}

/// AWR baseline: the most competent agent for the type takes the task,
/// whatever its backlog. Ties go to the lowest agent id.
pub fn awr_assign(type_id: &str, agents: &[AgentState]) -> Result<AgentId, AllocationError> {
    agents
        .iter()
        .max_by(|a, b| {
            a.competence.for_type(type_id).total_cmp(&b.competence.for_type(type_id)).then(b.agent_id.cmp(&a.agent_id))
        })
        .map(|a| a.agent_id)
        .ok_or(AllocationError::NoAgents)
}
