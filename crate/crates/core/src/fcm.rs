//! Fuzzy cognitive maps.
//!
//! A map is a signed, weighted digraph over named concepts. Row `i` of the
//! weight matrix holds the edges leaving concept `i`. One update computes
//! every node from the previous state only:
//!
//! ```text
//! N_j(k+1) = f( Σ_i e_ij · N_i(k) )
//! ```
//!
//! There is no self-memory term, so the diagonal must be zero and a node
//! with no incoming edges settles at `f(0)` after one step.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_STEEPNESS: f64 = 5.0;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum FcmError {
    #[error("weight matrix has {rows} rows but {labels} labels")]
    RowCount { rows: usize, labels: usize },
    #[error("weight row {row} has {len} entries, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("weight e[{row}][{col}] = {value} outside [-1, 1]")]
    WeightRange { row: usize, col: usize, value: f64 },
    #[error("self-feedback weight e[{0}][{0}] must be 0")]
    SelfFeedback(usize),
    #[error("state has {got} values but the map has {expected} nodes")]
    Dimension { got: usize, expected: usize },
    #[error("sigmoid steepness must be > 0, got {0}")]
    Steepness(f64),
    #[error("max_iter must be ≥ 1 and tol > 0")]
    RunBounds,
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),
    #[error("duplicate answer for {0} → {1}")]
    DuplicateAnswer(String, String),
    #[error("a concept cannot influence itself ({0})")]
    SelfAnswer(String),
    #[error("unknown Likert level `{0}`")]
    UnknownLevel(String),
    #[error("unknown transform `{0}`")]
    UnknownTransform(String),
    #[error("unknown bundled map `{0}`")]
    UnknownBundled(String),
    #[error("map document: {0}")]
    Document(String),
}

/// Squashing function applied to a node's weighted input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    Bivalent,
    Trivalent,
    Sigmoid { c: f64 },
}

impl Transform {
    pub fn apply(self, n: f64) -> f64 {
        match self {
            Transform::Bivalent => {
                if n <= 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Transform::Trivalent => {
                if n <= -0.5 {
                    -1.0
                } else if n >= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            Transform::Sigmoid { c } => 1.0 / (1.0 + (-c * n).exp()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Bivalent => "bivalent",
            Transform::Trivalent => "trivalent",
            Transform::Sigmoid { .. } => "sigmoid",
        }
    }

    /// Parses `bivalent`, `trivalent` or `sigmoid` (with steepness `c`).
    pub fn parse(name: &str, c: f64) -> Result<Self, FcmError> {
        match name.to_ascii_lowercase().as_str() {
            "bivalent" => Ok(Transform::Bivalent),
            "trivalent" => Ok(Transform::Trivalent),
            "sigmoid" if c > 0.0 => Ok(Transform::Sigmoid { c }),
            "sigmoid" => Err(FcmError::Steepness(c)),
            other => Err(FcmError::UnknownTransform(other.to_string())),
        }
    }
}

pub fn transform(kind: Transform, n: f64) -> f64 {
    kind.apply(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptMap {
    labels: Vec<String>,
    weights: Vec<Vec<f64>>,
    transform: Transform,
}

impl ConceptMap {
    pub fn new(labels: Vec<String>, weights: Vec<Vec<f64>>, transform: Transform) -> Result<Self, FcmError> {
        let n = labels.len();
        if weights.len() != n {
            return Err(FcmError::RowCount { rows: weights.len(), labels: n });
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != n {
                return Err(FcmError::RowLength { row: i, len: row.len(), expected: n });
            }
            for (j, &w) in row.iter().enumerate() {
                if !(-1.0..=1.0).contains(&w) {
                    return Err(FcmError::WeightRange { row: i, col: j, value: w });
                }
            }
            if row[i] != 0.0 {
                return Err(FcmError::SelfFeedback(i));
            }
        }
        if let Transform::Sigmoid { c } = transform {
            if !(c > 0.0) {
                return Err(FcmError::Steepness(c));
            }
        }
        Ok(Self { labels, weights, transform })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn transform(&self) -> Transform {
        self.transform
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }

    /// One synchronous update.
    pub fn step(&self, state: &StateVector) -> Result<StateVector, FcmError> {
        let n = self.len();
        if state.values.len() != n {
            return Err(FcmError::Dimension { got: state.values.len(), expected: n });
        }
        let values = (0..n)
            .map(|j| {
                let input: f64 = (0..n).map(|i| self.weights[i][j] * state.values[i]).sum();
                self.transform.apply(input)
            })
            .collect();
        Ok(StateVector { values, iteration: state.iteration + 1 })
    }

    /// Exactly `steps` updates; the returned list starts with `initial`.
    pub fn iterate(&self, initial: &StateVector, steps: usize) -> Result<Vec<StateVector>, FcmError> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(initial.clone());
        for _ in 0..steps {
            let next = self.step(out.last().expect("non-empty"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// Iterates until a fixed point, a recurring state, or `max_iter` steps.
    pub fn run(&self, initial: &StateVector, max_iter: usize, tol: f64) -> Result<Trajectory, FcmError> {
        if max_iter < 1 || !(tol > 0.0) {
            return Err(FcmError::RunBounds);
        }
        if initial.values.len() != self.len() {
            return Err(FcmError::Dimension { got: initial.values.len(), expected: self.len() });
        }
        let mut states = vec![initial.clone()];
        for _ in 0..max_iter {
            let prev = states.last().expect("non-empty");
            let next = self.step(prev)?;
            if next.max_distance(prev) < tol {
                let iteration = next.iteration;
                states.push(next);
                return Ok(Trajectory { states, terminal: Terminal::FixedPoint { iteration } });
            }
            // the immediately preceding state was checked above
            let earlier = &states[..states.len() - 1];
            if let Some(seen) = earlier.iter().rev().find(|s| next.max_distance(s) < tol) {
                let start = seen.iteration;
                let period = next.iteration - start;
                states.push(next);
                return Ok(Trajectory { states, terminal: Terminal::LimitCycle { start, period } });
            }
            states.push(next);
        }
        Ok(Trajectory { states, terminal: Terminal::MaxIterations })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub values: Vec<f64>,
    pub iteration: usize,
}

impl StateVector {
    pub fn initial(values: Vec<f64>) -> Self {
        Self { values, iteration: 0 }
    }

    /// Max-norm distance between two states.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    FixedPoint {
        iteration: usize,
    },
    /// The state at `start + period` recurred to the state at `start`.
    LimitCycle {
        start: usize,
        period: usize,
    },
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub terminal: Terminal,
}

impl Trajectory {
    pub fn last(&self) -> &StateVector {
        self.states.last().expect("trajectories include the initial state")
    }

    /// CSV with an `iteration` column followed by one column per label.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("iteration");
        for l in labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for s in &self.states {
            write!(out, "{}", s.iteration).unwrap();
            for v in &s.values {
                write!(out, ",{v:.9}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Free-function form of [`ConceptMap::step`].
pub fn step(map: &ConceptMap, state: &StateVector) -> Result<StateVector, FcmError> {
    map.step(state)
}

/// Free-function form of [`ConceptMap::run`].
pub fn run(map: &ConceptMap, initial: &StateVector, max_iter: usize, tol: f64) -> Result<Trajectory, FcmError> {
    map.run(initial, max_iter, tol)
}

// --- questionnaire elicitation -------------------------------------------

/// Five-point answer scale of the weight questionnaire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Likert {
    NotAtAll,
    ALittle,
    Moderately,
    Mostly,
    Completely,
}

impl Likert {
    pub const ALL: [Likert; 5] =
        [Likert::NotAtAll, Likert::ALittle, Likert::Moderately, Likert::Mostly, Likert::Completely];

    /// Magnitude on the uniform grid {0, 0.25, 0.5, 0.75, 1}.
    pub fn magnitude(self) -> f64 {
        match self {
            Likert::NotAtAll => 0.0,
            Likert::ALittle => 0.25,
            Likert::Moderately => 0.5,
            Likert::Mostly => 0.75,
            Likert::Completely => 1.0,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FcmError> {
        let norm: String = text.split_whitespace().collect::<Vec<_>>().join(" ").to_ascii_lowercase();
        match norm.as_str() {
            "not at all" => Ok(Likert::NotAtAll),
            "a little" => Ok(Likert::ALittle),
            "moderately" => Ok(Likert::Moderately),
            "mostly" => Ok(Likert::Mostly),
            "completely" => Ok(Likert::Completely),
            _ => Err(FcmError::UnknownLevel(text.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Answer {
    pub from: String,
    pub to: String,
    pub sign: Sign,
    pub level: Likert,
}

impl Answer {
    pub fn new(from: &str, to: &str, sign: Sign, level: Likert) -> Self {
        Self { from: from.to_string(), to: to.to_string(), sign, level }
    }

    pub fn weight(&self) -> f64 {
        match self.sign {
            Sign::Positive => self.level.magnitude(),
            Sign::Negative => -self.level.magnitude(),
        }
    }
}

/// Builds a weight matrix from questionnaire answers; unanswered pairs are 0.
pub fn elicit_weights(labels: &[String], answers: &[Answer]) -> Result<Vec<Vec<f64>>, FcmError> {
    let n = labels.len();
    let index = |name: &str| {
        labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(name))
            .ok_or_else(|| FcmError::UnknownConcept(name.to_string()))
    };
    let mut weights = vec![vec![0.0; n]; n];
    let mut answered = vec![vec![false; n]; n];
    for a in answers {
        let (i, j) = (index(&a.from)?, index(&a.to)?);
        if i == j {
            return Err(FcmError::SelfAnswer(a.from.clone()));
        }
        if answered[i][j] {
            return Err(FcmError::DuplicateAnswer(a.from.clone(), a.to.clone()));
        }
        answered[i][j] = true;
        weights[i][j] = a.weight();
    }
    Ok(weights)
}

// --- map documents ------------------------------------------------------

/// On-disk form of a map: `labels`, row-major `weights`, `transform`, `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDocument {
    pub labels: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    #[serde(default = "default_transform_name")]
    pub transform: String,
    #[serde(default = "default_c")]
    pub c: f64,
}

fn default_transform_name() -> String {
    "sigmoid".into()
}

fn default_c() -> f64 {
    DEFAULT_STEEPNESS
}

impl MapDocument {
    pub fn into_map(self) -> Result<ConceptMap, FcmError> {
        let transform = Transform::parse(&self.transform, self.c)?;
        ConceptMap::new(self.labels, self.weights, transform)
    }

    pub fn from_map(map: &ConceptMap) -> Self {
        let c = match map.transform {
            Transform::Sigmoid { c } => c,
            _ => DEFAULT_STEEPNESS,
        };
        Self {
            labels: map.labels.clone(),
            weights: map.weights.clone(),
            transform: map.transform.name().to_string(),
            c,
        }
    }
}

pub fn parse_map(text: &str, json: bool) -> Result<ConceptMap, FcmError> {
    let doc: MapDocument = if json {
        serde_json::from_str(text).map_err(|e| FcmError::Document(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| FcmError::Document(e.to_string()))?
    };
    doc.into_map()
}

pub fn load_map(path: &Path) -> Result<ConceptMap, FcmError> {
    let text = std::fs::read_to_string(path).map_err(|e| FcmError::Document(format!("{}: {e}", path.display())))?;
    parse_map(&text, crate::scenario::is_json(path))
}

pub const BUNDLED_MAPS: [&str; 4] = ["michael_scenario1", "grace_scenario1", "michael_scenario2", "grace_scenario2"];

pub fn bundled_map(name: &str) -> Result<ConceptMap, FcmError> {
    let text = match name {
        "michael_scenario1" => include_str!("../assets/maps/michael_scenario1.toml"),
        "grace_scenario1" => include_str!("../assets/maps/grace_scenario1.toml"),
        "michael_scenario2" => include_str!("../assets/maps/michael_scenario2.toml"),
        "grace_scenario2" => include_str!("../assets/maps/grace_scenario2.toml"),
        other => return Err(FcmError::UnknownBundled(other.to_string())),
    };
    parse_map(text, false)
}
