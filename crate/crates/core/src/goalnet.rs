//! Goal Net requirements models built from user stories.
//!
//! Construction runs in three steps:
//!
//! 1. high-level goals (supplied by the product owner) become level-1
//!    composites under a single level-0 root;
//! 2. each top-level story's "I want to" clause becomes a level-2 goal under
//!    its assigned high-level goal;
//! 3. sub-stories hang one level below their parent story.
//!
//! Transitions are inferred from sibling structure. Level-1 goals chain
//! their children with sequence transitions; deeper composites fan out to
//! their children with a concurrency transition and join back with a
//! synchronization. A composite with a single child always gets one sequence
//! transition. Any parent can override its mode in the goals file.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GoalNetError {
    #[error(
        "story does not match `As a <role>, I want to <goal> [so that <benefit>]` at position {position}: {message}"
    )]
    Parse { position: usize, message: String },
    #[error("duplicate story id `{0}`")]
    DuplicateStory(String),
    #[error("story `{id}` names parent `{parent}` which is not a proper prefix of its id")]
    ParentNotPrefix { id: String, parent: String },
    #[error("story `{id}` names unknown parent `{parent}`")]
    UnknownParent { id: String, parent: String },
    #[error("cyclic parent references through story `{0}`")]
    Cycle(String),
    #[error("top-level story `{0}` is not assigned to a high-level goal")]
    Unassigned(String),
    #[error("story `{story}` is assigned to `{goal}`, which is not a high-level goal")]
    UnknownGoal { story: String, goal: String },
    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("document: {0}")]
    Document(String),
    #[error("node `{0}` is referenced but not defined")]
    Dangling(String),
}

// --- user stories -------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserStory {
    pub id: String,
    pub role: String,
    pub goal: String,
    pub benefit: Option<String>,
    pub parent: Option<String>,
    pub tasks: Vec<String>,
}

impl UserStory {
    pub fn render(&self) -> String {
        render_story(self)
    }
}

fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn parse_error(position: usize, message: &str) -> GoalNetError {
    GoalNetError::Parse { position, message: message.to_string() }
}

/// Parses the user-story template. Keywords are case-insensitive and runs of
/// whitespace collapse to one space; error positions are character offsets
/// into that normalized text.
pub fn parse_story(text: &str) -> Result<UserStory, GoalNetError> {
    let norm = normalize(text);
    let lower = norm.to_ascii_lowercase();

    let role_start = if lower.starts_with("as an ") {
        6
    } else if lower.starts_with("as a ") {
        5
    } else {
        return Err(parse_error(0, "expected `As a <role>`"));
    };
    let Some(want_rel) = lower[role_start..].find("i want to ") else {
        return Err(parse_error(norm[..role_start].chars().count(), "expected `, I want to <goal>` after the role"));
    };
    let want = role_start + want_rel;
    let role = norm[role_start..want].trim_end().trim_end_matches(',').trim();
    if role.is_empty() {
        return Err(parse_error(role_start, "empty role"));
    }
    let goal_start = want + "i want to ".len();
    let (goal, benefit) = match lower[goal_start..].find(" so that ") {
        Some(rel) => {
            let at = goal_start + rel;
            let benefit = norm[at + " so that ".len()..].trim().trim_end_matches('.').trim();
            (&norm[goal_start..at], (!benefit.is_empty()).then(|| benefit.to_string()))
        }
        None => (&norm[goal_start..], None),
    };
    let goal = goal.trim().trim_end_matches(['.', ',']).trim();
    if goal.is_empty() {
        return Err(parse_error(goal_start, "empty goal"));
    }
    Ok(UserStory {
        id: String::new(),
        role: role.to_string(),
        goal: goal.to_string(),
        benefit,
        parent: None,
        tasks: Vec::new(),
    })
}

pub fn render_story(story: &UserStory) -> String {
    let article = match story.role.chars().next().map(|c| c.to_ascii_lowercase()) {
        Some('a' | 'e' | 'i' | 'o') => "an",
        _ => "a",
    };
    let mut out = format!("As {article} {}, I want to {}", story.role, story.goal);
    if let Some(b) = &story.benefit {
        write!(out, " so that {b}").unwrap();
    }
    out
}

fn derived_parent(id: &str) -> Option<&str> {
    id.rsplit_once('.').map(|(p, _)| p)
}

fn is_dotted_id(token: &str) -> bool {
    !token.is_empty() && token.split('.').all(|s| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()))
}

/// Reads a one-story-per-line corpus.
///
/// A line may start with a dotted id (`1.2`); otherwise its line number is
/// used. Lines starting with `-` or `*` add a task to the preceding story,
/// `#` starts a comment. Parents come from the dotted ids.
pub fn parse_corpus(text: &str) -> Result<Vec<UserStory>, GoalNetError> {
    let mut stories: Vec<UserStory> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(task) = line.strip_prefix('-').or_else(|| line.strip_prefix('*')) {
            let story = stories
                .last_mut()
                .ok_or_else(|| GoalNetError::Corpus { line: lineno, message: "task before any story".into() })?;
            story.tasks.push(normalize(task));
            continue;
        }
        let (id, body) = match line.split_once(char::is_whitespace) {
            Some((first, rest)) if is_dotted_id(first) => (first.to_string(), rest),
            _ => (lineno.to_string(), line),
        };
        let mut story = parse_story(body).map_err(|e| GoalNetError::Corpus { line: lineno, message: e.to_string() })?;
        story.parent = derived_parent(&id).map(str::to_string);
        story.id = id;
        stories.push(story);
    }
    Ok(stories)
}

#[derive(Debug, Deserialize)]
struct CorpusDocument {
    stories: Vec<CorpusEntry>,
}

#[derive(Debug, Deserialize)]
struct CorpusEntry {
    id: String,
    text: String,
    parent: Option<String>,
    #[serde(default)]
    tasks: Vec<String>,
}

/// Reads a structured corpus (`[[stories]]` with id, text, parent, tasks).
pub fn parse_corpus_document(text: &str, json: bool) -> Result<Vec<UserStory>, GoalNetError> {
    let doc: CorpusDocument = if json {
        serde_json::from_str(text).map_err(|e| GoalNetError::Document(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| GoalNetError::Document(e.to_string()))?
    };
    doc.stories
        .into_iter()
        .map(|e| {
            let mut s = parse_story(&e.text)?;
            s.parent = e.parent.or_else(|| derived_parent(&e.id).map(str::to_string));
            s.id = e.id;
            s.tasks = e.tasks;
            Ok(s)
        })
        .collect()
}

/// Loads a corpus; `.toml`/`.json` are structured, anything else line-based.
pub fn load_corpus(path: &Path) -> Result<Vec<UserStory>, GoalNetError> {
    let text = std::fs::read_to_string(path).map_err(|e| GoalNetError::Document(format!("{}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("toml") => parse_corpus_document(&text, false),
        Some("json") => parse_corpus_document(&text, true),
        _ => parse_corpus(&text),
    }
}

// --- goal specification ---------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiblingMode {
    Sequence,
    Concurrent,
}

fn default_root() -> String {
    "Project goal".into()
}

/// Product-owner input: the high-level goals and which top-level stories
/// serve each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalSpec {
    #[serde(default = "default_root")]
    pub root: String,
    pub goals: Vec<String>,
    /// Top-level story id → high-level goal label.
    pub assignment: BTreeMap<String, String>,
    /// Parent (story id or high-level goal label) → sibling transition mode.
    #[serde(default)]
    pub transitions: BTreeMap<String, SiblingMode>,
    /// Story id → environment variables for its GET card.
    #[serde(default)]
    pub environment: BTreeMap<String, Vec<(String, String)>>,
}

pub fn parse_goal_spec(text: &str, json: bool) -> Result<GoalSpec, GoalNetError> {
    if json {
        serde_json::from_str(text).map_err(|e| GoalNetError::Document(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| GoalNetError::Document(e.to_string()))
    }
}

pub fn load_goal_spec(path: &Path) -> Result<GoalSpec, GoalNetError> {
    let text = std::fs::read_to_string(path).map_err(|e| GoalNetError::Document(format!("{}: {e}", path.display())))?;
    parse_goal_spec(&text, crate::scenario::is_json(path))
}

/// The bundled mobile-shopping example: nine stories with tasks and four
/// high-level goals.
pub fn bundled_corpus() -> (Vec<UserStory>, GoalSpec) {
    let stories = parse_corpus(include_str!("../assets/stories/mobile_shop.txt")).expect("bundled corpus parses");
    let spec = parse_goal_spec(include_str!("../assets/stories/mobile_shop_goals.toml"), false)
        .expect("bundled goal spec parses");
    (stories, spec)
}

// --- the net ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Atomic,
    Composite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalNode {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
    pub level: u32,
    pub parent: Option<String>,
    /// May attach to any composite ancestor rather than only its direct parent.
    #[serde(default)]
    pub cut_across: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransitionKind {
    Sequence,
    Concurrency,
    Synchronization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub id: String,
    pub kind: TransitionKind,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tasks: Vec<String>,
}

/// Goal-Environment-Task card for one goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GetCard {
    pub goal_id: String,
    pub environment_variables: Vec<(String, String)>,
    pub tasks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalNet {
    pub root: String,
    pub nodes: Vec<GoalNode>,
    pub transitions: Vec<Transition>,
    pub cards: Vec<GetCard>,
}

impl GoalNet {
    /// A net holding only its root.
    pub fn with_root(label: &str) -> Self {
        Self {
            root: "root".into(),
            nodes: vec![GoalNode {
                id: "root".into(),
                label: label.to_string(),
                kind: NodeKind::Atomic,
                level: 0,
                parent: None,
                cut_across: false,
            }],
            transitions: Vec::new(),
            cards: Vec::new(),
        }
    }

    pub fn node(&self, id: &str) -> Option<&GoalNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_by_label(&self, label: &str) -> Option<&GoalNode> {
        self.nodes.iter().find(|n| n.label == label)
    }

    pub fn children(&self, id: &str) -> impl Iterator<Item = &GoalNode> + '_ {
        let id = id.to_string();
        self.nodes.iter().filter(move |n| n.parent.as_deref() == Some(id.as_str()))
    }

    /// Number of distinct levels (root only = 1).
    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.level + 1).max().unwrap_or(0)
    }

    pub fn card(&self, goal_id: &str) -> Option<&GetCard> {
        self.cards.iter().find(|c| c.goal_id == goal_id)
    }
}

fn story_node_id(story_id: &str) -> String {
    format!("story-{story_id}")
}

/// Builds the net from stories and the product owner's goal spec.
pub fn build_goal_net(stories: &[UserStory], spec: &GoalSpec) -> Result<GoalNet, GoalNetError> {
    let by_id = index_stories(stories)?;

    let mut net = GoalNet::with_root(&spec.root);
    for (i, label) in spec.goals.iter().enumerate() {
        net.nodes.push(GoalNode {
            id: format!("goal-{}", i + 1),
            label: label.clone(),
            kind: NodeKind::Atomic,
            level: 1,
            parent: Some("root".into()),
            cut_across: false,
        });
    }

    // stories in input order; a parent always precedes its children in the
    // node list because levels are computed from the parent chain
    let mut levels: HashMap<&str, u32> = HashMap::new();
    for s in stories {
        let depth = story_depth(s, &by_id);
        levels.insert(&s.id, 2 + depth);
    }
    let mut ordered: Vec<&UserStory> = stories.iter().collect();
    ordered.sort_by_key(|s| levels[s.id.as_str()]);
    for s in ordered {
        let parent = match &s.parent {
            Some(p) => story_node_id(p),
            None => {
                let goal = spec.assignment.get(&s.id).ok_or_else(|| GoalNetError::Unassigned(s.id.clone()))?;
                let idx = spec
                    .goals
                    .iter()
                    .position(|g| g == goal)
                    .ok_or_else(|| GoalNetError::UnknownGoal { story: s.id.clone(), goal: goal.clone() })?;
                format!("goal-{}", idx + 1)
            }
        };
        net.nodes.push(GoalNode {
            id: story_node_id(&s.id),
            label: s.goal.clone(),
            kind: NodeKind::Atomic,
            level: levels[s.id.as_str()],
            parent: Some(parent),
            cut_across: false,
        });
    }
    let parents: BTreeSet<String> = net.nodes.iter().filter_map(|n| n.parent.clone()).collect();
    for n in &mut net.nodes {
        if parents.contains(&n.id) {
            n.kind = NodeKind::Composite;
        }
    }

    let tasks_of = |node_id: &str| -> Vec<String> {
        node_id.strip_prefix("story-").and_then(|sid| by_id.get(sid)).map(|s| s.tasks.clone()).unwrap_or_default()
    };
    let mut transitions = Vec::new();
    let mut push = |kind, inputs: Vec<String>, outputs: Vec<String>, tasks: Vec<String>| {
        let id = format!("t{}", transitions.len() + 1);
        transitions.push(Transition { id, kind, inputs, outputs, tasks });
    };
    for parent in net.nodes.iter().filter(|n| n.kind == NodeKind::Composite && n.level > 0) {
        let children: Vec<&GoalNode> = net.children(&parent.id).collect();
        let key = parent.id.strip_prefix("story-").unwrap_or(&parent.label);
        let default = if parent.level == 1 { SiblingMode::Sequence } else { SiblingMode::Concurrent };
        let mode = spec.transitions.get(key).copied().unwrap_or(default);
        if children.len() == 1 || mode == SiblingMode::Sequence {
            let mut prev = parent.id.clone();
            for c in &children {
                push(TransitionKind::Sequence, vec![prev], vec![c.id.clone()], tasks_of(&c.id));
                prev = c.id.clone();
            }
        } else {
            let ids: Vec<String> = children.iter().map(|c| c.id.clone()).collect();
            let tasks = ids.iter().flat_map(|c| tasks_of(c)).collect();
            push(TransitionKind::Concurrency, vec![parent.id.clone()], ids.clone(), tasks);
            push(TransitionKind::Synchronization, ids, vec![parent.id.clone()], Vec::new());
        }
    }
    net.transitions = transitions;

    net.cards = stories
        .iter()
        .filter(|s| !s.tasks.is_empty())
        .map(|s| GetCard {
            goal_id: story_node_id(&s.id),
            environment_variables: spec.environment.get(&s.id).cloned().unwrap_or_default(),
            tasks: s.tasks.clone(),
        })
        .collect();
    Ok(net)
}

fn index_stories(stories: &[UserStory]) -> Result<HashMap<&str, &UserStory>, GoalNetError> {
    let mut by_id = HashMap::new();
    for s in stories {
        if by_id.insert(s.id.as_str(), s).is_some() {
            return Err(GoalNetError::DuplicateStory(s.id.clone()));
        }
    }
    for s in stories {
        let Some(p) = &s.parent else { continue };
        if !by_id.contains_key(p.as_str()) {
            return Err(GoalNetError::UnknownParent { id: s.id.clone(), parent: p.clone() });
        }
        let mut seen = BTreeSet::from([s.id.as_str()]);
        let mut cur = p.as_str();
        loop {
            if !seen.insert(cur) {
                return Err(GoalNetError::Cycle(s.id.clone()));
            }
            match by_id.get(cur).and_then(|x| x.parent.as_deref()) {
                Some(next) => cur = next,
                None => break,
            }
        }
        if !(s.id.starts_with(p.as_str()) && s.id.len() > p.len()) {
            return Err(GoalNetError::ParentNotPrefix { id: s.id.clone(), parent: p.clone() });
        }
    }
    Ok(by_id)
}

fn story_depth(story: &UserStory, by_id: &HashMap<&str, &UserStory>) -> u32 {
    let mut depth = 0;
    let mut cur = story;
    while let Some(p) = cur.parent.as_deref() {
        depth += 1;
        cur = by_id[p];
    }
    depth
}

// --- validation -----------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetViolation {
    /// Offending node, transition or card id.
    pub element: String,
    pub message: String,
}

impl fmt::Display for NetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.message)
    }
}

/// Checks levels, arities, reachability and card resolution.
pub fn validate_net(net: &GoalNet) -> Result<(), Vec<NetViolation>> {
    let mut out = Vec::new();
    let mut flag = |element: &str, message: String| out.push(NetViolation { element: element.to_string(), message });

    let mut nodes: HashMap<&str, &GoalNode> = HashMap::new();
    for n in &net.nodes {
        if nodes.insert(&n.id, n).is_some() {
            flag(&n.id, "duplicate node id".into());
        }
    }
    match nodes.get(net.root.as_str()) {
        None => flag(&net.root, "root node missing".into()),
        Some(r) if r.level != 0 || r.parent.is_some() => flag(&r.id, "root must be level 0 without parent".into()),
        _ => {}
    }

    let mut child_count: HashMap<&str, usize> = HashMap::new();
    for n in &net.nodes {
        if n.id != net.root && n.level == 0 {
            flag(&n.id, "only the root may sit at level 0".into());
        }
        let Some(p) = n.parent.as_deref() else { continue };
        *child_count.entry(p).or_default() += 1;
        match nodes.get(p) {
            None => flag(&n.id, format!("parent `{p}` does not exist")),
            Some(parent) if n.cut_across => {
                if parent.kind != NodeKind::Composite || n.level <= parent.level {
                    flag(&n.id, format!("cut-across node must sit below a composite ancestor (parent `{p}`)"));
                }
            }
            Some(parent) if n.level != parent.level + 1 => {
                flag(&n.id, format!("level {} under parent `{p}` at level {}", n.level, parent.level));
            }
            _ => {}
        }
    }
    for n in &net.nodes {
        let kids = child_count.get(n.id.as_str()).copied().unwrap_or(0);
        match n.kind {
            NodeKind::Composite if kids == 0 => flag(&n.id, "composite node without children".into()),
            NodeKind::Atomic if kids > 0 => flag(&n.id, "atomic node with children".into()),
            _ => {}
        }
    }

    for t in &net.transitions {
        let (ins, outs) = (t.inputs.len(), t.outputs.len());
        let arity_ok = match t.kind {
            TransitionKind::Sequence => ins == 1 && outs == 1,
            TransitionKind::Synchronization => ins >= 2 && outs >= 1,
            TransitionKind::Concurrency => ins >= 1 && outs >= 2,
        };
        if !arity_ok {
            flag(&t.id, format!("arity violation: {:?} with {ins} input(s) and {outs} output(s)", t.kind));
        }
        for id in t.inputs.iter().chain(&t.outputs) {
            if !nodes.contains_key(id.as_str()) {
                flag(&t.id, format!("references unknown node `{id}`"));
            }
        }
        for a in &t.inputs {
            for b in &t.outputs {
                let (Some(x), Some(y)) = (nodes.get(a.as_str()), nodes.get(b.as_str())) else { continue };
                if !x.cut_across && !y.cut_across && x.level.abs_diff(y.level) > 1 {
                    flag(&t.id, format!("`{a}` (level {}) → `{b}` (level {}) skips a level", x.level, y.level));
                }
            }
        }
    }

    // reachability over hierarchy and transition edges
    let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
    for n in &net.nodes {
        if let Some(p) = n.parent.as_deref() {
            adjacency.entry(p).or_default().push(&n.id);
        }
    }
    for t in &net.transitions {
        for a in &t.inputs {
            for b in &t.outputs {
                adjacency.entry(a).or_default().push(b);
            }
        }
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut queue = VecDeque::from([net.root.as_str()]);
    while let Some(id) = queue.pop_front() {
        if seen.insert(id) {
            queue.extend(adjacency.get(id).into_iter().flatten().copied());
        }
    }
    for n in &net.nodes {
        if !seen.contains(n.id.as_str()) {
            flag(&n.id, "unreachable from root".into());
        }
    }

    for c in &net.cards {
        if !nodes.contains_key(c.goal_id.as_str()) {
            flag(&c.goal_id, "GET card goal does not resolve".into());
        }
        if c.tasks.is_empty() {
            flag(&c.goal_id, "GET card has no tasks".into());
        }
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

// --- export / import --------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    /// Graphviz DOT.
    Dot,
    /// Lossless JSON.
    Json,
}

pub fn export(net: &GoalNet, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => serde_json::to_string_pretty(net).expect("nets serialize"),
        ExportFormat::Dot => to_dot(net),
    }
}

/// Reads a JSON net and checks that every referenced node exists.
pub fn import(document: &str) -> Result<GoalNet, GoalNetError> {
    let net: GoalNet = serde_json::from_str(document).map_err(|e| GoalNetError::Document(e.to_string()))?;
    let ids: BTreeSet<&str> = net.nodes.iter().map(|n| n.id.as_str()).collect();
    let referenced = std::iter::once(net.root.as_str())
        .chain(net.nodes.iter().filter_map(|n| n.parent.as_deref()))
        .chain(net.transitions.iter().flat_map(|t| t.inputs.iter().chain(&t.outputs)).map(String::as_str))
        .chain(net.cards.iter().map(|c| c.goal_id.as_str()));
    for id in referenced {
        if !ids.contains(id) {
            return Err(GoalNetError::Dangling(id.to_string()));
        }
    }
    Ok(net)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn to_dot(net: &GoalNet) -> String {
    let mut out = String::from("digraph goalnet {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n");
    for n in &net.nodes {
        let (shape, mut style) = match n.kind {
            NodeKind::Composite => ("box", "rounded,bold".to_string()),
            NodeKind::Atomic => ("ellipse", "solid".to_string()),
        };
        if n.cut_across {
            style.push_str(",dashed");
        }
        writeln!(
            out,
            "  {} [label={}, shape={shape}, style={}, level={}];",
            quote(&n.id),
            quote(&n.label),
            quote(&style),
            n.level
        )
        .unwrap();
    }
    for n in &net.nodes {
        if let Some(p) = &n.parent {
            writeln!(out, "  {} -> {} [style=dotted, arrowhead=none, color=gray];", quote(p), quote(&n.id)).unwrap();
        }
    }
    for t in &net.transitions {
        let (label, style) = match t.kind {
            TransitionKind::Sequence => ("sequence", "solid"),
            TransitionKind::Concurrency => ("concurrency", "bold"),
            TransitionKind::Synchronization => ("synchronization", "dashed"),
        };
        writeln!(
            out,
            "  {} [shape=rect, height=0.1, label={}, style={}, kind={label}];",
            quote(&t.id),
            quote(&t.tasks.join("\\n")),
            quote(style)
        )
        .unwrap();
        for i in &t.inputs {
            writeln!(out, "  {} -> {} [style={style}];", quote(i), quote(&t.id)).unwrap();
        }
        for o in &t.outputs {
            writeln!(out, "  {} -> {} [style={style}];", quote(&t.id), quote(o)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn story(id: &str, goal: &str, tasks: &[&str]) -> UserStory {
        UserStory {
            id: id.into(),
            role: "visitor".into(),
            goal: goal.into(),
            benefit: None,
            parent: derived_parent(id).map(str::to_string),
            tasks: tasks.iter().map(|t| t.to_string()).collect(),
        }
    }

    fn spec(goals: &[&str], assignment: &[(&str, &str)]) -> GoalSpec {
        GoalSpec {
            root: "Top".into(),
            goals: goals.iter().map(|g| g.to_string()).collect(),
            assignment: assignment.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            transitions: BTreeMap::new(),
            environment: BTreeMap::new(),
        }
    }

    #[test]
    fn parses_full_template() {
        let s = parse_story(
            "As a visitor, I want to Easily search goods on mobile phones so that I can find my favorite goods with no digital divide",
        )
        .unwrap();
        assert_eq!(s.role, "visitor");
        assert_eq!(s.goal, "Easily search goods on mobile phones");
        assert_eq!(s.benefit.as_deref(), Some("I can find my favorite goods with no digital divide"));
    }

    #[test]
    fn benefit_is_optional_and_keywords_case_insensitive() {
        let s = parse_story("As a customer, I want to pay via mobile phones").unwrap();
        assert_eq!(s.benefit, None);
        assert_eq!(s.goal, "pay via mobile phones");
        let s = parse_story("  as AN   admin,   i WANT to  reset passwords SO THAT users can log in.").unwrap();
        assert_eq!(s.role, "admin");
        assert_eq!(s.goal, "reset passwords");
        assert_eq!(s.benefit.as_deref(), Some("users can log in"));
    }

    #[test]
    fn malformed_stories() {
        assert_eq!(parse_story("I want to pay"), Err(parse_error(0, "expected `As a <role>`")));
        assert!(matches!(parse_story("As a customer who pays"), Err(GoalNetError::Parse { position: 5, .. })));
        assert!(matches!(parse_story("As a , I want to pay"), Err(GoalNetError::Parse { .. })));
        assert!(matches!(parse_story("As a user, I want to "), Err(GoalNetError::Parse { .. })));
    }

    #[test]
    fn minimal_net() {
        let net = build_goal_net(&[story("1", "Pay", &["Build it"])], &spec(&["Flow"], &[("1", "Flow")])).unwrap();
        assert_eq!(net.nodes.len(), 3);
        assert_eq!(net.transitions.len(), 1);
        assert_eq!(net.transitions[0].kind, TransitionKind::Sequence);
        assert_eq!(net.transitions[0].inputs, vec!["goal-1"]);
        assert_eq!(net.transitions[0].outputs, vec!["story-1"]);
        assert_eq!(net.depth(), 3);
        validate_net(&net).unwrap();
    }

    #[test]
    fn sibling_sub_stories_fan_out_and_join() {
        let stories = [story("1", "Search", &[]), story("1.1", "Voice", &["a"]), story("1.2", "Category", &["b"])];
        let net = build_goal_net(&stories, &spec(&["UI"], &[("1", "UI")])).unwrap();
        let kinds: Vec<_> = net.transitions.iter().map(|t| t.kind).collect();
        assert_eq!(kinds, vec![TransitionKind::Sequence, TransitionKind::Concurrency, TransitionKind::Synchronization]);
        let conc = &net.transitions[1];
        assert_eq!(conc.inputs, vec!["story-1"]);
        assert_eq!(conc.outputs, vec!["story-1.1", "story-1.2"]);
        assert_eq!(conc.tasks, vec!["a", "b"]);
        validate_net(&net).unwrap();
    }

    #[test]
    fn override_turns_fan_out_into_sequence() {
        let stories = [story("1", "Search", &[]), story("1.1", "Voice", &["a"]), story("1.2", "Category", &["b"])];
        let mut sp = spec(&["UI"], &[("1", "UI")]);
        sp.transitions.insert("1".into(), SiblingMode::Sequence);
        let net = build_goal_net(&stories, &sp).unwrap();
        assert!(net.transitions.iter().all(|t| t.kind == TransitionKind::Sequence));
        assert_eq!(net.transitions.len(), 3);
        validate_net(&net).unwrap();
    }

    #[test]
    fn build_errors() {
        let s = [story("1", "Search", &[])];
        assert_eq!(build_goal_net(&s, &spec(&["UI"], &[])), Err(GoalNetError::Unassigned("1".into())));
        assert!(matches!(build_goal_net(&s, &spec(&["UI"], &[("1", "Nav")])), Err(GoalNetError::UnknownGoal { .. })));
        let dup = [story("1", "a", &[]), story("1", "b", &[])];
        assert_eq!(build_goal_net(&dup, &spec(&["UI"], &[("1", "UI")])), Err(GoalNetError::DuplicateStory("1".into())));
        let orphan = [story("2.1", "a", &[])];
        assert!(matches!(build_goal_net(&orphan, &spec(&["UI"], &[])), Err(GoalNetError::UnknownParent { .. })));
        let mut a = story("a", "x", &[]);
        let mut b = story("b", "y", &[]);
        a.parent = Some("b".into());
        b.parent = Some("a".into());
        assert_eq!(build_goal_net(&[a, b], &spec(&["UI"], &[])), Err(GoalNetError::Cycle("a".into())));
    }

    #[test]
    fn orphan_node_is_unreachable() {
        let mut net = build_goal_net(&[story("1", "Pay", &["x"])], &spec(&["Flow"], &[("1", "Flow")])).unwrap();
        net.nodes.push(GoalNode {
            id: "stray".into(),
            label: "Stray".into(),
            kind: NodeKind::Atomic,
            level: 1,
            parent: None,
            cut_across: false,
        });
        let errs = validate_net(&net).unwrap_err();
        assert_eq!(errs, vec![NetViolation { element: "stray".into(), message: "unreachable from root".into() }]);
    }

    #[test]
    fn synchronization_needs_two_inputs() {
        let stories = [story("1", "Search", &[]), story("1.1", "Voice", &["a"]), story("1.2", "Category", &["b"])];
        let mut net = build_goal_net(&stories, &spec(&["UI"], &[("1", "UI")])).unwrap();
        let sync = net.transitions.iter_mut().find(|t| t.kind == TransitionKind::Synchronization).unwrap();
        sync.inputs.truncate(1);
        let id = sync.id.clone();
        let errs = validate_net(&net).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].element, id);
        assert!(errs[0].message.starts_with("arity violation"));
    }

    #[test]
    fn cut_across_nodes_may_skip_levels() {
        let stories = [story("1", "Search", &[]), story("1.1", "Voice", &["a"])];
        let mut net = build_goal_net(&stories, &spec(&["UI"], &[("1", "UI")])).unwrap();
        net.nodes.push(GoalNode {
            id: "bugs".into(),
            label: "Bugs obtained".into(),
            kind: NodeKind::Atomic,
            level: 3,
            parent: Some("goal-1".into()),
            cut_across: true,
        });
        validate_net(&net).unwrap();
        net.nodes.last_mut().unwrap().cut_across = false;
        assert!(validate_net(&net).is_err());
    }

    #[test]
    fn root_only_round_trip() {
        let net = GoalNet::with_root("Ship it");
        validate_net(&net).unwrap();
        assert_eq!(import(&export(&net, ExportFormat::Json)).unwrap(), net);
        assert!(export(&net, ExportFormat::Dot).starts_with("digraph goalnet {"));
    }

    #[test]
    fn import_rejects_dangling_reference() {
        let mut net = build_goal_net(&[story("1", "Pay", &["x"])], &spec(&["Flow"], &[("1", "Flow")])).unwrap();
        net.transitions[0].outputs = vec!["ghost".into()];
        let doc = export(&net, ExportFormat::Json);
        assert_eq!(import(&doc), Err(GoalNetError::Dangling("ghost".into())));
        assert!(matches!(import("{not json"), Err(GoalNetError::Document(_))));
    }

    #[test]
    fn corpus_lines() {
        let text = "# shop\n1 As a visitor, I want to search\n1.1 As a visitor, I want to search by voice so that I need not type\n- Investigate   solutions\n- Design UI\nAs a customer, I want to pay\n";
        let stories = parse_corpus(text).unwrap();
        assert_eq!(stories.len(), 3);
        assert_eq!(stories[1].parent.as_deref(), Some("1"));
        assert_eq!(stories[1].tasks, vec!["Investigate solutions", "Design UI"]);
        assert_eq!(stories[2].id, "6");
        assert!(matches!(parse_corpus("- orphan task\n"), Err(GoalNetError::Corpus { line: 1, .. })));
    }

    #[test]
    fn structured_corpus() {
        let text = r#"
[[stories]]
id = "1"
text = "As a visitor, I want to search"

[[stories]]
id = "1.1"
text = "As a visitor, I want to search by voice"
tasks = ["Investigate"]
"#;
        let stories = parse_corpus_document(text, false).unwrap();
        assert_eq!(stories[1].parent.as_deref(), Some("1"));
        assert_eq!(stories[1].tasks, vec!["Investigate"]);
    }

    #[test]
    fn dot_marks_kinds() {
        let stories = [story("1", "Search", &[]), story("1.1", "Voice", &["a"]), story("1.2", "Category", &["b"])];
        let dot = export(&build_goal_net(&stories, &spec(&["UI"], &[("1", "UI")])).unwrap(), ExportFormat::Dot);
        assert!(dot.contains("kind=concurrency"));
        assert!(dot.contains("kind=synchronization"));
        assert!(dot.contains("shape=box, style=\"rounded,bold\""));
        assert!(dot.trim_end().ends_with('}'));
    }
}
