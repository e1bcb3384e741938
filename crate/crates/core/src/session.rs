//! Counterfactual relevance of open facts and the decision-session state machine.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::branch::BranchEvaluation;
use crate::explain;
use crate::fact::{Atom, Fact};
use crate::frame::Frame;
use crate::par::{self, Exec};
use crate::program::{self, OpenAssignment, OpensError};
use crate::semantics::{self, ThreeValuedModel, TruthValue};

pub const DEFAULT_OPEN_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error("{0} is not an open fact")]
    NotOpen(String),
    #[error("unknown fact {0}")]
    UnknownFact(String),
    #[error("{count} unanswered open facts exceeds the cap of {cap}")]
    TooManyOpens { count: usize, cap: usize },
}

impl From<OpensError> for SessionError {
    fn from(e: OpensError) -> Self {
        match e {
            OpensError::NotOpen(name) => SessionError::NotOpen(name),
            OpensError::UnknownFact(name) | OpensError::Malformed(name) => SessionError::UnknownFact(name),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    True,
    False,
    Unknown,
    Open,
}

impl From<TruthValue> for Status {
    fn from(v: TruthValue) -> Self {
        match v {
            TruthValue::True => Status::True,
            TruthValue::False => Status::False,
            TruthValue::Unknown => Status::Unknown,
        }
    }
}

/// Three-valued models for every total completion of an answer map. Entry
/// `bits` sets the `i`-th unanswered open to `bits >> i & 1`.
#[derive(Clone, Debug)]
pub struct Completions {
    pub unanswered: Vec<Atom>,
    pub models: Vec<ThreeValuedModel>,
}

pub fn completions(
    frame: &Frame,
    be: BranchEvaluation,
    answered: &OpenAssignment,
    cap: usize,
    exec: Exec,
) -> Result<Completions, SessionError> {
    let unanswered: Vec<Atom> = frame
        .symbols()
        .atoms()
        .filter(|&a| frame.is_open(Fact::pos(a)) && !answered.contains_key(&a))
        .collect();
    if unanswered.len() > cap {
        return Err(SessionError::TooManyOpens {
            count: unanswered.len(),
            cap,
        });
    }
    let models = par::map_range(exec, 1usize << unanswered.len(), |bits| {
        let mut total = answered.clone();
        for (i, &a) in unanswered.iter().enumerate() {
            total.insert(a, bits >> i & 1 == 1);
        }
        semantics::three_valued_model(frame, be, &total)
    });
    Ok(Completions { unanswered, models })
}

impl Completions {
    pub fn statuses(&self, query: Fact) -> Vec<TruthValue> {
        self.models.iter().map(|m| m.fact_value(query)).collect()
    }

    pub fn decided(&self, query: Fact) -> Status {
        let statuses = self.statuses(query);
        match statuses.split_first() {
            Some((&first, rest)) if rest.iter().all(|&s| s == first) => first.into(),
            _ => Status::Open,
        }
    }

    /// Unanswered opens whose flip alone changes the query's status in some
    /// completion.
    pub fn relevant(&self, query: Fact) -> BTreeSet<Fact> {
        let statuses = self.statuses(query);
        self.unanswered
            .iter()
            .enumerate()
            .filter(|&(i, _)| {
                (0..statuses.len())
                    .filter(|bits| bits >> i & 1 == 0)
                    .any(|bits| statuses[bits] != statuses[bits | 1 << i])
            })
            .map(|(_, &a)| Fact::pos(a))
            .collect()
    }
}

pub fn decided(frame: &Frame, be: BranchEvaluation, answered: &OpenAssignment, query: Fact) -> Result<Status, SessionError> {
    Ok(completions(frame, be, answered, DEFAULT_OPEN_CAP, Exec::default())?.decided(query))
}

pub fn relevant_opens(
    frame: &Frame,
    be: BranchEvaluation,
    answered: &OpenAssignment,
    query: Fact,
) -> Result<BTreeSet<Fact>, SessionError> {
    Ok(completions(frame, be, answered, DEFAULT_OPEN_CAP, Exec::default())?.relevant(query))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryView {
    pub fact: String,
    pub status: Status,
    pub relevant_opens: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanation: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Answer(String, bool),
    Retract(String),
    AddQuery(String),
}

/// An immutable session value; `session_step` returns a new one.
#[derive(Clone, Debug)]
pub struct SessionState {
    frame: Arc<Frame>,
    be: BranchEvaluation,
    answered: OpenAssignment,
    queries: Vec<Fact>,
    views: Vec<QueryView>,
}

impl SessionState {
    pub fn new(
        frame: Arc<Frame>,
        be: BranchEvaluation,
        answered: OpenAssignment,
        queries: Vec<Fact>,
    ) -> Result<SessionState, SessionError> {
        for &a in answered.keys() {
            if !frame.is_open(Fact::pos(a)) {
                return Err(SessionError::NotOpen(frame.symbols().name(a).to_owned()));
            }
        }
        let mut unique = Vec::new();
        for q in queries {
            if q.is_logical() {
                return Err(SessionError::UnknownFact(frame.name(q)));
            }
            if !unique.contains(&q) {
                unique.push(q);
            }
        }
        let views = compute_views(&frame, be, &answered, &unique)?;
        Ok(SessionState {
            frame,
            be,
            answered,
            queries: unique,
            views,
        })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn evaluation(&self) -> BranchEvaluation {
        self.be
    }

    pub fn answered(&self) -> &OpenAssignment {
        &self.answered
    }

    pub fn queries(&self) -> &[Fact] {
        &self.queries
    }

    pub fn views(&self) -> &[QueryView] {
        &self.views
    }

    pub fn answered_named(&self) -> BTreeMap<String, bool> {
        self.answered
            .iter()
            .map(|(&a, &v)| (self.frame.symbols().name(a).to_owned(), v))
            .collect()
    }

    pub fn query_names(&self) -> Vec<String> {
        self.queries.iter().map(|&q| self.frame.name(q)).collect()
    }

    /// `{answered, queries, semantics}` as served to clients.
    pub fn view_json(&self) -> serde_json::Value {
        serde_json::json!({
            "answered": self.answered_named(),
            "queries": self.views,
            "semantics": self.be.name(),
        })
    }

    pub fn resolve_fact(&self, name: &str) -> Result<Fact, SessionError> {
        resolve_query(&self.frame, name)
    }
}

pub fn resolve_query(frame: &Frame, name: &str) -> Result<Fact, SessionError> {
    let canonical = canonical_fact_name(name);
    match frame.symbols().parse_fact(&canonical) {
        Some(f) if !f.is_logical() => Ok(f),
        _ => Err(SessionError::UnknownFact(name.to_owned())),
    }
}

/// Normalises spacing inside an atom's argument list so `path(a, c)` finds
/// `path(a,c)`.
fn canonical_fact_name(name: &str) -> String {
    let trimmed = name.trim();
    let (prefix, rest) = if let Some(rest) = trimmed.strip_prefix('~') {
        ("~", rest)
    } else if let Some(rest) = trimmed.strip_prefix("not ") {
        ("~", rest)
    } else {
        ("", trimmed)
    };
    match program::parse_atom(rest.trim()) {
        Ok(atom) => format!("{prefix}{atom}"),
        Err(_) => trimmed.to_owned(),
    }
}

fn compute_views(
    frame: &Frame,
    be: BranchEvaluation,
    answered: &OpenAssignment,
    queries: &[Fact],
) -> Result<Vec<QueryView>, SessionError> {
    if queries.is_empty() {
        return Ok(Vec::new());
    }
    let table = completions(frame, be, answered, DEFAULT_OPEN_CAP, Exec::default())?;
    let pessimistic = semantics::extended_lfp(frame, be, &semantics::initial(answered));
    Ok(queries
        .iter()
        .map(|&q| {
            let status = table.decided(q);
            let target = match status {
                Status::True => Some(q),
                Status::False => Some(q.negate()),
                _ => None,
            };
            let explanation = target
                .filter(|&t| frame.is_defined(t))
                .and_then(|t| explain::explain(frame, be, &pessimistic, t).ok())
                .map(|e| explain::to_json_value(&e));
            let relevant_opens = if status == Status::Open {
                table.relevant(q).into_iter().map(|f| frame.name(f)).collect()
            } else {
                Vec::new()
            };
            QueryView {
                fact: frame.name(q),
                status,
                relevant_opens,
                explanation,
            }
        })
        .collect())
}

pub fn session_step(state: &SessionState, action: &Action) -> Result<SessionState, SessionError> {
    let mut answered = state.answered.clone();
    let mut queries = state.queries.clone();
    match action {
        Action::Answer(name, value) => {
            let atom = program::resolve_open(&state.frame, &canonical_fact_name(name))?;
            answered.insert(atom, *value);
        }
        Action::Retract(name) => {
            let atom = program::resolve_open(&state.frame, &canonical_fact_name(name))?;
            answered.remove(&atom);
        }
        Action::AddQuery(name) => queries.push(state.resolve_fact(name)?),
    }
    SessionState::new(state.frame.clone(), state.be, answered, queries)
}
