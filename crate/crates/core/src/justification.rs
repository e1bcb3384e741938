//! Justifications viewed as graphs, and the set of values their branches
//! take under a branch evaluation.
//!
//! Branches are infinite objects, but the set of values they evaluate to is
//! finite. Every infinite branch eventually stays inside one strongly
//! connected component of the justification graph, so cycle structure per
//! component (and per sign) is enough to decide which loop values occur.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::branch::BranchEvaluation;
use crate::fact::{Fact, Sign};
use crate::frame::{Frame, RuleId};
use crate::scc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JustificationError {
    #[error("start fact {0} has no chosen rule")]
    StartUnmapped(String),
    #[error("justification is not locally complete: {0} is reachable but has no chosen rule")]
    NotLocallyComplete(String),
}

/// At most one chosen rule per defined fact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Justification {
    choice: BTreeMap<Fact, RuleId>,
}

impl Justification {
    pub fn new() -> Self {
        Self::default()
    }

    /// Picks the given rules; a later rule for the same head replaces an earlier one.
    pub fn from_rules(frame: &Frame, rules: impl IntoIterator<Item = RuleId>) -> Self {
        let mut j = Self::new();
        for id in rules {
            j.choose(frame, id);
        }
        j
    }

    pub fn choose(&mut self, frame: &Frame, id: RuleId) -> Option<RuleId> {
        self.choice.insert(frame.rule(id).head, id)
    }

    pub fn unchoose(&mut self, fact: Fact) -> Option<RuleId> {
        self.choice.remove(&fact)
    }

    pub fn get(&self, fact: Fact) -> Option<RuleId> {
        self.choice.get(&fact).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Fact, RuleId)> + '_ {
        self.choice.iter().map(|(&f, &r)| (f, r))
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }
}

/// The part of a justification graph reachable from one start fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachableGraph {
    /// Reachable facts in intern order.
    pub nodes: Vec<Fact>,
    /// `head -> body member` edges, sorted.
    pub edges: Vec<(Fact, Fact)>,
    /// Reachable open or logical facts.
    pub sinks: Vec<Fact>,
}

/// Local adjacency over the reachable nodes.
struct Local {
    nodes: Vec<Fact>,
    adj: Vec<Vec<usize>>,
    defined: Vec<bool>,
}

fn explore(frame: &Frame, j: &Justification, start: Fact) -> Result<Local, JustificationError> {
    if j.get(start).is_none() {
        return Err(JustificationError::StartUnmapped(frame.name(start)));
    }
    let mut ids: HashMap<Fact, usize> = HashMap::new();
    let mut nodes = vec![start];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut defined = vec![true];
    ids.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let fact = nodes[v];
        if !defined[v] {
            continue;
        }
        let rule = j
            .get(fact)
            .ok_or_else(|| JustificationError::NotLocallyComplete(frame.name(fact)))?;
        for &b in &frame.rule(rule).body {
            let w = *ids.entry(b).or_insert_with(|| {
                nodes.push(b);
                adj.push(Vec::new());
                defined.push(frame.is_defined(b));
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            adj[v].push(w);
        }
    }
    Ok(Local { nodes, adj, defined })
}

impl Local {
    /// Adjacency restricted to nodes satisfying `keep`.
    fn induced(&self, keep: impl Fn(usize) -> bool) -> Vec<Vec<usize>> {
        (0..self.nodes.len())
            .map(|v| {
                if keep(v) {
                    self.adj[v].iter().copied().filter(|&w| keep(w)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect()
    }

    fn sign(&self, v: usize) -> Option<Sign> {
        self.nodes[v].sign()
    }
}

pub fn reachable_graph(frame: &Frame, j: &Justification, start: Fact) -> Result<ReachableGraph, JustificationError> {
    let local = explore(frame, j, start)?;
    let mut nodes = local.nodes.clone();
    nodes.sort();
    let mut edges: Vec<(Fact, Fact)> = local
        .adj
        .iter()
        .enumerate()
        .flat_map(|(v, ws)| ws.iter().map(move |&w| (v, w)))
        .map(|(v, w)| (local.nodes[v], local.nodes[w]))
        .collect();
    edges.sort();
    let sinks = nodes.iter().copied().filter(|&f| !frame.is_defined(f)).collect();
    Ok(ReachableGraph { nodes, edges, sinks })
}

/// Every defined fact reachable from `start` has a chosen rule.
pub fn is_locally_complete(frame: &Frame, j: &Justification, start: Fact) -> Result<bool, JustificationError> {
    match explore(frame, j, start) {
        Ok(_) => Ok(true),
        Err(JustificationError::NotLocallyComplete(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The set of values of all branches of `j` starting at `start`.
pub fn branch_values(
    frame: &Frame,
    j: &Justification,
    start: Fact,
    be: BranchEvaluation,
) -> Result<BTreeSet<Fact>, JustificationError> {
    let local = explore(frame, j, start)?;
    let n = local.nodes.len();
    let mut out = BTreeSet::new();
    match be {
        BranchEvaluation::Completion => {
            out.extend(local.adj[0].iter().map(|&w| local.nodes[w]));
        }
        BranchEvaluation::KripkeKleene => {
            out.extend((0..n).filter(|&v| !local.defined[v]).map(|v| local.nodes[v]));
            if scc::has_cycle(&local.adj) {
                out.insert(Fact::UNKNOWN);
            }
        }
        BranchEvaluation::WellFounded => {
            out.extend((0..n).filter(|&v| !local.defined[v]).map(|v| local.nodes[v]));
            let neg = local.induced(|v| local.defined[v] && local.sign(v) == Some(Sign::Negative));
            if scc::has_cycle(&neg) {
                out.insert(Fact::TRUE);
            }
            let pos = local.induced(|v| local.defined[v] && local.sign(v) == Some(Sign::Positive));
            if scc::has_cycle(&pos) {
                out.insert(Fact::FALSE);
            }
            let mixed = scc::tarjan(&local.adj).into_iter().any(|comp| {
                scc::is_cyclic(&local.adj, &comp)
                    && comp.iter().any(|&v| local.sign(v) == Some(Sign::Positive))
                    && comp.iter().any(|&v| local.sign(v) == Some(Sign::Negative))
            });
            if mixed {
                out.insert(Fact::UNKNOWN);
            }
        }
        BranchEvaluation::Stable => {
            let sign = start.sign();
            let same = |v: usize| local.defined[v] && local.sign(v) == sign;
            // same-sign defined nodes reachable from the start without leaving the sign
            let mut region = vec![false; n];
            region[0] = true;
            let mut stack = vec![0];
            while let Some(v) = stack.pop() {
                for &w in &local.adj[v] {
                    if same(w) {
                        if !region[w] {
                            region[w] = true;
                            stack.push(w);
                        }
                    } else {
                        out.insert(local.nodes[w]);
                    }
                }
            }
            if scc::has_cycle(&local.induced(|v| region[v])) {
                out.insert(match sign {
                    Some(Sign::Negative) => Fact::TRUE,
                    _ => Fact::FALSE,
                });
            }
        }
    }
    Ok(out)
}

/// A finite path through a justification graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPrefix {
    pub facts: Vec<Fact>,
    /// The path ends in an open or logical fact; otherwise it was cut at `max_len`.
    pub ended_at_sink: bool,
}

/// All paths from `start` with at most `max_len` facts that either end in a
/// sink or reach exactly `max_len` facts. Depth-first, body order.
pub fn enumerate_branch_prefixes(
    frame: &Frame,
    j: &Justification,
    start: Fact,
    max_len: usize,
) -> Result<Vec<BranchPrefix>, JustificationError> {
    explore(frame, j, start)?;
    let mut out = Vec::new();
    if max_len == 0 {
        return Ok(out);
    }
    let mut path = vec![start];
    fn walk(frame: &Frame, j: &Justification, path: &mut Vec<Fact>, max_len: usize, out: &mut Vec<BranchPrefix>) {
        let last = *path.last().expect("path is non-empty");
        if !frame.is_defined(last) {
            out.push(BranchPrefix {
                facts: path.clone(),
                ended_at_sink: true,
            });
            return;
        }
        if path.len() == max_len {
            out.push(BranchPrefix {
                facts: path.clone(),
                ended_at_sink: false,
            });
            return;
        }
        let rule = j.get(last).expect("explored justification is locally complete");
        for &b in &frame.rule(rule).body {
            path.push(b);
            walk(frame, j, path, max_len, out);
            path.pop();
        }
    }
    walk(frame, j, &mut path, max_len, &mut out);
    Ok(out)
}
