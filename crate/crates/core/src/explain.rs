//! Witness justifications packaged as explanation graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::branch::BranchEvaluation;
use crate::fact::Fact;
use crate::frame::Frame;
use crate::interp::Interpretation;
use crate::justification::{self, Justification};
use crate::support;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExplainError {
    #[error("{0} is not supported")]
    NotSupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Explanation {
    pub root: Fact,
    /// The witness, restricted to the facts reachable from `root`.
    pub justification: Justification,
    /// Reachable facts in intern order.
    pub nodes: Vec<Fact>,
    /// `head -> body member` edges in intern order.
    pub edges: Vec<(Fact, Fact)>,
    /// Values of the branches starting at `root`.
    pub values: BTreeSet<Fact>,
    names: Vec<String>,
}

pub fn explain(frame: &Frame, be: BranchEvaluation, interp: &Interpretation, x: Fact) -> Result<Explanation, ExplainError> {
    let witness = support::solve(frame, be, interp)
        .witness(frame, x)
        .ok_or_else(|| ExplainError::NotSupported(frame.name(x)))?;
    Ok(from_justification(frame, be, &witness, x))
}

/// Packages a locally complete justification. Panics if `j` does not map `root`
/// or is not locally complete from it.
pub fn from_justification(frame: &Frame, be: BranchEvaluation, j: &Justification, root: Fact) -> Explanation {
    let graph = justification::reachable_graph(frame, j, root).expect("locally complete witness");
    let values = justification::branch_values(frame, j, root, be).expect("locally complete witness");
    let mut restricted = Justification::new();
    for &f in &graph.nodes {
        if let Some(rule) = j.get(f) {
            restricted.choose(frame, rule);
        }
    }
    Explanation {
        root,
        justification: restricted,
        names: graph.nodes.iter().map(|&f| frame.name(f)).collect(),
        nodes: graph.nodes,
        edges: graph.edges,
        values,
    }
}

impl Explanation {
    fn position(&self, fact: Fact) -> usize {
        self.nodes.binary_search(&fact).expect("edge endpoints are nodes")
    }

    pub fn name(&self, fact: Fact) -> &str {
        &self.names[self.position(fact)]
    }

    pub fn node_names(&self) -> &[String] {
        &self.names
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn export_dot(e: &Explanation) -> String {
    let mut out = String::from("digraph justification {\n");
    for (k, name) in e.names.iter().enumerate() {
        let _ = writeln!(out, "  n{k} [label={}];", quote(name));
    }
    for &(from, to) in &e.edges {
        let _ = writeln!(out, "  n{} -> n{};", e.position(from), e.position(to));
    }
    out.push_str("}\n");
    out
}

/// `{"edges": [[from, to], ...], "nodes": [...], "root": ...}` using fact names.
pub fn to_json_value(e: &Explanation) -> serde_json::Value {
    let edges: Vec<[&str; 2]> = e.edges.iter().map(|&(a, b)| [e.name(a), e.name(b)]).collect();
    serde_json::json!({
        "root": e.name(e.root),
        "nodes": e.names,
        "edges": edges,
    })
}

pub fn export_json(e: &Explanation) -> String {
    to_json_value(e).to_string()
}
