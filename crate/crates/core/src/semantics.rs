//! Support operators, their fixpoints, and the four semantics built on them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::BranchEvaluation;
use crate::fact::{Atom, Fact, Sign, Symbols};
use crate::frame::Frame;
use crate::interp::Interpretation;
use crate::par::{self, Exec};
use crate::program::OpenAssignment;
use crate::support;

/// Enumeration refuses frames with more defined atoms than this.
pub const MAX_ENUMERATED_ATOMS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("both {0} and its negation are supported in a consistent interpretation")]
    DefectDetected(String),
    #[error("{0} defined atoms is too many to enumerate models")]
    TooManyAtoms(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthValue {
    True,
    False,
    Unknown,
}

impl TruthValue {
    pub fn negate(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Unknown => TruthValue::Unknown,
        }
    }
}

/// Atom-wise reading of a fact set: true iff `x` is in it, false iff `~x` is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeValuedModel {
    values: BTreeMap<Atom, TruthValue>,
}

impl ThreeValuedModel {
    pub fn from_facts(frame: &Frame, facts: &Interpretation) -> Self {
        let values = frame
            .symbols()
            .atoms()
            .map(|a| {
                let v = match (facts.contains(Fact::pos(a)), facts.contains(Fact::neg(a))) {
                    (true, false) => TruthValue::True,
                    (false, true) => TruthValue::False,
                    _ => TruthValue::Unknown,
                };
                (a, v)
            })
            .collect();
        ThreeValuedModel { values }
    }

    pub fn value(&self, atom: Atom) -> TruthValue {
        self.values.get(&atom).copied().unwrap_or(TruthValue::Unknown)
    }

    /// Value of a literal or logical fact.
    pub fn fact_value(&self, fact: Fact) -> TruthValue {
        match fact {
            Fact::Literal(a, Sign::Positive) => self.value(a),
            Fact::Literal(a, Sign::Negative) => self.value(a).negate(),
            Fact::TRUE => TruthValue::True,
            Fact::FALSE => TruthValue::False,
            Fact::Logical(_) => TruthValue::Unknown,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, TruthValue)> + '_ {
        self.values.iter().map(|(&a, &v)| (a, v))
    }

    pub fn named(&self, symbols: &Symbols) -> BTreeMap<String, TruthValue> {
        self.iter().map(|(a, v)| (symbols.name(a).to_owned(), v)).collect()
    }
}

/// Contains `t` and exactly one of `x`, `~x` for every defined atom; open
/// atoms follow the supplied assignment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TotalInterpretation(Interpretation);

impl TotalInterpretation {
    pub fn facts(&self) -> &Interpretation {
        &self.0
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.0.iter().filter_map(|f| match f {
            Fact::Literal(a, Sign::Positive) => Some(a),
            _ => None,
        })
    }
}

/// `{x defined : x is supported in interp}`.
pub fn support_operator(frame: &Frame, be: BranchEvaluation, interp: &Interpretation) -> Interpretation {
    support::solve(frame, be, interp).interpretation()
}

/// Least fixpoint of `I ↦ I ∪ support(I)` above `start`.
pub fn extended_lfp(frame: &Frame, be: BranchEvaluation, start: &Interpretation) -> Interpretation {
    let mut current = start.clone();
    loop {
        let next = current.union(&support_operator(frame, be, &current));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// `{t}` plus the literal chosen for each assigned open atom.
pub fn initial(opens: &OpenAssignment) -> Interpretation {
    let mut interp = Interpretation::truth();
    interp.extend(opens.iter().map(|(&a, &v)| if v { Fact::pos(a) } else { Fact::neg(a) }));
    interp
}

/// Positive facts `x` such that both `x` and `~x` are in `supported`.
pub fn defects(supported: &Interpretation) -> Vec<Fact> {
    supported
        .iter()
        .filter(|f| f.sign() == Some(Sign::Positive) && supported.contains(f.negate()))
        .collect()
}

pub fn three_valued_model(frame: &Frame, be: BranchEvaluation, opens: &OpenAssignment) -> ThreeValuedModel {
    ThreeValuedModel::from_facts(frame, &extended_lfp(frame, be, &initial(opens)))
}

pub fn wf_model(frame: &Frame, opens: &OpenAssignment) -> ThreeValuedModel {
    three_valued_model(frame, BranchEvaluation::WellFounded, opens)
}

pub fn kk_model(frame: &Frame, opens: &OpenAssignment) -> ThreeValuedModel {
    three_valued_model(frame, BranchEvaluation::KripkeKleene, opens)
}

/// Atoms whose positive literal is defined, in intern order.
pub fn defined_atoms(frame: &Frame) -> Vec<Atom> {
    frame
        .symbols()
        .atoms()
        .filter(|&a| frame.is_defined(Fact::pos(a)))
        .collect()
}

/// Total interpretations `M` whose defined members are exactly the defined
/// facts supported in `M`. Candidates run over all sign choices for the
/// defined atoms in binary-counter order (first atom fastest).
pub fn models(
    frame: &Frame,
    be: BranchEvaluation,
    opens: &OpenAssignment,
    exec: Exec,
) -> Result<Vec<TotalInterpretation>, SemanticsError> {
    let atoms = defined_atoms(frame);
    if atoms.len() > MAX_ENUMERATED_ATOMS {
        return Err(SemanticsError::TooManyAtoms(atoms.len()));
    }
    let base = initial(opens);
    let checked = par::map_range(exec, 1usize << atoms.len(), |bits| {
        let mut candidate = base.clone();
        for (i, &a) in atoms.iter().enumerate() {
            candidate.insert(if bits >> i & 1 == 1 { Fact::pos(a) } else { Fact::neg(a) });
        }
        let supported = support_operator(frame, be, &candidate);
        if let Some(&x) = defects(&supported).first() {
            return Err(SemanticsError::DefectDetected(frame.name(x)));
        }
        let claimed = candidate.iter().filter(|&f| frame.is_defined(f));
        Ok(claimed.eq(supported.iter()).then_some(TotalInterpretation(candidate)))
    });
    let mut out = Vec::new();
    for result in checked {
        if let Some(model) = result? {
            out.push(model);
        }
    }
    Ok(out)
}

pub fn stable_models(frame: &Frame, opens: &OpenAssignment) -> Result<Vec<TotalInterpretation>, SemanticsError> {
    models(frame, BranchEvaluation::Stable, opens, Exec::default())
}

pub fn supported_models(frame: &Frame, opens: &OpenAssignment) -> Result<Vec<TotalInterpretation>, SemanticsError> {
    models(frame, BranchEvaluation::Completion, opens, Exec::default())
}

/// A semantics result in a shape both the engine and the classical oracles
/// produce: one three-valued model, or the list of total models given by
/// their true atoms. Only non-open atoms are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Outcome {
    Model(BTreeMap<String, TruthValue>),
    Models(Vec<BTreeSet<String>>),
}

/// Runs `be`'s semantics on `frame` and normalises the result.
pub fn engine_outcome(
    frame: &Frame,
    be: BranchEvaluation,
    opens: &OpenAssignment,
    exec: Exec,
) -> Result<Outcome, SemanticsError> {
    let symbols = frame.symbols();
    let defined = defined_atoms(frame);
    if be.is_three_valued() {
        let model = three_valued_model(frame, be, opens);
        return Ok(Outcome::Model(
            defined
                .iter()
                .map(|&a| (symbols.name(a).to_owned(), model.value(a)))
                .collect(),
        ));
    }
    let mut sets: Vec<BTreeSet<String>> = models(frame, be, opens, exec)?
        .iter()
        .map(|m| {
            m.true_atoms()
                .filter(|a| defined.contains(a))
                .map(|a| symbols.name(a).to_owned())
                .collect()
        })
        .collect();
    sets.sort();
    Ok(Outcome::Models(sets))
}
