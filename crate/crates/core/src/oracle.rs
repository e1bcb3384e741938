//! Textbook logic-programming semantics computed directly on a ground
//! program, with no justification machinery. Used to cross-check the engine.
//!
//! Open atoms assigned `true` act as facts; open atoms assigned `false` or
//! left unassigned have no rules.

use std::collections::{BTreeMap, BTreeSet};

use crate::branch::BranchEvaluation;
use crate::program::{Literal, Program};
use crate::semantics::{Outcome, TruthValue};

#[derive(Clone, Debug)]
struct NormalRule {
    head: usize,
    pos: Vec<usize>,
    neg: Vec<usize>,
}

/// A ground propositional program over the non-open atoms.
#[derive(Clone, Debug)]
pub struct Normal {
    atoms: Vec<String>,
    rules: Vec<NormalRule>,
}

impl Normal {
    pub fn new(program: &Program, opens: &BTreeMap<String, bool>) -> Normal {
        let atoms: BTreeSet<String> = program
            .ground_atoms()
            .into_iter()
            .filter(|a| !program.is_open(a))
            .map(|a| a.to_string())
            .collect();
        let atoms: Vec<String> = atoms.into_iter().collect();
        let index = |name: &str| atoms.binary_search_by(|a| a.as_str().cmp(name)).ok();
        let mut rules = Vec::new();
        'rules: for rule in &program.rules {
            let head = index(&rule.head.to_string()).expect("heads are not open");
            let mut out = NormalRule {
                head,
                pos: Vec::new(),
                neg: Vec::new(),
            };
            for lit in &rule.body {
                match lit {
                    Literal::True => {}
                    Literal::False => continue 'rules,
                    Literal::Pos(a) | Literal::Neg(a) if program.is_open(a) => {
                        let value = opens.get(&a.to_string()).copied().unwrap_or(false);
                        if value != matches!(lit, Literal::Pos(_)) {
                            continue 'rules;
                        }
                    }
                    Literal::Pos(a) => out.pos.push(index(&a.to_string()).expect("interned")),
                    Literal::Neg(a) => out.neg.push(index(&a.to_string()).expect("interned")),
                }
            }
            rules.push(out);
        }
        Normal { atoms, rules }
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Least model of the positive program obtained by deleting every rule
    /// with a negated atom in `assumed` and every remaining negation.
    fn reduct_least_model(&self, assumed: &[bool]) -> Vec<bool> {
        let mut model = vec![false; self.atoms.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for r in &self.rules {
                if !model[r.head] && r.neg.iter().all(|&n| !assumed[n]) && r.pos.iter().all(|&p| model[p]) {
                    model[r.head] = true;
                    changed = true;
                }
            }
        }
        model
    }

    /// Immediate consequence operator.
    fn tp(&self, interp: &[bool]) -> Vec<bool> {
        let mut out = vec![false; self.atoms.len()];
        for r in &self.rules {
            if r.pos.iter().all(|&p| interp[p]) && r.neg.iter().all(|&n| !interp[n]) {
                out[r.head] = true;
            }
        }
        out
    }

    fn subsets(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let n = self.atoms.len();
        (0..1u64 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
    }

    fn names(&self, set: &[bool]) -> BTreeSet<String> {
        set.iter()
            .zip(&self.atoms)
            .filter(|(&b, _)| b)
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// Gelfond-Lifschitz: `M` is stable iff it is the least model of its reduct.
    pub fn stable_models(&self) -> Vec<BTreeSet<String>> {
        let mut out: Vec<_> = self
            .subsets()
            .filter(|m| &self.reduct_least_model(m) == m)
            .map(|m| self.names(&m))
            .collect();
        out.sort();
        out
    }

    /// Fixpoints of the immediate consequence operator.
    pub fn supported_models(&self) -> Vec<BTreeSet<String>> {
        let mut out: Vec<_> = self
            .subsets()
            .filter(|m| &self.tp(m) == m)
            .map(|m| self.names(&m))
            .collect();
        out.sort();
        out
    }

    /// Alternating fixpoint: true atoms are the least fixpoint of the square
    /// of the reduct operator, false atoms those outside one more application.
    pub fn well_founded(&self) -> BTreeMap<String, TruthValue> {
        let mut truth = vec![false; self.atoms.len()];
        loop {
            let next = self.reduct_least_model(&self.reduct_least_model(&truth));
            if next == truth {
                break;
            }
            truth = next;
        }
        let possible = self.reduct_least_model(&truth);
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let v = if truth[i] {
                    TruthValue::True
                } else if !possible[i] {
                    TruthValue::False
                } else {
                    TruthValue::Unknown
                };
                (a.clone(), v)
            })
            .collect()
    }

    /// Least three-valued fixpoint of the Fitting operator.
    pub fn kripke_kleene(&self) -> BTreeMap<String, TruthValue> {
        let n = self.atoms.len();
        let mut values = vec![TruthValue::Unknown; n];
        let body = |r: &NormalRule, values: &[TruthValue]| {
            let lits = r
                .pos
                .iter()
                .map(|&p| values[p])
                .chain(r.neg.iter().map(|&q| values[q].negate()));
            // strong Kleene conjunction
            lits.fold(TruthValue::True, |acc, v| match (acc, v) {
                (TruthValue::False, _) | (_, TruthValue::False) => TruthValue::False,
                (TruthValue::Unknown, _) | (_, TruthValue::Unknown) => TruthValue::Unknown,
                _ => TruthValue::True,
            })
        };
        loop {
            let mut next = vec![TruthValue::False; n];
            for r in &self.rules {
                let b = body(r, &values);
                next[r.head] = match (next[r.head], b) {
                    (TruthValue::True, _) | (_, TruthValue::True) => TruthValue::True,
                    (TruthValue::Unknown, _) | (_, TruthValue::Unknown) => TruthValue::Unknown,
                    _ => TruthValue::False,
                };
            }
            if next == values {
                break;
            }
            values = next;
        }
        self.atoms.iter().cloned().zip(values).collect()
    }
}

pub fn oracle_outcome(program: &Program, be: BranchEvaluation, opens: &BTreeMap<String, bool>) -> Outcome {
    let normal = Normal::new(program, opens);
    match be {
        BranchEvaluation::WellFounded => Outcome::Model(normal.well_founded()),
        BranchEvaluation::KripkeKleene => Outcome::Model(normal.kripke_kleene()),
        BranchEvaluation::Stable => Outcome::Models(normal.stable_models()),
        BranchEvaluation::Completion => Outcome::Models(normal.supported_models()),
    }
}
