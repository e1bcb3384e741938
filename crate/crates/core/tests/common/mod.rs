//! Random instance generators and definition-level oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use jfy_core::branch::BranchEvaluation;
use jfy_core::justification::{self, Justification};
use jfy_core::{Fact, Frame, Interpretation, Rule, Sign, Symbols};
use rand::seq::IndexedRandom;
use rand::Rng;

/// A frame with arbitrary signed heads (not necessarily complemented).
/// Each atom is open with probability 1/4; otherwise each of its literals is
/// defined with probability 4/5 by one to three rules.
pub fn random_frame(rng: &mut impl Rng, max_atoms: usize) -> Frame {
    let n = rng.random_range(1..=max_atoms);
    let mut symbols = Symbols::new();
    let atoms: Vec<_> = (0..n).map(|i| symbols.intern(&format!("x{i}"))).collect();
    let mut pool: Vec<Fact> = atoms.iter().flat_map(|&a| [Fact::pos(a), Fact::neg(a)]).collect();
    pool.extend([Fact::TRUE, Fact::FALSE, Fact::UNKNOWN]);
    let mut rules = Vec::new();
    for &a in &atoms {
        if rng.random_bool(0.25) {
            continue;
        }
        for head in [Fact::pos(a), Fact::neg(a)] {
            if !rng.random_bool(0.8) {
                continue;
            }
            for _ in 0..rng.random_range(1..=3) {
                let len = rng.random_range(1..=3);
                let body: Vec<Fact> = (0..len).map(|_| *pool.choose(rng).unwrap()).collect();
                rules.push(Rule::new(head, body));
            }
        }
    }
    Frame::build(symbols, rules).expect("generated rules are well formed")
}

/// Any subset of the frame's facts, logical ones included.
pub fn random_interpretation(rng: &mut impl Rng, frame: &Frame) -> Interpretation {
    let p = rng.random_range(0.2..0.8);
    frame.facts().filter(|_| rng.random_bool(p)).collect()
}

/// One random rule for every defined fact.
pub fn random_justification(rng: &mut impl Rng, frame: &Frame) -> Justification {
    let rules: Vec<_> = frame
        .defined()
        .map(|f| *frame.rules_for(f).choose(rng).unwrap())
        .collect();
    Justification::from_rules(frame, rules)
}

fn sign(f: Fact) -> Option<Sign> {
    f.sign()
}

/// Value of a finite branch, straight from the definitions.
pub fn eval_finite(be: BranchEvaluation, path: &[Fact]) -> Fact {
    let last = *path.last().unwrap();
    match be {
        BranchEvaluation::WellFounded | BranchEvaluation::KripkeKleene => last,
        BranchEvaluation::Completion => path[1],
        BranchEvaluation::Stable => path[1..]
            .iter()
            .copied()
            .find(|&f| sign(f).is_some() && sign(f) != sign(path[0]))
            .unwrap_or(last),
    }
}

/// Value of the infinite branch `prefix . cycle^omega`.
pub fn eval_lasso(be: BranchEvaluation, prefix: &[Fact], cycle: &[Fact]) -> Fact {
    // the elements at positions 1, 2, ... up to one full turn of the cycle
    let from_second: Vec<Fact> = if prefix.is_empty() {
        cycle[1..].iter().chain(&cycle[..1]).copied().collect()
    } else {
        prefix[1..].iter().chain(cycle).copied().collect()
    };
    let start = if prefix.is_empty() { cycle[0] } else { prefix[0] };
    match be {
        BranchEvaluation::Completion => from_second[0],
        BranchEvaluation::KripkeKleene => Fact::UNKNOWN,
        BranchEvaluation::WellFounded => {
            let pos = cycle.iter().any(|&f| sign(f) == Some(Sign::Positive));
            let neg = cycle.iter().any(|&f| sign(f) == Some(Sign::Negative));
            match (pos, neg) {
                (true, false) => Fact::FALSE,
                (false, true) => Fact::TRUE,
                _ => Fact::UNKNOWN,
            }
        }
        BranchEvaluation::Stable => from_second
            .iter()
            .copied()
            .find(|&f| sign(f) != sign(start))
            .unwrap_or(if sign(start) == Some(Sign::Positive) {
                Fact::FALSE
            } else {
                Fact::TRUE
            }),
    }
}

/// Values realised by enumerated prefixes: sink-ended paths directly, and
/// every lasso `v0..vk` with `vj == vk` found inside a prefix.
pub fn realized_values(
    frame: &Frame,
    j: &Justification,
    start: Fact,
    be: BranchEvaluation,
    max_len: usize,
) -> BTreeSet<Fact> {
    let mut out = BTreeSet::new();
    for prefix in justification::enumerate_branch_prefixes(frame, j, start, max_len).unwrap() {
        let path = &prefix.facts;
        if prefix.ended_at_sink {
            out.insert(eval_finite(be, path));
        }
        let defined_len = if prefix.ended_at_sink { path.len() - 1 } else { path.len() };
        for k in 1..defined_len {
            for jj in 0..k {
                if path[jj] == path[k] {
                    out.insert(eval_lasso(be, &path[..jj], &path[jj..k]));
                }
            }
        }
    }
    out
}

const LETTERS: [&str; 6] = ["p", "q", "r", "s", "v", "w"];

/// A random program over up to `max_defined` defined atoms and `opens` open
/// atoms `o0`, `o1`, ... (every open atom is mentioned at least once).
pub fn random_open_program(rng: &mut impl Rng, max_defined: usize, opens: usize, max_rules: usize) -> String {
    let d = rng.random_range(1..=max_defined.min(LETTERS.len()));
    let mut names: Vec<String> = LETTERS[..d].iter().map(|s| s.to_string()).collect();
    names.extend((0..opens).map(|i| format!("o{i}")));
    let mut text = String::new();
    let mut mentioned = vec![false; opens];
    let rules = rng.random_range(1..=max_rules);
    for _ in 0..rules {
        text.push_str(LETTERS[rng.random_range(0..d)]);
        for k in 0..rng.random_range(1..=3) {
            text.push_str(if k == 0 { " :- " } else { ", " });
            if rng.random_bool(0.4) {
                text.push_str("not ");
            }
            let i = rng.random_range(0..names.len());
            if i >= d {
                mentioned[i - d] = true;
            }
            text.push_str(&names[i]);
        }
        text.push_str(".\n");
    }
    for (i, m) in mentioned.iter().enumerate() {
        if !m {
            let head = LETTERS[rng.random_range(0..d)];
            text.push_str(&format!("{head} :- o{i}.\n"));
        }
    }
    for i in 0..opens {
        text.push_str(&format!("#open o{i}/0.\n"));
    }
    text
}
