//! Deciding whether a fact is supported in an interpretation.
//!
//! [`supports_bruteforce`] enumerates justifications. [`solve`] computes the
//! supported set of every defined fact at once as the winning region of a
//! game: the prover picks a rule for each defined fact, the refuter picks a
//! body member, and the refuter wins on reaching a body member whose value
//! is outside the interpretation or on an infinite play whose loop value is
//! outside it. Which infinite plays are acceptable depends on the evaluation
//! and on which of `t`, `f`, `u` the interpretation contains, and always
//! reduces to one of four positional objectives (reachability, safety, Büchi,
//! co-Büchi) over marked edges.

use thiserror::Error;

use crate::branch::BranchEvaluation;
use crate::fact::{Fact, Sign};
use crate::frame::{Frame, RuleId};
use crate::interp::Interpretation;
use crate::justification::{branch_values, Justification};

pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupportError {
    #[error("justification search exceeded {0} combinations")]
    SearchSpaceTooLarge(u64),
    #[error("{0} is not a defined fact")]
    NotDefined(String),
}

// ---------------------------------------------------------------------------
// Brute force

/// Searches every locally complete justification from `x`, choosing rules
/// for reachable facts in intern order and trying rules in declaration
/// order. Returns the first justification whose branches all land in `interp`.
pub fn supports_bruteforce(
    frame: &Frame,
    be: BranchEvaluation,
    interp: &Interpretation,
    x: Fact,
) -> Result<Option<Justification>, SupportError> {
    supports_bruteforce_with_cap(frame, be, interp, x, DEFAULT_SEARCH_CAP)
}

pub fn supports_bruteforce_with_cap(
    frame: &Frame,
    be: BranchEvaluation,
    interp: &Interpretation,
    x: Fact,
    cap: u64,
) -> Result<Option<Justification>, SupportError> {
    if !frame.is_defined(x) {
        return Err(SupportError::NotDefined(frame.name(x)));
    }
    let mut search = Search {
        frame,
        be,
        interp,
        start: x,
        cap,
        count: 0,
    };
    let mut j = Justification::new();
    Ok(search.run(&mut j)?.then_some(j))
}

struct Search<'a> {
    frame: &'a Frame,
    be: BranchEvaluation,
    interp: &'a Interpretation,
    start: Fact,
    cap: u64,
    count: u64,
}

impl Search<'_> {
    /// Smallest reachable defined fact without a chosen rule.
    fn next_open_choice(&self, j: &Justification) -> Option<Fact> {
        let mut seen = vec![false; self.frame.universe_size()];
        let mut stack = vec![self.start];
        seen[self.start.index()] = true;
        let mut best: Option<Fact> = None;
        while let Some(f) = stack.pop() {
            match j.get(f) {
                Some(rule) => {
                    for &b in &self.frame.rule(rule).body {
                        if self.frame.is_defined(b) && !seen[b.index()] {
                            seen[b.index()] = true;
                            stack.push(b);
                        }
                    }
                }
                None => best = Some(best.map_or(f, |b| b.min(f))),
            }
        }
        best
    }

    fn run(&mut self, j: &mut Justification) -> Result<bool, SupportError> {
        let Some(next) = self.next_open_choice(j) else {
            self.count += 1;
            if self.count > self.cap {
                return Err(SupportError::SearchSpaceTooLarge(self.cap));
            }
            let values = branch_values(self.frame, j, self.start, self.be).expect("complete by construction");
            return Ok(values.iter().all(|&v| self.interp.contains(v)));
        };
        for &rule in self.frame.rules_for(next) {
            j.choose(self.frame, rule);
            if self.run(j)? {
                return Ok(true);
            }
            j.unchoose(next);
        }
        Ok(false)
    }
}

// ---------------------------------------------------------------------------
// Fixpoint solver

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    EnterPositive,
    EnterNegative,
    SignChange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Objective {
    /// Every play is finite.
    Reach,
    /// Infinite plays are all acceptable.
    Safety,
    /// Infinite plays take marked edges infinitely often.
    Buchi(Mark),
    /// Infinite plays take marked edges finitely often.
    CoBuchi(Mark),
}

fn objective(be: BranchEvaluation, mask: &[bool]) -> Objective {
    let has = |f: Fact| mask[f.index()];
    let (t, f, u) = (has(Fact::TRUE), has(Fact::FALSE), has(Fact::UNKNOWN));
    match be {
        BranchEvaluation::Completion => Objective::Reach,
        BranchEvaluation::KripkeKleene if u => Objective::Safety,
        BranchEvaluation::KripkeKleene => Objective::Reach,
        // positive loops are worth f, negative loops t; regions never mix
        BranchEvaluation::Stable => match (f, t) {
            (true, true) => Objective::Safety,
            (false, false) => Objective::Reach,
            (true, false) => Objective::CoBuchi(Mark::EnterNegative),
            (false, true) => Objective::CoBuchi(Mark::EnterPositive),
        },
        // negative tails t, positive tails f, sign changes forever u
        BranchEvaluation::WellFounded => match (t, f, u) {
            (false, false, false) => Objective::Reach,
            (true, true, true) => Objective::Safety,
            (true, false, false) => Objective::CoBuchi(Mark::EnterPositive),
            (false, true, false) => Objective::CoBuchi(Mark::EnterNegative),
            (true, true, false) => Objective::CoBuchi(Mark::SignChange),
            (false, false, true) => Objective::Buchi(Mark::SignChange),
            (true, false, true) => Objective::Buchi(Mark::EnterNegative),
            (false, true, true) => Objective::Buchi(Mark::EnterPositive),
        },
    }
}

/// Supported facts of a frame in one interpretation, with a positional
/// strategy (one rule per winning fact) witnessing each of them.
#[derive(Clone, Debug)]
pub struct Support {
    winning: Vec<bool>,
    strategy: Vec<Option<RuleId>>,
}

impl Support {
    pub fn supports(&self, x: Fact) -> bool {
        self.winning.get(x.index()).copied().unwrap_or(false)
    }

    /// Supported facts in intern order.
    pub fn supported(&self) -> impl Iterator<Item = Fact> + '_ {
        self.winning
            .iter()
            .enumerate()
            .filter(|(_, &w)| w)
            .map(|(i, _)| Fact::from_index(i))
    }

    pub fn interpretation(&self) -> Interpretation {
        self.supported().collect()
    }

    /// A locally complete justification supporting `x`. Facts reachable only
    /// through body members evaluated as values (opposite-sign facts under the
    /// stable evaluation, everything under completion) use their own strategy
    /// when they have one and their first rule otherwise.
    pub fn witness(&self, frame: &Frame, x: Fact) -> Option<Justification> {
        if !self.supports(x) {
            return None;
        }
        let mut j = Justification::new();
        let mut stack = vec![x];
        while let Some(f) = stack.pop() {
            if !frame.is_defined(f) || j.get(f).is_some() {
                continue;
            }
            let rule = self.strategy[f.index()].unwrap_or(frame.rules_for(f)[0]);
            j.choose(frame, rule);
            stack.extend(frame.rule(rule).body.iter().rev());
        }
        Some(j)
    }
}

struct Game<'a> {
    frame: &'a Frame,
    be: BranchEvaluation,
    mask: Vec<bool>,
    defined: Vec<Fact>,
}

impl Game<'_> {
    /// Body members that end the branch as far as this evaluation is concerned.
    fn terminal(&self, x: Fact, b: Fact) -> bool {
        match self.be {
            BranchEvaluation::Completion => true,
            BranchEvaluation::Stable => !self.frame.is_defined(b) || b.sign() != x.sign(),
            _ => !self.frame.is_defined(b),
        }
    }

    fn marked(mark: Option<Mark>, x: Fact, b: Fact) -> bool {
        match mark {
            None => false,
            Some(Mark::EnterPositive) => b.sign() == Some(Sign::Positive),
            Some(Mark::EnterNegative) => b.sign() == Some(Sign::Negative),
            Some(Mark::SignChange) => b.sign() != x.sign(),
        }
    }

    /// First rule for `x` whose body members are all acceptable: terminal
    /// members must be in the interpretation, marked continuations in
    /// `marked_in`, unmarked continuations in `unmarked_in`.
    fn pre(&self, x: Fact, mark: Option<Mark>, marked_in: &[bool], unmarked_in: &[bool]) -> Option<RuleId> {
        self.frame.rules_for(x).iter().copied().find(|&id| {
            self.frame.rule(id).body.iter().all(|&b| {
                if self.terminal(x, b) {
                    self.mask[b.index()]
                } else if Self::marked(mark, x, b) {
                    marked_in[b.index()]
                } else {
                    unmarked_in[b.index()]
                }
            })
        })
    }

    fn empty(&self) -> Vec<bool> {
        vec![false; self.mask.len()]
    }

    fn all_defined(&self) -> Vec<bool> {
        let mut set = self.empty();
        for &x in &self.defined {
            set[x.index()] = true;
        }
        set
    }

    /// Least fixpoint of `X ↦ pre(marked ∈ fixed, unmarked ∈ X)`, recording
    /// for each fact the rule that admitted it at its level. With
    /// `fixed = None` marked continuations must also be in `X`.
    fn lfp(&self, mark: Option<Mark>, fixed: Option<&[bool]>, strategy: &mut [Option<RuleId>]) -> Vec<bool> {
        let mut set = self.empty();
        loop {
            let mut added = Vec::new();
            for &x in &self.defined {
                if set[x.index()] {
                    continue;
                }
                if let Some(rule) = self.pre(x, mark, fixed.unwrap_or(&set), &set) {
                    added.push((x, rule));
                }
            }
            if added.is_empty() {
                return set;
            }
            for (x, rule) in added {
                set[x.index()] = true;
                strategy[x.index()] = Some(rule);
            }
        }
    }

    /// Greatest fixpoint of `Y ↦ pre(marked ∈ fixed, unmarked ∈ Y)`.
    fn gfp(&self, mark: Option<Mark>, fixed: Option<&[bool]>) -> Vec<bool> {
        let mut set = self.all_defined();
        loop {
            let removed: Vec<Fact> = self
                .defined
                .iter()
                .copied()
                .filter(|&x| set[x.index()] && self.pre(x, mark, fixed.unwrap_or(&set), &set).is_none())
                .collect();
            if removed.is_empty() {
                return set;
            }
            for x in removed {
                set[x.index()] = false;
            }
        }
    }

    fn solve(&self) -> Support {
        let mut strategy = vec![None; self.mask.len()];
        let winning = match objective(self.be, &self.mask) {
            Objective::Reach => self.lfp(None, None, &mut strategy),
            Objective::Safety => {
                let win = self.gfp(None, None);
                for &x in &self.defined {
                    if win[x.index()] {
                        strategy[x.index()] = self.pre(x, None, &win, &win);
                    }
                }
                win
            }
            Objective::Buchi(mark) => {
                // νY. μX. pre(marked ∈ Y, unmarked ∈ X)
                let mut outer = self.all_defined();
                loop {
                    let mut inner_strategy = vec![None; self.mask.len()];
                    let inner = self.lfp(Some(mark), Some(&outer), &mut inner_strategy);
                    if inner == outer {
                        strategy = inner_strategy;
                        break inner;
                    }
                    outer = inner;
                }
            }
            Objective::CoBuchi(mark) => {
                // μX. νY. pre(marked ∈ X, unmarked ∈ Y)
                let mut lower = self.empty();
                loop {
                    let level = self.gfp(Some(mark), Some(&lower));
                    for &x in &self.defined {
                        if level[x.index()] && !lower[x.index()] {
                            strategy[x.index()] = self.pre(x, Some(mark), &lower, &level);
                        }
                    }
                    if level == lower {
                        break level;
                    }
                    lower = level;
                }
            }
        };
        Support { winning, strategy }
    }
}

/// Computes the supported defined facts of `frame` in `interp`.
pub fn solve(frame: &Frame, be: BranchEvaluation, interp: &Interpretation) -> Support {
    Game {
        frame,
        be,
        mask: interp.mask(frame.universe_size()),
        defined: frame.defined().collect(),
    }
    .solve()
}

/// Whether `x` is supported in `interp`; same verdict as [`supports_bruteforce`].
pub fn supports(frame: &Frame, be: BranchEvaluation, interp: &Interpretation, x: Fact) -> bool {
    solve(frame, be, interp).supports(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fact::Symbols;
    use crate::frame::Rule;
    use crate::justification::is_locally_complete;
    use crate::program;
    use BranchEvaluation::*;

    fn lp(text: &str) -> Frame {
        program::to_frame(&program::parse(text).unwrap()).unwrap()
    }

    fn fact(frame: &Frame, name: &str) -> Fact {
        frame.symbols().parse_fact(name).unwrap()
    }

    fn both(frame: &Frame, be: BranchEvaluation, interp: &Interpretation, x: Fact) -> bool {
        let brute = supports_bruteforce(frame, be, interp, x).unwrap();
        let fast = supports(frame, be, interp, x);
        assert_eq!(brute.is_some(), fast, "{be} {}", frame.name(x));
        fast
    }

    #[test]
    fn self_negation_not_stably_supported() {
        let frame = lp("p :- not p.");
        let p = fact(&frame, "p");
        let interp: Interpretation = [Fact::TRUE, p].into_iter().collect();
        assert!(!both(&frame, Stable, &interp, p));
        assert!(!both(&frame, WellFounded, &Interpretation::truth(), p));
    }

    #[test]
    fn negative_loop_supported_under_wf() {
        let frame = lp("p :- p.");
        let not_p = fact(&frame, "~p");
        assert!(both(&frame, WellFounded, &Interpretation::truth(), not_p));
        assert!(!both(&frame, WellFounded, &Interpretation::truth(), not_p.negate()));
    }

    #[test]
    fn completion_one_step() {
        let mut s = Symbols::new();
        let [q, a, b] = ["q", "a", "b"].map(|n| Fact::pos(s.intern(n)));
        let frame = Frame::build(s, [Rule::new(q, [a]), Rule::new(q, [b])]).unwrap();
        let interp: Interpretation = [Fact::TRUE, a].into_iter().collect();
        assert!(both(&frame, Completion, &interp, q));
        assert!(!both(&frame, Completion, &Interpretation::truth(), q));
    }

    #[test]
    fn rule_to_true_supported_everywhere() {
        let mut s = Symbols::new();
        let x = Fact::pos(s.intern("x"));
        let frame = Frame::build(s, [Rule::new(x, [Fact::TRUE])]).unwrap();
        for be in BranchEvaluation::ALL {
            assert!(both(&frame, be, &Interpretation::truth(), x));
        }
    }

    #[test]
    fn witnesses_are_locally_complete() {
        let frame = lp("a :- not b. b :- c. c :- not d. d :- d.");
        let interp = Interpretation::truth();
        for be in BranchEvaluation::ALL {
            let sol = solve(&frame, be, &interp);
            for x in frame.defined() {
                if let Some(j) = sol.witness(&frame, x) {
                    assert!(is_locally_complete(&frame, &j, x).unwrap());
                    let values = branch_values(&frame, &j, x, be).unwrap();
                    assert!(values.iter().all(|&v| interp.contains(v)), "{be} {}", frame.name(x));
                }
            }
        }
    }

    #[test]
    fn wf_mixed_loop_needs_u() {
        let frame = lp("p :- not q. q :- not p.");
        let p = fact(&frame, "p");
        let with_u: Interpretation = [Fact::TRUE, Fact::UNKNOWN].into_iter().collect();
        assert!(both(&frame, WellFounded, &with_u, p));
        assert!(!both(&frame, WellFounded, &Interpretation::truth(), p));
    }

    #[test]
    fn search_cap() {
        let frame = lp("p :- q. p :- r. q :- p. q :- r. r :- p. r :- q.");
        let p = fact(&frame, "p");
        let err = supports_bruteforce_with_cap(&frame, WellFounded, &Interpretation::truth(), p, 3).unwrap_err();
        assert_eq!(err, SupportError::SearchSpaceTooLarge(3));
        assert!(matches!(
            supports_bruteforce(&frame, WellFounded, &Interpretation::truth(), Fact::TRUE),
            Err(SupportError::NotDefined(_))
        ));
    }
}
