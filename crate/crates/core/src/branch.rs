//! Branch evaluations: how a (finite or infinite) branch of a justification
//! is mapped to a single fact.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fact::{Fact, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BranchEvaluation {
    #[serde(rename = "wf")]
    WellFounded,
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "kk")]
    KripkeKleene,
    #[serde(rename = "sp")]
    Completion,
}

impl BranchEvaluation {
    pub const ALL: [BranchEvaluation; 4] = [
        BranchEvaluation::WellFounded,
        BranchEvaluation::Stable,
        BranchEvaluation::KripkeKleene,
        BranchEvaluation::Completion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BranchEvaluation::WellFounded => "wf",
            BranchEvaluation::Stable => "stable",
            BranchEvaluation::KripkeKleene => "kk",
            BranchEvaluation::Completion => "sp",
        }
    }

    /// True for the evaluations whose semantics is a single three-valued
    /// model rather than a set of total models.
    pub fn is_three_valued(self) -> bool {
        matches!(self, BranchEvaluation::WellFounded | BranchEvaluation::KripkeKleene)
    }
}

impl fmt::Display for BranchEvaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown semantics {0:?} (expected wf, stable, kk or sp)")]
pub struct UnknownEvaluation(pub String);

impl FromStr for BranchEvaluation {
    type Err = UnknownEvaluation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wf" => Ok(BranchEvaluation::WellFounded),
            "stable" => Ok(BranchEvaluation::Stable),
            "kk" => Ok(BranchEvaluation::KripkeKleene),
            "sp" | "supported" => Ok(BranchEvaluation::Completion),
            other => Err(UnknownEvaluation(other.to_owned())),
        }
    }
}

/// What a branch looks like, as far as one evaluation cares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchClass {
    FiniteEndingIn(Fact),
    InfinitePositiveTail,
    InfiniteNegativeTail,
    InfiniteMixed,
    FirstSignSwitch(Fact),
    SameSignFinite(Fact),
    SameSignInfinite(Sign),
    /// Completion looks no further than the second element.
    SecondElement(Fact),
}

/// `None` when `class` is not one `be` produces.
pub fn value_of_class(be: BranchEvaluation, class: BranchClass) -> Option<Fact> {
    use BranchClass::*;
    use BranchEvaluation::*;
    match (be, class) {
        (WellFounded | KripkeKleene, FiniteEndingIn(sink)) => Some(sink),
        (WellFounded, InfiniteNegativeTail) => Some(Fact::TRUE),
        (WellFounded, InfinitePositiveTail) => Some(Fact::FALSE),
        (WellFounded, InfiniteMixed) => Some(Fact::UNKNOWN),
        (KripkeKleene, InfiniteNegativeTail | InfinitePositiveTail | InfiniteMixed) => Some(Fact::UNKNOWN),
        (Stable, FirstSignSwitch(y)) => Some(y),
        (Stable, SameSignFinite(sink)) => Some(sink),
        (Stable, SameSignInfinite(Sign::Positive)) => Some(Fact::FALSE),
        (Stable, SameSignInfinite(Sign::Negative)) => Some(Fact::TRUE),
        (Completion, SecondElement(y)) => Some(y),
        _ => None,
    }
}

/// A concrete branch: a finite path of defined facts closed by a sink, or an
/// eventually periodic infinite path `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    Finite(Vec<Fact>),
    Lasso { prefix: Vec<Fact>, cycle: Vec<Fact> },
}

impl Branch {
    fn nth(&self, n: usize) -> Option<Fact> {
        match self {
            Branch::Finite(path) => path.get(n).copied(),
            Branch::Lasso { prefix, cycle } => {
                if n < prefix.len() {
                    Some(prefix[n])
                } else if cycle.is_empty() {
                    None
                } else {
                    Some(cycle[(n - prefix.len()) % cycle.len()])
                }
            }
        }
    }
}

/// Classifies a branch directly from its definition. Branches must start at
/// a literal and have at least two elements.
pub fn classify(be: BranchEvaluation, branch: &Branch) -> BranchClass {
    let first = branch.nth(0).expect("branch has a first element");
    if be == BranchEvaluation::Completion {
        return BranchClass::SecondElement(branch.nth(1).expect("branch has a second element"));
    }
    match branch {
        Branch::Finite(path) => {
            let sink = *path.last().expect("finite branch is non-empty");
            if be == BranchEvaluation::Stable {
                let start = first.sign();
                if let Some(&y) = path[1..]
                    .iter()
                    .find(|f| f.sign().is_some() && f.sign() != start)
                {
                    return BranchClass::FirstSignSwitch(y);
                }
                return BranchClass::SameSignFinite(sink);
            }
            BranchClass::FiniteEndingIn(sink)
        }
        Branch::Lasso { prefix, cycle } => {
            if be == BranchEvaluation::Stable {
                let start = first.sign().expect("branches start at literals");
                let len = prefix.len() + cycle.len();
                if let Some(y) = (1..len).filter_map(|n| branch.nth(n)).find(|f| f.sign() != Some(start)) {
                    return BranchClass::FirstSignSwitch(y);
                }
                return BranchClass::SameSignInfinite(start);
            }
            let pos = cycle.iter().any(|f| f.sign() == Some(Sign::Positive));
            let neg = cycle.iter().any(|f| f.sign() == Some(Sign::Negative));
            match (pos, neg) {
                (true, false) => BranchClass::InfinitePositiveTail,
                (false, true) => BranchClass::InfiniteNegativeTail,
                _ => BranchClass::InfiniteMixed,
            }
        }
    }
}

pub fn evaluate(be: BranchEvaluation, branch: &Branch) -> Fact {
    value_of_class(be, classify(be, branch)).expect("classify yields classes valid for be")
}
