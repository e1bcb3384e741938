//! Justification frames: rules over a fact space, the defined/open split,
//! and complementation of rule sets for negative heads.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::fact::{Fact, Named, Symbols};

pub const DEFAULT_COMPLEMENT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("rule has an empty body: {0}")]
    EmptyBody(String),
    #[error("rule head is a logical fact: {0}")]
    LogicalHead(String),
    #[error("fact {0} is not defined in the frame")]
    NotDefined(String),
    #[error("complementing {head} would produce more than {cap} rule bodies")]
    ComplementTooLarge { head: String, cap: usize },
}

/// Index of a rule inside its frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(pub usize);

/// `head <- body`; the body is a sorted, duplicate-free set of facts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Fact,
    pub body: Vec<Fact>,
}

impl Rule {
    pub fn new(head: Fact, body: impl IntoIterator<Item = Fact>) -> Rule {
        let body: BTreeSet<Fact> = body.into_iter().collect();
        Rule {
            head,
            body: body.into_iter().collect(),
        }
    }

    pub fn display<'a>(&'a self, symbols: &'a Symbols) -> impl fmt::Display + 'a {
        RuleDisplay(symbols, self)
    }
}

struct RuleDisplay<'a>(&'a Symbols, &'a Rule);

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {{", Named(self.0, self.1.head))?;
        for (i, b) in self.1.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", Named(self.0, *b))?;
        }
        f.write_str("}")
    }
}

/// A fact space with a rule set. Immutable once built.
#[derive(Clone, Debug)]
pub struct Frame {
    symbols: Symbols,
    rules: Vec<Rule>,
    by_head: Vec<Vec<RuleId>>,
}

impl Frame {
    /// Validates and deduplicates `rules`. Rules for each head keep their
    /// first-occurrence order.
    pub fn build(symbols: Symbols, rules: impl IntoIterator<Item = Rule>) -> Result<Frame, FrameError> {
        let mut frame = Frame {
            by_head: vec![Vec::new(); Fact::universe_size(symbols.len())],
            symbols,
            rules: Vec::new(),
        };
        let mut seen = HashSet::new();
        for rule in rules {
            if rule.head.is_logical() {
                return Err(FrameError::LogicalHead(rule.display(&frame.symbols).to_string()));
            }
            if rule.body.is_empty() {
                return Err(FrameError::EmptyBody(rule.display(&frame.symbols).to_string()));
            }
            if seen.insert(rule.clone()) {
                frame.push(rule);
            }
        }
        Ok(frame)
    }

    fn push(&mut self, rule: Rule) {
        let id = RuleId(self.rules.len());
        self.by_head[rule.head.index()].push(id);
        self.rules.push(rule);
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.0]
    }

    /// Rules with head `fact`, in declaration order.
    pub fn rules_for(&self, fact: Fact) -> &[RuleId] {
        self.by_head.get(fact.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_defined(&self, fact: Fact) -> bool {
        !self.rules_for(fact).is_empty()
    }

    pub fn is_open(&self, fact: Fact) -> bool {
        !fact.is_logical() && fact.index() < self.universe_size() && !self.is_defined(fact)
    }

    /// Size of the dense fact index space.
    pub fn universe_size(&self) -> usize {
        self.by_head.len()
    }

    /// Every fact of the vocabulary, in intern order.
    pub fn facts(&self) -> impl Iterator<Item = Fact> + '_ {
        (0..self.universe_size()).map(Fact::from_index)
    }

    pub fn defined(&self) -> impl Iterator<Item = Fact> + '_ {
        self.facts().filter(|&f| self.is_defined(f))
    }

    pub fn open(&self) -> impl Iterator<Item = Fact> + '_ {
        self.facts().filter(|&f| self.is_open(f))
    }

    pub fn name(&self, fact: Fact) -> String {
        self.symbols.fact_name(fact)
    }

    /// Adds rules for `~x` for every `x` in `heads`: one body per selection
    /// function over the bodies of `x`, negated element-wise.
    pub fn complement(&self, heads: &[Fact]) -> Result<Frame, FrameError> {
        self.complement_with_cap(heads, DEFAULT_COMPLEMENT_CAP)
    }

    pub fn complement_with_cap(&self, heads: &[Fact], cap: usize) -> Result<Frame, FrameError> {
        let mut out = self.clone();
        let mut seen: HashSet<Rule> = out.rules.iter().cloned().collect();
        for &head in heads {
            if !self.is_defined(head) {
                return Err(FrameError::NotDefined(self.name(head)));
            }
            let bodies = self.rules_for(head).iter().map(|&id| &self.rule(id).body);
            let dual = head.negate();
            for body in selections(bodies, cap).ok_or_else(|| FrameError::ComplementTooLarge {
                head: self.name(head),
                cap,
            })? {
                let rule = Rule { head: dual, body };
                if seen.insert(rule.clone()) {
                    out.push(rule);
                }
            }
        }
        Ok(out)
    }
}

/// Negated selection functions over `bodies`, deduplicated as sets. Partial
/// selections are deduplicated after each body, so the count stays bounded
/// by the number of distinct fact subsets. `None` once `cap` is exceeded.
fn selections<'a>(bodies: impl Iterator<Item = &'a Vec<Fact>>, cap: usize) -> Option<Vec<Vec<Fact>>> {
    let mut partial: Vec<BTreeSet<Fact>> = vec![BTreeSet::new()];
    for body in bodies {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for chosen in &partial {
            for &element in body {
                let mut extended = chosen.clone();
                extended.insert(element.negate());
                if seen.insert(extended.clone()) {
                    next.push(extended);
                }
            }
        }
        if next.len() > cap {
            return None;
        }
        partial = next;
    }
    Some(partial.into_iter().map(|s| s.into_iter().collect()).collect())
}
