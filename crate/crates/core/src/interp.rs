use std::collections::BTreeSet;

use crate::fact::Fact;

/// A set of facts. Iterates in intern order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation(BTreeSet<Fact>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{t}`, the starting point of every semantics computation.
    pub fn truth() -> Self {
        [Fact::TRUE].into_iter().collect()
    }

    pub fn insert(&mut self, fact: Fact) -> bool {
        self.0.insert(fact)
    }

    pub fn remove(&mut self, fact: Fact) -> bool {
        self.0.remove(&fact)
    }

    pub fn contains(&self, fact: Fact) -> bool {
        self.0.contains(&fact)
    }

    pub fn iter(&self) -> impl Iterator<Item = Fact> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.union(&other.0).copied().collect())
    }

    pub fn as_set(&self) -> &BTreeSet<Fact> {
        &self.0
    }

    /// Dense membership mask over `size` fact indices.
    pub fn mask(&self, size: usize) -> Vec<bool> {
        let mut mask = vec![false; size];
        for f in &self.0 {
            if let Some(slot) = mask.get_mut(f.index()) {
                *slot = true;
            }
        }
        mask
    }
}

impl FromIterator<Fact> for Interpretation {
    fn from_iter<T: IntoIterator<Item = Fact>>(iter: T) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl Extend<Fact> for Interpretation {
    fn extend<T: IntoIterator<Item = Fact>>(&mut self, iter: T) {
        self.0.extend(iter)
    }
}

impl From<BTreeSet<Fact>> for Interpretation {
    fn from(set: BTreeSet<Fact>) -> Self {
        Interpretation(set)
    }
}
