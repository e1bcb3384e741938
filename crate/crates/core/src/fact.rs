//! The fact universe: logical values, signed literals and the Belnap orders.

use std::collections::HashMap;
use std::fmt;

/// Interned atom identifier. Ordering follows intern order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Polarity of a literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// The four logical values of Belnap's logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Logical {
    True,
    False,
    Unknown,
    Inconsistent,
}

impl Logical {
    pub const ALL: [Logical; 4] = [
        Logical::True,
        Logical::False,
        Logical::Unknown,
        Logical::Inconsistent,
    ];

    pub fn negate(self) -> Logical {
        match self {
            Logical::True => Logical::False,
            Logical::False => Logical::True,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Logical::True => "true",
            Logical::False => "false",
            Logical::Unknown => "unknown",
            Logical::Inconsistent => "inconsistent",
        }
    }
}

/// Which Belnap order to compare in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Truth,
    Information,
}

/// Belnap bilattice orders.
///
/// Truth: `f` is bottom, `t` is top, `u` and `i` sit incomparably between.
/// Information: `u` is bottom, `i` is top, `f` and `t` sit incomparably between.
pub fn leq(order: Order, a: Logical, b: Logical) -> bool {
    use Logical::*;
    if a == b {
        return true;
    }
    match order {
        Order::Truth => matches!((a, b), (False, _) | (_, True)),
        Order::Information => matches!((a, b), (Unknown, _) | (_, Inconsistent)),
    }
}

/// An element of the fact space.
///
/// The derived ordering puts logical facts first, then literals by atom
/// intern order with the positive literal before the negative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Logical(Logical),
    Literal(Atom, Sign),
}

impl Fact {
    pub const TRUE: Fact = Fact::Logical(Logical::True);
    pub const FALSE: Fact = Fact::Logical(Logical::False);
    pub const UNKNOWN: Fact = Fact::Logical(Logical::Unknown);
    pub const INCONSISTENT: Fact = Fact::Logical(Logical::Inconsistent);

    pub fn pos(atom: Atom) -> Fact {
        Fact::Literal(atom, Sign::Positive)
    }

    pub fn neg(atom: Atom) -> Fact {
        Fact::Literal(atom, Sign::Negative)
    }

    pub fn negate(self) -> Fact {
        match self {
            Fact::Logical(v) => Fact::Logical(v.negate()),
            Fact::Literal(a, s) => Fact::Literal(a, s.flip()),
        }
    }

    /// Polarity of a literal; logical facts carry no sign.
    pub fn sign(self) -> Option<Sign> {
        match self {
            Fact::Logical(_) => None,
            Fact::Literal(_, s) => Some(s),
        }
    }

    pub fn atom(self) -> Option<Atom> {
        match self {
            Fact::Logical(_) => None,
            Fact::Literal(a, _) => Some(a),
        }
    }

    pub fn is_logical(self) -> bool {
        matches!(self, Fact::Logical(_))
    }

    /// Dense index: logical values occupy 0..4, atom `a` occupies `4 + 2a`
    /// (positive) and `4 + 2a + 1` (negative). Agrees with `Ord`.
    pub fn index(self) -> usize {
        match self {
            Fact::Logical(v) => v as usize,
            Fact::Literal(a, Sign::Positive) => 4 + 2 * a.index(),
            Fact::Literal(a, Sign::Negative) => 5 + 2 * a.index(),
        }
    }

    pub fn from_index(index: usize) -> Fact {
        if index < 4 {
            Fact::Logical(Logical::ALL[index])
        } else {
            let atom = Atom(((index - 4) / 2) as u32);
            if (index - 4).is_multiple_of(2) {
                Fact::pos(atom)
            } else {
                Fact::neg(atom)
            }
        }
    }

    /// Number of dense indices needed for a vocabulary of `atoms` atoms.
    pub fn universe_size(atoms: usize) -> usize {
        4 + 2 * atoms
    }
}

/// Symbol table mapping interned atoms to printable names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    lookup: HashMap<String, Atom>,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&atom) = self.lookup.get(name) {
            return atom;
        }
        let atom = Atom(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.lookup.insert(name.to_owned(), atom);
        atom
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.names.len() as u32).map(Atom)
    }

    /// Printable name: `path(a,c)`, `~path(a,c)`, or a logical keyword.
    pub fn fact_name(&self, fact: Fact) -> String {
        match fact {
            Fact::Logical(v) => v.name().to_owned(),
            Fact::Literal(a, Sign::Positive) => self.name(a).to_owned(),
            Fact::Literal(a, Sign::Negative) => format!("~{}", self.name(a)),
        }
    }

    /// Inverse of [`Symbols::fact_name`]. Accepts `~x`, `not x` and the
    /// logical keywords. Whitespace inside the atom is ignored.
    pub fn parse_fact(&self, text: &str) -> Option<Fact> {
        let text = text.trim();
        for v in Logical::ALL {
            if text == v.name() {
                return Some(Fact::Logical(v));
            }
        }
        let (sign, rest) = if let Some(rest) = text.strip_prefix('~') {
            (Sign::Negative, rest)
        } else if let Some(rest) = text.strip_prefix("not ") {
            (Sign::Negative, rest)
        } else {
            (Sign::Positive, text)
        };
        let compact: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
        self.get(&compact).map(|a| Fact::Literal(a, sign))
    }
}

/// Displays a fact with its printable name.
pub struct Named<'a>(pub &'a Symbols, pub Fact);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fact_name(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_examples() {
        assert_eq!(Fact::TRUE.negate(), Fact::FALSE);
        assert_eq!(Fact::UNKNOWN.negate(), Fact::UNKNOWN);
        assert_eq!(Fact::INCONSISTENT.negate(), Fact::INCONSISTENT);
        let mut syms = Symbols::new();
        let path = syms.intern("path(a,b)");
        let edge = syms.intern("edge(a,b)");
        assert_eq!(Fact::pos(path).negate().negate(), Fact::pos(path));
        assert_eq!(Fact::pos(edge).negate(), Fact::neg(edge));
    }

    #[test]
    fn signs() {
        let p = Atom(0);
        assert_eq!(Fact::pos(p).sign(), Some(Sign::Positive));
        assert_eq!(Fact::neg(p).sign(), Some(Sign::Negative));
        assert_eq!(Fact::UNKNOWN.sign(), None);
    }

    #[test]
    fn order_examples() {
        use Logical::*;
        assert!(leq(Order::Truth, False, True));
        assert!(leq(Order::Information, Unknown, Inconsistent));
        assert!(!leq(Order::Truth, Unknown, Inconsistent));
        assert!(!leq(Order::Information, False, True));
    }

    fn check_partial_order(order: Order) {
        let all = Logical::ALL;
        for a in all {
            assert!(leq(order, a, a));
            for b in all {
                if leq(order, a, b) && leq(order, b, a) {
                    assert_eq!(a, b);
                }
                for c in all {
                    if leq(order, a, b) && leq(order, b, c) {
                        assert!(leq(order, a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn orders_are_partial_orders() {
        check_partial_order(Order::Truth);
        check_partial_order(Order::Information);
    }

    #[test]
    fn truth_order_shape() {
        use Logical::*;
        for mid in [Unknown, Inconsistent] {
            assert!(leq(Order::Truth, False, mid));
            assert!(leq(Order::Truth, mid, True));
        }
        for mid in [False, True] {
            assert!(leq(Order::Information, Unknown, mid));
            assert!(leq(Order::Information, mid, Inconsistent));
        }
    }

    #[test]
    fn involution_and_index_roundtrip() {
        for i in 0..40 {
            let f = Fact::from_index(i);
            assert_eq!(f.index(), i);
            assert_eq!(f.negate().negate(), f);
            if !f.is_logical() {
                assert_ne!(f.negate(), f);
                assert_ne!(f.negate().sign(), f.sign());
            }
            if i > 0 {
                assert!(Fact::from_index(i - 1) < f);
            }
        }
    }

    #[test]
    fn names_roundtrip() {
        let mut syms = Symbols::new();
        let a = syms.intern("edge(a,b)");
        for f in [Fact::pos(a), Fact::neg(a), Fact::TRUE, Fact::UNKNOWN] {
            assert_eq!(syms.parse_fact(&syms.fact_name(f)), Some(f));
        }
        assert_eq!(syms.parse_fact("not edge(a, b)"), Some(Fact::neg(a)));
        assert_eq!(syms.parse_fact("nope"), None);
    }
}
