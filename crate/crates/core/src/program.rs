//! The `.jfy` rule language: parsing, finite-domain grounding, and lowering
//! of ground programs to complemented justification frames.
//!
//! ```text
//! path(X,Y) :- edge(X,Y).
//! path(X,Y) :- path(X,Z), path(Z,Y).
//! #open edge/2.
//! % comments run to the end of the line
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::fact::{Atom, Fact, Symbols};
use crate::frame::{Frame, FrameError, Rule};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProgramError {
    #[error("syntax errors: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Syntax(Vec<SyntaxError>),
    #[error("program has variables but the grounding domain is empty")]
    EmptyDomain,
    #[error("program is not ground: {0}")]
    NonGround(String),
    #[error("open predicate used as a rule head: {0}")]
    OpenAsHead(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomTerm {
    pub pred: String,
    pub args: Vec<Term>,
}

impl AtomTerm {
    pub fn prop(name: &str) -> AtomTerm {
        AtomTerm {
            pred: name.to_owned(),
            args: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    fn substitute(&self, binding: &HashMap<&str, &str>) -> AtomTerm {
        AtomTerm {
            pred: self.pred.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Const(binding[v.as_str()].to_owned()),
                    c => c.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for AtomTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Pos(AtomTerm),
    Neg(AtomTerm),
    True,
    False,
}

impl Literal {
    pub fn atom(&self) -> Option<&AtomTerm> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::True => f.write_str("true"),
            Literal::False => f.write_str("false"),
        }
    }
}

/// `head :- body.` A fact `head.` has the body `[true]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProgramRule {
    pub head: AtomTerm,
    pub body: Vec<Literal>,
}

impl ProgramRule {
    fn variables(&self) -> Vec<&str> {
        let mut vars = Vec::new();
        let atoms = std::iter::once(&self.head).chain(self.body.iter().filter_map(Literal::atom));
        for atom in atoms {
            for t in &atom.args {
                if let Term::Var(v) = t {
                    if !vars.contains(&v.as_str()) {
                        vars.push(v.as_str());
                    }
                }
            }
        }
        vars
    }
}

impl fmt::Display for ProgramRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if self.body != [Literal::True] {
            f.write_str(" :- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<ProgramRule>,
    /// Open predicates as `(name, arity)`.
    pub opens: BTreeSet<(String, usize)>,
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        for (name, arity) in &self.opens {
            writeln!(f, "#open {name}/{arity}.")?;
        }
        Ok(())
    }
}

impl Program {
    pub fn is_open(&self, atom: &AtomTerm) -> bool {
        self.opens.contains(&(atom.pred.clone(), atom.arity()))
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(|r| r.variables().is_empty())
    }

    /// Constants mentioned anywhere in the program.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            for atom in std::iter::once(&rule.head).chain(rule.body.iter().filter_map(Literal::atom)) {
                for t in &atom.args {
                    if let Term::Const(c) = t {
                        out.insert(c.clone());
                    }
                }
            }
        }
        out
    }

    /// Ground atoms in order of first appearance (head before body).
    pub fn ground_atoms(&self) -> Vec<&AtomTerm> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for rule in &self.rules {
            for atom in std::iter::once(&rule.head).chain(rule.body.iter().filter_map(Literal::atom)) {
                if seen.insert(atom) {
                    out.push(atom);
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Slash,
    Open,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Cursor {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.i + ahead).copied()
    }

    fn bump(&mut self) {
        if self.chars[self.i] == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.i += 1;
    }

    fn word(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek(0).filter(|c| c.is_alphanumeric() || *c == '_') {
            out.push(c);
            self.bump();
        }
        out
    }
}

fn lex(text: &str, errors: &mut Vec<SyntaxError>) -> Vec<Spanned> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = cur.peek(0) {
        let (line, col) = (cur.line, cur.col);
        let tok = match c {
            '%' => {
                while cur.peek(0).is_some_and(|c| c != '\n') {
                    cur.bump();
                }
                continue;
            }
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '(' | ')' | ',' | '.' | '/' => {
                cur.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    _ => Tok::Slash,
                }
            }
            ':' if cur.peek(1) == Some('-') => {
                cur.bump();
                cur.bump();
                Tok::If
            }
            '#' => {
                cur.bump();
                let word = cur.word();
                if word == "open" {
                    Tok::Open
                } else {
                    errors.push(SyntaxError {
                        line,
                        col,
                        message: format!("unknown directive #{word}"),
                    });
                    continue;
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let word = cur.word();
                if c.is_uppercase() || c == '_' {
                    Tok::Var(word)
                } else {
                    Tok::Ident(word)
                }
            }
            other => {
                errors.push(SyntaxError {
                    line,
                    col,
                    message: format!("unexpected character {other:?}"),
                });
                cur.bump();
                continue;
            }
        };
        out.push(Spanned { tok, line, col });
    }
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self
            .toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or(self.end);
        SyntaxError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn atom(&mut self) -> PResult<AtomTerm> {
        let pred = match self.peek() {
            Some(Tok::Ident(name)) if !matches!(name.as_str(), "not" | "true" | "false") => name.clone(),
            _ => return Err(self.error("expected an atom")),
        };
        if pred.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(self.error("predicate names must start with a letter"));
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                let term = match self.peek() {
                    Some(Tok::Ident(c)) => Term::Const(c.clone()),
                    Some(Tok::Var(v)) => Term::Var(v.clone()),
                    _ => return Err(self.error("expected a term")),
                };
                self.pos += 1;
                args.push(term);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        Ok(AtomTerm { pred, args })
    }

    fn literal(&mut self) -> PResult<Literal> {
        match self.peek() {
            Some(Tok::Ident(w)) if w == "not" => {
                self.pos += 1;
                Ok(Literal::Neg(self.atom()?))
            }
            Some(Tok::Ident(w)) if w == "true" => {
                self.pos += 1;
                Ok(Literal::True)
            }
            Some(Tok::Ident(w)) if w == "false" => {
                self.pos += 1;
                Ok(Literal::False)
            }
            _ => Ok(Literal::Pos(self.atom()?)),
        }
    }

    fn statement(&mut self, program: &mut Program) -> PResult<()> {
        if self.peek() == Some(&Tok::Open) {
            self.pos += 1;
            let name = match self.peek() {
                Some(Tok::Ident(n)) => n.clone(),
                _ => return Err(self.error("expected a predicate name")),
            };
            self.pos += 1;
            self.expect(Tok::Slash, "'/'")?;
            let arity = match self.peek() {
                Some(Tok::Ident(n)) => n.parse::<usize>().map_err(|_| self.error("expected an arity"))?,
                _ => return Err(self.error("expected an arity")),
            };
            self.pos += 1;
            self.expect(Tok::Dot, "'.'")?;
            program.opens.insert((name, arity));
            return Ok(());
        }
        let head = self.atom()?;
        let body = if self.peek() == Some(&Tok::If) {
            self.pos += 1;
            let mut body = vec![self.literal()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                body.push(self.literal()?);
            }
            body
        } else {
            vec![Literal::True]
        };
        self.expect(Tok::Dot, "'.'")?;
        program.rules.push(ProgramRule { head, body });
        Ok(())
    }

    fn recover(&mut self) {
        while let Some(tok) = self.peek() {
            let dot = *tok == Tok::Dot;
            self.pos += 1;
            if dot {
                break;
            }
        }
    }
}

fn end_position(text: &str) -> (usize, usize) {
    let line = text.matches('\n').count() + 1;
    let col = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parses a `.jfy` program, reporting every syntax error found.
pub fn parse(text: &str) -> Result<Program, Vec<SyntaxError>> {
    let mut errors = Vec::new();
    let toks = lex(text, &mut errors);
    let mut parser = Parser {
        toks,
        pos: 0,
        end: end_position(text),
    };
    let mut program = Program::default();
    while parser.peek().is_some() {
        if let Err(e) = parser.statement(&mut program) {
            errors.push(e);
            parser.recover();
        }
    }
    if errors.is_empty() {
        Ok(program)
    } else {
        errors.sort_by_key(|e| (e.line, e.col));
        Err(errors)
    }
}

/// Parses a single atom such as `edge(a, b)`.
pub fn parse_atom(text: &str) -> Result<AtomTerm, SyntaxError> {
    let mut errors = Vec::new();
    let toks = lex(text, &mut errors);
    if let Some(e) = errors.into_iter().next() {
        return Err(e);
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: end_position(text),
    };
    let atom = parser.atom()?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input after atom"));
    }
    Ok(atom)
}

// ---------------------------------------------------------------------------
// Grounding

/// Instantiates every rule for every substitution of its variables over
/// `domain` (naive Cartesian product, variables in order of appearance).
pub fn ground(program: &Program, domain: &BTreeSet<String>) -> Result<Program, ProgramError> {
    let constants: Vec<&str> = domain.iter().map(String::as_str).collect();
    let mut rules = Vec::new();
    for rule in &program.rules {
        let vars = rule.variables();
        if vars.is_empty() {
            rules.push(rule.clone());
            continue;
        }
        if constants.is_empty() {
            return Err(ProgramError::EmptyDomain);
        }
        let mut counter = vec![0usize; vars.len()];
        loop {
            let binding: HashMap<&str, &str> = vars
                .iter()
                .zip(&counter)
                .map(|(&v, &i)| (v, constants[i]))
                .collect();
            rules.push(ProgramRule {
                head: rule.head.substitute(&binding),
                body: rule
                    .body
                    .iter()
                    .map(|l| match l {
                        Literal::Pos(a) => Literal::Pos(a.substitute(&binding)),
                        Literal::Neg(a) => Literal::Neg(a.substitute(&binding)),
                        other => other.clone(),
                    })
                    .collect(),
            });
            // odometer, last variable fastest
            let mut exhausted = true;
            for k in (0..vars.len()).rev() {
                counter[k] += 1;
                if counter[k] < constants.len() {
                    exhausted = false;
                    break;
                }
                counter[k] = 0;
            }
            if exhausted {
                break;
            }
        }
    }
    Ok(Program {
        rules,
        opens: program.opens.clone(),
    })
}

// ---------------------------------------------------------------------------
// Lowering

/// Translates a ground program into a complemented justification frame.
///
/// Atoms of open predicates become open facts. Every other atom is defined:
/// `not a` becomes `~a`, `true`/`false` the logical facts, and an atom with no
/// rules gets the single rule `a <- {false}`. Every positive defined head is
/// then complemented.
pub fn to_frame(program: &Program) -> Result<Frame, ProgramError> {
    let mut symbols = Symbols::new();
    for atom in program.ground_atoms() {
        if !atom.is_ground() {
            return Err(ProgramError::NonGround(atom.to_string()));
        }
        symbols.intern(&atom.to_string());
    }
    let lit = |l: &Literal, symbols: &Symbols| match l {
        Literal::Pos(a) => Fact::pos(symbols.get(&a.to_string()).expect("interned")),
        Literal::Neg(a) => Fact::neg(symbols.get(&a.to_string()).expect("interned")),
        Literal::True => Fact::TRUE,
        Literal::False => Fact::FALSE,
    };
    let mut rules = Vec::new();
    let mut has_rule = vec![false; symbols.len()];
    for rule in &program.rules {
        if program.is_open(&rule.head) {
            return Err(ProgramError::OpenAsHead(rule.head.to_string()));
        }
        let head = symbols.get(&rule.head.to_string()).expect("interned");
        has_rule[head.index()] = true;
        rules.push(Rule::new(Fact::pos(head), rule.body.iter().map(|l| lit(l, &symbols))));
    }
    let mut open = vec![false; symbols.len()];
    for atom in program.ground_atoms() {
        if program.is_open(atom) {
            open[symbols.get(&atom.to_string()).expect("interned").index()] = true;
        }
    }
    for a in symbols.atoms() {
        if !has_rule[a.index()] && !open[a.index()] {
            rules.push(Rule::new(Fact::pos(a), [Fact::FALSE]));
        }
    }
    let frame = Frame::build(symbols, rules)?;
    let heads: Vec<Fact> = frame.defined().filter(|f| f.sign() == Some(crate::fact::Sign::Positive)).collect();
    Ok(frame.complement(&heads)?)
}

/// Parses, grounds over the program's constants (plus `extra_constants`) and
/// lowers in one step.
pub fn load(text: &str, extra_constants: &BTreeSet<String>) -> Result<(Program, Frame), ProgramError> {
    let program = parse(text).map_err(ProgramError::Syntax)?;
    let mut domain = program.constants();
    domain.extend(extra_constants.iter().cloned());
    let ground = ground(&program, &domain)?;
    let frame = to_frame(&ground)?;
    Ok((ground, frame))
}

// ---------------------------------------------------------------------------
// Open-fact assignments

/// Truth values chosen for open atoms.
pub type OpenAssignment = BTreeMap<Atom, bool>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpensError {
    #[error("opens must be a JSON object mapping atoms to booleans: {0}")]
    Malformed(String),
    #[error("unknown fact {0}")]
    UnknownFact(String),
    #[error("{0} is not an open fact")]
    NotOpen(String),
}

/// Constants mentioned in the keys of an opens JSON object, for grounding.
pub fn opens_constants(json: &str) -> Result<BTreeSet<String>, OpensError> {
    let map: BTreeMap<String, bool> = serde_json::from_str(json).map_err(|e| OpensError::Malformed(e.to_string()))?;
    let mut out = BTreeSet::new();
    for key in map.keys() {
        let atom = parse_atom(key).map_err(|e| OpensError::Malformed(e.to_string()))?;
        for t in atom.args {
            if let Term::Const(c) = t {
                out.insert(c);
            }
        }
    }
    Ok(out)
}

/// Resolves a single open atom name against the frame.
pub fn resolve_open(frame: &Frame, name: &str) -> Result<Atom, OpensError> {
    let canonical = parse_atom(name)
        .map(|a| a.to_string())
        .map_err(|_| OpensError::UnknownFact(name.to_owned()))?;
    let atom = frame
        .symbols()
        .get(&canonical)
        .ok_or_else(|| OpensError::UnknownFact(name.to_owned()))?;
    if !frame.is_open(Fact::pos(atom)) {
        return Err(OpensError::NotOpen(canonical));
    }
    Ok(atom)
}

/// Reads `{"edge(a,b)": true, ...}` into an assignment over the frame's open atoms.
pub fn opens_from_json(frame: &Frame, json: &str) -> Result<OpenAssignment, OpensError> {
    let map: BTreeMap<String, bool> = serde_json::from_str(json).map_err(|e| OpensError::Malformed(e.to_string()))?;
    map.iter()
        .map(|(k, &v)| resolve_open(frame, k).map(|a| (a, v)))
        .collect()
}
