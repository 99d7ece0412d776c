//! Terms, sequents and inferences, plus their textual form.
//!
//! Terms are binary trees over atoms and the unit. Parentheses written in the
//! source are kept as tree structure: `(A * B) * C` and `A * (B * C)` are
//! different terms. Rendering uses the fewest parentheses that still parse
//! back to the same tree (`*` associates to the left).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use thiserror::Error;

/// Name of a propositional atom.
///
/// Names may contain letters, digits, `_`, `'` and an optional leading `-`,
/// optionally followed by one balanced parenthesised group (`Q(0.5)`,
/// `-(P * Q)`). The bare name `1` is reserved for the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    /// Builds an atom, checking the name against the lexical rules.
    pub fn new(name: &str) -> Result<Atom, SyntaxError> {
        let mut p = Parser::new(name);
        let atom = match p.primary()? {
            Term::Atom(a) => a,
            Term::Unit => {
                return Err(SyntaxError::new(0, "`1` is reserved for the unit"));
            }
            Term::Tensor(..) => return Err(SyntaxError::new(0, "expected an atom name")),
        };
        p.skip_ws();
        if p.pos != name.len() || atom.name() != name {
            return Err(SyntaxError::new(p.pos, "expected an atom name"));
        }
        Ok(atom)
    }

    pub(crate) fn new_unchecked(name: &str) -> Atom {
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A proposition: an atom, the unit `1`, or a tensor of two terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Atom(Atom),
    Unit,
    Tensor(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name).expect("invalid atom name"))
    }

    pub fn tensor(left: Term, right: Term) -> Term {
        Term::Tensor(Arc::new(left), Arc::new(right))
    }

    /// Left-associated tensor of the given terms, or the unit when empty.
    pub fn tensor_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        let mut it = terms.into_iter();
        match it.next() {
            None => Term::Unit,
            Some(first) => it.fold(first, Term::tensor),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Term::Unit)
    }

    /// Number of nodes in the term tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Unit => 1,
            Term::Tensor(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Atom occurrences from left to right; units are skipped.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Term::Atom(a) => out.push(a.clone()),
            Term::Unit => {}
            Term::Tensor(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    pub fn atom_vector(&self) -> AtomVector {
        AtomVector::from_atoms(self.atoms())
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Unit => f.write_str("1"),
            Term::Tensor(l, r) => {
                write!(f, "{l} * ")?;
                if matches!(**r, Term::Tensor(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ordered list of antecedent terms.
pub type Sequent = Vec<Term>;

/// `Γ ⊢ A`: an antecedent sequent and a single consequent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inference {
    pub antecedent: Sequent,
    pub consequent: Term,
}

impl Inference {
    pub fn new(antecedent: Sequent, consequent: Term) -> Inference {
        Inference { antecedent, consequent }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.consequent)
    }
}

impl fmt::Debug for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Atom occurrence counts. Only positive counts are stored.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomVector(BTreeMap<Atom, usize>);

impl AtomVector {
    pub fn new() -> AtomVector {
        AtomVector(BTreeMap::new())
    }

    pub fn from_atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> AtomVector {
        let mut v = AtomVector::new();
        for a in atoms {
            v.insert(&a, 1);
        }
        v
    }

    pub fn of_sequent(seq: &[Term]) -> AtomVector {
        AtomVector::from_atoms(seq.iter().flat_map(Term::atoms))
    }

    pub fn get(&self, atom: &Atom) -> usize {
        self.0.get(atom).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, atom: &Atom, count: usize) {
        if count > 0 {
            *self.0.entry(atom.clone()).or_insert(0) += count;
        }
    }

    /// Removes `count` occurrences; returns false (leaving the vector
    /// unchanged) when fewer are present.
    pub fn remove(&mut self, atom: &Atom, count: usize) -> bool {
        let have = self.get(atom);
        if have < count {
            return false;
        }
        if have == count {
            self.0.remove(atom);
        } else {
            self.0.insert(atom.clone(), have - count);
        }
        true
    }

    /// True when every count here is at most the count in `other`.
    pub fn is_sub(&self, other: &AtomVector) -> bool {
        self.0.iter().all(|(a, &n)| other.get(a) >= n)
    }

    /// `self - other`, or `None` when `other` is not contained in `self`.
    pub fn checked_sub(&self, other: &AtomVector) -> Option<AtomVector> {
        let mut out = self.clone();
        for (a, &n) in &other.0 {
            if !out.remove(a, n) {
                return None;
            }
        }
        Some(out)
    }

    pub fn scaled(&self, k: usize) -> AtomVector {
        AtomVector(self.0.iter().filter(|_| k > 0).map(|(a, &n)| (a.clone(), n * k)).collect())
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, usize)> {
        self.0.iter().map(|(a, &n)| (a, n))
    }

    /// Atoms listed with multiplicity in sorted order.
    pub fn to_atoms(&self) -> Vec<Atom> {
        self.0.iter().flat_map(|(a, &n)| std::iter::repeat_n(a.clone(), n)).collect()
    }

    /// Left-associated tensor of the atoms in sorted order, or `1`.
    pub fn to_term(&self) -> Term {
        Term::tensor_all(self.to_atoms().into_iter().map(Term::Atom))
    }
}

impl Add for AtomVector {
    type Output = AtomVector;
    fn add(mut self, rhs: AtomVector) -> AtomVector {
        for (a, n) in rhs.0 {
            self.insert(&a, n);
        }
        self
    }
}

impl Add for &AtomVector {
    type Output = AtomVector;
    fn add(self, rhs: &AtomVector) -> AtomVector {
        self.clone() + rhs.clone()
    }
}

impl fmt::Display for AtomVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, n)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: {n}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for AtomVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A parse failure with the byte offset at which it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError { offset, message: message.into() }
    }
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src);
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_inference(src: &str) -> Result<Inference, SyntaxError> {
    let mut p = Parser::new(src);
    let inf = p.inference()?;
    p.expect_end()?;
    Ok(inf)
}

/// Parses a comma-separated, possibly empty list of terms.
pub fn parse_sequent(src: &str) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(src);
    let seq = p.sequent()?;
    p.expect_end()?;
    Ok(seq)
}

pub fn render_term(t: &Term) -> String {
    t.to_string()
}

pub fn render_inference(inf: &Inference) -> String {
    inf.to_string()
}

pub fn atom_vector_of_term(t: &Term) -> AtomVector {
    t.atom_vector()
}

pub fn atom_vector_of_sequent(seq: &[Term]) -> AtomVector {
    AtomVector::of_sequent(seq)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Cursor over source text shared by the term, proof and file parsers.
pub(crate) struct Parser<'a> {
    pub(crate) src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Parser<'a> {
        Parser { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub(crate) fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected `{}`", self.peek().unwrap_or(' '))))
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.pos, message)
    }

    /// Consumes `tok` (after whitespace) if present.
    pub(crate) fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn eat_star(&mut self) -> bool {
        self.eat("*") || self.eat("⊗")
    }

    fn eat_turnstile(&mut self) -> bool {
        self.eat("|-") || self.eat("⊢")
    }

    pub(crate) fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.primary()?;
        while self.eat_star() {
            let r = self.primary()?;
            t = Term::tensor(t, r);
        }
        Ok(t)
    }

    /// An atom, `1`, or a parenthesised term.
    pub(crate) fn primary(&mut self) -> Result<Term, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("expected a term, found end of input")),
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(")") {
                    return Err(self.error("expected `)`"));
                }
                Ok(t)
            }
            Some('𝟙') => {
                self.pos += '𝟙'.len_utf8();
                Ok(Term::Unit)
            }
            Some(c) if c == '-' || is_name_char(c) => {
                let name = self.atom_name()?;
                if name == "1" {
                    Ok(Term::Unit)
                } else {
                    Ok(Term::Atom(Atom::new_unchecked(name)))
                }
            }
            Some(c) => Err(SyntaxError::new(start, format!("unexpected `{c}`"))),
        }
    }

    fn atom_name(&mut self) -> Result<&'a str, SyntaxError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        let body = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.peek() == Some('(') {
            // `-(..)` or `name(..)`
            self.balanced_group()?;
        } else if self.pos == body {
            return Err(SyntaxError::new(start, "expected an atom name after `-`"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn balanced_group(&mut self) -> Result<(), SyntaxError> {
        let open = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            self.pos += c.len_utf8();
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                _ => {}
            }
        }
        Err(SyntaxError::new(open, "unbalanced `(` in atom name"))
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, SyntaxError> {
        let mut seq = Vec::new();
        self.skip_ws();
        if self.pos == self.src.len() || self.rest().starts_with("|-") || self.rest().starts_with('⊢') {
            return Ok(seq);
        }
        seq.push(self.term()?);
        while self.eat(",") {
            seq.push(self.term()?);
        }
        Ok(seq)
    }

    pub(crate) fn inference(&mut self) -> Result<Inference, SyntaxError> {
        let antecedent = self.sequent()?;
        if !self.eat_turnstile() {
            return Err(self.error("expected `|-`"));
        }
        let consequent = self.term()?;
        Ok(Inference { antecedent, consequent })
    }
}
