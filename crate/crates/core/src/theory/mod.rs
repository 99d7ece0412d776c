//! Resource theories: available resources, disposable resources and
//! conversions, added as axioms on top of the exchange calculus.
//!
//! Text format, one statement per line, `#` comments:
//!
//! ```text
//! atoms C Q E Q_A Q_B ;
//! free C ;
//! dispose C, Q_A ;
//! convert E -> Q_A * Q_B ;
//! ```

mod decide;
mod encode;
mod lp;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use decide::{decide_in_theory, witness_for, AxiomCounts, TheoryVerdict, DEFAULT_CAP};
pub use encode::{encode_conversion, lift, EncodingStyle};
pub use lp::rationally_feasible;

use crate::kernel::{AxiomSet, CheckError, KernelError};
use crate::rewrite::RewriteError;
use crate::syntax::{Atom, AtomVector, Parser, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("atom `{0}` is not declared by the theory")]
    UndeclaredAtom(Atom),
    #[error("the theory has conversions; lifting covers available and disposable resources only")]
    ConversionPresent,
    #[error("conversion `{from} -> {to}` shares atoms between its sides")]
    SharedAtoms { from: Term, to: Term },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Check(#[from] CheckError),
    #[error("{0}")]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    Rewrite(#[from] RewriteError),
    #[error("count vector has {got} entries, theory needs {want}")]
    CountMismatch { got: usize, want: usize },
}

/// A conversion axiom `from ⊢ to`, stored after removing atoms common to
/// both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conversion {
    pub from: Term,
    pub to: Term,
}

impl fmt::Display for Conversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    atoms: BTreeSet<Atom>,
    available: Vec<Term>,
    disposable: Vec<Term>,
    conversions: Vec<Conversion>,
}

impl Theory {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Theory {
        Theory { atoms: atoms.into_iter().collect(), ..Theory::default() }
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn available(&self) -> &[Term] {
        &self.available
    }

    pub fn disposable(&self) -> &[Term] {
        &self.disposable
    }

    pub fn conversions(&self) -> &[Conversion] {
        &self.conversions
    }

    pub fn declare(&mut self, atom: Atom) {
        self.atoms.insert(atom);
    }

    pub fn check_declared(&self, t: &Term) -> Result<(), TheoryError> {
        match t.atoms().into_iter().find(|a| !self.atoms.contains(a)) {
            Some(a) => Err(TheoryError::UndeclaredAtom(a)),
            None => Ok(()),
        }
    }

    pub fn add_available(&mut self, x: Term) -> Result<(), TheoryError> {
        self.check_declared(&x)?;
        if !self.available.contains(&x) {
            self.available.push(x);
        }
        Ok(())
    }

    pub fn add_disposable(&mut self, x: Term) -> Result<(), TheoryError> {
        self.check_declared(&x)?;
        if !self.disposable.contains(&x) {
            self.disposable.push(x);
        }
        Ok(())
    }

    /// Adds `from ⊢ to`. Atoms occurring on both sides are cancelled first;
    /// a side left without atoms becomes `1`.
    pub fn add_conversion(&mut self, from: Term, to: Term) -> Result<(), TheoryError> {
        self.check_declared(&from)?;
        self.check_declared(&to)?;
        let conv = reduce_conversion(from, to);
        if !self.conversions.contains(&conv) {
            self.conversions.push(conv);
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.available.is_empty() && self.disposable.is_empty() && self.conversions.is_empty()
    }

    pub fn parse(src: &str) -> Result<Theory, TheoryError> {
        let mut theory = Theory::default();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let text = raw.split('#').next().unwrap_or("");
            for stmt in text.split(';') {
                let stmt = stmt.trim();
                if stmt.is_empty() {
                    continue;
                }
                parse_statement(&mut theory, stmt)
                    .map_err(|message| TheoryError::Parse { line, message })?;
            }
        }
        Ok(theory)
    }

    /// The theory in its text format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.atoms.iter().map(Atom::name).collect();
        out.push_str(&format!("atoms {} ;\n", names.join(" ")));
        for x in &self.available {
            out.push_str(&format!("free {x} ;\n"));
        }
        for x in &self.disposable {
            out.push_str(&format!("dispose {x} ;\n"));
        }
        for c in &self.conversions {
            out.push_str(&format!("convert {c} ;\n"));
        }
        out
    }
}

fn parse_statement(theory: &mut Theory, stmt: &str) -> Result<(), String> {
    let (keyword, rest) = match stmt.find(char::is_whitespace) {
        Some(i) => (&stmt[..i], stmt[i..].trim()),
        None => (stmt, ""),
    };
    let terms = |s: &str| -> Result<Vec<Term>, String> {
        s.split(',').map(|t| crate::syntax::parse_term(t.trim()).map_err(|e| e.to_string())).collect()
    };
    match keyword {
        "atoms" => {
            let mut p = Parser::new(rest);
            while !p.at_end() {
                match p.primary().map_err(|e| e.to_string())? {
                    Term::Atom(a) => theory.declare(a),
                    other => return Err(format!("`{other}` is not an atom name")),
                }
            }
            Ok(())
        }
        "free" => {
            for t in terms(rest)? {
                theory.add_available(t).map_err(|e| e.to_string())?;
            }
            Ok(())
        }
        "dispose" => {
            for t in terms(rest)? {
                theory.add_disposable(t).map_err(|e| e.to_string())?;
            }
            Ok(())
        }
        "convert" => {
            let mut p = Parser::new(rest);
            let from = p.term().map_err(|e| e.to_string())?;
            if !p.eat("->") {
                return Err("expected `->` in conversion".into());
            }
            let to = p.term().map_err(|e| e.to_string())?;
            p.expect_end().map_err(|e| e.to_string())?;
            theory.add_conversion(from, to).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown statement `{other}`")),
    }
}

/// Cancels atoms common to both sides, matching occurrences left to right.
fn reduce_conversion(from: Term, to: Term) -> Conversion {
    let common = {
        let a = from.atom_vector();
        let b = to.atom_vector();
        let mut c = AtomVector::new();
        for (atom, n) in a.iter() {
            c.insert(atom, n.min(b.get(atom)));
        }
        c
    };
    if common.is_empty() {
        return Conversion { from, to };
    }
    let strip = |t: &Term| {
        let mut left = common.clone();
        let kept = t.atoms().into_iter().filter(|a| !left.remove(a, 1));
        Term::tensor_all(kept.map(Term::Atom).collect::<Vec<_>>())
    };
    Conversion { from: strip(&from), to: strip(&to) }
}

impl AxiomSet for Theory {
    fn is_available(&self, x: &Term) -> bool {
        self.available.contains(x)
    }
    fn is_disposable(&self, x: &Term) -> bool {
        self.disposable.contains(x)
    }
    fn is_conversion(&self, from: &Term, to: &Term) -> bool {
        self.conversions.iter().any(|c| &c.from == from && &c.to == to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    #[test]
    fn parses_statements() {
        let src = "# teleportation\natoms C Q E Q_A Q_B ;\nfree C ;\ndispose C ;\ndispose Q_A ;\nconvert E -> Q_A * Q_B ;\n";
        let t = Theory::parse(src).unwrap();
        assert_eq!(t.atoms().len(), 5);
        assert_eq!(t.available(), &[parse_term("C").unwrap()]);
        assert_eq!(t.disposable().len(), 2);
        assert_eq!(t.conversions()[0].to_string(), "E -> Q_A * Q_B");
        assert_eq!(Theory::parse(&t.render()).unwrap(), t);
    }

    #[test]
    fn rejects_undeclared_atoms() {
        let err = Theory::parse("atoms C ;\nfree D ;\n").unwrap_err();
        assert!(matches!(err, TheoryError::Parse { line: 2, .. }));
        let mut t = Theory::new([Atom::new("C").unwrap()]);
        assert_eq!(
            t.add_available(parse_term("D").unwrap()),
            Err(TheoryError::UndeclaredAtom(Atom::new("D").unwrap()))
        );
    }

    #[test]
    fn conversions_cancel_common_atoms() {
        let t = Theory::parse("atoms A B C ;\nconvert A * C -> C * B ;\nconvert A * A -> A ;\nconvert A -> B ;\n").unwrap();
        let shown: Vec<String> = t.conversions().iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["A -> B", "A -> 1"]);
    }
}
