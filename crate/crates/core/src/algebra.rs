//! Ordered commutative monoid models, forcing and semantic entailment.
//!
//! A model is a finite commutative monoid with a compatible preorder and a
//! valuation of atoms. An element `m` forces an atom `P` when `m ≤ v(P)`,
//! forces `1` when it is the unit, and forces `A * B` when it factors as
//! `n1 · n2` with `n1` forcing `A` and `n2` forcing `B`.
//!
//! Model text format, one statement per line, `#` comments:
//!
//! ```text
//! elements e a b ;
//! unit e ;          # optional: defaults to `e`, else the first element
//! op a b = b ;      # every ordered pair must be given
//! le a b ;          # reflexive pairs are implied
//! val P = a ;
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, AtomVector, Term};
use crate::theory::Theory;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("atom `{0}` has no value in the model")]
    UnknownAtom(Atom),
    #[error("invalid model: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidModel {
    names: Vec<String>,
    unit: usize,
    op: Vec<Vec<usize>>,
    le: Vec<Vec<bool>>,
    valuation: BTreeMap<Atom, usize>,
}

/// A failed model law, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Associativity { x: String, y: String, z: String },
    LeftUnit { x: String },
    RightUnit { x: String },
    Commutativity { x: String, y: String },
    Reflexivity { x: String },
    Transitivity { x: String, y: String, z: String },
    /// `r ≤ s` and `x ≤ y` but not `r·x ≤ s·y`.
    Compatibility { r: String, s: String, x: String, y: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { x, y, z } => write!(f, "({x}·{y})·{z} != {x}·({y}·{z})"),
            Violation::LeftUnit { x } => write!(f, "e·{x} != {x}"),
            Violation::RightUnit { x } => write!(f, "{x}·e != {x}"),
            Violation::Commutativity { x, y } => write!(f, "{x}·{y} != {y}·{x}"),
            Violation::Reflexivity { x } => write!(f, "not {x} <= {x}"),
            Violation::Transitivity { x, y, z } => write!(f, "{x} <= {y} <= {z} but not {x} <= {z}"),
            Violation::Compatibility { r, s, x, y } => {
                write!(f, "{r} <= {s} and {x} <= {y} but not {r}·{x} <= {s}·{y}")
            }
        }
    }
}

impl MonoidModel {
    /// Builds a model from tables indexed by element position. `le` is used
    /// as given; `parse` adds reflexive pairs.
    pub fn from_tables(
        names: Vec<String>,
        unit: usize,
        op: Vec<Vec<usize>>,
        le: Vec<Vec<bool>>,
        valuation: BTreeMap<Atom, usize>,
    ) -> Result<MonoidModel, ModelError> {
        let n = names.len();
        let square = |rows: usize, cols: &dyn Fn(usize) -> usize| rows == n && (0..n).all(|i| cols(i) == n);
        if n == 0 || unit >= n || !square(op.len(), &|i| op[i].len()) || !square(le.len(), &|i| le[i].len()) {
            return Err(ModelError::Invalid("tables do not match the element list".into()));
        }
        if op.iter().flatten().any(|&v| v >= n) || valuation.values().any(|&v| v >= n) {
            return Err(ModelError::Invalid("table entry out of range".into()));
        }
        Ok(MonoidModel { names, unit, op, le, valuation })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.le[x][y]
    }

    pub fn element(&self, name: &str) -> Result<usize, ModelError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| ModelError::UnknownElement(name.to_string()))
    }

    pub fn value(&self, atom: &Atom) -> Result<usize, ModelError> {
        self.valuation.get(atom).copied().ok_or_else(|| ModelError::UnknownAtom(atom.clone()))
    }

    pub fn set_value(&mut self, atom: Atom, element: usize) {
        assert!(element < self.size());
        self.valuation.insert(atom, element);
    }

    pub fn valuation(&self) -> &BTreeMap<Atom, usize> {
        &self.valuation
    }

    /// The valuation extended to terms: tensor as product, `1` as the unit.
    pub fn eval(&self, t: &Term) -> Result<usize, ModelError> {
        match t {
            Term::Atom(a) => self.value(a),
            Term::Unit => Ok(self.unit),
            Term::Tensor(l, r) => Ok(self.mul(self.eval(l)?, self.eval(r)?)),
        }
    }

    pub fn parse(src: &str) -> Result<MonoidModel, ModelError> {
        let mut names: Vec<String> = Vec::new();
        let mut unit: Option<String> = None;
        let mut ops: Vec<(usize, String, String, String)> = Vec::new();
        let mut les: Vec<(usize, String, String)> = Vec::new();
        let mut vals: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| ModelError::Parse { line, message };
            let text = raw.split('#').next().unwrap_or("");
            for stmt in text.split(';') {
                let words: Vec<&str> = stmt.split_whitespace().collect();
                match words.as_slice() {
                    [] => {}
                    ["elements", rest @ ..] => names.extend(rest.iter().map(|s| s.to_string())),
                    ["unit", u] => unit = Some(u.to_string()),
                    ["op", x, y, "=", z] => ops.push((line, x.to_string(), y.to_string(), z.to_string())),
                    ["le", x, y] => les.push((line, x.to_string(), y.to_string())),
                    ["val", p, "=", x] => vals.push((line, p.to_string(), x.to_string())),
                    _ => return Err(err(format!("cannot parse `{}`", stmt.trim()))),
                }
            }
        }
        let n = names.len();
        if n == 0 {
            return Err(ModelError::Parse { line: 1, message: "no elements declared".into() });
        }
        if names.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(ModelError::Parse { line: 1, message: "duplicate element name".into() });
        }
        let find = |line: usize, name: &str| {
            names.iter().position(|x| x == name).ok_or_else(|| ModelError::Parse {
                line,
                message: format!("unknown element `{name}`"),
            })
        };
        let unit = match unit {
            Some(u) => find(0, &u)?,
            None => names.iter().position(|x| x == "e").unwrap_or(0),
        };
        let mut op = vec![vec![None; n]; n];
        for (line, x, y, z) in &ops {
            let (x, y, z) = (find(*line, x)?, find(*line, y)?, find(*line, z)?);
            if op[x][y].is_some_and(|old| old != z) {
                return Err(ModelError::Parse { line: *line, message: "conflicting product".into() });
            }
            op[x][y] = Some(z);
        }
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = op[x][y].ok_or_else(|| ModelError::Parse {
                    line: 0,
                    message: format!("missing product `op {} {}`", names[x], names[y]),
                })?;
            }
        }
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (line, x, y) in &les {
            le[find(*line, x)?][find(*line, y)?] = true;
        }
        let mut valuation = BTreeMap::new();
        for (line, p, x) in &vals {
            let atom = Atom::new(p).map_err(|e| ModelError::Parse { line: *line, message: e.to_string() })?;
            valuation.insert(atom, find(*line, x)?);
        }
        MonoidModel::from_tables(names, unit, table, le, valuation)
    }

    pub fn render(&self) -> String {
        let mut out = format!("elements {} ;\nunit {} ;\n", self.names.join(" "), self.names[self.unit]);
        for x in 0..self.size() {
            for y in 0..self.size() {
                out.push_str(&format!("op {} {} = {} ;\n", self.names[x], self.names[y], self.names[self.op[x][y]]));
            }
        }
        for x in 0..self.size() {
            for y in 0..self.size() {
                if x != y && self.le[x][y] {
                    out.push_str(&format!("le {} {} ;\n", self.names[x], self.names[y]));
                }
            }
        }
        for (a, &v) in &self.valuation {
            out.push_str(&format!("val {a} = {} ;\n", self.names[v]));
        }
        out
    }
}

/// Every failed law of an ordered commutative monoid.
pub fn validate_model(model: &MonoidModel) -> Vec<Violation> {
    let n = model.size();
    let name = |i: usize| model.names[i].clone();
    let mut out = Vec::new();
    for x in 0..n {
        if model.mul(model.unit, x) != x {
            out.push(Violation::LeftUnit { x: name(x) });
        }
        if model.mul(x, model.unit) != x {
            out.push(Violation::RightUnit { x: name(x) });
        }
        if !model.leq(x, x) {
            out.push(Violation::Reflexivity { x: name(x) });
        }
        for y in 0..n {
            if x < y && model.mul(x, y) != model.mul(y, x) {
                out.push(Violation::Commutativity { x: name(x), y: name(y) });
            }
            for z in 0..n {
                if model.mul(model.mul(x, y), z) != model.mul(x, model.mul(y, z)) {
                    out.push(Violation::Associativity { x: name(x), y: name(y), z: name(z) });
                }
                if model.leq(x, y) && model.leq(y, z) && !model.leq(x, z) {
                    out.push(Violation::Transitivity { x: name(x), y: name(y), z: name(z) });
                }
            }
        }
    }
    for r in 0..n {
        for s in 0..n {
            if !model.leq(r, s) {
                continue;
            }
            for x in 0..n {
                for y in 0..n {
                    if model.leq(x, y) && !model.leq(model.mul(r, x), model.mul(s, y)) {
                        out.push(Violation::Compatibility { r: name(r), s: name(s), x: name(x), y: name(y) });
                    }
                }
            }
        }
    }
    out
}

/// Elements forcing the term, as a membership table.
pub fn forcing_set(model: &MonoidModel, t: &Term) -> Result<Vec<bool>, ModelError> {
    let n = model.size();
    match t {
        Term::Atom(a) => {
            let v = model.value(a)?;
            Ok((0..n).map(|m| model.leq(m, v)).collect())
        }
        Term::Unit => Ok((0..n).map(|m| m == model.unit).collect()),
        Term::Tensor(l, r) => {
            let fl = forcing_set(model, l)?;
            let fr = forcing_set(model, r)?;
            Ok(product(model, &fl, &fr))
        }
    }
}

fn product(model: &MonoidModel, a: &[bool], b: &[bool]) -> Vec<bool> {
    let n = model.size();
    let mut out = vec![false; n];
    for x in (0..n).filter(|&x| a[x]) {
        for y in (0..n).filter(|&y| b[y]) {
            out[model.mul(x, y)] = true;
        }
    }
    out
}

pub fn forces(model: &MonoidModel, element: &str, t: &Term) -> Result<bool, ModelError> {
    let m = model.element(element)?;
    Ok(forcing_set(model, t)?[m])
}

/// `Γ ⊨ B` in the model: every product of elements forcing the items of
/// `Γ` forces `B`; for empty `Γ`, the unit forces `B`.
pub fn entails(model: &MonoidModel, antecedent: &[Term], consequent: &Term) -> Result<bool, ModelError> {
    let target = forcing_set(model, consequent)?;
    let mut reach: Vec<bool> = (0..model.size()).map(|m| m == model.unit).collect();
    for t in antecedent {
        reach = product(model, &reach, &forcing_set(model, t)?);
    }
    Ok(reach.iter().zip(&target).all(|(&r, &t)| !r || t))
}

/// Necessary conditions for the model to validate a theory's axioms:
/// `e ≤ v(X)` for available `X`, `v(Y) ≤ e` for disposable `Y`, and
/// `v(A) ≤ v(B)` for a conversion `A ⊢ B`. Returns the failing axioms.
pub fn theory_constraints(model: &MonoidModel, theory: &Theory) -> Result<Vec<String>, ModelError> {
    let mut out = Vec::new();
    let e = model.unit;
    for x in theory.available() {
        if !model.leq(e, model.eval(x)?) {
            out.push(format!("available {x}: e <= v({x}) fails"));
        }
    }
    for y in theory.disposable() {
        if !model.leq(model.eval(y)?, e) {
            out.push(format!("disposable {y}: v({y}) <= e fails"));
        }
    }
    for c in theory.conversions() {
        if !model.leq(model.eval(&c.from)?, model.eval(&c.to)?) {
            out.push(format!("conversion {c}: v({}) <= v({}) fails", c.from, c.to));
        }
    }
    Ok(out)
}

/// The free commutative monoid on atoms, ordered by equality, with each
/// atom valued as itself. Elements are atom multisets.
#[derive(Debug, Clone, Default)]
pub struct FreeModel;

impl FreeModel {
    /// Forcing by the inductive clauses, trying every split of `m` for a
    /// tensor.
    pub fn forces(&self, m: &AtomVector, t: &Term) -> bool {
        match t {
            Term::Atom(a) => m.total() == 1 && m.get(a) == 1,
            Term::Unit => m.is_empty(),
            Term::Tensor(l, r) => sub_multisets(m).into_iter().any(|n1| {
                let n2 = m.checked_sub(&n1).expect("sub-multiset");
                self.forces(&n1, l) && self.forces(&n2, r)
            }),
        }
    }

    /// Elements forcing the term; finite because the order is equality.
    pub fn forcing_set(&self, t: &Term) -> BTreeSet<AtomVector> {
        match t {
            Term::Atom(a) => BTreeSet::from([AtomVector::from_atoms([a.clone()])]),
            Term::Unit => BTreeSet::from([AtomVector::new()]),
            Term::Tensor(l, r) => {
                let (fl, fr) = (self.forcing_set(l), self.forcing_set(r));
                fl.iter().flat_map(|x| fr.iter().map(move |y| x + y)).collect()
            }
        }
    }
}

fn sub_multisets(m: &AtomVector) -> Vec<AtomVector> {
    let mut out = vec![AtomVector::new()];
    for (a, n) in m.iter() {
        let mut next = Vec::new();
        for base in &out {
            for k in 0..=n {
                let mut v = base.clone();
                v.insert(a, k);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Entailment in the free model, computed from forcing sets.
pub fn entails_free(antecedent: &[Term], consequent: &Term) -> bool {
    let free = FreeModel;
    let target = free.forcing_set(consequent);
    let mut reach = BTreeSet::from([AtomVector::new()]);
    for t in antecedent {
        let f = free.forcing_set(t);
        reach = reach.iter().flat_map(|x| f.iter().map(move |y| x + y)).collect();
    }
    reach.is_subset(&target)
}

/// Every ordered commutative monoid on `n` labelled elements with unit
/// `e` (index 0), other elements named `a`, `b`, ..., and an empty
/// valuation. Used to search for small models.
pub fn enumerate_models(n: usize) -> Vec<MonoidModel> {
    assert!((1..=5).contains(&n), "only small models are enumerated");
    let names: Vec<String> =
        std::iter::once("e".to_string()).chain((0..n - 1).map(|i| ((b'a' + i as u8) as char).to_string())).collect();
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let mut monoids = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let mut op = vec![vec![0; n]; n];
        for (x, row) in op.iter_mut().enumerate() {
            row[0] = x;
        }
        op[0] = (0..n).collect();
        for (&(x, y), &z) in pairs.iter().zip(&choice) {
            op[x][y] = z;
            op[y][x] = z;
        }
        let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| op[op[x][y]][z] == op[x][op[y][z]])));
        if assoc {
            monoids.push(op);
        }
        // next table in odometer order
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let offdiag: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut preorders = Vec::new();
    for bits in 0u32..(1 << offdiag.len()) {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(x, y)) in offdiag.iter().enumerate() {
            le[x][y] = bits >> k & 1 == 1;
        }
        let transitive = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(le[x][y] && le[y][z]) || le[x][z])));
        if transitive {
            preorders.push(le);
        }
    }
    let mut out = Vec::new();
    for op in &monoids {
        for le in &preorders {
            let compatible = (0..n).all(|r| {
                (0..n).all(|s| !le[r][s] || (0..n).all(|x| (0..n).all(|y| !le[x][y] || le[op[r][x]][op[s][y]])))
            });
            if compatible {
                out.push(MonoidModel {
                    names: names.clone(),
                    unit: 0,
                    op: op.clone(),
                    le: le.clone(),
                    valuation: BTreeMap::new(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    const IDEMPOTENT: &str = "elements e a ;\nop e e = e ;\nop e a = a ;\nop a e = a ;\nop a a = a ;\nval P = a ;\n";

    #[test]
    fn two_element_model_is_valid() {
        let m = MonoidModel::parse(IDEMPOTENT).unwrap();
        assert_eq!(validate_model(&m), vec![]);
        assert!(forces(&m, "a", &parse_term("P").unwrap()).unwrap());
        assert!(forces(&m, "a", &parse_term("P * P").unwrap()).unwrap());
        assert!(!forces(&m, "e", &parse_term("P").unwrap()).unwrap());
        assert!(matches!(forces(&m, "z", &parse_term("P").unwrap()), Err(ModelError::UnknownElement(_))));
        assert!(matches!(forces(&m, "a", &parse_term("Q").unwrap()), Err(ModelError::UnknownAtom(_))));
        assert_eq!(MonoidModel::parse(&m.render()).unwrap(), m);
    }

    #[test]
    fn incompatible_order_is_reported() {
        let src = "elements e a ;\nop e e = e ;\nop e a = a ;\nop a e = a ;\nop a a = e ;\nle e a ;\nval P = a ;\n";
        let m = MonoidModel::parse(src).unwrap();
        let v = validate_model(&m);
        assert!(v.iter().any(|x| matches!(x, Violation::Compatibility { .. })), "{v:?}");
    }

    #[test]
    fn missing_products_are_rejected() {
        let err = MonoidModel::parse("elements e a ;\nop a a = a ;\n").unwrap_err();
        assert!(err.to_string().contains("missing product"));
    }

    #[test]
    fn entailment_in_a_model() {
        let m = MonoidModel::parse(IDEMPOTENT).unwrap();
        let p = parse_term("P").unwrap();
        let pp = parse_term("P * P").unwrap();
        // idempotent element: P entails P * P here though it is not provable
        assert!(entails(&m, std::slice::from_ref(&p), &pp).unwrap());
        assert!(entails(&m, &[p.clone(), p.clone()], &pp).unwrap());
        assert!(!entails(&m, &[], &p).unwrap());
        assert!(entails(&m, &[], &Term::Unit).unwrap());
    }

    #[test]
    fn free_model_forcing_is_atom_equality() {
        let t = parse_term("(A * 1) * (B * A)").unwrap();
        let m = t.atom_vector();
        assert!(FreeModel.forces(&m, &t));
        let mut other = m.clone();
        other.insert(&Atom::new("B").unwrap(), 1);
        assert!(!FreeModel.forces(&other, &t));
        assert_eq!(FreeModel.forcing_set(&t), BTreeSet::from([m]));
        assert!(entails_free(&[parse_term("B * A").unwrap(), parse_term("A").unwrap()], &t));
        assert!(!entails_free(&[parse_term("B").unwrap()], &t));
    }

    #[test]
    fn small_model_counts() {
        // commutative monoids with a chosen unit, labelled: 1, 2 and 7 of
        // orders 1, 2, 3 up to relabelling non-unit elements; with every
        // compatible preorder
        assert_eq!(enumerate_models(1).len(), 1);
        let two = enumerate_models(2);
        assert!(two.iter().all(|m| validate_model(m).is_empty()));
        // {e,a} with a·a = a: preorders =, e<=a, a<=e, full; with a·a = e:
        // = and full only
        assert_eq!(two.len(), 6);
    }
}
