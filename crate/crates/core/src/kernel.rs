//! Proof trees and the checker that computes their conclusions.
//!
//! Two calculi share one rule set. In [`Mode::T`] the exchange rule is
//! available and cut replaces the last antecedent item of its right premise.
//! In [`Mode::Tprime`] there is no exchange and cut may replace any item.
//! Placed left rules (`l1 q`, `lx q`) are accepted in both modes; in `T` they
//! are admissible through exchange so nothing new becomes provable.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Inference, Sequent, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// With exchange; cut on the last antecedent item.
    T,
    /// Without exchange; cut at any antecedent position.
    Tprime,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::T => "t",
            Mode::Tprime => "tprime",
        })
    }
}

/// One inference rule instance. Positions index the conclusion's antecedent
/// for left rules and the right premise's antecedent for cut.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `P ⊢ P` for an atom.
    Id(Atom),
    /// `⊢ 1`.
    RUnit,
    /// Inserts `1` at the position.
    LUnit(usize),
    /// Fuses the items at `q` and `q + 1` into their tensor.
    LTensor(usize),
    /// `Γ ⊢ A` and `Δ ⊢ B` give `Γ, Δ ⊢ A * B`.
    RTensor,
    /// Cut at the given position of the right premise; `None` means the last.
    Cut(Option<usize>),
    /// `Γ,Δ,Θ,Ψ ⊢ A` to `Γ,Θ,Δ,Ψ ⊢ A` with `Γ = [0,i)`, `Δ = [i,j)`,
    /// `Θ = [j,k)`.
    Exchange(usize, usize, usize),
    /// Theory axiom `⊢ X` for an available resource.
    RAxiom(Term),
    /// Theory axiom `X ⊢ 1` for a disposable resource.
    LAxiom(Term),
    /// Theory axiom `A ⊢ B` for a conversion.
    ConvAxiom(Term, Term),
}

impl Rule {
    pub fn arity(&self) -> usize {
        match self {
            Rule::Id(_) | Rule::RUnit | Rule::RAxiom(_) | Rule::LAxiom(_) | Rule::ConvAxiom(..) => 0,
            Rule::LUnit(_) | Rule::LTensor(_) | Rule::Exchange(..) => 1,
            Rule::RTensor | Rule::Cut(_) => 2,
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Rule::RAxiom(_) | Rule::LAxiom(_) | Rule::ConvAxiom(..))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Proof {
    pub rule: Rule,
    pub premises: Vec<Proof>,
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::proof_text::render_proof(self))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::proof_text::render_proof(self))
    }
}

impl Proof {
    pub fn leaf(rule: Rule) -> Proof {
        Proof { rule, premises: Vec::new() }
    }

    pub fn id(atom: Atom) -> Proof {
        Proof::leaf(Rule::Id(atom))
    }

    pub fn r_unit() -> Proof {
        Proof::leaf(Rule::RUnit)
    }

    pub fn l_unit(pos: usize, p: Proof) -> Proof {
        Proof { rule: Rule::LUnit(pos), premises: vec![p] }
    }

    pub fn l_tensor(pos: usize, p: Proof) -> Proof {
        Proof { rule: Rule::LTensor(pos), premises: vec![p] }
    }

    pub fn r_tensor(left: Proof, right: Proof) -> Proof {
        Proof { rule: Rule::RTensor, premises: vec![left, right] }
    }

    pub fn cut(pos: Option<usize>, left: Proof, right: Proof) -> Proof {
        Proof { rule: Rule::Cut(pos), premises: vec![left, right] }
    }

    pub fn exchange(i: usize, j: usize, k: usize, p: Proof) -> Proof {
        Proof { rule: Rule::Exchange(i, j, k), premises: vec![p] }
    }

    /// Number of rule applications in the tree.
    pub fn length(&self) -> usize {
        1 + self.premises.iter().map(Proof::length).sum::<usize>()
    }

    pub fn has_cut(&self) -> bool {
        matches!(self.rule, Rule::Cut(_)) || self.premises.iter().any(Proof::has_cut)
    }

    pub fn has_exchange(&self) -> bool {
        matches!(self.rule, Rule::Exchange(..)) || self.premises.iter().any(Proof::has_exchange)
    }

    pub fn has_axiom(&self) -> bool {
        self.rule.is_axiom() || self.premises.iter().any(Proof::has_axiom)
    }

    pub fn at(&self, path: &NodePath) -> Option<&Proof> {
        let mut node = self;
        for &i in &path.0 {
            node = node.premises.get(i)?;
        }
        Some(node)
    }

    pub fn at_mut(&mut self, path: &NodePath) -> Option<&mut Proof> {
        let mut node = self;
        for &i in &path.0 {
            node = node.premises.get_mut(i)?;
        }
        Some(node)
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((node, path)) = stack.pop() {
            for (i, p) in node.premises.iter().enumerate().rev() {
                let mut child = path.clone();
                child.push(i);
                stack.push((p, child));
            }
            out.push(NodePath(path));
        }
        out
    }
}

pub fn length(proof: &Proof) -> usize {
    proof.length()
}

/// Location of a node: the sequence of premise indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> NodePath {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> NodePath {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

/// Which theory axioms a checker accepts.
pub trait AxiomSet {
    fn is_available(&self, x: &Term) -> bool;
    fn is_disposable(&self, x: &Term) -> bool;
    fn is_conversion(&self, from: &Term, to: &Term) -> bool;
}

/// Accepts every axiom; used when only the shape of a proof matters.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnyAxioms;

impl AxiomSet for AnyAxioms {
    fn is_available(&self, _: &Term) -> bool {
        true
    }
    fn is_disposable(&self, _: &Term) -> bool {
        true
    }
    fn is_conversion(&self, _: &Term, _: &Term) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("at {path}: {reason}")]
    RuleMismatch { path: NodePath, reason: String },
    #[error("at {path}: position {position} out of range for antecedent of length {len}")]
    PositionOutOfRange { path: NodePath, position: usize, len: usize },
    #[error("at {path}: exchange is not available in mode tprime")]
    ExchangeInTprime { path: NodePath },
    #[error("at {path}: axiom `{axiom}` is not licensed by the theory")]
    UnknownAxiom { path: NodePath, axiom: String },
}

impl CheckError {
    pub fn path(&self) -> &NodePath {
        match self {
            CheckError::RuleMismatch { path, .. }
            | CheckError::PositionOutOfRange { path, .. }
            | CheckError::ExchangeInTprime { path }
            | CheckError::UnknownAxiom { path, .. } => path,
        }
    }
}

/// Checks a proof and returns its conclusion. Premises are checked before
/// their parent, left to right, so the reported node is the first invalid
/// one in that order.
pub fn check(proof: &Proof, mode: Mode, axioms: Option<&dyn AxiomSet>) -> Result<Inference, CheckError> {
    let mut path = Vec::new();
    check_at(proof, Some(mode), axioms, &mut path)
}

/// Conclusion of a proof read in either calculus: cuts may be placed
/// anywhere, exchange is allowed and theory axioms are taken on trust.
pub fn infer(proof: &Proof) -> Result<Inference, CheckError> {
    let mut path = Vec::new();
    check_at(proof, None, Some(&AnyAxioms), &mut path)
}

/// Conclusion of a proof whose theory axioms are taken on trust.
pub fn conclusion(proof: &Proof, mode: Mode) -> Result<Inference, CheckError> {
    check(proof, mode, Some(&AnyAxioms))
}

fn mismatch(path: &[usize], reason: impl Into<String>) -> CheckError {
    CheckError::RuleMismatch { path: NodePath(path.to_vec()), reason: reason.into() }
}

fn out_of_range(path: &[usize], position: usize, len: usize) -> CheckError {
    CheckError::PositionOutOfRange { path: NodePath(path.to_vec()), position, len }
}

fn check_at(
    proof: &Proof,
    mode: Option<Mode>,
    axioms: Option<&dyn AxiomSet>,
    path: &mut Vec<usize>,
) -> Result<Inference, CheckError> {
    if proof.premises.len() != proof.rule.arity() {
        return Err(mismatch(
            path,
            format!("rule expects {} premises, found {}", proof.rule.arity(), proof.premises.len()),
        ));
    }
    let mut prem = Vec::with_capacity(proof.premises.len());
    for (i, p) in proof.premises.iter().enumerate() {
        path.push(i);
        prem.push(check_at(p, mode, axioms, path)?);
        path.pop();
    }
    let unlicensed = |axiom: String| CheckError::UnknownAxiom { path: NodePath(path.to_vec()), axiom };
    match &proof.rule {
        Rule::Id(a) => Ok(Inference::new(vec![Term::Atom(a.clone())], Term::Atom(a.clone()))),
        Rule::RUnit => Ok(Inference::new(Vec::new(), Term::Unit)),
        Rule::LUnit(q) => {
            let mut inf = prem.pop().unwrap();
            if *q > inf.antecedent.len() {
                return Err(out_of_range(path, *q, inf.antecedent.len() + 1));
            }
            inf.antecedent.insert(*q, Term::Unit);
            Ok(inf)
        }
        Rule::LTensor(q) => {
            let mut inf = prem.pop().unwrap();
            if *q + 1 >= inf.antecedent.len() {
                return Err(out_of_range(path, *q, inf.antecedent.len().saturating_sub(1)));
            }
            let right = inf.antecedent.remove(*q + 1);
            let left = std::mem::replace(&mut inf.antecedent[*q], Term::Unit);
            inf.antecedent[*q] = Term::tensor(left, right);
            Ok(inf)
        }
        Rule::RTensor => {
            let right = prem.pop().unwrap();
            let left = prem.pop().unwrap();
            let mut antecedent = left.antecedent;
            antecedent.extend(right.antecedent);
            Ok(Inference::new(antecedent, Term::tensor(left.consequent, right.consequent)))
        }
        Rule::Cut(pos) => {
            let right = prem.pop().unwrap();
            let left = prem.pop().unwrap();
            let n = right.antecedent.len();
            if n == 0 {
                return Err(mismatch(path, "cut: right premise has an empty antecedent"));
            }
            let p = match (mode, pos) {
                (_, None) => n - 1,
                (Some(Mode::T), Some(p)) if *p != n - 1 => {
                    return Err(mismatch(
                        path,
                        format!("cut at position {p} but mode t cuts the last item (position {})", n - 1),
                    ));
                }
                (_, Some(p)) => *p,
            };
            if p >= n {
                return Err(out_of_range(path, p, n));
            }
            if right.antecedent[p] != left.consequent {
                return Err(mismatch(
                    path,
                    format!(
                        "cut formula `{}` does not match antecedent item `{}`",
                        left.consequent, right.antecedent[p]
                    ),
                ));
            }
            Ok(Inference::new(splice(&right.antecedent, p, &left.antecedent), right.consequent))
        }
        Rule::Exchange(i, j, k) => {
            if mode == Some(Mode::Tprime) {
                return Err(CheckError::ExchangeInTprime { path: NodePath(path.to_vec()) });
            }
            let mut inf = prem.pop().unwrap();
            let n = inf.antecedent.len();
            if !(i <= j && j <= k) {
                return Err(mismatch(path, format!("exchange bounds {i} {j} {k} are not ordered")));
            }
            if *k > n {
                return Err(out_of_range(path, *k, n));
            }
            inf.antecedent = block_swap(&inf.antecedent, *i, *j, *k);
            Ok(inf)
        }
        Rule::RAxiom(x) => {
            match axioms {
                Some(ax) if ax.is_available(x) => {}
                _ => return Err(unlicensed(format!("|- {x}"))),
            }
            Ok(Inference::new(Vec::new(), x.clone()))
        }
        Rule::LAxiom(x) => {
            match axioms {
                Some(ax) if ax.is_disposable(x) => {}
                _ => return Err(unlicensed(format!("{x} |- 1"))),
            }
            Ok(Inference::new(vec![x.clone()], Term::Unit))
        }
        Rule::ConvAxiom(a, b) => {
            match axioms {
                Some(ax) if ax.is_conversion(a, b) => {}
                _ => return Err(unlicensed(format!("{a} |- {b}"))),
            }
            Ok(Inference::new(vec![a.clone()], b.clone()))
        }
    }
}

/// `seq` with the item at `pos` replaced by `items`.
pub fn splice(seq: &[Term], pos: usize, items: &[Term]) -> Sequent {
    let mut out = Vec::with_capacity(seq.len() + items.len());
    out.extend_from_slice(&seq[..pos]);
    out.extend_from_slice(items);
    out.extend_from_slice(&seq[pos + 1..]);
    out
}

/// Swaps the adjacent blocks `[i,j)` and `[j,k)`.
pub fn block_swap<T: Clone>(seq: &[T], i: usize, j: usize, k: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(seq.len());
    out.extend_from_slice(&seq[..i]);
    out.extend_from_slice(&seq[j..k]);
    out.extend_from_slice(&seq[i..j]);
    out.extend_from_slice(&seq[k..]);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("shape error: {0}")]
    Shape(String),
}

/// A cut-free proof of `A ⊢ A` built by structural induction on `A`.
pub fn identity_proof(term: &Term) -> Proof {
    match term {
        Term::Atom(a) => Proof::id(a.clone()),
        Term::Unit => Proof::l_unit(0, Proof::r_unit()),
        Term::Tensor(l, r) => Proof::l_tensor(0, Proof::r_tensor(identity_proof(l), identity_proof(r))),
    }
}

/// From proofs of `A ⊢ B` and `C ⊢ D`, a proof of `A * C ⊢ B * D`.
pub fn tensor_proofs(first: Proof, second: Proof) -> Result<Proof, KernelError> {
    for p in [&first, &second] {
        let inf = infer(p)?;
        if inf.antecedent.len() != 1 {
            return Err(KernelError::Shape(format!(
                "expected a single antecedent item, found `{inf}`"
            )));
        }
    }
    Ok(Proof::l_tensor(0, Proof::r_tensor(first, second)))
}

/// The three eliminations that are admissible through cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elimination {
    /// `Γ, 1, Δ ⊢ A` gives `Γ, Δ ⊢ A`; the site is the position of `1`.
    LeftUnit,
    /// Removes a unit from the consequent. The site is the index of that
    /// unit among the consequent's leaves, and the unit must sit in one of
    /// the shapes `(A * 1) * B`, `A * 1` or `1 * B`.
    RightUnit,
    /// `Γ, A * B, Δ ⊢ C` gives `Γ, A, B, Δ ⊢ C`; the site is the position of
    /// the tensor item.
    LeftTensor,
}

/// Builds the derived elimination by cutting against an auxiliary proof.
pub fn derived_elimination(kind: Elimination, proof: Proof, site: usize, mode: Mode) -> Result<Proof, KernelError> {
    let inf = conclusion(&proof, mode)?;
    let n = inf.antecedent.len();
    match kind {
        Elimination::LeftUnit => {
            if site >= n || !inf.antecedent[site].is_unit() {
                return Err(KernelError::Shape(format!("no unit at position {site} of `{inf}`")));
            }
            Ok(positioned_cut(mode, Proof::r_unit(), proof, site, n, 0))
        }
        Elimination::LeftTensor => {
            let (a, b) = match inf.antecedent.get(site) {
                Some(Term::Tensor(a, b)) => ((**a).clone(), (**b).clone()),
                _ => return Err(KernelError::Shape(format!("no tensor at position {site} of `{inf}`"))),
            };
            let aux = Proof::r_tensor(identity_proof(&a), identity_proof(&b));
            Ok(positioned_cut(mode, aux, proof, site, n, 2))
        }
        Elimination::RightUnit => {
            let aux = right_unit_aux(&inf.consequent, site)
                .ok_or_else(|| KernelError::Shape(format!("no removable unit at leaf {site} of `{}`", inf.consequent)))?;
            Ok(Proof::cut(last_cut(mode, 0), proof, aux))
        }
    }
}

fn leaves(t: &Term) -> usize {
    match t {
        Term::Atom(_) | Term::Unit => 1,
        Term::Tensor(l, r) => leaves(l) + leaves(r),
    }
}

/// Proof of `C ⊢ C'` where `C'` drops the unit at leaf `site`.
fn right_unit_aux(c: &Term, site: usize) -> Option<Proof> {
    let Term::Tensor(l, r) = c else { return None };
    if let Term::Tensor(a, u) = &**l {
        if u.is_unit() && site == leaves(a) {
            // (A * 1) * B ⊢ A * B
            let base = Proof::r_tensor(identity_proof(a), identity_proof(r));
            return Some(Proof::l_tensor(0, Proof::l_tensor(0, Proof::l_unit(1, base))));
        }
    }
    if r.is_unit() && site == leaves(l) {
        return Some(Proof::l_tensor(0, Proof::l_unit(1, identity_proof(l))));
    }
    if l.is_unit() && site == 0 {
        return Some(Proof::l_tensor(0, Proof::l_unit(0, identity_proof(r))));
    }
    None
}

/// Cut position to write for a cut on item `pos` that is also the last one.
pub fn last_cut(mode: Mode, pos: usize) -> Option<usize> {
    match mode {
        Mode::T => None,
        Mode::Tprime => Some(pos),
    }
}

/// Cut of `left` (with `g` antecedent items) into item `pos` of `right`
/// (with `n` antecedent items). In mode `T` a non-final position is reached
/// by exchanging the item to the end and the inserted block back.
pub fn positioned_cut(mode: Mode, left: Proof, right: Proof, pos: usize, n: usize, g: usize) -> Proof {
    if mode == Mode::Tprime {
        return Proof::cut(Some(pos), left, right);
    }
    if pos + 1 == n {
        return Proof::cut(None, left, right);
    }
    let theta = n - pos - 1;
    let moved = Proof::exchange(pos, pos + 1, n, right);
    let cut = Proof::cut(None, left, moved);
    if g == 0 {
        cut
    } else {
        Proof::exchange(pos, pos + theta, pos + theta + g, cut)
    }
}

/// Rewrites a proof so it checks in mode `T`: every cut off the last
/// position is wrapped in exchanges.
pub fn to_mode_t(proof: &Proof) -> Result<Proof, KernelError> {
    let premises = proof.premises.iter().map(to_mode_t).collect::<Result<Vec<_>, _>>()?;
    match proof.rule {
        Rule::Cut(pos) => {
            let left_inf = infer(&premises[0])?;
            let right_inf = infer(&premises[1])?;
            let n = right_inf.antecedent.len();
            if n == 0 {
                return Err(KernelError::Shape("cut into an empty antecedent".into()));
            }
            let p = pos.unwrap_or(n - 1);
            let mut it = premises.into_iter();
            let (l, r) = (it.next().unwrap(), it.next().unwrap());
            Ok(positioned_cut(Mode::T, l, r, p, n, left_inf.antecedent.len()))
        }
        _ => Ok(Proof { rule: proof.rule.clone(), premises }),
    }
}
