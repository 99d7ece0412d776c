//! Proof transformations, cut elimination and canonical forms.
//!
//! Eleven local transformations relate proofs with the same conclusion.
//! Each has a forward and an inverse direction:
//!
//! | name            | forward                                                  |
//! |-----------------|----------------------------------------------------------|
//! | `cut-cut-v`     | `cut(cut(a, b), c)` to `cut(a, cut(b, c))`               |
//! | `cut-cut-h`     | two cuts into one proof: earlier item first to later first |
//! | `cut-tensor`    | `cut(rx(a, b), lx(c))` to `cut(a, cut(b, c))`            |
//! | `one-cut`       | `cut(r1, l1(c))` to `c`                                  |
//! | `lx-cut-l`      | `cut(lx(a), b)` to `lx(cut(a, b))`                       |
//! | `lx-cut-r`      | `cut(a, lx(b))` to `lx(cut(a, b))`, fused pair off the cut item |
//! | `rx-cut`        | `cut(a, rx(b, c))` to `rx` with the cut moved into a premise |
//! | `r-id`          | `cut(a, id)` to `a`                                      |
//! | `l-id`          | `cut(id, a)` to `a`                                      |
//! | `lx-rx`         | `rx(lx(a), b)` to `lx(rx(a, b))` (either premise)        |
//! | `l1-rx`         | `rx(l1(a), b)` to `l1(rx(a, b))` (either premise)        |
//!
//! The inverses of `one-cut` and `l-id` introduce a cut at an antecedent
//! position; [`apply_transform_at`] takes that position, and
//! [`apply_transform`] uses the last one.

mod canonical;
mod cut_elim;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use canonical::canonical_proof;
pub use cut_elim::{eliminate_cuts, eliminate_cuts_traced, CutElimination, CutStep, StepRule};

use crate::kernel::{
    check, identity_proof, infer, to_mode_t, AnyAxioms, CheckError, KernelError, Mode, NodePath, Proof, Rule,
};
use crate::syntax::Inference;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{transform} does not apply at {path}: {reason}")]
    PatternMismatch { path: NodePath, transform: TransformName, reason: String },
    #[error("no node at {0}")]
    NoSuchNode(NodePath),
    #[error("`{0}` is not derivable")]
    NotDerivable(Inference),
    #[error("proof uses theory axioms")]
    AxiomsPresent,
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformName {
    CutCutVertical,
    CutCutHorizontal,
    CutTensor,
    OneCut,
    LTensorCutLeft,
    LTensorCutRight,
    RTensorCut,
    RightIdentity,
    LeftIdentity,
    LTensorRTensor,
    LUnitRTensor,
}

impl TransformName {
    pub const ALL: [TransformName; 11] = [
        TransformName::CutCutVertical,
        TransformName::CutCutHorizontal,
        TransformName::CutTensor,
        TransformName::OneCut,
        TransformName::LTensorCutLeft,
        TransformName::LTensorCutRight,
        TransformName::RTensorCut,
        TransformName::RightIdentity,
        TransformName::LeftIdentity,
        TransformName::LTensorRTensor,
        TransformName::LUnitRTensor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformName::CutCutVertical => "cut-cut-v",
            TransformName::CutCutHorizontal => "cut-cut-h",
            TransformName::CutTensor => "cut-tensor",
            TransformName::OneCut => "one-cut",
            TransformName::LTensorCutLeft => "lx-cut-l",
            TransformName::LTensorCutRight => "lx-cut-r",
            TransformName::RTensorCut => "rx-cut",
            TransformName::RightIdentity => "r-id",
            TransformName::LeftIdentity => "l-id",
            TransformName::LTensorRTensor => "lx-rx",
            TransformName::LUnitRTensor => "l1-rx",
        }
    }
}

impl fmt::Display for TransformName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TransformName::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown transformation `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Applies a transformation at the node `at`. Introductions use the last
/// antecedent position.
pub fn apply_transform(
    proof: &Proof,
    at: &NodePath,
    name: TransformName,
    direction: Direction,
    mode: Mode,
) -> Result<Proof, RewriteError> {
    apply_transform_at(proof, at, name, direction, mode, None)
}

/// Like [`apply_transform`], with an explicit antecedent position for the
/// inverses of `one-cut` and `l-id`.
pub fn apply_transform_at(
    proof: &Proof,
    at: &NodePath,
    name: TransformName,
    direction: Direction,
    mode: Mode,
    site: Option<usize>,
) -> Result<Proof, RewriteError> {
    check(proof, mode, Some(&AnyAxioms))?;
    let node = proof.at(at).ok_or_else(|| RewriteError::NoSuchNode(at.clone()))?;
    let mismatch = |reason: String| RewriteError::PatternMismatch { path: at.clone(), transform: name, reason };
    let before = infer(node)?;
    let mut replaced = transform(node, name, direction, site).map_err(mismatch)?;
    if mode == Mode::T {
        replaced = normalize_mode_t(replaced)?;
    }
    let after = infer(&replaced).map_err(|e| mismatch(e.to_string()))?;
    if after != before {
        return Err(mismatch(format!("conclusion would change from `{before}` to `{after}`")));
    }
    let mut out = proof.clone();
    *out.at_mut(at).unwrap() = replaced;
    check(&out, mode, Some(&AnyAxioms)).map_err(|e| mismatch(format!("result is not valid in mode {mode}: {e}")))?;
    Ok(out)
}

/// Writes cuts on the last item as `cut` without a position, and wraps any
/// other cut in exchanges.
fn normalize_mode_t(p: Proof) -> Result<Proof, RewriteError> {
    Ok(to_mode_t(&p)?)
}

type Mismatch = String;

fn cut_pos(p: &Proof) -> Result<usize, Mismatch> {
    match p.rule {
        Rule::Cut(Some(x)) => Ok(x),
        Rule::Cut(None) => {
            let n = ante_len(&p.premises[1])?;
            n.checked_sub(1).ok_or_else(|| "cut into an empty antecedent".to_string())
        }
        _ => Err("expected a cut".into()),
    }
}

fn ante_len(p: &Proof) -> Result<usize, Mismatch> {
    infer(p).map(|i| i.antecedent.len()).map_err(|e| e.to_string())
}

fn expect(p: &Proof, what: &str, ok: bool) -> Result<(), Mismatch> {
    if ok {
        Ok(())
    } else {
        Err(format!("expected {what}, found `{}`", crate::proof_text::render_proof(p)))
    }
}

fn is_cut(p: &Proof) -> bool {
    matches!(p.rule, Rule::Cut(_))
}

fn cut(pos: usize, l: Proof, r: Proof) -> Proof {
    Proof::cut(Some(pos), l, r)
}

fn transform(node: &Proof, name: TransformName, dir: Direction, site: Option<usize>) -> Result<Proof, Mismatch> {
    use Direction::*;
    use TransformName::*;
    let prem = |i: usize| node.premises[i].clone();
    match (name, dir) {
        (CutCutVertical, Forward) => {
            expect(node, "a cut whose left premise is a cut", is_cut(node) && is_cut(&node.premises[0]))?;
            let q = cut_pos(node)?;
            let inner = &node.premises[0];
            let p = cut_pos(inner)?;
            let (a, b, c) = (inner.premises[0].clone(), inner.premises[1].clone(), prem(1));
            Ok(cut(q + p, a, cut(q, b, c)))
        }
        (CutCutVertical, Inverse) => {
            expect(node, "a cut whose right premise is a cut", is_cut(node) && is_cut(&node.premises[1]))?;
            let r = cut_pos(node)?;
            let inner = &node.premises[1];
            let q = cut_pos(inner)?;
            let n2 = ante_len(&inner.premises[0])?;
            if !(q <= r && r < q + n2) {
                return Err("outer cut does not target the block inserted by the inner cut".into());
            }
            let (a, b, c) = (prem(0), inner.premises[0].clone(), inner.premises[1].clone());
            Ok(cut(q, cut(r - q, a, b), c))
        }
        (CutCutHorizontal, Forward) | (CutCutHorizontal, Inverse) => {
            expect(node, "a cut whose right premise is a cut", is_cut(node) && is_cut(&node.premises[1]))?;
            let outer = cut_pos(node)?;
            let inner_node = &node.premises[1];
            let inner = cut_pos(inner_node)?;
            let g_outer = ante_len(&node.premises[0])?;
            let g_inner = ante_len(&inner_node.premises[0])?;
            let (x, y, base) = (prem(0), inner_node.premises[0].clone(), inner_node.premises[1].clone());
            if dir == Forward {
                // outer targets an item before the inner block
                if outer >= inner {
                    return Err("outer cut is not before the inner cut".into());
                }
                Ok(cut(inner + g_outer - 1, y, cut(outer, x, base)))
            } else {
                if outer < inner + g_inner {
                    return Err("outer cut is not after the inner cut".into());
                }
                let later = outer + 1 - g_inner;
                Ok(cut(inner, y, cut(later, x, base)))
            }
        }
        (CutTensor, Forward) => {
            expect(
                node,
                "a cut of rx against lx",
                is_cut(node) && node.premises[0].rule == Rule::RTensor && matches!(node.premises[1].rule, Rule::LTensor(_)),
            )?;
            let p = cut_pos(node)?;
            if node.premises[1].rule != Rule::LTensor(p) {
                return Err("lx does not introduce the cut item".into());
            }
            let (a, b) = (node.premises[0].premises[0].clone(), node.premises[0].premises[1].clone());
            let c = node.premises[1].premises[0].clone();
            Ok(cut(p, a, cut(p + 1, b, c)))
        }
        (CutTensor, Inverse) => {
            expect(node, "a cut whose right premise is a cut", is_cut(node) && is_cut(&node.premises[1]))?;
            let p = cut_pos(node)?;
            let inner = &node.premises[1];
            if cut_pos(inner)? != p + 1 {
                return Err("inner cut is not on the item after the outer one".into());
            }
            let a = prem(0);
            let (b, c) = (inner.premises[0].clone(), inner.premises[1].clone());
            Ok(cut(p, Proof::r_tensor(a, b), Proof::l_tensor(p, c)))
        }
        (OneCut, Forward) => {
            expect(
                node,
                "a cut of r1 against l1",
                is_cut(node) && node.premises[0].rule == Rule::RUnit,
            )?;
            let p = cut_pos(node)?;
            if node.premises[1].rule != Rule::LUnit(p) {
                return Err("right premise does not introduce the cut unit".into());
            }
            Ok(node.premises[1].premises[0].clone())
        }
        (OneCut, Inverse) => {
            let n = ante_len(node)?;
            let s = site.unwrap_or(n);
            if s > n {
                return Err(format!("position {s} out of range"));
            }
            Ok(cut(s, Proof::r_unit(), Proof::l_unit(s, node.clone())))
        }
        (LTensorCutLeft, Forward) => {
            expect(node, "a cut whose left premise ends in lx", is_cut(node) && matches!(node.premises[0].rule, Rule::LTensor(_)))?;
            let p = cut_pos(node)?;
            let Rule::LTensor(q) = node.premises[0].rule else { unreachable!() };
            Ok(Proof::l_tensor(p + q, cut(p, node.premises[0].premises[0].clone(), prem(1))))
        }
        (LTensorCutLeft, Inverse) => {
            let Rule::LTensor(r) = node.rule else { return Err("expected lx".into()) };
            let inner = &node.premises[0];
            expect(inner, "a cut", is_cut(inner))?;
            let p = cut_pos(inner)?;
            let g = ante_len(&inner.premises[0])?;
            if !(p <= r && r + 1 < p + g) {
                return Err("fused pair is not inside the cut block".into());
            }
            let (a, b) = (inner.premises[0].clone(), inner.premises[1].clone());
            Ok(cut(p, Proof::l_tensor(r - p, a), b))
        }
        (LTensorCutRight, Forward) => {
            expect(node, "a cut whose right premise ends in lx", is_cut(node) && matches!(node.premises[1].rule, Rule::LTensor(_)))?;
            let p = cut_pos(node)?;
            let Rule::LTensor(q) = node.premises[1].rule else { unreachable!() };
            let g = ante_len(&node.premises[0])?;
            let inner = node.premises[1].premises[0].clone();
            if q > p {
                Ok(Proof::l_tensor(q + g - 1, cut(p, prem(0), inner)))
            } else if q < p {
                Ok(Proof::l_tensor(q, cut(p + 1, prem(0), inner)))
            } else {
                Err("lx introduces the cut item".into())
            }
        }
        (LTensorCutRight, Inverse) => {
            let Rule::LTensor(r) = node.rule else { return Err("expected lx".into()) };
            let inner = &node.premises[0];
            expect(inner, "a cut", is_cut(inner))?;
            let x = cut_pos(inner)?;
            let g = ante_len(&inner.premises[0])?;
            let (a, b) = (inner.premises[0].clone(), inner.premises[1].clone());
            if r + 1 < x {
                Ok(cut(x - 1, a, Proof::l_tensor(r, b)))
            } else if r >= x + g {
                Ok(cut(x, a, Proof::l_tensor(r + 1 - g, b)))
            } else {
                Err("fused pair overlaps the cut block".into())
            }
        }
        (RTensorCut, Forward) => {
            expect(node, "a cut whose right premise ends in rx", is_cut(node) && node.premises[1].rule == Rule::RTensor)?;
            let p = cut_pos(node)?;
            let (a, b) = (node.premises[1].premises[0].clone(), node.premises[1].premises[1].clone());
            let na = ante_len(&a)?;
            if p < na {
                Ok(Proof::r_tensor(cut(p, prem(0), a), b))
            } else {
                Ok(Proof::r_tensor(a, cut(p - na, prem(0), b)))
            }
        }
        (RTensorCut, Inverse) => {
            expect(node, "rx with a cut premise", node.rule == Rule::RTensor && (is_cut(&node.premises[0]) || is_cut(&node.premises[1])))?;
            let (l, r) = (prem(0), prem(1));
            if is_cut(&l) {
                let x = cut_pos(&l)?;
                let (c, a) = (l.premises[0].clone(), l.premises[1].clone());
                Ok(cut(x, c, Proof::r_tensor(a, r)))
            } else {
                let x = cut_pos(&r)?;
                let na = ante_len(&l)?;
                let (c, b) = (r.premises[0].clone(), r.premises[1].clone());
                Ok(cut(x + na, c, Proof::r_tensor(l, b)))
            }
        }
        (RightIdentity, Forward) => {
            expect(node, "a cut", is_cut(node))?;
            let b = infer(&node.premises[0]).map_err(|e| e.to_string())?.consequent;
            if node.premises[1] != identity_proof(&b) {
                return Err("right premise is not an identity proof".into());
            }
            Ok(prem(0))
        }
        (RightIdentity, Inverse) => {
            let b = infer(node).map_err(|e| e.to_string())?.consequent;
            Ok(cut(0, node.clone(), identity_proof(&b)))
        }
        (LeftIdentity, Forward) => {
            expect(node, "a cut", is_cut(node))?;
            let b = infer(&node.premises[0]).map_err(|e| e.to_string())?.consequent;
            if node.premises[0] != identity_proof(&b) {
                return Err("left premise is not an identity proof".into());
            }
            Ok(prem(1))
        }
        (LeftIdentity, Inverse) => {
            let inf = infer(node).map_err(|e| e.to_string())?;
            let n = inf.antecedent.len();
            if n == 0 {
                return Err("empty antecedent".into());
            }
            let s = site.unwrap_or(n - 1);
            let item = inf.antecedent.get(s).ok_or_else(|| format!("position {s} out of range"))?;
            Ok(cut(s, identity_proof(item), node.clone()))
        }
        (LTensorRTensor, Forward) | (LUnitRTensor, Forward) => {
            let want_tensor = name == LTensorRTensor;
            let matches = |r: &Rule| match r {
                Rule::LTensor(_) => want_tensor,
                Rule::LUnit(_) => !want_tensor,
                _ => false,
            };
            expect(
                node,
                "rx with a matching left-rule premise",
                node.rule == Rule::RTensor && (matches(&node.premises[0].rule) || matches(&node.premises[1].rule)),
            )?;
            let (l, r) = (prem(0), prem(1));
            let rebuild = |rule: &Rule, q: usize, inner: Proof| match rule {
                Rule::LTensor(_) => Proof::l_tensor(q, inner),
                _ => Proof::l_unit(q, inner),
            };
            if matches(&l.rule) {
                let q = rule_pos(&l.rule);
                Ok(rebuild(&l.rule, q, Proof::r_tensor(l.premises[0].clone(), r)))
            } else {
                let na = ante_len(&l)?;
                let q = rule_pos(&r.rule);
                Ok(rebuild(&r.rule, q + na, Proof::r_tensor(l, r.premises[0].clone())))
            }
        }
        (LTensorRTensor, Inverse) | (LUnitRTensor, Inverse) => {
            let ok = match node.rule {
                Rule::LTensor(_) => name == LTensorRTensor,
                Rule::LUnit(_) => name == LUnitRTensor,
                _ => false,
            };
            expect(node, "a left rule over rx", ok && node.premises[0].rule == Rule::RTensor)?;
            let r = rule_pos(&node.rule);
            let (a, b) = (node.premises[0].premises[0].clone(), node.premises[0].premises[1].clone());
            let na = ante_len(&a)?;
            if name == LTensorRTensor {
                if r + 1 < na {
                    Ok(Proof::r_tensor(Proof::l_tensor(r, a), b))
                } else if r >= na {
                    Ok(Proof::r_tensor(a, Proof::l_tensor(r - na, b)))
                } else {
                    Err("fused pair straddles the two premises".into())
                }
            } else if r <= na {
                Ok(Proof::r_tensor(Proof::l_unit(r, a), b))
            } else {
                Ok(Proof::r_tensor(a, Proof::l_unit(r - na, b)))
            }
        }
    }
}

fn rule_pos(rule: &Rule) -> usize {
    match rule {
        Rule::LTensor(q) | Rule::LUnit(q) => *q,
        _ => 0,
    }
}

/// Cut elimination followed by the canonical cut-free proof of the
/// conclusion. Idempotent, and equal for any two proofs of one inference.
pub fn canonicalize(proof: &Proof, mode: Mode) -> Result<Proof, RewriteError> {
    if proof.has_axiom() {
        return Err(RewriteError::AxiomsPresent);
    }
    let cut_free = eliminate_cuts(proof, mode)?;
    let inf = check(&cut_free, mode, None)?;
    canonical_proof(&inf, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof_text::parse_proof;

    fn p(src: &str) -> Proof {
        parse_proof(src).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for t in TransformName::ALL {
            assert_eq!(t.as_str().parse::<TransformName>().unwrap(), t);
        }
        assert!("cut-cut".parse::<TransformName>().is_err());
    }

    #[test]
    fn one_cut_both_ways() {
        let base = p("(rx (id A) (id B))");
        let intro = apply_transform_at(&base, &NodePath::root(), TransformName::OneCut, Direction::Inverse, Mode::Tprime, Some(1))
            .unwrap();
        assert_eq!(crate::proof_text::render_proof(&intro), "(cut 1 (r1) (l1 1 (rx (id A) (id B))))");
        let back = apply_transform(&intro, &NodePath::root(), TransformName::OneCut, Direction::Forward, Mode::Tprime).unwrap();
        assert_eq!(back, base);
    }

    #[test]
    fn identity_cuts_round_trip() {
        let base = p("(lx 0 (rx (id A) (id B)))");
        for name in [TransformName::RightIdentity, TransformName::LeftIdentity] {
            for mode in [Mode::T, Mode::Tprime] {
                let intro = apply_transform(&base, &NodePath::root(), name, Direction::Inverse, mode).unwrap();
                assert!(intro.has_cut());
                let back = apply_transform(&intro, &NodePath::root(), name, Direction::Forward, mode).unwrap();
                assert_eq!(back, base);
            }
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let base = p("(lx 0 (rx (id A) (id B)))");
        let err = apply_transform(&base, &NodePath::root(), TransformName::CutTensor, Direction::Forward, Mode::T);
        assert!(matches!(err, Err(RewriteError::PatternMismatch { .. })));
        let err = apply_transform(&base, &NodePath(vec![3]), TransformName::CutTensor, Direction::Forward, Mode::T);
        assert!(matches!(err, Err(RewriteError::NoSuchNode(_))));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let proof = p("(cut (lx 0 (rx (id A) (id B))) (lx 0 (ex 0 1 2 (rx (id B) (id A)))))");
        let c = canonicalize(&proof, Mode::T).unwrap();
        assert_eq!(canonicalize(&c, Mode::T).unwrap(), c);
    }
}
