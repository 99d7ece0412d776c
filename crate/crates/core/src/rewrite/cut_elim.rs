//! Cut elimination.
//!
//! Cuts are removed innermost first. Each cut is pushed upward by a
//! position-general procedure that works for either calculus: at every step
//! it tries, in order, an identity premise, a rule of the right premise that
//! does not touch the cut item, a rule of the left premise that does not
//! produce the cut formula, and finally the principal reduction. The pair
//! (size of the cut formula, combined size of the premises) decreases
//! lexicographically, so the procedure terminates.
//!
//! Theory axioms are opaque: a cut whose premises both end in an axiom (or in
//! a cut that is already stuck) is left in place and reported.

use crate::kernel::{infer, AxiomSet, Mode, NodePath, Proof, Rule};

use super::RewriteError;

/// One step taken by the elimination procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutStep {
    /// Left premise was an atomic identity.
    IdentityLeft,
    /// Right premise was an atomic identity.
    IdentityRight,
    /// Cut moved above a rule of the right premise.
    CommuteRight(StepRule),
    /// Cut moved above a rule of the left premise.
    CommuteLeft(StepRule),
    /// `⊢ 1` cut against a unit introduction.
    UnitReduction,
    /// Tensor introduction on both sides split into two smaller cuts.
    TensorReduction,
    /// Cut left in place because an axiom blocks it.
    Stuck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepRule {
    LUnit,
    LTensor,
    RTensor,
    Exchange,
}

/// Result of eliminating cuts from a proof that may use theory axioms.
#[derive(Debug, Clone)]
pub struct CutElimination {
    pub proof: Proof,
    /// Cuts that could not be removed.
    pub residual: Vec<NodePath>,
    pub steps: Vec<CutStep>,
}

/// Removes every cut from a theory-free proof.
pub fn eliminate_cuts(proof: &Proof, mode: Mode) -> Result<Proof, RewriteError> {
    let before = crate::kernel::check(proof, mode, None)?;
    let out = eliminate_cuts_traced(proof, mode, None)?;
    if !out.residual.is_empty() {
        return Err(RewriteError::Internal(format!("cuts remain at {:?}", out.residual)));
    }
    let after = crate::kernel::check(&out.proof, mode, None)?;
    if after != before {
        return Err(RewriteError::Internal(format!("conclusion changed from `{before}` to `{after}`")));
    }
    Ok(out.proof)
}

/// Eliminates cuts, reporting the ones blocked by theory axioms and the
/// steps that were taken.
pub fn eliminate_cuts_traced(
    proof: &Proof,
    mode: Mode,
    axioms: Option<&dyn AxiomSet>,
) -> Result<CutElimination, RewriteError> {
    let before = crate::kernel::check(proof, mode, axioms)?;
    let mut steps = Vec::new();
    let mut reduced = elim(proof, &mut steps)?;
    if mode == Mode::T && reduced.has_cut() {
        reduced = crate::kernel::to_mode_t(&reduced)?;
    }
    let after = crate::kernel::check(&reduced, mode, axioms)?;
    if after != before {
        return Err(RewriteError::Internal(format!("conclusion changed from `{before}` to `{after}`")));
    }
    let residual = reduced
        .paths()
        .into_iter()
        .filter(|p| matches!(reduced.at(p).map(|n| &n.rule), Some(Rule::Cut(_))))
        .collect();
    Ok(CutElimination { proof: reduced, residual, steps })
}

fn elim(proof: &Proof, steps: &mut Vec<CutStep>) -> Result<Proof, RewriteError> {
    let premises = proof.premises.iter().map(|p| elim(p, steps)).collect::<Result<Vec<_>, _>>()?;
    if let Rule::Cut(pos) = proof.rule {
        let mut it = premises.into_iter();
        let (left, right) = (it.next().unwrap(), it.next().unwrap());
        let n = infer(&right)?.antecedent.len();
        let pos = pos.unwrap_or(n - 1);
        return cut(left, right, pos, steps);
    }
    Ok(Proof { rule: proof.rule.clone(), premises })
}

fn antecedent_len(p: &Proof) -> Result<usize, RewriteError> {
    Ok(infer(p)?.antecedent.len())
}

/// Block boundary after replacing the item at `pos` by `g` items.
fn shift(b: usize, pos: usize, g: usize) -> usize {
    if b > pos {
        b + g - 1
    } else {
        b
    }
}

fn single(p: Proof) -> Proof {
    p.premises.into_iter().next().unwrap()
}

fn pair(p: Proof) -> (Proof, Proof) {
    let mut it = p.premises.into_iter();
    (it.next().unwrap(), it.next().unwrap())
}

/// Cut-free proof of the conclusion of `Cut(pos)(left, right)`, assuming
/// both premises are already cut-free (apart from stuck cuts).
pub(crate) fn cut(left: Proof, right: Proof, pos: usize, steps: &mut Vec<CutStep>) -> Result<Proof, RewriteError> {
    if let Rule::Id(_) = left.rule {
        steps.push(CutStep::IdentityLeft);
        return Ok(right);
    }
    if let Rule::Id(_) = right.rule {
        steps.push(CutStep::IdentityRight);
        return Ok(left);
    }
    let g = antecedent_len(&left)?;

    // Rules of the right premise that leave the cut item alone.
    match right.rule {
        Rule::LUnit(q) if q != pos => {
            steps.push(CutStep::CommuteRight(StepRule::LUnit));
            let inner_pos = if q < pos { pos - 1 } else { pos };
            let r = cut(left, single(right), inner_pos, steps)?;
            let q = if q < pos { q } else { q + g - 1 };
            return Ok(Proof::l_unit(q, r));
        }
        Rule::LTensor(q) if q != pos => {
            steps.push(CutStep::CommuteRight(StepRule::LTensor));
            let inner_pos = if pos < q { pos } else { pos + 1 };
            let r = cut(left, single(right), inner_pos, steps)?;
            let q = if pos < q { q + g - 1 } else { q };
            return Ok(Proof::l_tensor(q, r));
        }
        Rule::Exchange(i, j, k) => {
            steps.push(CutStep::CommuteRight(StepRule::Exchange));
            let w = k - j;
            let inner_pos = if pos < i || pos >= k {
                pos
            } else if pos < i + w {
                j + (pos - i)
            } else {
                i + (pos - i - w)
            };
            let r = cut(left, single(right), inner_pos, steps)?;
            let (i, j, k) = (shift(i, inner_pos, g), shift(j, inner_pos, g), shift(k, inner_pos, g));
            return Ok(if i == j || j == k { r } else { Proof::exchange(i, j, k, r) });
        }
        Rule::RTensor => {
            steps.push(CutStep::CommuteRight(StepRule::RTensor));
            let (a, b) = pair(right);
            let na = antecedent_len(&a)?;
            return Ok(if pos < na {
                Proof::r_tensor(cut(left, a, pos, steps)?, b)
            } else {
                Proof::r_tensor(a, cut(left, b, pos - na, steps)?)
            });
        }
        _ => {}
    }

    // Rules of the left premise that act on its antecedent.
    match left.rule {
        Rule::LUnit(q) => {
            steps.push(CutStep::CommuteLeft(StepRule::LUnit));
            let r = cut(single(left), right, pos, steps)?;
            return Ok(Proof::l_unit(q + pos, r));
        }
        Rule::LTensor(q) => {
            steps.push(CutStep::CommuteLeft(StepRule::LTensor));
            let r = cut(single(left), right, pos, steps)?;
            return Ok(Proof::l_tensor(q + pos, r));
        }
        Rule::Exchange(i, j, k) => {
            steps.push(CutStep::CommuteLeft(StepRule::Exchange));
            let r = cut(single(left), right, pos, steps)?;
            return Ok(Proof::exchange(i + pos, j + pos, k + pos, r));
        }
        _ => {}
    }

    // Principal reductions.
    match (&left.rule, &right.rule) {
        (Rule::RUnit, Rule::LUnit(q)) if *q == pos => {
            steps.push(CutStep::UnitReduction);
            Ok(single(right))
        }
        (Rule::RTensor, Rule::LTensor(q)) if *q == pos => {
            steps.push(CutStep::TensorReduction);
            let (a, b) = pair(left);
            let inner = cut(b, single(right), pos + 1, steps)?;
            cut(a, inner, pos, steps)
        }
        _ => {
            steps.push(CutStep::Stuck);
            Ok(Proof::cut(Some(pos), left, right))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, identity_proof};
    use crate::syntax::{parse_term, Atom};

    fn id(n: &str) -> Proof {
        Proof::id(Atom::new(n).unwrap())
    }

    #[test]
    fn tensor_cut_reduces() {
        // A, B ⊢ A * B cut into A * B ⊢ A * B
        let left = Proof::r_tensor(id("A"), id("B"));
        let right = identity_proof(&parse_term("A * B").unwrap());
        let p = Proof::cut(None, left.clone(), right);
        for mode in [Mode::T, Mode::Tprime] {
            let q = eliminate_cuts(&p, mode).unwrap();
            assert!(!q.has_cut());
            assert_eq!(q, left);
        }
    }

    #[test]
    fn unit_cut_reduces() {
        // ⊢ 1 into A, 1 ⊢ A
        let right = Proof::l_unit(1, id("A"));
        let p = Proof::cut(Some(1), Proof::r_unit(), right);
        let q = eliminate_cuts(&p, Mode::Tprime).unwrap();
        assert_eq!(q, id("A"));
    }

    #[test]
    fn commutes_through_exchange() {
        // B, A ⊢ A * B via exchange, then cut X * Y ... into B.
        let sigma = Proof::exchange(0, 1, 2, Proof::r_tensor(id("A"), id("B")));
        let p = Proof::cut(None, id("A"), sigma.clone());
        let q = eliminate_cuts(&p, Mode::T).unwrap();
        assert_eq!(q, sigma);
        let left = Proof::l_unit(0, id("A"));
        let p = Proof::cut(None, left, sigma);
        let q = eliminate_cuts(&p, Mode::T).unwrap();
        assert!(!q.has_cut());
        assert_eq!(check(&q, Mode::T, None).unwrap().to_string(), "B, 1, A |- A * B");
    }

    #[test]
    fn stuck_axiom_cut_reported() {
        use crate::kernel::AnyAxioms;
        let x = parse_term("X").unwrap();
        let p = Proof::cut(None, Proof::leaf(Rule::RAxiom(x.clone())), Proof::leaf(Rule::LAxiom(x)));
        let out = eliminate_cuts_traced(&p, Mode::T, Some(&AnyAxioms)).unwrap();
        assert_eq!(out.residual, vec![NodePath::root()]);
        assert!(out.steps.contains(&CutStep::Stuck));
    }
}
