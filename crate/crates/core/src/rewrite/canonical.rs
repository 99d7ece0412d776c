//! Canonical cut-free proofs.
//!
//! The canonical proof of a provable inference is built from its conclusion
//! alone, reading from the root upward:
//!
//! 1. remove unit items with `l1` (leftmost first), otherwise split the
//!    leftmost tensor item with `lx`, until only atoms remain;
//! 2. in mode `T`, reorder the atoms with single-item exchanges so that the
//!    i-th occurrence of an atom on the left meets the i-th occurrence of the
//!    same atom in the consequent;
//! 3. assemble the consequent with `rx`, `id` and `r1` following its shape.
//!
//! Two proofs with the same conclusion therefore canonicalize identically.

use crate::kernel::{block_swap, Mode, Proof, Rule};
use crate::syntax::{Atom, Inference, Term};

use super::RewriteError;

pub fn canonical_proof(inference: &Inference, mode: Mode) -> Result<Proof, RewriteError> {
    let mut items = inference.antecedent.clone();
    let mut left_rules = Vec::new();
    loop {
        if let Some(q) = items.iter().position(Term::is_unit) {
            items.remove(q);
            left_rules.push(Rule::LUnit(q));
        } else if let Some(q) = items.iter().position(|t| matches!(t, Term::Tensor(..))) {
            let Term::Tensor(l, r) = items.remove(q) else { unreachable!() };
            items.insert(q, (*r).clone());
            items.insert(q, (*l).clone());
            left_rules.push(Rule::LTensor(q));
        } else {
            break;
        }
    }
    let have: Vec<Atom> = items
        .into_iter()
        .map(|t| match t {
            Term::Atom(a) => a,
            _ => unreachable!(),
        })
        .collect();
    let want = inference.consequent.atoms();
    let not_derivable = || RewriteError::NotDerivable(inference.clone());

    let exchanges = match mode {
        Mode::Tprime => {
            if have != want {
                return Err(not_derivable());
            }
            Vec::new()
        }
        Mode::T => {
            let mut sorted_have = have.clone();
            let mut sorted_want = want.clone();
            sorted_have.sort();
            sorted_want.sort();
            if sorted_have != sorted_want {
                return Err(not_derivable());
            }
            reorder(&want, &have)
        }
    };

    let mut proof = assemble(&inference.consequent, &want);
    for (i, j, k) in exchanges {
        proof = Proof::exchange(i, j, k, proof);
    }
    for rule in left_rules.into_iter().rev() {
        proof = Proof { rule, premises: vec![proof] };
    }
    Ok(proof)
}

/// Occurrence labels: the i-th copy of an atom is `(atom, i)`.
fn label(atoms: &[Atom]) -> Vec<(Atom, usize)> {
    let mut seen = std::collections::BTreeMap::<&Atom, usize>::new();
    atoms
        .iter()
        .map(|a| {
            let n = seen.entry(a).or_insert(0);
            *n += 1;
            (a.clone(), *n - 1)
        })
        .collect()
}

/// Exchanges, listed from the top of the proof down, that turn `top` into
/// `bottom`. Each moves one item leftward to the first mismatch.
fn reorder(top: &[Atom], bottom: &[Atom]) -> Vec<(usize, usize, usize)> {
    let mut cur = label(top);
    let goal = label(bottom);
    let mut out = Vec::new();
    for t in 0..goal.len() {
        if cur[t] == goal[t] {
            continue;
        }
        let s = (t + 1..cur.len()).find(|&s| cur[s] == goal[t]).expect("same occurrences");
        out.push((t, s, s + 1));
        cur = block_swap(&cur, t, s, s + 1);
    }
    out
}

/// Right rules building `term` from the atoms `atoms`, which are exactly its
/// atoms in order.
fn assemble(term: &Term, atoms: &[Atom]) -> Proof {
    match term {
        Term::Atom(a) => Proof::id(a.clone()),
        Term::Unit => Proof::r_unit(),
        Term::Tensor(l, r) => {
            let n = l.atoms().len();
            Proof::r_tensor(assemble(l, &atoms[..n]), assemble(r, &atoms[n..]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, identity_proof};
    use crate::proof_text::render_proof;
    use crate::syntax::{parse_inference, parse_term};

    fn canon(src: &str, mode: Mode) -> Proof {
        let inf = parse_inference(src).unwrap();
        let p = canonical_proof(&inf, mode).unwrap();
        assert_eq!(check(&p, mode, None).unwrap(), inf);
        p
    }

    #[test]
    fn associator_shape() {
        let p = canon("(A * B) * C |- A * (B * C)", Mode::Tprime);
        assert_eq!(render_proof(&p), "(lx 0 (lx 0 (rx (id A) (rx (id B) (id C)))))");
    }

    #[test]
    fn symmetry_shape() {
        let p = canon("A * B |- B * A", Mode::T);
        assert_eq!(render_proof(&p), "(lx 0 (ex 0 1 2 (rx (id B) (id A))))");
        assert!(canonical_proof(&parse_inference("A * B |- B * A").unwrap(), Mode::Tprime).is_err());
    }

    #[test]
    fn identities_are_canonical() {
        for src in ["A", "1", "A * B"] {
            let t = parse_term(src).unwrap();
            let inf = Inference::new(vec![t.clone()], t.clone());
            assert_eq!(canonical_proof(&inf, Mode::T).unwrap(), identity_proof(&t), "{src}");
        }
    }

    #[test]
    fn repeated_atoms() {
        canon("A, B, A, C |- C * (A * A) * B", Mode::T);
        canon("1, A * 1, 1 |- A * 1 * 1", Mode::Tprime);
        canon("|- 1 * 1", Mode::Tprime);
    }
}
