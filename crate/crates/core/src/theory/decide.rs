//! Provability in a resource theory.
//!
//! A derivation of `Γ ⊢ A` uses some number of copies of each axiom. Three
//! stages look for one:
//!
//! 1. enumerate copy counts by increasing total (then lexicographically) up
//!    to a cap, keeping those whose atom balance
//!    `Γ + Σ m·X + Σ k·(B − A) = A + Σ n·Y` holds;
//! 2. for counts that use conversions, search for an order in which each
//!    conversion fires only when every atom of its source is present, with
//!    all available copies added first and disposals done last;
//! 3. assemble a witness proof and check it against the theory.
//!
//! When the balance has no nonnegative rational solution at all the
//! inference cannot be derived. That refutation is reported only for
//! theories with at most one conversion; with more, the verdict stays
//! unknown and the detail says the balance is infeasible.

use std::collections::{BTreeSet, VecDeque};

use crate::kernel::{check, identity_proof, tensor_proofs, Mode, Proof, Rule};
use crate::rewrite::canonical_proof;
use crate::syntax::{AtomVector, Inference, Term};

use super::{lp, Theory, TheoryError};

pub const DEFAULT_CAP: usize = 16;

/// How many times each axiom of a theory is used, indexed like the theory's
/// lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AxiomCounts {
    pub available: Vec<usize>,
    pub disposable: Vec<usize>,
    pub conversions: Vec<usize>,
}

impl AxiomCounts {
    pub fn zero(theory: &Theory) -> AxiomCounts {
        AxiomCounts {
            available: vec![0; theory.available().len()],
            disposable: vec![0; theory.disposable().len()],
            conversions: vec![0; theory.conversions().len()],
        }
    }

    pub fn total(&self) -> usize {
        self.available.iter().chain(&self.disposable).chain(&self.conversions).sum()
    }

    fn from_flat(theory: &Theory, v: &[usize]) -> AxiomCounts {
        let (a, rest) = v.split_at(theory.available().len());
        let (d, c) = rest.split_at(theory.disposable().len());
        AxiomCounts { available: a.to_vec(), disposable: d.to_vec(), conversions: c.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryVerdict {
    Provable { counts: AxiomCounts, witness: Proof },
    NotProvable { reason: String },
    Unknown { cap: usize, detail: String },
}

/// Column of each axiom in the balance system, as signed atom counts.
struct Balance {
    atoms: Vec<crate::syntax::Atom>,
    columns: Vec<Vec<i64>>,
    rhs: Vec<i64>,
}

fn balance(theory: &Theory, inference: &Inference) -> Balance {
    let atoms: Vec<_> = theory.atoms().iter().cloned().collect();
    let count = |v: &AtomVector| -> Vec<i64> { atoms.iter().map(|a| v.get(a) as i64).collect() };
    let mut columns = Vec::new();
    for x in theory.available() {
        columns.push(count(&x.atom_vector()));
    }
    for y in theory.disposable() {
        columns.push(count(&y.atom_vector()).into_iter().map(|c| -c).collect());
    }
    for c in theory.conversions() {
        let (a, b) = (count(&c.from.atom_vector()), count(&c.to.atom_vector()));
        columns.push(b.iter().zip(&a).map(|(b, a)| b - a).collect());
    }
    let goal = count(&inference.consequent.atom_vector());
    let have = count(&AtomVector::of_sequent(&inference.antecedent));
    let rhs = goal.iter().zip(&have).map(|(g, h)| g - h).collect();
    Balance { atoms, columns, rhs }
}

impl Balance {
    fn holds(&self, counts: &[usize]) -> bool {
        (0..self.atoms.len()).all(|r| {
            let lhs: i64 = self.columns.iter().zip(counts).map(|(col, &k)| col[r] * k as i64).sum();
            lhs == self.rhs[r]
        })
    }

    fn rationally_feasible(&self) -> bool {
        let rows: Vec<Vec<i64>> =
            (0..self.atoms.len()).map(|r| self.columns.iter().map(|c| c[r]).collect()).collect();
        lp::rationally_feasible(&rows, &self.rhs)
    }
}

/// Calls `visit` on every vector of `len` nonnegative entries summing to
/// `total`, in lexicographic order, until it returns `true`.
fn compositions(len: usize, total: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(buf: &mut Vec<usize>, len: usize, left: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if buf.len() + 1 == len {
            buf.push(left);
            let stop = visit(buf);
            buf.pop();
            return stop;
        }
        for x in 0..=left {
            buf.push(x);
            let stop = go(buf, len, left - x, visit);
            buf.pop();
            if stop {
                return true;
            }
        }
        false
    }
    if len == 0 {
        return total == 0 && visit(&[]);
    }
    go(&mut Vec::with_capacity(len), len, total, visit)
}

pub fn decide_in_theory(theory: &Theory, inference: &Inference, cap: usize) -> Result<TheoryVerdict, TheoryError> {
    for t in inference.antecedent.iter().chain([&inference.consequent]) {
        theory.check_declared(t)?;
    }
    let bal = balance(theory, inference);
    if !bal.rationally_feasible() {
        let reason = "the atom balance has no nonnegative rational solution".to_string();
        return Ok(if theory.conversions().len() <= 1 {
            TheoryVerdict::NotProvable { reason }
        } else {
            TheoryVerdict::Unknown {
                cap,
                detail: format!("{reason}; refutation is not claimed for theories with several conversions"),
            }
        });
    }

    let vars = bal.columns.len();
    let mut found: Option<(AxiomCounts, Vec<usize>)> = None;
    let mut unordered = 0usize;
    for total in 0..=cap {
        let stop = compositions(vars, total, &mut |v| {
            if !bal.holds(v) {
                return false;
            }
            let counts = AxiomCounts::from_flat(theory, v);
            match firing_order(theory, inference, &counts) {
                Some(order) => {
                    found = Some((counts, order));
                    true
                }
                None => {
                    unordered += 1;
                    false
                }
            }
        });
        if stop {
            break;
        }
    }
    match found {
        Some((counts, order)) => {
            let witness = build_witness(theory, inference, &counts, &order)?;
            Ok(TheoryVerdict::Provable { counts, witness })
        }
        None => Ok(TheoryVerdict::Unknown {
            cap,
            detail: if unordered > 0 {
                format!("{unordered} balanced count vectors up to total {cap}, none with a valid conversion order")
            } else {
                format!("no balanced count vector with total at most {cap}")
            },
        }),
    }
}

/// Witness proof for the given counts, or `None` when the counts do not
/// balance or no conversion order exists.
pub fn witness_for(
    theory: &Theory,
    inference: &Inference,
    counts: &AxiomCounts,
) -> Result<Option<Proof>, TheoryError> {
    let flat: Vec<usize> =
        counts.available.iter().chain(&counts.disposable).chain(&counts.conversions).copied().collect();
    let want = theory.available().len() + theory.disposable().len() + theory.conversions().len();
    if flat.len() != want {
        return Err(TheoryError::CountMismatch { got: flat.len(), want });
    }
    if !balance(theory, inference).holds(&flat) {
        return Ok(None);
    }
    match firing_order(theory, inference, counts) {
        Some(order) => build_witness(theory, inference, counts, &order).map(Some),
        None => Ok(None),
    }
}

fn start_multiset(theory: &Theory, inference: &Inference, counts: &AxiomCounts) -> AtomVector {
    let mut m = AtomVector::of_sequent(&inference.antecedent);
    for (x, &k) in theory.available().iter().zip(&counts.available) {
        m = m + x.atom_vector().scaled(k);
    }
    m
}

/// Breadth-first search for an order of conversion firings.
fn firing_order(theory: &Theory, inference: &Inference, counts: &AxiomCounts) -> Option<Vec<usize>> {
    let start = start_multiset(theory, inference, counts);
    let remaining = counts.conversions.clone();
    if remaining.iter().all(|&k| k == 0) {
        return Some(Vec::new());
    }
    let sources: Vec<AtomVector> = theory.conversions().iter().map(|c| c.from.atom_vector()).collect();
    let targets: Vec<AtomVector> = theory.conversions().iter().map(|c| c.to.atom_vector()).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert((start.clone(), remaining.clone()));
    queue.push_back((start, remaining, Vec::new()));
    while let Some((m, rem, order)) = queue.pop_front() {
        if rem.iter().all(|&k| k == 0) {
            return Some(order);
        }
        for l in 0..rem.len() {
            if rem[l] == 0 {
                continue;
            }
            let Some(rest) = m.checked_sub(&sources[l]) else { continue };
            let next = rest + targets[l].clone();
            let mut rem2 = rem.clone();
            rem2[l] -= 1;
            if seen.insert((next.clone(), rem2.clone())) {
                let mut o = order.clone();
                o.push(l);
                queue.push_back((next, rem2, o));
            }
        }
    }
    None
}

fn cut_last(left: Proof, right: Proof) -> Proof {
    Proof::cut(None, left, right)
}

fn build_witness(
    theory: &Theory,
    inference: &Inference,
    counts: &AxiomCounts,
    order: &[usize],
) -> Result<Proof, TheoryError> {
    let extra: Vec<Term> = theory
        .available()
        .iter()
        .zip(&counts.available)
        .flat_map(|(x, &k)| std::iter::repeat_n(x.clone(), k))
        .collect();
    let mut antecedent = inference.antecedent.clone();
    antecedent.extend(extra.iter().cloned());

    // Γ, X.. ⊢ T0, then each conversion through T_t ⊢ R * A, R * A ⊢ R * B,
    // R * B ⊢ T_{t+1}
    let mut held = AtomVector::of_sequent(&antecedent);
    let mut proof = canonical_proof(&Inference::new(antecedent, held.to_term()), Mode::T)?;
    for &l in order {
        let conv = &theory.conversions()[l];
        let rest = held.checked_sub(&conv.from.atom_vector()).expect("firing order is valid");
        let rest_term = rest.to_term();
        let split = canonical_proof(
            &Inference::new(vec![held.to_term()], Term::tensor(rest_term.clone(), conv.from.clone())),
            Mode::T,
        )?;
        let fire = tensor_proofs(
            identity_proof(&rest_term),
            Proof::leaf(Rule::ConvAxiom(conv.from.clone(), conv.to.clone())),
        )?;
        held = rest + conv.to.atom_vector();
        let merge = canonical_proof(
            &Inference::new(vec![Term::tensor(rest_term, conv.to.clone())], held.to_term()),
            Mode::T,
        )?;
        proof = cut_last(cut_last(cut_last(proof, split), fire), merge);
    }

    // T_K ⊢ A * Y1 * ... * Yn, then drop the Y copies from the right
    let disposed: Vec<Term> = theory
        .disposable()
        .iter()
        .zip(&counts.disposable)
        .flat_map(|(y, &k)| std::iter::repeat_n(y.clone(), k))
        .collect();
    let mut parts = vec![inference.consequent.clone()];
    parts.extend(disposed.iter().cloned());
    let target = Term::tensor_all(parts.clone());
    proof = cut_last(proof, canonical_proof(&Inference::new(vec![held.to_term()], target), Mode::T)?);
    for idx in (1..parts.len()).rev() {
        let kept = Term::tensor_all(parts[..idx].to_vec());
        proof = cut_last(proof, disposal(&kept, &parts[idx]));
    }

    // discharge the available copies, last first
    for x in extra.iter().rev() {
        proof = cut_last(Proof::leaf(Rule::RAxiom(x.clone())), proof);
    }

    let got = check(&proof, Mode::T, Some(theory))?;
    debug_assert_eq!(&got, inference);
    Ok(proof)
}

/// `G * Y ⊢ G` for a disposable `Y`.
fn disposal(kept: &Term, y: &Term) -> Proof {
    let with_unit = Proof::r_tensor(identity_proof(kept), Proof::leaf(Rule::LAxiom(y.clone())));
    let drop_unit = Proof::l_tensor(0, Proof::l_unit(1, identity_proof(kept)));
    Proof::l_tensor(0, cut_last(with_unit, drop_unit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_inference;

    fn theory(src: &str) -> Theory {
        Theory::parse(src).unwrap()
    }

    fn verdict(t: &Theory, inf: &str) -> TheoryVerdict {
        let inf = parse_inference(inf).unwrap();
        let v = decide_in_theory(t, &inf, DEFAULT_CAP).unwrap();
        if let TheoryVerdict::Provable { witness, .. } = &v {
            assert_eq!(check(witness, Mode::T, Some(t)).unwrap(), inf);
        }
        v
    }

    #[test]
    fn cloning_uses_one_copy() {
        let t = theory("atoms C ;\nfree C ;\n");
        match verdict(&t, "C |- C * C") {
            TheoryVerdict::Provable { counts, .. } => assert_eq!(counts.available, vec![1]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(verdict(&t, "C |- 1"), TheoryVerdict::NotProvable { .. }));
    }

    #[test]
    fn teleportation_needs_ordering() {
        let t = theory("atoms C Q E Q_A Q_B ;\nfree C ;\ndispose C ;\ndispose Q_A ;\ndispose Q_B ;\nconvert E -> Q_A * Q_B ;\n");
        match verdict(&t, "E * Q_A |- Q_B") {
            TheoryVerdict::Provable { counts, .. } => {
                assert_eq!(counts.conversions, vec![1]);
                assert_eq!(counts.total(), 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ordering_can_fail() {
        // B is produced only from A, and A only from B * C.
        let t = theory("atoms A B C ;\nconvert A -> B ;\nconvert B * C -> A ;\ndispose B ;\n");
        // balanced with one firing of each, but neither can fire first from C
        match verdict(&t, "C |- 1") {
            TheoryVerdict::Unknown { detail, .. } => assert!(detail.contains("order"), "{detail}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compositions_are_lexicographic() {
        let mut seen = Vec::new();
        compositions(3, 2, &mut |v| {
            seen.push(v.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![vec![0, 0, 2], vec![0, 1, 1], vec![0, 2, 0], vec![1, 0, 1], vec![1, 1, 0], vec![2, 0, 0]]
        );
    }
}
