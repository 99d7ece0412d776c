//! Deciding provability.
//!
//! [`decide`] uses the normal-form criterion: in mode `T` an inference is
//! provable exactly when both sides have the same atom multiset, and in mode
//! `Tprime` when they have the same atom sequence (units dropped). Positive
//! answers carry the canonical cut-free proof.
//!
//! [`bounded_search`] is an independent reference that looks for a proof
//! rule by rule, never consulting atom counts. It returns the smallest proof
//! it can find within a node budget, or `Unknown` when there is none.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::kernel::{block_swap, check, Mode, Proof, Rule};
use crate::rewrite::{canonical_proof, RewriteError};
use crate::syntax::{AtomVector, Inference, Term};
use crate::theory::Theory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Provable(Proof),
    NotProvable(String),
    /// No proof within the given node budget.
    Unknown(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("`{0}` is not derivable")]
    NotDerivable(Inference),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

pub fn decide(inference: &Inference, mode: Mode) -> Verdict {
    let left: Vec<_> = inference.antecedent.iter().flat_map(Term::atoms).collect();
    let right = inference.consequent.atoms();
    let provable = match mode {
        Mode::T => AtomVector::from_atoms(left.iter().cloned()) == AtomVector::from_atoms(right.iter().cloned()),
        Mode::Tprime => left == right,
    };
    if !provable {
        let what = match mode {
            Mode::T => format!(
                "atom counts differ: {} on the left, {} on the right",
                AtomVector::from_atoms(left),
                AtomVector::from_atoms(right)
            ),
            Mode::Tprime => "atom sequences differ".to_string(),
        };
        return Verdict::NotProvable(what);
    }
    match canonical_proof(inference, mode) {
        Ok(p) => Verdict::Provable(p),
        Err(e) => Verdict::NotProvable(e.to_string()),
    }
}

/// The canonical cut-free proof of a provable inference.
pub fn synthesize_proof(inference: &Inference, mode: Mode) -> Result<Proof, DecisionError> {
    match decide(inference, mode) {
        Verdict::Provable(p) => Ok(p),
        _ => Err(DecisionError::NotDerivable(inference.clone())),
    }
}

/// Looks for a proof with at most `max_nodes` nodes. Never answers
/// `NotProvable`.
pub fn bounded_search(inference: &Inference, mode: Mode, theory: Option<&Theory>, max_nodes: usize) -> Verdict {
    let found = match theory {
        Some(t) if !t.is_empty() => TheorySearch::new(t, mode).run(inference, max_nodes),
        _ => least_cost(inference, mode, max_nodes),
    };
    match found {
        Some(p) => {
            debug_assert_eq!(check(&p, mode, theory.map(|t| t as &dyn crate::kernel::AxiomSet)).as_ref(), Ok(inference));
            Verdict::Provable(p)
        }
        None => Verdict::Unknown(max_nodes),
    }
}

/// Nodes that any cut-free proof of the goal must contain: one per
/// consequent node and one per unit or tensor on the left.
fn lower_bound(goal: &Inference) -> usize {
    fn non_atoms(t: &Term) -> usize {
        match t {
            Term::Atom(_) => 0,
            Term::Unit => 1,
            Term::Tensor(l, r) => 1 + non_atoms(l) + non_atoms(r),
        }
    }
    goal.consequent.size() + goal.antecedent.iter().map(non_atoms).sum::<usize>()
}

/// Backward applications of the cut-free rules: each is a rule and the
/// premises it needs.
fn backward(goal: &Inference, mode: Mode) -> Vec<(Rule, Vec<Inference>)> {
    let ante = &goal.antecedent;
    let n = ante.len();
    let mut out = Vec::new();
    match (&ante[..], &goal.consequent) {
        ([Term::Atom(a)], Term::Atom(b)) if a == b => out.push((Rule::Id(a.clone()), Vec::new())),
        ([], Term::Unit) => out.push((Rule::RUnit, Vec::new())),
        _ => {}
    }
    for (q, item) in ante.iter().enumerate() {
        match item {
            Term::Unit => {
                let mut prem = ante.clone();
                prem.remove(q);
                out.push((Rule::LUnit(q), vec![Inference::new(prem, goal.consequent.clone())]));
            }
            Term::Tensor(l, r) => {
                let mut prem = ante.clone();
                prem[q] = (**r).clone();
                prem.insert(q, (**l).clone());
                out.push((Rule::LTensor(q), vec![Inference::new(prem, goal.consequent.clone())]));
            }
            Term::Atom(_) => {}
        }
    }
    if let Term::Tensor(l, r) = &goal.consequent {
        for k in 0..=n {
            out.push((
                Rule::RTensor,
                vec![
                    Inference::new(ante[..k].to_vec(), (**l).clone()),
                    Inference::new(ante[k..].to_vec(), (**r).clone()),
                ],
            ));
        }
    }
    if mode == Mode::T {
        for i in 0..n {
            for m in i + 1..n {
                for k in m + 1..=n {
                    let prem = block_swap(ante, i, m, k);
                    if &prem == ante {
                        continue;
                    }
                    out.push((
                        Rule::Exchange(i, i + (k - m), k),
                        vec![Inference::new(prem, goal.consequent.clone())],
                    ));
                }
            }
        }
    }
    out
}

/// Backward rules for a goal in mode `T` whose antecedent is kept sorted.
/// Exchange is folded into the premises: each premise is listed in the
/// order the rule needs, and `right` splits range over sub-multisets.
fn backward_sorted(goal: &Inference) -> Vec<(Rule, Vec<Inference>)> {
    let mut out: Vec<(Rule, Vec<Inference>)> =
        backward(goal, Mode::Tprime).into_iter().filter(|(r, _)| *r != Rule::RTensor).collect();
    if let Term::Tensor(l, r) = &goal.consequent {
        let ante = &goal.antecedent;
        let mut seen = HashSet::new();
        for mask in 0u64..(1u64 << ante.len()) {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for (i, t) in ante.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(t.clone());
                } else {
                    right.push(t.clone());
                }
            }
            if seen.insert(left.clone()) {
                out.push((
                    Rule::RTensor,
                    vec![Inference::new(left, (**l).clone()), Inference::new(right, (**r).clone())],
                ));
            }
        }
    }
    out
}

fn sorted(goal: &Inference) -> Inference {
    let mut antecedent = goal.antecedent.clone();
    antecedent.sort();
    Inference::new(antecedent, goal.consequent.clone())
}

/// Exchanges turning a proof of `from` into one of `to`, where the two
/// antecedents are permutations of each other. Each step moves one item
/// into place, so there are fewer exchanges than items.
fn reorder(proof: Proof, from: &[Term], to: &[Term]) -> Proof {
    let mut cur = from.to_vec();
    let mut proof = proof;
    for i in 0..cur.len() {
        if cur[i] == to[i] {
            continue;
        }
        let j = (i + 1..cur.len()).find(|&j| cur[j] == to[i]).expect("antecedents are permutations");
        cur = block_swap(&cur, i, j, j + 1);
        proof = Proof::exchange(i, j, j + 1, proof);
    }
    proof
}

fn reorder_cost(from: &[Term], to: &[Term]) -> usize {
    let mut cur = from.to_vec();
    let mut n = 0;
    for i in 0..cur.len() {
        if cur[i] != to[i] {
            let j = (i + 1..cur.len()).find(|&j| cur[j] == to[i]).expect("antecedents are permutations");
            cur = block_swap(&cur, i, j, j + 1);
            n += 1;
        }
    }
    n
}

/// Upper limit on distinct goals explored before giving up.
const GOAL_LIMIT: usize = 400_000;

/// Least-cost derivation over the goals reachable backward from the root,
/// in the style of Dijkstra's algorithm generalised to rules with several
/// premises: a goal's cost is final once it is the cheapest in the queue.
///
/// In mode `T` goals are identified up to the order of their antecedent and
/// every reordering is paid for with explicit exchange nodes, so the result
/// is the smallest proof of that shape rather than the smallest overall.
fn least_cost(root: &Inference, mode: Mode, max_nodes: usize) -> Option<Proof> {
    struct Edge {
        goal: usize,
        rule: Rule,
        premises: Vec<usize>,
        /// The antecedent order each premise must have.
        wanted: Vec<Inference>,
        produced: Vec<Term>,
        waiting: usize,
        cost: usize,
    }

    let key = |g: &Inference| if mode == Mode::T { sorted(g) } else { g.clone() };
    let start = key(root);
    let root_extra = reorder_cost(&start.antecedent, &root.antecedent);
    if lower_bound(root) + root_extra > max_nodes {
        return None;
    }
    let mut ids: HashMap<Inference, usize> = HashMap::new();
    let mut goals: Vec<Inference> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut uses: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), 0);
    goals.push(start);
    uses.push(Vec::new());
    queue.push_back(0);
    while let Some(g) = queue.pop_front() {
        let options = match mode {
            Mode::T => backward_sorted(&goals[g]),
            Mode::Tprime => backward(&goals[g], mode),
        };
        for (rule, premises) in options {
            // Antecedent order the rule itself concludes with.
            let produced: Vec<Term> = match rule {
                Rule::RTensor => premises.iter().flat_map(|p| p.antecedent.iter().cloned()).collect(),
                _ => goals[g].antecedent.clone(),
            };
            let mut cost = 1 + reorder_cost(&produced, &goals[g].antecedent);
            let mut keys = Vec::with_capacity(premises.len());
            for p in &premises {
                let k = key(p);
                cost += reorder_cost(&k.antecedent, &p.antecedent);
                keys.push(k);
            }
            let bound: usize = cost + premises.iter().map(lower_bound).sum::<usize>();
            if bound + root_extra > max_nodes {
                continue;
            }
            let mut prem_ids = Vec::with_capacity(keys.len());
            for k in keys {
                let id = match ids.get(&k) {
                    Some(&id) => id,
                    None => {
                        if goals.len() >= GOAL_LIMIT {
                            return None;
                        }
                        let id = goals.len();
                        ids.insert(k.clone(), id);
                        goals.push(k);
                        uses.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                prem_ids.push(id);
            }
            let e = edges.len();
            for &p in &prem_ids {
                uses[p].push(e);
            }
            edges.push(Edge { goal: g, rule, waiting: prem_ids.len(), premises: prem_ids, wanted: premises, produced, cost });
        }
    }

    let budget = max_nodes - root_extra;
    let mut best: Vec<Option<(usize, usize)>> = vec![None; goals.len()];
    let mut heap = BinaryHeap::new();
    for (e, edge) in edges.iter().enumerate() {
        if edge.waiting == 0 {
            heap.push(Reverse((edge.cost, edge.goal, e)));
        }
    }
    while let Some(Reverse((cost, g, e))) = heap.pop() {
        if cost > budget {
            break;
        }
        if best[g].is_some() {
            continue;
        }
        best[g] = Some((cost, e));
        if g == 0 {
            break;
        }
        for &u in &uses[g] {
            let edge = &mut edges[u];
            edge.waiting -= 1;
            edge.cost += cost;
            if edge.waiting == 0 && best[edge.goal].is_none() {
                heap.push(Reverse((edge.cost, edge.goal, u)));
            }
        }
    }
    best[0]?;

    fn build(g: usize, goals: &[Inference], best: &[Option<(usize, usize)>], edges: &[Edge]) -> Proof {
        let (_, e) = best[g].expect("premises of a finished edge are finished");
        let edge = &edges[e];
        let premises = edge
            .premises
            .iter()
            .zip(&edge.wanted)
            .map(|(&p, want)| reorder(build(p, goals, best, edges), &goals[p].antecedent, &want.antecedent))
            .collect();
        let node = Proof { rule: edge.rule.clone(), premises };
        reorder(node, &edge.produced, &goals[g].antecedent)
    }
    let proof = build(0, &goals, &best, &edges);
    Some(reorder(proof, &goals[0].antecedent, &root.antecedent))
}

/// Memo entry for the theory search.
#[derive(Clone)]
enum Memo {
    /// Cheapest proof and its size.
    Exact(usize, Proof),
    /// No proof with at most this many nodes.
    NoneUpTo(usize),
}

/// Depth-first search with a shrinking budget, adding cuts against single
/// theory axioms to the cut-free rules.
struct TheorySearch<'a> {
    theory: &'a Theory,
    mode: Mode,
    memo: HashMap<Inference, Memo>,
    expansions: usize,
}

const EXPANSION_LIMIT: usize = 2_000_000;

impl<'a> TheorySearch<'a> {
    fn new(theory: &'a Theory, mode: Mode) -> TheorySearch<'a> {
        TheorySearch { theory, mode, memo: HashMap::new(), expansions: 0 }
    }

    fn run(&mut self, goal: &Inference, max_nodes: usize) -> Option<Proof> {
        self.search(goal, max_nodes).map(|(_, p)| p)
    }

    fn cut_pos(&self, pos: usize) -> Option<usize> {
        match self.mode {
            Mode::T => None,
            Mode::Tprime => Some(pos),
        }
    }

    /// Rules whose non-axiom premises are listed; axiom leaves are filled in
    /// by `assemble`.
    fn options(&self, goal: &Inference) -> Vec<(Rule, Vec<Option<Rule>>, Vec<Inference>)> {
        let mut out: Vec<(Rule, Vec<Option<Rule>>, Vec<Inference>)> = Vec::new();
        for (rule, premises) in backward(goal, self.mode) {
            let slots = vec![None; premises.len()];
            out.push((rule, slots, premises));
        }
        let th = self.theory;
        let ante = &goal.antecedent;
        let n = ante.len();
        let c = &goal.consequent;
        if ante.is_empty() && th.available().contains(c) {
            out.push((Rule::RAxiom(c.clone()), vec![], vec![]));
        }
        if n == 1 && c.is_unit() && th.disposable().contains(&ante[0]) {
            out.push((Rule::LAxiom(ante[0].clone()), vec![], vec![]));
        }
        if n == 1 && th.conversions().iter().any(|cv| cv.from == ante[0] && &cv.to == c) {
            out.push((Rule::ConvAxiom(ante[0].clone(), c.clone()), vec![], vec![]));
        }
        let positions: Vec<usize> = match self.mode {
            Mode::T => (0..=n).rev().take(1).collect(),
            Mode::Tprime => (0..=n).collect(),
        };
        // ⊢ X cut into the item inserted at p
        for x in th.available() {
            for &p in &positions {
                let mut prem = ante.clone();
                prem.insert(p, x.clone());
                out.push((
                    Rule::Cut(self.cut_pos(p)),
                    vec![Some(Rule::RAxiom(x.clone())), None],
                    vec![Inference::new(prem, c.clone())],
                ));
            }
        }
        let items: Vec<usize> = match self.mode {
            Mode::T => n.checked_sub(1).into_iter().collect(),
            Mode::Tprime => (0..n).collect(),
        };
        for &q in &items {
            // X ⊢ 1 with the unit in the right premise
            if th.disposable().contains(&ante[q]) {
                let mut prem = ante.clone();
                prem[q] = Term::Unit;
                out.push((
                    Rule::Cut(self.cut_pos(q)),
                    vec![Some(Rule::LAxiom(ante[q].clone())), None],
                    vec![Inference::new(prem, c.clone())],
                ));
            }
            for cv in th.conversions().iter().filter(|cv| cv.from == ante[q]) {
                let mut prem = ante.clone();
                prem[q] = cv.to.clone();
                out.push((
                    Rule::Cut(self.cut_pos(q)),
                    vec![Some(Rule::ConvAxiom(cv.from.clone(), cv.to.clone())), None],
                    vec![Inference::new(prem, c.clone())],
                ));
            }
        }
        // Γ ⊢ X then X ⊢ 1; Γ ⊢ A then A ⊢ B
        if c.is_unit() {
            for y in th.disposable() {
                out.push((
                    Rule::Cut(self.cut_pos(0)),
                    vec![None, Some(Rule::LAxiom(y.clone()))],
                    vec![Inference::new(ante.clone(), y.clone())],
                ));
            }
        }
        for cv in th.conversions().iter().filter(|cv| &cv.to == c) {
            out.push((
                Rule::Cut(self.cut_pos(0)),
                vec![None, Some(Rule::ConvAxiom(cv.from.clone(), cv.to.clone()))],
                vec![Inference::new(ante.clone(), cv.from.clone())],
            ));
        }
        out
    }

    fn search(&mut self, goal: &Inference, budget: usize) -> Option<(usize, Proof)> {
        if budget == 0 {
            return None;
        }
        match self.memo.get(goal) {
            Some(Memo::Exact(c, p)) => return (*c <= budget).then(|| (*c, p.clone())),
            Some(Memo::NoneUpTo(b)) if *b >= budget => return None,
            _ => {}
        }
        self.expansions += 1;
        if self.expansions > EXPANSION_LIMIT {
            return None;
        }
        let mut best: Option<(usize, Proof)> = None;
        for (rule, slots, premises) in self.options(goal) {
            let leaves = slots.iter().filter(|s| s.is_some()).count();
            let limit = best.as_ref().map_or(budget, |(c, _)| c - 1);
            let fixed = 1 + leaves;
            if fixed + premises.len() > limit {
                continue;
            }
            let mut spent = fixed;
            let mut subproofs = Vec::new();
            let mut ok = true;
            for (i, p) in premises.iter().enumerate() {
                let reserve = premises.len() - i - 1;
                match self.search(p, limit - spent - reserve) {
                    Some((c, proof)) => {
                        spent += c;
                        subproofs.push(proof);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let mut it = subproofs.into_iter();
            let mut premises: Vec<Proof> = Vec::new();
            for s in slots {
                premises.push(match s {
                    Some(r) => Proof::leaf(r),
                    None => it.next().unwrap(),
                });
            }
            best = Some((spent, Proof { rule, premises }));
        }
        if self.expansions <= EXPANSION_LIMIT {
            let entry = match &best {
                Some((c, p)) => Memo::Exact(*c, p.clone()),
                None => Memo::NoneUpTo(budget),
            };
            self.memo.insert(goal.clone(), entry);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_inference;

    fn inf(s: &str) -> Inference {
        parse_inference(s).unwrap()
    }

    #[test]
    fn decide_examples() {
        assert!(matches!(decide(&inf("A * B |- B * A"), Mode::T), Verdict::Provable(_)));
        assert!(matches!(decide(&inf("A * B |- B * A"), Mode::Tprime), Verdict::NotProvable(_)));
        assert!(matches!(decide(&inf("A * 1 |- A"), Mode::Tprime), Verdict::Provable(_)));
        assert!(matches!(decide(&inf("A |- A * A"), Mode::T), Verdict::NotProvable(_)));
        assert!(matches!(decide(&inf("|- 1 * 1"), Mode::T), Verdict::Provable(_)));
        assert!(matches!(synthesize_proof(&inf("A |- B"), Mode::T), Err(DecisionError::NotDerivable(_))));
    }

    #[test]
    fn bounded_search_examples() {
        assert!(matches!(bounded_search(&inf("P |- P"), Mode::T, None, 1), Verdict::Provable(_)));
        assert_eq!(bounded_search(&inf("P |- Q"), Mode::T, None, 10), Verdict::Unknown(10));
        match bounded_search(&inf("A * 1 |- A"), Mode::Tprime, None, 6) {
            Verdict::Provable(p) => assert_eq!(p.length(), 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(bounded_search(&inf("A * B |- B * A"), Mode::T, None, 4), Verdict::Unknown(4));
        match bounded_search(&inf("A * B |- B * A"), Mode::T, None, 5) {
            Verdict::Provable(p) => assert_eq!(check(&p, Mode::T, None).unwrap(), inf("A * B |- B * A")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn theory_search_finds_cloning() {
        let t = Theory::parse("atoms C ;\nfree C ;\n").unwrap();
        match bounded_search(&inf("C |- C * C"), Mode::T, Some(&t), 8) {
            Verdict::Provable(p) => assert_eq!(check(&p, Mode::T, Some(&t)).unwrap(), inf("C |- C * C")),
            other => panic!("{other:?}"),
        }
        assert_eq!(bounded_search(&inf("C |- 1"), Mode::T, Some(&t), 8), Verdict::Unknown(8));
    }
}
