//! Seeded generators for terms, provable goals, proofs with cuts, models,
//! theories and transformation pattern instances. Used by the test suites
//! and the CLI sweeps; every generator is deterministic in its seed.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::MonoidModel;
use crate::kernel::{block_swap, identity_proof, positioned_cut, Mode, NodePath, Proof};
use crate::rewrite::{canonical_proof, TransformName};
use crate::syntax::{Atom, Inference, Sequent, Term};
use crate::theory::Theory;

pub struct Generator {
    rng: ChaCha8Rng,
    atoms: Vec<Atom>,
    /// Chance of a unit leaf next to each atom leaf.
    pub unit_rate: f64,
}

/// Atom names `A`, `B`, ... for the first `n` letters.
pub fn alphabet(n: usize) -> Vec<Atom> {
    assert!((1..=26).contains(&n));
    (0..n).map(|i| Atom::new(&((b'A' + i as u8) as char).to_string()).unwrap()).collect()
}

/// Atoms of a sequent in reading order.
pub fn ordered_atoms(seq: &[Term]) -> Vec<Atom> {
    seq.iter().flat_map(Term::atoms).collect()
}

/// Whether the inference is provable: equal atom multisets in mode `T`,
/// equal atom lists in mode `Tprime`.
pub fn balanced(inf: &Inference, mode: Mode) -> bool {
    let left = ordered_atoms(&inf.antecedent);
    let right = inf.consequent.atoms();
    match mode {
        Mode::Tprime => left == right,
        Mode::T => {
            let (mut l, mut r) = (left, right);
            l.sort();
            r.sort();
            l == r
        }
    }
}

impl Generator {
    pub fn new(seed: u64, atom_count: usize) -> Generator {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), atoms: alphabet(atom_count), unit_rate: 0.15 }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// A list of `n` atoms drawn with repetition.
    pub fn atom_list(&mut self, n: usize) -> Vec<Atom> {
        (0..n).map(|_| self.atoms[self.rng.random_range(0..self.atoms.len())].clone()).collect()
    }

    fn leaves(&mut self, atoms: &[Atom]) -> Vec<Term> {
        let mut out = Vec::new();
        for a in atoms {
            if self.rng.random_bool(self.unit_rate) {
                out.push(Term::Unit);
            }
            out.push(Term::Atom(a.clone()));
        }
        if out.is_empty() || self.rng.random_bool(self.unit_rate) {
            let at = self.rng.random_range(0..=out.len());
            out.insert(at, Term::Unit);
        }
        out
    }

    fn bracket(&mut self, leaves: &[Term]) -> Term {
        if leaves.len() == 1 {
            return leaves[0].clone();
        }
        let k = self.rng.random_range(1..leaves.len());
        let (l, r) = leaves.split_at(k);
        Term::tensor(self.bracket(l), self.bracket(r))
    }

    /// A random bracketing of the atoms in the given order, with units.
    pub fn term_over(&mut self, atoms: &[Atom]) -> Term {
        let leaves = self.leaves(atoms);
        self.bracket(&leaves)
    }

    /// A random term with `1..=max_atoms` atom occurrences.
    pub fn term(&mut self, max_atoms: usize) -> Term {
        let n = self.rng.random_range(1..=max_atoms.max(1));
        let atoms = self.atom_list(n);
        self.term_over(&atoms)
    }

    /// A sequent whose reading-order atoms are exactly `atoms`.
    pub fn sequent_over(&mut self, atoms: &[Atom]) -> Sequent {
        let mut leaves = Vec::new();
        for a in atoms {
            if self.rng.random_bool(self.unit_rate) {
                leaves.push(Term::Unit);
            }
            leaves.push(Term::Atom(a.clone()));
        }
        if leaves.is_empty() {
            return match self.rng.random_range(0..3) {
                0 => vec![Term::Unit],
                _ => vec![],
            };
        }
        let mut cuts: Vec<usize> = (1..leaves.len()).filter(|_| self.rng.random_bool(0.5)).collect();
        cuts.push(leaves.len());
        let mut out = Vec::new();
        let mut start = 0;
        for end in cuts {
            out.push(self.bracket(&leaves[start..end]));
            start = end;
        }
        out
    }

    fn arrange(&mut self, atoms: &[Atom], mode: Mode) -> Vec<Atom> {
        let mut v = atoms.to_vec();
        if mode == Mode::T {
            v.shuffle(&mut self.rng);
        }
        v
    }

    /// A provable inference with `1..=max_atoms` atom occurrences.
    pub fn goal(&mut self, mode: Mode, max_atoms: usize) -> Inference {
        let consequent = self.term(max_atoms);
        self.goal_for(consequent, mode)
    }

    /// A provable inference with the given consequent.
    pub fn goal_for(&mut self, consequent: Term, mode: Mode) -> Inference {
        let atoms = self.arrange(&consequent.atoms(), mode);
        Inference::new(self.sequent_over(&atoms), consequent)
    }

    /// An inference with independent sides, usually not provable.
    pub fn inference(&mut self, max_atoms: usize) -> Inference {
        let k = self.rng.random_range(0..=max_atoms);
        let atoms = self.atom_list(k);
        let antecedent = self.sequent_over(&atoms);
        Inference::new(antecedent, self.term(max_atoms))
    }

    /// A random proof of a provable inference, with up to `cuts` cuts and
    /// some structural rule steps before falling back to the canonical
    /// proof.
    pub fn proof_of(&mut self, inf: &Inference, mode: Mode, cuts: usize) -> Proof {
        self.proof_with(inf, mode, cuts, 4)
    }

    fn proof_with(&mut self, inf: &Inference, mode: Mode, cuts: usize, fuel: usize) -> Proof {
        debug_assert!(balanced(inf, mode), "{inf}");
        let n = inf.antecedent.len();
        if cuts > 0 && self.rng.random_bool(0.5) {
            let i = self.rng.random_range(0..=n);
            let j = self.rng.random_range(i..=n.min(i + 3));
            let block = inf.antecedent[i..j].to_vec();
            let inner = self.arrange(&ordered_atoms(&block), mode);
            let middle = self.term_over(&inner);
            let mut right_ante = inf.antecedent[..i].to_vec();
            right_ante.push(middle.clone());
            right_ante.extend_from_slice(&inf.antecedent[j..]);
            let split = self.rng.random_range(0..cuts);
            let left = self.proof_with(&Inference::new(block, middle), mode, split, fuel / 2);
            let right_inf = Inference::new(right_ante, inf.consequent.clone());
            let right = self.proof_with(&right_inf, mode, cuts - 1 - split, fuel / 2);
            return positioned_cut(mode, left, right, i, right_inf.antecedent.len(), j - i);
        }
        if fuel > 0 && self.rng.random_bool(0.7) {
            if let Some(p) = self.structural_step(inf, mode, cuts, fuel - 1) {
                return p;
            }
        }
        canonical_proof(inf, mode).expect("balanced inference has a canonical proof")
    }

    fn structural_step(&mut self, inf: &Inference, mode: Mode, cuts: usize, fuel: usize) -> Option<Proof> {
        let ante = &inf.antecedent;
        let mut options: Vec<u8> = Vec::new();
        if ante.iter().any(|t| matches!(t, Term::Tensor(..))) {
            options.push(0);
        }
        if ante.iter().any(Term::is_unit) {
            options.push(1);
        }
        let splits: Vec<usize> = match &inf.consequent {
            Term::Tensor(a, b) => (0..=ante.len())
                .filter(|&k| {
                    balanced(&Inference::new(ante[..k].to_vec(), (**a).clone()), mode)
                        && balanced(&Inference::new(ante[k..].to_vec(), (**b).clone()), mode)
                })
                .collect(),
            _ => vec![],
        };
        if !splits.is_empty() {
            options.push(2);
        }
        if mode == Mode::T && ante.len() >= 2 {
            options.push(3);
        }
        let choice = *options.choose(&mut self.rng)?;
        let sub = |g: &mut Generator, a: Sequent, c: Term| g.proof_with(&Inference::new(a, c), mode, cuts, fuel);
        Some(match choice {
            0 => {
                let qs: Vec<usize> = (0..ante.len()).filter(|&q| matches!(ante[q], Term::Tensor(..))).collect();
                let q = *qs.choose(&mut self.rng).unwrap();
                let Term::Tensor(a, b) = &ante[q] else { unreachable!() };
                let mut premise = ante.clone();
                premise.splice(q..=q, [(**a).clone(), (**b).clone()]);
                Proof::l_tensor(q, sub(self, premise, inf.consequent.clone()))
            }
            1 => {
                let qs: Vec<usize> = (0..ante.len()).filter(|&q| ante[q].is_unit()).collect();
                let q = *qs.choose(&mut self.rng).unwrap();
                let mut premise = ante.clone();
                premise.remove(q);
                Proof::l_unit(q, sub(self, premise, inf.consequent.clone()))
            }
            2 => {
                let k = *splits.choose(&mut self.rng).unwrap();
                let Term::Tensor(a, b) = &inf.consequent else { unreachable!() };
                // cuts go to one side only, to keep the total bounded
                let (cl, cr) = if self.rng.random_bool(0.5) { (cuts, 0) } else { (0, cuts) };
                let left = self.proof_with(&Inference::new(ante[..k].to_vec(), (**a).clone()), mode, cl, fuel);
                let right = self.proof_with(&Inference::new(ante[k..].to_vec(), (**b).clone()), mode, cr, fuel);
                Proof::r_tensor(left, right)
            }
            _ => {
                let n = ante.len();
                let i = self.rng.random_range(0..n - 1);
                let j = self.rng.random_range(i + 1..n);
                let k = self.rng.random_range(j + 1..=n);
                let premise = block_swap(ante, i, j, k);
                Proof::exchange(i, i + (k - j), k, sub(self, premise, inf.consequent.clone()))
            }
        })
    }

    /// A random provable goal and a proof of it with up to `cuts` cuts.
    pub fn proof(&mut self, mode: Mode, max_atoms: usize, cuts: usize) -> (Inference, Proof) {
        let goal = self.goal(mode, max_atoms);
        let proof = self.proof_of(&goal, mode, cuts);
        (goal, proof)
    }

    /// A provable `source ⊢ B` with `B` a random rearrangement of the
    /// source's atoms: reordered in mode `T`, rebracketed in both modes.
    pub fn single_goal(&mut self, source: Term, mode: Mode) -> Inference {
        let atoms = self.arrange(&source.atoms(), mode);
        let target = self.term_over(&atoms);
        Inference::new(vec![source], target)
    }

    /// A model drawn from `models` with a random valuation of every atom.
    pub fn model_from(&mut self, models: &[MonoidModel]) -> MonoidModel {
        let mut m = models[self.rng.random_range(0..models.len())].clone();
        for a in self.atoms.clone() {
            let v = self.rng.random_range(0..m.size());
            m.set_value(a, v);
        }
        m
    }

    /// A theory over the generator's atoms with up to two available and
    /// two disposable terms and no conversions.
    pub fn theory(&mut self) -> Theory {
        let mut t = Theory::new(self.atoms.iter().cloned());
        for _ in 0..self.rng.random_range(0..=2) {
            let x = self.term(2);
            t.add_available(x).expect("declared atoms");
        }
        for _ in 0..self.rng.random_range(0..=2) {
            let y = self.term(2);
            t.add_disposable(y).expect("declared atoms");
        }
        t
    }

    fn goal_with_items(&mut self, mode: Mode, min_items: usize, max_atoms: usize) -> Inference {
        loop {
            let g = self.goal(mode, max_atoms);
            if g.antecedent.len() >= min_items {
                return g;
            }
        }
    }

    /// A proof of some inference whose antecedent item at a random position
    /// is then cut against; returns the proof of `Γ ⊢ item`.
    fn left_for(&mut self, item: &Term, mode: Mode) -> Proof {
        let g = self.goal_for(item.clone(), mode);
        self.proof_of(&g, mode, 1)
    }

    /// A proof matching the forward pattern of `name`, in mode `Tprime`,
    /// placed at the returned path (the root or a premise of a wrapping
    /// `rx`).
    pub fn transform_instance(&mut self, name: TransformName) -> (Proof, NodePath) {
        let mode = Mode::Tprime;
        let core = self.pattern(name, mode);
        match self.rng.random_range(0..3) {
            0 => (core, NodePath::root()),
            side => {
                let (_, other) = self.proof(mode, 2, 1);
                if side == 1 {
                    (Proof::r_tensor(core, other), NodePath(vec![0]))
                } else {
                    (Proof::r_tensor(other, core), NodePath(vec![1]))
                }
            }
        }
    }

    fn pattern(&mut self, name: TransformName, mode: Mode) -> Proof {
        use TransformName::*;
        let cut = |p: usize, l: Proof, r: Proof| Proof::cut(Some(p), l, r);
        match name {
            CutCutVertical => {
                let outer = self.goal_with_items(mode, 1, 4);
                let q = self.below(outer.antecedent.len());
                let mid = self.goal_with_items_for(&outer.antecedent[q], mode);
                let p = self.below(mid.antecedent.len());
                let a = self.left_for(&mid.antecedent[p], mode);
                let b = self.proof_of(&mid, mode, 0);
                let c = self.proof_of(&outer, mode, 0);
                cut(q, cut(p, a, b), c)
            }
            CutCutHorizontal => {
                let base = self.goal_with_items(mode, 2, 4);
                let n = base.antecedent.len();
                let inner = 1 + self.below(n - 1);
                let outer = self.below(inner);
                let y = self.left_for(&base.antecedent[inner], mode);
                let x = self.left_for(&base.antecedent[outer], mode);
                let b = self.proof_of(&base, mode, 0);
                cut(outer, x, cut(inner, y, b))
            }
            CutTensor => {
                let base = self.goal_with_items(mode, 2, 4);
                let p = self.below(base.antecedent.len() - 1);
                let (ta, tb) = (base.antecedent[p].clone(), base.antecedent[p + 1].clone());
                let c = self.proof_of(&base, mode, 0);
                let a = self.left_for(&ta, mode);
                let b = self.left_for(&tb, mode);
                cut(p, Proof::r_tensor(a, b), Proof::l_tensor(p, c))
            }
            OneCut => {
                let (g, pi) = self.proof(mode, 3, 1);
                let p = self.rng.random_range(0..=g.antecedent.len());
                cut(p, Proof::r_unit(), Proof::l_unit(p, pi))
            }
            LTensorCutLeft => {
                let base = self.goal_with_items(mode, 1, 4);
                let p = self.below(base.antecedent.len());
                let upper = self.goal_with_items_for_min(&base.antecedent[p], mode, 2);
                let q = self.below(upper.antecedent.len() - 1);
                let a = self.proof_of(&upper, mode, 0);
                let b = self.proof_of(&base, mode, 0);
                cut(p, Proof::l_tensor(q, a), b)
            }
            LTensorCutRight => {
                let upper = self.goal_with_items(mode, 3, 5);
                let q = self.below(upper.antecedent.len() - 1);
                let mut fused = upper.antecedent.clone();
                let pair = Term::tensor(fused[q].clone(), fused[q + 1].clone());
                fused.splice(q..=q + 1, [pair]);
                let others: Vec<usize> = (0..fused.len()).filter(|&x| x != q).collect();
                let p = others[self.below(others.len())];
                let a = self.left_for(&fused[p], mode);
                let b = self.proof_of(&upper, mode, 0);
                cut(p, a, Proof::l_tensor(q, b))
            }
            RTensorCut => loop {
                let (g1, b) = self.proof(mode, 2, 0);
                let (g2, c) = self.proof(mode, 2, 0);
                let items: Vec<Term> = g1.antecedent.iter().chain(&g2.antecedent).cloned().collect();
                if items.is_empty() {
                    continue;
                }
                let p = self.below(items.len());
                let a = self.left_for(&items[p], mode);
                break cut(p, a, Proof::r_tensor(b, c));
            },
            RightIdentity => {
                let (g, a) = self.proof(mode, 3, 1);
                cut(0, a, identity_proof(&g.consequent))
            }
            LeftIdentity => {
                let (g, b) = loop {
                    let (g, b) = self.proof(mode, 3, 1);
                    if !g.antecedent.is_empty() {
                        break (g, b);
                    }
                };
                let s = self.below(g.antecedent.len());
                cut(s, identity_proof(&g.antecedent[s]), b)
            }
            LTensorRTensor | LUnitRTensor => {
                let tensor = name == LTensorRTensor;
                let upper = if tensor { self.goal_with_items(mode, 2, 3) } else { self.goal(mode, 3) };
                let n = upper.antecedent.len();
                let inner = self.proof_of(&upper, mode, 0);
                let lifted = if tensor {
                    Proof::l_tensor(self.below(n - 1), inner)
                } else {
                    Proof::l_unit(self.rng.random_range(0..=n), inner)
                };
                let (_, other) = self.proof(mode, 2, 0);
                if self.rng.random_bool(0.5) {
                    Proof::r_tensor(lifted, other)
                } else {
                    Proof::r_tensor(other, lifted)
                }
            }
        }
    }

    fn goal_with_items_for(&mut self, consequent: &Term, mode: Mode) -> Inference {
        self.goal_with_items_for_min(consequent, mode, 1)
    }

    fn goal_with_items_for_min(&mut self, consequent: &Term, mode: Mode, min_items: usize) -> Inference {
        for _ in 0..64 {
            let g = self.goal_for(consequent.clone(), mode);
            if g.antecedent.len() >= min_items {
                return g;
            }
        }
        // pad with units, which every consequent tolerates
        let mut g = self.goal_for(consequent.clone(), mode);
        while g.antecedent.len() < min_items {
            g.antecedent.push(Term::Unit);
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check;

    #[test]
    fn generated_proofs_check() {
        for mode in [Mode::T, Mode::Tprime] {
            let mut g = Generator::new(7, 3);
            for _ in 0..200 {
                let (goal, proof) = g.proof(mode, 4, 3);
                assert_eq!(check(&proof, mode, None).unwrap(), goal, "{proof}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let run = |seed| {
            let mut g = Generator::new(seed, 3);
            (0..20).map(|_| g.proof(Mode::T, 4, 2).1).collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn instances_check() {
        let mut g = Generator::new(11, 3);
        for name in TransformName::ALL {
            for _ in 0..20 {
                let (p, path) = g.transform_instance(name);
                check(&p, Mode::Tprime, None).unwrap_or_else(|e| panic!("{name}: {p}: {e}"));
                assert!(p.at(&path).is_some());
            }
        }
    }
}
