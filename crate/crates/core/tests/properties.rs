//! Property tests over the kernel, cut elimination and decision procedures.

use proptest::prelude::*;
use tlogic_core::decision::{bounded_search, decide, Verdict};
use tlogic_core::kernel::{check, infer, AnyAxioms, CheckError};
use tlogic_core::random::{balanced, Generator};
use tlogic_core::rewrite::{canonical_proof, canonicalize, eliminate_cuts, eliminate_cuts_traced};
use tlogic_core::syntax::{parse_inference, parse_term, render_term, AtomVector, Term};
use tlogic_core::{parse_proof, render_proof, Mode, Proof};

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Unit),
        prop::sample::select(vec!["A", "B", "C", "Q_A", "x1"]).prop_map(Term::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| Term::tensor(l, r)))
}

fn mode_strategy() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::T), Just(Mode::Tprime)]
}

/// A random checked proof of a random provable inference.
fn proof_from(seed: u64, mode: Mode, cuts: usize) -> (tlogic_core::Inference, Proof) {
    Generator::new(seed, 3).proof(mode, 5, cuts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn term_text_round_trips(t in term_strategy()) {
        let text = render_term(&t);
        prop_assert_eq!(parse_term(&text).unwrap(), t);
    }

    #[test]
    fn atom_counts_add_under_tensor(l in term_strategy(), r in term_strategy()) {
        let mut sum = l.atom_vector();
        for (a, n) in r.atom_vector().iter() {
            sum.insert(a, n);
        }
        prop_assert_eq!(Term::tensor(l, r).atom_vector(), sum);
    }

    #[test]
    fn proof_text_round_trips(seed in any::<u64>(), mode in mode_strategy(), cuts in 0usize..3) {
        let (_, p) = proof_from(seed, mode, cuts);
        prop_assert_eq!(parse_proof(&render_proof(&p)).unwrap(), p);
    }

    #[test]
    fn checking_is_deterministic(seed in any::<u64>(), mode in mode_strategy(), cuts in 0usize..3) {
        let (inf, p) = proof_from(seed, mode, cuts);
        let first = check(&p, mode, None);
        prop_assert_eq!(first.as_ref(), Ok(&inf));
        prop_assert_eq!(check(&p, mode, None), first);
    }

    #[test]
    fn generated_proofs_are_balanced(seed in any::<u64>(), mode in mode_strategy()) {
        let (inf, _) = proof_from(seed, mode, 2);
        prop_assert!(balanced(&inf, mode));
    }

    #[test]
    fn cut_elimination_keeps_the_conclusion(seed in any::<u64>(), mode in mode_strategy(), cuts in 1usize..4) {
        let (inf, p) = proof_from(seed, mode, cuts);
        let q = eliminate_cuts(&p, mode).unwrap();
        prop_assert!(!q.has_cut());
        prop_assert_eq!(check(&q, mode, None), Ok(inf));
    }

    #[test]
    fn cut_free_proofs_are_left_alone(seed in any::<u64>(), mode in mode_strategy()) {
        let (_, p) = proof_from(seed, mode, 0);
        prop_assume!(!p.has_cut());
        prop_assert_eq!(eliminate_cuts(&p, mode).unwrap(), p);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>(), mode in mode_strategy(), cuts in 0usize..3) {
        let (inf, p) = proof_from(seed, mode, cuts);
        let c = canonicalize(&p, mode).unwrap();
        prop_assert_eq!(check(&c, mode, None), Ok(inf));
        prop_assert_eq!(canonicalize(&c, mode).unwrap(), c);
    }

    #[test]
    fn proofs_of_one_inference_share_a_canonical_form(seed in any::<u64>(), mode in mode_strategy()) {
        let mut gen = Generator::new(seed, 3);
        let goal = gen.goal(mode, 5);
        let first = gen.proof_of(&goal, mode, 2);
        let second = gen.proof_of(&goal, mode, 1);
        prop_assert_eq!(canonicalize(&first, mode).unwrap(), canonicalize(&second, mode).unwrap());
        prop_assert_eq!(canonicalize(&first, mode).unwrap(), canonical_proof(&goal, mode).unwrap());
    }

    #[test]
    fn decide_matches_bounded_search(seed in any::<u64>(), mode in mode_strategy(), provable in any::<bool>()) {
        let mut gen = Generator::new(seed, 3);
        let inf = if provable { gen.goal(mode, 4) } else { gen.inference(4) };
        let found = matches!(bounded_search(&inf, mode, None, 40), Verdict::Provable(_));
        match decide(&inf, mode) {
            Verdict::Provable(p) => {
                prop_assert!(found);
                prop_assert_eq!(check(&p, mode, None), Ok(inf));
            }
            Verdict::NotProvable(_) => prop_assert!(!found),
            Verdict::Unknown(_) => prop_assert!(false, "decide never gives up"),
        }
    }

    #[test]
    fn tprime_provable_implies_t_provable(seed in any::<u64>()) {
        let mut gen = Generator::new(seed, 3);
        let inf = gen.goal(Mode::Tprime, 5);
        prop_assert!(matches!(decide(&inf, Mode::T), Verdict::Provable(_)));
    }
}

#[test]
fn exchange_is_rejected_without_exchange() {
    let p = parse_proof("(lx 0 (ex 0 1 2 (rx (id A) (id B))))").unwrap();
    assert!(check(&p, Mode::T, None).is_ok());
    assert!(matches!(check(&p, Mode::Tprime, None), Err(CheckError::ExchangeInTprime { .. })));
}

#[test]
fn mode_t_cuts_only_the_last_item() {
    let p = parse_proof("(cut 0 (r1) (l1 0 (id A)))").unwrap();
    assert!(check(&p, Mode::Tprime, None).is_ok());
    assert!(check(&p, Mode::T, None).is_err());
}

#[test]
fn axioms_need_a_licence() {
    let p = parse_proof("(rx (id C) (ax-r C))").unwrap();
    assert!(matches!(check(&p, Mode::T, None), Err(CheckError::UnknownAxiom { .. })));
    assert_eq!(check(&p, Mode::T, Some(&AnyAxioms)).unwrap(), parse_inference("C |- C * C").unwrap());
}

#[test]
fn blocked_axiom_cuts_are_reported() {
    let p = parse_proof("(rx (id A) (cut (ax-r X) (ax-l X)))").unwrap();
    let r = eliminate_cuts_traced(&p, Mode::T, Some(&AnyAxioms)).unwrap();
    assert_eq!(r.residual.len(), 1);
    assert_eq!(infer(&r.proof).unwrap(), parse_inference("A |- A * 1").unwrap());
    // A cut against an identity goes away even when the other side is an axiom.
    let q = parse_proof("(cut (ax-r X) (rx (id A) (id X)))").unwrap();
    let r = eliminate_cuts_traced(&q, Mode::T, Some(&AnyAxioms)).unwrap();
    assert!(r.residual.is_empty() && !r.proof.has_cut());
}

#[test]
fn counts_ignore_units() {
    let t = parse_term("(1 * A) * (A * 1)").unwrap();
    assert_eq!(t.atom_vector(), AtomVector::from_atoms(t.atoms()));
    assert_eq!(t.atom_vector().total(), 2);
}
