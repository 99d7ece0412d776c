//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any criterion fails or runs over its time budget.

use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use tlogic_core::algebra::{entails, entails_free, enumerate_models, validate_model, MonoidModel};
use tlogic_core::category::coherence_sweep;
use tlogic_core::decision::{bounded_search, decide, Verdict};
use tlogic_core::kernel::{conclusion, AnyAxioms};
use tlogic_core::random::Generator;
use tlogic_core::rewrite::{apply_transform, eliminate_cuts, Direction, TransformName};
use tlogic_core::theory::{decide_in_theory, lift, AxiomCounts, Theory, TheoryVerdict};
use tlogic_core::{check, parse_inference, parse_proof, Inference, Mode, Proof, Term};

const SEED: u64 = 0x7e50_12ce;

struct Outcome {
    cases: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { cases: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn report(number: usize, title: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = run();
    let took = start.elapsed();
    let ok = outcome.failures.is_empty() && took <= budget;
    println!(
        "{} criterion {number}: {title}: {} cases, {} failures, {:.2}s (limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        outcome.cases,
        outcome.failures.len(),
        took.as_secs_f64(),
        budget.as_secs()
    );
    for f in outcome.failures.iter().take(5) {
        println!("    {f}");
    }
    ok
}

fn modes_of(tag: &str) -> Vec<Mode> {
    match tag {
        "t" => vec![Mode::T],
        "tprime" => vec![Mode::Tprime],
        "both" => vec![Mode::T, Mode::Tprime],
        other => panic!("unknown fixture mode `{other}`"),
    }
}

fn fixtures() -> Outcome {
    let text = include_str!("data/fixtures.txt");
    let mut out = Outcome::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(" | ").map(str::trim).collect();
        let [tag, stated, proof] = fields[..] else { panic!("line {}: expected three fields", n + 1) };
        let expected = parse_inference(stated).unwrap_or_else(|e| panic!("line {}: {e}", n + 1));
        let proof = parse_proof(proof).unwrap_or_else(|e| panic!("line {}: {e}", n + 1));
        for mode in modes_of(tag) {
            let got = check(&proof, mode, Some(&AnyAxioms));
            out.case(got.as_ref() == Ok(&expected), || format!("line {} [{mode:?}]: {got:?}", n + 1));
        }
    }
    out
}

fn random_cut_proofs() -> Outcome {
    let mut out = Outcome::new();
    let mut gen = Generator::new(SEED, 4);
    let mut taken = 0;
    while taken < 1000 {
        let mode = if taken % 2 == 0 { Mode::T } else { Mode::Tprime };
        let cuts = 1 + gen.below(3);
        let (inf, proof) = gen.proof(mode, 4, cuts);
        if proof.length() > 25 || !proof.has_cut() {
            continue;
        }
        taken += 1;
        let result = eliminate_cuts(&proof, mode);
        let ok = match &result {
            Ok(p) => !p.has_cut() && check(p, mode, None).as_ref() == Ok(&inf),
            Err(_) => false,
        };
        out.case(ok, || format!("[{mode:?}] {inf}: {result:?}"));
    }
    out
}

/// Every term with exactly `leaves` leaves drawn from `labels`.
fn terms_with(leaves: &[Term]) -> Vec<Term> {
    if leaves.len() == 1 {
        return vec![leaves[0].clone()];
    }
    let mut out = Vec::new();
    for split in 1..leaves.len() {
        for l in terms_with(&leaves[..split]) {
            for r in terms_with(&leaves[split..]) {
                out.push(Term::tensor(l.clone(), r));
            }
        }
    }
    out
}

/// Every sequent whose items together have the given leaves, in order.
fn sequents_with(leaves: &[Term]) -> Vec<Vec<Term>> {
    if leaves.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=leaves.len() {
        for head in terms_with(&leaves[..first]) {
            for rest in sequents_with(&leaves[first..]) {
                let mut s = vec![head.clone()];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out
}

/// Leaf labellings over `1` and up to three atoms, with atoms named in
/// order of first occurrence so renamings are listed once.
fn labellings(len: usize) -> Vec<Vec<Term>> {
    fn go(len: usize, used: usize, buf: &mut Vec<Term>, out: &mut Vec<Vec<Term>>) {
        if buf.len() == len {
            out.push(buf.clone());
            return;
        }
        buf.push(Term::Unit);
        go(len, used, buf, out);
        buf.pop();
        for a in 0..(used + 1).min(3) {
            buf.push(Term::atom(["A", "B", "C"][a]));
            go(len, used.max(a + 1), buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, &mut Vec::new(), &mut out);
    out
}

fn small_inferences() -> Vec<Inference> {
    let mut out = Vec::new();
    for total in 1..=5 {
        for labels in labellings(total) {
            for right in 1..=total {
                let (ante, cons) = labels.split_at(total - right);
                for consequent in terms_with(cons) {
                    for antecedent in sequents_with(ante) {
                        out.push(Inference::new(antecedent, consequent.clone()));
                    }
                }
            }
        }
    }
    out
}

fn agrees(inf: &Inference, mode: Mode) -> Result<(), String> {
    let fast = decide(inf, mode);
    let slow = bounded_search(inf, mode, None, 60);
    let found = match &slow {
        Verdict::Provable(p) => {
            if check(p, mode, None).as_ref() != Ok(inf) {
                return Err(format!("[{mode:?}] {inf}: search returned a proof that does not check"));
            }
            true
        }
        Verdict::Unknown(_) => false,
        Verdict::NotProvable(why) => return Err(format!("[{mode:?}] {inf}: search answered NotProvable ({why})")),
    };
    match (&fast, found) {
        (Verdict::Provable(p), true) if check(p, mode, None).as_ref() == Ok(inf) => Ok(()),
        (Verdict::NotProvable(_), false) => Ok(()),
        _ => Err(format!("[{mode:?}] {inf}: decide {:?} vs search found={found}", verdict_name(&fast))),
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Provable(_) => "provable",
        Verdict::NotProvable(_) => "not-provable",
        Verdict::Unknown(_) => "unknown",
    }
}

fn decision_vs_search() -> Outcome {
    let mut cases = small_inferences();
    let mut gen = Generator::new(SEED ^ 3, 4);
    for i in 0..500 {
        let mode = if i % 2 == 0 { Mode::T } else { Mode::Tprime };
        let inf = if i % 4 < 2 { gen.goal(mode, 7) } else { gen.inference(7) };
        cases.push(inf);
    }
    let results: Vec<Result<(), String>> = cases
        .par_iter()
        .flat_map_iter(|inf| [Mode::T, Mode::Tprime].map(|mode| agrees(inf, mode)))
        .collect();
    let mut out = Outcome::new();
    for r in results {
        out.case(r.is_ok(), || r.clone().unwrap_err());
    }
    out
}

fn soundness() -> Outcome {
    let mut gen = Generator::new(SEED ^ 4, 4);
    let pool: Vec<MonoidModel> = (1..=3).flat_map(enumerate_models).collect();
    let big = enumerate_models(4);
    let mut models = Vec::new();
    while models.len() < 20 {
        let source = if models.len() % 2 == 0 { &pool } else { &big };
        let m = gen.model_from(source);
        assert!(validate_model(&m).is_empty(), "generated model fails validation");
        models.push(m);
    }
    let mut out = Outcome::new();
    for i in 0..200 {
        let cuts = i % 3;
        let (inf, proof) = gen.proof(Mode::T, 5, cuts);
        assert_eq!(check(&proof, Mode::T, None).as_ref(), Ok(&inf));
        for m in &models {
            let r = entails(m, &inf.antecedent, &inf.consequent);
            out.case(r == Ok(true), || format!("{inf} in model\n{}", m.render()));
        }
    }
    out
}

fn completeness() -> Outcome {
    let mut gen = Generator::new(SEED ^ 5, 3);
    let mut out = Outcome::new();
    let mut semantic = 0;
    for i in 0..500 {
        let inf = if i % 2 == 0 { gen.goal(Mode::T, 5) } else { gen.inference(4) };
        if !entails_free(&inf.antecedent, &inf.consequent) {
            out.case(!matches!(decide(&inf, Mode::T), Verdict::Provable(_)), || format!("{inf}: not entailed yet provable"));
            continue;
        }
        semantic += 1;
        let ok = match decide(&inf, Mode::T) {
            Verdict::Provable(p) => check(&p, Mode::T, None).as_ref() == Ok(&inf),
            _ => false,
        };
        out.case(ok, || format!("{inf}: entailed in the free model but not proved"));
    }
    assert!(semantic >= 100, "too few entailed inferences ({semantic}) for a meaningful run");
    out
}

/// All count vectors with entries in `0..=bound`.
fn count_box(theory: &Theory, bound: usize) -> Vec<AxiomCounts> {
    let width = theory.available().len() + theory.disposable().len();
    let mut out = Vec::new();
    let mut v = vec![0usize; width];
    loop {
        let (a, d) = v.split_at(theory.available().len());
        out.push(AxiomCounts { available: a.to_vec(), disposable: d.to_vec(), conversions: Vec::new() });
        let mut i = 0;
        loop {
            if i == width {
                return out;
            }
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn lifting() -> Outcome {
    let mut gen = Generator::new(SEED ^ 6, 3);
    let mut out = Outcome::new();
    let mut provable = 0;
    for i in 0..100 {
        let theory = gen.theory();
        let inf = if i % 2 == 0 {
            // Enlarge a plain goal by some uses of the theory's axioms.
            let base = gen.goal(Mode::T, 3);
            let mut antecedent = base.antecedent.clone();
            let mut parts = vec![base.consequent.clone()];
            for x in theory.available() {
                for _ in 0..gen.below(3) {
                    parts.push(x.clone());
                }
            }
            for y in theory.disposable() {
                for _ in 0..gen.below(3) {
                    antecedent.push(y.clone());
                }
            }
            Inference::new(antecedent, Term::tensor_all(parts))
        } else {
            gen.inference(4)
        };
        let verdict = decide_in_theory(&theory, &inf, 16).expect("declared atoms");
        let lifted_provable = count_box(&theory, 4).into_iter().find(|c| {
            let lifted = lift(&theory, &inf, c).expect("no conversions");
            matches!(decide(&lifted, Mode::T), Verdict::Provable(_))
        });
        let ok = match (&verdict, &lifted_provable) {
            (TheoryVerdict::Provable { counts, witness }, Some(_)) => {
                provable += 1;
                let lifted = lift(&theory, &inf, counts).expect("no conversions");
                matches!(decide(&lifted, Mode::T), Verdict::Provable(_))
                    && check(witness, Mode::T, Some(&theory)).as_ref() == Ok(&inf)
            }
            (TheoryVerdict::Provable { .. }, None) => false,
            (_, found) => found.is_none(),
        };
        out.case(ok, || format!("{inf} under\n{}\nverdict {verdict:?}, lifted witness counts {lifted_provable:?}", theory.render()));
    }
    assert!(provable >= 30, "too few provable theory cases ({provable})");
    out
}

fn cli(args: &[&str]) -> i32 {
    let status = Command::new(env!("CARGO_BIN_EXE_tlogic"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("run tlogic");
    status.status.code().unwrap_or(-1)
}

fn examples() -> Outcome {
    let runs: [(&str, &str, i32); 7] = [
        ("examples/cloning.thy", "C |- C*C", 0),
        ("examples/locc.thy", "E*Q_A |- Q_B", 0),
        ("examples/locc-weak.thy", "E*Q_A |- Q_B", 0),
        ("examples/locc-weak.thy", "E |- Q_A*Q_B", 2),
        ("examples/coherence.thy", "Q(1) |- Q(0.5)", 0),
        ("examples/coherence.thy", "Q(0.5) |- 1", 0),
        ("examples/coherence.thy", "1 |- Q(1)", 1),
    ];
    let mut out = Outcome::new();
    for (theory, inf, want) in runs {
        let got = cli(&["--theory", theory, "--cap", "16", "theory", "decide", inf]);
        out.case(got == want, || format!("{theory} `{inf}`: exit {got}, expected {want}"));
    }
    // The cloning witness uses exactly one copy of the available C.
    let json = Command::new(env!("CARGO_BIN_EXE_tlogic"))
        .args(["--theory", "examples/cloning.thy", "--json", "theory", "decide", "C |- C*C"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("run tlogic");
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).expect("json output");
    let detail = v["detail"].as_str().unwrap_or_default().to_string();
    out.case(detail.contains("available [1]"), || format!("cloning counts: {detail}"));
    out
}

fn coherence() -> Outcome {
    let mut out = Outcome::new();
    for line in coherence_sweep(2, &[Mode::T, Mode::Tprime], 300, SEED) {
        println!("    {line}");
        out.case(line.passed(), || line.to_string());
    }
    out
}

fn transformations() -> Outcome {
    let mut gen = Generator::new(SEED ^ 9, 3);
    let mut out = Outcome::new();
    let mode = Mode::Tprime;
    for name in TransformName::ALL {
        for _ in 0..100 {
            let (proof, at) = gen.transform_instance(name);
            let before = check(&proof, mode, Some(&AnyAxioms)).expect("instance checks");
            let step = |p: &Proof, d: Direction| apply_transform(p, &at, name, d, mode);
            let ok = match step(&proof, Direction::Forward) {
                Ok(after) => {
                    let forward_ok = check(&after, mode, Some(&AnyAxioms)).as_ref() == Ok(&before);
                    let back = step(&after, Direction::Inverse);
                    forward_ok
                        && matches!(&back, Ok(b) if conclusion(b, mode).as_ref() == Ok(&before))
                }
                Err(_) => false,
            };
            out.case(ok, || format!("{name} at {at}: {}", tlogic_core::render_proof(&proof)));
        }
    }
    out
}

fn main() {
    let mut all = true;
    let secs = Duration::from_secs;
    all &= report(1, "handwritten rule fixtures check", secs(1), fixtures);
    all &= report(2, "cut elimination on random proofs", secs(30), random_cut_proofs);
    all &= report(3, "decision agrees with bounded search", secs(120), decision_vs_search);
    all &= report(4, "soundness in finite models", secs(60), soundness);
    all &= report(5, "completeness through the free model", secs(60), completeness);
    all &= report(6, "lifting round trip", secs(60), lifting);
    all &= report(7, "example theories via the command line", secs(60), examples);
    all &= report(8, "coherence sweep", secs(120), coherence);
    all &= report(9, "transformation safety", secs(60), transformations);
    if !all {
        std::process::exit(1);
    }
}
