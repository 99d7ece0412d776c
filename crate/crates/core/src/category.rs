//! The syntactic monoidal category: objects are terms, a morphism `A → B`
//! is a proof of `A ⊢ B` up to cut elimination and canonicalization, and
//! composition is cut.
//!
//! In mode `T` the category is symmetric; in mode `Tprime` the symmetry is
//! unavailable and only the plain monoidal structure is built.

use std::fmt;

use thiserror::Error;

use crate::kernel::{check, identity_proof, last_cut, tensor_proofs, CheckError, KernelError, Mode, Proof};
use crate::rewrite::{canonicalize, RewriteError};
use crate::syntax::{Inference, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("cannot compose: target `{target}` differs from the next source `{next}`")]
    SourceTargetMismatch { target: Term, next: Term },
    #[error("the symmetry needs the exchange rule, which mode tprime lacks")]
    SigmaInTprime,
    #[error("{name} takes {expected} term(s), got {got}")]
    ArityMismatch { name: &'static str, expected: &'static str, got: usize },
    #[error("`{0}` does not have exactly one antecedent item")]
    NotAMorphism(Inference),
    #[error("unknown diagram `{0}`")]
    UnknownDiagram(String),
    #[error("{0}")]
    Check(#[from] CheckError),
    #[error("{0}")]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    Rewrite(#[from] RewriteError),
}

/// A morphism, held as its canonical representative proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Term,
    target: Term,
    representative: Proof,
}

impl Morphism {
    /// The morphism denoted by any checked proof of `A ⊢ B`.
    pub fn from_proof(proof: &Proof, mode: Mode) -> Result<Morphism, CategoryError> {
        let inf = check(proof, mode, None)?;
        let [source] = inf.antecedent.as_slice() else {
            return Err(CategoryError::NotAMorphism(inf));
        };
        let representative = canonicalize(proof, mode)?;
        Ok(Morphism { source: source.clone(), target: inf.consequent.clone(), representative })
    }

    pub fn identity(object: &Term, mode: Mode) -> Result<Morphism, CategoryError> {
        Morphism::from_proof(&identity_proof(object), mode)
    }

    pub fn source(&self) -> &Term {
        &self.source
    }

    pub fn target(&self) -> &Term {
        &self.target
    }

    pub fn representative(&self) -> &Proof {
        &self.representative
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.source, self.target, self.representative)
    }
}

/// `f` then `g`, by cutting `f` into the only antecedent item of `g`.
pub fn compose(f: &Morphism, g: &Morphism, mode: Mode) -> Result<Morphism, CategoryError> {
    if f.target != g.source {
        return Err(CategoryError::SourceTargetMismatch { target: f.target.clone(), next: g.source.clone() });
    }
    let proof = Proof::cut(last_cut(mode, 0), f.representative.clone(), g.representative.clone());
    Morphism::from_proof(&proof, mode)
}

/// Composes a nonempty chain left to right.
pub fn compose_all(chain: &[Morphism], mode: Mode) -> Result<Morphism, CategoryError> {
    let (first, rest) = chain.split_first().expect("nonempty chain");
    rest.iter().try_fold(first.clone(), |acc, g| compose(&acc, g, mode))
}

/// The tensor of two morphisms, `A ⊗ C → B ⊗ D`.
pub fn boxtimes(f: &Morphism, g: &Morphism, mode: Mode) -> Result<Morphism, CategoryError> {
    let proof = tensor_proofs(f.representative.clone(), g.representative.clone())?;
    Morphism::from_proof(&proof, mode)
}

/// The structural isomorphisms and their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    Id,
    Alpha,
    AlphaInverse,
    Lambda,
    LambdaInverse,
    Rho,
    RhoInverse,
    Sigma,
}

impl Canonical {
    pub fn arity(self) -> usize {
        match self {
            Canonical::Alpha | Canonical::AlphaInverse => 3,
            Canonical::Sigma => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Canonical::Id => "id",
            Canonical::Alpha => "alpha",
            Canonical::AlphaInverse => "alpha-inverse",
            Canonical::Lambda => "lambda",
            Canonical::LambdaInverse => "lambda-inverse",
            Canonical::Rho => "rho",
            Canonical::RhoInverse => "rho-inverse",
            Canonical::Sigma => "sigma",
        }
    }
}

/// The explicit proof tree of a structural map, before canonicalization.
pub fn canonical_tree(kind: Canonical, terms: &[Term], mode: Mode) -> Result<Proof, CategoryError> {
    if terms.len() != kind.arity() {
        let expected = match kind.arity() {
            1 => "1",
            2 => "2",
            _ => "3",
        };
        return Err(CategoryError::ArityMismatch { name: kind.name(), expected, got: terms.len() });
    }
    let id = |i: usize| identity_proof(&terms[i]);
    Ok(match kind {
        Canonical::Id => id(0),
        // A, B, C ⊢ A ⊗ (B ⊗ C), then fuse the first two items twice
        Canonical::Alpha => Proof::l_tensor(0, Proof::l_tensor(0, Proof::r_tensor(id(0), Proof::r_tensor(id(1), id(2))))),
        Canonical::AlphaInverse => {
            Proof::l_tensor(0, Proof::l_tensor(1, Proof::r_tensor(Proof::r_tensor(id(0), id(1)), id(2))))
        }
        Canonical::Lambda => Proof::l_tensor(0, Proof::l_unit(0, id(0))),
        Canonical::LambdaInverse => Proof::r_tensor(Proof::r_unit(), id(0)),
        Canonical::Rho => Proof::l_tensor(0, Proof::l_unit(1, id(0))),
        Canonical::RhoInverse => Proof::r_tensor(id(0), Proof::r_unit()),
        Canonical::Sigma => {
            if mode == Mode::Tprime {
                return Err(CategoryError::SigmaInTprime);
            }
            Proof::l_tensor(0, Proof::exchange(0, 1, 2, Proof::r_tensor(id(1), id(0))))
        }
    })
}

pub fn canonical_morphism(kind: Canonical, terms: &[Term], mode: Mode) -> Result<Morphism, CategoryError> {
    Morphism::from_proof(&canonical_tree(kind, terms, mode)?, mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagram {
    Triangle,
    Pentagon,
    Hexagon,
    SymmetryUnit,
    SymmetryInverse,
    BifunctorLaw,
    NaturalityLambda,
    NaturalityRho,
    NaturalityAlpha,
    NaturalitySigma,
}

impl Diagram {
    pub const ALL: [Diagram; 10] = [
        Diagram::Triangle,
        Diagram::Pentagon,
        Diagram::Hexagon,
        Diagram::SymmetryUnit,
        Diagram::SymmetryInverse,
        Diagram::BifunctorLaw,
        Diagram::NaturalityLambda,
        Diagram::NaturalityRho,
        Diagram::NaturalityAlpha,
        Diagram::NaturalitySigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Diagram::Triangle => "triangle",
            Diagram::Pentagon => "pentagon",
            Diagram::Hexagon => "hexagon",
            Diagram::SymmetryUnit => "symmetry-unit",
            Diagram::SymmetryInverse => "symmetry-inverse",
            Diagram::BifunctorLaw => "bifunctor",
            Diagram::NaturalityLambda => "naturality-lambda",
            Diagram::NaturalityRho => "naturality-rho",
            Diagram::NaturalityAlpha => "naturality-alpha",
            Diagram::NaturalitySigma => "naturality-sigma",
        }
    }

    pub fn from_name(name: &str) -> Result<Diagram, CategoryError> {
        Diagram::ALL.into_iter().find(|d| d.name() == name).ok_or_else(|| CategoryError::UnknownDiagram(name.into()))
    }

    /// Accepted term counts.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Diagram::Triangle | Diagram::BifunctorLaw | Diagram::NaturalitySigma => (2, 2),
            Diagram::Pentagon => (4, 4),
            Diagram::Hexagon | Diagram::NaturalityAlpha => (3, 3),
            Diagram::SymmetryUnit | Diagram::NaturalityLambda | Diagram::NaturalityRho => (1, 1),
            Diagram::SymmetryInverse => (1, 2),
        }
    }

    pub fn needs_symmetry(self) -> bool {
        matches!(self, Diagram::Hexagon | Diagram::SymmetryUnit | Diagram::SymmetryInverse | Diagram::NaturalitySigma)
    }
}

/// Both legs of a diagram, built from its terms. Naturality squares use
/// `ρ⁻¹` of each term as the generic morphism; [`naturality_legs`] accepts
/// arbitrary ones.
pub fn diagram_legs(diagram: Diagram, terms: &[Term], mode: Mode) -> Result<(Morphism, Morphism), CategoryError> {
    let (lo, hi) = diagram.arity();
    if terms.len() < lo || terms.len() > hi {
        let expected = match diagram.arity() {
            (1, 2) => "1 or 2",
            (1, _) => "1",
            (2, _) => "2",
            (3, _) => "3",
            _ => "4",
        };
        return Err(CategoryError::ArityMismatch { name: diagram.name(), expected, got: terms.len() });
    }
    if diagram.needs_symmetry() && mode == Mode::Tprime {
        return Err(CategoryError::SigmaInTprime);
    }
    let c = |kind: Canonical, ts: &[&Term]| {
        let owned: Vec<Term> = ts.iter().map(|t| (*t).clone()).collect();
        canonical_morphism(kind, &owned, mode)
    };
    let id = |t: &Term| Morphism::identity(t, mode);
    let bx = |f: &Morphism, g: &Morphism| boxtimes(f, g, mode);
    let chain = |ms: &[Morphism]| compose_all(ms, mode);
    let unit = Term::Unit;
    match diagram {
        Diagram::Triangle => {
            let (a, b) = (&terms[0], &terms[1]);
            let left = chain(&[c(Canonical::Alpha, &[a, &unit, b])?, bx(&id(a)?, &c(Canonical::Lambda, &[b])?)?])?;
            let right = bx(&c(Canonical::Rho, &[a])?, &id(b)?)?;
            Ok((left, right))
        }
        Diagram::Pentagon => {
            let (a, b, cc, d) = (&terms[0], &terms[1], &terms[2], &terms[3]);
            let ab = Term::tensor(a.clone(), b.clone());
            let cd = Term::tensor(cc.clone(), d.clone());
            let bc = Term::tensor(b.clone(), cc.clone());
            let left = chain(&[c(Canonical::Alpha, &[&ab, cc, d])?, c(Canonical::Alpha, &[a, b, &cd])?])?;
            let right = chain(&[
                bx(&c(Canonical::Alpha, &[a, b, cc])?, &id(d)?)?,
                c(Canonical::Alpha, &[a, &bc, d])?,
                bx(&id(a)?, &c(Canonical::Alpha, &[b, cc, d])?)?,
            ])?;
            Ok((left, right))
        }
        Diagram::Hexagon => {
            let (a, b, cc) = (&terms[0], &terms[1], &terms[2]);
            let bc = Term::tensor(b.clone(), cc.clone());
            let left = chain(&[
                c(Canonical::Alpha, &[a, b, cc])?,
                c(Canonical::Sigma, &[a, &bc])?,
                c(Canonical::Alpha, &[b, cc, a])?,
            ])?;
            let right = chain(&[
                bx(&c(Canonical::Sigma, &[a, b])?, &id(cc)?)?,
                c(Canonical::Alpha, &[b, a, cc])?,
                bx(&id(b)?, &c(Canonical::Sigma, &[a, cc])?)?,
            ])?;
            Ok((left, right))
        }
        Diagram::SymmetryUnit => {
            let a = &terms[0];
            let left = chain(&[c(Canonical::Sigma, &[a, &unit])?, c(Canonical::Lambda, &[a])?])?;
            Ok((left, c(Canonical::Rho, &[a])?))
        }
        Diagram::SymmetryInverse => {
            let (a, b) = (&terms[0], terms.get(1).unwrap_or(&terms[0]));
            let left = chain(&[c(Canonical::Sigma, &[a, b])?, c(Canonical::Sigma, &[b, a])?])?;
            Ok((left, id(&Term::tensor(a.clone(), b.clone()))?))
        }
        Diagram::BifunctorLaw => {
            let (a, b) = (&terms[0], &terms[1]);
            let (f, h) = (c(Canonical::RhoInverse, &[a])?, c(Canonical::Rho, &[a])?);
            let (g, k) = (c(Canonical::LambdaInverse, &[b])?, c(Canonical::Lambda, &[b])?);
            interchange_legs(&f, &g, &h, &k, mode)
        }
        Diagram::NaturalityLambda | Diagram::NaturalityRho | Diagram::NaturalityAlpha | Diagram::NaturalitySigma => {
            let fs: Vec<Morphism> =
                terms.iter().map(|t| c(Canonical::RhoInverse, &[t])).collect::<Result<_, _>>()?;
            naturality_legs(diagram, &fs, mode)
        }
    }
}

/// `(f ⊠ g) ; (h ⊠ k)` against `(f ; h) ⊠ (g ; k)`.
pub fn interchange_legs(
    f: &Morphism,
    g: &Morphism,
    h: &Morphism,
    k: &Morphism,
    mode: Mode,
) -> Result<(Morphism, Morphism), CategoryError> {
    let left = compose(&boxtimes(f, g, mode)?, &boxtimes(h, k, mode)?, mode)?;
    let right = boxtimes(&compose(f, h, mode)?, &compose(g, k, mode)?, mode)?;
    Ok((left, right))
}

/// Both sides of a naturality square for the given morphisms: one for
/// lambda and rho, two for sigma, three for alpha.
pub fn naturality_legs(diagram: Diagram, fs: &[Morphism], mode: Mode) -> Result<(Morphism, Morphism), CategoryError> {
    let arity = |n: usize, expected: &'static str| {
        if fs.len() == n {
            Ok(())
        } else {
            Err(CategoryError::ArityMismatch { name: diagram.name(), expected, got: fs.len() })
        }
    };
    let c = |kind: Canonical, ts: &[&Term]| {
        let owned: Vec<Term> = ts.iter().map(|t| (*t).clone()).collect();
        canonical_morphism(kind, &owned, mode)
    };
    let bx = |f: &Morphism, g: &Morphism| boxtimes(f, g, mode);
    let one = Morphism::identity(&Term::Unit, mode)?;
    match diagram {
        Diagram::NaturalityLambda => {
            arity(1, "1")?;
            let f = &fs[0];
            let left = compose(&c(Canonical::Lambda, &[&f.source])?, f, mode)?;
            let right = compose(&bx(&one, f)?, &c(Canonical::Lambda, &[&f.target])?, mode)?;
            Ok((left, right))
        }
        Diagram::NaturalityRho => {
            arity(1, "1")?;
            let f = &fs[0];
            let left = compose(&c(Canonical::Rho, &[&f.source])?, f, mode)?;
            let right = compose(&bx(f, &one)?, &c(Canonical::Rho, &[&f.target])?, mode)?;
            Ok((left, right))
        }
        Diagram::NaturalityAlpha => {
            arity(3, "3")?;
            let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
            let left = compose(&c(Canonical::Alpha, &[&f.source, &g.source, &h.source])?, &bx(f, &bx(g, h)?)?, mode)?;
            let right = compose(&bx(&bx(f, g)?, h)?, &c(Canonical::Alpha, &[&f.target, &g.target, &h.target])?, mode)?;
            Ok((left, right))
        }
        Diagram::NaturalitySigma => {
            if mode == Mode::Tprime {
                return Err(CategoryError::SigmaInTprime);
            }
            arity(2, "2")?;
            let (f, g) = (&fs[0], &fs[1]);
            let left = compose(&c(Canonical::Sigma, &[&f.source, &g.source])?, &bx(g, f)?, mode)?;
            let right = compose(&bx(f, g)?, &c(Canonical::Sigma, &[&f.target, &g.target])?, mode)?;
            Ok((left, right))
        }
        other => Err(CategoryError::UnknownDiagram(other.name().into())),
    }
}

/// Whether both legs of the diagram are the same morphism.
pub fn check_diagram(diagram: Diagram, terms: &[Term], mode: Mode) -> Result<bool, CategoryError> {
    let (left, right) = diagram_legs(diagram, terms, mode)?;
    Ok(left == right)
}

/// [`check_diagram`] addressed by name.
pub fn check_named_diagram(name: &str, terms: &[Term], mode: Mode) -> Result<bool, CategoryError> {
    check_diagram(Diagram::from_name(name)?, terms, mode)
}

/// Outcome of one family of checks in a coherence sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepLine {
    pub check: String,
    pub mode: Mode,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SweepLine {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SweepLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{status} {} [{}] {} cases", self.check, self.mode, self.cases)?;
        for x in self.failures.iter().take(3) {
            write!(f, "\n  {x}")?;
        }
        Ok(())
    }
}

fn tuples(base: &[Term], len: usize) -> Vec<Vec<Term>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| base.iter().map(move |b| [t.clone(), vec![b.clone()]].concat())).collect();
    }
    out
}

fn show(terms: &[Term]) -> String {
    terms.iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" ")
}

/// Every diagram over all term tuples drawn from `max_atoms` distinct atoms
/// and `1`, in each mode (symmetric diagrams in mode `T` only); then
/// naturality and interchange on random morphisms, and the fullness check
/// on `pairs` random pairs of proofs of one inference.
pub fn coherence_sweep(max_atoms: usize, modes: &[Mode], pairs: usize, seed: u64) -> Vec<SweepLine> {
    use crate::random::{alphabet, Generator};
    let mut base: Vec<Term> = alphabet(max_atoms.max(1)).into_iter().map(Term::Atom).collect();
    base.truncate(max_atoms);
    base.push(Term::Unit);
    let mut out = Vec::new();
    for &mode in modes {
        for diagram in Diagram::ALL {
            if diagram.needs_symmetry() && mode == Mode::Tprime {
                continue;
            }
            let (lo, hi) = diagram.arity();
            let mut line = SweepLine { check: diagram.name().into(), mode, cases: 0, failures: vec![] };
            for len in lo..=hi {
                for terms in tuples(&base, len) {
                    line.cases += 1;
                    match check_diagram(diagram, &terms, mode) {
                        Ok(true) => {}
                        Ok(false) => line.failures.push(format!("legs differ on {}", show(&terms))),
                        Err(e) => line.failures.push(format!("{}: {e}", show(&terms))),
                    }
                }
            }
            out.push(line);
        }
        let mut g = Generator::new(seed, max_atoms.max(1));
        let mut natural = SweepLine { check: "naturality-random".into(), mode, cases: 0, failures: vec![] };
        let mut interchange = SweepLine { check: "interchange-random".into(), mode, cases: 0, failures: vec![] };
        let morphism = |g: &mut Generator, source: Option<Term>| -> Result<Morphism, CategoryError> {
            let source = source.unwrap_or_else(|| g.term(2));
            let goal = g.single_goal(source, mode);
            let proof = g.proof_of(&goal, mode, 1);
            Morphism::from_proof(&proof, mode)
        };
        for _ in 0..pairs.div_ceil(4).max(1) {
            let mut run = |natural: &mut SweepLine, interchange: &mut SweepLine| -> Result<(), CategoryError> {
                let fs = [morphism(&mut g, None)?, morphism(&mut g, None)?, morphism(&mut g, None)?];
                let mut squares = vec![
                    (Diagram::NaturalityLambda, vec![fs[0].clone()]),
                    (Diagram::NaturalityRho, vec![fs[1].clone()]),
                    (Diagram::NaturalityAlpha, fs.to_vec()),
                ];
                if mode == Mode::T {
                    squares.push((Diagram::NaturalitySigma, vec![fs[0].clone(), fs[2].clone()]));
                }
                for (d, ms) in squares {
                    natural.cases += 1;
                    let (l, r) = naturality_legs(d, &ms, mode)?;
                    if l != r {
                        natural.failures.push(format!("{} on {}", d.name(), ms[0]));
                    }
                }
                let h = morphism(&mut g, Some(fs[0].target().clone()))?;
                let k = morphism(&mut g, Some(fs[1].target().clone()))?;
                interchange.cases += 1;
                let (l, r) = interchange_legs(&fs[0], &fs[1], &h, &k, mode)?;
                if l != r {
                    interchange.failures.push(format!("interchange on {} and {}", fs[0], fs[1]));
                }
                Ok(())
            };
            if let Err(e) = run(&mut natural, &mut interchange) {
                natural.failures.push(e.to_string());
            }
        }
        out.push(natural);
        out.push(interchange);
        let mut full = SweepLine { check: "fullness".into(), mode, cases: 0, failures: vec![] };
        for _ in 0..pairs {
            full.cases += 1;
            let goal = g.goal(mode, 4);
            let (p1, p2) = (g.proof_of(&goal, mode, 2), g.proof_of(&goal, mode, 2));
            match (canonicalize(&p1, mode), canonicalize(&p2, mode)) {
                (Ok(c1), Ok(c2)) if c1 == c2 => {}
                (Ok(_), Ok(_)) => full.failures.push(format!("distinct canonical forms for {goal}")),
                (Err(e), _) | (_, Err(e)) => full.failures.push(format!("{goal}: {e}")),
            }
        }
        out.push(full);
    }
    out
}
