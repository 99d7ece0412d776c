//! Reductions between theories and the plain calculus.
//!
//! [`lift`] turns a question about available and disposable resources into
//! one without axioms: with `m` copies of each available `X` on the left and
//! `n` copies of each disposable `Y` on the right, the theory proves
//! `Γ ⊢ A` exactly when the plain calculus proves `Γ, X^m ⊢ A * Y^n`.
//!
//! [`encode_conversion`] removes conversions by introducing a fresh
//! "negative" atom per conversion, turning `A ⊢ B` into one available and
//! one disposable resource.

use super::{AxiomCounts, Theory, TheoryError};
use crate::syntax::{Atom, Inference, Term};

/// `Γ, X.. ⊢ A * Y..` with copies in the order of the theory's lists and
/// the consequent associated to the left.
pub fn lift(theory: &Theory, inference: &Inference, counts: &AxiomCounts) -> Result<Inference, TheoryError> {
    if !theory.conversions().is_empty() {
        return Err(TheoryError::ConversionPresent);
    }
    for t in inference.antecedent.iter().chain([&inference.consequent]) {
        theory.check_declared(t)?;
    }
    let want = (theory.available().len(), theory.disposable().len());
    if (counts.available.len(), counts.disposable.len()) != want {
        return Err(TheoryError::CountMismatch {
            got: counts.available.len() + counts.disposable.len(),
            want: want.0 + want.1,
        });
    }
    let mut antecedent = inference.antecedent.clone();
    for (x, &m) in theory.available().iter().zip(&counts.available) {
        antecedent.extend(std::iter::repeat_n(x.clone(), m));
    }
    let mut parts = vec![inference.consequent.clone()];
    for (y, &n) in theory.disposable().iter().zip(&counts.disposable) {
        parts.extend(std::iter::repeat_n(y.clone(), n));
    }
    Ok(Inference::new(antecedent, Term::tensor_all(parts)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingStyle {
    /// Fresh atom `-A`: available `-A * B`, disposable `A * -A`.
    NegativeFrom,
    /// Fresh atom `-B`: disposable `A * -B`, available `-B * B`.
    NegativeTo,
}

fn negative_name(t: &Term) -> String {
    match t {
        Term::Tensor(..) => format!("-({t})"),
        _ => format!("-{t}"),
    }
}

/// Replaces every conversion by an available and a disposable resource
/// over a fresh atom.
pub fn encode_conversion(theory: &Theory, style: EncodingStyle) -> Result<Theory, TheoryError> {
    let mut out = Theory::new(theory.atoms().iter().cloned());
    for x in theory.available() {
        out.add_available(x.clone())?;
    }
    for y in theory.disposable() {
        out.add_disposable(y.clone())?;
    }
    for conv in theory.conversions() {
        let (a, b) = (&conv.from, &conv.to);
        let shared = a.atoms().iter().any(|x| b.atoms().contains(x));
        if shared {
            return Err(TheoryError::SharedAtoms { from: a.clone(), to: b.clone() });
        }
        let base = negative_name(match style {
            EncodingStyle::NegativeFrom => a,
            EncodingStyle::NegativeTo => b,
        });
        let mut name = base;
        while out.atoms().iter().any(|x| x.name() == name) {
            name.push('\'');
        }
        let neg = Atom::new(&name)?;
        out.declare(neg.clone());
        let neg = Term::Atom(neg);
        match style {
            EncodingStyle::NegativeFrom => {
                out.add_available(Term::tensor(neg.clone(), b.clone()))?;
                out.add_disposable(Term::tensor(a.clone(), neg))?;
            }
            EncodingStyle::NegativeTo => {
                out.add_disposable(Term::tensor(a.clone(), neg.clone()))?;
                out.add_available(Term::tensor(neg, b.clone()))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_inference, parse_term};

    #[test]
    fn encodings_add_expected_resources() {
        let t = Theory::parse("atoms P Q ;\nconvert P -> Q ;\n").unwrap();
        let from = encode_conversion(&t, EncodingStyle::NegativeFrom).unwrap();
        assert_eq!(from.available(), &[parse_term("-P * Q").unwrap()]);
        assert_eq!(from.disposable(), &[parse_term("P * -P").unwrap()]);
        assert!(from.conversions().is_empty());

        let t = Theory::parse("atoms Q(0) Q(0.5) Q(1) ;\nconvert Q(1) -> Q(0.5) ;\n").unwrap();
        let to = encode_conversion(&t, EncodingStyle::NegativeTo).unwrap();
        assert_eq!(to.disposable(), &[parse_term("Q(1) * -Q(0.5)").unwrap()]);
        assert_eq!(to.available(), &[parse_term("-Q(0.5) * Q(0.5)").unwrap()]);
    }

    #[test]
    fn composite_sources_and_fresh_names() {
        let t = Theory::parse("atoms E C Q_A Q_B ;\nconvert E -> C * Q_B ;\nconvert E -> Q_A * C ;\n").unwrap();
        let enc = encode_conversion(&t, EncodingStyle::NegativeFrom).unwrap();
        let names: Vec<&str> = enc.atoms().iter().map(|a| a.name()).filter(|n| n.starts_with('-')).collect();
        assert_eq!(names, ["-E", "-E'"]);
        let enc = encode_conversion(&t, EncodingStyle::NegativeTo).unwrap();
        assert!(enc.atoms().iter().any(|a| a.name() == "-(C * Q_B)"));
        assert_eq!(Theory::parse(&enc.render()).unwrap(), enc);
    }

    #[test]
    fn lift_shapes() {
        let t = Theory::parse("atoms C Q ;\nfree C ;\ndispose Q ;\n").unwrap();
        let inf = parse_inference("C |- C * C").unwrap();
        let counts = AxiomCounts { available: vec![2], disposable: vec![1], conversions: vec![] };
        assert_eq!(lift(&t, &inf, &counts).unwrap().to_string(), "C, C, C |- C * C * Q");
        let t = Theory::parse("atoms P Q ;\nconvert P -> Q ;\n").unwrap();
        assert_eq!(lift(&t, &inf, &AxiomCounts::zero(&t)), Err(TheoryError::ConversionPresent));
    }
}
