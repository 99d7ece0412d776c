//! S-expression text form of proofs.
//!
//! ```text
//! proof := "(" head proof* ")"
//! head  := "id" atom | "r1" | "l1" INT | "lx" INT | "rx" | "cut" INT?
//!        | "ex" INT INT INT | "ax-r" term | "ax-l" term | "conv" term term
//! ```
//!
//! Term arguments are a single atom, `1`, or a parenthesised term. Cut
//! positions are written only when present, so mode `T` proofs print as
//! `(cut L R)`. A `#` starts a comment that runs to the end of the line.

use crate::kernel::{Proof, Rule};
use crate::syntax::{Parser, SyntaxError, Term};

pub fn parse_proof(src: &str) -> Result<Proof, SyntaxError> {
    let mut p = Parser::new(src);
    let proof = proof(&mut p)?;
    skip(&mut p);
    if p.pos != src.len() {
        return Err(p.error("trailing input after proof"));
    }
    Ok(proof)
}

pub fn render_proof(proof: &Proof) -> String {
    let mut out = String::new();
    write_proof(proof, &mut out);
    out
}

fn term_arg(t: &Term) -> String {
    match t {
        Term::Tensor(..) => format!("({t})"),
        _ => t.to_string(),
    }
}

fn write_proof(proof: &Proof, out: &mut String) {
    out.push('(');
    match &proof.rule {
        Rule::Id(a) => {
            out.push_str("id ");
            out.push_str(a.name());
        }
        Rule::RUnit => out.push_str("r1"),
        Rule::LUnit(q) => out.push_str(&format!("l1 {q}")),
        Rule::LTensor(q) => out.push_str(&format!("lx {q}")),
        Rule::RTensor => out.push_str("rx"),
        Rule::Cut(None) => out.push_str("cut"),
        Rule::Cut(Some(p)) => out.push_str(&format!("cut {p}")),
        Rule::Exchange(i, j, k) => out.push_str(&format!("ex {i} {j} {k}")),
        Rule::RAxiom(x) => out.push_str(&format!("ax-r {}", term_arg(x))),
        Rule::LAxiom(x) => out.push_str(&format!("ax-l {}", term_arg(x))),
        Rule::ConvAxiom(a, b) => out.push_str(&format!("conv {} {}", term_arg(a), term_arg(b))),
    }
    for p in &proof.premises {
        out.push(' ');
        write_proof(p, out);
    }
    out.push(')');
}

fn skip(p: &mut Parser<'_>) {
    loop {
        p.skip_ws();
        if p.peek() == Some('#') {
            while let Some(c) = p.peek() {
                p.pos += c.len_utf8();
                if c == '\n' {
                    break;
                }
            }
        } else {
            return;
        }
    }
}

fn head<'a>(p: &mut Parser<'a>) -> &'a str {
    skip(p);
    let start = p.pos;
    while let Some(c) = p.peek() {
        if c.is_whitespace() || c == '(' || c == ')' {
            break;
        }
        p.pos += c.len_utf8();
    }
    &p.src[start..p.pos]
}

fn int(p: &mut Parser<'_>) -> Result<usize, SyntaxError> {
    skip(p);
    let start = p.pos;
    while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
        p.pos += 1;
    }
    if start == p.pos {
        return Err(p.error("expected an integer"));
    }
    p.src[start..p.pos].parse().map_err(|_| SyntaxError::new(start, "integer out of range"))
}

fn maybe_int(p: &mut Parser<'_>) -> Result<Option<usize>, SyntaxError> {
    skip(p);
    if matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
        int(p).map(Some)
    } else {
        Ok(None)
    }
}

fn term(p: &mut Parser<'_>) -> Result<Term, SyntaxError> {
    skip(p);
    p.primary()
}

fn proof(p: &mut Parser<'_>) -> Result<Proof, SyntaxError> {
    skip(p);
    if p.peek() != Some('(') {
        return Err(p.error("expected `(`"));
    }
    p.pos += 1;
    let head_pos = {
        skip(p);
        p.pos
    };
    let rule = match head(p) {
        "id" => match term(p)? {
            Term::Atom(a) => Rule::Id(a),
            _ => return Err(SyntaxError::new(head_pos, "`id` takes an atom")),
        },
        "r1" => Rule::RUnit,
        "l1" => Rule::LUnit(int(p)?),
        "lx" => Rule::LTensor(int(p)?),
        "rx" => Rule::RTensor,
        "cut" => Rule::Cut(maybe_int(p)?),
        "ex" => {
            let i = int(p)?;
            let j = int(p)?;
            let k = int(p)?;
            Rule::Exchange(i, j, k)
        }
        "ax-r" => Rule::RAxiom(term(p)?),
        "ax-l" => Rule::LAxiom(term(p)?),
        "conv" => {
            let a = term(p)?;
            let b = term(p)?;
            Rule::ConvAxiom(a, b)
        }
        "" => return Err(SyntaxError::new(head_pos, "missing rule name")),
        other => return Err(SyntaxError::new(head_pos, format!("unknown rule `{other}`"))),
    };
    let mut premises = Vec::new();
    loop {
        skip(p);
        match p.peek() {
            Some(')') => {
                p.pos += 1;
                break;
            }
            Some('(') => premises.push(proof(p)?),
            Some(c) => return Err(p.error(format!("unexpected `{c}`"))),
            None => return Err(p.error("expected `)`")),
        }
    }
    if premises.len() != rule.arity() {
        return Err(SyntaxError::new(
            head_pos,
            format!("rule takes {} premises, found {}", rule.arity(), premises.len()),
        ));
    }
    Ok(Proof { rule, premises })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, Mode};
    use crate::syntax::parse_inference;

    #[test]
    fn reference_example() {
        let src = "(lx 0 (rx (id A) (id B)))";
        let p = parse_proof(src).unwrap();
        assert_eq!(render_proof(&p), src);
        assert_eq!(check(&p, Mode::T, None).unwrap(), parse_inference("A*B |- A*B").unwrap());
    }

    #[test]
    fn all_heads_round_trip() {
        let src = "(cut 1 (ax-r (C * Q(0.5))) (ex 0 1 2 (l1 0 (conv E (Q_A * Q_B)))))";
        let p = parse_proof(src).unwrap();
        assert_eq!(render_proof(&p), src);
        let src = "(cut (ax-l -E) (lx 0 (rx (r1) (id -E))))";
        assert_eq!(render_proof(&parse_proof(src).unwrap()), src);
    }

    #[test]
    fn comments_and_errors() {
        let p = parse_proof("# identity\n(id A) # done\n").unwrap();
        assert_eq!(render_proof(&p), "(id A)");
        let e = parse_proof("(rx (id A))").unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_proof("(foo)").unwrap_err();
        assert!(e.message.contains("unknown rule"));
        assert!(parse_proof("(id A) (id B)").is_err());
        assert!(parse_proof("(lx (id A))").is_err());
    }
}
