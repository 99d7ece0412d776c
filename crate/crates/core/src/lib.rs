//! Proof kernel, cut elimination, decision procedures and semantics for the
//! multiplicative tensor logic of resources, with and without exchange.

pub mod algebra;
pub mod category;
pub mod decision;
pub mod kernel;
pub mod proof_text;
pub mod random;
pub mod rewrite;
pub mod syntax;
pub mod theory;

pub use kernel::{check, Mode, NodePath, Proof, Rule};
pub use proof_text::{parse_proof, render_proof};
pub use syntax::{parse_inference, parse_term, Atom, AtomVector, Inference, Sequent, Term};
