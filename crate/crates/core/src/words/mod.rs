//! Relation words over an alphabet `{x} ∪ {y_i}`: syntax, parsing and
//! evaluation into any finite [`Group`](crate::groups::Group).

mod ast;
mod eval;
mod parser;

pub use ast::{
    appearing_pairs, iterated_commutator, render_word, Alphabet, Atom, Letter, Term, Word,
};
pub use eval::{all_triples, commutator_identities_check, evaluate, IdentityReport};
pub use parser::{parse_word, MAX_DEPTH, MAX_EXPONENT};
