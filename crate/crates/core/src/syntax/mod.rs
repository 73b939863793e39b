//! Types, proof terms, concrete syntax and substitution.

mod parse;
mod print;
mod subst;
mod term;

pub use parse::{is_reserved, parse_decls, parse_term, parse_term_with, parse_type, ParseError};
pub use print::{print_eterm, print_term, print_type};
pub use subst::{
    alpha_eq, alpha_eq_eterm, canonical, canonical_eterm, canonical_seq, fresh_name, rename_mu,
    struct_subst, struct_subst_eterm, struct_subst_seq, subst, subst_eterm, subst_seq, FreeNames,
    Substitution,
};
pub use term::{apply_seq, ETerm, Seq, Term, Type};
