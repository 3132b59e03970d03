//! Lambda terms with explicit weakening.
//!
//! Alpha-conversion here is generated by the single equation
//! `λx M =α λy {y x}M` with no conditions on free variables. The crate
//! provides the renaming functions, two independent decision procedures
//! (all-binders-to-`z` canonical forms, and generalized de Bruijn terms
//! read off context-indexed derivations), level-indexed free variables, a
//! concrete syntax, generators, and the property suites behind the
//! `selftest` command.

pub mod alpha;
pub mod cli;
pub mod debruijn;
pub mod freevars;
pub mod kernel;
pub mod selftest;
pub mod syntax;
pub mod testgen;

pub use alpha::{alpha_axiom_rename, alpha_eq, alpha_eq_with, db_named, random_alpha_walk, AlphaError};
pub use debruijn::{
    alpha_eq_via_context, chain_rename, db_named_generalized, dbterm_eq, derive, translate, DbTerm,
    Derivation, Rule,
};
pub use freevars::{fv_dbterm, fv_term, FvSeq};
pub use kernel::{apply_renaming, lift_renaming, term_eq, term_size, Context, Renaming, Term, VarName};
pub use syntax::{
    parse_context, parse_dbterm, parse_derivation, parse_fvseq, parse_renaming, parse_term,
    print_context, print_dbterm, print_derivation, print_fvseq, print_renaming, print_term,
    ParseError, SourceSpan,
};
