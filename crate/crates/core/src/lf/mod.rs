//! A logical framework for presenting type theories: signatures of sorts,
//! representable sorts, term constants and oriented equations; checking,
//! normalization, enumeration of contexts and terms, slicing and
//! polynomial contexts.

pub mod check;
pub mod corpus;
pub mod enumerate;
pub mod parse;
pub mod print;
pub mod slice;
pub mod syntax;

pub use enumerate::{enumerate_contexts, enumerate_extensions, enumerate_substitutions, Bounds, Enumeration, Enumerator, RandomTerms};
pub use check::{check_signature, hom_equal, normalize, normalize_infer, Checker, SignatureReport, TypeError};
pub use parse::{parse_context, parse_signature, parse_term, parse_type, ParseError};
pub use slice::{check_interpretation, enumerate_interpretations, polynomial_object, slice_theory, slice_with_section, Interpretation, PolyTop};
pub use print::{print_context, print_signature, print_term, print_type};
pub use syntax::{Binding, ConstId, Context, Decl, DeclKind, Rule, Signature, Substitution, Term, Type};
