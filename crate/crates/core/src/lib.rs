//! Proof terms for full propositional classical natural deduction
//! (`⊥`, `→`, `∧`, `∨` with μ-abstraction), together with a cut-elimination
//! engine and executable checks for subject reduction, confluence, strong
//! normalization and the reducibility-candidate lemmas behind it.
//!
//! ```
//! use lambdamu_core::reduction::{is_sn, normalize, Strategy, DEFAULT_FUEL};
//! use lambdamu_core::syntax::{parse_term, Type};
//! use lambdamu_core::typing::{infer, Contexts};
//!
//! let t = parse_term(r"(\x:P. x) y").unwrap();
//! let ctx = Contexts::new().with_var("y", Type::var("P"));
//! assert_eq!(infer(&ctx, &t).unwrap().to_string(), "P");
//! let n = normalize(&t, Strategy::LeftmostOutermost, DEFAULT_FUEL).unwrap();
//! assert_eq!(n.term.to_string(), "y");
//! assert!(is_sn(&t, DEFAULT_FUEL).is_sn());
//! ```

pub mod syntax;
pub mod typing;
pub mod reduction;
pub mod candidates;
pub mod harness;
