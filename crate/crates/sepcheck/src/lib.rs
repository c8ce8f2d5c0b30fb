//! Separability checking for unboxed datatype declarations.
//!
//! In a language with a dynamic flat-float-array optimization, a
//! single-constructor datatype may only be unboxed when its values are
//! either all floating-point or all non-floating-point, i.e. when the
//! type is *separable*. This crate implements a checker for that property
//! over a small ML-style declaration language:
//!
//! - a mode lattice `Ind < Sep < Deepsep` with per-parameter mode
//!   signatures for datatype constructors ([`mode`], [`context`]);
//! - minimal-context inference for type expressions, GADT equation
//!   discharge and coinductive handling of equi-recursive `as`-types
//!   ([`checker`]);
//! - a fixpoint over mutually-recursive declaration blocks ([`blocks`]);
//! - a bounded ground-value semantics used as an independent soundness
//!   oracle ([`oracle`]);
//! - a reimplementation of the older expansion-based check for
//!   differential testing ([`legacy`]).
//!
//! The supported surface syntax is OCaml-flavoured; see [`parser`] for
//! the grammar:
//!
//! ```
//! use sepcheck::{check_program, parse_program, BlockResult};
//!
//! let program = parse_program("type ('a, 'b) second = 'b").unwrap();
//! let report = check_program(&program);
//! let BlockResult::Accepted { signature, .. } = &report.blocks[0].result else {
//!     panic!("second is separable");
//! };
//! assert_eq!(signature.get("second").unwrap().to_string(), "('a:Ind, 'b:Sep)");
//! ```

pub mod ast;
pub mod blocks;
pub mod checker;
pub mod context;
pub mod desugar;
pub mod diag;
pub mod legacy;
pub mod lexer;
pub mod mode;
pub mod oracle;
pub mod parser;
pub mod report;

pub use ast::{Builtin, DatatypeDecl, RecordField, TyVar, TypeExpr};
pub use blocks::{
    audit_block, check_block, check_program, check_program_traced, BlockReport, BlockResult,
    Decl, ProgramReport,
};
pub use checker::{
    check_decl, discharge_equation, infer_context, infer_with_hypotheses, max_mode,
    HypothesisSets, TraceLog,
};
pub use context::{DomainMismatch, ModeContext, ModeSignature, SignatureEntry};
pub use diag::{Diagnostic, DiagnosticKind, Judgment};
pub use lexer::{ParseError, Pos};
pub use mode::Mode;
pub use oracle::{
    enumerate, inhabits, semantic_mode, semantic_signature_check, Budget, Counterexample,
    GroundEnv, GroundValue, SemanticVerdict, Tri,
};
pub use legacy::{diff_report, legacy_check_decl, DiffClass, DiffEntry, Fuel, LegacyVerdict};
pub use parser::{parse_program, programs_alpha_eq, Program};
