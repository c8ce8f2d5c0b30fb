//! Checker diagnostics.

use std::fmt;

use crate::ast::{TyVar, TypeExpr};
use crate::context::{ModeContext, ModeSignature};
use crate::mode::Mode;

/// Why a declaration was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// An existential variable would need a mode above `Ind`.
    UnguardedExistential { var: TyVar, demanded: Mode },
    /// A judgment re-entered itself without passing under a
    /// computational type constructor.
    UnsafeCycle,
    /// A datatype constructor that is not in scope.
    UnknownConstructor { name: String },
    /// A constructor applied to the wrong number of arguments.
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },
    /// A bug: an input shape the engine does not expect.
    Internal { message: String },
}

impl DiagnosticKind {
    pub fn label(&self) -> &'static str {
        match self {
            DiagnosticKind::UnguardedExistential { .. } => "unguarded-existential",
            DiagnosticKind::UnsafeCycle => "unsafe-cycle",
            DiagnosticKind::UnknownConstructor { .. } => "unknown-constructor",
            DiagnosticKind::Arity { .. } => "arity",
            DiagnosticKind::Internal { .. } => "internal",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagnosticKind::UnguardedExistential { var, demanded } => {
                write!(f, "existential {var} would need mode {demanded}")
            }
            DiagnosticKind::UnsafeCycle => {
                f.write_str("cycle re-enters a judgment without crossing a value constructor")
            }
            DiagnosticKind::UnknownConstructor { name } => {
                write!(f, "unknown type constructor {name}")
            }
            DiagnosticKind::Arity {
                name,
                expected,
                got,
            } => write!(f, "{name} expects {expected} argument(s), got {got}"),
            DiagnosticKind::Internal { message } => write!(f, "internal error: {message}"),
        }
    }
}

/// The judgment that failed: subject type at a demanded mode, together
/// with the signature in scope and the context the engine had inferred
/// for it so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgment {
    pub signature: ModeSignature,
    pub context: ModeContext,
    pub subject: TypeExpr,
    pub mode: Mode,
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} : {}", self.context, self.subject, self.mode)
    }
}

/// A rejection, carrying the failing judgment and the path from the
/// declaration down to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// Path into the declaration, e.g. `["node", "Node", "arg"]`.
    pub path: Vec<String>,
    pub judgment: Judgment,
}

impl Diagnostic {
    pub fn path_string(&self) -> String {
        self.path.join(".")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}: {} [{}]",
            self.kind.label(),
            self.path_string(),
            self.kind,
            self.judgment
        )
    }
}
