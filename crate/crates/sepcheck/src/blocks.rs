//! Fixpoint inference of block signatures.
//!
//! A block of mutually-recursive declarations is checked by iterating
//! from the most permissive approximation (every parameter at `Ind`):
//! each pass re-checks every declaration under the environment extended
//! with the current approximation and joins the demands back in. The
//! approximation only ever climbs, and each parameter can climb twice on
//! the three-point mode chain, so at most `2*P + 1` passes are needed
//! for `P` parameters in the block.

use crate::ast::{DatatypeDecl, TyVar};
use crate::checker::{check_decl, check_decl_traced, TraceLog};
use crate::context::{ModeContext, ModeSignature, SignatureEntry};
use crate::desugar::desugar_decl;
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::parser::{Program, RawDecl};

/// A named, desugared declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub params: Vec<TyVar>,
    pub body: DatatypeDecl,
}

impl Decl {
    pub fn from_raw(raw: &RawDecl) -> Decl {
        Decl {
            name: raw.name.clone(),
            params: raw.params.clone(),
            body: desugar_decl(raw),
        }
    }
}

/// Result of checking one block.
#[derive(Debug, Clone)]
pub enum BlockResult {
    Accepted {
        /// Signature restricted to the block's constructors.
        signature: ModeSignature,
        /// Fixpoint passes, including the final pass that made no change.
        iterations: usize,
    },
    Rejected {
        /// The declaration whose check failed.
        decl: String,
        diagnostic: Diagnostic,
    },
}

impl BlockResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, BlockResult::Accepted { .. })
    }
}

fn all_ind_signature(block: &[Decl]) -> ModeSignature {
    block
        .iter()
        .map(|d| {
            (
                d.name.clone(),
                SignatureEntry::new(
                    d.params.iter().map(|p| (p.clone(), crate::mode::Mode::Ind)).collect(),
                ),
            )
        })
        .collect()
}

enum Fixpoint {
    Accepted {
        signature: ModeSignature,
        iterations: usize,
    },
    Rejected {
        decl: String,
        diagnostic: Diagnostic,
        /// The approximation in force when the check failed.
        approx: ModeSignature,
    },
}

fn fixpoint(env: &ModeSignature, block: &[Decl]) -> Fixpoint {
    let total_params: usize = block.iter().map(|d| d.params.len()).sum();
    let bound = 2 * total_params + 1;
    let mut approx = all_ind_signature(block);

    for iteration in 1..=bound {
        let mut changed = false;
        for decl in block {
            let sig = env.extended(&approx);
            let ctx = match check_decl(&sig, &decl.params, &decl.body) {
                Ok(c) => c,
                Err(mut diagnostic) => {
                    diagnostic.path.insert(0, decl.name.clone());
                    return Fixpoint::Rejected {
                        decl: decl.name.clone(),
                        diagnostic,
                        approx,
                    };
                }
            };
            let entry = approx
                .entry_mut(&decl.name)
                .expect("block constructors seeded in the approximation");
            for (i, p) in decl.params.iter().enumerate() {
                let demanded = ctx.mode_of(p);
                if demanded > entry.params[i].1 {
                    entry.params[i].1 = demanded;
                    changed = true;
                }
            }
        }
        if !changed {
            return Fixpoint::Accepted {
                signature: approx,
                iterations: iteration,
            };
        }
    }

    // Unreachable for a monotone ascent on a three-point chain.
    Fixpoint::Rejected {
        decl: block.first().map(|d| d.name.clone()).unwrap_or_default(),
        diagnostic: Diagnostic {
            kind: DiagnosticKind::Internal {
                message: format!("fixpoint did not stabilize within {bound} passes"),
            },
            path: vec![],
            judgment: crate::diag::Judgment {
                signature: approx.clone(),
                context: ModeContext::new(),
                subject: crate::ast::TypeExpr::INT,
                mode: crate::mode::Mode::Ind,
            },
        },
        approx,
    }
}

/// Infer a signature for a mutually-recursive block under `env`.
pub fn check_block(env: &ModeSignature, block: &[Decl]) -> BlockResult {
    match fixpoint(env, block) {
        Fixpoint::Accepted {
            signature,
            iterations,
        } => BlockResult::Accepted {
            signature,
            iterations,
        },
        Fixpoint::Rejected {
            decl, diagnostic, ..
        } => BlockResult::Rejected { decl, diagnostic },
    }
}

/// Re-check every declaration of `block` under `env` extended with the
/// claimed signature; the demands must not exceed the declared modes.
pub fn audit_block(
    env: &ModeSignature,
    block: &[Decl],
    signature: &ModeSignature,
) -> Result<(), String> {
    let sig = env.extended(signature);
    for decl in block {
        let ctx = check_decl(&sig, &decl.params, &decl.body)
            .map_err(|e| format!("{}: {e}", decl.name))?;
        let entry = signature
            .get(&decl.name)
            .ok_or_else(|| format!("{} missing from the signature", decl.name))?;
        for (i, p) in decl.params.iter().enumerate() {
            if ctx.mode_of(p) > entry.params[i].1 {
                return Err(format!(
                    "{}: parameter {p} demands {} but the signature grants {}",
                    decl.name,
                    ctx.mode_of(p),
                    entry.params[i].1
                ));
            }
        }
    }
    Ok(())
}

/// Per-block outcome for a whole program.
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub decls: Vec<Decl>,
    pub result: BlockResult,
}

#[derive(Debug, Clone, Default)]
pub struct ProgramReport {
    pub blocks: Vec<BlockReport>,
}

impl ProgramReport {
    pub fn all_accepted(&self) -> bool {
        self.blocks.iter().all(|b| b.result.is_accepted())
    }
}

/// Check the blocks of a program in order, threading accepted signatures
/// into the environment. Rejected blocks contribute nothing downstream:
/// their constructors stay unknown to later blocks.
pub fn check_program(program: &Program) -> ProgramReport {
    let mut env = ModeSignature::new();
    let mut blocks = Vec::new();
    for block in &program.blocks {
        let decls: Vec<Decl> = block.decls.iter().map(Decl::from_raw).collect();
        let result = check_block(&env, &decls);
        if let BlockResult::Accepted { signature, .. } = &result {
            env = env.extended(signature);
        }
        blocks.push(BlockReport { decls, result });
    }
    ProgramReport { blocks }
}

/// As [`check_program`], also collecting a per-declaration derivation
/// trace: for accepted blocks the final (post-fixpoint) check of every
/// declaration, for rejected blocks the failing check replayed under the
/// approximation in force when it failed.
pub fn check_program_traced(program: &Program) -> (ProgramReport, Vec<(String, TraceLog)>) {
    let mut env = ModeSignature::new();
    let mut blocks = Vec::new();
    let mut traces = Vec::new();
    for block in &program.blocks {
        let decls: Vec<Decl> = block.decls.iter().map(Decl::from_raw).collect();
        let result = match fixpoint(&env, &decls) {
            Fixpoint::Accepted {
                signature,
                iterations,
            } => {
                let sig = env.extended(&signature);
                for decl in &decls {
                    let mut log = TraceLog::new();
                    let _ = check_decl_traced(&sig, &decl.params, &decl.body, &mut log);
                    traces.push((decl.name.clone(), log));
                }
                env = env.extended(&signature);
                BlockResult::Accepted {
                    signature,
                    iterations,
                }
            }
            Fixpoint::Rejected {
                decl,
                diagnostic,
                approx,
            } => {
                let sig = env.extended(&approx);
                if let Some(d) = decls.iter().find(|d| d.name == decl) {
                    let mut log = TraceLog::new();
                    let _ = check_decl_traced(&sig, &d.params, &d.body, &mut log);
                    traces.push((d.name.clone(), log));
                }
                BlockResult::Rejected { decl, diagnostic }
            }
        };
        blocks.push(BlockReport { decls, result });
    }
    (ProgramReport { blocks }, traces)
}
