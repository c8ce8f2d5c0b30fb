//! Equi-recursive `as`-types and the safe/unsafe hypothesis sets.
//!
//! A cycle that passes under an arrow or product constructor is sound
//! coinductive reasoning: re-encountering the same judgment succeeds. A
//! cycle that only passes through type abbreviations is refuted.
//!
//! ```bash
//! cargo run --example cyclic_types
//! ```

use sepcheck::checker::infer_context;
use sepcheck::{check_program, parse_program, BlockResult, Mode, ModeSignature, TyVar, TypeExpr};

fn main() {
    // ('a -> 'b) as 'b : the infinite type 'a -> 'a -> ...
    let cyclic_arrow = TypeExpr::rec(
        TyVar::new("b"),
        TypeExpr::arrow(TypeExpr::var("a"), TypeExpr::var("b")),
    );
    let empty = ModeSignature::new();
    for mode in [Mode::Sep, Mode::Deepsep] {
        match infer_context(&empty, &cyclic_arrow, mode) {
            Ok(ctx) => println!("{cyclic_arrow} : {mode}  needs  {ctx}"),
            Err(e) => println!("{cyclic_arrow} : {mode}  rejected: {e}"),
        }
    }
    println!();

    // A cycle through a bare synonym: no value constructor is ever
    // crossed, so the judgment would have to assume itself.
    let source = "type 'a u = 'a\ntype v = 'a u as 'a";
    let program = parse_program(source).expect("parses");
    let report = check_program(&program);
    for block in &report.blocks {
        match &block.result {
            BlockResult::Accepted { signature, .. } => {
                for decl in &block.decls {
                    println!(
                        "{}{} : accepted",
                        decl.name,
                        signature.get(&decl.name).expect("declared")
                    );
                }
            }
            BlockResult::Rejected { decl, diagnostic } => {
                println!("{decl} : rejected ({})", diagnostic.kind.label());
                println!("  {diagnostic}");
            }
        }
    }
}
