//! Mutually-recursive blocks: the fixpoint makes declarations of the
//! same block available to each other, which the expansion-based check
//! never could.
//!
//! ```bash
//! cargo run --example mutual_recursion
//! ```

use sepcheck::{check_program, parse_program, BlockResult};

fn main() {
    // A union-find structure: node unboxes a tree, tree mentions node.
    let union_find = r#"
type ('a, 'r) tree =
  | Root : 'a -> ('a, int) tree
  | Inner : 'a node -> ('a, bool) tree
and 'a node = Node : ('a, _) tree -> 'a node [@@unboxed]
"#;

    // A chain where the demand propagates across the block: wrap needs
    // one extra pass to learn that chain demands separability.
    let chain = r#"
type 'a wrap = W : 'a chain -> 'a wrap [@@unboxed]
and 'a chain = C : 'a -> 'a chain [@@unboxed]
"#;

    for (label, source) in [("union-find", union_find), ("wrap/chain", chain)] {
        println!("== {label} ==");
        let program = parse_program(source).expect("parses");
        let report = check_program(&program);
        for block in &report.blocks {
            match &block.result {
                BlockResult::Accepted {
                    signature,
                    iterations,
                } => {
                    println!("accepted after {iterations} fixpoint pass(es):");
                    for decl in &block.decls {
                        let entry = signature.get(&decl.name).expect("declared");
                        println!("  {}{}", decl.name, entry);
                    }
                }
                BlockResult::Rejected { decl, diagnostic } => {
                    println!("rejected at {decl}: {diagnostic}");
                }
            }
        }
        println!();
    }
}
