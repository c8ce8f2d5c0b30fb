//! Parse a handful of declarations and print the inferred mode
//! signatures.
//!
//! ```bash
//! cargo run --example check_basics
//! ```

use sepcheck::{check_program, parse_program, BlockResult};

fn main() {
    let source = r#"
(* A plain wrapper: always separable, parameter unconstrained. *)
type uid = UId of int [@@unboxed]

(* The body is the second parameter, so only 'b must be separable. *)
type ('a, 'b) second = 'b

(* The value is a component of the instantiation of 'a: deep
   separability is required. *)
type _ first = First : 'b -> ('b * 'c) first [@@unboxed]

(* An unboxed top type would mix floats with everything else. *)
type any = Any : 'a -> any [@@unboxed]
"#;

    let program = parse_program(source).expect("the example source parses");
    let report = check_program(&program);

    for block in &report.blocks {
        match &block.result {
            BlockResult::Accepted {
                signature,
                iterations,
            } => {
                for decl in &block.decls {
                    let entry = signature.get(&decl.name).expect("declared");
                    if entry.arity() == 0 {
                        println!("{} : accepted ({iterations} pass(es))", decl.name);
                    } else {
                        println!(
                            "{}{} : accepted ({iterations} pass(es))",
                            decl.name, entry
                        );
                    }
                }
            }
            BlockResult::Rejected { decl, diagnostic } => {
                println!("{decl} : rejected");
                println!("  {diagnostic}");
            }
        }
    }
}
