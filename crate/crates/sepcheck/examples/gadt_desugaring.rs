//! Show how GADT constructors decompose into existential quantifiers
//! and equality guards.
//!
//! ```bash
//! cargo run --example gadt_desugaring
//! ```

use sepcheck::desugar::desugar_gadt;
use sepcheck::parser::{parse_program, RawBody};

fn main() {
    let source = r#"
type _ first = First : 'b -> ('b * 'c) first [@@unboxed]
type any = Any : 'a -> any [@@unboxed]
type (_, _) strange_eq = Strange_refl : 'a -> ('a, 'a) strange_eq [@@unboxed]
type 'a self = Wrap : 'a -> 'a self [@@unboxed]
type 'a node_like = Mk : ('a * _) -> 'a node_like [@@unboxed]
"#;

    let program = parse_program(source).expect("parses");
    for block in &program.blocks {
        for decl in &block.decls {
            let RawBody::Variant(ctors) = &decl.body else {
                continue;
            };
            for ctor in ctors {
                let desugared = desugar_gadt(ctor, &decl.params);
                let params: Vec<String> =
                    decl.params.iter().map(|p| p.to_string()).collect();
                println!(
                    "{} ({}) . {} : {}  ~~>  {}",
                    decl.name,
                    params.join(", "),
                    ctor.name,
                    ctor.arg,
                    desugared
                );
            }
        }
    }

    println!();
    println!("Notes:");
    println!(" - variables free in the constructor become outermost existentials;");
    println!(" - one guard per parameter position, in declaration order;");
    println!(" - a position written as the parameter itself needs no guard");
    println!("   (that is why 'self' desugars to its own parameter).");
}
