//! Print the rule applied at every node of a check, including the
//! equation-discharge steps for GADTs.
//!
//! ```bash
//! cargo run --example derivation_trace
//! ```

use sepcheck::{check_program_traced, parse_program, BlockResult};

fn main() {
    let source = r#"
type ('a, 'b) second = 'b
type _ first = First : 'b -> ('b * 'c) first [@@unboxed]
type any = Any : 'a -> any [@@unboxed]
"#;

    let program = parse_program(source).expect("parses");
    let (report, traces) = check_program_traced(&program);

    for block in &report.blocks {
        for decl in &block.decls {
            let verdict = match &block.result {
                BlockResult::Accepted { .. } => "accepted".to_string(),
                BlockResult::Rejected { diagnostic, .. } => {
                    format!("rejected ({})", diagnostic.kind.label())
                }
            };
            println!("{} : {verdict}", decl.name);
            if let Some((_, log)) = traces.iter().find(|(n, _)| n == &decl.name) {
                print!("{}", log.render());
            }
            println!();
        }
    }
}
