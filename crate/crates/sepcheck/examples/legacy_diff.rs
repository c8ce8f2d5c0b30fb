//! Differential run against the expansion-based check: mutual recursion
//! is where the new checker wins, non-principal GADTs are where the old
//! one does.
//!
//! ```bash
//! cargo run --example legacy_diff
//! ```

use sepcheck::legacy::{diff_report, Fuel};
use sepcheck::parse_program;

fn main() {
    let source = r#"
(* Mutual recursion: node's definition needs tree, which the expansion
   check cannot see while the block is still being elaborated. *)
type ('a, 'r) tree =
  | Root : 'a -> ('a, int) tree
  | Inner : 'a node -> ('a, bool) tree
and 'a node = Node : ('a, _) tree -> 'a node [@@unboxed]

(* Non-principality: t admits both ('c:Sep,'d:Ind) and ('c:Ind,'d:Sep);
   the signature checker must commit to one, the expansion check just
   unifies through the definition and accepts both uses. *)
type ('c, 'd) t = K : 'e -> ('e, 'e) t [@@unboxed]
type t1 = T1 : (int, 'f) t -> t1 [@@unboxed]
type t2 = T2 : ('f, int) t -> t2 [@@unboxed]
"#;

    let program = parse_program(source).expect("parses");
    for entry in diff_report(&program, Fuel::default()) {
        println!(
            "{:<10} legacy {:<45} new {:<8} [{}]",
            entry.decl,
            entry.legacy.to_string(),
            if entry.new_accepted { "accept" } else { "reject" },
            entry.classification.label()
        );
    }
}
