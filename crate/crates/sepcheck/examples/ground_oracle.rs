//! The ground-value semantics: enumerate inhabitants, decide semantic
//! separability, and validate inferred signatures, including the
//! non-principality witness where the all-Ind signature is refuted by a
//! concrete float/non-float pair.
//!
//! ```bash
//! cargo run --example ground_oracle
//! ```

use sepcheck::blocks::Decl;
use sepcheck::oracle::{
    enumerate, semantic_mode, semantic_signature_check, Budget, GroundEnv, SemanticVerdict,
};
use sepcheck::{parse_program, Mode, ModeSignature, SignatureEntry, TyVar, TypeExpr};

fn main() {
    let budget = Budget::default_budget();
    let env = GroundEnv::new();

    println!("-- enumeration --");
    let top = TypeExpr::exists(TyVar::new("x"), TypeExpr::var("x"));
    for t in [
        TypeExpr::BOOL,
        TypeExpr::product(vec![TypeExpr::INT, TypeExpr::FLOAT]),
        top.clone(),
    ] {
        let e = enumerate(&env, &t, &budget);
        let values: Vec<String> = e.values.iter().take(8).map(|v| v.to_string()).collect();
        println!(
            "{t}  ~  {{{}{}}}",
            values.join(", "),
            if e.complete { "" } else { ", ..." }
        );
    }

    println!();
    println!("-- semantic modes --");
    for (t, m) in [
        (TypeExpr::FLOAT, Mode::Deepsep),
        (top.clone(), Mode::Sep),
        (TypeExpr::product(vec![top.clone(), TypeExpr::INT]), Mode::Sep),
        (TypeExpr::product(vec![top, TypeExpr::INT]), Mode::Deepsep),
    ] {
        println!("{t} : {m}  {}", semantic_mode(&env, &t, m, &budget).verdict_str());
    }

    println!();
    println!("-- signature validation --");
    let program = parse_program(
        "type (_, _) strange_eq = Strange_refl : 'a -> ('a, 'a) strange_eq [@@unboxed]",
    )
    .expect("parses");
    let decls: Vec<Decl> = program.blocks[0].decls.iter().map(Decl::from_raw).collect();
    let env = GroundEnv::from_decls(&decls);
    let params = decls[0].params.clone();
    for (m0, m1) in [
        (Mode::Sep, Mode::Ind),
        (Mode::Ind, Mode::Sep),
        (Mode::Ind, Mode::Ind),
    ] {
        let mut sig = ModeSignature::new();
        sig.insert(
            "strange_eq",
            SignatureEntry::new(vec![(params[0].clone(), m0), (params[1].clone(), m1)]),
        );
        match semantic_signature_check(&env, &sig, &budget) {
            SemanticVerdict::Fails(ce) => {
                println!("strange_eq({m0}, {m1})  fails: {ce}");
            }
            v => println!("strange_eq({m0}, {m1})  {}", v.verdict_str()),
        }
    }
}
