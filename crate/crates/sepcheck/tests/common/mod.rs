//! Shared test machinery: an independent declarative derivation search
//! (the oracle the inference engine is judged against), mode-context
//! enumeration, and random generators for type expressions and
//! declaration blocks.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sepcheck::{Mode, ModeContext, ModeSignature, SignatureEntry, TyVar, TypeExpr};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small fixed signature exercising all three parameter modes.
pub fn test_signature() -> ModeSignature {
    let mut sig = ModeSignature::new();
    sig.insert(
        "box1",
        SignatureEntry::new(vec![(TyVar::new("p"), Mode::Sep)]),
    );
    sig.insert(
        "pair2",
        SignatureEntry::new(vec![
            (TyVar::new("p"), Mode::Ind),
            (TyVar::new("q"), Mode::Sep),
        ]),
    );
    sig.insert(
        "deep1",
        SignatureEntry::new(vec![(TyVar::new("p"), Mode::Deepsep)]),
    );
    sig.insert("unit0", SignatureEntry::new(vec![]));
    sig
}

/// Direct rule-by-rule derivation search for guard-free, rec-free type
/// expressions: is `g |- t : m` derivable? A judgment holds when some
/// structural rule applies at a mode `m' >= m` (the conversion rule)
/// with recursively derivable premises. Entirely independent of the
/// inference engine.
pub fn derivable(sig: &ModeSignature, g: &ModeContext, t: &TypeExpr, m: Mode) -> bool {
    Mode::ALL
        .into_iter()
        .filter(|m2| *m2 >= m)
        .any(|m2| derivable_structural(sig, g, t, m2))
}

fn derivable_structural(sig: &ModeSignature, g: &ModeContext, t: &TypeExpr, m: Mode) -> bool {
    match t {
        TypeExpr::Var(v) => g.get(v) == Some(m),
        // Builtins behave as nullary constructors in scope: no premises.
        TypeExpr::Builtin(_) => true,
        TypeExpr::Constr(head, args) => {
            let Some(entry) = sig.get(head) else {
                return false;
            };
            entry.arity() == args.len()
                && args
                    .iter()
                    .zip(entry.modes())
                    .all(|(a, pm)| derivable(sig, g, a, m.compose(pm)))
        }
        TypeExpr::Arrow(d, c) => {
            derivable(sig, g, d, m.compose(Mode::Ind))
                && derivable(sig, g, c, m.compose(Mode::Ind))
        }
        TypeExpr::Product(fs) => fs
            .iter()
            .all(|f| derivable(sig, g, f, m.compose(Mode::Ind))),
        TypeExpr::Forall(b, body) => Mode::ALL.into_iter().any(|witness| {
            let mut inner = g.clone();
            inner.set(b.clone(), witness);
            derivable(sig, &inner, body, m)
        }),
        TypeExpr::Exists(b, body) => {
            let mut inner = g.clone();
            inner.set(b.clone(), Mode::Ind);
            derivable(sig, &inner, body, m)
        }
        TypeExpr::Guard(..) | TypeExpr::Rec(..) => {
            panic!("the derivation search covers the guard-free, rec-free fragment")
        }
    }
}

/// Every context over the given variables (3^n of them).
pub fn all_contexts(vars: &[TyVar]) -> Vec<ModeContext> {
    let mut out = vec![ModeContext::new()];
    for v in vars {
        let mut next = Vec::with_capacity(out.len() * 3);
        for ctx in &out {
            for m in Mode::ALL {
                let mut c = ctx.clone();
                c.set(v.clone(), m);
                next.push(c);
            }
        }
        out = next;
    }
    out
}

pub fn random_mode(rng: &mut ChaCha8Rng) -> Mode {
    *Mode::ALL.choose(rng).expect("nonempty")
}

/// Random guard-free, rec-free type expression over the given variables
/// and the [`test_signature`] constructors. Binders are renamed apart.
pub fn random_type(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> TypeExpr {
    random_type_raw(rng, vars, depth).uniquify(&mut std::collections::BTreeSet::new())
}

fn random_type_raw(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> TypeExpr {
    let leaf = depth == 0;
    let choice = if leaf { rng.gen_range(0..2) } else { rng.gen_range(0..8) };
    match choice {
        0 => [TypeExpr::FLOAT, TypeExpr::INT, TypeExpr::BOOL]
            .choose(rng)
            .expect("nonempty")
            .clone(),
        1 => {
            if vars.is_empty() {
                TypeExpr::INT
            } else {
                TypeExpr::var(*vars.choose(rng).expect("nonempty"))
            }
        }
        2 => TypeExpr::arrow(
            random_type_raw(rng, vars, depth - 1),
            random_type_raw(rng, vars, depth - 1),
        ),
        3 => {
            let n = rng.gen_range(2..=3);
            TypeExpr::product((0..n).map(|_| random_type_raw(rng, vars, depth - 1)).collect())
        }
        4 => TypeExpr::constr("box1", vec![random_type_raw(rng, vars, depth - 1)]),
        5 => TypeExpr::constr(
            "pair2",
            vec![
                random_type_raw(rng, vars, depth - 1),
                random_type_raw(rng, vars, depth - 1),
            ],
        ),
        6 => TypeExpr::constr("deep1", vec![random_type_raw(rng, vars, depth - 1)]),
        _ => {
            // A fresh binder, universally or existentially quantified.
            let fresh = format!("q{}", rng.gen_range(0..1000));
            let mut inner: Vec<&str> = vars.to_vec();
            inner.push(&fresh);
            let body = random_type_raw(rng, &inner, depth - 1);
            if rng.gen_bool(0.5) {
                TypeExpr::forall(TyVar::new(fresh.clone()), body)
            } else {
                TypeExpr::exists(TyVar::new(fresh.clone()), body)
            }
        }
    }
}

/// Source text for a random constraint-free program block. Bodies only
/// reference the block's own constructors and `earlier` ones, so the
/// program is well-scoped; GADT forms (hence guards) are never emitted.
pub struct BlockGen {
    /// name -> arity of every declaration in scope for references.
    pub earlier: Vec<(String, usize)>,
    pub next_id: usize,
}

impl BlockGen {
    pub fn new() -> Self {
        BlockGen {
            earlier: Vec::new(),
            next_id: 0,
        }
    }

    /// Generate one `type ... and ...` block; returns its source text.
    pub fn block(&mut self, rng: &mut ChaCha8Rng) -> String {
        let n_decls = rng.gen_range(1..=4);
        let mut decls: Vec<(String, usize)> = Vec::new();
        for _ in 0..n_decls {
            let name = format!("t{}", self.next_id);
            self.next_id += 1;
            let arity = rng.gen_range(0..=3);
            decls.push((name, arity));
        }
        // Declarations may reference anything already declared plus the
        // whole current block (mutual recursion).
        let mut in_scope = self.earlier.clone();
        in_scope.extend(decls.iter().cloned());

        let mut out = String::new();
        for (i, (name, arity)) in decls.iter().enumerate() {
            out.push_str(if i == 0 { "type " } else { "and " });
            let params: Vec<String> = (0..*arity).map(|k| format!("'p{k}")).collect();
            match arity {
                0 => {}
                1 => out.push_str(&format!("{} ", params[0])),
                _ => out.push_str(&format!("({}) ", params.join(", "))),
            }
            out.push_str(name);
            out.push_str(" = ");
            out.push_str(&self.body(rng, &params, &in_scope));
            out.push('\n');
        }
        self.earlier.extend(decls);
        out
    }

    fn body(&self, rng: &mut ChaCha8Rng, params: &[String], scope: &[(String, usize)]) -> String {
        match rng.gen_range(0..5) {
            0 => {
                // Boxed variant.
                let n = rng.gen_range(1..=2);
                let ctors: Vec<String> = (0..n)
                    .map(|k| {
                        format!(
                            "K{}_{} of {}",
                            rng.gen_range(0..10000),
                            k,
                            self.texpr(rng, params, scope, 2)
                        )
                    })
                    .collect();
                ctors.join(" | ")
            }
            1 => {
                // Unboxed single-constructor variant (plain `of` form).
                format!(
                    "U{} of {} [@@unboxed]",
                    rng.gen_range(0..10000),
                    self.texpr(rng, params, scope, 2)
                )
            }
            2 => format!("{{ f0 : {} }}", self.texpr(rng, params, scope, 2)),
            3 => format!(
                "{{ f0 : {} }} [@@unboxed]",
                self.texpr(rng, params, scope, 2)
            ),
            _ => self.texpr(rng, params, scope, 2),
        }
    }

    fn texpr(
        &self,
        rng: &mut ChaCha8Rng,
        params: &[String],
        scope: &[(String, usize)],
        depth: usize,
    ) -> String {
        let max = if depth == 0 { 2 } else { 6 };
        match rng.gen_range(0..max) {
            0 => ["float", "int", "bool"]
                .choose(rng)
                .expect("nonempty")
                .to_string(),
            1 => {
                if params.is_empty() {
                    "int".to_string()
                } else {
                    params.choose(rng).expect("nonempty").clone()
                }
            }
            2 => format!(
                "({} -> {})",
                self.texpr(rng, params, scope, depth - 1),
                self.texpr(rng, params, scope, depth - 1)
            ),
            3 => format!(
                "({} * {})",
                self.texpr(rng, params, scope, depth - 1),
                self.texpr(rng, params, scope, depth - 1)
            ),
            4 if !scope.is_empty() => {
                let (name, arity) = scope.choose(rng).expect("nonempty");
                match arity {
                    0 => name.clone(),
                    1 => format!("{} {}", self.texpr(rng, params, scope, depth - 1), name),
                    _ => {
                        let args: Vec<String> = (0..*arity)
                            .map(|_| self.texpr(rng, params, scope, depth - 1))
                            .collect();
                        format!("({}) {}", args.join(", "), name)
                    }
                }
            }
            _ => {
                // An occasional quantifier.
                let q = if rng.gen_bool(0.5) { "forall" } else { "exists" };
                let mut inner: Vec<String> = params.to_vec();
                inner.push("'q0".to_string());
                format!(
                    "({q} 'q0. {})",
                    self.texpr(rng, &inner, scope, depth - 1)
                )
            }
        }
    }
}
