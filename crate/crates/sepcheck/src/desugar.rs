//! GADT desugaring: constructor return instantiations become equality
//! guards under a prefix of existential quantifiers.
//!
//! A constructor `K : tau -> (kappa_1, ..., kappa_n) t` of
//! `type ('a1, ..., 'an) t` turns into
//!
//! ```text
//! exists b...  ('a1 = kappa_1) => ... => ('an = kappa_n) => tau
//! ```
//!
//! where the `b...` are the variables free in `tau` and the `kappa_i`.
//! A position whose instantiation is literally the declared parameter
//! (`kappa_i` written as `'ai`) pins that variable to the parameter: no
//! guard is emitted and the variable is not existential. This is what
//! makes non-GADT declarations (their implicit instantiation vector is
//! the parameter list itself) desugar to themselves. Constructor-scope
//! variables that merely share a name with some other parameter are
//! renamed apart first.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{fresh_name, DatatypeDecl, TyVar, TypeExpr};
use crate::parser::{RawBody, RawDecl, RawGadtConstructor};

/// Desugar one constructor of a declaration with parameters `params`.
pub fn desugar_gadt(ctor: &RawGadtConstructor, params: &[TyVar]) -> TypeExpr {
    let Some(ret) = &ctor.ret else {
        return ctor.arg.clone();
    };
    assert_eq!(ret.len(), params.len(), "return instantiation arity");

    let elided: Vec<bool> = ret
        .iter()
        .zip(params)
        .map(|(k, p)| *k == TypeExpr::Var(p.clone()))
        .collect();
    let pinned: BTreeSet<TyVar> = params
        .iter()
        .zip(&elided)
        .filter(|(_, e)| **e)
        .map(|(p, _)| p.clone())
        .collect();

    // Constructor-scope variables, in first-occurrence order over the
    // (non-elided) instantiations followed by the argument type.
    let mut scope_vars: Vec<TyVar> = Vec::new();
    for (k, e) in ret.iter().zip(&elided) {
        if !*e {
            for v in k.free_vars_ordered() {
                if !pinned.contains(&v) && !scope_vars.contains(&v) {
                    scope_vars.push(v);
                }
            }
        }
    }
    for v in ctor.arg.free_vars_ordered() {
        if !pinned.contains(&v) && !scope_vars.contains(&v) {
            scope_vars.push(v);
        }
    }

    // Scope variables clashing with a (non-pinned) parameter are renamed.
    let param_names: BTreeSet<&str> = params.iter().map(|p| p.name()).collect();
    let mut used: BTreeSet<String> = param_names.iter().map(|s| s.to_string()).collect();
    for v in &scope_vars {
        used.insert(v.0.clone());
    }
    let mut rename: BTreeMap<TyVar, TypeExpr> = BTreeMap::new();
    let mut existentials: Vec<TyVar> = Vec::new();
    for v in &scope_vars {
        if param_names.contains(v.name()) {
            let fresh = TyVar(fresh_name(v.name(), &used));
            used.insert(fresh.0.clone());
            rename.insert(v.clone(), TypeExpr::Var(fresh.clone()));
            existentials.push(fresh);
        } else {
            existentials.push(v.clone());
        }
    }

    let mut body = ctor.arg.subst(&rename);
    for i in (0..params.len()).rev() {
        if !elided[i] {
            body = TypeExpr::guard(params[i].clone(), ret[i].subst(&rename), body);
        }
    }
    for b in existentials.into_iter().rev() {
        body = TypeExpr::exists(b, body);
    }
    body
}

/// Desugar a whole declaration into its checkable form.
pub fn desugar_decl(decl: &RawDecl) -> DatatypeDecl {
    match &decl.body {
        RawBody::Synonym(t) => DatatypeDecl::Synonym(t.clone()),
        RawBody::Record(fields) => {
            if decl.unboxed {
                let f = &fields[0];
                DatatypeDecl::UnboxedRecord {
                    label: f.label.clone(),
                    field: f.ty.clone(),
                }
            } else {
                DatatypeDecl::BoxedRecord(fields.clone())
            }
        }
        RawBody::Variant(ctors) => {
            if decl.unboxed {
                let c = &ctors[0];
                DatatypeDecl::UnboxedVariant {
                    ctor: c.name.clone(),
                    arg: desugar_gadt(c, &decl.params),
                }
            } else {
                DatatypeDecl::BoxedVariant(
                    ctors
                        .iter()
                        .map(|c| (c.name.clone(), desugar_gadt(c, &decl.params)))
                        .collect(),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn unboxed_body(src: &str) -> (Vec<TyVar>, TypeExpr) {
        let p = parse_program(src).unwrap();
        let d = &p.blocks[0].decls[0];
        let body = match desugar_decl(d) {
            DatatypeDecl::UnboxedVariant { arg, .. } => arg,
            DatatypeDecl::Synonym(t) => t,
            other => panic!("unexpected decl {other:?}"),
        };
        (d.params.clone(), body)
    }

    fn v(n: &str) -> TypeExpr {
        TypeExpr::var(n)
    }

    #[test]
    fn first_desugars_to_guarded_existentials() {
        let (params, body) =
            unboxed_body("type _ first = First : 'c -> ('c * 'd) first [@@unboxed]");
        let expected = TypeExpr::exists(
            TyVar::new("c"),
            TypeExpr::exists(
                TyVar::new("d"),
                TypeExpr::guard(
                    params[0].clone(),
                    TypeExpr::product(vec![v("c"), v("d")]),
                    v("c"),
                ),
            ),
        );
        assert!(body.alpha_eq(&expected), "got {body}");
    }

    #[test]
    fn any_desugars_to_a_bare_existential() {
        let (_, body) = unboxed_body("type any = Any : 'a -> any [@@unboxed]");
        let expected = TypeExpr::exists(TyVar::new("a"), v("a"));
        assert!(body.alpha_eq(&expected), "got {body}");
    }

    #[test]
    fn strange_refl_keeps_both_guards() {
        let (params, body) = unboxed_body(
            "type (_, _) strange_eq = Strange_refl : 'a -> ('a, 'a) strange_eq [@@unboxed]",
        );
        let expected = TypeExpr::exists(
            TyVar::new("c"),
            TypeExpr::guard(
                params[0].clone(),
                v("c"),
                TypeExpr::guard(params[1].clone(), v("c"), v("c")),
            ),
        );
        assert!(body.alpha_eq(&expected), "got {body}");
    }

    #[test]
    fn literal_parameter_instantiation_is_pinned() {
        // The return type mentions the declared parameter itself, so no
        // guard and no existential for it.
        let (params, body) =
            unboxed_body("type 'a self = Wrap : 'a -> 'a self [@@unboxed]");
        assert_eq!(body, TypeExpr::Var(params[0].clone()));
    }

    #[test]
    fn clashing_constructor_variable_is_renamed() {
        // 'a in the constructor is unrelated to the parameter 'a.
        let (params, body) =
            unboxed_body("type 'a twist = T : 'a -> ('a * int) twist [@@unboxed]");
        let expected = TypeExpr::exists(
            TyVar::new("b"),
            TypeExpr::guard(
                params[0].clone(),
                TypeExpr::product(vec![v("b"), TypeExpr::INT]),
                v("b"),
            ),
        );
        assert!(body.alpha_eq(&expected), "got {body}");
    }

    #[test]
    fn non_gadt_declarations_desugar_to_themselves() {
        let p = parse_program(
            "type ('a, 'b) second = 'b\n\
             type 'a cell = { mutable contents : 'a }\n\
             type 'a opt = None_ of int | Some_ of 'a",
        )
        .unwrap();
        for block in &p.blocks {
            for d in &block.decls {
                let desugared = desugar_decl(d);
                for t in desugared.body_exprs() {
                    assert!(t.is_constraint_free());
                    assert!(!matches!(t, TypeExpr::Exists(..)));
                }
            }
        }
    }

    #[test]
    fn existentials_are_exactly_the_scope_variables() {
        let (_, body) = unboxed_body(
            "type ('a, 'b) mix = M : 'x * 'b -> ('x * 'y, int) mix [@@unboxed]",
        );
        // Free variables of arg/ret are x, y and the clashing b (renamed);
        // all three must appear as outermost existentials.
        let mut t = &body;
        let mut count = 0;
        while let TypeExpr::Exists(_, inner) = t {
            count += 1;
            t = inner;
        }
        assert_eq!(count, 3, "got {body}");
        assert!(matches!(t, TypeExpr::Guard(..)));
    }
}
