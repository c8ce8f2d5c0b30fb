//! The older expansion-based unboxability check, reimplemented for
//! differential testing.
//!
//! The procedure inspects the parameter type of an unboxed constructor
//! (or a synonym body). A bare variable that is not determined by the
//! declaration (neither a parameter nor mentioned in a GADT return
//! instantiation) rejects the definition. Function, product and builtin
//! heads have a known value representation and are accepted. A datatype
//! constructor application is expanded through its definition and
//! re-checked, spending one unit of fuel per expansion; definitions not
//! yet elaborated (the same block counts as not elaborated, which is
//! what wrongly rejects mutually-recursive definitions) fail the check.
//!
//! Expanding a GADT unboxed type unifies the use-site arguments with the
//! constructor's return instantiation, mirroring how a compiler-hosted
//! check leans on its unifier; this is what lets it accept both
//! projections of a non-principal type that the signature-based checker
//! must choose between.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::{TyVar, TypeExpr};
use crate::blocks::{check_program, BlockResult};
use crate::parser::{Program, RawBody, RawDecl, RawGadtConstructor};

/// Remaining expansion allowance. The historical limit is not documented
/// precisely, so it is configurable; the default is 100.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel(pub u32);

impl Default for Fuel {
    fn default() -> Self {
        Fuel(100)
    }
}

/// Why the expansion check rejected a declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegacyReject {
    /// The parameter reduced to a variable with unknown representation.
    ExistentialVar(TyVar),
    /// The head's definition is not available: same block, later block,
    /// or abstract.
    Unavailable(String),
    /// The expansion budget ran out.
    FuelExhausted,
    /// `as`-types are not supported by the expansion check.
    RecursiveAliasUnsupported,
    /// The use-site arguments do not match the return instantiation;
    /// the instance is uninhabited and the expansion has no answer.
    IncompatibleInstance(String),
}

impl fmt::Display for LegacyReject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegacyReject::ExistentialVar(v) => write!(f, "existential variable {v}"),
            LegacyReject::Unavailable(n) => write!(f, "definition of {n} not available"),
            LegacyReject::FuelExhausted => f.write_str("expansion limit reached"),
            LegacyReject::RecursiveAliasUnsupported => {
                f.write_str("recursive alias not supported")
            }
            LegacyReject::IncompatibleInstance(n) => {
                write!(f, "arguments incompatible with the definition of {n}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegacyVerdict {
    Accept,
    Reject(LegacyReject),
}

impl LegacyVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, LegacyVerdict::Accept)
    }
}

impl fmt::Display for LegacyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LegacyVerdict::Accept => f.write_str("accept"),
            LegacyVerdict::Reject(r) => write!(f, "reject ({r})"),
        }
    }
}

/// Definitions visible to the expansion check: declarations of
/// previously completed blocks only.
pub type LegacyDefs<'a> = BTreeMap<&'a str, &'a RawDecl>;

/// Run the expansion check on one declaration.
///
/// Boxed declarations are not subject to the check and accept outright.
pub fn legacy_check_decl(defs: &LegacyDefs<'_>, decl: &RawDecl, fuel: Fuel) -> LegacyVerdict {
    let (subject, ok_vars): (&TypeExpr, Vec<TyVar>) = match &decl.body {
        RawBody::Variant(ctors) if decl.unboxed => {
            let c = &ctors[0];
            match &c.ret {
                Some(ret) => {
                    let mut ok = Vec::new();
                    for k in ret {
                        for v in k.free_vars_ordered() {
                            if !ok.contains(&v) {
                                ok.push(v);
                            }
                        }
                    }
                    (&c.arg, ok)
                }
                None => (&c.arg, decl.params.clone()),
            }
        }
        RawBody::Record(fields) if decl.unboxed => (&fields[0].ty, decl.params.clone()),
        RawBody::Synonym(t) => (t, decl.params.clone()),
        _ => return LegacyVerdict::Accept,
    };
    check_repr(defs, subject, &ok_vars, fuel.0)
}

fn check_repr(
    defs: &LegacyDefs<'_>,
    t: &TypeExpr,
    ok_vars: &[TyVar],
    fuel: u32,
) -> LegacyVerdict {
    match t {
        TypeExpr::Var(v) => {
            if ok_vars.contains(v) {
                LegacyVerdict::Accept
            } else {
                LegacyVerdict::Reject(LegacyReject::ExistentialVar(v.clone()))
            }
        }
        TypeExpr::Builtin(_) | TypeExpr::Arrow(..) | TypeExpr::Product(_) => {
            LegacyVerdict::Accept
        }
        TypeExpr::Forall(_, body) | TypeExpr::Exists(_, body) => {
            // The binder is not representation-determined; a bare
            // occurrence under it rejects via the variable case.
            check_repr(defs, body, ok_vars, fuel)
        }
        TypeExpr::Rec(..) => LegacyVerdict::Reject(LegacyReject::RecursiveAliasUnsupported),
        TypeExpr::Guard(_, _, body) => check_repr(defs, body, ok_vars, fuel),
        TypeExpr::Constr(head, args) => {
            let Some(def) = defs.get(head.as_str()) else {
                return LegacyVerdict::Reject(LegacyReject::Unavailable(head.clone()));
            };
            if fuel == 0 {
                return LegacyVerdict::Reject(LegacyReject::FuelExhausted);
            }
            match &def.body {
                RawBody::Synonym(body) => {
                    let expansion = instantiate(body, &def.params, args);
                    check_repr(defs, &expansion, ok_vars, fuel - 1)
                }
                RawBody::Variant(ctors) if def.unboxed => {
                    expand_unboxed_ctor(defs, head, &ctors[0], &def.params, args, ok_vars, fuel)
                }
                RawBody::Record(fields) if def.unboxed => {
                    let expansion = instantiate(&fields[0].ty, &def.params, args);
                    check_repr(defs, &expansion, ok_vars, fuel - 1)
                }
                // Boxed variants and records always live behind a block
                // pointer: representation known.
                RawBody::Variant(_) | RawBody::Record(_) => LegacyVerdict::Accept,
            }
        }
    }
}

fn expand_unboxed_ctor(
    defs: &LegacyDefs<'_>,
    head: &str,
    ctor: &RawGadtConstructor,
    params: &[TyVar],
    args: &[TypeExpr],
    ok_vars: &[TyVar],
    fuel: u32,
) -> LegacyVerdict {
    match &ctor.ret {
        None => {
            let expansion = instantiate(&ctor.arg, params, args);
            check_repr(defs, &expansion, ok_vars, fuel - 1)
        }
        Some(ret) => {
            // Freshen the constructor's scope, then unify the return
            // instantiation with the use-site arguments.
            let mut scope: Vec<TyVar> = Vec::new();
            for t in ret.iter().chain([&ctor.arg]) {
                for v in t.free_vars_ordered() {
                    if !scope.contains(&v) {
                        scope.push(v);
                    }
                }
            }
            let freshened: BTreeMap<TyVar, TypeExpr> = scope
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    (v.clone(), TypeExpr::Var(TyVar(format!("{}!{}", v.0, i))))
                })
                .collect();
            // Positions written as the parameter itself alias the
            // corresponding use-site argument.
            let mut subst = Subst::new();
            let mut ok = true;
            for ((k, p), a) in ret.iter().zip(params).zip(args) {
                let k = if *k == TypeExpr::Var(p.clone()) {
                    a.clone()
                } else {
                    k.subst(&freshened)
                };
                ok &= unify(&k, a, &mut subst);
                if !ok {
                    break;
                }
            }
            if !ok {
                return LegacyVerdict::Reject(LegacyReject::IncompatibleInstance(
                    head.to_string(),
                ));
            }
            let arg = ctor.arg.subst(&freshened);
            let expansion = apply_subst(&arg, &subst);
            check_repr(defs, &expansion, ok_vars, fuel - 1)
        }
    }
}

fn instantiate(body: &TypeExpr, params: &[TyVar], args: &[TypeExpr]) -> TypeExpr {
    let map: BTreeMap<TyVar, TypeExpr> = params
        .iter()
        .cloned()
        .zip(args.iter().cloned())
        .collect();
    body.subst(&map)
}

type Subst = BTreeMap<TyVar, TypeExpr>;

fn resolve_top(t: &TypeExpr, subst: &Subst) -> TypeExpr {
    let mut cur = t.clone();
    while let TypeExpr::Var(v) = &cur {
        match subst.get(v) {
            Some(next) => cur = next.clone(),
            None => break,
        }
    }
    cur
}

fn occurs(v: &TyVar, t: &TypeExpr, subst: &Subst) -> bool {
    let t = resolve_top(t, subst);
    match &t {
        TypeExpr::Var(x) => x == v,
        _ => t
            .free_vars()
            .iter()
            .any(|x| x == v || subst.get(x).is_some_and(|b| occurs(v, b, subst))),
    }
}

/// First-order unification of two type expressions, both sides may bind.
fn unify(a: &TypeExpr, b: &TypeExpr, subst: &mut Subst) -> bool {
    let a = resolve_top(a, subst);
    let b = resolve_top(b, subst);
    match (&a, &b) {
        (TypeExpr::Var(x), TypeExpr::Var(y)) if x == y => true,
        (TypeExpr::Var(x), t) | (t, TypeExpr::Var(x)) => {
            if occurs(x, t, subst) {
                return false;
            }
            subst.insert(x.clone(), t.clone());
            true
        }
        (TypeExpr::Builtin(p), TypeExpr::Builtin(q)) => p == q,
        (TypeExpr::Constr(h1, a1), TypeExpr::Constr(h2, a2)) => {
            h1 == h2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| unify(x, y, subst))
        }
        (TypeExpr::Arrow(d1, c1), TypeExpr::Arrow(d2, c2)) => {
            unify(d1, d2, subst) && unify(c1, c2, subst)
        }
        (TypeExpr::Product(f1), TypeExpr::Product(f2)) => {
            f1.len() == f2.len() && f1.iter().zip(f2).all(|(x, y)| unify(x, y, subst))
        }
        // Binding forms: compare rigidly after applying the current
        // solution.
        _ => apply_subst(&a, subst).alpha_eq(&apply_subst(&b, subst)),
    }
}

/// Apply a substitution transitively (the occurs check keeps it acyclic).
fn apply_subst(t: &TypeExpr, subst: &Subst) -> TypeExpr {
    match t {
        TypeExpr::Var(v) => match subst.get(v) {
            Some(bound) => apply_subst(bound, subst),
            None => t.clone(),
        },
        TypeExpr::Builtin(_) => t.clone(),
        TypeExpr::Constr(h, args) => TypeExpr::Constr(
            h.clone(),
            args.iter().map(|a| apply_subst(a, subst)).collect(),
        ),
        TypeExpr::Arrow(d, c) => TypeExpr::arrow(apply_subst(d, subst), apply_subst(c, subst)),
        TypeExpr::Product(fs) => {
            TypeExpr::Product(fs.iter().map(|f| apply_subst(f, subst)).collect())
        }
        TypeExpr::Forall(b, body) => {
            TypeExpr::Forall(b.clone(), Box::new(apply_subst(body, subst)))
        }
        TypeExpr::Exists(b, body) => {
            TypeExpr::Exists(b.clone(), Box::new(apply_subst(body, subst)))
        }
        TypeExpr::Rec(b, body) => TypeExpr::Rec(b.clone(), Box::new(apply_subst(body, subst))),
        TypeExpr::Guard(lhs, rhs, body) => TypeExpr::guard(
            lhs.clone(),
            apply_subst(rhs, subst),
            apply_subst(body, subst),
        ),
    }
}

/// How the two checkers compare on one declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffClass {
    Agreement,
    /// Typically mutual recursion: the signature-based checker accepts
    /// what the expansion check cannot see yet.
    NewAcceptsLegacyRejects,
    /// Typically non-principality: the expansion check can satisfy uses
    /// that the chosen signature cannot.
    LegacyAcceptsNewRejects,
}

impl DiffClass {
    pub fn label(self) -> &'static str {
        match self {
            DiffClass::Agreement => "agreement",
            DiffClass::NewAcceptsLegacyRejects => "new-accepts-legacy-rejects",
            DiffClass::LegacyAcceptsNewRejects => "legacy-accepts-new-rejects",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiffEntry {
    pub decl: String,
    pub legacy: LegacyVerdict,
    pub new_accepted: bool,
    pub classification: DiffClass,
}

/// Run both checkers over a program and classify every declaration.
pub fn diff_report(program: &Program, fuel: Fuel) -> Vec<DiffEntry> {
    let report = check_program(program);
    let mut entries = Vec::new();
    let mut defs: LegacyDefs<'_> = BTreeMap::new();
    for (block, block_report) in program.blocks.iter().zip(&report.blocks) {
        for decl in &block.decls {
            let legacy = legacy_check_decl(&defs, decl, fuel);
            let new_accepted = match &block_report.result {
                BlockResult::Accepted { .. } => true,
                // A rejected block takes all of its declarations down.
                BlockResult::Rejected { .. } => false,
            };
            let classification = match (legacy.is_accept(), new_accepted) {
                (true, true) | (false, false) => DiffClass::Agreement,
                (false, true) => DiffClass::NewAcceptsLegacyRejects,
                (true, false) => DiffClass::LegacyAcceptsNewRejects,
            };
            entries.push(DiffEntry {
                decl: decl.name.clone(),
                legacy,
                new_accepted,
                classification,
            });
        }
        for decl in &block.decls {
            defs.insert(&decl.name, decl);
        }
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn diff(src: &str) -> Vec<DiffEntry> {
        diff_report(&parse_program(src).unwrap(), Fuel::default())
    }

    #[test]
    fn any_is_rejected_by_both() {
        let entries = diff("type any = Any : 'a -> any [@@unboxed]");
        assert_eq!(entries[0].classification, DiffClass::Agreement);
        assert!(matches!(
            entries[0].legacy,
            LegacyVerdict::Reject(LegacyReject::ExistentialVar(_))
        ));
        assert!(!entries[0].new_accepted);
    }

    #[test]
    fn mutual_recursion_diverges() {
        let src = "type ('a, 'r) tree =\n\
                   | Root : 'a -> ('a, int) tree\n\
                   | Inner : 'a node -> ('a, bool) tree\n\
                   and 'a node = Node : ('a, _) tree -> 'a node [@@unboxed]";
        let entries = diff(src);
        let node = entries.iter().find(|e| e.decl == "node").unwrap();
        assert_eq!(node.classification, DiffClass::NewAcceptsLegacyRejects);
        assert!(matches!(
            node.legacy,
            LegacyVerdict::Reject(LegacyReject::Unavailable(_))
        ));
        let tree = entries.iter().find(|e| e.decl == "tree").unwrap();
        assert_eq!(tree.classification, DiffClass::Agreement);
    }

    #[test]
    fn non_principal_projections_split_the_checkers() {
        let src = "type ('a, 'b) t = K : 'c -> ('c, 'c) t [@@unboxed]\n\
                   type t1 = T1 : (int, 'a) t -> t1 [@@unboxed]\n\
                   type t2 = T2 : ('a, int) t -> t2 [@@unboxed]";
        let entries = diff(src);
        let t1 = entries.iter().find(|e| e.decl == "t1").unwrap();
        let t2 = entries.iter().find(|e| e.decl == "t2").unwrap();
        assert!(t1.legacy.is_accept(), "legacy must accept t1: {:?}", t1.legacy);
        assert!(t2.legacy.is_accept(), "legacy must accept t2: {:?}", t2.legacy);
        let projections = [t1, t2];
        let rejected: Vec<_> = projections.iter().filter(|e| !e.new_accepted).collect();
        assert_eq!(rejected.len(), 1, "exactly one projection is rejected");
        assert_eq!(
            rejected[0].classification,
            DiffClass::LegacyAcceptsNewRejects
        );
    }

    #[test]
    fn boxed_declarations_agree() {
        let entries = diff("type t = A of int | B of float\ntype u = { x : t }");
        assert!(entries.iter().all(|e| e.classification == DiffClass::Agreement));
        assert!(entries.iter().all(|e| e.legacy.is_accept() && e.new_accepted));
    }

    #[test]
    fn expansion_follows_synonyms() {
        let src = "type 'a pair = 'a * int\n\
                   type u = U : 'x pair -> u [@@unboxed]";
        let entries = diff(src);
        let u = entries.iter().find(|e| e.decl == "u").unwrap();
        assert!(u.legacy.is_accept());
        assert!(u.new_accepted);
    }

    #[test]
    fn fuel_exhaustion_rejects() {
        let src = "type 'a spin = 'a spin\ntype v = V : int spin -> v [@@unboxed]";
        let program = parse_program(src).unwrap();
        let entries = diff_report(&program, Fuel(5));
        let v = entries.iter().find(|e| e.decl == "v").unwrap();
        assert_eq!(
            v.legacy,
            LegacyVerdict::Reject(LegacyReject::FuelExhausted)
        );
    }

    #[test]
    fn rec_types_are_legacy_unsupported() {
        let src = "type c = ('a -> 'b) as 'b";
        let err = parse_program(src);
        // 'a is unbound in a synonym; use a closed rec type instead.
        assert!(err.is_err());
        let src = "type c = (int -> 'b) as 'b";
        let entries = diff(src);
        assert_eq!(
            entries[0].legacy,
            LegacyVerdict::Reject(LegacyReject::RecursiveAliasUnsupported)
        );
        assert!(entries[0].new_accepted);
    }
}
