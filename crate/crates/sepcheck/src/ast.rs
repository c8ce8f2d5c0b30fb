//! Type expressions, datatype declarations and the sub-component relation.
//!
//! All values here are immutable after construction. Binders inside a
//! single expression are made unique by [`TypeExpr::uniquify`], which the
//! parser applies to every declaration body; this turns the binder-scope
//! side conditions of the sub-component relation into plain free-variable
//! tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A type-variable identifier. Surface syntax `'name` or `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TyVar(pub String);

impl TyVar {
    pub fn new(name: impl Into<String>) -> Self {
        TyVar(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TyVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "'{}", self.0)
    }
}

/// The builtin ground types. `Float` is the one "floaty" builtin the
/// ground-value semantics cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Builtin {
    Float,
    Int,
    Bool,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Float => "float",
            Builtin::Int => "int",
            Builtin::Bool => "bool",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A type expression.
///
/// `Guard(a, k, body)` encodes `body where ('a = k)`; the left-hand side
/// of a guard is always a type variable. `Rec(b, body)` is the surface
/// form `body as 'b` with `'b` occurring free in `body`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Var(TyVar),
    Builtin(Builtin),
    Constr(String, Vec<TypeExpr>),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    /// N-ary product, length >= 2. Nested products stay nested.
    Product(Vec<TypeExpr>),
    Forall(TyVar, Box<TypeExpr>),
    Exists(TyVar, Box<TypeExpr>),
    Guard(TyVar, Box<TypeExpr>, Box<TypeExpr>),
    Rec(TyVar, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn var(name: impl Into<String>) -> Self {
        TypeExpr::Var(TyVar::new(name))
    }

    pub fn constr(head: impl Into<String>, args: Vec<TypeExpr>) -> Self {
        TypeExpr::Constr(head.into(), args)
    }

    pub fn arrow(dom: TypeExpr, cod: TypeExpr) -> Self {
        TypeExpr::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn product(factors: Vec<TypeExpr>) -> Self {
        debug_assert!(factors.len() >= 2, "products are at least binary");
        TypeExpr::Product(factors)
    }

    pub fn forall(binder: TyVar, body: TypeExpr) -> Self {
        TypeExpr::Forall(binder, Box::new(body))
    }

    pub fn exists(binder: TyVar, body: TypeExpr) -> Self {
        TypeExpr::Exists(binder, Box::new(body))
    }

    pub fn guard(lhs: TyVar, rhs: TypeExpr, body: TypeExpr) -> Self {
        TypeExpr::Guard(lhs, Box::new(rhs), Box::new(body))
    }

    /// `body as binder`. A `Rec` node whose body never mentions the
    /// binder is no recursion at all and simplifies to the body.
    pub fn rec(binder: TyVar, body: TypeExpr) -> Self {
        if body.free_vars().contains(&binder) {
            TypeExpr::Rec(binder, Box::new(body))
        } else {
            body
        }
    }

    pub const FLOAT: TypeExpr = TypeExpr::Builtin(Builtin::Float);
    pub const INT: TypeExpr = TypeExpr::Builtin(Builtin::Int);
    pub const BOOL: TypeExpr = TypeExpr::Builtin(Builtin::Bool);

    pub fn free_vars(&self) -> BTreeSet<TyVar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<TyVar>, out: &mut BTreeSet<TyVar>) {
        match self {
            TypeExpr::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            TypeExpr::Builtin(_) => {}
            TypeExpr::Constr(_, args) => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            TypeExpr::Arrow(d, c) => {
                d.collect_free(bound, out);
                c.collect_free(bound, out);
            }
            TypeExpr::Product(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            TypeExpr::Forall(b, t) | TypeExpr::Exists(b, t) | TypeExpr::Rec(b, t) => {
                let fresh = bound.insert(b.clone());
                t.collect_free(bound, out);
                if fresh {
                    bound.remove(b);
                }
            }
            TypeExpr::Guard(lhs, rhs, body) => {
                if !bound.contains(lhs) {
                    out.insert(lhs.clone());
                }
                rhs.collect_free(bound, out);
                body.collect_free(bound, out);
            }
        }
    }

    /// Free variables in order of first occurrence (left to right).
    pub fn free_vars_ordered(&self) -> Vec<TyVar> {
        fn walk(t: &TypeExpr, bound: &mut BTreeSet<TyVar>, out: &mut Vec<TyVar>) {
            let note = |v: &TyVar, bound: &BTreeSet<TyVar>, out: &mut Vec<TyVar>| {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            };
            match t {
                TypeExpr::Var(v) => note(v, bound, out),
                TypeExpr::Builtin(_) => {}
                TypeExpr::Constr(_, args) => args.iter().for_each(|a| walk(a, bound, out)),
                TypeExpr::Arrow(d, c) => {
                    walk(d, bound, out);
                    walk(c, bound, out);
                }
                TypeExpr::Product(fs) => fs.iter().for_each(|f| walk(f, bound, out)),
                TypeExpr::Forall(b, t) | TypeExpr::Exists(b, t) | TypeExpr::Rec(b, t) => {
                    let fresh = bound.insert(b.clone());
                    walk(t, bound, out);
                    if fresh {
                        bound.remove(b);
                    }
                }
                TypeExpr::Guard(lhs, rhs, body) => {
                    note(lhs, bound, out);
                    walk(rhs, bound, out);
                    walk(body, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut BTreeSet::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when the expression contains no equality guard.
    pub fn is_constraint_free(&self) -> bool {
        !matches!(self, TypeExpr::Guard(..))
            && self.children().iter().all(|c| c.is_constraint_free())
    }

    pub fn contains_rec(&self) -> bool {
        matches!(self, TypeExpr::Rec(..)) || self.children().iter().any(|c| c.contains_rec())
    }

    fn children(&self) -> Vec<&TypeExpr> {
        match self {
            TypeExpr::Var(_) | TypeExpr::Builtin(_) => vec![],
            TypeExpr::Constr(_, args) => args.iter().collect(),
            TypeExpr::Arrow(d, c) => vec![d, c],
            TypeExpr::Product(fs) => fs.iter().collect(),
            TypeExpr::Forall(_, t) | TypeExpr::Exists(_, t) | TypeExpr::Rec(_, t) => vec![t],
            TypeExpr::Guard(_, rhs, body) => vec![rhs, body],
        }
    }

    /// Rename binders so that every binder in the expression is distinct
    /// from every other binder and from every name in `used`. Newly chosen
    /// names are recorded in `used`. Free variables are left untouched.
    pub fn uniquify(&self, used: &mut BTreeSet<String>) -> TypeExpr {
        for v in self.free_vars() {
            used.insert(v.0);
        }
        self.uniquify_under(&BTreeMap::new(), used)
    }

    fn uniquify_under(
        &self,
        renames: &BTreeMap<TyVar, TyVar>,
        used: &mut BTreeSet<String>,
    ) -> TypeExpr {
        let rebind = |b: &TyVar, used: &mut BTreeSet<String>| -> TyVar {
            let fresh = fresh_name(b.name(), used);
            used.insert(fresh.clone());
            TyVar(fresh)
        };
        match self {
            TypeExpr::Var(v) => TypeExpr::Var(renames.get(v).unwrap_or(v).clone()),
            TypeExpr::Builtin(b) => TypeExpr::Builtin(*b),
            TypeExpr::Constr(h, args) => TypeExpr::Constr(
                h.clone(),
                args.iter().map(|a| a.uniquify_under(renames, used)).collect(),
            ),
            TypeExpr::Arrow(d, c) => TypeExpr::arrow(
                d.uniquify_under(renames, used),
                c.uniquify_under(renames, used),
            ),
            TypeExpr::Product(fs) => TypeExpr::Product(
                fs.iter().map(|f| f.uniquify_under(renames, used)).collect(),
            ),
            TypeExpr::Forall(b, t) => {
                let nb = rebind(b, used);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::forall(nb, t.uniquify_under(&inner, used))
            }
            TypeExpr::Exists(b, t) => {
                let nb = rebind(b, used);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::exists(nb, t.uniquify_under(&inner, used))
            }
            TypeExpr::Rec(b, t) => {
                let nb = rebind(b, used);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::Rec(nb, Box::new(t.uniquify_under(&inner, used)))
            }
            TypeExpr::Guard(lhs, rhs, body) => TypeExpr::guard(
                renames.get(lhs).unwrap_or(lhs).clone(),
                rhs.uniquify_under(renames, used),
                body.uniquify_under(renames, used),
            ),
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn subst(&self, map: &BTreeMap<TyVar, TypeExpr>) -> TypeExpr {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            TypeExpr::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            TypeExpr::Builtin(b) => TypeExpr::Builtin(*b),
            TypeExpr::Constr(h, args) => {
                TypeExpr::Constr(h.clone(), args.iter().map(|a| a.subst(map)).collect())
            }
            TypeExpr::Arrow(d, c) => TypeExpr::arrow(d.subst(map), c.subst(map)),
            TypeExpr::Product(fs) => {
                TypeExpr::Product(fs.iter().map(|f| f.subst(map)).collect())
            }
            TypeExpr::Forall(b, t) => {
                let (b, t) = subst_under_binder(b, t, map);
                TypeExpr::forall(b, t)
            }
            TypeExpr::Exists(b, t) => {
                let (b, t) = subst_under_binder(b, t, map);
                TypeExpr::exists(b, t)
            }
            TypeExpr::Rec(b, t) => {
                let (b, t) = subst_under_binder(b, t, map);
                TypeExpr::Rec(b, Box::new(t))
            }
            TypeExpr::Guard(lhs, rhs, body) => {
                // A guard's left-hand side stays a variable; substituting a
                // non-variable for it only happens in the ground semantics,
                // which rewrites guards through `subst_guard_lhs`.
                let lhs = match map.get(lhs) {
                    Some(TypeExpr::Var(v)) => v.clone(),
                    Some(other) => panic!(
                        "substituting non-variable {other} for guard lhs {lhs}; \
                         use GroundGuard rewriting instead"
                    ),
                    None => lhs.clone(),
                };
                TypeExpr::guard(lhs, rhs.subst(map), body.subst(map))
            }
        }
    }

    /// Alpha-equivalence: equality up to consistent renaming of binders.
    pub fn alpha_eq(&self, other: &TypeExpr) -> bool {
        self.alpha_key() == other.alpha_key()
    }

    /// Canonical form with bound variables renamed `%0`, `%1`, ... in
    /// traversal order. Used as the key for hypothesis-set membership.
    pub fn alpha_key(&self) -> TypeExpr {
        let mut counter = 0usize;
        self.alpha_key_under(&BTreeMap::new(), &mut counter)
    }

    fn alpha_key_under(
        &self,
        renames: &BTreeMap<TyVar, TyVar>,
        counter: &mut usize,
    ) -> TypeExpr {
        let mut bind = |b: &TyVar| -> TyVar {
            let nb = TyVar(format!("%{counter}"));
            *counter += 1;
            let _ = b;
            nb
        };
        match self {
            TypeExpr::Var(v) => TypeExpr::Var(renames.get(v).unwrap_or(v).clone()),
            TypeExpr::Builtin(b) => TypeExpr::Builtin(*b),
            TypeExpr::Constr(h, args) => TypeExpr::Constr(
                h.clone(),
                args.iter()
                    .map(|a| a.alpha_key_under(renames, counter))
                    .collect(),
            ),
            TypeExpr::Arrow(d, c) => TypeExpr::arrow(
                d.alpha_key_under(renames, counter),
                c.alpha_key_under(renames, counter),
            ),
            TypeExpr::Product(fs) => TypeExpr::Product(
                fs.iter()
                    .map(|f| f.alpha_key_under(renames, counter))
                    .collect(),
            ),
            TypeExpr::Forall(b, t) => {
                let nb = bind(b);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::Forall(nb, Box::new(t.alpha_key_under(&inner, counter)))
            }
            TypeExpr::Exists(b, t) => {
                let nb = bind(b);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::Exists(nb, Box::new(t.alpha_key_under(&inner, counter)))
            }
            TypeExpr::Rec(b, t) => {
                let nb = bind(b);
                let mut inner = renames.clone();
                inner.insert(b.clone(), nb.clone());
                TypeExpr::Rec(nb, Box::new(t.alpha_key_under(&inner, counter)))
            }
            TypeExpr::Guard(lhs, rhs, body) => TypeExpr::guard(
                renames.get(lhs).unwrap_or(lhs).clone(),
                rhs.alpha_key_under(renames, counter),
                body.alpha_key_under(renames, counter),
            ),
        }
    }

    /// The set of syntactic sub-components, including the expression
    /// itself. Sub-components of quantifier bodies that mention the bound
    /// variable are excluded, so the sub-components of a closed type are
    /// closed. `Rec` contributes only itself: unfolding under `Deepsep`
    /// is the checker's job, which keeps this set finite.
    pub fn subcomponents(&self) -> BTreeSet<TypeExpr> {
        let mut out = BTreeSet::new();
        out.insert(self.clone());
        match self {
            TypeExpr::Var(_) | TypeExpr::Builtin(_) | TypeExpr::Rec(..) => {}
            TypeExpr::Constr(_, args) => {
                for a in args {
                    out.extend(a.subcomponents());
                }
            }
            TypeExpr::Arrow(d, c) => {
                out.extend(d.subcomponents());
                out.extend(c.subcomponents());
            }
            TypeExpr::Product(fs) => {
                for f in fs {
                    out.extend(f.subcomponents());
                }
            }
            TypeExpr::Forall(b, t) | TypeExpr::Exists(b, t) => {
                for s in t.subcomponents() {
                    if !s.free_vars().contains(b) {
                        out.insert(s);
                    }
                }
            }
            TypeExpr::Guard(_, rhs, body) => {
                out.extend(rhs.subcomponents());
                out.extend(body.subcomponents());
            }
        }
        out
    }
}

fn subst_under_binder(
    binder: &TyVar,
    body: &TypeExpr,
    map: &BTreeMap<TyVar, TypeExpr>,
) -> (TyVar, TypeExpr) {
    let mut map = map.clone();
    map.remove(binder);
    if map.is_empty() {
        return (binder.clone(), body.clone());
    }
    let payload_vars: BTreeSet<TyVar> = map
        .values()
        .flat_map(|t| t.free_vars())
        .collect();
    if payload_vars.contains(binder) {
        let mut used: BTreeSet<String> = payload_vars.iter().map(|v| v.0.clone()).collect();
        used.extend(body.free_vars().into_iter().map(|v| v.0));
        let fresh = TyVar(fresh_name(binder.name(), &used));
        let mut rename = BTreeMap::new();
        rename.insert(binder.clone(), TypeExpr::Var(fresh.clone()));
        let body = body.subst(&rename);
        (fresh, body.subst(&map))
    } else {
        (binder.clone(), body.subst(&map))
    }
}

/// Pick a name based on `base` that does not occur in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let base = if base.is_empty() { "_" } else { base };
    if !used.contains(base) {
        return base.to_string();
    }
    let mut i = 1usize;
    loop {
        let candidate = format!("{base}{i}");
        if !used.contains(&candidate) {
            return candidate;
        }
        i += 1;
    }
}

// Printing respects the surface precedence so that printed declarations
// parse back: quantifiers and guards are loosest, then `as`, then arrows
// (right-associative), then products, then postfix application.
impl TypeExpr {
    fn prec(&self) -> u8 {
        match self {
            TypeExpr::Forall(..) | TypeExpr::Exists(..) | TypeExpr::Guard(..) => 0,
            TypeExpr::Rec(..) => 1,
            TypeExpr::Arrow(..) => 2,
            TypeExpr::Product(..) => 3,
            TypeExpr::Constr(_, args) if !args.is_empty() => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let parens = self.prec() < min;
        if parens {
            f.write_str("(")?;
        }
        match self {
            TypeExpr::Var(v) => write!(f, "{v}")?,
            TypeExpr::Builtin(b) => write!(f, "{b}")?,
            TypeExpr::Constr(h, args) => match args.len() {
                0 => f.write_str(h)?,
                1 => {
                    args[0].fmt_at(f, 4)?;
                    write!(f, " {h}")?;
                }
                _ => {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        a.fmt_at(f, 0)?;
                    }
                    write!(f, ") {h}")?;
                }
            },
            TypeExpr::Arrow(d, c) => {
                d.fmt_at(f, 3)?;
                f.write_str(" -> ")?;
                c.fmt_at(f, 2)?;
            }
            TypeExpr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    x.fmt_at(f, 4)?;
                }
            }
            TypeExpr::Forall(b, t) => {
                write!(f, "forall {b}. ")?;
                t.fmt_at(f, 0)?;
            }
            TypeExpr::Exists(b, t) => {
                write!(f, "exists {b}. ")?;
                t.fmt_at(f, 0)?;
            }
            TypeExpr::Rec(b, t) => {
                t.fmt_at(f, 2)?;
                write!(f, " as {b}")?;
            }
            TypeExpr::Guard(lhs, rhs, body) => {
                write!(f, "({lhs} = ")?;
                rhs.fmt_at(f, 0)?;
                f.write_str(") => ")?;
                body.fmt_at(f, 0)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// A single record field: label, mutability flag and field type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordField {
    pub label: String,
    pub mutable: bool,
    pub ty: TypeExpr,
}

/// A (desugared) datatype body. GADT constructor arguments have already
/// been rewritten into existentials plus equality guards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatatypeDecl {
    BoxedVariant(Vec<(String, TypeExpr)>),
    UnboxedVariant { ctor: String, arg: TypeExpr },
    BoxedRecord(Vec<RecordField>),
    UnboxedRecord { label: String, field: TypeExpr },
    Synonym(TypeExpr),
}

impl DatatypeDecl {
    /// All type expressions appearing in the body.
    pub fn body_exprs(&self) -> Vec<&TypeExpr> {
        match self {
            DatatypeDecl::BoxedVariant(cs) => cs.iter().map(|(_, t)| t).collect(),
            DatatypeDecl::UnboxedVariant { arg, .. } => vec![arg],
            DatatypeDecl::BoxedRecord(fs) => fs.iter().map(|f| &f.ty).collect(),
            DatatypeDecl::UnboxedRecord { field, .. } => vec![field],
            DatatypeDecl::Synonym(t) => vec![t],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<TyVar> {
        self.body_exprs()
            .into_iter()
            .flat_map(|t| t.free_vars())
            .collect()
    }

    pub fn subst(&self, map: &BTreeMap<TyVar, TypeExpr>) -> DatatypeDecl {
        match self {
            DatatypeDecl::BoxedVariant(cs) => DatatypeDecl::BoxedVariant(
                cs.iter().map(|(n, t)| (n.clone(), t.subst(map))).collect(),
            ),
            DatatypeDecl::UnboxedVariant { ctor, arg } => DatatypeDecl::UnboxedVariant {
                ctor: ctor.clone(),
                arg: arg.subst(map),
            },
            DatatypeDecl::BoxedRecord(fs) => DatatypeDecl::BoxedRecord(
                fs.iter()
                    .map(|f| RecordField {
                        label: f.label.clone(),
                        mutable: f.mutable,
                        ty: f.ty.subst(map),
                    })
                    .collect(),
            ),
            DatatypeDecl::UnboxedRecord { label, field } => DatatypeDecl::UnboxedRecord {
                label: label.clone(),
                field: field.subst(map),
            },
            DatatypeDecl::Synonym(t) => DatatypeDecl::Synonym(t.subst(map)),
        }
    }

    pub fn is_boxed(&self) -> bool {
        matches!(
            self,
            DatatypeDecl::BoxedVariant(_) | DatatypeDecl::BoxedRecord(_)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> TypeExpr {
        TypeExpr::var(n)
    }

    #[test]
    fn subcomponents_of_builtin_is_itself() {
        assert_eq!(
            TypeExpr::FLOAT.subcomponents(),
            BTreeSet::from([TypeExpr::FLOAT])
        );
    }

    #[test]
    fn subcomponents_of_product_are_the_factors() {
        let t = TypeExpr::product(vec![v("b"), v("c")]);
        let expected = BTreeSet::from([t.clone(), v("b"), v("c")]);
        assert_eq!(t.subcomponents(), expected);
    }

    #[test]
    fn subcomponents_respect_binder_scope() {
        // forall 'a. 'a -> int: the arrow and 'a mention the binder, so
        // only the quantified type itself and int remain.
        let t = TypeExpr::forall(TyVar::new("a"), TypeExpr::arrow(v("a"), TypeExpr::INT));
        let expected = BTreeSet::from([t.clone(), TypeExpr::INT]);
        assert_eq!(t.subcomponents(), expected);
    }

    #[test]
    fn subcomponents_of_guard_include_rhs_and_body() {
        let t = TypeExpr::guard(TyVar::new("a"), TypeExpr::INT, v("b"));
        assert!(t.subcomponents().contains(&TypeExpr::INT));
        assert!(t.subcomponents().contains(&v("b")));
    }

    #[test]
    fn rec_is_opaque_in_subcomponents() {
        let t = TypeExpr::rec(TyVar::new("b"), TypeExpr::arrow(v("a"), v("b")));
        assert_eq!(t.subcomponents(), BTreeSet::from([t.clone()]));
    }

    #[test]
    fn subcomponent_free_vars_are_contained() {
        let t = TypeExpr::exists(
            TyVar::new("x"),
            TypeExpr::product(vec![
                TypeExpr::arrow(v("x"), v("y")),
                TypeExpr::constr("t", vec![v("z"), TypeExpr::FLOAT]),
            ]),
        );
        let fv = t.free_vars();
        for s in t.subcomponents() {
            assert!(s.free_vars().is_subset(&fv), "{s} escapes the scope of {t}");
        }
    }

    #[test]
    fn rec_without_occurrence_simplifies_away() {
        let t = TypeExpr::rec(TyVar::new("b"), TypeExpr::INT);
        assert_eq!(t, TypeExpr::INT);
    }

    #[test]
    fn uniquify_makes_binders_distinct() {
        // exists 'a. (exists 'a. 'a) * 'a
        let inner = TypeExpr::exists(TyVar::new("a"), v("a"));
        let t = TypeExpr::exists(TyVar::new("a"), TypeExpr::product(vec![inner, v("a")]));
        let u = t.uniquify(&mut BTreeSet::new());
        let TypeExpr::Exists(outer, body) = &u else {
            panic!("expected exists")
        };
        let TypeExpr::Product(fs) = body.as_ref() else {
            panic!("expected product")
        };
        let TypeExpr::Exists(nested, nested_body) = &fs[0] else {
            panic!("expected nested exists")
        };
        assert_ne!(outer, nested);
        assert_eq!(fs[1], TypeExpr::Var(outer.clone()));
        assert_eq!(nested_body.as_ref(), &TypeExpr::Var(nested.clone()));
        assert!(u.alpha_eq(&t));
    }

    #[test]
    fn alpha_eq_ignores_binder_names() {
        let t1 = TypeExpr::exists(TyVar::new("x"), v("x"));
        let t2 = TypeExpr::exists(TyVar::new("y"), v("y"));
        assert!(t1.alpha_eq(&t2));
        let t3 = TypeExpr::exists(TyVar::new("x"), v("z"));
        assert!(!t1.alpha_eq(&t3));
    }

    #[test]
    fn subst_avoids_capture() {
        // (exists 'b. 'a * 'b)['a := 'b] must not capture the payload.
        let t = TypeExpr::exists(TyVar::new("b"), TypeExpr::product(vec![v("a"), v("b")]));
        let mut map = BTreeMap::new();
        map.insert(TyVar::new("a"), v("b"));
        let r = t.subst(&map);
        let expected = TypeExpr::exists(TyVar::new("c"), TypeExpr::product(vec![v("b"), v("c")]));
        assert!(r.alpha_eq(&expected));
    }

    #[test]
    fn display_round_trips_structure() {
        let t = TypeExpr::arrow(
            TypeExpr::product(vec![v("a"), TypeExpr::INT]),
            TypeExpr::constr("t", vec![v("a"), TypeExpr::BOOL]),
        );
        assert_eq!(t.to_string(), "'a * int -> ('a, bool) t");
        let nested = TypeExpr::product(vec![
            TypeExpr::product(vec![TypeExpr::INT, TypeExpr::FLOAT]),
            TypeExpr::BOOL,
        ]);
        assert_eq!(nested.to_string(), "(int * float) * bool");
    }
}
