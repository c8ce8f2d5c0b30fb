//! Bounded ground-value semantics.
//!
//! Closed types denote sets of finite ground values; a type is
//! semantically separable when that set contains only floats or only
//! non-floats. The infinite quantifier domains of the declarative model
//! are finitized by a [`Budget`]: a finite pool of closed instantiation
//! types, a value-depth bound and an unfolding allowance. Verdicts are
//! tri-state: budget exhaustion yields `Unknown`, never a silent
//! answer.
//!
//! Equality guards compare both closed sides syntactically after
//! normalization (canonical binders, flattened products); a failed guard
//! denotes the empty type. No unification is performed, which is exactly
//! why guard types whose equation can never hold (`('c = 'c * int)`
//! shapes) are empty, hence trivially separable, in this model.
//!
//! Instantiation is kept in an environment rather than substituted into
//! the type, because instantiating a guard's left-hand side with a
//! non-variable type is not expressible in the AST. Environment values
//! are always closed.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::{Builtin, DatatypeDecl, TyVar, TypeExpr};
use crate::blocks::Decl;
use crate::context::ModeSignature;
use crate::mode::Mode;

/// Tri-state verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    /// Conjunction: any `False` wins, else any `Unknown`, else `True`.
    pub fn all(items: impl IntoIterator<Item = Tri>) -> Tri {
        let mut out = Tri::True;
        for t in items {
            match t {
                Tri::False => return Tri::False,
                Tri::Unknown => out = Tri::Unknown,
                Tri::True => {}
            }
        }
        out
    }

    /// Disjunction: any `True` wins, else any `Unknown`, else `False`.
    pub fn any(items: impl IntoIterator<Item = Tri>) -> Tri {
        let mut out = Tri::False;
        for t in items {
            match t {
                Tri::True => return Tri::True,
                Tri::Unknown => out = Tri::Unknown,
                Tri::False => {}
            }
        }
        out
    }

    pub fn verdict_str(self) -> &'static str {
        match self {
            Tri::True => "holds",
            Tri::False => "fails",
            Tri::Unknown => "unknown",
        }
    }
}

/// A finite ground value. Floats are a single sampled marker and
/// integers range over {0, 1}: separability only distinguishes float
/// from non-float, so richer carriers add nothing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundValue {
    Bool(bool),
    Int(i64),
    Float,
    Function,
    Tuple(Vec<GroundValue>),
    Record(Vec<(String, GroundValue)>),
    Variant(String, Box<GroundValue>),
}

impl GroundValue {
    pub fn is_float(&self) -> bool {
        matches!(self, GroundValue::Float)
    }

    pub fn depth(&self) -> usize {
        match self {
            GroundValue::Bool(_)
            | GroundValue::Int(_)
            | GroundValue::Float
            | GroundValue::Function => 1,
            GroundValue::Tuple(vs) => {
                1 + vs.iter().map(|v| v.depth()).max().unwrap_or(0)
            }
            GroundValue::Record(fs) => {
                1 + fs.iter().map(|(_, v)| v.depth()).max().unwrap_or(0)
            }
            GroundValue::Variant(_, v) => 1 + v.depth(),
        }
    }
}

impl fmt::Display for GroundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundValue::Bool(b) => write!(f, "{b}"),
            GroundValue::Int(n) => write!(f, "{n}"),
            GroundValue::Float => f.write_str("0.5"),
            GroundValue::Function => f.write_str("<fun>"),
            GroundValue::Tuple(vs) => {
                f.write_str("(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            GroundValue::Record(fs) => {
                f.write_str("{")?;
                for (i, (l, v)) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "{l} = {v}")?;
                }
                f.write_str("}")
            }
            GroundValue::Variant(tag, v) => write!(f, "{tag} {v}"),
        }
    }
}

/// Closed parametrized declarations interpreting the constructors that
/// appear in the types under test.
#[derive(Debug, Clone, Default)]
pub struct GroundEnv {
    decls: BTreeMap<String, (Vec<TyVar>, DatatypeDecl)>,
}

impl GroundEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, params: Vec<TyVar>, decl: DatatypeDecl) {
        self.decls.insert(name.into(), (params, decl));
    }

    pub fn from_decls<'a>(decls: impl IntoIterator<Item = &'a Decl>) -> Self {
        let mut env = Self::new();
        for d in decls {
            env.insert(d.name.clone(), d.params.clone(), d.body.clone());
        }
        env
    }

    pub fn get(&self, name: &str) -> Option<&(Vec<TyVar>, DatatypeDecl)> {
        self.decls.get(name)
    }
}

/// Finitization of the semantics: instantiation pool for quantifiers and
/// parameters, value-tree depth bound, and unfolding allowance shared by
/// constructor expansion, recursion and quantifier instantiation.
#[derive(Debug, Clone)]
pub struct Budget {
    pub value_depth: usize,
    pub unfold_limit: usize,
    pub type_pool: Vec<TypeExpr>,
}

impl Budget {
    /// Depth 4, three unfoldings, and the pool
    /// `{int, float, bool, int * float, exists 'x. 'x}`: enough for every
    /// flagship example to decide without `Unknown`.
    pub fn default_budget() -> Budget {
        Budget {
            value_depth: 4,
            unfold_limit: 3,
            type_pool: default_pool(),
        }
    }

    /// A cheaper pool with just the two value classes.
    pub fn small_pool_budget() -> Budget {
        Budget {
            type_pool: small_pool(),
            ..Budget::default_budget()
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::default_budget()
    }
}

pub fn default_pool() -> Vec<TypeExpr> {
    vec![
        TypeExpr::INT,
        TypeExpr::FLOAT,
        TypeExpr::BOOL,
        TypeExpr::product(vec![TypeExpr::INT, TypeExpr::FLOAT]),
        TypeExpr::exists(TyVar::new("x"), TypeExpr::var("x")),
    ]
}

pub fn small_pool() -> Vec<TypeExpr> {
    vec![TypeExpr::INT, TypeExpr::FLOAT]
}

/// Normal form for ground equality: nested products are flattened, then
/// binders are renamed canonically.
fn normalize_ground(t: &TypeExpr) -> TypeExpr {
    flatten_products(t).alpha_key()
}

fn flatten_products(t: &TypeExpr) -> TypeExpr {
    match t {
        TypeExpr::Product(fs) => {
            let mut out = Vec::new();
            for f in fs {
                match flatten_products(f) {
                    TypeExpr::Product(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            TypeExpr::Product(out)
        }
        TypeExpr::Var(_) | TypeExpr::Builtin(_) => t.clone(),
        TypeExpr::Constr(h, args) => {
            TypeExpr::Constr(h.clone(), args.iter().map(flatten_products).collect())
        }
        TypeExpr::Arrow(d, c) => TypeExpr::arrow(flatten_products(d), flatten_products(c)),
        TypeExpr::Forall(b, x) => TypeExpr::Forall(b.clone(), Box::new(flatten_products(x))),
        TypeExpr::Exists(b, x) => TypeExpr::Exists(b.clone(), Box::new(flatten_products(x))),
        TypeExpr::Rec(b, x) => TypeExpr::Rec(b.clone(), Box::new(flatten_products(x))),
        TypeExpr::Guard(l, r, b) => {
            TypeExpr::guard(l.clone(), flatten_products(r), flatten_products(b))
        }
    }
}

fn ground_eq(a: &TypeExpr, b: &TypeExpr) -> bool {
    normalize_ground(a) == normalize_ground(b)
}

type Subst = BTreeMap<TyVar, TypeExpr>;

/// Resolve an instantiation-free-of-guards expression to a closed type,
/// or `None` when a variable stays unresolved.
fn resolve_closed(t: &TypeExpr, subst: &Subst) -> Option<TypeExpr> {
    let resolved = t.subst(subst);
    resolved.is_closed().then_some(resolved)
}

struct Eval<'a> {
    env: &'a GroundEnv,
    pool: &'a [TypeExpr],
    /// Hard cap on enumerated set sizes; overflow marks incompleteness.
    max_values: usize,
}

/// Result of a bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub values: Vec<GroundValue>,
    /// True when no value was cut off by depth, unfolding or size caps.
    pub complete: bool,
}

impl Eval<'_> {
    fn inhabits(&self, v: &GroundValue, t: &TypeExpr, subst: &Subst, unfolds: usize) -> Tri {
        match t {
            TypeExpr::Var(x) => match subst.get(x) {
                Some(ty) => self.inhabits(v, &ty.clone(), &Subst::new(), unfolds),
                None => Tri::Unknown,
            },
            TypeExpr::Builtin(Builtin::Bool) => {
                Tri::from_bool(matches!(v, GroundValue::Bool(_)))
            }
            TypeExpr::Builtin(Builtin::Int) => {
                Tri::from_bool(matches!(v, GroundValue::Int(_)))
            }
            TypeExpr::Builtin(Builtin::Float) => Tri::from_bool(v.is_float()),
            TypeExpr::Arrow(..) => Tri::from_bool(matches!(v, GroundValue::Function)),
            TypeExpr::Product(fs) => {
                let GroundValue::Tuple(vs) = v else {
                    return Tri::False;
                };
                if vs.len() != fs.len() {
                    return Tri::False;
                }
                Tri::all(
                    vs.iter()
                        .zip(fs)
                        .map(|(v, f)| self.inhabits(v, f, subst, unfolds)),
                )
            }
            TypeExpr::Exists(b, body) => {
                if unfolds == 0 {
                    return Tri::Unknown;
                }
                Tri::any(self.pool.iter().map(|p| {
                    let mut inner = subst.clone();
                    inner.insert(b.clone(), p.clone());
                    self.inhabits(v, body, &inner, unfolds - 1)
                }))
            }
            TypeExpr::Forall(b, body) => {
                if unfolds == 0 {
                    return Tri::Unknown;
                }
                Tri::all(self.pool.iter().map(|p| {
                    let mut inner = subst.clone();
                    inner.insert(b.clone(), p.clone());
                    self.inhabits(v, body, &inner, unfolds - 1)
                }))
            }
            TypeExpr::Guard(lhs, rhs, body) => {
                let Some(lhs_ty) = subst.get(lhs).cloned() else {
                    return Tri::Unknown;
                };
                let Some(rhs_ty) = resolve_closed(rhs, subst) else {
                    return Tri::Unknown;
                };
                if ground_eq(&lhs_ty, &rhs_ty) {
                    self.inhabits(v, body, subst, unfolds)
                } else {
                    Tri::False
                }
            }
            TypeExpr::Constr(head, args) => {
                let Some((params, decl)) = self.env.get(head) else {
                    return Tri::Unknown;
                };
                if unfolds == 0 {
                    return Tri::Unknown;
                }
                let mut inner = Subst::new();
                for (p, a) in params.iter().zip(args) {
                    match resolve_closed(a, subst) {
                        Some(ty) => inner.insert(p.clone(), ty),
                        None => return Tri::Unknown,
                    };
                }
                self.inhabits_decl(v, decl, &inner, unfolds - 1)
            }
            TypeExpr::Rec(b, body) => {
                if unfolds == 0 {
                    return Tri::Unknown;
                }
                let Some(closed) = resolve_closed(t, subst) else {
                    return Tri::Unknown;
                };
                let mut inner = subst.clone();
                inner.insert(b.clone(), closed);
                self.inhabits(v, body, &inner, unfolds - 1)
            }
        }
    }

    fn inhabits_decl(
        &self,
        v: &GroundValue,
        decl: &DatatypeDecl,
        subst: &Subst,
        unfolds: usize,
    ) -> Tri {
        match decl {
            DatatypeDecl::BoxedVariant(ctors) => {
                let GroundValue::Variant(tag, payload) = v else {
                    return Tri::False;
                };
                match ctors.iter().find(|(name, _)| name == tag) {
                    Some((_, arg)) => self.inhabits(payload, arg, subst, unfolds),
                    None => Tri::False,
                }
            }
            DatatypeDecl::UnboxedVariant { arg, .. } => self.inhabits(v, arg, subst, unfolds),
            DatatypeDecl::BoxedRecord(fields) => {
                let GroundValue::Record(fvs) = v else {
                    return Tri::False;
                };
                if fvs.len() != fields.len() {
                    return Tri::False;
                }
                Tri::all(fvs.iter().zip(fields).map(|((label, fv), field)| {
                    if *label != field.label {
                        Tri::False
                    } else {
                        self.inhabits(fv, &field.ty, subst, unfolds)
                    }
                }))
            }
            DatatypeDecl::UnboxedRecord { field, .. } => self.inhabits(v, field, subst, unfolds),
            DatatypeDecl::Synonym(t) => self.inhabits(v, t, subst, unfolds),
        }
    }

    fn enumerate(&self, t: &TypeExpr, subst: &Subst, depth: usize, unfolds: usize) -> Enumeration {
        if depth == 0 {
            return Enumeration {
                values: vec![],
                complete: false,
            };
        }
        match t {
            TypeExpr::Var(x) => match subst.get(x) {
                Some(ty) => self.enumerate(&ty.clone(), &Subst::new(), depth, unfolds),
                None => Enumeration {
                    values: vec![],
                    complete: false,
                },
            },
            TypeExpr::Builtin(Builtin::Bool) => Enumeration {
                values: vec![GroundValue::Bool(false), GroundValue::Bool(true)],
                complete: true,
            },
            TypeExpr::Builtin(Builtin::Int) => Enumeration {
                values: vec![GroundValue::Int(0), GroundValue::Int(1)],
                complete: true,
            },
            TypeExpr::Builtin(Builtin::Float) => Enumeration {
                values: vec![GroundValue::Float],
                complete: true,
            },
            TypeExpr::Arrow(..) => Enumeration {
                values: vec![GroundValue::Function],
                complete: true,
            },
            TypeExpr::Product(fs) => {
                let mut complete = true;
                let mut acc: Vec<Vec<GroundValue>> = vec![vec![]];
                for f in fs {
                    let child = self.enumerate(f, subst, depth - 1, unfolds);
                    complete &= child.complete;
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for v in &child.values {
                            let mut row = prefix.clone();
                            row.push(v.clone());
                            next.push(row);
                        }
                        if next.len() > self.max_values {
                            complete = false;
                            next.truncate(self.max_values);
                            break;
                        }
                    }
                    acc = next;
                }
                let values = acc.into_iter().map(GroundValue::Tuple).collect();
                self.finish(values, complete)
            }
            TypeExpr::Exists(b, body) => {
                if unfolds == 0 {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                let mut values = Vec::new();
                let mut complete = true;
                for p in self.pool {
                    let mut inner = subst.clone();
                    inner.insert(b.clone(), p.clone());
                    let part = self.enumerate(body, &inner, depth, unfolds - 1);
                    complete &= part.complete;
                    values.extend(part.values);
                }
                self.finish(values, complete)
            }
            TypeExpr::Forall(b, body) => {
                if unfolds == 0 || self.pool.is_empty() {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                // Candidates from the first instantiation, kept only when
                // they definitely inhabit every other instantiation.
                let mut inner = subst.clone();
                inner.insert(b.clone(), self.pool[0].clone());
                let first = self.enumerate(body, &inner, depth, unfolds - 1);
                let mut complete = first.complete;
                let mut values = Vec::new();
                for v in first.values {
                    let mut keep = Tri::True;
                    for p in &self.pool[1..] {
                        let mut other = subst.clone();
                        other.insert(b.clone(), p.clone());
                        match self.inhabits(&v, body, &other, unfolds - 1) {
                            Tri::True => {}
                            Tri::False => {
                                keep = Tri::False;
                                break;
                            }
                            Tri::Unknown => keep = Tri::Unknown,
                        }
                    }
                    match keep {
                        Tri::True => values.push(v),
                        Tri::False => {}
                        Tri::Unknown => complete = false,
                    }
                }
                self.finish(values, complete)
            }
            TypeExpr::Guard(lhs, rhs, body) => {
                let (Some(lhs_ty), Some(rhs_ty)) =
                    (subst.get(lhs).cloned(), resolve_closed(rhs, subst))
                else {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                };
                if ground_eq(&lhs_ty, &rhs_ty) {
                    self.enumerate(body, subst, depth, unfolds)
                } else {
                    // The equation can never hold: the type is empty, and
                    // that emptiness is definite.
                    Enumeration {
                        values: vec![],
                        complete: true,
                    }
                }
            }
            TypeExpr::Constr(head, args) => {
                let Some((params, decl)) = self.env.get(head) else {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                };
                if unfolds == 0 {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                let mut inner = Subst::new();
                for (p, a) in params.iter().zip(args) {
                    match resolve_closed(a, subst) {
                        Some(ty) => inner.insert(p.clone(), ty),
                        None => {
                            return Enumeration {
                                values: vec![],
                                complete: false,
                            }
                        }
                    };
                }
                self.enumerate_decl(decl, &inner, depth, unfolds - 1)
            }
            TypeExpr::Rec(b, body) => {
                if unfolds == 0 {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                let Some(closed) = resolve_closed(t, subst) else {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                };
                let mut inner = subst.clone();
                inner.insert(b.clone(), closed);
                self.enumerate(body, &inner, depth, unfolds - 1)
            }
        }
    }

    fn enumerate_decl(
        &self,
        decl: &DatatypeDecl,
        subst: &Subst,
        depth: usize,
        unfolds: usize,
    ) -> Enumeration {
        match decl {
            DatatypeDecl::BoxedVariant(ctors) => {
                if depth == 0 {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                let mut values = Vec::new();
                let mut complete = true;
                for (name, arg) in ctors {
                    let part = self.enumerate(arg, subst, depth - 1, unfolds);
                    complete &= part.complete;
                    values.extend(
                        part.values
                            .into_iter()
                            .map(|v| GroundValue::Variant(name.clone(), Box::new(v))),
                    );
                }
                self.finish(values, complete)
            }
            DatatypeDecl::UnboxedVariant { arg, .. } => {
                // Unboxed: the value is the argument itself, no wrapper,
                // no extra depth.
                self.enumerate(arg, subst, depth, unfolds)
            }
            DatatypeDecl::BoxedRecord(fields) => {
                if depth == 0 {
                    return Enumeration {
                        values: vec![],
                        complete: false,
                    };
                }
                let mut complete = true;
                let mut acc: Vec<Vec<(String, GroundValue)>> = vec![vec![]];
                for field in fields {
                    let child = self.enumerate(&field.ty, subst, depth - 1, unfolds);
                    complete &= child.complete;
                    let mut next = Vec::new();
                    for prefix in &acc {
                        for v in &child.values {
                            let mut row = prefix.clone();
                            row.push((field.label.clone(), v.clone()));
                            next.push(row);
                        }
                        if next.len() > self.max_values {
                            complete = false;
                            next.truncate(self.max_values);
                            break;
                        }
                    }
                    acc = next;
                }
                let values = acc.into_iter().map(GroundValue::Record).collect();
                self.finish(values, complete)
            }
            DatatypeDecl::UnboxedRecord { field, .. } => {
                self.enumerate(field, subst, depth, unfolds)
            }
            DatatypeDecl::Synonym(t) => self.enumerate(t, subst, depth, unfolds),
        }
    }

    fn finish(&self, values: Vec<GroundValue>, mut complete: bool) -> Enumeration {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for v in values {
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
        if out.len() > self.max_values {
            out.truncate(self.max_values);
            complete = false;
        }
        Enumeration {
            values: out,
            complete,
        }
    }
}

fn eval<'a>(env: &'a GroundEnv, budget: &'a Budget) -> Eval<'a> {
    assert!(
        !budget.type_pool.is_empty() && budget.value_depth > 0 && budget.unfold_limit > 0,
        "budget needs a non-empty pool and positive bounds"
    );
    Eval {
        env,
        pool: &budget.type_pool,
        max_values: 4096,
    }
}

/// Does `v` inhabit the closed type `t`?
pub fn inhabits(env: &GroundEnv, v: &GroundValue, t: &TypeExpr, budget: &Budget) -> Tri {
    eval(env, budget).inhabits(v, t, &Subst::new(), budget.unfold_limit)
}

/// All values of depth at most `budget.value_depth` inhabiting the
/// closed type `t`, with a completeness flag.
pub fn enumerate(env: &GroundEnv, t: &TypeExpr, budget: &Budget) -> Enumeration {
    eval(env, budget).enumerate(t, &Subst::new(), budget.value_depth, budget.unfold_limit)
}

fn split_by_float(values: &[GroundValue]) -> (Option<&GroundValue>, Option<&GroundValue>) {
    let float = values.iter().find(|v| v.is_float());
    let non_float = values.iter().find(|v| !v.is_float());
    (float, non_float)
}

/// Is the closed type `t` semantically at mode `m`?
pub fn semantic_mode(env: &GroundEnv, t: &TypeExpr, m: Mode, budget: &Budget) -> Tri {
    match m {
        Mode::Ind => Tri::True,
        Mode::Sep => {
            let e = enumerate(env, t, budget);
            let (float, non_float) = split_by_float(&e.values);
            if float.is_some() && non_float.is_some() {
                Tri::False
            } else if e.complete {
                Tri::True
            } else {
                Tri::Unknown
            }
        }
        Mode::Deepsep => {
            let mut components = Vec::new();
            let mut queue: Vec<(TypeExpr, usize)> = vec![(t.clone(), budget.unfold_limit)];
            while let Some((ty, unfolds)) = queue.pop() {
                for sub in ty.subcomponents() {
                    if let TypeExpr::Rec(b, body) = &sub {
                        if unfolds > 0 {
                            let mut m = Subst::new();
                            m.insert(b.clone(), sub.clone());
                            queue.push((body.subst(&m), unfolds - 1));
                        }
                    }
                    if !components.contains(&sub) {
                        components.push(sub);
                    }
                }
            }
            Tri::all(
                components
                    .iter()
                    .map(|s| semantic_mode(env, s, Mode::Sep, budget)),
            )
        }
    }
}

/// A concrete witness that a signature over-promises: an instantiation
/// of one constructor's parameters whose value set mixes a float with a
/// non-float.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub constructor: String,
    pub instantiation: Vec<(TyVar, TypeExpr)>,
    pub float_value: GroundValue,
    pub non_float_value: GroundValue,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.constructor)?;
        for (i, (v, t)) in self.instantiation.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} := {t}")?;
        }
        write!(
            f,
            ") contains both {} and {}",
            self.float_value, self.non_float_value
        )
    }
}

/// Outcome of semantically validating a block signature.
#[derive(Debug, Clone)]
pub enum SemanticVerdict {
    Holds,
    Unknown,
    Fails(Counterexample),
}

impl SemanticVerdict {
    pub fn verdict_str(&self) -> &'static str {
        match self {
            SemanticVerdict::Holds => "holds",
            SemanticVerdict::Unknown => "unknown",
            SemanticVerdict::Fails(_) => "fails",
        }
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, SemanticVerdict::Fails(_))
    }
}

/// Validate a block signature against the ground semantics: for every
/// constructor in the signature and every pool instantiation whose types
/// definitely carry the declared parameter modes, the instantiated body
/// must be separable. Boxed bodies are always separable (every value
/// carries a wrapper).
pub fn semantic_signature_check(
    env: &GroundEnv,
    block_sig: &ModeSignature,
    budget: &Budget,
) -> SemanticVerdict {
    let mut overall = SemanticVerdict::Holds;
    for (name, entry) in block_sig.iter() {
        let Some((params, decl)) = env.get(name) else {
            overall = SemanticVerdict::Unknown;
            continue;
        };
        if decl.is_boxed() {
            continue;
        }
        let bodies: Vec<&TypeExpr> = decl.body_exprs();
        for inst in pool_instantiations(&budget.type_pool, params.len()) {
            let admissible = Tri::all(
                inst.iter()
                    .zip(entry.modes())
                    .map(|(ty, m)| semantic_mode(env, ty, m, budget)),
            );
            if admissible != Tri::True {
                continue;
            }
            let mut subst = Subst::new();
            for (p, ty) in params.iter().zip(&inst) {
                subst.insert(p.clone(), (*ty).clone());
            }
            for body in &bodies {
                let e = eval(env, budget).enumerate(
                    body,
                    &subst,
                    budget.value_depth,
                    budget.unfold_limit,
                );
                let (float, non_float) = split_by_float(&e.values);
                if let (Some(fv), Some(nv)) = (float, non_float) {
                    return SemanticVerdict::Fails(Counterexample {
                        constructor: name.clone(),
                        instantiation: params
                            .iter()
                            .cloned()
                            .zip(inst.iter().map(|t| (*t).clone()))
                            .collect(),
                        float_value: fv.clone(),
                        non_float_value: nv.clone(),
                    });
                }
                if !e.complete {
                    overall = SemanticVerdict::Unknown;
                }
            }
        }
    }
    overall
}

fn pool_instantiations<'a>(
    pool: &'a [TypeExpr],
    arity: usize,
) -> Box<dyn Iterator<Item = Vec<&'a TypeExpr>> + 'a> {
    if arity == 0 {
        return Box::new(std::iter::once(Vec::new()));
    }
    Box::new(pool_instantiations(pool, arity - 1).flat_map(move |prefix| {
        pool.iter().map(move |t| {
            let mut row = prefix.clone();
            row.push(t);
            row
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn env_of(src: &str) -> GroundEnv {
        let program = parse_program(src).unwrap();
        let decls: Vec<Decl> = program
            .blocks
            .iter()
            .flat_map(|b| b.decls.iter().map(Decl::from_raw))
            .collect();
        GroundEnv::from_decls(&decls)
    }

    fn b() -> Budget {
        Budget::default_budget()
    }

    #[test]
    fn floats_inhabit_float() {
        assert_eq!(
            inhabits(&GroundEnv::new(), &GroundValue::Float, &TypeExpr::FLOAT, &b()),
            Tri::True
        );
    }

    #[test]
    fn boxed_variants_wrap_their_payload() {
        let env = env_of("type any = Any : 'a -> any");
        let t = TypeExpr::constr("any", vec![]);
        let wrapped = GroundValue::Variant("Any".into(), Box::new(GroundValue::Float));
        assert_eq!(inhabits(&env, &wrapped, &t, &b()), Tri::True);
        assert_eq!(inhabits(&env, &GroundValue::Float, &t, &b()), Tri::False);
    }

    #[test]
    fn unboxed_values_are_bare() {
        let env = env_of("type 'a box = B : 'a -> 'a box [@@unboxed]");
        let t = TypeExpr::constr("box", vec![TypeExpr::FLOAT]);
        assert_eq!(inhabits(&env, &GroundValue::Float, &t, &b()), Tri::True);
    }

    #[test]
    fn enumerate_bool_is_two_values() {
        let e = enumerate(&GroundEnv::new(), &TypeExpr::BOOL, &b());
        assert!(e.complete);
        assert_eq!(
            e.values,
            vec![GroundValue::Bool(false), GroundValue::Bool(true)]
        );
    }

    #[test]
    fn enumerate_top_mixes_with_small_pool() {
        let budget = Budget {
            value_depth: 1,
            unfold_limit: 2,
            type_pool: small_pool(),
        };
        let top = TypeExpr::exists(TyVar::new("a"), TypeExpr::var("a"));
        let e = enumerate(&GroundEnv::new(), &top, &budget);
        assert_eq!(
            e.values,
            vec![
                GroundValue::Int(0),
                GroundValue::Int(1),
                GroundValue::Float
            ]
        );
        assert!(e.complete);
    }

    #[test]
    fn unsatisfiable_guards_give_definitely_empty_types() {
        // exists 'g. ('g = int) => ('g = bool) => int
        let t = TypeExpr::exists(
            TyVar::new("g"),
            TypeExpr::guard(
                TyVar::new("g"),
                TypeExpr::INT,
                TypeExpr::guard(TyVar::new("g"), TypeExpr::BOOL, TypeExpr::INT),
            ),
        );
        let e = enumerate(&GroundEnv::new(), &t, &b());
        assert!(e.values.is_empty());
        assert!(e.complete);
        assert_eq!(semantic_mode(&GroundEnv::new(), &t, Mode::Sep, &b()), Tri::True);
    }

    #[test]
    fn top_is_not_separable() {
        let top = TypeExpr::exists(TyVar::new("a"), TypeExpr::var("a"));
        assert_eq!(
            semantic_mode(&GroundEnv::new(), &top, Mode::Sep, &b()),
            Tri::False
        );
    }

    #[test]
    fn float_is_deeply_separable() {
        assert_eq!(
            semantic_mode(&GroundEnv::new(), &TypeExpr::FLOAT, Mode::Deepsep, &b()),
            Tri::True
        );
    }

    #[test]
    fn unboxed_float_box_is_separable() {
        let env = env_of("type 'a box = B : 'a -> 'a box [@@unboxed]");
        let t = TypeExpr::constr("box", vec![TypeExpr::FLOAT]);
        assert_eq!(semantic_mode(&env, &t, Mode::Sep, &b()), Tri::True);
        let e = enumerate(&env, &t, &b());
        assert_eq!(e.values, vec![GroundValue::Float]);
    }

    #[test]
    fn guard_equality_flattens_products() {
        // ('g = (int * float) * bool) => 'g with 'g := int * float * bool
        // holds because products are flattened before comparison.
        let nested = TypeExpr::product(vec![
            TypeExpr::product(vec![TypeExpr::INT, TypeExpr::FLOAT]),
            TypeExpr::BOOL,
        ]);
        let flat = TypeExpr::product(vec![TypeExpr::INT, TypeExpr::FLOAT, TypeExpr::BOOL]);
        assert!(ground_eq(&nested, &flat));
    }

    #[test]
    fn second_signature_holds_semantically() {
        let env = env_of("type ('a, 'b) second = 'b");
        let mut sig = ModeSignature::new();
        sig.insert(
            "second",
            crate::context::SignatureEntry::new(vec![
                (TyVar::new("a"), Mode::Ind),
                (TyVar::new("b"), Mode::Sep),
            ]),
        );
        assert!(matches!(
            semantic_signature_check(&env, &sig, &b()),
            SemanticVerdict::Holds
        ));
    }

    #[test]
    fn second_all_ind_fails_with_counterexample() {
        let env = env_of("type ('a, 'b) second = 'b");
        let mut sig = ModeSignature::new();
        sig.insert(
            "second",
            crate::context::SignatureEntry::new(vec![
                (TyVar::new("a"), Mode::Ind),
                (TyVar::new("b"), Mode::Ind),
            ]),
        );
        let SemanticVerdict::Fails(ce) = semantic_signature_check(&env, &sig, &b()) else {
            panic!("expected a counterexample")
        };
        assert_eq!(ce.constructor, "second");
        assert!(ce.float_value.is_float());
        assert!(!ce.non_float_value.is_float());
    }

    #[test]
    fn boxed_blocks_hold_under_any_signature() {
        let env = env_of("type 'a pairish = P of 'a * 'a | Q of float");
        let mut sig = ModeSignature::new();
        sig.insert(
            "pairish",
            crate::context::SignatureEntry::new(vec![(TyVar::new("a"), Mode::Ind)]),
        );
        assert!(matches!(
            semantic_signature_check(&env, &sig, &b()),
            SemanticVerdict::Holds
        ));
    }

    #[test]
    fn enumerated_values_inhabit() {
        let env = env_of(
            "type ('a, 'b) pair = 'a * 'b\n\
             type t = T of (int, float) pair | U of bool",
        );
        let t = TypeExpr::constr("t", vec![]);
        let e = enumerate(&env, &t, &b());
        assert!(e.complete);
        assert!(!e.values.is_empty());
        for v in &e.values {
            assert_eq!(inhabits(&env, v, &t, &b()), Tri::True, "{v} must inhabit");
        }
    }
}
