//! The judgment engine.
//!
//! The primitive operation is *inference*: given a signature and a type
//! expression demanded at some mode, compute the pointwise-minimal mode
//! context over its free variables under which the judgment holds.
//! Checking a context is then "infer and compare".
//!
//! Cyclic types (`... as 'b`) are handled coinductively with two
//! hypothesis sets: judgments crossing a computational constructor
//! (arrow, product) become *safe* and may be assumed outright when
//! re-encountered; judgments still waiting on a datatype constructor or
//! recursion binder are *unsafe*, and re-encountering one of those
//! exactly is a refutation.

use std::collections::{BTreeMap, BTreeSet};

use crate::ast::{DatatypeDecl, TyVar, TypeExpr};
use crate::context::{ModeContext, ModeSignature};
use crate::diag::{Diagnostic, DiagnosticKind, Judgment};
use crate::mode::Mode;

/// Coinductive hypothesis sets. Membership is modulo alpha-equivalence:
/// entries are stored under the canonical alpha key of the subject.
#[derive(Debug, Clone, Default)]
pub struct HypothesisSets {
    safe: BTreeSet<(TypeExpr, Mode)>,
    unsafe_: BTreeSet<(TypeExpr, Mode)>,
}

impl HypothesisSets {
    pub fn new() -> Self {
        Self::default()
    }

    /// A safe hypothesis at a mode at least as strong as `m`.
    fn safe_hit(&self, key: &TypeExpr, m: Mode) -> bool {
        Mode::ALL
            .into_iter()
            .filter(|m2| *m2 >= m)
            .any(|m2| self.safe.contains(&(key.clone(), m2)))
    }

    /// An unsafe hypothesis at exactly `m`.
    fn unsafe_hit(&self, key: &TypeExpr, m: Mode) -> bool {
        self.unsafe_.contains(&(key.clone(), m))
    }

    fn with_unsafe(&self, key: TypeExpr, m: Mode) -> Self {
        let mut out = self.clone();
        out.unsafe_.insert((key, m));
        debug_assert!(out.safe.is_disjoint(&out.unsafe_));
        out
    }

    /// Promote every unsafe hypothesis to safe and add the subject; used
    /// when descending under a computational type constructor.
    fn promoted_with_safe(&self, key: TypeExpr, m: Mode) -> Self {
        let mut safe = self.safe.clone();
        safe.extend(self.unsafe_.iter().cloned());
        safe.insert((key, m));
        HypothesisSets {
            safe,
            unsafe_: BTreeSet::new(),
        }
    }
}

/// Trace sink for derivation reporting. The default [`NoTrace`] compiles
/// to nothing.
pub trait Tracer {
    fn enter(&mut self, _rule: &'static str, _judgment: String) {}
    fn exit(&mut self, _outcome: String) {}
    fn leaf(&mut self, rule: &'static str, judgment: String, outcome: String) {
        self.enter(rule, judgment);
        self.exit(outcome);
    }
}

/// Throwaway tracer.
pub struct NoTrace;

impl Tracer for NoTrace {}

/// One derivation step, for `--explain` output.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub depth: usize,
    pub rule: &'static str,
    pub judgment: String,
    pub outcome: String,
}

/// Collects the rule applied at every node of a derivation.
#[derive(Debug, Clone, Default)]
pub struct TraceLog {
    pub entries: Vec<TraceEntry>,
    stack: Vec<usize>,
}

impl TraceLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&"  ".repeat(e.depth + 1));
            out.push_str(&format!("[{}] {}  =>  {}\n", e.rule, e.judgment, e.outcome));
        }
        out
    }
}

impl Tracer for TraceLog {
    fn enter(&mut self, rule: &'static str, judgment: String) {
        let depth = self.stack.len();
        self.entries.push(TraceEntry {
            depth,
            rule,
            judgment,
            outcome: String::new(),
        });
        self.stack.push(self.entries.len() - 1);
    }

    fn exit(&mut self, outcome: String) {
        if let Some(i) = self.stack.pop() {
            self.entries[i].outcome = outcome;
        }
    }
}

struct Infer<'a, T: Tracer> {
    sig: &'a ModeSignature,
    tracer: &'a mut T,
    path: Vec<String>,
    /// Recursion binders in scope, mapped to their `Rec` node.
    rec_env: BTreeMap<TyVar, TypeExpr>,
}

impl<'a, T: Tracer> Infer<'a, T> {
    fn new(sig: &'a ModeSignature, tracer: &'a mut T) -> Self {
        Infer {
            sig,
            tracer,
            path: Vec::new(),
            rec_env: BTreeMap::new(),
        }
    }

    fn diag(&self, kind: DiagnosticKind, subject: &TypeExpr, m: Mode, ctx: ModeContext) -> Diagnostic {
        Diagnostic {
            kind,
            path: self.path.clone(),
            judgment: Judgment {
                signature: self.sig.clone(),
                context: ctx,
                subject: subject.clone(),
                mode: m,
            },
        }
    }

    fn infer(
        &mut self,
        t: &TypeExpr,
        m: Mode,
        hyps: &HypothesisSets,
    ) -> Result<ModeContext, Diagnostic> {
        let key = t.alpha_key();
        if hyps.safe_hit(&key, m) {
            self.tracer
                .leaf("cycle-ok", format!("{t} : {m}"), "{} (safe hypothesis)".into());
            return Ok(ModeContext::new());
        }
        if hyps.unsafe_hit(&key, m) {
            self.tracer.leaf(
                "cycle-bad",
                format!("{t} : {m}"),
                "rejected (unsafe hypothesis)".into(),
            );
            return Err(self.diag(DiagnosticKind::UnsafeCycle, t, m, ModeContext::new()));
        }
        let rule = match t {
            TypeExpr::Var(v) if self.rec_env.contains_key(v) => "var-cycle",
            TypeExpr::Var(_) => "var",
            TypeExpr::Builtin(_) => "builtin",
            TypeExpr::Constr(..) => "constructor",
            TypeExpr::Arrow(..) => "arrow",
            TypeExpr::Product(..) => "product",
            TypeExpr::Forall(..) => "forall",
            TypeExpr::Exists(..) => "exists",
            TypeExpr::Rec(..) => "rec",
            TypeExpr::Guard(..) => "guard",
        };
        self.tracer.enter(rule, format!("{t} : {m}"));
        let result = self.infer_node(t, m, hyps, key);
        match &result {
            Ok(ctx) => self.tracer.exit(format!("{ctx}")),
            Err(d) => self.tracer.exit(format!("rejected ({})", d.kind.label())),
        }
        result
    }

    fn infer_node(
        &mut self,
        t: &TypeExpr,
        m: Mode,
        hyps: &HypothesisSets,
        key: TypeExpr,
    ) -> Result<ModeContext, Diagnostic> {
        match t {
            TypeExpr::Var(v) => {
                if let Some(rec_node) = self.rec_env.get(v).cloned() {
                    // A recursion binder: the demand re-enters the cyclic
                    // judgment, which the hypothesis sets resolve.
                    self.infer(&rec_node, m, hyps)
                } else {
                    Ok(ModeContext::singleton(v.clone(), m))
                }
            }
            TypeExpr::Builtin(_) => Ok(ModeContext::new()),
            TypeExpr::Constr(head, args) => {
                let entry = match self.sig.get(head) {
                    Some(e) => e.clone(),
                    None => {
                        return Err(self.diag(
                            DiagnosticKind::UnknownConstructor { name: head.clone() },
                            t,
                            m,
                            ModeContext::new(),
                        ))
                    }
                };
                if entry.arity() != args.len() {
                    return Err(self.diag(
                        DiagnosticKind::Arity {
                            name: head.clone(),
                            expected: entry.arity(),
                            got: args.len(),
                        },
                        t,
                        m,
                        ModeContext::new(),
                    ));
                }
                let inner = hyps.with_unsafe(key, m);
                let mut ctx = ModeContext::new();
                for (i, (arg, pmode)) in args.iter().zip(entry.modes()).enumerate() {
                    self.path.push(format!("{head}/{i}"));
                    let child = self.infer(arg, m.compose(pmode), &inner)?;
                    self.path.pop();
                    ctx = ctx.join(&child);
                }
                Ok(ctx)
            }
            TypeExpr::Arrow(dom, cod) => {
                let inner = hyps.promoted_with_safe(key, m);
                let sub = m.compose(Mode::Ind);
                self.path.push("dom".into());
                let dctx = self.infer(dom, sub, &inner)?;
                self.path.pop();
                self.path.push("cod".into());
                let cctx = self.infer(cod, sub, &inner)?;
                self.path.pop();
                Ok(dctx.join(&cctx))
            }
            TypeExpr::Product(factors) => {
                let inner = hyps.promoted_with_safe(key, m);
                let sub = m.compose(Mode::Ind);
                let mut ctx = ModeContext::new();
                for (i, f) in factors.iter().enumerate() {
                    self.path.push(format!("*{i}"));
                    let child = self.infer(f, sub, &inner)?;
                    self.path.pop();
                    ctx = ctx.join(&child);
                }
                Ok(ctx)
            }
            TypeExpr::Forall(binder, body) => {
                // Any witness mode is admissible for the binder; the
                // body's demand is one, so just drop the entry.
                let mut ctx = self.infer(body, m, hyps)?;
                ctx.remove(binder);
                Ok(ctx)
            }
            TypeExpr::Exists(binder, body) => {
                let mut ctx = self.infer(body, m, hyps)?;
                let demanded = ctx.mode_of(binder);
                if demanded > Mode::Ind {
                    return Err(self.diag(
                        DiagnosticKind::UnguardedExistential {
                            var: binder.clone(),
                            demanded,
                        },
                        t,
                        m,
                        ctx,
                    ));
                }
                ctx.remove(binder);
                Ok(ctx)
            }
            TypeExpr::Rec(binder, body) => {
                let inner = hyps.with_unsafe(key, m);
                let prev = self.rec_env.insert(binder.clone(), t.clone());
                let result = self.infer(body, m, &inner);
                match prev {
                    Some(p) => {
                        self.rec_env.insert(binder.clone(), p);
                    }
                    None => {
                        self.rec_env.remove(binder);
                    }
                }
                let mut ctx = result?;
                ctx.remove(binder);
                Ok(ctx)
            }
            TypeExpr::Guard(..) => Err(self.diag(
                DiagnosticKind::Internal {
                    message: format!(
                        "equality guard {t} reached the type-expression engine; guards \
                         are discharged at the declaration level"
                    ),
                },
                t,
                m,
                ModeContext::new(),
            )),
        }
    }
}

/// Infer the minimal context under which `t` holds at mode `m`.
pub fn infer_context(
    sig: &ModeSignature,
    t: &TypeExpr,
    m: Mode,
) -> Result<ModeContext, Diagnostic> {
    infer_with_hypotheses(sig, t, m, &HypothesisSets::new())
}

/// As [`infer_context`], starting from the given hypothesis sets.
pub fn infer_with_hypotheses(
    sig: &ModeSignature,
    t: &TypeExpr,
    m: Mode,
    hyps: &HypothesisSets,
) -> Result<ModeContext, Diagnostic> {
    Infer::new(sig, &mut NoTrace).infer(t, m, hyps)
}

/// As [`infer_context`], recording the rule applied at every node.
pub fn infer_context_traced(
    sig: &ModeSignature,
    t: &TypeExpr,
    m: Mode,
    trace: &mut TraceLog,
) -> Result<ModeContext, Diagnostic> {
    Infer::new(sig, trace).infer(t, m, &HypothesisSets::new())
}

/// The largest mode `t` can be given in context `g`. `Ind` always holds.
///
/// The subject must be guard-free and rec-free; by constraint-free
/// principality the minimal context exists, so "holds" is exactly
/// "minimal context <= g".
pub fn max_mode(sig: &ModeSignature, g: &ModeContext, t: &TypeExpr) -> Mode {
    for m in [Mode::Deepsep, Mode::Sep] {
        if let Ok(ctx) = infer_context(sig, t, m) {
            if ctx.le_default(g) {
                return m;
            }
        }
    }
    Mode::Ind
}

/// Discharge one GADT equation `alpha = kappa` against the context `g`.
///
/// Three cases:
/// 1. `kappa` is a single existential variable `b`: `alpha` takes `b`'s
///    mode and `b` drops to `Ind`.
/// 2. every free variable of `kappa` is at `Ind` in `g`: no update.
/// 3. otherwise `alpha` is forced to `Deepsep` and every free variable
///    of `kappa` drops to `Ind`.
pub fn discharge_equation(
    g: &ModeContext,
    alpha: &TyVar,
    kappa: &TypeExpr,
    existentials: &BTreeSet<TyVar>,
) -> ModeContext {
    let mut out = g.clone();
    if let TypeExpr::Var(beta) = kappa {
        if existentials.contains(beta) {
            let mb = out.mode_of(beta);
            out.set(alpha.clone(), mb);
            out.set(beta.clone(), Mode::Ind);
            return out;
        }
    }
    let fv = kappa.free_vars();
    if fv.iter().all(|v| g.mode_of(v) == Mode::Ind) {
        return out;
    }
    out.set(alpha.clone(), Mode::Deepsep);
    for v in fv {
        out.set(v, Mode::Ind);
    }
    out
}

/// Which of the three discharge cases applies. Used for trace output.
fn discharge_case(g: &ModeContext, kappa: &TypeExpr, existentials: &BTreeSet<TyVar>) -> u8 {
    if let TypeExpr::Var(beta) = kappa {
        if existentials.contains(beta) {
            return 1;
        }
    }
    if kappa.free_vars().iter().all(|v| g.mode_of(v) == Mode::Ind) {
        2
    } else {
        3
    }
}

/// Split a desugared unboxed/synonym body into its existential prefix,
/// equality guards (in emission order) and core type.
pub fn peel_gadt_prefix(body: &TypeExpr) -> (Vec<TyVar>, Vec<(TyVar, TypeExpr)>, &TypeExpr) {
    let mut existentials = Vec::new();
    let mut cur = body;
    while let TypeExpr::Exists(b, inner) = cur {
        existentials.push(b.clone());
        cur = inner;
    }
    let mut guards = Vec::new();
    while let TypeExpr::Guard(lhs, rhs, inner) = cur {
        guards.push((lhs.clone(), rhs.as_ref().clone()));
        cur = inner;
    }
    (existentials, guards, cur)
}

/// Verify that every constructor head in `t` resolves in `sig` with the
/// right arity. Boxed bodies carry no mode premises but must still be
/// well-scoped.
fn resolve_heads(
    sig: &ModeSignature,
    t: &TypeExpr,
    path: &[String],
) -> Result<(), Diagnostic> {
    let fail = |kind: DiagnosticKind| -> Result<(), Diagnostic> {
        Err(Diagnostic {
            kind,
            path: path.to_vec(),
            judgment: Judgment {
                signature: sig.clone(),
                context: ModeContext::new(),
                subject: t.clone(),
                mode: Mode::Ind,
            },
        })
    };
    match t {
        TypeExpr::Constr(head, args) => {
            match sig.get(head) {
                None => {
                    return fail(DiagnosticKind::UnknownConstructor { name: head.clone() })
                }
                Some(e) if e.arity() != args.len() => {
                    return fail(DiagnosticKind::Arity {
                        name: head.clone(),
                        expected: e.arity(),
                        got: args.len(),
                    })
                }
                Some(_) => {}
            }
            for a in args {
                resolve_heads(sig, a, path)?;
            }
            Ok(())
        }
        TypeExpr::Arrow(d, c) => {
            resolve_heads(sig, d, path)?;
            resolve_heads(sig, c, path)
        }
        TypeExpr::Product(fs) => fs.iter().try_for_each(|f| resolve_heads(sig, f, path)),
        TypeExpr::Forall(_, b) | TypeExpr::Exists(_, b) | TypeExpr::Rec(_, b) => {
            resolve_heads(sig, b, path)
        }
        TypeExpr::Guard(_, rhs, body) => {
            resolve_heads(sig, rhs, path)?;
            resolve_heads(sig, body, path)
        }
        TypeExpr::Var(_) | TypeExpr::Builtin(_) => Ok(()),
    }
}

/// Check one declaration under `sig`, returning the parameter context it
/// requires. Boxed bodies are separable outright; unboxed and synonym
/// bodies must hold at `Sep` after their equations are discharged and
/// their existentials shown to be `Ind`.
pub fn check_decl(
    sig: &ModeSignature,
    params: &[TyVar],
    d: &DatatypeDecl,
) -> Result<ModeContext, Diagnostic> {
    check_decl_traced(sig, params, d, &mut NoTrace)
}

pub fn check_decl_traced<T: Tracer>(
    sig: &ModeSignature,
    params: &[TyVar],
    d: &DatatypeDecl,
    tracer: &mut T,
) -> Result<ModeContext, Diagnostic> {
    let mut all_ind = ModeContext::new();
    all_ind.pad_with_ind(params);
    let (label, body): (String, &TypeExpr) = match d {
        DatatypeDecl::BoxedVariant(ctors) => {
            for (name, arg) in ctors {
                resolve_heads(sig, arg, std::slice::from_ref(name))?;
            }
            tracer.leaf(
                "boxed-variant",
                format!(
                    "{} constructor(s)",
                    ctors.len()
                ),
                format!("{all_ind} (no premises)"),
            );
            return Ok(all_ind);
        }
        DatatypeDecl::BoxedRecord(fields) => {
            for f in fields {
                resolve_heads(sig, &f.ty, std::slice::from_ref(&f.label))?;
            }
            tracer.leaf(
                "boxed-record",
                format!("{} field(s)", fields.len()),
                format!("{all_ind} (no premises)"),
            );
            return Ok(all_ind);
        }
        DatatypeDecl::UnboxedVariant { ctor, arg } => (ctor.clone(), arg),
        DatatypeDecl::UnboxedRecord { label, field } => (label.clone(), field),
        DatatypeDecl::Synonym(t) => ("body".to_string(), t),
    };

    let rule = match d {
        DatatypeDecl::UnboxedVariant { .. } => "unboxed-variant",
        DatatypeDecl::UnboxedRecord { .. } => "unboxed-record",
        _ => "synonym",
    };
    tracer.enter(rule, format!("{body} : {}", Mode::Sep));

    let (existentials, guards, core) = peel_gadt_prefix(body);
    let exist_set: BTreeSet<TyVar> = existentials.iter().cloned().collect();

    let mut engine = Infer::new(sig, tracer);
    engine.path.push(label);
    let inferred = engine.infer(core, Mode::Sep, &HypothesisSets::new());
    let path = engine.path.clone();
    let mut ctx = match inferred {
        Ok(c) => c,
        Err(e) => {
            tracer.exit(format!("rejected ({})", e.kind.label()));
            return Err(e);
        }
    };
    ctx.pad_with_ind(params);
    ctx.pad_with_ind(&exist_set);
    for (_, kappa) in &guards {
        ctx.pad_with_ind(&kappa.free_vars());
    }

    for (alpha, kappa) in &guards {
        let case = discharge_case(&ctx, kappa, &exist_set);
        let before = ctx.clone();
        ctx = discharge_equation(&ctx, alpha, kappa, &exist_set);
        tracer.leaf(
            "discharge",
            format!("({alpha} = {kappa}) in {before}"),
            format!("case {case}: {ctx}"),
        );
    }

    for beta in &existentials {
        let demanded = ctx.mode_of(beta);
        if demanded > Mode::Ind {
            let diag = Diagnostic {
                kind: DiagnosticKind::UnguardedExistential {
                    var: beta.clone(),
                    demanded,
                },
                path,
                judgment: Judgment {
                    signature: sig.clone(),
                    context: ctx,
                    subject: body.clone(),
                    mode: Mode::Sep,
                },
            };
            tracer.exit(format!("rejected ({})", diag.kind.label()));
            return Err(diag);
        }
    }

    let result = ctx.restrict(params);
    tracer.exit(format!("{result}"));
    Ok(result)
}
