//! Parser for the declaration language.
//!
//! The grammar is OCaml-flavoured:
//!
//! ```text
//! program := block*
//! block   := "type" decl ("and" decl)*
//! decl    := params? IDENT "=" body attr?
//! params  := tyvar | "(" tyvar ("," tyvar)* ")"
//! body    := texpr | variant | record
//! variant := ("|"? ctor)+
//! ctor    := UIDENT "of" texpr | UIDENT ":" texpr "->" texpr
//! record  := "{" "mutable"? IDENT ":" texpr (";" ...)* "}"
//! texpr   := texpr "->" texpr | texpr ("*" texpr)+ | texpr "as" tyvar
//!          | ("forall"|"exists") tyvar+ "." texpr | atom args?
//! attr    := "[@@unboxed]"
//! ```
//!
//! `as` binds loosest, then `->` (right-associative), then `*`, then
//! postfix constructor application. `_` introduces a fresh anonymous
//! variable. Binders are renamed apart during parsing, so every
//! constructed expression has unique binders.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ast::{RecordField, TyVar, TypeExpr};
use crate::lexer::{tokenize, ParseError, Pos, Token};

/// A parsed program: an ordered list of `type ... and ...` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub blocks: Vec<Block>,
}

/// One mutually-recursive group of declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub decls: Vec<RawDecl>,
}

/// A declaration before GADT desugaring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDecl {
    pub name: String,
    pub params: Vec<TyVar>,
    pub body: RawBody,
    pub unboxed: bool,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawBody {
    Synonym(TypeExpr),
    Variant(Vec<RawGadtConstructor>),
    Record(Vec<RecordField>),
}

/// A variant constructor. For the GADT form `C : tau -> (kappa, ...) t`,
/// `ret` holds the return instantiation vector (one entry per declared
/// parameter); variables free in `arg`/`ret` that are not pinned to a
/// parameter are the constructor's implicit existentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawGadtConstructor {
    pub name: String,
    pub arg: TypeExpr,
    pub ret: Option<Vec<TypeExpr>>,
}

impl RawGadtConstructor {
    pub fn is_gadt(&self) -> bool {
        self.ret.is_some()
    }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        anon_counter: 0,
    };
    let program = parser.program()?;
    validate(&program)?;
    Ok(program)
}

struct Parser {
    tokens: Vec<(Token, Pos)>,
    pos: usize,
    anon_counter: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn here(&self) -> Pos {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Token) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn err(&self, message: String) -> ParseError {
        ParseError {
            pos: self.here(),
            message,
        }
    }

    fn fresh_anon(&mut self) -> TyVar {
        let v = TyVar(format!("_{}", self.anon_counter));
        self.anon_counter += 1;
        v
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut blocks = Vec::new();
        while *self.peek() != Token::Eof {
            blocks.push(self.block()?);
        }
        Ok(Program { blocks })
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        self.expect(&Token::KwType)?;
        let mut decls = vec![self.decl()?];
        while *self.peek() == Token::KwAnd {
            self.bump();
            decls.push(self.decl()?);
        }
        Ok(Block { decls })
    }

    fn decl(&mut self) -> Result<RawDecl, ParseError> {
        let pos = self.here();
        let params = self.params()?;
        let name = match self.bump() {
            Token::Ident(n) => n,
            other => {
                return Err(ParseError {
                    pos,
                    message: format!("expected a type name, found {}", other.describe()),
                })
            }
        };
        self.expect(&Token::Eq)?;
        let body = self.body(&name, params.len())?;
        let unboxed = if *self.peek() == Token::UnboxedAttr {
            self.bump();
            true
        } else {
            false
        };
        let mut decl = RawDecl {
            name,
            params,
            body,
            unboxed,
            pos,
        };
        check_unboxed_shape(&decl)?;
        uniquify_decl(&mut decl);
        Ok(decl)
    }

    fn params(&mut self) -> Result<Vec<TyVar>, ParseError> {
        match self.peek().clone() {
            Token::TyVar(n) => {
                self.bump();
                Ok(vec![TyVar(n)])
            }
            Token::Underscore => {
                self.bump();
                Ok(vec![self.fresh_anon()])
            }
            Token::LParen => {
                // Only a parameter list if it starts with a type variable
                // or underscore; `(` can also start nothing here because
                // declarations never begin with a parenthesized name.
                self.bump();
                let mut out = Vec::new();
                loop {
                    match self.bump() {
                        Token::TyVar(n) => out.push(TyVar(n)),
                        Token::Underscore => out.push(self.fresh_anon()),
                        other => {
                            return Err(self.err(format!(
                                "expected a type parameter, found {}",
                                other.describe()
                            )))
                        }
                    }
                    match self.bump() {
                        Token::Comma => continue,
                        Token::RParen => break,
                        other => {
                            return Err(self.err(format!(
                                "expected ',' or ')', found {}",
                                other.describe()
                            )))
                        }
                    }
                }
                Ok(out)
            }
            _ => Ok(Vec::new()),
        }
    }

    fn body(&mut self, decl_name: &str, arity: usize) -> Result<RawBody, ParseError> {
        match self.peek() {
            Token::LBrace => self.record(),
            Token::Bar | Token::UIdent(_) => self.variant(decl_name, arity),
            _ => Ok(RawBody::Synonym(self.texpr()?)),
        }
    }

    fn record(&mut self) -> Result<RawBody, ParseError> {
        self.expect(&Token::LBrace)?;
        let mut fields = Vec::new();
        loop {
            let mutable = if *self.peek() == Token::KwMutable {
                self.bump();
                true
            } else {
                false
            };
            let label = match self.bump() {
                Token::Ident(n) => n,
                other => {
                    return Err(self.err(format!(
                        "expected a field label, found {}",
                        other.describe()
                    )))
                }
            };
            self.expect(&Token::Colon)?;
            let ty = self.texpr()?;
            fields.push(RecordField { label, mutable, ty });
            match self.bump() {
                Token::Semi => {
                    if *self.peek() == Token::RBrace {
                        self.bump();
                        break;
                    }
                }
                Token::RBrace => break,
                other => {
                    return Err(self.err(format!(
                        "expected ';' or '}}', found {}",
                        other.describe()
                    )))
                }
            }
        }
        Ok(RawBody::Record(fields))
    }

    fn variant(&mut self, decl_name: &str, arity: usize) -> Result<RawBody, ParseError> {
        if *self.peek() == Token::Bar {
            self.bump();
        }
        let mut ctors = vec![self.ctor(decl_name, arity)?];
        while *self.peek() == Token::Bar {
            self.bump();
            ctors.push(self.ctor(decl_name, arity)?);
        }
        Ok(RawBody::Variant(ctors))
    }

    fn ctor(&mut self, decl_name: &str, arity: usize) -> Result<RawGadtConstructor, ParseError> {
        let name = match self.bump() {
            Token::UIdent(n) => n,
            other => {
                return Err(self.err(format!(
                    "expected a constructor name, found {}",
                    other.describe()
                )))
            }
        };
        match self.bump() {
            Token::KwOf => {
                let arg = self.texpr()?;
                Ok(RawGadtConstructor {
                    name,
                    arg,
                    ret: None,
                })
            }
            Token::Colon => {
                let pos = self.here();
                let full = self.texpr()?;
                let TypeExpr::Arrow(arg, ret) = full else {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "constructor {name} needs an argument and a return type"
                        ),
                    });
                };
                let (head, args) = match *ret {
                    TypeExpr::Constr(h, a) => (h, a),
                    other => {
                        return Err(ParseError {
                            pos,
                            message: format!(
                                "return type of {name} must be an instance of {decl_name}, \
                                 found {other}"
                            ),
                        })
                    }
                };
                if head != decl_name {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "return type of {name} must be an instance of {decl_name}, \
                             found {head}"
                        ),
                    });
                }
                if args.len() != arity {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "{decl_name} expects {arity} argument(s), got {} in the return \
                             type of {name}",
                            args.len()
                        ),
                    });
                }
                Ok(RawGadtConstructor {
                    name,
                    arg: *arg,
                    ret: Some(args),
                })
            }
            other => Err(self.err(format!(
                "expected 'of' or ':' after constructor, found {}",
                other.describe()
            ))),
        }
    }

    fn texpr(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek() {
            Token::KwForall | Token::KwExists => self.quantified(),
            _ => self.as_level(),
        }
    }

    fn quantified(&mut self) -> Result<TypeExpr, ParseError> {
        let forall = match self.bump() {
            Token::KwForall => true,
            Token::KwExists => false,
            _ => unreachable!("caller checked the keyword"),
        };
        let mut binders = Vec::new();
        loop {
            match self.peek().clone() {
                Token::TyVar(n) => {
                    self.bump();
                    binders.push(TyVar(n));
                }
                Token::Underscore => {
                    self.bump();
                    binders.push(self.fresh_anon());
                }
                Token::Dot if !binders.is_empty() => {
                    self.bump();
                    break;
                }
                other => {
                    return Err(self.err(format!(
                        "expected a type variable or '.', found {}",
                        other.describe()
                    )))
                }
            }
        }
        let mut body = self.texpr()?;
        for b in binders.into_iter().rev() {
            body = if forall {
                TypeExpr::forall(b, body)
            } else {
                TypeExpr::exists(b, body)
            };
        }
        Ok(body)
    }

    fn as_level(&mut self) -> Result<TypeExpr, ParseError> {
        let mut t = self.arrow_level()?;
        while *self.peek() == Token::KwAs {
            self.bump();
            let binder = match self.bump() {
                Token::TyVar(n) => TyVar(n),
                other => {
                    return Err(self.err(format!(
                        "expected a type variable after 'as', found {}",
                        other.describe()
                    )))
                }
            };
            t = TypeExpr::rec(binder, t);
        }
        Ok(t)
    }

    fn arrow_level(&mut self) -> Result<TypeExpr, ParseError> {
        let dom = self.prod_level()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let cod = self.arrow_level()?;
            Ok(TypeExpr::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn prod_level(&mut self) -> Result<TypeExpr, ParseError> {
        let first = self.app_level()?;
        if *self.peek() != Token::Star {
            return Ok(first);
        }
        let mut factors = vec![first];
        while *self.peek() == Token::Star {
            self.bump();
            factors.push(self.app_level()?);
        }
        Ok(TypeExpr::Product(factors))
    }

    fn app_level(&mut self) -> Result<TypeExpr, ParseError> {
        let mut t = self.primary()?;
        while let Token::Ident(head) = self.peek().clone() {
            self.bump();
            t = TypeExpr::Constr(head, vec![t]);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek().clone() {
            Token::TyVar(n) => {
                self.bump();
                Ok(TypeExpr::Var(TyVar(n)))
            }
            Token::Underscore => {
                self.bump();
                Ok(TypeExpr::Var(self.fresh_anon()))
            }
            Token::KwFloat => {
                self.bump();
                Ok(TypeExpr::FLOAT)
            }
            Token::KwInt => {
                self.bump();
                Ok(TypeExpr::INT)
            }
            Token::KwBool => {
                self.bump();
                Ok(TypeExpr::BOOL)
            }
            Token::KwForall | Token::KwExists => self.quantified(),
            Token::Ident(head) => {
                self.bump();
                Ok(TypeExpr::Constr(head, vec![]))
            }
            Token::LParen => {
                self.bump();
                let mut items = vec![self.texpr()?];
                while *self.peek() == Token::Comma {
                    self.bump();
                    items.push(self.texpr()?);
                }
                self.expect(&Token::RParen)?;
                if items.len() == 1 {
                    Ok(items.pop().expect("one item"))
                } else if let Token::Ident(head) = self.peek().clone() {
                    self.bump();
                    Ok(TypeExpr::Constr(head, items))
                } else {
                    Err(self.err(format!(
                        "a tuple of type arguments must be followed by a constructor \
                         name, found {}",
                        self.peek().describe()
                    )))
                }
            }
            other => Err(self.err(format!(
                "expected a type expression, found {}",
                other.describe()
            ))),
        }
    }
}

/// `[@@unboxed]` requires a single-constructor variant or a single
/// immutable field record; mutability flags elsewhere are parsed and
/// ignored by the checker.
fn check_unboxed_shape(decl: &RawDecl) -> Result<(), ParseError> {
    if !decl.unboxed {
        return Ok(());
    }
    let ok = match &decl.body {
        RawBody::Variant(cs) => cs.len() == 1,
        RawBody::Record(fs) => fs.len() == 1 && !fs[0].mutable,
        RawBody::Synonym(_) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ParseError {
            pos: decl.pos,
            message: format!(
                "[@@unboxed] on {} requires a single-constructor variant or a single \
                 immutable record field",
                decl.name
            ),
        })
    }
}

/// Rename binders apart within every expression of the declaration.
/// Declared parameters and free constructor-scope variables keep their
/// names.
fn uniquify_decl(decl: &mut RawDecl) {
    let mut used: BTreeSet<String> = decl.params.iter().map(|p| p.0.clone()).collect();
    match &mut decl.body {
        RawBody::Synonym(t) => *t = t.uniquify(&mut used),
        RawBody::Record(fs) => {
            for f in fs {
                f.ty = f.ty.uniquify(&mut used);
            }
        }
        RawBody::Variant(cs) => {
            for c in cs {
                // The argument and the return instantiation share the
                // constructor's scope, so they are renamed together.
                let mut scope = used.clone();
                c.arg = c.arg.uniquify(&mut scope);
                if let Some(ret) = &mut c.ret {
                    for k in ret {
                        *k = k.uniquify(&mut scope);
                    }
                }
            }
        }
    }
}

fn validate(program: &Program) -> Result<(), ParseError> {
    // Constructor (type) names are unique across the program.
    let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
    for block in &program.blocks {
        for decl in &block.decls {
            if arities.insert(&decl.name, decl.params.len()).is_some() {
                return Err(ParseError {
                    pos: decl.pos,
                    message: format!("duplicate type constructor {}", decl.name),
                });
            }
            let mut seen = BTreeSet::new();
            for p in &decl.params {
                if !seen.insert(p.clone()) {
                    return Err(ParseError {
                        pos: decl.pos,
                        message: format!("duplicate type parameter {p} on {}", decl.name),
                    });
                }
            }
        }
    }
    for block in &program.blocks {
        for decl in &block.decls {
            let params: BTreeSet<TyVar> = decl.params.iter().cloned().collect();
            let check_bound = |t: &TypeExpr| -> Result<(), ParseError> {
                for v in t.free_vars() {
                    if !params.contains(&v) {
                        return Err(ParseError {
                            pos: decl.pos,
                            message: format!("unbound type variable {v} in {}", decl.name),
                        });
                    }
                }
                Ok(())
            };
            let mut exprs: Vec<&TypeExpr> = Vec::new();
            match &decl.body {
                RawBody::Synonym(t) => {
                    check_bound(t)?;
                    exprs.push(t);
                }
                RawBody::Record(fs) => {
                    for f in fs {
                        check_bound(&f.ty)?;
                        exprs.push(&f.ty);
                    }
                }
                RawBody::Variant(cs) => {
                    for c in cs {
                        // GADT-form constructors bind their own variables;
                        // plain constructors draw from the parameters.
                        if !c.is_gadt() {
                            check_bound(&c.arg)?;
                        }
                        exprs.push(&c.arg);
                        if let Some(ret) = &c.ret {
                            exprs.extend(ret.iter());
                        }
                    }
                }
            }
            for t in exprs {
                check_arities(t, &arities, decl.pos)?;
            }
        }
    }
    Ok(())
}

fn check_arities(
    t: &TypeExpr,
    arities: &BTreeMap<&str, usize>,
    pos: Pos,
) -> Result<(), ParseError> {
    if let TypeExpr::Constr(head, args) = t {
        if let Some(&expected) = arities.get(head.as_str()) {
            if args.len() != expected {
                return Err(ParseError {
                    pos,
                    message: format!(
                        "{head} expects {expected} argument(s), got {}",
                        args.len()
                    ),
                });
            }
        }
    }
    match t {
        TypeExpr::Constr(_, args) => {
            for a in args {
                check_arities(a, arities, pos)?;
            }
        }
        TypeExpr::Arrow(d, c) => {
            check_arities(d, arities, pos)?;
            check_arities(c, arities, pos)?;
        }
        TypeExpr::Product(fs) => {
            for f in fs {
                check_arities(f, arities, pos)?;
            }
        }
        TypeExpr::Forall(_, b) | TypeExpr::Exists(_, b) | TypeExpr::Rec(_, b) => {
            check_arities(b, arities, pos)?;
        }
        TypeExpr::Guard(_, rhs, body) => {
            check_arities(rhs, arities, pos)?;
            check_arities(body, arities, pos)?;
        }
        TypeExpr::Var(_) | TypeExpr::Builtin(_) => {}
    }
    Ok(())
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{block}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, decl) in self.decls.iter().enumerate() {
            let kw = if i == 0 { "type" } else { "and" };
            write!(f, "{kw} ")?;
            match decl.params.len() {
                0 => {}
                1 => write!(f, "{} ", decl.params[0])?,
                _ => {
                    f.write_str("(")?;
                    for (j, p) in decl.params.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{p}")?;
                    }
                    f.write_str(") ")?;
                }
            }
            write!(f, "{} = ", decl.name)?;
            match &decl.body {
                RawBody::Synonym(t) => write!(f, "{t}")?,
                RawBody::Record(fs) => {
                    f.write_str("{ ")?;
                    for (j, fld) in fs.iter().enumerate() {
                        if j > 0 {
                            f.write_str("; ")?;
                        }
                        if fld.mutable {
                            f.write_str("mutable ")?;
                        }
                        write!(f, "{} : {}", fld.label, fld.ty)?;
                    }
                    f.write_str(" }")?;
                }
                RawBody::Variant(cs) => {
                    for (j, c) in cs.iter().enumerate() {
                        if j > 0 {
                            f.write_str(" | ")?;
                        }
                        match &c.ret {
                            None => write!(f, "{} of {}", c.name, c.arg)?,
                            Some(ret) => {
                                let ret_ty =
                                    TypeExpr::Constr(decl.name.clone(), ret.clone());
                                // The argument sits left of an arrow, so
                                // print it at arrow-operand precedence.
                                let arg = match &c.arg {
                                    t @ (TypeExpr::Arrow(..)
                                    | TypeExpr::Rec(..)
                                    | TypeExpr::Forall(..)
                                    | TypeExpr::Exists(..)
                                    | TypeExpr::Guard(..)) => format!("({t})"),
                                    t => format!("{t}"),
                                };
                                write!(f, "{} : {} -> {}", c.name, arg, ret_ty)?;
                            }
                        }
                    }
                }
            }
            if decl.unboxed {
                f.write_str(" [@@unboxed]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Alpha-equivalence of whole programs: blocks, declarations and
/// constructor shapes must match, with parameters and constructor-scope
/// variables renamed consistently.
pub fn programs_alpha_eq(a: &Program, b: &Program) -> bool {
    if a.blocks.len() != b.blocks.len() {
        return false;
    }
    a.blocks
        .iter()
        .zip(&b.blocks)
        .all(|(x, y)| blocks_alpha_eq(x, y))
}

fn blocks_alpha_eq(a: &Block, b: &Block) -> bool {
    a.decls.len() == b.decls.len()
        && a.decls.iter().zip(&b.decls).all(|(x, y)| {
            x.name == y.name
                && x.unboxed == y.unboxed
                && x.params.len() == y.params.len()
                && bodies_alpha_eq(x, y)
        })
}

fn bodies_alpha_eq(a: &RawDecl, b: &RawDecl) -> bool {
    // Rename b's parameters to a's, then compare bodies alpha-wise.
    let param_map: BTreeMap<TyVar, TypeExpr> = b
        .params
        .iter()
        .zip(&a.params)
        .map(|(pb, pa)| (pb.clone(), TypeExpr::Var(pa.clone())))
        .collect();
    match (&a.body, &b.body) {
        (RawBody::Synonym(x), RawBody::Synonym(y)) => x.alpha_eq(&y.subst(&param_map)),
        (RawBody::Record(xs), RawBody::Record(ys)) => {
            xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    x.label == y.label
                        && x.mutable == y.mutable
                        && x.ty.alpha_eq(&y.ty.subst(&param_map))
                })
        }
        (RawBody::Variant(xs), RawBody::Variant(ys)) => {
            xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    x.name == y.name && ctor_alpha_eq(x, y, &param_map)
                })
        }
        _ => false,
    }
}

fn ctor_alpha_eq(
    a: &RawGadtConstructor,
    b: &RawGadtConstructor,
    param_map: &BTreeMap<TyVar, TypeExpr>,
) -> bool {
    match (&a.ret, &b.ret) {
        (None, None) => a.arg.alpha_eq(&b.arg.subst(param_map)),
        (Some(ra), Some(rb)) => {
            if ra.len() != rb.len() {
                return false;
            }
            // Constructor-scope variables are implicitly bound across the
            // argument and the return instantiation together; wrap both
            // sides in one existential telescope (in first-occurrence
            // order) and compare.
            let close = |arg: &TypeExpr, ret: &[TypeExpr]| -> TypeExpr {
                let mut body = TypeExpr::Product(
                    std::iter::once(arg.clone())
                        .chain(ret.iter().cloned())
                        .chain([TypeExpr::INT, TypeExpr::INT])
                        .collect(),
                );
                for v in body.free_vars_ordered().into_iter().rev() {
                    body = TypeExpr::exists(v, body);
                }
                body
            };
            let bs = close(&b.arg.subst(param_map), &subst_all(rb, param_map));
            close(&a.arg, ra).alpha_eq(&bs)
        }
        _ => false,
    }
}

fn subst_all(ts: &[TypeExpr], map: &BTreeMap<TyVar, TypeExpr>) -> Vec<TypeExpr> {
    ts.iter().map(|t| t.subst(map)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::Builtin;

    #[test]
    fn parses_second_synonym() {
        let p = parse_program("type ('a, 'b) second = 'b").unwrap();
        assert_eq!(p.blocks.len(), 1);
        let d = &p.blocks[0].decls[0];
        assert_eq!(d.name, "second");
        assert_eq!(d.params, vec![TyVar::new("a"), TyVar::new("b")]);
        assert_eq!(d.body, RawBody::Synonym(TypeExpr::var("b")));
    }

    #[test]
    fn parses_unboxed_gadt_any() {
        let p = parse_program("type any = Any : 'a -> any [@@unboxed]").unwrap();
        let d = &p.blocks[0].decls[0];
        assert!(d.unboxed);
        let RawBody::Variant(cs) = &d.body else {
            panic!("expected a variant")
        };
        assert_eq!(cs[0].name, "Any");
        assert_eq!(cs[0].arg, TypeExpr::var("a"));
        assert_eq!(cs[0].ret, Some(vec![]));
    }

    #[test]
    fn parses_product_synonym() {
        let p = parse_program("type 'a t = 'a * int").unwrap();
        let d = &p.blocks[0].decls[0];
        assert_eq!(
            d.body,
            RawBody::Synonym(TypeExpr::product(vec![
                TypeExpr::var("a"),
                TypeExpr::Builtin(Builtin::Int)
            ]))
        );
    }

    #[test]
    fn as_binds_loosest() {
        let p = parse_program("type t = int -> 'b as 'b").unwrap();
        let RawBody::Synonym(t) = &p.blocks[0].decls[0].body else {
            panic!()
        };
        let TypeExpr::Rec(b, body) = t else {
            panic!("expected a rec type, got {t}")
        };
        assert_eq!(
            body.as_ref(),
            &TypeExpr::arrow(TypeExpr::INT, TypeExpr::Var(b.clone()))
        );
    }

    #[test]
    fn postfix_application_chains() {
        let p = parse_program("type 'a t = int and 'a u = 'a and v = int t u u")
            .map_err(|e| e.to_string())
            .unwrap();
        let RawBody::Synonym(t) = &p.blocks[0].decls[2].body else {
            panic!()
        };
        assert_eq!(t.to_string(), "int t u u");
    }

    #[test]
    fn multi_argument_application() {
        let p = parse_program("type ('a, 'b) p = 'a * 'b\ntype t = (int, float) p").unwrap();
        let RawBody::Synonym(t) = &p.blocks[1].decls[0].body else {
            panic!()
        };
        assert_eq!(
            t,
            &TypeExpr::constr("p", vec![TypeExpr::INT, TypeExpr::FLOAT])
        );
    }

    #[test]
    fn rejects_duplicate_type_names() {
        let err = parse_program("type t = int type t = bool").unwrap_err();
        assert!(err.message.contains("duplicate"), "{}", err.message);
    }

    #[test]
    fn rejects_unbound_variable_in_synonym() {
        let err = parse_program("type t = 'a").unwrap_err();
        assert!(err.message.contains("unbound"), "{}", err.message);
    }

    #[test]
    fn gadt_body_may_bind_fresh_variables() {
        assert!(parse_program("type t = K : 'a -> t").is_ok());
    }

    #[test]
    fn rejects_arity_mismatch() {
        let err = parse_program("type 'a t = 'a and u = (int, bool) t").unwrap_err();
        assert!(err.message.contains("argument"), "{}", err.message);
    }

    #[test]
    fn rejects_wrong_gadt_return_head() {
        let err = parse_program("type t = K : int -> u").unwrap_err();
        assert!(err.message.contains("instance of t"), "{}", err.message);
    }

    #[test]
    fn rejects_unboxed_synonym() {
        let err = parse_program("type t = int [@@unboxed]").unwrap_err();
        assert!(err.message.contains("unboxed"), "{}", err.message);
    }

    #[test]
    fn rejects_unboxed_mutable_record() {
        let err = parse_program("type t = { mutable x : int } [@@unboxed]").unwrap_err();
        assert!(err.message.contains("immutable"), "{}", err.message);
    }

    #[test]
    fn reports_error_positions() {
        let err = parse_program("type t =\n  | K of").unwrap_err();
        assert_eq!(err.pos.line, 2);
    }

    #[test]
    fn pretty_print_reparses_alpha_equivalent() {
        let src = "type ('a, 'b) pair = 'a * 'b\n\
                   type _ first = First : 'b -> ('b * 'c) first [@@unboxed]\n\
                   type t = { mutable x : float; y : (int, bool) pair }\n\
                   type u = K : (forall 'x. 'x -> 'x) -> u | L of int -> bool";
        let p1 = parse_program(src).unwrap();
        let printed = p1.to_string();
        let p2 = parse_program(&printed).unwrap_or_else(|e| {
            panic!("re-parse failed on:\n{printed}\nerror: {e}")
        });
        assert!(programs_alpha_eq(&p1, &p2), "not alpha-equal:\n{p1}\nvs\n{p2}");
    }
}
