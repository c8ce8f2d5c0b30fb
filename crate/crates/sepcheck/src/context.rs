//! Mode contexts and mode signatures.
//!
//! A context maps type variables in scope to the mode demanded of them;
//! a signature maps datatype constructors to the per-parameter modes
//! under which the datatype is separable. Contexts are compared
//! pointwise (covariantly); signature parameters sit in contravariant
//! position, so a signature demanding less of its parameters is larger.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::TyVar;
use crate::mode::Mode;

/// Raised by the order comparisons when the two sides do not speak about
/// the same variables or constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMismatch(pub String);

impl fmt::Display for DomainMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain mismatch: {}", self.0)
    }
}

impl std::error::Error for DomainMismatch {}

/// A finite map from type variables to modes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeContext {
    entries: BTreeMap<TyVar, Mode>,
}

impl ModeContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(var: TyVar, mode: Mode) -> Self {
        let mut ctx = Self::new();
        ctx.set(var, mode);
        ctx
    }

    pub fn set(&mut self, var: TyVar, mode: Mode) {
        self.entries.insert(var, mode);
    }

    /// The mode of `var`; absent variables carry no demand, i.e. `Ind`.
    pub fn mode_of(&self, var: &TyVar) -> Mode {
        self.entries.get(var).copied().unwrap_or(Mode::Ind)
    }

    pub fn get(&self, var: &TyVar) -> Option<Mode> {
        self.entries.get(var).copied()
    }

    pub fn remove(&mut self, var: &TyVar) -> Option<Mode> {
        self.entries.remove(var)
    }

    pub fn contains(&self, var: &TyVar) -> bool {
        self.entries.contains_key(var)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, Mode)> {
        self.entries.iter().map(|(v, m)| (v, *m))
    }

    pub fn vars(&self) -> impl Iterator<Item = &TyVar> {
        self.entries.keys()
    }

    /// Pointwise maximum, over the union of the two domains.
    pub fn join(&self, other: &ModeContext) -> ModeContext {
        let mut out = self.clone();
        for (v, m) in other.iter() {
            let cur = out.mode_of(v);
            out.set(v.clone(), cur.max(m));
        }
        out
    }

    /// Pointwise order on equal domains.
    pub fn le(&self, other: &ModeContext) -> Result<bool, DomainMismatch> {
        if self.entries.len() != other.entries.len()
            || !self.entries.keys().eq(other.entries.keys())
        {
            return Err(DomainMismatch(format!(
                "contexts {self} and {other} have different variables"
            )));
        }
        Ok(self.iter().all(|(v, m)| m <= other.mode_of(v)))
    }

    /// Pointwise order treating missing variables as `Ind` on both sides.
    pub fn le_default(&self, other: &ModeContext) -> bool {
        self.iter().all(|(v, m)| m <= other.mode_of(v))
    }

    /// Keep only the given variables, filling absent ones with `Ind`.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a TyVar>) -> ModeContext {
        let mut out = ModeContext::new();
        for v in vars {
            out.set(v.clone(), self.mode_of(v));
        }
        out
    }

    /// Extend with `Ind` entries for any variable not yet present.
    pub fn pad_with_ind<'a>(&mut self, vars: impl IntoIterator<Item = &'a TyVar>) {
        for v in vars {
            self.entries.entry(v.clone()).or_insert(Mode::Ind);
        }
    }
}

impl FromIterator<(TyVar, Mode)> for ModeContext {
    fn from_iter<T: IntoIterator<Item = (TyVar, Mode)>>(iter: T) -> Self {
        ModeContext {
            entries: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for ModeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{m}")?;
        }
        f.write_str("}")
    }
}

/// One signature entry: the ordered parameter/mode vector of a datatype
/// constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureEntry {
    pub params: Vec<(TyVar, Mode)>,
}

impl SignatureEntry {
    pub fn new(params: Vec<(TyVar, Mode)>) -> Self {
        SignatureEntry { params }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        self.params.iter().map(|(_, m)| *m)
    }
}

impl fmt::Display for SignatureEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (v, m)) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{m}")?;
        }
        f.write_str(")")
    }
}

/// A finite map from datatype constructor names to parameter-mode
/// vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModeSignature {
    entries: BTreeMap<String, SignatureEntry>,
}

impl ModeSignature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: SignatureEntry) {
        self.entries.insert(name.into(), entry);
    }

    pub fn get(&self, name: &str) -> Option<&SignatureEntry> {
        self.entries.get(name)
    }

    pub fn entry_mut(&mut self, name: &str) -> Option<&mut SignatureEntry> {
        self.entries.get_mut(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &SignatureEntry)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Union of two signatures; entries of `other` win on collision.
    pub fn extended(&self, other: &ModeSignature) -> ModeSignature {
        let mut out = self.clone();
        for (n, e) in other.iter() {
            out.insert(n.clone(), e.clone());
        }
        out
    }

    /// Signature order: same constructors and arities, parameter modes
    /// compared contravariantly (`self <= other` iff every mode in
    /// `self` is >= the corresponding mode in `other`).
    pub fn le(&self, other: &ModeSignature) -> Result<bool, DomainMismatch> {
        if !self.entries.keys().eq(other.entries.keys()) {
            return Err(DomainMismatch(
                "signatures mention different constructors".to_string(),
            ));
        }
        for (name, e1) in self.iter() {
            let e2 = &other.entries[name];
            if e1.arity() != e2.arity() {
                return Err(DomainMismatch(format!(
                    "constructor {name} has arity {} on one side and {} on the other",
                    e1.arity(),
                    e2.arity()
                )));
            }
            for (m1, m2) in e1.modes().zip(e2.modes()) {
                if m1 < m2 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl FromIterator<(String, SignatureEntry)> for ModeSignature {
    fn from_iter<T: IntoIterator<Item = (String, SignatureEntry)>>(iter: T) -> Self {
        ModeSignature {
            entries: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for ModeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, e)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{n}{e}")?;
        }
        Ok(())
    }
}
