//! Simply-typed λ-calculus over the base types `e` (entities), `t`
//! (propositions) and `v` (events), with typed constants.
//!
//! Terms are locally nameless: bound variables are de Bruijn indices and
//! binders only keep a name hint for printing, so structural equality is
//! α-equivalence and substitution never captures.

mod parse;
mod reduce;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub use parse::{elaborate_term, parse_term, parse_type, ElabError};
pub(crate) use reduce::shift;
pub use reduce::{BudgetExceeded, Strategy, DEFAULT_STEP_BUDGET};

use crate::syntax::fresh_name;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    E,
    T,
    V,
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(from: SemType, to: SemType) -> SemType {
        SemType::Arrow(Box::new(from), Box::new(to))
    }

    /// `v -> t`, propositions depending on an event.
    pub fn tt() -> SemType {
        SemType::arrow(SemType::V, SemType::T)
    }

    pub fn size(&self) -> usize {
        match self {
            SemType::Arrow(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::V => f.write_str("v"),
            SemType::Arrow(a, b) => {
                if matches!(**a, SemType::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// A named, typed free variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub ty: SemType,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: SemType) -> Var {
        Var { name: name.into(), ty }
    }
}

/// Binder annotation. The name is a printing hint only and takes no part in
/// equality or hashing.
#[derive(Clone, Debug)]
pub struct Binder {
    pub hint: String,
    pub ty: SemType,
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// Free variable.
    Var(Var),
    /// Bound variable as a de Bruijn index.
    Bound(usize),
    Const(String, SemType),
    App(Box<Term>, Box<Term>),
    Abs(Binder, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch in `{application}`: function expects {expected}, argument has type {found}")]
    Mismatch { application: String, expected: SemType, found: SemType },
    #[error("`{function}` has type {ty} and cannot be applied")]
    NotAFunction { function: String, ty: SemType },
    #[error("dangling bound index {0}")]
    DanglingIndex(usize),
    #[error("cannot substitute a term of type {found} for `{var}` of type {expected}")]
    Substitution { var: String, expected: SemType, found: SemType },
}

impl Term {
    pub fn var(name: impl Into<String>, ty: SemType) -> Term {
        Term::Var(Var::new(name, ty))
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// `f a1 a2 ...`
    pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `λx. body`, binding the free occurrences of `x` in `body`.
    pub fn lam(x: &Var, body: Term) -> Term {
        Term::Abs(Binder { hint: x.name.clone(), ty: x.ty.clone() }, Box::new(body.close(x, 0)))
    }

    fn close(self, x: &Var, depth: usize) -> Term {
        match self {
            Term::Var(ref y) if y == x => Term::Bound(depth),
            Term::App(f, a) => Term::app(f.close(x, depth), a.close(x, depth)),
            Term::Abs(b, body) => Term::Abs(b, Box::new(body.close(x, depth + 1))),
            other => other,
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
            _ => 1,
        }
    }

    pub fn type_of(&self) -> Result<SemType, TypeError> {
        self.type_in(&mut Vec::new())
    }

    pub(crate) fn type_in(&self, ctx: &mut Vec<SemType>) -> Result<SemType, TypeError> {
        match self {
            Term::Var(v) => Ok(v.ty.clone()),
            Term::Const(_, ty) => Ok(ty.clone()),
            Term::Bound(i) => ctx.len().checked_sub(i + 1).map(|k| ctx[k].clone()).ok_or(TypeError::DanglingIndex(*i)),
            Term::App(f, a) => {
                let fty = f.type_in(ctx)?;
                let aty = a.type_in(ctx)?;
                match fty {
                    SemType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                    SemType::Arrow(dom, _) => {
                        Err(TypeError::Mismatch { application: self.to_string(), expected: *dom, found: aty })
                    }
                    ty => Err(TypeError::NotAFunction { function: f.to_string(), ty }),
                }
            }
            Term::Abs(b, body) => {
                ctx.push(b.ty.clone());
                let r = body.type_in(ctx);
                ctx.pop();
                Ok(SemType::arrow(b.ty.clone(), r?))
            }
        }
    }

    /// Capture-avoiding `self[x := u]`.
    pub fn substitute(&self, x: &Var, u: &Term) -> Result<Term, TypeError> {
        let found = u.type_of()?;
        if found != x.ty {
            return Err(TypeError::Substitution { var: x.name.clone(), expected: x.ty.clone(), found });
        }
        Ok(reduce::replace_var(self, x, u, 0))
    }

    /// Leftmost-outermost β-normal form.
    pub fn beta_normalize(&self) -> Term {
        // Typed terms are strongly normalizing; the budget only matters for
        // ill-typed input.
        self.normalize_with(Strategy::LeftmostOutermost, usize::MAX).map(|(t, _)| t).unwrap_or_else(|e| e.partial)
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    pub fn free_vars(&self) -> BTreeSet<&Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let Term::Var(v) = t {
                out.insert(v);
            }
        });
        out
    }

    /// Names of free variables and constants.
    pub fn global_names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| match t {
            Term::Var(v) => {
                out.insert(v.name.as_str());
            }
            Term::Const(c, _) => {
                out.insert(c.as_str());
            }
            _ => {}
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::App(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Term::Abs(_, b) => b.walk(f),
            _ => {}
        }
    }

    /// Splits `h a1 ... an` into the head and its arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    fn fmt_in(
        &self,
        names: &mut Vec<String>,
        globals: &BTreeSet<&str>,
        prec: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Const(c, _) => f.write_str(c),
            Term::Bound(i) => match names.len().checked_sub(i + 1) {
                Some(k) => f.write_str(&names[k]),
                None => write!(f, "#{i}"),
            },
            Term::App(a, b) => {
                if prec >= 2 {
                    f.write_str("(")?;
                }
                a.fmt_in(names, globals, 1, f)?;
                f.write_str(" ")?;
                b.fmt_in(names, globals, 2, f)?;
                if prec >= 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Term::Abs(binder, body) => {
                let name = fresh_name(&binder.hint, |n| globals.contains(n) || names.iter().any(|m| m == n));
                if prec >= 1 {
                    f.write_str("(")?;
                }
                write!(f, "λ{name}:{}. ", binder.ty)?;
                names.push(name);
                let r = body.fmt_in(names, globals, 0, f);
                names.pop();
                r?;
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Binder names are regenerated so that no binder shadows another binder,
/// a free variable or a constant.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let globals = self.global_names();
        self.fmt_in(&mut Vec::new(), &globals, 0, f)
    }
}

/// Types of the constants a term may mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    constants: BTreeMap<String, SemType>,
}

pub const LOGICAL_CONSTANTS: [&str; 5] = ["and", "or", "implies", "exists", "forall"];

impl Default for Signature {
    fn default() -> Self {
        Signature::logical()
    }
}

impl Signature {
    pub fn empty() -> Signature {
        Signature { constants: BTreeMap::new() }
    }

    /// `and, or, implies : t → t → t` and `exists, forall : (e → t) → t`.
    pub fn logical() -> Signature {
        let connective = SemType::arrow(SemType::T, SemType::arrow(SemType::T, SemType::T));
        let quantifier = SemType::arrow(SemType::arrow(SemType::E, SemType::T), SemType::T);
        let mut sig = Signature::empty();
        for c in ["and", "or", "implies"] {
            sig.constants.insert(c.into(), connective.clone());
        }
        for q in ["exists", "forall"] {
            sig.constants.insert(q.into(), quantifier.clone());
        }
        sig
    }

    pub fn get(&self, name: &str) -> Option<&SemType> {
        self.constants.get(name)
    }

    /// Declares `name`; redeclaring at a different type is an error that
    /// returns the existing type.
    pub fn declare(&mut self, name: impl Into<String>, ty: SemType) -> Result<(), SemType> {
        let name = name.into();
        match self.constants.get(&name) {
            Some(old) if *old != ty => Err(old.clone()),
            _ => {
                self.constants.insert(name, ty);
                Ok(())
            }
        }
    }

    pub fn constant(&self, name: &str) -> Option<Term> {
        self.get(name).map(|ty| Term::constant(name, ty.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SemType)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }
}
