//! Second-order λ-calculus over user-declared sorts, with polymorphic logical
//! constants and lexical coercions.
//!
//! Both term and type variables are de Bruijn indices, in separate index
//! spaces: `Bound(i)` counts enclosing λs only and `FType::Var(i)` counts
//! enclosing type binders (Λ in terms, ∀ in types) only.

mod formula;
mod lexicon;
mod parse;
mod pipeline;
mod reduce;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::syntax::fresh_name;

pub use formula::f_term_to_formula;
pub use lexicon::{load_flexicon, Coercion, CoercionTable, Compatibility, FLexicon, FLexiconError};
pub use parse::{parse_fterm, parse_ftype, FElabError, FSignature};
pub use pipeline::{
    copredicate, fictive_motion, polymorphic_and, raise, resolve_application, FictiveTrace, PipelineError, Resolution,
};
pub use reduce::FStrategy;

/// Binder name kept for printing only; all hints compare equal.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl From<&str> for Hint {
    fn from(s: &str) -> Self {
        Hint(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FType {
    /// A sort such as `voie` or `hum`, or one of `e`, `t`, `v`.
    Base(String),
    /// Type variable as a de Bruijn index.
    Var(usize),
    Arrow(Box<FType>, Box<FType>),
    Forall(Hint, Box<FType>),
}

impl FType {
    pub fn base(name: impl Into<String>) -> FType {
        FType::Base(name.into())
    }

    pub fn t() -> FType {
        FType::base("t")
    }

    pub fn v() -> FType {
        FType::base("v")
    }

    /// `v → t`
    pub fn tt() -> FType {
        FType::arrow(FType::v(), FType::t())
    }

    pub fn arrow(from: FType, to: FType) -> FType {
        FType::Arrow(Box::new(from), Box::new(to))
    }

    /// `∀hint. body`, where `body` refers to the new variable as `Var(0)`.
    pub fn forall(hint: &str, body: FType) -> FType {
        FType::Forall(hint.into(), Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            FType::Arrow(a, b) => 1 + a.size() + b.size(),
            FType::Forall(_, b) => 1 + b.size(),
            _ => 1,
        }
    }

    /// Shifts variables `>= cutoff` by `d`.
    pub fn shift(&self, d: isize, cutoff: usize) -> FType {
        match self {
            FType::Var(i) if *i >= cutoff => FType::Var((*i as isize + d) as usize),
            FType::Arrow(a, b) => FType::arrow(a.shift(d, cutoff), b.shift(d, cutoff)),
            FType::Forall(h, b) => FType::Forall(h.clone(), Box::new(b.shift(d, cutoff + 1))),
            other => other.clone(),
        }
    }

    /// Replaces variable `k` by `u` (given outside all binders of `self`) and
    /// lowers the variables above `k`.
    pub fn instantiate(&self, k: usize, u: &FType) -> FType {
        match self {
            FType::Var(i) if *i == k => u.shift(k as isize, 0),
            FType::Var(i) if *i > k => FType::Var(i - 1),
            FType::Arrow(a, b) => FType::arrow(a.instantiate(k, u), b.instantiate(k, u)),
            FType::Forall(h, b) => FType::Forall(h.clone(), Box::new(b.instantiate(k + 1, u))),
            other => other.clone(),
        }
    }

    /// `self` is `∀α. T` and the result is `T[u/α]`.
    pub fn specialize(&self, u: &FType) -> Option<FType> {
        match self {
            FType::Forall(_, body) => Some(body.instantiate(0, u)),
            _ => None,
        }
    }

    /// Whether variable `k` occurs free.
    pub fn mentions(&self, k: usize) -> bool {
        match self {
            FType::Var(i) => *i == k,
            FType::Arrow(a, b) => a.mentions(k) || b.mentions(k),
            FType::Forall(_, b) => b.mentions(k + 1),
            FType::Base(_) => false,
        }
    }

    /// Whether every variable is bound within `depth` enclosing binders.
    pub fn is_closed_at(&self, depth: usize) -> bool {
        match self {
            FType::Var(i) => *i < depth,
            FType::Arrow(a, b) => a.is_closed_at(depth) && b.is_closed_at(depth),
            FType::Forall(_, b) => b.is_closed_at(depth + 1),
            FType::Base(_) => true,
        }
    }

    fn bases<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            FType::Base(b) => {
                out.insert(b);
            }
            FType::Arrow(a, b) => {
                a.bases(out);
                b.bases(out);
            }
            FType::Forall(_, b) => b.bases(out),
            FType::Var(_) => {}
        }
    }

    fn fmt_in(
        &self,
        names: &mut Vec<String>,
        avoid: &BTreeSet<&str>,
        prec: u8,
        f: &mut fmt::Formatter<'_>,
    ) -> fmt::Result {
        match self {
            FType::Base(b) => f.write_str(b),
            FType::Var(i) => match names.len().checked_sub(i + 1) {
                Some(k) => f.write_str(&names[k]),
                None => write!(f, "#{i}"),
            },
            FType::Arrow(a, b) => {
                if prec >= 1 {
                    f.write_str("(")?;
                }
                a.fmt_in(names, avoid, 1, f)?;
                f.write_str(" -> ")?;
                b.fmt_in(names, avoid, 0, f)?;
                if prec >= 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            FType::Forall(h, body) => {
                let name = fresh_name(&h.0, |n| avoid.contains(n) || names.iter().any(|m| m == n));
                if prec >= 1 {
                    f.write_str("(")?;
                }
                write!(f, "forall {name}. ")?;
                names.push(name);
                let r = body.fmt_in(names, avoid, 0, f);
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

impl fmt::Display for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = BTreeSet::new();
        self.bases(&mut avoid);
        self.fmt_in(&mut Vec::new(), &avoid, 0, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FTerm {
    /// Free variable with its type.
    Var(String, FType),
    /// Bound term variable as a de Bruijn index.
    Bound(usize),
    Const(String, FType),
    App(Box<FTerm>, Box<FTerm>),
    Abs(Hint, FType, Box<FTerm>),
    /// `t{U}`
    TyApp(Box<FTerm>, FType),
    /// `Λα. t`
    TyAbs(Hint, Box<FTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FTypeError {
    #[error("type mismatch in `{term}`: function expects {expected}, argument has type {found}")]
    Mismatch { term: String, expected: FType, found: FType },
    #[error("`{term}` has type {ty} and cannot be applied")]
    NotAFunction { term: String, ty: FType },
    #[error("`{term}` has type {ty} and cannot be specialized")]
    NotPolymorphic { term: String, ty: FType },
    #[error("type abstraction over a variable that occurs in the type {ty} of free variable `{var}`")]
    SideCondition { var: String, ty: FType },
    #[error("dangling bound index {0}")]
    DanglingIndex(usize),
    #[error("type {0} mentions an unbound type variable")]
    UnboundTypeVar(String),
}

impl FTerm {
    pub fn var(name: impl Into<String>, ty: FType) -> FTerm {
        FTerm::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: FType) -> FTerm {
        FTerm::Const(name.into(), ty)
    }

    pub fn app(f: FTerm, a: FTerm) -> FTerm {
        FTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apply(f: FTerm, args: impl IntoIterator<Item = FTerm>) -> FTerm {
        args.into_iter().fold(f, FTerm::app)
    }

    pub fn ty_app(t: FTerm, u: FType) -> FTerm {
        FTerm::TyApp(Box::new(t), u)
    }

    /// `λx:ty. body`, binding the free variable `x` of type `ty`.
    pub fn lam(x: &str, ty: FType, body: FTerm) -> FTerm {
        FTerm::Abs(x.into(), ty.clone(), Box::new(body.close(x, &ty, 0)))
    }

    fn close(self, x: &str, ty: &FType, depth: usize) -> FTerm {
        match self {
            FTerm::Var(ref y, ref yty) if y == x && yty == ty => FTerm::Bound(depth),
            FTerm::App(f, a) => FTerm::app(f.close(x, ty, depth), a.close(x, ty, depth)),
            FTerm::Abs(h, t, body) => FTerm::Abs(h, t, Box::new(body.close(x, ty, depth + 1))),
            FTerm::TyApp(t, u) => FTerm::TyApp(Box::new(t.close(x, ty, depth)), u),
            // the variable's type moves under the type binder
            FTerm::TyAbs(h, body) => FTerm::TyAbs(h, Box::new(body.close(x, &ty.shift(1, 0), depth))),
            other => other,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FTerm::App(f, a) => 1 + f.size() + a.size(),
            FTerm::Abs(_, _, b) | FTerm::TyAbs(_, b) => 1 + b.size(),
            FTerm::TyApp(t, _) => 1 + t.size(),
            _ => 1,
        }
    }

    pub fn alpha_eq(&self, other: &FTerm) -> bool {
        self == other
    }

    pub fn type_of(&self) -> Result<FType, FTypeError> {
        self.type_in(&mut Vec::new(), 0)
    }

    /// `ctx` holds the types of enclosing λs with the type depth at which each
    /// was bound; `tdepth` is the number of enclosing type binders.
    pub(crate) fn type_in(&self, ctx: &mut Vec<(FType, usize)>, tdepth: usize) -> Result<FType, FTypeError> {
        let scoped = |ty: &FType| {
            if ty.is_closed_at(tdepth) {
                Ok(())
            } else {
                Err(FTypeError::UnboundTypeVar(ty.to_string()))
            }
        };
        match self {
            FTerm::Var(_, ty) => scoped(ty).map(|_| ty.clone()),
            FTerm::Const(_, ty) => scoped(ty).map(|_| ty.clone()),
            FTerm::Bound(i) => {
                let k = ctx.len().checked_sub(i + 1).ok_or(FTypeError::DanglingIndex(*i))?;
                let (ty, d) = &ctx[k];
                Ok(ty.shift((tdepth - d) as isize, 0))
            }
            FTerm::App(f, a) => {
                let fty = f.type_in(ctx, tdepth)?;
                let aty = a.type_in(ctx, tdepth)?;
                match fty {
                    FType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                    FType::Arrow(dom, _) => {
                        Err(FTypeError::Mismatch { term: self.to_string(), expected: *dom, found: aty })
                    }
                    ty => Err(FTypeError::NotAFunction { term: f.to_string(), ty }),
                }
            }
            FTerm::Abs(_, ty, body) => {
                scoped(ty)?;
                ctx.push((ty.clone(), tdepth));
                let r = body.type_in(ctx, tdepth);
                ctx.pop();
                Ok(FType::arrow(ty.clone(), r?))
            }
            FTerm::TyApp(t, u) => {
                scoped(u)?;
                let ty = t.type_in(ctx, tdepth)?;
                ty.specialize(u).ok_or_else(|| FTypeError::NotPolymorphic { term: t.to_string(), ty })
            }
            FTerm::TyAbs(h, body) => {
                if let Some((var, ty)) = body.free_var_mentioning(0) {
                    return Err(FTypeError::SideCondition { var, ty: FType::Forall(h.clone(), Box::new(ty)) });
                }
                let r = body.type_in(ctx, tdepth + 1)?;
                Ok(FType::Forall(h.clone(), Box::new(r)))
            }
        }
    }

    /// A free variable whose type mentions type variable `k`.
    fn free_var_mentioning(&self, k: usize) -> Option<(String, FType)> {
        match self {
            FTerm::Var(x, ty) if ty.mentions(k) => Some((x.clone(), ty.clone())),
            FTerm::App(f, a) => f.free_var_mentioning(k).or_else(|| a.free_var_mentioning(k)),
            FTerm::Abs(_, _, b) | FTerm::TyApp(b, _) => b.free_var_mentioning(k),
            FTerm::TyAbs(_, b) => b.free_var_mentioning(k + 1),
            _ => None,
        }
    }

    /// Splits `h a1 ... an` into the head and its term arguments.
    pub fn spine(&self) -> (&FTerm, Vec<&FTerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let FTerm::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    fn collect_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            FTerm::Var(x, ty) | FTerm::Const(x, ty) => {
                out.insert(x);
                ty.bases(out);
            }
            FTerm::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
            FTerm::Abs(_, ty, b) => {
                ty.bases(out);
                b.collect_names(out);
            }
            FTerm::TyApp(t, u) => {
                t.collect_names(out);
                u.bases(out);
            }
            FTerm::TyAbs(_, b) => b.collect_names(out),
            FTerm::Bound(_) => {}
        }
    }

    /// Every global name the term mentions, sorts included.
    pub fn global_names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn fmt_in(&self, p: &mut Printer<'_>, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = |f: &mut fmt::Formatter<'_>, on: bool| if on { f.write_str("(") } else { Ok(()) };
        let close = |f: &mut fmt::Formatter<'_>, on: bool| if on { f.write_str(")") } else { Ok(()) };
        match self {
            FTerm::Var(x, _) | FTerm::Const(x, _) => f.write_str(x),
            FTerm::Bound(i) => match p.names.len().checked_sub(i + 1) {
                Some(k) => f.write_str(&p.names[k]),
                None => write!(f, "#{i}"),
            },
            FTerm::App(a, b) => {
                open(f, prec >= 2)?;
                a.fmt_in(p, 1, f)?;
                f.write_str(" ")?;
                b.fmt_in(p, 2, f)?;
                close(f, prec >= 2)
            }
            FTerm::TyApp(t, u) => {
                t.fmt_in(p, 2, f)?;
                f.write_str("{")?;
                u.fmt_in(&mut p.tnames, p.globals, 0, f)?;
                f.write_str("}")
            }
            FTerm::Abs(h, ty, body) => {
                let name = p.fresh(&h.0);
                open(f, prec >= 1)?;
                write!(f, "λ{name}:")?;
                ty.fmt_in(&mut p.tnames, p.globals, 0, f)?;
                f.write_str(". ")?;
                p.names.push(name);
                let r = body.fmt_in(p, 0, f);
                p.names.pop();
                r?;
                close(f, prec >= 1)
            }
            FTerm::TyAbs(h, body) => {
                let name = p.fresh(&h.0);
                open(f, prec >= 1)?;
                write!(f, "Λ{name}. ")?;
                p.tnames.push(name);
                let r = body.fmt_in(p, 0, f);
                p.tnames.pop();
                r?;
                close(f, prec >= 1)
            }
        }
    }
}

struct Printer<'a> {
    names: Vec<String>,
    tnames: Vec<String>,
    globals: &'a BTreeSet<&'a str>,
}

impl Printer<'_> {
    /// Term and type binders share one pool of names so the output reparses.
    fn fresh(&self, hint: &str) -> String {
        let hint = if hint.is_empty() { "x" } else { hint };
        fresh_name(hint, |n| {
            self.globals.contains(n) || self.names.iter().chain(&self.tnames).any(|m| m == n) || is_reserved(n)
        })
    }
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "forall" | "tt")
}

impl fmt::Display for FTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let globals = self.global_names();
        let mut p = Printer { names: Vec::new(), tnames: Vec::new(), globals: &globals };
        self.fmt_in(&mut p, 0, f)
    }
}
