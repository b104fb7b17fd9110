use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{FTerm, FType, FTypeError};
use crate::syntax::{parse_raw_term, parse_raw_type, RawTerm, RawType, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FElabError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("constant `{name}` is already declared with type {old}")]
    Redeclared { name: String, old: FType },
    #[error("the type of a constant must be closed")]
    OpenType,
    #[error(transparent)]
    Type(#[from] FTypeError),
}

/// Sorts and typed constants available to System F terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSignature {
    sorts: BTreeSet<String>,
    constants: BTreeMap<String, FType>,
}

impl Default for FSignature {
    fn default() -> Self {
        FSignature::builtin()
    }
}

impl FSignature {
    /// Sorts `e`, `t`, `v`; connectives `and, or, implies : t → t → t`;
    /// quantifiers `forall, exists : ∀α. (α → t) → t`; the selection
    /// operator `tau : ∀α. (α → t) → α`.
    pub fn builtin() -> FSignature {
        let t = FType::t();
        let a = FType::Var(0);
        let connective = FType::arrow(t.clone(), FType::arrow(t.clone(), t.clone()));
        let quantifier = FType::forall("a", FType::arrow(FType::arrow(a.clone(), t.clone()), t.clone()));
        let tau = FType::forall("a", FType::arrow(FType::arrow(a.clone(), t), a));
        let mut constants = BTreeMap::new();
        for c in ["and", "or", "implies"] {
            constants.insert(c.to_string(), connective.clone());
        }
        for q in ["forall", "exists"] {
            constants.insert(q.to_string(), quantifier.clone());
        }
        constants.insert("tau".to_string(), tau);
        FSignature { sorts: ["e", "t", "v"].map(String::from).into(), constants }
    }

    pub fn declare_sort(&mut self, name: impl Into<String>) {
        self.sorts.insert(name.into());
    }

    pub fn is_sort(&self, name: &str) -> bool {
        self.sorts.contains(name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(String::as_str)
    }

    pub fn declare(&mut self, name: impl Into<String>, ty: FType) -> Result<(), FElabError> {
        let name = name.into();
        if !ty.is_closed_at(0) {
            return Err(FElabError::OpenType);
        }
        match self.constants.get(&name) {
            Some(old) if *old != ty => Err(FElabError::Redeclared { name, old: old.clone() }),
            _ => {
                self.constants.insert(name, ty);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&FType> {
        self.constants.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<FTerm> {
        self.get(name).map(|ty| FTerm::constant(name, ty.clone()))
    }
}

fn resolve_type(raw: &RawType, sig: &FSignature, scope: &mut Vec<String>) -> Result<FType, FElabError> {
    match raw {
        RawType::Name(n, _) => {
            if let Some(k) = scope.iter().rev().position(|s| s == n) {
                Ok(FType::Var(k))
            } else if n == "tt" {
                Ok(FType::tt())
            } else if sig.is_sort(n) {
                Ok(FType::base(n.clone()))
            } else {
                Err(FElabError::UnknownType(n.clone()))
            }
        }
        RawType::Arrow(a, b) => Ok(FType::arrow(resolve_type(a, sig, scope)?, resolve_type(b, sig, scope)?)),
        RawType::Forall(x, body) => {
            scope.push(x.clone());
            let body = resolve_type(body, sig, scope);
            scope.pop();
            Ok(FType::forall(x, body?))
        }
    }
}

/// Parses a closed type over the sorts of `sig`.
pub fn parse_ftype(text: &str, sig: &FSignature) -> Result<FType, FElabError> {
    resolve_type(&parse_raw_type(text)?, sig, &mut Vec::new())
}

/// Parses a closed term whose constants are declared in `sig`, and checks
/// that it is well typed.
pub fn parse_fterm(text: &str, sig: &FSignature) -> Result<FTerm, FElabError> {
    let raw = parse_raw_term(text)?;
    let term = resolve(&raw, sig, &mut Vec::new(), &mut Vec::new())?;
    term.type_of()?;
    Ok(term)
}

fn resolve(
    raw: &RawTerm,
    sig: &FSignature,
    scope: &mut Vec<String>,
    tscope: &mut Vec<String>,
) -> Result<FTerm, FElabError> {
    match raw {
        RawTerm::Name(n, _) => {
            if let Some(k) = scope.iter().rev().position(|s| s == n) {
                Ok(FTerm::Bound(k))
            } else {
                sig.constant(n).ok_or_else(|| FElabError::UnknownConstant(n.clone()))
            }
        }
        RawTerm::App(f, a) => Ok(FTerm::app(resolve(f, sig, scope, tscope)?, resolve(a, sig, scope, tscope)?)),
        RawTerm::Lam(x, ty, body) => {
            let ty = resolve_type(ty, sig, tscope)?;
            scope.push(x.clone());
            let body = resolve(body, sig, scope, tscope);
            scope.pop();
            Ok(FTerm::Abs(x.as_str().into(), ty, Box::new(body?)))
        }
        RawTerm::TyLam(a, body) => {
            tscope.push(a.clone());
            let body = resolve(body, sig, scope, tscope);
            tscope.pop();
            Ok(FTerm::TyAbs(a.as_str().into(), Box::new(body?)))
        }
        RawTerm::TyApp(t, u) => Ok(FTerm::ty_app(resolve(t, sig, scope, tscope)?, resolve_type(u, sig, tscope)?)),
    }
}
