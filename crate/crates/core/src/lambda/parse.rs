//! Resolution of surface syntax into [`Term`]s, with inference of the types
//! of undeclared constants.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Binder, SemType, Signature, Term};
use crate::syntax::{parse_raw_term, parse_raw_type, RawTerm, RawType, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElabError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("type abstraction and polymorphic types need System F")]
    SecondOrder,
    #[error("cannot infer a type for constant `{0}`")]
    Underdetermined(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("expected type {expected}, found {found}")]
    Mismatch { expected: SemType, found: SemType },
}

fn resolve_type(raw: &RawType) -> Result<SemType, ElabError> {
    match raw {
        RawType::Name(n, _) => match n.as_str() {
            "e" => Ok(SemType::E),
            "t" => Ok(SemType::T),
            "v" => Ok(SemType::V),
            "tt" => Ok(SemType::tt()),
            other => Err(ElabError::UnknownType(other.to_string())),
        },
        RawType::Arrow(a, b) => Ok(SemType::arrow(resolve_type(a)?, resolve_type(b)?)),
        RawType::Forall(..) => Err(ElabError::SecondOrder),
    }
}

pub fn parse_type(text: &str) -> Result<SemType, ElabError> {
    resolve_type(&parse_raw_type(text)?)
}

/// Parses a closed term whose constants are all declared in `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ElabError> {
    let raw = parse_raw_term(text)?;
    resolve(&raw, sig, &mut Vec::new())
}

fn resolve(raw: &RawTerm, sig: &Signature, scope: &mut Vec<String>) -> Result<Term, ElabError> {
    match raw {
        RawTerm::Name(n, _) => {
            if let Some(k) = scope.iter().rev().position(|s| s == n) {
                Ok(Term::Bound(k))
            } else {
                sig.constant(n).ok_or_else(|| ElabError::UnknownConstant(n.clone()))
            }
        }
        RawTerm::App(f, a) => Ok(Term::app(resolve(f, sig, scope)?, resolve(a, sig, scope)?)),
        RawTerm::Lam(x, ty, body) => {
            let ty = resolve_type(ty)?;
            scope.push(x.clone());
            let body = resolve(body, sig, scope);
            scope.pop();
            Ok(Term::Abs(Binder { hint: x.clone(), ty }, Box::new(body?)))
        }
        RawTerm::TyLam(..) | RawTerm::TyApp(..) => Err(ElabError::SecondOrder),
    }
}

/// Types with unification variables.
#[derive(Clone, Debug, PartialEq)]
enum MType {
    Known(SemType),
    Meta(usize),
    Arrow(Box<MType>, Box<MType>),
}

#[derive(Default)]
struct Unifier {
    solution: Vec<Option<MType>>,
}

impl Unifier {
    fn fresh(&mut self) -> MType {
        self.solution.push(None);
        MType::Meta(self.solution.len() - 1)
    }

    fn walk(&self, t: &MType) -> MType {
        match t {
            MType::Meta(m) => match &self.solution[*m] {
                Some(s) => self.walk(s),
                None => t.clone(),
            },
            MType::Known(SemType::Arrow(a, b)) => {
                MType::Arrow(Box::new(MType::Known((**a).clone())), Box::new(MType::Known((**b).clone())))
            }
            other => other.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &MType) -> bool {
        match self.walk(t) {
            MType::Meta(n) => n == m,
            MType::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            MType::Known(_) => false,
        }
    }

    fn unify(&mut self, a: &MType, b: &MType) -> bool {
        match (self.walk(a), self.walk(b)) {
            (MType::Meta(m), MType::Meta(n)) if m == n => true,
            (MType::Meta(m), other) | (other, MType::Meta(m)) => {
                if self.occurs(m, &other) {
                    return false;
                }
                self.solution[m] = Some(other);
                true
            }
            (MType::Arrow(a1, b1), MType::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            (MType::Known(x), MType::Known(y)) => x == y,
            _ => false,
        }
    }

    fn zonk(&self, t: &MType) -> Option<SemType> {
        match self.walk(t) {
            MType::Known(k) => Some(k),
            MType::Arrow(a, b) => Some(SemType::arrow(self.zonk(&a)?, self.zonk(&b)?)),
            MType::Meta(_) => None,
        }
    }

    fn show(&self, t: &MType) -> String {
        match self.walk(t) {
            MType::Known(k) => k.to_string(),
            MType::Meta(m) => format!("?{m}"),
            MType::Arrow(a, b) => {
                let left = self.show(&a);
                if matches!(self.walk(&a), MType::Arrow(..)) {
                    format!("({left}) -> {}", self.show(&b))
                } else {
                    format!("{left} -> {}", self.show(&b))
                }
            }
        }
    }
}

struct Infer<'a> {
    sig: &'a Signature,
    unknown: BTreeMap<String, MType>,
    unifier: Unifier,
}

impl Infer<'_> {
    fn infer(&mut self, raw: &RawTerm, scope: &mut Vec<(String, SemType)>) -> Result<MType, ElabError> {
        match raw {
            RawTerm::Name(n, _) => {
                if let Some((_, ty)) = scope.iter().rev().find(|(s, _)| s == n) {
                    return Ok(MType::Known(ty.clone()));
                }
                if let Some(ty) = self.sig.get(n) {
                    return Ok(MType::Known(ty.clone()));
                }
                if let Some(m) = self.unknown.get(n) {
                    return Ok(m.clone());
                }
                let m = self.unifier.fresh();
                self.unknown.insert(n.clone(), m.clone());
                Ok(m)
            }
            RawTerm::App(f, a) => {
                let fty = self.infer(f, scope)?;
                let aty = self.infer(a, scope)?;
                let result = self.unifier.fresh();
                let want = MType::Arrow(Box::new(aty.clone()), Box::new(result.clone()));
                if !self.unifier.unify(&fty, &want) {
                    return Err(ElabError::IllTyped(format!(
                        "function of type {} applied to an argument of type {}",
                        self.unifier.show(&fty),
                        self.unifier.show(&aty)
                    )));
                }
                Ok(result)
            }
            RawTerm::Lam(x, ty, body) => {
                let ty = resolve_type(ty)?;
                scope.push((x.clone(), ty.clone()));
                let body = self.infer(body, scope);
                scope.pop();
                Ok(MType::Arrow(Box::new(MType::Known(ty)), Box::new(body?)))
            }
            RawTerm::TyLam(..) | RawTerm::TyApp(..) => Err(ElabError::SecondOrder),
        }
    }
}

/// Parses a closed term, inferring the types of constants missing from
/// `sig`. When `expected` is given the term must have that type; it also
/// helps pin down inferred constants. Returns the term and the types inferred
/// for previously unknown constants.
pub fn elaborate_term(
    text: &str,
    sig: &Signature,
    expected: Option<&SemType>,
) -> Result<(Term, BTreeMap<String, SemType>), ElabError> {
    let raw = parse_raw_term(text)?;
    let mut inf = Infer { sig, unknown: BTreeMap::new(), unifier: Unifier::default() };
    let ty = inf.infer(&raw, &mut Vec::new())?;

    if let Some(expected) = expected {
        if let Some(found) = inf.unifier.zonk(&ty) {
            if found != *expected {
                return Err(ElabError::Mismatch { expected: expected.clone(), found });
            }
        } else if !inf.unifier.unify(&ty, &MType::Known(expected.clone())) {
            return Err(ElabError::IllTyped(format!("expected type {expected}, found {}", inf.unifier.show(&ty))));
        }
    }

    let mut extended = sig.clone();
    let mut inferred = BTreeMap::new();
    for (name, m) in &inf.unknown {
        let ty = inf.unifier.zonk(m).ok_or_else(|| ElabError::Underdetermined(name.clone()))?;
        extended.declare(name.clone(), ty.clone()).expect("fresh constant");
        inferred.insert(name.clone(), ty);
    }
    let term = resolve(&raw, &extended, &mut Vec::new())?;
    Ok((term, inferred))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::Var;

    #[test]
    fn types() {
        assert_eq!(
            parse_type("e -> e -> t").unwrap(),
            SemType::arrow(SemType::E, SemType::arrow(SemType::E, SemType::T))
        );
        assert_eq!(parse_type("(e -> t) -> t").unwrap().to_string(), "(e -> t) -> t");
        assert_eq!(parse_type("tt").unwrap(), SemType::tt());
        assert!(matches!(parse_type("voie"), Err(ElabError::UnknownType(_))));
        assert!(matches!(parse_type("forall a. a"), Err(ElabError::SecondOrder)));
    }

    #[test]
    fn resolves_against_the_signature() {
        let mut sig = Signature::logical();
        sig.declare("statement", parse_type("e -> t").unwrap()).unwrap();
        let t = parse_term("\\x:e. statement x", &sig).unwrap();
        let x = Var::new("x", SemType::E);
        let expected = Term::lam(&x, Term::app(sig.constant("statement").unwrap(), Term::Var(x.clone())));
        assert_eq!(t, expected);
        assert!(matches!(parse_term("\\x:e. dort x", &sig), Err(ElabError::UnknownConstant(_))));
    }

    #[test]
    fn round_trips_through_display() {
        let mut sig = Signature::logical();
        sig.declare("statement", parse_type("e -> t").unwrap()).unwrap();
        let src = "λP:e -> t. λQ:e -> t. exists (λx:e. and (P x) (Q x))";
        let t = parse_term(src, &sig).unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
        let sym = parse_term("λP:e->t. λQ:e->t. ∃ (λx:e. ∧ (P x) (Q x))", &sig).unwrap();
        assert_eq!(sym, t);
    }

    #[test]
    fn infers_undeclared_constants() {
        let sig = Signature::logical();
        let want = parse_type("e -> e -> t").unwrap();
        let (term, inferred) = elaborate_term("\\x:e.\\y:e.((aime y) x)", &sig, Some(&want)).unwrap();
        assert_eq!(inferred["aime"], want);
        assert_eq!(term.type_of().unwrap(), want);
    }

    #[test]
    fn expected_type_pins_down_constants() {
        let sig = Signature::logical();
        let want = parse_type("(e -> t) -> t").unwrap();
        let (_, inferred) = elaborate_term("\\P:e -> t. P garance", &sig, Some(&want)).unwrap();
        assert_eq!(inferred["garance"], SemType::E);
        // a constant that only ever appears as an argument of another unknown
        assert!(matches!(elaborate_term("f c", &sig, None), Err(ElabError::Underdetermined(_))));
    }

    #[test]
    fn reports_mismatches_with_both_types() {
        let mut sig = Signature::logical();
        sig.declare("livre", SemType::E).unwrap();
        let want = parse_type("e -> t").unwrap();
        let err = elaborate_term("\\x:e. livre", &sig, Some(&want)).unwrap_err();
        assert_eq!(err, ElabError::Mismatch { expected: want, found: parse_type("e -> e").unwrap() });
        assert!(matches!(elaborate_term("and and", &sig, None), Err(ElabError::IllTyped(_))));
    }
}
