use thiserror::Error;

use super::reduce::{open_body, shift_term};
use super::{
    f_term_to_formula, parse_fterm, Coercion, Compatibility, FLexicon, FSignature, FStrategy, FTerm, FType, FTypeError,
};
use crate::montague::{Formula, FormulaError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error(transparent)]
    Type(#[from] FTypeError),
    #[error("`{word}` has type {ty}, which is not a predicate type")]
    NotAPredicate { word: String, ty: FType },
    #[error("no coercion of `{word}` from {from} to {to}")]
    MissingCoercion { word: String, from: FType, to: FType },
    #[error("coercions `{first}` and `{second}` of `{word}` are mutually exclusive")]
    ExclusivityConflict { word: String, first: String, second: String },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// How an argument was fitted to the function's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolution {
    Direct,
    /// The argument was replaced by its type-raised form.
    Raised {
        raised: FTerm,
    },
    Coerced {
        coercion: Coercion,
    },
}

/// Type raising of `u : σ` into `λP:σ → tt. λe:v. P u e : (σ → tt) → tt`.
pub fn raise(u: &FTerm, sigma: &FType) -> FTerm {
    let body = FTerm::apply(FTerm::Bound(1), [shift_term(u, 2), FTerm::Bound(0)]);
    FTerm::Abs(
        "P".into(),
        FType::arrow(sigma.clone(), FType::tt()),
        Box::new(FTerm::Abs("e".into(), FType::v(), Box::new(body))),
    )
}

fn raised_type(sigma: &FType) -> FType {
    FType::arrow(FType::arrow(sigma.clone(), FType::tt()), FType::tt())
}

/// Applies `f` to `a`, bridging a type mismatch with at most one coercion:
/// a lexical coercion of one of `words`, or type raising.
pub fn resolve_application(
    f: &FTerm,
    a: &FTerm,
    lexicon: &FLexicon,
    words: &[&str],
) -> Result<(FTerm, Resolution), PipelineError> {
    let fty = f.type_of()?;
    let aty = a.type_of()?;
    let dom = match &fty {
        FType::Arrow(dom, _) => (**dom).clone(),
        _ => return Err(FTypeError::NotAFunction { term: f.to_string(), ty: fty }.into()),
    };
    if dom == aty {
        return Ok((FTerm::app(f.clone(), a.clone()), Resolution::Direct));
    }
    if let Some(c) = lexicon.coercions.find(words, &aty, &dom).first() {
        let coerced = FTerm::app(c.term.clone(), a.clone());
        return Ok((FTerm::app(f.clone(), coerced), Resolution::Coerced { coercion: (*c).clone() }));
    }
    if dom == raised_type(&aty) {
        let raised = raise(a, &aty);
        return Ok((FTerm::app(f.clone(), raised.clone()), Resolution::Raised { raised }));
    }
    Err(PipelineError::MissingCoercion { word: words.first().unwrap_or(&"").to_string(), from: aty, to: dom })
}

/// `Λα Λβ λP:α→t λQ:β→t Λξ λx:ξ λf:ξ→α λg:ξ→β. and (P (f x)) (Q (g x))`
pub fn polymorphic_and() -> FTerm {
    parse_fterm(
        "Λa. Λb. λP:a -> t. λQ:b -> t. Λξ. λx:ξ. λf:ξ -> a. λg:ξ -> b. and (P (f x)) (Q (g x))",
        &FSignature::builtin(),
    )
    .expect("well-typed")
}

fn lookup<'a>(lexicon: &'a FLexicon, word: &str) -> Result<(&'a FTerm, &'a FType), PipelineError> {
    lexicon.word(word).ok_or_else(|| PipelineError::UnknownWord(word.to_string()))
}

fn predicate_domain(word: &str, ty: &FType) -> Result<FType, PipelineError> {
    match ty {
        FType::Arrow(dom, cod) if **cod == FType::t() => Ok((**dom).clone()),
        _ => Err(PipelineError::NotAPredicate { word: word.to_string(), ty: ty.clone() }),
    }
}

/// Conjoins two predicates on possibly different facets of the same object:
/// one formula per admissible choice of coercions. An identity stands in
/// when a predicate applies to the object's own sort.
pub fn copredicate(
    x_word: &str,
    p_word: &str,
    q_word: &str,
    lexicon: &FLexicon,
) -> Result<Vec<Formula>, PipelineError> {
    let (x, xi) = lookup(lexicon, x_word)?;
    let (p, pty) = lookup(lexicon, p_word)?;
    let (q, qty) = lookup(lexicon, q_word)?;
    let alpha = predicate_domain(p_word, pty)?;
    let beta = predicate_domain(q_word, qty)?;
    let words = [x_word, p_word, q_word];

    let candidates = |target: &FType| -> Result<Vec<Option<&Coercion>>, PipelineError> {
        let mut out: Vec<Option<&Coercion>> = Vec::new();
        if target == xi {
            out.push(None);
        }
        out.extend(lexicon.coercions.find(&words, xi, target).into_iter().map(Some));
        if out.is_empty() {
            return Err(PipelineError::MissingCoercion {
                word: x_word.to_string(),
                from: xi.clone(),
                to: target.clone(),
            });
        }
        Ok(out)
    };
    let fs = candidates(&alpha)?;
    let gs = candidates(&beta)?;

    let identity = FTerm::Abs("z".into(), xi.clone(), Box::new(FTerm::Bound(0)));
    let and = polymorphic_and();
    let mut out: Vec<Formula> = Vec::new();
    let mut conflict = None;
    for f in &fs {
        for g in &gs {
            if let (Some(c1), Some(c2)) = (f, g) {
                let exclusive =
                    c1.compatibility == Compatibility::Exclusive && c2.compatibility == Compatibility::Exclusive;
                if exclusive && c1.term != c2.term {
                    conflict.get_or_insert((c1.term.to_string(), c2.term.to_string()));
                    continue;
                }
            }
            let coercion = |c: &Option<&Coercion>| c.map_or_else(|| identity.clone(), |c| c.term.clone());
            let inst = FTerm::ty_app(FTerm::ty_app(and.clone(), alpha.clone()), beta.clone());
            let inst = FTerm::apply(inst, [p.clone(), q.clone()]);
            let term = FTerm::apply(FTerm::ty_app(inst, xi.clone()), [x.clone(), coercion(f), coercion(g)]);
            let ty = term.type_of()?;
            debug_assert_eq!(ty, FType::t());
            let formula = f_term_to_formula(&term.normalize())?;
            if !out.contains(&formula) {
                out.push(formula);
            }
        }
    }
    match (out.is_empty(), conflict) {
        (true, Some((first, second))) => {
            Err(PipelineError::ExclusivityConflict { word: x_word.to_string(), first, second })
        }
        _ => Ok(out),
    }
}

/// Every stage of the analysis of "le chemin monte".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FictiveTrace {
    /// `le{σ} chemin`
    pub applied: FTerm,
    /// After the type-level β-step.
    pub after_type_beta: FTerm,
    /// Normal form of `le chemin`.
    pub le_chemin: FTerm,
    /// Type-raised `le chemin`.
    pub raised: FTerm,
    /// `h` applied to the raised term.
    pub h_applied: FTerm,
    pub h_normal: FTerm,
    /// `(h (le chemin)) monte` before reduction.
    pub composed: FTerm,
    pub composed_type: FType,
    pub result: FTerm,
    /// The result's body read as a formula over a free event `e`.
    pub formula: Formula,
    /// Coercions inserted along the way.
    pub log: Vec<String>,
}

/// Composes `((h (le chemin)) monte)` from the lexicon entries, raising
/// `le chemin` where `h` expects a raised path.
pub fn fictive_motion(lexicon: &FLexicon) -> Result<FictiveTrace, PipelineError> {
    let (le, le_ty) = lookup(lexicon, "le")?;
    let (chemin, chemin_ty) = lookup(lexicon, "chemin")?;
    let (h, _) = lookup(lexicon, "h")?;
    let (monte, _) = lookup(lexicon, "monte")?;
    let mut log = Vec::new();

    let sigma = predicate_domain("chemin", chemin_ty)?;
    if !matches!(le_ty, FType::Forall(..)) {
        return Err(FTypeError::NotPolymorphic { term: le.to_string(), ty: le_ty.clone() }.into());
    }
    let applied = FTerm::app(FTerm::ty_app(le.clone(), sigma.clone()), chemin.clone());
    applied.type_of()?;
    let after_type_beta = applied.step(FStrategy::TypeRedexesFirst).unwrap_or_else(|| applied.clone());
    let le_chemin = applied.normalize();

    let (h_applied, resolution) = resolve_application(h, &le_chemin, lexicon, &["le", "chemin", "h"])?;
    let raised = match resolution {
        Resolution::Raised { raised } => {
            log.push(format!("type raising: {sigma} => ({sigma} -> tt) -> tt"));
            raised
        }
        Resolution::Coerced { coercion } => {
            log.push(format!("coercion {} : {}", coercion.term, coercion.ty));
            FTerm::app(coercion.term, le_chemin.clone())
        }
        Resolution::Direct => le_chemin.clone(),
    };
    let h_normal = h_applied.normalize();

    let (composed, resolution) = resolve_application(&h_applied, monte, lexicon, &["monte"])?;
    if resolution != Resolution::Direct {
        log.push(format!("{resolution:?} on monte"));
    }
    let composed_type = composed.type_of()?;
    let result = composed.normalize();
    if result.type_of()? != composed_type {
        return Err(FTypeError::Mismatch {
            term: result.to_string(),
            expected: composed_type,
            found: result.type_of()?,
        }
        .into());
    }
    let formula = match &result {
        FTerm::Abs(h, ty, body) => f_term_to_formula(&open_body(body, &FTerm::var(h.0.clone(), ty.clone())))?,
        other => f_term_to_formula(other)?,
    };
    Ok(FictiveTrace {
        applied,
        after_type_beta,
        le_chemin,
        raised,
        h_applied,
        h_normal,
        composed,
        composed_type,
        result,
        formula,
        log,
    })
}
