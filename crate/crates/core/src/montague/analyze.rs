use thiserror::Error;

use super::{cat_to_type, term_to_formula, AtomMap, Formula, FormulaError, Lexicon, LexiconEntry, UnmappedAtom};
use crate::category::Category;
use crate::lambda::{SemType, Term, TypeError, Var};
use crate::prover::{prove, Derivation, ProveError, Rule, SearchConfig, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("word `{0}` has no semantic term")]
    MissingSemantics(String),
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error(transparent)]
    UnmappedAtom(#[from] UnmappedAtom),
    #[error("composed term does not type-check: {0}")]
    Composition(#[from] TypeError),
    #[error("composed term has type {found}, goal category requires {expected}")]
    Alignment { expected: SemType, found: SemType },
    #[error("derivation does not match the words: {0}")]
    Malformed(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// A syntactic analysis: one category per word and a derivation of the goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parse {
    pub entries: Vec<LexiconEntry>,
    pub derivation: Derivation,
}

/// A semantic reading of a sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub entries: Vec<LexiconEntry>,
    pub derivation: Derivation,
    /// Lexical terms plugged into the derivation, before reduction.
    pub composed: Term,
    pub normal: Term,
    /// Present when the reading is a proposition.
    pub formula: Option<Formula>,
}

fn lookup<'a, W: AsRef<str>>(words: &[W], lexicon: &'a Lexicon) -> Result<Vec<&'a [LexiconEntry]>, AnalyzeError> {
    words
        .iter()
        .map(|w| {
            let entries = lexicon.entries(w.as_ref());
            if entries.is_empty() {
                Err(AnalyzeError::UnknownWord(w.as_ref().to_string()))
            } else {
                Ok(entries)
            }
        })
        .collect()
}

/// Every way of picking one entry per word, in lexicon order.
fn choices<'a>(options: &[&'a [LexiconEntry]]) -> Vec<Vec<&'a LexiconEntry>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}

/// All derivations of `goal` from the words' categories.
pub fn parse_sentence<W: AsRef<str>>(
    words: &[W],
    goal: &Category,
    lexicon: &Lexicon,
    cfg: &SearchConfig,
) -> Result<Vec<Parse>, AnalyzeError> {
    let options = lookup(words, lexicon)?;
    let mut out = Vec::new();
    for choice in choices(&options) {
        let sequent = Sequent::new(choice.iter().map(|e| e.category.clone()).collect(), goal.clone());
        for derivation in prove(&sequent, cfg)? {
            out.push(Parse { entries: choice.iter().map(|e| (*e).clone()).collect(), derivation });
        }
    }
    Ok(out)
}

/// Readings of a sentence as `S`.
pub fn analyze<W: AsRef<str>>(
    words: &[W],
    lexicon: &Lexicon,
    cfg: &SearchConfig,
) -> Result<Vec<Reading>, AnalyzeError> {
    analyze_goal(words, &Category::atom("S"), lexicon, cfg)
}

/// Readings of a word sequence as `goal`, deduplicated up to α-equivalence of
/// their normal forms and sorted by normal form. Each reading carries the
/// smallest derivation that produces it.
pub fn analyze_goal<W: AsRef<str>>(
    words: &[W],
    goal: &Category,
    lexicon: &Lexicon,
    cfg: &SearchConfig,
) -> Result<Vec<Reading>, AnalyzeError> {
    let options = lookup(words, lexicon)?;
    for (word, entries) in words.iter().zip(&options) {
        if entries.iter().any(|e| e.semantics.is_none()) {
            return Err(AnalyzeError::MissingSemantics(word.as_ref().to_string()));
        }
    }
    let expected = cat_to_type(goal, lexicon.atoms())?;
    let mut readings: Vec<Reading> = Vec::new();
    for parse in parse_sentence(words, goal, lexicon, cfg)? {
        let leaves: Vec<Term> = parse.entries.iter().map(|e| e.semantics.clone().expect("checked above")).collect();
        let composed = compose(&parse.derivation, &leaves, lexicon.atoms())?;
        let found = composed.type_of()?;
        if found != expected {
            return Err(AnalyzeError::Alignment { expected, found });
        }
        let normal = composed.beta_normalize();
        // keep the smallest derivation behind each reading
        if let Some(r) = readings.iter_mut().find(|r| r.normal.alpha_eq(&normal)) {
            if parse.derivation.nodes().len() < r.derivation.nodes().len() {
                (r.entries, r.derivation, r.composed) = (parse.entries, parse.derivation, composed);
            }
            continue;
        }
        let formula = if found == SemType::T { Some(term_to_formula(&normal)?) } else { None };
        readings.push(Reading { entries: parse.entries, derivation: parse.derivation, composed, normal, formula });
    }
    readings.sort_by_cached_key(|r| r.normal.to_string());
    Ok(readings)
}

/// Builds the semantic term of a derivation whose leaves, left to right,
/// carry `leaves`. Elimination rules become applications of the slash-bearing
/// premise, introduction rules abstract over a fresh hypothesis variable.
pub fn compose(d: &Derivation, leaves: &[Term], atoms: &AtomMap) -> Result<Term, AnalyzeError> {
    if leaves.len() != d.conclusion.antecedent.len() {
        return Err(AnalyzeError::Malformed(format!(
            "{} terms for an antecedent of {} categories",
            leaves.len(),
            d.conclusion.antecedent.len()
        )));
    }
    let mut fresh = 0;
    compose_in(d, leaves, atoms, &mut fresh)
}

fn compose_in(d: &Derivation, env: &[Term], atoms: &AtomMap, fresh: &mut usize) -> Result<Term, AnalyzeError> {
    let malformed = || AnalyzeError::Malformed(d.conclusion.to_string());
    match (d.rule, d.premises.as_slice()) {
        (Rule::Axiom, []) if env.len() == 1 => Ok(env[0].clone()),
        (Rule::OverElim, [function, argument]) => {
            let (l, r) = split(env, function.conclusion.antecedent.len()).ok_or_else(malformed)?;
            Ok(Term::app(compose_in(function, l, atoms, fresh)?, compose_in(argument, r, atoms, fresh)?))
        }
        (Rule::UnderElim, [argument, function]) => {
            let (l, r) = split(env, argument.conclusion.antecedent.len()).ok_or_else(malformed)?;
            let arg = compose_in(argument, l, atoms, fresh)?;
            Ok(Term::app(compose_in(function, r, atoms, fresh)?, arg))
        }
        (Rule::OverIntro | Rule::UnderIntro, [premise]) => {
            let discharged = match &d.conclusion.goal {
                Category::Over(_, arg) | Category::Under(arg, _) => arg,
                Category::Atom(_) => return Err(malformed()),
            };
            let h = Var::new(format!("h{fresh}"), cat_to_type(discharged, atoms)?);
            *fresh += 1;
            let mut inner = env.to_vec();
            if d.rule == Rule::OverIntro {
                inner.push(Term::Var(h.clone()));
            } else {
                inner.insert(0, Term::Var(h.clone()));
            }
            if inner.len() != premise.conclusion.antecedent.len() {
                return Err(malformed());
            }
            Ok(Term::lam(&h, compose_in(premise, &inner, atoms, fresh)?))
        }
        _ => Err(malformed()),
    }
}

fn split(env: &[Term], at: usize) -> Option<(&[Term], &[Term])> {
    (at <= env.len()).then(|| env.split_at(at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montague::load_lexicon;

    const SOSTA: &str = include_str!("../../lexicons/sosta.lex");
    const ITALIAN: &str = include_str!("../../lexicons/italian.lex");

    #[test]
    fn some_statements_speak_about_themselves() {
        let lex = load_lexicon(SOSTA).unwrap();
        let words = ["some", "statements", "speak_about", "themselves"];
        let readings = analyze(&words, &lex, &SearchConfig::default()).unwrap();
        assert_eq!(readings.len(), 1);
        let f = readings[0].formula.as_ref().unwrap();
        assert_eq!(f.to_string(), "exists x:e. (statement(x) /\\ speak_about(x,x))");
    }

    #[test]
    fn single_word_as_noun() {
        let lex = load_lexicon(SOSTA).unwrap();
        let readings = analyze_goal(&["statements"], &Category::atom("n"), &lex, &SearchConfig::default()).unwrap();
        assert_eq!(readings.len(), 1);
        assert_eq!(readings[0].normal.to_string(), "λx:e. statement x");
        assert!(readings[0].formula.is_none());
    }

    #[test]
    fn errors_name_the_word() {
        let lex = load_lexicon(SOSTA).unwrap();
        let err = analyze(&["some", "zzz"], &lex, &SearchConfig::default()).unwrap_err();
        assert_eq!(err, AnalyzeError::UnknownWord("zzz".into()));
        let it = load_lexicon(ITALIAN).unwrap();
        let err = analyze(&["guarda", "passare", "il", "treno"], &it, &SearchConfig::default()).unwrap_err();
        assert!(matches!(err, AnalyzeError::MissingSemantics(_)));
    }

    #[test]
    fn no_parse_is_an_empty_result() {
        let lex = load_lexicon(SOSTA).unwrap();
        let readings = analyze(&["statements", "some"], &lex, &SearchConfig::default()).unwrap();
        assert!(readings.is_empty());
    }

    #[test]
    fn italian_parses() {
        let lex = load_lexicon(ITALIAN).unwrap();
        let cfg = SearchConfig::default();
        let parses = parse_sentence(&["guarda", "passare", "il", "treno"], &Category::atom("S"), &lex, &cfg).unwrap();
        assert_eq!(parses.len(), 1);
        assert_eq!(parses[0].derivation.count_rule(Rule::OverElim), 3);
        let parses = parse_sentence(&["cosa", "guarda", "passare"], &Category::atom("S"), &lex, &cfg).unwrap();
        assert!(parses.iter().any(|p| p.derivation.count_rule(Rule::OverIntro) == 1));
    }

    #[test]
    fn introduction_rules_compose_as_abstraction() {
        let text = "atom inf = e -> t\n\
                    cosa :: S/(S/np) :: \\P:e -> t. exists (\\x:e. P x)\n\
                    guarda :: S/inf :: \\P:e -> t. regarde_passer P\n\
                    passare :: inf/np :: \\y:e. \\x:e. passe x y";
        let lex = load_lexicon(text).unwrap();
        let readings = analyze(&["cosa", "guarda", "passare"], &lex, &SearchConfig::default()).unwrap();
        assert_eq!(readings.len(), 1);
        assert!(readings[0].composed.to_string().contains("λh0:e."));
        assert_eq!(
            readings[0].formula.as_ref().unwrap().to_string(),
            "exists x:e. regarde_passer(\\x1:e. passe(x1,x))"
        );
    }
}
