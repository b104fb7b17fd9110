use std::collections::BTreeMap;

use thiserror::Error;

use super::{parse_fterm, parse_ftype, FSignature, FTerm, FType};

/// Whether a coercion may be combined with a different coercion of the same word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Compatibility {
    #[default]
    Compatible,
    Exclusive,
}

/// An optional term attached to a word that turns one type into another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coercion {
    pub word: String,
    pub term: FTerm,
    /// Always an arrow `from → to`.
    pub ty: FType,
    pub compatibility: Compatibility,
}

impl Coercion {
    pub fn from_type(&self) -> &FType {
        match &self.ty {
            FType::Arrow(a, _) => a,
            _ => unreachable!("coercion types are arrows"),
        }
    }

    pub fn to_type(&self) -> &FType {
        match &self.ty {
            FType::Arrow(_, b) => b,
            _ => unreachable!("coercion types are arrows"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoercionTable {
    by_word: BTreeMap<String, Vec<Coercion>>,
}

impl CoercionTable {
    pub fn insert(&mut self, c: Coercion) {
        self.by_word.entry(c.word.clone()).or_default().push(c);
    }

    pub fn for_word(&self, word: &str) -> &[Coercion] {
        self.by_word.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Coercions of any of `words` from `from` to `to`.
    pub fn find<'a>(&'a self, words: &[&str], from: &FType, to: &FType) -> Vec<&'a Coercion> {
        let mut out: Vec<&Coercion> = Vec::new();
        for w in words {
            for c in self.for_word(w) {
                if c.from_type() == from && c.to_type() == to && !out.iter().any(|d| d.term == c.term) {
                    out.push(c);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.by_word.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_word.is_empty()
    }
}

/// Words with System F terms, plus their coercions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FLexicon {
    pub signature: FSignature,
    words: BTreeMap<String, (FTerm, FType)>,
    pub coercions: CoercionTable,
}

impl FLexicon {
    /// The word's term and its type.
    pub fn word(&self, word: &str) -> Option<(&FTerm, &FType)> {
        self.words.get(word).map(|(t, ty)| (t, ty))
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FLexiconError {
    pub line: usize,
    pub message: String,
}

/// Keywords of the simply-typed lexicon layer, skipped here.
const FOREIGN_KEYWORDS: [&str; 2] = ["atom", "const"];

/// Loads the System F part of a lexicon file:
///
/// ```text
/// sort voie
/// fconst chemin : voie -> t
/// fword le := /\a. \P:a -> t. tau{a} P
/// fword monte : hum -> tt := \x:hum. \e:v. monte e x
/// coerce livre : doc -> phys := f_phys exclusive
/// ```
///
/// `coerce` lines default to `compatible`. Lines with `::` belong to the
/// categorial lexicon and are skipped, as are `atom` and `const` lines.
pub fn load_flexicon(text: &str) -> Result<FLexicon, FLexiconError> {
    let mut lex = FLexicon::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| FLexiconError { line, message };
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() || text.contains("::") {
            continue;
        }
        let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match keyword {
            "sort" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(err(format!("invalid sort name `{rest}`")));
                }
                lex.signature.declare_sort(rest);
            }
            "fconst" => {
                let (name, ty) = rest.split_once(':').ok_or_else(|| err("expected `fconst NAME : TYPE`".into()))?;
                let ty = parse_ftype(ty.trim(), &lex.signature).map_err(|e| err(e.to_string()))?;
                lex.signature.declare(name.trim(), ty).map_err(|e| err(e.to_string()))?;
            }
            "fword" => {
                let (head, term) = rest.split_once(":=").ok_or_else(|| err("expected `fword NAME := TERM`".into()))?;
                let (name, declared) = match head.split_once(':') {
                    Some((n, ty)) => {
                        (n.trim(), Some(parse_ftype(ty.trim(), &lex.signature).map_err(|e| err(e.to_string()))?))
                    }
                    None => (head.trim(), None),
                };
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err(format!("invalid word `{name}`")));
                }
                let term = parse_fterm(term.trim(), &lex.signature).map_err(|e| err(format!("`{name}`: {e}")))?;
                let ty = term.type_of().expect("parse_fterm checks types");
                if let Some(d) = declared {
                    if d != ty {
                        return Err(err(format!("`{name}` is declared with type {d} but its term has type {ty}")));
                    }
                }
                lex.words.insert(name.to_string(), (term, ty));
            }
            "coerce" => {
                let (word, rest) =
                    rest.split_once(':').ok_or_else(|| err("expected `coerce WORD : TYPE := TERM`".into()))?;
                let (ty, term) = rest.split_once(":=").ok_or_else(|| err("expected `:=` in coercion".into()))?;
                let mut term = term.trim();
                let mut compatibility = Compatibility::Compatible;
                if let Some((body, flag)) = term.rsplit_once(char::is_whitespace) {
                    match flag {
                        "exclusive" => (term, compatibility) = (body.trim_end(), Compatibility::Exclusive),
                        "compatible" => term = body.trim_end(),
                        _ => {}
                    }
                }
                let ty = parse_ftype(ty.trim(), &lex.signature).map_err(|e| err(e.to_string()))?;
                if !matches!(ty, FType::Arrow(..)) {
                    return Err(err(format!("coercion type {ty} is not a function type")));
                }
                let term = parse_fterm(term, &lex.signature).map_err(|e| err(e.to_string()))?;
                let found = term.type_of().expect("parse_fterm checks types");
                if found != ty {
                    return Err(err(format!("coercion is declared with type {ty} but its term has type {found}")));
                }
                lex.coercions.insert(Coercion { word: word.trim().to_string(), term, ty, compatibility });
            }
            k if FOREIGN_KEYWORDS.contains(&k) => {}
            other => return Err(err(format!("unrecognized line starting with `{other}`"))),
        }
    }
    Ok(lex)
}
