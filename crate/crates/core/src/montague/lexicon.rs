use std::collections::BTreeMap;

use thiserror::Error;

use super::{cat_to_type, AtomMap};
use crate::category::{parse_category, Atom, Category};
use crate::lambda::{elaborate_term, parse_type, ElabError, SemType, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconEntry {
    /// Multi-word items are joined with `_`.
    pub word: String,
    pub category: Category,
    /// `None` for purely syntactic entries.
    pub semantics: Option<Term>,
}

/// Words mapped to their entries, with the constants and atom types the
/// entries were checked against.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<LexiconEntry>>,
    signature: Signature,
    atoms: AtomMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: category of `{word}` uses atom `{atom}`, which has no semantic type")]
    UnmappedAtom { line: usize, word: String, atom: String },
    #[error("line {line}: semantics of `{word}` has type {found}, but its category requires {expected}")]
    TypeMismatch { line: usize, word: String, expected: SemType, found: SemType },
    #[error("line {line}: semantics of `{word}`: {source}")]
    Semantics { line: usize, word: String, source: ElabError },
    #[error("line {line}: constant `{name}` redeclared as {new}, previously {old}")]
    Redeclared { line: usize, name: String, old: SemType, new: SemType },
}

impl LexiconError {
    pub fn line(&self) -> usize {
        match self {
            LexiconError::Parse { line, .. }
            | LexiconError::UnmappedAtom { line, .. }
            | LexiconError::TypeMismatch { line, .. }
            | LexiconError::Semantics { line, .. }
            | LexiconError::Redeclared { line, .. } => *line,
        }
    }
}

impl Lexicon {
    pub fn entries(&self, word: &str) -> &[LexiconEntry] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values().flatten()
    }

    /// Total number of entries.
    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn atoms(&self) -> &AtomMap {
        &self.atoms
    }
}

/// Keywords that belong to the System F lexicon layer and are skipped here.
const FOREIGN_KEYWORDS: [&str; 4] = ["sort", "fconst", "fword", "coerce"];

/// Outcome of checking one entry line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryStatus {
    Ok,
    SyntaxOnly,
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryReport {
    pub line: usize,
    pub word: String,
    pub category: String,
    /// Semantic type the category demands, when it can be computed.
    pub expected: Option<SemType>,
    /// Type of the supplied term, when it can be computed.
    pub found: Option<SemType>,
    pub status: EntryStatus,
}

/// Result of checking a whole lexicon file without stopping at the first error.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexiconAudit {
    pub entries: Vec<EntryReport>,
    /// Problems with lines that are not entries.
    pub problems: Vec<LexiconError>,
    pub warnings: Vec<String>,
}

impl LexiconAudit {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty() && self.entries.iter().all(|e| !matches!(e.status, EntryStatus::Fail(_)))
    }
}

enum Line {
    Blank,
    Declaration,
    Entry(LexiconEntry),
}

/// A bad line, with the entry report when the line was an entry.
type LineError = (LexiconError, Option<Box<EntryReport>>);

struct Loader {
    lexicon: Lexicon,
}

impl Loader {
    fn new() -> Loader {
        Loader { lexicon: Lexicon { signature: Signature::logical(), ..Lexicon::default() } }
    }

    fn line(&mut self, line: usize, raw: &str) -> Result<Line, LineError> {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            return Ok(Line::Blank);
        }
        if text.contains("::") {
            return self.entry(line, text).map(Line::Entry);
        }
        let parse = |message: String| (LexiconError::Parse { line, message }, None);
        let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        match keyword {
            "atom" => {
                let (name, ty) = rest.split_once('=').ok_or_else(|| parse("expected `atom NAME = TYPE`".into()))?;
                let atom = Atom::new(name.trim()).map_err(|e| parse(e.to_string()))?;
                let ty = parse_type(ty.trim()).map_err(|e| parse(e.to_string()))?;
                self.lexicon.atoms.insert(atom, ty);
            }
            "const" => {
                let (name, ty) = rest.split_once(':').ok_or_else(|| parse("expected `const NAME : TYPE`".into()))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(parse(format!("invalid constant name `{name}`")));
                }
                let ty = parse_type(ty.trim()).map_err(|e| parse(e.to_string()))?;
                self.lexicon
                    .signature
                    .declare(name, ty.clone())
                    .map_err(|old| (LexiconError::Redeclared { line, name: name.to_string(), old, new: ty }, None))?;
            }
            k if FOREIGN_KEYWORDS.contains(&k) => {}
            other => return Err(parse(format!("unrecognized line starting with `{other}`"))),
        }
        Ok(Line::Declaration)
    }

    fn entry(&mut self, line: usize, text: &str) -> Result<LexiconEntry, LineError> {
        let mut parts = text.splitn(3, "::").map(str::trim);
        let word = parts.next().unwrap_or_default().to_string();
        let cat_text = parts.next().unwrap_or_default();
        let term_text = parts.next();
        let mut report = EntryReport {
            line,
            word: word.clone(),
            category: cat_text.to_string(),
            expected: None,
            found: None,
            status: EntryStatus::Ok,
        };
        let fail = |err: LexiconError, mut report: EntryReport| {
            report.status = EntryStatus::Fail(err.to_string());
            (err, Some(Box::new(report)))
        };

        if word.is_empty() || word.contains(char::is_whitespace) {
            let err = LexiconError::Parse { line, message: format!("invalid word `{word}`") };
            return Err(fail(err, report));
        }
        let category = match parse_category(cat_text) {
            Ok(c) => c,
            Err(e) => {
                let err = LexiconError::Parse { line, message: format!("category of `{word}`: {e}") };
                return Err(fail(err, report));
            }
        };
        report.category = category.to_string();
        let expected = cat_to_type(&category, &self.lexicon.atoms);
        if let Ok(ty) = &expected {
            report.expected = Some(ty.clone());
        }

        let semantics = match term_text {
            None => {
                report.status = EntryStatus::SyntaxOnly;
                None
            }
            Some(term_text) => {
                let expected = match expected {
                    Ok(ty) => ty,
                    Err(e) => {
                        let err = LexiconError::UnmappedAtom { line, word, atom: e.0 };
                        return Err(fail(err, report));
                    }
                };
                match elaborate_term(term_text, &self.lexicon.signature, Some(&expected)) {
                    Ok((term, inferred)) => {
                        for (name, ty) in inferred {
                            self.lexicon.signature.declare(name, ty).expect("inferred constants are fresh");
                        }
                        report.found = Some(expected);
                        Some(term)
                    }
                    Err(ElabError::Mismatch { expected, found }) => {
                        report.found = Some(found.clone());
                        let err = LexiconError::TypeMismatch { line, word, expected, found };
                        return Err(fail(err, report));
                    }
                    Err(source) => {
                        let err = LexiconError::Semantics { line, word, source };
                        return Err(fail(err, report));
                    }
                }
            }
        };
        let entry = LexiconEntry { word, category, semantics };
        self.lexicon.entries.entry(entry.word.clone()).or_default().push(entry.clone());
        Ok(entry)
    }
}

/// Loads a lexicon file, stopping at the first bad line.
///
/// Records are `word :: category` or `word :: category :: term`. Header lines
/// `atom NAME = TYPE` extend the atom map and `const NAME : TYPE` declare
/// constants; undeclared constants get their types inferred from the entry.
pub fn load_lexicon(text: &str) -> Result<Lexicon, LexiconError> {
    let mut loader = Loader::new();
    for (i, line) in text.lines().enumerate() {
        loader.line(i + 1, line).map_err(|(e, _)| e)?;
    }
    Ok(loader.lexicon)
}

/// Checks every line of a lexicon file and reports on each entry.
pub fn audit_lexicon(text: &str) -> LexiconAudit {
    let mut loader = Loader::new();
    let mut audit = LexiconAudit::default();
    for (i, line) in text.lines().enumerate() {
        match loader.line(i + 1, line) {
            Ok(Line::Entry(entry)) => audit.entries.push(EntryReport {
                line: i + 1,
                word: entry.word,
                category: entry.category.to_string(),
                expected: cat_to_type(&entry.category, &loader.lexicon.atoms).ok(),
                found: entry.semantics.as_ref().and_then(|t| t.type_of().ok()),
                status: if entry.semantics.is_some() { EntryStatus::Ok } else { EntryStatus::SyntaxOnly },
            }),
            Ok(_) => {}
            Err((_, Some(report))) => audit.entries.push(*report),
            Err((err, None)) => audit.problems.push(err),
        }
    }
    if audit.entries.is_empty() {
        audit.warnings.push("lexicon has no entries".to_string());
    }
    audit
}
