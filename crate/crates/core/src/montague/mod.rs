//! Compositional semantics: categories are mapped to semantic types, lexical
//! λ-terms are plugged into the leaves of a derivation, and the β-normal
//! result of type `t` is read off as a first-order formula.

mod analyze;
mod formula;
mod lexicon;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::{Atom, Category};
use crate::lambda::SemType;

pub use analyze::{analyze, analyze_goal, compose, parse_sentence, AnalyzeError, Parse, Reading};
pub use formula::{term_to_formula, Arg, Formula, FormulaError, SortedVar, VarNamer};
pub use lexicon::{
    audit_lexicon, load_lexicon, EntryReport, EntryStatus, Lexicon, LexiconAudit, LexiconEntry, LexiconError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("atom `{0}` has no semantic type")]
pub struct UnmappedAtom(pub String);

/// Semantic type of each atomic category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomMap(BTreeMap<Atom, SemType>);

impl Default for AtomMap {
    /// `S ↦ t`, `np ↦ e`, `n ↦ e → t`.
    fn default() -> Self {
        let mut m = BTreeMap::new();
        m.insert(Atom::new("S").unwrap(), SemType::T);
        m.insert(Atom::new("np").unwrap(), SemType::E);
        m.insert(Atom::new("n").unwrap(), SemType::arrow(SemType::E, SemType::T));
        AtomMap(m)
    }
}

impl AtomMap {
    pub fn insert(&mut self, atom: Atom, ty: SemType) {
        self.0.insert(atom, ty);
    }

    pub fn get(&self, atom: &Atom) -> Option<&SemType> {
        self.0.get(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &SemType)> {
        self.0.iter()
    }
}

/// The homomorphism from categories to types: `(A\B)* = (B/A)* = A* → B*`.
pub fn cat_to_type(c: &Category, atoms: &AtomMap) -> Result<SemType, UnmappedAtom> {
    match c {
        Category::Atom(a) => atoms.get(a).cloned().ok_or_else(|| UnmappedAtom(a.to_string())),
        Category::Under(arg, result) | Category::Over(result, arg) => {
            Ok(SemType::arrow(cat_to_type(arg, atoms)?, cat_to_type(result, atoms)?))
        }
    }
}
