//! Natural-deduction proof search for the product-free Lambek calculus.

mod render;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::category::{parse_category, Category, CategoryParseError};

pub use render::{render, OutputFormat, RenderError};
pub use search::prove;

/// `antecedent ⊢ goal`. Surface syntax: `cat1, cat2 => goal`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Sequent {
    pub antecedent: Vec<Category>,
    pub goal: Category,
}

impl Sequent {
    pub fn new(antecedent: Vec<Category>, goal: Category) -> Sequent {
        Sequent { antecedent, goal }
    }

    /// Total number of connectives on both sides.
    pub fn connectives(&self) -> usize {
        self.antecedent.iter().map(Category::connectives).sum::<usize>() + self.goal.connectives()
    }

    pub fn categories(&self) -> impl Iterator<Item = &Category> {
        self.antecedent.iter().chain(std::iter::once(&self.goal))
    }

    pub fn to_latex(&self) -> String {
        let ant: Vec<_> = self.antecedent.iter().map(Category::to_latex).collect();
        if ant.is_empty() {
            format!("\\vdash {}", self.goal.to_latex())
        } else {
            format!("{} \\vdash {}", ant.join(", "), self.goal.to_latex())
        }
    }

    /// The `=>` notation accepted by [`parse_sequent`].
    pub fn to_ascii(&self) -> String {
        let ant: Vec<_> = self.antecedent.iter().map(ToString::to_string).collect();
        if ant.is_empty() {
            format!("=> {}", self.goal)
        } else {
            format!("{} => {}", ant.join(", "), self.goal)
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        if self.antecedent.is_empty() {
            write!(f, "⊢ {}", self.goal)
        } else {
            write!(f, " ⊢ {}", self.goal)
        }
    }
}

impl From<Sequent> for String {
    fn from(s: Sequent) -> String {
        s.to_ascii()
    }
}

impl TryFrom<String> for Sequent {
    type Error = SequentParseError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_sequent(&s)
    }
}

impl FromStr for Sequent {
    type Err = SequentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sequent(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentParseError {
    #[error("missing `=>` (or `⊢`) separator")]
    MissingSeparator,
    #[error("in `{text}`: {source}")]
    Category {
        text: String,
        #[source]
        source: CategoryParseError,
    },
}

/// Parses `cat1, cat2, ... => goal`. The antecedent may be empty.
pub fn parse_sequent(text: &str) -> Result<Sequent, SequentParseError> {
    let (lhs, rhs) =
        text.split_once("=>").or_else(|| text.split_once('⊢')).ok_or(SequentParseError::MissingSeparator)?;
    let parse = |t: &str| {
        parse_category(t).map_err(|source| SequentParseError::Category { text: t.trim().to_string(), source })
    };
    let antecedent =
        if lhs.trim().is_empty() { Vec::new() } else { lhs.split(',').map(parse).collect::<Result<_, _>>()? };
    Ok(Sequent { antecedent, goal: parse(rhs)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "ax")]
    Axiom,
    /// `Γ ⊢ A` and `Δ ⊢ A\B` give `Γ, Δ ⊢ B`.
    #[serde(rename = "\\e")]
    UnderElim,
    /// `Δ ⊢ B/A` and `Γ ⊢ A` give `Δ, Γ ⊢ B`.
    #[serde(rename = "/e")]
    OverElim,
    /// `A, Γ ⊢ C` gives `Γ ⊢ A\C`.
    #[serde(rename = "\\i")]
    UnderIntro,
    /// `Γ, A ⊢ C` gives `Γ ⊢ C/A`.
    #[serde(rename = "/i")]
    OverIntro,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Axiom => "ax",
            Rule::UnderElim => "\\e",
            Rule::OverElim => "/e",
            Rule::UnderIntro => "\\i",
            Rule::OverIntro => "/i",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::UnderIntro | Rule::OverIntro => 1,
            Rule::UnderElim | Rule::OverElim => 2,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn axiom(c: Category) -> Derivation {
        Derivation { rule: Rule::Axiom, conclusion: Sequent::new(vec![c.clone()], c), premises: Vec::new() }
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            out.push(d);
            stack.extend(d.premises.iter().rev());
        }
        out
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.nodes().iter().filter(|d| d.rule == rule).count()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Derivation::depth).max().unwrap_or(0)
    }

    /// Whether every category mentioned anywhere in the tree is a subcategory
    /// of some category of the end-sequent.
    pub fn has_subformula_property(&self) -> bool {
        let end: Vec<&Category> = self.conclusion.categories().collect();
        self.nodes().iter().flat_map(|d| d.conclusion.categories()).all(|c| end.iter().any(|e| e.has_subcategory(c)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest accepted input category, counted in connectives.
    pub max_category_size: usize,
    /// Cap on the number of derivations returned.
    pub max_derivations: usize,
    /// Drops the non-empty antecedent side condition. Only useful to exhibit
    /// the over-generation it prevents.
    pub allow_empty_antecedent: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_category_size: 32, max_derivations: 16, allow_empty_antecedent: false }
    }
}

impl SearchConfig {
    pub fn with_empty_antecedent(mut self, allow: bool) -> Self {
        self.allow_empty_antecedent = allow;
        self
    }

    pub fn with_max_derivations(mut self, n: usize) -> Self {
        self.max_derivations = n;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("category `{category}` has {size} connectives, above the limit of {limit}")]
    LimitExceeded { category: String, size: usize, limit: usize },
    #[error("search limits must be at least 1")]
    InvalidConfig,
}

/// Checks every node against its rule schema and side conditions.
pub fn check_derivation(d: &Derivation, cfg: &SearchConfig) -> bool {
    check_node(d, cfg) && d.premises.iter().all(|p| check_derivation(p, cfg))
}

fn check_node(d: &Derivation, cfg: &SearchConfig) -> bool {
    let concl = &d.conclusion;
    if concl.antecedent.is_empty() && !cfg.allow_empty_antecedent {
        return false;
    }
    if d.premises.len() != d.rule.arity() {
        return false;
    }
    match d.rule {
        Rule::Axiom => concl.antecedent.len() == 1 && concl.antecedent[0] == concl.goal,
        Rule::UnderElim => {
            let (left, func) = (&d.premises[0].conclusion, &d.premises[1].conclusion);
            match &func.goal {
                Category::Under(a, b) => {
                    **a == left.goal
                        && **b == concl.goal
                        && concat(&left.antecedent, &func.antecedent) == concl.antecedent
                }
                _ => false,
            }
        }
        Rule::OverElim => {
            let (func, right) = (&d.premises[0].conclusion, &d.premises[1].conclusion);
            match &func.goal {
                Category::Over(b, a) => {
                    **a == right.goal
                        && **b == concl.goal
                        && concat(&func.antecedent, &right.antecedent) == concl.antecedent
                }
                _ => false,
            }
        }
        Rule::UnderIntro => {
            let prem = &d.premises[0].conclusion;
            match &concl.goal {
                Category::Under(a, c) => {
                    prem.goal == **c
                        && prem.antecedent.first() == Some(&**a)
                        && prem.antecedent[1..] == concl.antecedent[..]
                }
                _ => false,
            }
        }
        Rule::OverIntro => {
            let prem = &d.premises[0].conclusion;
            match &concl.goal {
                Category::Over(c, a) => {
                    prem.goal == **c
                        && prem.antecedent.last() == Some(&**a)
                        && prem.antecedent[..prem.antecedent.len() - 1] == concl.antecedent[..]
                }
                _ => false,
            }
        }
    }
}

fn concat(a: &[Category], b: &[Category]) -> Vec<Category> {
    a.iter().chain(b).cloned().collect()
}
