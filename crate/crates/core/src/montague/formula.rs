use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{shift, SemType, Term, TypeError};

/// A quantified variable together with its sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SortedVar {
    pub name: String,
    pub sort: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Formula {
    Pred { name: String, args: Vec<Arg> },
    And { left: Box<Formula>, right: Box<Formula> },
    Or { left: Box<Formula>, right: Box<Formula> },
    Implies { left: Box<Formula>, right: Box<Formula> },
    Exists { var: SortedVar, body: Box<Formula> },
    Forall { var: SortedVar, body: Box<Formula> },
}

/// Argument of a predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arg {
    Var {
        name: String,
    },
    Const {
        name: String,
    },
    /// A function symbol applied to arguments, such as `tau(...)`.
    Apply {
        function: String,
        args: Vec<Arg>,
    },
    /// A property passed as an argument.
    Abstraction {
        var: SortedVar,
        body: Box<Formula>,
    },
    /// A proposition passed as an argument.
    Formula {
        formula: Box<Formula>,
    },
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Arg>) -> Formula {
        Formula::Pred { name: name.into(), args }
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And { left: Box::new(left), right: Box::new(right) }
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or { left: Box::new(left), right: Box::new(right) }
    }

    pub fn implies(left: Formula, right: Formula) -> Formula {
        Formula::Implies { left: Box::new(left), right: Box::new(right) }
    }

    pub fn exists(name: impl Into<String>, sort: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists { var: SortedVar { name: name.into(), sort: sort.into() }, body: Box::new(body) }
    }

    pub fn forall(name: impl Into<String>, sort: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall { var: SortedVar { name: name.into(), sort: sort.into() }, body: Box::new(body) }
    }
}

impl Arg {
    pub fn var(name: impl Into<String>) -> Arg {
        Arg::Var { name: name.into() }
    }

    pub fn constant(name: impl Into<String>) -> Arg {
        Arg::Const { name: name.into() }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred { name, args } if args.is_empty() => f.write_str(name),
            Formula::Pred { name, args } => write!(f, "{name}({})", Commas(args)),
            Formula::And { left, right } => write!(f, "({left} /\\ {right})"),
            Formula::Or { left, right } => write!(f, "({left} \\/ {right})"),
            Formula::Implies { left, right } => write!(f, "({left} -> {right})"),
            Formula::Exists { var, body } => write!(f, "exists {}:{}. {body}", var.name, var.sort),
            Formula::Forall { var, body } => write!(f, "forall {}:{}. {body}", var.name, var.sort),
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Var { name } | Arg::Const { name } => f.write_str(name),
            Arg::Apply { function, args } => write!(f, "{function}({})", Commas(args)),
            Arg::Abstraction { var, body } => write!(f, "\\{}:{}. {body}", var.name, var.sort),
            Arg::Formula { formula } => write!(f, "{formula}"),
        }
    }
}

struct Commas<'a>(&'a [Arg]);

impl fmt::Display for Commas<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("term has type {0}, not t")]
    NotOfTypeT(String),
    #[error("term is not β-normal")]
    NotNormal,
    #[error("`{0}` is not a formula")]
    NotAFormula(String),
    #[error("ill-typed term: {0}")]
    IllTyped(String),
}

impl From<TypeError> for FormulaError {
    fn from(e: TypeError) -> Self {
        FormulaError::IllTyped(e.to_string())
    }
}

/// Canonical variable names `x`, `x1`, `x2`, ... skipping names that are
/// already taken by constants.
#[derive(Clone, Debug, Default)]
pub struct VarNamer {
    next: usize,
    avoid: BTreeSet<String>,
}

impl VarNamer {
    pub fn new(avoid: impl IntoIterator<Item = String>) -> VarNamer {
        VarNamer { next: 0, avoid: avoid.into_iter().collect() }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = if self.next == 0 { "x".to_string() } else { format!("x{}", self.next) };
            self.next += 1;
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }
}

/// Reads a β-normal term of type `t` as a first-order formula.
pub fn term_to_formula(t: &Term) -> Result<Formula, FormulaError> {
    let ty = t.type_of()?;
    if ty != SemType::T {
        return Err(FormulaError::NotOfTypeT(ty.to_string()));
    }
    if !t.is_normal() {
        return Err(FormulaError::NotNormal);
    }
    let avoid = t.global_names().into_iter().map(str::to_string);
    let mut conv = Converter { namer: VarNamer::new(avoid), names: Vec::new(), types: Vec::new() };
    conv.formula(t)
}

struct Converter {
    namer: VarNamer,
    names: Vec<String>,
    types: Vec<SemType>,
}

impl Converter {
    fn formula(&mut self, t: &Term) -> Result<Formula, FormulaError> {
        let (head, args) = t.spine();
        let Term::Const(c, _) = head else {
            return Err(FormulaError::NotAFormula(self.show(t)));
        };
        match (c.as_str(), args.as_slice()) {
            ("and" | "or" | "implies", [l, r]) => {
                let l = self.formula(l)?;
                let r = self.formula(r)?;
                Ok(match c.as_str() {
                    "and" => Formula::and(l, r),
                    "or" => Formula::or(l, r),
                    _ => Formula::implies(l, r),
                })
            }
            ("exists" | "forall", [p]) => {
                let (var, body) = self.bind(p)?;
                let body = Box::new(body);
                Ok(if c == "exists" { Formula::Exists { var, body } } else { Formula::Forall { var, body } })
            }
            _ => {
                Ok(Formula::Pred { name: c.clone(), args: args.iter().map(|a| self.arg(a)).collect::<Result<_, _>>()? })
            }
        }
    }

    /// Opens a property `σ → t`, η-expanding it when it is not an abstraction.
    fn bind(&mut self, p: &Term) -> Result<(SortedVar, Formula), FormulaError> {
        let (sort, body) = match p {
            Term::Abs(b, body) => (b.ty.clone(), (**body).clone()),
            other => match other.type_in(&mut self.types)? {
                SemType::Arrow(dom, _) => (*dom, Term::app(shift(other, 1, 0), Term::Bound(0))),
                _ => return Err(FormulaError::NotAFormula(self.show(other))),
            },
        };
        let name = self.namer.fresh();
        self.names.push(name.clone());
        self.types.push(sort.clone());
        let body = self.formula(&body);
        self.names.pop();
        self.types.pop();
        Ok((SortedVar { name, sort: sort.to_string() }, body?))
    }

    fn arg(&mut self, t: &Term) -> Result<Arg, FormulaError> {
        let ty = t.type_in(&mut self.types)?;
        if ty == SemType::T {
            return Ok(Arg::Formula { formula: Box::new(self.formula(t)?) });
        }
        match t {
            Term::Bound(i) => Ok(Arg::var(self.names[self.names.len() - 1 - i].clone())),
            Term::Var(v) => Ok(Arg::var(v.name.clone())),
            Term::Const(c, _) => Ok(Arg::constant(c.clone())),
            Term::Abs(..) if matches!(&ty, SemType::Arrow(_, cod) if **cod == SemType::T) => {
                let (var, body) = self.bind(t)?;
                Ok(Arg::Abstraction { var, body: Box::new(body) })
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let function = match head {
                    Term::Const(c, _) => c.clone(),
                    Term::Var(v) => v.name.clone(),
                    Term::Bound(i) => self.names[self.names.len() - 1 - i].clone(),
                    _ => return Err(FormulaError::NotNormal),
                };
                let args = args.iter().map(|a| self.arg(a)).collect::<Result<_, _>>()?;
                Ok(Arg::Apply { function, args })
            }
            _ => Err(FormulaError::NotAFormula(self.show(t))),
        }
    }

    /// Prints a subterm with its open indices replaced by the chosen names.
    fn show(&self, t: &Term) -> String {
        fn open(t: &Term, c: &Converter, depth: usize) -> Term {
            match t {
                Term::Bound(i) if *i >= depth => {
                    let k = c.names.len() - 1 - (i - depth);
                    Term::var(c.names[k].clone(), c.types[k].clone())
                }
                Term::App(f, a) => Term::app(open(f, c, depth), open(a, c, depth)),
                Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(open(body, c, depth + 1))),
                other => other.clone(),
            }
        }
        open(t, self, 0).to_string()
    }
}
