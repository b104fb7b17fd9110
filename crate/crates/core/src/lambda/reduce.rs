use thiserror::Error;

use super::{Term, Var};

/// Which redex a single reduction step contracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Normal order: the redex whose λ comes first.
    LeftmostOutermost,
    /// Contract a redex only once its function and argument are normal,
    /// preferring the argument.
    RightmostInnermost,
}

pub const DEFAULT_STEP_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("normalization did not finish within {budget} steps")]
pub struct BudgetExceeded {
    pub budget: usize,
    pub partial: Term,
}

/// Shifts free indices `>= cutoff` by `d`.
pub(crate) fn shift(t: &Term, d: isize, cutoff: usize) -> Term {
    match t {
        Term::Bound(k) if *k >= cutoff => Term::Bound((*k as isize + d) as usize),
        Term::App(f, a) => Term::app(shift(f, d, cutoff), shift(a, d, cutoff)),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(shift(body, d, cutoff + 1))),
        other => other.clone(),
    }
}

/// Replaces index `depth` (the variable bound just outside `t`) by `arg` and
/// lowers the indices above it.
pub(crate) fn instantiate(t: &Term, depth: usize, arg: &Term) -> Term {
    match t {
        Term::Bound(k) if *k == depth => shift(arg, depth as isize, 0),
        Term::Bound(k) if *k > depth => Term::Bound(k - 1),
        Term::App(f, a) => Term::app(instantiate(f, depth, arg), instantiate(a, depth, arg)),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(instantiate(body, depth + 1, arg))),
        other => other.clone(),
    }
}

pub(crate) fn replace_var(t: &Term, x: &Var, u: &Term, depth: usize) -> Term {
    match t {
        Term::Var(y) if y == x => shift(u, depth as isize, 0),
        Term::App(f, a) => Term::app(replace_var(f, x, u, depth), replace_var(a, x, u, depth)),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(replace_var(body, x, u, depth + 1))),
        other => other.clone(),
    }
}

fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match &**f {
            Term::Abs(_, body) => Some(instantiate(body, 0, a)),
            _ => None,
        },
        _ => None,
    }
}

fn step(t: &Term, strategy: Strategy) -> Option<Term> {
    match strategy {
        Strategy::LeftmostOutermost => {
            if let Some(r) = contract(t) {
                return Some(r);
            }
            match t {
                Term::App(f, a) => step(f, strategy)
                    .map(|f| Term::app(f, (**a).clone()))
                    .or_else(|| step(a, strategy).map(|a| Term::app((**f).clone(), a))),
                Term::Abs(b, body) => step(body, strategy).map(|body| Term::Abs(b.clone(), Box::new(body))),
                _ => None,
            }
        }
        Strategy::RightmostInnermost => match t {
            Term::App(f, a) => step(a, strategy)
                .map(|a| Term::app((**f).clone(), a))
                .or_else(|| step(f, strategy).map(|f| Term::app(f, (**a).clone())))
                .or_else(|| contract(t)),
            Term::Abs(b, body) => step(body, strategy).map(|body| Term::Abs(b.clone(), Box::new(body))),
            _ => None,
        },
    }
}

impl Term {
    /// One reduction step, or `None` if the term is normal.
    pub fn step(&self, strategy: Strategy) -> Option<Term> {
        step(self, strategy)
    }

    pub fn is_normal(&self) -> bool {
        match self {
            Term::App(f, a) => !matches!(**f, Term::Abs(..)) && f.is_normal() && a.is_normal(),
            Term::Abs(_, b) => b.is_normal(),
            _ => true,
        }
    }

    /// Normal form and the number of steps taken.
    pub fn normalize_with(&self, strategy: Strategy, budget: usize) -> Result<(Term, usize), BudgetExceeded> {
        let mut t = self.clone();
        let mut steps = 0;
        while let Some(next) = step(&t, strategy) {
            if steps == budget {
                return Err(BudgetExceeded { budget, partial: t });
            }
            t = next;
            steps += 1;
        }
        Ok((t, steps))
    }

    /// Every intermediate term, starting with `self` and ending with its normal form.
    pub fn reduction_trace(&self, strategy: Strategy, budget: usize) -> Result<Vec<Term>, BudgetExceeded> {
        let mut trace = vec![self.clone()];
        while let Some(next) = step(trace.last().unwrap(), strategy) {
            if trace.len() > budget {
                return Err(BudgetExceeded { budget, partial: trace.pop().unwrap() });
            }
            trace.push(next);
        }
        Ok(trace)
    }
}
