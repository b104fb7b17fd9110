use super::{FTerm, FType};

/// Which redex a single step contracts. A redex is either a term β-redex
/// `(λx. t) u` or a type β-redex `(Λα. t){U}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FStrategy {
    LeftmostOutermost,
    RightmostInnermost,
    /// Contract type redexes (leftmost-outermost) while any remain, then
    /// continue leftmost-outermost.
    TypeRedexesFirst,
}

/// Shifts free term indices `>= cutoff` by `d`.
fn shift(t: &FTerm, d: isize, cutoff: usize) -> FTerm {
    match t {
        FTerm::Bound(k) if *k >= cutoff => FTerm::Bound((*k as isize + d) as usize),
        FTerm::App(f, a) => FTerm::app(shift(f, d, cutoff), shift(a, d, cutoff)),
        FTerm::Abs(h, ty, b) => FTerm::Abs(h.clone(), ty.clone(), Box::new(shift(b, d, cutoff + 1))),
        FTerm::TyApp(b, u) => FTerm::TyApp(Box::new(shift(b, d, cutoff)), u.clone()),
        FTerm::TyAbs(h, b) => FTerm::TyAbs(h.clone(), Box::new(shift(b, d, cutoff))),
        other => other.clone(),
    }
}

/// Shifts free type indices `>= cutoff` by `d` in every annotation.
fn shift_types(t: &FTerm, d: isize, cutoff: usize) -> FTerm {
    if d == 0 {
        return t.clone();
    }
    map_types(t, cutoff, &|ty, c| ty.shift(d, c))
}

/// Rebuilds `t`, passing every type annotation through `f` together with the
/// number of type binders above it plus `depth`.
fn map_types(t: &FTerm, depth: usize, f: &impl Fn(&FType, usize) -> FType) -> FTerm {
    match t {
        FTerm::Var(x, ty) => FTerm::Var(x.clone(), f(ty, depth)),
        FTerm::Const(c, ty) => FTerm::Const(c.clone(), f(ty, depth)),
        FTerm::Bound(k) => FTerm::Bound(*k),
        FTerm::App(a, b) => FTerm::app(map_types(a, depth, f), map_types(b, depth, f)),
        FTerm::Abs(h, ty, b) => FTerm::Abs(h.clone(), f(ty, depth), Box::new(map_types(b, depth, f))),
        FTerm::TyApp(b, u) => FTerm::TyApp(Box::new(map_types(b, depth, f)), f(u, depth)),
        FTerm::TyAbs(h, b) => FTerm::TyAbs(h.clone(), Box::new(map_types(b, depth + 1, f))),
    }
}

/// Substitutes `arg` for term index `depth` at type depth `tdepth`.
fn instantiate(t: &FTerm, depth: usize, tdepth: usize, arg: &FTerm) -> FTerm {
    match t {
        FTerm::Bound(k) if *k == depth => shift_types(&shift(arg, depth as isize, 0), tdepth as isize, 0),
        FTerm::Bound(k) if *k > depth => FTerm::Bound(k - 1),
        FTerm::App(f, a) => FTerm::app(instantiate(f, depth, tdepth, arg), instantiate(a, depth, tdepth, arg)),
        FTerm::Abs(h, ty, b) => FTerm::Abs(h.clone(), ty.clone(), Box::new(instantiate(b, depth + 1, tdepth, arg))),
        FTerm::TyApp(b, u) => FTerm::TyApp(Box::new(instantiate(b, depth, tdepth, arg)), u.clone()),
        FTerm::TyAbs(h, b) => FTerm::TyAbs(h.clone(), Box::new(instantiate(b, depth, tdepth + 1, arg))),
        other => other.clone(),
    }
}

/// Substitutes the type `u` for type index 0 of the body of a type abstraction.
fn instantiate_type(body: &FTerm, u: &FType) -> FTerm {
    map_types(body, 0, &|ty, k| ty.instantiate(k, u))
}

/// Shifts a term's free term indices; used to move a term under binders.
pub(crate) fn shift_term(t: &FTerm, d: isize) -> FTerm {
    shift(t, d, 0)
}

/// The body of an abstraction with its bound variable replaced by `arg`.
pub(crate) fn open_body(body: &FTerm, arg: &FTerm) -> FTerm {
    instantiate(body, 0, 0, arg)
}

fn contract(t: &FTerm) -> Option<FTerm> {
    match t {
        FTerm::App(f, a) => match &**f {
            FTerm::Abs(_, _, body) => Some(instantiate(body, 0, 0, a)),
            _ => None,
        },
        FTerm::TyApp(f, u) => match &**f {
            FTerm::TyAbs(_, body) => Some(instantiate_type(body, u)),
            _ => None,
        },
        _ => None,
    }
}

fn rebuild(t: &FTerm, child: usize, new: FTerm) -> FTerm {
    match (t, child) {
        (FTerm::App(_, a), 0) => FTerm::App(Box::new(new), a.clone()),
        (FTerm::App(f, _), 1) => FTerm::App(f.clone(), Box::new(new)),
        (FTerm::Abs(h, ty, _), _) => FTerm::Abs(h.clone(), ty.clone(), Box::new(new)),
        (FTerm::TyApp(_, u), _) => FTerm::TyApp(Box::new(new), u.clone()),
        (FTerm::TyAbs(h, _), _) => FTerm::TyAbs(h.clone(), Box::new(new)),
        _ => unreachable!("term has no such child"),
    }
}

fn children(t: &FTerm) -> Vec<&FTerm> {
    match t {
        FTerm::App(f, a) => vec![f, a],
        FTerm::Abs(_, _, b) | FTerm::TyApp(b, _) | FTerm::TyAbs(_, b) => vec![b],
        _ => vec![],
    }
}

fn step_lo(t: &FTerm, only_types: bool) -> Option<FTerm> {
    let is_type_redex = matches!(t, FTerm::TyApp(f, _) if matches!(**f, FTerm::TyAbs(..)));
    if !only_types || is_type_redex {
        if let Some(r) = contract(t) {
            return Some(r);
        }
    }
    children(t).into_iter().enumerate().find_map(|(i, c)| step_lo(c, only_types).map(|n| rebuild(t, i, n)))
}

fn step_ri(t: &FTerm) -> Option<FTerm> {
    children(t)
        .into_iter()
        .enumerate()
        .rev()
        .find_map(|(i, c)| step_ri(c).map(|n| rebuild(t, i, n)))
        .or_else(|| contract(t))
}

impl FTerm {
    /// One reduction step, or `None` if the term is normal.
    pub fn step(&self, strategy: FStrategy) -> Option<FTerm> {
        match strategy {
            FStrategy::LeftmostOutermost => step_lo(self, false),
            FStrategy::RightmostInnermost => step_ri(self),
            FStrategy::TypeRedexesFirst => step_lo(self, true).or_else(|| step_lo(self, false)),
        }
    }

    pub fn is_normal(&self) -> bool {
        contract(self).is_none() && children(self).into_iter().all(FTerm::is_normal)
    }

    /// Normal form and step count, or `None` if `budget` steps do not suffice.
    pub fn normalize_with(&self, strategy: FStrategy, budget: usize) -> Option<(FTerm, usize)> {
        let mut t = self.clone();
        let mut steps = 0;
        while let Some(next) = t.step(strategy) {
            if steps == budget {
                return None;
            }
            t = next;
            steps += 1;
        }
        Some((t, steps))
    }

    /// Every intermediate term from `self` to its normal form.
    pub fn reduction_trace(&self, strategy: FStrategy, budget: usize) -> Option<Vec<FTerm>> {
        let mut trace = vec![self.clone()];
        while let Some(next) = trace.last().unwrap().step(strategy) {
            if trace.len() > budget {
                return None;
            }
            trace.push(next);
        }
        Some(trace)
    }

    /// Leftmost-outermost normal form. Well-typed terms always have one.
    pub fn normalize(&self) -> FTerm {
        let mut t = self.clone();
        while let Some(next) = t.step(FStrategy::LeftmostOutermost) {
            t = next;
        }
        t
    }
}
