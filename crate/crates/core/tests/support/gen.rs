//! Seeded random terms for the reduction properties.
//!
//! Generation is type-directed, so every term is well typed by construction.
//! Constants make every type inhabited, and explicit redexes are inserted so
//! that reduction has something to do.

use catgram_core::category::Category;
use catgram_core::lambda::{SemType, Term};
use catgram_core::system_f::{FTerm, FType};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_category<R: Rng>(rng: &mut R, atoms: &[&str], max_connectives: usize) -> Category {
    let k = rng.gen_range(0..=max_connectives);
    category_with(rng, atoms, k)
}

fn category_with<R: Rng>(rng: &mut R, atoms: &[&str], k: usize) -> Category {
    if k == 0 {
        return Category::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    let left = rng.gen_range(0..k);
    let x = category_with(rng, atoms, left);
    let y = category_with(rng, atoms, k - 1 - left);
    if rng.gen_bool(0.5) {
        Category::under(x, y)
    } else {
        Category::over(x, y)
    }
}

pub fn random_semtype(rng: &mut ChaCha8Rng, depth: usize) -> SemType {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen_bool(0.5) { SemType::E } else { SemType::T };
    }
    SemType::arrow(random_semtype(rng, depth - 1), random_semtype(rng, depth - 1))
}

/// A constant name determined by its type, so that a signature built from
/// the names is always consistent.
pub fn constant_name(ty: &SemType) -> String {
    fn code(ty: &SemType, out: &mut String) {
        match ty {
            SemType::E => out.push('e'),
            SemType::T => out.push('t'),
            SemType::V => out.push('v'),
            SemType::Arrow(a, b) => {
                out.push('f');
                code(a, out);
                code(b, out);
            }
        }
    }
    let mut out = String::from("k_");
    code(ty, &mut out);
    out
}

/// A closed term with at most `max_size` nodes.
pub fn random_term(rng: &mut ChaCha8Rng, max_size: usize) -> Term {
    loop {
        let ty = random_semtype(rng, 2);
        let t = term_of(rng, &ty, &mut Vec::new(), max_size as i64);
        if t.size() <= max_size {
            return t;
        }
    }
}

/// A term of type `ty` in the context `ctx` (innermost binder last).
pub fn term_of(rng: &mut ChaCha8Rng, ty: &SemType, ctx: &mut Vec<SemType>, budget: i64) -> Term {
    if budget <= 2 {
        return leaf(rng, ty, ctx);
    }
    match rng.gen_range(0..10) {
        0..=2 => match ty {
            SemType::Arrow(a, b) => {
                ctx.push((**a).clone());
                let body = term_of(rng, b, ctx, budget - 1);
                ctx.pop();
                Term::Abs(binder(a), Box::new(body))
            }
            _ => leaf(rng, ty, ctx),
        },
        3..=5 => {
            let a = random_semtype(rng, 1);
            ctx.push(a.clone());
            let body = term_of(rng, ty, ctx, budget / 2);
            ctx.pop();
            let arg = term_of(rng, &a, ctx, budget / 2 - 1);
            Term::app(Term::Abs(binder(&a), Box::new(body)), arg)
        }
        6..=7 => {
            let a = random_semtype(rng, 1);
            let f = term_of(rng, &SemType::arrow(a.clone(), ty.clone()), ctx, budget / 2);
            let x = term_of(rng, &a, ctx, budget / 2);
            Term::app(f, x)
        }
        _ => leaf(rng, ty, ctx),
    }
}

fn binder(ty: &SemType) -> catgram_core::lambda::Binder {
    catgram_core::lambda::Binder { hint: "x".into(), ty: ty.clone() }
}

fn leaf(rng: &mut ChaCha8Rng, ty: &SemType, ctx: &[SemType]) -> Term {
    let candidates: Vec<usize> = ctx.iter().rev().enumerate().filter(|(_, t)| *t == ty).map(|(i, _)| i).collect();
    if !candidates.is_empty() && rng.gen_bool(0.7) {
        Term::Bound(candidates[rng.gen_range(0..candidates.len())])
    } else {
        Term::constant(constant_name(ty), ty.clone())
    }
}

/// A closed System F type, with up to `tdepth` type variables in scope.
pub fn random_ftype(rng: &mut ChaCha8Rng, tdepth: usize, depth: usize) -> FType {
    let roll = rng.gen_range(0..10);
    if depth == 0 || roll < 4 {
        return if tdepth > 0 && roll < 2 {
            FType::Var(rng.gen_range(0..tdepth))
        } else if roll % 2 == 0 {
            FType::base("e")
        } else {
            FType::t()
        };
    }
    if roll < 8 {
        FType::arrow(random_ftype(rng, tdepth, depth - 1), random_ftype(rng, tdepth, depth - 1))
    } else {
        FType::forall("a", random_ftype(rng, tdepth + 1, depth - 1))
    }
}

/// A closed, well-typed System F term with at most `max_size` nodes.
pub fn random_fterm(rng: &mut ChaCha8Rng, max_size: usize) -> FTerm {
    loop {
        let ty = random_ftype(rng, 0, 2);
        let t = fterm_of(rng, &ty, &mut Vec::new(), 0, max_size as i64);
        if t.size() <= max_size {
            return t;
        }
    }
}

fn identity() -> FTerm {
    FTerm::TyAbs("a".into(), Box::new(FTerm::Abs("x".into(), FType::Var(0), Box::new(FTerm::Bound(0)))))
}

fn tau() -> FTerm {
    let a = FType::Var(0);
    FTerm::constant("tau", FType::forall("a", FType::arrow(FType::arrow(a.clone(), FType::t()), a)))
}

/// Term variables are stored with the type depth at which they were bound.
pub fn fterm_of(rng: &mut ChaCha8Rng, ty: &FType, ctx: &mut Vec<(FType, usize)>, tdepth: usize, budget: i64) -> FTerm {
    if let FType::Forall(_, body) = ty {
        return FTerm::TyAbs("a".into(), Box::new(fterm_of(rng, body, ctx, tdepth + 1, budget - 1)));
    }
    if budget <= 3 {
        return fleaf(rng, ty, ctx, tdepth);
    }
    match rng.gen_range(0..12) {
        0..=2 => match ty {
            FType::Arrow(a, b) => {
                ctx.push(((**a).clone(), tdepth));
                let body = fterm_of(rng, b, ctx, tdepth, budget - 1);
                ctx.pop();
                FTerm::Abs("x".into(), (**a).clone(), Box::new(body))
            }
            _ => fleaf(rng, ty, ctx, tdepth),
        },
        3..=4 => {
            let a = random_ftype(rng, tdepth, 1);
            ctx.push((a.clone(), tdepth));
            let body = fterm_of(rng, ty, ctx, tdepth, budget / 2);
            ctx.pop();
            let arg = fterm_of(rng, &a, ctx, tdepth, budget / 2 - 1);
            FTerm::app(FTerm::Abs("x".into(), a, Box::new(body)), arg)
        }
        5..=6 => {
            // a type redex around a term redex
            let arg = fterm_of(rng, ty, ctx, tdepth, budget - 3);
            FTerm::app(FTerm::ty_app(identity(), ty.clone()), arg)
        }
        7 => {
            // instantiate a polymorphic argument generated on the spot
            let body = random_ftype(rng, tdepth + 1, 1);
            let poly = FType::forall("a", body.clone());
            let u = random_ftype(rng, tdepth, 1);
            let inst = body.instantiate(0, &u);
            if &inst != ty {
                return fleaf(rng, ty, ctx, tdepth);
            }
            let p = fterm_of(rng, &poly, ctx, tdepth, budget - 2);
            FTerm::ty_app(p, u)
        }
        8..=9 => {
            let a = random_ftype(rng, tdepth, 1);
            let f = fterm_of(rng, &FType::arrow(a.clone(), ty.clone()), ctx, tdepth, budget / 2);
            let x = fterm_of(rng, &a, ctx, tdepth, budget / 2);
            FTerm::app(f, x)
        }
        _ => fleaf(rng, ty, ctx, tdepth),
    }
}

fn fleaf(rng: &mut ChaCha8Rng, ty: &FType, ctx: &[(FType, usize)], tdepth: usize) -> FTerm {
    let candidates: Vec<usize> = ctx
        .iter()
        .rev()
        .enumerate()
        .filter(|(_, (t, d))| &t.shift((tdepth - d) as isize, 0) == ty)
        .map(|(i, _)| i)
        .collect();
    if !candidates.is_empty() && rng.gen_bool(0.7) {
        return FTerm::Bound(candidates[rng.gen_range(0..candidates.len())]);
    }
    match ty {
        FType::Base(_) => FTerm::constant(format!("c_{ty}"), ty.clone()),
        // the binder of the selection predicate is the innermost term binder,
        // and the predicate body mentions nothing local
        _ => FTerm::app(
            FTerm::ty_app(tau(), ty.clone()),
            FTerm::Abs("z".into(), ty.clone(), Box::new(FTerm::constant("c_t", FType::t()))),
        ),
    }
}
