mod support;

use std::collections::BTreeSet;

use catgram_core::lambda::{parse_term, SemType, Signature, Strategy, Term, Var};
use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};
use proptest::strategy::Strategy as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::gen::{random_semtype, random_term, term_of};

/// Named terms with textbook capture-avoiding substitution.
#[derive(Clone, Debug)]
enum Named {
    Var(String),
    Con(String),
    App(Box<Named>, Box<Named>),
    Lam(String, SemType, Box<Named>),
}

fn to_named(t: &Term, scope: &mut Vec<String>, counter: &mut usize) -> Named {
    match t {
        Term::Var(v) => Named::Var(v.name.clone()),
        Term::Bound(k) => Named::Var(scope[scope.len() - 1 - k].clone()),
        Term::Const(c, _) => Named::Con(c.clone()),
        Term::App(f, a) => Named::App(Box::new(to_named(f, scope, counter)), Box::new(to_named(a, scope, counter))),
        Term::Abs(b, body) => {
            let name = format!("b{counter}");
            *counter += 1;
            scope.push(name.clone());
            let body = to_named(body, scope, counter);
            scope.pop();
            Named::Lam(name, b.ty.clone(), Box::new(body))
        }
    }
}

fn free(n: &Named, out: &mut BTreeSet<String>) {
    match n {
        Named::Var(x) => {
            out.insert(x.clone());
        }
        Named::Con(_) => {}
        Named::App(f, a) => {
            free(f, out);
            free(a, out);
        }
        Named::Lam(x, _, b) => {
            let mut inner = BTreeSet::new();
            free(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
    }
}

fn subst(n: &Named, x: &str, u: &Named, fresh: &mut usize) -> Named {
    match n {
        Named::Var(y) if y == x => u.clone(),
        Named::Var(_) | Named::Con(_) => n.clone(),
        Named::App(f, a) => Named::App(Box::new(subst(f, x, u, fresh)), Box::new(subst(a, x, u, fresh))),
        Named::Lam(y, _, _) if y == x => n.clone(),
        Named::Lam(y, ty, body) => {
            let mut fv = BTreeSet::new();
            free(u, &mut fv);
            if fv.contains(y) {
                let z = format!("r{fresh}");
                *fresh += 1;
                let renamed = subst(body, y, &Named::Var(z.clone()), fresh);
                Named::Lam(z, ty.clone(), Box::new(subst(&renamed, x, u, fresh)))
            } else {
                Named::Lam(y.clone(), ty.clone(), Box::new(subst(body, x, u, fresh)))
            }
        }
    }
}

fn alpha(a: &Named, b: &Named, env: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Named::Var(x), Named::Var(y)) => {
            match (env.iter().rev().find(|(l, _)| l == x), env.iter().rev().find(|(_, r)| r == y)) {
                (Some((_, r)), Some((l, _))) => r == y && l == x,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Named::Con(c), Named::Con(d)) => c == d,
        (Named::App(f, x), Named::App(g, y)) => alpha(f, g, env) && alpha(x, y, env),
        (Named::Lam(x, s, p), Named::Lam(y, t, q)) => {
            env.push((x.clone(), y.clone()));
            let ok = s == t && alpha(p, q, env);
            env.pop();
            ok
        }
        _ => false,
    }
}

/// Replaces the indices that escape `depth` binders, innermost first, by
/// the given free variables.
fn close_over(t: &Term, vars: &[Var], depth: usize) -> Term {
    match t {
        Term::Bound(k) if *k >= depth => Term::Var(vars[vars.len() - 1 - (k - depth)].clone()),
        Term::App(f, a) => Term::app(close_over(f, vars, depth), close_over(a, vars, depth)),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(close_over(body, vars, depth + 1))),
        other => other.clone(),
    }
}

fn open_term(rng: &mut ChaCha8Rng, ty: &SemType, free: &[Var], budget: i64) -> Term {
    let mut ctx: Vec<SemType> = free.iter().map(|v| v.ty.clone()).collect();
    close_over(&term_of(rng, ty, &mut ctx, budget), free, 0)
}

fn closed_term() -> impl proptest::strategy::Strategy<Value = Term> {
    any::<u64>().prop_map(|seed| random_term(&mut ChaCha8Rng::seed_from_u64(seed), 30))
}

fn steps_preserve_type(t: &Term, strategy: Strategy) -> bool {
    let ty = t.type_of().unwrap();
    t.reduction_trace(strategy, 10_000).unwrap().iter().all(|s| s.type_of().as_ref() == Ok(&ty))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn substitution_agrees_with_named_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_semtype(&mut rng, 1);
        let x = Var::new("x", a.clone());
        // free names of `u` clash with the names the oracle gives binders
        let y = Var::new("b1", random_semtype(&mut rng, 1));
        let b = random_semtype(&mut rng, 2);
        let t = open_term(&mut rng, &b, std::slice::from_ref(&x), 20);
        let u = open_term(&mut rng, &a, std::slice::from_ref(&y), 10);

        let lib = t.substitute(&x, &u).unwrap();
        let (mut c1, mut c2, mut fresh) = (0, 500, 0);
        let expected = subst(&to_named(&t, &mut Vec::new(), &mut c1), "x", &to_named(&u, &mut Vec::new(), &mut c2), &mut fresh);
        let found = to_named(&lib, &mut Vec::new(), &mut 1000);
        prop_assert!(alpha(&found, &expected, &mut Vec::new()), "{} vs {:?}", lib, expected);
        prop_assert_eq!(lib.type_of().unwrap(), t.type_of().unwrap());
    }

    #[test]
    fn substitution_rejects_wrong_types(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = Var::new("x", SemType::E);
        let t = open_term(&mut rng, &SemType::T, std::slice::from_ref(&x), 10);
        prop_assert!(t.substitute(&x, &Term::constant("p", SemType::T)).is_err());
    }

    #[test]
    fn strategies_reach_the_same_normal_form(t in closed_term()) {
        let (lo, _) = t.normalize_with(Strategy::LeftmostOutermost, 10_000).unwrap();
        let (ri, _) = t.normalize_with(Strategy::RightmostInnermost, 10_000).unwrap();
        prop_assert!(lo.alpha_eq(&ri));
        prop_assert!(lo.is_normal());
        prop_assert!(lo.alpha_eq(&t.beta_normalize()));
    }

    #[test]
    fn reduction_preserves_types(t in closed_term()) {
        prop_assert!(steps_preserve_type(&t, Strategy::LeftmostOutermost));
        prop_assert!(steps_preserve_type(&t, Strategy::RightmostInnermost));
    }

    #[test]
    fn normalization_is_idempotent(t in closed_term()) {
        let n = t.beta_normalize();
        prop_assert_eq!(n.beta_normalize(), n.clone());
        prop_assert_eq!(n.step(Strategy::LeftmostOutermost), None);
    }

    #[test]
    fn display_reparses(t in closed_term()) {
        let mut sig = Signature::empty();
        let mut consts = Vec::new();
        collect_constants(&t, &mut consts);
        for (c, ty) in consts {
            sig.declare(c, ty).unwrap();
        }
        prop_assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
    }
}

fn collect_constants(t: &Term, out: &mut Vec<(String, SemType)>) {
    match t {
        Term::Const(c, ty) => out.push((c.clone(), ty.clone())),
        Term::App(f, a) => {
            collect_constants(f, out);
            collect_constants(a, out);
        }
        Term::Abs(_, b) => collect_constants(b, out),
        _ => {}
    }
}

#[test]
fn substitution_under_a_binder_renames() {
    let y = Var::new("y", SemType::E);
    let x = Var::new("x", SemType::E);
    let t = Term::lam(
        &y,
        Term::apply(
            Term::constant("r", SemType::arrow(SemType::E, SemType::arrow(SemType::E, SemType::T))),
            [Term::Var(x.clone()), Term::Var(y.clone())],
        ),
    );
    let out = t.substitute(&x, &Term::Var(y.clone())).unwrap();
    // the substituted `y` stays free and distinct from the bound one
    assert_eq!(out.free_vars().into_iter().collect::<Vec<_>>(), vec![&y]);
    assert!(!out.to_string().contains("λy:e. r y y"), "{out}");
}
