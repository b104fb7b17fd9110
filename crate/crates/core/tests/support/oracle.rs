//! Derivability by forward chaining in the cut-free sequent calculus.
//!
//! Starting from atomic axioms `p ⊢ p`, the left and right rules are applied
//! until nothing new appears. Every rule removes one connective going
//! upwards and never lengthens `antecedent + connectives`, so bounding both
//! quantities keeps the closure finite while keeping every proof of the
//! sequents inside the bounds.

use std::collections::{HashSet, VecDeque};

use catgram_core::category::{Atom, Category};
use catgram_core::prover::Sequent;

pub type Seq = (Vec<Category>, Category);

fn connectives(s: &Seq) -> usize {
    s.0.iter().map(Category::connectives).sum::<usize>() + s.1.connectives()
}

pub struct Oracle {
    derivable: HashSet<Seq>,
    by_connectives: Vec<Vec<Seq>>,
}

impl Oracle {
    /// Closure over `atoms` with at most `max_connectives` connectives and
    /// antecedent length plus connectives at most `max_weight`.
    pub fn saturate(atoms: &[&str], max_connectives: usize, max_weight: usize) -> Oracle {
        Oracle::closure(atoms.iter().map(|a| Atom::new(a).unwrap()).collect(), max_connectives, max_weight, |_| true)
    }

    /// Closure restricted to what a proof of `target` can contain.
    pub fn for_sequent(target: &Sequent) -> Oracle {
        let universe: HashSet<Category> =
            target.categories().flat_map(|c| c.subcategories().into_iter().cloned()).collect();
        let k0 = target.connectives();
        let weight = target.antecedent.len() + k0;
        let atoms: HashSet<Atom> = target.categories().flat_map(|c| c.atoms().into_iter().cloned()).collect();
        Oracle::closure(atoms.into_iter().collect(), k0, weight, move |s| {
            s.0.iter().chain([&s.1]).all(|c| universe.contains(c))
        })
    }

    fn closure(atoms: Vec<Atom>, max_k: usize, max_weight: usize, keep: impl Fn(&Seq) -> bool) -> Oracle {
        let admit = |s: &Seq| {
            let k = connectives(s);
            k <= max_k && s.0.len() + k <= max_weight && keep(s)
        };
        let mut o = Oracle { derivable: HashSet::new(), by_connectives: Vec::new() };
        let mut queue = VecDeque::new();
        for a in atoms {
            let c = Category::Atom(a);
            let ax = (vec![c.clone()], c);
            if admit(&ax) && o.derivable.insert(ax.clone()) {
                queue.push_back(ax);
            }
        }
        while let Some(s) = queue.pop_front() {
            let mut fresh = Vec::new();
            right_rules(&s, &mut fresh);
            let k = connectives(&s);
            // pair with every processed sequent, in both roles, and with itself
            o.file(&s, k);
            // a left rule adds one connective to the two premises together
            let room = max_k.saturating_sub(k + 1);
            if k < max_k {
                for other in o.by_connectives.iter().take(room + 1).flatten() {
                    let weight = s.0.len() + other.0.len() + k + connectives(other) + 1;
                    if weight <= max_weight {
                        left_rules(&s, other, &mut fresh);
                        left_rules(other, &s, &mut fresh);
                    }
                }
            }
            for n in fresh {
                if admit(&n) && !o.derivable.contains(&n) {
                    o.derivable.insert(n.clone());
                    queue.push_back(n);
                }
            }
        }
        o
    }

    fn file(&mut self, s: &Seq, k: usize) {
        if self.by_connectives.len() <= k {
            self.by_connectives.resize(k + 1, Vec::new());
        }
        self.by_connectives[k].push(s.clone());
    }

    pub fn derives(&self, s: &Sequent) -> bool {
        self.derivable.contains(&(s.antecedent.clone(), s.goal.clone()))
    }

    pub fn len(&self) -> usize {
        self.derivable.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Seq> {
        self.derivable.iter()
    }
}

/// `Γ, A ⊢ B` gives `Γ ⊢ B/A`; `A, Γ ⊢ B` gives `Γ ⊢ A\B`; Γ non-empty.
fn right_rules(s: &Seq, out: &mut Vec<Seq>) {
    let (ant, goal) = s;
    if ant.len() < 2 {
        return;
    }
    let (last, init) = ant.split_last().unwrap();
    out.push((init.to_vec(), Category::over(goal.clone(), last.clone())));
    let (first, rest) = ant.split_first().unwrap();
    out.push((rest.to_vec(), Category::under(first.clone(), goal.clone())));
}

/// From `Γ ⊢ A` and `Δ, B, Θ ⊢ C`: `Δ, B/A, Γ, Θ ⊢ C` and `Δ, Γ, A\B, Θ ⊢ C`.
fn left_rules(minor: &Seq, major: &Seq, out: &mut Vec<Seq>) {
    let (gamma, a) = minor;
    let (pi, c) = major;
    for (i, b) in pi.iter().enumerate() {
        let mut over = pi[..i].to_vec();
        over.push(Category::over(b.clone(), a.clone()));
        over.extend(gamma.iter().cloned());
        over.extend(pi[i + 1..].iter().cloned());
        out.push((over, c.clone()));

        let mut under = pi[..i].to_vec();
        under.extend(gamma.iter().cloned());
        under.push(Category::under(a.clone(), b.clone()));
        under.extend(pi[i + 1..].iter().cloned());
        out.push((under, c.clone()));
    }
}

/// All categories over `atoms` with exactly `k` connectives.
pub fn categories_with(atoms: &[&str], k: usize) -> Vec<Category> {
    if k == 0 {
        return atoms.iter().map(|a| Category::atom(a)).collect();
    }
    let mut out = Vec::new();
    for left in 0..k {
        let right = k - 1 - left;
        for x in categories_with(atoms, left) {
            for y in categories_with(atoms, right) {
                out.push(Category::under(x.clone(), y.clone()));
                out.push(Category::over(x.clone(), y.clone()));
            }
        }
    }
    out
}

/// Every sequent with antecedent length at most `max_len` and at most
/// `max_connectives` connectives in total.
pub fn all_sequents(atoms: &[&str], max_len: usize, max_connectives: usize) -> Vec<Sequent> {
    let by_k: Vec<Vec<Category>> = (0..=max_connectives).map(|k| categories_with(atoms, k)).collect();
    let mut out = Vec::new();
    // distribute the connective budget over the antecedent and the goal
    fn go(
        by_k: &[Vec<Category>],
        remaining_len: usize,
        budget: usize,
        prefix: &mut Vec<Category>,
        out: &mut Vec<Sequent>,
    ) {
        for (k, goals) in by_k.iter().enumerate().take(budget + 1) {
            for g in goals {
                out.push(Sequent::new(prefix.clone(), g.clone()));
            }
            let _ = k;
        }
        if remaining_len == 0 {
            return;
        }
        for (k, cats) in by_k.iter().enumerate().take(budget + 1) {
            for c in cats {
                prefix.push(c.clone());
                go(by_k, remaining_len - 1, budget - k, prefix, out);
                prefix.pop();
            }
        }
    }
    go(&by_k, max_len, max_connectives, &mut Vec::new(), &mut out);
    out
}
