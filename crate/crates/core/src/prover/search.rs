//! Backward search over normal natural-deduction derivations.
//!
//! A normal derivation of `Γ ⊢ C` either ends with an introduction rule on
//! `C`, or is an elimination spine: a hypothesis of `Γ` (the head) whose
//! slashes are peeled one by one, each elimination consuming a contiguous
//! block of `Γ` next to the part already covered. Minor premises are
//! themselves normal derivations. Every recursive call shrinks the total
//! size of the sequent, so the search is finite.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::{Derivation, ProveError, Rule, SearchConfig, Sequent};
use crate::category::{group_check, Category};

/// All normal derivations of `s`, deduplicated and capped at
/// `cfg.max_derivations`. An empty result means `s` is not derivable.
pub fn prove(s: &Sequent, cfg: &SearchConfig) -> Result<Vec<Derivation>, ProveError> {
    if cfg.max_category_size == 0 || cfg.max_derivations == 0 {
        return Err(ProveError::InvalidConfig);
    }
    for c in s.categories() {
        let size = c.connectives();
        if size > cfg.max_category_size {
            return Err(ProveError::LimitExceeded { category: c.to_string(), size, limit: cfg.max_category_size });
        }
    }
    let mut search = Search { cfg, memo: HashMap::new() };
    Ok(search.normal(&s.antecedent, &s.goal).as_ref().clone())
}

type Key = (Vec<Category>, Category);

struct Search<'a> {
    cfg: &'a SearchConfig,
    memo: HashMap<Key, Rc<Vec<Derivation>>>,
}

impl Search<'_> {
    fn full(&self, out: &[Derivation]) -> bool {
        out.len() >= self.cfg.max_derivations
    }

    fn normal(&mut self, ant: &[Category], goal: &Category) -> Rc<Vec<Derivation>> {
        if ant.is_empty() && !self.cfg.allow_empty_antecedent {
            return Rc::default();
        }
        if !group_check(ant, goal) {
            return Rc::default();
        }
        let key = (ant.to_vec(), goal.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }

        let mut out = Vec::new();
        self.introductions(ant, goal, &mut out);
        for head in 0..ant.len() {
            if self.full(&out) {
                break;
            }
            if !reaches(&ant[head], goal) {
                continue;
            }
            let start = Derivation::axiom(ant[head].clone());
            self.spine(ant, goal, head, head + 1, start, &mut out);
        }

        let mut seen = HashSet::new();
        out.retain(|d| seen.insert(d.clone()));
        out.truncate(self.cfg.max_derivations);
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn introductions(&mut self, ant: &[Category], goal: &Category, out: &mut Vec<Derivation>) {
        let conclusion = || Sequent::new(ant.to_vec(), goal.clone());
        match goal {
            Category::Under(a, c) => {
                let mut premise_ant = Vec::with_capacity(ant.len() + 1);
                premise_ant.push((**a).clone());
                premise_ant.extend_from_slice(ant);
                for p in self.normal(&premise_ant, c).iter() {
                    out.push(Derivation {
                        rule: Rule::UnderIntro,
                        conclusion: conclusion(),
                        premises: vec![p.clone()],
                    });
                }
            }
            Category::Over(c, a) => {
                let mut premise_ant = ant.to_vec();
                premise_ant.push((**a).clone());
                for p in self.normal(&premise_ant, c).iter() {
                    out.push(Derivation { rule: Rule::OverIntro, conclusion: conclusion(), premises: vec![p.clone()] });
                }
            }
            Category::Atom(_) => {}
        }
    }

    /// `current` derives `ant[lo..hi] ⊢ current.goal`; extend it to the whole of
    /// `ant` by further eliminations.
    fn spine(
        &mut self,
        ant: &[Category],
        goal: &Category,
        lo: usize,
        hi: usize,
        current: Derivation,
        out: &mut Vec<Derivation>,
    ) {
        if self.full(out) {
            return;
        }
        let covered = lo == 0 && hi == ant.len();
        if covered && current.conclusion.goal == *goal {
            out.push(current);
            return;
        }
        if covered && !self.cfg.allow_empty_antecedent {
            return;
        }
        let min_block = usize::from(!self.cfg.allow_empty_antecedent);
        match current.conclusion.goal.clone() {
            Category::Over(b, a) => {
                if !reaches(&b, goal) {
                    return;
                }
                for end in (hi + min_block)..=ant.len() {
                    let minors = self.normal(&ant[hi..end], &a);
                    for minor in minors.iter() {
                        let next = Derivation {
                            rule: Rule::OverElim,
                            conclusion: Sequent::new(ant[lo..end].to_vec(), (*b).clone()),
                            premises: vec![current.clone(), minor.clone()],
                        };
                        self.spine(ant, goal, lo, end, next, out);
                        if self.full(out) {
                            return;
                        }
                    }
                }
            }
            Category::Under(a, b) => {
                if !reaches(&b, goal) {
                    return;
                }
                if lo < min_block {
                    return;
                }
                for start in (0..=lo - min_block).rev() {
                    let minors = self.normal(&ant[start..lo], &a);
                    for minor in minors.iter() {
                        let next = Derivation {
                            rule: Rule::UnderElim,
                            conclusion: Sequent::new(ant[start..hi].to_vec(), (*b).clone()),
                            premises: vec![minor.clone(), current.clone()],
                        };
                        self.spine(ant, goal, start, hi, next, out);
                        if self.full(out) {
                            return;
                        }
                    }
                }
            }
            Category::Atom(_) => {}
        }
    }
}

/// Whether peeling slashes off `head` can ever produce `goal`.
fn reaches(head: &Category, goal: &Category) -> bool {
    head == goal
        || match head {
            Category::Atom(_) => false,
            Category::Under(_, result) | Category::Over(result, _) => reaches(result, goal),
        }
}
