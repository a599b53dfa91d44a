//! Model counting by DPLL and model enumeration by blocking clauses. The two
//! take different routes so each can be checked against the other.

use serde::Serialize;

use crate::formula::{Assignment, Clause, CnfFormula, Lit};

use super::cdcl::{Outcome, Solver};
use super::DEFAULT_CONFLICT_BUDGET;

/// Number of models, or a lower bound when `capped` is set.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModelCount {
    pub count: u64,
    pub capped: bool,
}

impl ModelCount {
    pub fn exact(count: u64) -> ModelCount {
        ModelCount {
            count,
            capped: false,
        }
    }
}

/// Counts models exactly while fewer than `cap` exist; otherwise returns
/// `count = cap` with `capped` set.
pub fn count_models(formula: &CnfFormula, cap: u64) -> ModelCount {
    let clauses: Vec<Vec<i32>> = formula
        .clauses()
        .iter()
        .filter(|c| !c.is_tautology())
        .map(|c| {
            let mut lits = c.to_dimacs();
            lits.dedup();
            lits
        })
        .collect();
    let mut counter = Counter { cap, total: 0 };
    counter.count(clauses, formula.n_vars());
    if counter.total >= cap {
        ModelCount {
            count: cap,
            capped: true,
        }
    } else {
        ModelCount::exact(counter.total)
    }
}

struct Counter {
    cap: u64,
    total: u64,
}

fn pow2(free: u32) -> u64 {
    1u64.checked_shl(free).unwrap_or(u64::MAX)
}

impl Counter {
    /// Adds the models of `clauses` over `free` unassigned variables.
    fn count(&mut self, mut clauses: Vec<Vec<i32>>, mut free: u32) {
        if self.total >= self.cap {
            return;
        }
        // Unit propagation.
        loop {
            if clauses.iter().any(Vec::is_empty) {
                return;
            }
            let Some(unit) = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]) else {
                break;
            };
            clauses = assign(&clauses, unit);
            free -= 1;
        }
        if clauses.is_empty() {
            self.total = self.total.saturating_add(pow2(free));
            return;
        }
        let branch = clauses
            .iter()
            .min_by_key(|c| c.len())
            .map(|c| c[0].abs())
            .expect("non-empty");
        for lit in [branch, -branch] {
            self.count(assign(&clauses, lit), free - 1);
            if self.total >= self.cap {
                return;
            }
        }
    }
}

fn assign(clauses: &[Vec<i32>], lit: i32) -> Vec<Vec<i32>> {
    clauses
        .iter()
        .filter(|c| !c.contains(&lit))
        .map(|c| c.iter().copied().filter(|&l| l != -lit).collect())
        .collect()
}

/// Models found by enumeration, in the order the solver produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelList {
    pub models: Vec<Assignment>,
    /// Set when `cap` was reached (further models may exist) or the solver
    /// ran out of budget.
    pub truncated: bool,
}

/// Enumerates up to `cap` distinct total models by adding a blocking clause
/// over all variables after each one.
pub fn enumerate_models(formula: &CnfFormula, cap: usize) -> ModelList {
    let mut solver = Solver::from_formula(formula, false);
    let mut models = Vec::new();
    loop {
        if models.len() >= cap {
            return ModelList {
                models,
                truncated: true,
            };
        }
        match solver.solve(DEFAULT_CONFLICT_BUDGET) {
            Outcome::Unsat => {
                return ModelList {
                    models,
                    truncated: false,
                }
            }
            Outcome::Budget => {
                return ModelList {
                    models,
                    truncated: true,
                }
            }
            Outcome::Sat => {
                let model = solver.model();
                debug_assert!(formula.is_satisfied_by(&model));
                let blocking: Vec<Lit> = model.assigned().map(|(v, b)| Lit::new(v, !b)).collect();
                models.push(model);
                if blocking.is_empty() {
                    // Zero variables: the single empty model.
                    return ModelList {
                        models,
                        truncated: false,
                    };
                }
                solver.add_clause(Clause::new(blocking).lits());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_variables() {
        assert_eq!(
            count_models(&CnfFormula::empty(3), u64::MAX),
            ModelCount::exact(8)
        );
        assert_eq!(enumerate_models(&CnfFormula::empty(3), 100).models.len(), 8);
    }

    #[test]
    fn single_clause() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        assert_eq!(count_models(&f, u64::MAX), ModelCount::exact(7));
    }

    #[test]
    fn unit_clause_enumeration() {
        let f = CnfFormula::from_dimacs(&[&[1]]);
        let list = enumerate_models(&f, 10);
        assert_eq!(list.models, vec![Assignment::total(vec![true])]);
        assert!(!list.truncated);
    }

    #[test]
    fn nae_triple_has_six_models() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3], &[-1, -2, -3]]);
        let list = enumerate_models(&f, 100);
        assert_eq!(list.models.len(), 6);
        assert_eq!(count_models(&f, 100), ModelCount::exact(6));
    }

    #[test]
    fn cap_is_reported() {
        let f = CnfFormula::empty(10);
        assert_eq!(
            count_models(&f, 5),
            ModelCount {
                count: 5,
                capped: true
            }
        );
        let list = enumerate_models(&f, 5);
        assert_eq!(list.models.len(), 5);
        assert!(list.truncated);
    }

    #[test]
    fn zero_variables() {
        let f = CnfFormula::empty(0);
        assert_eq!(count_models(&f, 10), ModelCount::exact(1));
        assert_eq!(enumerate_models(&f, 10).models.len(), 1);
    }
}
