use super::{Assignment, Clause, CnfFormula, Lit};

/// Result of simplifying a formula under a partial assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplified {
    /// Remaining clauses. On conflict this is the single empty clause.
    pub formula: CnfFormula,
    /// The input assignment extended by every literal forced by unit propagation.
    pub assignment: Assignment,
    pub conflict: bool,
}

/// Removes satisfied clauses and false literals, then propagates unit clauses
/// to a fixpoint. Variables keep their ids.
pub fn simplify_under(formula: &CnfFormula, assignment: &Assignment) -> Simplified {
    let mut assignment = assignment.truncated(formula.n_vars());
    let mut clauses: Vec<Clause> = formula.clauses().to_vec();

    loop {
        let mut next = Vec::with_capacity(clauses.len());
        let mut units: Vec<Lit> = Vec::new();
        for clause in &clauses {
            if clause.is_tautology() || clause.eval(&assignment) == Some(true) {
                continue;
            }
            let rest: Vec<Lit> = clause
                .lits()
                .iter()
                .copied()
                .filter(|&l| assignment.lit_value(l).is_none())
                .collect();
            let reduced = Clause::new(rest);
            if reduced.is_empty() {
                return conflict(formula, assignment);
            }
            if reduced.vars().len() == 1 {
                units.push(reduced.lits()[0]);
            }
            next.push(reduced);
        }
        clauses = next;
        if units.is_empty() {
            break;
        }
        for unit in units {
            match assignment.lit_value(unit) {
                Some(true) => {}
                Some(false) => return conflict(formula, assignment),
                None => assignment.set(unit.var(), unit.is_positive()),
            }
        }
    }

    Simplified {
        formula: formula
            .with_clauses(clauses)
            .expect("simplification only removes literals"),
        assignment,
        conflict: false,
    }
}

fn conflict(formula: &CnfFormula, assignment: Assignment) -> Simplified {
    Simplified {
        formula: formula
            .with_clauses(vec![Clause::empty()])
            .expect("empty clause is well-formed"),
        assignment,
        conflict: true,
    }
}
