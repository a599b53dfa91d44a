//! Monotone NAE 3-SAT with two appearances per variable: variable graphs,
//! a Brooks-style 4-colouring, and the colouring-based solver. Also solves
//! complement-closed Monotone 3-SAT-(2,2) through its positive half.

mod graph;

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::formula::{
    validate_class, Assignment, Clause, CnfFormula, Dialect, ProblemClass, ValidationReport,
};

pub use graph::{complete_component_check, four_coloring, variable_graph, Coloring, VariableGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaeError {
    #[error("input is not in the required class:\n{0}")]
    InvalidInput(ValidationReport),
    #[error("vertex {var} has degree {degree}, above 4")]
    DegreeTooHigh { var: u32, degree: usize },
    #[error("component {vertices:?} is a complete graph and needs more than 4 colours")]
    CompleteComponent { vertices: Vec<u32> },
    #[error("colouring failed: {0}")]
    ColoringFailed(String),
    #[error("clause {clause} has no negated partner")]
    NotComplementClosed { clause: String },
    #[error("variable {var} is unassigned")]
    PartialAssignment { var: u32 },
    #[error("constructed assignment leaves clause {index} ({clause}) unsatisfied")]
    Unsatisfied { index: usize, clause: String },
}

/// A formula with its trivially satisfiable clause pairs removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stripped {
    pub formula: CnfFormula,
    /// One representative per removed pair.
    pub pairs: Vec<Clause>,
}

/// Removes clauses that occur exactly twice. In a twice-appearing instance
/// such a pair holds every occurrence of its three variables.
pub fn strip_trivial_pairs(f: &CnfFormula) -> Stripped {
    let mut counts: BTreeMap<&Clause, usize> = BTreeMap::new();
    for c in f.clauses() {
        *counts.entry(c).or_default() += 1;
    }
    let mut pairs = Vec::new();
    let mut kept = Vec::new();
    let mut taken: HashSet<&Clause> = HashSet::new();
    for c in f.clauses() {
        if counts[c] == 2 {
            if taken.insert(c) {
                pairs.push(c.clone());
            }
        } else {
            kept.push(c.clone());
        }
    }
    Stripped {
        formula: f.with_clauses(kept).expect("subset of a valid formula"),
        pairs,
    }
}

fn clause_nae(clause: &Clause, a: &Assignment) -> Result<bool, NaeError> {
    let mut seen = [false; 2];
    for &lit in clause.lits() {
        let value = a.lit_value(lit).ok_or(NaeError::PartialAssignment {
            var: lit.var().id(),
        })?;
        seen[value as usize] = true;
    }
    Ok(seen[0] && seen[1])
}

/// Every clause has a true and a false literal. `a` must be total on the
/// variables of `f`.
pub fn is_nae_satisfied(f: &CnfFormula, a: &Assignment) -> Result<bool, NaeError> {
    for clause in f.clauses() {
        if !clause_nae(clause, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require(f: &CnfFormula, class: ProblemClass) -> Result<(), NaeError> {
    let report = validate_class(f, class);
    if report.verdict() {
        Ok(())
    } else {
        Err(NaeError::InvalidInput(report))
    }
}

/// Nae-satisfying assignment of a Monotone NAE 3-SAT instance in which
/// every variable appears exactly twice. Colours 0 and 1 become true,
/// 2 and 3 false; stripped pairs get T, F, F.
pub fn nae_solve_e2(f: &CnfFormula) -> Result<Assignment, NaeError> {
    require(f, ProblemClass::MonoNaeE2)?;
    let stripped = strip_trivial_pairs(f);
    let g = variable_graph(&stripped.formula);
    let coloring = four_coloring(&g)?;
    let mut a = Assignment::new(f.n_vars());
    for (v, c) in coloring.iter() {
        a.set(v, c < 2);
    }
    for pair in &stripped.pairs {
        for (i, v) in pair.vars().into_iter().enumerate() {
            a.set(v, i == 0);
        }
    }
    for (index, clause) in f.clauses().iter().enumerate() {
        if !clause_nae(clause, &a)? {
            return Err(NaeError::Unsatisfied {
                index,
                clause: clause.to_string(),
            });
        }
    }
    Ok(a)
}

/// Satisfying assignment of a Monotone 3-SAT-(2,2) instance that contains
/// the negation of each of its clauses.
pub fn solve_complement_closed_22(f: &CnfFormula) -> Result<Assignment, NaeError> {
    require(f, ProblemClass::Mono3Sat22)?;
    let present: HashSet<&Clause> = f.clauses().iter().collect();
    if let Some(c) = f.clauses().iter().find(|c| !present.contains(&c.negated())) {
        return Err(NaeError::NotComplementClosed {
            clause: c.to_string(),
        });
    }
    let positive: Vec<Clause> = f
        .clauses()
        .iter()
        .filter(|c| c.negative_count() == 0)
        .cloned()
        .collect();
    let projection =
        CnfFormula::new(f.n_vars(), positive, Dialect::Strict).expect("subset of a valid formula");
    let a = nae_solve_e2(&projection)?;
    if let Some((index, clause)) = f
        .clauses()
        .iter()
        .enumerate()
        .find(|(_, c)| c.eval(&a) != Some(true))
    {
        return Err(NaeError::Unsatisfied {
            index,
            clause: clause.to_string(),
        });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Var;
    use crate::gadgets::build_u_nae;
    use crate::generate::{random_complement_closed_22, random_nae_e2, seeded_rng};
    use proptest::prelude::*;

    #[test]
    fn strips_duplicated_pair() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3], &[1, 2, 3]]);
        let s = strip_trivial_pairs(&f);
        assert!(s.formula.is_empty());
        assert_eq!(s.pairs, vec![Clause::from_dimacs(&[1, 2, 3])]);
        let a = nae_solve_e2(&f).unwrap();
        assert_eq!(a.to_bools(), vec![true, false, false]);
    }

    #[test]
    fn no_duplicates_no_change() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6], &[3, 5, 6]]);
        let s = strip_trivial_pairs(&f);
        assert_eq!(s.formula, f);
        assert!(s.pairs.is_empty());
    }

    #[test]
    fn u_nae_is_k7() {
        let f = build_u_nae();
        let g = variable_graph(&f);
        assert_eq!(complete_component_check(&g, 7).len(), 1);
        for value in [false, true] {
            let a = Assignment::total(vec![value; 7]);
            assert!(!is_nae_satisfied(&f, &a).unwrap());
        }
    }

    #[test]
    fn partial_assignment_rejected() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        let mut a = Assignment::new(3);
        a.set(Var::new(1), true);
        assert_eq!(
            is_nae_satisfied(&f, &a),
            Err(NaeError::PartialAssignment { var: 2 })
        );
    }

    #[test]
    fn complement_closed_example() {
        let f = CnfFormula::from_dimacs(&[
            &[1, 2, 3],
            &[1, 4, 5],
            &[2, 4, 6],
            &[3, 5, 6],
            &[-1, -2, -3],
            &[-1, -4, -5],
            &[-2, -4, -6],
            &[-3, -5, -6],
        ]);
        let a = solve_complement_closed_22(&f).unwrap();
        assert!(f.is_satisfied_by(&a));
    }

    #[test]
    fn missing_complement_rejected() {
        let g = CnfFormula::from_dimacs(&[
            &[1, 2, 3],
            &[1, 4, 5],
            &[2, 4, 6],
            &[3, 5, 6],
            &[-1, -2, -3],
            &[-1, -4, -6],
            &[-2, -4, -5],
            &[-3, -5, -6],
        ]);
        assert!(validate_class(&g, ProblemClass::Mono3Sat22).verdict());
        assert_eq!(
            solve_complement_closed_22(&g),
            Err(NaeError::NotComplementClosed {
                clause: Clause::from_dimacs(&[1, 4, 5]).to_string()
            })
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_instances_are_nae_satisfied(seed in any::<u64>(), k in 1u32..=20) {
            let f = random_nae_e2(3 * k, &mut seeded_rng(seed)).unwrap();
            let a = nae_solve_e2(&f).unwrap();
            prop_assert!(is_nae_satisfied(&f, &a).unwrap());
            let stripped = strip_trivial_pairs(&f);
            let g = variable_graph(&stripped.formula);
            prop_assert!(g.vertices().all(|v| (3..=4).contains(&g.degree(v))));
        }

        #[test]
        fn complement_closed_instances_are_satisfied(seed in any::<u64>(), k in 2u32..=10) {
            let f = random_complement_closed_22(3 * k, &mut seeded_rng(seed)).unwrap();
            let a = solve_complement_closed_22(&f).unwrap();
            prop_assert!(f.is_satisfied_by(&a));
        }

        /// Three pairwise distinct colours always straddle the {0,1} / {2,3}
        /// split.
        #[test]
        fn color_map_is_sound(a in 0u8..4, b in 0u8..4, c in 0u8..4) {
            prop_assume!(a != b && b != c && a != c);
            let values = [a < 2, b < 2, c < 2];
            prop_assert!(values.contains(&true) && values.contains(&false));
        }
    }
}
