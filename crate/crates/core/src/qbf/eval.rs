use rayon::prelude::*;

use crate::formula::{simplify_under, Assignment, Clause, CnfFormula, Var};
use crate::sat::{solve_with, SolveError, SolverConfig, DEFAULT_CONFLICT_BUDGET};

use super::{Qbf2Formula, QbfError};

/// Components with more universals than this are refused.
pub const MAX_COMPONENT_UNIVERSALS: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QbfTruth {
    Yes,
    /// The lexicographically first universal assignment (declared order,
    /// F before T) with no existential response.
    No {
        counterexample: Assignment,
    },
    /// Some inner SAT call ran out of conflicts.
    Budget,
}

impl QbfTruth {
    pub fn is_yes(&self) -> bool {
        matches!(self, QbfTruth::Yes)
    }
}

pub fn qbf_truth(q: &Qbf2Formula) -> Result<QbfTruth, QbfError> {
    qbf_truth_with(q, DEFAULT_CONFLICT_BUDGET)
}

/// Decides `q` by enumerating universal assignments. The matrix is first
/// split into variable-disjoint components, each decided on its own.
pub fn qbf_truth_with(q: &Qbf2Formula, conflict_budget: u64) -> Result<QbfTruth, QbfError> {
    let n = q.n_vars();
    let mut is_universal = vec![false; n as usize];
    for v in q.universals() {
        is_universal[v.index()] = true;
    }
    let comps = components(q.matrix());
    if let Some(big) = comps
        .iter()
        .map(|(vars, _)| vars.iter().filter(|v| is_universal[v.index()]).count())
        .max()
        .filter(|&c| c > MAX_COMPONENT_UNIVERSALS)
    {
        return Err(QbfError::TooManyUniversals {
            count: big,
            limit: MAX_COMPONENT_UNIVERSALS,
        });
    }

    let rank: std::collections::HashMap<Var, usize> = q
        .universals()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let mut best: Option<Assignment> = None;
    for (vars, clauses) in comps {
        let mut univ: Vec<Var> = vars
            .into_iter()
            .filter(|v| is_universal[v.index()])
            .collect();
        univ.sort_by_key(|v| rank[v]);
        let matrix = CnfFormula::from_clauses(n, clauses).expect("component of a valid matrix");
        match first_failure(&matrix, &univ, conflict_budget) {
            Failure::None => {}
            Failure::Budget => return Ok(QbfTruth::Budget),
            Failure::At(local) => {
                let mut global = Assignment::new(n);
                for &u in q.universals() {
                    global.set(u, false);
                }
                for (&u, b) in univ.iter().zip(local) {
                    global.set(u, b);
                }
                let key = |a: &Assignment| -> Vec<bool> {
                    q.universals()
                        .iter()
                        .map(|&u| a.get(u) == Some(true))
                        .collect()
                };
                if best.as_ref().is_none_or(|b| key(&global) < key(b)) {
                    best = Some(global);
                }
            }
        }
    }
    Ok(match best {
        Some(counterexample) => QbfTruth::No { counterexample },
        None => QbfTruth::Yes,
    })
}

enum Failure {
    None,
    Budget,
    At(Vec<bool>),
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Status {
    Sat,
    Unsat,
    Budget,
}

/// Values of `univ` for assignment number `index`; the first universal is
/// the most significant bit.
fn decode(index: u64, k: usize) -> Vec<bool> {
    (0..k).map(|j| index >> (k - 1 - j) & 1 == 1).collect()
}

fn first_failure(matrix: &CnfFormula, univ: &[Var], budget: u64) -> Failure {
    let k = univ.len();
    let check = |index: u64| -> Status {
        let mut a = Assignment::new(matrix.n_vars());
        for (&u, b) in univ.iter().zip(decode(index, k)) {
            a.set(u, b);
        }
        let s = simplify_under(matrix, &a);
        if s.conflict {
            return Status::Unsat;
        }
        if s.formula.is_empty() {
            return Status::Sat;
        }
        let config = SolverConfig {
            conflict_budget: budget,
            trace: false,
        };
        match solve_with(&s.formula, config) {
            Ok(r) if r.is_sat() => Status::Sat,
            Ok(_) => Status::Unsat,
            Err(SolveError::Budget { .. }) => Status::Budget,
        }
    };
    let found = (0..1u64 << k)
        .into_par_iter()
        .map(|i| (i, check(i)))
        .find_first(|&(_, s)| s != Status::Sat);
    match found {
        None => Failure::None,
        Some((_, Status::Budget)) => Failure::Budget,
        Some((i, _)) => Failure::At(decode(i, k)),
    }
}

/// Variable-disjoint groups of clauses, each with its variable set.
fn components(matrix: &CnfFormula) -> Vec<(Vec<Var>, Vec<Clause>)> {
    let n = matrix.n_vars() as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for clause in matrix.clauses() {
        let vars = clause.vars();
        for w in vars.windows(2) {
            let (a, b) = (
                find(&mut parent, w[0].index()),
                find(&mut parent, w[1].index()),
            );
            parent[a] = b;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<Var>, Vec<Clause>)> = Default::default();
    for clause in matrix.clauses() {
        match clause.vars().first() {
            Some(v) => {
                let root = find(&mut parent, v.index());
                groups.entry(root).or_default().1.push(clause.clone());
            }
            // An empty clause makes every universal assignment fail.
            None => groups.entry(usize::MAX).or_default().1.push(clause.clone()),
        }
    }
    for v in matrix.vars() {
        let root = find(&mut parent, v.index());
        if let Some(g) = groups.get_mut(&root) {
            g.0.push(v);
        }
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;
    use crate::gadgets::{q1mon, q3};

    fn vars(ids: &[u32]) -> Vec<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    /// Naive ∀∃ evaluation without the solver.
    fn brute(q: &Qbf2Formula) -> bool {
        let u = q.universals();
        let e = q.existentials();
        (0..1u64 << u.len()).all(|ub| {
            (0..1u64 << e.len()).any(|eb| {
                let mut a = Assignment::new(q.n_vars());
                for (k, &v) in u.iter().enumerate() {
                    a.set(v, ub >> k & 1 == 1);
                }
                for (k, &v) in e.iter().enumerate() {
                    a.set(v, eb >> k & 1 == 1);
                }
                q.matrix().is_satisfied_by(&a)
            })
        })
    }

    #[test]
    fn quantified_enforcers_are_yes() {
        assert_eq!(qbf_truth(&q3()).unwrap(), QbfTruth::Yes);
        assert_eq!(qbf_truth(&q1mon()).unwrap(), QbfTruth::Yes);
        assert!(brute(&q3()));
    }

    #[test]
    fn unit_universal_is_no() {
        let m = CnfFormula::from_dimacs(&[&[1]]);
        let q = Qbf2Formula::new(vars(&[1]), vec![], m).unwrap();
        match qbf_truth(&q).unwrap() {
            QbfTruth::No { counterexample } => {
                assert_eq!(counterexample.get(Var::new(1)), Some(false))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn counterexample_is_lexicographically_first() {
        // Fails exactly when u1 = T and u2 = T, or when u3 = T.
        let m = CnfFormula::from_dimacs(&[&[-1, -2, 4], &[-1, -2, -4], &[-3, 5], &[-3, -5]]);
        let q = Qbf2Formula::new(vars(&[1, 2, 3]), vars(&[4, 5]), m).unwrap();
        match qbf_truth(&q).unwrap() {
            QbfTruth::No { counterexample } => {
                assert_eq!(counterexample.to_bools()[..3], [false, false, true]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn components_split_independent_parts() {
        let m = CnfFormula::from_dimacs(&[&[1, 2], &[3, 4], &[2, -1]]);
        let comps = components(&m);
        assert_eq!(comps.len(), 2);
    }

    #[test]
    fn empty_clause_is_no() {
        let m = CnfFormula::new(1, vec![Clause::empty()], Default::default()).unwrap();
        let q = Qbf2Formula::new(vars(&[1]), vec![], m).unwrap();
        assert!(matches!(qbf_truth(&q).unwrap(), QbfTruth::No { .. }));
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn agrees_with_naive_evaluation(
            n in 2u32..8,
            split in 1usize..4,
            raw in prop::collection::vec(prop::collection::vec((1u32..8, any::<bool>()), 1..4), 1..10),
        ) {
            let p = split.min(n as usize - 1);
            let clauses: Vec<Clause> = raw
                .iter()
                .map(|c| c.iter().map(|&(v, s)| {
                    let v = (v - 1) % n + 1;
                    if s { v as i32 } else { -(v as i32) }
                }).collect::<Vec<i32>>())
                .map(|c| Clause::from_dimacs(&c))
                .collect();
            let m = CnfFormula::from_clauses(n, clauses).unwrap();
            let univ: Vec<Var> = (1..=p as u32).map(Var::new).collect();
            let ex: Vec<Var> = (p as u32 + 1..=n).map(Var::new).collect();
            let q = Qbf2Formula::new(univ, ex, m).unwrap();
            prop_assert_eq!(qbf_truth(&q).unwrap().is_yes(), brute(&q));
        }
    }
}
