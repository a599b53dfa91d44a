//! Seeded random instances with prescribed occurrence counts, built with a
//! configuration model: every variable contributes one slot per required
//! occurrence, slots are shuffled into clauses, and bad clauses are repaired
//! by random slot swaps.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Clause, CnfFormula, Dialect, Lit, Var};
use crate::qbf::{BalanceSpec, Qbf2Formula};

const RESTARTS: usize = 200;
const REPAIR_STEPS: usize = 4_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("no valid instance found after {attempts} restarts")]
    Exhausted { attempts: usize },
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Literal slots to be cut into clauses of the listed widths.
#[derive(Clone, Debug, Default)]
pub(crate) struct Pool {
    pub slots: Vec<Lit>,
    pub widths: Vec<usize>,
}

impl Pool {
    pub fn uniform(slots: Vec<Lit>, width: usize) -> Pool {
        let widths = vec![width; slots.len() / width];
        Pool { slots, widths }
    }
}

#[derive(Copy, Clone, Debug)]
pub(crate) struct FillRules {
    /// Forbid any repeated variable; otherwise one variable may appear twice
    /// with the same sign.
    pub distinct: bool,
    pub unique: bool,
}

fn clause_ok(lits: &[Lit], distinct: bool) -> bool {
    let mut sorted = lits.to_vec();
    sorted.sort();
    let mut repeats = 0;
    for w in sorted.windows(2) {
        if w[0].var() == w[1].var() {
            if distinct || w[0] != w[1] {
                return false;
            }
            repeats += 1;
        }
    }
    repeats <= 1
}

fn badness(clauses: &[Vec<Lit>], rules: FillRules) -> usize {
    let mut bad = clauses
        .iter()
        .filter(|c| !clause_ok(c, rules.distinct))
        .count();
    if rules.unique {
        let mut seen: HashSet<Vec<Lit>> = HashSet::new();
        for c in clauses {
            let mut key = c.clone();
            key.sort();
            if !seen.insert(key) {
                bad += 1;
            }
        }
    }
    bad
}

/// Cuts every pool into clauses and repairs them until `rules` hold.
pub(crate) fn fill<R: Rng>(
    rng: &mut R,
    pools: &[Pool],
    rules: FillRules,
) -> Result<Vec<Clause>, GenerateError> {
    for pool in pools {
        let total: usize = pool.widths.iter().sum();
        if total != pool.slots.len() {
            return Err(GenerateError::Infeasible(format!(
                "{} literal slots cannot fill clause widths summing to {total}",
                pool.slots.len()
            )));
        }
    }
    for _ in 0..RESTARTS {
        let mut clauses: Vec<Vec<Lit>> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        for (p, pool) in pools.iter().enumerate() {
            let mut slots = pool.slots.clone();
            slots.shuffle(rng);
            let mut rest = slots.as_slice();
            for &w in &pool.widths {
                let (head, tail) = rest.split_at(w);
                clauses.push(head.to_vec());
                owner.push(p);
                rest = tail;
            }
        }
        let mut score = badness(&clauses, rules);
        for _ in 0..REPAIR_STEPS {
            if score == 0 {
                break;
            }
            let bad: Vec<usize> = (0..clauses.len())
                .filter(|&i| {
                    !clause_ok(&clauses[i], rules.distinct) || is_duplicate(&clauses, i, rules)
                })
                .collect();
            let a = bad[rng.gen_range(0..bad.len())];
            let mates: Vec<usize> = (0..clauses.len())
                .filter(|&j| j != a && owner[j] == owner[a])
                .collect();
            if mates.is_empty() || clauses[a].is_empty() {
                break;
            }
            let b = mates[rng.gen_range(0..mates.len())];
            if clauses[b].is_empty() {
                continue;
            }
            let i = rng.gen_range(0..clauses[a].len());
            let j = rng.gen_range(0..clauses[b].len());
            swap_slots(&mut clauses, a, i, b, j);
            let next = badness(&clauses, rules);
            if next <= score || rng.gen_bool(0.05) {
                score = next;
            } else {
                swap_slots(&mut clauses, a, i, b, j);
            }
        }
        if score == 0 {
            return Ok(clauses.into_iter().map(Clause::new).collect());
        }
    }
    Err(GenerateError::Exhausted { attempts: RESTARTS })
}

fn is_duplicate(clauses: &[Vec<Lit>], i: usize, rules: FillRules) -> bool {
    if !rules.unique {
        return false;
    }
    let mut key = clauses[i].clone();
    key.sort();
    clauses.iter().enumerate().any(|(j, c)| {
        j != i && {
            let mut other = c.clone();
            other.sort();
            other == key
        }
    })
}

fn swap_slots(clauses: &mut [Vec<Lit>], a: usize, i: usize, b: usize, j: usize) {
    let tmp = clauses[a][i];
    clauses[a][i] = clauses[b][j];
    clauses[b][j] = tmp;
}

fn slots(vars: impl IntoIterator<Item = Var>, pos: u32, neg: u32) -> (Vec<Lit>, Vec<Lit>) {
    let mut p = Vec::new();
    let mut n = Vec::new();
    for v in vars {
        p.extend(std::iter::repeat_n(v.positive(), pos as usize));
        n.extend(std::iter::repeat_n(v.negative(), neg as usize));
    }
    (p, n)
}

fn multiple_of_three(n: u32) -> Result<(), GenerateError> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(GenerateError::Infeasible(format!(
            "{n} variables; a (2,2) or twice-appearing 3-CNF needs a positive multiple of 3"
        )));
    }
    Ok(())
}

fn all_vars(n: u32) -> impl Iterator<Item = Var> {
    (1..=n).map(Var::new)
}

/// Monotone 3-SAT-(2,2).
pub fn random_mono22<R: Rng>(n: u32, rng: &mut R) -> Result<CnfFormula, GenerateError> {
    multiple_of_three(n)?;
    let (p, q) = slots(all_vars(n), 2, 2);
    let rules = FillRules {
        distinct: true,
        unique: true,
    };
    let clauses = fill(rng, &[Pool::uniform(p, 3), Pool::uniform(q, 3)], rules)?;
    Ok(CnfFormula::new(n, clauses, Dialect::Strict).expect("generated in range"))
}

/// Monotone 3-SAT*-(2,2): a clause may contain one variable twice.
pub fn random_star22<R: Rng>(n: u32, rng: &mut R) -> Result<CnfFormula, GenerateError> {
    multiple_of_three(n)?;
    let (p, q) = slots(all_vars(n), 2, 2);
    let rules = FillRules {
        distinct: false,
        unique: true,
    };
    let clauses = fill(rng, &[Pool::uniform(p, 3), Pool::uniform(q, 3)], rules)?;
    Ok(CnfFormula::new(n, clauses, Dialect::Star).expect("generated in range"))
}

/// 3-SAT-(2,2) with mixed clauses.
pub fn random_3sat22<R: Rng>(n: u32, rng: &mut R) -> Result<CnfFormula, GenerateError> {
    multiple_of_three(n)?;
    let (mut p, q) = slots(all_vars(n), 2, 2);
    p.extend(q);
    let rules = FillRules {
        distinct: true,
        unique: true,
    };
    let clauses = fill(rng, &[Pool::uniform(p, 3)], rules)?;
    Ok(CnfFormula::new(n, clauses, Dialect::Strict).expect("generated in range"))
}

/// Monotone NAE 3-SAT, every variable exactly twice, repeated clauses
/// allowed.
pub fn random_nae_e2<R: Rng>(n: u32, rng: &mut R) -> Result<CnfFormula, GenerateError> {
    multiple_of_three(n)?;
    let (p, _) = slots(all_vars(n), 2, 0);
    let rules = FillRules {
        distinct: true,
        unique: false,
    };
    let clauses = fill(rng, &[Pool::uniform(p, 3)], rules)?;
    Ok(CnfFormula::new(n, clauses, Dialect::Strict).expect("generated in range"))
}

/// Monotone 3-SAT-(2,2) closed under clause negation: a unique positive
/// twice-appearing instance followed by the negation of each clause.
pub fn random_complement_closed_22<R: Rng>(
    n: u32,
    rng: &mut R,
) -> Result<CnfFormula, GenerateError> {
    multiple_of_three(n)?;
    let (p, _) = slots(all_vars(n), 2, 0);
    let rules = FillRules {
        distinct: true,
        unique: true,
    };
    let mut clauses = fill(rng, &[Pool::uniform(p, 3)], rules)?;
    let negated: Vec<Clause> = clauses.iter().map(Clause::negated).collect();
    clauses.extend(negated);
    Ok(CnfFormula::new(n, clauses, Dialect::Strict).expect("generated in range"))
}

/// A ∀∃ instance with p universals and p existentials meeting `spec`'s
/// occurrence counts. Variables are split into the two blocks at random.
pub fn random_balanced_qbf<R: Rng>(
    p: u32,
    spec: BalanceSpec,
    rng: &mut R,
) -> Result<Qbf2Formula, GenerateError> {
    let n = 2 * p;
    let slots_total = p * (spec.s1 + spec.s2 + spec.t1 + spec.t2);
    if p == 0 || !slots_total.is_multiple_of(3) {
        return Err(GenerateError::Infeasible(format!(
            "{slots_total} literal occurrences do not fill 3-clauses"
        )));
    }
    let mut ids: Vec<Var> = all_vars(n).collect();
    ids.shuffle(rng);
    let mut universals = ids[..p as usize].to_vec();
    let mut existentials = ids[p as usize..].to_vec();
    universals.sort();
    existentials.sort();
    let (mut lits, un) = slots(universals.iter().copied(), spec.s1, spec.s2);
    lits.extend(un);
    let (ep, en) = slots(existentials.iter().copied(), spec.t1, spec.t2);
    lits.extend(ep);
    lits.extend(en);
    let rules = FillRules {
        distinct: true,
        unique: true,
    };
    let clauses = fill(rng, &[Pool::uniform(lits, 3)], rules)?;
    let matrix = CnfFormula::new(n, clauses, Dialect::Strict).expect("generated in range");
    Ok(Qbf2Formula::new(universals, existentials, matrix).expect("blocks partition the variables"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{validate_class, ProblemClass};
    use crate::qbf::validate_balanced;

    #[test]
    fn generated_instances_pass_their_class() {
        let mut rng = seeded_rng(7);
        for n in [6, 9, 12] {
            let f = random_mono22(n, &mut rng).unwrap();
            assert!(validate_class(&f, ProblemClass::Mono3Sat22).verdict());
            let f = random_star22(n, &mut rng).unwrap();
            assert!(validate_class(&f, ProblemClass::Mono3SatStar22).verdict());
            let f = random_3sat22(n, &mut rng).unwrap();
            assert!(validate_class(&f, ProblemClass::ThreeSat22).verdict());
            let f = random_nae_e2(n, &mut rng).unwrap();
            assert!(validate_class(&f, ProblemClass::MonoNaeE2).verdict());
            let f = random_complement_closed_22(n, &mut rng).unwrap();
            assert!(validate_class(&f, ProblemClass::Mono3Sat22).verdict());
        }
    }

    #[test]
    fn star_small_case() {
        let f = random_star22(3, &mut seeded_rng(1)).unwrap();
        assert_eq!(f.len(), 4);
        assert!(validate_class(&f, ProblemClass::Mono3SatStar22).verdict());
    }

    #[test]
    fn mono22_on_three_variables_is_impossible() {
        assert_eq!(
            random_mono22(3, &mut seeded_rng(0)),
            Err(GenerateError::Exhausted { attempts: RESTARTS })
        );
    }

    #[test]
    fn non_multiple_of_three_rejected() {
        assert!(matches!(
            random_mono22(7, &mut seeded_rng(0)),
            Err(GenerateError::Infeasible(_))
        ));
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_3sat22(9, &mut seeded_rng(42)).unwrap();
        let b = random_3sat22(9, &mut seeded_rng(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn balanced_qbf_instances() {
        let mut rng = seeded_rng(3);
        for p in 2..=4 {
            let q = random_balanced_qbf(p, BalanceSpec::B1122, &mut rng).unwrap();
            assert!(validate_balanced(&q, BalanceSpec::B1122).verdict());
        }
        let q = random_balanced_qbf(3, BalanceSpec::B2222, &mut rng).unwrap();
        assert!(validate_balanced(&q, BalanceSpec::B2222).verdict());
        assert!(random_balanced_qbf(2, BalanceSpec::B2222, &mut rng).is_err());
    }
}
