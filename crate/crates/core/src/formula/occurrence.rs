use serde::Serialize;

use super::{CnfFormula, Var};

/// Unnegated and negated appearance counts of one variable.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Occurrences {
    pub pos: u32,
    pub neg: u32,
}

impl Occurrences {
    pub fn new(pos: u32, neg: u32) -> Occurrences {
        Occurrences { pos, neg }
    }

    pub fn total(self) -> u32 {
        self.pos + self.neg
    }
}

/// Per-variable occurrence counts, with multiplicity, across all clauses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrenceProfile {
    counts: Vec<Occurrences>,
}

impl OccurrenceProfile {
    pub fn get(&self, var: Var) -> Occurrences {
        self.counts.get(var.index()).copied().unwrap_or_default()
    }

    pub fn n_vars(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, Occurrences)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &o)| (Var::from_index(i), o))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|o| u64::from(o.total())).sum()
    }

    /// Variables whose counts differ from `expected`.
    pub fn deviations(&self, expected: Occurrences) -> Vec<(Var, Occurrences)> {
        self.iter().filter(|&(_, o)| o != expected).collect()
    }
}

pub fn occurrence_profile(formula: &CnfFormula) -> OccurrenceProfile {
    let mut counts = vec![Occurrences::default(); formula.n_vars() as usize];
    for clause in formula.clauses() {
        for lit in clause.lits() {
            let slot = &mut counts[lit.var().index()];
            if lit.is_positive() {
                slot.pos += 1;
            } else {
                slot.neg += 1;
            }
        }
    }
    OccurrenceProfile { counts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_formula_has_empty_profile() {
        let p = occurrence_profile(&CnfFormula::empty(0));
        assert!(p.is_empty());
        assert_eq!(p.total(), 0);
    }

    #[test]
    fn counts_with_multiplicity() {
        let f = CnfFormula::from_dimacs(&[&[1, 1, 2], &[-1, -2, -3]]);
        let p = occurrence_profile(&f);
        assert_eq!(p.get(Var::new(1)), Occurrences::new(2, 1));
        assert_eq!(p.get(Var::new(2)), Occurrences::new(1, 1));
        assert_eq!(p.get(Var::new(3)), Occurrences::new(0, 1));
        assert_eq!(p.total(), f.literal_count() as u64);
    }
}
