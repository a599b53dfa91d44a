//! ∀∃ quantified 3-CNF: data model, a brute-force decision procedure over
//! the universal block, balance checks, and the monotonization pipelines.

mod eval;
mod qdimacs;
mod transform;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::validate::balance_violations;
use crate::formula::{CnfFormula, Occurrences, Rule, ValidationReport, Var, ViolationSite};

pub use eval::{qbf_truth, qbf_truth_with, QbfTruth, MAX_COMPONENT_UNIVERSALS};
pub use qdimacs::{read_qdimacs, write_qdimacs};
pub use transform::{
    monotonize, pad_to_balance, transform_1122, transform_1122_stages, transform_2222,
    transform_2222_stages, triple_copy, PadVariant, Stage,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("variable {0} is both universal and existential")]
    BothQuantifiers(u32),
    #[error("variable {0} is listed twice in the prefix")]
    RepeatedInPrefix(u32),
    #[error("variable {0} is not quantified")]
    Unquantified(u32),
    #[error("variable {var} exceeds the matrix variable count {n_vars}")]
    OutOfRange { var: u32, n_vars: u32 },
    #[error("{count} mixed clauses with {shape}; need a multiple of 3")]
    Indivisible { shape: &'static str, count: usize },
    #[error("existential surplus {surplus} is not usable with {variant}")]
    Surplus { surplus: i64, variant: &'static str },
    #[error("a component has {count} universals; exhaustive evaluation stops at {limit}")]
    TooManyUniversals { count: usize, limit: usize },
    #[error("input fails the balance check:\n{0}")]
    Unbalanced(ValidationReport),
    #[error("gadget: {0}")]
    Gadget(#[from] crate::gadgets::GadgetError),
}

/// ∀ universals ∃ existentials . matrix, with the two blocks partitioning
/// the matrix variables 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbf2Formula {
    universals: Vec<Var>,
    existentials: Vec<Var>,
    matrix: CnfFormula,
}

impl Qbf2Formula {
    pub fn new(
        universals: Vec<Var>,
        existentials: Vec<Var>,
        matrix: CnfFormula,
    ) -> Result<Self, QbfError> {
        let n_vars = matrix.n_vars();
        let mut seen = BTreeSet::new();
        for &v in &universals {
            if v.id() > n_vars {
                return Err(QbfError::OutOfRange {
                    var: v.id(),
                    n_vars,
                });
            }
            if !seen.insert(v) {
                return Err(QbfError::RepeatedInPrefix(v.id()));
            }
        }
        let universal_set = seen.clone();
        for &v in &existentials {
            if v.id() > n_vars {
                return Err(QbfError::OutOfRange {
                    var: v.id(),
                    n_vars,
                });
            }
            if universal_set.contains(&v) {
                return Err(QbfError::BothQuantifiers(v.id()));
            }
            if !seen.insert(v) {
                return Err(QbfError::RepeatedInPrefix(v.id()));
            }
        }
        if let Some(v) = matrix.vars().find(|v| !seen.contains(v)) {
            return Err(QbfError::Unquantified(v.id()));
        }
        Ok(Qbf2Formula {
            universals,
            existentials,
            matrix,
        })
    }

    pub fn universals(&self) -> &[Var] {
        &self.universals
    }

    pub fn existentials(&self) -> &[Var] {
        &self.existentials
    }

    pub fn matrix(&self) -> &CnfFormula {
        &self.matrix
    }

    pub fn n_vars(&self) -> u32 {
        self.matrix.n_vars()
    }
}

/// Prescribed occurrence counts: universals (s₁ unnegated, s₂ negated),
/// existentials (t₁, t₂).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct BalanceSpec {
    pub s1: u32,
    pub s2: u32,
    pub t1: u32,
    pub t2: u32,
    /// |∀| = |∃|.
    pub require_equal_counts: bool,
    pub require_monotone: bool,
}

impl BalanceSpec {
    pub const fn new(s1: u32, s2: u32, t1: u32, t2: u32) -> BalanceSpec {
        BalanceSpec {
            s1,
            s2,
            t1,
            t2,
            require_equal_counts: true,
            require_monotone: false,
        }
    }

    pub const B1122: BalanceSpec = BalanceSpec::new(1, 1, 2, 2);
    pub const B2222: BalanceSpec = BalanceSpec::new(2, 2, 2, 2);

    pub fn monotone(mut self) -> BalanceSpec {
        self.require_monotone = true;
        self
    }

    pub fn without_equal_counts(mut self) -> BalanceSpec {
        self.require_equal_counts = false;
        self
    }
}

pub fn validate_balanced(q: &Qbf2Formula, spec: BalanceSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let matrix = q.matrix();
    if matrix.is_empty() {
        report.push(Rule::Empty, ViolationSite::Formula, "matrix has no clauses");
    }
    for (i, clause) in matrix.clauses().iter().enumerate() {
        let site = ViolationSite::Clause(i);
        if clause.width() != 3 {
            report.push(
                Rule::Width,
                site,
                format!("{clause} has width {}", clause.width()),
            );
        }
        if clause.has_repeated_var() {
            report.push(
                Rule::DistinctVariables,
                site,
                format!("{clause} repeats a variable"),
            );
        }
        if spec.require_monotone && !clause.is_monotone() {
            report.push(Rule::Monotone, site, format!("{clause} is mixed"));
        }
    }
    report.extend(balance_violations(
        matrix,
        q.universals().iter().copied(),
        Occurrences::new(spec.s1, spec.s2),
        "universal",
    ));
    report.extend(balance_violations(
        matrix,
        q.existentials().iter().copied(),
        Occurrences::new(spec.t1, spec.t2),
        "existential",
    ));
    if spec.require_equal_counts && q.universals().len() != q.existentials().len() {
        report.push(
            Rule::Quantifiers,
            ViolationSite::Formula,
            format!(
                "{} universals against {} existentials",
                q.universals().len(),
                q.existentials().len()
            ),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;
    use crate::gadgets::{q1mon, q3};

    fn vars(ids: &[u32]) -> Vec<Var> {
        ids.iter().map(|&i| Var::new(i)).collect()
    }

    #[test]
    fn prefix_must_partition() {
        let m = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        assert_eq!(
            Qbf2Formula::new(vars(&[1]), vars(&[1, 2, 3]), m.clone()),
            Err(QbfError::BothQuantifiers(1))
        );
        assert_eq!(
            Qbf2Formula::new(vars(&[1]), vars(&[2]), m.clone()),
            Err(QbfError::Unquantified(3))
        );
        assert!(Qbf2Formula::new(vars(&[1]), vars(&[2, 3]), m).is_ok());
    }

    #[test]
    fn q1mon_counts() {
        let q = q1mon();
        let without = validate_balanced(&q, BalanceSpec::B2222.without_equal_counts().monotone());
        assert!(without.verdict(), "{without}");
        let with = validate_balanced(&q, BalanceSpec::B2222);
        assert!(with.has(Rule::Quantifiers));
        assert_eq!(with.violations.len(), 1);
    }

    #[test]
    fn q3_occurrences() {
        let report = validate_balanced(&q3(), BalanceSpec::B1122.without_equal_counts());
        assert!(report.verdict(), "{report}");
    }

    #[test]
    fn empty_formula_invalid() {
        let q = Qbf2Formula::new(vec![], vec![], CnfFormula::empty(0)).unwrap();
        assert!(validate_balanced(&q, BalanceSpec::B1122).has(Rule::Empty));
    }

    #[test]
    fn mixed_clause_flagged_when_monotone_required() {
        let m = CnfFormula::new(
            3,
            vec![Clause::from_dimacs(&[1, -2, 3])],
            Default::default(),
        )
        .unwrap();
        let q = Qbf2Formula::new(vars(&[1]), vars(&[2, 3]), m).unwrap();
        assert!(validate_balanced(&q, BalanceSpec::B1122.monotone()).has(Rule::Monotone));
        assert!(!validate_balanced(&q, BalanceSpec::B1122).has(Rule::Monotone));
    }
}
