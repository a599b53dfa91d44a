//! Instance-class validators. Failures are collected into a report rather
//! than returned as errors.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{occurrence_profile, CnfFormula, Occurrences, Polarity, Var};

/// The problem classes an instance can be checked against.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProblemClass {
    /// Monotone 3-SAT-(2,2): unique monotone 3-clauses over distinct
    /// variables, every variable twice unnegated and twice negated.
    Mono3Sat22,
    /// As above, but a clause may repeat a variable.
    Mono3SatStar22,
    /// 3-SAT-(2,2): mixed clauses allowed.
    ThreeSat22,
    /// Monotone NAE 3-SAT with every variable appearing exactly twice; all
    /// clauses unnegated, repeated clauses allowed.
    MonoNaeE2,
}

impl ProblemClass {
    fn distinct_vars(self) -> bool {
        self != ProblemClass::Mono3SatStar22
    }

    fn monotone(self) -> bool {
        self != ProblemClass::ThreeSat22
    }

    fn unique(self) -> bool {
        self != ProblemClass::MonoNaeE2
    }
}

impl std::str::FromStr for ProblemClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "mono3sat22" => Ok(ProblemClass::Mono3Sat22),
            "mono3satstar22" | "monostar22" | "star22" => Ok(ProblemClass::Mono3SatStar22),
            "3sat22" | "threesat22" => Ok(ProblemClass::ThreeSat22),
            "mononaee2" | "naee2" => Ok(ProblemClass::MonoNaeE2),
            other => Err(format!("unknown class `{other}`")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Width,
    DistinctVariables,
    Monotone,
    PositiveOnly,
    Uniqueness,
    Balance,
    Empty,
    Quantifiers,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::Width => "width",
            Rule::DistinctVariables => "distinct-variables",
            Rule::Monotone => "monotone",
            Rule::PositiveOnly => "positive-only",
            Rule::Uniqueness => "uniqueness",
            Rule::Balance => "balance",
            Rule::Empty => "empty",
            Rule::Quantifiers => "quantifiers",
        };
        f.write_str(name)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationSite {
    Clause(usize),
    Var(u32),
    Formula,
}

impl fmt::Display for ViolationSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationSite::Clause(i) => write!(f, "clause {i}"),
            ViolationSite::Var(v) => write!(f, "var {v}"),
            ViolationSite::Formula => write!(f, "formula"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub site: ViolationSite,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.site, self.message)
    }
}

/// Outcome of a class check; valid exactly when no violation was recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn verdict(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: Rule, site: ViolationSite, message: impl Into<String>) {
        self.violations.push(Violation {
            rule,
            site,
            message: message.into(),
        });
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verdict() {
            return writeln!(f, "valid");
        }
        writeln!(f, "invalid ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

pub fn validate_class(formula: &CnfFormula, class: ProblemClass) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut seen: HashMap<&super::Clause, usize> = HashMap::new();

    for (i, clause) in formula.clauses().iter().enumerate() {
        let site = ViolationSite::Clause(i);
        if clause.width() != 3 {
            report.push(
                Rule::Width,
                site,
                format!("{clause} has width {}", clause.width()),
            );
        }
        if class.distinct_vars() && clause.has_repeated_var() {
            report.push(
                Rule::DistinctVariables,
                site,
                format!("{clause} repeats a variable"),
            );
        }
        if class.monotone() {
            match clause.polarity() {
                None => report.push(Rule::Monotone, site, format!("{clause} is mixed")),
                Some(Polarity::Negative) if class == ProblemClass::MonoNaeE2 => {
                    report.push(Rule::PositiveOnly, site, format!("{clause} is negated"))
                }
                _ => {}
            }
        }
        if class.unique() {
            if let Some(first) = seen.insert(clause, i) {
                report.push(
                    Rule::Uniqueness,
                    site,
                    format!("{clause} duplicates clause {first}"),
                );
            }
        }
    }

    let expected = match class {
        ProblemClass::MonoNaeE2 => Occurrences::new(2, 0),
        _ => Occurrences::new(2, 2),
    };
    for (var, occ) in occurrence_profile(formula).iter() {
        if occ != expected {
            report.push(
                Rule::Balance,
                ViolationSite::Var(var.id()),
                format!(
                    "appears ({}, {}), expected ({}, {})",
                    occ.pos, occ.neg, expected.pos, expected.neg
                ),
            );
        }
    }
    report
}

/// Variables whose profile differs from `expected`.
pub(crate) fn balance_violations(
    formula: &CnfFormula,
    vars: impl IntoIterator<Item = Var>,
    expected: Occurrences,
    label: &str,
) -> ValidationReport {
    let profile = occurrence_profile(formula);
    let mut report = ValidationReport::default();
    for var in vars {
        let occ = profile.get(var);
        if occ != expected {
            report.push(
                Rule::Balance,
                ViolationSite::Var(var.id()),
                format!(
                    "{label} appears ({}, {}), expected ({}, {})",
                    occ.pos, occ.neg, expected.pos, expected.neg
                ),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Clause, Dialect};

    #[test]
    fn mixed_clause_is_rejected() {
        let f = CnfFormula::from_dimacs(&[&[1, -2, 3]]);
        let report = validate_class(&f, ProblemClass::Mono3Sat22);
        assert!(!report.verdict());
        assert!(report.has(Rule::Monotone));
        assert!(report.has(Rule::Balance));
    }

    #[test]
    fn small_valid_instance() {
        // Two positive and two negative clauses on disjoint triples, doubled
        // up over six variables.
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
        let report = validate_class(&f, ProblemClass::Mono3Sat22);
        assert!(report.verdict(), "{report}");
        assert!(validate_class(&f, ProblemClass::ThreeSat22).verdict());
    }

    #[test]
    fn duplicate_clause_flagged() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3], &[1, 2, 3]]);
        let report = validate_class(&f, ProblemClass::Mono3Sat22);
        assert!(report.has(Rule::Uniqueness));
        // NAE-E2 tolerates repeated clauses.
        assert!(validate_class(&f, ProblemClass::MonoNaeE2).verdict());
    }

    #[test]
    fn star_allows_repeated_variable() {
        let f = CnfFormula::new(
            3,
            vec![
                Clause::from_dimacs(&[1, 1, 2]),
                Clause::from_dimacs(&[-1, -1, -2]),
                Clause::from_dimacs(&[2, 3, 3]),
                Clause::from_dimacs(&[-2, -3, -3]),
            ],
            Dialect::Star,
        )
        .unwrap();
        assert!(validate_class(&f, ProblemClass::Mono3SatStar22).verdict());
        assert!(validate_class(&f, ProblemClass::Mono3Sat22).has(Rule::DistinctVariables));
    }

    #[test]
    fn nae_class_rejects_negation() {
        let f = CnfFormula::from_dimacs(&[&[-1, -2, -3], &[1, 2, 3]]);
        assert!(validate_class(&f, ProblemClass::MonoNaeE2).has(Rule::PositiveOnly));
    }

    #[test]
    fn class_names_parse() {
        assert_eq!(
            "mono3sat22".parse::<ProblemClass>(),
            Ok(ProblemClass::Mono3Sat22)
        );
        assert_eq!(
            "3sat22".parse::<ProblemClass>(),
            Ok(ProblemClass::ThreeSat22)
        );
        assert_eq!(
            "MONO_NAE_E2".parse::<ProblemClass>(),
            Ok(ProblemClass::MonoNaeE2)
        );
        assert!("bogus".parse::<ProblemClass>().is_err());
    }
}
