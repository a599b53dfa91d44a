//! Propositional data model: variables, literals, clauses and CNF formulas.
//!
//! Clauses are kept in canonical order (by variable id, the negative literal
//! before the positive one on ties) so that clause equality is syntactic.
//! Duplicate literals are kept with their multiplicity, which matters for the
//! `*` dialect where a variable may occur more than once in a clause.

mod io;
mod occurrence;
mod simplify;
pub(crate) mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Not;

use thiserror::Error;

pub use io::{
    read_clause_list, read_dimacs, read_json, write_clause_list, write_dimacs, write_json,
    FormulaJson, ParseError,
};
pub use occurrence::{occurrence_profile, OccurrenceProfile, Occurrences};
pub use simplify::{simplify_under, Simplified};
pub use validate::{
    validate_class, ProblemClass, Rule, ValidationReport, Violation, ViolationSite,
};

/// A propositional variable, numbered from 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Panics on 0; variable ids start at 1.
    pub fn new(id: u32) -> Var {
        assert!(id > 0, "variable ids start at 1");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based index, handy for dense arrays.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32 + 1)
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl serde::Serialize for Lit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i32(self.to_dimacs())
    }
}

/// A variable together with a sign.
///
/// The derived order compares the variable first and puts the negative
/// literal before the positive one.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    var: Var,
    positive: bool,
}

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit { var, positive }
    }

    /// Parses a non-zero DIMACS literal.
    pub fn from_dimacs(value: i32) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        Some(Lit::new(Var(value.unsigned_abs()), value > 0))
    }

    pub fn to_dimacs(self) -> i32 {
        let id = self.var.0 as i32;
        if self.positive {
            id
        } else {
            -id
        }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn is_negative(self) -> bool {
        !self.positive
    }

    /// Dense code `2 * index + sign`, with the negative literal on the odd slot.
    pub fn code(self) -> usize {
        2 * self.var.index() + usize::from(!self.positive)
    }

    pub fn from_code(code: usize) -> Lit {
        Lit::new(Var::from_index(code / 2), code.is_multiple_of(2))
    }

    /// Value of the literal under a truth value for its variable.
    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit::new(self.var, !self.positive)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Polarity of a monotone clause.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// A disjunction of literals in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort_unstable();
        Clause { lits }
    }

    /// Panics on a zero literal.
    pub fn from_dimacs(values: &[i32]) -> Clause {
        Clause::new(
            values
                .iter()
                .map(|&v| Lit::from_dimacs(v).expect("zero is not a literal"))
                .collect(),
        )
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    /// Number of literal occurrences, counted with multiplicity.
    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }

    /// `Some(polarity)` for a non-empty clause whose literals share a sign.
    pub fn polarity(&self) -> Option<Polarity> {
        let first = self.lits.first()?;
        let positive = first.is_positive();
        if self.lits.iter().all(|l| l.is_positive() == positive) {
            Some(if positive {
                Polarity::Positive
            } else {
                Polarity::Negative
            })
        } else {
            None
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.polarity().is_some()
    }

    pub fn positive_count(&self) -> usize {
        self.lits.iter().filter(|l| l.is_positive()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.lits.len() - self.positive_count()
    }

    /// True if some variable occurs more than once (with either sign).
    pub fn has_repeated_var(&self) -> bool {
        self.lits.windows(2).any(|w| w[0].var() == w[1].var())
    }

    /// True if the clause contains a literal and its negation.
    pub fn is_tautology(&self) -> bool {
        self.lits
            .windows(2)
            .any(|w| w[0].var() == w[1].var() && w[0] != w[1])
    }

    /// Distinct variables in ascending order.
    pub fn vars(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self.lits.iter().map(|l| l.var()).collect();
        vars.dedup();
        vars
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// The clause with every literal flipped.
    pub fn negated(&self) -> Clause {
        Clause::new(self.lits.iter().map(|&l| !l).collect())
    }

    /// Renames every variable through `map`.
    pub fn map_vars(&self, mut map: impl FnMut(Var) -> Var) -> Clause {
        Clause::new(
            self.lits
                .iter()
                .map(|l| Lit::new(map(l.var()), l.is_positive()))
                .collect(),
        )
    }

    /// `Some(true)` if a literal is true, `Some(false)` if all are false,
    /// `None` if undecided under a partial assignment.
    pub fn eval(&self, assignment: &Assignment) -> Option<bool> {
        let mut undecided = false;
        for &lit in &self.lits {
            match assignment.lit_value(lit) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<I: IntoIterator<Item = Lit>>(iter: I) -> Clause {
        Clause::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, "}}")
    }
}

/// Whether clauses may repeat a variable (the `*` problem variants).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Dialect {
    #[default]
    Strict,
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("clause {clause}: variable {var} exceeds declared count {n_vars}")]
    VarOutOfRange {
        clause: usize,
        var: u32,
        n_vars: u32,
    },
    #[error("clause {clause}: variable {var} repeated, which the strict dialect forbids")]
    RepeatedVariable { clause: usize, var: u32 },
}

/// An ordered list of clauses over variables `1..=n_vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    n_vars: u32,
    clauses: Vec<Clause>,
    dialect: Dialect,
    symbols: Option<BTreeMap<Var, String>>,
}

impl CnfFormula {
    pub fn new(n_vars: u32, clauses: Vec<Clause>, dialect: Dialect) -> Result<Self, FormulaError> {
        for (i, clause) in clauses.iter().enumerate() {
            if let Some(lit) = clause.lits().iter().find(|l| l.var().id() > n_vars) {
                return Err(FormulaError::VarOutOfRange {
                    clause: i,
                    var: lit.var().id(),
                    n_vars,
                });
            }
            if dialect == Dialect::Strict && clause.has_repeated_var() {
                let var = clause
                    .lits()
                    .windows(2)
                    .find(|w| w[0].var() == w[1].var())
                    .map(|w| w[0].var().id())
                    .unwrap_or_default();
                return Err(FormulaError::RepeatedVariable { clause: i, var });
            }
        }
        Ok(CnfFormula {
            n_vars,
            clauses,
            dialect,
            symbols: None,
        })
    }

    /// Strict dialect unless some clause repeats a variable.
    pub fn from_clauses(n_vars: u32, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        let dialect = if clauses.iter().any(Clause::has_repeated_var) {
            Dialect::Star
        } else {
            Dialect::Strict
        };
        CnfFormula::new(n_vars, clauses, dialect)
    }

    /// Convenience for literals written as signed integers; `n_vars` is the
    /// largest variable mentioned. Panics on a zero literal.
    pub fn from_dimacs(clauses: &[&[i32]]) -> CnfFormula {
        let n_vars = clauses
            .iter()
            .flat_map(|c| c.iter())
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0);
        let clauses = clauses.iter().map(|c| Clause::from_dimacs(c)).collect();
        CnfFormula::from_clauses(n_vars, clauses).expect("n_vars covers every literal")
    }

    pub fn empty(n_vars: u32) -> CnfFormula {
        CnfFormula {
            n_vars,
            clauses: Vec::new(),
            dialect: Dialect::Strict,
            symbols: None,
        }
    }

    pub fn with_symbols(mut self, symbols: BTreeMap<Var, String>) -> CnfFormula {
        self.symbols = Some(symbols);
        self
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn allows_duplicate_literals(&self) -> bool {
        self.dialect == Dialect::Star
    }

    pub fn symbols(&self) -> Option<&BTreeMap<Var, String>> {
        self.symbols.as_ref()
    }

    pub fn symbol(&self, var: Var) -> Option<&str> {
        self.symbols.as_ref()?.get(&var).map(String::as_str)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (1..=self.n_vars).map(Var::new)
    }

    pub fn to_dimacs(&self) -> Vec<Vec<i32>> {
        self.clauses.iter().map(Clause::to_dimacs).collect()
    }

    /// Total number of literal occurrences.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::width).sum()
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().all(Clause::is_monotone)
    }

    /// A total assignment satisfies the formula when every clause has a true literal.
    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.eval(assignment) == Some(true))
    }

    /// Same clauses, re-sorted into canonical order; stored clauses are
    /// already canonical so this only matters for formulas assembled by hand.
    pub fn canonicalize(&self) -> CnfFormula {
        let mut out = self.clone();
        out.clauses = self
            .clauses
            .iter()
            .map(|c| Clause::new(c.lits.clone()))
            .collect();
        out
    }

    /// Same formula with a different declared variable count.
    pub fn with_n_vars(&self, n_vars: u32) -> Result<CnfFormula, FormulaError> {
        let mut out = CnfFormula::new(n_vars, self.clauses.clone(), self.dialect)?;
        out.symbols = self.symbols.clone();
        Ok(out)
    }

    /// Same formula with its clause list replaced.
    pub fn with_clauses(&self, clauses: Vec<Clause>) -> Result<CnfFormula, FormulaError> {
        let mut out = CnfFormula::new(self.n_vars, clauses, self.dialect)?;
        out.symbols = self.symbols.clone();
        Ok(out)
    }

    /// Appends unit clauses fixing every assigned variable of `assignment`.
    pub fn with_units(&self, assignment: &Assignment) -> CnfFormula {
        let mut out = self.clone();
        for (var, value) in assignment.assigned() {
            out.clauses.push(Clause::new(vec![Lit::new(var, value)]));
        }
        out
    }
}

/// Flips the sign of every literal.
pub fn negate_formula(formula: &CnfFormula) -> CnfFormula {
    let mut out = formula.clone();
    out.clauses = formula.clauses.iter().map(Clause::negated).collect();
    out
}

/// A possibly partial truth assignment over `1..=n_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    /// Nothing assigned.
    pub fn new(n_vars: u32) -> Assignment {
        Assignment {
            values: vec![None; n_vars as usize],
        }
    }

    pub fn total(values: Vec<bool>) -> Assignment {
        Assignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    /// The assignment encoded by the low `n_vars` bits of `bits`, variable 1
    /// in the least significant bit.
    pub fn from_bits(n_vars: u32, bits: u64) -> Assignment {
        Assignment::total((0..n_vars).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn n_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.index()).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        if var.index() >= self.values.len() {
            self.values.resize(var.index() + 1, None);
        }
        self.values[var.index()] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        if let Some(slot) = self.values.get_mut(var.index()) {
            *slot = None;
        }
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| lit.eval(v))
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Assigned variables in ascending order.
    pub fn assigned(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (Var::from_index(i), v)))
    }

    /// Values of a total assignment; unassigned variables read as false.
    pub fn to_bools(&self) -> Vec<bool> {
        self.values.iter().map(|v| v.unwrap_or(false)).collect()
    }

    /// Signed-integer form, one entry per assigned variable.
    pub fn to_dimacs(&self) -> Vec<i32> {
        self.assigned()
            .map(|(v, value)| Lit::new(v, value).to_dimacs())
            .collect()
    }

    /// The restriction to `1..=n_vars`.
    pub fn truncated(&self, n_vars: u32) -> Assignment {
        let mut values = self.values.clone();
        values.resize(n_vars as usize, None);
        Assignment { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_puts_negative_first() {
        let c = Clause::from_dimacs(&[3, -1, 1, -2]);
        assert_eq!(c.to_dimacs(), vec![-1, 1, -2, 3]);
    }

    #[test]
    fn star_multiplicity_is_preserved() {
        let c = Clause::from_dimacs(&[5, -2, -2]);
        assert_eq!(c.to_dimacs(), vec![-2, -2, 5]);
        assert_eq!(c.width(), 3);
        assert!(c.has_repeated_var());
        assert_eq!(c.vars(), vec![Var::new(2), Var::new(5)]);
    }

    #[test]
    fn strict_dialect_rejects_repeats() {
        let err = CnfFormula::new(3, vec![Clause::from_dimacs(&[1, 1, 2])], Dialect::Strict);
        assert_eq!(
            err,
            Err(FormulaError::RepeatedVariable { clause: 0, var: 1 })
        );
        assert!(CnfFormula::new(3, vec![Clause::from_dimacs(&[1, 1, 2])], Dialect::Star).is_ok());
    }

    #[test]
    fn out_of_range_literal_rejected() {
        let err = CnfFormula::new(1, vec![Clause::from_dimacs(&[2])], Dialect::Strict);
        assert!(matches!(
            err,
            Err(FormulaError::VarOutOfRange { var: 2, .. })
        ));
    }

    #[test]
    fn negation_flips_signs() {
        let f = CnfFormula::from_dimacs(&[&[1, 2, 3]]);
        let g = negate_formula(&f);
        assert_eq!(g.to_dimacs(), vec![vec![-1, -2, -3]]);
        assert_eq!(negate_formula(&g), f);
    }

    #[test]
    fn clause_evaluation_under_partial_assignment() {
        let c = Clause::from_dimacs(&[1, -2]);
        let mut a = Assignment::new(2);
        assert_eq!(c.eval(&a), None);
        a.set(Var::new(1), false);
        assert_eq!(c.eval(&a), None);
        a.set(Var::new(2), true);
        assert_eq!(c.eval(&a), Some(false));
        a.set(Var::new(2), false);
        assert_eq!(c.eval(&a), Some(true));
    }

    #[test]
    fn literal_codes_round_trip() {
        for d in [-7, -1, 1, 4] {
            let l = Lit::from_dimacs(d).unwrap();
            assert_eq!(Lit::from_code(l.code()), l);
            assert_eq!((!l).code() ^ 1, l.code());
        }
    }

    #[test]
    fn empty_formula_is_satisfied() {
        let f = CnfFormula::empty(2);
        assert!(f.is_satisfied_by(&Assignment::total(vec![false, false])));
        let g = CnfFormula::new(0, vec![Clause::empty()], Dialect::Strict).unwrap();
        assert!(!g.is_satisfied_by(&Assignment::total(vec![])));
    }
}
