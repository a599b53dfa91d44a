//! DRUP certificates: parsing, printing and reverse-unit-propagation checking.
//!
//! Two textual forms are accepted. The bracketed form is a list of quoted
//! steps such as `['-8 -7 -5 0', 'd -1 -5 -8 0', '0']`; the line form has one
//! step per line. Deletions carry a `d` prefix and every step ends in `0`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{Clause, CnfFormula, Lit};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProofStep {
    Add(Clause),
    Delete(Clause),
}

impl ProofStep {
    fn to_text(&self) -> String {
        let (prefix, clause) = match self {
            ProofStep::Add(c) => ("", c),
            ProofStep::Delete(c) => ("d ", c),
        };
        let mut out = prefix.to_string();
        for lit in clause.lits() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push('0');
        out
    }
}

/// An ordered sequence of clause additions and deletions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RupProof {
    steps: Vec<ProofStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof step {step}: {message}")]
pub struct ProofParseError {
    pub step: usize,
    pub message: String,
}

impl RupProof {
    pub fn new(steps: Vec<ProofStep>) -> RupProof {
        RupProof { steps }
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True if the last step adds the empty clause.
    pub fn ends_in_empty_clause(&self) -> bool {
        matches!(self.steps.last(), Some(ProofStep::Add(c)) if c.is_empty())
    }

    /// Parses either the bracketed list form or the line form.
    pub fn parse(text: &str) -> Result<RupProof, ProofParseError> {
        let trimmed = text.trim();
        let raw_steps: Vec<String> = if trimmed.starts_with('[') {
            parse_quoted_list(trimmed)?
        } else {
            trimmed
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('c'))
                .map(str::to_string)
                .collect()
        };
        let steps = raw_steps
            .iter()
            .enumerate()
            .map(|(i, s)| parse_step(i, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RupProof { steps })
    }

    /// The bracketed list form, e.g. `['1 0', '0']`.
    pub fn to_list_text(&self) -> String {
        let items: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("'{}'", s.to_text()))
            .collect();
        format!("[{}]", items.join(", "))
    }

    /// One step per line.
    pub fn to_drup(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&step.to_text());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RupProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_list_text())
    }
}

fn parse_quoted_list(text: &str) -> Result<Vec<String>, ProofParseError> {
    let err = |step: usize, message: &str| ProofParseError {
        step,
        message: message.to_string(),
    };
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(0, "unbalanced brackets"))?;
    let mut items = Vec::new();
    let mut chars = inner.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace() || *c == ',') {
            chars.next();
        }
        let Some(quote) = chars.next() else { break };
        if quote != '\'' && quote != '"' {
            return Err(err(items.len(), "expected a quoted step"));
        }
        let mut item = String::new();
        loop {
            match chars.next() {
                Some(c) if c == quote => break,
                Some(c) => item.push(c),
                None => return Err(err(items.len(), "unterminated quote")),
            }
        }
        items.push(item);
    }
    Ok(items)
}

fn parse_step(index: usize, text: &str) -> Result<ProofStep, ProofParseError> {
    let err = |message: String| ProofParseError {
        step: index,
        message,
    };
    let mut tokens = text.split_whitespace().peekable();
    let delete = tokens.peek() == Some(&"d");
    if delete {
        tokens.next();
    }
    let mut lits = Vec::new();
    let mut terminated = false;
    for token in tokens {
        if terminated {
            return Err(err(format!("literal `{token}` after terminating 0")));
        }
        let value: i32 = token
            .parse()
            .map_err(|_| err(format!("bad literal `{token}`")))?;
        match Lit::from_dimacs(value) {
            Some(lit) => lits.push(lit),
            None => terminated = true,
        }
    }
    if !terminated {
        return Err(err("missing terminating 0".to_string()));
    }
    let clause = Clause::new(lits);
    Ok(if delete {
        ProofStep::Delete(clause)
    } else {
        ProofStep::Add(clause)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RupFailure {
    /// Unit propagation on the negated lemma did not reach a conflict.
    NotRup,
    /// A lemma mentions a variable the formula does not declare.
    UnknownVariable(u32),
    /// The steps ran out without adding the empty clause.
    NoEmptyClause,
}

/// Result of checking a proof against a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RupCheck {
    Verified,
    Rejected { step: usize, failure: RupFailure },
}

impl RupCheck {
    pub fn is_verified(&self) -> bool {
        *self == RupCheck::Verified
    }
}

/// Clause database with occurrence lists, re-propagated from scratch for
/// every lemma.
struct Checker {
    n_vars: usize,
    clauses: Vec<Vec<Lit>>,
    active: Vec<bool>,
    occurs: Vec<Vec<usize>>,
    by_key: HashMap<Vec<Lit>, Vec<usize>>,
    /// Per literal code: 1 true, -1 false, 0 unassigned.
    value: Vec<i8>,
}

impl Checker {
    fn new(n_vars: u32) -> Checker {
        let n = n_vars as usize;
        Checker {
            n_vars: n,
            clauses: Vec::new(),
            active: Vec::new(),
            occurs: vec![Vec::new(); 2 * n],
            by_key: HashMap::new(),
            value: vec![0; 2 * n],
        }
    }

    fn key(clause: &Clause) -> Vec<Lit> {
        let mut lits = clause.lits().to_vec();
        lits.dedup();
        lits
    }

    fn add(&mut self, clause: &Clause) {
        let lits = Checker::key(clause);
        let idx = self.clauses.len();
        for lit in &lits {
            self.occurs[lit.code()].push(idx);
        }
        self.by_key.entry(lits.clone()).or_default().push(idx);
        self.clauses.push(lits);
        self.active.push(true);
    }

    fn delete(&mut self, clause: &Clause) {
        if let Some(ids) = self.by_key.get_mut(&Checker::key(clause)) {
            if let Some(idx) = ids.pop() {
                self.active[idx] = false;
            }
        }
    }

    fn assign(&mut self, lit: Lit, trail: &mut Vec<Lit>) -> bool {
        match self.value[lit.code()] {
            1 => true,
            -1 => false,
            _ => {
                self.value[lit.code()] = 1;
                self.value[(!lit).code()] = -1;
                trail.push(lit);
                true
            }
        }
    }

    /// True if asserting the negation of `lemma` propagates to a conflict.
    fn is_rup(&mut self, lemma: &Clause) -> bool {
        let mut trail: Vec<Lit> = Vec::new();
        let conflict = self.propagate_from(lemma, &mut trail);
        for lit in trail {
            self.value[lit.code()] = 0;
            self.value[(!lit).code()] = 0;
        }
        conflict
    }

    fn propagate_from(&mut self, lemma: &Clause, trail: &mut Vec<Lit>) -> bool {
        for &lit in lemma.lits() {
            if !self.assign(!lit, trail) {
                return true;
            }
        }
        for idx in 0..self.clauses.len() {
            if !self.active[idx] {
                continue;
            }
            match self.clauses[idx].len() {
                0 => return true,
                1 => {
                    let unit = self.clauses[idx][0];
                    if !self.assign(unit, trail) {
                        return true;
                    }
                }
                _ => {}
            }
        }
        let mut head = 0;
        while head < trail.len() {
            let falsified = !trail[head];
            head += 1;
            for k in 0..self.occurs[falsified.code()].len() {
                let idx = self.occurs[falsified.code()][k];
                if !self.active[idx] {
                    continue;
                }
                let mut unassigned = None;
                let mut free = 0;
                let mut satisfied = false;
                for &lit in &self.clauses[idx] {
                    match self.value[lit.code()] {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            free += 1;
                            unassigned = Some(lit);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match free {
                    0 => return true,
                    1 => {
                        let unit = unassigned.expect("one free literal");
                        self.assign(unit, trail);
                    }
                    _ => {}
                }
            }
        }
        false
    }
}

/// Checks that every added lemma is RUP with respect to the formula plus the
/// earlier, not yet deleted lemmas, and that the empty clause is derived.
/// Steps after the empty clause are ignored; deleting an absent clause is a
/// no-op.
pub fn verify_rup(formula: &CnfFormula, proof: &RupProof) -> RupCheck {
    let mut checker = Checker::new(formula.n_vars());
    for clause in formula.clauses() {
        checker.add(clause);
    }
    for (step, item) in proof.steps().iter().enumerate() {
        match item {
            ProofStep::Delete(clause) => checker.delete(clause),
            ProofStep::Add(clause) => {
                if let Some(lit) = clause
                    .lits()
                    .iter()
                    .find(|l| l.var().index() >= checker.n_vars)
                {
                    return RupCheck::Rejected {
                        step,
                        failure: RupFailure::UnknownVariable(lit.var().id()),
                    };
                }
                if !checker.is_rup(clause) {
                    return RupCheck::Rejected {
                        step,
                        failure: RupFailure::NotRup,
                    };
                }
                if clause.is_empty() {
                    return RupCheck::Verified;
                }
                checker.add(clause);
            }
        }
    }
    RupCheck::Rejected {
        step: proof.len(),
        failure: RupFailure::NoEmptyClause,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let a = RupProof::parse("['-8 -7 -5 0', 'd 1 2 0', '0']").unwrap();
        let b = RupProof::parse("-8 -7 -5 0\nd 1 2 0\n0\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(matches!(&a.steps()[1], ProofStep::Delete(c) if c.to_dimacs() == vec![1, 2]));
        assert!(a.ends_in_empty_clause());
        assert_eq!(RupProof::parse(&a.to_list_text()).unwrap(), a);
        assert_eq!(RupProof::parse(&a.to_drup()).unwrap(), a);
    }

    #[test]
    fn malformed_steps() {
        assert_eq!(RupProof::parse("['1 2']").unwrap_err().step, 0);
        assert_eq!(RupProof::parse("1 0\n1 x 0\n").unwrap_err().step, 1);
        assert!(RupProof::parse("['1 0', '2 0").is_err());
        assert!(RupProof::parse("1 0 2\n").is_err());
    }

    #[test]
    fn empty_proof_of_satisfiable_formula_fails() {
        let f = CnfFormula::from_dimacs(&[&[1]]);
        let check = verify_rup(&f, &RupProof::default());
        assert_eq!(
            check,
            RupCheck::Rejected {
                step: 0,
                failure: RupFailure::NoEmptyClause
            }
        );
    }

    #[test]
    fn simple_refutation() {
        let f = CnfFormula::from_dimacs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let proof = RupProof::parse("1 0\n0\n").unwrap();
        assert!(verify_rup(&f, &proof).is_verified());
        // Jumping straight to the empty clause is not RUP here.
        let bad = RupProof::parse("0\n").unwrap();
        assert_eq!(
            verify_rup(&f, &bad),
            RupCheck::Rejected {
                step: 0,
                failure: RupFailure::NotRup
            }
        );
    }

    #[test]
    fn deletion_removes_support() {
        let f = CnfFormula::from_dimacs(&[&[1], &[-1]]);
        assert!(verify_rup(&f, &RupProof::parse("0\n").unwrap()).is_verified());
        let proof = RupProof::parse("d 1 0\n0\n").unwrap();
        assert!(!verify_rup(&f, &proof).is_verified());
    }

    #[test]
    fn formula_with_empty_clause() {
        let f = CnfFormula::new(1, vec![Clause::empty()], crate::formula::Dialect::Strict).unwrap();
        assert!(verify_rup(&f, &RupProof::parse("0\n").unwrap()).is_verified());
    }
}
