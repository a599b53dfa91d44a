//! DIMACS CNF, the bracketed signed-integer list format, and a JSON mirror.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Clause, CnfFormula, Dialect, FormulaError, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: literal {lit} out of range (declared {n_vars} variables)")]
    LiteralOutOfRange { line: usize, lit: i64, n_vars: u32 },
    #[error("line {line}: clause not terminated by 0")]
    MissingTerminator { line: usize },
    #[error("invalid formula: {0}")]
    Formula(#[from] FormulaError),
    #[error("json: {0}")]
    Json(String),
    #[error("quantifier prefix: {0}")]
    Prefix(String),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn dialect_of(clauses: &[Clause]) -> Dialect {
    if clauses.iter().any(Clause::has_repeated_var) {
        Dialect::Star
    } else {
        Dialect::Strict
    }
}

/// Parses DIMACS CNF. The dialect is `Star` exactly when some clause repeats
/// a variable.
pub fn read_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut open_line = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(syntax(line, "duplicate header"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(syntax(line, format!("malformed header `{trimmed}`")));
            }
            let n_vars = fields[2]
                .parse::<u32>()
                .map_err(|_| syntax(line, format!("bad variable count `{}`", fields[2])))?;
            let n_clauses = fields[3]
                .parse::<usize>()
                .map_err(|_| syntax(line, format!("bad clause count `{}`", fields[3])))?;
            header = Some((n_vars, n_clauses));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(syntax(line, "clause before `p cnf` header"));
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| syntax(line, format!("bad literal `{token}`")))?;
            if value == 0 {
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            if value.unsigned_abs() > u64::from(n_vars) {
                return Err(ParseError::LiteralOutOfRange {
                    line,
                    lit: value,
                    n_vars,
                });
            }
            if current.is_empty() {
                open_line = line;
            }
            current.push(Lit::from_dimacs(value as i32).expect("non-zero"));
        }
    }

    let Some((n_vars, n_clauses)) = header else {
        return Err(syntax(last_line.max(1), "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(ParseError::MissingTerminator { line: open_line });
    }
    if clauses.len() != n_clauses {
        return Err(syntax(
            last_line.max(1),
            format!(
                "header declares {n_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    let dialect = dialect_of(&clauses);
    Ok(CnfFormula::new(n_vars, clauses, dialect)?)
}

/// Clauses in stored order, one per line.
pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.n_vars(), formula.len());
    for clause in formula.clauses() {
        for lit in clause.lits() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Parses a nested bracketed list such as `[[1, 2], [-2, -3]]`. The variable
/// count is the largest absolute literal.
pub fn read_clause_list(text: &str) -> Result<CnfFormula, ParseError> {
    let mut depth = 0usize;
    let mut line = 1usize;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut token = String::new();
    let mut closed = false;

    let flush = |token: &mut String, current: &mut Vec<Lit>, line: usize| {
        if token.is_empty() {
            return Ok(());
        }
        let value: i32 = token
            .parse()
            .map_err(|_| syntax(line, format!("non-integer token `{token}`")))?;
        let lit = Lit::from_dimacs(value).ok_or_else(|| syntax(line, "zero literal"))?;
        current.push(lit);
        token.clear();
        Ok::<(), ParseError>(())
    };

    for ch in text.chars() {
        if closed {
            if ch == '\n' {
                line += 1;
            }
            if !ch.is_whitespace() {
                return Err(syntax(line, format!("trailing input `{ch}`")));
            }
            continue;
        }
        match ch {
            '[' => {
                depth += 1;
                if depth > 2 {
                    return Err(syntax(line, "nesting deeper than two levels"));
                }
            }
            ']' => {
                if depth == 0 {
                    return Err(syntax(line, "unbalanced `]`"));
                }
                flush(&mut token, &mut current, line)?;
                if depth == 2 {
                    clauses.push(Clause::new(std::mem::take(&mut current)));
                } else {
                    closed = true;
                }
                depth -= 1;
            }
            ',' => flush(&mut token, &mut current, line)?,
            c if c.is_whitespace() => {
                flush(&mut token, &mut current, line)?;
                if c == '\n' {
                    line += 1;
                }
            }
            c => {
                if depth != 2 {
                    return Err(syntax(line, format!("unexpected `{c}` outside a clause")));
                }
                token.push(c);
            }
        }
    }
    if !closed {
        return Err(syntax(line, "unterminated list"));
    }
    let n_vars = clauses
        .iter()
        .flat_map(|c| c.lits())
        .map(|l| l.var().id())
        .max()
        .unwrap_or(0);
    let dialect = dialect_of(&clauses);
    Ok(CnfFormula::new(n_vars, clauses, dialect)?)
}

/// The list format used for published clause sets: `[[1, 2], [-2, -3]]`.
pub fn write_clause_list(formula: &CnfFormula) -> String {
    let body: Vec<String> = formula
        .clauses()
        .iter()
        .map(|c| {
            let lits: Vec<String> = c.lits().iter().map(|l| l.to_dimacs().to_string()).collect();
            format!("[{}]", lits.join(", "))
        })
        .collect();
    format!("[{}]", body.join(", "))
}

/// JSON mirror of a formula for tooling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaJson {
    pub n_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    #[serde(default)]
    pub allows_duplicate_literals: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<std::collections::BTreeMap<u32, String>>,
}

impl From<&CnfFormula> for FormulaJson {
    fn from(f: &CnfFormula) -> Self {
        FormulaJson {
            n_vars: f.n_vars(),
            clauses: f.to_dimacs(),
            allows_duplicate_literals: f.allows_duplicate_literals(),
            symbols: f
                .symbols()
                .map(|s| s.iter().map(|(v, name)| (v.id(), name.clone())).collect()),
        }
    }
}

impl TryFrom<FormulaJson> for CnfFormula {
    type Error = ParseError;

    fn try_from(json: FormulaJson) -> Result<Self, Self::Error> {
        let mut clauses = Vec::with_capacity(json.clauses.len());
        for (i, c) in json.clauses.iter().enumerate() {
            if c.contains(&0) {
                return Err(ParseError::Json(format!("clause {i} contains literal 0")));
            }
            clauses.push(Clause::from_dimacs(c));
        }
        let dialect = if json.allows_duplicate_literals {
            Dialect::Star
        } else {
            Dialect::Strict
        };
        let mut f = CnfFormula::new(json.n_vars, clauses, dialect)?;
        if let Some(symbols) = json.symbols {
            f = f.with_symbols(
                symbols
                    .into_iter()
                    .filter(|&(v, _)| v > 0)
                    .map(|(v, name)| (super::Var::new(v), name))
                    .collect(),
            );
        }
        Ok(f)
    }
}

pub fn write_json(formula: &CnfFormula) -> String {
    serde_json::to_string_pretty(&FormulaJson::from(formula)).expect("plain data serializes")
}

pub fn read_json(text: &str) -> Result<CnfFormula, ParseError> {
    let json: FormulaJson =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    CnfFormula::try_from(json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_simple_dimacs() {
        let f = read_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.n_vars(), 2);
        assert_eq!(f.to_dimacs(), vec![vec![1, -2]]);
    }

    #[test]
    fn literal_out_of_range() {
        let err = read_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::LiteralOutOfRange {
                line: 2,
                lit: 2,
                n_vars: 1
            }
        );
    }

    #[test]
    fn missing_terminator_and_header() {
        assert_eq!(
            read_dimacs("p cnf 3 1\n1 2 3\n").unwrap_err(),
            ParseError::MissingTerminator { line: 2 }
        );
        assert!(matches!(
            read_dimacs("1 2 0\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            read_dimacs("p cnf x 1\n1 0\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn clause_may_span_lines() {
        let f = read_dimacs("c comment\np cnf 3 2\n1 2\n3 0 -1 0\n").unwrap();
        assert_eq!(f.to_dimacs(), vec![vec![1, 2, 3], vec![-1]]);
    }

    #[test]
    fn reads_clause_list() {
        let f = read_clause_list("[[1, 2], [-2, -3]]").unwrap();
        assert_eq!(f.n_vars(), 3);
        assert_eq!(f.to_dimacs(), vec![vec![1, 2], vec![-2, -3]]);
        assert_eq!(read_clause_list("[]").unwrap().len(), 0);
    }

    #[test]
    fn clause_list_errors() {
        assert!(read_clause_list("[[1, x]]").is_err());
        assert!(read_clause_list("[[1, 0]]").is_err());
        assert!(read_clause_list("[[1, 2]").is_err());
        assert!(read_clause_list("[[1]] [").is_err());
    }

    #[test]
    fn star_dialect_is_detected() {
        let f = read_clause_list("[[1, 1, 2]]").unwrap();
        assert!(f.allows_duplicate_literals());
        let g = read_dimacs(&write_dimacs(&f)).unwrap();
        assert_eq!(f, g);
    }

    fn arb_formula() -> impl Strategy<Value = CnfFormula> {
        (1u32..8).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            prop::collection::vec(prop::collection::vec(lit, 0..4), 0..8).prop_map(move |cs| {
                let clauses = cs.iter().map(|c| Clause::from_dimacs(c)).collect();
                CnfFormula::from_clauses(n, clauses).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn formats_round_trip(f in arb_formula()) {
            prop_assert_eq!(&read_dimacs(&write_dimacs(&f)).unwrap(), &f);
            prop_assert_eq!(&read_json(&write_json(&f)).unwrap(), &f);
            let listed = read_clause_list(&write_clause_list(&f)).unwrap();
            prop_assert_eq!(listed.to_dimacs(), f.to_dimacs());
        }

        #[test]
        fn canonicalize_is_idempotent(f in arb_formula()) {
            let once = f.canonicalize();
            prop_assert_eq!(once.canonicalize(), once);
        }
    }
}
