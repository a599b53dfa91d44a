use crate::formula::{read_dimacs, write_dimacs, ParseError, Var};

use super::Qbf2Formula;

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses QDIMACS restricted to one `a` block followed by one `e` block.
/// Either block may be missing; unquantified variables are an error.
pub fn read_qdimacs(text: &str) -> Result<Qbf2Formula, ParseError> {
    let mut universals = Vec::new();
    let mut existentials = Vec::new();
    let mut matrix_text = String::new();
    let mut seen_e = false;
    let mut seen_a = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        let kind = trimmed.chars().next();
        let target = match kind {
            Some('a') if !seen_a && !seen_e => {
                seen_a = true;
                &mut universals
            }
            Some('e') if !seen_e => {
                seen_e = true;
                &mut existentials
            }
            Some('a') | Some('e') => {
                return Err(syntax(
                    line,
                    "only one ∀ block followed by one ∃ block is supported",
                ))
            }
            _ => {
                matrix_text.push_str(raw);
                matrix_text.push('\n');
                continue;
            }
        };
        let mut terminated = false;
        for token in trimmed[1..].split_whitespace() {
            if terminated {
                return Err(syntax(line, "tokens after terminating 0"));
            }
            let value: u32 = token
                .parse()
                .map_err(|_| syntax(line, format!("bad prefix variable `{token}`")))?;
            if value == 0 {
                terminated = true;
            } else {
                target.push(Var::new(value));
            }
        }
        if !terminated {
            return Err(ParseError::MissingTerminator { line });
        }
        // Keep line numbers aligned for matrix errors.
        matrix_text.push_str("c\n");
    }
    let matrix = read_dimacs(&matrix_text)?;
    Qbf2Formula::new(universals, existentials, matrix)
        .map_err(|e| ParseError::Prefix(e.to_string()))
}

pub fn write_qdimacs(q: &Qbf2Formula) -> String {
    let dimacs = write_dimacs(q.matrix());
    let (header, body) = dimacs.split_once('\n').expect("header line");
    let block = |tag: char, vars: &[Var]| -> String {
        let ids: Vec<String> = vars.iter().map(|v| v.id().to_string()).collect();
        format!("{tag} {} 0\n", ids.join(" "))
    };
    let mut out = format!("{header}\n");
    if !q.universals().is_empty() {
        out.push_str(&block('a', q.universals()));
    }
    if !q.existentials().is_empty() {
        out.push_str(&block('e', q.existentials()));
    }
    out.push_str(body);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{q1mon, q3};

    #[test]
    fn roundtrip() {
        for q in [q3(), q1mon()] {
            let text = write_qdimacs(&q);
            assert_eq!(read_qdimacs(&text).unwrap(), q);
        }
    }

    #[test]
    fn writes_prefix_lines() {
        let text = write_qdimacs(&q3());
        let lines: Vec<&str> = text.lines().take(3).collect();
        assert_eq!(lines, vec!["p cnf 7 6", "a 1 2 3 4 5 0", "e 6 7 0"]);
    }

    #[test]
    fn rejects_alternation() {
        let text = "p cnf 3 1\ne 1 0\na 2 0\ne 3 0\n1 2 3 0\n";
        assert!(read_qdimacs(text).is_err());
    }

    #[test]
    fn rejects_free_variable() {
        let text = "p cnf 3 1\na 1 0\ne 2 0\n1 2 3 0\n";
        assert!(read_qdimacs(text).is_err());
    }

    #[test]
    fn matrix_errors_keep_line_numbers() {
        let text = "p cnf 2 1\na 1 0\ne 2 0\n1 x 0\n";
        assert!(matches!(
            read_qdimacs(text),
            Err(ParseError::Syntax { line: 4, .. })
        ));
    }
}
